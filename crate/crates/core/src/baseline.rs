//! Elimination-based reference syntheses.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Circuit, Cnot};

/// Row operation `row(target) ^= row(control)`.
type RowOp = (usize, usize);

/// Plain GF(2) Gaussian elimination.
///
/// Forward substitution to upper-triangular form, then backward elimination of
/// the entries above the diagonal. The pivot of each column is the lowest row
/// at or below the diagonal holding a 1; it clears the rows beneath it, and a
/// pivot off the diagonal is moved there with two row additions. Every row
/// operation is one CNOT.
pub fn gaussian_synthesis(m: &BitMatrix) -> Result<Circuit> {
    let n = m.dim();
    let mut a = m.clone();
    let mut ops: Vec<RowOp> = Vec::new();
    let mut record = |a: &mut BitMatrix, src: usize, dst: usize| {
        a.add_row(src, dst);
        ops.push((src, dst));
    };
    for col in 0..n {
        let p = (col..n)
            .find(|&r| a.get(r, col))
            .ok_or(Error::SingularMatrix)?;
        for r in p + 1..n {
            if a.get(r, col) {
                record(&mut a, p, r);
            }
        }
        if p != col {
            record(&mut a, p, col);
            record(&mut a, col, p);
        }
    }
    for col in (0..n).rev() {
        for r in 0..col {
            if a.get(r, col) {
                record(&mut a, col, r);
            }
        }
    }
    debug_assert!(a.is_identity());
    let gates = ops
        .into_iter()
        .rev()
        .map(|(c, t)| Cnot::new(c, t))
        .collect();
    Ok(Circuit::new(n, gates))
}

/// Section width used when none is given: `max(1, round(log₂(n) / 2))`.
pub fn default_section_size(n: usize) -> usize {
    ((n as f64).log2() / 2.0).round().max(1.0) as usize
}

/// Reduces `a` to upper-triangular form, eliminating duplicate sub-rows of each
/// column section before per-column elimination.
fn lower_pass(a: &mut BitMatrix, section: usize) -> Result<Vec<RowOp>> {
    let n = a.dim();
    let mut ops = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + section).min(n);
        let width = end - start;
        let mask = crate::gf2::matrix::row_mask(width) << start;

        let mut first_with: HashMap<u64, usize> = HashMap::new();
        for row in start..n {
            let pattern = a.row(row) & mask;
            if pattern == 0 {
                continue;
            }
            match first_with.get(&pattern) {
                Some(&src) => {
                    a.add_row(src, row);
                    ops.push((src, row));
                }
                None => {
                    first_with.insert(pattern, row);
                }
            }
        }

        for col in start..end {
            let mut diag_one = a.get(col, col);
            for row in col + 1..n {
                if a.get(row, col) {
                    if !diag_one {
                        a.add_row(row, col);
                        ops.push((row, col));
                        diag_one = true;
                    }
                    a.add_row(col, row);
                    ops.push((col, row));
                }
            }
            if !diag_one {
                return Err(Error::SingularMatrix);
            }
        }
        start = end;
    }
    Ok(ops)
}

/// Multi-column elimination in sections of `section_size` columns: a lower
/// pass, a second lower pass on the transpose of the result, and the two
/// operation lists stitched into one circuit.
pub fn algorithm1_synthesis(m: &BitMatrix, section_size: usize) -> Result<Circuit> {
    let n = m.dim();
    let section = section_size.clamp(1, n);
    let mut a = m.clone();
    let lower = lower_pass(&mut a, section)?;
    let mut t = a.transpose();
    let upper = lower_pass(&mut t, section)?;
    debug_assert!(t.is_identity());

    // m = L₁⋯L_p · U_qᵀ⋯U₁ᵀ, and the transpose of a row op swaps its lines.
    let gates = upper
        .iter()
        .map(|&(c, t)| Cnot::new(t, c))
        .chain(lower.iter().rev().map(|&(c, t)| Cnot::new(c, t)))
        .collect();
    Ok(Circuit::new(n, gates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::random_invertible;

    #[test]
    fn identity_needs_no_gates() {
        let i = BitMatrix::identity(6);
        assert!(gaussian_synthesis(&i).unwrap().is_empty());
        assert!(algorithm1_synthesis(&i, 2).unwrap().is_empty());
    }

    #[test]
    fn single_transvection() {
        for (c, t) in [(0, 3), (3, 0), (1, 2), (4, 1)] {
            let mut m = BitMatrix::identity(5);
            m.add_row(c, t);
            let circ = gaussian_synthesis(&m).unwrap();
            assert_eq!(circ.gates, vec![Cnot::new(c, t)]);
        }
    }

    #[test]
    fn singular_is_rejected() {
        let m = BitMatrix::from_rows(vec![0b011, 0b011, 0b100]).unwrap();
        assert_eq!(gaussian_synthesis(&m), Err(Error::SingularMatrix));
        assert_eq!(algorithm1_synthesis(&m, 2), Err(Error::SingularMatrix));
    }

    #[test]
    fn round_trips_and_width_one_matches_gaussian() {
        for n in [2, 3, 5, 8, 13, 21, 64] {
            for seed in 0..20 {
                let m = random_invertible(n, seed);
                let g = gaussian_synthesis(&m).unwrap();
                assert!(g.implements(&m));
                assert!(g.len() <= n * n);
                for s in 1..=4.min(n) {
                    let a = algorithm1_synthesis(&m, s).unwrap();
                    assert!(a.implements(&m), "n={n} seed={seed} section={s}");
                    if s == 1 {
                        assert_eq!(a.len(), g.len());
                    }
                }
            }
        }
    }

    #[test]
    fn default_sections() {
        assert_eq!(default_section_size(2), 1);
        assert_eq!(default_section_size(6), 1);
        assert_eq!(default_section_size(8), 2);
        assert_eq!(default_section_size(64), 3);
    }
}

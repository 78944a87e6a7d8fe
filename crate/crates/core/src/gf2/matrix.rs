use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{parse_err, Error, Result};
use crate::MAX_LINES;

/// Square matrix over GF(2), one packed `u64` per row.
///
/// Entry `(i, j)` is bit `j` of row `i` and gives the coefficient of input
/// `x_j` in output `y_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    rows: Vec<u64>,
}

#[inline]
pub(crate) fn row_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_LINES).contains(&n), "line count {n} out of range");
        Self {
            n,
            rows: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for (i, r) in m.rows.iter_mut().enumerate() {
            *r = 1 << i;
        }
        m
    }

    /// Builds a matrix from packed rows, rejecting bits outside the first `n` columns.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_LINES {
            return Err(Error::DimensionTooLarge(n));
        }
        let mask = row_mask(n);
        if let Some(i) = rows.iter().position(|r| r & !mask != 0) {
            return Err(parse_err(i + 2, "row has bits beyond the matrix width"));
        }
        Ok(Self { n, rows })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.rows[i] |= 1 << j;
                }
            }
        }
        m
    }

    /// Permutation matrix whose row `i` has its single 1 in column `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut rows = vec![0u64; n];
        let mut seen = 0u64;
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || seen & (1 << p) != 0 {
                return Err(parse_err(1, format!("not a permutation of 0..{n}")));
            }
            seen |= 1 << p;
            rows[i] = 1 << p;
        }
        Self::from_rows(rows)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// `row(dst) ^= row(src)`
    #[inline]
    pub fn add_row(&mut self, src: usize, dst: usize) {
        let r = self.rows[src];
        self.rows[dst] ^= r;
    }

    /// `column(dst) ^= column(src)`
    #[inline]
    pub fn add_col(&mut self, src: usize, dst: usize) {
        for r in self.rows.iter_mut() {
            *r ^= ((*r >> src) & 1) << dst;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (((r >> j) & 1) << i))
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.n).map(|j| self.column(j)).collect();
        Self { n: self.n, rows }
    }

    pub fn count_ones(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// Number of entries that differ from the identity.
    pub fn distance_from_identity(&self) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r ^ (1 << i)).count_ones())
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    pub fn is_permutation(&self) -> bool {
        let mut cols = 0u64;
        for &r in &self.rows {
            if r.count_ones() != 1 || cols & r != 0 {
                return false;
            }
            cols |= r;
        }
        true
    }

    /// For a permutation matrix, the column holding the 1 of each row.
    pub fn permutation_columns(&self) -> Option<Vec<usize>> {
        if !self.is_permutation() {
            return None;
        }
        Some(
            self.rows
                .iter()
                .map(|r| r.trailing_zeros() as usize)
                .collect(),
        )
    }

    /// Product `self · rhs` over GF(2).
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rhs.n,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|&a| {
                let mut acc = 0u64;
                let mut bits = a;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        Ok(BitMatrix { n: self.n, rows })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let bit = 1u64 << col;
            let Some(p) = (rank..self.n).find(|&r| rows[r] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// Gauss-Jordan inverse over GF(2).
    pub fn inverse(&self) -> Result<BitMatrix> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let bit = 1u64 << col;
            let p = (col..n)
                .find(|&r| a[r] & bit != 0)
                .ok_or(Error::SingularMatrix)?;
            a.swap(col, p);
            inv.swap(col, p);
            let (pa, pi) = (a[col], inv[col]);
            for r in 0..n {
                if r != col && a[r] & bit != 0 {
                    a[r] ^= pa;
                    inv[r] ^= pi;
                }
            }
        }
        Ok(BitMatrix { n, rows: inv })
    }

    /// Parses the matrix text format: `n`, then `n` lines of `n` characters from `{0,1}`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| parse_err(1, format!("expected line count, found {:?}", first.trim())))?;
        if n == 0 || n > MAX_LINES {
            return Err(Error::DimensionTooLarge(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (idx, raw) in lines {
            let line_no = idx + 1;
            if rows.len() == n {
                return Err(parse_err(line_no, "more rows than the declared line count"));
            }
            let line = raw.trim_end();
            if line.chars().count() != n {
                return Err(parse_err(
                    line_no,
                    format!("expected {n} characters, found {}", line.chars().count()),
                ));
            }
            let mut row = 0u64;
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => row |= 1 << j,
                    other => {
                        return Err(parse_err(
                            line_no,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(parse_err(
                text.lines().count(),
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }
        Ok(Self { n, rows })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Settings for the random instance generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// Probability that an operation is a CNOT row-add rather than a row swap.
    pub cnot_probability: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            cnot_probability: 0.5,
        }
    }
}

/// Random element of GL(n,2) built by `2n²` random CNOT/SWAP operations on `I`.
pub fn random_invertible(n: usize, seed: u64) -> BitMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_invertible_with(n, &mut rng, &GeneratorConfig::default())
}

pub fn random_invertible_with<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    config: &GeneratorConfig,
) -> BitMatrix {
    let mut m = BitMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n * n {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        if rng.gen_bool(config.cnot_probability) {
            m.add_row(a, b);
        } else {
            m.swap_rows(a, b);
        }
    }
    m
}

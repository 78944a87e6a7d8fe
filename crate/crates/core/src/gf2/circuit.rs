use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::gf2::gate::Cnot;
use crate::gf2::matrix::BitMatrix;

/// A CNOT circuit in input→output order, with an optional relabelling of the
/// output lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    n: usize,
    pub gates: Vec<Cnot>,
    /// `permutation[i] = k` means replayed line `i` carries output `y_k`.
    pub permutation: Option<Vec<usize>>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Cnot>) -> Self {
        Self {
            n,
            gates,
            permutation: None,
        }
    }

    pub fn with_permutation(n: usize, gates: Vec<Cnot>, permutation: Vec<usize>) -> Self {
        let identity = permutation.iter().enumerate().all(|(i, &p)| i == p);
        Self {
            n,
            gates,
            permutation: (!identity).then_some(permutation),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn lines(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Matrix computed by the gates alone, before any output relabelling.
    pub fn gate_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::identity(self.n);
        for g in &self.gates {
            m.add_row(g.control, g.target);
        }
        m
    }

    /// Replays the gates on `I`, then routes replayed row `i` to output row `permutation[i]`.
    pub fn to_matrix(&self) -> BitMatrix {
        let replay = self.gate_matrix();
        match &self.permutation {
            None => replay,
            Some(p) => {
                let mut rows = vec![0u64; self.n];
                for (i, &k) in p.iter().enumerate() {
                    rows[k] = replay.row(i);
                }
                BitMatrix::from_rows(rows).expect("permutation preserves shape")
            }
        }
    }

    /// Whether the circuit realises `spec`.
    pub fn implements(&self, spec: &BitMatrix) -> bool {
        spec.dim() == self.n && self.to_matrix() == *spec
    }

    /// Reverses gate order; realises the inverse matrix when there is no permutation.
    pub fn inverse(&self) -> Circuit {
        debug_assert!(self.permutation.is_none());
        Circuit::new(self.n, self.gates.iter().rev().copied().collect())
    }

    /// Serialises to the circuit text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(p) = &self.permutation {
            s.push_str("perm");
            for v in p {
                write!(s, " {v}").unwrap();
            }
            s.push('\n');
        }
        for g in &self.gates {
            writeln!(s, "{g}").unwrap();
        }
        s
    }

    /// Parses the circuit text format for an `n`-line circuit.
    pub fn parse(text: &str, n: usize) -> Result<Circuit> {
        let mut gates = Vec::new();
        let mut permutation = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next() {
                Some("perm") => {
                    if permutation.is_some() || !gates.is_empty() {
                        return Err(parse_err(line_no, "perm must be the first line"));
                    }
                    let p = words
                        .map(|w| w.parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| parse_err(line_no, e.to_string()))?;
                    if p.len() != n || BitMatrix::permutation(&p).is_err() {
                        return Err(parse_err(line_no, format!("not a permutation of 0..{n}")));
                    }
                    permutation = Some(p);
                }
                Some("cnot") => {
                    let args: Vec<&str> = words.collect();
                    if args.len() != 2 {
                        return Err(parse_err(line_no, "expected `cnot <control> <target>`"));
                    }
                    let parse = |w: &str| {
                        w.parse::<usize>()
                            .map_err(|e| parse_err(line_no, format!("{w:?}: {e}")))
                    };
                    let g = Cnot::new(parse(args[0])?, parse(args[1])?);
                    g.validate(n).map_err(|e| match e {
                        Error::InvalidGate { .. } => parse_err(line_no, e.to_string()),
                        other => other,
                    })?;
                    gates.push(g);
                }
                Some(other) => {
                    return Err(parse_err(line_no, format!("unknown directive {other:?}")))
                }
                None => unreachable!(),
            }
        }
        Ok(match permutation {
            Some(p) => Circuit::with_permutation(n, gates, p),
            None => Circuit::new(n, gates),
        })
    }
}

/// Replays `c` on the identity and applies its output permutation.
pub fn circuit_to_matrix(c: &Circuit) -> BitMatrix {
    c.to_matrix()
}

/// First entry `(row, column)` where the circuit's matrix disagrees with `spec`.
pub fn first_mismatch(c: &Circuit, spec: &BitMatrix) -> Option<(usize, usize)> {
    let got = c.to_matrix();
    (0..spec.dim())
        .flat_map(|i| (0..spec.dim()).map(move |j| (i, j)))
        .find(|&(i, j)| got.get(i, j) != spec.get(i, j))
}

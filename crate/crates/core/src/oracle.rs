//! Exact minimum CNOT counts for small line counts.
//!
//! The table is a breadth-first search over GL(n,2) from the identity, with
//! the `n(n-1)` row transvections as generators. Matrices are keyed by their
//! row-major `n²`-bit code and distances stored densely, one byte per code.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Circuit, Cnot};

pub const MAX_TABLE_LINES: usize = 5;
const UNREACHED: u8 = u8::MAX;
const MAGIC: &[u8; 8] = b"CNOTDIST";

/// Row-major bit code of a matrix with at most five lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixCode(pub u32);

impl MatrixCode {
    pub fn encode(m: &BitMatrix) -> Self {
        let n = m.dim();
        assert!(n <= MAX_TABLE_LINES, "only matrices up to 5×5 have a code");
        let code = (0..n).fold(0u32, |acc, i| acc | ((m.row(i) as u32) << (i * n)));
        Self(code)
    }

    pub fn decode(self, n: usize) -> BitMatrix {
        let mask = (1u32 << n) - 1;
        let rows = (0..n)
            .map(|i| ((self.0 >> (i * n)) & mask) as u64)
            .collect();
        BitMatrix::from_rows(rows).expect("code fits the dimension")
    }

    /// Code after `row(target) ^= row(control)`.
    #[inline]
    pub fn row_op(self, control: usize, target: usize, n: usize) -> Self {
        let mask = (1u32 << n) - 1;
        Self(self.0 ^ (((self.0 >> (control * n)) & mask) << (target * n)))
    }
}

/// Minimal CNOT count for every element of GL(n,2).
#[derive(Clone)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u8>,
}

impl std::fmt::Debug for DistanceTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistanceTable")
            .field("n", &self.n)
            .field("entries", &self.len())
            .finish()
    }
}

fn generators(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|c| (0..n).filter(move |&t| t != c).map(move |t| (c, t)))
        .collect()
}

/// Breadth-first search over GL(n,2) from `I`.
pub fn build_distance_table(n: usize) -> Result<DistanceTable> {
    if !(1..=MAX_TABLE_LINES).contains(&n) {
        return Err(Error::DimensionTooLarge(n));
    }
    let mut dist = vec![UNREACHED; 1usize << (n * n)];
    let start = MatrixCode::encode(&BitMatrix::identity(n));
    dist[start.0 as usize] = 0;
    let gens = generators(n);
    let mut frontier = vec![start];
    let mut depth = 0u8;
    while !frontier.is_empty() {
        depth += 1;
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &code in &frontier {
            for &(c, t) in &gens {
                let nb = code.row_op(c, t, n);
                let slot = &mut dist[nb.0 as usize];
                if *slot == UNREACHED {
                    *slot = depth;
                    next.push(nb);
                }
            }
        }
        frontier = next;
    }
    Ok(DistanceTable { n, dist })
}

impl DistanceTable {
    pub fn lines(&self) -> usize {
        self.n
    }

    /// Number of invertible matrices recorded.
    pub fn len(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distance for a code, `None` if the code is not an invertible matrix.
    #[inline]
    pub fn distance(&self, code: MatrixCode) -> Option<u8> {
        match self.dist.get(code.0 as usize) {
            Some(&d) if d != UNREACHED => Some(d),
            _ => None,
        }
    }

    /// Count of matrices at each distance, index = CNOT count.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h: Vec<u64> = Vec::new();
        for &d in &self.dist {
            if d == UNREACHED {
                continue;
            }
            let d = d as usize;
            if h.len() <= d {
                h.resize(d + 1, 0);
            }
            h[d] += 1;
        }
        h
    }

    /// Iterates `(code, distance)` over the invertible matrices.
    pub fn entries(&self) -> impl Iterator<Item = (MatrixCode, u8)> + '_ {
        self.dist
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != UNREACHED)
            .map(|(c, &d)| (MatrixCode(c as u32), d))
    }

    /// Writes the little-endian table file: magic, `n` (u32), entry width (u32), entries.
    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&self.dist)
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let bad = |msg: &str| Error::BadTable(msg.to_string());
        let mut header = [0u8; 16];
        r.read_exact(&mut header)
            .map_err(|_| bad("truncated header"))?;
        if &header[..8] != MAGIC {
            return Err(bad("wrong magic"));
        }
        let n = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let width = u32::from_le_bytes(header[12..16].try_into().unwrap());
        if !(1..=MAX_TABLE_LINES).contains(&n) || width != 1 {
            return Err(bad("unsupported dimension or entry width"));
        }
        let mut dist = Vec::with_capacity(1 << (n * n));
        r.read_to_end(&mut dist)
            .map_err(|e| Error::BadTable(e.to_string()))?;
        if dist.len() != 1 << (n * n) {
            return Err(bad("wrong entry count"));
        }
        Ok(Self { n, dist })
    }

    pub fn save(&self, path: &Path) -> io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::BadTable(e.to_string()))?;
        Self::read_from(&mut BufReader::new(f))
    }

    /// Loads `dir/dist_n{n}.bin` if present, otherwise builds it and tries to cache it there.
    pub fn load_or_build(n: usize, dir: Option<&Path>) -> Result<Self> {
        if let Some(dir) = dir {
            let path = dir.join(format!("dist_n{n}.bin"));
            if let Ok(t) = Self::load(&path) {
                if t.n == n {
                    return Ok(t);
                }
            }
            let t = build_distance_table(n)?;
            let _ = std::fs::create_dir_all(dir).and_then(|_| t.save(&path));
            return Ok(t);
        }
        build_distance_table(n)
    }

    /// Greedy descent from `code` using only generators on lines `< live`.
    /// Gates come out in input→output order.
    fn descend(&self, code: MatrixCode, live: usize) -> Option<Vec<Cnot>> {
        let n = self.n;
        let mut cur = code;
        let mut d = self.distance(cur)?;
        let mut peeled = Vec::with_capacity(d as usize);
        while d > 0 {
            let (c, t, next) = (0..live)
                .flat_map(|c| (0..live).filter(move |&t| t != c).map(move |t| (c, t)))
                .map(|(c, t)| (c, t, cur.row_op(c, t, n)))
                .find(|&(_, _, nb)| self.distance(nb) == Some(d - 1))?;
            peeled.push(Cnot::new(c, t));
            cur = next;
            d -= 1;
        }
        // cur = I = E_k⋯E₁·M, so M = E₁⋯E_k and E_k is applied first.
        peeled.reverse();
        Some(peeled)
    }

    fn check_dim(&self, m: &BitMatrix) -> Result<()> {
        if m.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.dim(),
            });
        }
        Ok(())
    }
}

/// Minimal CNOT count for `m`.
pub fn exact_min_count(m: &BitMatrix, table: &DistanceTable) -> Result<u32> {
    table.check_dim(m)?;
    table
        .distance(MatrixCode::encode(m))
        .map(u32::from)
        .ok_or(Error::SingularMatrix)
}

/// A minimal-length circuit for `m`.
pub fn exact_min_circuit(m: &BitMatrix, table: &DistanceTable) -> Result<Circuit> {
    table.check_dim(m)?;
    let gates = table
        .descend(MatrixCode::encode(m), table.n)
        .ok_or(Error::SingularMatrix)?;
    Ok(Circuit::new(m.dim(), gates))
}

/// Minimal circuit for the function a gate run computes on its own lines.
///
/// The run's lines are renumbered `0..k` and embedded in the table's line
/// count; only generators on the run's own lines are used, so `None` means
/// no such minimal word was found and the run should be kept as is.
fn resynthesize_run(run: &[Cnot], table: &DistanceTable) -> Option<Vec<Cnot>> {
    let lines: Vec<usize> = run
        .iter()
        .flat_map(|g| [g.control, g.target])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let local = |l: usize| lines.binary_search(&l).unwrap();
    let mut m = BitMatrix::identity(table.n);
    for g in run {
        m.add_row(local(g.control), local(g.target));
    }
    let d = table.distance(MatrixCode::encode(&m))? as usize;
    if d >= run.len() {
        return None;
    }
    let gates = table.descend(MatrixCode::encode(&m), lines.len())?;
    Some(
        gates
            .into_iter()
            .map(|g| Cnot::new(lines[g.control], lines[g.target]))
            .collect(),
    )
}

/// Replaces maximal consecutive runs on at most `table.lines()` lines with
/// exact minimal circuits, repeating until no run gets shorter.
pub fn peephole_optimize(c: &Circuit, table: &DistanceTable) -> Circuit {
    let width = table.n;
    let mut gates = c.gates.clone();
    loop {
        let mut out = Vec::with_capacity(gates.len());
        let mut improved = false;
        let mut i = 0;
        while i < gates.len() {
            let mut lines = BTreeSet::new();
            let mut j = i;
            while j < gates.len() {
                let g = gates[j];
                let extra = [g.control, g.target]
                    .iter()
                    .filter(|l| !lines.contains(*l))
                    .count();
                if lines.len() + extra > width {
                    break;
                }
                lines.insert(g.control);
                lines.insert(g.target);
                j += 1;
            }
            let run = &gates[i..j];
            match resynthesize_run(run, table) {
                Some(shorter) => {
                    out.extend(shorter);
                    improved = true;
                }
                None => out.extend_from_slice(run),
            }
            i = j;
        }
        gates = out;
        if !improved {
            break;
        }
    }
    let mut out = c.clone();
    out.gates = gates;
    out
}

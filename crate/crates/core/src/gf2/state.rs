use crate::error::{Error, Result};
use crate::gf2::circuit::Circuit;
use crate::gf2::gate::{CnotGate, Side};
use crate::gf2::matrix::BitMatrix;

/// Which heuristic drives a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// Entries of `M` and `M⁻¹` differing from `I`. Zero only at the identity.
    #[default]
    Identity,
    /// Ones in `M` and `M⁻¹` minus `2n`. Zero exactly on permutation matrices.
    Sparse,
}

/// Entries of `m` differing from `I` plus entries of `mi` differing from `I`.
pub fn cost_eq1(m: &BitMatrix, mi: &BitMatrix) -> u32 {
    m.distance_from_identity() + mi.distance_from_identity()
}

/// Ones in `m` plus ones in `mi`, minus `2n`.
pub fn cost_eq2(m: &BitMatrix, mi: &BitMatrix) -> u32 {
    m.count_ones() + mi.count_ones() - 2 * m.dim() as u32
}

/// Remainder of a bidirectional synthesis: the matrix still to be realised,
/// its inverse, and the gates peeled off each end so far.
///
/// Transposed copies of both matrices are kept alongside so that every gate
/// touches whole rows, and the cost change of a candidate gate is a handful
/// of popcounts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthState {
    m: BitMatrix,
    mi: BitMatrix,
    mt: BitMatrix,
    mit: BitMatrix,
    pub input_gates: Vec<CnotGate>,
    pub output_gates: Vec<CnotGate>,
    cost: u32,
    sparse: u32,
}

impl SynthState {
    pub fn new(m: BitMatrix) -> Result<Self> {
        let mi = m.inverse()?;
        Ok(Self::from_parts(m, mi))
    }

    /// Builds a state from a matrix and a claimed inverse, checking the claim.
    pub fn with_inverse(m: BitMatrix, mi: BitMatrix) -> Result<Self> {
        if !m.mul(&mi)?.is_identity() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::from_parts(m, mi))
    }

    fn from_parts(m: BitMatrix, mi: BitMatrix) -> Self {
        let cost = cost_eq1(&m, &mi);
        let sparse = cost_eq2(&m, &mi);
        Self {
            mt: m.transpose(),
            mit: mi.transpose(),
            m,
            mi,
            input_gates: Vec::new(),
            output_gates: Vec::new(),
            cost,
            sparse,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn m(&self) -> &BitMatrix {
        &self.m
    }

    pub fn mi(&self) -> &BitMatrix {
        &self.mi
    }

    /// Column `j` of the remainder, packed like a row.
    #[inline]
    pub fn m_column(&self, j: usize) -> u64 {
        self.mt.row(j)
    }

    /// Row `i` and column `i` of the remainder are both the unit vector `e_i`.
    #[inline]
    pub fn diagonal_solved(&self, i: usize) -> bool {
        self.m.row(i) == 1 << i && self.mt.row(i) == 1 << i
    }

    /// Current value of the identity-distance cost.
    #[inline]
    pub fn cost(&self) -> u32 {
        self.cost
    }

    /// Current value of the sparseness cost.
    #[inline]
    pub fn sparse_cost(&self) -> u32 {
        self.sparse
    }

    #[inline]
    pub fn cost_of(&self, model: CostModel) -> u32 {
        match model {
            CostModel::Identity => self.cost,
            CostModel::Sparse => self.sparse,
        }
    }

    pub fn gate_count(&self) -> usize {
        self.input_gates.len() + self.output_gates.len()
    }

    /// Change in both costs (after minus before) if `g` were applied.
    #[inline]
    fn deltas(&self, g: CnotGate) -> (i32, i32) {
        let (c, t) = (g.control, g.target);
        let pc = |x: u64| x.count_ones() as i32;
        // (row being changed, row added into it, its diagonal bit) for the
        // primal and inverse matrices, each in the orientation that makes the
        // update a row operation.
        let (a_dst, a_src, a_diag, b_dst, b_src, b_diag) = match g.side {
            Side::Output => (
                self.m.row(t),
                self.m.row(c),
                1u64 << t,
                self.mit.row(c),
                self.mit.row(t),
                1u64 << c,
            ),
            Side::Input => (
                self.mt.row(c),
                self.mt.row(t),
                1u64 << c,
                self.mi.row(t),
                self.mi.row(c),
                1u64 << t,
            ),
        };
        let a_new = a_dst ^ a_src;
        let b_new = b_dst ^ b_src;
        let d1 = pc(a_new ^ a_diag) - pc(a_dst ^ a_diag) + pc(b_new ^ b_diag) - pc(b_dst ^ b_diag);
        let d2 = pc(a_new) - pc(a_dst) + pc(b_new) - pc(b_dst);
        (d1, d2)
    }

    /// Cost change (after minus before) under `model` if `g` were applied.
    #[inline]
    pub fn delta(&self, g: CnotGate, model: CostModel) -> i32 {
        let (d1, d2) = self.deltas(g);
        match model {
            CostModel::Identity => d1,
            CostModel::Sparse => d2,
        }
    }

    /// Calls `f(index, delta)` for every gate of [`enumerate_gates`] in order.
    ///
    /// Same values as [`SynthState::delta`], with the unchanged-row terms
    /// computed once per sweep instead of once per gate.
    ///
    /// [`enumerate_gates`]: crate::gf2::enumerate_gates
    pub(crate) fn for_each_delta(&self, model: CostModel, mut f: impl FnMut(usize, i32)) {
        let n = self.dim();
        let diag = |i: usize| match model {
            CostModel::Identity => 1u64 << i,
            CostModel::Sparse => 0,
        };
        let pc = |x: u64| x.count_ones() as i32;
        let mut idx = 0;
        // A gate adds row y into row x of `a` and row x into row y of `b`:
        // output (c, t) has x = t, y = c; input (c, t) has x = c, y = t.
        for (a, b, x_outer) in [(&self.m, &self.mit, true), (&self.mt, &self.mi, false)] {
            let mut before_a = [0i32; 64];
            let mut before_b = [0i32; 64];
            for i in 0..n {
                before_a[i] = pc(a.row(i) ^ diag(i));
                before_b[i] = pc(b.row(i) ^ diag(i));
            }
            let (ar, br) = (a.rows(), b.rows());
            for outer in 0..n {
                for inner in 0..n {
                    if inner == outer {
                        continue;
                    }
                    let (x, y) = if x_outer {
                        (outer, inner)
                    } else {
                        (inner, outer)
                    };
                    let d = pc(ar[x] ^ ar[y] ^ diag(x)) - before_a[x] + pc(br[y] ^ br[x] ^ diag(y))
                        - before_b[y];
                    f(idx, d);
                    idx += 1;
                }
            }
        }
    }

    /// Drop in identity-distance cost from applying `g`; the state is unchanged.
    #[inline]
    pub fn improvement(&self, g: CnotGate) -> i32 {
        -self.deltas(g).0
    }

    /// Applies `g` to the remainder and its inverse without recording it.
    pub fn apply(&mut self, g: CnotGate) {
        let (d1, d2) = self.deltas(g);
        let (c, t) = (g.control, g.target);
        match g.side {
            Side::Output => {
                self.m.add_row(c, t);
                self.mt.add_col(c, t);
                self.mi.add_col(t, c);
                self.mit.add_row(t, c);
            }
            Side::Input => {
                self.m.add_col(t, c);
                self.mt.add_row(t, c);
                self.mi.add_row(c, t);
                self.mit.add_col(c, t);
            }
        }
        self.cost = (self.cost as i32 + d1) as u32;
        self.sparse = (self.sparse as i32 + d2) as u32;
    }

    /// Applies `g` and appends it to its side's gate list.
    pub fn commit(&mut self, g: CnotGate) {
        self.apply(g);
        self.gates_mut(g.side).push(g);
    }

    /// Applies `g` and records it, erasing an earlier identical gate when the
    /// two cancel. Returns whether a cancellation happened.
    pub fn commit_cancelling(&mut self, g: CnotGate) -> bool {
        self.apply(g);
        crate::gf2::gate::cancel_redundant(self.gates_mut(g.side), g)
    }

    fn gates_mut(&mut self, side: Side) -> &mut Vec<CnotGate> {
        match side {
            Side::Output => &mut self.output_gates,
            Side::Input => &mut self.input_gates,
        }
    }

    /// Full consistency check of the cached transposes, the inverse and both costs.
    pub fn is_consistent(&self) -> bool {
        self.mt == self.m.transpose()
            && self.mit == self.mi.transpose()
            && self
                .m
                .mul(&self.mi)
                .map(|p| p.is_identity())
                .unwrap_or(false)
            && self.cost == cost_eq1(&self.m, &self.mi)
            && self.sparse == cost_eq2(&self.m, &self.mi)
    }

    /// Input→output gate list: input gates in order, then output gates reversed.
    pub fn ordered_gates(&self) -> Vec<CnotGate> {
        self.input_gates
            .iter()
            .chain(self.output_gates.iter().rev())
            .copied()
            .collect()
    }

    /// Circuit for a fully reduced state (remainder = I).
    pub fn into_circuit(self) -> Circuit {
        debug_assert!(self.m.is_identity(), "remainder is not the identity");
        let n = self.dim();
        Circuit::new(n, self.ordered_gates().iter().map(|g| g.cnot()).collect())
    }

    /// Circuit for a state whose remainder is a permutation matrix `R`.
    ///
    /// Since `O·R = R·(R⁻¹·O·R)`, each output-side gate is moved past the
    /// permutation by relabelling its lines through `R`, and `R` itself becomes
    /// the circuit's output permutation.
    pub fn into_permuted_circuit(self) -> Option<Circuit> {
        let q = self.m.permutation_columns()?;
        let n = self.dim();
        let mut gates: Vec<_> = self.input_gates.iter().map(|g| g.cnot()).collect();
        gates.extend(
            self.output_gates
                .iter()
                .rev()
                .map(|g| crate::gf2::gate::Cnot::new(q[g.control], q[g.target])),
        );
        // line i of the replayed circuit carries output y_{perm[i]}
        let mut perm = vec![0usize; n];
        for (row, &col) in q.iter().enumerate() {
            perm[col] = row;
        }
        Some(Circuit::with_permutation(n, gates, perm))
    }
}

/// Applies `g` to the state in place.
pub fn apply_cnot(g: CnotGate, state: &mut SynthState) {
    state.apply(g);
}

/// `cost_eq1(before) - cost_eq1(after)` for applying `g`; the state is not modified.
pub fn improvement_from_cnot(state: &SynthState, g: CnotGate) -> i32 {
    state.improvement(g)
}

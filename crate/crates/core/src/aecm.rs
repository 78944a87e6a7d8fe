//! Alternating elimination with cost minimization.
//!
//! Each outer step diagonalizes every unsolved line on a copy of the
//! remainder and keeps the copy with the best cost drop per added gate.

use std::cmp::Ordering;

use crate::error::Result;
use crate::gf2::{BitMatrix, Circuit, CnotGate, SynthState};
use crate::tiebreak::{Best, Chooser, TieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AecmConfig {
    /// Minimum improvement for a preprocessing gate to be committed.
    pub stage1_min_improvement: i32,
    pub tie_break: TieBreak,
}

impl Default for AecmConfig {
    fn default() -> Self {
        Self {
            stage1_min_improvement: 2,
            tie_break: TieBreak::Deterministic,
        }
    }
}

/// Exact cost-drop-per-gate ratio.
///
/// A non-positive gate count is ordered above every finite gain when the cost
/// dropped and below every finite gain otherwise.
#[derive(Debug, Clone, Copy)]
pub struct Gain {
    pub drop: i64,
    pub gates: i64,
}

impl Gain {
    pub fn new(drop: i64, gates: i64) -> Self {
        Self { drop, gates }
    }

    fn class(&self) -> i8 {
        match (self.gates > 0, self.drop > 0) {
            (true, _) => 0,
            (false, true) => 1,
            (false, false) => -1,
        }
    }
}

impl PartialEq for Gain {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Gain {}

impl PartialOrd for Gain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gain {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.class(), other.class()) {
            (0, 0) => (self.drop * other.gates).cmp(&(other.drop * self.gates)),
            (a, b) if a == b => Ordering::Equal,
            (a, b) => a.cmp(&b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiagonalizeOutcome {
    pub state: SynthState,
    pub gates_added: i64,
    pub cost_after: u32,
    pub gain: Gain,
}

/// Row `i` and column `i` of `m` are both `e_i`.
pub fn diagonal_solved(m: &BitMatrix, i: usize) -> bool {
    m.row(i) == 1 << i && m.column(i) == 1 << i
}

/// Solves row and column `diagonal` of the remainder in four stages, stopping
/// as soon as the cost falls to `threshold` or below:
///
/// 1. greedy forward substitutions into the diagonal that improve the cost by
///    at least `stage1_min_improvement`;
/// 2. if the diagonal entry is still 0, the best single forward substitution
///    (cancelling against an identical earlier gate when possible);
/// 3. for each remaining 1 in the column, the best row elimination;
/// 4. for each remaining 1 in the row, the best column elimination.
pub(crate) fn diagonalize_in_place(
    s: &mut SynthState,
    threshold: u32,
    d: usize,
    stage1_min: i32,
    chooser: &mut Chooser,
) {
    let n = s.dim();

    for i in (0..n).filter(|&i| i != d) {
        for g in [CnotGate::output(i, d), CnotGate::input(d, i)] {
            if s.improvement(g) >= stage1_min {
                s.commit(g);
                if s.cost() <= threshold {
                    return;
                }
            }
        }
    }

    if !s.m().get(d, d) {
        let mut best = Best::new();
        for i in (0..n).filter(|&i| i != d) {
            if s.m().get(i, d) {
                let g = CnotGate::output(i, d);
                best.offer(g, s.improvement(g), chooser);
            }
            if s.m().get(d, i) {
                let g = CnotGate::input(d, i);
                best.offer(g, s.improvement(g), chooser);
            }
        }
        let (g, _) = best
            .item
            .expect("an invertible remainder has a pivot candidate");
        s.commit_cancelling(g);
        if s.cost() <= threshold {
            return;
        }
    }

    for i in 0..n {
        if i == d || !s.m().get(i, d) {
            continue;
        }
        let mut best = Best::new();
        let g = CnotGate::output(d, i);
        best.offer(g, s.improvement(g), chooser);
        for j in (i + 1..n).filter(|&j| j != d && s.m().get(j, d)) {
            let g = CnotGate::output(j, i);
            best.offer(g, s.improvement(g), chooser);
        }
        s.commit(best.item.unwrap().0);
        if s.cost() <= threshold {
            return;
        }
    }

    for i in 0..n {
        if i == d || !s.m().get(d, i) {
            continue;
        }
        let mut best = Best::new();
        let g = CnotGate::input(i, d);
        best.offer(g, s.improvement(g), chooser);
        for j in (i + 1..n).filter(|&j| j != d && s.m().get(d, j)) {
            let g = CnotGate::input(i, j);
            best.offer(g, s.improvement(g), chooser);
        }
        s.commit(best.item.unwrap().0);
        if s.cost() <= threshold {
            return;
        }
    }
}

/// Diagonalizes line `diagonal` on a copy of `state`.
pub fn diagonalize(
    state: &SynthState,
    threshold: u32,
    diagonal: usize,
    config: &AecmConfig,
    chooser: &mut Chooser,
) -> DiagonalizeOutcome {
    let mut next = state.clone();
    diagonalize_in_place(
        &mut next,
        threshold,
        diagonal,
        config.stage1_min_improvement,
        chooser,
    );
    debug_assert!(next.is_consistent(), "remainder and inverse desynchronized");
    let gates_added = next.gate_count() as i64 - state.gate_count() as i64;
    let cost_after = next.cost();
    DiagonalizeOutcome {
        gain: Gain::new(state.cost() as i64 - cost_after as i64, gates_added),
        state: next,
        gates_added,
        cost_after,
    }
}

/// One outer step: evaluates every unsolved diagonal and commits the one with
/// the largest gain. Returns the index of the committed diagonal, or `None`
/// when every diagonal is already solved.
pub fn aecm_step(
    state: &mut SynthState,
    threshold: u32,
    config: &AecmConfig,
    chooser: &mut Chooser,
) -> Option<usize> {
    let mut best: Option<(usize, DiagonalizeOutcome)> = None;
    let mut ties = 0u32;
    for i in 0..state.dim() {
        if state.diagonal_solved(i) {
            continue;
        }
        let outcome = diagonalize(state, threshold, i, config, chooser);
        match &best {
            Some((_, b)) => match outcome.gain.cmp(&b.gain) {
                Ordering::Greater => {
                    best = Some((i, outcome));
                    ties = 1;
                }
                Ordering::Equal => {
                    ties += 1;
                    if chooser.replace_on_tie(ties) {
                        best = Some((i, outcome));
                    }
                }
                Ordering::Less => {}
            },
            None => {
                best = Some((i, outcome));
                ties = 1;
            }
        }
    }
    let (i, outcome) = best?;
    *state = outcome.state;
    Some(i)
}

/// Runs outer steps until the cost is at most `threshold`; returns the residual cost.
pub fn aecm_in_place(
    state: &mut SynthState,
    threshold: u32,
    config: &AecmConfig,
    chooser: &mut Chooser,
) -> u32 {
    while state.cost() > threshold {
        if aecm_step(state, threshold, config, chooser).is_none() {
            break;
        }
    }
    state.cost()
}

#[derive(Debug, Clone)]
pub struct AecmResult {
    pub residual_cost: u32,
    /// Present only for a complete synthesis (`threshold = 0`).
    pub circuit: Option<Circuit>,
    /// Remaining state, including the gates peeled so far.
    pub state: SynthState,
}

/// AECM from a fresh state. With `threshold = 0` the result holds the finished circuit.
pub fn aecm_partial(m: &BitMatrix, threshold: u32, config: &AecmConfig) -> Result<AecmResult> {
    let mut state = SynthState::new(m.clone())?;
    let mut chooser = Chooser::new(config.tie_break);
    let residual_cost = aecm_in_place(&mut state, threshold, config, &mut chooser);
    let circuit = (threshold == 0).then(|| state.clone().into_circuit());
    Ok(AecmResult {
        residual_cost,
        circuit,
        state,
    })
}

/// Complete AECM synthesis of `m`.
pub fn aecm(m: &BitMatrix, config: &AecmConfig) -> Result<Circuit> {
    Ok(aecm_partial(m, 0, config)?
        .circuit
        .expect("threshold 0 finalizes"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::random_invertible;

    #[test]
    fn gain_ordering() {
        assert!(Gain::new(3, 2) > Gain::new(4, 3));
        assert_eq!(Gain::new(2, 2), Gain::new(3, 3));
        assert!(Gain::new(1, 0) > Gain::new(100, 1));
        assert!(Gain::new(0, 0) < Gain::new(-5, 1));
        assert!(Gain::new(-1, 1) < Gain::new(0, 1));
    }

    #[test]
    fn identity_is_untouched() {
        let s = SynthState::new(BitMatrix::identity(5)).unwrap();
        let mut ch = Chooser::deterministic();
        for d in 0..5 {
            let out = diagonalize(&s, 0, d, &AecmConfig::default(), &mut ch);
            assert_eq!(out.gates_added, 0);
            assert_eq!(out.cost_after, 0);
        }
        assert!(aecm(&BitMatrix::identity(5), &AecmConfig::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn completed_diagonalization_solves_the_line() {
        let cfg = AecmConfig::default();
        let mut ch = Chooser::deterministic();
        for seed in 0..1000u64 {
            let n = 2 + (seed as usize % 9);
            let s = SynthState::new(random_invertible(n, seed)).unwrap();
            let d = (seed as usize / 9) % n;
            let out = diagonalize(&s, 0, d, &cfg, &mut ch);
            if out.cost_after > 0 {
                assert!(diagonal_solved(out.state.m(), d), "seed {seed}");
            }
            assert!(out.state.is_consistent());
            if !s.diagonal_solved(d) {
                assert!(out.gates_added >= 1);
            }
        }
    }

    #[test]
    fn round_trip_and_step_bound() {
        for n in [2, 3, 4, 7, 10, 16] {
            for seed in 0..30 {
                let m = random_invertible(n, seed);
                let mut state = SynthState::new(m.clone()).unwrap();
                let mut ch = Chooser::deterministic();
                let mut steps = 0;
                while state.cost() > 0 {
                    aecm_step(&mut state, 0, &AecmConfig::default(), &mut ch).unwrap();
                    steps += 1;
                }
                assert!(steps <= n);
                assert!(state.into_circuit().implements(&m));
            }
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let m = random_invertible(12, 4);
        let cfg = AecmConfig {
            tie_break: TieBreak::Seeded(17),
            ..Default::default()
        };
        let a = aecm(&m, &cfg).unwrap();
        assert_eq!(a, aecm(&m, &cfg).unwrap());
        assert!(a.implements(&m));
    }

    #[test]
    fn partial_stops_at_threshold() {
        let m = random_invertible(10, 2);
        let start = SynthState::new(m.clone()).unwrap().cost();
        let r = aecm_partial(&m, start / 2, &AecmConfig::default()).unwrap();
        assert!(r.residual_cost <= start / 2);
        assert!(r.circuit.is_none());
    }
}

//! Multiple-CNOT-gate descent.
//!
//! Every iteration tries all ordered pairs of distinct gates from both ends of
//! the remainder and commits the pair with the lowest resulting cost. When no
//! pair lowers the cost the search is at a local minimum, and AECM steps are
//! used until the cost drops below it.

use rayon::prelude::*;

use crate::aecm::{aecm_in_place, aecm_step, AecmConfig};
use crate::error::Result;
use crate::gf2::{
    enumerate_gates, random_invertible, BitMatrix, Circuit, CnotGate, CostModel, SynthState,
};
use crate::tiebreak::{Chooser, TieBreak};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McgConfig {
    pub tie_break: TieBreak,
    /// Skip the second ordering of two commuting gates.
    pub dedup_commuting: bool,
    /// Preprocessing threshold for the AECM fallback.
    pub stage1_min_improvement: i32,
    /// Line count from which the pair scan is split across worker threads.
    pub parallel_min_lines: usize,
}

impl Default for McgConfig {
    fn default() -> Self {
        Self {
            tie_break: TieBreak::Deterministic,
            dedup_commuting: false,
            stage1_min_improvement: 2,
            parallel_min_lines: 20,
        }
    }
}

impl McgConfig {
    fn aecm(&self) -> AecmConfig {
        AecmConfig {
            stage1_min_improvement: self.stage1_min_improvement,
            tie_break: self.tie_break,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCategory {
    OutputOutput,
    InputInput,
    Mixed,
}

/// Two distinct gates applied as one candidate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoGateCandidate {
    pub first: CnotGate,
    pub second: CnotGate,
}

impl TwoGateCandidate {
    pub fn new(first: CnotGate, second: CnotGate) -> Option<Self> {
        (first != second).then_some(Self { first, second })
    }

    pub fn category(&self) -> PairCategory {
        use crate::gf2::Side::*;
        match (self.first.side, self.second.side) {
            (Output, Output) => PairCategory::OutputOutput,
            (Input, Input) => PairCategory::InputInput,
            _ => PairCategory::Mixed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct McgResult {
    pub circuit: Circuit,
    /// False when the AECM fallback was needed at least once.
    pub convergent: bool,
    /// Cost before synthesis and after every committed step.
    pub cost_trace: Vec<u32>,
}

/// Lowest cost reachable with one pair, and the pairs reaching it.
#[derive(Debug, Clone)]
struct PairScan {
    cost: i32,
    /// Enumeration indices; only the first is kept unless ties are random.
    pairs: Vec<(u32, u32)>,
}

impl PairScan {
    fn merge(mut self, other: PairScan, keep_all: bool) -> PairScan {
        if other.cost < self.cost {
            return other;
        }
        if other.cost == self.cost && keep_all {
            self.pairs.extend(other.pairs);
        }
        self
    }
}

/// Scans every second gate after `gates[i]` has been applied to `s`.
fn scan_second(
    s: &SynthState,
    gates: &[CnotGate],
    i: usize,
    model: CostModel,
    bound: i32,
    cfg: &McgConfig,
    keep_all: bool,
) -> PairScan {
    let g1 = gates[i];
    let base = s.cost_of(model) as i32;
    let mut out = PairScan {
        cost: bound,
        pairs: Vec::new(),
    };
    s.for_each_delta(model, |j, d| {
        if j == i || (cfg.dedup_commuting && j < i && g1.commutes_with(&gates[j])) {
            return;
        }
        let c3 = base + d;
        if c3 < out.cost {
            out.cost = c3;
            out.pairs.clear();
            out.pairs.push((i as u32, j as u32));
        } else if c3 == out.cost && keep_all && c3 < bound {
            out.pairs.push((i as u32, j as u32));
        }
    });
    out
}

/// Best pair strictly below the current cost, or `None` at a local minimum.
/// The live state is restored before returning.
fn best_pair(
    s: &mut SynthState,
    gates: &[CnotGate],
    model: CostModel,
    cfg: &McgConfig,
    chooser: &mut Chooser,
) -> Option<(CnotGate, CnotGate, u32)> {
    let c1 = s.cost_of(model) as i32;
    let keep_all = chooser.is_random();
    let empty = PairScan {
        cost: c1,
        pairs: Vec::new(),
    };
    let scan = if s.dim() >= cfg.parallel_min_lines {
        let shared: &SynthState = s;
        (0..gates.len())
            .into_par_iter()
            .map(|i| {
                let mut local = shared.clone();
                local.apply(gates[i]);
                scan_second(&local, gates, i, model, c1, cfg, keep_all)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(empty, |acc, x| acc.merge(x, keep_all))
    } else {
        let mut acc = empty;
        for (i, &g1) in gates.iter().enumerate() {
            s.apply(g1);
            acc = acc.merge(scan_second(s, gates, i, model, c1, cfg, keep_all), keep_all);
            s.apply(g1);
        }
        acc
    };
    if scan.pairs.is_empty() {
        return None;
    }
    let (i, j) = scan.pairs[chooser.pick(scan.pairs.len())];
    Some((gates[i as usize], gates[j as usize], scan.cost as u32))
}

/// Pair descent on `s` under `model` until that cost reaches 0.
/// Returns the convergence flag and the cost trace.
fn descend(
    s: &mut SynthState,
    model: CostModel,
    cfg: &McgConfig,
    chooser: &mut Chooser,
) -> (bool, Vec<u32>) {
    let gates = enumerate_gates(s.dim());
    let aecm_cfg = cfg.aecm();
    let mut convergent = true;
    let mut trace = vec![s.cost_of(model)];
    while s.cost_of(model) > 0 {
        let c1 = s.cost_of(model);
        if let Some(&g) = gates.iter().find(|&&g| c1 as i32 + s.delta(g, model) == 0) {
            s.commit(g);
            trace.push(0);
            break;
        }
        match best_pair(s, &gates, model, cfg, chooser) {
            Some((g1, g2, cost)) => {
                s.commit(g1);
                s.commit(g2);
                debug_assert_eq!(s.cost_of(model), cost);
            }
            None => {
                convergent = false;
                match model {
                    CostModel::Identity => {
                        aecm_in_place(s, c1 - 1, &aecm_cfg, chooser);
                    }
                    CostModel::Sparse => {
                        while s.sparse_cost() >= c1 {
                            aecm_step(s, 0, &aecm_cfg, chooser)
                                .expect("an unsolved remainder has an unsolved diagonal");
                        }
                    }
                }
            }
        }
        trace.push(s.cost_of(model));
    }
    (convergent, trace)
}

/// MCG synthesis of `m`.
pub fn mcg(m: &BitMatrix, config: &McgConfig) -> Result<McgResult> {
    let mut state = SynthState::new(m.clone())?;
    let mut chooser = Chooser::new(config.tie_break);
    let (convergent, cost_trace) = descend(&mut state, CostModel::Identity, config, &mut chooser);
    Ok(McgResult {
        circuit: state.into_circuit(),
        convergent,
        cost_trace,
    })
}

/// MCG driven by the sparseness cost: stops once the remainder is a
/// permutation and absorbs it as an output relabelling.
pub fn mcg_line_reordering(m: &BitMatrix, config: &McgConfig) -> Result<McgResult> {
    let mut state = SynthState::new(m.clone())?;
    let mut chooser = Chooser::new(config.tie_break);
    let (convergent, cost_trace) = descend(&mut state, CostModel::Sparse, config, &mut chooser);
    let circuit = state
        .into_permuted_circuit()
        .expect("zero sparseness cost means a permutation remainder");
    Ok(McgResult {
        circuit,
        convergent,
        cost_trace,
    })
}

/// Whether any pair of distinct gates brings the cost of `m` strictly below its current value.
pub fn any_improving_pair(m: &BitMatrix) -> Result<bool> {
    let mut state = SynthState::new(m.clone())?;
    let gates = enumerate_gates(m.dim());
    let cfg = McgConfig {
        parallel_min_lines: usize::MAX,
        ..Default::default()
    };
    Ok(best_pair(
        &mut state,
        &gates,
        CostModel::Identity,
        &cfg,
        &mut Chooser::deterministic(),
    )
    .is_some())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusStats {
    pub lines: usize,
    pub trials: usize,
    pub mean_gates: f64,
    pub nonconvergent: usize,
}

/// Runs MCG on `trials` random instances and counts nonconvergent runs.
pub fn nonconvergence_census(n: usize, trials: usize, seed: u64) -> CensusStats {
    let seeds = crate::harness::trial_seeds(seed, trials);
    let runs: Vec<(usize, bool)> = seeds
        .par_iter()
        .map(|&s| {
            let m = random_invertible(n, s);
            let r = mcg(&m, &McgConfig::default()).expect("generated matrices are invertible");
            assert!(r.circuit.implements(&m));
            (r.circuit.len(), r.convergent)
        })
        .collect();
    let total: usize = runs.iter().map(|r| r.0).sum();
    CensusStats {
        lines: n,
        trials,
        mean_gates: if trials == 0 {
            0.0
        } else {
            total as f64 / trials as f64
        },
        nonconvergent: runs.iter().filter(|r| !r.1).count(),
    }
}

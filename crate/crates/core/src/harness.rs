//! Benchmark drivers: method comparison on random instances, exact-minimum
//! hit rates on 5-line functions, and repeated probabilistic runs.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::aecm::{aecm, AecmConfig};
use crate::baseline::{algorithm1_synthesis, default_section_size, gaussian_synthesis};
use crate::error::{Error, Result};
use crate::gf2::{random_invertible, BitMatrix, Circuit};
use crate::mcg::{mcg, mcg_line_reordering, McgConfig};
use crate::oracle::{DistanceTable, MatrixCode};
use crate::tiebreak::TieBreak;

/// Per-trial seeds drawn from a master seed.
pub fn trial_seeds(master: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..count).map(|_| rng.gen()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Aecm,
    Aecmp,
    Mcg,
    Mcgp,
    McgReorder,
    Gaussian,
    Algorithm1,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Aecm,
        Method::Aecmp,
        Method::Mcg,
        Method::Mcgp,
        Method::McgReorder,
        Method::Gaussian,
        Method::Algorithm1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Aecm => "aecm",
            Method::Aecmp => "aecmp",
            Method::Mcg => "mcg",
            Method::Mcgp => "mcgp",
            Method::McgReorder => "mcg-reorder",
            Method::Gaussian => "gaussian",
            Method::Algorithm1 => "algorithm1",
        }
    }

    pub fn is_probabilistic(self) -> bool {
        matches!(self, Method::Aecmp | Method::Mcgp)
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthOptions {
    /// Seed for the probabilistic methods.
    pub seed: u64,
    pub stage1_min_improvement: i32,
    /// Column section width for `algorithm1`; default from the line count.
    pub section_size: Option<usize>,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            stage1_min_improvement: 2,
            section_size: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub circuit: Circuit,
    /// Set for the MCG family only.
    pub convergent: Option<bool>,
}

/// Runs one synthesis method on `m`.
pub fn synthesize(method: Method, m: &BitMatrix, opts: &SynthOptions) -> Result<Synthesis> {
    let tie_break = if method.is_probabilistic() {
        TieBreak::Seeded(opts.seed)
    } else {
        TieBreak::Deterministic
    };
    let aecm_cfg = AecmConfig {
        stage1_min_improvement: opts.stage1_min_improvement,
        tie_break,
    };
    let mcg_cfg = McgConfig {
        tie_break,
        stage1_min_improvement: opts.stage1_min_improvement,
        ..Default::default()
    };
    let plain = |circuit| Synthesis {
        circuit,
        convergent: None,
    };
    Ok(match method {
        Method::Aecm | Method::Aecmp => plain(aecm(m, &aecm_cfg)?),
        Method::Gaussian => plain(gaussian_synthesis(m)?),
        Method::Algorithm1 => {
            let s = opts
                .section_size
                .unwrap_or_else(|| default_section_size(m.dim()));
            plain(algorithm1_synthesis(m, s)?)
        }
        Method::Mcg | Method::Mcgp => {
            let r = mcg(m, &mcg_cfg)?;
            Synthesis {
                circuit: r.circuit,
                convergent: Some(r.convergent),
            }
        }
        Method::McgReorder => {
            let r = mcg_line_reordering(m, &mcg_cfg)?;
            Synthesis {
                circuit: r.circuit,
                convergent: Some(r.convergent),
            }
        }
    })
}

/// Best of `passes` runs. The first uses `opts.seed`, the rest seeds derived
/// from it, so more passes never give a longer circuit. Deterministic methods
/// run once.
pub fn synthesize_best_of(
    method: Method,
    m: &BitMatrix,
    opts: &SynthOptions,
    passes: usize,
) -> Result<Synthesis> {
    if !method.is_probabilistic() || passes <= 1 {
        return synthesize(method, m, opts);
    }
    let mut best: Option<Synthesis> = None;
    let seeds = std::iter::once(opts.seed).chain(trial_seeds(opts.seed, passes - 1));
    for seed in seeds {
        let run = synthesize(method, m, &SynthOptions { seed, ..*opts })?;
        if best
            .as_ref()
            .is_none_or(|b| run.circuit.len() < b.circuit.len())
        {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one pass"))
}

/// Synthesizes and checks the round trip before handing the result back.
pub fn synthesize_verified(
    method: Method,
    m: &BitMatrix,
    opts: &SynthOptions,
) -> Result<Synthesis> {
    let s = synthesize(method, m, opts)?;
    if !s.circuit.implements(m) {
        return Err(Error::Verification {
            method: method.name().to_string(),
            n: m.dim(),
        });
    }
    Ok(s)
}

/// Gate-count statistics for one method on one instance set.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub method: String,
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub median: f64,
    pub min: usize,
    pub max: usize,
    /// Sample standard deviation; 0 for a single trial.
    pub stddev: f64,
    pub nonconvergent: Option<usize>,
    pub seconds: f64,
}

impl BenchRecord {
    pub fn from_counts(
        method: &str,
        n: usize,
        counts: &[usize],
        nonconvergent: Option<usize>,
        seconds: f64,
    ) -> Option<Self> {
        if counts.is_empty() {
            return None;
        }
        let k = counts.len();
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let mean = sorted.iter().sum::<usize>() as f64 / k as f64;
        let median = if k % 2 == 1 {
            sorted[k / 2] as f64
        } else {
            (sorted[k / 2 - 1] + sorted[k / 2]) as f64 / 2.0
        };
        let stddev = if k > 1 {
            let ss: f64 = sorted.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
            (ss / (k - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            method: method.to_string(),
            n,
            trials: k,
            mean,
            median,
            min: sorted[0],
            max: sorted[k - 1],
            stddev,
            nonconvergent,
            seconds,
        })
    }
}

pub const CSV_HEADER: &str = "method,n,trials,mean,median,min,max,stddev,nonconvergent,seconds";

/// CSV report. Wall time is written only when `timing` is set, so reports
/// are reproducible byte for byte otherwise.
pub fn records_to_csv(records: &[BenchRecord], timing: bool) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in records {
        writeln!(
            s,
            "{},{},{},{:.4},{},{},{},{:.4},{},{}",
            r.method,
            r.n,
            r.trials,
            r.mean,
            r.median,
            r.min,
            r.max,
            r.stddev,
            r.nonconvergent.map(|v| v.to_string()).unwrap_or_default(),
            if timing {
                format!("{:.3}", r.seconds)
            } else {
                String::new()
            },
        )
        .unwrap();
    }
    s
}

pub fn records_to_markdown(records: &[BenchRecord]) -> String {
    let mut s = String::from(
        "| Method | Lines | Trials | Average | Median | Minimum | Maximum | Std. dev. | Nonconvergent |\n\
         |---|---:|---:|---:|---:|---:|---:|---:|---:|\n",
    );
    for r in records {
        writeln!(
            s,
            "| {} | {} | {} | {:.2} | {} | {} | {} | {:.3} | {} |",
            r.method,
            r.n,
            r.trials,
            r.mean,
            r.median,
            r.min,
            r.max,
            r.stddev,
            r.nonconvergent
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into()),
        )
        .unwrap();
    }
    s
}

/// Runs `method` on every matrix, verifying each circuit.
/// Returns gate counts and the number of nonconvergent runs.
fn run_method(
    method: Method,
    matrices: &[BitMatrix],
    seeds: &[u64],
) -> Result<(Vec<usize>, usize, f64)> {
    let start = Instant::now();
    let runs: Vec<Result<(usize, bool)>> = matrices
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(m, &seed)| {
            let opts = SynthOptions {
                seed,
                ..Default::default()
            };
            let s = synthesize_verified(method, m, &opts)?;
            Ok((s.circuit.len(), s.convergent == Some(false)))
        })
        .collect();
    let mut counts = Vec::with_capacity(runs.len());
    let mut nonconvergent = 0;
    for r in runs {
        let (c, nc) = r?;
        counts.push(c);
        nonconvergent += nc as usize;
    }
    Ok((counts, nonconvergent, start.elapsed().as_secs_f64()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table1Config {
    pub trials: usize,
    pub seed: u64,
    /// MCG is skipped above this many lines.
    pub mcg_line_cap: usize,
}

impl Default for Table1Config {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 1,
            mcg_line_cap: 40,
        }
    }
}

/// AECM, Algorithm 1 and MCG averages over random instances for each line count.
pub fn run_table1(lines: &[usize], cfg: &Table1Config) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &n in lines {
        if cfg.trials == 0 {
            continue;
        }
        let seeds = trial_seeds(
            cfg.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            cfg.trials,
        );
        let matrices: Vec<BitMatrix> = seeds.iter().map(|&s| random_invertible(n, s)).collect();
        let mut methods = vec![Method::Aecm, Method::Algorithm1];
        if n <= cfg.mcg_line_cap {
            methods.push(Method::Mcg);
        }
        for method in methods {
            let (counts, nc, secs) = run_method(method, &matrices, &seeds)?;
            let nonconvergent = (method == Method::Mcg).then_some(nc);
            out.extend(BenchRecord::from_counts(
                method.name(),
                n,
                &counts,
                nonconvergent,
                secs,
            ));
        }
    }
    Ok(out)
}

/// Which 5-line functions a hit-rate run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitSample {
    /// Uniform sample of this size from GL(n,2), with replacement.
    Random(usize),
    /// Every element of GL(n,2).
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitRate {
    pub method: String,
    pub samples: usize,
    /// Runs whose gate count equals the exact minimum.
    pub hits: usize,
    pub rate: f64,
    /// Nonconvergent runs (MCG only), and how many of them missed the minimum.
    pub nonconvergent: Option<(usize, usize)>,
}

/// Uniform sample of invertible matrices by rejection on random bit patterns.
pub fn sample_invertible(table: &DistanceTable, count: usize, seed: u64) -> Vec<BitMatrix> {
    let n = table.lines();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let code = MatrixCode(rng.gen_range(0..1u32 << (n * n)));
        if table.distance(code).is_some() {
            out.push(code.decode(n));
        }
    }
    out
}

/// Fraction of instances on which MCG, AECM and Algorithm 1 reach the exact minimum.
pub fn hit_rates_on(matrices: &[BitMatrix], table: &DistanceTable) -> Result<Vec<HitRate>> {
    let mut out = Vec::new();
    for method in [Method::Mcg, Method::Aecm, Method::Algorithm1] {
        let runs: Vec<Result<(bool, bool)>> = matrices
            .par_iter()
            .map(|m| {
                let s = synthesize_verified(method, m, &SynthOptions::default())?;
                let min = crate::oracle::exact_min_count(m, table)? as usize;
                Ok((s.circuit.len() == min, s.convergent == Some(false)))
            })
            .collect();
        let mut hits = 0;
        let mut nonconv = 0;
        let mut nonconv_missed = 0;
        for r in runs {
            let (hit, nc) = r?;
            hits += hit as usize;
            if nc {
                nonconv += 1;
                nonconv_missed += !hit as usize;
            }
        }
        let samples = matrices.len();
        out.push(HitRate {
            method: method.name().to_string(),
            samples,
            hits,
            rate: if samples == 0 {
                0.0
            } else {
                hits as f64 / samples as f64
            },
            nonconvergent: (method == Method::Mcg).then_some((nonconv, nonconv_missed)),
        });
    }
    Ok(out)
}

pub fn run_hit_rates(sample: HitSample, seed: u64, table: &DistanceTable) -> Result<Vec<HitRate>> {
    let matrices = match sample {
        HitSample::Random(0) => return Ok(Vec::new()),
        HitSample::Random(k) => sample_invertible(table, k, seed),
        HitSample::All => table
            .entries()
            .map(|(c, _)| c.decode(table.lines()))
            .collect(),
    };
    hit_rates_on(&matrices, table)
}

pub fn hit_rates_to_csv(rates: &[HitRate]) -> String {
    let mut s = String::from("method,samples,hits,rate,nonconvergent,nonconvergent_above_min\n");
    for r in rates {
        let (nc, above) = match r.nonconvergent {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(
            s,
            "{},{},{},{:.4},{},{}",
            r.method, r.samples, r.hits, r.rate, nc, above
        )
        .unwrap();
    }
    s
}

/// Repeated MCGP and AECMP runs on `m`, one seed per run.
pub fn run_probabilistic(m: &BitMatrix, trials: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    let seeds = trial_seeds(seed, trials);
    let matrices = vec![m.clone(); trials];
    let mut out = Vec::new();
    for method in [Method::Mcgp, Method::Aecmp] {
        let (counts, nc, secs) = run_method(method, &matrices, &seeds)?;
        let nonconvergent = (method == Method::Mcgp).then_some(nc);
        out.extend(BenchRecord::from_counts(
            method.name(),
            m.dim(),
            &counts,
            nonconvergent,
            secs,
        ));
    }
    Ok(out)
}

/// Repeated probabilistic runs on the bundled 16-line function.
pub fn run_table3(trials: usize, seed: u64) -> Result<Vec<BenchRecord>> {
    run_probabilistic(&crate::fixtures::test_16(), trials, seed)
}

/// Exact-minimum histogram as CSV.
pub fn histogram_to_csv(hist: &[u64]) -> String {
    let mut s = String::from("gates,functions\n");
    for (d, c) in hist.iter().enumerate() {
        writeln!(s, "{d},{c}").unwrap();
    }
    s
}

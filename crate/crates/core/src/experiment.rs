//! Seeded parallel Monte Carlo trials: lifetime sums, identity verification, mean persistence
//! diagrams, `ρ_{n,m}` estimates and scaling tables.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acycle::{check_hypotheses, gamma_with, lifetime_via_msa, max_complement_weight};
use crate::combinatorics::{binomial, BinomialTable, KSubsets};
use crate::complex::Simplex;
use crate::error::{Error, Result};
use crate::filtration::{dyadic, format_time, Filtration, Time};
use crate::linalg::{Backend, Field, Gf, GfAlt, RankOracle};
use crate::persistence::{betti_curve, compute_persistence, decimal17, Extended, PersistenceDiagram};
use crate::process::{uniform_complex, BirthLaw, LmSample, ProcessKind, ProcessSpec, SeedSpec};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ACYCLE_THREADS";

/// One trial in twenty is verified unless every trial is requested.
const VERIFY_STRIDE: u64 = 20;

/// A pool honoring `ACYCLE_THREADS` (all cores when unset).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Config(format!("{THREADS_ENV} must be positive")));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Minimum spanning acycle of a Linial–Meshulam sample, kept in tick units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmAcycle {
    /// Ticks of the accepted simplices, in acceptance order.
    pub ticks: Vec<u32>,
    /// Columns examined before the acycle was complete.
    pub inspected: usize,
}

impl LmAcycle {
    pub fn tick_sum(&self) -> u128 {
        self.ticks.iter().map(|&t| u128::from(t)).sum()
    }

    /// The lifetime sum `L_{d-1}`, i.e. the acycle weight.
    pub fn lifetime(&self) -> Time {
        BigRational::new(BigInt::from(self.tick_sum()), BigInt::from(1u64 << 32))
    }
}

/// Greedy spanning acycle of an LM sample without building a complex: rows are the
/// `(d-1)`-simplices by colex rank, columns are examined in (tick, lexicographic) order.
pub fn lm_acycle<F: Field>(sample: &LmSample) -> LmAcycle {
    let (n, d) = (sample.n, sample.d);
    let table = BinomialTable::new(n, d + 1);
    let rows = binomial(n as u64, d as u64) as usize;
    let gamma = binomial(n as u64 - 1, d as u64) as usize;
    let simplices: Vec<u32> = KSubsets::new(n, d + 1).flatten().collect();
    let mut order: Vec<u32> = (0..sample.ticks.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (sample.ticks[i as usize], i));

    let mut oracle = RankOracle::<F>::new(rows);
    let mut facet = vec![0u32; d];
    let mut column: Vec<(usize, F)> = Vec::with_capacity(d + 1);
    let mut ticks = Vec::with_capacity(gamma);
    let mut inspected = 0;
    for &i in &order {
        if ticks.len() == gamma {
            break;
        }
        inspected += 1;
        let verts = &simplices[i as usize * (d + 1)..(i as usize + 1) * (d + 1)];
        column.clear();
        for j in 0..=d {
            let mut w = 0;
            for (p, &v) in verts.iter().enumerate() {
                if p != j {
                    facet[w] = v;
                    w += 1;
                }
            }
            let row = table.colex_rank(&facet) as usize;
            column.push((row, sign::<F>(j)));
        }
        column.sort_unstable_by_key(|e| e.0);
        if oracle.try_add(&column) {
            ticks.push(sample.ticks[i as usize]);
        }
    }
    LmAcycle { ticks, inspected }
}

/// The three computations of `L_{d-1}` on one filtration.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub degree: usize,
    pub persistence: Extended,
    pub msa: Time,
    pub betti_integral: Extended,
    /// Wall-clock milliseconds for persistence, MSA and Betti-curve routes.
    pub millis: [f64; 3],
}

impl IdentityReport {
    pub fn value(&self) -> &Time {
        &self.msa
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "persistence": self.persistence.to_string(),
            "msa": format_time(&self.msa),
            "betti_integral": self.betti_integral.to_string(),
            "millis": self.millis,
        })
    }
}

/// Computes `L_{d-1}` by the persistence diagram, by `wt(MSA_d) - max complement weight`
/// and by integrating the Betti curve, all over the rationals, and demands exact equality.
pub fn verify_identity(f: &Filtration, d: usize) -> Result<IdentityReport> {
    if d == 0 {
        return Err(Error::domain("identity needs d >= 1"));
    }
    check_hypotheses(f.complex(), d, Backend::Rational)?;
    let clock = Instant::now();
    let persistence = compute_persistence(f, d - 1, Backend::Rational).lifetime_sum();
    let t1 = clock.elapsed().as_secs_f64() * 1e3;
    let msa = lifetime_via_msa(f, d, Backend::Rational)?;
    let t2 = clock.elapsed().as_secs_f64() * 1e3;
    let betti_integral = betti_curve(f, d - 1, Backend::Rational).total_integral();
    let t3 = clock.elapsed().as_secs_f64() * 1e3;
    let report = IdentityReport { degree: d - 1, persistence, msa, betti_integral, millis: [t1, t2 - t1, t3 - t2] };
    let target = Extended::Finite(report.msa.clone());
    if report.persistence != target || report.betti_integral != target {
        return Err(Error::IdentityViolation(format!(
            "persistence = {}, msa = {}, betti integral = {}\nfiltration:\n{}",
            report.persistence,
            format_time(&report.msa),
            report.betti_integral,
            f.to_text()
        )));
    }
    Ok(report)
}

/// Mean-diagram histogram settings: `bins × bins` cells over `[0, range]²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bins: usize,
    pub range: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        HistogramSpec { bins: 20, range: 1.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    /// One CSV row per trial.
    #[serde(default)]
    pub trials_csv: Option<PathBuf>,
    #[serde(default)]
    pub summary_json: Option<PathBuf>,
    /// The mean-diagram histogram as a CSV matrix (rows: birth bins, columns: death bins).
    #[serde(default)]
    pub histogram_csv: Option<PathBuf>,
}

fn default_seed() -> u64 {
    1
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub process: ProcessSpec,
    /// Homology degree; must be `process.d - 1`.
    pub degree: usize,
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub outputs: OutputPaths,
    /// Verify the three-way identity on a deterministic 5% subsample.
    #[serde(default = "default_true")]
    pub identity_check: bool,
    /// Verify every trial instead of the subsample.
    #[serde(default)]
    pub verify_all: bool,
    #[serde(default)]
    pub histogram: HistogramSpec,
}

impl ExperimentConfig {
    pub fn new(process: ProcessSpec, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            degree: process.d.saturating_sub(1),
            process,
            trials,
            seed,
            outputs: OutputPaths::default(),
            identity_check: true,
            verify_all: false,
            histogram: HistogramSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.process.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.histogram.bins == 0 || !(self.histogram.range > 0.0) {
            return Err(Error::Config("histogram needs bins >= 1 and a positive range".into()));
        }
        if self.degree + 1 != self.process.d {
            return Err(Error::Config(format!(
                "degree {} is inconsistent with process d = {} (expected {})",
                self.degree,
                self.process.d,
                self.process.d - 1
            )));
        }
        if self.process.kind == ProcessKind::UniformComplex {
            return Err(Error::Config("the uniform model has no filtration to run trials on".into()));
        }
        Ok(())
    }

    fn verifies(&self, trial: u64) -> bool {
        self.identity_check && (self.verify_all || trial % VERIFY_STRIDE == 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub lifetime: Time,
    /// Sum of the `γ` smallest `d`-birth times minus the maximum complement weight.
    pub lower_bound: Time,
    pub verified: bool,
}

/// Empirical mean persistence diagram.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanDiagramHistogram {
    pub bins: usize,
    pub range: f64,
    /// `counts[i][j]`: average number of points with birth in bin `i` and death in bin `j`.
    pub counts: Vec<Vec<f64>>,
    /// Average number of finite points outside `[0, range]²`.
    pub overflow: f64,
    /// Average number of points with infinite death.
    pub infinite: f64,
}

impl MeanDiagramHistogram {
    fn bin(&self, x: f64) -> Option<usize> {
        if !(0.0..=self.range).contains(&x) {
            return None;
        }
        Some(((x / self.range * self.bins as f64) as usize).min(self.bins - 1))
    }

    /// In-range mass plus overflow plus infinite points: the mean number of diagram points.
    pub fn total_mass(&self) -> f64 {
        self.counts.iter().flatten().sum::<f64>() + self.overflow + self.infinite
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.counts {
            let cells: Vec<String> = row.iter().map(|&v| decimal17(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

struct TrialOutcome {
    record: TrialRecord,
    points: Vec<(f64, f64)>,
    infinite: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialRecord>,
    pub mean: f64,
    pub mean_exact: Time,
    /// Sample standard deviation over `√trials` (0 for a single trial).
    pub stderr: f64,
    pub variance: f64,
    pub elapsed_secs: f64,
    pub histogram: MeanDiagramHistogram,
    pub verified: usize,
}

impl ExperimentResult {
    pub fn n(&self) -> usize {
        self.config.process.n
    }

    pub fn d(&self) -> usize {
        self.config.process.d
    }

    pub fn values(&self) -> Vec<f64> {
        self.trials.iter().map(|t| time_to_f64(&t.lifetime)).collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "process": self.config.process,
            "n": self.n(),
            "d": self.d(),
            "degree": self.config.degree,
            "trials": self.trials.len(),
            "seed": self.config.seed,
            "mean": self.mean,
            "mean_exact": format_time(&self.mean_exact),
            "stderr": self.stderr,
            "variance": self.variance,
            "verified": self.verified,
            "elapsed_secs": self.elapsed_secs,
            "histogram": {
                "bins": self.histogram.bins,
                "range": self.histogram.range,
                "overflow": self.histogram.overflow,
                "infinite": self.histogram.infinite,
                "total_mass": self.histogram.total_mass(),
            },
        })
    }

    pub fn trials_csv(&self) -> String {
        let mut out = String::from("trial,lifetime,lifetime_exact,lower_bound_exact,verified\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.trial,
                decimal17(time_to_f64(&t.lifetime)),
                format_time(&t.lifetime),
                format_time(&t.lower_bound),
                t.verified
            ));
        }
        out
    }

    /// Writes whichever outputs the configuration names.
    pub fn write_outputs(&self) -> Result<()> {
        let paths = &self.config.outputs;
        let write = |p: &Option<PathBuf>, body: String| -> Result<()> {
            if let Some(p) = p {
                create_parent(p)?;
                std::fs::write(p, body)?;
            }
            Ok(())
        };
        write(&paths.trials_csv, self.trials_csv())?;
        write(&paths.summary_json, serde_json::to_string_pretty(&self.summary_json())? + "\n")?;
        write(&paths.histogram_csv, self.histogram.to_csv())
    }
}

fn create_parent(p: &Path) -> Result<()> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(())
}

pub fn time_to_f64(t: &Time) -> f64 {
    t.to_f64().unwrap_or(f64::NAN)
}

fn lm_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialOutcome> {
    let (n, d) = (cfg.process.n, cfg.process.d);
    let seed = SeedSpec::new(cfg.seed, trial);
    let sample = LmSample::draw(n, d, seed)?;
    let acycle = lm_acycle::<Gf>(&sample);
    let gamma = binomial(n as u64 - 1, d as u64) as usize;
    if acycle.ticks.len() != gamma {
        return Err(Error::Structural(format!("trial {trial}: acycle has {} simplices, expected {gamma}", acycle.ticks.len())));
    }
    let lifetime = acycle.lifetime();
    let verified = cfg.verifies(trial);
    if verified {
        let alt = lm_acycle::<GfAlt>(&sample);
        let report = verify_identity(&sample.filtration(), d).map_err(|e| tag_seed(e, seed))?;
        if alt.ticks != acycle.ticks || *report.value() != lifetime {
            return Err(Error::IdentityViolation(format!(
                "seed {seed:?}: modular acycle weight {} disagrees with the exact value {}",
                format_time(&lifetime),
                format_time(report.value())
            )));
        }
    }
    let mut smallest = sample.ticks.clone();
    smallest.select_nth_unstable(gamma - 1);
    let bound_ticks: u128 = smallest[..gamma].iter().map(|&t| u128::from(t)).sum();
    if bound_ticks > acycle.tick_sum() {
        return Err(Error::IdentityViolation(format!("seed {seed:?}: lifetime sum below the ordered-statistics bound")));
    }
    let lower_bound = BigRational::new(BigInt::from(bound_ticks), BigInt::from(1u64 << 32));
    let points = acycle.ticks.iter().map(|&t| (0.0, time_to_f64(&dyadic(t)))).collect();
    Ok(TrialOutcome { record: TrialRecord { trial, lifetime, lower_bound, verified }, points, infinite: 0 })
}

fn tag_seed(e: Error, seed: SeedSpec) -> Error {
    match e {
        Error::IdentityViolation(m) => Error::IdentityViolation(format!("seed {seed:?}: {m}")),
        other => other,
    }
}

/// `Σ (γ smallest d-births) - max complement weight`, a lower bound on `L_{d-1}`.
pub fn ordered_statistics_bound(f: &Filtration, d: usize, backend: Backend) -> Result<Time> {
    let gamma = gamma_with(f.complex(), d, backend)?;
    let mut births: Vec<&Time> = f.births(d).iter().collect();
    births.sort();
    let head: Time = births.into_iter().take(gamma).fold(Time::zero(), |acc, t| acc + t);
    Ok(head - max_complement_weight(f, d, backend)?)
}

fn generic_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialOutcome> {
    let d = cfg.process.d;
    let seed = SeedSpec::new(cfg.seed, trial);
    let f = cfg.process.sample(seed)?;
    let diagram = compute_persistence(&f, d - 1, Backend::Modular);
    let lifetime = finite_lifetime(&diagram, seed)?;
    let verified = cfg.verifies(trial);
    if verified {
        let alt = compute_persistence(&f, d - 1, Backend::ModularAlt);
        let report = verify_identity(&f, d).map_err(|e| tag_seed(e, seed))?;
        if alt != diagram || *report.value() != lifetime {
            return Err(Error::IdentityViolation(format!(
                "seed {seed:?}: modular lifetime sum {} disagrees with the exact value {}",
                format_time(&lifetime),
                format_time(report.value())
            )));
        }
    }
    let lower_bound = ordered_statistics_bound(&f, d, Backend::Modular)?;
    if lower_bound > lifetime {
        return Err(Error::IdentityViolation(format!("seed {seed:?}: lifetime sum below the ordered-statistics bound")));
    }
    let points = diagram
        .pairs()
        .iter()
        .filter_map(|p| p.death.finite().map(|t| (time_to_f64(&p.birth), time_to_f64(t))))
        .collect();
    Ok(TrialOutcome {
        record: TrialRecord { trial, lifetime, lower_bound, verified },
        points,
        infinite: diagram.infinite_count(),
    })
}

fn finite_lifetime(diagram: &PersistenceDiagram, seed: SeedSpec) -> Result<Time> {
    match diagram.lifetime_sum() {
        Extended::Finite(t) => Ok(t),
        Extended::Infinite => Err(Error::Structural(format!("seed {seed:?}: a class never dies"))),
    }
}

fn run_trial(cfg: &ExperimentConfig, trial: u64) -> Result<TrialOutcome> {
    if cfg.process.kind == ProcessKind::LinialMeshulam && cfg.process.birth_law == BirthLaw::Uniform {
        lm_trial(cfg, trial)
    } else {
        generic_trial(cfg, trial)
    }
}

/// Runs the configured trials in parallel and aggregates them in trial order.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let pool = thread_pool()?;
    let clock = Instant::now();
    let outcomes: Vec<Result<TrialOutcome>> =
        pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect());
    let elapsed_secs = clock.elapsed().as_secs_f64();

    let mut histogram = MeanDiagramHistogram {
        bins: cfg.histogram.bins,
        range: cfg.histogram.range,
        counts: vec![vec![0.0; cfg.histogram.bins]; cfg.histogram.bins],
        overflow: 0.0,
        infinite: 0.0,
    };
    let mut raw = vec![vec![0u64; cfg.histogram.bins]; cfg.histogram.bins];
    let (mut overflow, mut infinite) = (0u64, 0u64);
    let mut trials = Vec::with_capacity(outcomes.len());
    for outcome in outcomes {
        let outcome = outcome?;
        for &(b, t) in &outcome.points {
            match (histogram.bin(b), histogram.bin(t)) {
                (Some(i), Some(j)) => raw[i][j] += 1,
                _ => overflow += 1,
            }
        }
        infinite += outcome.infinite as u64;
        trials.push(outcome.record);
    }
    let count = trials.len() as f64;
    for (row, raw_row) in histogram.counts.iter_mut().zip(&raw) {
        for (cell, &c) in row.iter_mut().zip(raw_row) {
            *cell = c as f64 / count;
        }
    }
    histogram.overflow = overflow as f64 / count;
    histogram.infinite = infinite as f64 / count;

    let total: Time = trials.iter().fold(Time::zero(), |acc, t| acc + &t.lifetime);
    let mean_exact = total / BigInt::from(trials.len());
    let mean = time_to_f64(&mean_exact);
    let variance = if trials.len() > 1 {
        trials.iter().map(|t| (time_to_f64(&t.lifetime) - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    Ok(ExperimentResult {
        config: cfg.clone(),
        verified: trials.iter().filter(|t| t.verified).count(),
        trials,
        mean,
        mean_exact,
        stderr: (variance / count).sqrt(),
        variance,
        elapsed_secs,
        histogram,
    })
}

/// Empirical `ρ_{n,m}` with a 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoEstimate {
    pub n: usize,
    pub d: usize,
    pub m: u64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    pub low: f64,
    pub high: f64,
}

impl RhoEstimate {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.high - self.low)
    }
}

fn wilson(hits: u64, trials: u64) -> (f64, f64) {
    let z = 1.96f64;
    let t = trials as f64;
    let p = hits as f64 / t;
    let denom = 1.0 + z * z / t;
    let center = (p + z * z / (2.0 * t)) / denom;
    let half = z / denom * (p * (1.0 - p) / t + z * z / (4.0 * t * t)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn sign<F: Field>(j: usize) -> F {
    if j % 2 == 0 {
        F::one()
    } else {
        F::one().neg()
    }
}

/// Whether the fixed simplex `{0, …, d}` lowers `β_{d-1}` of a `Y^{(d)}(n, m)` sample.
fn probe_rho(n: usize, d: usize, m: u64, seed: SeedSpec) -> Result<bool> {
    let y = uniform_complex(n, d, m, seed)?;
    let sigma = Simplex::from_sorted((0..=d as u32).collect());
    if y.contains(sigma.vertices()) {
        return Ok(false);
    }
    let mut oracle = RankOracle::<Gf>::new(y.augmented_rows(d));
    for i in 0..y.f(d) {
        oracle.try_add(&y.augmented_column(d, i));
    }
    let mut col: Vec<(usize, Gf)> = sigma
        .facets()
        .map(|(j, face)| {
            let row = y.index_of(face.vertices()).expect("complete skeleton");
            (row, sign::<Gf>(j))
        })
        .collect();
    col.sort_unstable_by_key(|e| e.0);
    Ok(oracle.is_independent(&col))
}

pub fn estimate_rho(n: usize, d: usize, m: u64, trials: u64, seed: u64) -> Result<RhoEstimate> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    ProcessSpec::uniform_complex(n, d, m).validate()?;
    let pool = thread_pool()?;
    let outcomes: Vec<Result<bool>> =
        pool.install(|| (0..trials).into_par_iter().map(|t| probe_rho(n, d, m, SeedSpec::new(seed, t))).collect());
    let mut hits = 0;
    for o in outcomes {
        hits += u64::from(o?);
    }
    let (low, high) = wilson(hits, trials);
    Ok(RhoEstimate { n, d, m, trials, hits, estimate: hits as f64 / trials as f64, low, high })
}

/// One row of a scaling table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    /// `mean / n^{d-1}`.
    pub per_power: f64,
    /// `mean / (n^{d-1} ln n)`.
    pub per_power_log: f64,
    /// Finite-n lower bound on the mean (LM: expected sum of the `γ` smallest of `N` uniforms).
    pub lower_bound: Option<f64>,
    /// Finite-n upper bound on the mean (LM: `8 (d+1)/n · C(n, d)`).
    pub upper_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingTable {
    pub kind: ProcessKind,
    pub d: usize,
    pub rows: Vec<ScalingRow>,
    /// Asymptotic `(lower, upper)` coefficients of `n^{d-1}` (LM only).
    pub asymptotic_ratio_bounds: Option<(f64, f64)>,
    /// `(c, C)` fitted at the smallest `n` so that `c n^{d-1} <= mean <= C n^{d-1} ln n` there
    /// with a factor-two margin on each side (clique only).
    pub reference_constants: Option<(f64, f64)>,
}

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(decimal17).unwrap_or_default();
        let mut out = String::from("n,trials,mean,stderr,mean_per_power,mean_per_power_log,lower_bound,upper_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                r.trials,
                decimal17(r.mean),
                decimal17(r.stderr),
                decimal17(r.per_power),
                decimal17(r.per_power_log),
                opt(r.lower_bound),
                opt(r.upper_bound)
            ));
        }
        out
    }
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

fn lm_bounds(n: usize, d: usize) -> (f64, f64) {
    let gamma = binomial(n as u64 - 1, d as u64) as f64;
    let total = binomial(n as u64, d as u64 + 1) as f64;
    let lower = gamma * (gamma + 1.0) / (2.0 * (total + 1.0));
    let upper = 8.0 * (d as f64 + 1.0) / n as f64 * binomial(n as u64, d as u64) as f64;
    (lower, upper)
}

/// Mean lifetime sums across `ns` with reference columns.
pub fn scaling_study(process: &ProcessSpec, ns: &[usize], trials: u64, seed: u64, identity_check: bool) -> Result<ScalingTable> {
    if ns.is_empty() {
        return Err(Error::Config("scaling study needs at least one n".into()));
    }
    let d = process.d;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut spec = process.clone();
        spec.n = n;
        let mut cfg = ExperimentConfig::new(spec, trials, seed);
        cfg.identity_check = identity_check;
        let r = run_trials(&cfg)?;
        let power = (n as f64).powi(d as i32 - 1);
        let (lower_bound, upper_bound) = if process.kind == ProcessKind::LinialMeshulam {
            let (l, u) = lm_bounds(n, d);
            (Some(l), Some(u))
        } else {
            (None, None)
        };
        rows.push(ScalingRow {
            n,
            trials,
            mean: r.mean,
            stderr: r.stderr,
            per_power: r.mean / power,
            per_power_log: r.mean / (power * (n as f64).ln()),
            lower_bound,
            upper_bound,
        });
    }
    let (asymptotic_ratio_bounds, reference_constants) = match process.kind {
        ProcessKind::LinialMeshulam => {
            let df = d as f64;
            (Some(((df + 1.0) / (2.0 * factorial(d)), 8.0 * (df + 1.0) / factorial(d))), None)
        }
        _ => {
            let first = &rows[0];
            (None, Some((0.5 * first.per_power, 2.0 * first.per_power_log)))
        }
    };
    Ok(ScalingTable { kind: process.kind, d, rows, asymptotic_ratio_bounds, reference_constants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acycle::min_spanning_acycle;

    #[test]
    fn fast_path_matches_generic_acycle() {
        for (n, d) in [(6, 1), (7, 2), (7, 3)] {
            let sample = LmSample::draw(n, d, SeedSpec::new(11, 2)).unwrap();
            let fast = lm_acycle::<Gf>(&sample);
            let exact = min_spanning_acycle(&sample.filtration(), d, Backend::Rational).unwrap();
            assert_eq!(fast.lifetime(), exact.weight);
            assert_eq!(fast, lm_acycle::<GfAlt>(&sample));
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let mut cfg = ExperimentConfig::new(ProcessSpec::linial_meshulam(8, 2), 5, 3);
        cfg.verify_all = true;
        let a = run_trials(&cfg).unwrap();
        let b = run_trials(&cfg).unwrap();
        assert_eq!(a.trials, b.trials);
        assert_eq!(a.verified, 5);
        let mass = a.histogram.total_mass();
        assert!((mass - binomial(7, 2) as f64).abs() < 1e-12);
    }

    #[test]
    fn clique_trials_run() {
        let mut cfg = ExperimentConfig::new(ProcessSpec::clique(7, 2, 2), 4, 5);
        cfg.verify_all = true;
        let r = run_trials(&cfg).unwrap();
        assert_eq!(r.trials.len(), 4);
        for t in &r.trials {
            assert!(t.lower_bound <= t.lifetime);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(ProcessSpec::linial_meshulam(8, 2), 5, 3);
        cfg.degree = 2;
        assert!(cfg.validate().is_err());
        cfg.degree = 1;
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let text = r#"{"process": {"kind": "linial-meshulam", "n": 6, "d": 1}, "degree": 0, "trials": 2}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert!(cfg.identity_check);
        assert_eq!(cfg.histogram.bins, 20);
    }

    #[test]
    fn rho_endpoints() {
        let all = binomial(6, 3) as u64;
        assert_eq!(estimate_rho(6, 2, all, 5, 1).unwrap().estimate, 0.0);
        assert_eq!(estimate_rho(6, 2, 0, 5, 1).unwrap().estimate, 1.0);
        assert!(estimate_rho(6, 2, all + 1, 5, 1).is_err());
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson(3, 10);
        assert!(lo < 0.3 && 0.3 < hi);
        let (lo, hi) = wilson(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
    }
}

//! Seeded experiment driver.
//!
//! Every trial draws from its own ChaCha8 stream seeded with
//! `derive_seed(master_seed, trial)`, trials run on the rayon pool and are
//! collected in index order, so a configuration always produces the same
//! records whatever the thread count. Records are written as JSON lines;
//! wall time is only included when `record_timing` is set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bippivot::{
    bipartite_delta_via_m, find_pivot_pairs, random_biadjacency, rank_tail_experiment, BipError,
    OrderedBipartiteGraph, RefutationKind,
};
use crate::gfourier::{
    fourier_audit, lemma31_bound, tv_estimate, DeltaSampler, FourierError, Lemma31, WLayout,
};
use crate::graph::{pairs, Graph, GraphError, Graph6Error, Label};
use crate::lcdelta::{
    build_m_from_w_graph, certificate_violations, delta_via_m, sequential_trace, LcError,
    LcInstance,
};
use crate::numeric::derive_seed;
use crate::quadpoly::{all_polynomials, disjoint_pairs, lemma21_bound, sign_counts, QuadPolyError};
use crate::rankcensus::{census_csv, census_table, formula_within_bound, CensusError};
use crate::vminor::{is_vertex_minor, lc_orbit, subset_coverage, MinorError, Verdict, DEFAULT_CAP};

pub use crate::numeric::splitmix64;

/// p values cycled through when an experiment is given no p.
pub const P_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("missing parameter {0}")]
    MissingParameter(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Lc(#[from] LcError),
    #[error(transparent)]
    QuadPoly(#[from] QuadPolyError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Minor(#[from] MinorError),
    #[error(transparent)]
    Bip(#[from] BipError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    ClaimMVerify,
    Lemma21Scan,
    RankCensus,
    TvEstimate,
    FourierAudit,
    Orbit,
    CheckMinor,
    Universal,
    PivotPairs,
    RankTail,
    BipDeltaVerify,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::ClaimMVerify,
        Experiment::Lemma21Scan,
        Experiment::RankCensus,
        Experiment::TvEstimate,
        Experiment::FourierAudit,
        Experiment::Orbit,
        Experiment::CheckMinor,
        Experiment::Universal,
        Experiment::PivotPairs,
        Experiment::RankTail,
        Experiment::BipDeltaVerify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ClaimMVerify => "claim-m-verify",
            Experiment::Lemma21Scan => "lemma21-scan",
            Experiment::RankCensus => "rank-census",
            Experiment::TvEstimate => "tv-estimate",
            Experiment::FourierAudit => "fourier-audit",
            Experiment::Orbit => "orbit",
            Experiment::CheckMinor => "check-minor",
            Experiment::Universal => "universal",
            Experiment::PivotPairs => "pivot-pairs",
            Experiment::RankTail => "rank-tail",
            Experiment::BipDeltaVerify => "bip-delta-verify",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::UnknownExperiment(s.to_string()))
    }
}

/// Parameters of one run. Fields an experiment does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub master_seed: u64,
    pub trials: u64,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub s: Option<usize>,
    pub r: Option<usize>,
    pub m: Option<usize>,
    pub p_grid: Option<Vec<f64>>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub sizes: Option<usize>,
    pub samples: Option<u64>,
    pub cap: Option<usize>,
    pub graph6: Option<String>,
    pub target_graph6: Option<String>,
    pub on: Option<Vec<Label>>,
    pub layout: Option<WLayout>,
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: String::new(),
            master_seed: 0,
            trials: 1,
            n: None,
            p: None,
            k: None,
            s: None,
            r: None,
            m: None,
            p_grid: None,
            rows: None,
            cols: None,
            sizes: None,
            samples: None,
            cap: None,
            graph6: None,
            target_graph6: None,
            on: None,
            layout: None,
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment: experiment.name().to_string(),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }

    fn p_or_grid(&self, trial: u64) -> Result<f64, HarnessError> {
        let p = self.p.unwrap_or(P_GRID[(trial % P_GRID.len() as u64) as usize]);
        check_p(p)?;
        Ok(p)
    }

    fn cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_CAP)
    }
}

fn check_p(p: f64) -> Result<(), HarnessError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(HarnessError::InvalidParameter(format!("p = {p} is outside [0, 1]")))
    }
}

/// One trial's outcome. `verdicts` are assertions (all must hold for the
/// run to pass); `measurements` are reported values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub verdicts: BTreeMap<String, bool>,
    pub measurements: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl TrialRecord {
    pub fn new(trial: u64, seed: u64) -> Self {
        Self {
            trial,
            seed,
            verdicts: BTreeMap::new(),
            measurements: BTreeMap::new(),
            wall_time_ms: None,
        }
    }

    pub fn verdict(&mut self, name: &str, ok: bool) -> &mut Self {
        self.verdicts.insert(name.to_string(), ok);
        self
    }

    pub fn measure(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        self.measurements.insert(
            name.to_string(),
            serde_json::to_value(value).expect("serializable measurement"),
        );
        self
    }

    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&v| v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub summary: BTreeMap<String, Value>,
    #[serde(skip)]
    pub csv: String,
    pub passed: bool,
}

impl Report {
    fn new(cfg: &ExperimentConfig, records: Vec<TrialRecord>, csv: Option<String>) -> Self {
        let passed = records.iter().all(TrialRecord::passed);
        let mut summary = BTreeMap::new();
        summary.insert("trials".into(), json!(records.len()));
        summary.insert(
            "failed_trials".into(),
            json!(records.iter().filter(|r| !r.passed()).count()),
        );
        let mut verdict_names = BTreeSet::new();
        for r in &records {
            verdict_names.extend(r.verdicts.keys().cloned());
        }
        for name in verdict_names {
            let fails = records
                .iter()
                .filter(|r| r.verdicts.get(&name) == Some(&false))
                .count();
            summary.insert(format!("{name}_failures"), json!(fails));
        }
        let csv = csv.unwrap_or_else(|| generic_csv(&records));
        Report {
            experiment: cfg.experiment.clone(),
            config: cfg.clone(),
            records,
            summary,
            csv,
            passed,
        }
    }

    /// One JSON object per line, one line per record.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("serializable record"));
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> Value {
        json!({
            "experiment": self.experiment,
            "passed": self.passed,
            "summary": self.summary,
            "records": self.records,
        })
    }
}

fn csv_cell(v: &Value) -> String {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

/// trial, seed, passed, then every verdict and measurement key.
fn generic_csv(records: &[TrialRecord]) -> String {
    let mut verdicts = BTreeSet::new();
    let mut measures = BTreeSet::new();
    for r in records {
        verdicts.extend(r.verdicts.keys().cloned());
        measures.extend(r.measurements.keys().cloned());
    }
    let mut out = String::from("trial,seed,passed");
    for k in verdicts.iter().chain(&measures) {
        out.push(',');
        out.push_str(k);
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!("{},{},{}", r.trial, r.seed, r.passed()));
        for k in &verdicts {
            out.push(',');
            if let Some(v) = r.verdicts.get(k) {
                out.push_str(&v.to_string());
            }
        }
        for k in &measures {
            out.push(',');
            if let Some(v) = r.measurements.get(k) {
                out.push_str(&csv_cell(v));
            }
        }
        out.push('\n');
    }
    out
}

/// G(n,p) with pairs drawn in lexicographic order from `rng`.
pub fn sample_gnp_with(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = pairs(n).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Graph::from_edges(n, &edges)
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp_with(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// G(a, b, p): left 0..a, right a..a+b, entries drawn row by row.
pub fn sample_bipartite(a: usize, b: usize, p: f64, seed: u64) -> OrderedBipartiteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    OrderedBipartiteGraph::from_biadjacency(random_biadjacency(a, b, p, &mut rng))
}

/// Parameter choices of the high-probability universality theorem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem13Params {
    pub n: u64,
    pub p: f64,
    pub q: f64,
    pub k: u64,
    pub s: u64,
    pub r: u64,
    /// 2·log2(4/3)·s/k² - 1; absent when k = 0.
    pub c: Option<f64>,
    pub failure_bound: f64,
    /// 100·log(n)/√n with the natural and the binary logarithm.
    pub threshold_ln: f64,
    pub threshold_log2: f64,
    pub hypothesis_ln: bool,
    pub hypothesis_log2: bool,
}

pub fn theorem13_parameters(n: u64, p: f64) -> Theorem13Params {
    assert!(n >= 1, "n must be positive");
    let q = p.min(1.0 - p);
    let nf = n as f64;
    let k = (q * nf.sqrt() / 100.0).floor() as u64;
    let s = (q * q * nf / 12.0).floor() as u64;
    let c = (k > 0).then(|| 2.0 * (4.0f64 / 3.0).log2() * s as f64 / (k * k) as f64 - 1.0);
    let threshold_ln = 100.0 * nf.ln() / nf.sqrt();
    let threshold_log2 = 100.0 * nf.log2() / nf.sqrt();
    Theorem13Params {
        n,
        p,
        q,
        k,
        s,
        r: n - s,
        c,
        failure_bound: 2f64.powf(-q * q * nf / 100.0),
        threshold_ln,
        threshold_log2,
        hypothesis_ln: q >= threshold_ln,
        hypothesis_log2: q >= threshold_log2,
    }
}

/// Runs `trial` for 0..cfg.trials in parallel, records in index order.
fn run_trials<F>(cfg: &ExperimentConfig, trial: F) -> Result<Vec<TrialRecord>, HarnessError>
where
    F: Fn(u64, &mut ChaCha8Rng, &mut TrialRecord) -> Result<(), HarnessError> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(cfg.master_seed, t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut rec = TrialRecord::new(t, seed);
            let start = Instant::now();
            trial(t, &mut rng, &mut rec)?;
            if cfg.record_timing {
                rec.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            Ok(rec)
        })
        .collect()
}

/// Records for work that is not split into random trials.
fn single_record(cfg: &ExperimentConfig, index: u64) -> TrialRecord {
    TrialRecord::new(index, derive_seed(cfg.master_seed, index))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let experiment: Experiment = cfg.experiment.parse()?;
    match experiment {
        Experiment::ClaimMVerify => claim_m_verify(cfg),
        Experiment::Lemma21Scan => lemma21_scan(cfg),
        Experiment::RankCensus => rank_census(cfg),
        Experiment::TvEstimate => tv_estimate_run(cfg),
        Experiment::FourierAudit => fourier_audit_run(cfg),
        Experiment::Orbit => orbit_run(cfg),
        Experiment::CheckMinor => check_minor(cfg),
        Experiment::Universal => universal(cfg),
        Experiment::PivotPairs => pivot_pairs(cfg),
        Experiment::RankTail => rank_tail(cfg),
        Experiment::BipDeltaVerify => bip_delta_verify(cfg),
    }
}

/// A random instance: G(n,p), a random U of size s (random if not given)
/// and a uniformly random order on W.
pub fn random_lc_instance(n: usize, p: f64, s: Option<usize>, rng: &mut ChaCha8Rng) -> Result<LcInstance, HarnessError> {
    let g = sample_gnp_with(n, p, rng);
    let s = match s {
        Some(s) if s > n => {
            return Err(HarnessError::InvalidParameter(format!("s = {s} exceeds n = {n}")))
        }
        Some(s) => s,
        None => rng.gen_range(0..=n),
    };
    let mut labels: Vec<Label> = (0..n as Label).collect();
    labels.shuffle(rng);
    let (u, w) = labels.split_at(s);
    Ok(LcInstance::new(g, u.to_vec(), w.to_vec())?)
}

fn claim_m_verify(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let n = cfg.n.unwrap_or(20);
    let records = run_trials(cfg, |t, rng, rec| {
        let p = cfg.p_or_grid(t)?;
        let inst = random_lc_instance(n, p, cfg.s, rng)?;
        let cert = delta_via_m(&inst);
        let (seq_delta, seq_z) = sequential_trace(&inst);
        let violations = certificate_violations(&cert);
        rec.verdict("delta_matches", cert.delta == seq_delta)
            .verdict("z_matches", cert.z_cols == seq_z)
            .verdict("certificate", violations.is_empty())
            .measure("n", n)
            .measure("p", p)
            .measure("s", inst.s())
            .measure("r", inst.r())
            .measure("delta_edges", cert.delta.edge_count());
        if !violations.is_empty() {
            rec.measure("violations", &violations);
        }
        Ok(())
    })?;
    Ok(Report::new(cfg, records, None))
}

/// The 19-point grid 0.05, 0.10, ..., 0.95.
pub fn p_grid_19() -> Vec<f64> {
    (1..=19).map(|i| i as f64 * 0.05).collect()
}

/// Scans every polynomial with 1..=m_max variables over a p grid and
/// reports the worst ratio |E[(-1)^f]| / bound per (m, p).
fn lemma21_scan(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let m_max = cfg.m.unwrap_or(4);
    if !(1..=5).contains(&m_max) {
        return Err(HarnessError::InvalidParameter(format!(
            "lemma21-scan enumerates every polynomial; m_max = {m_max} not in 1..=5"
        )));
    }
    let grid = cfg.p_grid.clone().unwrap_or_else(p_grid_19);
    for &p in &grid {
        check_p(p)?;
    }
    let mut records = Vec::new();
    let mut csv = String::from("family,m,p,checked,violations,worst_ratio\n");
    for m in 1..=m_max {
        let polys: Vec<_> = all_polynomials(m)
            .map(|f| {
                let counts = sign_counts(&f).expect("m is small");
                (f, counts)
            })
            .collect();
        for &p in &grid {
            let mut violations = 0usize;
            let mut worst = 0.0f64;
            for (f, counts) in &polys {
                let e = counts.expectation(p).abs();
                let bound = lemma21_bound(f, p);
                if e > bound + 1e-12 {
                    violations += 1;
                }
                worst = worst.max(e / bound);
            }
            let mut rec = single_record(cfg, records.len() as u64);
            rec.verdict("bound_holds", violations == 0)
                .measure("family", "all")
                .measure("m", m)
                .measure("p", p)
                .measure("polynomials", polys.len())
                .measure("violations", violations)
                .measure("worst_ratio", worst);
            csv.push_str(&format!("all,{m},{p},{},{violations},{worst}\n", polys.len()));
            records.push(rec);
        }
    }
    for t in 1..=10usize {
        let f = disjoint_pairs(t);
        let exact = sign_counts(&f)?.expectation(0.5);
        let bound = lemma21_bound(&f, 0.5);
        let ok = (exact - 0.5f64.powi(t as i32)).abs() <= 1e-12 && exact <= bound + 1e-12;
        let mut rec = single_record(cfg, records.len() as u64);
        rec.verdict("bound_holds", ok)
            .measure("family", "disjoint_pairs")
            .measure("t", t)
            .measure("exact", exact)
            .measure("bound", bound)
            .measure("worst_ratio", exact / bound);
        csv.push_str(&format!(
            "disjoint_pairs,{},0.5,1,{},{}\n",
            2 * t,
            usize::from(!ok),
            exact / bound
        ));
        records.push(rec);
    }
    Ok(Report::new(cfg, records, Some(csv)))
}

fn rank_census(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let s = cfg.s.unwrap_or(4);
    if s > 64 {
        return Err(HarnessError::InvalidParameter(format!("s = {s} > 64")));
    }
    let table = census_table(s);
    let records = table
        .iter()
        .map(|row| {
            let mut rec = single_record(cfg, row.a as u64);
            if let Some(ex) = row.exhaustive {
                rec.verdict("formula_matches", ex.to_string() == row.formula);
            }
            if row.a >= 1 {
                rec.verdict("within_bound", formula_within_bound(s, row.a));
            }
            rec.measure("s", s)
                .measure("a", row.a)
                .measure("exhaustive", row.exhaustive)
                .measure("formula", &row.formula)
                .measure("bound", row.bound);
            rec
        })
        .collect();
    Ok(Report::new(cfg, records, Some(census_csv(&table))))
}

fn tv_estimate_run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let s = cfg.s.unwrap_or(3);
    let r = match (cfg.r, cfg.n) {
        (Some(r), _) => r,
        (None, Some(n)) if n >= s => n - s,
        (None, Some(n)) => {
            return Err(HarnessError::InvalidParameter(format!("n = {n} < s = {s}")))
        }
        (None, None) => return Err(HarnessError::MissingParameter("r or n")),
    };
    let p = cfg.p.unwrap_or(0.5);
    check_p(p)?;
    let samples = cfg.samples.unwrap_or(100_000);
    let sampler = DeltaSampler {
        s,
        r,
        p,
        layout: cfg.layout.unwrap_or(WLayout::Random),
    };
    let start = Instant::now();
    let counts = sampler.run(samples, cfg.master_seed)?;
    let delta = tv_estimate(&counts.delta);
    let fin = tv_estimate(&counts.final_graph);
    let q = p.min(1.0 - p);
    let lemma = lemma31_bound(s, r, q);
    let mut rec = single_record(cfg, 0);
    rec.measure("s", s)
        .measure("r", r)
        .measure("p", p)
        .measure("samples", samples)
        .measure("tv_delta", delta.tv)
        .measure("sigma_delta", delta.sigma)
        .measure("bias_bound_delta", delta.bias_bound)
        .measure("tv_final", fin.tv)
        .measure("sigma_final", fin.sigma)
        .measure("bias_bound_final", fin.bias_bound)
        .measure("lemma31", lemma);
    if let Lemma31::Bound { value } = lemma {
        rec.verdict(
            "delta_within_lemma31",
            delta.tv <= value + delta.bias_bound + 3.0 * delta.sigma,
        );
    }
    if cfg.record_timing {
        rec.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(Report::new(cfg, vec![rec], None))
}

fn fourier_audit_run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let s = cfg.s.unwrap_or(2);
    let r = cfg.r.unwrap_or(4);
    let ps = match cfg.p {
        Some(p) => vec![p],
        None => vec![0.2, 0.5, 0.8],
    };
    for &p in &ps {
        check_p(p)?;
    }
    let w_labels: Vec<Label> = (0..r as Label).collect();
    let e = pairs(r).len();
    // Every G[W] when there are at most 2^12 of them, else seeded samples.
    let graphs: Vec<(u64, Graph)> = if e <= 12 {
        (0..1u128 << e)
            .map(|mask| Ok((mask as u64, Graph::from_edge_mask(w_labels.clone(), mask)?)))
            .collect::<Result<_, GraphError>>()?
    } else {
        (0..cfg.trials)
            .map(|t| {
                let g = sample_gnp(r, 0.5, derive_seed(cfg.master_seed, t));
                (t, g.relabeled(w_labels.clone()).expect("same size"))
            })
            .collect()
    };
    let mut cache: HashMap<String, Vec<crate::gfourier::FourierAudit>> = HashMap::new();
    let mut records = Vec::new();
    for (idx, gw) in graphs {
        let m = build_m_from_w_graph(&gw);
        let key = m.to_string();
        if !cache.contains_key(&key) {
            cache.insert(key.clone(), fourier_audit(s, &m, &ps)?);
        }
        for audit in &cache[&key] {
            let mut rec = single_record(cfg, records.len() as u64);
            rec.verdict("tv_le_fourier", audit.tv_le_fourier())
                .verdict("fourier_le_chain", audit.fourier_le_chain())
                .verdict("claim34", audit.claim34_ok())
                .verdict("claim34_floor", audit.claim34_floor_ok())
                .verdict("tensor", audit.tensor_ok)
                .verdict("mu_empty", audit.mu_empty_ok)
                .measure("w_graph", idx)
                .measure("s", s)
                .measure("r", r)
                .measure("audit", audit)
                .measure("lemma31", lemma31_bound(s, r, audit.p.min(1.0 - audit.p)));
            records.push(rec);
        }
    }
    Ok(Report::new(cfg, records, None))
}

fn host_graph(cfg: &ExperimentConfig, trial: u64) -> Result<Graph, HarnessError> {
    match &cfg.graph6 {
        Some(text) => Ok(Graph::from_graph6(text)?),
        None => {
            let n = cfg.n.ok_or(HarnessError::MissingParameter("graph6 or n"))?;
            let p = cfg.p.unwrap_or(0.5);
            check_p(p)?;
            Ok(sample_gnp(n, p, derive_seed(cfg.master_seed, trial)))
        }
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

fn orbit_run(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let trials = if cfg.graph6.is_some() { 1 } else { cfg.trials };
    let records = (0..trials)
        .map(|t| {
            let g = host_graph(cfg, t)?;
            let orbit = lc_orbit(&g, cfg.cap())?;
            let mut rec = single_record(cfg, t);
            rec.verdict("exact", !orbit.truncated)
                .measure("graph6", g.to_graph6())
                .measure("n", g.n())
                .measure("orbit_size", orbit.len())
                .measure("layer_sizes", &orbit.layer_sizes);
            Ok(rec)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(Report::new(cfg, records, None))
}

fn check_minor(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let g = host_graph(cfg, 0)?;
    let target = cfg
        .target_graph6
        .as_deref()
        .ok_or(HarnessError::MissingParameter("target_graph6"))?;
    let h = Graph::from_graph6(target)?;
    let on = cfg
        .on
        .clone()
        .unwrap_or_else(|| (0..h.n() as Label).collect());
    let h = h.relabeled(on)?;
    let d = is_vertex_minor(&g, &h, cfg.cap())?;
    let mut rec = single_record(cfg, 0);
    rec.verdict("decided", d.verdict != Verdict::Unknown)
        .measure("verdict", verdict_name(d.verdict))
        .measure("orbit_size", d.orbit_size)
        .measure("witness", &d.witness);
    Ok(Report::new(cfg, vec![rec], None))
}

fn universal(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let k = cfg.k.unwrap_or(2);
    let trials = if cfg.graph6.is_some() { 1 } else { cfg.trials };
    let records = (0..trials)
        .into_par_iter()
        .map(|t| {
            let g = host_graph(cfg, t)?;
            let (orbit, coverage) = subset_coverage(&g, k, cfg.cap())?;
            let first_bad = coverage.iter().find(|c| c.realized < c.targets);
            let verdict = match (first_bad, orbit.truncated) {
                (None, _) => Verdict::True,
                (Some(_), false) => Verdict::False,
                (Some(_), true) => Verdict::Unknown,
            };
            let per_subset: Vec<Value> = coverage
                .iter()
                .map(|c| json!({"subset": c.subset, "realized": c.realized, "targets": c.targets}))
                .collect();
            let mut rec = single_record(cfg, t);
            rec.verdict("decided", verdict != Verdict::Unknown)
                .measure("graph6", g.to_graph6())
                .measure("k", k)
                .measure("universal", verdict_name(verdict))
                .measure("orbit_size", orbit.len())
                .measure("subsets", per_subset);
            if let Some(bad) = first_bad {
                let missing = Graph::from_edge_mask(bad.subset.clone(), bad.first_missing.unwrap_or(0))?;
                rec.measure("counterexample", json!({"subset": bad.subset, "missing_edges": missing.edges()}));
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(Report::new(cfg, records, None))
}

fn pivot_pairs(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let rows = cfg.rows.unwrap_or(10);
    let cols = cfg.cols.unwrap_or(rows);
    let records = run_trials(cfg, |t, rng, rec| {
        let p = cfg.p_or_grid(t)?;
        let g = OrderedBipartiteGraph::from_biadjacency(random_biadjacency(rows, cols, p, rng));
        let pairing = find_pivot_pairs(&g);
        let rank = g.biadjacency().rank();
        rec.verdict("pairs_equal_rank", pairing.pairs.len() == rank)
            .verdict("certified", pairing.all_certified())
            .measure("rows", rows)
            .measure("cols", cols)
            .measure("p", p)
            .measure("rank", rank)
            .measure("pairs", &pairing.pairs);
        Ok(())
    })?;
    Ok(Report::new(cfg, records, None))
}

fn rank_tail(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let r = cfg.r.unwrap_or(40);
    let p = cfg.p.unwrap_or(0.3);
    check_p(p)?;
    let result = rank_tail_experiment(r, p, cfg.trials.max(1), cfg.master_seed)?;
    let mut rec = single_record(cfg, 0);
    rec.verdict("within_bound", result.within_bound())
        .measure("result", &result);
    Ok(Report::new(cfg, vec![rec], None))
}

fn bip_delta_verify(cfg: &ExperimentConfig) -> Result<Report, HarnessError> {
    let sizes = cfg.sizes.unwrap_or(12);
    if !(2..=64).contains(&sizes) {
        return Err(HarnessError::InvalidParameter(format!("sizes = {sizes} not in 2..=64")));
    }
    let records = run_trials(cfg, |t, rng, rec| {
        let p = cfg.p_or_grid(t)?;
        let a = rng.gen_range(2..=sizes);
        let b = rng.gen_range(2..=sizes);
        let g = OrderedBipartiteGraph::from_biadjacency(random_biadjacency(a, b, p, rng));
        let sl = rng.gen_range(1..a);
        let sr = rng.gen_range(1..b);
        let u_left = g.left()[..sl].to_vec();
        let u_right = g.right()[..sr].to_vec();
        let w = g.induced(&g.left()[sl..], &g.right()[sr..])?;
        let pairing = find_pivot_pairs(&w);
        let report = bipartite_delta_via_m(&g, &u_left, &u_right, &pairing.pairs)?;
        let kinds: Vec<&RefutationKind> = report.refutations.iter().map(|r| &r.kind).collect();
        rec.verdict("delta_sum", report.delta_sum_holds())
            .measure("sides", [a, b])
            .measure("u_sizes", [sl, sr])
            .measure("p", p)
            .measure("pairs", pairing.pairs.len())
            .measure("q_left_solved", report.q_left.is_some())
            .measure("q_right_solved", report.q_right.is_some())
            .measure("m_claim_holds", report.m.as_ref().map(|_| !kinds.contains(&&RefutationKind::MClaim)))
            .measure("refutations", &report.refutations);
        Ok(())
    })?;
    Ok(Report::new(cfg, records, None))
}

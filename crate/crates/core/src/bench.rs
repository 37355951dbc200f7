//! Monte Carlo sweeps: success rates over a budget ladder, minimal budgets,
//! exponent fits, and reproducible CSV / JSON-lines output.
//!
//! Config format: one `key = value` per line, `#` starts a comment.
//!
//! | key | meaning |
//! |---|---|
//! | `pattern` | permutation literal, e.g. `1,3,2` |
//! | `family` | `far`, `reduction` or `template` |
//! | `tester` | `sampler`, `interval` (far, reduction); `grid`, `binary` (template) |
//! | `n_grid` | strictly increasing comma list of lengths (template lengths m for `template`) |
//! | `eps` | proximity for `far` (default 0.1) |
//! | `trials` | runs per evaluated budget |
//! | `seed` | base seed |
//! | `out_dir` | output directory (default `.`) |
//! | `rounds` | rounds for `grid` (default 2) |
//! | `budget` | fixed budget for `grid`; otherwise the ladder is searched |
//! | `search` | `bisect` (default) or `full` ladder evaluation |
//! | `target` | success threshold (default 2/3) |
//! | `timing` | `on` records wall-clock ms; `off` (default) writes 0 so output is byte-stable |
//!
//! Per-trial seeds are `splitmix64` chains over (base seed, point index,
//! trial index, stream), see [`trial_seed`].

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forge::{
    forge_far_instance, forge_reduction_pair, forge_template_search, planted_count, snap_far_parameters, FarInstanceSpec,
};
use crate::oracle::{validate_witness, AccessMode, QueryOracle, TemplateOracle};
use crate::partition::{uspn, SignedPartition};
use crate::pattern::{Permutation, Sequence};
use crate::template::{binary_search_query_bound, template_binary_search, template_r_round_solver};
use crate::testers::{interval_test, sampler_test, IntervalConfig, SamplerConfig};

pub const DEFAULT_TARGET: f64 = 2.0 / 3.0;
pub const LADDER_RATIO: f64 = 1.189_207_115_002_721; // 2^(1/4)
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Far,
    Reduction,
    Template,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TesterId {
    Sampler,
    Interval,
    Grid,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Bisect,
    Full,
}

macro_rules! parse_enum {
    ($t:ty, $what:literal, $($s:literal => $v:expr),+) => {
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($s => Ok($v),)+
                    other => Err(Error::Config(format!("unknown {}: {other:?}", $what))),
                }
            }
        }
    };
}

parse_enum!(Family, "family", "far" => Family::Far, "reduction" => Family::Reduction, "template" => Family::Template);
parse_enum!(TesterId, "tester", "sampler" => TesterId::Sampler, "interval" => TesterId::Interval, "grid" => TesterId::Grid, "binary" => TesterId::Binary);
parse_enum!(SearchMode, "search mode", "bisect" => SearchMode::Bisect, "full" => SearchMode::Full);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub pattern: Permutation,
    pub family: Family,
    pub tester: TesterId,
    pub grid: Vec<usize>,
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub rounds: usize,
    pub budget: Option<usize>,
    pub search: SearchMode,
    pub target: f64,
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(pattern: Permutation, family: Family, tester: TesterId, grid: Vec<usize>, trials: usize, seed: u64) -> Self {
        SweepConfig {
            pattern,
            family,
            tester,
            grid,
            eps: 0.1,
            trials,
            seed,
            out_dir: PathBuf::from("."),
            rounds: 2,
            budget: None,
            search: SearchMode::Bisect,
            target: DEFAULT_TARGET,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.grid.is_empty() || !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("grid must be non-empty and strictly increasing".into()));
        }
        let ok = match self.family {
            Family::Far | Family::Reduction => matches!(self.tester, TesterId::Sampler | TesterId::Interval),
            Family::Template => matches!(self.tester, TesterId::Grid | TesterId::Binary),
        };
        if !ok {
            return Err(Error::Config(format!("tester {:?} does not apply to family {:?}", self.tester, self.family)));
        }
        if self.family == Family::Reduction && self.pattern.values() != [1, 3, 2] {
            return Err(Error::Config("the reduction family tests the pattern 1,3,2".into()));
        }
        if self.tester == TesterId::Interval && self.pattern.len() < 3 {
            return Err(Error::Config("the interval tester needs k >= 3".into()));
        }
        if self.tester == TesterId::Grid && self.rounds == 0 {
            return Err(Error::Config("rounds must be at least 1".into()));
        }
        if !(self.target > 0.0 && self.target <= 1.0) {
            return Err(Error::Config("target must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut pattern = None;
    let mut family = None;
    let mut tester = None;
    let mut grid = None;
    let mut trials = None;
    let mut seed = None;
    let mut cfg_rest: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got {line:?}") })?;
        let (k, v) = (k.trim(), v.trim());
        let bad = |msg: String| Error::Parse { line: i + 1, msg };
        match k {
            "pattern" => pattern = Some(v.parse::<Permutation>()?),
            "family" => family = Some(v.parse::<Family>()?),
            "tester" => tester = Some(v.parse::<TesterId>()?),
            "n_grid" => {
                grid = Some(
                    v.split(',')
                        .map(|x| x.trim().parse::<usize>().map_err(|_| bad(format!("bad grid value {x:?}"))))
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "trials" => trials = Some(v.parse::<usize>().map_err(|_| bad(format!("bad trials {v:?}")))?),
            "seed" => seed = Some(v.parse::<u64>().map_err(|_| bad(format!("bad seed {v:?}")))?),
            "eps" | "out_dir" | "rounds" | "budget" | "search" | "target" | "timing" => {
                cfg_rest.push((k.to_string(), v.to_string()))
            }
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    let missing = |what: &str| Error::Config(format!("missing key {what:?}"));
    let family = family.ok_or_else(|| missing("family"))?;
    let pattern = match (pattern, family) {
        (Some(p), _) => p,
        (None, Family::Template | Family::Reduction) => Permutation::new(vec![1, 3, 2])?,
        (None, Family::Far) => return Err(missing("pattern")),
    };
    let mut cfg = SweepConfig::new(
        pattern,
        family,
        tester.ok_or_else(|| missing("tester"))?,
        grid.ok_or_else(|| missing("n_grid"))?,
        trials.ok_or_else(|| missing("trials"))?,
        seed.ok_or_else(|| missing("seed"))?,
    );
    for (k, v) in cfg_rest {
        let bad = || Error::Config(format!("bad value for {k}: {v:?}"));
        match k.as_str() {
            "eps" => cfg.eps = v.parse().map_err(|_| bad())?,
            "out_dir" => cfg.out_dir = PathBuf::from(v),
            "rounds" => cfg.rounds = v.parse().map_err(|_| bad())?,
            "budget" => cfg.budget = Some(v.parse().map_err(|_| bad())?),
            "search" => cfg.search = v.parse()?,
            "target" => cfg.target = v.parse().map_err(|_| bad())?,
            "timing" => {
                cfg.timing = match v.as_str() {
                    "on" | "true" => true,
                    "off" | "false" => false,
                    _ => return Err(bad()),
                }
            }
            _ => unreachable!(),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Stream 0 seeds instances, stream 1 seeds testers.
pub fn trial_seed(base: u64, point: u64, trial: u64, stream: u64) -> u64 {
    let mut h = splitmix64(base);
    for v in [point, trial, stream] {
        h = splitmix64(h ^ v);
    }
    h
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = p + z2 / (2.0 * n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (((centre - half) / denom).max(0.0), ((centre + half) / denom).min(1.0))
}

/// Geometric ladder from `lo` to `hi` (both included), ratio 2^(1/4).
pub fn budget_ladder(lo: usize, hi: usize) -> Vec<usize> {
    let lo = lo.max(1);
    let mut out = vec![lo];
    let mut x = lo as f64;
    while *out.last().unwrap() < hi {
        x *= LADDER_RATIO;
        let q = (x.round() as usize).min(hi);
        if q > *out.last().unwrap() {
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub points_used: usize,
}

/// Least squares of log q against log x.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::Precondition("points must be positive".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-12 {
        return Err(Error::Precondition("grid has no spread".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(Fit { slope, intercept, stderr, points_used: points.len() })
}

/// A grid point after snapping to feasible parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub index: usize,
    pub requested: usize,
    pub n_or_m: usize,
    pub eps: f64,
    pub skipped: Option<String>,
}

fn resolve_point(cfg: &SweepConfig, index: usize) -> Point {
    let requested = cfg.grid[index];
    let k = cfg.pattern.len();
    let mut pt = Point { index, requested, n_or_m: requested, eps: cfg.eps, skipped: None };
    match cfg.family {
        Family::Far => match snap_far_parameters(k, requested, cfg.eps) {
            Ok((n, eps)) => {
                pt.n_or_m = n;
                pt.eps = eps;
                if let Err(e) = planted_count(k, n, eps) {
                    pt.skipped = Some(e.to_string());
                }
            }
            Err(e) => pt.skipped = Some(e.to_string()),
        },
        Family::Reduction => {
            let m = requested / 5;
            pt.n_or_m = 5 * m;
            pt.eps = 0.2;
            if m < 2 {
                pt.skipped = Some("reduction needs n >= 10".into());
            }
        }
        Family::Template => {
            if requested == 0 {
                pt.skipped = Some("template length must be positive".into());
            }
        }
    }
    pt
}

/// Budget range searched at a point.
fn ladder_for(cfg: &SweepConfig, pt: &Point) -> Vec<usize> {
    match (cfg.family, cfg.tester, cfg.budget) {
        (_, TesterId::Binary, _) => vec![binary_search_query_bound(pt.n_or_m)],
        (_, _, Some(b)) => vec![b],
        (Family::Template, _, None) => budget_ladder(cfg.rounds, 4 * pt.n_or_m),
        _ => budget_ladder(cfg.pattern.len(), pt.n_or_m),
    }
}

struct Prepared {
    partition: Option<SignedPartition>,
}

fn prepare(cfg: &SweepConfig) -> Result<Prepared> {
    let partition = match cfg.family {
        Family::Far => Some(uspn(&cfg.pattern)?.witness),
        _ => None,
    };
    Ok(Prepared { partition })
}

enum Instance {
    Seq(Sequence),
    Template(crate::forge::TemplateSearchInstance),
}

fn build_instance(cfg: &SweepConfig, prep: &Prepared, pt: &Point, seed: u64) -> Result<Instance> {
    Ok(match cfg.family {
        Family::Far => {
            let spec = FarInstanceSpec {
                pi: cfg.pattern.clone(),
                partition: prep.partition.clone().unwrap(),
                n: pt.n_or_m,
                eps: pt.eps,
                seed,
            };
            Instance::Seq(forge_far_instance(&spec)?.sequence)
        }
        Family::Reduction => {
            let inst = forge_template_search(pt.n_or_m / 5, seed)?;
            Instance::Seq(forge_reduction_pair(&inst)?.f_no)
        }
        Family::Template => Instance::Template(forge_template_search(pt.n_or_m, seed)?),
    })
}

fn run_once(cfg: &SweepConfig, inst: &Instance, pt: &Point, q: usize, seed: u64) -> Result<bool> {
    match inst {
        Instance::Seq(f) => {
            let mut oracle = QueryOracle::new(f, AccessMode::NonAdaptive);
            let v = match cfg.tester {
                TesterId::Sampler => {
                    sampler_test(&mut oracle, &cfg.pattern, pt.eps, seed, &SamplerConfig { constant: None, queries: Some(q) })?
                }
                _ => {
                    let p = q as f64 / (3.0 * f.len() as f64);
                    let ic = IntervalConfig { c: None, inclusion: Some(p), fallback_constant: None };
                    interval_test(&mut oracle, &cfg.pattern, pt.eps, seed, &ic)?
                }
            };
            if v.rejected() {
                let ok = v.witness.as_ref().is_some_and(|w| validate_witness(oracle.transcript(), &cfg.pattern, w));
                if !ok {
                    return Err(Error::Precondition("rejection without a valid witness".into()));
                }
            }
            Ok(v.rejected())
        }
        Instance::Template(t) => {
            let rep = match cfg.tester {
                TesterId::Binary => template_binary_search(&mut TemplateOracle::new(t, AccessMode::Adaptive))?,
                _ => {
                    let mut o = TemplateOracle::new(t, AccessMode::Rounds(cfg.rounds));
                    template_r_round_solver(&mut o, cfg.rounds, q)?
                }
            };
            Ok(rep.estimate == t.delta())
        }
    }
}

/// One evaluated (point, budget) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub point_id: usize,
    pub n_or_m: usize,
    pub q: usize,
    pub trials: usize,
    pub successes: usize,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub wall_ms: u64,
}

fn evaluate(cfg: &SweepConfig, prep: &Prepared, pt: &Point, q: usize) -> Result<Row> {
    let start = Instant::now();
    let outcomes: Vec<bool> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let inst = build_instance(cfg, prep, pt, trial_seed(cfg.seed, pt.index as u64, t as u64, 0))?;
            run_once(cfg, &inst, pt, q, trial_seed(cfg.seed, pt.index as u64, t as u64, 1))
        })
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|&&s| s).count();
    let (wilson_lo, wilson_hi) = wilson_interval(successes, cfg.trials);
    Ok(Row {
        point_id: pt.index,
        n_or_m: pt.n_or_m,
        q,
        trials: cfg.trials,
        successes,
        wilson_lo,
        wilson_hi,
        wall_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MinimalBudget {
    Found { q: usize, successes: usize, trials: usize, wilson: (f64, f64), bracketed: bool },
    NotBracketed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub point: Point,
    pub minimal: Option<MinimalBudget>,
}

fn success(cfg: &SweepConfig, row: &Row) -> bool {
    row.successes as f64 >= cfg.target * row.trials as f64
}

/// Binary search over the ladder; rows are returned in evaluation order.
fn search_point(cfg: &SweepConfig, prep: &Prepared, pt: &Point) -> Result<(MinimalBudget, Vec<Row>)> {
    let ladder = ladder_for(cfg, pt);
    let mut rows = Vec::new();
    let eval = |i: usize, rows: &mut Vec<Row>| -> Result<Row> {
        if let Some(r) = rows.iter().find(|r| r.q == ladder[i]) {
            return Ok(r.clone());
        }
        let r = evaluate(cfg, prep, pt, ladder[i])?;
        rows.push(r.clone());
        Ok(r)
    };
    if cfg.search == SearchMode::Full {
        for i in 0..ladder.len() {
            eval(i, &mut rows)?;
        }
    }
    let top = eval(ladder.len() - 1, &mut rows)?;
    if !success(cfg, &top) {
        return Ok((MinimalBudget::NotBracketed, rows));
    }
    let bottom = eval(0, &mut rows)?;
    let (mut lo, mut hi) = (0usize, ladder.len() - 1);
    let bracketed = !success(cfg, &bottom);
    if !bracketed {
        hi = 0;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if success(cfg, &eval(mid, &mut rows)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let best = eval(hi, &mut rows)?;
    Ok((
        MinimalBudget::Found {
            q: best.q,
            successes: best.successes,
            trials: best.trials,
            wilson: (best.wilson_lo, best.wilson_hi),
            bracketed,
        },
        rows,
    ))
}

/// Smallest ladder budget reaching the target at one grid point.
pub fn minimal_budget(cfg: &SweepConfig, point: usize) -> Result<MinimalBudget> {
    cfg.validate()?;
    let pt = resolve_point(cfg, point);
    if let Some(reason) = pt.skipped {
        return Err(Error::InvalidSpec(reason));
    }
    with_threads(|| search_point(cfg, &prepare(cfg)?, &pt).map(|(m, _)| m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<PointResult>,
    pub rows: Vec<Row>,
    pub fit: Option<Fit>,
}

impl SweepResult {
    /// (n or m, q*) over bracketed points.
    pub fn bracketed(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|p| match p.minimal {
                Some(MinimalBudget::Found { q, bracketed: true, .. }) => Some((p.point.n_or_m as f64, q as f64)),
                _ => None,
            })
            .collect()
    }
}

fn with_threads<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match std::env::var("PERMPAT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(t) if t > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            pool.install(f)
        }
        _ => f(),
    }
}

pub fn success_curve(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    with_threads(|| {
        let prep = prepare(cfg)?;
        let mut points = Vec::new();
        let mut rows = Vec::new();
        for i in 0..cfg.grid.len() {
            let pt = resolve_point(cfg, i);
            if pt.skipped.is_some() {
                points.push(PointResult { point: pt, minimal: None });
                continue;
            }
            let (minimal, mut r) = search_point(cfg, &prep, &pt)?;
            r.sort_by_key(|row| row.q);
            rows.extend(r);
            points.push(PointResult { point: pt, minimal: Some(minimal) });
        }
        let mut res = SweepResult { points, rows, fit: None };
        res.fit = fit_exponent(&res.bracketed()).ok();
        Ok(res)
    })
}

pub fn render_csv(result: &SweepResult) -> String {
    let mut out = String::from("point_id,n_or_m,q,trials,successes,wilson_lo,wilson_hi,wall_ms\n");
    for r in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6},{}",
            r.point_id, r.n_or_m, r.q, r.trials, r.successes, r.wilson_lo, r.wilson_hi, r.wall_ms
        )
        .unwrap();
    }
    out
}

/// One JSON object per line: each point's q*, then the fitted exponent.
pub fn render_summary(cfg: &SweepConfig, result: &SweepResult) -> String {
    let mut out = String::new();
    for p in &result.points {
        let rec = serde_json::json!({
            "record": "point",
            "point_id": p.point.index,
            "requested": p.point.requested,
            "n_or_m": p.point.n_or_m,
            "eps": p.point.eps,
            "skipped": p.point.skipped,
            "minimal_budget": p.minimal,
        });
        writeln!(out, "{rec}").unwrap();
    }
    let rec = match &result.fit {
        Some(f) => serde_json::json!({
            "record": "exponent",
            "family": cfg.family,
            "tester": cfg.tester,
            "pattern": cfg.pattern.to_string(),
            "slope": f.slope,
            "stderr": f.stderr,
            "points_used": f.points_used,
        }),
        None => serde_json::json!({
            "record": "exponent",
            "family": cfg.family,
            "tester": cfg.tester,
            "pattern": cfg.pattern.to_string(),
            "slope": null,
            "stderr": null,
            "points_used": result.bracketed().len(),
        }),
    };
    writeln!(out, "{rec}").unwrap();
    out
}

pub fn render_gnuplot(csv_name: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set key left top\n\
         set xlabel 'budget q'\n\
         set ylabel 'success rate'\n\
         unset logscale y\n\
         plot '{csv_name}' using 3:($5/$4):6:7 skip 1 with yerrorbars title 'success (Wilson 95%)'\n"
    )
}

/// Writes `sweep.csv`, `summary.jsonl` and optionally `plot.gp`.
pub fn write_outputs(cfg: &SweepConfig, result: &SweepResult, dir: &Path, gnuplot: bool) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv = dir.join("sweep.csv");
    fs::write(&csv, render_csv(result))?;
    written.push(csv);
    let summary = dir.join("summary.jsonl");
    fs::write(&summary, render_summary(cfg, result))?;
    written.push(summary);
    if gnuplot {
        let gp = dir.join("plot.gp");
        fs::write(&gp, render_gnuplot("sweep.csv"))?;
        written.push(gp);
    }
    Ok(written)
}

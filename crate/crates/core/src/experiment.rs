//! Experiment specs and the figure-reproduction pipelines.
//!
//! A spec file is a list of `key = value` lines followed by one `[model]`
//! block per graph. `#` starts a comment.
//!
//! ```text
//! name = fig5
//! kind = attack_curve
//! attack = topdeg
//! threshold = random
//! trials = 100
//! agg = max
//! seed = 1
//!
//! [model]
//! label = er
//! model = er
//! n = 10000
//! p = 0.0015001500150015
//! ```
//!
//! Streams: model `i` is generated from `(seed, 1000 + i)`, its random attack
//! order from `(seed, 2000 + i)`, and trial `j` at attack size `k` from
//! `(seed, k * 10^6 + j)`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::{community_rows, degree_histogram};
use crate::cascade::{
    attack_curve, infection_set, random_prefix, trial_stream, Aggregate, AttackStrategy, CurveConfig, ThresholdAssignment,
    ThresholdMode, CURVE_HEADER,
};
use crate::error::{Error, Result};
use crate::generators::{generate_on_stream, GenParams, LogBase, Model};
use crate::graph::{Graph, NodeSet};
use crate::rng::RngStream;
use crate::svg::{LineChart, Series};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// Infection and injury fractions against attack size.
    AttackCurve,
    /// Degree histogram and CCDF per model.
    DegreeDistribution,
    /// Conductance of every community per model.
    ConductanceDistribution,
    /// Independent random initial sets, one row per trial.
    RandomSets,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::AttackCurve => "attack_curve",
            ExperimentKind::DegreeDistribution => "degree_distribution",
            ExperimentKind::ConductanceDistribution => "conductance_distribution",
            ExperimentKind::RandomSets => "random_sets",
        }
    }

    pub fn header(self) -> Vec<&'static str> {
        let mut h = vec!["experiment", "model"];
        match self {
            ExperimentKind::AttackCurve => h.extend(CURVE_HEADER),
            ExperimentKind::DegreeDistribution => h.extend(["degree", "count", "fraction", "ccdf"]),
            ExperimentKind::ConductanceDistribution => h.extend(["color", "size", "conductance"]),
            ExperimentKind::RandomSets => h.extend([
                "k",
                "trial",
                "threshold_mode",
                "phi",
                "infection_count",
                "infection_fraction",
                "full_infection",
                "no_spread",
            ]),
        }
        h
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ExperimentKind::AttackCurve,
            ExperimentKind::DegreeDistribution,
            ExperimentKind::ConductanceDistribution,
            ExperimentKind::RandomSets,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::param(format!("unknown experiment kind `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelEntry {
    pub label: String,
    pub params: GenParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
    pub models: Vec<ModelEntry>,
    pub attack: AttackStrategy,
    /// Attack sizes; `None` means `1..=ceil(5 ln n)` per model.
    pub ks: Option<Vec<usize>>,
    pub thresholds: ThresholdMode,
    pub trials: usize,
    pub agg: Aggregate,
    pub master_seed: u64,
    pub csv: String,
    pub svg: Option<String>,
}

/// `ceil(5 ln n)`.
pub fn default_k_max(n: usize) -> usize {
    (5.0 * (n as f64).ln()).ceil() as usize
}

impl ExperimentSpec {
    pub fn new(name: &str, kind: ExperimentKind) -> Self {
        Self {
            name: name.to_string(),
            kind,
            models: Vec::new(),
            attack: AttackStrategy::TopDegree,
            ks: None,
            thresholds: ThresholdMode::Random,
            trials: 1,
            agg: Aggregate::Max,
            master_seed: 1,
            csv: format!("{name}.csv"),
            svg: None,
        }
    }

    pub fn with_model(mut self, label: &str, params: GenParams) -> Self {
        self.models.push(ModelEntry { label: label.to_string(), params });
        self
    }

    /// Attack sizes used for model `i`.
    pub fn ks_for(&self, i: usize) -> Vec<usize> {
        match &self.ks {
            Some(ks) => ks.clone(),
            None => match self.kind {
                ExperimentKind::RandomSets => vec![1],
                _ => (1..=default_k_max(self.models[i].params.n)).collect(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(['/', '\\', ',']) {
            return Err(Error::param(format!("invalid experiment name `{}`", self.name)));
        }
        if self.models.is_empty() {
            return Err(Error::param("an experiment needs at least one [model] block"));
        }
        self.thresholds.validate()?;
        if self.trials == 0 || self.trials >= 1_000_000 {
            return Err(Error::param("trials must lie in 1..10^6"));
        }
        if let Some(ks) = &self.ks {
            if ks.is_empty() || ks[0] == 0 || ks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::param("k schedule must be positive and strictly increasing"));
            }
        }
        for (i, m) in self.models.iter().enumerate() {
            if m.label.is_empty() || m.label.contains([',', '"', '\n']) {
                return Err(Error::param(format!("invalid model label `{}`", m.label)));
            }
            m.params.validate()?;
            if matches!(self.kind, ExperimentKind::ConductanceDistribution)
                && !matches!(m.params.model, Model::Security | Model::Overlap)
            {
                return Err(Error::param("conductance distributions need security or overlap models"));
            }
            if let Some(&k_max) = self.ks_for(i).last() {
                if k_max > m.params.n {
                    return Err(Error::param(format!("attack size {k_max} exceeds n={} for `{}`", m.params.n, m.label)));
                }
            }
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "kind = {}", self.kind.as_str());
        let _ = writeln!(s, "attack = {}", self.attack);
        let _ = writeln!(s, "threshold = {}", self.thresholds);
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "agg = {}", self.agg);
        if let Some(ks) = &self.ks {
            let list: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(s, "k = {}", list.join(","));
        }
        let _ = writeln!(s, "seed = {}", self.master_seed);
        let _ = writeln!(s, "csv = {}", self.csv);
        if let Some(svg) = &self.svg {
            let _ = writeln!(s, "svg = {svg}");
        }
        for m in &self.models {
            let p = &m.params;
            let _ = writeln!(s, "\n[model]");
            let _ = writeln!(s, "label = {}", m.label);
            let _ = writeln!(s, "model = {}", p.model);
            let _ = writeln!(s, "n = {}", p.n);
            match p.model {
                Model::Er => {
                    let _ = writeln!(s, "p = {}", p.p);
                }
                Model::Pa => {
                    let _ = writeln!(s, "d = {}", p.d);
                }
                Model::Security => {
                    let _ = writeln!(s, "d = {}", p.d);
                    let _ = writeln!(s, "a = {}", p.a);
                }
                Model::Overlap => {
                    let _ = writeln!(s, "d1 = {}", p.d1);
                    let _ = writeln!(s, "d2 = {}", p.d2);
                    let _ = writeln!(s, "a = {}", p.a);
                }
            }
            if p.log_base != LogBase::Natural {
                let _ = writeln!(s, "log_base = {}", p.log_base.as_str());
            }
            if p.allow_parallel {
                let _ = writeln!(s, "allow_parallel = true");
            }
        }
        s
    }
}

fn parse_value<T: FromStr>(value: &str, key: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid value `{value}` for `{key}`")))
}

fn parse_ks(value: &str, line: usize) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: usize = parse_value(lo.trim(), "k", line)?;
        let hi: usize = parse_value(hi.trim(), "k", line)?;
        return Ok((lo..=hi).collect());
    }
    value.split(',').map(|v| parse_value(v.trim(), "k", line)).collect()
}

struct ModelDraft {
    line: usize,
    label: Option<String>,
    model: Option<Model>,
    n: Option<usize>,
    p: f64,
    d: Option<usize>,
    a: f64,
    d1: usize,
    d2: usize,
    log_base: LogBase,
    allow_parallel: bool,
}

impl ModelDraft {
    fn new(line: usize) -> Self {
        Self {
            line,
            label: None,
            model: None,
            n: None,
            p: 0.0,
            d: None,
            a: 0.0,
            d1: 0,
            d2: 0,
            log_base: LogBase::Natural,
            allow_parallel: false,
        }
    }

    fn finish(self, seed: u64) -> Result<ModelEntry> {
        let model = self.model.ok_or_else(|| Error::parse(self.line, "[model] block without `model`"))?;
        let n = self.n.ok_or_else(|| Error::parse(self.line, "[model] block without `n`"))?;
        let d = match model {
            Model::Overlap => self.d.unwrap_or(self.d1 + self.d2),
            _ => self.d.unwrap_or(0),
        };
        Ok(ModelEntry {
            label: self.label.unwrap_or_else(|| model.as_str().to_string()),
            params: GenParams {
                model,
                n,
                p: self.p,
                d,
                a: self.a,
                d1: self.d1,
                d2: self.d2,
                log_base: self.log_base,
                allow_parallel: self.allow_parallel,
                master_seed: seed,
            },
        })
    }
}

/// Parses and validates a spec. Unknown keys are errors naming the key and line.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new("experiment", ExperimentKind::AttackCurve);
    let mut name_seen = false;
    let mut csv_seen = false;
    let mut drafts: Vec<ModelDraft> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "[model]" {
            drafts.push(ModelDraft::new(line));
            continue;
        }
        if content.starts_with('[') {
            return Err(Error::parse(line, format!("unknown section `{content}`")));
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(line, format!("expected `key = value`, found `{content}`")))?;
        if let Some(m) = drafts.last_mut() {
            match key {
                "label" => m.label = Some(value.to_string()),
                "model" => m.model = Some(parse_value(value, key, line)?),
                "n" => m.n = Some(parse_value(value, key, line)?),
                "p" => m.p = parse_value(value, key, line)?,
                "d" => m.d = Some(parse_value(value, key, line)?),
                "a" => m.a = parse_value(value, key, line)?,
                "d1" => m.d1 = parse_value(value, key, line)?,
                "d2" => m.d2 = parse_value(value, key, line)?,
                "log_base" => m.log_base = parse_value(value, key, line)?,
                "allow_parallel" => m.allow_parallel = parse_value(value, key, line)?,
                _ => return Err(Error::parse(line, format!("unknown model key `{key}`"))),
            }
            continue;
        }
        match key {
            "name" => {
                spec.name = value.to_string();
                name_seen = true;
            }
            "kind" => spec.kind = parse_value(value, key, line)?,
            "attack" => spec.attack = parse_value(value, key, line)?,
            "threshold" => spec.thresholds = parse_value(value, key, line)?,
            "trials" => spec.trials = parse_value(value, key, line)?,
            "agg" => spec.agg = parse_value(value, key, line)?,
            "k" => spec.ks = Some(parse_ks(value, line)?),
            "seed" => spec.master_seed = parse_value(value, key, line)?,
            "csv" => {
                spec.csv = value.to_string();
                csv_seen = true;
            }
            "svg" => spec.svg = Some(value.to_string()),
            _ => return Err(Error::parse(line, format!("unknown key `{key}`"))),
        }
    }
    if !name_seen {
        return Err(Error::parse(1, "spec has no `name`"));
    }
    if !csv_seen {
        spec.csv = format!("{}.csv", spec.name);
    }
    spec.models = drafts
        .into_iter()
        .map(|d| d.finish(spec.master_seed))
        .collect::<Result<_>>()?;
    spec.validate()?;
    Ok(spec)
}

/// Re-seeds every model with `seed`.
pub fn with_seed(mut spec: ExperimentSpec, seed: u64) -> ExperimentSpec {
    spec.master_seed = seed;
    for m in &mut spec.models {
        m.params.master_seed = seed;
    }
    spec
}

fn er_mean_degree(n: usize, d: usize) -> f64 {
    d as f64 / (n as f64 - 1.0)
}

const FIG_N: usize = 10_000;

fn curve_spec(name: &str) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(name, ExperimentKind::AttackCurve);
    s.trials = 100;
    s.svg = Some(format!("{name}.svg"));
    s
}

/// The three-model comparison with `d` edges per step.
pub fn fig5_spec(name: &str, d: usize) -> ExperimentSpec {
    curve_spec(name)
        .with_model("er", GenParams::er(FIG_N, er_mean_degree(FIG_N, d), 1))
        .with_model("pa", GenParams::pa(FIG_N, d, 1))
        .with_model("security", GenParams::security(FIG_N, d, 1.5, 1))
}

fn security_vs_overlap(s: ExperimentSpec) -> ExperimentSpec {
    s.with_model("security", GenParams::security(FIG_N, 10, 1.5, 1))
        .with_model("overlap", GenParams::overlap(FIG_N, 5, 5, 1.5, 1))
}

pub fn builtin_specs() -> Vec<ExperimentSpec> {
    let mut out = Vec::new();
    for (name, d) in [("fig1a", 10), ("fig1b", 15)] {
        out.push(curve_spec(name).with_model("er", GenParams::er(FIG_N, er_mean_degree(FIG_N, d), 1)));
    }
    for (name, d) in [("fig2a", 10), ("fig2b", 15)] {
        out.push(curve_spec(name).with_model("pa", GenParams::pa(FIG_N, d, 1)));
    }
    out.push(fig5_spec("fig5", 15));
    out.push(fig5_spec("fig5-d10", 10));

    let mut fig6 = security_vs_overlap(ExperimentSpec::new("fig6", ExperimentKind::DegreeDistribution));
    fig6.svg = Some("fig6.svg".into());
    out.push(fig6);
    let mut fig7 = security_vs_overlap(ExperimentSpec::new("fig7", ExperimentKind::ConductanceDistribution));
    fig7.svg = Some("fig7.svg".into());
    out.push(fig7);
    out.push(security_vs_overlap(curve_spec("fig8")));

    let mut single = ExperimentSpec::new("thm-pa-single", ExperimentKind::RandomSets)
        .with_model("pa", GenParams::pa(5_000, 20, 1));
    single.thresholds = ThresholdMode::Uniform(1.0 / 40.0);
    single.ks = Some(vec![1]);
    single.trials = 100;
    out.push(single);

    let mut robust = ExperimentSpec::new("thm-pa-robust", ExperimentKind::RandomSets)
        .with_model("pa", GenParams::pa(10_000, 10, 1));
    robust.thresholds = ThresholdMode::Uniform(0.11);
    robust.ks = Some(vec![30]);
    robust.trials = 100;
    out.push(robust);
    out
}

pub fn builtin(name: &str) -> Option<ExperimentSpec> {
    builtin_specs().into_iter().find(|s| s.name == name)
}

/// Rendered outputs of one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub csv: String,
    pub svg: Option<String>,
    /// Raw rows (without the experiment column) for programmatic checks.
    pub rows: Vec<Vec<String>>,
}

impl ExperimentOutput {
    /// Rows whose model column equals `label`.
    pub fn rows_for<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Vec<String>> + 'a {
        self.rows.iter().filter(move |r| r[0] == label)
    }
}

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "CASCADE_NET_THREADS";

/// Installs the global thread pool, honouring `CASCADE_NET_THREADS`.
/// Returns the cap that was applied, if any.
pub fn configure_threads() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::param(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // A pool installed earlier in the process wins; that is fine for a cap.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(Some(threads))
}

/// Stream for generating model `i`.
pub fn graph_stream(i: usize) -> u64 {
    1000 + i as u64
}

/// Stream for the random attack order of model `i`.
pub fn attack_stream(i: usize) -> u64 {
    2000 + i as u64
}

pub fn generate_models(spec: &ExperimentSpec) -> Result<Vec<Graph>> {
    spec.models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let params = GenParams { master_seed: spec.master_seed, ..m.params.clone() };
            generate_on_stream(&params, graph_stream(i))
        })
        .collect()
}

fn model_rows(spec: &ExperimentSpec, i: usize, g: &Graph) -> Result<Vec<Vec<String>>> {
    let label = &spec.models[i].label;
    let mut rows = Vec::new();
    match spec.kind {
        ExperimentKind::AttackCurve => {
            let cfg = CurveConfig {
                strategy: spec.attack,
                ks: spec.ks_for(i),
                thresholds: spec.thresholds,
                trials: spec.trials,
                agg: spec.agg,
                master_seed: spec.master_seed,
                attack_stream: attack_stream(i),
            };
            for row in attack_curve(g, &cfg)? {
                let mut r = vec![label.clone()];
                r.extend(row.fields());
                rows.push(r);
            }
        }
        ExperimentKind::DegreeDistribution => {
            let hist = degree_histogram(g);
            let n = g.n() as f64;
            let mut tail: usize = hist.iter().sum();
            for (k, &count) in hist.iter().enumerate() {
                if count > 0 {
                    rows.push(vec![
                        label.clone(),
                        k.to_string(),
                        count.to_string(),
                        format!("{:.6}", count as f64 / n),
                        format!("{:.6}", tail as f64 / n),
                    ]);
                }
                tail -= count;
            }
        }
        ExperimentKind::ConductanceDistribution => {
            for c in community_rows(g)? {
                if let Some(phi) = c.conductance {
                    rows.push(vec![label.clone(), c.color.0.to_string(), c.size.to_string(), format!("{phi:.6}")]);
                }
            }
        }
        ExperimentKind::RandomSets => {
            let n = g.n();
            let fixed = match spec.thresholds {
                ThresholdMode::Uniform(_) => {
                    Some(ThresholdAssignment::assign(g, spec.thresholds, &mut RngStream::new(spec.master_seed, 0))?)
                }
                ThresholdMode::Random => None,
            };
            for k in spec.ks_for(i) {
                let counts: Vec<usize> = (0..spec.trials)
                    .into_par_iter()
                    .map(|j| {
                        let mut rng = RngStream::new(spec.master_seed, trial_stream(k, j));
                        let s = NodeSet::from_ids(n, random_prefix(n, k, &mut rng));
                        let drawn;
                        let thr = match &fixed {
                            Some(t) => t,
                            None => {
                                drawn = ThresholdAssignment::assign(g, spec.thresholds, &mut rng)
                                    .expect("thresholds validated");
                                &drawn
                            }
                        };
                        infection_set(g, thr, &s).len()
                    })
                    .collect();
                for (j, count) in counts.into_iter().enumerate() {
                    rows.push(vec![
                        label.clone(),
                        k.to_string(),
                        j.to_string(),
                        spec.thresholds.name().to_string(),
                        spec.thresholds.phi().map(|p| p.to_string()).unwrap_or_default(),
                        count.to_string(),
                        format!("{:.6}", count as f64 / n as f64),
                        u8::from(count == n).to_string(),
                        u8::from(count == k).to_string(),
                    ]);
                }
            }
        }
    }
    Ok(rows)
}

fn render_svg(spec: &ExperimentSpec, rows: &[Vec<String>]) -> String {
    let col = |name: &str| spec.kind.header().iter().position(|h| *h == name).expect("known column") - 1;
    let num = |r: &Vec<String>, c: usize| r[c].parse::<f64>().unwrap_or(f64::NAN);
    let series_for = |label: &str, x: usize, y: usize| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| r[0] == label).map(|r| (num(r, x), num(r, y))).collect()
    };
    let labels: Vec<&str> = spec.models.iter().map(|m| m.label.as_str()).collect();
    let (x_label, y_label, log_log, series) = match spec.kind {
        ExperimentKind::AttackCurve => {
            let (k, inf, inj) = (col("k"), col("infection_fraction"), col("injury_fraction"));
            let mut series: Vec<Series> = labels
                .iter()
                .map(|l| Series { label: format!("{l} infection"), points: series_for(l, k, inf) })
                .collect();
            if labels.len() == 1 {
                series.push(Series { label: format!("{} injury", labels[0]), points: series_for(labels[0], k, inj) });
            }
            ("attack size k", "fraction of nodes", false, series)
        }
        ExperimentKind::DegreeDistribution => {
            let (deg, ccdf) = (col("degree"), col("ccdf"));
            let series = labels.iter().map(|l| Series { label: l.to_string(), points: series_for(l, deg, ccdf) }).collect();
            ("degree k", "P(degree >= k)", true, series)
        }
        ExperimentKind::ConductanceDistribution => {
            let c = col("conductance");
            let series = labels
                .iter()
                .map(|l| {
                    let mut vals: Vec<f64> = rows.iter().filter(|r| r[0] == *l).map(|r| num(r, c)).collect();
                    vals.sort_by(f64::total_cmp);
                    let m = vals.len() as f64;
                    let points = vals.iter().enumerate().map(|(i, &v)| (v, (i + 1) as f64 / m)).collect();
                    Series { label: l.to_string(), points }
                })
                .collect();
            ("community conductance", "cumulative fraction of communities", false, series)
        }
        ExperimentKind::RandomSets => {
            let (t, f) = (col("trial"), col("infection_fraction"));
            let series = labels.iter().map(|l| Series { label: l.to_string(), points: series_for(l, t, f) }).collect();
            ("trial", "infection fraction", false, series)
        }
    };
    LineChart { title: spec.name.clone(), x_label: x_label.into(), y_label: y_label.into(), series, log_log }.render()
}

/// Runs every model of `spec` and renders the CSV (and SVG when the spec
/// names one and `svg` is set). Output depends only on the spec.
pub fn run_experiment(spec: &ExperimentSpec, svg: bool) -> Result<ExperimentOutput> {
    spec.validate()?;
    let graphs = generate_models(spec)?;
    let mut rows = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        rows.extend(model_rows(spec, i, g)?);
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(spec.kind.header())?;
    for r in &rows {
        w.write_record(std::iter::once(spec.name.as_str()).chain(r.iter().map(String::as_str)))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .expect("csv output is UTF-8");
    let svg = (svg && spec.svg.is_some()).then(|| render_svg(spec, &rows));
    Ok(ExperimentOutput { csv, svg, rows })
}

/// Runs `spec` and writes its files into `dir`; returns the written paths.
pub fn run_to_dir(spec: &ExperimentSpec, dir: &Path, svg: bool) -> Result<Vec<PathBuf>> {
    let out = run_experiment(spec, svg)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv_path = dir.join(&spec.csv);
    fs::write(&csv_path, &out.csv)?;
    written.push(csv_path);
    if let (Some(svg), Some(name)) = (&out.svg, &spec.svg) {
        let path = dir.join(name);
        fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}

//! Threshold cascades, physical attacks and Monte Carlo attack curves.
//!
//! A node `x` outside the targeted set becomes infected once
//! `infected_incidences(x) / deg(x) >= phi(x)`, counting parallel edges with
//! multiplicity. Each node's threshold is stored as the smallest integer
//! count that satisfies the rule, so propagation only compares counters.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{largest_component_excluding, Graph, NodeId, NodeSet};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThresholdMode {
    /// Every node has threshold `phi`.
    Uniform(f64),
    /// `phi(v) = r / deg(v)` with `r` uniform in `1..=deg(v)`.
    Random,
}

impl ThresholdMode {
    pub fn name(&self) -> &'static str {
        match self {
            ThresholdMode::Uniform(_) => "uniform",
            ThresholdMode::Random => "random",
        }
    }

    pub fn phi(&self) -> Option<f64> {
        match *self {
            ThresholdMode::Uniform(phi) => Some(phi),
            ThresholdMode::Random => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let ThresholdMode::Uniform(phi) = *self {
            if !(phi > 0.0 && phi <= 1.0) {
                return Err(Error::param(format!("uniform threshold must lie in (0, 1], got {phi}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMode::Uniform(phi) => write!(f, "uniform:{phi}"),
            ThresholdMode::Random => f.write_str("random"),
        }
    }
}

/// Parses `random` or `uniform:PHI`.
impl FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mode = match s.split_once(':') {
            None if s == "random" => ThresholdMode::Random,
            Some(("uniform", phi)) => ThresholdMode::Uniform(
                phi.parse().map_err(|_| Error::param(format!("invalid threshold value `{phi}`")))?,
            ),
            _ => return Err(Error::param(format!("unknown threshold `{s}` (expected random or uniform:PHI)"))),
        };
        mode.validate()?;
        Ok(mode)
    }
}

/// Per-node thresholds plus the equivalent integer trigger counts.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdAssignment {
    mode: ThresholdMode,
    phi: Vec<f64>,
    required: Vec<u32>,
}

/// Trigger count for isolated nodes, which only the attacker can infect.
const NEVER: u32 = u32::MAX;

/// Smallest `c` in `1..=deg` with `c / deg >= phi`, evaluated in the same
/// floating-point arithmetic the rule is stated in.
fn required_count(phi: f64, deg: usize) -> u32 {
    if deg == 0 {
        return NEVER;
    }
    let d = deg as f64;
    let mut c = ((phi * d).ceil() as usize).clamp(1, deg);
    while c < deg && (c as f64) / d < phi {
        c += 1;
    }
    while c > 1 && ((c - 1) as f64) / d >= phi {
        c -= 1;
    }
    c as u32
}

impl ThresholdAssignment {
    /// Random mode consumes exactly one draw per node, in id order.
    pub fn assign(g: &Graph, mode: ThresholdMode, rng: &mut RngStream) -> Result<Self> {
        mode.validate()?;
        let n = g.n();
        let mut phi = Vec::with_capacity(n);
        let mut required = Vec::with_capacity(n);
        match mode {
            ThresholdMode::Uniform(value) => {
                for v in g.node_ids() {
                    phi.push(value);
                    required.push(required_count(value, g.degree(v)));
                }
            }
            ThresholdMode::Random => {
                for v in g.node_ids() {
                    let deg = g.degree(v);
                    let draw = rng.below(deg.max(1) as u64) as u32 + 1;
                    if deg == 0 {
                        phi.push(1.0);
                        required.push(NEVER);
                    } else {
                        phi.push(draw as f64 / deg as f64);
                        required.push(draw);
                    }
                }
            }
        }
        Ok(Self { mode, phi, required })
    }

    pub fn mode(&self) -> ThresholdMode {
        self.mode
    }

    pub fn phi(&self, v: NodeId) -> f64 {
        self.phi[v.index()]
    }

    /// Number of infected incidences that triggers `v`; `None` for isolated nodes.
    pub fn required(&self, v: NodeId) -> Option<u32> {
        match self.required[v.index()] {
            NEVER => None,
            c => Some(c),
        }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }
}

pub fn assign_thresholds(g: &Graph, mode: ThresholdMode, rng: &mut RngStream) -> Result<ThresholdAssignment> {
    ThresholdAssignment::assign(g, mode, rng)
}

const NOT_INFECTED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeResult {
    pub infected: NodeSet,
    rounds: Vec<u32>,
    trigger_counts: Vec<u32>,
}

impl CascadeResult {
    /// Infection round: 0 for targeted nodes, `None` if never infected.
    pub fn round(&self, v: NodeId) -> Option<u32> {
        match self.rounds[v.index()] {
            NOT_INFECTED => None,
            r => Some(r),
        }
    }

    /// Infected incidences counted when `v` triggered (0 for targeted nodes).
    pub fn trigger_count(&self, v: NodeId) -> Option<u32> {
        self.round(v).map(|_| self.trigger_counts[v.index()])
    }

    pub fn len(&self) -> usize {
        self.infected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infected.is_empty()
    }

    pub fn max_round(&self) -> Option<u32> {
        self.rounds.iter().copied().filter(|&r| r != NOT_INFECTED).max()
    }
}

/// Least fixed point of the trigger rule, by counter propagation in
/// round order. Each incidence is examined at most once.
pub fn infection_set(g: &Graph, thr: &ThresholdAssignment, s: &NodeSet) -> CascadeResult {
    let n = g.n();
    let mut infected = s.clone();
    let mut rounds = vec![NOT_INFECTED; n];
    let mut trigger_counts = vec![0u32; n];
    let mut counts = vec![0u32; n];
    let mut queue: VecDeque<NodeId> = s.iter().collect();
    for &v in &queue {
        rounds[v.index()] = 0;
    }
    while let Some(x) = queue.pop_front() {
        let next = rounds[x.index()] + 1;
        for inc in g.incidences(x) {
            let y = inc.neighbor;
            if infected.contains(y) {
                continue;
            }
            let c = &mut counts[y.index()];
            *c += 1;
            if *c >= thr.required[y.index()] {
                infected.insert(y);
                rounds[y.index()] = next;
                trigger_counts[y.index()] = *c;
                queue.push_back(y);
            }
        }
    }
    CascadeResult { infected, rounds, trigger_counts }
}

/// Reference implementation: repeated full sweeps applying the rule with a
/// direct fraction comparison until nothing changes.
pub fn infection_set_oracle(g: &Graph, thr: &ThresholdAssignment, s: &NodeSet) -> NodeSet {
    let mut infected = s.clone();
    loop {
        let mut changed = false;
        for x in g.node_ids() {
            if infected.contains(x) || g.degree(x) == 0 {
                continue;
            }
            let hit = g.neighbors(x).filter(|&y| infected.contains(y)).count();
            if hit as f64 / g.degree(x) as f64 >= thr.phi(x) {
                infected.insert(x);
                changed = true;
            }
        }
        if !changed {
            return infected;
        }
    }
}

/// Nodes outside `s` cut off from the largest component once `s` is deleted.
pub fn injury_set(g: &Graph, s: &NodeSet) -> NodeSet {
    let lcc = largest_component_excluding(g, s);
    NodeSet::from_ids(g.n(), g.node_ids().filter(|&v| !s.contains(v) && !lcc.contains(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AttackStrategy {
    TopDegree,
    RandomUniform,
}

impl AttackStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            AttackStrategy::TopDegree => "topdeg",
            AttackStrategy::RandomUniform => "random",
        }
    }
}

impl fmt::Display for AttackStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AttackStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topdeg" | "top_degree" => Ok(AttackStrategy::TopDegree),
            "random" | "random_uniform" => Ok(AttackStrategy::RandomUniform),
            _ => Err(Error::param(format!("unknown attack `{s}` (expected topdeg or random)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackPlan {
    pub strategy: AttackStrategy,
    pub k: usize,
}

/// Nodes by descending degree, ties by ascending id.
pub fn degree_order(g: &Graph) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.node_ids().collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    order
}

/// First `k` entries of a uniformly random permutation (partial Fisher–Yates).
pub fn random_prefix(n: usize, k: usize, rng: &mut RngStream) -> Vec<NodeId> {
    let mut ids: Vec<NodeId> = (0..n as u32).map(NodeId).collect();
    for i in 0..k.min(n) {
        let j = i + rng.index(n - i);
        ids.swap(i, j);
    }
    ids.truncate(k.min(n));
    ids
}

pub fn select_attack(g: &Graph, plan: AttackPlan, rng: &mut RngStream) -> Result<NodeSet> {
    if plan.k > g.n() {
        return Err(Error::param(format!("attack size {} exceeds n={}", plan.k, g.n())));
    }
    let ids = match plan.strategy {
        AttackStrategy::TopDegree => {
            let mut order = degree_order(g);
            order.truncate(plan.k);
            order
        }
        AttackStrategy::RandomUniform => random_prefix(g.n(), plan.k, rng),
    };
    Ok(NodeSet::from_ids(g.n(), ids))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aggregate {
    Max,
    Mean,
}

impl Aggregate {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregate::Max => "max",
            Aggregate::Mean => "mean",
        }
    }
}

impl fmt::Display for Aggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aggregate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Aggregate::Max),
            "mean" => Ok(Aggregate::Mean),
            _ => Err(Error::param(format!("unknown aggregate `{s}` (expected max or mean)"))),
        }
    }
}

/// Stream index for threshold resampling `trial` at attack size `k`.
pub fn trial_stream(k: usize, trial: usize) -> u64 {
    k as u64 * 1_000_000 + trial as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveConfig {
    pub strategy: AttackStrategy,
    /// Strictly increasing attack sizes.
    pub ks: Vec<usize>,
    pub thresholds: ThresholdMode,
    pub trials: usize,
    pub agg: Aggregate,
    pub master_seed: u64,
    /// Stream used to draw the random attack permutation.
    pub attack_stream: u64,
}

impl CurveConfig {
    /// Sizes `1..=k_max`.
    pub fn up_to(k_max: usize) -> Vec<usize> {
        (1..=k_max).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub k: usize,
    pub strategy: AttackStrategy,
    pub thresholds: ThresholdMode,
    pub trials: usize,
    pub agg: Aggregate,
    /// Aggregated infection size (a mean may be fractional).
    pub infection_count: f64,
    pub infection_fraction: f64,
    pub injury_count: usize,
    pub injury_fraction: f64,
}

pub const CURVE_HEADER: [&str; 10] = [
    "k",
    "strategy",
    "threshold_mode",
    "phi",
    "trials",
    "agg",
    "infection_count",
    "infection_fraction",
    "injury_count",
    "injury_fraction",
];

impl CurveRow {
    pub fn fields(&self) -> [String; 10] {
        [
            self.k.to_string(),
            self.strategy.to_string(),
            self.thresholds.name().to_string(),
            self.thresholds.phi().map(|p| p.to_string()).unwrap_or_default(),
            self.trials.to_string(),
            self.agg.to_string(),
            self.infection_count.to_string(),
            format!("{:.6}", self.infection_fraction),
            self.injury_count.to_string(),
            format!("{:.6}", self.injury_fraction),
        ]
    }
}

/// Attack sets are nested prefixes of one ordering: the degree order, or a
/// random permutation drawn from `(master_seed, attack_stream)`. Trial `j` at
/// size `k` resamples thresholds from stream `(master_seed, k * 10^6 + j)`.
/// Uniform thresholds are deterministic, so they are evaluated once.
pub fn attack_curve(g: &Graph, cfg: &CurveConfig) -> Result<Vec<CurveRow>> {
    cfg.thresholds.validate()?;
    if cfg.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    if cfg.trials >= 1_000_000 {
        return Err(Error::param("trials must stay below 10^6 to keep trial streams disjoint"));
    }
    if cfg.ks.windows(2).any(|w| w[0] >= w[1]) || cfg.ks.first() == Some(&0) {
        return Err(Error::param("attack sizes must be positive and strictly increasing"));
    }
    let n = g.n();
    if let Some(&k_max) = cfg.ks.last() {
        if k_max > n {
            return Err(Error::param(format!("attack size {k_max} exceeds n={n}")));
        }
    }
    let k_max = cfg.ks.last().copied().unwrap_or(0);
    let order = match cfg.strategy {
        AttackStrategy::TopDegree => degree_order(g),
        AttackStrategy::RandomUniform => {
            random_prefix(n, k_max, &mut RngStream::new(cfg.master_seed, cfg.attack_stream))
        }
    };
    let fixed = match cfg.thresholds {
        ThresholdMode::Uniform(_) => {
            Some(ThresholdAssignment::assign(g, cfg.thresholds, &mut RngStream::new(cfg.master_seed, 0))?)
        }
        ThresholdMode::Random => None,
    };

    let mut rows = Vec::with_capacity(cfg.ks.len());
    for &k in &cfg.ks {
        let s = NodeSet::from_ids(n, order[..k].iter().copied());
        let injured = injury_set(g, &s).len();
        let counts: Vec<usize> = match &fixed {
            Some(thr) => vec![infection_set(g, thr, &s).len()],
            None => (0..cfg.trials)
                .into_par_iter()
                .map(|j| {
                    let mut rng = RngStream::new(cfg.master_seed, trial_stream(k, j));
                    let thr = ThresholdAssignment::assign(g, cfg.thresholds, &mut rng)
                        .expect("threshold mode validated above");
                    infection_set(g, &thr, &s).len()
                })
                .collect(),
        };
        let infection_count = match cfg.agg {
            Aggregate::Max => counts.iter().copied().max().unwrap_or(0) as f64,
            Aggregate::Mean => counts.iter().sum::<usize>() as f64 / counts.len() as f64,
        };
        rows.push(CurveRow {
            k,
            strategy: cfg.strategy,
            thresholds: cfg.thresholds,
            trials: cfg.trials,
            agg: cfg.agg,
            infection_count,
            infection_fraction: infection_count / n as f64,
            injury_count: injured,
            injury_fraction: injured as f64 / n as f64,
        });
    }
    Ok(rows)
}

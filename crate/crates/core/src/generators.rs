//! Seeded graph generators: Erdős–Rényi, preferential attachment, the
//! security model and the overlapping model.
//!
//! Degree-proportional picks use an endpoint list: every edge pushes both of
//! its endpoints, so a uniform draw from the list selects a node with
//! probability exactly proportional to its current degree. Per-color lists
//! hold the endpoints of every node carrying that color, weighting members by
//! their full degree (global edges included). All picks of one step are drawn
//! from the lists as they stood before the step.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Color, EdgeKind, Graph, GraphBuilder, ModelTag, NodeId, NodeMeta};
use crate::rng::RngStream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Er,
    Pa,
    Security,
    Overlap,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Pa => "pa",
            Model::Security => "security",
            Model::Overlap => "overlap",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(Model::Er),
            "pa" => Ok(Model::Pa),
            "security" => Ok(Model::Security),
            "overlap" => Ok(Model::Overlap),
            _ => Err(Error::param(format!("unknown model `{s}` (expected er, pa, security or overlap)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "natural",
            LogBase::Two => "two",
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "two" | "2" => Ok(LogBase::Two),
            _ => Err(Error::param(format!("unknown log base `{s}` (expected natural or two)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub model: Model,
    pub n: usize,
    /// Edge probability (ER).
    pub p: f64,
    /// Edges per step (PA, security); `d1 + d2` for the overlapping model.
    pub d: usize,
    /// Homophyly exponent (security, overlap).
    pub a: f64,
    pub d1: usize,
    pub d2: usize,
    pub log_base: LogBase,
    pub allow_parallel: bool,
    pub master_seed: u64,
}

impl GenParams {
    fn base(model: Model, n: usize, master_seed: u64) -> Self {
        Self {
            model,
            n,
            p: 0.0,
            d: 0,
            a: 0.0,
            d1: 0,
            d2: 0,
            log_base: LogBase::Natural,
            allow_parallel: false,
            master_seed,
        }
    }

    pub fn er(n: usize, p: f64, master_seed: u64) -> Self {
        Self { p, ..Self::base(Model::Er, n, master_seed) }
    }

    pub fn pa(n: usize, d: usize, master_seed: u64) -> Self {
        Self { d, ..Self::base(Model::Pa, n, master_seed) }
    }

    pub fn security(n: usize, d: usize, a: f64, master_seed: u64) -> Self {
        Self { d, a, ..Self::base(Model::Security, n, master_seed) }
    }

    pub fn overlap(n: usize, d1: usize, d2: usize, a: f64, master_seed: u64) -> Self {
        Self { d: d1 + d2, d1, d2, a, ..Self::base(Model::Overlap, n, master_seed) }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::Er => {
                if !(0.0..=1.0).contains(&self.p) {
                    return Err(Error::param(format!("er requires p in [0, 1], got {}", self.p)));
                }
            }
            Model::Pa => {
                if self.d < 1 {
                    return Err(Error::param("pa requires d >= 1"));
                }
                if self.n <= self.d + 1 {
                    return Err(Error::param(format!("pa requires n > d + 1, got n={} d={}", self.n, self.d)));
                }
            }
            Model::Security | Model::Overlap => {
                if self.model == Model::Security && self.d < 1 {
                    return Err(Error::param("security requires d >= 1"));
                }
                if self.model == Model::Overlap {
                    if self.d1 < 2 || self.d2 < 2 {
                        return Err(Error::param(format!(
                            "overlap requires d1 >= 2 and d2 >= 2, got d1={} d2={}",
                            self.d1, self.d2
                        )));
                    }
                    if self.d != self.d1 + self.d2 {
                        return Err(Error::param(format!("overlap requires d = d1 + d2, got d={}", self.d)));
                    }
                }
                if !(self.a > 0.0 && self.a.is_finite()) {
                    return Err(Error::param(format!("homophyly exponent must be positive, got {}", self.a)));
                }
                if self.n < 3 {
                    return Err(Error::param(format!("{} requires n >= 3, got {}", self.model, self.n)));
                }
                // p_i decreases in i, so the first generated step is the binding one
                if self.new_color_probability(3) > 1.0 {
                    return Err(Error::param("new-color probability exceeds 1 at i = 3"));
                }
            }
        }
        Ok(())
    }

    /// `(log i)^(-a)`: probability that the node created at step `i` starts a new color.
    pub fn new_color_probability(&self, i: u64) -> f64 {
        self.log_base.log(i as f64).powf(-self.a)
    }

    /// Model tag recorded in the graph header. `stream` is the RNG stream index.
    pub fn tag(&self, stream: u64) -> String {
        let common = format!("parallel={},seed={},stream={}", u8::from(self.allow_parallel), self.master_seed, stream);
        match self.model {
            Model::Er => format!("er:n={},p={},{common}", self.n, self.p),
            Model::Pa => format!("pa:n={},d={},{common}", self.n, self.d),
            Model::Security => format!(
                "security:n={},d={},a={},log={},{common}",
                self.n,
                self.d,
                self.a,
                self.log_base.as_str()
            ),
            Model::Overlap => format!(
                "overlap:n={},d1={},d2={},a={},log={},{common}",
                self.n,
                self.d1,
                self.d2,
                self.a,
                self.log_base.as_str()
            ),
        }
    }
}

/// Generates from stream `(params.master_seed, 0)`.
pub fn generate(params: &GenParams) -> Result<Graph> {
    generate_on_stream(params, 0)
}

/// Generates from stream `(params.master_seed, stream)`.
pub fn generate_on_stream(params: &GenParams, stream: u64) -> Result<Graph> {
    params.validate()?;
    let mut rng = RngStream::new(params.master_seed, stream);
    let tag = ModelTag::new(params.tag(stream))?;
    Ok(match params.model {
        Model::Er => gen_er(params, tag, &mut rng),
        Model::Pa => gen_pa(params, tag, &mut rng),
        Model::Security | Model::Overlap => gen_homophyly(params, tag, &mut rng),
    })
}

fn singleton_node(b: &mut GraphBuilder, i: usize) -> NodeId {
    b.add_node(NodeMeta { creation_time: i as u64 + 1, is_seed: true, colors: vec![Color(i as u32)] })
}

/// Geometric skipping over the lower-triangular pair sequence; each pair is
/// present independently with probability `p`.
fn gen_er(params: &GenParams, tag: ModelTag, rng: &mut RngStream) -> Graph {
    let n = params.n;
    let p = params.p;
    let expected = (p * (n as f64) * (n as f64 - 1.0) / 2.0) as usize;
    let mut b = GraphBuilder::with_capacity(tag, n, expected + expected / 8 + 16);
    for i in 0..n {
        singleton_node(&mut b, i);
    }
    let add = |b: &mut GraphBuilder, v: usize, w: usize| {
        b.add_edge(NodeId(v as u32), NodeId(w as u32), EdgeKind::Er, v as u64 + 1)
            .expect("er pairs are distinct and in range");
    };
    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                add(&mut b, v, w);
            }
        }
    } else if p > 0.0 {
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r = rng.unit();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + if skip.is_finite() { skip as i64 } else { i64::MAX / 4 };
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                add(&mut b, v, w as usize);
            }
        }
    }
    b.build()
}

fn gen_pa(params: &GenParams, tag: ModelTag, rng: &mut RngStream) -> Graph {
    let (n, d) = (params.n, params.d);
    let m = d * (d + 1) / 2 + d * (n - d - 1);
    let mut b = GraphBuilder::with_capacity(tag, n, m);
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * m);
    for j in 0..=d {
        singleton_node(&mut b, j);
        for i in 0..j {
            b.add_edge(NodeId(j as u32), NodeId(i as u32), EdgeKind::Pa, j as u64 + 1)
                .expect("initial clique is simple");
            endpoints.extend([j as u32, i as u32]);
        }
    }
    let mut targets: Vec<u32> = Vec::with_capacity(d);
    for j in (d + 1)..n {
        let len = endpoints.len();
        targets.clear();
        while targets.len() < d {
            let t = endpoints[rng.index(len)];
            if params.allow_parallel || !targets.contains(&t) {
                targets.push(t);
            }
        }
        let v = singleton_node(&mut b, j);
        for &t in &targets {
            b.add_edge(v, NodeId(t), EdgeKind::Pa, j as u64 + 1).expect("targets precede v");
            endpoints.extend([v.0, t]);
        }
    }
    b.build()
}

struct HomophilyState {
    endpoints: Vec<u32>,
    by_color: Vec<Vec<u32>>,
    colors: Vec<Vec<Color>>,
    is_seed: Vec<bool>,
    seeds: Vec<u32>,
}

impl HomophilyState {
    fn push_endpoint(&mut self, v: u32) {
        self.endpoints.push(v);
        for c in &self.colors[v as usize] {
            self.by_color[c.index()].push(v);
        }
    }

    fn new_color(&mut self) -> Color {
        self.by_color.push(Vec::new());
        Color(self.by_color.len() as u32 - 1)
    }

    fn color_count(&self) -> usize {
        self.by_color.len()
    }
}

fn push_distinct(targets: &mut Vec<(u32, EdgeKind)>, t: u32, kind: EdgeKind, allow_parallel: bool) {
    if allow_parallel || !targets.iter().any(|&(x, _)| x == t) {
        targets.push((t, kind));
    }
}

/// Security model and overlapping model; they share the non-seed branch.
fn gen_homophyly(params: &GenParams, tag: ModelTag, rng: &mut RngStream) -> Graph {
    let n = params.n;
    let overlap = params.model == Model::Overlap;
    let d = params.d;
    let rand_edges = if overlap { params.d1 - 1 } else { d - 1 };

    let mut b = GraphBuilder::with_capacity(tag, n, n * d);
    let mut st = HomophilyState {
        endpoints: Vec::with_capacity(2 * n * d),
        by_color: Vec::new(),
        colors: Vec::with_capacity(n),
        is_seed: Vec::with_capacity(n),
        seeds: Vec::new(),
    };

    // G_2: two seeds of distinct colors joined by one edge
    for i in 0..2u32 {
        let c = st.new_color();
        b.add_node(NodeMeta { creation_time: i as u64 + 1, is_seed: true, colors: vec![c] });
        st.colors.push(vec![c]);
        st.is_seed.push(true);
        st.seeds.push(i);
    }
    b.add_edge(NodeId(1), NodeId(0), EdgeKind::SeedRand, 2).expect("initial pair");
    st.push_endpoint(1);
    st.push_endpoint(0);

    let mut targets: Vec<(u32, EdgeKind)> = Vec::with_capacity(d);
    for i in 3..=n as u64 {
        let v = (i - 1) as u32;
        targets.clear();
        let is_seed = rng.unit() < params.new_color_probability(i);
        let colors = if is_seed {
            // degree-proportional edge over all of G_{i-1}
            let pref = st.endpoints[rng.index(st.endpoints.len())];
            targets.push((pref, EdgeKind::SeedPref));

            // uniform distinct seeds; the pref target is excluded unless parallel edges are allowed
            let excluded = usize::from(!params.allow_parallel && st.is_seed[pref as usize]);
            let available = st.seeds.len() - excluded;
            if available <= rand_edges {
                for &s in &st.seeds {
                    if params.allow_parallel || s != pref {
                        targets.push((s, EdgeKind::SeedRand));
                    }
                }
            } else {
                let start = targets.len();
                while targets.len() - start < rand_edges {
                    let s = st.seeds[rng.index(st.seeds.len())];
                    let clash = (!params.allow_parallel && s == pref)
                        || targets[start..].iter().any(|&(x, _)| x == s);
                    if !clash {
                        targets.push((s, EdgeKind::SeedRand));
                    }
                }
            }

            let old_colors = st.color_count();
            let own = st.new_color();
            if overlap {
                let second = Color(rng.index(old_colors) as u32);
                let class = &st.by_color[second.index()];
                let len = class.len();
                for _ in 0..params.d2 {
                    let t = class[rng.index(len)];
                    push_distinct(&mut targets, t, EdgeKind::OverCross, params.allow_parallel);
                }
                vec![own, second]
            } else {
                vec![own]
            }
        } else {
            let c = Color(rng.index(st.color_count()) as u32);
            let class = &st.by_color[c.index()];
            let len = class.len();
            for _ in 0..d {
                let t = class[rng.index(len)];
                push_distinct(&mut targets, t, EdgeKind::Intra, params.allow_parallel);
            }
            vec![c]
        };

        b.add_node(NodeMeta { creation_time: i, is_seed, colors: colors.clone() });
        st.colors.push(colors);
        st.is_seed.push(is_seed);
        if is_seed {
            st.seeds.push(v);
        }
        for &(t, kind) in &targets {
            b.add_edge(NodeId(v), NodeId(t), kind, i).expect("targets precede v");
            st.push_endpoint(v);
            st.push_endpoint(t);
        }
    }
    b.build()
}

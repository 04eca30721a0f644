//! Structural analyses of colored graphs: communities, degree priority,
//! power-law reports, the infection priority tree, strong communities,
//! navigation and the infection-inclusion audit.

use std::collections::VecDeque;

use crate::cascade::{CascadeResult, ThresholdAssignment};
use crate::error::{Error, Result};
use crate::graph::{conductance, Color, EdgeKind, EdgeRecord, Graph, NodeId, NodeSet};
use crate::rng::RngStream;

fn require_colored(g: &Graph) -> Result<()> {
    if g.is_colored() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{} graphs carry no community colors",
            g.model_kind().as_str()
        )))
    }
}

/// A homochromatic set and its boundary counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityView {
    pub color: Color,
    pub members: Vec<NodeId>,
    pub seed: NodeId,
    pub creation_time: u64,
    /// Edges with both endpoints carrying the color.
    pub internal_edges: usize,
    /// Edges with exactly one endpoint carrying the color.
    pub external_edges: usize,
}

impl CommunityView {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn member_set(&self, n: usize) -> NodeSet {
        NodeSet::from_ids(n, self.members.iter().copied())
    }
}

/// One view per color, ordered by color (i.e. by seed creation time).
pub fn communities(g: &Graph) -> Result<Vec<CommunityView>> {
    require_colored(g)?;
    let k = g.color_count();
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); k];
    let mut seeds: Vec<Option<NodeId>> = vec![None; k];
    for v in g.node_ids() {
        let meta = g.node(v);
        for &c in &meta.colors {
            members[c.index()].push(v);
        }
        if meta.is_seed {
            let own = meta.first_color();
            if seeds[own.index()].replace(v).is_some() {
                return Err(Error::domain(format!("color {} has two seeds", own.0)));
            }
        }
    }
    let mut internal = vec![0usize; k];
    let mut external = vec![0usize; k];
    for e in g.edges() {
        let (a, b) = (g.node(e.later), g.node(e.earlier));
        for &c in &a.colors {
            if b.has_color(c) {
                internal[c.index()] += 1;
            } else {
                external[c.index()] += 1;
            }
        }
        for &c in &b.colors {
            if !a.has_color(c) {
                external[c.index()] += 1;
            }
        }
    }
    members
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            let seed = seeds[c].ok_or_else(|| Error::domain(format!("color {c} has no seed")))?;
            Ok(CommunityView {
                color: Color(c as u32),
                members,
                seed,
                creation_time: g.node(seed).creation_time,
                internal_edges: internal[c],
                external_edges: external[c],
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreePriority {
    pub node: NodeId,
    /// Neighbor-group sizes by color, descending; ties by earlier color.
    pub dp: Vec<usize>,
    /// Color of each entry of `dp`.
    pub colors: Vec<Color>,
    pub first_color_is_own: bool,
}

impl DegreePriority {
    /// Length of degrees.
    pub fn len(&self) -> usize {
        self.dp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dp.is_empty()
    }

    pub fn first(&self) -> usize {
        self.dp.first().copied().unwrap_or(0)
    }

    pub fn second(&self) -> usize {
        self.dp.get(1).copied().unwrap_or(0)
    }
}

/// Color an incidence of `v` along edge `e` is attributed to.
fn attributed_color(g: &Graph, v: NodeId, e: &EdgeRecord) -> Color {
    let w = g.node(e.other(v));
    if w.colors.len() > 1 && matches!(e.kind, EdgeKind::Intra | EdgeKind::OverCross) {
        let mine = g.node(v);
        if let Some(&c) = w.colors.iter().find(|&&c| mine.has_color(c)) {
            return c;
        }
    }
    w.first_color()
}

pub fn degree_priority(g: &Graph, v: NodeId) -> Result<DegreePriority> {
    require_colored(g)?;
    let mut groups: Vec<(Color, usize)> = Vec::new();
    for inc in g.incidences(v) {
        let c = attributed_color(g, v, g.edge(inc.edge));
        match groups.iter_mut().find(|(gc, _)| *gc == c) {
            Some((_, count)) => *count += 1,
            None => groups.push((c, 1)),
        }
    }
    groups.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let own = g.node(v).first_color();
    Ok(DegreePriority {
        node: v,
        first_color_is_own: groups.first().map(|&(c, _)| c == own).unwrap_or(false),
        dp: groups.iter().map(|&(_, k)| k).collect(),
        colors: groups.iter().map(|&(c, _)| c).collect(),
    })
}

/// Number of incidences of `v` whose other endpoint carries `c`.
pub fn same_color_neighbors(g: &Graph, v: NodeId, c: Color) -> usize {
    g.neighbors(v).filter(|&w| g.node(w).has_color(c)).count()
}

/// Limit fraction of degree-`k` nodes in a preferential attachment graph
/// with `d` edges per step, as an exact reduced fraction:
/// `2d(d+1) / (k(k+1)(k+2))` for `k >= d`.
pub fn s_k(d: u64, k: u64) -> (u64, u64) {
    assert!(k >= d && d >= 1, "S_k is defined for k >= d >= 1");
    let num = 2 * d * (d + 1);
    let den = k * (k + 1) * (k + 2);
    let g = gcd(num, den);
    (num / g, den / g)
}

pub fn s_k_value(d: u64, k: u64) -> f64 {
    let (a, b) = s_k(d, k);
    a as f64 / b as f64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerLawReport {
    /// `histogram[k]` = number of nodes of degree `k`.
    pub histogram: Vec<usize>,
    /// Exponent `gamma` of `P(k) ~ k^-gamma`, or why the fit failed.
    pub exponent: std::result::Result<f64, String>,
    /// `(k, S_k)` for `k` in `d..=k_max`.
    pub table: Vec<(usize, f64)>,
    pub d: usize,
}

impl PowerLawReport {
    pub fn fraction(&self, k: usize) -> f64 {
        let n: usize = self.histogram.iter().sum();
        self.histogram.get(k).copied().unwrap_or(0) as f64 / n as f64
    }
}

pub const MIN_FIT_COUNT: usize = 10;

/// Least-squares slope of `ln CCDF(k)` against `ln k` over degrees `k >= k_min`
/// with at least [`MIN_FIT_COUNT`] nodes; the returned exponent is `1 - slope`.
pub fn fit_ccdf_exponent(histogram: &[usize], k_min: usize) -> std::result::Result<f64, String> {
    let n: usize = histogram.iter().sum();
    if n == 0 {
        return Err("empty histogram".into());
    }
    let mut tail = n;
    let mut pts = Vec::new();
    for (k, &count) in histogram.iter().enumerate() {
        if k >= k_min.max(1) && count >= MIN_FIT_COUNT {
            pts.push(((k as f64).ln(), (tail as f64 / n as f64).ln()));
        }
        tail -= count;
    }
    if pts.len() < 2 {
        return Err(format!("need at least two degrees with >= {MIN_FIT_COUNT} nodes, found {}", pts.len()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(1.0 - sxy / sxx)
}

pub fn degree_histogram(g: &Graph) -> Vec<usize> {
    let max = g.node_ids().map(|v| g.degree(v)).max().unwrap_or(0);
    let mut h = vec![0usize; max + 1];
    for v in g.node_ids() {
        h[g.degree(v)] += 1;
    }
    h
}

/// `d` is the minimum degree used both as the fit cutoff and the table start.
pub fn power_law_report(g: &Graph, d: usize, k_max: usize) -> PowerLawReport {
    let histogram = degree_histogram(g);
    let d = d.max(1);
    PowerLawReport {
        exponent: fit_ccdf_exponent(&histogram, d),
        table: (d..=k_max).map(|k| (k, s_k_value(d as u64, k as u64))).collect(),
        histogram,
        d,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfectionPriorityTree {
    /// `parent[c]` for each community color; `None` at the root.
    pub parent: Vec<Option<Color>>,
    pub root: Color,
    /// Depth of each community (root = 0).
    pub depth: Vec<usize>,
    pub height: usize,
}

impl InfectionPriorityTree {
    pub fn edge_count(&self) -> usize {
        self.parent.iter().filter(|p| p.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Contracts each color class to a vertex and keeps, per non-initial
/// community, the edge from its seed's degree-proportional pick. The two
/// initial communities are joined by the initial edge with the earlier one
/// as root.
pub fn build_ipt(g: &Graph) -> Result<InfectionPriorityTree> {
    require_colored(g)?;
    let views = communities(g)?;
    if views.is_empty() {
        return Err(Error::domain("graph has no communities"));
    }
    let k = views.len();
    let mut parent: Vec<Option<Color>> = vec![None; k];
    let root = views[0].color;
    for view in views.iter().skip(1) {
        let seed = view.seed;
        let pref = g
            .incidences(seed)
            .iter()
            .map(|i| g.edge(i.edge))
            .find(|e| e.later == seed && e.kind == EdgeKind::SeedPref);
        let p = match pref {
            Some(e) => g.node(e.earlier).first_color(),
            None => {
                // initial pair: attach to the earlier community through any birth edge
                let e = g
                    .incidences(seed)
                    .iter()
                    .map(|i| g.edge(i.edge))
                    .find(|e| e.later == seed)
                    .ok_or_else(|| Error::domain(format!("seed {seed} has no birth edge")))?;
                g.node(e.earlier).first_color()
            }
        };
        if p >= view.color {
            return Err(Error::domain(format!("community {} attaches to a later community", view.color.0)));
        }
        parent[view.color.index()] = Some(p);
    }
    let mut depth = vec![0usize; k];
    for c in 1..k {
        if let Some(p) = parent[c] {
            depth[c] = depth[p.index()] + 1;
        }
    }
    let height = depth.iter().copied().max().unwrap_or(0);
    Ok(InfectionPriorityTree { parent, root, depth, height })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrongPredicate {
    /// Only the seed is tested against its external incidences.
    #[default]
    SeedOnly,
    /// Every member must be unable to trigger from external neighbors alone.
    AllMembers,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongClassification {
    pub strong: Vec<bool>,
    pub vulnerable: usize,
}

fn external_incidences(g: &Graph, v: NodeId, c: Color) -> usize {
    g.degree(v) - same_color_neighbors(g, v, c)
}

fn cannot_trigger_externally(g: &Graph, thr: &ThresholdAssignment, v: NodeId, c: Color) -> bool {
    match thr.required(v) {
        None => true,
        Some(req) => (external_incidences(g, v, c) as u32) < req,
    }
}

pub fn classify_strong(g: &Graph, thr: &ThresholdAssignment, predicate: StrongPredicate) -> Result<StrongClassification> {
    let views = communities(g)?;
    let strong: Vec<bool> = views
        .iter()
        .map(|view| match predicate {
            StrongPredicate::SeedOnly => cannot_trigger_externally(g, thr, view.seed, view.color),
            StrongPredicate::AllMembers => {
                view.members.iter().all(|&v| cannot_trigger_externally(g, thr, v, view.color))
            }
        })
        .collect();
    let vulnerable = strong.iter().filter(|s| !**s).count();
    Ok(StrongClassification { strong, vulnerable })
}

/// Walk from `v` to the seed of its first color by repeatedly stepping to the
/// earliest-created neighbor sharing that color.
fn climb_to_seed(g: &Graph, v: NodeId) -> Result<Vec<NodeId>> {
    let c = g.node(v).first_color();
    let mut path = vec![v];
    let mut cur = v;
    while !(g.node(cur).is_seed && g.node(cur).first_color() == c) {
        let next = g
            .neighbors(cur)
            .filter(|&w| g.node(w).has_color(c) && w < cur)
            .min()
            .ok_or_else(|| Error::domain(format!("node {cur} has no earlier neighbor of color {}", c.0)))?;
        path.push(next);
        cur = next;
    }
    Ok(path)
}

/// Walk from seed `s` to its parent seed in the seed tree, or `None` at a root.
fn seed_parent_walk(g: &Graph, s: NodeId) -> Result<Option<Vec<NodeId>>> {
    let birth = || g.incidences(s).iter().map(|i| g.edge(i.edge)).filter(|e| e.later == s);
    if let Some(e) = birth().find(|e| e.kind == EdgeKind::SeedRand) {
        return Ok(Some(vec![s, e.earlier]));
    }
    if let Some(e) = birth().find(|e| e.kind == EdgeKind::SeedPref) {
        let mut walk = vec![s];
        walk.extend(climb_to_seed(g, e.earlier)?);
        return Ok(Some(walk));
    }
    Ok(None)
}

/// Seeds from `s` up to the root, with the walk reaching each one.
fn seed_chain(g: &Graph, s: NodeId) -> Result<Vec<(NodeId, Vec<NodeId>)>> {
    let mut chain = vec![(s, vec![s])];
    let mut cur = s;
    while let Some(walk) = seed_parent_walk(g, cur)? {
        let next = *walk.last().expect("walks are non-empty");
        let mut full = chain.last().expect("chain is non-empty").1.clone();
        full.extend_from_slice(&walk[1..]);
        chain.push((next, full));
        if chain.len() > g.n() {
            return Err(Error::domain("seed parent chain does not terminate"));
        }
        cur = next;
    }
    Ok(chain)
}

/// Short path between `u` and `v`: climb both to their seeds, climb the seed
/// tree (parent = first uniform seed edge, else the degree-proportional
/// target's seed) until the chains meet, and join the two halves.
pub fn navigate(g: &Graph, u: NodeId, v: NodeId) -> Result<Vec<NodeId>> {
    require_colored(g)?;
    if u.index() >= g.n() || v.index() >= g.n() {
        return Err(Error::param(format!("node out of range for n={}", g.n())));
    }
    if u == v {
        return Ok(vec![u]);
    }
    let up_u = climb_to_seed(g, u)?;
    let up_v = climb_to_seed(g, v)?;
    let su = *up_u.last().expect("non-empty");
    let sv = *up_v.last().expect("non-empty");
    let chain_u = seed_chain(g, su)?;
    let chain_v = seed_chain(g, sv)?;
    let (iu, iv) = chain_u
        .iter()
        .enumerate()
        .find_map(|(i, (s, _))| chain_v.iter().position(|(t, _)| t == s).map(|j| (i, j)))
        .ok_or(Error::NoPath(u.0, v.0))?;
    let mut path = up_u;
    path.extend_from_slice(&chain_u[iu].1[1..]);
    let mut back = up_v;
    back.extend_from_slice(&chain_v[iv].1[1..]);
    back.pop();
    path.extend(back.into_iter().rev());
    Ok(shortcut(path))
}

/// Removes cycles from a walk, keeping it a walk.
fn shortcut(walk: Vec<NodeId>) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::with_capacity(walk.len());
    for v in walk {
        if let Some(pos) = out.iter().position(|&w| w == v) {
            out.truncate(pos + 1);
        } else {
            out.push(v);
        }
    }
    out
}

/// Whether consecutive path entries are adjacent in `g`.
pub fn is_walk(g: &Graph, path: &[NodeId]) -> bool {
    path.windows(2).all(|w| g.neighbors(w[0]).any(|x| x == w[1]))
}

/// BFS distances from `src`, restricted to nodes accepted by `allow`.
fn bfs(g: &Graph, src: NodeId, allow: impl Fn(NodeId) -> bool, dist: &mut [u32], queue: &mut VecDeque<NodeId>) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[src.index()] = 0;
    queue.push_back(src);
    while let Some(x) = queue.pop_front() {
        let dx = dist[x.index()];
        for y in g.neighbors(x) {
            if dist[y.index()] == u32::MAX && allow(y) {
                dist[y.index()] = dx + 1;
                queue.push_back(y);
            }
        }
    }
}

pub fn distance(g: &Graph, u: NodeId, v: NodeId) -> Option<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    bfs(g, u, |_| true, &mut dist, &mut VecDeque::new());
    match dist[v.index()] {
        u32::MAX => None,
        d => Some(d),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommunityRow {
    pub color: Color,
    pub size: usize,
    pub seed: NodeId,
    pub creation_time: u64,
    pub internal_edges: usize,
    pub external_edges: usize,
    /// `None` when the community is the whole graph.
    pub conductance: Option<f64>,
    /// Largest finite distance inside the induced subgraph.
    pub diameter: u32,
    pub connected: bool,
}

pub const COMMUNITY_HEADER: [&str; 8] = [
    "color",
    "size",
    "seed_id",
    "creation_time",
    "internal_edges",
    "external_edges",
    "conductance",
    "diameter",
];

impl CommunityRow {
    pub fn fields(&self) -> [String; 8] {
        [
            self.color.0.to_string(),
            self.size.to_string(),
            self.seed.to_string(),
            self.creation_time.to_string(),
            self.internal_edges.to_string(),
            self.external_edges.to_string(),
            self.conductance.map(|c| format!("{c:.6}")).unwrap_or_default(),
            self.diameter.to_string(),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub communities: Vec<CommunityRow>,
    pub sampled_pairs: usize,
    pub mean_distance: Option<f64>,
}

pub fn community_rows(g: &Graph) -> Result<Vec<CommunityRow>> {
    let views = communities(g)?;
    let n = g.n();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    let mut rows = Vec::with_capacity(views.len());
    for view in &views {
        let set = view.member_set(n);
        let conductance = conductance(g, &set).ok().map(|c| c.value());
        let mut diameter = 0u32;
        let mut connected = true;
        for &src in &view.members {
            bfs(g, src, |y| set.contains(y), &mut dist, &mut queue);
            for &w in &view.members {
                match dist[w.index()] {
                    u32::MAX => connected = false,
                    d => diameter = diameter.max(d),
                }
            }
        }
        rows.push(CommunityRow {
            color: view.color,
            size: view.size(),
            seed: view.seed,
            creation_time: view.creation_time,
            internal_edges: view.internal_edges,
            external_edges: view.external_edges,
            conductance,
            diameter,
            connected,
        });
    }
    Ok(rows)
}

/// Mean BFS distance over `pairs` uniformly sampled node pairs (unreachable
/// pairs are skipped).
pub fn sampled_mean_distance(g: &Graph, pairs: usize, rng: &mut RngStream) -> Option<f64> {
    if g.n() == 0 || pairs == 0 {
        return None;
    }
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    let (mut total, mut count) = (0u64, 0u64);
    for _ in 0..pairs {
        let u = NodeId(rng.index(g.n()) as u32);
        let v = NodeId(rng.index(g.n()) as u32);
        bfs(g, u, |_| true, &mut dist, &mut queue);
        if dist[v.index()] != u32::MAX {
            total += dist[v.index()] as u64;
            count += 1;
        }
    }
    (count > 0).then(|| total as f64 / count as f64)
}

pub fn structure_report(g: &Graph, sample_pairs: usize, rng: &mut RngStream) -> Result<StructureReport> {
    Ok(StructureReport {
        communities: community_rows(g)?,
        sampled_pairs: sample_pairs,
        mean_distance: sampled_mean_distance(g, sample_pairs, rng),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub source: NodeId,
    pub kind: EdgeKind,
    pub reason: &'static str,
}

/// Checks every infection channel in `result` against the provenance rules
/// of the security model: an infected non-targeted node may only have been
/// reached through an intra-community edge, or (for non-seeds) through the
/// degree-proportional edge of a later seed, or (for seeds) through a
/// seed edge. Round order and trigger counts are verified as well.
pub fn infection_inclusion_audit(g: &Graph, thr: &ThresholdAssignment, result: &CascadeResult) -> Vec<Violation> {
    let mut out = Vec::new();
    for x in result.infected.iter() {
        let Some(rx) = result.round(x) else { continue };
        if rx == 0 {
            continue;
        }
        let xm = g.node(x);
        let mut earlier = 0u32;
        for inc in g.incidences(x) {
            let y = inc.neighbor;
            let Some(ry) = result.round(y) else { continue };
            if ry >= rx {
                continue;
            }
            earlier += 1;
            let e = g.edge(inc.edge);
            let ym = g.node(y);
            let shared = xm.colors.iter().any(|&c| ym.has_color(c));
            let reason = match e.kind {
                EdgeKind::Intra | EdgeKind::OverCross if shared => None,
                EdgeKind::Intra | EdgeKind::OverCross => Some("community edge between different colors"),
                EdgeKind::SeedPref if xm.is_seed => None,
                EdgeKind::SeedPref if e.later == y && ym.is_seed => None,
                EdgeKind::SeedPref => Some("non-seed infected along a seed edge it created"),
                EdgeKind::SeedRand if xm.is_seed && ym.is_seed => None,
                EdgeKind::SeedRand => Some("seed-to-seed edge touches a non-seed"),
                EdgeKind::Er | EdgeKind::Pa => Some("edge kind does not belong to a community model"),
            };
            if let Some(reason) = reason {
                out.push(Violation { node: x, source: y, kind: e.kind, reason });
            }
        }
        let trig = result.trigger_count(x).unwrap_or(0);
        let req = thr.required(x);
        if req.is_none_or(|r| trig < r) || earlier < trig {
            out.push(Violation { node: x, source: x, kind: EdgeKind::Intra, reason: "trigger count inconsistent with rounds" });
        }
    }
    out
}

//! Immutable multigraph with per-node metadata and per-edge provenance.

use std::fmt;
use std::str::FromStr;

use crate::dsu::Dsu;
use crate::error::{Error, Result};

/// Dense node index; a node created at step `t` has index `t - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Color identifier. Colors are numbered in creation order, so comparing two
/// colors compares the creation times of their seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

impl Color {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMeta {
    pub creation_time: u64,
    pub is_seed: bool,
    /// One color, or two for the seeds of an overlapping-model graph.
    pub colors: Vec<Color>,
}

impl NodeMeta {
    pub fn first_color(&self) -> Color {
        self.colors[0]
    }

    pub fn has_color(&self, c: Color) -> bool {
        self.colors.contains(&c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Er,
    Pa,
    /// Degree-proportional edge from a newly created seed.
    SeedPref,
    /// Uniform edge between a new seed and an existing seed.
    SeedRand,
    /// Edge inside one color class.
    Intra,
    /// Edge from an overlapping seed into its second (old) color.
    OverCross,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 6] = [
        EdgeKind::Er,
        EdgeKind::Pa,
        EdgeKind::SeedPref,
        EdgeKind::SeedRand,
        EdgeKind::Intra,
        EdgeKind::OverCross,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Er => "er",
            EdgeKind::Pa => "pa",
            EdgeKind::SeedPref => "seed_pref",
            EdgeKind::SeedRand => "seed_rand",
            EdgeKind::Intra => "intra",
            EdgeKind::OverCross => "over_cross",
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdgeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown edge kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    /// The later-created endpoint.
    pub later: NodeId,
    /// The earlier-created endpoint.
    pub earlier: NodeId,
    pub kind: EdgeKind,
    pub creation_time: u64,
}

impl EdgeRecord {
    pub fn other(&self, v: NodeId) -> NodeId {
        if self.later == v {
            self.earlier
        } else {
            self.later
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Er,
    Pa,
    Security,
    Overlap,
    /// Hand-built graphs; treated as colored.
    Custom,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Er => "er",
            ModelKind::Pa => "pa",
            ModelKind::Security => "security",
            ModelKind::Overlap => "overlap",
            ModelKind::Custom => "custom",
        }
    }
}

/// Generator name plus its parameters, e.g. `pa:n=100,d=4,parallel=0,seed=1,stream=0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelTag(String);

impl ModelTag {
    pub fn new(tag: impl Into<String>) -> Result<Self> {
        let tag = tag.into();
        if tag.is_empty() || tag.chars().any(char::is_whitespace) {
            return Err(Error::param(format!("model tag `{tag}` must be non-empty without whitespace")));
        }
        Ok(Self(tag))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn kind(&self) -> ModelKind {
        let name = self.0.split(':').next().unwrap_or("");
        match name {
            "er" => ModelKind::Er,
            "pa" => ModelKind::Pa,
            "security" => ModelKind::Security,
            "overlap" => ModelKind::Overlap,
            _ => ModelKind::Custom,
        }
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: NodeId,
    pub edge: u32,
}

/// Immutable undirected multigraph. Adjacency is stored in compressed rows;
/// a parallel edge appears once per copy in both endpoint rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nodes: Vec<NodeMeta>,
    edges: Vec<EdgeRecord>,
    offsets: Vec<usize>,
    incidence: Vec<Incidence>,
    model: ModelTag,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn model_tag(&self) -> &ModelTag {
        &self.model
    }

    pub fn model_kind(&self) -> ModelKind {
        self.model.kind()
    }

    /// Whether node colors carry community structure (security, overlap
    /// and hand-built graphs). ER and PA colors are placeholders.
    pub fn is_colored(&self) -> bool {
        !matches!(self.model_kind(), ModelKind::Er | ModelKind::Pa)
    }

    pub fn nodes(&self) -> &[NodeMeta] {
        &self.nodes
    }

    pub fn node(&self, v: NodeId) -> &NodeMeta {
        &self.nodes[v.index()]
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: u32) -> &EdgeRecord {
        &self.edges[e as usize]
    }

    pub fn node_ids(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.n() as u32).map(NodeId)
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v.index() + 1] - self.offsets[v.index()]
    }

    #[inline]
    pub fn incidences(&self, v: NodeId) -> &[Incidence] {
        &self.incidence[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.incidences(v).iter().map(|i| i.neighbor)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.node_ids().map(|v| self.degree(v)).collect()
    }

    pub fn seeds(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|&v| self.node(v).is_seed)
    }

    /// Number of distinct colors, assuming colors are numbered densely.
    pub fn color_count(&self) -> usize {
        self.nodes
            .iter()
            .flat_map(|m| m.colors.iter())
            .map(|c| c.index() + 1)
            .max()
            .unwrap_or(0)
    }
}

/// Incremental construction; [`GraphBuilder::build`] freezes the result.
#[derive(Debug)]
pub struct GraphBuilder {
    nodes: Vec<NodeMeta>,
    edges: Vec<EdgeRecord>,
    model: ModelTag,
}

impl GraphBuilder {
    pub fn new(model: ModelTag) -> Self {
        Self { nodes: Vec::new(), edges: Vec::new(), model }
    }

    pub fn with_capacity(model: ModelTag, nodes: usize, edges: usize) -> Self {
        Self { nodes: Vec::with_capacity(nodes), edges: Vec::with_capacity(edges), model }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn add_node(&mut self, meta: NodeMeta) -> NodeId {
        debug_assert!(!meta.colors.is_empty() && meta.colors.len() <= 2);
        self.nodes.push(meta);
        NodeId(self.nodes.len() as u32 - 1)
    }

    /// Adds an undirected edge; endpoint order is normalised so the
    /// later-created node comes first.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId, kind: EdgeKind, creation_time: u64) -> Result<()> {
        let n = self.nodes.len() as u32;
        if a.0 >= n || b.0 >= n {
            return Err(Error::param(format!("edge ({a}, {b}) references a missing node")));
        }
        if a == b {
            return Err(Error::param(format!("self-loop at node {a}")));
        }
        let (later, earlier) = if a > b { (a, b) } else { (b, a) };
        self.edges.push(EdgeRecord { later, earlier, kind, creation_time });
        Ok(())
    }

    pub fn build(self) -> Graph {
        let n = self.nodes.len();
        let mut offsets = vec![0usize; n + 1];
        for e in &self.edges {
            offsets[e.later.index() + 1] += 1;
            offsets[e.earlier.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![Incidence { neighbor: NodeId(0), edge: 0 }; 2 * self.edges.len()];
        for (idx, e) in self.edges.iter().enumerate() {
            let idx = idx as u32;
            incidence[fill[e.later.index()]] = Incidence { neighbor: e.earlier, edge: idx };
            fill[e.later.index()] += 1;
            incidence[fill[e.earlier.index()]] = Incidence { neighbor: e.later, edge: idx };
            fill[e.earlier.index()] += 1;
        }
        Graph { nodes: self.nodes, edges: self.edges, offsets, incidence, model: self.model }
    }
}

/// Membership bitmap over `[0, n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct NodeSet {
    bits: Vec<bool>,
    len: usize,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        Self { bits: vec![false; n], len: 0 }
    }

    pub fn full(n: usize) -> Self {
        Self { bits: vec![true; n], len: n }
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = NodeId>) -> Self {
        let mut s = Self::empty(n);
        for v in ids {
            s.insert(v);
        }
        s
    }

    /// Size of the universe `[0, n)`.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, v: NodeId) -> bool {
        self.bits.get(v.index()).copied().unwrap_or(false)
    }

    /// Returns whether `v` was newly inserted. Panics if `v` is outside the universe.
    pub fn insert(&mut self, v: NodeId) -> bool {
        let slot = &mut self.bits[v.index()];
        if *slot {
            return false;
        }
        *slot = true;
        self.len += 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// `cut / min(vol(S), vol(V \ S))`, kept as an unreduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conductance {
    pub cut: u64,
    pub volume: u64,
}

impl Conductance {
    pub fn value(self) -> f64 {
        self.cut as f64 / self.volume as f64
    }
}

pub fn conductance(g: &Graph, s: &NodeSet) -> Result<Conductance> {
    if s.is_empty() || s.len() >= g.n() {
        return Err(Error::domain("conductance is undefined for the empty set and for V"));
    }
    let mut vol_in = 0u64;
    let mut cut = 0u64;
    for v in s.iter() {
        vol_in += g.degree(v) as u64;
        cut += g.incidences(v).iter().filter(|i| !s.contains(i.neighbor)).count() as u64;
    }
    let vol_out = 2 * g.m() as u64 - vol_in;
    let volume = vol_in.min(vol_out);
    if volume == 0 {
        return Err(Error::domain("conductance is undefined when one side has zero volume"));
    }
    Ok(Conductance { cut, volume })
}

/// Largest connected component of the subgraph induced on `V \ removed`.
/// Ties go to the component containing the smallest node id.
pub fn largest_component_excluding(g: &Graph, removed: &NodeSet) -> NodeSet {
    let n = g.n();
    let mut dsu = Dsu::new(n);
    for e in g.edges() {
        if !removed.contains(e.later) && !removed.contains(e.earlier) {
            dsu.union(e.later.0, e.earlier.0);
        }
    }
    let mut best: Option<(u32, u32, u32)> = None; // (size, min id, root)
    for v in g.node_ids() {
        if removed.contains(v) {
            continue;
        }
        let r = dsu.find(v.0);
        // visit each component once, at its smallest member
        if dsu.root_min(r) != v.0 {
            continue;
        }
        let size = dsu.root_size(r);
        let better = match best {
            None => true,
            Some((bs, bmin, _)) => size > bs || (size == bs && v.0 < bmin),
        };
        if better {
            best = Some((size, v.0, r));
        }
    }
    let mut out = NodeSet::empty(n);
    if let Some((_, _, root)) = best {
        for v in g.node_ids() {
            if !removed.contains(v) && dsu.find(v.0) == root {
                out.insert(v);
            }
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn custom(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut b = GraphBuilder::new(ModelTag::new("custom").unwrap());
        for i in 0..n {
            b.add_node(NodeMeta {
                creation_time: i as u64 + 1,
                is_seed: true,
                colors: vec![Color(i as u32)],
            });
        }
        for &(u, v) in edges {
            let t = u.max(v) as u64 + 1;
            b.add_edge(NodeId(u), NodeId(v), EdgeKind::Er, t).unwrap();
        }
        b.build()
    }

    pub fn complete(n: u32) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|j| (0..j).map(move |i| (j, i))).collect();
        custom(n as usize, &edges)
    }

    pub fn path(n: u32) -> Graph {
        let edges: Vec<_> = (1..n).map(|j| (j, j - 1)).collect();
        custom(n as usize, &edges)
    }

    pub fn star(leaves: u32) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|j| (j, 0)).collect();
        custom(leaves as usize + 1, &edges)
    }
}

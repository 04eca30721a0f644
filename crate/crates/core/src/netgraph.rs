//! `netgraph v1` text format.
//!
//! ```text
//! # netgraph v1
//! n <N> m <M> model <tag>
//! node <id> t=<step> seed=<0|1> colors=<c1[,c2]>
//! edge <u> <v> kind=<kind> t=<step>
//! ```
//!
//! Nodes come first in id order, then edges in creation order. `u` is the
//! later-created endpoint. Lines end in LF.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Color, EdgeKind, Graph, GraphBuilder, ModelTag, NodeId, NodeMeta};

const MAGIC: &str = "# netgraph v1";

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "n {} m {} model {}", g.n(), g.m(), g.model_tag())?;
    for (id, meta) in g.nodes().iter().enumerate() {
        write!(out, "node {id} t={} seed={} colors=", meta.creation_time, u8::from(meta.is_seed))?;
        for (i, c) in meta.colors.iter().enumerate() {
            if i > 0 {
                out.write_all(b",")?;
            }
            write!(out, "{}", c.0)?;
        }
        out.write_all(b"\n")?;
    }
    for e in g.edges() {
        writeln!(out, "edge {} {} kind={} t={}", e.later, e.earlier, e.kind, e.creation_time)?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_graph(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("netgraph output is ASCII")
}

fn field<'a>(tok: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing `{key}=` field")))?;
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::parse(line, format!("expected `{key}=...`, found `{tok}`")))
}

fn number<T: std::str::FromStr>(s: Option<&str>, what: &str, line: usize) -> Result<T> {
    let s = s.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    s.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{s}`")))
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(Error::parse(line, format!("unexpected trailing field `{t}`"))),
        None => Ok(()),
    }
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (lno, magic) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if magic? != MAGIC {
        return Err(Error::parse(lno, format!("expected header `{MAGIC}`")));
    }

    let (lno, header) = lines.next().ok_or_else(|| Error::parse(2, "missing size line"))?;
    let header = header?;
    let mut toks = header.split(' ');
    if toks.next() != Some("n") {
        return Err(Error::parse(lno, "expected `n <N> m <M> model <tag>`"));
    }
    let n: usize = number(toks.next(), "node count", lno)?;
    if toks.next() != Some("m") {
        return Err(Error::parse(lno, "expected `m` after node count"));
    }
    let m: usize = number(toks.next(), "edge count", lno)?;
    if toks.next() != Some("model") {
        return Err(Error::parse(lno, "expected `model` after edge count"));
    }
    let tag = toks.next().ok_or_else(|| Error::parse(lno, "missing model tag"))?;
    no_trailing(toks, lno)?;
    let tag = ModelTag::new(tag).map_err(|e| Error::parse(lno, e.to_string()))?;

    let mut b = GraphBuilder::with_capacity(tag, n, m);
    let mut edges_seen = 0usize;
    for (lno, line) in lines {
        let line = line?;
        let mut toks = line.split(' ');
        match toks.next() {
            Some("node") => {
                if edges_seen > 0 {
                    return Err(Error::parse(lno, "node line after edge lines"));
                }
                let id: usize = number(toks.next(), "node id", lno)?;
                if id != b.n() {
                    return Err(Error::parse(lno, format!("expected node id {}, found {id}", b.n())));
                }
                if id >= n {
                    return Err(Error::parse(lno, format!("more node lines than n={n}")));
                }
                let creation_time: u64 = number(Some(field(toks.next(), "t", lno)?), "creation time", lno)?;
                let is_seed = match field(toks.next(), "seed", lno)? {
                    "0" => false,
                    "1" => true,
                    other => return Err(Error::parse(lno, format!("seed flag must be 0 or 1, found `{other}`"))),
                };
                let colors = field(toks.next(), "colors", lno)?
                    .split(',')
                    .map(|c| number::<u32>(Some(c), "color", lno).map(Color))
                    .collect::<Result<Vec<_>>>()?;
                if colors.len() > 2 {
                    return Err(Error::parse(lno, "a node has at most two colors"));
                }
                no_trailing(toks, lno)?;
                b.add_node(NodeMeta { creation_time, is_seed, colors });
            }
            Some("edge") => {
                if b.n() != n {
                    return Err(Error::parse(lno, format!("expected {n} node lines before edges, found {}", b.n())));
                }
                let u: u32 = number(toks.next(), "edge endpoint", lno)?;
                let v: u32 = number(toks.next(), "edge endpoint", lno)?;
                if u as usize >= n || v as usize >= n {
                    return Err(Error::parse(lno, format!("edge ({u}, {v}) references a missing node")));
                }
                if u <= v {
                    return Err(Error::parse(lno, format!("edge ({u}, {v}) must list the later node first")));
                }
                let kind: EdgeKind = field(toks.next(), "kind", lno)?
                    .parse()
                    .map_err(|e: String| Error::parse(lno, e))?;
                let t: u64 = number(Some(field(toks.next(), "t", lno)?), "creation time", lno)?;
                no_trailing(toks, lno)?;
                b.add_edge(NodeId(u), NodeId(v), kind, t).map_err(|e| Error::parse(lno, e.to_string()))?;
                edges_seen += 1;
            }
            Some(other) => return Err(Error::parse(lno, format!("unknown record `{other}`"))),
            None => unreachable!("split yields at least one token"),
        }
    }
    if b.n() != n {
        return Err(Error::parse(0, format!("declared n={n} but found {} node lines", b.n())));
    }
    if edges_seen != m {
        return Err(Error::parse(0, format!("declared m={m} but found {edges_seen} edge lines")));
    }
    Ok(b.build())
}

pub fn from_str(s: &str) -> Result<Graph> {
    read_graph(s.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn empty_graph_round_trips() {
        let g = GraphBuilder::new(ModelTag::new("custom").unwrap()).build();
        let text = to_string(&g);
        assert_eq!(text, "# netgraph v1\nn 0 m 0 model custom\n");
        assert_eq!(from_str(&text).unwrap(), g);
    }

    #[test]
    fn initial_pair_round_trips() {
        let mut b = GraphBuilder::new(ModelTag::new("security:n=2").unwrap());
        let a = b.add_node(NodeMeta { creation_time: 1, is_seed: true, colors: vec![Color(0)] });
        let c = b.add_node(NodeMeta { creation_time: 2, is_seed: true, colors: vec![Color(1)] });
        b.add_edge(c, a, EdgeKind::SeedRand, 2).unwrap();
        let g = b.build();
        let text = to_string(&g);
        assert_eq!(
            text,
            "# netgraph v1\nn 2 m 1 model security:n=2\n\
             node 0 t=1 seed=1 colors=0\n\
             node 1 t=2 seed=1 colors=1\n\
             edge 1 0 kind=seed_rand t=2\n"
        );
        assert_eq!(from_str(&text).unwrap(), g);
    }

    #[test]
    fn two_colors_round_trip() {
        let mut b = GraphBuilder::new(ModelTag::new("overlap:x").unwrap());
        b.add_node(NodeMeta { creation_time: 1, is_seed: true, colors: vec![Color(0)] });
        b.add_node(NodeMeta { creation_time: 2, is_seed: true, colors: vec![Color(1), Color(0)] });
        b.add_edge(NodeId(1), NodeId(0), EdgeKind::OverCross, 2).unwrap();
        let g = b.build();
        let text = to_string(&g);
        assert!(text.contains("colors=1,0\n"));
        assert_eq!(from_str(&text).unwrap(), g);
    }

    fn err_line(text: &str) -> usize {
        match from_str(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs_name_the_line() {
        assert_eq!(err_line("# netgraph v2\n"), 1);
        assert_eq!(err_line("# netgraph v1\nn x m 0 model a\n"), 2);
        let base = "# netgraph v1\nn 2 m 1 model custom\nnode 0 t=1 seed=1 colors=0\nnode 1 t=2 seed=1 colors=1\n";
        assert_eq!(err_line(&format!("{base}edge 1 0 kind=weird t=2\n")), 5);
        assert_eq!(err_line(&format!("{base}edge 5 0 kind=er t=2\n")), 5);
        assert_eq!(err_line(&format!("{base}edge 0 1 kind=er t=2\n")), 5);
        assert_eq!(err_line(&format!("{base}edge 1 0 kind=er\n")), 5);
        assert_eq!(err_line(&format!("{base}vertex 1\n")), 5);
        assert_eq!(
            err_line("# netgraph v1\nn 2 m 0 model custom\nnode 0 t=1 seed=2 colors=0\n"),
            3
        );
    }

    #[test]
    fn count_mismatch_is_rejected() {
        let text = "# netgraph v1\nn 1 m 1 model custom\nnode 0 t=1 seed=1 colors=0\n";
        assert!(matches!(from_str(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn parallel_edges_round_trip() {
        let g = fixtures::custom(3, &[(1, 0), (1, 0), (2, 1)]);
        assert_eq!(from_str(&to_string(&g)).unwrap(), g);
    }
}

//! Canonical 3-uniform hypergraphs.
//!
//! Vertices are `0..vertex_count`. Every edge is stored as an ascending
//! triple and the edge list is kept strictly increasing, so two graphs are
//! equal exactly when their edge sets are equal.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Triple = [usize; 3];

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreeGraph {
    vertex_count: usize,
    edges: Vec<Triple>,
}

fn sort3(mut t: Triple) -> Triple {
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    if t[1] > t[2] {
        t.swap(1, 2);
    }
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    t
}

/// Builds a canonical graph from arbitrary triples, rejecting malformed input.
pub fn canonicalize(raw_edges: &[Triple], vertex_count: usize) -> Result<ThreeGraph> {
    let mut edges = Vec::with_capacity(raw_edges.len());
    for &raw in raw_edges {
        for &v in &raw {
            if v >= vertex_count {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    vertex_count,
                });
            }
        }
        let t = sort3(raw);
        if t[0] == t[1] || t[1] == t[2] {
            return Err(Error::RepeatedVertexInTriple(raw));
        }
        edges.push(t);
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge(w[0]));
    }
    Ok(ThreeGraph {
        vertex_count,
        edges,
    })
}

impl ThreeGraph {
    pub fn new(vertex_count: usize, raw_edges: &[Triple]) -> Result<Self> {
        canonicalize(raw_edges, vertex_count)
    }

    pub fn empty(vertex_count: usize) -> Self {
        ThreeGraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// All C(n,3) triples on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    edges.push([a, b, c]);
                }
            }
        }
        ThreeGraph {
            vertex_count: n,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, t: Triple) -> bool {
        self.edges.binary_search(&sort3(t)).is_ok()
    }

    /// Same graph with `extra` isolated vertices appended.
    pub fn with_isolated(&self, extra: usize) -> Self {
        ThreeGraph {
            vertex_count: self.vertex_count + extra,
            edges: self.edges.clone(),
        }
    }

    /// Union with another graph on the same vertex set; shared triples collapse.
    pub fn union(&self, other: &ThreeGraph) -> Result<Self> {
        if self.vertex_count != other.vertex_count {
            return Err(Error::DimensionMismatch {
                expected: self.vertex_count,
                got: other.vertex_count,
            });
        }
        let mut edges: Vec<Triple> = self.edges.iter().chain(&other.edges).copied().collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(ThreeGraph {
            vertex_count: self.vertex_count,
            edges,
        })
    }

    /// Number of edges entirely inside the vertex set marked by `mask`.
    pub fn edges_within(&self, mask: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| mask[e[0]] && mask[e[1]] && mask[e[2]])
            .count()
    }

    /// Per-vertex list of incident edge indices.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// SHA-256 over the canonical `.3g` text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(to_3g(self, &[]).as_bytes()))
    }
}

/// Subgraph induced by `subset`, reindexed by the order-preserving map onto `0..|subset|`.
pub fn induced_subgraph(h: &ThreeGraph, subset: &[usize]) -> Result<ThreeGraph> {
    let n = h.vertex_count;
    let mut index = vec![usize::MAX; n];
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (new, &old) in sorted.iter().enumerate() {
        if old >= n {
            return Err(Error::IndexOutOfRange {
                index: old,
                vertex_count: n,
            });
        }
        index[old] = new;
    }
    // Order-preserving relabel keeps ascending triples ascending and the list sorted.
    let edges = h
        .edges
        .iter()
        .filter(|e| e.iter().all(|&v| index[v] != usize::MAX))
        .map(|e| [index[e[0]], index[e[1]], index[e[2]]])
        .collect();
    Ok(ThreeGraph {
        vertex_count: sorted.len(),
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodegreeProfile {
    vertex_count: usize,
    /// Nonzero codegrees keyed by `(u, v)` with `u < v`.
    pub codegrees: BTreeMap<(usize, usize), usize>,
    pub max_codegree: usize,
}

impl CodegreeProfile {
    pub fn get(&self, u: usize, v: usize) -> usize {
        let key = if u < v { (u, v) } else { (v, u) };
        self.codegrees.get(&key).copied().unwrap_or(0)
    }

    /// Smallest codegree over all pairs, including pairs in no edge.
    pub fn min_codegree(&self) -> usize {
        let n = self.vertex_count;
        if n < 2 {
            return 0;
        }
        if self.codegrees.len() < n * (n - 1) / 2 {
            return 0;
        }
        self.codegrees.values().copied().min().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.codegrees.values().sum()
    }
}

pub fn codegree_profile(h: &ThreeGraph) -> CodegreeProfile {
    let mut codegrees = BTreeMap::new();
    for e in &h.edges {
        for (u, v) in [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])] {
            *codegrees.entry((u, v)).or_insert(0) += 1;
        }
    }
    let max_codegree = codegrees.values().copied().max().unwrap_or(0);
    CodegreeProfile {
        vertex_count: h.vertex_count,
        codegrees,
        max_codegree,
    }
}

/// Serializes to the `.3g` text format. Comment lines are written first, each
/// prefixed with `# `.
pub fn to_3g(h: &ThreeGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{} {}", h.vertex_count, h.edges.len());
    for e in &h.edges {
        let _ = writeln!(out, "{} {} {}", e[0], e[1], e[2]);
    }
    out
}

/// Parses the `.3g` text format. Returns the graph and the comment lines
/// (without their `# ` prefix). Edges must already be canonical.
pub fn parse_3g(text: &str) -> Result<(ThreeGraph, Vec<String>)> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Triple> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("not a nonnegative integer: {tok:?}"),
                })
            })
            .collect::<Result<_>>()?;
        match header {
            None => {
                if nums.len() != 2 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "header must be `t m`".into(),
                    });
                }
                header = Some((nums[0], nums[1]));
            }
            Some((t, _)) => {
                if nums.len() != 3 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "edge line must have three vertices".into(),
                    });
                }
                let e = [nums[0], nums[1], nums[2]];
                if !(e[0] < e[1] && e[1] < e[2] && e[2] < t) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("edge {e:?} is not an ascending triple below {t}"),
                    });
                }
                if let Some(prev) = edges.last() {
                    if *prev >= e {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "edges are not strictly increasing".into(),
                        });
                    }
                }
                edges.push(e);
            }
        }
    }
    let (t, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Ok((
        ThreeGraph {
            vertex_count: t,
            edges,
        },
        comments,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonicalize_sorts_and_rejects() {
        let g = canonicalize(&[[2, 0, 1]], 3).unwrap();
        assert_eq!(g.edges(), &[[0, 1, 2]]);
        assert_eq!(
            canonicalize(&[[0, 1, 2], [0, 2, 1]], 3),
            Err(Error::DuplicateEdge([0, 1, 2]))
        );
        assert_eq!(
            canonicalize(&[[0, 1, 1]], 2),
            Err(Error::RepeatedVertexInTriple([0, 1, 1]))
        );
        assert!(matches!(
            canonicalize(&[[0, 1, 5]], 3),
            Err(Error::IndexOutOfRange { index: 5, .. })
        ));
    }

    #[test]
    fn induced_examples() {
        let h = ThreeGraph::new(4, &[[0, 1, 2]]).unwrap();
        let a = induced_subgraph(&h, &[0, 1, 2]).unwrap();
        assert_eq!((a.vertex_count(), a.edge_count()), (3, 1));
        let b = induced_subgraph(&h, &[0, 1, 3]).unwrap();
        assert_eq!((b.vertex_count(), b.edge_count()), (3, 0));
        let k4 = ThreeGraph::complete(4);
        assert_eq!(induced_subgraph(&k4, &[0, 1, 2, 3]).unwrap(), k4);
        assert!(induced_subgraph(&h, &[0, 4]).is_err());
    }

    #[test]
    fn codegree_examples() {
        let one = ThreeGraph::new(3, &[[0, 1, 2]]).unwrap();
        let p = codegree_profile(&one);
        assert_eq!(p.max_codegree, 1);
        assert_eq!((p.get(0, 1), p.get(2, 0), p.get(1, 2)), (1, 1, 1));
        let two = ThreeGraph::new(4, &[[0, 1, 2], [0, 1, 3]]).unwrap();
        let p = codegree_profile(&two);
        assert_eq!(p.get(0, 1), 2);
        assert_eq!(p.max_codegree, 2);
        assert_eq!(p.total(), 6);
        assert_eq!(codegree_profile(&ThreeGraph::empty(5)).max_codegree, 0);
    }

    #[test]
    fn parse_rejects_noncanonical() {
        assert!(parse_3g("3 1\n0 2 1\n").is_err());
        assert!(parse_3g("4 2\n0 1 3\n0 1 2\n").is_err());
        assert!(parse_3g("4 2\n0 1 2\n").is_err());
        assert!(parse_3g("# only a comment\n").is_err());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let text = "# sts t=7 method=cyclic\n7 7\n0 1 3\n0 2 6\n0 4 5\n1 2 4\n1 5 6\n2 3 5\n3 4 6\n";
        let (g, comments) = parse_3g(text).unwrap();
        assert_eq!(to_3g(&g, &comments), text);
    }

    fn arb_graph() -> impl Strategy<Value = ThreeGraph> {
        (3usize..9).prop_flat_map(|n| {
            let all = ThreeGraph::complete(n).edges().to_vec();
            let k = all.len();
            proptest::collection::vec(any::<bool>(), k).prop_map(move |mask| {
                let chosen: Vec<Triple> = all
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &m)| m)
                    .map(|(e, _)| *e)
                    .collect();
                ThreeGraph::new(n, &chosen).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn text_format_round_trips(g in arb_graph()) {
            let text = to_3g(&g, &["note".to_string()]);
            let (back, comments) = parse_3g(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_3g(&back, &comments), text);
        }

        #[test]
        fn codegree_sum_is_three_per_edge(g in arb_graph()) {
            prop_assert_eq!(codegree_profile(&g).total(), 3 * g.edge_count());
        }

        #[test]
        fn induced_commutes_with_canonicalize(g in arb_graph(), seed in any::<u64>()) {
            let n = g.vertex_count();
            let subset: Vec<usize> = (0..n).filter(|v| (seed >> v) & 1 == 1).collect();
            let direct = induced_subgraph(&g, &subset).unwrap();
            // Shuffle the raw edge order and orientation, then canonicalize.
            let raw: Vec<Triple> = g.edges().iter().rev().map(|e| [e[2], e[0], e[1]]).collect();
            let recanon = canonicalize(&raw, n).unwrap();
            prop_assert_eq!(induced_subgraph(&recanon, &subset).unwrap(), direct.clone());
            let all: Vec<usize> = (0..n).collect();
            prop_assert_eq!(induced_subgraph(&g, &all).unwrap(), g.clone());
            let full = (0..direct.vertex_count()).collect::<Vec<_>>();
            prop_assert_eq!(induced_subgraph(&direct, &full).unwrap(), direct);
        }
    }
}

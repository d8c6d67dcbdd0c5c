//! Sparsity: every `S` with `|S| >= 2` spans at most `|S| - 2` edges.
//!
//! The exact check maximizes `|Q[S]| - |S|` over sets containing a fixed
//! pair `{u, v}` as a maximum-weight closure (one unit-gain node per edge,
//! one unit-cost node per vertex, edges requiring their three vertices),
//! solved by a single minimum cut per pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ThreeGraph;

pub const DEFAULT_BRUTE_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparsityMode {
    Exact,
    Brute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub is_sparse: bool,
    /// A set achieving the maximum excess, present whenever the graph is not sparse.
    pub violating_set: Option<Vec<usize>>,
    /// Max of `|Q[S]| - |S| + 2` over the checked sets; 0 for sparse graphs with at least two vertices.
    pub excess: i64,
}

pub fn check_sparse(h: &ThreeGraph, mode: SparsityMode, size_cap: Option<usize>) -> Result<SparsityVerdict> {
    match mode {
        SparsityMode::Exact => Ok(check_sparse_exact(h)),
        SparsityMode::Brute => check_sparse_brute(h, size_cap, DEFAULT_BRUTE_CAP),
    }
}

/// Brute force over every `S` with `2 <= |S| <= min(n, size_cap)`.
pub fn check_sparse_brute(h: &ThreeGraph, size_cap: Option<usize>, vertex_cap: usize) -> Result<SparsityVerdict> {
    let n = h.vertex_count();
    if n > vertex_cap {
        return Err(Error::CapExceeded {
            what: "brute sparsity vertex count",
            value: n,
            cap: vertex_cap,
        });
    }
    let max_size = size_cap.map_or(n, |c| c.min(n));
    let edge_masks: Vec<u64> = h
        .edges()
        .iter()
        .map(|e| (1u64 << e[0]) | (1 << e[1]) | (1 << e[2]))
        .collect();
    let mut best: Option<(i64, u64)> = None;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as usize;
        if size < 2 || size > max_size {
            continue;
        }
        let inside = edge_masks.iter().filter(|&&m| m & s == m).count() as i64;
        let excess = inside - size as i64 + 2;
        if best.is_none_or(|(b, _)| excess > b) {
            best = Some((excess, s));
        }
    }
    Ok(verdict_from(best.map(|(e, s)| (e, (0..n).filter(|v| s >> v & 1 == 1).collect()))))
}

fn verdict_from(best: Option<(i64, Vec<usize>)>) -> SparsityVerdict {
    match best {
        None => SparsityVerdict {
            is_sparse: true,
            violating_set: None,
            excess: 0,
        },
        Some((excess, set)) => SparsityVerdict {
            is_sparse: excess <= 0,
            violating_set: (excess > 0).then_some(set),
            excess,
        },
    }
}

/// Exact check via one closure min cut per vertex pair.
pub fn check_sparse_exact(h: &ThreeGraph) -> SparsityVerdict {
    let n = h.vertex_count();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for u in 0..n {
        for v in u + 1..n {
            let (value, set) = max_closure_with_pair(h, u, v);
            let excess = value + 2;
            if best.as_ref().is_none_or(|(b, _)| excess > *b) {
                best = Some((excess, set));
            }
        }
    }
    verdict_from(best)
}

/// `max |Q[S]| - |S|` over `S ⊇ {u, v}`, together with a maximizing `S`.
pub fn max_closure_with_pair(h: &ThreeGraph, u: usize, v: usize) -> (i64, Vec<usize>) {
    let n = h.vertex_count();
    let m = h.edge_count();
    // Nodes: source, sink, edge nodes, vertex nodes.
    let source = 0;
    let sink = 1;
    let edge_node = |i: usize| 2 + i;
    let vertex_node = |x: usize| 2 + m + x;
    let mut net = FlowNetwork::new(2 + m + n);
    let inf = (m + n + 1) as i64;
    for (i, e) in h.edges().iter().enumerate() {
        net.add_arc(source, edge_node(i), 1);
        for &x in e {
            net.add_arc(edge_node(i), vertex_node(x), inf);
        }
    }
    for x in 0..n {
        if x != u && x != v {
            net.add_arc(vertex_node(x), sink, 1);
        }
    }
    let cut = net.max_flow(source, sink);
    let closure_value = m as i64 - cut;
    let reach = net.source_side(source);
    let mut set: Vec<usize> = (0..n).filter(|&x| reach[vertex_node(x)] || x == u || x == v).collect();
    set.sort_unstable();
    (closure_value - 2, set)
}

struct Arc {
    to: usize,
    cap: i64,
}

/// Dinic max flow on a small integer-capacity network.
struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.adj[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.adj.len()];
        let mut queue = std::collections::VecDeque::new();
        level[s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &a in &self.adj[x] {
                let arc = &self.arcs[a];
                if arc.cap > 0 && level[arc.to] < 0 {
                    level[arc.to] = level[x] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        level
    }

    fn augment(&mut self, x: usize, t: usize, pushed: i64, level: &[i64], next: &mut [usize]) -> i64 {
        if x == t {
            return pushed;
        }
        while next[x] < self.adj[x].len() {
            let a = self.adj[x][next[x]];
            let (to, cap) = (self.arcs[a].to, self.arcs[a].cap);
            if cap > 0 && level[to] == level[x] + 1 {
                let got = self.augment(to, t, pushed.min(cap), level, next);
                if got > 0 {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            next[x] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return flow;
            }
            let mut next = vec![0; self.adj.len()];
            loop {
                let f = self.augment(s, t, i64::MAX, &level, &mut next);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Nodes reachable from `s` in the residual network after `max_flow`.
    fn source_side(&self, s: usize) -> Vec<bool> {
        self.levels(s).iter().map(|&l| l >= 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::induced_subgraph;

    fn g(n: usize, e: &[[usize; 3]]) -> ThreeGraph {
        ThreeGraph::new(n, e).unwrap()
    }

    #[test]
    fn empty_graph_is_sparse() {
        for mode in [SparsityMode::Exact, SparsityMode::Brute] {
            assert!(check_sparse(&ThreeGraph::empty(5), mode, None).unwrap().is_sparse);
        }
    }

    #[test]
    fn two_triples_sharing_pair_are_sparse() {
        let h = g(4, &[[0, 1, 2], [0, 1, 3]]);
        let v = check_sparse(&h, SparsityMode::Brute, None).unwrap();
        assert!(v.is_sparse);
        assert_eq!(v.excess, 0);
        let e = check_sparse_exact(&h);
        assert_eq!((e.is_sparse, e.excess), (true, 0));
    }

    #[test]
    fn three_triples_on_four_vertices_violate() {
        let h = g(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3]]);
        for mode in [SparsityMode::Exact, SparsityMode::Brute] {
            let v = check_sparse(&h, mode, None).unwrap();
            assert!(!v.is_sparse);
            assert_eq!(v.violating_set.as_deref(), Some(&[0, 1, 2, 3][..]));
            assert_eq!(v.excess, 1);
        }
    }

    #[test]
    fn violating_set_is_dense() {
        let h = g(6, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [3, 4, 5]]);
        let v = check_sparse_exact(&h);
        let set = v.violating_set.unwrap();
        let sub = induced_subgraph(&h, &set).unwrap();
        assert!(sub.edge_count() + 1 >= set.len());
    }

    #[test]
    fn brute_cap_enforced() {
        let h = ThreeGraph::empty(13);
        assert!(matches!(
            check_sparse(&h, SparsityMode::Brute, None),
            Err(Error::CapExceeded { .. })
        ));
        assert!(check_sparse(&h, SparsityMode::Exact, None).unwrap().is_sparse);
    }

    #[test]
    fn size_cap_limits_brute_search() {
        let k4 = ThreeGraph::complete(4);
        assert!(check_sparse(&k4, SparsityMode::Brute, Some(3)).unwrap().is_sparse);
        assert!(!check_sparse(&k4, SparsityMode::Brute, Some(4)).unwrap().is_sparse);
    }

    #[test]
    fn exact_matches_brute_on_all_graphs_up_to_five_vertices() {
        for n in 0..=5 {
            let all = ThreeGraph::complete(n).edges().to_vec();
            for mask in 0u32..(1 << all.len()) {
                let edges: Vec<_> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
                let h = g(n, &edges);
                let b = check_sparse(&h, SparsityMode::Brute, None).unwrap();
                let e = check_sparse_exact(&h);
                assert_eq!((b.is_sparse, b.excess), (e.is_sparse, e.excess), "{h:?}");
            }
        }
    }
}

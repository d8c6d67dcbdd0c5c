//! Dense configurations in labelled triple systems: `i` triples (`2 <= i < g`)
//! spanning at most `i + 1` vertices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::graph::{ThreeGraph, Triple};

/// A multiset of triples, each tagged with the system it came from. Identical
/// triples with different labels are distinct members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledTripleSystem {
    pub vertex_count: usize,
    pub triples: Vec<(u8, Triple)>,
}

impl LabelledTripleSystem {
    pub fn from_systems(systems: &[&ThreeGraph]) -> Self {
        let vertex_count = systems.iter().map(|s| s.vertex_count()).max().unwrap_or(0);
        let triples = systems
            .iter()
            .enumerate()
            .flat_map(|(label, s)| s.edges().iter().map(move |&e| (label as u8, e)))
            .collect();
        LabelledTripleSystem {
            vertex_count,
            triples,
        }
    }

    pub fn push(&mut self, label: u8, triple: Triple) {
        let mut t = triple;
        t.sort_unstable();
        self.vertex_count = self.vertex_count.max(t[2] + 1);
        self.triples.push((label, t));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseConfiguration {
    /// Indices into the system's triple list, ascending.
    pub members: Vec<usize>,
    pub triples: Vec<(u8, Triple)>,
    pub vertices: Vec<usize>,
}

struct Search<'a> {
    sys: &'a LabelledTripleSystem,
    incidence: Vec<Vec<usize>>,
    max_size: usize,
    vertex_limit: usize,
    root: usize,
    chosen: Vec<usize>,
    vertex_hits: Vec<u32>,
    spanned: usize,
    seen: HashSet<Vec<usize>>,
}

impl Search<'_> {
    fn add(&mut self, idx: usize) {
        self.chosen.push(idx);
        for &v in &self.sys.triples[idx].1 {
            if self.vertex_hits[v] == 0 {
                self.spanned += 1;
            }
            self.vertex_hits[v] += 1;
        }
    }

    fn remove(&mut self) {
        let idx = self.chosen.pop().expect("nonempty");
        for &v in &self.sys.triples[idx].1 {
            self.vertex_hits[v] -= 1;
            if self.vertex_hits[v] == 0 {
                self.spanned -= 1;
            }
        }
    }

    fn dfs(&mut self) -> bool {
        let size = self.chosen.len();
        if size >= 2 && self.spanned <= size + 1 {
            return true;
        }
        if size == self.max_size {
            return false;
        }
        let mut key = self.chosen.clone();
        key.sort_unstable();
        if !self.seen.insert(key) {
            return false;
        }
        let mut candidates: Vec<usize> = self
            .chosen
            .iter()
            .flat_map(|&c| self.sys.triples[c].1)
            .flat_map(|v| self.incidence[v].iter().copied())
            .filter(|&c| c > self.root && !self.chosen.contains(&c))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        for c in candidates {
            self.add(c);
            // Each extra triple lowers (spanned - size) by at most one.
            let feasible = self.spanned <= self.vertex_limit;
            if feasible && self.dfs() {
                return true;
            }
            self.remove();
        }
        false
    }
}

/// Finds some `i` labelled triples with `2 <= i < g` spanning at most `i + 1`
/// vertices. Only connected triple sets are explored; a smallest dense
/// configuration is always connected.
pub fn find_dense_configuration(sys: &LabelledTripleSystem, g: usize) -> Option<DenseConfiguration> {
    if g < 3 {
        return None;
    }
    let mut incidence = vec![Vec::new(); sys.vertex_count];
    for (i, (_, t)) in sys.triples.iter().enumerate() {
        for &v in t {
            incidence[v].push(i);
        }
    }
    let mut search = Search {
        sys,
        incidence,
        max_size: g - 1,
        vertex_limit: g,
        root: 0,
        chosen: Vec::new(),
        vertex_hits: vec![0; sys.vertex_count],
        spanned: 0,
        seen: HashSet::new(),
    };
    for root in 0..sys.triples.len() {
        search.root = root;
        search.seen.clear();
        search.add(root);
        if search.dfs() {
            let mut members = search.chosen.clone();
            members.sort_unstable();
            let triples: Vec<_> = members.iter().map(|&i| sys.triples[i]).collect();
            let mut vertices: Vec<usize> = triples.iter().flat_map(|(_, t)| *t).collect();
            vertices.sort_unstable();
            vertices.dedup();
            return Some(DenseConfiguration {
                members,
                triples,
                vertices,
            });
        }
        search.remove();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn brute_force(sys: &LabelledTripleSystem, g: usize) -> bool {
        (2..g).any(|i| {
            (0..sys.triples.len()).combinations(i).any(|c| {
                let span: HashSet<usize> = c.iter().flat_map(|&j| sys.triples[j].1).collect();
                span.len() <= i + 1
            })
        })
    }

    #[test]
    fn duplicated_triple_is_found() {
        let s = ThreeGraph::new(3, &[[0, 1, 2]]).unwrap();
        let sys = LabelledTripleSystem::from_systems(&[&s, &s]);
        let c = find_dense_configuration(&sys, 3).unwrap();
        assert_eq!(c.triples, vec![(0, [0, 1, 2]), (1, [0, 1, 2])]);
        assert_eq!(c.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn disjoint_pair_has_none_at_three() {
        let a = ThreeGraph::new(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let b = ThreeGraph::new(6, &[[0, 3, 4], [1, 2, 5]]).unwrap();
        let sys = LabelledTripleSystem::from_systems(&[&a, &b]);
        assert!(find_dense_configuration(&sys, 3).is_none());
    }

    #[test]
    fn three_triples_on_four_vertices() {
        let mut sys = LabelledTripleSystem {
            vertex_count: 4,
            triples: vec![],
        };
        sys.push(0, [0, 1, 2]);
        sys.push(1, [0, 1, 3]);
        sys.push(0, [2, 3, 0]);
        assert!(find_dense_configuration(&sys, 3).is_none());
        let c = find_dense_configuration(&sys, 4).unwrap();
        assert_eq!(c.members, vec![0, 1, 2]);
        assert_eq!(c.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn agrees_with_brute_force_on_small_random_systems() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(4..9);
            let k = rng.random_range(2..9);
            let mut sys = LabelledTripleSystem {
                vertex_count: n,
                triples: vec![],
            };
            for _ in 0..k {
                let t = rand::seq::index::sample(&mut rng, n, 3).into_vec();
                sys.push(rng.random_range(0..2), [t[0], t[1], t[2]]);
            }
            for g in 3..6 {
                assert_eq!(find_dense_configuration(&sys, g).is_some(), brute_force(&sys, g), "{sys:?} g={g}");
            }
        }
    }
}

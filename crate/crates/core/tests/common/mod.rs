//! Test-side oracles shared by integration tests.

#![allow(dead_code)]

use std::collections::HashSet;

use hyperjump::{ThreeGraph, Triple};
use itertools::Itertools;

/// All triples of `0..n` in lexicographic order; bit `i` of a mask is triple `i`.
pub fn all_triples(n: usize) -> Vec<Triple> {
    (0..n).combinations(3).map(|c| [c[0], c[1], c[2]]).collect()
}

pub fn graph_from_mask(n: usize, triples: &[Triple], mask: u64) -> ThreeGraph {
    let edges: Vec<Triple> = (0..triples.len()).filter(|&b| mask >> b & 1 == 1).map(|b| triples[b]).collect();
    ThreeGraph::new(n, &edges).unwrap()
}

/// Isomorphism classes of 3-graphs on exactly `n <= 7` vertices satisfying a
/// property closed under deleting edges. Classes are grown one edge at a time
/// and deduplicated by the minimum edge mask over all `n!` relabellings.
pub struct IsoClasses {
    n: usize,
    triples: Vec<Triple>,
    /// `images[p][i]` is the index of triple `i` under permutation `p`.
    images: Vec<Vec<u8>>,
}

impl IsoClasses {
    pub fn new(n: usize) -> Self {
        assert!(n <= 7, "masks are u64 and permutations are enumerated");
        let triples = all_triples(n);
        let index = |t: [usize; 3]| {
            let mut s = t;
            s.sort_unstable();
            triples.iter().position(|x| *x == s).unwrap() as u8
        };
        let images = (0..n)
            .permutations(n)
            .map(|p| triples.iter().map(|t| index([p[t[0]], p[t[1]], p[t[2]]])).collect())
            .collect();
        IsoClasses { n, triples, images }
    }

    pub fn canonical(&self, mask: u64) -> u64 {
        let bits: Vec<usize> = (0..self.triples.len()).filter(|&b| mask >> b & 1 == 1).collect();
        self.images
            .iter()
            .map(|img| bits.iter().fold(0u64, |acc, &b| acc | 1 << img[b]))
            .min()
            .unwrap()
    }

    /// Class representatives with `keep` true (including the empty graph).
    pub fn enumerate(&self, keep: impl Fn(&ThreeGraph) -> bool) -> Vec<ThreeGraph> {
        let mut out = Vec::new();
        let empty = ThreeGraph::empty(self.n);
        if !keep(&empty) {
            return out;
        }
        out.push(empty);
        let mut level = vec![0u64];
        while !level.is_empty() {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for &mask in &level {
                for b in 0..self.triples.len() {
                    if mask >> b & 1 == 1 {
                        continue;
                    }
                    let c = self.canonical(mask | 1 << b);
                    if !seen.insert(c) {
                        continue;
                    }
                    let g = graph_from_mask(self.n, &self.triples, c);
                    if keep(&g) {
                        next.push(c);
                        out.push(g);
                    }
                }
            }
            level = next;
        }
        out
    }
}

/// Sparse by definition: every vertex set `S` with `|S| >= 2` spans at most
/// `|S| - 2` edges. Exponential; for small graphs only.
pub fn brute_sparse(h: &ThreeGraph) -> bool {
    let n = h.vertex_count();
    let masks: Vec<u32> = h.edges().iter().map(|e| 1 << e[0] | 1 << e[1] | 1 << e[2]).collect();
    (0u32..1 << n).filter(|s| s.count_ones() >= 2).all(|s| {
        let inside = masks.iter().filter(|&&e| e & s == e).count();
        inside + 2 <= s.count_ones() as usize
    })
}

/// Largest number of triples through one pair.
pub fn brute_max_codegree(h: &ThreeGraph) -> usize {
    let n = h.vertex_count();
    (0..n)
        .tuple_combinations()
        .map(|(u, v)| h.edges().iter().filter(|e| e.contains(&u) && e.contains(&v)).count())
        .max()
        .unwrap_or(0)
}

/// `6 Σ_{ijk} x_i x_j x_k` summed directly.
pub fn p_value(h: &ThreeGraph, x: &[num::BigRational]) -> num::BigRational {
    let mut total = num::BigRational::from_integer(0.into());
    for e in h.edges() {
        total += &x[e[0]] * &x[e[1]] * &x[e[2]];
    }
    total * num::BigRational::from_integer(6.into())
}

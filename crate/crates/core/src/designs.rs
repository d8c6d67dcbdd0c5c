//! Steiner triple systems, pairs of them with high cogirth, and the unlabelled
//! union used as the base of the witness cone.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::configuration::{find_dense_configuration, LabelledTripleSystem};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{self, codegree_profile, induced_subgraph, ThreeGraph, Triple};
use crate::seeds;
use crate::sparsity;

pub const MAX_ORDER: usize = 33;
pub const COGIRTH_CAP: usize = 8;
/// Above this many `m`-subsets the local check samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Bose,
    Skolem,
    Cyclic,
    Search,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Bose => "bose",
            Construction::Skolem => "skolem",
            Construction::Cyclic => "cyclic",
            Construction::Search => "search",
        })
    }
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bose" => Ok(Construction::Bose),
            "skolem" => Ok(Construction::Skolem),
            "cyclic" => Ok(Construction::Cyclic),
            "search" => Ok(Construction::Search),
            other => Err(Error::Schema(format!("unknown construction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SteinerTripleSystem {
    pub t: usize,
    pub triples: ThreeGraph,
    pub construction: Construction,
}

impl SteinerTripleSystem {
    /// Wraps a graph after checking the triple count and that every pair is
    /// covered exactly once.
    pub fn from_graph(triples: ThreeGraph, construction: Construction) -> Result<Self> {
        let t = triples.vertex_count();
        let expected = t * t.saturating_sub(1) / 6;
        if triples.edge_count() != expected {
            return Err(Error::Verification(format!(
                "{} triples on {t} points, expected {expected}",
                triples.edge_count()
            )));
        }
        let profile = codegree_profile(&triples);
        if t >= 2 && (profile.max_codegree != 1 || profile.min_codegree() != 1) {
            return Err(Error::Verification("some pair is not covered exactly once".into()));
        }
        Ok(SteinerTripleSystem {
            t,
            triples,
            construction,
        })
    }

    pub fn to_text(&self) -> String {
        graph::to_3g(&self.triples, &[format!("sts t={} method={}", self.t, self.construction)])
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (g, comments) = graph::parse_3g(text)?;
        let construction = comments
            .iter()
            .filter_map(|c| c.strip_prefix("sts "))
            .flat_map(|c| c.split_whitespace())
            .find_map(|kv| kv.strip_prefix("method="))
            .map(str::parse)
            .transpose()?
            .unwrap_or(Construction::Search);
        Self::from_graph(g, construction)
    }
}

fn check_order(t: usize) -> Result<()> {
    if t % 6 != 1 && t % 6 != 3 {
        return Err(Error::WrongResidue(t));
    }
    Ok(())
}

/// Bose: `t = 3n`, `n` odd, idempotent commutative quasigroup `x∘y = (x+y)(n+1)/2 mod n`.
fn bose(t: usize) -> Vec<Triple> {
    let n = t / 3;
    let half = n.div_ceil(2);
    let op = |x: usize, y: usize| ((x + y) * half) % n;
    let pt = |x: usize, i: usize| x + n * (i % 3);
    let mut out = Vec::with_capacity(t * (t - 1) / 6);
    for x in 0..n {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for x in 0..n {
        for y in x + 1..n {
            for i in 0..3 {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Skolem: `t = 6n + 1`, half-idempotent commutative quasigroup on `Z_2n`
/// obtained from addition by renaming `2i -> i`, `2i+1 -> n+i`.
fn skolem(t: usize) -> Vec<Triple> {
    let n = (t - 1) / 6;
    let order = 2 * n;
    let op = |x: usize, y: usize| {
        let s = (x + y) % order;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            n + s / 2
        }
    };
    let pt = |x: usize, i: usize| x + order * (i % 3);
    let infinity = 3 * order;
    let mut out = Vec::with_capacity(t * (t - 1) / 6);
    for x in 0..n {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
        for i in 0..3 {
            out.push([infinity, pt(x + n, i), pt(x, i + 1)]);
        }
    }
    for x in 0..order {
        for y in x + 1..order {
            for i in 0..3 {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Cyclic STS from base blocks `{0, d, y}` found by backtracking over the
/// difference set `{1, …, (t-1)/2}` (minus `t/3` when `t ≡ 3 mod 6`).
fn cyclic(t: usize) -> Option<Vec<Triple>> {
    let half = (t - 1) / 2;
    let mut used = vec![false; half + 1];
    used[0] = true;
    let short = t % 6 == 3;
    if short {
        used[t / 3] = true;
    }
    let dist = |a: usize| a.min(t - a);
    fn solve(t: usize, used: &mut Vec<bool>, blocks: &mut Vec<[usize; 3]>, dist: &dyn Fn(usize) -> usize) -> bool {
        let Some(d) = used.iter().position(|&u| !u) else {
            return true;
        };
        for y in 1..t {
            if y == d {
                continue;
            }
            let diffs = [dist(d), dist((y + t - d) % t), dist(y)];
            if diffs[0] == diffs[1] || diffs[1] == diffs[2] || diffs[0] == diffs[2] {
                continue;
            }
            if diffs.iter().any(|&x| x == 0 || used[x]) {
                continue;
            }
            for &x in &diffs {
                used[x] = true;
            }
            blocks.push([0, d, y]);
            if solve(t, used, blocks, dist) {
                return true;
            }
            blocks.pop();
            for &x in &diffs {
                used[x] = false;
            }
        }
        false
    }
    let mut blocks = Vec::new();
    if !solve(t, &mut used, &mut blocks, &dist) {
        return None;
    }
    let mut out = Vec::new();
    for b in &blocks {
        for i in 0..t {
            out.push([(b[0] + i) % t, (b[1] + i) % t, (b[2] + i) % t]);
        }
    }
    if short {
        for i in 0..t / 3 {
            out.push([i, i + t / 3, i + 2 * t / 3]);
        }
    }
    Some(out)
}

/// Builds an STS of order `t`. With a seed the points are randomly relabelled.
pub fn build_sts(t: usize, method: Construction, seed: Option<u64>) -> Result<SteinerTripleSystem> {
    check_order(t)?;
    if t > MAX_ORDER {
        return Err(Error::UnsupportedOrder { t, method: "any" });
    }
    let raw = match method {
        Construction::Bose if t % 6 == 3 => bose(t),
        Construction::Bose => return Err(Error::UnsupportedOrder { t, method: "bose" }),
        Construction::Skolem if t % 6 == 1 => skolem(t),
        Construction::Skolem => return Err(Error::UnsupportedOrder { t, method: "skolem" }),
        Construction::Cyclic => cyclic(t).ok_or(Error::UnsupportedOrder { t, method: "cyclic" })?,
        Construction::Search => return Err(Error::UnsupportedOrder { t, method: "search" }),
    };
    let sts = SteinerTripleSystem::from_graph(ThreeGraph::new(t, &raw)?, method)?;
    match seed {
        None => Ok(sts),
        Some(s) => {
            let mut perm: Vec<usize> = (0..t).collect();
            perm.shuffle(&mut seeds::indexed_rng(s, 0));
            relabel(&sts, &perm)
        }
    }
}

/// The standard construction for the residue class of `t`.
pub fn default_method(t: usize) -> Result<Construction> {
    check_order(t)?;
    Ok(if t % 6 == 3 {
        Construction::Bose
    } else {
        Construction::Skolem
    })
}

pub fn relabel(s: &SteinerTripleSystem, perm: &[usize]) -> Result<SteinerTripleSystem> {
    let t = s.t;
    let mut seen = vec![false; t];
    if perm.len() != t {
        return Err(Error::NotABijection(t));
    }
    for &p in perm {
        if p >= t || seen[p] {
            return Err(Error::NotABijection(t));
        }
        seen[p] = true;
    }
    let mapped: Vec<Triple> = s
        .triples
        .edges()
        .iter()
        .map(|e| [perm[e[0]], perm[e[1]], perm[e[2]]])
        .collect();
    SteinerTripleSystem::from_graph(ThreeGraph::new(t, &mapped)?, s.construction)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StsPair {
    pub first: SteinerTripleSystem,
    pub second: SteinerTripleSystem,
    pub achieved_cogirth: usize,
    pub edge_disjoint: bool,
}

impl StsPair {
    pub fn new(first: SteinerTripleSystem, second: SteinerTripleSystem, cap: usize) -> Result<Self> {
        if first.t != second.t {
            return Err(Error::DimensionMismatch {
                expected: first.t,
                got: second.t,
            });
        }
        let edge_disjoint = first.triples.edges().iter().all(|e| !second.triples.contains_edge(*e));
        let achieved_cogirth = cogirth_of(&first.triples, &second.triples, cap);
        Ok(StsPair {
            first,
            second,
            achieved_cogirth,
            edge_disjoint,
        })
    }

    pub fn labelled(&self) -> LabelledTripleSystem {
        LabelledTripleSystem::from_systems(&[&self.first.triples, &self.second.triples])
    }

    /// `S₁ ∪ S₂` with shared triples collapsed.
    pub fn union(&self) -> ThreeGraph {
        self.first.triples.union(&self.second.triples).expect("same order")
    }

    /// Two `.3g` blocks separated by a `%` line.
    pub fn to_text(&self) -> String {
        format!("{}%\n{}", self.first.to_text(), self.second.to_text())
    }

    pub fn parse(text: &str, cap: usize) -> Result<Self> {
        let mut blocks = text.split("\n%\n");
        let (Some(a), Some(b), None) = (blocks.next(), blocks.next(), blocks.next()) else {
            return Err(Error::Parse {
                line: 0,
                msg: "pair file needs exactly two blocks separated by `%`".into(),
            });
        };
        Self::new(SteinerTripleSystem::parse(a)?, SteinerTripleSystem::parse(b)?, cap)
    }
}

/// Largest `g <= cap` such that no `i` labelled triples of `S₁ ⊔ S₂`,
/// `2 <= i < g`, span at most `i + 1` vertices.
pub fn cogirth_of(first: &ThreeGraph, second: &ThreeGraph, cap: usize) -> usize {
    let sys = LabelledTripleSystem::from_systems(&[first, second]);
    cogirth_of_labelled(&sys, cap)
}

pub fn cogirth_of_labelled(sys: &LabelledTripleSystem, cap: usize) -> usize {
    let cap = cap.max(3);
    for g in 3..=cap {
        if find_dense_configuration(sys, g).is_some() {
            return g - 1;
        }
    }
    cap
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSearch {
    pub pair: StsPair,
    pub target_cogirth: usize,
    pub met_target: bool,
    /// Attempt index of the returned pair.
    pub attempt: usize,
    pub attempts_run: usize,
}

/// Keeps the standard construction as `S₁` and draws `S₂` as a random
/// relabelling of an available construction, until the pair reaches
/// `target_cogirth` (capped at [`COGIRTH_CAP`]). Returns the first success by
/// attempt index, or the best pair seen.
pub fn search_pair(t: usize, target_cogirth: usize, max_attempts: usize, seed: u64, exec: Exec) -> Result<PairSearch> {
    check_order(t)?;
    if target_cogirth < 3 {
        return Err(Error::Domain(format!("target cogirth {target_cogirth} is below 3")));
    }
    let first = build_sts(t, default_method(t)?, None)?;
    let mut pool = vec![first.clone()];
    if let Ok(c) = build_sts(t, Construction::Cyclic, None) {
        pool.push(c);
    }
    let target = target_cogirth.min(COGIRTH_CAP);
    let attempt = |i: usize| -> (usize, SteinerTripleSystem) {
        let mut rng = seeds::indexed_rng(seed, i as u64);
        let mut perm: Vec<usize> = (0..t).collect();
        perm.shuffle(&mut rng);
        let mut second = relabel(&pool[i % pool.len()], &perm).expect("permutation is a bijection");
        second.construction = Construction::Search;
        (cogirth_of(&first.triples, &second.triples, target), second)
    };
    const CHUNK: usize = 64;
    let mut best: Option<(usize, usize, SteinerTripleSystem)> = None;
    let mut start = 0;
    while start < max_attempts {
        let len = CHUNK.min(max_attempts - start);
        let scored = exec.map_range(len, |k| attempt(start + k));
        for (k, (cogirth, second)) in scored.into_iter().enumerate() {
            let index = start + k;
            if best.as_ref().is_none_or(|(c, _, _)| cogirth > *c) {
                best = Some((cogirth, index, second));
            }
            if cogirth >= target {
                let (_, index, second) = best.take().expect("just set");
                return Ok(PairSearch {
                    pair: StsPair::new(first, second, target)?,
                    target_cogirth,
                    met_target: true,
                    attempt: index,
                    attempts_run: index + 1,
                });
            }
        }
        start += len;
    }
    let (_, index, second) = best.ok_or(Error::Domain("no attempts were made".into()))?;
    Ok(PairSearch {
        pair: StsPair::new(first, second, target)?,
        target_cogirth,
        met_target: false,
        attempt: index,
        attempts_run: max_attempts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SubsetPolicy {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl SubsetPolicy {
    /// Exhaustive when `C(t, m) <= 10⁶`, otherwise `samples` random subsets.
    pub fn choose(t: usize, m: usize, samples: usize, seed: u64) -> Self {
        if binomial(t as u64, m as u64) <= EXHAUSTIVE_LIMIT {
            SubsetPolicy::Exhaustive
        } else {
            SubsetPolicy::Sampled { count: samples, seed }
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFailure {
    pub subset: Vec<usize>,
    pub edges: usize,
    pub max_codegree: usize,
    pub sparse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCheck {
    pub policy: SubsetPolicy,
    pub subsets_checked: usize,
    /// Sorted by subset.
    pub failures: Vec<LocalFailure>,
}

/// The `m`-subsets `U` to examine under `policy`, in a deterministic order.
pub fn local_subsets(t: usize, m: usize, policy: &SubsetPolicy) -> Vec<Vec<usize>> {
    let m = m.min(t);
    match policy {
        SubsetPolicy::Exhaustive => (0..t).combinations(m).collect(),
        SubsetPolicy::Sampled { count, seed } => (0..*count)
            .map(|i| {
                let mut u = rand::seq::index::sample(&mut seeds::indexed_rng(*seed, i as u64), t, m).into_vec();
                u.sort_unstable();
                u
            })
            .collect(),
    }
}

/// Checks that `S[U]` is sparse with maximum codegree at most 2 for every
/// `m`-subset `U` selected by `policy`. Both properties are hereditary, so
/// `m`-subsets cover all smaller ones.
pub fn check_local_subsets(s: &ThreeGraph, m: usize, policy: &SubsetPolicy, exec: Exec) -> LocalCheck {
    let subsets = local_subsets(s.vertex_count(), m, policy);
    let verdicts = exec.map(&subsets, |u| {
        let sub = induced_subgraph(s, u).expect("subset in range");
        let max_codegree = codegree_profile(&sub).max_codegree;
        let sparse = if sub.vertex_count() <= sparsity::DEFAULT_BRUTE_CAP {
            sparsity::check_sparse_brute(&sub, None, sparsity::DEFAULT_BRUTE_CAP)
                .expect("within cap")
                .is_sparse
        } else {
            sparsity::check_sparse_exact(&sub).is_sparse
        };
        (!(sparse && max_codegree <= 2)).then(|| LocalFailure {
            subset: u.clone(),
            edges: sub.edge_count(),
            max_codegree,
            sparse,
        })
    });
    let mut failures: Vec<LocalFailure> = verdicts.into_iter().flatten().collect();
    failures.sort_by(|a, b| a.subset.cmp(&b.subset));
    failures.dedup_by(|a, b| a.subset == b.subset);
    LocalCheck {
        policy: policy.clone(),
        subsets_checked: subsets.len(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalReport {
    pub t: usize,
    pub m: usize,
    pub edge_count: usize,
    pub expected_edge_count: usize,
    pub max_codegree: usize,
    pub min_codegree: usize,
    pub edge_disjoint: bool,
    pub required_cogirth: usize,
    pub achieved_cogirth: usize,
    pub search_attempts: usize,
    pub local: LocalCheck,
    /// The direct local check found no failure.
    pub local_sparsity_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalSystem {
    pub graph: ThreeGraph,
    pub pair: StsPair,
    pub report: InternalReport,
}

/// Cogirth needed for every `≤ m`-vertex induced subgraph to be sparse:
/// any `g > max(2, C(m,3))`.
pub fn required_cogirth(m: usize) -> usize {
    (binomial(m as u64, 3) as usize + 1).max(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InternalOptions {
    pub max_attempts: usize,
    pub seed: u64,
    pub samples: usize,
    pub exec: Exec,
}

impl Default for InternalOptions {
    fn default() -> Self {
        InternalOptions {
            max_attempts: 10_000,
            seed: 0,
            samples: DEFAULT_SAMPLES,
            exec: Exec::default(),
        }
    }
}

/// `S = S₁ ∪ S₂` from a searched pair, with its structural report and a direct
/// check of all (or sampled) `m`-vertex induced subgraphs.
pub fn build_internal_system(t: usize, m: usize, opts: &InternalOptions) -> Result<InternalSystem> {
    if m < 3 {
        return Err(Error::Domain(format!("m = {m} is below 3")));
    }
    let required = required_cogirth(m);
    let search = search_pair(
        t,
        required,
        opts.max_attempts,
        seeds::stream(opts.seed, "designs.search_pair"),
        opts.exec,
    )?;
    Ok(internal_from_pair(search.pair, m, search.attempts_run, opts))
}

pub fn internal_from_pair(pair: StsPair, m: usize, attempts: usize, opts: &InternalOptions) -> InternalSystem {
    let t = pair.first.t;
    let graph = pair.union();
    let profile = codegree_profile(&graph);
    let policy = SubsetPolicy::choose(t, m, opts.samples, seeds::stream(opts.seed, "designs.local_sample"));
    let local = check_local_subsets(&graph, m, &policy, opts.exec);
    let report = InternalReport {
        t,
        m,
        edge_count: graph.edge_count(),
        expected_edge_count: t * (t - 1) / 3,
        max_codegree: profile.max_codegree,
        min_codegree: profile.min_codegree(),
        edge_disjoint: pair.edge_disjoint,
        required_cogirth: required_cogirth(m),
        achieved_cogirth: pair.achieved_cogirth,
        search_attempts: attempts,
        local_sparsity_verified: local.failures.is_empty(),
        local,
    };
    InternalSystem { graph, pair, report }
}

//! The normalized Lagrangian `p_H(x) = 6 Σ_{ijk ∈ H} x_i x_j x_k` and its
//! maximum `λ(H)` over the probability simplex.
//!
//! Only lower bounds are exact: a rational witness on the simplex evaluated in
//! rational arithmetic. The numeric maximum is an estimate.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::exec::Exec;
use crate::graph::ThreeGraph;
use crate::simplex::{self, AscentOptions, SimplexObjective};

/// Largest denominator used when rounding a float point to a rational witness.
pub const ROUNDING_DENOMINATOR: u64 = 1_000_000;

pub const DEFAULT_GRID_CAP: usize = 6;

/// A point of the probability simplex with exact entries and a float mirror.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    exact: Vec<Rational>,
    float: Vec<u64>,
}

impl WeightVector {
    pub fn from_rationals(weights: Vec<Rational>) -> Result<Self> {
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidWeights(format!("weight {i} is negative")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {}",
                exact::format_rational(&total)
            )));
        }
        let float = weights.iter().map(|w| exact::to_f64(w).to_bits()).collect();
        Ok(WeightVector { exact: weights, float })
    }

    pub fn uniform(n: usize) -> Self {
        Self::from_rationals(vec![exact::rat(1, n as i64); n]).expect("uniform weights are valid")
    }

    pub fn indicator(n: usize, i: usize) -> Self {
        let w = (0..n).map(|j| if j == i { Rational::one() } else { Rational::zero() }).collect();
        Self::from_rationals(w).expect("indicator weights are valid")
    }

    /// Rounds each coordinate to a continued-fraction convergent with bounded
    /// denominator, clamps at zero and renormalizes exactly.
    pub fn round_from_f64(x: &[f64], max_denom: u64) -> Result<Self> {
        if x.is_empty() {
            return Ok(WeightVector {
                exact: Vec::new(),
                float: Vec::new(),
            });
        }
        let rounded: Vec<Rational> = x
            .iter()
            .map(|&v| {
                let r = exact::approximate(v.max(0.0), max_denom);
                if r.is_negative() {
                    Rational::zero()
                } else {
                    r
                }
            })
            .collect();
        let total: Rational = rounded.iter().sum();
        if total.is_zero() {
            return Err(Error::InvalidWeights("all coordinates rounded to zero".into()));
        }
        Self::from_rationals(rounded.into_iter().map(|r| r / &total).collect())
    }

    pub fn dimension(&self) -> usize {
        self.exact.len()
    }

    pub fn exact(&self) -> &[Rational] {
        &self.exact
    }

    pub fn float(&self) -> Vec<f64> {
        self.float.iter().map(|&b| f64::from_bits(b)).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.exact.iter().map(exact::format_rational).collect()
    }
}

fn check_dimension(h: &ThreeGraph, got: usize) -> Result<()> {
    if h.vertex_count() != got {
        return Err(Error::DimensionMismatch {
            expected: h.vertex_count(),
            got,
        });
    }
    Ok(())
}

/// Exact `p_H(x)`.
pub fn evaluate_p(h: &ThreeGraph, x: &WeightVector) -> Result<Rational> {
    check_dimension(h, x.dimension())?;
    let w = x.exact();
    let sum: Rational = h.edges().iter().map(|e| &w[e[0]] * &w[e[1]] * &w[e[2]]).sum();
    Ok(sum * exact::int(6))
}

pub fn evaluate_p_f64(h: &ThreeGraph, x: &[f64]) -> f64 {
    6.0 * h.edges().iter().map(|e| x[e[0]] * x[e[1]] * x[e[2]]).sum::<f64>()
}

/// Weighted link values `d_i = Σ_{jk: ijk ∈ H} x_j x_k`.
pub fn link_values(h: &ThreeGraph, x: &[f64]) -> Vec<f64> {
    let mut d = vec![0.0; h.vertex_count()];
    for e in h.edges() {
        d[e[0]] += x[e[1]] * x[e[2]];
        d[e[1]] += x[e[0]] * x[e[2]];
        d[e[2]] += x[e[0]] * x[e[1]];
    }
    d
}

pub fn link_values_exact(h: &ThreeGraph, x: &[Rational]) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); h.vertex_count()];
    for e in h.edges() {
        d[e[0]] += &x[e[1]] * &x[e[2]];
        d[e[1]] += &x[e[0]] * &x[e[2]];
        d[e[2]] += &x[e[0]] * &x[e[1]];
    }
    d
}

/// `∂p_H/∂x_i = 6 d_i`.
pub fn gradient_p(h: &ThreeGraph, x: &[f64]) -> Vec<f64> {
    link_values(h, x).into_iter().map(|d| 6.0 * d).collect()
}

/// `p_H` as an ascent objective.
pub struct LagrangianObjective<'a>(pub &'a ThreeGraph);

impl SimplexObjective for LagrangianObjective<'_> {
    fn dimension(&self) -> usize {
        self.0.vertex_count()
    }
    fn value(&self, x: &[f64]) -> f64 {
        evaluate_p_f64(self.0, x)
    }
    fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        grad.fill(0.0);
        for e in self.0.edges() {
            grad[e[0]] += 6.0 * x[e[1]] * x[e[2]];
            grad[e[1]] += 6.0 * x[e[0]] * x[e[2]];
            grad[e[2]] += 6.0 * x[e[0]] * x[e[1]];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianEstimate {
    /// `p_H(witness)`, exact.
    pub lower_bound: Rational,
    pub witness: WeightVector,
    pub numeric_max: f64,
    pub restarts_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangianOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for LagrangianOptions {
    fn default() -> Self {
        LagrangianOptions {
            restarts: 200,
            tol: 1e-10,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl LagrangianOptions {
    pub fn ascent(&self) -> AscentOptions {
        AscentOptions {
            restarts: self.restarts,
            tol: self.tol,
            seed: self.seed,
            exec: self.exec,
            ..AscentOptions::default()
        }
    }
}

/// Restarted projected-gradient estimate of `λ(H)` with an exact rational
/// lower bound.
pub fn maximize_lagrangian(h: &ThreeGraph, opts: &LagrangianOptions) -> Result<LagrangianEstimate> {
    let n = h.vertex_count();
    if n == 0 {
        return Ok(LagrangianEstimate {
            lower_bound: Rational::zero(),
            witness: WeightVector {
                exact: Vec::new(),
                float: Vec::new(),
            },
            numeric_max: 0.0,
            restarts_used: 0,
            converged: true,
        });
    }
    let (best, used) = simplex::maximize(&LagrangianObjective(h), &opts.ascent());
    let witness = WeightVector::round_from_f64(&best.point, ROUNDING_DENOMINATOR)?;
    let lower_bound = evaluate_p(h, &witness)?;
    let numeric_max = best.value.max(exact::to_f64(&lower_bound));
    Ok(LagrangianEstimate {
        lower_bound,
        witness,
        numeric_max,
        restarts_used: used,
        converged: best.converged,
    })
}

/// Exhaustive maximum of `p_H` over `{x : x_i = k_i/steps, Σ k_i = steps}`.
pub fn grid_oracle(h: &ThreeGraph, steps: usize, vertex_cap: usize) -> Result<f64> {
    let n = h.vertex_count();
    if n > vertex_cap {
        return Err(Error::CapExceeded {
            what: "grid oracle vertex count",
            value: n,
            cap: vertex_cap,
        });
    }
    if h.edge_count() == 0 || steps == 0 {
        return Ok(0.0);
    }
    // Split edges by how they meet the last two vertices u = n-2, w = n-1.
    let (u, w) = (n - 2, n - 1);
    let mut inner = Vec::new();
    let mut with_u = Vec::new();
    let mut with_w = Vec::new();
    let mut with_uw = Vec::new();
    for e in h.edges() {
        let hu = e.contains(&u);
        let hw = e.contains(&w);
        let rest: Vec<usize> = e.iter().copied().filter(|&v| v != u && v != w).collect();
        match (hu, hw) {
            (false, false) => inner.push([rest[0], rest[1], rest[2]]),
            (true, false) => with_u.push([rest[0], rest[1]]),
            (false, true) => with_w.push([rest[0], rest[1]]),
            (true, true) => with_uw.push(rest[0]),
        }
    }
    let scale = 1.0 / steps as f64;
    let mut x = vec![0.0; n];
    let mut best = 0.0f64;
    let mut visit = |x: &[f64], remaining: usize| {
        let r = remaining as f64 * scale;
        let c: f64 = inner.iter().map(|e| x[e[0]] * x[e[1]] * x[e[2]]).sum();
        let lu: f64 = with_u.iter().map(|e| x[e[0]] * x[e[1]]).sum();
        let lw: f64 = with_w.iter().map(|e| x[e[0]] * x[e[1]]).sum();
        let m: f64 = with_uw.iter().map(|&k| x[k]).sum();
        // Concave in a (m >= 0): the grid max is at an end or next to the vertex.
        let mut ks = [0, remaining, 0, 0];
        if m > 0.0 {
            let vertex = ((lu - lw + m * r) / (2.0 * m) / scale).clamp(0.0, remaining as f64);
            ks[2] = vertex.floor() as usize;
            ks[3] = vertex.ceil() as usize;
        }
        for k in ks {
            let a = k as f64 * scale;
            let b = r - a;
            let v = 6.0 * (c + lu * a + lw * b + m * a * b);
            if v > best {
                best = v;
            }
        }
    };
    fn recurse(x: &mut Vec<f64>, depth: usize, prefix: usize, remaining: usize, scale: f64, visit: &mut dyn FnMut(&[f64], usize)) {
        if depth == prefix {
            visit(x, remaining);
            return;
        }
        for k in 0..=remaining {
            x[depth] = k as f64 * scale;
            recurse(x, depth + 1, prefix, remaining - k, scale, visit);
        }
        x[depth] = 0.0;
    }
    recurse(&mut x, 0, n - 2, steps, scale, &mut visit);
    Ok(best)
}

/// Edge density of the blow-up with the given part sizes:
/// `Σ_{ijk} n_i n_j n_k / C(Σ n_i, 3)`.
pub fn blowup_density(h: &ThreeGraph, part_sizes: &[u64]) -> Result<Rational> {
    check_dimension(h, part_sizes.len())?;
    if let Some(i) = part_sizes.iter().position(|&p| p == 0) {
        return Err(Error::Domain(format!("part {i} is empty")));
    }
    let big = |v: u64| num::BigInt::from(v);
    let edges: num::BigInt = h
        .edges()
        .iter()
        .map(|e| big(part_sizes[e[0]]) * big(part_sizes[e[1]]) * big(part_sizes[e[2]]))
        .sum();
    let n = big(part_sizes.iter().sum());
    let triples: num::BigInt = &n * (&n - 1u32) * (&n - 2u32) / 6u32;
    if triples.is_zero() {
        return Err(Error::Domain("blow-up has fewer than three vertices".into()));
    }
    Ok(Rational::new(edges, triples))
}

/// Witness record for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub graph_hash: String,
    pub weights: Vec<String>,
    pub lower_bound: String,
    pub numeric_max: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl WitnessRecord {
    pub fn new(h: &ThreeGraph, est: &LagrangianEstimate, seed: u64) -> Self {
        WitnessRecord {
            graph_hash: h.content_hash(),
            weights: est.witness.to_strings(),
            lower_bound: exact::format_rational(&est.lower_bound),
            numeric_max: est.numeric_max,
            restarts: est.restarts_used,
            seed,
        }
    }

    /// Re-evaluates the stored weights on `h` and checks the stored bound.
    pub fn verify(&self, h: &ThreeGraph) -> Result<Rational> {
        if h.content_hash() != self.graph_hash {
            return Err(Error::Verification("graph hash mismatch".into()));
        }
        let weights = self
            .weights
            .iter()
            .map(|s| exact::parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let value = evaluate_p(h, &WeightVector::from_rationals(weights)?)?;
        if exact::format_rational(&value) != self.lower_bound {
            return Err(Error::Verification("lower bound does not match the weights".into()));
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn triple() -> ThreeGraph {
        ThreeGraph::new(3, &[[0, 1, 2]]).unwrap()
    }

    fn quick() -> LagrangianOptions {
        LagrangianOptions {
            restarts: 30,
            seed: 3,
            ..Default::default()
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate_p(&triple(), &WeightVector::uniform(3)).unwrap(), rat(2, 9));
        assert_eq!(evaluate_p(&ThreeGraph::complete(4), &WeightVector::uniform(4)).unwrap(), rat(3, 8));
        assert!(matches!(
            evaluate_p(&triple(), &WeightVector::uniform(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::from_rationals(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(WeightVector::from_rationals(vec![rat(3, 2), rat(-1, 2)]).is_err());
        let w = WeightVector::round_from_f64(&[0.2, 0.3, 0.5000001], ROUNDING_DENOMINATOR).unwrap();
        let total: Rational = w.exact().iter().sum();
        assert!(total.is_one());
        assert!((w.float().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_triple_maximum() {
        let est = maximize_lagrangian(&triple(), &quick()).unwrap();
        assert!(est.lower_bound >= rat(2, 9));
        assert!((est.numeric_max - 2.0 / 9.0).abs() < 1e-6);
        assert_eq!(est.lower_bound, evaluate_p(&triple(), &est.witness).unwrap());
    }

    #[test]
    fn k4_maximum() {
        let est = maximize_lagrangian(&ThreeGraph::complete(4), &quick()).unwrap();
        assert!((est.numeric_max - 0.375).abs() < 1e-6);
    }

    #[test]
    fn edgeless_is_zero() {
        let est = maximize_lagrangian(&ThreeGraph::empty(4), &quick()).unwrap();
        assert!(est.lower_bound.is_zero());
        assert_eq!(grid_oracle(&ThreeGraph::empty(4), 300, DEFAULT_GRID_CAP).unwrap(), 0.0);
    }

    #[test]
    fn grid_examples() {
        let g = grid_oracle(&triple(), 300, DEFAULT_GRID_CAP).unwrap();
        assert!((2.0 / 9.0 - 1e-4..=2.0 / 9.0 + 1e-12).contains(&g));
        let m = maximize_lagrangian(&triple(), &quick()).unwrap();
        assert!((m.numeric_max - g).abs() < 2e-3);
        // Two disjoint triples: weight concentrates on one of them.
        let two = ThreeGraph::new(6, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let g2 = grid_oracle(&two, 60, DEFAULT_GRID_CAP).unwrap();
        assert!((g2 - 2.0 / 9.0).abs() < 1e-12);
        let m2 = maximize_lagrangian(&two, &quick()).unwrap();
        assert!((m2.numeric_max - g2).abs() < 2e-3);
        assert!(matches!(
            grid_oracle(&ThreeGraph::empty(7), 10, DEFAULT_GRID_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    /// Every composition of `steps` into `n` parts, evaluated directly.
    fn naive_grid(h: &ThreeGraph, steps: usize) -> f64 {
        fn go(h: &ThreeGraph, x: &mut Vec<f64>, i: usize, left: usize, steps: usize, best: &mut f64) {
            let n = x.len();
            if i == n - 1 {
                x[i] = left as f64 / steps as f64;
                *best = best.max(evaluate_p_f64(h, x));
                return;
            }
            for k in 0..=left {
                x[i] = k as f64 / steps as f64;
                go(h, x, i + 1, left - k, steps, best);
            }
        }
        let mut best = 0.0;
        go(h, &mut vec![0.0; h.vertex_count()], 0, steps, steps, &mut best);
        best
    }

    #[test]
    fn grid_shortcut_matches_naive_grid() {
        let all = ThreeGraph::complete(5).edges().to_vec();
        for mask in (0u32..1024).step_by(7) {
            let chosen: Vec<_> = (0..10).filter(|b| mask >> b & 1 == 1).map(|b| all[b]).collect();
            let h = ThreeGraph::new(5, &chosen).unwrap();
            for steps in [7, 12] {
                let fast = grid_oracle(&h, steps, DEFAULT_GRID_CAP).unwrap();
                assert!((fast - naive_grid(&h, steps)).abs() < 1e-12, "mask {mask} steps {steps}");
            }
        }
    }

    #[test]
    fn k4_grid_oracle() {
        let g = grid_oracle(&ThreeGraph::complete(4), 200, DEFAULT_GRID_CAP).unwrap();
        assert!((g - 0.375).abs() < 1e-12);
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(blowup_density(&triple(), &[1, 1, 1]).unwrap(), rat(1, 1));
        assert_eq!(blowup_density(&triple(), &[10, 10, 10]).unwrap(), rat(1000, 4060));
        // Cone over the empty graph on 20 vertices: the apex star.
        let star_edges: Vec<_> = (0..20).flat_map(|u| (u + 1..20).map(move |v| [u, v, 20])).collect();
        let star = ThreeGraph::new(21, &star_edges).unwrap();
        assert_eq!(blowup_density(&star, &[1; 21]).unwrap(), rat(190, 1330));
        // Large balanced blow-ups approach p_H at the uniform weighting.
        let d = exact::to_f64(&blowup_density(&triple(), &[1000, 1000, 1000]).unwrap());
        assert!((d - 2.0 / 9.0).abs() < 1e-3);
        assert!(blowup_density(&triple(), &[1, 1]).is_err());
    }

    #[test]
    fn witness_record_verifies() {
        let h = ThreeGraph::complete(4);
        let est = maximize_lagrangian(&h, &quick()).unwrap();
        let rec = WitnessRecord::new(&h, &est, 3);
        let json = serde_json::to_string(&rec).unwrap();
        let back: WitnessRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.verify(&h).unwrap(), est.lower_bound);
        let mut tampered = back.clone();
        tampered.lower_bound = "1/2".into();
        assert!(tampered.verify(&h).is_err());
        assert!(back.verify(&triple().with_isolated(1)).is_err());
    }

    fn arb_graph_and_point() -> impl Strategy<Value = (ThreeGraph, Vec<f64>)> {
        (3usize..8).prop_flat_map(|n| {
            let all = ThreeGraph::complete(n).edges().to_vec();
            (
                proptest::collection::vec(any::<bool>(), all.len()),
                proptest::collection::vec(0.01f64..1.0, n),
            )
                .prop_map(move |(mask, raw)| {
                    let chosen: Vec<_> = all.iter().zip(&mask).filter(|(_, &m)| m).map(|(e, _)| *e).collect();
                    let total: f64 = raw.iter().sum();
                    (ThreeGraph::new(n, &chosen).unwrap(), raw.iter().map(|v| v / total).collect())
                })
        })
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences((h, x) in arb_graph_and_point()) {
            let g = gradient_p(&h, &x);
            let eps = 1e-6;
            for i in 0..x.len() {
                let mut up = x.clone();
                let mut down = x.clone();
                up[i] += eps;
                down[i] -= eps;
                let fd = (evaluate_p_f64(&h, &up) - evaluate_p_f64(&h, &down)) / (2.0 * eps);
                prop_assert!((fd - g[i]).abs() < 1e-6, "coord {} fd {} analytic {}", i, fd, g[i]);
            }
        }

        #[test]
        fn adding_edges_never_lowers_p((h, x) in arb_graph_and_point(), extra in 0usize..35) {
            let all = ThreeGraph::complete(h.vertex_count());
            let e = all.edges()[extra % all.edge_count()];
            let bigger = h.union(&ThreeGraph::new(h.vertex_count(), &[e]).unwrap()).unwrap();
            let w = WeightVector::round_from_f64(&x, 1000).unwrap();
            prop_assert!(evaluate_p(&h, &w).unwrap() <= evaluate_p(&bigger, &w).unwrap());
        }

        #[test]
        fn lower_bound_never_exceeds_numeric_max((h, _x) in arb_graph_and_point(), seed in 0u64..1000) {
            let opts = LagrangianOptions { restarts: 40, seed, ..Default::default() };
            let est = maximize_lagrangian(&h, &opts).unwrap();
            prop_assert!(exact::to_f64(&est.lower_bound) <= est.numeric_max + 1e-9);
            prop_assert_eq!(evaluate_p(&h, &est.witness).unwrap(), est.lower_bound.clone());
            let padded = maximize_lagrangian(&h.with_isolated(2), &opts).unwrap();
            prop_assert!((padded.numeric_max - est.numeric_max).abs() <= 1e-6);
        }
    }
}

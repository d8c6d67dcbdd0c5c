//! Cones over 3-graphs and the apex-weight analysis that bounds their
//! Lagrangian by 4/9.
//!
//! Give the apex weight `1 - b` and spread `b` over `V(Q)` according to a
//! probability vector `z`. With `q = Σ_{ijk ∈ Q} z_i z_j z_k` and
//! `ρ = Σ z_i²` the cone's Lagrangian polynomial becomes
//!
//! ```text
//! Φ(b) = 3 (1 - b) b² (1 - ρ) + 6 b³ q
//! ```
//!
//! and `max_b Φ <= 4/9` exactly when `q <= τ(ρ)`, with
//! `τ(ρ) = (1 - ρ)(1 - √(1 - ρ)) / 2` for `ρ <= 5/9` and `2/27` above.

use std::cmp::Ordering;

use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, int, rat, Rational, Surd};
use crate::exec::Exec;
use crate::graph::{codegree_profile, ThreeGraph, Triple};
use crate::lagrangian::{self, link_values, link_values_exact, LagrangianOptions, WeightVector};
use crate::seeds;
use crate::simplex::{self, AscentOptions, SimplexObjective};
use crate::sparsity;

/// The target density 4/9.
pub fn four_ninths() -> Rational {
    rat(4, 9)
}

pub const FOUR_NINTHS: f64 = 4.0 / 9.0;
pub const TAU_BRANCH: f64 = 5.0 / 9.0;

/// `ρ₀ = (5 - 2√3)/9`, where `τ(ρ₀) = 1/27`.
pub fn rho0() -> Surd {
    Surd::new(rat(5, 9), rat(-2, 9), 3)
}

pub fn rho0_f64() -> f64 {
    (5.0 - 2.0 * 3f64.sqrt()) / 9.0
}

/// `(1 + √3)/3 = √(1 - ρ₀)`, the lower end of the low-`ρ` range of `s`.
pub fn s_threshold() -> Surd {
    Surd::new(rat(1, 3), rat(1, 3), 3)
}

pub fn s_threshold_f64() -> f64 {
    (1.0 + 3f64.sqrt()) / 3.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeGraph {
    pub base: ThreeGraph,
    pub graph: ThreeGraph,
    pub apex: usize,
}

/// `cone(Q)`: `Q` plus a new last vertex joined to every pair of `V(Q)`.
pub fn build_cone(q: &ThreeGraph) -> ConeGraph {
    let apex = q.vertex_count();
    let mut edges: Vec<Triple> = q.edges().to_vec();
    for u in 0..apex {
        for v in u + 1..apex {
            edges.push([u, v, apex]);
        }
    }
    let graph = ThreeGraph::new(apex + 1, &edges).expect("cone edges are distinct and in range");
    ConeGraph {
        base: q.clone(),
        graph,
        apex,
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} is outside [0, 1]")));
    }
    Ok(())
}

pub fn tau(rho: f64) -> Result<f64> {
    check_unit("rho", rho)?;
    if rho >= TAU_BRANCH {
        return Ok(2.0 / 27.0);
    }
    let c = 1.0 - rho;
    Ok(c * (1.0 - c.sqrt()) / 2.0)
}

/// Exact `τ(ρ)` when it is rational: always on the constant branch, and on
/// the left branch when `1 - ρ` is a rational square. `None` otherwise.
pub fn tau_exact(rho: &Rational) -> Result<Option<Rational>> {
    if rho.is_negative() || *rho > Rational::one() {
        return Err(Error::Domain(format!("rho = {} is outside [0, 1]", exact::format_rational(rho))));
    }
    if *rho >= rat(5, 9) {
        return Ok(Some(rat(2, 27)));
    }
    let c = Rational::one() - rho;
    Ok(exact::rational_sqrt(&c).map(|s| &c * (Rational::one() - s) / int(2)))
}

/// `τ'(ρ) = (3s - 2)/4` with `s = √(1-ρ)` below 5/9; 0 on the constant branch.
pub fn tau_derivative(rho: f64) -> Result<f64> {
    check_unit("rho", rho)?;
    if rho >= TAU_BRANCH {
        return Ok(0.0);
    }
    Ok((3.0 * (1.0 - rho).sqrt() - 2.0) / 4.0)
}

pub fn phi(b: f64, q: f64, rho: f64) -> Result<f64> {
    check_unit("b", b)?;
    check_unit("rho", rho)?;
    if q < 0.0 {
        return Err(Error::Domain(format!("q = {q} is negative")));
    }
    Ok(3.0 * (1.0 - b) * b * b * (1.0 - rho) + 6.0 * b * b * b * q)
}

pub fn phi_exact(b: &Rational, q: &Rational, rho: &Rational) -> Rational {
    let one = Rational::one();
    int(3) * (&one - b) * b * b * (&one - rho) + int(6) * b * b * b * q
}

/// Maximizer and maximum of `Φ(·, q, ρ)` on `[0, 1]`.
pub fn apex_optimum(q: f64, rho: f64) -> Result<(f64, f64)> {
    check_unit("rho", rho)?;
    if q < 0.0 {
        return Err(Error::Domain(format!("q = {q} is negative")));
    }
    let c = 1.0 - rho;
    let gap = c - 2.0 * q;
    if gap > 0.0 {
        let b0 = 2.0 * c / (3.0 * gap);
        if b0 <= 1.0 {
            return Ok((b0, 4.0 * c * c * c / (9.0 * gap * gap)));
        }
    }
    Ok((1.0, 6.0 * q))
}

/// Max of `Φ` over `points` equally spaced values of `b` in `[0, 1]`.
pub fn phi_grid_max(q: f64, rho: f64, points: usize) -> f64 {
    let c = 1.0 - rho;
    let last = (points.max(2) - 1) as f64;
    (0..points.max(2))
        .map(|k| {
            let b = k as f64 / last;
            3.0 * (1.0 - b) * b * b * c + 6.0 * b * b * b * q
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSample {
    pub rho: f64,
    pub q: f64,
    pub apex_value: f64,
    pub grid_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub samples: usize,
    pub grid_points: usize,
    /// Largest `max_b Φ - 4/9` seen (closed form or grid).
    pub worst_margin: f64,
    /// Largest `|closed form - grid max|`.
    pub max_grid_gap: f64,
    /// Samples with `max_b Φ > 4/9 + 1e-10`.
    pub violations: Vec<ThresholdSample>,
    /// Samples where the closed form and the grid disagree by more than `1e-8`.
    pub mismatches: Vec<ThresholdSample>,
}

/// Draws `(ρ, q)` with `ρ ~ U[0,1]`, `q ~ U[0, τ(ρ)]` and checks that the
/// apex optimum stays below 4/9, by closed form and by a `grid_points` grid.
pub fn check_tau_threshold(samples: usize, seed: u64, grid_points: usize, exec: Exec) -> ThresholdReport {
    let results = exec.map_range(samples, |i| {
        let mut rng = seeds::indexed_rng(seed, i as u64);
        let rho: f64 = rng.random_range(0.0..=1.0);
        let q = rng.random_range(0.0..=1.0) * tau(rho).expect("rho in range");
        threshold_sample(rho, q, grid_points)
    });
    summarize_threshold(results, grid_points)
}

pub fn threshold_sample(rho: f64, q: f64, grid_points: usize) -> ThresholdSample {
    let (_, apex_value) = apex_optimum(q, rho).expect("inputs in range");
    ThresholdSample {
        rho,
        q,
        apex_value,
        grid_value: phi_grid_max(q, rho, grid_points),
    }
}

pub fn summarize_threshold(results: Vec<ThresholdSample>, grid_points: usize) -> ThresholdReport {
    let mut report = ThresholdReport {
        samples: results.len(),
        grid_points,
        worst_margin: f64::NEG_INFINITY,
        max_grid_gap: 0.0,
        violations: Vec::new(),
        mismatches: Vec::new(),
    };
    for s in results {
        let top = s.apex_value.max(s.grid_value);
        report.worst_margin = report.worst_margin.max(top - FOUR_NINTHS);
        let gap = (s.apex_value - s.grid_value).abs();
        report.max_grid_gap = report.max_grid_gap.max(gap);
        if top > FOUR_NINTHS + 1e-10 {
            report.violations.push(s.clone());
        }
        if gap > 1e-8 {
            report.mismatches.push(s);
        }
    }
    report
}

/// `(q, ρ)` for `Q` at `z`, exactly.
pub fn q_of(q_graph: &ThreeGraph, z: &WeightVector) -> Result<(Rational, Rational)> {
    let p = lagrangian::evaluate_p(q_graph, z)?;
    let rho = z.exact().iter().map(|w| w * w).sum();
    Ok((p / int(6), rho))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeProfile {
    #[serde(with = "crate::exact::serde_rational")]
    pub q: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub rho: Rational,
    pub s: f64,
    /// Total weight on the base vertices.
    pub b: f64,
}

/// Decomposes a weighting `x` of `cone(Q)` into `(b, z)` and reports `q`, `ρ`
/// for `z = x|_Q / b`, together with the exact `b`. Needs `b > 0`.
pub fn cone_profile(cone: &ConeGraph, x: &WeightVector) -> Result<(ConeProfile, Rational)> {
    if x.dimension() != cone.graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: cone.graph.vertex_count(),
            got: x.dimension(),
        });
    }
    let base = &x.exact()[..cone.apex];
    let b: Rational = base.iter().sum();
    if b.is_zero() {
        return Err(Error::Domain("all weight sits on the apex".into()));
    }
    let z = WeightVector::from_rationals(base.iter().map(|w| w / &b).collect())?;
    let (q, rho) = q_of(&cone.base, &z)?;
    let s = (1.0 - exact::to_f64(&rho)).max(0.0).sqrt();
    Ok((
        ConeProfile {
            q,
            rho,
            s,
            b: exact::to_f64(&b),
        },
        b,
    ))
}

/// `Q` is sparse and has maximum codegree at most 2.
pub fn hypotheses_hold(q: &ThreeGraph) -> bool {
    codegree_profile(q).max_codegree <= 2 && is_sparse(q)
}

/// Brute force on small graphs, closure min-cuts otherwise.
pub fn is_sparse(q: &ThreeGraph) -> bool {
    if q.vertex_count() <= sparsity::DEFAULT_BRUTE_CAP {
        sparsity::check_sparse_brute(q, None, sparsity::DEFAULT_BRUTE_CAP)
            .expect("within cap")
            .is_sparse
    } else {
        sparsity::check_sparse_exact(q).is_sparse
    }
}

/// `F(z) = q_Q(z) - τ(ρ(z))`; at `ρ = 5/9` the subgradient `τ' = 0` is used.
pub struct QTauObjective<'a>(pub &'a ThreeGraph);

impl SimplexObjective for QTauObjective<'_> {
    fn dimension(&self) -> usize {
        self.0.vertex_count()
    }
    fn value(&self, z: &[f64]) -> f64 {
        let rho: f64 = z.iter().map(|v| v * v).sum::<f64>().min(1.0);
        lagrangian::evaluate_p_f64(self.0, z) / 6.0 - tau(rho).expect("rho in range")
    }
    fn gradient(&self, z: &[f64], grad: &mut [f64]) {
        let rho: f64 = z.iter().map(|v| v * v).sum::<f64>().min(1.0);
        let slope = tau_derivative(rho).expect("rho in range");
        let d = link_values(self.0, z);
        for i in 0..z.len() {
            grad[i] = d[i] - 2.0 * slope * z[i];
        }
    }
}

/// `q_Q(z)` alone.
pub struct QObjective<'a>(pub &'a ThreeGraph);

impl SimplexObjective for QObjective<'_> {
    fn dimension(&self) -> usize {
        self.0.vertex_count()
    }
    fn value(&self, z: &[f64]) -> f64 {
        lagrangian::evaluate_p_f64(self.0, z) / 6.0
    }
    fn gradient(&self, z: &[f64], grad: &mut [f64]) {
        grad.copy_from_slice(&link_values(self.0, z));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTauReport {
    pub hypotheses_violated: bool,
    /// Best `q - τ(ρ)` found.
    pub max_f: f64,
    pub best_point: Vec<f64>,
    pub converged: bool,
    /// Present when `max_f > 1e-9`.
    pub counterexample: Option<Vec<f64>>,
}

pub const FALSIFY_THRESHOLD: f64 = 1e-9;

/// Searches for `z` with `q_Q(z) > τ(ρ(z))` by restarted ascent on `q - τ(ρ)`.
pub fn falsify_q_tau(q: &ThreeGraph, opts: &AscentOptions) -> QTauReport {
    let hypotheses_violated = !hypotheses_hold(q);
    let (best, _) = simplex::maximize(&QTauObjective(q), opts);
    QTauReport {
        hypotheses_violated,
        max_f: best.value,
        counterexample: (best.value > FALSIFY_THRESHOLD).then(|| best.point.clone()),
        best_point: best.point,
        converged: best.converged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneOver27Report {
    pub max_q: f64,
    pub point: Vec<f64>,
    pub within_bound: bool,
}

/// Restarted maximization of `q_Q` for sparse `Q`; the bound is `1/27 + 1e-9`.
pub fn check_one_over_27(q: &ThreeGraph, opts: &AscentOptions) -> Result<OneOver27Report> {
    if !is_sparse(q) {
        return Err(Error::HypothesisViolated("Q is not sparse".into()));
    }
    let (best, _) = simplex::maximize(&QObjective(q), opts);
    Ok(OneOver27Report {
        max_q: best.value,
        within_bound: best.value <= 1.0 / 27.0 + 1e-9,
        point: best.point,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub mu: f64,
    pub residuals: Vec<f64>,
    pub link_values: Vec<f64>,
    pub a: f64,
    pub b: f64,
    pub q: f64,
    pub rho: f64,
    pub holds: bool,
}

/// Checks `d_i - 2B z_i = μ` for all `i`, with `B = τ'(ρ) = (3s-2)/4`,
/// `A = (1-s)(2-s)/2` and `μ = 3q - 2Bρ`.
pub fn stationarity_report(q_graph: &ThreeGraph, z: &[f64], tol: f64) -> Result<StationarityReport> {
    if z.len() != q_graph.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: q_graph.vertex_count(),
            got: z.len(),
        });
    }
    if let Some(i) = z.iter().position(|&v| v <= 0.0) {
        return Err(Error::Support(i));
    }
    let rho: f64 = z.iter().map(|v| v * v).sum();
    if rho >= TAU_BRANCH {
        return Err(Error::Domain(format!("rho = {rho} is not below 5/9")));
    }
    let s = (1.0 - rho).sqrt();
    let b = (3.0 * s - 2.0) / 4.0;
    let a = (1.0 - s) * (2.0 - s) / 2.0;
    let q = lagrangian::evaluate_p_f64(q_graph, z) / 6.0;
    let mu = 3.0 * q - 2.0 * b * rho;
    let d = link_values(q_graph, z);
    let residuals: Vec<f64> = d.iter().zip(z).map(|(di, zi)| (di - 2.0 * b * zi - mu).abs()).collect();
    let holds = residuals.iter().all(|&r| r <= tol);
    Ok(StationarityReport {
        mu,
        residuals,
        link_values: d,
        a,
        b,
        q,
        rho,
        holds,
    })
}

/// `Σ_i z_i (d_i - 2B z_i)`, which equals `3q - 2Bρ` for every `B`.
pub fn weighted_stationarity_sum(q_graph: &ThreeGraph, z: &[Rational], b: &Rational) -> Rational {
    let d = link_values_exact(q_graph, z);
    z.iter()
        .zip(&d)
        .map(|(zi, di)| zi * (di - int(2) * b * zi))
        .sum()
}

pub fn coefficient_a(s: f64) -> f64 {
    (1.0 - s) * (2.0 - s) / 2.0
}

pub fn coefficient_b(s: f64) -> f64 {
    (3.0 * s - 2.0) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
}

/// Evaluates both sides of `N·A + 2B < ρ·√(3N-6)`, the inequality a low-`ρ`
/// counterexample would need. `violated` means the inequality holds.
pub fn necessary_counterexample_inequality(n: u64, s: f64) -> Result<InequalityCheck> {
    if n < 3 {
        return Err(Error::Domain(format!("N = {n} is below 3")));
    }
    if !(s > s_threshold_f64() && s < 1.0) {
        return Err(Error::Domain(format!("s = {s} is outside ((1+√3)/3, 1)")));
    }
    let rho = 1.0 - s * s;
    let lhs = n as f64 * coefficient_a(s) + 2.0 * coefficient_b(s);
    let rhs = rho * ((3 * n - 6) as f64).sqrt();
    Ok(InequalityCheck {
        lhs,
        rhs,
        violated: lhs < rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySweep {
    pub n_max: u64,
    pub s_points: usize,
    pub checked: u64,
    /// Smallest `lhs - rhs`.
    pub worst_margin: f64,
    pub violations: Vec<(u64, f64)>,
}

/// All `N` in `3..=n_max` against `s_points` interior grid points of
/// `((1+√3)/3, 1)`.
pub fn inequality_sweep(n_max: u64, s_points: usize, exec: Exec) -> InequalitySweep {
    let lo = s_threshold_f64();
    let grid: Vec<f64> = (1..=s_points)
        .map(|k| lo + (1.0 - lo) * k as f64 / (s_points + 1) as f64)
        .filter(|&s| s > lo && s < 1.0)
        .collect();
    let per_s = exec.map(&grid, |&s| {
        let mut worst = f64::INFINITY;
        let mut bad = Vec::new();
        for n in 3..=n_max {
            let c = necessary_counterexample_inequality(n, s).expect("s inside range");
            worst = worst.min(c.lhs - c.rhs);
            if c.violated {
                bad.push((n, s));
            }
        }
        (worst, bad)
    });
    let mut sweep = InequalitySweep {
        n_max,
        s_points: grid.len(),
        checked: grid.len() as u64 * n_max.saturating_sub(2),
        worst_margin: f64::INFINITY,
        violations: Vec::new(),
    };
    for (worst, bad) in per_s {
        sweep.worst_margin = sweep.worst_margin.min(worst);
        sweep.violations.extend(bad);
    }
    sweep
}

/// `g(s) = s³ + 10s² - 11s + 1`.
pub fn g_poly(s: &Rational) -> Rational {
    s * s * s + int(10) * s * s - int(11) * s + Rational::one()
}

/// `g'(s) = 3s² + 20s - 11`.
pub fn g_prime(s: &Rational) -> Rational {
    int(3) * s * s + int(20) * s - int(11)
}

pub fn g_poly_f64(s: f64) -> f64 {
    s * s * s + 10.0 * s * s - 11.0 * s + 1.0
}

/// `g` evaluated exactly at `(1+√3)/3` in `Q(√3)`.
pub fn g_at_threshold() -> Surd {
    let s = s_threshold();
    let one = Surd::rational(Rational::one(), 3);
    s.pow(3) + s.pow(2) * int(10) - s * int(11) + one
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    #[serde(with = "crate::exact::serde_rational")]
    pub s: Rational,
    /// `8A(A+B) - 3ρ²`.
    #[serde(with = "crate::exact::serde_rational")]
    pub lhs: Rational,
    /// `(1-s)·g(s)`.
    #[serde(with = "crate::exact::serde_rational")]
    pub rhs: Rational,
    pub identity_holds: bool,
    #[serde(with = "crate::exact::serde_rational")]
    pub g: Rational,
    #[serde(with = "crate::exact::serde_rational")]
    pub g_prime: Rational,
    pub above_threshold: bool,
    /// `Some(g > 0 && g' > 0)` when `s >= (1+√3)/3`, else `None`.
    pub sign_claims_hold: Option<bool>,
}

/// Both sides of `8A(A+B) - 3ρ² = (1-s)(s³+10s²-11s+1)` in exact arithmetic,
/// with `A = (1-s)(2-s)/2`, `B = (3s-2)/4`, `ρ = 1 - s²`.
pub fn algebra_identities(s: &Rational) -> Result<IdentityReport> {
    if s.is_negative() || *s > Rational::one() {
        return Err(Error::Domain(format!("s = {} is outside [0, 1]", exact::format_rational(s))));
    }
    let one = Rational::one();
    let a = (&one - s) * (int(2) - s) / int(2);
    let b = (int(3) * s - int(2)) / int(4);
    let rho = &one - s * s;
    let lhs = int(8) * &a * (&a + &b) - int(3) * &rho * &rho;
    let g = g_poly(s);
    let rhs = (&one - s) * &g;
    let gp = g_prime(s);
    let above_threshold = s_threshold().cmp_rational(s) != Ordering::Greater;
    let sign_claims_hold = above_threshold.then(|| g.is_positive() && gp.is_positive());
    Ok(IdentityReport {
        s: s.clone(),
        identity_holds: lhs == rhs,
        lhs,
        rhs,
        g,
        g_prime: gp,
        above_threshold,
        sign_claims_hold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub samples: usize,
    pub identity_failures: Vec<String>,
    pub sign_failures: Vec<String>,
    pub above_threshold: usize,
}

/// Random rationals `s = k/d` with `1 <= k < d <= 10⁶`.
pub fn random_unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let d: i64 = rng.random_range(2..=1_000_000);
    let k: i64 = rng.random_range(1..d);
    rat(k, d)
}

pub fn identity_sweep(samples: usize, seed: u64, exec: Exec) -> IdentitySweep {
    let reports = exec.map_range(samples, |i| {
        let mut rng = seeds::indexed_rng(seed, i as u64);
        algebra_identities(&random_unit_rational(&mut rng)).expect("s in (0,1)")
    });
    let mut sweep = IdentitySweep {
        samples,
        identity_failures: Vec::new(),
        sign_failures: Vec::new(),
        above_threshold: 0,
    };
    for r in reports {
        let label = exact::format_rational(&r.s);
        if !r.identity_holds {
            sweep.identity_failures.push(label.clone());
        }
        if r.above_threshold {
            sweep.above_threshold += 1;
        }
        if r.sign_claims_hold == Some(false) {
            sweep.sign_failures.push(label);
        }
    }
    sweep
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeStatus {
    Certified,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCertificate {
    pub status: ConeStatus,
    pub is_sparse: bool,
    pub max_codegree: usize,
    /// Numeric `λ(cone(Q))` estimate, computed only when certified.
    pub numeric_lambda: Option<f64>,
    /// `numeric_lambda <= 4/9 + 1e-6`.
    pub numeric_consistent: Option<bool>,
}

/// Structural certificate `λ(cone(Q)) <= 4/9` from the hypotheses (sparse,
/// `Δ₂ <= 2`), with a numeric cross-check of the cone's Lagrangian.
pub fn certify_cone_bound(q: &ThreeGraph, opts: &LagrangianOptions) -> Result<ConeCertificate> {
    let is_sparse = is_sparse(q);
    let max_codegree = codegree_profile(q).max_codegree;
    if !(is_sparse && max_codegree <= 2) {
        return Ok(ConeCertificate {
            status: ConeStatus::NotApplicable,
            is_sparse,
            max_codegree,
            numeric_lambda: None,
            numeric_consistent: None,
        });
    }
    let est = lagrangian::maximize_lagrangian(&build_cone(q).graph, opts)?;
    Ok(ConeCertificate {
        status: ConeStatus::Certified,
        is_sparse,
        max_codegree,
        numeric_lambda: Some(est.numeric_max),
        numeric_consistent: Some(est.numeric_max <= FOUR_NINTHS + 1e-6),
    })
}

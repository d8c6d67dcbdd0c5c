//! Projected gradient ascent on the probability simplex.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::seeds;

/// A smooth (or piecewise smooth) function on the simplex.
pub trait SimplexObjective: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], grad: &mut [f64]);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    /// Random Dirichlet(1,…,1) starts, on top of the uniform and vertex-indicator starts.
    pub restarts: usize,
    /// Tolerance on the norm of the unit-step projected gradient.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub exec: Exec,
    /// Coordinates below this are zeroed before the polishing pass.
    pub support_floor: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        AscentOptions {
            restarts: 200,
            tol: 1e-10,
            max_iter: 50_000,
            seed: 0,
            exec: Exec::default(),
            support_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Euclidean projection onto `{x >= 0, Σx = 1}` (sort-based).
pub fn project(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    if n == 0 {
        return Vec::new();
    }
    let mut u = v.to_vec();
    u.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumulative += uj;
        let t = (cumulative - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn step(x: &[f64], g: &[f64], alpha: f64) -> Vec<f64> {
    let moved: Vec<f64> = x.iter().zip(g).map(|(xi, gi)| xi + alpha * gi).collect();
    project(&moved)
}

const STALL_STEPS: usize = 25;
const STALL_RESIDUAL: f64 = 1e-7;

/// Projected gradient ascent with Armijo backtracking from `start`. Stops when
/// the unit-step projected gradient is below `tol`, or when the value has
/// stopped moving for a run of steps and the residual is below `1e-7`.
pub fn ascend<O: SimplexObjective + ?Sized>(obj: &O, start: &[f64], tol: f64, max_iter: usize) -> AscentResult {
    const ARMIJO: f64 = 1e-4;
    let n = obj.dimension();
    let mut x = project(start);
    let mut fx = obj.value(&x);
    let mut g = vec![0.0; n];
    let mut alpha: f64 = 1.0;
    let mut stalled = 0;
    for it in 0..max_iter {
        obj.gradient(&x, &mut g);
        let residual = norm_diff(&step(&x, &g, 1.0), &x);
        // Near a maximizer the value is flat to second order, so the iterate
        // can only be located to about the square root of f64 resolution.
        if residual <= tol || (stalled >= STALL_STEPS && residual <= tol.max(STALL_RESIDUAL)) {
            return AscentResult {
                point: x,
                value: fx,
                converged: true,
                iterations: it,
            };
        }
        if stalled >= STALL_STEPS {
            stalled = 0;
        }
        alpha = (alpha * 2.0).min(1e6);
        loop {
            let candidate = step(&x, &g, alpha);
            let predicted: f64 = candidate.iter().zip(&x).zip(&g).map(|((c, xi), gi)| gi * (c - xi)).sum();
            let fc = obj.value(&candidate);
            if fc >= fx + ARMIJO * predicted {
                if fc - fx <= 1e-15 * fx.abs().max(1.0) {
                    stalled += 1;
                } else {
                    stalled = 0;
                }
                x = candidate;
                fx = fc;
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-18 {
                // No ascent direction left at floating-point resolution.
                let converged = norm_diff(&step(&x, &g, 1.0), &x) <= tol.max(STALL_RESIDUAL);
                return AscentResult {
                    point: x,
                    value: fx,
                    converged,
                    iterations: it,
                };
            }
        }
    }
    AscentResult {
        point: x,
        value: fx,
        converged: false,
        iterations: max_iter,
    }
}

/// Ascent followed by zeroing tiny coordinates and a polishing pass.
pub fn ascend_with_shrink<O: SimplexObjective + ?Sized>(obj: &O, start: &[f64], opts: &AscentOptions) -> AscentResult {
    let first = ascend(obj, start, opts.tol, opts.max_iter);
    if !first.point.iter().any(|&v| v > 0.0 && v < opts.support_floor) {
        return first;
    }
    let shrunk: Vec<f64> = first
        .point
        .iter()
        .map(|&v| if v < opts.support_floor { 0.0 } else { v })
        .collect();
    let polished = ascend(obj, &shrunk, opts.tol, opts.max_iter);
    if polished.value >= first.value {
        AscentResult {
            iterations: first.iterations + polished.iterations,
            ..polished
        }
    } else {
        first
    }
}

/// A point drawn from Dirichlet(1,…,1).
pub fn dirichlet<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|d| d / total).collect()
}

/// The deterministic start list: uniform, each vertex indicator, then
/// `restarts` Dirichlet points where restart `i` draws from seed `seed + i`.
pub fn start_points(n: usize, restarts: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut starts = Vec::with_capacity(restarts + n + 1);
    if n == 0 {
        return starts;
    }
    starts.push(vec![1.0 / n as f64; n]);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push(e);
    }
    for r in 0..restarts {
        let mut rng = seeds::indexed_rng(seed, r as u64);
        starts.push(dirichlet(n, &mut rng));
    }
    starts
}

/// Runs every start and keeps the best; ties go to the earliest start.
pub fn maximize<O: SimplexObjective + ?Sized>(obj: &O, opts: &AscentOptions) -> (AscentResult, usize) {
    let starts = start_points(obj.dimension(), opts.restarts, opts.seed);
    let results = opts.exec.map(&starts, |s| ascend_with_shrink(obj, s, opts));
    let count = results.len();
    let best = results
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .unwrap_or(AscentResult {
            point: Vec::new(),
            value: 0.0,
            converged: true,
            iterations: 0,
        });
    (best, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `-Σ (x_i - c_i)^2`: concave, maximized at the projection of `c`.
    struct Quadratic(Vec<f64>);

    impl SimplexObjective for Quadratic {
        fn dimension(&self) -> usize {
            self.0.len()
        }
        fn value(&self, x: &[f64]) -> f64 {
            -x.iter().zip(&self.0).map(|(a, c)| (a - c) * (a - c)).sum::<f64>()
        }
        fn gradient(&self, x: &[f64], g: &mut [f64]) {
            for ((gi, a), c) in g.iter_mut().zip(x).zip(&self.0) {
                *gi = -2.0 * (a - c);
            }
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&[0.2, 0.3, 0.5]), vec![0.2, 0.3, 0.5]);
        assert_eq!(project(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project(&[1.0, 1.0, 1.0]);
        for v in p {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn concave_objective_reaches_projection() {
        let obj = Quadratic(vec![0.9, 0.4, -0.3]);
        let target = project(&obj.0);
        let r = ascend(&obj, &[1.0 / 3.0; 3], 1e-12, 10_000);
        assert!(r.converged);
        for (a, b) in r.point.iter().zip(&target) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn starts_are_reproducible() {
        assert_eq!(start_points(4, 5, 9), start_points(4, 5, 9));
        assert_ne!(start_points(4, 5, 9)[5], start_points(4, 5, 10)[5]);
        // Restart i of seed s equals restart 0 of seed s + i.
        assert_eq!(start_points(4, 3, 9)[5 + 2], start_points(4, 1, 11)[5]);
    }

    proptest! {
        #[test]
        fn projection_lands_on_simplex_and_is_nearest(v in proptest::collection::vec(-3.0f64..3.0, 1..8)) {
            let p = project(&v);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            // Any other simplex point is no closer.
            let uniform = vec![1.0 / v.len() as f64; v.len()];
            prop_assert!(norm_diff(&p, &v) <= norm_diff(&uniform, &v) + 1e-12);
        }
    }
}

//! `hyperjump analyze ...`: one subcommand per cone or Lagrangian operation.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde_json::{json, Value};

use hyperjump::cone;
use hyperjump::exact::format_rational;
use hyperjump::lagrangian::{self, LagrangianOptions};
use hyperjump::seeds;
use hyperjump::simplex::AscentOptions;
use hyperjump::sparsity::{self, SparsityMode};

use crate::report::Report;
use crate::{read_graph, write_output, RunContext};

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Input `.3g` graph.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    restarts: Option<usize>,
    /// Ascent stopping tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// τ(ρ).
    Tau {
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Φ(b, q, ρ) = 3(1-b)b²(1-ρ) + 6b³q.
    Phi {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        rho: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Maximizer of Φ over b in closed form, checked against a grid.
    ApexOpt {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 10_000)]
        grid_steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Random (ρ, q ≤ τ(ρ)) samples: max_b Φ stays below 4/9.
    Threshold {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        grid_steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact check of 8A(A+B) - 3ρ² = (1-s)(s³+10s²-11s+1) at random rational s.
    IdentitySweep {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// N·A + 2B >= ρ√(3N-6) over N and a grid of s above (1+√3)/3.
    InequalitySweep {
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
        #[arg(long, default_value_t = 1000)]
        s_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Restarted maximum of q over the simplex for a sparse graph.
    One27 {
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for z with q(z) > τ(ρ(z)).
    Qtau {
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric λ with an exact rational lower bound, and a grid oracle on small graphs.
    Lagrangian {
        #[command(flatten)]
        search: SearchArgs,
        /// Grid oracle resolution; by default it runs only up to 5 vertices.
        #[arg(long)]
        grid_steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// `a ± |b|·√d`.
fn surd_text(x: &hyperjump::exact::Surd) -> String {
    use num::Signed;
    let sign = if x.b.is_negative() { '-' } else { '+' };
    format!("{} {sign} {}·√{}", format_rational(&x.a), format_rational(&x.b.abs()), x.d)
}

/// Sparsity by brute force up to `brute_vertices`, by min cut above it.
fn sparsity(ctx: &RunContext, g: &hyperjump::ThreeGraph) -> Result<Value> {
    let (mode, verdict) = if g.vertex_count() <= ctx.config.brute_vertices {
        ("brute", sparsity::check_sparse_brute(g, None, ctx.config.brute_vertices)?)
    } else {
        ("exact", sparsity::check_sparse(g, SparsityMode::Exact, None)?)
    };
    Ok(json!({"mode": mode, "is_sparse": verdict.is_sparse, "violating_set": verdict.violating_set}))
}

fn emit(ctx: &RunContext, report: &Report, output: &OutputArgs) -> Result<()> {
    if output.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.table());
    }
    if let Some(p) = &output.out {
        write_output(ctx, p, &report.to_json())?;
    }
    Ok(())
}

fn ascent(ctx: &RunContext, search: &SearchArgs, stream: &str) -> AscentOptions {
    AscentOptions {
        restarts: search.restarts.unwrap_or(ctx.config.restarts),
        tol: search.tol,
        seed: seeds::stream(ctx.config.seed, stream),
        exec: ctx.exec,
        ..AscentOptions::default()
    }
}

pub fn run(ctx: &RunContext, cmd: AnalyzeCommand) -> Result<ExitCode> {
    let mut ok = true;
    let (report, output) = match cmd {
        AnalyzeCommand::Tau { rho, output } => {
            let tau = cone::tau(rho)?;
            let branch = if rho >= cone::TAU_BRANCH { "constant" } else { "left" };
            let result = json!({"tau": tau, "branch": branch, "derivative": cone::tau_derivative(rho)?});
            (Report::new("tau", json!({"rho": rho}), result), output)
        }
        AnalyzeCommand::Phi { b, q, rho, output } => {
            let v = cone::phi(b, q, rho)?;
            (Report::new("phi", json!({"b": b, "q": q, "rho": rho}), json!({"phi": v})), output)
        }
        AnalyzeCommand::ApexOpt { q, rho, grid_steps, output } => {
            let (b_star, value) = cone::apex_optimum(q, rho)?;
            let grid = cone::phi_grid_max(q, rho, grid_steps);
            let mut r = Report::new(
                "apex-opt",
                json!({"q": q, "rho": rho}),
                json!({"b_star": b_star, "value": value, "grid_max": grid, "grid_gap": (value - grid).abs()}),
            );
            r.worst_margin = Some(value.max(grid) - cone::FOUR_NINTHS);
            r.grid_resolution = Some(grid_steps);
            (r, output)
        }
        AnalyzeCommand::Threshold { samples, grid_steps, output } => {
            let seed = seeds::stream(ctx.config.seed, "cone.check_tau_threshold");
            let rep = cone::check_tau_threshold(samples, seed, grid_steps, ctx.exec);
            ok = rep.violations.is_empty() && rep.mismatches.is_empty();
            let mut r = Report::new(
                "threshold",
                json!({"samples": samples}),
                json!({"max_grid_gap": rep.max_grid_gap, "mismatches": rep.mismatches.len()}),
            );
            r.worst_margin = Some(rep.worst_margin);
            r.violations = rep.violations.iter().map(|s| json!(s)).collect();
            r.seed = Some(ctx.config.seed);
            r.grid_resolution = Some(grid_steps);
            (r, output)
        }
        AnalyzeCommand::IdentitySweep { samples, output } => {
            let seed = seeds::stream(ctx.config.seed, "cone.identity_sweep");
            let sweep = cone::identity_sweep(samples, seed, ctx.exec);
            ok = sweep.identity_failures.is_empty() && sweep.sign_failures.is_empty();
            let g = cone::g_at_threshold();
            let mut r = Report::new(
                "identity-sweep",
                json!({"samples": samples}),
                json!({
                    "identity_failures": sweep.identity_failures.len(),
                    "sign_failures": sweep.sign_failures.len(),
                    "above_threshold": sweep.above_threshold,
                    "g_at_threshold": surd_text(&g),
                    "g_at_threshold_f64": g.to_f64(),
                }),
            );
            r.violations = sweep
                .identity_failures
                .iter()
                .chain(&sweep.sign_failures)
                .map(|s| Value::String(s.clone()))
                .collect();
            r.seed = Some(ctx.config.seed);
            (r, output)
        }
        AnalyzeCommand::InequalitySweep { n_max, s_points, output } => {
            let sweep = cone::inequality_sweep(n_max, s_points, ctx.exec);
            ok = sweep.violations.is_empty();
            let mut r = Report::new(
                "inequality-sweep",
                json!({"n_max": n_max, "s_points": s_points}),
                json!({"checked": sweep.checked}),
            );
            r.worst_margin = Some(sweep.worst_margin);
            r.violations = sweep.violations.iter().map(|(n, s)| json!({"n": n, "s": s})).collect();
            r.grid_resolution = Some(sweep.s_points);
            (r, output)
        }
        AnalyzeCommand::One27 { search, output } => {
            let g = read_graph(&search.input)?;
            let rep = cone::check_one_over_27(&g, &ascent(ctx, &search, "cone.one_over_27"))?;
            let margin = rep.max_q - 1.0 / 27.0;
            ok = margin <= ctx.config.numeric_tol;
            let mut r = Report::new(
                "one27",
                json!({"graph_hash": g.content_hash(), "vertices": g.vertex_count(), "edges": g.edge_count()}),
                json!({"max_q": rep.max_q, "point": rep.point, "sparsity": sparsity(ctx, &g)?}),
            );
            r.worst_margin = Some(margin);
            if !ok {
                r.violations.push(json!({"max_q": rep.max_q}));
            }
            r.seed = Some(ctx.config.seed);
            (r, output)
        }
        AnalyzeCommand::Qtau { search, output } => {
            let g = read_graph(&search.input)?;
            let rep = cone::falsify_q_tau(&g, &ascent(ctx, &search, "cone.falsify_q_tau"));
            let stationarity = cone::stationarity_report(&g, &rep.best_point, ctx.config.gradient_tol).ok();
            let mut r = Report::new(
                "qtau",
                json!({"graph_hash": g.content_hash(), "vertices": g.vertex_count(), "edges": g.edge_count()}),
                json!({
                    "hypotheses_violated": rep.hypotheses_violated,
                    "max_f": rep.max_f,
                    "converged": rep.converged,
                    "counterexample": rep.counterexample,
                    "interior_stationarity_holds": stationarity.map(|s| s.holds),
                    "sparsity": sparsity(ctx, &g)?,
                }),
            );
            r.worst_margin = Some(rep.max_f);
            if let Some(z) = &rep.counterexample {
                r.violations.push(json!(z));
            }
            // A counterexample is only a failure when the hypotheses hold.
            ok = rep.counterexample.is_none() || rep.hypotheses_violated;
            r.seed = Some(ctx.config.seed);
            (r, output)
        }
        AnalyzeCommand::Lagrangian { search, grid_steps, output } => {
            let g = read_graph(&search.input)?;
            let opts = LagrangianOptions {
                restarts: search.restarts.unwrap_or(ctx.config.restarts),
                tol: search.tol,
                seed: seeds::stream(ctx.config.seed, "lagrangian.maximize"),
                exec: ctx.exec,
            };
            let est = lagrangian::maximize_lagrangian(&g, &opts)?;
            let steps = match grid_steps {
                Some(s) => Some(s),
                None if g.vertex_count() <= 5 => Some(ctx.config.grid_steps),
                None => None,
            };
            let grid = match steps {
                Some(s) => Some(lagrangian::grid_oracle(&g, s, lagrangian::DEFAULT_GRID_CAP)?),
                None => None,
            };
            let mut r = Report::new(
                "lagrangian",
                json!({"graph_hash": g.content_hash(), "vertices": g.vertex_count(), "edges": g.edge_count()}),
                json!({
                    "numeric_max": est.numeric_max,
                    "lower_bound": format_rational(&est.lower_bound),
                    "witness": est.witness.to_strings(),
                    "converged": est.converged,
                    "restarts_used": est.restarts_used,
                    "grid_max": grid,
                }),
            );
            r.seed = Some(ctx.config.seed);
            r.grid_resolution = steps;
            (r, output)
        }
    };
    emit(ctx, &report, &output)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

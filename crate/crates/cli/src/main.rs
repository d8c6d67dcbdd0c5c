mod analyze;
mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperjump::designs::{self, Construction, SubsetPolicy};
use hyperjump::witness::{self, WitnessOptions};
use hyperjump::{exec, graph, Exec};

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "hyperjump", version, about = "Witness certificates, Steiner designs and cone analyses for 3-graph Lagrangians")]
struct Cli {
    /// Optional `key = value` run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run on one thread in input order.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build and validate a Steiner triple system.
    Sts(StsArgs),
    /// Search for a pair of Steiner triple systems with high cogirth.
    Pair(PairArgs),
    /// Build the witness cone and certify it, or re-verify a certificate.
    Verify(VerifyArgs),
    /// Individual cone and Lagrangian analyses.
    #[command(subcommand)]
    Analyze(analyze::AnalyzeCommand),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Method {
    Bose,
    Skolem,
    Cyclic,
}

impl From<Method> for Construction {
    fn from(m: Method) -> Self {
        match m {
            Method::Bose => Construction::Bose,
            Method::Skolem => Construction::Skolem,
            Method::Cyclic => Construction::Cyclic,
        }
    }
}

#[derive(Args, Debug)]
struct StsArgs {
    #[arg(long)]
    t: usize,
    /// Defaults to bose for t ≡ 3 and skolem for t ≡ 1 (mod 6).
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Randomly relabel the points using `--seed`.
    #[arg(long)]
    relabel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 3)]
    target: usize,
    #[arg(long)]
    max_attempts: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Policy {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "cert")]
    t: Option<usize>,
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Certificate output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the witness graph in `.3g` form.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    /// Default: exhaustive when C(t, m) <= 10^6, else sampled.
    #[arg(long, value_enum)]
    policy: Option<Policy>,
    #[arg(long)]
    samples: Option<usize>,
    /// Restarts for an extra numeric search on the witness (0 skips it).
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    /// Numerically maximize the cone over this many certified subsets.
    #[arg(long, default_value_t = 0)]
    spot_checks: usize,
    #[arg(long)]
    max_attempts: Option<usize>,
    /// Re-verify an existing certificate instead of building one.
    #[arg(long, conflicts_with = "t")]
    cert: Option<PathBuf>,
    /// Graph to re-check against `--cert`.
    #[arg(long, requires = "cert")]
    graph: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("HYPERJUMP_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                exec::init_threads(n);
            }
            _ => {
                eprintln!("error: HYPERJUMP_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

pub struct RunContext {
    pub config: RunConfig,
    pub exec: Exec,
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let ctx = RunContext {
        config,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
    };
    match cli.command {
        Command::Sts(a) => cmd_sts(&ctx, a),
        Command::Pair(a) => cmd_pair(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Analyze(a) => analyze::run(&ctx, a),
    }
}

pub fn write_output(ctx: &RunContext, path: &Path, text: &str) -> Result<PathBuf> {
    let path = ctx.config.output_path(path);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn cmd_sts(ctx: &RunContext, a: StsArgs) -> Result<ExitCode> {
    let method = match a.method {
        Some(m) => m.into(),
        None => designs::default_method(a.t)?,
    };
    let seed = a.relabel.then_some(ctx.config.seed);
    let sts = designs::build_sts(a.t, method, seed)?;
    let text = sts.to_text();
    match &a.out {
        Some(p) => {
            let path = write_output(ctx, p, &text)?;
            println!("{} triples on {} points ({}) -> {}", sts.triples.edge_count(), sts.t, sts.construction, path.display());
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_pair(ctx: &RunContext, a: PairArgs) -> Result<ExitCode> {
    let attempts = a.max_attempts.unwrap_or(ctx.config.max_attempts);
    let found = designs::search_pair(a.t, a.target, attempts, ctx.config.seed, ctx.exec)?;
    let rows = vec![
        ("t".to_string(), a.t.to_string()),
        ("target_cogirth".into(), a.target.to_string()),
        ("achieved_cogirth".into(), found.pair.achieved_cogirth.to_string()),
        ("edge_disjoint".into(), found.pair.edge_disjoint.to_string()),
        ("met_target".into(), found.met_target.to_string()),
        ("attempts_run".into(), found.attempts_run.to_string()),
        ("seed".into(), ctx.config.seed.to_string()),
    ];
    print!("{}", report::render(&rows));
    if let Some(p) = &a.out {
        write_output(ctx, p, &found.pair.to_text())?;
    }
    Ok(if found.met_target { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_verify(ctx: &RunContext, a: VerifyArgs) -> Result<ExitCode> {
    if let Some(cert_path) = &a.cert {
        return reverify(ctx, cert_path, a.graph.as_deref());
    }
    let t = a.t.expect("clap requires --t without --cert");
    let samples = a.samples.unwrap_or(ctx.config.samples);
    let policy = a.policy.map(|p| match p {
        Policy::Exhaustive => SubsetPolicy::Exhaustive,
        Policy::Sampled => SubsetPolicy::Sampled {
            count: samples,
            seed: hyperjump::seeds::stream(ctx.config.seed, "witness.sample"),
        },
    });
    let opts = WitnessOptions {
        seed: ctx.config.seed,
        max_attempts: a.max_attempts.unwrap_or(ctx.config.max_attempts),
        policy,
        samples,
        numeric_restarts: a.restarts,
        spot_checks: a.spot_checks,
        exec: ctx.exec,
        ..WitnessOptions::default()
    };
    let (w, cert) = witness::run_witness(t, a.m, &opts)?;
    let margin = witness::margin_over_target(&cert)?;
    let mut rows = vec![
        ("t".to_string(), t.to_string()),
        ("m".into(), a.m.to_string()),
        ("vertices".into(), cert.vertex_count.to_string()),
        ("edges".into(), cert.edge_count.to_string()),
        ("lower_bound".into(), cert.lower_bound.clone()),
        ("lower_bound - 4/9".into(), format!("{margin:e}")),
        ("path".into(), format!("{:?}", cert.lower_bound_path)),
        ("edge_disjoint".into(), cert.edge_disjoint.to_string()),
        ("cogirth (achieved/required)".into(), format!("{}/{}", cert.achieved_cogirth, cert.required_cogirth)),
        ("subsets_checked".into(), cert.subsets_checked.to_string()),
        ("failures".into(), cert.failures.len().to_string()),
        ("status".into(), format!("{:?}", cert.status).to_uppercase()),
    ];
    if let Some(n) = &cert.numeric {
        rows.push(("numeric_max".into(), format!("{:.12}", n.numeric_max)));
    }
    print!("{}", report::render(&rows));
    for f in &cert.failures {
        println!("failure: U = {:?}, edges {}, codegree {}, sparse {}", f.subset, f.edges, f.max_codegree, f.sparse);
    }
    if let Some(p) = &a.out {
        let file = witness::CertificateFile::new(cert.clone());
        write_output(ctx, p, &file.to_json())?;
    }
    if let Some(p) = &a.graph_out {
        let comments = [format!("witness cone t={t} m={} seed={}", a.m, ctx.config.seed)];
        write_output(ctx, p, &graph::to_3g(&w.cone.graph, &comments))?;
    }
    Ok(if cert.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn reverify(ctx: &RunContext, cert_path: &Path, graph_path: Option<&Path>) -> Result<ExitCode> {
    let file = witness::load_certificate(cert_path)?;
    let g = match graph_path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(graph::parse_3g(&text)?.0)
        }
        None => None,
    };
    let outcome = witness::reverify(&file, g.as_ref(), ctx.exec)?;
    for p in &outcome.problems {
        println!("problem: {p}");
    }
    if outcome.valid {
        println!("VALID: lower bound {} > 4/9 and {} subsets certified", file.certificate.lower_bound, file.certificate.subsets_checked);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("INVALID");
        Ok(ExitCode::from(1))
    }
}

/// Reads a `.3g` file.
pub fn read_graph(path: &Path) -> Result<hyperjump::ThreeGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (g, _) = graph::parse_3g(&text).with_context(|| format!("parsing {}", path.display()))?;
    if g.vertex_count() == 0 {
        bail!("{} has no vertices", path.display());
    }
    Ok(g)
}

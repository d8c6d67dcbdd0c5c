//! The witness `G = cone(S)`: an exact lower bound `λ(G) > 4/9` from an
//! explicit weighting, the `≤ m`-vertex upper bound through the cone theorem's
//! hypotheses on every `S[U]`, and a re-verifiable JSON certificate.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cone::{build_cone, four_ninths, ConeGraph, FOUR_NINTHS};
use crate::designs::{self, InternalOptions, InternalReport, LocalCheck, LocalFailure, SubsetPolicy};
use crate::error::{Error, Result};
use crate::exact::{self, format_rational, parse_rational, rat, Rational};
use crate::exec::Exec;
use crate::graph::{induced_subgraph, ThreeGraph};
use crate::lagrangian::{self, evaluate_p, LagrangianOptions, WeightVector};
use crate::seeds;

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOptions {
    pub seed: u64,
    pub max_attempts: usize,
    /// `None` picks exhaustive or sampled by the `C(t, m)` threshold.
    pub policy: Option<SubsetPolicy>,
    pub samples: usize,
    /// Restarts for the optional numeric search on `G`; 0 skips it.
    pub numeric_restarts: usize,
    /// Number of certified `U` whose `cone(S[U])` is also maximized numerically.
    pub spot_checks: usize,
    pub spot_restarts: usize,
    pub exec: Exec,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            seed: 0,
            max_attempts: 10_000,
            policy: None,
            samples: designs::DEFAULT_SAMPLES,
            numeric_restarts: 0,
            spot_checks: 0,
            spot_restarts: 20,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub t: usize,
    pub m: usize,
    pub seed: u64,
    pub cone: ConeGraph,
    pub internal: InternalReport,
}

pub fn build_witness(t: usize, m: usize, opts: &WitnessOptions) -> Result<Witness> {
    if t <= 4 {
        return Err(Error::HypothesisViolated(format!("the lower bound needs t > 4, got t = {t}")));
    }
    let internal = designs::build_internal_system(
        t,
        m,
        &InternalOptions {
            max_attempts: opts.max_attempts,
            seed: opts.seed,
            samples: opts.samples,
            exec: opts.exec,
        },
    )?;
    Ok(Witness {
        t,
        m,
        seed: opts.seed,
        cone: build_cone(&internal.graph),
        internal: internal.report,
    })
}

/// Apex weight `1/3`, every other vertex `2/(3t)`; the apex is the last vertex.
pub fn paper_weighting(t: usize) -> WeightVector {
    let mut w = vec![part_weight(t); t];
    w.push(rat(1, 3));
    WeightVector::from_rationals(w).expect("weights sum to one")
}

pub fn part_weight(t: usize) -> Rational {
    rat(2, 3 * t as i64)
}

/// `4/9 + 4/(27t) - 16/(27t²)`.
pub fn closed_form(t: usize) -> Rational {
    let t = t as i64;
    four_ninths() + rat(4, 27 * t) - rat(16, 27 * t * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundPath {
    /// `|S| = t(t-1)/3` and the value matched the closed form.
    ClosedForm,
    /// Any other edge count: only `p_G > 4/9` is claimed.
    Fallback,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericLowerBound {
    #[serde(with = "crate::exact::serde_rational")]
    pub lower_bound: Rational,
    pub weights: Vec<String>,
    pub numeric_max: f64,
    /// The search found an exact value above the weighting's.
    pub improves: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    #[serde(with = "crate::exact::serde_rational")]
    pub value: Rational,
    pub path: LowerBoundPath,
    pub exceeds_target: bool,
    /// `|S| > t²/4`, equivalent to `exceeds_target` at this weighting.
    pub edge_relaxation_holds: bool,
    pub numeric: Option<NumericLowerBound>,
}

/// Evaluates `p_G` exactly at [`paper_weighting`]. On the closed-form path a
/// disagreement with [`closed_form`] is an error.
pub fn certify_lower_bound(cone: &ConeGraph, t: usize, numeric: Option<&LagrangianOptions>) -> Result<LowerBound> {
    if cone.base.vertex_count() != t {
        return Err(Error::DimensionMismatch {
            expected: t,
            got: cone.base.vertex_count(),
        });
    }
    let value = evaluate_p(&cone.graph, &paper_weighting(t))?;
    let edges = cone.base.edge_count();
    let path = if 3 * edges == t * (t - 1) {
        if value != closed_form(t) {
            return Err(Error::Verification(format!(
                "p_G = {} but the closed form gives {}",
                format_rational(&value),
                format_rational(&closed_form(t))
            )));
        }
        LowerBoundPath::ClosedForm
    } else {
        LowerBoundPath::Fallback
    };
    let exceeds_target = value > four_ninths();
    let edge_relaxation_holds = 4 * edges > t * t;
    if exceeds_target != edge_relaxation_holds {
        return Err(Error::Verification(
            "p_G > 4/9 disagrees with |S| > t²/4 at the apex weighting".into(),
        ));
    }
    let numeric = match numeric {
        Some(opts) => {
            let est = lagrangian::maximize_lagrangian(&cone.graph, opts)?;
            Some(NumericLowerBound {
                improves: est.lower_bound > value,
                weights: est.witness.to_strings(),
                lower_bound: est.lower_bound,
                numeric_max: est.numeric_max,
            })
        }
        None => None,
    };
    Ok(LowerBound {
        value,
        path,
        exceeds_target,
        edge_relaxation_holds,
        numeric,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub subset: Vec<usize>,
    pub numeric_max: f64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallSubgraphReport {
    pub local: LocalCheck,
    pub all_certified: bool,
    pub spot_checks: Vec<SpotCheck>,
}

/// Every `H ⊆ G` on at most `m` vertices lies in `cone(S[U])` for some
/// `m`-set `U ⊆ V(S)` (drop the apex from `V(H)` and pad). So it suffices that
/// each `S[U]` is sparse with `Δ₂ <= 2`.
pub fn certify_small_subgraphs(
    cone: &ConeGraph,
    m: usize,
    policy: &SubsetPolicy,
    spot_checks: usize,
    spot_opts: &LagrangianOptions,
) -> Result<SmallSubgraphReport> {
    if m < 3 {
        return Err(Error::Domain(format!("m = {m} is below 3")));
    }
    let s = &cone.base;
    let local = designs::check_local_subsets(s, m, policy, spot_opts.exec);
    let all_certified = local.failures.is_empty();
    let mut spots = Vec::new();
    if spot_checks > 0 {
        let subsets = designs::local_subsets(s.vertex_count(), m, policy);
        let stride = subsets.len().checked_div(spot_checks).unwrap_or(1).max(1);
        for u in subsets.iter().step_by(stride).take(spot_checks) {
            if local.failures.iter().any(|f| &f.subset == u) {
                continue;
            }
            let sub = induced_subgraph(s, u)?;
            let est = lagrangian::maximize_lagrangian(&build_cone(&sub).graph, spot_opts)?;
            spots.push(SpotCheck {
                subset: u.clone(),
                numeric_max: est.numeric_max,
                consistent: est.numeric_max <= FOUR_NINTHS + 1e-6,
            });
        }
    }
    Ok(SmallSubgraphReport {
        local,
        all_certified,
        spot_checks: spots,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weighting {
    pub apex: String,
    pub part: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRecord {
    pub root: u64,
    pub search: u64,
    pub sample: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Validity {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCertificate {
    pub version: u32,
    pub t: usize,
    pub m: usize,
    pub graph_hash: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub base_edge_count: usize,
    pub weighting: Weighting,
    pub lower_bound: String,
    pub lower_bound_path: LowerBoundPath,
    pub target: String,
    pub edge_disjoint: bool,
    pub required_cogirth: usize,
    pub achieved_cogirth: usize,
    pub policy: SubsetPolicy,
    pub subsets_checked: usize,
    pub all_certified: bool,
    pub failures: Vec<LocalFailure>,
    pub spot_checks: Vec<SpotCheck>,
    pub numeric: Option<NumericLowerBound>,
    pub seeds: SeedRecord,
    pub status: Validity,
}

impl WitnessCertificate {
    pub fn is_valid(&self) -> bool {
        self.status == Validity::Valid
    }

    /// SHA-256 of the compact JSON, in field declaration order.
    pub fn content_hash(&self) -> String {
        let text = serde_json::to_string(self).expect("certificate serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Full pipeline: internal system, cone, both legs, certificate.
pub fn run_witness(t: usize, m: usize, opts: &WitnessOptions) -> Result<(Witness, WitnessCertificate)> {
    let witness = build_witness(t, m, opts)?;
    let numeric_opts = LagrangianOptions {
        restarts: opts.numeric_restarts,
        seed: seeds::stream(opts.seed, "witness.lower_bound"),
        exec: opts.exec,
        ..LagrangianOptions::default()
    };
    let lower = certify_lower_bound(&witness.cone, t, (opts.numeric_restarts > 0).then_some(&numeric_opts))?;
    let sample_seed = seeds::stream(opts.seed, "witness.sample");
    let policy = opts
        .policy
        .clone()
        .unwrap_or_else(|| SubsetPolicy::choose(t, m, opts.samples, sample_seed));
    let spot_opts = LagrangianOptions {
        restarts: opts.spot_restarts,
        tol: 1e-9,
        seed: seeds::stream(opts.seed, "witness.spot_check"),
        exec: opts.exec,
    };
    let small = certify_small_subgraphs(&witness.cone, m, &policy, opts.spot_checks, &spot_opts)?;
    let valid = lower.exceeds_target && small.all_certified && small.spot_checks.iter().all(|s| s.consistent);
    let cert = WitnessCertificate {
        version: CERTIFICATE_VERSION,
        t,
        m,
        graph_hash: witness.cone.graph.content_hash(),
        vertex_count: witness.cone.graph.vertex_count(),
        edge_count: witness.cone.graph.edge_count(),
        base_edge_count: witness.cone.base.edge_count(),
        weighting: Weighting {
            apex: "1/3".into(),
            part: format_rational(&part_weight(t)),
        },
        lower_bound: format_rational(&lower.value),
        lower_bound_path: lower.path,
        target: format_rational(&four_ninths()),
        edge_disjoint: witness.internal.edge_disjoint,
        required_cogirth: witness.internal.required_cogirth,
        achieved_cogirth: witness.internal.achieved_cogirth,
        policy,
        subsets_checked: small.local.subsets_checked,
        all_certified: small.all_certified,
        failures: small.local.failures,
        spot_checks: small.spot_checks,
        numeric: lower.numeric,
        seeds: SeedRecord {
            root: opts.seed,
            search: seeds::stream(opts.seed, "designs.search_pair"),
            sample: sample_seed,
        },
        status: if valid { Validity::Valid } else { Validity::Invalid },
    };
    Ok((witness, cert))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub created_unix: u64,
    pub tool: String,
}

/// On-disk form. The envelope is outside the hashed content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub certificate: WitnessCertificate,
    pub content_hash: String,
    pub envelope: Envelope,
}

impl CertificateFile {
    pub fn new(certificate: WitnessCertificate) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CertificateFile {
            content_hash: certificate.content_hash(),
            certificate,
            envelope: Envelope {
                created_unix,
                tool: format!("hyperjump {}", env!("CARGO_PKG_VERSION")),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

pub fn emit_certificate(cert: &WitnessCertificate, path: &Path) -> Result<CertificateFile> {
    let file = CertificateFile::new(cert.clone());
    std::fs::write(path, file.to_json())?;
    Ok(file)
}

pub fn load_certificate(path: &Path) -> Result<CertificateFile> {
    CertificateFile::from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reverification {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Re-checks a certificate file. From the JSON alone: the content hash, the
/// lower bound against `4/9` and the closed form, the stated weighting, and
/// the consistency of status with failures. With `graph`, also the graph
/// hash, `p_G` at the weighting, and every `U` under the recorded policy.
pub fn reverify(file: &CertificateFile, graph: Option<&ThreeGraph>, exec: Exec) -> Result<Reverification> {
    let c = &file.certificate;
    let mut problems = Vec::new();
    if c.content_hash() != file.content_hash {
        problems.push("content hash mismatch".to_string());
    }
    if c.version != CERTIFICATE_VERSION {
        problems.push(format!("unsupported version {}", c.version));
    }
    let lower = parse_rational(&c.lower_bound)?;
    let target = parse_rational(&c.target)?;
    if target != four_ninths() {
        problems.push(format!("target is {} instead of 4/9", c.target));
    }
    let exceeds = lower > four_ninths();
    if c.t <= 4 {
        problems.push(format!("t = {} is not above 4", c.t));
    }
    if c.weighting.apex != "1/3" || parse_rational(&c.weighting.part)? != part_weight(c.t.max(1)) {
        problems.push("weighting differs from apex 1/3, parts 2/(3t)".to_string());
    }
    if c.lower_bound_path == LowerBoundPath::ClosedForm && c.t > 0 && lower != closed_form(c.t) {
        problems.push("lower bound differs from the closed form".to_string());
    }
    let expected_subsets = match &c.policy {
        SubsetPolicy::Exhaustive => designs::binomial(c.t as u64, c.m as u64) as usize,
        SubsetPolicy::Sampled { count, .. } => *count,
    };
    if c.subsets_checked != expected_subsets {
        problems.push(format!("{} subsets checked, policy implies {expected_subsets}", c.subsets_checked));
    }
    if c.all_certified != c.failures.is_empty() {
        problems.push("all_certified disagrees with the failure list".to_string());
    }
    let claimed_valid = exceeds && c.all_certified && c.spot_checks.iter().all(|s| s.consistent);
    if c.is_valid() != claimed_valid {
        problems.push("status disagrees with the recorded facts".to_string());
    }
    if let Some(g) = graph {
        problems.extend(reverify_graph(c, g, exec)?);
    }
    Ok(Reverification {
        valid: problems.is_empty() && c.is_valid(),
        problems,
    })
}

fn reverify_graph(c: &WitnessCertificate, g: &ThreeGraph, exec: Exec) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    if g.content_hash() != c.graph_hash {
        problems.push("graph hash mismatch".to_string());
        return Ok(problems);
    }
    if g.vertex_count() != c.t + 1 {
        problems.push("graph is not on t + 1 vertices".to_string());
        return Ok(problems);
    }
    let apex = c.t;
    let base_edges: Vec<_> = g.edges().iter().filter(|e| e[2] != apex).copied().collect();
    let base = ThreeGraph::new(c.t, &base_edges)?;
    let cone = build_cone(&base);
    if cone.graph != *g {
        problems.push("graph is not the cone over its base".to_string());
        return Ok(problems);
    }
    let value = evaluate_p(g, &paper_weighting(c.t))?;
    if format_rational(&value) != c.lower_bound {
        problems.push(format!("p_G at the weighting is {}", format_rational(&value)));
    }
    let local = designs::check_local_subsets(&base, c.m, &c.policy, exec);
    if local.failures != c.failures || local.subsets_checked != c.subsets_checked {
        problems.push("small-subgraph check does not reproduce".to_string());
    }
    Ok(problems)
}

/// `lower_bound - 4/9` as a float, for display.
pub fn margin_over_target(c: &WitnessCertificate) -> Result<f64> {
    let lower = parse_rational(&c.lower_bound)?;
    Ok(exact::to_f64(&(lower - four_ninths())))
}

//! Subcommands tying the modules into runnable verification pipelines.
//!
//! Exit codes: 0 on success, 1 on verification failure (including surfaced
//! module errors), 2 on usage or parse errors. `--json` emits a machine
//! report with every rational as a `p/q` string; identical inputs and seeds
//! produce byte-identical reports.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog;
use crate::coloring::max_request_match;
use crate::flexibility::{
    flexibility_exact, peel_bound_holds, peel_weighted, weighted_flexibility, FlexError,
};
use crate::gadget::{
    build_knapsack_graph, build_log_gap_instance, one_sixth_satisfy, realizable_sets,
    GadgetConstruction, KnapsackSpec, Role,
};
use crate::graph::{degeneracy, max_average_degree, sparsity_witness, Coloring, Request, SparsityWitness};
use crate::instance::{parse_instance, serialize_instance, InstanceFile};
use crate::nullstellensatz::{
    certificate_coefficient, certificate_residue, graph_polynomial_coeff, MonomialQuery,
};
use crate::rational::{format_ratio, parse_ratio, ratio_u};
use crate::sampler::{exact_distribution, marginals_of, sample_coloring, FlexConstants};

#[derive(Parser)]
#[command(name = "listflex", version, about = "Exact flexibility toolkit for list colorings")]
struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural analysis: degeneracy, maximum average degree, weak
    /// degeneracy, sparsity witness.
    Analyze(AnalyzeArgs),
    /// Exact flexibility: the minimum satisfaction ratio over all requests.
    Flex(CapFileArgs),
    /// Weighted flexibility: LP value, attaining distribution, dual witness.
    Wflex(CapFileArgs),
    /// Marginals of the weak-degeneracy coloring procedure.
    Sample(SampleArgs),
    /// Run the weighted-to-unweighted peeling reduction.
    Peel(PeelArgs),
    /// Knapsack gadget constructions.
    #[command(subcommand)]
    Gadget(GadgetCommand),
    /// Graph-polynomial certificate machinery.
    #[command(subcommand)]
    Null(NullCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Parameter for the weak-degeneracy and witness checks (default: the
    /// computed degeneracy).
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Args)]
struct CapFileArgs {
    file: PathBuf,
    /// Enumeration cap.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct SampleArgs {
    file: PathBuf,
    /// Weak-degeneracy parameter; lists must have size d + 2.
    #[arg(long)]
    d: usize,
    /// Compute the exact distribution and check the marginal bound.
    #[arg(long)]
    exact: bool,
    /// Monte Carlo trial count (requires --seed).
    #[arg(long)]
    trials: Option<u64>,
    /// Base seed for Monte Carlo runs.
    #[arg(long)]
    seed: Option<u64>,
    /// Support-size cap for the exact computation.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct PeelArgs {
    file: PathBuf,
    /// Flexibility value to peel with (default: computed exactly).
    #[arg(long)]
    eps: Option<String>,
    /// Request-enumeration cap for the default epsilon computation.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Compile a knapsack spec to a list-coloring instance.
    Build(GadgetBuildArgs),
    /// Check that realizable item sets are exactly the budget-feasible ones.
    Verify(GadgetVerifyArgs),
    /// Build a log-gap instance and verify its flexibility profile.
    Loggap(LoggapArgs),
}

#[derive(Args)]
struct GadgetBuildArgs {
    /// Item sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u64>,
    #[arg(long)]
    t: u64,
    /// Write the instance file here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GadgetVerifyArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u64>,
    #[arg(long)]
    t: u64,
    /// Expected item count (consistency check against --s).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    cap_n: Option<usize>,
    #[arg(long)]
    cap_t: Option<u64>,
}

#[derive(Args)]
struct LoggapArgs {
    #[arg(long)]
    k: u32,
    /// Adversarial random requests to run through the one-sixth split.
    #[arg(long, default_value_t = 100)]
    requests: u64,
    /// Seed for the request battery (mandatory when requests > 0).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_k: Option<u32>,
}

#[derive(Subcommand)]
enum NullCommand {
    /// Verify the certificate residue over all maximal degenerate graphs.
    Verify(NullVerifyArgs),
    /// One coefficient of the graph polynomial of an instance graph.
    Coeff(NullCoeffArgs),
}

#[derive(Args)]
struct NullVerifyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    max_n: usize,
}

#[derive(Args)]
struct NullCoeffArgs {
    file: PathBuf,
    /// Target exponents per position, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    exponents: Vec<u64>,
    /// Vertex ordering (default 1..n).
    #[arg(long, value_delimiter = ',')]
    ordering: Option<Vec<usize>>,
}

/// A finished report: exit code, human text, machine value.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

enum Failure {
    /// Usage or parse problem: exit 2.
    Usage(String),
    /// Verification failure or surfaced module error: exit 1.
    Check(String),
}

impl From<FlexError> for Failure {
    fn from(e: FlexError) -> Self {
        Failure::Check(e.to_string())
    }
}

type CmdResult = Result<Report, Failure>;

pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            // --help and --version are successful exits.
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Flex(a) => flex(a),
        Command::Wflex(a) => wflex(a),
        Command::Sample(a) => sample(a),
        Command::Peel(a) => peel(a),
        Command::Gadget(GadgetCommand::Build(a)) => gadget_build(a),
        Command::Gadget(GadgetCommand::Verify(a)) => gadget_verify(a),
        Command::Gadget(GadgetCommand::Loggap(a)) => gadget_loggap(a),
        Command::Null(NullCommand::Verify(a)) => null_verify(a),
        Command::Null(NullCommand::Coeff(a)) => null_coeff(a),
    };
    match result {
        Ok(report) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.json).unwrap());
            } else {
                let _ = write!(out, "{}", report.text);
            }
            report.code
        }
        Err(Failure::Usage(message)) => {
            if cli.json {
                let v = json!({"error": message, "kind": "usage"});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                let _ = writeln!(out, "error: {message}");
            }
            2
        }
        Err(Failure::Check(message)) => {
            if cli.json {
                let v = json!({"error": message, "kind": "verification"});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                let _ = writeln!(out, "error: {message}");
            }
            1
        }
    }
}

fn load_instance(path: &PathBuf) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Usage(e.to_string()))
}

fn need_lists(instance: &InstanceFile) -> Result<&crate::graph::ListAssignment, Failure> {
    instance.lists.as_ref().ok_or_else(|| Failure::Usage("instance has no list assignment".into()))
}

fn coloring_json(phi: &Coloring) -> Value {
    Value::Array(phi.as_slice().iter().map(|&c| json!(c)).collect())
}

fn request_json(r: &Request) -> Value {
    Value::Array(r.entries.iter().map(|(&v, &c)| json!([v, c])).collect())
}

fn request_text(r: &Request) -> String {
    r.entries.iter().map(|(&v, &c)| format!("{v}->{c}")).collect::<Vec<_>>().join(", ")
}

fn analyze(args: &AnalyzeArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let g = &instance.graph;
    if g.n() == 0 {
        return Err(Failure::Usage("graph has no vertices".into()));
    }
    let (deg, order) = degeneracy(g);
    let mad = max_average_degree(g).map_err(|e| Failure::Check(e.to_string()))?;
    let d = args.d.unwrap_or(deg);
    let weakly = crate::graph::is_weakly_degenerate(g, d);
    let witness = sparsity_witness(g, d);
    let witness_text = match &witness {
        Some(SparsityWitness::LowDegree(v)) => format!("low-degree vertex {v}"),
        Some(SparsityWitness::SoftVertex(v)) => format!("soft vertex {v}"),
        None => "none".to_string(),
    };
    let mut text = String::new();
    let _ = writeln!(text, "vertices: {}", g.n());
    let _ = writeln!(text, "edges: {}", g.edge_count());
    let _ = writeln!(text, "degeneracy: {deg}");
    let _ = writeln!(text, "elimination order: {order:?}");
    let _ = writeln!(text, "max average degree: {}", format_ratio(&mad));
    let _ = writeln!(text, "weakly {d}-degenerate: {weakly}");
    let _ = writeln!(text, "sparsity witness (d = {d}): {witness_text}");
    let json = json!({
        "command": "analyze",
        "vertices": g.n(),
        "edges": g.edge_count(),
        "degeneracy": deg,
        "elimination_order": order,
        "max_average_degree": format_ratio(&mad),
        "weak_d": d,
        "weakly_degenerate": weakly,
        "sparsity_witness": match witness {
            Some(SparsityWitness::LowDegree(v)) => json!({"kind": "low_degree", "vertex": v}),
            Some(SparsityWitness::SoftVertex(v)) => json!({"kind": "soft", "vertex": v}),
            None => Value::Null,
        },
    });
    Ok(Report { code: 0, text, json })
}

fn flex(args: &CapFileArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let lists = need_lists(&instance)?;
    let report = flexibility_exact(&instance.graph, lists, args.cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "epsilon: {}", format_ratio(&report.epsilon));
    let _ = writeln!(text, "worst request: {}", request_text(&report.worst_request));
    let json = json!({
        "command": "flex",
        "epsilon": format_ratio(&report.epsilon),
        "worst_request": request_json(&report.worst_request),
        "colorable": report.colorable,
    });
    Ok(Report { code: 0, text, json })
}

fn wflex(args: &CapFileArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let lists = need_lists(&instance)?;
    let report = weighted_flexibility(&instance.graph, lists, args.cap)?;
    let mut text = String::new();
    let _ = writeln!(text, "epsilon: {}", format_ratio(&report.epsilon));
    let _ = writeln!(text, "distribution support: {} colorings", report.distribution.support.len());
    for (phi, p) in &report.distribution.support {
        let _ = writeln!(text, "  {:?} with probability {}", phi.as_slice(), format_ratio(p));
    }
    let _ = writeln!(text, "dual witness ({} pairs):", report.dual_witness.weights.len());
    for (&(v, c), w) in &report.dual_witness.weights {
        let _ = writeln!(text, "  w({v}, {c}) = {}", format_ratio(w));
    }
    let json = json!({
        "command": "wflex",
        "epsilon": format_ratio(&report.epsilon),
        "distribution": report.distribution.support.iter().map(|(phi, p)| {
            json!({"coloring": coloring_json(phi), "probability": format_ratio(p)})
        }).collect::<Vec<_>>(),
        "dual_witness": report.dual_witness.weights.iter().map(|(&(v, c), w)| {
            json!([v, c, format_ratio(w)])
        }).collect::<Vec<_>>(),
    });
    Ok(Report { code: 0, text, json })
}

fn sample(args: &SampleArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let lists = need_lists(&instance)?;
    let constants = FlexConstants::new(args.d);
    if args.exact {
        let dist = exact_distribution(&instance.graph, lists, args.d, args.cap)
            .map_err(|e| Failure::Check(e.to_string()))?;
        let table = marginals_of(&dist, lists);
        let mut violations = Vec::new();
        for (&(v, c), p) in &table.probs {
            if p < &constants.epsilon {
                violations.push((v, c, p.clone()));
            }
        }
        let mut text = String::new();
        let _ = writeln!(text, "exact marginals (d = {}):", args.d);
        for (&(v, c), p) in &table.probs {
            let _ = writeln!(text, "  Prob[phi({v}) = {c}] = {}", format_ratio(p));
        }
        let _ = writeln!(text, "epsilon bound: {}", format_ratio(&constants.epsilon));
        let ok = violations.is_empty();
        let _ = writeln!(text, "all marginals above the bound: {ok}");
        for (v, c, p) in &violations {
            let _ = writeln!(text, "  VIOLATION at ({v}, {c}): {}", format_ratio(p));
        }
        let json = json!({
            "command": "sample",
            "mode": "exact",
            "d": args.d,
            "epsilon_bound": format_ratio(&constants.epsilon),
            "marginals": table.probs.iter().map(|(&(v, c), p)| {
                json!([v, c, format_ratio(p)])
            }).collect::<Vec<_>>(),
            "bound_satisfied": ok,
            "violations": violations.iter().map(|(v, c, p)| json!([v, c, format_ratio(p)])).collect::<Vec<_>>(),
        });
        Ok(Report { code: if ok { 0 } else { 1 }, text, json })
    } else {
        let trials = args.trials.ok_or_else(|| Failure::Usage("need --exact or --trials".into()))?;
        let seed = args.seed.ok_or_else(|| Failure::Usage("--trials requires --seed".into()))?;
        if trials == 0 {
            return Err(Failure::Usage("--trials must be positive".into()));
        }
        let mut counts: BTreeMap<(usize, u32), u64> = BTreeMap::new();
        for t in 0..trials {
            let phi = sample_coloring(&instance.graph, lists, args.d, seed.wrapping_add(t))
                .map_err(|e| Failure::Check(e.to_string()))?;
            for v in instance.graph.vertices() {
                *counts.entry((v, phi.get(v))).or_default() += 1;
            }
        }
        let mut text = String::new();
        let _ = writeln!(text, "empirical marginals over {trials} trials (seed {seed}):");
        let mut rows = Vec::new();
        for (v, c) in lists.pairs() {
            let k = counts.get(&(v, c)).copied().unwrap_or(0);
            let _ = writeln!(text, "  freq[phi({v}) = {c}] = {k}/{trials}");
            rows.push(json!([v, c, format!("{k}/{trials}")]));
        }
        let json = json!({
            "command": "sample",
            "mode": "monte_carlo",
            "d": args.d,
            "trials": trials,
            "seed": seed,
            "frequencies": rows,
        });
        Ok(Report { code: 0, text, json })
    }
}

fn peel(args: &PeelArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let lists = need_lists(&instance)?.clone();
    let weights = instance
        .weights
        .clone()
        .ok_or_else(|| Failure::Usage("peel needs a weighted request (w lines)".into()))?;
    let g = instance.graph.clone();
    let eps = match &args.eps {
        Some(text) => parse_ratio(text).ok_or_else(|| Failure::Usage("invalid --eps".into()))?,
        None => flexibility_exact(&g, &lists, args.cap)?.epsilon,
    };
    let mut oracle = |r: &Request| max_request_match(&g, &lists, r).map(|(_, phi)| phi);
    let outcome = peel_weighted(&g, &lists, &weights, &eps, &mut oracle)?;
    let total = weights.total();
    let ell = lists.list(1).len() as u64;
    let holds = peel_bound_holds(&outcome.achieved, &total, ell, &eps, g.n() as u64);
    let mut text = String::new();
    let _ = writeln!(text, "epsilon: {}", format_ratio(&eps));
    let _ = writeln!(text, "rounds: {}", outcome.rounds);
    let _ = writeln!(text, "achieved weight: {}", format_ratio(&outcome.achieved));
    let _ = writeln!(text, "total weight: {}", format_ratio(&total));
    let _ = writeln!(text, "guarantee satisfied: {holds}");
    let _ = writeln!(text, "coloring: {:?}", outcome.coloring.as_slice());
    let json = json!({
        "command": "peel",
        "epsilon": format_ratio(&eps),
        "rounds": outcome.rounds,
        "achieved": format_ratio(&outcome.achieved),
        "total": format_ratio(&total),
        "bound_satisfied": holds,
        "coloring": coloring_json(&outcome.coloring),
    });
    Ok(Report { code: if holds { 0 } else { 1 }, text, json })
}

fn role_comment(v: usize, role: &Role) -> String {
    match role {
        Role::SVertex(i) => format!("# role {v} s {i}"),
        Role::Machine { i, j } => format!("# role {v} x {i} {j}"),
        Role::Sink => format!("# role {v} y"),
        Role::GadgetZ { gadget, step, slot } => {
            format!("# role {v} z {gadget} {} {slot}", step.tag())
        }
    }
}

fn construction_text(c: &GadgetConstruction) -> String {
    let mut text = String::new();
    for (i, role) in c.roles.iter().enumerate() {
        let _ = writeln!(text, "{}", role_comment(i + 1, role));
    }
    let instance = InstanceFile {
        graph: c.graph.clone(),
        lists: Some(c.lists.clone()),
        request: None,
        weights: None,
    };
    text.push_str(&serialize_instance(&instance));
    text
}

fn spec_from_args(s: &[u64], t: u64) -> Result<KnapsackSpec, Failure> {
    KnapsackSpec::new(s.to_vec(), t).map_err(|e| Failure::Usage(e.to_string()))
}

fn gadget_build(args: &GadgetBuildArgs) -> CmdResult {
    let spec = spec_from_args(&args.s, args.t)?;
    let construction = build_knapsack_graph(&spec);
    let body = construction_text(&construction);
    let mut text = String::new();
    match &args.out {
        Some(path) => {
            std::fs::write(path, &body)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(text, "wrote {}", path.display());
        }
        None => text.push_str(&body),
    }
    let json = json!({
        "command": "gadget_build",
        "n": spec.n(),
        "t": spec.t,
        "vertices": construction.graph.n(),
        "edges": construction.graph.edge_count(),
        "gadgets": construction.gadget_count,
        "instance": body,
    });
    Ok(Report { code: 0, text, json })
}

fn gadget_verify(args: &GadgetVerifyArgs) -> CmdResult {
    let spec = spec_from_args(&args.s, args.t)?;
    if let Some(n) = args.n {
        if n != spec.n() {
            return Err(Failure::Usage(format!("--n {n} disagrees with {} sizes", spec.n())));
        }
    }
    let construction = build_knapsack_graph(&spec);
    let got = realizable_sets(&construction, args.cap_n, args.cap_t)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let expected: Vec<Vec<usize>> = {
        use itertools::Itertools;
        (0..=spec.n())
            .flat_map(|k| (1..=spec.n()).combinations(k))
            .filter(|r| r.iter().map(|&i| spec.s[i - 1]).sum::<u64>() <= spec.t)
            .sorted()
            .collect()
    };
    let matches = got == expected;
    let bound = 11 * spec.n() as u64 * (spec.t + 2);
    let size_ok = (construction.graph.n() as u64) < bound;
    let mut text = String::new();
    let _ = writeln!(text, "realizable sets: {got:?}");
    let _ = writeln!(text, "budget-feasible sets: {expected:?}");
    let _ = writeln!(text, "match: {matches}");
    let _ = writeln!(text, "vertices: {} (bound {bound}): {size_ok}", construction.graph.n());
    let json = json!({
        "command": "gadget_verify",
        "realizable": got,
        "expected": expected,
        "match": matches,
        "vertices": construction.graph.n(),
        "size_bound": bound,
        "size_bound_satisfied": size_ok,
    });
    Ok(Report { code: if matches && size_ok { 0 } else { 1 }, text, json })
}

fn gadget_loggap(args: &LoggapArgs) -> CmdResult {
    let (construction, hard) = build_log_gap_instance(args.k, args.max_k)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let spec = &construction.spec;
    // Best collectable weight of the hard request: the heaviest realizable
    // item set.
    let realizable = realizable_sets(&construction, Some(spec.n()), Some(spec.t))
        .map_err(|e| Failure::Check(e.to_string()))?;
    let best: u64 = realizable
        .iter()
        .map(|r| r.iter().map(|&i| spec.s[i - 1]).sum::<u64>())
        .max()
        .unwrap_or(0);
    let ratio = ratio_u(best, 1) / hard.total();
    let expected = ratio_u(1, args.k as u64);
    let hard_ok = ratio == expected;

    let mut battery_ok = true;
    let mut battery_failures = Vec::new();
    if args.requests > 0 {
        let seed = args.seed.ok_or_else(|| Failure::Usage("loggap battery requires --seed".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = &construction.graph;
        for trial in 0..args.requests {
            let size = rng.gen_range(1..=g.n().min(12));
            let mut entries = BTreeMap::new();
            while entries.len() < size {
                let v = rng.gen_range(1..=g.n());
                let list = construction.lists.list(v);
                entries.insert(v, list[rng.gen_range(0..list.len())]);
            }
            let r = Request::new(entries);
            let phi = one_sixth_satisfy(&construction, &r)
                .map_err(|e| Failure::Check(e.to_string()))?;
            let matched = phi.matches_request(&r) as u64;
            if ratio_u(matched * 6, 1) < ratio_u(r.domain_size() as u64, 1) {
                battery_ok = false;
                battery_failures.push(json!({"trial": trial, "matched": matched, "domain": r.domain_size()}));
            }
        }
    }

    let ok = hard_ok && battery_ok;
    let mut text = String::new();
    let _ = writeln!(text, "k: {}", args.k);
    let _ = writeln!(text, "sizes: {:?}, budget: {}", spec.s, spec.t);
    let _ = writeln!(text, "vertices: {}", construction.graph.n());
    let _ = writeln!(text, "hard request total: {}", format_ratio(&hard.total()));
    let _ = writeln!(text, "hard request best ratio: {} (expected {})", format_ratio(&ratio), format_ratio(&expected));
    let _ = writeln!(text, "one-sixth battery: {} requests, ok: {battery_ok}", args.requests);
    let _ = writeln!(text, "verified: {ok}");
    let json = json!({
        "command": "gadget_loggap",
        "k": args.k,
        "sizes": spec.s,
        "budget": spec.t,
        "vertices": construction.graph.n(),
        "hard_total": format_ratio(&hard.total()),
        "hard_best_ratio": format_ratio(&ratio),
        "expected_ratio": format_ratio(&expected),
        "hard_ok": hard_ok,
        "battery_requests": args.requests,
        "battery_ok": battery_ok,
        "battery_failures": battery_failures,
    });
    Ok(Report { code: if ok { 0 } else { 1 }, text, json })
}

fn null_verify(args: &NullVerifyArgs) -> CmdResult {
    let d = args.d;
    if d == 0 || d > 4 {
        return Err(Failure::Usage("supported range is 1 <= d <= 4".into()));
    }
    if args.max_n < d || args.max_n > 7 {
        return Err(Failure::Usage("need d <= max-n <= 7".into()));
    }
    let prime = {
        let p = d + 1;
        (2..p).all(|f| p % f != 0) && p >= 2
    };
    let modulus = (d + 1) as i64;
    let mut checked = 0u64;
    let mut failures: Vec<Value> = Vec::new();
    let mut residue_histogram: BTreeMap<u64, u64> = BTreeMap::new();
    for n in d.max(1)..=args.max_n {
        for (g, ordering) in catalog::maximal_degenerate_graphs(d, n) {
            for r in catalog::requests_with_sum(n, d as u64) {
                let direct = certificate_coefficient(&g, &ordering, &r, d)
                    .map_err(|e| Failure::Check(e.to_string()))?;
                let direct_mod = {
                    let m: num_bigint::BigInt = ((direct % modulus) + modulus) % modulus;
                    let digits = m.to_u64_digits().1;
                    if digits.is_empty() {
                        0
                    } else {
                        digits[0]
                    }
                };
                *residue_histogram.entry(direct_mod).or_default() += 1;
                checked += 1;
                if prime {
                    let recursive = certificate_residue(&g, &ordering, &r, d)
                        .map_err(|e| Failure::Check(e.to_string()))?;
                    if direct_mod != d as u64 || recursive != direct_mod {
                        failures.push(json!({
                            "n": n,
                            "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
                            "request": r,
                            "direct_mod": direct_mod,
                            "recursive": recursive,
                        }));
                    }
                }
            }
        }
    }
    let ok = failures.is_empty();
    let mut text = String::new();
    let _ = writeln!(text, "d: {d} (modulus {} {})", d + 1, if prime { "prime" } else { "composite" });
    let _ = writeln!(text, "checked: {checked} (graph, request) pairs up to n = {}", args.max_n);
    let _ = writeln!(text, "residue histogram: {residue_histogram:?}");
    if prime {
        let _ = writeln!(text, "all residues -1 and routes agree: {ok}");
    } else {
        let _ = writeln!(text, "composite modulus: residues reported, nothing asserted");
    }
    let json = json!({
        "command": "null_verify",
        "d": d,
        "prime": prime,
        "checked": checked,
        "residues": residue_histogram.iter().map(|(&r, &k)| json!([r, k])).collect::<Vec<_>>(),
        "failures": failures,
        "verified": ok,
    });
    Ok(Report { code: if ok { 0 } else { 1 }, text, json })
}

fn null_coeff(args: &NullCoeffArgs) -> CmdResult {
    let instance = load_instance(&args.file)?;
    let n = instance.graph.n();
    let ordering = args.ordering.clone().unwrap_or_else(|| (1..=n).collect());
    let query = MonomialQuery { ordering: ordering.clone(), exponents: args.exponents.clone() };
    let coeff = graph_polynomial_coeff(&instance.graph, &query, None)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(text, "coefficient: {coeff}");
    let json = json!({
        "command": "null_coeff",
        "ordering": ordering,
        "exponents": args.exponents,
        "coefficient": coeff.to_string(),
        "nonzero": !coeff.is_zero(),
    });
    Ok(Report { code: 0, text, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to_string(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(args.iter().map(|s| s.to_string()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    fn write_temp(name: &str, content: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("listflex-cli-test-{name}"));
        std::fs::write(&path, content).unwrap();
        path
    }

    #[test]
    fn analyze_reports_structure() {
        let path = write_temp("analyze.lf", "graph 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n");
        let (code, text) = run_to_string(&["listflex", "analyze", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.contains("degeneracy: 2"));
        assert!(text.contains("max average degree: 2/1"));
    }

    #[test]
    fn flex_on_k2() {
        let path = write_temp("flex.lf", "graph 2\ne 1 2\nL 1 1 2\nL 2 1 2\n");
        let (code, text) = run_to_string(&["listflex", "flex", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.contains("epsilon: 1/2"), "{text}");
        assert!(text.contains("worst request: 1->1, 2->1"));
    }

    #[test]
    fn gadget_verify_small() {
        let (code, text) =
            run_to_string(&["listflex", "gadget", "verify", "--s", "1,1", "--t", "1", "--n", "2"]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("match: true"));
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _) = run_to_string(&["listflex", "nonsense"]);
        assert_eq!(code, 2);
        let path = write_temp("badparse.lf", "graph x\n");
        let (code, _) = run_to_string(&["listflex", "flex", path.to_str().unwrap()]);
        assert_eq!(code, 2);
        // Stochastic battery without a seed.
        let (code, _) = run_to_string(&["listflex", "gadget", "loggap", "--k", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn json_reports_are_stable() {
        let path = write_temp("stable.lf", "graph 2\ne 1 2\nL 1 1 2\nL 2 1 2\n");
        let (c1, a) = run_to_string(&["listflex", "--json", "wflex", path.to_str().unwrap()]);
        let (c2, b) = run_to_string(&["listflex", "--json", "wflex", path.to_str().unwrap()]);
        assert_eq!(c1, 0);
        assert_eq!(c2, 0);
        assert_eq!(a, b);
        assert!(a.contains("\"epsilon\": \"1/2\""));
    }
}

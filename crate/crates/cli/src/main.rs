use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

use hypermatch::absorbing::{absorb, sample_absorbing_family, AbsorbParams};
use hypermatch::closeness::{
    barrier_deficit, classify_good, closest_partition, closest_partition_local, f_density_check,
    CLOSEST_LIMIT,
};
use hypermatch::combinatorics::{format_ratio, parse_ratio, parse_vertex_list, Rational};
use hypermatch::constructions::{build_clique_minus, build_parity, build_space_barrier, fano};
use hypermatch::exact::{berge_deficiency_guarded, independence_number, max_matching, BERGE_LIMIT};
use hypermatch::fractional::{fractional_optimum, stable_completion, FractionalSolution};
use hypermatch::hypergraph::{CompleteOracle, EdgeOracle};
use hypermatch::pipeline::{
    almost_perfect_pipeline, check_round1_properties, round1_sample, round2_sparsify,
    PipelineParams, Round1Bands, RoundOneSample, SparseSubgraph,
};
use hypermatch::rng::Probability;
use hypermatch::stability::{is_stable, shadow};
use hypermatch::suites::{run_suite, SuiteConfig};
use hypermatch::sweep::{describe_window, sweep, MRule, SWEEP_LIMIT};
use hypermatch::{io, Error, Guard, Hypergraph, Result, VertexSet};

#[derive(Parser)]
#[command(name = "hypermatch", version, about = "Matchings in k-uniform hypergraphs")]
struct Cli {
    /// Seed for every random stage (default 0 for randomized commands).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Run past enumeration limits, with a warning.
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal construction.
    Construct(ConstructArgs),
    /// Exact matching number with a witness.
    Nu(FileArg),
    /// Exact independence number with a witness.
    Alpha(FileArg),
    /// Berge-Tutte certificate for a graph.
    Berge(FileArg),
    /// Minimum and maximum l-degree.
    Degrees(DegreesArgs),
    /// Optimal fractional matching and cover.
    Fractional(FileArg),
    /// Stable completion from a minimum fractional cover.
    StableComplete(OutputFileArgs),
    /// Test whether the hypergraph is stable.
    StableCheck(FileArg),
    /// The (k-1)-shadow.
    Shadow(FileArg),
    /// Missing barrier edges and good/bad vertices.
    Closeness(ClosenessArgs),
    /// Barrier partition with the fewest missing edges.
    Closest(ClosestArgs),
    /// Density on large vertex subsets.
    Fdense(FdenseArgs),
    /// Sample an absorbing family and optionally absorb a set.
    Absorb(AbsorbArgs),
    /// Round-1 vertex sampling and its property checks.
    Round1(Round1Args),
    /// Round-2 sparsification.
    Sparsify(SparsifyArgs),
    /// Two-round randomization followed by a greedy matcher.
    Pipeline(PipelineArgs),
    /// Seeded property campaign.
    Verify(VerifyArgs),
    /// Threshold tightness table.
    Sweep(SweepArgs),
}

#[derive(Args, Serialize)]
struct FileArg {
    /// Interchange file.
    file: PathBuf,
}

#[derive(Args, Serialize)]
struct OutputFileArgs {
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    SpaceBarrier,
    Parity,
    CliqueMinus,
    Fano,
    Complete,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Largest allowed `|e ∩ W|` (space barrier; default k).
    #[arg(long)]
    s: Option<usize>,
    /// `|W|` (space barrier).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    na: Option<usize>,
    #[arg(long)]
    nb: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DegreesArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    l: usize,
}

#[derive(Args, Serialize)]
struct ClosenessArgs {
    file: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    /// `W` as "i,j,..." (default `{0..m-1}`).
    #[arg(long)]
    w: Option<String>,
    /// Classify α-good vertices for this `p/q`.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args, Serialize)]
struct ClosestArgs {
    file: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    s: usize,
    /// Seeded local search instead of exhaustive enumeration.
    #[arg(long)]
    local: bool,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
}

#[derive(Args, Serialize)]
struct FdenseArgs {
    file: PathBuf,
    #[arg(long)]
    eps: String,
    /// Sampled subsets when `n` is above the exhaustive limit.
    #[arg(long, default_value_t = 2000)]
    trials: usize,
}

#[derive(Args, Serialize)]
struct AbsorbArgs {
    file: PathBuf,
    /// Degree order `l` of the session, with `k/2 < l < k`.
    #[arg(long)]
    l: usize,
    /// Defaults to the choice minimizing `al+h−1`.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    rho: String,
    #[arg(long, default_value_t = 100)]
    probes: usize,
    /// Set to absorb, as "i,j,...".
    #[arg(long)]
    absorb_set: Option<String>,
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("prob").required(true).args(["p", "p_exp"])))]
struct ProbArgs {
    /// Exact probability `p/q`.
    #[arg(long)]
    p: Option<String>,
    /// Exponent `a/b` for the probability `n^(-a/b)`.
    #[arg(long)]
    p_exp: Option<String>,
}

impl ProbArgs {
    fn parse(&self) -> Result<Probability> {
        match (&self.p, &self.p_exp) {
            (Some(p), _) => Probability::parse_exact(p),
            (None, Some(e)) => Probability::parse_exponent(e),
            (None, None) => Err(Error::Domain("one of --p or --p-exp is required".into())),
        }
    }
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("host").required(true).args(["file", "complete_n"])))]
struct Round1Args {
    file: Option<PathBuf>,
    /// Sample from the complete k-graph on this many vertices instead of a file.
    #[arg(long, requires = "k")]
    complete_n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    copies: usize,
    #[command(flatten)]
    #[serde(flatten)]
    prob: ProbArgs,
    /// Centre of the singleton band as `p/q` (default copies·p).
    #[arg(long)]
    single_target: Option<String>,
    /// Half-width of the singleton band as `p/q` (default n^(3/20)).
    #[arg(long)]
    single_band: Option<String>,
    #[arg(long)]
    size_target: Option<String>,
    /// Half-width of the size band as `p/q` (default n^(19/200)).
    #[arg(long)]
    size_band: Option<String>,
    /// Order of the probed sets for the degree check (default k-1; 0 skips it).
    #[arg(long)]
    degree_order: Option<usize>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long, default_value_t = 64)]
    probes_per_copy: usize,
}

#[derive(Args, Serialize)]
struct SparsifyArgs {
    file: PathBuf,
    #[arg(long)]
    copies: usize,
    #[command(flatten)]
    #[serde(flatten)]
    prob: ProbArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct PipelineArgs {
    file: PathBuf,
    #[arg(long)]
    copies: usize,
    #[command(flatten)]
    #[serde(flatten)]
    prob: ProbArgs,
    #[arg(long, default_value = "1/10")]
    sigma: String,
    /// ε of the independence gate.
    #[arg(long, default_value = "1/2")]
    eps: String,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// katona, frankl, stability2, duality, berge, completion or goodness.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value = "1/100")]
    rho: String,
    /// Conclusion failures at n below this are flagged instead of failed.
    #[arg(long, default_value_t = 0)]
    asymptotic_floor: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Rule {
    Window,
    All,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    n_min: usize,
    #[arg(long)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Rule::All)]
    rule: Rule,
    /// μ of the window's lower end, `p/q`.
    #[arg(long, default_value = "0")]
    mu: String,
    /// Random barrier supersets tried per row.
    #[arg(long, default_value_t = 0)]
    search: usize,
}

struct Ctx {
    seed: Option<u64>,
    guard: Guard,
}

impl Ctx {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn warn_limit(&self, what: &str, n: usize, limit: usize) {
        if self.guard == Guard::Force && n > limit {
            eprintln!("warning: {what}: n = {n} exceeds the limit {limit}; running anyway");
        }
    }
}

/// What a subcommand hands back: parameters echo, results, and whether it is random.
struct Outcome {
    parameters: Value,
    results: Value,
    random: bool,
}

fn params<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn load(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    io::from_json(&text)
}

fn save(path: &Path, h: &Hypergraph) -> Result<()> {
    std::fs::write(path, io::to_json(h))
        .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn ratio_arg(s: &str, what: &str) -> Result<Rational> {
    parse_ratio(s).map_err(|e| Error::Parse(format!("--{what}: {e}")))
}

fn band_arg(s: &Option<String>, what: &str) -> Result<Option<f64>> {
    s.as_deref()
        .map(|v| ratio_arg(v, what).map(|r| r.to_f64().unwrap_or(f64::NAN)))
        .transpose()
}

fn vertex_set(s: &str) -> Result<VertexSet> {
    VertexSet::new(parse_vertex_list(s)?)
}

fn big(x: u128) -> Value {
    match u64::try_from(x) {
        Ok(v) => v.into(),
        Err(_) => x.to_string().into(),
    }
}

fn ratio_list(xs: &[Rational]) -> Value {
    xs.iter().map(|x| Value::from(format_ratio(x))).collect()
}

fn hypergraph_or_file(h: &Hypergraph, output: &Option<PathBuf>) -> Result<(Value, Value)> {
    match output {
        Some(path) => {
            save(path, h)?;
            Ok((Value::from(path.display().to_string()), Value::Null))
        }
        None => Ok((Value::Null, io::to_value(h))),
    }
}

fn fractional_value(frac: &FractionalSolution, h: &Hypergraph) -> Value {
    let edges: Vec<Value> = h
        .edges()
        .iter()
        .zip(&frac.edge_weights)
        .filter(|(_, w)| **w != Rational::from_integer(0.into()))
        .map(|(e, w)| json!({"edge": e, "weight": format_ratio(w)}))
        .collect();
    json!({
        "nu_star": format_ratio(&frac.nu_star),
        "tau_star": format_ratio(&frac.tau_star),
        "perfect": frac.is_perfect(h.n(), h.k()),
        "edge_weights": edges,
        "vertex_weights": ratio_list(&frac.vertex_weights),
    })
}

fn sparse_value(sp: &SparseSubgraph) -> Value {
    json!({
        "edge_count": sp.subgraph.edge_count(),
        "target_degree": format_ratio(&sp.target_degree),
        "min_degree": sp.min_degree,
        "max_degree": sp.max_degree,
        "max_pair_codegree": sp.max_pair_codegree,
        "kept_copies": sp.kept_copies,
        "skipped": sp.skipped.iter().map(|(i, why)| json!({"copy": i, "reason": why})).collect::<Vec<_>>(),
    })
}

fn sample_value(s: &RoundOneSample) -> Value {
    json!({
        "n": s.n,
        "k": s.k,
        "p": s.p.describe(),
        "copy_sizes": s.copies.iter().map(|r| r.len()).collect::<Vec<_>>(),
        "raw_sizes": s.raw_sizes,
        "max_single": s.y_single.iter().copied().max().unwrap_or(0),
    })
}

fn run(cmd: &Command, ctx: &Ctx) -> (Value, Result<Outcome>) {
    let p = match cmd {
        Command::Construct(a) => params(a),
        Command::Nu(a) | Command::Alpha(a) | Command::Berge(a) => params(a),
        Command::Fractional(a) | Command::StableCheck(a) | Command::Shadow(a) => params(a),
        Command::Degrees(a) => params(a),
        Command::StableComplete(a) => params(a),
        Command::Closeness(a) => params(a),
        Command::Closest(a) => params(a),
        Command::Fdense(a) => params(a),
        Command::Absorb(a) => params(a),
        Command::Round1(a) => params(a),
        Command::Sparsify(a) => params(a),
        Command::Pipeline(a) => params(a),
        Command::Verify(a) => params(a),
        Command::Sweep(a) => params(a),
    };
    let out = dispatch(cmd, ctx).map(|(results, random)| Outcome {
        parameters: p.clone(),
        results,
        random,
    });
    (p, out)
}

/// Results and whether the command drew random numbers.
type Dispatch = (Value, bool);

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Dispatch> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Nu(a) => {
            let m = max_matching(&load(&a.file)?)?;
            Ok((json!({"size": m.size(), "witness": m.edges()}), false))
        }
        Command::Alpha(a) => {
            let w = independence_number(&load(&a.file)?)?;
            Ok((json!({"size": w.len(), "witness": w}), false))
        }
        Command::Berge(a) => {
            let g = load(&a.file)?;
            if g.k() == 2 {
                ctx.warn_limit("berge", g.n(), BERGE_LIMIT);
            }
            let c = berge_deficiency_guarded(&g, ctx.guard)?;
            Ok((
                json!({"w": c.w, "odd_components": c.odd_components, "value": c.value}), false))
        }
        Command::Degrees(a) => {
            let h = load(&a.file)?;
            let mut r = json!({
                "l": a.l,
                "edge_count": h.edge_count(),
                "min_degree": h.min_degree(a.l)?,
                "max_degree": h.max_degree(a.l)?,
            });
            if a.l == 1 {
                r["vertex_degrees"] = json!(h.vertex_degrees());
            }
            Ok((r, false))
        }
        Command::Fractional(a) => {
            let h = load(&a.file)?;
            let frac = fractional_optimum(&h)?;
            Ok((fractional_value(&frac, &h), false))
        }
        Command::StableComplete(a) => {
            let h = load(&a.file)?;
            let done = stable_completion(&h)?;
            let (file, inline) = hypergraph_or_file(&done.graph, &a.output)?;
            Ok((
                json!({
                    "relabeling": done.relabeling,
                    "omega": ratio_list(&done.omega),
                    "tau_star": format_ratio(&done.tau_star),
                    "added": done.added,
                    "edge_count": done.graph.edge_count(),
                    "output": file,
                    "hypergraph": inline,
                }), false))
        }
        Command::StableCheck(a) => {
            let v = is_stable(&load(&a.file)?);
            let witness = v.witness.map(|(e, f)| json!({"e": e, "f": f}));
            Ok((json!({"stable": v.stable, "witness": witness}), false))
        }
        Command::Shadow(a) => {
            let sets = shadow(&load(&a.file)?);
            Ok((json!({"size": sets.len(), "sets": sets}), false))
        }
        Command::Closeness(a) => closeness(a),
        Command::Closest(a) => {
            let h = load(&a.file)?;
            let found = if a.local {
                closest_partition_local(&h, a.m, a.s, ctx.seed(), a.restarts)?
            } else {
                ctx.warn_limit("closest", h.n(), CLOSEST_LIMIT);
                closest_partition(&h, a.m, a.s, ctx.guard)?
            };
            let mode = if found.exhaustive { "exhaustive" } else { "local-search heuristic" };
            Ok((
                json!({"w": found.w, "deficit": big(found.deficit), "exhaustive": found.exhaustive, "mode": mode}), a.local))
        }
        Command::Fdense(a) => {
            let h = load(&a.file)?;
            let eps = ratio_arg(&a.eps, "eps")?;
            let r = f_density_check(&h, &eps, ctx.seed(), a.trials)?;
            Ok((
                json!({
                    "dense": r.dense,
                    "witness": r.witness,
                    "min_size": r.min_size,
                    "fraction": format_ratio(&r.fraction),
                    "exhaustive": r.exhaustive,
                    "candidates_checked": r.candidates_checked,
                }), !r.exhaustive))
        }
        Command::Absorb(a) => absorb_cmd(a, ctx),
        Command::Round1(a) => round1_cmd(a, ctx),
        Command::Sparsify(a) => sparsify_cmd(a, ctx),
        Command::Pipeline(a) => {
            let h = load(&a.file)?;
            let mut params = PipelineParams::new(a.copies, a.prob.parse()?, ctx.seed());
            params.sigma = ratio_arg(&a.sigma, "sigma")?;
            params.eps = ratio_arg(&a.eps, "eps")?;
            let out = almost_perfect_pipeline(&h, &params)?;
            Ok((
                json!({
                    "matching": out.matching.edges(),
                    "size": out.matching.size(),
                    "uncovered": out.uncovered,
                    "uncovered_fraction": format_ratio(&out.uncovered_fraction),
                    "meets_sigma": out.meets_sigma,
                    "finisher": out.finisher,
                    "copies": out.copies,
                    "sparse": out.sparse.as_ref().map(sparse_value),
                }), true))
        }
        Command::Verify(a) => {
            let mut cfg = SuiteConfig::new(a.trials, ctx.seed());
            cfg.rho = ratio_arg(&a.rho, "rho")?;
            cfg.asymptotic_floor = a.asymptotic_floor;
            let rep = run_suite(&a.suite, &cfg)?;
            let mut v = serde_json::to_value(&rep).expect("report serializes");
            v["ok"] = rep.ok().into();
            Ok((v, true))
        }
        Command::Sweep(a) => {
            let mu = ratio_arg(&a.mu, "mu")?;
            let rule = match a.rule {
                Rule::Window => MRule::Window { mu: mu.clone() },
                Rule::All => MRule::All,
            };
            ctx.warn_limit("sweep", a.n_max, SWEEP_LIMIT);
            let rows = sweep(a.k, a.l, a.n_min..=a.n_max, &rule, a.search, ctx.seed(), ctx.guard)?;
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    let mut v = serde_json::to_value(&r).expect("row serializes");
                    v["threshold"] = big(r.threshold);
                    v["window"] = describe_window(r.n, a.k, a.l, &mu).into();
                    v
                })
                .collect();
            Ok((json!({"rows": rows}), a.search > 0))
        }
    }
}

fn construct(a: &ConstructArgs) -> Result<Dispatch> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::Domain(format!("--{name} is required for this family")))
    };
    let h = match a.family {
        Family::SpaceBarrier => {
            let k = need(a.k, "k")?;
            build_space_barrier(need(a.n, "n")?, k, a.s.unwrap_or(k), need(a.m, "m")?)?
        }
        Family::Parity => build_parity(need(a.na, "na")?, need(a.nb, "nb")?, need(a.k, "k")?)?,
        Family::CliqueMinus => build_clique_minus(need(a.n, "n")?, need(a.k, "k")?)?,
        Family::Fano => fano(),
        Family::Complete => {
            let (n, k) = (need(a.n, "n")?, need(a.k, "k")?);
            if k == 0 || k > n {
                return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
            }
            Hypergraph::complete(n, k)
        }
    };
    let (file, inline) = hypergraph_or_file(&h, &a.output)?;
    Ok((
        json!({"n": h.n(), "k": h.k(), "edge_count": h.edge_count(), "output": file, "hypergraph": inline}), false))
}

fn closeness(a: &ClosenessArgs) -> Result<Dispatch> {
    let h = load(&a.file)?;
    let w = match &a.w {
        Some(s) => vertex_set(s)?,
        None => VertexSet::range(0, a.m as u32),
    };
    let r = barrier_deficit(&h, a.m, a.s, &w)?;
    let goodness = match &a.alpha {
        None => Value::Null,
        Some(s) => {
            let alpha = ratio_arg(s, "alpha")?;
            let g = classify_good(&h, a.m, a.s, &w, &alpha)?;
            json!({
                "alpha": format_ratio(&alpha),
                "good": g.good,
                "bad": g.bad,
                "bad_bound": format_ratio(&g.bad_bound),
                "bound_holds": g.bound_holds,
            })
        }
    };
    Ok((
        json!({
            "w": w,
            "deficit": big(r.deficit),
            "epsilon_effective": format_ratio(&r.epsilon_effective),
            "per_vertex_deficits": r.per_vertex_deficits.iter().map(|&d| big(d)).collect::<Vec<_>>(),
            "goodness": goodness,
        }), false))
}

fn absorb_cmd(a: &AbsorbArgs, ctx: &Ctx) -> Result<Dispatch> {
    let host = load(&a.file)?;
    let params = match (a.a, a.h) {
        (Some(x), Some(y)) => AbsorbParams::new(host.k(), a.l, x, y)?,
        (None, None) => AbsorbParams::optimal(host.k(), a.l)?,
        _ => return Err(Error::Domain("give both --a and --h or neither".into())),
    };
    let rho = ratio_arg(&a.rho, "rho")?;
    let family = sample_absorbing_family(&host, &params, &rho, ctx.seed(), a.probes)?;
    if family.diagnostics.clamped {
        eprintln!("warning: sampling probability clamped to 1");
    }
    let absorption = match &a.absorb_set {
        None => Value::Null,
        Some(s) => {
            let s = vertex_set(s)?;
            let out = absorb(&host, &family, &s)?;
            json!({
                "set": s,
                "matching": out.matching.edges(),
                "uncovered": out.uncovered,
                "uncovered_count": out.uncovered.len(),
                "used_members": out.used_members,
            })
        }
    };
    Ok((
        json!({
            "params": family.params,
            "rho": format_ratio(&family.rho),
            "members": family.members,
            "matching": family.matching.edges(),
            "diagnostics": family.diagnostics,
            "absorption": absorption,
        }), true))
}

fn round1_cmd(a: &Round1Args, ctx: &Ctx) -> Result<Dispatch> {
    let prob = a.prob.parse()?;
    match (&a.file, a.complete_n) {
        (Some(f), _) => round1_on(&load(f)?, a, prob, ctx),
        (None, Some(n)) => {
            let k = a.k.ok_or_else(|| Error::Domain("--complete-n needs --k".into()))?;
            if k == 0 || k > n {
                return Err(Error::Domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
            }
            round1_on(&CompleteOracle { n, k }, a, prob, ctx)
        }
        (None, None) => Err(Error::Domain("give a file or --complete-n".into())),
    }
}

fn round1_on(h: &impl EdgeOracle, a: &Round1Args, prob: Probability, ctx: &Ctx) -> Result<Dispatch> {
    let (n, k) = (h.n(), h.k());
    let sample = round1_sample(h, a.copies, &prob, ctx.seed())?;
    let mut bands = Round1Bands::defaults(n, k);
    bands.single_target = band_arg(&a.single_target, "single-target")?;
    bands.size_target = band_arg(&a.size_target, "size-target")?;
    if let Some(b) = band_arg(&a.single_band, "single-band")? {
        bands.single_band = b;
    }
    if let Some(b) = band_arg(&a.size_band, "size-band")? {
        bands.size_band = b;
    }
    match a.degree_order {
        Some(0) => bands.degree_order = None,
        Some(d) => bands.degree_order = Some(d),
        None => {}
    }
    if let Some(x) = &a.xi {
        bands.xi = ratio_arg(x, "xi")?;
    }
    bands.probes_per_copy = a.probes_per_copy;
    let report = check_round1_properties(&sample, h, &bands)?;
    let bands_v = json!({
        "single_band": bands.single_band,
        "size_band": bands.size_band,
        "pair_max": bands.pair_max,
        "edge_max": bands.edge_max,
        "degree_order": bands.degree_order,
        "xi": format_ratio(&bands.xi),
        "probes_per_copy": bands.probes_per_copy,
    });
    Ok((
        json!({"sample": sample_value(&sample), "bands": bands_v, "report": report}), true))
}

fn sparsify_cmd(a: &SparsifyArgs, ctx: &Ctx) -> Result<Dispatch> {
    let h = load(&a.file)?;
    let sample = round1_sample(&h, a.copies, &a.prob.parse()?, ctx.seed())?;
    let mut fracs = Vec::with_capacity(sample.copies.len());
    for r in &sample.copies {
        if r.is_empty() {
            fracs.push(None);
            continue;
        }
        fracs.push(Some(fractional_optimum(&h.induced(r)?.graph)?));
    }
    let sp = round2_sparsify(&h, &sample, &fracs, ctx.seed())?;
    let (file, inline) = hypergraph_or_file(&sp.subgraph, &a.output)?;
    let mut v = sparse_value(&sp);
    v["output"] = file;
    v["hypergraph"] = inline;
    v["sample"] = sample_value(&sample);
    Ok((v, true))
}

fn report(command: &str, seed: Option<u64>, parameters: Value, results: Value, anchor: &str) -> Value {
    json!({
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "results": results,
        "anchor": anchor,
    })
}

/// Topic of the mathematics each command exercises.
fn anchor(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct(_) => "extremal constructions",
        Command::Nu(_) => "matching number",
        Command::Alpha(_) => "independence number",
        Command::Berge(_) => "Berge-Tutte deficiency formula",
        Command::Degrees(_) => "minimum l-degree",
        Command::Fractional(_) => "fractional matching duality",
        Command::StableComplete(_) => "stable completion from a fractional cover",
        Command::StableCheck(_) => "stable hypergraphs",
        Command::Shadow(_) => "shadow inequality",
        Command::Closeness(_) => "closeness to a space barrier",
        Command::Closest(_) => "closest barrier partition",
        Command::Fdense(_) => "density on large vertex subsets",
        Command::Absorb(_) => "absorbing matching",
        Command::Round1(_) => "round-1 vertex sampling",
        Command::Sparsify(_) => "round-2 sparsification",
        Command::Pipeline(_) => "almost perfect matching by two-round randomization",
        Command::Sweep(_) => "degree threshold tightness",
        Command::Verify(a) => match a.suite.as_str() {
            "katona" => "shadow inequality",
            "frankl" => "Frankl's bound for stable families",
            "stability2" => "stability for graphs",
            "duality" => "fractional matching duality",
            "berge" => "Berge-Tutte deficiency formula",
            "completion" => "stable completion from a fractional cover",
            "goodness" => "good and bad vertices",
            _ => "property campaigns",
        },
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Construct(_) => "construct",
        Command::Nu(_) => "nu",
        Command::Alpha(_) => "alpha",
        Command::Berge(_) => "berge",
        Command::Degrees(_) => "degrees",
        Command::Fractional(_) => "fractional",
        Command::StableComplete(_) => "stable-complete",
        Command::StableCheck(_) => "stable-check",
        Command::Shadow(_) => "shadow",
        Command::Closeness(_) => "closeness",
        Command::Closest(_) => "closest",
        Command::Fdense(_) => "fdense",
        Command::Absorb(_) => "absorb",
        Command::Round1(_) => "round1",
        Command::Sparsify(_) => "sparsify",
        Command::Pipeline(_) => "pipeline",
        Command::Verify(_) => "verify",
        Command::Sweep(_) => "sweep",
    }
}

/// Flatten nested objects into dotted columns; arrays are kept as JSON text.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (key, inner) in map {
                let name = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                flatten(&name, inner, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// CSV view of a report: one record per row of `results.rows`, else one record.
fn to_csv(report: &Value) -> String {
    let base = [("command".to_string(), report["command"].as_str().unwrap_or("").to_string()),
        (
            "seed".to_string(),
            report["seed"].as_u64().map(|s| s.to_string()).unwrap_or_default(),
        )];
    let body = if report.get("error").is_some() { &report["error"] } else { &report["results"] };
    let records: Vec<&Value> = match body.get("rows").and_then(Value::as_array) {
        Some(rows) => rows.iter().collect(),
        None => vec![body],
    };
    let flat: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", r, &mut cells);
            cells
        })
        .collect();
    let mut header: Vec<String> = base.iter().map(|(k, _)| k.clone()).collect();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in &flat {
        let cell = |key: &str| {
            base.iter()
                .chain(row.iter())
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_default()
        };
        let record: Vec<String> = header.iter().map(|h| cell(h)).collect();
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Csv => print!("{}", to_csv(report)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        seed: cli.seed,
        guard: if cli.force { Guard::Force } else { Guard::Enforce },
    };
    let name = command_name(&cli.command);
    let (parameters, outcome) = run(&cli.command, &ctx);
    match outcome {
        Ok(out) => {
            let seed = if out.random { Some(ctx.seed()) } else { cli.seed };
            emit(&report(name, seed, out.parameters, out.results, anchor(&cli.command)), cli.format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut error = Map::new();
            error.insert("kind".into(), e.kind().into());
            error.insert("message".into(), e.to_string().into());
            error.insert("exit_code".into(), e.exit_code().into());
            if let Error::AbsorptionStuck { set } = &e {
                error.insert("set".into(), json!(set));
            }
            let mut rep = report(name, cli.seed, parameters, Value::Null, anchor(&cli.command));
            rep["error"] = Value::Object(error);
            emit(&rep, cli.format);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

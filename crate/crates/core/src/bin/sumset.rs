use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sumset_core::group::{all_subgroups, Modulus};
use sumset_core::profiles::{profile_lower_bound, profile_of, CosetProfile, ProfileReport};
use sumset_core::search::{
    census_minimizers, rho, verify_two_p_plus_one, Goal, LowerBoundEvidence, SearchConfig,
    SearchWitness, Strategy, Verdict, VerifyOptions,
};
use sumset_core::setops::{
    double_restricted, parse_index_list, read_set_file, restricted_sumset, sumset,
};
use sumset_core::structures::{build_extremal, sweep_mu, ExtremalTemplate};
use sumset_core::{Error, PointSet};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_TRUNCATED: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sumset",
    version,
    about = "Restricted sumsets over Z_p^r and the minimum restricted sumset size"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// A + B, or the restricted sum with --restricted
    Sumset(SumsetArgs),
    /// Minimum |2^A| over m-subsets of Z_p^r
    Rho(RhoArgs),
    /// Check that (2p+1)-subsets of Z_p^2 have |2^A| >= 4p, with equality attained
    Verify(VerifyArgs),
    /// All canonical m-subsets of Z_p^2 with a given |2^A|
    Census(CensusArgs),
    /// Build a coset-based extremal set
    Construct(ConstructArgs),
    /// Sweep the difference-d family over all μ-sequences
    SweepMu(SweepMuArgs),
    /// Sumset kernel and search throughput
    Bench(BenchArgs),
    /// Coset profiles and their lower bounds
    Profile(ProfileArgs),
}

#[derive(Args, Serialize)]
struct SumsetArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Flat indices, e.g. 0,1,2
    #[arg(long, conflicts_with = "a_file")]
    a: Option<String>,
    #[arg(long)]
    a_file: Option<PathBuf>,
    /// Defaults to A
    #[arg(long, conflicts_with = "b_file")]
    b: Option<String>,
    #[arg(long)]
    b_file: Option<PathBuf>,
    #[arg(long)]
    restricted: bool,
    /// Write the result set here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RhoArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long)]
    m: usize,
    /// exhaustive, orbit or bnb; defaults to orbit in rank 2, exhaustive otherwise
    #[arg(long)]
    strategy: Option<String>,
    /// Only look for sets with |2^A| below this value
    #[arg(long)]
    target: Option<u32>,
    #[command(flatten)]
    run: RunArgs,
    /// Force-complete pruned prefixes missing at most this many points
    #[arg(long)]
    audit_depth: Option<usize>,
    /// Witness file
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
struct RunArgs {
    /// Wall-clock budget in seconds
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl RunArgs {
    fn budget(&self) -> Result<Option<Duration>, Error> {
        match self.budget {
            Some(b) if !(b.is_finite() && b >= 0.0) => Err(Error::Usage(format!("bad budget {b}"))),
            b => Ok(b.map(Duration::from_secs_f64)),
        }
    }
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    strategy: Option<String>,
    #[command(flatten)]
    run: RunArgs,
    /// Random sets to test when p >= 11
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Report file (JSON); the manifest goes next to it
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CensusArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    value: u32,
    #[arg(long)]
    strategy: Option<String>,
    #[command(flatten)]
    run: RunArgs,
    /// CSV file; stdout if absent
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum TemplateKind {
    /// one coset plus a point (p + 1 points)
    Ek,
    /// two cosets plus a point (2p + 1 points)
    Conj43,
}

#[derive(Args, Serialize)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    template: TemplateKind,
    #[arg(long)]
    p: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SweepMuArgs {
    #[arg(long)]
    p: u32,
    /// CSV file; stdout if absent
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    r: u32,
    #[arg(long)]
    m: usize,
    /// Random sets for the kernel benchmark
    #[arg(long, default_value_t = 100_000)]
    sets: u64,
    /// Seconds of search for the node-rate benchmark
    #[arg(long, default_value_t = 3.0)]
    seconds: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ProfileArgs {
    #[arg(long)]
    p: u32,
    /// Raw coset sizes, e.g. 3,2,2,2,2
    #[arg(long, conflicts_with = "set_file")]
    sizes: Option<String>,
    /// A set in Z_p^2; prints one line per subgroup
    #[arg(long)]
    set_file: Option<PathBuf>,
}

/// What a command reports back to `main`.
struct Outcome {
    exit: u8,
    result: Value,
    runtime: Value,
    seed: Option<u64>,
    output: Option<PathBuf>,
}

impl Outcome {
    fn ok(result: Value, output: Option<PathBuf>) -> Self {
        Outcome {
            exit: EXIT_OK,
            result,
            runtime: json!({}),
            seed: None,
            output,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = chrono::Utc::now();
    let clock = Instant::now();
    let (name, config) = describe(&cli.command);
    match execute(cli.command) {
        Ok(outcome) => {
            let manifest = json!({
                "schema": 1,
                "command": name,
                "config": config,
                "seed": outcome.seed,
                "tool_version": env!("CARGO_PKG_VERSION"),
                "result": outcome.result,
                "runtime": {
                    "started": started.to_rfc3339(),
                    "finished": chrono::Utc::now().to_rfc3339(),
                    "elapsed_secs": clock.elapsed().as_secs_f64(),
                    "counters": outcome.runtime,
                },
            });
            let text = serde_json::to_string_pretty(&manifest).expect("json values serialize");
            match &outcome.output {
                Some(out) => {
                    let path = manifest_path(out);
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
                None => eprintln!("{text}"),
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible { .. } => EXIT_INFEASIBLE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn manifest_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    let v = |x: &dyn erased::Ser| x.to_value();
    match cmd {
        Command::Sumset(a) => ("sumset", v(a)),
        Command::Rho(a) => ("rho", v(a)),
        Command::Verify(a) => ("verify", v(a)),
        Command::Census(a) => ("census", v(a)),
        Command::Construct(a) => ("construct", v(a)),
        Command::SweepMu(a) => ("sweep-mu", v(a)),
        Command::Bench(a) => ("bench", v(a)),
        Command::Profile(a) => ("profile", v(a)),
    }
}

mod erased {
    pub trait Ser {
        fn to_value(&self) -> serde_json::Value;
    }

    impl<T: serde::Serialize> Ser for T {
        fn to_value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("arguments serialize")
        }
    }
}

fn execute(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Sumset(a) => cmd_sumset(a),
        Command::Rho(a) => cmd_rho(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Census(a) => cmd_census(a),
        Command::Construct(a) => cmd_construct(a),
        Command::SweepMu(a) => cmd_sweep_mu(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Profile(a) => cmd_profile(a),
    }
}

fn load_operand(
    m: Modulus,
    list: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<Option<PointSet>, Error> {
    match (list, file) {
        (Some(l), _) => parse_index_list(m, l).map(Some),
        (None, Some(f)) => read_set_file(f, Some(m)).map(Some),
        (None, None) => Ok(None),
    }
}

fn write_text(path: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
    }
}

fn indices_text(s: &PointSet) -> String {
    s.indices()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_strategy(s: &Option<String>) -> Result<Option<Strategy>, Error> {
    s.as_deref().map(str::parse).transpose()
}

fn cmd_sumset(a: SumsetArgs) -> Result<Outcome, Error> {
    let m = Modulus::new(a.p, a.r)?;
    let x = load_operand(m, &a.a, &a.a_file)?
        .ok_or_else(|| Error::Usage("give --a or --a-file".into()))?;
    let y = load_operand(m, &a.b, &a.b_file)?.unwrap_or_else(|| x.clone());
    let s = if a.restricted {
        restricted_sumset(&x, &y)?
    } else {
        sumset(&x, &y)?
    };
    write_text(&a.output, &s.to_text())?;
    println!("cardinality {}", s.len());
    Ok(Outcome::ok(json!({ "cardinality": s.len() }), a.output))
}

fn witness_summary(w: &SearchWitness) -> Value {
    json!({
        "best_value": w.best_value,
        "rho": w.rho(),
        "complete": w.complete,
        "coverage": w.coverage(),
        "witness_count": w.witnesses.len(),
        "witnesses_truncated": w.witnesses_truncated,
        "witnesses": w.witnesses.iter().take(32).map(indices_text).collect::<Vec<_>>(),
    })
}

fn witness_counters(w: &SearchWitness) -> Value {
    json!({
        "nodes_visited": w.nodes_visited,
        "pruned": w.pruned_count,
        "units_done": w.units_done,
        "units_total": w.units_total,
        "audit": w.audit.map(|a| json!({ "audited": a.audited, "violations": a.violations })),
    })
}

fn cmd_rho(a: RhoArgs) -> Result<Outcome, Error> {
    let strategy = parse_strategy(&a.strategy)?.unwrap_or(if a.r == 2 {
        Strategy::Orbit
    } else {
        Strategy::Exhaustive
    });
    let config = SearchConfig {
        time_budget: a.run.budget()?,
        checkpoint: a.run.checkpoint.clone(),
        threads: a.run.threads,
        audit_depth: a.audit_depth,
        ..SearchConfig::new(a.p, a.r, a.m, strategy).goal(Goal::Minimize { target: a.target })
    };
    let w = rho(&config)?;
    if let Some(path) = &a.output {
        w.write_witnesses(path)?;
    }
    let value = w.best_value.map_or("none".into(), |v| v.to_string());
    println!(
        "p={} r={} m={} strategy={} best_value={} complete={} coverage={:.4}",
        a.p,
        a.r,
        a.m,
        strategy,
        value,
        w.complete,
        w.coverage()
    );
    if let Some(t) = a.target {
        if w.best_value.is_none() && w.complete {
            println!("no set has |2^A| < {t}");
        }
    }
    if let Some(audit) = w.audit {
        println!(
            "audit: {} pruned prefixes, {} violations",
            audit.audited, audit.violations
        );
    }
    if let Some(path) = &a.output {
        println!("witnesses: {}", path.display());
    }
    Ok(Outcome {
        exit: if w.complete { EXIT_OK } else { EXIT_TRUNCATED },
        result: witness_summary(&w),
        runtime: witness_counters(&w),
        seed: None,
        output: a.output,
    })
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed={s}");
        s
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<Outcome, Error> {
    let sampling = a.p >= 11;
    let seed = sampling.then(|| seed_or_random(a.seed));
    let opts = VerifyOptions {
        strategy: parse_strategy(&a.strategy)?,
        time_budget: a.run.budget()?,
        checkpoint: a.run.checkpoint.clone(),
        threads: a.run.threads,
        samples: a.samples,
        seed: seed.unwrap_or(0),
    };
    let clock = Instant::now();
    let report = verify_two_p_plus_one(a.p, &opts)?;
    let four_p = 4 * a.p;
    println!(
        "attainment: |2^A| = {} for two cosets plus a point ({})",
        report.attainment_value,
        if report.attainment_value == four_p {
            "PASS"
        } else {
            "FAIL"
        }
    );
    let (lower, runtime) = match &report.lower {
        LowerBoundEvidence::Search(w) => {
            match w.best_value {
                None => println!(
                    "lower bound: no (2p+1)-set with |2^A| < {four_p} in {:.2}% of the search space ({})",
                    100.0 * w.coverage(),
                    w.strategy
                ),
                Some(v) => println!("lower bound: FAIL, found |2^A| = {v} < {four_p}"),
            }
            (witness_summary(w), witness_counters(w))
        }
        LowerBoundEvidence::Sampled(s) => {
            println!(
                "lower bound (sampling, seed {}): {} random sets, least |2^A| = {}, {} below {four_p}",
                s.seed, s.samples, s.min_value, s.below_threshold
            );
            (
                json!({
                    "samples": s.samples,
                    "min_value": s.min_value,
                    "below_threshold": s.below_threshold,
                    "min_witness": indices_text(&s.min_witness),
                }),
                json!({}),
            )
        }
    };
    let verdict = match report.verdict {
        Verdict::Pass => "PASS",
        Verdict::Partial => "PARTIAL",
        Verdict::Fail => "FAIL",
    };
    println!(
        "verdict: {verdict} (complete={}, {:.1}s)",
        report.complete,
        clock.elapsed().as_secs_f64()
    );
    let result = json!({
        "p": a.p,
        "attainment_value": report.attainment_value,
        "attainment_set": indices_text(&report.attainment),
        "lower_bound": lower,
        "complete": report.complete,
        "coverage": report.coverage,
        "rho": report.rho,
        "verdict": verdict,
    });
    if let Some(path) = &a.output {
        let text = serde_json::to_string_pretty(&result).expect("json values serialize");
        write_text(&Some(path.clone()), &(text + "\n"))?;
    }
    Ok(Outcome {
        exit: match report.verdict {
            Verdict::Pass => EXIT_OK,
            Verdict::Partial => EXIT_TRUNCATED,
            Verdict::Fail => EXIT_FAILED,
        },
        result,
        runtime,
        seed,
        output: a.output,
    })
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io {
        path: "<csv>".into(),
        source: std::io::Error::other(e),
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        w.write_record(&row).map_err(csv_error)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv_error(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv of ascii fields"))
}

fn cmd_census(a: CensusArgs) -> Result<Outcome, Error> {
    let opts = VerifyOptions {
        strategy: parse_strategy(&a.strategy)?,
        time_budget: a.run.budget()?,
        checkpoint: a.run.checkpoint.clone(),
        threads: a.run.threads,
        ..VerifyOptions::default()
    };
    let report = census_minimizers(a.p, a.m, a.value, &opts)?;
    let rows = report.entries.iter().map(|e| {
        vec![
            indices_text(&e.set),
            e.value.to_string(),
            e.two_coset_shape.to_string(),
            e.coset_plus_point_shape.to_string(),
        ]
    });
    write_text(
        &a.output,
        &csv_text(&["set", "value", "match_conj43", "match_ek"], rows)?,
    )?;
    let matched = report.entries.iter().filter(|e| e.two_coset_shape).count();
    let ek = report
        .entries
        .iter()
        .filter(|e| e.coset_plus_point_shape)
        .count();
    eprintln!(
        "{} canonical sets with |2^A| = {} (two-coset shape: {matched}, coset-plus-point shape: {ek}, complete={})",
        report.entries.len(),
        a.value,
        report.search.complete
    );
    Ok(Outcome {
        exit: if report.search.complete {
            EXIT_OK
        } else {
            EXIT_TRUNCATED
        },
        result: json!({
            "count": report.entries.len(),
            "match_conj43": matched,
            "match_ek": ek,
            "complete": report.search.complete,
            "truncated_list": report.search.witnesses_truncated,
        }),
        runtime: witness_counters(&report.search),
        seed: None,
        output: a.output,
    })
}

fn cmd_construct(a: ConstructArgs) -> Result<Outcome, Error> {
    let m = Modulus::new(a.p, 2)?;
    let template = match a.template {
        TemplateKind::Ek => ExtremalTemplate::standard_coset_plus_point(m)?,
        TemplateKind::Conj43 => ExtremalTemplate::standard_two_cosets(m)?,
    };
    let set = build_extremal(&template)?;
    write_text(&a.output, &set.to_text())?;
    let value = double_restricted(&set).len();
    eprintln!("|A| = {}, |2^A| = {value}", set.len());
    Ok(Outcome::ok(
        json!({ "size": set.len(), "value": value, "set": indices_text(&set) }),
        a.output,
    ))
}

fn cmd_sweep_mu(a: SweepMuArgs) -> Result<Outcome, Error> {
    let rows = sweep_mu(a.p)?;
    let fmt_el = |e: &sumset_core::GroupElement| {
        format!(
            "({})",
            e.coords()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(";")
        )
    };
    let text = csv_text(
        &[
            "d",
            "a1",
            "mu",
            "size",
            "value",
            "meets_4p",
            "endpoint_identity",
        ],
        rows.iter().map(|r| {
            vec![
                fmt_el(&r.d),
                fmt_el(&r.a1),
                r.mu.iter()
                    .map(i32::to_string)
                    .collect::<Vec<_>>()
                    .join(";"),
                r.size.to_string(),
                r.value.to_string(),
                r.meets_threshold.to_string(),
                r.endpoint_identity.to_string(),
            ]
        }),
    )?;
    write_text(&a.output, &text)?;
    let min = rows.iter().map(|r| r.value).min();
    let failing = rows.iter().filter(|r| !r.meets_threshold).count();
    let least = min.map_or("none".to_string(), |v| v.to_string());
    eprintln!(
        "{} sequences, least |2^A| = {least}, {failing} below 4p",
        rows.len()
    );
    Ok(Outcome::ok(
        json!({ "rows": rows.len(), "min_value": min, "below_4p": failing,
                "endpoint_identity_all": rows.iter().all(|r| r.endpoint_identity) }),
        a.output,
    ))
}

fn cmd_bench(a: BenchArgs) -> Result<Outcome, Error> {
    use rand::SeedableRng;
    let seed = seed_or_random(a.seed);
    let modulus = Modulus::new(a.p, a.r)?;
    if a.m > modulus.order() {
        return Err(Error::Usage("m exceeds the group order".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<PointSet> = (0..a.sets)
        .map(|_| {
            let idx = rand::seq::index::sample(&mut rng, modulus.order(), a.m).into_vec();
            PointSet::from_indices(modulus, idx)
        })
        .collect::<Result<_, _>>()?;
    let clock = Instant::now();
    let total: usize = sets.iter().map(|s| double_restricted(s).len()).sum();
    let kernel_secs = clock.elapsed().as_secs_f64();
    let kernel_rate = a.sets as f64 / kernel_secs.max(1e-9);
    println!(
        "kernel: {} sets in {kernel_secs:.3}s = {kernel_rate:.0} sets/s (checksum {total})",
        a.sets
    );

    let mut search = Value::Null;
    if a.r == 2 && a.p.pow(2) <= 128 {
        let config = SearchConfig {
            time_budget: Some(Duration::from_secs_f64(a.seconds.max(0.0))),
            ..SearchConfig::new(a.p, 2, a.m, Strategy::BranchAndBound)
        };
        let clock = Instant::now();
        let w = rho(&config)?;
        let secs = clock.elapsed().as_secs_f64();
        let rate = w.nodes_visited as f64 / secs.max(1e-9);
        println!(
            "search: {} nodes in {secs:.2}s = {rate:.0} nodes/s (bnb, coverage {:.4})",
            w.nodes_visited,
            w.coverage()
        );
        search = json!({ "nodes": w.nodes_visited, "seconds": secs, "nodes_per_sec": rate });
    }
    Ok(Outcome {
        exit: EXIT_OK,
        result: json!({ "sets": a.sets, "checksum": total }),
        runtime: json!({ "kernel_sets_per_sec": kernel_rate, "search": search }),
        seed: Some(seed),
        output: a.output,
    })
}

fn cmd_profile(a: ProfileArgs) -> Result<Outcome, Error> {
    let mut lines = Vec::new();
    if let Some(sizes) = &a.sizes {
        let raw = sizes
            .split([',', ' '])
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Usage(format!("bad size `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let prof = CosetProfile::from_raw(a.p, &raw)?;
        let cert = profile_lower_bound(&prof);
        lines.push(
            ProfileReport {
                profile: &prof,
                certificate: &cert,
            }
            .to_string(),
        );
    } else if let Some(path) = &a.set_file {
        let m = Modulus::new(a.p, 2)?;
        let set = read_set_file(path, Some(m))?;
        for h in all_subgroups(m)? {
            let prof = profile_of(&set, &h)?;
            let cert = profile_lower_bound(&prof);
            lines.push(
                ProfileReport {
                    profile: &prof,
                    certificate: &cert,
                }
                .to_string(),
            );
        }
        lines.push(format!("actual |2^A| = {}", double_restricted(&set).len()));
    } else {
        return Err(Error::Usage("give --sizes or --set-file".into()));
    }
    for l in &lines {
        println!("{l}");
    }
    Ok(Outcome::ok(json!({ "lines": lines }), None))
}

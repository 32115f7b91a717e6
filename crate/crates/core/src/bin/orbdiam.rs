use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use orbdiam::bounds::{
    analytic_lower_bounds, lie_cross_char_lower, split_prime_power, upper_bounds, Bound,
    BoundKind, BoundReport, LieFamily, ModuleClass, SkippedBound, Stabilizer, BOUND_LIE_CROSS,
    BOUND_RANK, BOUND_SCALAR_DIM,
};
use orbdiam::cache;
use orbdiam::descriptor::{parse_space, Descriptor, GRAMMAR};
use orbdiam::linalg::space_size;
use orbdiam::orbgraph::Strategy;
use orbdiam::repfactory::{export_rep, import_rep, GroupRep};
use orbdiam::report::{diam_report, human_table, profile_csv, to_json, Report, Timings};
use orbdiam::scenario::{run_scenario, CaseStatus, ScenarioResult, SCENARIOS};

#[derive(Parser)]
#[command(
    name = "orbdiam",
    version,
    about = "Orbital diameters of affine primitive groups: orbit enumeration, \
             Cayley-graph BFS, and closed-form bound checks over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a representation from a descriptor or file and print a summary
    Rep(RepArgs),
    /// Enumerate stabilizer orbits and compute every orbital diameter
    Diam(DiamArgs),
    /// Evaluate closed-form lower and upper diameter bounds
    Bounds(BoundsArgs),
    /// Run a named verification scenario against the stored registry
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct RepArgs {
    /// Builtin descriptor, e.g. `fdpm:r=8,q=2` or `sl:n=5,q=2;functor=ext2`
    spec: Option<String>,
    /// Read generators from a file instead
    #[arg(long, conflicts_with = "spec")]
    file: Option<PathBuf>,
    /// Write the constructed generators back out in file format
    #[arg(long)]
    export: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum StrategyArg {
    #[default]
    Auto,
    Frontier,
    Bitset,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Frontier => Strategy::Frontier,
            StrategyArg::Bitset => Strategy::Bitset,
        }
    }
}

#[derive(clap::Args)]
struct DiamArgs {
    /// Builtin descriptor
    spec: Option<String>,
    /// Read generators from a file instead
    #[arg(long, conflicts_with = "spec")]
    file: Option<PathBuf>,
    /// Refuse spaces larger than this (accepts `67108864` or `2^26`)
    #[arg(long, default_value = "2^26")]
    max_space: String,
    /// BFS engine; `bitset` needs characteristic 2
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Write the JSON report here (`-` prints it to stdout)
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the distance profiles as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BoundsArgs {
    /// Stabilizer name: `A9`, `PSL5(2)`, `G2`, `2B2(8)`, `M11`, ...
    #[arg(long)]
    group: String,
    /// Module kind: `fdpm`, `natural`, or `other`
    #[arg(long)]
    module: Option<String>,
    /// Module is in the group's defining characteristic
    #[arg(long)]
    defining: bool,
    /// Cross-characteristic module over GF(r) (Lie groups; needs --r)
    #[arg(long, conflicts_with = "defining")]
    cross: bool,
    /// Module field size for --cross
    #[arg(long)]
    r: Option<u64>,
    /// Field of the module, q0
    #[arg(long)]
    q: Option<u64>,
    /// Module dimension
    #[arg(long)]
    n: Option<u32>,
    /// Permutation rank, if known (enables the rank-1 upper bound)
    #[arg(long)]
    rank: Option<usize>,
    /// The scalar group acts on the module
    #[arg(long)]
    scalars: bool,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Scenario name, or `all`
    scenario: String,
    /// Directory with generator files for ingestion scenarios
    #[arg(long)]
    gens_dir: Option<PathBuf>,
    /// Write results as JSON here (`-` prints to stdout)
    #[arg(long)]
    json: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(String),
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Rep(a) => cmd_rep(&a),
        Cmd::Diam(a) => cmd_diam(&a),
        Cmd::Bounds(a) => cmd_bounds(&a),
        Cmd::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn load_rep(spec: &Option<String>, file: &Option<PathBuf>) -> Result<GroupRep, Failure> {
    match (spec, file) {
        (Some(s), None) => {
            let parsed = Descriptor::parse(s)
                .map_err(|e| usage(format!("descriptor error {e}\n\n{GRAMMAR}")))?;
            parsed
                .build()
                .map_err(|e| Failure::Run(format!("building `{s}`: {e}")))
        }
        (None, Some(p)) => {
            import_rep(p).map_err(|e| usage(format!("reading {}: {e}", p.display())))
        }
        (None, None) => Err(usage(format!(
            "give a descriptor or --file\n\n{GRAMMAR}"
        ))),
        (Some(_), Some(_)) => unreachable!("clap forbids this combination"),
    }
}

fn cmd_rep(args: &RepArgs) -> Result<ExitCode, Failure> {
    let rep = load_rep(&args.spec, &args.file)?;
    rep.validate()
        .map_err(|e| Failure::Run(format!("invalid representation: {e}")))?;
    let space = space_size(&rep.field, rep.n)
        .map(|s| s.to_string())
        .unwrap_or_else(|_| "> 2^62".to_string());
    println!(
        "dim {} over GF({}), {} generators",
        rep.n,
        rep.field.q(),
        rep.gens.len()
    );
    println!("descriptor {}", rep.descriptor);
    println!(
        "scalars {}; space {}^{} = {}",
        if rep.contains_scalars { "yes" } else { "no" },
        rep.field.q(),
        rep.n,
        space
    );
    if let Some(path) = &args.export {
        export_rep(&rep, path).map_err(|e| Failure::Run(format!("export: {e}")))?;
        println!("exported to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_report(args: &DiamArgs, bytes: &str, report: &Report) -> Result<(), Failure> {
    match &args.json {
        Some(p) if p.as_os_str() == "-" => print!("{bytes}"),
        Some(p) => {
            std::fs::write(p, bytes)
                .map_err(|e| Failure::Run(format!("writing {}: {e}", p.display())))?;
            print!("{}", human_table(report));
        }
        None => print!("{}", human_table(report)),
    }
    if let Some(p) = &args.csv {
        std::fs::write(p, profile_csv(report))
            .map_err(|e| Failure::Run(format!("writing {}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_diam(args: &DiamArgs) -> Result<ExitCode, Failure> {
    let cap = parse_space(&args.max_space).map_err(usage)?;
    let t0 = Instant::now();
    let rep = load_rep(&args.spec, &args.file)?;
    let construct_ms = t0.elapsed().as_millis();

    let space = space_size(&rep.field, rep.n).map_err(|e| Failure::Run(e.to_string()))?;
    if space > cap {
        return Err(Failure::Run(format!(
            "space {}^{} = {space} exceeds --max-space {cap}",
            rep.field.q(),
            rep.n
        )));
    }

    let key = cache::cache_key(&rep);
    if let Some(bytes) = cache::lookup(&key) {
        let report: Report = serde_json::from_str(&bytes)
            .map_err(|e| Failure::Run(format!("corrupt cache entry {key}: {e}")))?;
        eprintln!("cache hit {key}");
        emit_report(args, &bytes, &report)?;
        return Ok(ExitCode::SUCCESS);
    }

    let t1 = Instant::now();
    let result = orbdiam::orbgraph::orbdiam_all_with(&rep, args.strategy.into())
        .map_err(|e| Failure::Run(e.to_string()))?;
    let diameter_ms = t1.elapsed().as_millis();
    let timings = Timings {
        construct_ms,
        diameter_ms,
        total_ms: t0.elapsed().as_millis(),
    };
    let report = diam_report(&rep, &result, timings);
    let bytes = to_json(&report);
    if let Err(e) = cache::store(&key, &bytes) {
        eprintln!("warning: cache store failed: {e}");
    }
    emit_report(args, &bytes, &report)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    group: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    module: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q0: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<u64>,
    #[serde(flatten)]
    report: BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_lower: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_upper: Option<u64>,
}

#[derive(Serialize)]
struct UnsupportedOutput<'a> {
    group: &'a str,
    unsupported: String,
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("bounds output serializes")
    );
}

fn cmd_bounds(args: &BoundsArgs) -> Result<ExitCode, Failure> {
    if args.cross {
        return cmd_bounds_cross(args);
    }
    let stab = match Stabilizer::parse(&args.group) {
        Ok(s) => s,
        Err(e) => {
            print_json(&UnsupportedOutput {
                group: &args.group,
                unsupported: e.to_string(),
            });
            return Ok(ExitCode::SUCCESS);
        }
    };
    let module_kind = args.module.as_deref().unwrap_or("other");
    let module = ModuleClass {
        fdpm: module_kind == "fdpm",
        natural: module_kind == "natural",
        defining: args.defining || module_kind == "natural",
    };
    if !matches!(module_kind, "fdpm" | "natural" | "other") {
        return Err(usage(format!(
            "--module must be fdpm, natural or other, got `{module_kind}`"
        )));
    }
    let q0 = args
        .q
        .ok_or_else(|| usage("--q (the module field) is required unless --cross"))?;
    if split_prime_power(q0).is_none() {
        return Err(usage(format!("--q {q0} is not a prime power")));
    }
    let n = match (args.n, &stab) {
        (Some(n), _) => n,
        (None, Stabilizer::Alternating { r }) if module.fdpm => {
            let (p, _) = split_prime_power(q0).expect("checked above");
            if u64::from(*r) % p == 0 {
                r - 2
            } else {
                r - 1
            }
        }
        _ => return Err(usage("--n (the module dimension) is required here")),
    };

    let mut report = analytic_lower_bounds(&stab, module, n, q0);
    let has_scalars = args.scalars || q0 == 2;
    match args.rank {
        Some(rank) if rank >= 2 => report.merge(upper_bounds(n, rank, has_scalars)),
        Some(rank) => return Err(usage(format!("--rank must be at least 2, got {rank}"))),
        None => {
            if has_scalars {
                report.bounds.push(Bound {
                    name: BOUND_SCALAR_DIM.into(),
                    kind: BoundKind::Upper,
                    value: u64::from(n),
                    conditions: vec!["scalar group present".into()],
                });
            } else {
                report.skipped.push(SkippedBound {
                    name: BOUND_SCALAR_DIM.into(),
                    reason: "scalar group not present".into(),
                });
            }
            report.skipped.push(SkippedBound {
                name: BOUND_RANK.into(),
                reason: "permutation rank not supplied".into(),
            });
        }
    }
    for c in report.conflicts() {
        eprintln!("warning: {c}");
    }
    let (best_lower, best_upper) = (report.best_lower(), report.best_upper());
    print_json(&BoundsOutput {
        group: &args.group,
        module: args.module.as_deref(),
        n: Some(n),
        q0: Some(q0),
        r: None,
        report,
        best_lower,
        best_upper,
    });
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds_cross(args: &BoundsArgs) -> Result<ExitCode, Failure> {
    let family = match Stabilizer::parse(&args.group) {
        Ok(Stabilizer::Lie { family, .. }) => Some(family),
        _ => LieFamily::parse(&args.group),
    };
    let Some(family) = family else {
        print_json(&UnsupportedOutput {
            group: &args.group,
            unsupported: format!("`{}` is not a Lie family", args.group),
        });
        return Ok(ExitCode::SUCCESS);
    };
    let r = args
        .r
        .ok_or_else(|| usage("--cross needs --r (the module field size)"))?;
    if split_prime_power(r).is_none() {
        return Err(usage(format!("--r {r} is not a prime power")));
    }
    let mut report = BoundReport::default();
    match lie_cross_char_lower(family, r) {
        Ok(v) => report.bounds.push(Bound {
            name: BOUND_LIE_CROSS.into(),
            kind: BoundKind::Lower,
            value: v,
            conditions: vec![format!("group {} over GF(q), module over GF({r})", family.label())],
        }),
        Err(e) => report.skipped.push(SkippedBound {
            name: BOUND_LIE_CROSS.into(),
            reason: e.to_string(),
        }),
    }
    let (best_lower, best_upper) = (report.best_lower(), report.best_upper());
    print_json(&BoundsOutput {
        group: &args.group,
        module: args.module.as_deref(),
        n: None,
        q0: None,
        r: Some(r),
        report,
        best_lower,
        best_upper,
    });
    Ok(ExitCode::SUCCESS)
}

fn print_scenario(result: &ScenarioResult) {
    println!("scenario {}", result.scenario);
    for line in result.lines() {
        println!("  {line}");
    }
    let count = |status| result.cases.iter().filter(|c| c.status == status).count();
    println!(
        "  {} passed, {} failed, {} skipped",
        count(CaseStatus::Pass),
        count(CaseStatus::Fail),
        count(CaseStatus::Skipped)
    );
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let names: Vec<&str> = if args.scenario == "all" {
        SCENARIOS.to_vec()
    } else {
        vec![args.scenario.as_str()]
    };
    let gens_dir = args.gens_dir.as_deref();
    let mut results = Vec::new();
    for name in names {
        let r = run_scenario(name, gens_dir).map_err(|e| usage(e.to_string()))?;
        print_scenario(&r);
        results.push(r);
    }
    if let Some(p) = &args.json {
        let body = serde_json::to_string_pretty(&results)
            .expect("scenario results serialize")
            + "\n";
        if p.as_os_str() == "-" {
            print!("{body}");
        } else {
            std::fs::write(p, body)
                .map_err(|e| Failure::Run(format!("writing {}: {e}", p.display())))?;
        }
    }
    let all_ok = results.iter().all(ScenarioResult::all_passed);
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

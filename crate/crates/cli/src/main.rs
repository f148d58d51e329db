//! `conewalk`: enumeration, exact checks, theorem verification, harmonic
//! grids and asymptotics from the command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
//! a usage error.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conewalk::algebra::json::to_json as series_json;
use conewalk::enumerate::{
    boundary_series, count_walks, fmt_count, origin, series_a, series_c, series_q, Region, BOUNDARY_SELECTORS,
};
use conewalk::invariants::{
    build_three_quadrant_pair, check_decoupling, check_funceq, i1j1_from_q, rational_pair, walks, FuncEq, Gf,
    InvariantError, Report, FUNCEQS,
};
use conewalk::models::{StepSet, CATALOG};
use conewalk::solve::{named_series, NAMED};
use conewalk::theorems::{verify_id, TheoremError};
use conewalk_cli::suite;
use conewalk_harmonics::{asymptotics, harmonic_grid, HarmonicError};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "conewalk", version, about = "Small-step walks in the quadrant and the three-quadrant cone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Catalogued step sets.
    Models {
        #[command(subcommand)]
        action: ModelsAction,
    },
    /// Count walks from the origin.
    Enumerate(EnumerateArgs),
    /// Enumerated generating series, a boundary extraction of it, or a named algebraic series.
    Series(SeriesArgs),
    /// Exact checks against enumeration.
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
    /// Discrete harmonic function on a grid.
    Harmonic(HarmonicArgs),
    /// Extrapolated asymptotic constant against the closed form.
    Asymptotics(AsymptoticsArgs),
    /// The full acceptance battery.
    Suite {
        /// Run a single criterion (1 to 11).
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ModelsAction {
    List,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Catalog name or a JSON array of steps such as `[[1,1],[-1,0],[0,-1]]`.
    #[arg(long)]
    model: String,
    #[arg(long, default_value = "three-quadrant")]
    region: String,
    /// Maximal length.
    #[arg(long, default_value_t = 18)]
    n: usize,
    /// Print only the number of walks of length `n` ending at `i,j`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    end: Option<(i32, i32)>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GfKind {
    /// Walks from the origin in the three-quadrant cone.
    C,
    /// Weighted starts in the three-quadrant cone.
    A,
    /// Walks from the origin in the quadrant.
    Q,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, conflicts_with = "name", required_unless_present = "name")]
    model: Option<String>,
    #[arg(long, value_enum, default_value_t = GfKind::C)]
    gf: GfKind,
    /// Boundary extraction.
    #[arg(long)]
    select: Option<String>,
    /// Named algebraic series.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 18)]
    order: i64,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Functional equations against enumerated series.
    Funceq {
        #[arg(long)]
        model: String,
        /// A single equation; every applicable one by default.
        #[arg(long)]
        eq: Option<String>,
        #[arg(long, value_enum, default_value_t = GfKind::C)]
        gf: GfKind,
        #[arg(long, default_value_t = 18)]
        order: i64,
    },
    /// Decoupling functions.
    Decoupling {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 18)]
        order: i64,
    },
    /// Pairs of invariants.
    Invariants {
        #[arg(long)]
        model: String,
        /// A single pair; every available one by default.
        #[arg(long, value_enum)]
        pair: Option<PairKind>,
        #[arg(long, default_value_t = 18)]
        order: i64,
        /// Pole bound in `x` and `y` at 0.
        #[arg(long, default_value_t = 2)]
        pole_bound: i32,
    },
    /// Closed-form identities.
    Theorem {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 18)]
        order: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairKind {
    I0j0,
    I1j1,
    ThreeQuadrant,
}

#[derive(Args)]
struct HarmonicArgs {
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 20)]
    imax: i32,
    /// Decimal digits.
    #[arg(long, default_value_t = 50)]
    prec: u32,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long)]
    model: String,
    /// Endpoint; the total number of walks when absent.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    target: Option<(i32, i32)>,
    #[arg(long, default_value_t = 150)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    prec: u32,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn invariant_failure(e: InvariantError) -> Failure {
    match e {
        InvariantError::NoDecoupling(_)
        | InvariantError::NoRationalPair(_)
        | InvariantError::NotCatalogued(_)
        | InvariantError::NotApplicable { .. }
        | InvariantError::UnknownEquation(_) => usage(e),
        other => runtime(other),
    }
}

fn harmonic_failure(e: HarmonicError) -> Failure {
    match e {
        HarmonicError::UnknownModel(..) | HarmonicError::PrecisionTooLow { .. } => usage(e),
        other => runtime(other),
    }
}

/// A finished report and whether its checks passed.
struct Output {
    body: String,
    passed: bool,
}

impl Output {
    fn json(v: &impl Serialize, passed: bool) -> Self {
        let body = serde_json::to_string_pretty(v).expect("serializable") + "\n";
        Output { body, passed }
    }
}

fn parse_point(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `i,j`, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<i32>().map_err(|_| format!("expected `i,j`, got `{s}`"));
    Ok((p(a)?, p(b)?))
}

fn parse_model(s: &str) -> Result<StepSet, Failure> {
    if s.trim_start().starts_with('[') {
        let steps: Vec<(i32, i32)> = serde_json::from_str(s).map_err(|e| usage(format!("bad step list: {e}")))?;
        StepSet::new(steps).map_err(usage)
    } else {
        StepSet::named(s).map_err(usage)
    }
}

fn parse_region(s: &str) -> Result<Region, Failure> {
    Region::parse(s).ok_or_else(|| usage(format!("unknown region `{s}`; valid: quadrant, three-quadrant, full-plane")))
}

fn gf_series(model: &StepSet, gf: GfKind, order: i64) -> Result<conewalk::algebra::TSeries, Failure> {
    let n = order.max(0) as usize;
    Ok(match gf {
        GfKind::C => series_c(model, n),
        GfKind::A => series_a(model, n),
        GfKind::Q => series_q(model, n),
    })
}

fn models_list(format: Format) -> Output {
    let models: Vec<(String, Vec<(i32, i32)>)> = CATALOG
        .iter()
        .map(|n| (n.to_string(), StepSet::named(n).expect("catalog").steps().collect()))
        .collect();
    match format {
        Format::Csv => {
            let mut body = String::from("name,steps\n");
            for (name, steps) in &models {
                let s: Vec<String> = steps.iter().map(|(a, b)| format!("{a} {b}")).collect();
                body += &format!("{name},{}\n", s.join(";"));
            }
            Output { body, passed: true }
        }
        Format::Json => {
            let v: Vec<Value> = models.iter().map(|(name, steps)| json!({"name": name, "steps": steps})).collect();
            Output::json(&v, true)
        }
    }
}

fn enumerate(a: &EnumerateArgs, format: Format) -> Result<Output, Failure> {
    let model = parse_model(&a.model)?;
    let region = parse_region(&a.region)?;
    let table = count_walks(&model, region, &origin(), a.n);
    if let Some((i, j)) = a.end {
        let c = fmt_count(&table.count(a.n, i, j));
        return Ok(Output { body: format!("{c}\n"), passed: true });
    }
    Ok(match format {
        Format::Csv => Output { body: table.to_csv(), passed: true },
        Format::Json => Output::json(&table.to_json(), true),
    })
}

fn series(a: &SeriesArgs) -> Result<Output, Failure> {
    let s = match (&a.name, &a.model) {
        (Some(name), _) => {
            if !NAMED.contains(&name.as_str()) {
                return Err(usage(format!("unknown series `{name}`; valid: {}", NAMED.join(", "))));
            }
            named_series(name, a.order).map_err(runtime)?
        }
        (None, Some(m)) => {
            let model = parse_model(m)?;
            let s = gf_series(&model, a.gf, a.order)?;
            match &a.select {
                Some(sel) => {
                    if !BOUNDARY_SELECTORS.contains(&sel.as_str()) {
                        return Err(usage(format!(
                            "unknown selector `{sel}`; valid: {}",
                            BOUNDARY_SELECTORS.join(", ")
                        )));
                    }
                    boundary_series(&s, sel).map_err(runtime)?
                }
                None => s,
            }
        }
        (None, None) => return Err(usage("either --model or --name is required")),
    };
    Ok(Output::json(&series_json(&s), true))
}

fn reports(rs: Vec<Report>) -> Output {
    let passed = rs.iter().all(Report::passed);
    Output::json(&rs, passed)
}

fn check(what: &CheckCommand) -> Result<Output, Failure> {
    match what {
        CheckCommand::Funceq { model, eq, gf, order } => {
            let m = parse_model(model)?;
            let g = match gf {
                GfKind::C => Gf::C,
                GfKind::A => Gf::A,
                GfKind::Q => return Err(usage("functional equations take --gf c or --gf a")),
            };
            let eqs = match eq {
                Some(e) => vec![FuncEq::parse(e).map_err(invariant_failure)?],
                None => FuncEq::for_model(&m),
            };
            if eqs.is_empty() {
                return Err(usage(format!("no equation applies; known: {}", FUNCEQS.join(", "))));
            }
            let rs = eqs
                .into_iter()
                .map(|e| check_funceq(&m, e, g, *order).map_err(invariant_failure))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(reports(rs))
        }
        CheckCommand::Decoupling { model, order } => {
            let m = parse_model(model)?;
            let d = check_decoupling(&m, *order).map_err(invariant_failure)?;
            let parts = [
                ("table", d.table_residual.is_zero()),
                ("F from steps", d.f_residual.is_zero()),
                ("G from steps", d.g_residual.is_zero()),
                ("divisible", d.divisible),
                ("classic divisible", d.classic_divisible),
            ];
            let passed = parts.iter().all(|(_, ok)| *ok);
            let v = json!({
                "check": "decoupling",
                "model": m.label(),
                "order": order,
                "status": if passed { "pass" } else { "fail" },
                "parts": parts.iter().map(|(k, ok)| json!({"part": k, "status": if *ok { "pass" } else { "fail" }})).collect::<Vec<_>>(),
            });
            Ok(Output::json(&v, passed))
        }
        CheckCommand::Invariants { model, pair, order, pole_bound } => {
            let m = parse_model(model)?;
            let bound = (*pole_bound, *pole_bound);
            let kinds = match pair {
                Some(k) => vec![*k],
                None => vec![PairKind::I0j0, PairKind::I1j1, PairKind::ThreeQuadrant],
            };
            let mut rs = Vec::new();
            for kind in kinds {
                let built = match kind {
                    PairKind::I0j0 => rational_pair(&m, *order).map(|p| ("i0j0", p)),
                    PairKind::I1j1 => {
                        let comp = m.companion().map_err(usage)?;
                        i1j1_from_q(&m, &series_q(&comp, *order as usize + 2), *order).map(|p| ("i1j1", p))
                    }
                    PairKind::ThreeQuadrant => walks(&m, *order + 1)
                        .and_then(|w| build_three_quadrant_pair(&m, &w.split.u, &w.split.d))
                        .map(|tq| ("three-quadrant", tq.pair)),
                };
                match built {
                    Ok((name, mut p)) => {
                        p.pole_bound = bound;
                        rs.push(p.check(name, *order));
                    }
                    Err(e) if pair.is_none() && matches!(e, InvariantError::NoRationalPair(_) | InvariantError::NoDecoupling(_)) => {}
                    Err(e) => return Err(invariant_failure(e)),
                }
            }
            Ok(reports(rs))
        }
        CheckCommand::Theorem { id, order } => {
            let cs = verify_id(id, *order).map_err(|e| match e {
                TheoremError::UnknownId(_) => usage(e),
                other => runtime(other),
            })?;
            let passed = !cs.is_empty() && cs.iter().all(|c| c.passed());
            Ok(Output::json(&cs, passed))
        }
    }
}

fn harmonic(a: &HarmonicArgs) -> Result<Output, Failure> {
    let g = harmonic_grid(&a.model, a.imax, a.prec).map_err(harmonic_failure)?;
    let passed = g.is_positive() && g.is_symmetric();
    Ok(Output::json(&g.to_json(), passed))
}

fn asymptotic(a: &AsymptoticsArgs) -> Result<Output, Failure> {
    let r = asymptotics(&a.model, a.target, a.n, a.prec).map_err(harmonic_failure)?;
    let target = r.target.map(|(i, j)| vec![i, j]);
    let v = json!({
        "model": r.model,
        "target": target,
        "n": r.n,
        "mu": r.growth.mu,
        "exponent": r.growth.exponent,
        "period": r.growth.period,
        "residue": r.growth.residue,
        "estimate": r.estimate,
        "paper_constant": r.paper_constant,
        "formula": r.formula,
        "rel_err": r.rel_err,
    });
    Ok(Output::json(&v, r.rel_err.is_finite()))
}

fn run_suite(only: Option<usize>) -> Result<Output, Failure> {
    let outcomes = match only {
        Some(k) if (1..=suite::CRITERIA.len()).contains(&k) => vec![suite::run(k)],
        Some(k) => return Err(usage(format!("no criterion {k}; valid: 1 to {}", suite::CRITERIA.len()))),
        None => suite::run_all(),
    };
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let passed = outcomes.iter().all(|o| o.passed);
    Ok(Output::json(&json!({"passed": passed, "criteria": outcomes}), passed))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Models { action: ModelsAction::List } => Ok(models_list(cli.format)),
        Command::Enumerate(a) => enumerate(a, cli.format),
        Command::Series(a) => series(a),
        Command::Check { what } => check(what),
        Command::Harmonic(a) => harmonic(a),
        Command::Asymptotics(a) => asymptotic(a),
        Command::Suite { only } => run_suite(*only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.body).map_err(|e| e.to_string()),
                None => {
                    print!("{}", out.body);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use setval_core::doc::{Document, MapDoc};
use setval_core::economy::{
    check_theorem_4_1, check_theorem_4_2, check_theorem_4_3, theorem_4_1_construction, AbstractEconomy, SelectionChoice,
};
use setval_core::fixedpoint::ProductMap;
use setval_core::golden::{self, GoldenConfig};
use setval_core::maps::{
    check_almost_w_usc, check_dual_w_usc, check_e_uscs, check_eps_chain, check_usc, check_w_usc, CheckReport, Resolution,
    Verdict,
};
use setval_core::radner::{InfoEconomy, PriceSimplex};
use setval_core::scalar::format_point;
use setval_core::{Grid, Scalar};

/// Checks and searches for set-valued maps and abstract economies.
///
/// Exit status: 0 pass or found, 1 property fails, 2 input error, 3 nothing
/// found at this resolution.
#[derive(Parser, Debug)]
#[command(name = "setval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid step per dimension [default: 1/64; 1/8 for information economies]
    #[arg(long, global = true)]
    step: Option<String>,

    /// Comma-separated decreasing ε values [default: 1/2,1/4,1/8,1/16]
    #[arg(long, global = true)]
    eps_chain: Option<String>,

    /// Comparison tolerance [default: 1e-9]
    #[arg(long, global = true)]
    tol: Option<String>,

    /// Neighbor radius of the continuity checks [default: one grid step]
    #[arg(long, global = true)]
    delta: Option<String>,

    /// Output file; `text` or `records` select the format instead
    #[arg(long, global = true)]
    out: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Compute in exact rational arithmetic instead of f64
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a continuity property of a map or pair document
    CheckMap {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Property::Usc)]
        property: Property,
    },
    /// Run the nested fixed-point scheme on a map or economy document
    FindFixedPoints { input: PathBuf },
    /// Scan a grid for equilibria of an economy document
    FindEquilibria { input: PathBuf },
    /// Check the hypotheses of an existence theorem on an economy document
    CheckHypotheses {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Theorem::First)]
        theorem: Theorem,
    },
    /// Build the abstract economy of an information economy and check it
    BuildRadner { input: PathBuf },
    /// Run every built-in example and property suite
    ReproducePaper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Usc,
    WUsc,
    AlmostWUsc,
    Dual,
    EUscs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    #[value(name = "4.1")]
    First,
    #[value(name = "4.2")]
    Second,
    #[value(name = "4.3")]
    Third,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    NoResult,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::NoResult => 3,
        }
    }

    fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Unverified => Status::NoResult,
        }
    }
}

/// Anything that makes the run impossible; always exit 2.
#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

struct Output {
    status: Status,
    text: String,
    records: Vec<Json>,
}

/// Validated overrides, in the scalar of the run.
struct RunConfig<T> {
    step: Option<T>,
    eps: Vec<T>,
    tol: T,
    delta: Option<T>,
    scalar: &'static str,
}

impl<T: Scalar> RunConfig<T> {
    fn from_cli(cli: &Cli) -> Result<Self, InputError> {
        let step = cli.step.as_deref().map(|s| positive::<T>("--step", s)).transpose()?;
        let eps = match &cli.eps_chain {
            Some(text) => text.split(',').map(|s| positive::<T>("--eps-chain", s)).collect::<Result<Vec<_>, _>>()?,
            None => vec![T::ratio(1, 2), T::ratio(1, 4), T::ratio(1, 8), T::ratio(1, 16)],
        };
        check_eps_chain(&eps)?;
        let tol = match cli.tol.as_deref() {
            Some(s) => {
                let v = scalar::<T>("--tol", s)?;
                if v < T::zero() {
                    return Err(InputError(format!("--tol must be nonnegative, got {s}")));
                }
                v
            }
            None => T::ratio(1, 1_000_000_000),
        };
        let delta = cli.delta.as_deref().map(|s| positive::<T>("--delta", s)).transpose()?;
        Ok(RunConfig { step, eps, tol, delta, scalar: if cli.exact { "exact" } else { "f64" } })
    }

    fn step_or(&self, default: T) -> T {
        self.step.clone().unwrap_or(default)
    }

    fn resolution(&self, grid: Grid<T>) -> Result<Resolution<T>, InputError> {
        let delta = self.delta.clone().unwrap_or_else(|| grid.step().clone());
        Ok(Resolution::new(grid, delta, self.tol.clone())?)
    }

    fn header(&self, command: &str, input: Option<&Path>, step: Option<&T>) -> Json {
        json!({
            "command": command,
            "input": input.map(|p| p.display().to_string()),
            "scalar": self.scalar,
            "step": step.map(|s| s.to_string()),
            "eps_chain": self.eps.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "tol": self.tol.to_string(),
            "delta": self.delta.as_ref().map(|d| d.to_string()),
        })
    }
}

fn scalar<T: Scalar>(flag: &str, text: &str) -> Result<T, InputError> {
    T::parse_scalar(text).ok_or_else(|| InputError(format!("{flag}: cannot read {text:?} as a number")))
}

fn positive<T: Scalar>(flag: &str, text: &str) -> Result<T, InputError> {
    let v = scalar::<T>(flag, text)?;
    if v <= T::zero() {
        return Err(InputError(format!("{flag} must be positive, got {text}")));
    }
    Ok(v)
}

fn load<T: Scalar>(path: &Path) -> Result<Document<T>, InputError> {
    Document::load(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn wrong_kind<T: Scalar>(doc: &Document<T>, wanted: &str) -> InputError {
    InputError(format!("expected a {wanted} document, found kind {:?}", doc.kind()))
}

fn header_text(header: &Json) -> String {
    let mut out = String::from("#");
    if let Json::Object(map) = header {
        for (k, v) in map {
            if !v.is_null() {
                let v = match v {
                    Json::String(s) => s.clone(),
                    other => other.to_string(),
                };
                let _ = write!(out, " {k}={v}");
            }
        }
    }
    out.push('\n');
    out
}

fn report_output<T: Scalar>(header: Json, report: &CheckReport<T>) -> Output {
    Output {
        status: Status::from_verdict(report.verdict),
        text: header_text(&header) + &report.to_string(),
        records: vec![header, report.to_record()],
    }
}

fn check_map<T: Scalar>(cfg: &RunConfig<T>, input: &Path, property: Property) -> Result<Output, InputError> {
    let doc = load::<T>(input)?;
    let step = cfg.step_or(T::ratio(1, 64));
    let header = cfg.header("check-map", Some(input), Some(&step));
    let report = match (property, &doc) {
        (Property::Dual, Document::Pair(p)) => {
            let res = cfg.resolution(Grid::covering(p.t1.domain(), step)?)?;
            check_dual_w_usc(&p.t1, &p.t2, &p.target, &cfg.eps, &res)?
        }
        (Property::Dual, other) => return Err(wrong_kind(other, "pair")),
        (_, Document::Map(m)) => check_single(cfg, m, property, step)?,
        (_, other) => return Err(wrong_kind(other, "map")),
    };
    Ok(report_output(header, &report))
}

fn check_single<T: Scalar>(cfg: &RunConfig<T>, m: &MapDoc<T>, property: Property, step: T) -> Result<CheckReport<T>, InputError> {
    let res = cfg.resolution(Grid::covering(m.map.domain(), step)?)?;
    let target = || m.target.as_ref().ok_or_else(|| InputError(format!("{}: the map document has no \"d\"", m.name)));
    Ok(match property {
        Property::Usc => check_usc(&m.map, &res)?,
        Property::WUsc => check_w_usc(&m.map, target()?, &cfg.eps, &res)?,
        Property::AlmostWUsc => check_almost_w_usc(&m.map, target()?, &cfg.eps, &res)?,
        Property::EUscs => {
            let candidate = m
                .candidate
                .as_ref()
                .ok_or_else(|| InputError(format!("{}: the map document has no \"candidate\"", m.name)))?;
            let region = m.region.clone().unwrap_or_else(|| m.map.domain().clone());
            let diagonal = m.diagonal.clone().unwrap_or_else(|| (0..m.map.codomain_dim()).collect());
            let mut top = CheckReport::new("e-uscs chain");
            for e in &cfg.eps {
                let mut c = check_e_uscs(&m.map, &region, candidate, e, &res, &diagonal)?;
                c.property = format!("e-uscs({e})");
                top.add_child(c);
            }
            top.verdict_from_children(&["e-uscs("]);
            top
        }
        Property::Dual => unreachable!("pairs are handled by the caller"),
    })
}

fn find_fixed_points<T: Scalar>(cfg: &RunConfig<T>, input: &Path) -> Result<Output, InputError> {
    let doc = load::<T>(input)?;
    let s = match &doc {
        Document::Map(m) => {
            let d = m.target.clone().ok_or_else(|| InputError(format!("{}: the map document has no \"d\"", m.name)))?;
            ProductMap::new(vec![m.map.clone()], vec![d])?
        }
        Document::Economy(e) => theorem_4_1_construction(&e.economy)?,
        other => return Err(wrong_kind(other, "map or economy")),
    };
    let step = cfg.step_or(T::ratio(1, 64));
    let header = cfg.header("find-fixed-points", Some(input), Some(&step));
    let grid = Grid::covering(&s.target(), step)?;
    let chain = s.intersect_qv_chain(&cfg.eps, &grid)?;
    let status = if chain.certified().next().is_some() { Status::Pass } else { Status::NoResult };
    Ok(Output { status, text: header_text(&header) + &chain.to_string(), records: vec![header, chain.to_record()] })
}

fn find_equilibria<T: Scalar>(cfg: &RunConfig<T>, input: &Path) -> Result<Output, InputError> {
    match load::<T>(input)? {
        Document::Economy(e) => {
            let step = cfg.step_or(T::ratio(1, 64));
            let header = cfg.header("find-equilibria", Some(input), Some(&step));
            economy_equilibria(&e.economy, header, step)
        }
        Document::Radner(e) => {
            let step = cfg.step_or(T::ratio(1, 8));
            let header = cfg.header("find-equilibria", Some(input), Some(&step));
            let simplex = price_simplex(&e, &step)?;
            let g = e.to_abstract_economy();
            let found = g.search(&step, &simplex)?;
            let mut text = header_text(&header);
            let _ = writeln!(text, "{} equilibria among {} points ({})", found.certificates.len(), found.scanned, found.grid);
            let mut records = vec![header];
            for c in &found.certificates {
                let _ = writeln!(text, "{c}");
                records.push(c.to_record());
            }
            let status = if found.certificates.is_empty() { Status::NoResult } else { Status::Pass };
            Ok(Output { status, text, records })
        }
        other => Err(wrong_kind(&other, "economy or radner")),
    }
}

fn economy_equilibria<T: Scalar>(e: &AbstractEconomy<T>, header: Json, step: T) -> Result<Output, InputError> {
    let grid = Grid::covering(&e.target(), step)?;
    let found = e.search_equilibria(&grid)?;
    let mut text = header_text(&header);
    let _ = writeln!(text, "{} equilibria among {} points ({})", found.certificates.len(), found.scanned, found.grid);
    let mut records = vec![header];
    for c in &found.certificates {
        text += &c.to_string();
        records.push(c.to_record());
    }
    let status = if found.certificates.is_empty() { Status::NoResult } else { Status::Pass };
    Ok(Output { status, text, records })
}

fn check_hypotheses<T: Scalar>(cfg: &RunConfig<T>, input: &Path, theorem: Theorem) -> Result<Output, InputError> {
    let doc = load::<T>(input)?;
    let Document::Economy(e) = &doc else { return Err(wrong_kind(&doc, "economy")) };
    let step = cfg.step_or(T::ratio(1, 64));
    let header = cfg.header("check-hypotheses", Some(input), Some(&step));
    let res = cfg.resolution(Grid::covering(e.economy.domain(), step)?)?;
    let report = match theorem {
        Theorem::First => check_theorem_4_1(&e.economy, &cfg.eps, &res)?,
        Theorem::Second => check_theorem_4_2(&e.economy, &cfg.eps, &res)?,
        Theorem::Third => {
            let heuristic: Vec<SelectionChoice<T>> = e.economy.agents().iter().map(|_| SelectionChoice::Heuristic).collect();
            check_theorem_4_3(&e.economy, &cfg.eps, &heuristic, &res)?
        }
    };
    Ok(report_output(header, &report))
}

/// Prices on the simplex at the same resolution as the allocations.
fn price_simplex<T: Scalar>(e: &InfoEconomy<T>, step: &T) -> Result<PriceSimplex, InputError> {
    let inverse = T::one() / step.clone();
    let denom = inverse.approx().round();
    if denom < 1.0 || T::from_f64(denom) != Some(inverse) {
        return Err(InputError(format!("--step {step} must be 1/k for an integer k to grid the price simplex")));
    }
    Ok(PriceSimplex::new(e.goods() * (e.states() + 1), denom as usize)?)
}

fn build_radner<T: Scalar>(cfg: &RunConfig<T>, input: &Path) -> Result<Output, InputError> {
    let doc = load::<T>(input)?;
    let Document::Radner(e) = &doc else { return Err(wrong_kind(&doc, "radner")) };
    let step = cfg.step_or(T::ratio(1, 8));
    let header = cfg.header("build-radner", Some(input), Some(&step));
    let simplex = price_simplex(e, &step)?;
    let g = e.to_abstract_economy();

    let mut text = header_text(&header);
    let _ = writeln!(
        text,
        "{}: {} agents, {} states, {} goods, bundles in [0, {}]^{}, {} players with the price player",
        e.name,
        e.agents().len(),
        e.states(),
        e.goods(),
        e.truncation(),
        e.dim(),
        e.agents().len() + 1
    );
    let inclusion = g.check_inclusion(&step, &simplex)?;
    text += &inclusion.to_string();
    let found = g.search(&step, &simplex)?;
    let _ = writeln!(text, "{} equilibria among {} points ({})", found.certificates.len(), found.scanned, found.grid);
    let mut records = vec![header, inclusion.to_record()];
    let mut cleared = true;
    for c in &found.certificates {
        let mc = g.verify_market_clearing(c, &cfg.tol, &step)?;
        cleared &= mc.clause1;
        let _ = write!(text, "{c}");
        let _ = writeln!(text, "  market clearing: excess {} clause (1) {}", format_point(&mc.excess), if mc.clause1 { "holds" } else { "FAILS" });
        let mut rec = c.to_record();
        rec["market_clearing"] = mc.to_record();
        records.push(rec);
    }
    if found.certificates.is_empty() {
        text += "no equilibrium at this resolution; the inclusion check stands on its own\n";
    }
    let status = if inclusion.verdict.is_pass() && cleared { Status::Pass } else { Status::Fail };
    Ok(Output { status, text, records })
}

fn reproduce_paper<T: Scalar>(cfg: &RunConfig<T>) -> Result<Output, InputError> {
    let mut golden_cfg = GoldenConfig::<T>::standard();
    if let Some(step) = &cfg.step {
        golden_cfg = golden_cfg.with_step(step.clone())?;
    }
    golden_cfg.tol = cfg.tol.clone();
    let header = cfg.header("reproduce-paper", None, Some(&golden_cfg.step));
    let report = golden::run(&golden_cfg)?;
    let status = if report.all_pass() { Status::Pass } else { Status::Fail };
    let mut records = vec![header.clone()];
    records.extend(report.to_records());
    Ok(Output { status, text: header_text(&header) + &report.to_string(), records })
}

fn execute<T: Scalar>(cli: &Cli) -> Result<Output, InputError> {
    let cfg = RunConfig::<T>::from_cli(cli)?;
    match &cli.command {
        Command::CheckMap { input, property } => check_map(&cfg, input, *property),
        Command::FindFixedPoints { input } => find_fixed_points(&cfg, input),
        Command::FindEquilibria { input } => find_equilibria(&cfg, input),
        Command::CheckHypotheses { input, theorem } => check_hypotheses(&cfg, input, *theorem),
        Command::BuildRadner { input } => build_radner(&cfg, input),
        Command::ReproducePaper => reproduce_paper(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // `--out records` and `--out text` pick the format; anything else is a path
    let (format, path) = match cli.out.as_deref() {
        Some("records") => (Format::Records, None),
        Some("text") => (Format::Text, None),
        Some(p) => (cli.format, Some(PathBuf::from(p))),
        None => (cli.format, None),
    };
    let result = if cli.exact { execute::<setval_core::BigQ>(&cli) } else { execute::<f64>(&cli) };
    let out = match result {
        Ok(out) => out,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let body = match format {
        Format::Text => out.text,
        Format::Records => out.records.iter().map(|r| r.to_string() + "\n").collect(),
    };
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, body) {
                eprintln!("error: writing {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => {
            // a closed pipe downstream (`| head`) is not an error
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(body.as_bytes()).and_then(|()| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
        }
    }
    ExitCode::from(out.status.code())
}

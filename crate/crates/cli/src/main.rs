use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kappalab_core::numeric::{parse_rational, to_f64};
use kappalab_core::refute::{
    candidate_by_name, doublearrow_not_kappa, g_family_not_extendable, niemytzki_not_stratifiable, refute_sorgenfrey_a,
    reverify, RefutationResult, SorgenfreyBudget,
};
use kappalab_core::scenario::{run_scenario, Scenario};
use kappalab_core::{Error, FamilyLabel, Mode, ParamExpr, Point, Rational, RegularOpenSet, Scalar, SpaceId, Stratification};

const EXIT_SCHEMA: u8 = 2;
const EXIT_UNEXPECTED: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "kappalab", version, about = "Stratification and kappa-metric checks on three non-metrizable spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and compare verdicts with its expectations.
    Check(CheckArgs),
    /// Run one of the counterexample searches.
    #[command(subcommand)]
    Refute(RefuteCommand),
    /// Write `x,y,f` rows of one family's values over a grid.
    SampleGrid(GridArgs),
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the chain depth of the sample plan.
    #[arg(long)]
    depth: Option<u64>,
    /// Overrides the approximation grid depth of the sample plan.
    #[arg(long)]
    grid_m: Option<u32>,
    /// Directory for `<name>.json` and `<name>.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum RefuteCommand {
    SorgenfreyA {
        #[arg(long, default_value = "characteristic")]
        candidate: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        /// Grid points per unit interval are `2^grid_m`.
        #[arg(long)]
        grid_m: Option<u32>,
        /// Largest `n` tried in the Baire search.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    DoublearrowD {
        /// JSON parameter expression for `x_k`.
        #[arg(long, default_value = r#"{"base":"1/10","coef":"-1/10","shift":1}"#)]
        x_k: String,
        #[arg(long, default_value = "1/20")]
        p: String,
        #[arg(long, default_value = "1/15")]
        q: String,
        #[arg(long, default_value_t = 64)]
        depth: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    NiemytzkiStrat {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        grid_m: u64,
        #[arg(long, default_value_t = 50)]
        depth: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    GExtend {
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value = "NiemytzkiKappa")]
    family: String,
    /// Set as JSON, `{"space": ..., "components": [...]}`.
    #[arg(long)]
    set: String,
    /// `x0,x1,y0,y1`; the y range is ignored on the interval spaces.
    #[arg(long, allow_hyphen_values = true)]
    bbox: String,
    #[arg(long, default_value_t = 100)]
    nx: u32,
    #[arg(long, default_value_t = 100)]
    ny: u32,
    #[arg(long)]
    budget: Option<u32>,
    #[arg(long)]
    out: PathBuf,
}

fn env_mode() -> Result<Option<Mode>, String> {
    match std::env::var("KAPPALAB_MODE") {
        Err(_) => Ok(None),
        Ok(v) => match v.as_str() {
            "exact" => Ok(Some(Mode::Exact)),
            "float" => Ok(Some(Mode::Float)),
            "" => Ok(None),
            other => Err(format!("KAPPALAB_MODE must be exact or float, got {other:?}")),
        },
    }
}

fn write_reports(dir: &Path, name: &str, json: &str, text: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{name}.json")), json)?;
    std::fs::write(dir.join(format!("{name}.txt")), text)
}

fn check(args: CheckArgs) -> u8 {
    let text = match std::fs::read_to_string(&args.scenario) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.scenario.display());
            return EXIT_SCHEMA;
        }
    };
    let mut sc = match Scenario::from_json(&text) {
        Ok(sc) => sc,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_SCHEMA;
        }
    };
    if let Some(seed) = args.seed {
        sc.plan.seed = seed;
    }
    if let Some(d) = args.depth {
        sc.plan.chain_depth = d;
    }
    if let Some(m) = args.grid_m {
        sc.plan.grid_depth = m;
    }
    match env_mode() {
        Ok(Some(m)) => sc.mode = Some(m),
        Ok(None) => {}
        Err(e) => {
            eprintln!("{e}");
            return EXIT_SCHEMA;
        }
    }
    let report = match run_scenario(&sc) {
        Ok(r) => r,
        Err(e @ Error::Schema(_)) => {
            eprintln!("{e}");
            return EXIT_SCHEMA;
        }
        Err(e) => {
            eprintln!("internal failure: {e}");
            return EXIT_INTERNAL;
        }
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let txt = report.to_text();
    let mut targets = Vec::new();
    if let Some(dir) = &args.out {
        targets.push((dir.join(format!("{}.json", sc.name)), json.as_str()));
        targets.push((dir.join(format!("{}.txt", sc.name)), txt.as_str()));
    } else if let Some(o) = &sc.outputs {
        if let Some(p) = &o.json {
            targets.push((PathBuf::from(p), json.as_str()));
        }
        if let Some(p) = &o.text {
            targets.push((PathBuf::from(p), txt.as_str()));
        }
    }
    if targets.is_empty() {
        print!("{txt}");
    }
    for (path, body) in targets {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Err(e) = std::fs::write(&path, body) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_INTERNAL;
        }
    }
    if report.all_matched {
        0
    } else {
        for item in report.items.iter().filter(|i| !i.matched) {
            eprintln!("unexpected verdict for {}: expected {:?}, observed {:?}", item.id, item.expected, item.observed);
        }
        EXIT_UNEXPECTED
    }
}

fn parse_rat(name: &str, s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("--{name}: {e}"))
}

fn refute(cmd: RefuteCommand) -> u8 {
    let (result, out) = match run_refuter(cmd) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    if result.is_refuted() {
        match reverify(&result) {
            Ok(true) => {}
            Ok(false) => {
                eprintln!("bundle for {} does not re-verify", result.claim);
                return EXIT_INTERNAL;
            }
            Err(e) => {
                eprintln!("internal failure: {e}");
                return EXIT_INTERNAL;
            }
        }
    }
    let json = serde_json::to_string_pretty(&result).expect("bundle serializes") + "\n";
    let txt = result.to_text();
    match out {
        Some(dir) => {
            if let Err(e) = write_reports(&dir, &result.claim, &json, &txt) {
                eprintln!("cannot write to {}: {e}", dir.display());
                return EXIT_INTERNAL;
            }
        }
        None => print!("{json}"),
    }
    0
}

type RefuterRun = Result<(RefutationResult, Option<PathBuf>), (u8, String)>;

fn run_refuter(cmd: RefuteCommand) -> RefuterRun {
    let schema = |m: String| (EXIT_SCHEMA, m);
    let internal = |e: Error| match e {
        Error::Precondition(_) | Error::Schema(_) | Error::ParseRational(_) => (EXIT_SCHEMA, e.to_string()),
        e => (EXIT_INTERNAL, format!("internal failure: {e}")),
    };
    match cmd {
        RefuteCommand::SorgenfreyA { candidate, a, grid_m, depth, out } => {
            let c = candidate_by_name(&candidate).ok_or_else(|| schema(format!("unknown candidate {candidate:?}")))?;
            let a = parse_rat("a", &a).map_err(schema)?;
            let mut budget = SorgenfreyBudget::default();
            if let Some(g) = grid_m {
                budget.grid_bits = g;
            }
            if let Some(d) = depth {
                budget.max_n = d;
            }
            Ok((refute_sorgenfrey_a(c.as_ref(), &a, budget).map_err(internal)?, out))
        }
        RefuteCommand::DoublearrowD { x_k, p, q, depth, out } => {
            let x: ParamExpr = serde_json::from_str(&x_k).map_err(|e| schema(format!("--x-k: {e}")))?;
            let p = parse_rat("p", &p).map_err(schema)?;
            let q = parse_rat("q", &q).map_err(schema)?;
            Ok((doublearrow_not_kappa(&x, &p, &q, depth).map_err(internal)?, out))
        }
        RefuteCommand::NiemytzkiStrat { a, n, grid_m, depth, out } => {
            let a = match (env_mode().map_err(schema)?, parse_rational(&a)) {
                (Some(Mode::Float), Ok(q)) => Scalar::Float(to_f64(&q)),
                (_, Ok(q)) => Scalar::Exact(q),
                (_, Err(_)) => Scalar::Float(a.parse::<f64>().map_err(|e| schema(format!("--a: {e}")))?),
            };
            Ok((niemytzki_not_stratifiable(a, n, grid_m, depth).map_err(internal)?, out))
        }
        RefuteCommand::GExtend { n, out } => Ok((g_family_not_extendable(n).map_err(internal)?, out)),
    }
}

fn grid_points(space: SpaceId, bbox: &[Rational; 4], nx: u32, ny: u32) -> Result<Vec<Point>, Error> {
    let [x0, x1, y0, y1] = bbox;
    if nx == 0 || x1 <= x0 {
        return Ok(Vec::new());
    }
    let xs: Vec<Rational> = (0..nx).map(|i| x0 + (x1 - x0) * Rational::from_integer(i.into()) / Rational::from_integer(nx.into())).collect();
    match space {
        SpaceId::Sorgenfrey => Ok(xs.into_iter().map(Point::sorgenfrey).collect()),
        SpaceId::DoubleArrow => {
            let mut pts = Vec::new();
            for x in xs {
                for side in 0..2 {
                    pts.push(Point::double_arrow(x.clone(), side)?);
                }
            }
            Ok(pts)
        }
        SpaceId::Niemytzki => {
            if ny == 0 || y1 <= y0 {
                return Ok(Vec::new());
            }
            let mut pts = Vec::new();
            for j in 0..ny {
                let y = y0 + (y1 - y0) * Rational::from_integer(j.into()) / Rational::from_integer(ny.into());
                if y < Rational::from_integer(0.into()) {
                    continue;
                }
                for x in &xs {
                    pts.push(Point::niemytzki_exact(x.clone(), y.clone())?);
                }
            }
            Ok(pts)
        }
    }
}

fn coords(p: &Point) -> (f64, f64) {
    match p {
        Point::Sorgenfrey { x } => (to_f64(x), 0.0),
        Point::DoubleArrow { t, side } => (to_f64(t), f64::from(*side)),
        _ => p.niemytzki_f64().unwrap_or((f64::NAN, f64::NAN)),
    }
}

fn sample_grid(args: GridArgs) -> u8 {
    let run = || -> Result<String, (u8, String)> {
        let schema = |m: String| (EXIT_SCHEMA, m);
        let label: FamilyLabel =
            serde_json::from_value(serde_json::Value::String(args.family.clone())).map_err(|e| schema(format!("--family: {e}")))?;
        let u: RegularOpenSet = serde_json::from_str(&args.set).map_err(|e| schema(format!("--set: {e}")))?;
        let parts: Vec<&str> = args.bbox.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(schema("--bbox wants x0,x1,y0,y1".into()));
        }
        let mut bbox: [Rational; 4] = Default::default();
        for (slot, s) in bbox.iter_mut().zip(&parts) {
            *slot = parse_rat("bbox", s).map_err(schema)?;
        }
        let mut s = Stratification::named(label).map_err(|e| schema(e.to_string()))?;
        if let Some(m) = env_mode().map_err(schema)? {
            s = s.with_mode(m);
        }
        if let Some(b) = args.budget {
            s = s.with_union_budget(b);
        }
        let pts = grid_points(u.space(), &bbox, args.nx, args.ny).map_err(|e| schema(e.to_string()))?;
        let mut csv = String::from("x,y,f\n");
        for p in &pts {
            let v = s.eval(&u, p).map_err(|e| (EXIT_INTERNAL, format!("internal failure: {e}")))?;
            let (x, y) = coords(p);
            let _ = writeln!(csv, "{x:.16e},{y:.16e},{:.16e}", v.to_f64());
        }
        Ok(csv)
    };
    match run() {
        Ok(csv) => match std::fs::write(&args.out, csv) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("cannot write {}: {e}", args.out.display());
                EXIT_INTERNAL
            }
        },
        Err((code, msg)) => {
            eprintln!("{msg}");
            code
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = env_mode() {
        eprintln!("{e}");
        return ExitCode::from(EXIT_SCHEMA);
    }
    ExitCode::from(match cli.command {
        Command::Check(a) => check(a),
        Command::Refute(r) => refute(r),
        Command::SampleGrid(g) => sample_grid(g),
    })
}

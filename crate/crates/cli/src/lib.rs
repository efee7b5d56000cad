//! Command-line front end: argument parsing, configuration and JSON reports.

pub mod config;

use std::ffi::OsString;
use std::fmt::Debug;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itm_certificates::{
    ab_domination, cex_sequence, host_telescope_inequality, loop_sum_check, lyapunov_report, path_weight,
    state_machine_run, trace_json_lines, CertError, EdgeWord, Version,
};
use itm_numkernel::{parse_rational, HighFloat, RBig, Scalar};
use itm_renorm::{k_sequence_with_radius, raster_omega, KSeqSpec, RasterConfig, RasterMode, RenormError, TypeStatus};
use itm_sadic::{lr_verdict, rho_prefix};
use itm_sim::{Params, SimError};
use itm_spectral::{
    host_sums, line_search, rational_descent, stable_dir_eventually_periodic, stable_direction, wm_verdict,
    SpectralError, StableDir,
};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{parse_grid, Config, ConfigError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "itm-lab", version, about = "Experiments on a family of interval translation maps")]
pub struct Cli {
    /// File of key=value lines (precision, guard, depth, horizon, threads, out).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// Initial error radius 2^-guard for float classification.
    #[arg(long, global = true)]
    pub guard: Option<usize>,
    /// Worker threads for render and line search
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Leave timings out of the report.
    #[arg(long, global = true)]
    pub no_timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Iterate the renormalization map on (alpha, beta).
    Classify(ClassifyArgs),
    /// Render the depth-n approximation of the infinite-type set as PGM.
    Render(RenderArgs),
    /// Symbolic, spectral and certificate analyses of a k-sequence.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// `p/q` or decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Treat decimal inputs as exact rationals instead of floats.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Region,
    Center,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// WxH
    #[arg(long, default_value = "100x100")]
    pub grid: String,
    #[arg(long)]
    pub depth: Option<usize>,
    /// PGM output path
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Region)]
    pub mode: ModeArg,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// `const:k`, `k1,k2,…`, `prefix+(period)` or `gen:…`.
    #[arg(long)]
    pub kseq: Option<String>,
    #[command(subcommand)]
    pub what: Analysis,
}

#[derive(Subcommand, Debug)]
pub enum Analysis {
    /// Linear recurrence verdict.
    Lr,
    /// Stable direction of the B-cocycle.
    Stable {
        #[arg(long, default_value = "1e-30")]
        diam: String,
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
    },
    /// Eigenvalue lines through the stable point.
    Lines {
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long, default_value = "1e-25")]
        tol: String,
        #[arg(long, default_value = "1e-30")]
        diam: String,
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
    },
    /// Host sums for ξ with the telescoping check.
    Host {
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Finite-time Lyapunov exponents.
    Lyap {
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
    /// Matrix-shape state machine over k_m..k_n.
    States {
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Print the trace as JSON lines instead of a report.
        #[arg(long)]
        jsonl: bool,
    },
    /// Prefix of the limit word.
    Rho {
        #[arg(long, default_value_t = 200)]
        len: usize,
    },
    /// Descent of a rational simplex point (no --kseq needed).
    Descend {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Weak-mixing verdict.
    Wm {
        #[arg(long, default_value_t = 50)]
        bound: i64,
        #[arg(long, default_value = "1e-25")]
        tol: String,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Exact comparison of the A- and B-products.
    Dominate {
        #[arg(long, default_value_t = 60)]
        n_max: usize,
    },
    /// Loop-sum identity over positions 1..2n.
    Loop {
        #[arg(long)]
        n: usize,
    },
    /// Weight of an edge word such as `bcdd` or `dd@3`.
    Weight {
        #[arg(long)]
        word: String,
    },
    /// Block sequence built against a fixed ξ (no --kseq needed).
    Cex {
        #[arg(long, default_value_t = 5)]
        blocks: usize,
        #[arg(long, default_value = "0.6180339887498948482045868343656381177203091798057628621354486227")]
        xi: String,
    },
}

/// What a run produced: the exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: i32,
    pub module: &'static str,
    pub kind: String,
    pub message: String,
}

impl Failure {
    fn new(code: i32, module: &'static str, kind: impl Into<String>, message: impl ToString) -> Self {
        Failure { code, module, kind: kind.into(), message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Failure::new(EXIT_USAGE, "cli", "Usage", message)
    }
}

/// Variant name of an error enum, taken from its Debug form.
fn kind_of<E: Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !(c.is_alphanumeric() || c == '_')).next().unwrap_or("").to_string()
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::new(EXIT_USAGE, "cli", kind_of(&e), &e)
    }
}

impl From<CertError> for Failure {
    fn from(e: CertError) -> Self {
        let code = match e {
            CertError::StateViolation { .. } => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        Failure::new(code, "certificates", kind_of(&e), &e)
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        Failure::new(EXIT_USAGE, "spectral", kind_of(&e), &e)
    }
}

impl From<itm_sadic::SadicError> for Failure {
    fn from(e: itm_sadic::SadicError) -> Self {
        Failure::new(EXIT_USAGE, "sadic", kind_of(&e), &e)
    }
}

impl From<itm_renorm::KSeqError> for Failure {
    fn from(e: itm_renorm::KSeqError) -> Self {
        Failure::new(EXIT_USAGE, "renorm", kind_of(&e), &e)
    }
}

impl From<RenormError> for Failure {
    fn from(e: RenormError) -> Self {
        let code = match e {
            RenormError::Sim(SimError::PrecisionExhausted { .. }) | RenormError::NonContracting { .. } => EXIT_PRECISION,
            RenormError::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        let kind = match &e {
            RenormError::Sim(s) => kind_of(s),
            RenormError::Num(n) => kind_of(n),
            other => kind_of(other),
        };
        Failure::new(code, "renorm", kind, &e)
    }
}

impl From<itm_numkernel::NumError> for Failure {
    fn from(e: itm_numkernel::NumError) -> Self {
        Failure::new(EXIT_USAGE, "numkernel", kind_of(&e), &e)
    }
}

/// A finished command: results plus the exit code they imply.
struct Done {
    inputs: Value,
    results: Value,
    code: i32,
    /// Raw text replacing the JSON report on stdout.
    raw: Option<String>,
}

impl Done {
    fn ok(inputs: Value, results: Value) -> Self {
        Done { inputs, results, code: EXIT_OK, raw: None }
    }

    fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    inputs: Value,
    results: Value,
    timings: Option<Value>,
    tool_version: &'static str,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

pub fn resolve_config(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_USAGE, "cli", "ConfigRead", format!("{}: {e}", path.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    if let Some(p) = cli.precision {
        cfg.precision = p;
    }
    if cli.guard.is_some() {
        cfg.guard = cli.guard;
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn rational(name: &str, s: &str) -> Result<RBig, Failure> {
    parse_rational(s).map_err(|e| Failure::new(EXIT_USAGE, "numkernel", kind_of(&e), format!("--{name}: {e}")))
}

fn positive_float(name: &str, s: &str, prec: usize) -> Result<HighFloat, Failure> {
    let q = rational(name, s)?;
    if q <= RBig::ZERO {
        return Err(Failure::usage(format!("--{name} must be positive")));
    }
    Ok(HighFloat::from_rational(&q, prec))
}

fn is_exact_literal(s: &str) -> bool {
    let s = s.trim();
    s.contains('/') || s.trim_start_matches(['-', '+']).bytes().all(|b| b.is_ascii_digit())
}

fn classify(args: &ClassifyArgs, cfg: &Config) -> Result<Done, Failure> {
    let depth = args.depth.unwrap_or(cfg.depth);
    if depth == 0 {
        return Err(Failure::usage("--depth must be positive"));
    }
    let (alpha, beta) = (rational("alpha", &args.alpha)?, rational("beta", &args.beta)?);
    if alpha <= RBig::ZERO || alpha > RBig::ONE {
        return Err(Failure::new(EXIT_USAGE, "itmsim", "AlphaOutOfRange", SimError::AlphaOutOfRange(args.alpha.clone())));
    }
    let exact_params = Params::new(alpha.clone(), beta.clone());
    if !exact_params.in_u() {
        return Err(Failure::new(EXIT_USAGE, "itmsim", "OutsideU", "(alpha, beta) must satisfy 0 < beta <= alpha <= 1"));
    }
    let exact = args.exact || (is_exact_literal(&args.alpha) && is_exact_literal(&args.beta));
    let verdict = if exact {
        k_sequence_with_radius(&exact_params, depth, None)
    } else {
        let p = Params::new(HighFloat::from_rational(&alpha, cfg.precision), HighFloat::from_rational(&beta, cfg.precision));
        k_sequence_with_radius(&p, depth, Some(HighFloat::pow2(-(cfg.guard_bits() as isize), 64)))
    };
    let code = match verdict.status {
        TypeStatus::PrecisionExhausted(_) => EXIT_PRECISION,
        _ => EXIT_OK,
    };
    let inputs = json!({
        "alpha": args.alpha, "beta": args.beta, "depth": depth, "arithmetic": if exact { "exact" } else { "float" },
        "precision_bits": if exact { None } else { Some(cfg.precision) },
        "guard": if exact { None } else { Some(cfg.guard_bits()) },
    });
    Ok(Done::ok(inputs, to_value(&verdict)).with_code(code))
}

fn render(args: &RenderArgs, cfg: &Config) -> Result<Done, Failure> {
    let (width, height) = parse_grid(&args.grid)?;
    let depth = args.depth.unwrap_or(12);
    if depth == 0 {
        return Err(Failure::usage("--depth must be positive"));
    }
    let out = args.out.clone().or_else(|| cfg.out.clone());
    let mode = match args.mode {
        ModeArg::Region => RasterMode::Region,
        ModeArg::Center => RasterMode::Center,
    };
    let rc = RasterConfig {
        width,
        height,
        depth,
        precision: cfg.precision,
        mode,
        workers: cfg.threads,
        output: out.clone(),
        ..RasterConfig::default()
    };
    let raster = raster_omega(&rc)?;
    let inputs = json!({
        "grid": format!("{width}x{height}"), "depth": depth, "mode": to_value(&mode),
        "precision_bits": cfg.precision, "out": out.map(|p| p.display().to_string()),
    });
    Ok(Done::ok(inputs, to_value(&raster.summary)))
}

fn parse_spec(s: Option<&str>) -> Result<KSeqSpec, Failure> {
    let s = s.ok_or_else(|| Failure::usage("this analysis needs --kseq"))?;
    Ok(s.parse::<KSeqSpec>()?)
}

fn stable_of(spec: &KSeqSpec, diam: &HighFloat, steps: usize, prec: usize) -> Result<(StableDir, Value), Failure> {
    match spec {
        KSeqSpec::EventuallyPeriodic { prefix, period } => {
            let ps = stable_dir_eventually_periodic(prefix, period, prec)?;
            let v = to_value(&ps);
            Ok((ps.dir, v))
        }
        _ => {
            let d = stable_direction(spec, diam, steps, prec)?;
            let v = to_value(&d);
            Ok((d, v))
        }
    }
}

fn host<S: Scalar>(spec: &KSeqSpec, xi: &S, horizon: usize) -> Result<(Value, bool), Failure> {
    let sums = host_sums(spec, xi, horizon)?;
    let tele = host_telescope_inequality(spec, xi, horizon)?;
    Ok((json!({ "host": to_value(&sums), "telescope": to_value(&tele) }), tele.ok))
}

fn analyze(args: &AnalyzeArgs, cfg: &Config) -> Result<Done, Failure> {
    let prec = cfg.precision;
    let kseq = args.kseq.as_deref();
    let base = |extra: Value| {
        let mut v = json!({ "kseq": kseq, "precision_bits": prec });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        v
    };
    let done = match &args.what {
        Analysis::Lr => {
            let spec = parse_spec(kseq)?;
            Done::ok(base(json!({ "analysis": "lr" })), to_value(&lr_verdict(&spec)))
        }
        Analysis::Stable { diam, steps } => {
            let spec = parse_spec(kseq)?;
            let target = positive_float("diam", diam, prec)?;
            let (dir, v) = stable_of(&spec, &target, *steps, prec)?;
            let code = if dir.reached_target { EXIT_OK } else { EXIT_PRECISION };
            Done::ok(base(json!({ "analysis": "stable", "diam": diam, "steps": steps })), v).with_code(code)
        }
        Analysis::Lines { bound, tol, diam, steps } => {
            let spec = parse_spec(kseq)?;
            let target = positive_float("diam", diam, prec)?;
            let tol_f = positive_float("tol", tol, prec)?;
            let (dir, _) = stable_of(&spec, &target, *steps, prec)?;
            let d = dir.certified_diameter.clone().unwrap_or_else(|| HighFloat::zero(prec));
            let hits = line_search(&dir.point(), &d, *bound, &tol_f);
            let inputs = base(json!({ "analysis": "lines", "bound": bound, "tol": tol, "diam": diam, "steps": steps }));
            Done::ok(inputs, json!({ "stable_dir": to_value(&dir), "hits": to_value(&hits) }))
        }
        Analysis::Host { xi, horizon } => {
            let spec = parse_spec(kseq)?;
            let horizon = horizon.unwrap_or(cfg.horizon);
            let (v, ok) = if is_exact_literal(xi) {
                host(&spec, &rational("xi", xi)?, horizon)?
            } else {
                host(&spec, &HighFloat::from_rational(&rational("xi", xi)?, prec), horizon)?
            };
            let code = if ok { EXIT_OK } else { EXIT_INVARIANT };
            Done::ok(base(json!({ "analysis": "host", "xi": xi, "horizon": horizon })), v).with_code(code)
        }
        Analysis::Lyap { n } => {
            let spec = parse_spec(kseq)?;
            let r = lyapunov_report(&spec, *n, prec)?;
            let mut v = to_value(&r);
            v["pattern_ok"] = json!(r.pattern_ok());
            Done::ok(base(json!({ "analysis": "lyap", "n": n })), v)
        }
        Analysis::States { c, from, to, jsonl } => {
            let spec = parse_spec(kseq)?;
            let run = state_machine_run(&spec, *c, *from, *to)?;
            let code = if run.final_ok { EXIT_OK } else { EXIT_INVARIANT };
            let raw = jsonl.then(|| trace_json_lines(&run));
            let inputs = base(json!({ "analysis": "states", "c": c, "from": from, "to": to }));
            Done { inputs, results: to_value(&run), code, raw }
        }
        Analysis::Rho { len } => {
            let spec = parse_spec(kseq)?;
            let w = rho_prefix(&spec, *len)?;
            Done::ok(base(json!({ "analysis": "rho", "len": len })), json!({ "length": w.len(), "word": w.to_string() }))
        }
        Analysis::Descend { x, y } => {
            let d = rational_descent(&rational("x", x)?, &rational("y", y)?)?;
            Done::ok(json!({ "analysis": "descend", "x": x, "y": y }), to_value(&d))
        }
        Analysis::Wm { bound, tol, horizon } => {
            let spec = parse_spec(kseq)?;
            let horizon = horizon.unwrap_or(cfg.horizon);
            let tol_f = positive_float("tol", tol, prec)?;
            let v = wm_verdict(&spec, *bound, horizon, &tol_f, prec);
            Done::ok(base(json!({ "analysis": "wm", "bound": bound, "tol": tol, "horizon": horizon })), to_value(&v))
        }
        Analysis::Dominate { n_max } => {
            let spec = parse_spec(kseq)?;
            let d = ab_domination(&spec, *n_max)?;
            Done::ok(base(json!({ "analysis": "dominate", "n_max": n_max })), to_value(&d))
        }
        Analysis::Loop { n } => {
            let spec = parse_spec(kseq)?;
            let r = loop_sum_check(&spec, *n)?;
            let code = if r.rhs_b >= r.lhs_a && r.lhs_a == r.closed_form { EXIT_OK } else { EXIT_INVARIANT };
            Done::ok(base(json!({ "analysis": "loop", "n": n })), to_value(&r)).with_code(code)
        }
        Analysis::Weight { word } => {
            let spec = parse_spec(kseq)?;
            let w: EdgeWord = word.parse()?;
            let a = path_weight(&w, Version::A, &spec)?;
            let b = path_weight(&w, Version::B, &spec)?;
            let results = json!({ "word": w.to_string(), "weight_a": a.to_string(), "weight_b": b.to_string() });
            Done::ok(base(json!({ "analysis": "weight", "word": word })), results)
        }
        Analysis::Cex { blocks, xi } => {
            let x = HighFloat::from_rational(&rational("xi", xi)?, prec);
            let r = cex_sequence(*blocks, &x)?;
            let code = if r.failures.is_empty() { EXIT_OK } else { EXIT_INVARIANT };
            Done::ok(json!({ "analysis": "cex", "blocks": blocks, "xi": xi, "precision_bits": prec }), to_value(&r))
                .with_code(code)
        }
    };
    Ok(done)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify(_) => "classify",
        Command::Render(_) => "render",
        Command::Analyze(_) => "analyze",
    }
}

fn failure_outcome(f: &Failure) -> Outcome {
    let body = serde_json::to_string_pretty(&json!({ "error": to_value(f) })).expect("errors serialize");
    Outcome { code: f.code, stdout: String::new(), stderr: body + "\n" }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let cfg = match resolve_config(&cli) {
        Ok(c) => c,
        Err(f) => return failure_outcome(&f),
    };
    if let Some(n) = cfg.threads {
        // only the first call in a process can size the global pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let start = Instant::now();
    let done = match &cli.command {
        Command::Classify(a) => classify(a, &cfg),
        Command::Render(a) => render(a, &cfg),
        Command::Analyze(a) => analyze(a, &cfg),
    };
    let done = match done {
        Ok(d) => d,
        Err(f) => return failure_outcome(&f),
    };
    if let Some(raw) = done.raw {
        return Outcome { code: done.code, stdout: raw, stderr: String::new() };
    }
    let timings = (!cli.no_timings).then(|| json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 }));
    let report = Report {
        command: command_name(&cli.command),
        inputs: done.inputs,
        results: done.results,
        timings,
        tool_version: env!("CARGO_PKG_VERSION"),
    };
    let stdout = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    Outcome { code: done.code, stdout, stderr: String::new() }
}

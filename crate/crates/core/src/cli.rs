//! Command-line front end. Every command reads at most one JSON document and
//! writes exactly one JSON document.

use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::cochar::{Cocharacter, Q};
use crate::coeffs::FieldCtx;
use crate::error::{Error, Result};
use crate::invariants::{
    congruence_stability, convergence_trace, decency_check, decency_exponent, gl2_recover, hodge_point,
    hodge_sequence, minimal_bound, minimal_element, newton_point, sln_counterexample, stratum_scan,
};
use crate::render::{self, Format};
use crate::resgroups::{
    ag_display, ag_invariants, ag_lambda, base_change_check, go_beta, go_generic_matrix, go_lambda, go_type,
    res_newton,
};
use crate::wire;

pub const MIN_PREC: i64 = 8;
const DEFAULT_P: u32 = 2;
const DEFAULT_M: u32 = 2;

#[derive(Parser, Debug)]
#[command(name = "isolab", version, about = "Hodge and Newton invariants of matrices over F_q((pi))")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Characteristic of the coefficient field.
    #[arg(long, global = true, env = "ISOLAB_P")]
    pub p: Option<u32>,
    /// Degree of the coefficient field over F_p.
    #[arg(long, global = true, env = "ISOLAB_M")]
    pub m: Option<u32>,
    /// Working relative precision for inverses of inexact series.
    #[arg(long, global = true, env = "ISOLAB_PREC", default_value_t = 64)]
    pub prec: i64,
    #[arg(long, global = true, env = "ISOLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = "ISOLAB_DEPTH")]
    pub depth: Option<usize>,
    #[arg(long, global = true, env = "ISOLAB_TRIALS")]
    pub trials: Option<usize>,
    #[arg(long, global = true, env = "ISOLAB_KMAX", default_value_t = 12)]
    pub kmax: usize,
    #[arg(long, global = true, env = "ISOLAB_E", default_value_t = 2)]
    pub e: u32,
    #[arg(long, global = true, env = "ISOLAB_N", default_value_t = 3)]
    pub n: usize,
    /// Congruence level; defaults to the safe level of the input.
    #[arg(long, global = true, env = "ISOLAB_LEVEL")]
    pub level: Option<u32>,
    /// Polygon format: ascii or svg.
    #[arg(long, global = true, env = "ISOLAB_FORMAT", default_value = "ascii")]
    pub format: String,
    /// Input document: a path, `-` for stdin, or inline JSON.
    #[arg(long = "in", global = true, env = "ISOLAB_IN")]
    pub input: Option<String>,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true, env = "ISOLAB_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Hodge point of a matrix.
    Hodge,
    /// Newton point of a matrix.
    Newton,
    /// Hodge points of the first `--depth` twisted powers.
    Signature,
    /// Sample a stratum and tally Newton points.
    Scan,
    /// Minimal element for a Newton point.
    Minimal,
    /// Decency test `(bσ)^s = π^{sν}`.
    Decency,
    /// Newton point of a GL2 element from its depth-2 signature.
    #[command(name = "gl2-recover")]
    Gl2Recover,
    /// SLn pair with equal signatures up to depth n-1.
    Counterexample,
    /// Signature stability under congruence perturbations.
    Congruence,
    /// Normalized Hodge points of twisted powers against the Newton point.
    Converge,
    /// Slopes before and after a ramified base change of degree `--e`.
    Basechange,
    /// Goren-Oort type of a cyclic tuple.
    #[command(name = "go-type")]
    GoType,
    /// Generic slope of a Goren-Oort type.
    #[command(name = "go-lambda")]
    GoLambda,
    /// Generic tuple of a given Goren-Oort type.
    #[command(name = "go-generic")]
    GoGeneric,
    /// Andreatta-Goren display matrix.
    #[command(name = "ag-display")]
    AgDisplay,
    /// Invariants (j, n) of a display.
    #[command(name = "ag-invariants")]
    AgInvariants,
    /// Render polygons of one or more cocharacters.
    Polygon,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Hodge => "hodge",
            Command::Newton => "newton",
            Command::Signature => "signature",
            Command::Scan => "scan",
            Command::Minimal => "minimal",
            Command::Decency => "decency",
            Command::Gl2Recover => "gl2-recover",
            Command::Counterexample => "counterexample",
            Command::Congruence => "congruence",
            Command::Converge => "converge",
            Command::Basechange => "basechange",
            Command::GoType => "go-type",
            Command::GoLambda => "go-lambda",
            Command::GoGeneric => "go-generic",
            Command::AgDisplay => "ag-display",
            Command::AgInvariants => "ag-invariants",
            Command::Polygon => "polygon",
        }
    }

    pub const ALL: [Command; 17] = [
        Command::Hodge,
        Command::Newton,
        Command::Signature,
        Command::Scan,
        Command::Minimal,
        Command::Decency,
        Command::Gl2Recover,
        Command::Counterexample,
        Command::Congruence,
        Command::Converge,
        Command::Basechange,
        Command::GoType,
        Command::GoLambda,
        Command::GoGeneric,
        Command::AgDisplay,
        Command::AgInvariants,
        Command::Polygon,
    ];
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Command> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown command {s:?}")))
    }
}

/// Everything a command needs, independent of how it was supplied.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: Option<u32>,
    pub m: Option<u32>,
    pub prec: i64,
    pub seed: u64,
    pub depth: Option<usize>,
    pub trials: Option<usize>,
    pub kmax: usize,
    pub e: u32,
    pub n: usize,
    pub level: Option<u32>,
    pub format: Format,
    pub input: Option<Value>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            p: None,
            m: None,
            prec: 64,
            seed: 0,
            depth: None,
            trials: None,
            kmax: 12,
            e: 2,
            n: 3,
            level: None,
            format: Format::Ascii,
            input: None,
        }
    }
}

impl RunConfig {
    /// Build from a JSON object with the same keys as the long flags; `"in"` holds the input document.
    pub fn from_json(v: &Value) -> Result<RunConfig> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("config: expected an object".into()))?;
        let mut cfg = RunConfig::default();
        let uint = |k: &str| -> Result<Option<u64>> {
            match obj.get(k) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x.as_u64().map(Some).ok_or_else(|| Error::Parse(format!("config.{k}: expected a non-negative integer"))),
            }
        };
        let small = |k: &str| -> Result<Option<u32>> {
            uint(k)?.map(|x| u32::try_from(x).map_err(|_| Error::Parse(format!("config.{k}: too large")))).transpose()
        };
        cfg.p = small("p")?;
        cfg.m = small("m")?;
        if let Some(x) = uint("prec")? {
            cfg.prec = i64::try_from(x).map_err(|_| Error::Parse("config.prec: too large".into()))?;
        }
        cfg.seed = uint("seed")?.unwrap_or(0);
        cfg.depth = uint("depth")?.map(|x| x as usize);
        cfg.trials = uint("trials")?.map(|x| x as usize);
        cfg.kmax = uint("kmax")?.map_or(cfg.kmax, |x| x as usize);
        cfg.e = small("e")?.unwrap_or(cfg.e);
        cfg.n = uint("n")?.map_or(cfg.n, |x| x as usize);
        cfg.level = small("level")?;
        if let Some(f) = obj.get("format") {
            cfg.format = f.as_str().ok_or_else(|| Error::Parse("config.format: expected a string".into()))?.parse()?;
        }
        cfg.input = obj.get("in").cloned();
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.prec < MIN_PREC {
            return Err(Error::InvalidArgument(format!("--prec must be at least {MIN_PREC}, got {}", self.prec)));
        }
        if self.kmax == 0 {
            return Err(Error::InvalidArgument("--kmax must be positive".into()));
        }
        if self.e == 0 {
            return Err(Error::InvalidArgument("--e must be positive".into()));
        }
        if self.depth == Some(0) {
            return Err(Error::InvalidArgument("--depth must be positive".into()));
        }
        Ok(())
    }

    /// Field from the flags, else from the input document's `"field"`, else the default.
    fn field(&self) -> Result<Arc<FieldCtx>> {
        let from_doc = |key: &str| -> Option<u32> {
            self.input.as_ref()?.get("field")?.get(key)?.as_u64().and_then(|x| u32::try_from(x).ok())
        };
        let p = self.p.or_else(|| from_doc("p")).unwrap_or(DEFAULT_P);
        let m = self.m.or_else(|| from_doc("m")).unwrap_or(DEFAULT_M);
        FieldCtx::with_precision(p, m, self.prec)
    }

    fn input(&self) -> Result<&Value> {
        self.input.as_ref().ok_or_else(|| Error::InvalidArgument("this command needs an input document (--in)".into()))
    }
}

/// Look through a report for a nested value of the requested kind.
fn unwrap_key<'a>(v: &'a Value, keys: &[&str]) -> (&'a Value, String) {
    if let Value::Object(obj) = v {
        for k in keys {
            if let Some(x) = obj.get(*k) {
                return (x, format!("$.{k}"));
            }
        }
    }
    (v, "$".into())
}

fn input_matrix(ctx: &Arc<FieldCtx>, cfg: &RunConfig) -> Result<crate::matl::MatL> {
    let (v, path) = unwrap_key(cfg.input()?, &["matrix"]);
    wire::matrix_from_json(ctx, v, &path)
}

fn input_cochars(v: &Value, path: &str) -> Result<Vec<Cocharacter>> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("{path}: expected an array")))?;
    if items.iter().all(|x| x.is_array()) {
        items.iter().enumerate().map(|(i, x)| wire::cochar_from_json(x, &format!("{path}[{i}]"))).collect()
    } else {
        Ok(vec![wire::cochar_from_json(v, path)?])
    }
}

fn q(x: &Q) -> Value {
    wire::q_to_json(x)
}

/// Run one command and return its report body.
pub fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Value> {
    cfg.validate()?;
    let ctx = cfg.field()?;
    let mut doc = wire::document(&ctx);
    doc.insert("command".into(), json!(cmd.name()));
    let body = run(cmd, cfg, &ctx)?;
    if let Value::Object(obj) = body {
        doc.extend(obj);
    }
    Ok(Value::Object(doc))
}

fn run(cmd: Command, cfg: &RunConfig, ctx: &Arc<FieldCtx>) -> Result<Value> {
    Ok(match cmd {
        Command::Hodge => {
            let b = input_matrix(ctx, cfg)?;
            json!({"hodge": wire::cochar_to_json(&hodge_point(&b)?)})
        }
        Command::Newton => {
            let b = input_matrix(ctx, cfg)?;
            json!({"newton": wire::cochar_to_json(&newton_point(&b)?)})
        }
        Command::Signature => {
            let b = input_matrix(ctx, cfg)?;
            let depth = cfg.depth.unwrap_or(b.n());
            let sig = hodge_sequence(&b, depth)?;
            json!({"depth": depth, "signature": wire::signature_to_json(&sig)})
        }
        Command::Scan => {
            let (v, path) = unwrap_key(cfg.input()?, &["signature"]);
            let sig = wire::signature_from_json(v, &path)?;
            let report = stratum_scan(ctx, &sig, cfg.trials.unwrap_or(1000), cfg.seed)?;
            json!({"seed": cfg.seed, "scan": wire::scan_to_json(&report)})
        }
        Command::Minimal => {
            let (v, path) = unwrap_key(cfg.input()?, &["newton"]);
            let nu = wire::cochar_from_json(v, &path)?;
            let b = minimal_element(ctx, &nu)?;
            let mu = hodge_point(&b)?;
            let s = decency_exponent(&nu);
            json!({
                "newton": wire::cochar_to_json(&nu),
                "matrix": wire::matrix_to_json(&b),
                "hodge": wire::cochar_to_json(&mu),
                "distance": q(&nu.metric(&mu)?),
                "bound": q(&minimal_bound(nu.len())),
                "decency_exponent": s,
                "decent": decency_check(&b, s as u64)?,
            })
        }
        Command::Decency => {
            let input = cfg.input()?;
            let b = input_matrix(ctx, cfg)?;
            let nu = newton_point(&b)?;
            let s = match input.get("s") {
                Some(s) => s.as_u64().ok_or_else(|| Error::Parse("$.s: expected a positive integer".into()))?,
                None => decency_exponent(&nu) as u64,
            };
            if s == 0 {
                return Err(Error::InvalidArgument("decency exponent must be positive".into()));
            }
            json!({"newton": wire::cochar_to_json(&nu), "s": s, "decent": decency_check(&b, s)?})
        }
        Command::Gl2Recover => {
            let input = cfg.input()?;
            let (mu1, mu2) = match (input.get("mu1"), input.get("mu2")) {
                (Some(a), Some(b)) => (wire::cochar_from_json(a, "$.mu1")?, wire::cochar_from_json(b, "$.mu2")?),
                _ => {
                    let (v, path) = unwrap_key(input, &["signature"]);
                    let sig = wire::signature_from_json(v, &path)?;
                    if sig.depth() < 2 {
                        return Err(Error::InvalidArgument("need the Hodge points of depth 1 and 2".into()));
                    }
                    (sig.mus[0].clone(), sig.mus[1].clone())
                }
            };
            json!({
                "mu1": wire::cochar_to_json(&mu1),
                "mu2": wire::cochar_to_json(&mu2),
                "newton": wire::cochar_to_json(&gl2_recover(&mu1, &mu2)?),
            })
        }
        Command::Counterexample => {
            let n = cfg.n;
            let (b1, b2) = sln_counterexample(ctx, n)?;
            let depth = cfg.depth.unwrap_or(n);
            let mut entries = Vec::new();
            for b in [&b1, &b2] {
                entries.push(json!({
                    "matrix": wire::matrix_to_json(b),
                    "signature": wire::signature_to_json(&hodge_sequence(b, depth)?),
                    "newton": wire::cochar_to_json(&newton_point(b)?),
                }));
            }
            json!({"n": n, "depth": depth, "elements": entries})
        }
        Command::Congruence => {
            let b = input_matrix(ctx, cfg)?;
            let depth = cfg.depth.unwrap_or(4);
            let level = match cfg.level {
                Some(l) => l,
                None => {
                    let spread = hodge_sequence(&b, depth)?.spread().ceil().to_integer();
                    u32::try_from(spread + 1).map_err(|_| Error::Internal("negative spread".into()))?
                }
            };
            let report = congruence_stability(&b, depth, level, cfg.trials.unwrap_or(100), cfg.seed)?;
            json!({"seed": cfg.seed, "congruence": wire::congruence_to_json(&report)})
        }
        Command::Converge => {
            let b = input_matrix(ctx, cfg)?;
            json!({"kmax": cfg.kmax, "trace": wire::trace_to_json(&convergence_trace(&b, cfg.kmax)?)})
        }
        Command::Basechange => {
            let b = input_matrix(ctx, cfg)?;
            json!({"basechange": wire::basechange_to_json(&base_change_check(&b, cfg.e)?)})
        }
        Command::GoType => {
            let (v, path) = unwrap_key(cfg.input()?, &["element"]);
            let b = wire::res_element_from_json(ctx, v, &path)?;
            let tau = go_type(&b)?;
            json!({
                "type": wire::gotype_to_json(&tau),
                "lambda": q(&go_lambda(&tau)),
                "beta": wire::cochar_to_json(&go_beta(&tau)),
                "newton": wire::cochar_to_json(&res_newton(&b)?),
            })
        }
        Command::GoLambda => {
            let (v, path) = unwrap_key(cfg.input()?, &["type"]);
            let tau = wire::gotype_from_json(v, &path)?;
            json!({
                "type": wire::gotype_to_json(&tau),
                "lambda": q(&go_lambda(&tau)),
                "beta": wire::cochar_to_json(&go_beta(&tau)),
            })
        }
        Command::GoGeneric => {
            let (v, path) = unwrap_key(cfg.input()?, &["type"]);
            let tau = wire::gotype_from_json(v, &path)?;
            let b = go_generic_matrix(ctx, &tau, cfg.seed)?;
            json!({
                "seed": cfg.seed,
                "type": wire::gotype_to_json(&tau),
                "element": wire::res_element_to_json(&b),
                "observed_type": wire::gotype_to_json(&go_type(&b)?),
                "newton": wire::cochar_to_json(&res_newton(&b)?),
                "beta": wire::cochar_to_json(&go_beta(&tau)),
            })
        }
        Command::AgDisplay => {
            let (v, path) = unwrap_key(cfg.input()?, &["params"]);
            let params = wire::display_params_from_json(ctx, v, &path)?;
            json!({
                "params": wire::display_params_to_json(&params),
                "matrix": wire::matrix_to_json(&ag_display(&params)?),
            })
        }
        Command::AgInvariants => {
            let input = cfg.input()?;
            let (f, g) = match unwrap_key(input, &["params"]) {
                (v, path) if v.get("i").is_some() => {
                    let params = wire::display_params_from_json(ctx, v, &path)?;
                    (ag_display(&params)?, params.g as i64)
                }
                _ => {
                    let f = input_matrix(ctx, cfg)?;
                    let g = f.det_val()?;
                    (f, g)
                }
            };
            let inv = ag_invariants(&f)?;
            json!({"g": g, "j": inv.j, "n": inv.n, "lambda": q(&ag_lambda(inv.n, g)?)})
        }
        Command::Polygon => {
            let (v, path) = unwrap_key(cfg.input()?, &["polygons", "newton", "hodge"]);
            let polys = input_cochars(v, &path)?;
            json!({
                "format": match cfg.format { Format::Ascii => "ascii", Format::Svg => "svg" },
                "polygons": polys.iter().map(wire::cochar_to_json).collect::<Vec<_>>(),
                "rendering": render::render(&polys, cfg.format)?,
            })
        }
    })
}

/// Exit status for an error: 2 asks the caller to retry with more precision.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InsufficientPrecision(_) => 2,
        _ => 1,
    }
}

pub fn error_document(e: &Error, cfg: &RunConfig) -> Value {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(wire::SCHEMA));
    doc.insert("error".into(), json!({"kind": e.kind(), "message": e.to_string()}));
    if matches!(e, Error::InsufficientPrecision(_)) {
        doc.insert("retry_prec".into(), json!(cfg.prec.saturating_mul(2).max(MIN_PREC)));
    }
    Value::Object(doc)
}

/// Run a command and return `(exit code, JSON text)`.
pub fn run_to_string(cmd: Command, cfg: &RunConfig) -> (i32, String) {
    let (code, doc) = match dispatch(cmd, cfg) {
        Ok(doc) => (0, doc),
        Err(e) => (exit_code(&e), error_document(&e, cfg)),
    };
    let text = serde_json::to_string_pretty(&doc).expect("values serialize");
    (code, text + "\n")
}

fn read_input(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?
    };
    wire::parse_document(&text)
}

fn config_from_cli(cli: &Cli) -> Result<RunConfig> {
    Ok(RunConfig {
        p: cli.p,
        m: cli.m,
        prec: cli.prec,
        seed: cli.seed,
        depth: cli.depth,
        trials: cli.trials,
        kmax: cli.kmax,
        e: cli.e,
        n: cli.n,
        level: cli.level,
        format: cli.format.parse()?,
        input: cli.input.as_deref().map(read_input).transpose()?,
    })
}

/// Entry point of the `isolab` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let (code, text) = match config_from_cli(&cli) {
        Ok(cfg) => run_to_string(cli.command, &cfg),
        Err(e) => {
            let cfg = RunConfig { prec: cli.prec, ..RunConfig::default() };
            let doc = error_document(&e, &cfg);
            (exit_code(&e), serde_json::to_string_pretty(&doc).expect("values serialize") + "\n")
        }
    };
    if code != 0 {
        if let Some(msg) = serde_json::from_str::<Value>(&text).ok().and_then(|d| d["error"]["message"].as_str().map(String::from)) {
            eprintln!("isolab: {msg}");
        }
    }
    match &cli.out {
        Some(path) if code == 0 => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("isolab: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        _ => print!("{text}"),
    }
    code
}

//! Command-line front end.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
//! malformed input. With `--json` every result is a single JSON document
//! carrying `"schema": "kodaira-kit/1"`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chern::riero_report;
use crate::curves::{blow_down, blow_up, property_p, CurveConfiguration, ReducedDivisor};
use crate::deformation::{classify, Verdict};
use crate::discriminant::{verify_inductive, BlowDownChain, DiscriminantError};
use crate::kodaira::{census, fiber, FiberType};
use crate::surface::{BundleInvariants, SurfaceModel};
use crate::SCHEMA;

/// Largest fiber the census will enumerate exhaustively.
const COMPONENT_CAP: usize = 24;

#[derive(Debug, Parser)]
#[command(name = "kodaira-kit", version, about = "Exact calculus for conic-bundle discriminants and deformation counts")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check property (P) for a divisor on a curve configuration.
    CheckP(CheckP),
    /// Blow up a marked point.
    BlowUp(BlowUpArgs),
    /// Contract a (-1)-curve.
    BlowDown(BlowDownArgs),
    /// Print Kodaira fiber configurations.
    EnumerateFibers(EnumerateFibers),
    /// Verify the blow-down induction for a chain and print its certificate.
    Discriminant(DiscriminantArgs),
    /// Recompute chi(T_X) for conic bundles and compare with the closed form.
    VerifyRiero,
    /// Evaluate and classify h^1(T_X) - h^2(T_X).
    DeformCount(DeformCount),
    /// Property-(P) census over all Kodaira fibers.
    Census(CensusArgs),
}

#[derive(Debug, Args)]
struct CheckP {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated component ids; defaults to every curve.
    #[arg(long)]
    divisor: Option<String>,
}

#[derive(Debug, Args)]
struct BlowUpArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    point: String,
}

#[derive(Debug, Args)]
struct BlowDownArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    curve: String,
}

#[derive(Debug, Args)]
struct EnumerateFibers {
    /// Fiber type such as I0, In, mIn, II, III, IV, I0*, In*, II*, III*, IV*.
    #[arg(long = "type")]
    fiber_type: Option<String>,
    /// Index n for In, mIn and In*; without --type, the largest n listed.
    #[arg(long)]
    n: Option<u32>,
    /// Multiplicity m for mIn.
    #[arg(long)]
    m: Option<u32>,
    /// Also run the property-(P) census on each fiber.
    #[arg(long = "census-p")]
    census_p: bool,
}

#[derive(Debug, Args)]
struct DiscriminantArgs {
    #[arg(long)]
    chain: PathBuf,
}

#[derive(Debug, Args)]
struct DeformCount {
    #[arg(long)]
    surface: PathBuf,
    #[arg(long)]
    bundle: PathBuf,
    /// h^0(T_X), never computed by this tool.
    #[arg(long, default_value_t = 0)]
    h0: u64,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Skip fibers with more components than this.
    #[arg(long = "max-components", default_value_t = 20)]
    max_components: usize,
    /// Largest n for In, mIn, In*.
    #[arg(long, default_value_t = 12)]
    n: u32,
}

/// An outcome: a document, its text rendering, and the exit code.
struct Outcome {
    doc: Value,
    text: String,
    code: i32,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn with_schema(value: impl Serialize) -> Value {
    let mut v = serde_json::to_value(value).expect("serializable");
    match v.as_object_mut() {
        Some(map) if !map.contains_key("schema") => {
            let mut out = serde_json::Map::new();
            out.insert("schema".into(), json!(SCHEMA));
            out.extend(std::mem::take(map));
            Value::Object(out)
        }
        Some(_) => v,
        None => json!({ "schema": SCHEMA, "value": v }),
    }
}

fn parse_divisor(cfg: &CurveConfiguration, spec: Option<&str>) -> Result<ReducedDivisor, InputError> {
    let d = match spec {
        None => cfg.full_divisor(),
        Some(s) => ReducedDivisor::new(s.split(',').map(str::trim).filter(|x| !x.is_empty())),
    };
    cfg.check_divisor(&d).map_err(|e| InputError(format!("divisor: {e}")))?;
    Ok(d)
}

fn check_p(a: &CheckP) -> Result<Outcome, InputError> {
    let cfg: CurveConfiguration = read_json(&a.config)?;
    if let Some(v) = cfg.validate().first() {
        return Err(InputError(format!("config: {}", serde_json::to_string(v)?)));
    }
    let d = parse_divisor(&cfg, a.divisor.as_deref())?;
    let p = property_p(&cfg, &d)?;
    let text = match (&p.witness, p.witness_pair_degree) {
        (Some(w), Some(k)) => format!("property (P) fails: {w} meets the rest of D {k} time(s)"),
        _ => "property (P) holds".to_string(),
    };
    let code = if p.holds { 0 } else { 1 };
    Ok(Outcome { doc: with_schema(json!({ "divisor": d, "result": p })), text, code })
}

fn blow_up_cmd(a: &BlowUpArgs) -> Result<Outcome, InputError> {
    let cfg: CurveConfiguration = read_json(&a.config)?;
    let b = blow_up(&cfg, &a.point)?;
    let text = format!("blew up {} -> exceptional curve {}\n{}", a.point, b.exceptional, serde_json::to_string_pretty(&b.config)?);
    Ok(Outcome { doc: with_schema(&b), text, code: 0 })
}

fn blow_down_cmd(a: &BlowDownArgs) -> Result<Outcome, InputError> {
    let cfg: CurveConfiguration = read_json(&a.config)?;
    let b = blow_down(&cfg, &a.curve)?;
    let image = b.image_point.as_deref().unwrap_or("(none)");
    let text = format!("contracted {} to point {image}\n{}", a.curve, serde_json::to_string_pretty(&b.config)?);
    Ok(Outcome { doc: with_schema(&b), text, code: 0 })
}

fn enumerate(a: &EnumerateFibers) -> Result<Outcome, InputError> {
    let types = match &a.fiber_type {
        Some(t) => vec![FiberType::from_parts(t, a.n, a.m)?],
        None => FiberType::all_up_to(a.n.unwrap_or(12)),
    };
    let mut records = Vec::new();
    let mut text = Vec::new();
    let mut code = 0;
    for t in types {
        let rec = fiber(t)?;
        let mut entry = serde_json::to_value(&rec)?;
        let mut line = format!("{t}: {} component(s), euler number {}", rec.config.len(), rec.euler_number);
        if a.census_p {
            let c = census(&rec)?;
            if !c.passed() {
                code = 1;
            }
            line.push_str(&format!(", {} (P)-divisor(s), census {}", c.p_divisors.len(), if c.passed() { "ok" } else { "FAILED" }));
            entry["census"] = serde_json::to_value(&c)?;
        }
        records.push(entry);
        text.push(line);
    }
    Ok(Outcome { doc: with_schema(json!({ "fibers": records })), text: text.join("\n"), code })
}

fn discriminant(a: &DiscriminantArgs) -> Result<Outcome, InputError> {
    let chain: BlowDownChain = read_json(&a.chain)?;
    match verify_inductive(&chain) {
        Ok(cert) => {
            let mut text = vec![format!("{:<12} {:>3} {:>3} {:>6}  label", "curve", "mu", "eps", "delta")];
            for s in &cert.chain {
                text.push(format!("{:<12} {:>3} {:>3} {:>6}  {}", s.curve, s.mu, s.eps, s.delta_value, s.case_label));
            }
            text.push(format!("base {} final {} verdict {}", cert.base_value, cert.final_value, cert.verdict));
            let code = if cert.verdict { 0 } else { 1 };
            Ok(Outcome { doc: with_schema(&cert), text: text.join("\n"), code })
        }
        Err(
            e @ (DiscriminantError::ExcludedCaseEncountered { .. }
            | DiscriminantError::PropertyPFails { .. }
            | DiscriminantError::CensusViolation { .. }
            | DiscriminantError::InsufficientLocalData { .. }),
        ) => {
            let doc = with_schema(json!({ "verdict": false, "error": error_doc(&e) }));
            Ok(Outcome { doc, text: format!("not verified: {e}"), code: 1 })
        }
        Err(e) => Err(InputError(e.to_string())),
    }
}

fn error_doc(e: &DiscriminantError) -> Value {
    match e {
        DiscriminantError::ExcludedCaseEncountered { step, curve, mu, eps, label, witness, pair_degree } => json!({
            "kind": "excluded_case_encountered", "step": step, "curve": curve, "mu": mu, "eps": eps,
            "label": label, "witness": witness, "witness_pair_degree": pair_degree, "message": e.to_string(),
        }),
        DiscriminantError::PropertyPFails { stage, witness, pair_degree } => json!({
            "kind": "property_p_fails", "stage": stage, "witness": witness,
            "witness_pair_degree": pair_degree, "message": e.to_string(),
        }),
        DiscriminantError::InsufficientLocalData { step, curve, label } => json!({
            "kind": "insufficient_local_data", "step": step, "curve": curve, "label": label, "message": e.to_string(),
        }),
        DiscriminantError::CensusViolation { d_sq } => json!({
            "kind": "census_violation", "d_squared": d_sq, "message": e.to_string(),
        }),
        other => json!({ "kind": "error", "message": other.to_string() }),
    }
}

fn verify_riero_cmd() -> Result<Outcome, InputError> {
    let r = riero_report()?;
    let mut text = vec![
        format!("chi(T_X)        = {}", r.chi_tx),
        format!("closed form     = {}", r.target),
        format!("-chi - closed   = {}", r.residual),
        format!("e3 coefficient  = {}", r.e3_coefficient),
        format!("{:<8} {:>8} {:>8} {:>8}", "monomial", "chi_TX", "target", "residual"),
    ];
    for row in &r.rows {
        text.push(format!("{:<8} {:>8} {:>8} {:>8}", row.monomial, row.chi_tx, row.target, row.residual));
    }
    let code = if r.holds() { 0 } else { 1 };
    Ok(Outcome { doc: with_schema(&r), text: text.join("\n"), code })
}

fn deform(a: &DeformCount) -> Result<Outcome, InputError> {
    let s: SurfaceModel = read_json(&a.surface)?;
    let e: BundleInvariants = read_json(&a.bundle)?;
    let r = classify(&s, &e, a.h0)?;
    let verdict = serde_json::to_value(r.verdict)?;
    let mut text = vec![
        format!("h1 - h2 = {}", r.h1_minus_h2),
        format!("c2(E) - c1(E)^2/3 = {}", r.banlep_lhs),
        format!("chern gap = {}", r.chern_gap),
        format!("verdict: {}", verdict.as_str().unwrap_or_default()),
    ];
    text.extend(r.notes.iter().map(|n| format!("note: {n}")));
    let code = if r.verdict == Verdict::OutOfHypotheses { 1 } else { 0 };
    Ok(Outcome { doc: with_schema(&r), text: text.join("\n"), code })
}

fn census_cmd(a: &CensusArgs) -> Result<Outcome, InputError> {
    if a.max_components > COMPONENT_CAP {
        return Err(InputError(format!("max-components: at most {COMPONENT_CAP} supported, got {}", a.max_components)));
    }
    let mut rows = Vec::new();
    let mut text = Vec::new();
    let mut all = true;
    let mut skipped = Vec::new();
    for t in FiberType::all_up_to(a.n) {
        let rec = fiber(t)?;
        if rec.config.len() > a.max_components {
            skipped.push(t.to_string());
            continue;
        }
        let c = census(&rec)?;
        all &= c.passed();
        text.push(format!(
            "{:<6} components {:>2}  subsets {:>7}  (P)-divisors {}  {}",
            t.to_string(),
            c.components,
            c.subsets_checked,
            c.p_divisors.len(),
            if c.passed() { "ok" } else { "FAILED" }
        ));
        rows.push(c);
    }
    if !skipped.is_empty() {
        text.push(format!("skipped (too many components): {}", skipped.join(", ")));
    }
    let doc = with_schema(json!({ "passed": all, "fibers": rows, "skipped": skipped }));
    Ok(Outcome { doc, text: text.join("\n"), code: if all { 0 } else { 1 } })
}

/// Runs the CLI on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::CheckP(a) => check_p(a),
        Command::BlowUp(a) => blow_up_cmd(a),
        Command::BlowDown(a) => blow_down_cmd(a),
        Command::EnumerateFibers(a) => enumerate(a),
        Command::Discriminant(a) => discriminant(a),
        Command::VerifyRiero => verify_riero_cmd(),
        Command::DeformCount(a) => deform(a),
        Command::Census(a) => census_cmd(a),
    };
    match result {
        Ok(o) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&o.doc).expect("serializable"))
            } else {
                writeln!(out, "{}", o.text)
            };
            o.code
        }
        Err(InputError(msg)) => {
            if cli.json {
                let doc = json!({ "schema": SCHEMA, "error": { "kind": "input", "message": msg } });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Runs the CLI against standard output and standard error.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{CurveNode, LocalType, MarkedPoint};

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("kodaira-kit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn write(dir: &tempfile::TempDir, name: &str, value: &impl Serialize) -> String {
        let p = dir.path().join(name);
        std::fs::write(&p, serde_json::to_string(value).unwrap()).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn i2() -> CurveConfiguration {
        let mut c = CurveConfiguration::new();
        c.add_curve(CurveNode::rational("A", -2))
            .add_curve(CurveNode::rational("B", -2))
            .add_point(MarkedPoint::new("p", LocalType::Ordinary, &[("A", 1), ("B", 1)]))
            .add_point(MarkedPoint::new("q", LocalType::Ordinary, &[("A", 1), ("B", 1)]));
        c
    }

    #[test]
    fn check_p_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let path = write(&dir, "i2.json", &i2());
        assert_eq!(call(&["check-p", "--config", &path]).0, 0);
        let (code, out, _) = call(&["check-p", "--config", &path, "--divisor", "A", "--json"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["witness"], "A");
        assert_eq!(call(&["check-p", "--config", &path, "--divisor", "Z"]).0, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["check-p"]).0, 2);
        assert_eq!(call(&["verify-riero", "--bogus"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn malformed_input_names_field() {
        let dir = tempfile::tempdir().unwrap();
        let s = write(&dir, "s.json", &json!({ "k_squared": 0, "c2": 24 }));
        let e = write(&dir, "e.json", &json!({ "rank": 3, "c1_sq": 0, "c1_dot_K": 0, "c2": 0 }));
        let (code, _, err) = call(&["deform-count", "--surface", &s, "--bundle", &e]);
        assert_eq!(code, 2);
        assert!(err.contains("picard_rank"), "{err}");
    }

    #[test]
    fn riero_and_deform() {
        let (code, out, _) = call(&["verify-riero", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["residual"], "0");

        let dir = tempfile::tempdir().unwrap();
        let s = write(&dir, "s.json", &json!({
            "k_squared": 0, "c2": 24, "picard_rank": 1, "alg_dim": 0, "kodaira_dim": 0, "minimal": true, "kaehler": true
        }));
        let e = write(&dir, "e.json", &json!({ "rank": 3, "c1_sq": 0, "c1_dot_K": 0, "c2": 5 }));
        let (code, out, _) = call(&["deform-count", "--surface", &s, "--bundle", &e, "--h0", "0", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["h1_minus_h2"], 19);
        assert_eq!(v["verdict"], "positive_strict");
    }

    #[test]
    fn json_output_is_deterministic() {
        let a = call(&["enumerate-fibers", "--type", "In*", "--n", "2", "--census-p", "--json"]);
        let b = call(&["enumerate-fibers", "--type", "In*", "--n", "2", "--census-p", "--json"]);
        assert_eq!(a, b);
        assert_eq!(a.0, 0);
    }
}

//! Command-line front end: model and class inspection, wall queries,
//! derivation runs, dimension-one chamber reports, and SVG diagrams of
//! the `(b, w)`-plane.
//!
//! Exit codes: `0` success, `1` input/parse errors, `2` enumeration
//! limits exceeded, `3` model-assumption violations (non-Calabi-Yau),
//! `4` admissibility failures.  The env var `TILTWALL_LIMITS` holds a
//! JSON object overriding any subset of the default [`Limits`].
//!
//! All output is UTF-8 JSON or SVG, and deterministic: identical inputs
//! produce byte-identical bytes regardless of thread count.

use std::fmt;
use std::fs;
use std::io::{Read as _, Write as _};
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::dim1::{chamber_report, dim1_walls, Ch3Bound, Dim1Error};
use crate::hilbert::HilbertPolynomial;
use crate::plane::{pi, pi_prime, PlaneError};
use crate::plot::{render_svg, spec_from_walls, PlotError, PlotSpec};
use crate::rat::{rat, rat_value, rint, value_to_rat, Rat};
use crate::stability::{bg_line, StabilityError};
use crate::threefold::{KClass, ThreefoldError, ThreefoldModel};
use crate::walls::{
    js_wall, minimal_admissible_n0, safe_line, wall_candidates, Limits, Region, Wall, WallsError,
};
use crate::wcf::{walk_walls, WcfError};

const LIMITS_ENV: &str = "TILTWALL_LIMITS";

/// A command failure: the process exit code, a message for stderr, and
/// optionally a machine-readable payload still owed to stdout.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub stdout: Option<String>,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
            stdout: None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (exit {})", self.message, self.code)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<ThreefoldError> for CliError {
    fn from(e: ThreefoldError) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<PlaneError> for CliError {
    fn from(e: PlaneError) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<StabilityError> for CliError {
    fn from(e: StabilityError) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<PlotError> for CliError {
    fn from(e: PlotError) -> Self {
        CliError::new(1, e.to_string())
    }
}

impl From<WallsError> for CliError {
    fn from(e: WallsError) -> Self {
        let code = match &e {
            WallsError::UnboundedSearch(_) => 2,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<WcfError> for CliError {
    fn from(e: WcfError) -> Self {
        match e {
            WcfError::NotCalabiYau(_) => CliError::new(3, e.to_string()),
            WcfError::NotAdmissible(_) => CliError::new(4, e.to_string()),
            WcfError::Walls(inner) => inner.into(),
            other => CliError::new(1, other.to_string()),
        }
    }
}

impl From<Dim1Error> for CliError {
    fn from(e: Dim1Error) -> Self {
        match e {
            Dim1Error::Wcf(inner) => inner.into(),
            other => CliError::new(1, other.to_string()),
        }
    }
}

/// Exact wall-and-chamber geometry for weak (tilt) stability on
/// polarized Calabi-Yau threefolds.
#[derive(Debug, Parser)]
#[command(name = "tiltwall", version, disable_help_subcommand = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate or inspect a threefold model
    #[command(subcommand)]
    Model(ModelCmd),
    /// Inspect a numerical K-theory class
    #[command(subcommand)]
    Class(ClassCmd),
    /// Enumerate candidate walls for a class in a region of U
    Walls(WallsArgs),
    /// The Joyce-Song wall of a shifted rank -1 class
    JsWall(JsWallArgs),
    /// The safe line bounding the safe area of a rank -1 class
    SafeLine(SafeLineArgs),
    /// Dimension-one chamber structure in the theta parameter
    #[command(subcommand)]
    Dim1(Dim1Cmd),
    /// Walk the walls from the vanishing chamber to large volume
    Derive(DeriveArgs),
    /// Render an SVG diagram of the (b, w)-plane
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
enum ModelCmd {
    /// Check the model invariants and report the result
    Validate(ModelArgs),
    /// Print the model with the Euler characteristics of O(0..=4)
    Info(ModelArgs),
}

#[derive(Debug, Subcommand)]
enum ClassCmd {
    /// Exact invariants: discriminant, chi, projections, Hilbert polynomial
    Info(ClassArgs),
}

#[derive(Debug, Subcommand)]
enum Dim1Cmd {
    /// The finitely many walls at or above theta_JS
    Walls(Dim1Args),
    /// Walls plus the empty chamber and the large-volume identification
    Report(Dim1Args),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Builtin model name (`quintic`), a model JSON file, or inline JSON
    #[arg(long, value_name = "MODEL")]
    model: String,
}

#[derive(Debug, Args)]
struct ClassArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Class as inline JSON, a file path, or `-` for stdin
    #[arg(long, value_name = "CLASS")]
    class: String,
}

#[derive(Debug, Args)]
struct WallsArgs {
    #[command(flatten)]
    target: ClassArgs,
    /// Shift the rank-0 class by O(-n0) and search the region the
    /// derivation walks (above the vanishing line, right of the
    /// projection).  An integer, a rational `p/q`, or `auto`
    #[arg(
        long,
        value_name = "N0",
        allow_hyphen_values = true,
        conflicts_with_all = ["above_line", "right_of"]
    )]
    n0: Option<String>,
    /// Search only above this line, as `[A, B, C]` for A*b + B*w = C
    #[arg(long, value_name = "LINE")]
    above_line: Option<String>,
    /// Search only at b-coordinates strictly greater than this rational
    #[arg(long, value_name = "B", allow_hyphen_values = true)]
    right_of: Option<String>,
    /// Worker threads for the enumeration (overrides TILTWALL_LIMITS)
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct JsWallArgs {
    #[command(flatten)]
    target: ClassArgs,
    /// The twist n with v_n = v - ch(O(-n)); the wall's parabola chord
    /// runs from b = -n to b = n + 2s/c
    #[arg(long, value_name = "N", allow_hyphen_values = true)]
    n: String,
}

#[derive(Debug, Args)]
struct SafeLineArgs {
    #[command(flatten)]
    target: ClassArgs,
    /// Degree cap c of the ambient induction, typically ch1.H^2 of the
    /// parent rank-0 class; a positive integer or rational
    #[arg(long, value_name = "C", allow_hyphen_values = true)]
    cap: String,
}

#[derive(Debug, Args)]
struct Dim1Args {
    /// ch2.H of the class; a positive integer
    #[arg(long, value_name = "C")]
    c: i64,
    /// ch3 of the class
    #[arg(long, value_name = "S", allow_negative_numbers = true)]
    s: i64,
    /// Constant lower bound B for ch3 of destabilizing subsheaves
    #[arg(long, value_name = "B", default_value_t = 0, allow_negative_numbers = true)]
    bound: i64,
    /// Twist n at which the bound is evaluated
    #[arg(long, value_name = "N", default_value_t = 0, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Debug, Args)]
struct DeriveArgs {
    #[command(flatten)]
    target: ClassArgs,
    /// Twist n0, or `auto` for the minimal admissible value
    #[arg(long, value_name = "N0", default_value = "auto", allow_hyphen_values = true)]
    n0: String,
    /// Worker threads for the enumeration (overrides TILTWALL_LIMITS)
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Plot-spec or wall-list JSON: inline, a file path, or `-` for stdin
    #[arg(long, value_name = "INPUT", default_value = "-")]
    input: String,
    /// Output SVG path, or `-` for stdout
    #[arg(long, value_name = "OUTPUT", default_value = "-")]
    output: String,
}

/// Parse the process arguments, run the selected command, and return
/// the exit code after writing stdout/stderr.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successes; everything else
            // is an input error under the exit-code contract.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(payload) => {
            emit(&payload);
            0
        }
        Err(err) => {
            eprintln!("tiltwall: {}", err.message);
            if let Some(payload) = &err.stdout {
                emit(payload);
            }
            err.code
        }
    }
}

fn emit(payload: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(payload.as_bytes());
    let _ = out.flush();
}

fn dispatch(command: Command) -> Result<String, CliError> {
    match command {
        Command::Model(ModelCmd::Validate(args)) => cmd_model_validate(&args),
        Command::Model(ModelCmd::Info(args)) => cmd_model_info(&args),
        Command::Class(ClassCmd::Info(args)) => cmd_class_info(&args),
        Command::Walls(args) => cmd_walls(&args),
        Command::JsWall(args) => cmd_js_wall(&args),
        Command::SafeLine(args) => cmd_safe_line(&args),
        Command::Dim1(Dim1Cmd::Walls(args)) => cmd_dim1_walls(&args),
        Command::Dim1(Dim1Cmd::Report(args)) => cmd_dim1_report(&args),
        Command::Derive(args) => cmd_derive(&args),
        Command::Plot(args) => cmd_plot(&args),
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{' | '['))
}

/// Inline JSON is used verbatim, `-` reads stdin, anything else is a
/// file path.
fn read_input(spec: &str) -> Result<String, CliError> {
    if spec == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::new(1, format!("cannot read stdin: {e}")))?;
        return Ok(text);
    }
    if looks_like_json(spec) {
        return Ok(spec.to_string());
    }
    fs::read_to_string(spec).map_err(|e| CliError::new(1, format!("cannot read `{spec}`: {e}")))
}

fn load_model(spec: &str) -> Result<ThreefoldModel, CliError> {
    if let Some(model) = ThreefoldModel::builtin(spec) {
        return Ok(model);
    }
    if looks_like_json(spec) || spec == "-" || Path::new(spec).exists() {
        let text = read_input(spec)?;
        let model: ThreefoldModel = serde_json::from_str(&text)
            .map_err(|e| CliError::new(1, format!("bad model JSON: {e}")))?;
        model.validate()?;
        return Ok(model);
    }
    Err(CliError::new(
        1,
        format!("`{spec}` is neither a builtin model (try `quintic`) nor a readable file"),
    ))
}

fn load_class(spec: &str) -> Result<KClass, CliError> {
    let text = read_input(spec)?;
    serde_json::from_str(&text).map_err(|e| CliError::new(1, format!("bad class JSON: {e}")))
}

/// Rational CLI argument: an integer, `p/q`, or a `[p, q]` JSON pair.
fn parse_rat_arg(name: &str, text: &str) -> Result<Rat, CliError> {
    let trimmed = text.trim();
    if let Ok(n) = trimmed.parse::<i64>() {
        return Ok(rint(n));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        if let (Ok(n), Ok(d)) = (num.trim().parse::<i64>(), den.trim().parse::<i64>()) {
            if d != 0 {
                return Ok(rat(n, d));
            }
        }
    }
    if trimmed.starts_with('[') {
        if let Ok(value) = serde_json::from_str::<serde_json::Value>(trimmed) {
            if let Some(q) = value_to_rat(&value) {
                return Ok(q);
            }
        }
    }
    Err(CliError::new(
        1,
        format!("--{name}: expected an integer, `p/q`, or `[p, q]`, got `{text}`"),
    ))
}

fn resolve_limits(threads: Option<usize>) -> Result<Limits, CliError> {
    let mut limits = match std::env::var(LIMITS_ENV) {
        Ok(text) => serde_json::from_str(&text)
            .map_err(|e| CliError::new(1, format!("{LIMITS_ENV}: {e}")))?,
        Err(std::env::VarError::NotPresent) => Limits::default(),
        Err(e) => return Err(CliError::new(1, format!("{LIMITS_ENV}: {e}"))),
    };
    if let Some(threads) = threads {
        limits.threads = threads.max(1);
    }
    Ok(limits)
}

fn resolve_n0(spec: &str, class: &KClass, model: &ThreefoldModel) -> Result<Rat, CliError> {
    if spec == "auto" {
        return Ok(minimal_admissible_n0(class, model)?);
    }
    parse_rat_arg("n0", spec)
}

fn cmd_model_validate(args: &ModelArgs) -> Result<String, CliError> {
    let model = load_model(&args.model)?;
    pretty(&json!({
        "name": model.name,
        "ok": true,
        "calabi_yau": model.calabi_yau,
    }))
}

fn cmd_model_info(args: &ModelArgs) -> Result<String, CliError> {
    let model = load_model(&args.model)?;
    let chi: Vec<_> = (0..=4)
        .map(|n| rat_value(&model.euler(&KClass::line_bundle(&rint(n)))))
        .collect();
    pretty(&json!({
        "model": model,
        "chi_o_n": chi,
    }))
}

fn cmd_class_info(args: &ClassArgs) -> Result<String, CliError> {
    let model = load_model(&args.model.model)?;
    let class = load_class(&args.class)?;
    let hilbert = HilbertPolynomial::of(&model, &class).ok();
    let truncated = hilbert.as_ref().map(|h| h.truncated());
    pretty(&json!({
        "class": class,
        "integral": model.integrality_check(&class),
        "delta_reduced": rat_value(&class.delta_reduced()),
        "euler": rat_value(&model.euler(&class)),
        "pi": pi(&class).ok(),
        "pi_prime": pi_prime(&class).ok(),
        "hilbert": hilbert,
        "hilbert_truncated_reduced": truncated,
    }))
}

fn cmd_walls(args: &WallsArgs) -> Result<String, CliError> {
    let model = load_model(&args.target.model.model)?;
    let class = load_class(&args.target.class)?;
    let limits = resolve_limits(args.threads)?;
    let (target, region) = match &args.n0 {
        Some(spec) => {
            let n0 = resolve_n0(spec, &class, &model)?;
            let shifted = &class - &KClass::line_bundle(&-&n0);
            let above_line = bg_line(&shifted, &model)?;
            let right_of = Some(pi(&shifted)?.b);
            (
                shifted,
                Region {
                    above_line,
                    right_of,
                },
            )
        }
        None => {
            let mut region = Region::all_of_u();
            if let Some(text) = &args.above_line {
                region.above_line = serde_json::from_str(text)
                    .map_err(|e| CliError::new(1, format!("--above-line: {e}")))?;
            }
            if let Some(text) = &args.right_of {
                region.right_of = Some(parse_rat_arg("right-of", text)?);
            }
            (class, region)
        }
    };
    match wall_candidates(&target, &region, &model, &limits) {
        Ok(walls) => pretty(&walls),
        Err(err @ WallsError::UnboundedSearch(_)) => {
            // The wall list would be incomplete, so none is emitted.
            let payload = pretty(&json!({ "partial": false, "error": err.to_string() }))?;
            Err(CliError {
                code: 2,
                message: err.to_string(),
                stdout: Some(payload),
            })
        }
        Err(err) => Err(err.into()),
    }
}

fn cmd_js_wall(args: &JsWallArgs) -> Result<String, CliError> {
    let model = load_model(&args.target.model.model)?;
    let class = load_class(&args.target.class)?;
    let n = parse_rat_arg("n", &args.n)?;
    pretty(&js_wall(&class, &n, &model)?)
}

fn cmd_safe_line(args: &SafeLineArgs) -> Result<String, CliError> {
    let model = load_model(&args.target.model.model)?;
    let class = load_class(&args.target.class)?;
    let cap = parse_rat_arg("cap", &args.cap)?;
    pretty(&safe_line(&class, &cap, &model)?)
}

fn cmd_dim1_walls(args: &Dim1Args) -> Result<String, CliError> {
    let bound = Ch3Bound::constant(args.bound);
    pretty(&dim1_walls(args.c, args.s, &bound, args.n)?)
}

fn cmd_dim1_report(args: &Dim1Args) -> Result<String, CliError> {
    let bound = Ch3Bound::constant(args.bound);
    pretty(&chamber_report(args.c, args.s, &bound, args.n)?)
}

fn cmd_derive(args: &DeriveArgs) -> Result<String, CliError> {
    let model = load_model(&args.target.model.model)?;
    let class = load_class(&args.target.class)?;
    let limits = resolve_limits(args.threads)?;
    let n0 = resolve_n0(&args.n0, &class, &model)?;
    pretty(&walk_walls(&class, &n0, &model, &limits)?)
}

fn cmd_plot(args: &PlotArgs) -> Result<String, CliError> {
    let text = read_input(&args.input)?;
    let spec = match serde_json::from_str::<PlotSpec>(&text) {
        Ok(spec) => spec,
        Err(spec_err) => match serde_json::from_str::<Vec<Wall>>(&text) {
            Ok(walls) => spec_from_walls(&walls),
            Err(_) => {
                return Err(CliError::new(
                    1,
                    format!("input is neither a plot spec ({spec_err}) nor a wall list"),
                ))
            }
        },
    };
    let svg = render_svg(&spec)?;
    if args.output == "-" {
        return Ok(svg);
    }
    fs::write(&args.output, &svg)
        .map_err(|e| CliError::new(1, format!("cannot write `{}`: {e}", args.output)))?;
    Ok(String::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arguments_parse() {
        assert_eq!(parse_rat_arg("n", "10").unwrap(), rint(10));
        assert_eq!(parse_rat_arg("n", "-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat_arg("n", " [7, 5] ").unwrap(), rat(7, 5));
        assert!(parse_rat_arg("n", "1/0").is_err());
        assert!(parse_rat_arg("n", "ten").is_err());
    }

    #[test]
    fn exit_codes_follow_the_contract() {
        let limit: CliError = WallsError::UnboundedSearch("cap".into()).into();
        assert_eq!(limit.code, 2);
        let nested: CliError = WcfError::Walls(WallsError::UnboundedSearch("cap".into())).into();
        assert_eq!(nested.code, 2);
        let cy: CliError = WcfError::NotCalabiYau("m".into()).into();
        assert_eq!(cy.code, 3);
        let adm: CliError = WcfError::NotAdmissible(rint(1)).into();
        assert_eq!(adm.code, 4);
        let through_dim1: CliError = Dim1Error::Wcf(WcfError::NotCalabiYau("m".into())).into();
        assert_eq!(through_dim1.code, 3);
        let parse: CliError = Dim1Error::NonPositiveC(0).into();
        assert_eq!(parse.code, 1);
    }

    #[test]
    fn models_load_from_builtins_and_json() {
        assert_eq!(load_model("quintic").unwrap(), ThreefoldModel::quintic());
        let inline = serde_json::to_string(&ThreefoldModel::quintic()).unwrap();
        assert_eq!(load_model(&inline).unwrap(), ThreefoldModel::quintic());
        assert!(load_model("no-such-model").is_err());
    }

    #[test]
    fn cli_parses_the_documented_invocations() {
        Cli::try_parse_from([
            "tiltwall",
            "derive",
            "--model",
            "quintic",
            "--class",
            r#"{"r":0,"c":[1,1],"s":[-1,2],"d":[1,6]}"#,
            "--n0",
            "10",
        ])
        .unwrap();
        Cli::try_parse_from([
            "tiltwall", "dim1", "report", "--c", "2", "--s", "-3", "--bound", "-10",
        ])
        .unwrap();
        Cli::try_parse_from([
            "tiltwall", "walls", "--model", "quintic", "--class", "x.json", "--n0", "auto",
            "--threads", "4",
        ])
        .unwrap();
        // The region flags describe a hand-picked region; the shift flag
        // computes one.  They cannot be combined.
        assert!(Cli::try_parse_from([
            "tiltwall", "walls", "--model", "quintic", "--class", "x.json", "--n0", "10",
            "--right-of", "0",
        ])
        .is_err());
    }
}

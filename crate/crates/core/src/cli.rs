// Copyright 2026 The aqss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `aqss` command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit status: 0 success, 1 input or configuration error, 2 failed
//! verification, 3 unsupported structure, 4 resource cap.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::access::{AccessStructure, PlayerSet};
use crate::cover::{
    all_min_clique_covers, build_as_graph, exact_min_clique_cover, greedy_clique_cover, PartialLinkClassification,
    DEFAULT_VERTEX_CAP,
};
use crate::dot::{render_dot, DotSubject};
use crate::dsl::parse_access_structure;
use crate::error::{Error, Result};
use crate::qudit::{choose_field, encode_tree, entangle_with_reference, Owner, DEFAULT_MAX_AMPLITUDES, TOLERANCE};
use crate::scheme::{build_scheme, resident_share_count, SchemeTree};
use crate::verify::{verify_scheme, VerificationMode, VerificationReport, VerifyOptions};

/// Environment variable overriding the default amplitude cap.
pub const MAX_AMPLITUDES_ENV: &str = "AQSS_MAX_AMPLITUDES";
/// Smallest accepted amplitude cap.
pub const MIN_AMPLITUDE_CAP: usize = 1 << 10;
/// Upper bound on classifications printed by `lambda --all`.
pub const ALL_COVERS_LIMIT: usize = 10_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "aqss",
    version,
    about = "Assisted quantum secret sharing: analysis, construction and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a structure and report overlap violations.
    Check(CommonArgs),
    /// Minimum number of partially linked classes.
    Lambda {
        #[command(flatten)]
        common: CommonArgs,
        /// Print every minimum classification.
        #[arg(long)]
        all: bool,
    },
    /// Build the scheme tree and emit it as JSON.
    Build {
        #[command(flatten)]
        common: CommonArgs,
        /// Write the tree to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a maximally entangled secret and summarize the state.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = TOLERANCE)]
        tolerance: f64,
    },
    /// Certify recoverability, privacy and resident-share importance.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value = "auto", value_parser = parse_mode)]
        mode: VerificationMode,
    },
    /// Emit Graphviz DOT.
    Render {
        /// File path, `-` for stdin, or inline structure text.
        input: String,
        #[arg(long, value_enum)]
        what: RenderTarget,
        #[arg(long, value_enum, default_value = "dot")]
        format: DotFormat,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// File path, `-` for stdin, or inline structure text.
    input: String,
    #[arg(long, value_enum, default_value = "exact")]
    method: Method,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Amplitude cap; overrides AQSS_MAX_AMPLITUDES.
    #[arg(long)]
    max_amplitudes: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderTarget {
    AsGraph,
    Scheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotFormat {
    Dot,
}

fn parse_mode(s: &str) -> std::result::Result<VerificationMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Validated run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub tolerance: f64,
    pub max_amplitudes: usize,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Resolves the amplitude cap (flag, then environment, then default) and
    /// checks the ranges.
    pub fn resolve(
        method: Method,
        tolerance: f64,
        flag_cap: Option<usize>,
        env_cap: Option<&str>,
        format: OutputFormat,
    ) -> Result<Self> {
        let max_amplitudes = match (flag_cap, env_cap) {
            (Some(cap), _) => cap,
            (None, Some(text)) => text
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{MAX_AMPLITUDES_ENV}={text:?} is not a positive integer")))?,
            (None, None) => DEFAULT_MAX_AMPLITUDES,
        };
        let tolerance_ok = tolerance > 0.0 && tolerance <= 1e-3;
        if !tolerance_ok {
            return Err(Error::Config(format!("tolerance {tolerance} outside (0, 1e-3]")));
        }
        if max_amplitudes < MIN_AMPLITUDE_CAP {
            return Err(Error::Config(format!(
                "amplitude cap {max_amplitudes} is below the minimum {MIN_AMPLITUDE_CAP}"
            )));
        }
        Ok(RunConfig {
            method,
            tolerance,
            max_amplitudes,
            format,
        })
    }
}

/// Exit status for a pipeline error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::UnsupportedClassStructure { .. }
        | Error::UnsupportedStructure(_)
        | Error::UnsupportedNode { .. }
        | Error::NoCloningViolated(..) => EXIT_UNSUPPORTED,
        Error::ResourceCap { .. } => EXIT_RESOURCE,
        _ => EXIT_INPUT,
    }
}

/// Runs the CLI with explicit streams; `stdin` feeds the `-` input.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let env_cap = std::env::var(MAX_AMPLITUDES_ENV).ok();
    match execute(cli.command, env_cap.as_deref(), stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::VertexCapExceeded { .. } = e {
                let _ = writeln!(stderr, "hint: use --method greedy for large structures");
            }
            exit_code(&e)
        }
    }
}

fn execute(command: Command, env_cap: Option<&str>, stdin: &mut dyn Read, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Check(c) => {
            let (structure, _) = load(&c, TOLERANCE, env_cap, OutputFormat::Human, stdin)?;
            let format = c.format.unwrap_or(OutputFormat::Human);
            emit(out, &cmd_check(&structure, format))?;
        }
        Command::Lambda { common, all } => {
            let (structure, config) = load(&common, TOLERANCE, env_cap, OutputFormat::Human, stdin)?;
            emit(out, &cmd_lambda(&structure, &config, all)?)?;
        }
        Command::Build { common, out: path } => {
            let (structure, config) = load(&common, TOLERANCE, env_cap, OutputFormat::Json, stdin)?;
            let (_, tree) = pipeline(&structure, config.method)?;
            let json = format!("{}\n", tree.to_json());
            match path {
                Some(path) => write_file(&path, &json)?,
                None => emit(out, &json)?,
            }
        }
        Command::Simulate { common, tolerance } => {
            let (structure, config) = load(&common, tolerance, env_cap, OutputFormat::Human, stdin)?;
            emit(out, &cmd_simulate(&structure, &config)?)?;
        }
        Command::Verify {
            common,
            json,
            tolerance,
            mode,
        } => {
            let (structure, config) = load(&common, tolerance, env_cap, OutputFormat::Json, stdin)?;
            let report = cmd_verify(&structure, &config, mode)?;
            let text = format!("{}\n", report.to_json());
            if let Some(path) = json {
                write_file(&path, &text)?;
            }
            match config.format {
                OutputFormat::Json => emit(out, &text)?,
                OutputFormat::Human => emit(out, &verify_table(&report))?,
            }
            return Ok(if report.overall { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
        Command::Render {
            input,
            what,
            format: DotFormat::Dot,
            method,
        } => {
            let structure = parse_access_structure(&read_input(&input, stdin)?)?;
            emit(out, &cmd_render(&structure, what, method)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn load(
    args: &CommonArgs,
    tolerance: f64,
    env_cap: Option<&str>,
    default_format: OutputFormat,
    stdin: &mut dyn Read,
) -> Result<(AccessStructure, RunConfig)> {
    let config = RunConfig::resolve(
        args.method,
        tolerance,
        args.max_amplitudes,
        env_cap,
        args.format.unwrap_or(default_format),
    )?;
    let structure = parse_access_structure(&read_input(&args.input, stdin)?)?;
    Ok((structure, config))
}

/// `-` reads stdin, an existing path reads the file, anything else is
/// parsed as inline text.
fn read_input(input: &str, stdin: &mut dyn Read) -> Result<String> {
    if input == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Error::Io(format!("stdin: {e}")))?;
        return Ok(text);
    }
    let path = Path::new(input);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{input}: {e}")));
    }
    if !input.contains(':') && !input.trim_start().starts_with('{') {
        return Err(Error::Io(format!("{input}: no such file")));
    }
    Ok(input.to_string())
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Io(format!("stdout: {e}")))
}

fn classify(structure: &AccessStructure, method: Method) -> Result<PartialLinkClassification> {
    let graph = build_as_graph(structure);
    match method {
        Method::Exact => exact_min_clique_cover(&graph),
        Method::Greedy => Ok(greedy_clique_cover(&graph)),
    }
}

fn pipeline(structure: &AccessStructure, method: Method) -> Result<(PartialLinkClassification, SchemeTree)> {
    let classification = classify(structure, method)?;
    let tree = build_scheme(structure, &classification)?;
    Ok((classification, tree))
}

fn set_labels(sets: &[PlayerSet]) -> Vec<String> {
    sets.iter().map(PlayerSet::to_string).collect()
}

fn class_labels(structure: &AccessStructure, classification: &PartialLinkClassification) -> Vec<Vec<String>> {
    let minimal = structure.minimal_sets();
    classification
        .classes()
        .iter()
        .map(|class| class.iter().map(|&i| minimal[i].to_string()).collect())
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    format!("{}\n", serde_json::to_string_pretty(value).expect("values serialize"))
}

#[derive(Serialize)]
struct CheckReport {
    players: Vec<String>,
    normal_form: Vec<String>,
    overlap_violations: Vec<[String; 2]>,
    conventional_qss_ok: bool,
}

fn cmd_check(structure: &AccessStructure, format: OutputFormat) -> String {
    let minimal = structure.minimal_sets();
    let report = CheckReport {
        players: structure.universe().labels(),
        normal_form: set_labels(minimal),
        overlap_violations: structure
            .check_pairwise_overlap()
            .into_iter()
            .map(|(a, b)| [minimal[a].to_string(), minimal[b].to_string()])
            .collect(),
        conventional_qss_ok: structure.check_pairwise_overlap().is_empty(),
    };
    match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Human => {
            let mut s = String::new();
            s.push_str(&format!("players              {}\n", report.players.join(" ")));
            s.push_str(&format!("normal form          {}\n", report.normal_form.join(", ")));
            let violations: Vec<String> = report
                .overlap_violations
                .iter()
                .map(|[a, b]| format!("{a}|{b}"))
                .collect();
            let shown = if violations.is_empty() {
                "none".to_string()
            } else {
                violations.join(", ")
            };
            s.push_str(&format!("overlap violations   {shown}\n"));
            s.push_str(&format!("conventional_qss_ok  {}\n", report.conventional_qss_ok));
            s
        }
    }
}

#[derive(Serialize)]
struct LambdaReport {
    method: Method,
    lambda: usize,
    classifications: Vec<Vec<Vec<String>>>,
}

fn cmd_lambda(structure: &AccessStructure, config: &RunConfig, all: bool) -> Result<String> {
    let covers = match (config.method, all) {
        (Method::Exact, true) => {
            all_min_clique_covers(&build_as_graph(structure), DEFAULT_VERTEX_CAP, ALL_COVERS_LIMIT)?
        }
        (method, _) => vec![classify(structure, method)?],
    };
    let report = LambdaReport {
        method: config.method,
        lambda: covers.first().map_or(0, PartialLinkClassification::size),
        classifications: covers.iter().map(|c| class_labels(structure, c)).collect(),
    };
    Ok(match config.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Human => {
            let label = match config.method {
                Method::Exact => "lambda",
                Method::Greedy => "classes (greedy)",
            };
            let mut s = format!("{label}  {}\n", report.lambda);
            for classes in &report.classifications {
                let text: Vec<String> = classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect();
                s.push_str(&format!("  {}\n", text.join(" ")));
            }
            s
        }
    })
}

#[derive(Serialize)]
struct SimulationSummary {
    p: usize,
    share_qudits: usize,
    environment_qudits: usize,
    total_qudits: usize,
    stored_amplitudes: usize,
    norm: f64,
    isometric: bool,
    shares: BTreeMap<String, usize>,
}

fn cmd_simulate(structure: &AccessStructure, config: &RunConfig) -> Result<String> {
    let (_, tree) = pipeline(structure, config.method)?;
    let field = choose_field(&tree, 2);
    let (state, map) = encode_tree(&entangle_with_reference(field), &tree, field, config.max_amplitudes)?;
    let norm = state.norm();
    let mut shares = BTreeMap::new();
    for (owner, count) in map.share_counts() {
        let name = match owner {
            Owner::Player(p) => p.to_string(),
            Owner::Resident(_) => "dealer".to_string(),
        };
        *shares.entry(name).or_insert(0) += count;
    }
    let summary = SimulationSummary {
        p: field.p(),
        share_qudits: map.len(),
        environment_qudits: map.environment().len(),
        total_qudits: state.qudit_count(),
        stored_amplitudes: state.nonzero_count(),
        norm,
        isometric: (norm - 1.0).abs() <= config.tolerance,
        shares,
    };
    Ok(match config.format {
        OutputFormat::Json => to_json(&summary),
        OutputFormat::Human => {
            let mut s = String::new();
            s.push_str(&format!("field              GF({})\n", summary.p));
            s.push_str(&format!("share qudits       {}\n", summary.share_qudits));
            s.push_str(&format!("environment qudits {}\n", summary.environment_qudits));
            s.push_str(&format!(
                "total qudits       {} (with reference)\n",
                summary.total_qudits
            ));
            s.push_str(&format!("stored amplitudes  {}\n", summary.stored_amplitudes));
            s.push_str(&format!("norm               {:.12}\n", summary.norm));
            s.push_str(&format!("isometric          {}\n", summary.isometric));
            for (owner, count) in &summary.shares {
                s.push_str(&format!("  {owner:<16} {count}\n"));
            }
            s
        }
    })
}

fn cmd_verify(structure: &AccessStructure, config: &RunConfig, mode: VerificationMode) -> Result<VerificationReport> {
    let (classification, tree) = pipeline(structure, config.method)?;
    let options = VerifyOptions {
        mode,
        tolerance: config.tolerance,
        max_amplitudes: config.max_amplitudes,
    };
    debug_assert_eq!(resident_share_count(&tree) + 1, classification.size());
    verify_scheme(structure, &classification, &tree, &options)
}

fn compact(labels: &[String]) -> String {
    if labels.iter().all(|l| l.chars().count() == 1) {
        labels.concat()
    } else {
        labels.join(" ")
    }
}

fn verify_table(report: &VerificationReport) -> String {
    let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
    let mut s = String::new();
    s.push_str(&format!("lambda           {}\n", report.lambda));
    s.push_str(&format!("resident shares  {}\n", report.resident_shares));
    s.push_str(&format!("share qudits     {}\n", report.qudits));
    s.push_str(&format!("field            GF({})\n", report.p));
    s.push_str("recoverability\n");
    for e in &report.recoverability {
        let set = if e.with_resident {
            format!("{} + dealer", compact(&e.set))
        } else {
            compact(&e.set)
        };
        s.push_str(&format!(
            "  {set:<24} fidelity {:.12}  {}\n",
            e.fidelity,
            verdict(e.pass)
        ));
    }
    s.push_str("privacy\n");
    for e in &report.privacy {
        s.push_str(&format!(
            "  {:<24} distance {:.3e}  {}\n",
            compact(&e.set),
            e.trace_distance,
            verdict(e.pass)
        ));
    }
    if !report.importance.is_empty() {
        s.push_str("importance\n");
        for e in &report.importance {
            s.push_str(&format!(
                "  resident#{:<14} witness {}  {}\n",
                e.resident,
                compact(&e.witness),
                verdict(e.pass)
            ));
        }
    }
    s.push_str(&format!("overall          {}\n", verdict(report.overall)));
    s
}

fn cmd_render(structure: &AccessStructure, what: RenderTarget, method: Method) -> Result<String> {
    Ok(match what {
        RenderTarget::AsGraph => {
            let graph = build_as_graph(structure);
            let labels = structure
                .minimal_sets()
                .iter()
                .enumerate()
                .map(|(i, s)| (i, s.to_string()))
                .collect();
            render_dot(DotSubject::Graph(&graph), &labels)
        }
        RenderTarget::Scheme => {
            let (_, tree) = pipeline(structure, method)?;
            render_dot(DotSubject::Scheme(&tree), &BTreeMap::new())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        call_with_stdin(args, "")
    }

    fn call_with_stdin(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("aqss").chain(args.iter().copied());
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_resolution_order() {
        let r = |flag, env| RunConfig::resolve(Method::Exact, 1e-9, flag, env, OutputFormat::Human);
        assert_eq!(r(None, None).unwrap().max_amplitudes, DEFAULT_MAX_AMPLITUDES);
        assert_eq!(r(None, Some("4096")).unwrap().max_amplitudes, 4096);
        assert_eq!(r(Some(2048), Some("4096")).unwrap().max_amplitudes, 2048);
        assert!(matches!(r(None, Some("lots")), Err(Error::Config(_))));
        assert!(matches!(r(Some(1000), None), Err(Error::Config(_))));
        for t in [0.0, -1e-9, 2e-3, f64::NAN] {
            let e = RunConfig::resolve(Method::Exact, t, None, None, OutputFormat::Human);
            assert!(matches!(e, Err(Error::Config(_))), "{t}");
        }
    }

    #[test]
    fn exit_codes_by_error() {
        assert_eq!(
            exit_code(&Error::UnsupportedClassStructure { class: "x".into() }),
            EXIT_UNSUPPORTED
        );
        assert_eq!(exit_code(&Error::ResourceCap { needed: 9, cap: 1 }), EXIT_RESOURCE);
        assert_eq!(exit_code(&Error::EmptyStructure), EXIT_INPUT);
    }

    #[test]
    fn check_reports_violations() {
        let (code, out, _) = call(&["check", "structure: ABC, BD, EFG", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["conventional_qss_ok"], false);
        assert_eq!(v["overlap_violations"].as_array().unwrap().len(), 2);
        let (_, out, _) = call(&["check", "structure: ABC, ADE, BDF", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["conventional_qss_ok"], true);
    }

    #[test]
    fn malformed_input_reports_position() {
        let (code, _, err) = call(&["check", "structure: AB,, C"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn stdin_and_missing_files() {
        let (code, out, _) = call_with_stdin(&["lambda", "-"], "structure: ABC, BD, EFG\n");
        assert_eq!(code, 0);
        assert!(out.starts_with("lambda  2\n"), "{out}");
        let (code, _, err) = call(&["check", "no/such/file.aqss"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("no such file"));
    }

    #[test]
    fn lambda_all_and_greedy() {
        let (_, out, _) = call(&["lambda", "structure: ABC, BD, EFG", "--all", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["lambda"], 2);
        assert_eq!(v["classifications"][0], serde_json::json!([["ABC", "BD"], ["EFG"]]));
        let (code, out, _) = call(&["lambda", "structure: ABC, BD, EFG", "--method", "greedy"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("classes (greedy)  2"), "{out}");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(call(&["verify", "structure: AB", "--mode", "fast"]).0, EXIT_INPUT);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn render_scheme_has_dealer_leaf() {
        let (code, out, _) = call(&[
            "render",
            "structure: ABC, BD, EFG",
            "--what",
            "scheme",
            "--format",
            "dot",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph scheme {"));
        assert!(out.contains("dealer"));
        let (_, out, _) = call(&["render", "structure: ABC, BD, EFG", "--what", "as-graph"]);
        assert!(out.contains("v0 -- v1;"));
    }

    #[test]
    fn simulate_summary() {
        let (code, out, _) = call(&["simulate", "structure: ABC, BD, EFG", "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["p"], 3);
        assert_eq!(v["share_qudits"], 10);
        assert_eq!(v["stored_amplitudes"], 6561);
        assert_eq!(v["isometric"], true);
        assert_eq!(v["shares"]["dealer"], 1);
    }

    #[test]
    fn resource_cap_exit() {
        let (code, _, err) = call(&[
            "verify",
            "structure: ABC, BD, EFG",
            "--mode",
            "full",
            "--max-amplitudes",
            "1024",
        ]);
        assert_eq!(code, EXIT_RESOURCE, "{err}");
    }
}

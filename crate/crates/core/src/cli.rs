//! Command-line front end: configuration, argument parsing and reports.
//!
//! [`run`] takes the argument vector and an environment lookup and returns
//! the exit code with the text to print, so that the binary stays a thin
//! wrapper and every command is testable in-process.

use std::fs;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::check::{check_source, normalize_global, DiagnosticCode, ModuleReport, Severity};
use crate::cof;
use crate::cubelab::lifting::{
    build_open_box, check_equivariant_lifting, open_box_non_example, CubeSetMap, LiftBounds, LiftVerdict, OpenBoxSpec,
    Subobject,
};
use crate::cubelab::{
    automorphisms, cube_quotient, ez_factor, find_section, iso_search, representable, simplex_power, standard_simplex,
    triangulate, Coord, CubeMap, CubicalSet, GroupAction, IsoOutcome, LabError, SimplicialSet,
};
use crate::parse::parse_cof_free;
use crate::print::{print_cof_in, print_term};
use crate::quote::{Quoter, DEFAULT_K_MAX};

pub const DEFAULT_DIM: usize = 3;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputMode {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub k_max: usize,
    pub dim: usize,
    pub budget: u64,
    pub output: OutputMode,
}

impl Default for Config {
    fn default() -> Config {
        Config { k_max: DEFAULT_K_MAX, dim: DEFAULT_DIM, budget: DEFAULT_BUDGET, output: OutputMode::Human }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid value {value:?} for {key}: {reason}")]
    Invalid { key: String, value: String, reason: String },
}

fn parse_setting<T>(key: &str, value: &str, min: T) -> Result<T, ConfigError>
where
    T: std::str::FromStr + PartialOrd + std::fmt::Display + Copy,
{
    let invalid = |reason: String| ConfigError::Invalid { key: key.into(), value: value.into(), reason };
    let v: T = value.trim().parse().map_err(|_| invalid("not a natural number".into()))?;
    if v < min {
        return Err(invalid(format!("must be at least {min}")));
    }
    Ok(v)
}

impl Config {
    /// Flags override environment variables, which override defaults.
    pub fn load(flags: &GlobalFlags, env: &dyn Fn(&str) -> Option<String>) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        if let Some(v) = env("EQCTT_KMAX") {
            c.k_max = parse_setting("EQCTT_KMAX", &v, 1)?;
        }
        if let Some(v) = env("EQCTT_DIM") {
            c.dim = parse_setting("EQCTT_DIM", &v, 1)?;
        }
        if let Some(v) = env("EQCTT_BUDGET") {
            c.budget = parse_setting("EQCTT_BUDGET", &v, 1)?;
        }
        if let Some(v) = &flags.kmax {
            c.k_max = parse_setting("--kmax", v, 1)?;
        }
        if let Some(v) = &flags.dim {
            c.dim = parse_setting("--dim", v, 1)?;
        }
        if let Some(v) = &flags.budget {
            c.budget = parse_setting("--budget", v, 1)?;
        }
        if flags.json {
            c.output = OutputMode::Json;
        }
        Ok(c)
    }

    pub fn quoter(&self) -> Quoter {
        Quoter::new(self.k_max)
    }
}

#[derive(Debug, Args, Default)]
pub struct GlobalFlags {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest composition arity whose permutations are enumerated.
    #[arg(long, global = true, value_name = "N")]
    pub kmax: Option<String>,
    /// Truncation dimension for cubical-set computations.
    #[arg(long, global = true, value_name = "N")]
    pub dim: Option<String>,
    /// Node cap for combinatorial searches.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "eqctt", version, about = "Equivariant cartesian cubical type checker and cube lab")]
struct Cli {
    #[command(flatten)]
    flags: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Type-check one or more source files.
    Check { files: Vec<String> },
    /// Print the normal form of a definition.
    Normalize {
        file: String,
        #[arg(long = "def")]
        def: String,
    },
    /// Decide cofibration entailment.
    Cof {
        #[command(subcommand)]
        command: CofCommand,
    },
    /// Finite cubical-set computations.
    Lab {
        #[command(subcommand)]
        command: LabCommand,
    },
}

#[derive(Debug, Subcommand)]
enum CofCommand {
    /// Does the hypothesis entail the goal?
    Entails { hyp: String, goal: String },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
enum LabCommand {
    /// Count the maps I^m → I^n.
    HomCount { m: usize, n: usize },
    /// List the automorphisms of I^n.
    Automorphisms { n: usize },
    /// Factor a cube map as a split epi followed by a mono.
    EzFactor {
        /// Output coordinates, e.g. '(x1, 0, x2)'.
        map: String,
        /// Domain dimension (defaults to the largest variable used).
        #[arg(long = "from")]
        from: Option<usize>,
    },
    /// Quotient I^n by a group of axis permutations.
    Quotient {
        n: usize,
        /// 'S' for the full symmetric group, 'trivial' for the trivial one.
        #[arg(long, default_value = "S")]
        group: String,
    },
    /// Triangulate a cubical set expression.
    Triangulate { space: String },
    /// Search for an isomorphism between two expressions.
    Iso {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Bounded check of equivariant uniform lifting against open boxes.
    /// The number of box directions is bounded by `--kmax` (default 1).
    LiftCheck {
        /// 'X->1', 'id(X)' or 'box->1'.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        nmax: usize,
    },
    /// Build an open box and report its inclusion into I^(n+k).
    OpenBox {
        n: usize,
        k: usize,
        /// Generators of C separated by ';', or 'empty' / 'full'.
        #[arg(long, default_value = "empty")]
        sub: String,
        /// The point ζ : I^n → I^k, e.g. '(0)'.
        #[arg(long)]
        zeta: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: msg.into() }
    }
}

/// Run the command line `args` (including the program name).
pub fn run<I, S>(args: I, env: &dyn Fn(&str) -> Option<String>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(code, text) } else { Outcome::usage(text) };
        }
    };
    let config = match Config::load(&cli.flags, env) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    match cli.command {
        Command::Check { files } => run_check(&files, &config),
        Command::Normalize { file, def } => run_normalize(&file, &def, &config),
        Command::Cof { command: CofCommand::Entails { hyp, goal } } => run_entails(&hyp, &goal, &config),
        Command::Lab { command } => {
            let box_k = if cli.flags.kmax.is_some() { config.k_max } else { 1 };
            run_lab(command, box_k, &config)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn report_code(r: &ModuleReport) -> i32 {
    let bound =
        r.diagnostics().any(|d| d.severity == Severity::Error && d.code == DiagnosticCode::PermutationBoundExceeded);
    if r.all_ok() {
        EXIT_OK
    } else if bound {
        EXIT_BUDGET
    } else {
        EXIT_FAILURE
    }
}

fn human_report(r: &ModuleReport) -> String {
    let mut out = String::new();
    for d in &r.decls {
        for diag in &d.diagnostics {
            out.push_str(&format!("{}:{diag}\n", r.file));
        }
    }
    let ok = r.decls.iter().filter(|d| d.diagnostics.iter().all(|x| x.severity != Severity::Error)).count();
    out.push_str(&format!("{}: {ok}/{} declarations ok\n", r.file, r.decls.len()));
    out
}

/// Check each file; files are processed concurrently and reported in order.
pub fn run_check(files: &[String], config: &Config) -> Outcome {
    if files.is_empty() {
        return Outcome::usage("error: no input files\n");
    }
    let sources: Vec<Result<String, String>> =
        files.iter().map(|f| fs::read_to_string(f).map_err(|e| format!("error: cannot read {f}: {e}\n"))).collect();
    if let Some(Err(e)) = sources.iter().find(|s| s.is_err()) {
        return Outcome::usage(e.clone());
    }
    let quoter = config.quoter();
    let reports: Vec<ModuleReport> = std::thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .zip(&sources)
            .map(|(f, src)| {
                let src = src.as_ref().expect("read above");
                s.spawn(move || check_source(f, src, quoter).report)
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
    });
    let code = reports.iter().map(report_code).max().unwrap_or(EXIT_OK);
    let stdout = match config.output {
        OutputMode::Json if reports.len() == 1 => to_json(&reports[0]),
        OutputMode::Json => to_json(&reports),
        OutputMode::Human => reports.iter().map(human_report).collect(),
    };
    Outcome::ok(code, stdout)
}

pub fn run_normalize(file: &str, def: &str, config: &Config) -> Outcome {
    let src = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(format!("error: cannot read {file}: {e}\n")),
    };
    let checked = check_source(file, &src, config.quoter());
    let failed = checked
        .report
        .decls
        .iter()
        .any(|d| d.name == def && d.diagnostics.iter().any(|x| x.severity == Severity::Error));
    let fail = |msg: String| {
        let stdout = match config.output {
            OutputMode::Json => to_json(&json!({ "file": file, "def": def, "error": msg })),
            OutputMode::Human => String::new(),
        };
        Outcome { code: EXIT_FAILURE, stdout, stderr: format!("error: {msg}\n") }
    };
    if failed {
        return fail(format!("definition {def} does not type-check"));
    }
    match normalize_global(&checked.globals, def, config.quoter()) {
        None => fail(format!("unknown definition {def}")),
        Some(Err(e)) => Outcome { code: EXIT_BUDGET, stdout: String::new(), stderr: format!("error: {e}\n") },
        Some(Ok(t)) => {
            let nf = print_term(&t);
            let stdout = match config.output {
                OutputMode::Json => to_json(&json!({ "file": file, "def": def, "normal_form": nf })),
                OutputMode::Human => format!("{nf}\n"),
            };
            Outcome::ok(EXIT_OK, stdout)
        }
    }
}

pub fn run_entails(hyp: &str, goal: &str, config: &Config) -> Outcome {
    let mut names = Vec::new();
    let parse = |s: &str, names: &mut Vec<String>| {
        if s.trim().is_empty() {
            Ok(crate::syntax::Cof::Top)
        } else {
            parse_cof_free(s, names)
        }
    };
    let h = match parse(hyp, &mut names) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: hypothesis: {e}\n")),
    };
    let g = match parse(goal, &mut names) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: goal: {e}\n")),
    };
    let result = cof::entails(std::slice::from_ref(&h), &g);
    // Printing expects innermost-first scope.
    let scope: Vec<String> = names.iter().rev().cloned().collect();
    let dnf: Vec<String> = cof::canonical_dnf(&h).iter().map(|c| print_cof_in(&scope, &c.to_cof())).collect();
    let stdout = match config.output {
        OutputMode::Json => to_json(&json!({
            "hypothesis": hyp,
            "goal": goal,
            "entails": result,
            "hypothesis_conjuncts": dnf,
        })),
        OutputMode::Human => format!("{result}\n"),
    };
    Outcome::ok(if result { EXIT_OK } else { EXIT_FAILURE }, stdout)
}

/// A cubelab report.
#[derive(Debug, Serialize)]
pub struct LabReport {
    pub operation: String,
    pub inputs: Json,
    pub bounds: Json,
    pub result: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation: Option<Json>,
    #[serde(rename = "cell-counts", skip_serializing_if = "Option::is_none")]
    pub cell_counts: Option<Json>,
}

struct LabOutput {
    code: i32,
    report: LabReport,
    human: String,
}

fn bounds(config: &Config, extra: Json) -> Json {
    let mut b = json!({
        "certificate": "bounded certificate",
        "D": config.dim,
        "budget": config.budget,
    });
    if let (Some(obj), Json::Object(more)) = (b.as_object_mut(), extra) {
        obj.extend(more);
    }
    b
}

fn lab_error_code(e: &LabError) -> i32 {
    match e {
        LabError::BoundExceeded { .. } | LabError::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn run_lab(cmd: LabCommand, box_k: usize, config: &Config) -> Outcome {
    let operation = match &cmd {
        LabCommand::HomCount { .. } => "hom-count",
        LabCommand::Automorphisms { .. } => "automorphisms",
        LabCommand::EzFactor { .. } => "ez-factor",
        LabCommand::Quotient { .. } => "quotient",
        LabCommand::Triangulate { .. } => "triangulate",
        LabCommand::Iso { .. } => "iso",
        LabCommand::LiftCheck { .. } => "lift-check",
        LabCommand::OpenBox { .. } => "open-box",
    };
    let raw_inputs = serde_json::to_value(&cmd).expect("serializable");
    match lab(cmd, box_k, config) {
        Ok(out) => {
            let stdout = match config.output {
                OutputMode::Json => to_json(&out.report),
                OutputMode::Human => out.human,
            };
            Outcome::ok(out.code, stdout)
        }
        Err(e) => {
            let code = lab_error_code(&e);
            let report = LabReport {
                operation: operation.into(),
                inputs: raw_inputs,
                bounds: bounds(config, json!({})),
                result: json!({ "error": e.to_string() }),
                witness: None,
                refutation: None,
                cell_counts: None,
            };
            let stdout = match config.output {
                OutputMode::Json => to_json(&report),
                OutputMode::Human => String::new(),
            };
            Outcome { code, stdout, stderr: format!("error: {e}\n") }
        }
    }
}

/// Refuse enumerations larger than the node budget.
fn guard_size(config: &Config, size: u128) -> Result<(), LabError> {
    if size > config.budget as u128 {
        return Err(LabError::BudgetExceeded { budget: config.budget });
    }
    Ok(())
}

fn lab(cmd: LabCommand, box_k: usize, config: &Config) -> Result<LabOutput, LabError> {
    match cmd {
        LabCommand::HomCount { m, n } => {
            let size = (m as u128 + 2).checked_pow(n as u32).unwrap_or(u128::MAX);
            guard_size(config, size)?;
            let count = crate::cubelab::enumerate_hom(m, n).len();
            Ok(LabOutput {
                code: EXIT_OK,
                human: format!("{count}\n"),
                report: LabReport {
                    operation: "hom-count".into(),
                    inputs: json!({ "m": m, "n": n }),
                    bounds: bounds(config, json!({})),
                    result: json!({ "count": count, "closed_form": size as u64 }),
                    witness: None,
                    refutation: None,
                    cell_counts: None,
                },
            })
        }
        LabCommand::Automorphisms { n } => {
            let size = (n as u128 + 2).checked_pow(n as u32).unwrap_or(u128::MAX);
            guard_size(config, size.saturating_mul(size))?;
            let autos = automorphisms(n);
            let perms: Vec<Vec<usize>> = autos.iter().filter_map(CubeMap::axis_permutation).collect();
            let shown: Vec<String> = autos.iter().map(ToString::to_string).collect();
            Ok(LabOutput {
                code: EXIT_OK,
                human: format!("{} automorphisms of I^{n}\n{}\n", autos.len(), shown.join("\n")),
                report: LabReport {
                    operation: "automorphisms".into(),
                    inputs: json!({ "n": n }),
                    bounds: bounds(config, json!({})),
                    result: json!({
                        "count": autos.len(),
                        "all_axis_permutations": perms.len() == autos.len(),
                        "maps": shown,
                        "permutations": perms,
                    }),
                    witness: None,
                    refutation: None,
                    cell_counts: None,
                },
            })
        }
        LabCommand::EzFactor { map, from } => {
            let f = parse_cube_map(&map, from)?;
            let ez = ez_factor(&f);
            let section = find_section(&ez.e);
            let recomposed = ez.m.after(&ez.e) == f;
            let human = format!(
                "f = {f} : I^{} → I^{}\ne = {} : I^{} → I^{}\nm = {} : I^{} → I^{}\nsection of e: {}\n",
                f.dom,
                f.cod,
                ez.e,
                ez.e.dom,
                ez.e.cod,
                ez.m,
                ez.m.dom,
                ez.m.cod,
                section.as_ref().map_or("none".to_string(), ToString::to_string)
            );
            Ok(LabOutput {
                code: if recomposed && section.is_some() { EXIT_OK } else { EXIT_FAILURE },
                human,
                report: LabReport {
                    operation: "ez-factor".into(),
                    inputs: json!({ "map": f.to_string(), "dom": f.dom, "cod": f.cod }),
                    bounds: bounds(config, json!({})),
                    result: json!({
                        "e": { "map": ez.e.to_string(), "dom": ez.e.dom, "cod": ez.e.cod },
                        "m": { "map": ez.m.to_string(), "dom": ez.m.dom, "cod": ez.m.cod },
                        "f_equals_m_after_e": recomposed,
                        "m_is_mono": ez.m.is_mono(),
                    }),
                    witness: section.map(|s| json!({ "section": s.to_string() })),
                    refutation: None,
                    cell_counts: None,
                },
            })
        }
        LabCommand::Quotient { n, group } => {
            let g = parse_group(&group, n)?;
            let (x, _) = representable(n, config.dim);
            let q = cube_quotient(n, &g, config.dim)?;
            q.check_functorial()?;
            Ok(LabOutput {
                code: EXIT_OK,
                human: format!("I^{n}/{group}: level sizes {:?} (I^{n}: {:?}), D = {}\n", q.sizes, x.sizes, config.dim),
                report: LabReport {
                    operation: "quotient".into(),
                    inputs: json!({ "n": n, "group": g.elements }),
                    bounds: bounds(config, json!({})),
                    result: json!({ "functorial": true, "orbits": q.labels }),
                    witness: None,
                    refutation: None,
                    cell_counts: Some(json!({ "quotient": q.sizes, "cube": x.sizes })),
                },
            })
        }
        LabCommand::Triangulate { space } => {
            let x = match parse_space(&space, config.dim)? {
                Space::Cubical(x) => x,
                Space::Simplicial(_) => return Err(LabError::Invalid(format!("{space} is already simplicial"))),
            };
            let t = triangulate(&x);
            t.check_functorial()?;
            let nondeg: Vec<usize> = (0..=config.dim).map(|d| t.nondegenerate(d).len()).collect();
            Ok(LabOutput {
                code: EXIT_OK,
                human: format!(
                    "T({space}): level sizes {:?}, non-degenerate {:?}, D = {}\n",
                    t.sizes, nondeg, config.dim
                ),
                report: LabReport {
                    operation: "triangulate".into(),
                    inputs: json!({ "space": space }),
                    bounds: bounds(config, json!({})),
                    result: json!({ "simplicial_identities": true, "nondegenerate": nondeg }),
                    witness: None,
                    refutation: None,
                    cell_counts: Some(json!({ "cubical": x.sizes, "simplicial": t.sizes })),
                },
            })
        }
        LabCommand::Iso { lhs, rhs } => {
            let (l, r) = (parse_space(&lhs, config.dim)?, parse_space(&rhs, config.dim)?);
            let (outcome, counts) = match (&l, &r) {
                (Space::Cubical(a), Space::Cubical(b)) => {
                    (iso_search(a, b, config.budget)?, json!({ "lhs": a.sizes, "rhs": b.sizes }))
                }
                (Space::Simplicial(a), Space::Simplicial(b)) => {
                    (iso_search(a, b, config.budget)?, json!({ "lhs": a.sizes, "rhs": b.sizes }))
                }
                _ => return Err(LabError::Invalid("cannot compare a cubical set with a simplicial set".into())),
            };
            let labels = |s: &Space| match s {
                Space::Cubical(x) => x.labels.clone(),
                Space::Simplicial(x) => x.labels.clone(),
            };
            let (ll, rl) = (labels(&l), labels(&r));
            let (code, result, witness, refutation, human) = match outcome {
                IsoOutcome::Found(phi) => {
                    let top = phi.len() - 1;
                    let pairs: Vec<Json> = phi
                        .iter()
                        .enumerate()
                        .map(|(d, lv)| {
                            let m: serde_json::Map<String, Json> = lv
                                .iter()
                                .enumerate()
                                .map(|(i, &j)| (ll[d][i].clone(), Json::String(rl[d][j].clone())))
                                .collect();
                            Json::Object(m)
                        })
                        .collect();
                    let h = format!("isomorphic (bounded certificate, D = {top}): {lhs} ≅ {rhs}\n");
                    (EXIT_OK, json!({ "isomorphic": true }), Some(json!({ "levels": pairs })), None, h)
                }
                IsoOutcome::Refuted(why) => {
                    let h = format!("not isomorphic: {why}\n");
                    (EXIT_FAILURE, json!({ "isomorphic": false }), None, Some(json!({ "reason": why })), h)
                }
            };
            Ok(LabOutput {
                code,
                human,
                report: LabReport {
                    operation: "iso".into(),
                    inputs: json!({ "lhs": lhs, "rhs": rhs }),
                    bounds: bounds(config, json!({})),
                    result,
                    witness,
                    refutation,
                    cell_counts: Some(counts),
                },
            })
        }
        LabCommand::LiftCheck { map, nmax } => {
            let f = parse_lift_map(&map, config.dim)?;
            let r = check_equivariant_lifting(&f, LiftBounds { n_max: nmax, k_max: box_k, budget: config.budget })?;
            let verdict = match r.verdict {
                LiftVerdict::Pass => "pass",
                LiftVerdict::NoLift => "fail",
                LiftVerdict::NoUniformChoice => "fail",
            };
            let human = match &r.refutation {
                None => format!("{verdict}: {} ({})\n", r.message, r.certificate),
                Some(rf) => format!(
                    "{verdict}: {} ({})\nrefuting box: n = {}, k = {}, C = {}, ζ = {}\n",
                    r.message, r.certificate, rf.open_box.n, rf.open_box.k, rf.open_box.subobject, rf.open_box.zeta
                ),
            };
            let code = if r.verdict == LiftVerdict::Pass { EXIT_OK } else { EXIT_FAILURE };
            Ok(LabOutput {
                code,
                human,
                report: LabReport {
                    operation: "lift-check".into(),
                    inputs: json!({ "map": map }),
                    bounds: bounds(config, json!({ "n_max": nmax, "k_max": box_k })),
                    result: json!({
                        "verdict": r.verdict,
                        "message": r.message,
                        "certificate": r.certificate,
                        "uniformity_constraints": r.uniformity_constraints,
                        "search_nodes": r.search_nodes,
                    }),
                    witness: (!r.witness.is_empty()).then(|| serde_json::to_value(&r.witness).expect("serializable")),
                    refutation: r.refutation.as_ref().map(|x| serde_json::to_value(x).expect("serializable")),
                    cell_counts: Some(json!({
                        "boxes": r.boxes,
                        "squares": r.squares,
                        "source": f.src.sizes,
                        "target": f.tgt.sizes,
                    })),
                },
            })
        }
        LabCommand::OpenBox { n, k, sub, zeta } => {
            let c = parse_subobject(&sub, n, config.dim)?;
            let zeta = parse_cube_map(&zeta, Some(n))?;
            let spec = OpenBoxSpec { n, k, c, zeta };
            let bx = build_open_box(&spec, config.dim)?;
            let cube = representable(n + k, config.dim).0;
            let desc = spec.describe();
            Ok(LabOutput {
                code: EXIT_OK,
                human: format!(
                    "open box n = {n}, k = {k}, C = {}, ζ = {}: level sizes {:?} inside {:?}\n",
                    desc.subobject, desc.zeta, bx.shape.sizes, cube.sizes
                ),
                report: LabReport {
                    operation: "open-box".into(),
                    inputs: serde_json::to_value(&desc).expect("serializable"),
                    bounds: bounds(config, json!({})),
                    result: json!({
                        "injective": true,
                        "is_isomorphism": bx.shape.sizes == cube.sizes,
                    }),
                    witness: None,
                    refutation: None,
                    cell_counts: Some(json!({ "box": bx.shape.sizes, "cube": cube.sizes })),
                },
            })
        }
    }
}

/// `(x1, 0, x2)`: output coordinates of a cube map; `1`-based variables.
pub fn parse_cube_map(src: &str, dom: Option<usize>) -> Result<CubeMap, LabError> {
    let body = src.trim().trim_start_matches('(').trim_end_matches(')');
    let mut coords = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        coords.push(match part {
            "0" => Coord::Zero,
            "1" => Coord::One,
            v => {
                let i: usize = v
                    .strip_prefix('x')
                    .and_then(|s| s.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| LabError::Invalid(format!("bad coordinate {v:?}")))?;
                Coord::Var(i)
            }
        });
    }
    let used = coords.iter().filter_map(|c| if let Coord::Var(i) = c { Some(*i) } else { None }).max().unwrap_or(0);
    let dom = dom.unwrap_or(used);
    if used > dom {
        return Err(LabError::Invalid(format!("coordinate x{used} out of range for I^{dom}")));
    }
    Ok(CubeMap::from_coords(dom, &coords))
}

fn parse_group(src: &str, n: usize) -> Result<GroupAction, LabError> {
    match src.trim() {
        "S" | "Sigma" => Ok(GroupAction::symmetric(n)),
        "trivial" | "1" => Ok(GroupAction::trivial(n)),
        s if s.starts_with('S') && s[1..].parse::<usize>() == Ok(n) => Ok(GroupAction::symmetric(n)),
        s => Err(LabError::Invalid(format!("unknown group {s:?}"))),
    }
}

fn parse_subobject(src: &str, n: usize, dmax: usize) -> Result<Subobject, LabError> {
    match src.trim() {
        "empty" | "" => Ok(Subobject::empty(n, dmax)),
        "full" => Ok(Subobject::full(n, dmax)),
        s => {
            let gens = s
                .split(';')
                .map(|g| {
                    let body = g.trim().trim_start_matches('(').trim_end_matches(')');
                    let dom = body
                        .split(',')
                        .filter_map(|p| p.trim().strip_prefix('x').and_then(|v| v.parse::<usize>().ok()))
                        .max()
                        .unwrap_or(0);
                    parse_cube_map(g, Some(dom))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(g) = gens.iter().find(|g| g.cod != n) {
                return Err(LabError::DimensionMismatch { expected: n, found: g.cod });
            }
            Ok(Subobject::generated(n, dmax, &gens))
        }
    }
}

pub enum Space {
    Cubical(CubicalSet),
    Simplicial(SimplicialSet),
}

fn parse_index(s: &str, what: &str) -> Result<usize, LabError> {
    s.parse().map_err(|_| LabError::Invalid(format!("bad {what} {s:?}")))
}

/// Expressions: `1`, `I<n>`, `I<n>/S<n>`, `T(...)`, `Delta<n>`, `Delta1^<n>`,
/// and products `A x B`.
pub fn parse_space(src: &str, dmax: usize) -> Result<Space, LabError> {
    let src = src.trim();
    if let Some((a, b)) = split_product(src) {
        return match (parse_space(a, dmax)?, parse_space(b, dmax)?) {
            (Space::Cubical(x), Space::Cubical(y)) => Ok(Space::Cubical(x.product(&y)?)),
            (Space::Simplicial(x), Space::Simplicial(y)) => Ok(Space::Simplicial(x.product(&y)?)),
            _ => Err(LabError::Invalid("product of a cubical and a simplicial set".into())),
        };
    }
    if let Some(inner) = src.strip_prefix("T(").and_then(|s| s.strip_suffix(')')) {
        return match parse_space(inner, dmax)? {
            Space::Cubical(x) => Ok(Space::Simplicial(triangulate(&x))),
            Space::Simplicial(_) => Err(LabError::Invalid("T expects a cubical set".into())),
        };
    }
    if let Some(inner) = src.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        return parse_space(inner, dmax);
    }
    if src == "1" {
        return Ok(Space::Cubical(representable(0, dmax).0));
    }
    if let Some(n) = src.strip_prefix("Delta1^") {
        return Ok(Space::Simplicial(simplex_power(parse_index(n, "exponent")?, dmax)));
    }
    if let Some(n) = src.strip_prefix("Delta") {
        return Ok(Space::Simplicial(standard_simplex(parse_index(n, "simplex dimension")?, dmax)));
    }
    if let Some(rest) = src.strip_prefix('I') {
        let (n, group) = match rest.split_once('/') {
            Some((n, g)) => (parse_index(n, "cube dimension")?, Some(g)),
            None => (parse_index(rest, "cube dimension")?, None),
        };
        return match group {
            None => Ok(Space::Cubical(representable(n, dmax).0)),
            Some(g) => Ok(Space::Cubical(cube_quotient(n, &parse_group(g, n)?, dmax)?)),
        };
    }
    Err(LabError::Invalid(format!("cannot parse space {src:?}")))
}

/// Split at a top-level ` x ` (outside parentheses).
fn split_product(src: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let bytes = src.as_bytes();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'x' if depth == 0 && i > 0 && bytes[i - 1] == b' ' && bytes.get(i + 1) == Some(&b' ') => {
                return Some((&src[..i - 1], &src[i + 2..]));
            }
            _ => {}
        }
    }
    None
}

/// `X->1`, `id(X)` or `box->1`.
pub fn parse_lift_map(src: &str, dmax: usize) -> Result<CubeSetMap, LabError> {
    let src = src.trim();
    if let Some(inner) = src.strip_prefix("id(").and_then(|s| s.strip_suffix(')')) {
        return match parse_space(inner, dmax)? {
            Space::Cubical(x) => Ok(CubeSetMap::identity(x)),
            Space::Simplicial(_) => Err(LabError::Invalid("lifting maps are between cubical sets".into())),
        };
    }
    let Some(dom) = src.strip_suffix("->1") else {
        return Err(LabError::Invalid(format!("cannot parse map {src:?}; expected 'X->1' or 'id(X)'")));
    };
    if dom.trim() == "box" {
        return open_box_non_example(dmax);
    }
    match parse_space(dom, dmax)? {
        Space::Cubical(x) => Ok(CubeSetMap::to_terminal(x)),
        Space::Simplicial(_) => Err(LabError::Invalid("lifting maps are between cubical sets".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_env(_: &str) -> Option<String> {
        None
    }

    #[test]
    fn config_precedence() {
        let c = Config::load(&GlobalFlags::default(), &no_env).unwrap();
        assert_eq!((c.k_max, c.dim), (4, 3));
        let env = |k: &str| (k == "EQCTT_KMAX").then(|| "3".to_string());
        assert_eq!(Config::load(&GlobalFlags::default(), &env).unwrap().k_max, 3);
        let flags = GlobalFlags { kmax: Some("2".into()), ..Default::default() };
        assert_eq!(Config::load(&flags, &env).unwrap().k_max, 2);
        let zero = GlobalFlags { kmax: Some("0".into()), ..Default::default() };
        assert!(Config::load(&zero, &no_env).is_err());
    }

    #[test]
    fn kmax_zero_is_usage_error() {
        let o = run(["eqctt", "--kmax", "0", "lab", "hom-count", "1", "1"], &no_env);
        assert_eq!(o.code, EXIT_USAGE);
    }

    #[test]
    fn hom_count() {
        let o = run(["eqctt", "lab", "hom-count", "1", "1"], &no_env);
        assert_eq!((o.code, o.stdout.as_str()), (0, "3\n"));
    }

    #[test]
    fn cube_map_syntax() {
        let f = parse_cube_map("(x1, 0, x2)", None).unwrap();
        assert_eq!((f.dom, f.cod), (2, 3));
        assert!(parse_cube_map("(x3)", Some(2)).is_err());
    }

    #[test]
    fn entailment_command() {
        assert_eq!(run(["eqctt", "cof", "entails", "i = 0 /\\ i = j", "j = 0"], &no_env).code, 0);
        assert_eq!(run(["eqctt", "cof", "entails", "i = 0 \\/ i = 1", "i = 0"], &no_env).code, 1);
    }
}

//! The `sav` command line: translation, execution, condition generation,
//! checking and fuzzing of annotated While programs.
//!
//! Inputs are source files in either the annotated While grammar or the
//! single-assignment grammar; the grammar is detected from the text.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;

use sav_core::fuzz::{self, FuzzConfig, FuzzReport, GenParams, Property};
use sav_core::lang::{
    AnnCommand, AstPath, Identifier, NameError, Program, SaVar, Triple, Variable,
};
use sav_core::parser::{
    parse_located, parse_sa_located, ParseError, SaUnit, SourceUnit, SpanTable, WhileUnit,
};
use sav_core::semantics::{
    bounded_validity, exec, CheckError, EvalContext, ExecOutcome, Grid, State, StateLiteralError,
    Validity,
};
use sav_core::smt::{emit_all, run_solver, write_scripts, SmtError, SolverVerdict};
use sav_core::symbols::SymbolTable;
use sav_core::translate::{
    t_inv, t_inv_loop_origins, tsa_triple, Fault, TranslateError, Translator, VersionMap,
};
use sav_core::vcgen::{locate, vcs, VerificationCondition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "sav",
    version,
    about = "Single-assignment verification of annotated While programs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlantedFault {
    SwapMerge,
    OmitUpd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Translate an annotated While program into single-assignment form
    Translate {
        file: PathBuf,
        /// Starting versions, e.g. `x=1,y=2.0`; unlisted variables start at 0
        #[arg(long)]
        init_versions: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Execute a program, ignoring its annotations
    Run {
        file: PathBuf,
        /// Initial state, e.g. `n=4,aux=4`; unlisted variables are 0
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        state: String,
        /// Maximum number of loop-body entries
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        /// Versions used to lift a plain state onto a single-assignment program
        #[arg(long)]
        init_versions: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List the verification conditions of a program
    Vcgen {
        file: PathBuf,
        /// Also write one SMT-LIB2 script per condition into this directory
        #[arg(long)]
        emit_smt: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check the verification conditions on an integer grid, or with an SMT solver
    Check {
        file: PathBuf,
        /// Value range for every variable
        #[arg(long, default_value = "-8:8", value_parser = parse_range, allow_hyphen_values = true)]
        range: (i64, i64),
        /// Range for one variable (all its versions), e.g. `n=0:6`; repeatable
        #[arg(long = "var-range", value_parser = parse_var_range, allow_hyphen_values = true)]
        var_range: Vec<(Identifier, (i64, i64))>,
        /// Write the SMT-LIB2 scripts into this directory
        #[arg(long)]
        emit_smt: Option<PathBuf>,
        /// Solver command, run as `<CMD> <script>`; replaces grid checking
        #[arg(long)]
        solver: Option<String>,
        /// Per-condition solver timeout in seconds
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check the translation properties on random programs
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        iterations: u64,
        /// Maximum number of loop-body entries per run
        #[arg(long, default_value_t = fuzz::DEFAULT_FUZZ_FUEL)]
        fuel: u64,
        /// Where failing cases are written
        #[arg(long, default_value = "fuzz-artifacts")]
        artifacts: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long, value_enum, hide = true)]
        plant_fault: Option<PlantedFault>,
    },
}

fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, found `{text}`"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_var_range(text: &str) -> Result<(Identifier, (i64, i64)), String> {
    let (name, range) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=LO:HI, found `{text}`"))?;
    let name = Identifier::parse(name.trim()).map_err(|e| e.to_string())?;
    Ok((name, parse_range(range)?))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0} is already in single-assignment form")]
    AlreadyTranslated(PathBuf),
    #[error("bad state literal: {0}")]
    State(#[from] StateLiteralError),
    #[error("bad version literal: {0}")]
    Versions(#[from] NameError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Smt(#[from] SmtError),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::AlreadyTranslated(_)
            | CliError::State(_)
            | CliError::Versions(_) => EXIT_INPUT,
            CliError::Check(CheckError::GridTooLarge { .. } | CheckError::EmptyRange { .. }) => {
                EXIT_INPUT
            }
            CliError::Check(CheckError::Eval(_))
            | CliError::Translate(_)
            | CliError::Write { .. }
            | CliError::Output(_) => EXIT_INTERNAL,
            CliError::Smt(_) => EXIT_SOLVER,
        }
    }
}

/// Runs one command, writing its report to `out`; returns the exit code
/// for a completed run.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Cmd::Translate {
            file,
            init_versions,
            format,
        } => translate(file, init_versions.as_deref(), *format, out),
        Cmd::Run {
            file,
            state,
            fuel,
            init_versions,
            format,
        } => run(file, state, *fuel, init_versions.as_deref(), *format, out),
        Cmd::Vcgen {
            file,
            emit_smt,
            format,
        } => vcgen(file, emit_smt.as_deref(), *format, out),
        Cmd::Check {
            file,
            range,
            var_range,
            emit_smt,
            solver,
            timeout,
            format,
        } => {
            let mut grid = Grid::new(range.0, range.1);
            for (x, (lo, hi)) in var_range {
                grid = grid.with_override(x.clone(), *lo, *hi);
            }
            let solver = solver
                .as_deref()
                .map(|cmd| (cmd, Duration::from_secs_f64(timeout.max(0.0))));
            check(file, &grid, emit_smt.as_deref(), solver, *format, out)
        }
        Cmd::Fuzz {
            seed,
            iterations,
            fuel,
            artifacts,
            format,
            plant_fault,
        } => {
            let mut cfg = FuzzConfig::new(
                GenParams {
                    seed: *seed,
                    ..GenParams::default()
                },
                *iterations,
            );
            cfg.fuel = *fuel;
            cfg.translator = Translator {
                fault: match plant_fault {
                    None => Fault::None,
                    Some(PlantedFault::SwapMerge) => Fault::SwapMerge,
                    Some(PlantedFault::OmitUpd) => Fault::OmitUpd,
                },
            };
            fuzz_cmd(&cfg, artifacts, *format, out)
        }
    }
}

enum Input {
    While(WhileUnit, SpanTable),
    Sa(SaUnit, SpanTable),
}

/// Reads a file in whichever grammar accepts it. When neither does, the
/// error that got further into the text is reported.
fn load(path: &Path) -> Result<Input, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    match parse_located(&text) {
        Ok((u, spans)) => Ok(Input::While(u, spans)),
        Err(while_err) => match parse_sa_located(&text) {
            Ok((u, spans)) => Ok(Input::Sa(u, spans)),
            Err(sa_err) => {
                let source = if sa_err.position() > while_err.position() {
                    sa_err
                } else {
                    while_err
                };
                Err(CliError::Parse {
                    path: path.to_owned(),
                    source,
                })
            }
        },
    }
}

fn versions_literal(text: Option<&str>) -> Result<VersionMap, CliError> {
    Ok(match text {
        Some(t) => VersionMap::parse_literal(t)?,
        None => VersionMap::new(),
    })
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    )?;
    Ok(())
}

fn translate(
    file: &Path,
    init: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let unit = match load(file)? {
        Input::While(u, _) => u,
        Input::Sa(..) => return Err(CliError::AlreadyTranslated(file.to_owned())),
    };
    let v0 = versions_literal(init)?;
    let (t, final_versions) = tsa_triple(&unit.pre, &unit.program, &unit.post, Some(&v0))?;
    let versions: Map<String, Value> = final_versions
        .iter()
        .map(|(x, v)| (x.to_string(), Value::String(v.to_string())))
        .collect();
    match format {
        Format::Structured => print_json(
            out,
            &json!({
                "pre": t.pre.to_string(),
                "post": t.post.to_string(),
                "program": t.program.to_string(),
                "final_versions": versions,
            }),
        )?,
        Format::Text => {
            let sa = SourceUnit {
                declarations: unit.declarations,
                pre: t.pre,
                post: t.post,
                program: t.program,
            };
            writeln!(out, "{sa}")?;
            let listing: Vec<String> = final_versions
                .iter()
                .map(|(x, v)| format!("{x}={v}"))
                .collect();
            writeln!(out, "-- final versions: {}", listing.join(", "))?;
        }
    }
    Ok(EXIT_OK)
}

fn report_run<V: Variable>(
    outcome: ExecOutcome<V>,
    universe: &BTreeSet<V>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    match (outcome, format) {
        (ExecOutcome::Terminated(s), Format::Text) => writeln!(out, "{}", s.render(universe))?,
        (ExecOutcome::FuelExhausted, Format::Text) => writeln!(out, "fuel exhausted")?,
        (ExecOutcome::Terminated(s), Format::Structured) => {
            let state: Map<String, Value> = universe
                .iter()
                .map(|x| (x.to_string(), Value::String(s.get(x).to_string())))
                .collect();
            print_json(out, &json!({ "outcome": "terminated", "state": state }))?
        }
        (ExecOutcome::FuelExhausted, Format::Structured) => {
            print_json(out, &json!({ "outcome": "fuel-exhausted" }))?
        }
    }
    Ok(EXIT_OK)
}

fn run(
    file: &Path,
    state: &str,
    fuel: u64,
    init: Option<&str>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    match load(file)? {
        Input::While(unit, _) => {
            let s = State::<Identifier>::parse_literal(state)?;
            let mut universe = unit.program.vars();
            universe.extend(s.iter().map(|(x, _)| x.clone()));
            let defs = unit.symbols();
            let ctx = EvalContext::new(&defs);
            let outcome = exec(&unit.program.erase(), &s, fuel, &ctx).map_err(CheckError::from)?;
            report_run(outcome, &universe, format, out)
        }
        Input::Sa(unit, _) => {
            // versioned literals are used as given; plain ones are lifted
            let s = match State::<SaVar>::parse_literal(state) {
                Ok(s) => s,
                Err(versioned) => match State::<Identifier>::parse_literal(state) {
                    Ok(plain) => {
                        let mut v = versions_literal(init)?;
                        v.extend_universe(plain.iter().map(|(x, _)| x));
                        fuzz::lift(&v, &plain)
                    }
                    Err(_) => return Err(versioned.into()),
                },
            };
            let image = t_inv(&unit.program);
            let mut universe = image.vars();
            universe.extend(s.iter().map(|(x, _)| x.clone()));
            let defs = unit.symbols();
            let ctx = EvalContext::new(&defs);
            let outcome = exec(&image.erase(), &s, fuel, &ctx).map_err(CheckError::from)?;
            report_run(outcome, &universe, format, out)
        }
    }
}

/// Conditions of the triple, with source positions filled in. Single
/// assignment programs are checked through their loop expansion.
enum Conditions {
    While(Vec<VerificationCondition<Identifier>>),
    Sa(Vec<VerificationCondition<SaVar>>),
}

fn conditions(input: &Input) -> Conditions {
    match input {
        Input::While(unit, spans) => {
            let mut v = vcs(&Triple::new(
                unit.pre.clone(),
                unit.program.clone(),
                unit.post.clone(),
            ));
            locate(&mut v, |p| spans.get(p).copied());
            Conditions::While(v)
        }
        Input::Sa(unit, spans) => {
            let image: AnnCommand<SaVar> = t_inv(&unit.program);
            let origins = t_inv_loop_origins(&unit.program);
            let mut v = vcs(&Triple::new(unit.pre.clone(), image, unit.post.clone()));
            locate(&mut v, |p| {
                let src = if *p == AstPath::root() {
                    Some(p)
                } else {
                    origins.get(p)
                };
                src.and_then(|s| spans.get(s)).copied()
            });
            Conditions::Sa(v)
        }
    }
}

fn symbols_of(input: &Input) -> SymbolTable {
    match input {
        Input::While(u, _) => u.symbols(),
        Input::Sa(u, _) => u.symbols(),
    }
}

fn origin_json<V>(vc: &VerificationCondition<V>) -> Value {
    let mut o = json!({ "rule": vc.origin.rule, "path": vc.origin.path.to_string() });
    if let Some((line, col)) = vc.origin.location {
        o["line"] = json!(line);
        o["col"] = json!(col);
    }
    o
}

fn vc_json<V: Variable>(i: usize, vc: &VerificationCondition<V>) -> Value {
    json!({ "id": i + 1, "origin": origin_json(vc), "formula": vc.formula.to_string() })
}

fn emit_scripts<V: Variable>(
    vcs: &[VerificationCondition<V>],
    defs: &SymbolTable,
    dir: &Path,
) -> Result<Vec<sav_core::smt::SmtScript>, CliError> {
    let scripts = emit_all(vcs, defs)?;
    write_scripts(dir, &scripts).map_err(|source| CliError::Write {
        path: dir.to_owned(),
        source,
    })?;
    Ok(scripts)
}

fn list<V: Variable>(
    vcs: &[VerificationCondition<V>],
    defs: &SymbolTable,
    emit: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(dir) = emit {
        let scripts = emit_scripts(vcs, defs, dir)?;
        eprintln!("wrote {} scripts to {}", scripts.len(), dir.display());
    }
    match format {
        Format::Text => {
            for (i, vc) in vcs.iter().enumerate() {
                writeln!(out, "{}", vc.listing(i))?;
            }
        }
        Format::Structured => {
            let items: Vec<Value> = vcs
                .iter()
                .enumerate()
                .map(|(i, vc)| vc_json(i, vc))
                .collect();
            print_json(out, &json!({ "vcs": items }))?;
        }
    }
    Ok(EXIT_OK)
}

fn vcgen(
    file: &Path,
    emit: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let input = load(file)?;
    let defs = symbols_of(&input);
    match conditions(&input) {
        Conditions::While(v) => list(&v, &defs, emit, format, out),
        Conditions::Sa(v) => list(&v, &defs, emit, format, out),
    }
}

fn state_json<V: Variable>(s: &State<V>, vars: &BTreeSet<V>) -> Value {
    Value::Object(
        vars.iter()
            .map(|x| (x.to_string(), Value::String(s.get(x).to_string())))
            .collect(),
    )
}

fn check_bounded<V: Variable>(
    vcs: &[VerificationCondition<V>],
    defs: &SymbolTable,
    grid: &Grid,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let ctx = EvalContext::new(defs);
    let mut items = Vec::new();
    let mut failed = 0;
    for (i, vc) in vcs.iter().enumerate() {
        let vars = vc.formula.free_vars();
        let verdict = bounded_validity(&vc.formula, &vars, grid, &ctx)?;
        let mut item = vc_json(i, vc);
        match &verdict {
            Validity::ValidOnGrid => {
                item["verdict"] = json!({ "status": "valid-on-grid" });
                if format == Format::Text {
                    writeln!(out, "{}\n  valid on grid", vc.listing(i))?;
                }
            }
            Validity::Counterexample(s) => {
                failed += 1;
                item["verdict"] =
                    json!({ "status": "counterexample", "state": state_json(s, &vars) });
                if format == Format::Text {
                    writeln!(
                        out,
                        "{}\n  counterexample: {}",
                        vc.listing(i),
                        s.render(&vars)
                    )?;
                }
            }
        }
        items.push(item);
    }
    match format {
        Format::Text => writeln!(
            out,
            "{} of {} conditions hold on the grid, {failed} with counterexamples",
            vcs.len() - failed,
            vcs.len()
        )?,
        Format::Structured => print_json(out, &json!({ "vcs": items }))?,
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn check_solver<V: Variable>(
    vcs: &[VerificationCondition<V>],
    defs: &SymbolTable,
    (cmd, timeout): (&str, Duration),
    emit: Option<&Path>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let scripts = match emit {
        Some(dir) => emit_scripts(vcs, defs, dir)?,
        None => emit_all(vcs, defs)?,
    };
    let verdicts = run_solver(&scripts, cmd, timeout);
    let mut items = Vec::new();
    for (i, (vc, verdict)) in vcs.iter().zip(&verdicts).enumerate() {
        let mut item = vc_json(i, vc);
        item["verdict"] = serde_json::to_value(verdict).expect("verdicts serialize");
        items.push(item);
        if format == Format::Text {
            writeln!(out, "{}\n  {}", vc.listing(i), verdict.label())?;
            if let SolverVerdict::Invalid(detail) | SolverVerdict::SolverError(detail) = verdict {
                for line in detail.lines() {
                    writeln!(out, "    {line}")?;
                }
            }
        }
    }
    if format == Format::Structured {
        print_json(out, &json!({ "vcs": items }))?;
    }
    Ok(
        if verdicts
            .iter()
            .any(|v| matches!(v, SolverVerdict::SolverError(_)))
        {
            EXIT_SOLVER
        } else if verdicts.iter().all(|v| *v == SolverVerdict::Valid) {
            EXIT_OK
        } else {
            EXIT_FAILED
        },
    )
}

fn check(
    file: &Path,
    grid: &Grid,
    emit: Option<&Path>,
    solver: Option<(&str, Duration)>,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let input = load(file)?;
    let defs = symbols_of(&input);
    match (conditions(&input), solver) {
        (Conditions::While(v), Some(s)) => check_solver(&v, &defs, s, emit, format, out),
        (Conditions::Sa(v), Some(s)) => check_solver(&v, &defs, s, emit, format, out),
        (Conditions::While(v), None) => {
            if let Some(dir) = emit {
                emit_scripts(&v, &defs, dir)?;
            }
            check_bounded(&v, &defs, grid, format, out)
        }
        (Conditions::Sa(v), None) => {
            if let Some(dir) = emit {
                emit_scripts(&v, &defs, dir)?;
            }
            check_bounded(&v, &defs, grid, format, out)
        }
    }
}

fn fuzz_cmd(
    cfg: &FuzzConfig,
    artifacts: &Path,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let report: FuzzReport = fuzz::run(cfg);
    let manifest = if report.is_clean() {
        None
    } else {
        Some(
            fuzz::write_artifacts(artifacts, cfg, &report).map_err(|source| CliError::Write {
                path: artifacts.to_owned(),
                source,
            })?,
        )
    };
    match format {
        Format::Structured => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["seed"] = json!(cfg.params.seed);
            if let Some(m) = &manifest {
                v["manifest"] = json!(m.display().to_string());
            }
            print_json(out, &v)?;
        }
        Format::Text => {
            writeln!(
                out,
                "seed {}, {} cases, {} with loops",
                cfg.params.seed, report.cases, report.with_loops
            )?;
            for p in Property::ALL {
                writeln!(out, "  {p}: {}/{} passed", report.passed(p), report.cases)?;
            }
            for f in &report.failures {
                write!(
                    out,
                    "FAIL {} at seed {} case {}",
                    f.property, cfg.params.seed, f.case
                )?;
                if let Some(x) = &f.variable {
                    write!(out, ", variable `{x}`")?;
                }
                writeln!(out, ": {}\n{}", f.detail, f.source)?;
            }
            if let Some(m) = &manifest {
                writeln!(
                    out,
                    "{} failures; cases written to {}",
                    report.failures.len(),
                    m.display()
                )?;
            }
        }
    }
    Ok(if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("-8:8"), Ok((-8, 8)));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("3").is_err());
        assert_eq!(parse_var_range("n=0:6"), Ok((Identifier::new("n"), (0, 6))));
        assert!(parse_var_range("while=0:6").is_err());
    }

    #[test]
    fn exit_codes_by_error() {
        let parse = CliError::Parse {
            path: "f".into(),
            source: ParseError::Character {
                line: 1,
                col: 1,
                found: '#',
            },
        };
        assert_eq!(parse.exit_code(), EXIT_INPUT);
        assert_eq!(
            CliError::Check(CheckError::GridTooLarge { points: 10, cap: 1 }).exit_code(),
            EXIT_INPUT
        );
        assert_eq!(
            CliError::Smt(SmtError::Unsupported("x".into())).exit_code(),
            EXIT_SOLVER
        );
    }

    #[test]
    fn command_line_shapes() {
        let cli = Cli::try_parse_from([
            "sav",
            "check",
            "f.whl",
            "--range",
            "-2:8",
            "--var-range",
            "n=0:6",
        ])
        .unwrap();
        let Cmd::Check {
            range, var_range, ..
        } = cli.command
        else {
            panic!()
        };
        assert_eq!(range, (-2, 8));
        assert_eq!(var_range.len(), 1);
        assert!(Cli::try_parse_from(["sav", "fuzz", "--iterations", "0"]).is_err());
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lang::{
    Assertion, CmpOp, Expr, Identifier, Program, Renaming, SaVar, Triple, WhileTriple,
};
use crate::parser::{SaUnit, SourceUnit, WhileUnit};
use crate::semantics::{EvalContext, Grid, State};
use crate::symbols::SymbolTable;
use crate::translate::{tsa_triple, Translator, VersionMap};

use super::checks::*;
use super::gen::*;

/// Loop unfoldings allowed on each side of a preservation check.
pub const DEFAULT_FUZZ_FUEL: u64 = 1000;

/// Grid for the loop-free triple checks.
pub const ORACLE_GRID: (i64, i64) = (-2, 2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Preservation,
    VersionStability,
    SaClosure,
    RenamingState,
    RenamingAssertion,
    RoundTripWhile,
    RoundTripSa,
    VcOracle,
    TripleSoundness,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::Preservation,
        Property::VersionStability,
        Property::SaClosure,
        Property::RenamingState,
        Property::RenamingAssertion,
        Property::RoundTripWhile,
        Property::RoundTripSa,
        Property::VcOracle,
        Property::TripleSoundness,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Preservation => "preservation",
            Property::VersionStability => "version-stability",
            Property::SaClosure => "sa-closure",
            Property::RenamingState => "renaming-state",
            Property::RenamingAssertion => "renaming-assertion",
            Property::RoundTripWhile => "round-trip-while",
            Property::RoundTripSa => "round-trip-sa",
            Property::VcOracle => "vc-oracle",
            Property::TripleSoundness => "triple-soundness",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub params: GenParams,
    pub iterations: u64,
    pub fuel: u64,
    pub translator: Translator,
}

impl FuzzConfig {
    pub fn new(params: GenParams, iterations: u64) -> Self {
        FuzzConfig {
            params,
            iterations,
            fuel: DEFAULT_FUZZ_FUEL,
            translator: Translator::new(),
        }
    }
}

/// Everything generated for one case index.
#[derive(Debug, Clone)]
pub struct Case {
    pub index: u64,
    /// Program with quantified specification, for preservation and printing.
    pub unit: WhileUnit,
    pub state: State<Identifier>,
    pub renaming: Renaming,
    pub sa_state: State<SaVar>,
    pub sa_assertion: Assertion<SaVar>,
    /// Loop-free triple over two variables.
    pub triple: WhileTriple,
}

/// The generator stream of case `index`: independent of every other case.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn generate_case(p: &GenParams, index: u64) -> Case {
    let mut rng = case_rng(p.seed, index);
    let pool = p.pool();
    let program = gen_program(p, &mut rng);
    let mut binders = pool.clone();
    binders.push(Identifier::new("q"));
    let pre = gen_rich_assertion(p, &pool, &binders, 3, &mut rng);
    let post = gen_rich_assertion(p, &pool, &binders, 3, &mut rng);
    let state = gen_state(p, &pool, &mut rng);

    let sa_vars = sa_pool(p);
    let renaming = gen_renaming(&sa_vars, &mut rng);
    let sa_state = gen_state(p, &sa_vars, &mut rng);
    let sa_assertion = gen_assertion(p, &sa_vars, 3, &mut rng);

    let small = GenParams {
        pool_size: 2,
        ..p.clone()
    };
    let xy = small.pool();
    let body = gen_loop_free(&small, &mut rng);
    // pinning the start state half of the time keeps valid triples common
    let triple_pre = if rng.gen_bool(0.5) {
        let mut pins = xy.iter().map(|x| {
            let k = rng.gen_range(ORACLE_GRID.0..=ORACLE_GRID.1);
            Assertion::Cmp(CmpOp::Eq, Expr::Var(x.clone()), Expr::int(k))
        });
        let first = pins.next().expect("two variables");
        pins.fold(first, Assertion::and)
    } else {
        gen_assertion(&small, &xy, 1, &mut rng)
    };
    let triple_post = gen_assertion(&small, &xy, 2, &mut rng);

    Case {
        index,
        unit: SourceUnit {
            declarations: Vec::new(),
            pre,
            post,
            program,
        },
        state,
        renaming,
        sa_state,
        sa_assertion,
        triple: Triple::new(triple_pre, body, triple_post),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzFailure {
    pub property: Property,
    pub case: u64,
    pub detail: String,
    /// The diverging variable, for preservation failures.
    pub variable: Option<String>,
    /// A source file reproducing the input.
    pub source: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FuzzReport {
    pub cases: u64,
    pub passed: BTreeMap<Property, u64>,
    /// Cases whose program contains a loop.
    pub with_loops: u64,
    /// Loop-free triples that are valid on the grid.
    pub valid_triples: u64,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed(&self, p: Property) -> u64 {
        self.passed.get(&p).copied().unwrap_or(0)
    }
}

fn while_source(case: &Case, header: &str) -> String {
    format!(
        "{header}-- initial state: {}\n{}",
        case.state.to_literal(),
        case.unit
    )
}

fn triple_source(t: &WhileTriple, header: &str) -> String {
    let unit = SourceUnit {
        declarations: Vec::new(),
        pre: t.pre.clone(),
        post: t.post.clone(),
        program: t.program.clone(),
    };
    format!("{header}{unit}")
}

fn renaming_source(case: &Case, header: &str) -> String {
    let unit = SourceUnit {
        declarations: Vec::new(),
        pre: case.sa_assertion.clone(),
        post: Assertion::Const(true),
        program: case.renaming.to_sa_command(),
    };
    format!(
        "{header}-- initial state: {}\n{unit}",
        case.sa_state.to_literal()
    )
}

fn translated_unit(case: &Case) -> Result<SaUnit, String> {
    let (t, _) = tsa_triple(&case.unit.pre, &case.unit.program, &case.unit.post, None)
        .map_err(|e| e.to_string())?;
    Ok(SourceUnit {
        declarations: Vec::new(),
        pre: t.pre,
        post: t.post,
        program: t.program,
    })
}

/// Runs every property on one case and tallies the outcomes.
pub fn run_case(case: &Case, cfg: &FuzzConfig, ctx: &EvalContext<'_>, report: &mut FuzzReport) {
    let header = |p: Property| {
        format!(
            "-- fuzz failure: {p}, seed {}, case {}\n",
            cfg.params.seed, case.index
        )
    };
    let record = |report: &mut FuzzReport,
                  p: Property,
                  outcome: Result<(), (String, Option<String>, String)>| {
        match outcome {
            Ok(()) => *report.passed.entry(p).or_default() += 1,
            Err((detail, variable, source)) => report.failures.push(FuzzFailure {
                property: p,
                case: case.index,
                detail,
                variable,
                source,
            }),
        }
    };
    let program = &case.unit.program;
    let v0 = VersionMap::initial(&program.vars());
    let tr = &cfg.translator;

    let p = Property::Preservation;
    let r = check_preservation(program, &case.state, cfg.fuel, tr, ctx).map_err(|e| {
        (
            e.to_string(),
            e.variable().map(|v| v.to_string()),
            while_source(case, &header(p)),
        )
    });
    record(report, p, r);

    let p = Property::VersionStability;
    let r = check_version_stability(program, &v0, tr).map_err(|e| {
        let var = match &e {
            StabilityFailure::Moved { var, .. } => Some(var.to_string()),
            StabilityFailure::Translation(_) => None,
        };
        (e.to_string(), var, while_source(case, &header(p)))
    });
    record(report, p, r);

    let p = Property::SaClosure;
    let r = check_closure(program, &v0, tr)
        .map_err(|e| (e.to_string(), None, while_source(case, &header(p))));
    record(report, p, r);

    let p = Property::RenamingState;
    let r = check_renaming_state(&case.renaming, &case.sa_state, ctx)
        .map_err(|e| (e, None, renaming_source(case, &header(p))));
    record(report, p, r);

    let p = Property::RenamingAssertion;
    let r = check_renaming_assert(&case.renaming, &case.sa_assertion, &case.sa_state, ctx)
        .map_err(|e| (e, None, renaming_source(case, &header(p))));
    record(report, p, r);

    let p = Property::RoundTripWhile;
    let r =
        check_round_trip_while(&case.unit).map_err(|e| (e, None, while_source(case, &header(p))));
    record(report, p, r);

    let p = Property::RoundTripSa;
    let r = translated_unit(case)
        .and_then(|u| check_round_trip_sa(&u))
        .map_err(|e| (e, None, while_source(case, &header(p))));
    record(report, p, r);

    let grid = Grid::new(ORACLE_GRID.0, ORACLE_GRID.1);
    let p = Property::VcOracle;
    let r = match check_vc_oracle(&case.triple, &grid, ctx) {
        Ok(valid) => {
            report.valid_triples += u64::from(valid);
            Ok(())
        }
        Err(e) => Err((e, None, triple_source(&case.triple, &header(p)))),
    };
    record(report, p, r);

    let p = Property::TripleSoundness;
    let r = check_triple_soundness(&case.triple, &grid, tr, ctx)
        .map_err(|e| (e, None, triple_source(&case.triple, &header(p))));
    record(report, p, r);

    if program.while_count() > 0 {
        report.with_loops += 1;
    }
}

/// Generates and checks `cfg.iterations` cases.
pub fn run(cfg: &FuzzConfig) -> FuzzReport {
    let defs = SymbolTable::default();
    let ctx = EvalContext::new(&defs);
    let mut report = FuzzReport::default();
    for index in 0..cfg.iterations {
        let case = generate_case(&cfg.params, index);
        run_case(&case, cfg, &ctx, &mut report);
        report.cases += 1;
    }
    report
}

#[derive(Serialize)]
struct Manifest<'a> {
    seed: u64,
    params: &'a GenParams,
    fuel: u64,
    cases: u64,
    failures: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: String,
    property: Property,
    case: u64,
    variable: Option<&'a str>,
    detail: &'a str,
}

/// Writes one `.whl` file per failure and a `manifest.json` describing
/// how to regenerate each.
pub fn write_artifacts(dir: &Path, cfg: &FuzzConfig, report: &FuzzReport) -> io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut failures = Vec::new();
    for (i, f) in report.failures.iter().enumerate() {
        let file = format!("failure_{:03}_{}_case{}.whl", i + 1, f.property, f.case);
        std::fs::write(dir.join(&file), &f.source)?;
        failures.push(ManifestEntry {
            file,
            property: f.property,
            case: f.case,
            variable: f.variable.as_deref(),
            detail: &f.detail,
        });
    }
    let manifest = Manifest {
        seed: cfg.params.seed,
        params: &cfg.params,
        fuel: cfg.fuel,
        cases: report.cases,
        failures,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
    std::fs::write(&path, text + "\n")?;
    Ok(path)
}

//! The `tropdeg` command line. [`run`] parses arguments, executes one
//! subcommand and returns the JSON report with an exit code:
//! 0 success, 1 input or parse error, 2 contract violation, 3 internal
//! invariant failure.

pub mod format;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cycles::{check_balancing, degree0, product, recession_cycle, translate, validate_complex, TropicalCycle};
use crate::error::Error;
use crate::multidegree::{
    check_submodular, facet_witness, msupp, multidegree, positivity_criterion, rank_function, subset_of, DivisorSet,
    MsuppMode, TypeVector,
};
use crate::ops::{
    check_admissible, is_positive_divisor, minkowski_sum_subspace, pair_positive, projection_dim,
    projection_pushforward, stable_intersect_with_info, transverse_check, tropical_hyperplane, AdmissibilityStatus,
    DisplacementSeed, Pushforward, Strategy,
};
use format::{
    cycle_json, int_vec_json, parse_cycle, parse_int_list, parse_rat_list, polyhedron_json, rat_vec_json, sha256_hex,
    write_cycle,
};

pub const SEED_ENV: &str = "TROPDEG_SEED";

#[derive(Parser, Debug)]
#[command(name = "tropdeg", version, about = "Exact tropical intersection theory and multidegrees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Displacement/translation seed (default: $TROPDEG_SEED, else 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the resulting cycle to this file
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct One {
    file: PathBuf,
}

#[derive(Args, Debug)]
struct Two {
    first: PathBuf,
    second: PathBuf,
}

#[derive(Args, Debug)]
struct Typed {
    file: PathBuf,
    /// Type vector n_1,...,n_k
    #[arg(long = "type")]
    ty: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the balancing condition
    CheckBalance(One),
    /// Stable intersection of two cycles
    Intersect(Two),
    /// Degree of a zero-dimensional cycle
    Degree(One),
    /// Recession cycle
    Recession(One),
    Translate {
        file: PathBuf,
        /// Translation vector, comma separated rationals
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Cartesian product (blocks are concatenated)
    Product(Two),
    /// Minkowski sum with a linear subspace
    Minkowski {
        file: PathBuf,
        /// Spanning vectors, e.g. "1,0,0;0,1,0"
        #[arg(long, allow_hyphen_values = true)]
        span: String,
    },
    /// Projection onto a set of blocks (1-based)
    Project {
        file: PathBuf,
        #[arg(long)]
        blocks: String,
    },
    /// Tropical hyperplane min(c_0, c_1 + x_1, ..., c_m + x_m)
    Hyperplane {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    PositiveDivisor(One),
    PairPositive(Two),
    /// Search for a subspace witnessing non-admissibility
    Admissible {
        file: PathBuf,
        #[arg(long, default_value = "coords")]
        strategy: String,
    },
    Multidegree {
        #[command(flatten)]
        typed: Typed,
        /// Replace the divisor of block i (1-based): i:FILE
        #[arg(long)]
        divisor: Vec<String>,
    },
    /// Projection dimensions of all block subsets
    Ranks(One),
    Criterion(Typed),
    Msupp {
        file: PathBuf,
        #[arg(long, default_value = "criterion")]
        mode: String,
        #[arg(long)]
        divisor: Vec<String>,
    },
    Submodular(One),
    FacetWitness(Typed),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckBalance(_) => "check-balance",
            Command::Intersect(_) => "intersect",
            Command::Degree(_) => "degree",
            Command::Recession(_) => "recession",
            Command::Translate { .. } => "translate",
            Command::Product(_) => "product",
            Command::Minkowski { .. } => "minkowski",
            Command::Project { .. } => "project",
            Command::Hyperplane { .. } => "hyperplane",
            Command::PositiveDivisor(_) => "positive-divisor",
            Command::PairPositive(_) => "pair-positive",
            Command::Admissible { .. } => "admissible",
            Command::Multidegree { .. } => "multidegree",
            Command::Ranks(_) => "ranks",
            Command::Criterion(_) => "criterion",
            Command::Msupp { .. } => "msupp",
            Command::Submodular(_) => "submodular",
            Command::FacetWitness(_) => "facet-witness",
        }
    }
}

/// Exit status plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Contract(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Contract(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(s) | Failure::Contract(s) | Failure::Internal(s) => s,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Input(e.to_string()),
            Error::SeedDependence(_) | Error::NonGeneric(_) => Failure::Internal(e.to_string()),
            _ => Failure::Contract(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Session {
    files: Vec<String>,
    contents: Vec<Vec<u8>>,
    caveats: Vec<&'static str>,
    output_cycle: Option<TropicalCycle>,
}

impl Session {
    fn load(&mut self, path: &PathBuf) -> Res<TropicalCycle> {
        let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let text =
            String::from_utf8(bytes.clone()).map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))?;
        let cycle = parse_cycle(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.files.push(path.display().to_string());
        self.contents.push(bytes);
        Ok(cycle)
    }

    fn emit(&mut self, cycle: &TropicalCycle) -> Value {
        self.output_cycle = Some(cycle.clone());
        cycle_summary(cycle)
    }

    fn divisors(&mut self, cycle: &TropicalCycle, specs: &[String]) -> Res<DivisorSet> {
        let mut divs = DivisorSet::standard(cycle.ambient());
        for spec in specs {
            let (i, path) = spec
                .split_once(':')
                .ok_or_else(|| Failure::Input(format!("--divisor expects i:FILE, got {spec:?}")))?;
            let i = block_index(i)?;
            let d = self.load(&PathBuf::from(path))?;
            divs.replace(i, d)?;
        }
        Ok(divs)
    }
}

fn cycle_summary(c: &TropicalCycle) -> Value {
    json!({ "dim": c.dim(), "facets": c.facets().len(), "cycle": cycle_json(c) })
}

fn block_index(s: &str) -> Res<usize> {
    match s.trim().parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i - 1),
        _ => Err(Failure::Input(format!("block indices are 1-based positive integers, got {s:?}"))),
    }
}

fn block_list(s: &str) -> Res<Vec<usize>> {
    s.split(',').map(block_index).collect()
}

fn parse_type(s: &str) -> Res<TypeVector> {
    s.parse().map_err(|e: Error| Failure::Input(e.to_string()))
}

fn require_balanced(c: &TropicalCycle) -> Res<()> {
    let r = check_balancing(c)?;
    if !r.balanced {
        return Err(Failure::Contract(format!("input is not balanced at {} face(s)", r.violations.len())));
    }
    Ok(())
}

fn pushforward_json(s: &mut Session, p: &Pushforward) -> Value {
    match p {
        Pushforward::Cycle { cycle, absorbed } => {
            if *absorbed {
                s.caveats.push("lower-dimensional images absorbed into top-dimensional ones");
            }
            let mut v = s.emit(cycle);
            v["pure"] = json!(true);
            v["absorbed"] = json!(absorbed);
            v
        }
        Pushforward::Impure(r) => json!({
            "pure": false,
            "impurity": {
                "facet": r.facet,
                "image": polyhedron_json(&r.image),
                "image_dim": r.image_dim,
                "top_dim": r.top_dim,
            },
        }),
    }
}

fn subsets_json(v: &[usize]) -> Value {
    json!(v.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn execute(cmd: &Command, seed: DisplacementSeed, s: &mut Session) -> Res<Value> {
    Ok(match cmd {
        Command::CheckBalance(a) => {
            let c = s.load(&a.file)?;
            let complex = validate_complex(&c);
            let r = check_balancing(&c)?;
            json!({
                "pure": complex.pure,
                "complex_ok": complex.ok(),
                "balanced": r.balanced,
                "violations": r.violations.iter().map(polyhedron_json).collect::<Vec<_>>(),
            })
        }
        Command::Intersect(a) => {
            let (x, y) = (s.load(&a.first)?, s.load(&a.second)?);
            let (c, info) = stable_intersect_with_info(&x, &y, seed)?;
            let mut v = s.emit(&c);
            v["transverse"] = json!(transverse_check(&x, &y)?);
            v["redraws"] = json!(info.redraws);
            v["displacements"] = json!(info.displacements.iter().map(|d| rat_vec_json(d)).collect::<Vec<_>>());
            if c.dim() == 0 {
                v["degree"] = json!(degree0(&c)?);
            }
            v
        }
        Command::Degree(a) => json!({ "degree": degree0(&s.load(&a.file)?)? }),
        Command::Recession(a) => {
            let c = recession_cycle(&s.load(&a.file)?)?;
            s.emit(&c)
        }
        Command::Translate { file, by } => {
            let c = s.load(file)?;
            let v = parse_rat_list(by).map_err(|e| Failure::Input(e.to_string()))?;
            let t = translate(&c, &v)?;
            s.emit(&t)
        }
        Command::Product(a) => {
            let (x, y) = (s.load(&a.first)?, s.load(&a.second)?);
            s.emit(&product(&x, &y))
        }
        Command::Minkowski { file, span } => {
            let c = s.load(file)?;
            require_balanced(&c)?;
            let gens = span
                .split(';')
                .map(|g| parse_int_list(g).map_err(|e| Failure::Input(e.to_string())))
                .collect::<Res<Vec<_>>>()?;
            let p = minkowski_sum_subspace(&c, &gens)?;
            pushforward_json(s, &p)
        }
        Command::Project { file, blocks } => {
            let c = s.load(file)?;
            let subset = block_list(blocks)?;
            let dim = projection_dim(&c, &subset)?;
            require_balanced(&c)?;
            let p = projection_pushforward(&c, &subset)?;
            let mut v = pushforward_json(s, &p);
            v["projection_dim"] = json!(dim);
            v
        }
        Command::Hyperplane { coeffs } => {
            let c = parse_rat_list(coeffs).map_err(|e| Failure::Input(e.to_string()))?;
            let h = tropical_hyperplane(&c)?;
            s.emit(&h)
        }
        Command::PositiveDivisor(a) => {
            let v = is_positive_divisor(&s.load(&a.file)?)?;
            json!({ "positive": v.positive, "witness": v.witness.as_deref().map(int_vec_json) })
        }
        Command::PairPositive(a) => {
            let (x, y) = (s.load(&a.first)?, s.load(&a.second)?);
            let pair = pair_positive(&x, &y)?;
            json!({ "positive": pair.is_some(), "pair": pair.map(|(i, j)| [i, j]) })
        }
        Command::Admissible { file, strategy } => {
            let c = s.load(file)?;
            require_balanced(&c)?;
            let mut strategy: Strategy = strategy.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
            if let Strategy::Random { seed: rs, .. } = &mut strategy {
                *rs = seed.seed;
            }
            let v = check_admissible(&c, &strategy)?;
            s.caveats.push("admissibility search refutes only; no counterexample is not a proof");
            let span =
                |w: &Vec<crate::kernel::num::IntVec>| json!(w.iter().map(|g| int_vec_json(g)).collect::<Vec<_>>());
            json!({
                "status": match v.status {
                    AdmissibilityStatus::CounterexampleFound => "CounterexampleFound",
                    AdmissibilityStatus::NoCounterexampleFound => "NoCounterexampleFound",
                },
                "witness": v.witness.as_ref().map(span),
                "witnesses": v.witnesses.iter().map(span).collect::<Vec<_>>(),
                "strategy": v.strategy,
                "tested": v.tested,
            })
        }
        Command::Multidegree { typed, divisor } => {
            let c = s.load(&typed.file)?;
            let n = parse_type(&typed.ty)?;
            let divs = s.divisors(&c, divisor)?;
            json!({ "type": n.0, "value": multidegree(&c, &n, &divs, seed)? })
        }
        Command::Ranks(a) => {
            let r = rank_function(&s.load(&a.file)?)?;
            json!({ "ranks": ranks_json(&r) })
        }
        Command::Criterion(t) => {
            let c = s.load(&t.file)?;
            let v = positivity_criterion(&c, &parse_type(&t.ty)?)?;
            s.caveats.push("criterion predicts multidegree positivity only for translation-admissible cycles");
            json!({
                "holds": v.holds,
                "violating": v.violating.as_deref().map(subsets_json),
                "facet": v.facet,
                "requires_admissibility": v.requires_admissibility,
            })
        }
        Command::Msupp { file, mode, divisor } => {
            let c = s.load(file)?;
            let mode: MsuppMode = mode.parse().map_err(|e: Error| Failure::Input(e.to_string()))?;
            let divs = s.divisors(&c, divisor)?;
            let set = msupp(&c, &divs, mode, seed)?;
            json!({ "types": set.iter().map(|n| n.0.clone()).collect::<Vec<_>>() })
        }
        Command::Submodular(a) => {
            let r = rank_function(&s.load(&a.file)?)?;
            let w = check_submodular(&r);
            json!({
                "submodular": w.is_none(),
                "witness": w.map(|(i, j)| [subsets_json(&i), subsets_json(&j)]),
                "ranks": ranks_json(&r),
            })
        }
        Command::FacetWitness(t) => {
            let c = s.load(&t.file)?;
            let f = facet_witness(&c, &parse_type(&t.ty)?)?;
            json!({
                "found": f.is_some(),
                "facet": f,
                "polyhedron": f.map(|i| polyhedron_json(&c.facets()[i].poly)),
            })
        }
    })
}

fn ranks_json(r: &crate::multidegree::RankFunction) -> Value {
    (1u32..(1 << r.k())).map(|mask| json!({ "subset": subsets_json(&subset_of(mask)), "rank": r.get(mask) })).collect()
}

fn resolve_seed(flag: Option<u64>) -> Res<(u64, &'static str)> {
    if let Some(s) = flag {
        return Ok((s, "flag"));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| (s, "env"))
            .map_err(|_| Failure::Input(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok((0, "default")),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    let name = cli.command.name();
    let mut session = Session { files: Vec::new(), contents: Vec::new(), caveats: Vec::new(), output_cycle: None };
    let result = resolve_seed(cli.seed).and_then(|(seed, source)| {
        let value = execute(&cli.command, DisplacementSeed::new(seed), &mut session)?;
        Ok((seed, source, value))
    });
    let (seed, source, value) = match result {
        Ok(r) => r,
        Err(f) => {
            let report = json!({ "command": name, "error": f.message(), "exit": f.code() });
            return Outcome {
                code: f.code(),
                stdout: render(&report),
                stderr: format!("tropdeg {name}: {}\n", f.message()),
            };
        }
    };
    if let (Some(path), Some(c)) = (&cli.output, &session.output_cycle) {
        if let Err(e) = fs::write(path, write_cycle(c)) {
            return Outcome { code: 1, stdout: String::new(), stderr: format!("{}: {e}\n", path.display()) };
        }
    }
    let parts: Vec<&[u8]> = session.contents.iter().map(Vec::as_slice).collect();
    let report = json!({
        "command": name,
        "inputs": { "files": session.files, "sha256": sha256_hex(&parts) },
        "seed": { "value": seed, "source": source },
        "result": value,
        "caveats": session.caveats,
    });
    Outcome { code: 0, stdout: render(&report), stderr: String::new() }
}

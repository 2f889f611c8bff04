//! Command-line front end. [`run`] is the whole program minus process
//! exit, so tests can drive it directly.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance;
use crate::algebra::{
    build_named, cayley_dickson_double, check_composition, derivation_algebra, properties, CompositionAlgebra,
};
use crate::diagram::{
    classify, confluence_probe, derive_hurwitz, evaluate_concrete, normalize, Diagram, DiagramJson, LinearCombo,
    RuleSet,
};
use crate::report::VerificationReport;
use crate::scalars::format_rational;
use crate::sym::{build_system, extract_triality, verify_special_seeded, verify_system, SpecialReport};
use crate::triality::{
    algebra_from_triality, check_cyclic, triality_from_algebra, verify_clifford_rho, verify_triality,
    verify_triality_by_permutation,
};
use crate::vpa::{adjoin_unit, clifford_check, imaginary_part, verify_vpa};

#[derive(Parser, Debug)]
#[command(name = "hurwitz", version, about = "Exact checks for composition algebras, diagrams, triality and spinors")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized probes and spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timing (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Rules {
    Generic,
    G2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Composition algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Vector product algebras.
    #[command(subcommand)]
    Vpa(VpaCmd),
    /// Trivalent diagram rewriting.
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// The derivation and the case analysis δ ∈ {0, 1, 3, 7}.
    #[command(subcommand)]
    Hurwitz(HurwitzCmd),
    /// Trialities.
    #[command(subcommand)]
    Triality(TrialityCmd),
    /// Spinor systems.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Runs the ten acceptance criteria.
    VerifyAll,
}

#[derive(Args, Debug)]
struct NameArg {
    /// One of reals, complexes, quaternions, octonions, split_complexes,
    /// split_quaternions, split_octonions.
    #[arg(long = "name", visible_alias = "algebra", visible_alias = "from")]
    name: String,
}

#[derive(Subcommand, Debug)]
enum AlgebraCmd {
    /// Checks |ab| = |a||b| in polarized form on all basis quadruples.
    Verify {
        #[command(flatten)]
        name: NameArg,
        /// Check the Cayley–Dickson double instead.
        #[arg(long)]
        double: bool,
    },
    /// Dimension and basis of the derivation algebra.
    Derivations {
        #[command(flatten)]
        name: NameArg,
    },
    /// Associativity, commutativity, alternativity.
    Props {
        #[command(flatten)]
        name: NameArg,
    },
    /// Structure constants, form and conjugation.
    Show {
        #[command(flatten)]
        name: NameArg,
    },
}

#[derive(Subcommand, Debug)]
enum VpaCmd {
    /// Imaginary part: vector product identities and the Clifford relation.
    Verify {
        #[command(flatten)]
        name: NameArg,
    },
    /// Imaginary part, then adjoin a unit; compares with the original.
    Roundtrip {
        #[command(flatten)]
        name: NameArg,
    },
}

#[derive(Subcommand, Debug)]
enum DiagramCmd {
    /// Normal form of a diagram file.
    Reduce {
        #[arg(long, value_enum, default_value_t = Rules::Generic)]
        rules: Rules,
        file: String,
    },
    /// Tensor of a diagram file in the imaginary part of an algebra.
    Eval {
        #[command(flatten)]
        name: NameArg,
        file: String,
    },
    /// Compares deterministic and random rewrite orders.
    Probe {
        #[arg(long, value_enum, default_value_t = Rules::G2)]
        rules: Rules,
        #[arg(long, default_value_t = 8)]
        bound: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Drop a rule first (negative control).
        #[arg(long)]
        without: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum HurwitzCmd {
    /// Derives the cycle rules, the square relation and the miracle relation.
    Derive,
    /// Prints the four-case tree.
    Classify,
}

#[derive(Subcommand, Debug)]
enum TrialityCmd {
    /// Clifford actions for all six permutations and cyclicity.
    Verify {
        #[command(flatten)]
        name: NameArg,
    },
    /// Rebuilds the algebra from its triality at unit base points.
    Roundtrip {
        #[command(flatten)]
        name: NameArg,
    },
}

#[derive(Subcommand, Debug)]
enum SymCmd {
    /// Clifford, symmetry and index checks; with --special the quartic too.
    Verify {
        #[command(flatten)]
        name: NameArg,
        #[arg(long)]
        special: bool,
    },
    /// Extracts a triality from a special system and verifies it.
    Extract {
        #[command(flatten)]
        name: NameArg,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The single JSON document of a run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub result: Value,
    pub passed: bool,
    pub status: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

#[derive(Default)]
struct Output {
    checks: Vec<CheckResult>,
    result: Value,
    text: String,
}

impl Output {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn report(&mut self, name: &str, r: &VerificationReport) {
        let detail = match r.witnesses.first() {
            None => format!("{} identities", r.checks),
            Some(w) => format!(
                "{} identities, {} witnesses; first {} at {:?}: {} vs {}",
                r.checks,
                r.witnesses.len(),
                w.check,
                w.indices,
                w.lhs,
                w.rhs
            ),
        };
        self.check(name, r.passed, detail);
    }
}

/// Parses `args` (without the program name) and runs the command.
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let argv: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(std::iter::once("hurwitz".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let msg = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: msg,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: msg,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let out = match dispatch(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => {
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            }
        }
        Err(Failure::Runtime(msg)) => {
            let mut out = Output::default();
            out.check("run", false, msg);
            out
        }
    };
    let passed = out.checks.iter().all(|c| c.passed);
    let status = if passed { 0 } else { 1 };
    let report = RunReport {
        command: argv,
        checks: out.checks,
        result: out.result,
        passed,
        status,
        timing_ms: cli.timing.then(|| start.elapsed().as_millis()),
    };
    let stdout = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Text => render_text(&report, &out.text),
    };
    Outcome {
        code: status,
        stdout,
        stderr: String::new(),
    }
}

fn render_text(r: &RunReport, body: &str) -> String {
    let mut s = String::new();
    if !body.is_empty() {
        s.push_str(body);
        if !body.ends_with('\n') {
            s.push('\n');
        }
    }
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            let _ = writeln!(s, "[{mark}] {}", c.name);
        } else {
            let _ = writeln!(s, "[{mark}] {}: {}", c.name, c.detail);
        }
    }
    if let Some(ms) = r.timing_ms {
        let _ = writeln!(s, "time: {ms} ms");
    }
    let _ = writeln!(s, "status: {} ({})", r.status, if r.passed { "ok" } else { "failed" });
    s
}

fn algebra(name: &NameArg) -> Result<CompositionAlgebra, Failure> {
    build_named(&name.name).map_err(|e| Failure::Usage(e.to_string()))
}

fn rule_set(r: Rules) -> RuleSet {
    match r {
        Rules::Generic => RuleSet::generic(),
        Rules::G2 => RuleSet::g2(),
    }
}

fn read_diagram(path: &str) -> Result<Diagram, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
    let j: DiagramJson =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{path} is not a diagram: {e}")))?;
    Diagram::from_json(&j).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let mut out = Output::default();
    match &cli.command {
        Command::Algebra(cmd) => algebra_cmd(cmd, &mut out)?,
        Command::Vpa(cmd) => vpa_cmd(cmd, &mut out)?,
        Command::Diagram(cmd) => diagram_cmd(cmd, cli.seed, &mut out)?,
        Command::Hurwitz(cmd) => hurwitz_cmd(cmd, &mut out)?,
        Command::Triality(cmd) => triality_cmd(cmd, &mut out)?,
        Command::Sym(cmd) => sym_cmd(cmd, cli.seed, &mut out)?,
        Command::VerifyAll => {
            let all = acceptance::run_all(cli.seed);
            for c in &all {
                out.check(&format!("{}. {}", c.id, c.title), c.passed, c.detail.clone());
            }
            out.result = json!({ "seed": cli.seed, "tolerance": acceptance::TOLERANCE, "criteria": all });
        }
    }
    Ok(out)
}

fn algebra_cmd(cmd: &AlgebraCmd, out: &mut Output) -> Result<(), Failure> {
    match cmd {
        AlgebraCmd::Verify { name, double } => {
            let mut a = algebra(name)?;
            if *double {
                a = cayley_dickson_double(&a);
            }
            let r = check_composition(&a);
            out.report("composition", &r);
            out.result = json!({ "algebra": a.name(), "dim": a.dim(), "report": r });
            out.text = format!("{} (dim {})", a.name(), a.dim());
        }
        AlgebraCmd::Derivations { name } => {
            let a = algebra(name)?;
            let der = derivation_algebra(&a);
            let basis: Vec<_> = der.iter().map(|m| m.to_strings()).collect();
            out.result = json!({ "algebra": a.name(), "dim": der.len(), "basis": basis });
            out.text = format!("der({}) has dimension {}", a.name(), der.len());
        }
        AlgebraCmd::Props { name } => {
            let a = algebra(name)?;
            let p = properties(&a);
            out.result = json!({ "algebra": a.name(), "properties": p });
            out.text = format!(
                "{}: associative {}, commutative {}, alternative {}",
                a.name(),
                p.associative,
                p.commutative,
                p.alternative
            );
        }
        AlgebraCmd::Show { name } => {
            let a = algebra(name)?;
            let j = a.to_json();
            out.text = serde_json::to_string_pretty(&j).expect("algebra serializes");
            out.result = serde_json::to_value(j).expect("algebra serializes");
        }
    }
    Ok(())
}

fn vpa_cmd(cmd: &VpaCmd, out: &mut Output) -> Result<(), Failure> {
    let name = match cmd {
        VpaCmd::Verify { name } | VpaCmd::Roundtrip { name } => name,
    };
    let a = algebra(name)?;
    let v = imaginary_part(&a).map_err(|e| Failure::Runtime(e.to_string()))?;
    match cmd {
        VpaCmd::Verify { .. } => {
            let (r, c) = (verify_vpa(&v), clifford_check(&v));
            out.report("vector product", &r);
            out.report("clifford", &c);
            out.result = json!({ "from": a.name(), "dim": v.dim(), "vector_product": r, "clifford": c });
            out.text = format!("Im({}) has dimension {}", a.name(), v.dim());
        }
        VpaCmd::Roundtrip { .. } => {
            let b = adjoin_unit(&v).map_err(|e| Failure::Runtime(e.to_string()))?;
            let same = b.mul_table() == a.mul_table() && b.form() == a.form();
            out.check("tables equal", same, format!("dim {} -> {} -> {}", a.dim(), v.dim(), b.dim()));
            out.result = json!({ "from": a.name(), "vpa": v.to_json(), "algebra": b.to_json() });
            out.text = format!("{} -> Im -> adjoin unit", a.name());
        }
    }
    Ok(())
}

fn diagram_cmd(cmd: &DiagramCmd, seed: u64, out: &mut Output) -> Result<(), Failure> {
    match cmd {
        DiagramCmd::Reduce { rules, file } => {
            let d = read_diagram(file)?;
            let nf = normalize(&LinearCombo::from_diagram(&d), &rule_set(*rules));
            let scalar = nf.as_scalar().map(|s| s.to_string());
            out.result = json!({ "rules": rules_name(*rules), "input": d.to_json(), "normal_form": nf.to_json(), "scalar": scalar });
            out.text = format!("normal form: {nf}");
        }
        DiagramCmd::Eval { name, file } => {
            let a = algebra(name)?;
            let v = imaginary_part(&a).map_err(|e| Failure::Runtime(e.to_string()))?;
            let d = read_diagram(file)?;
            let t = evaluate_concrete(&d, &v);
            let entries: Vec<Value> = nonzero_entries(t.rank, t.dim, &t.data);
            out.text = format!("rank {} tensor over Im({}), {} nonzero entries", t.rank, a.name(), entries.len());
            for e in entries.iter().take(20) {
                let _ = write!(out.text, "\n  {} = {}", e[0], e[1].as_str().unwrap_or_default());
            }
            out.result = json!({ "algebra": a.name(), "rank": t.rank, "dim": t.dim, "nonzero": entries });
        }
        DiagramCmd::Probe {
            rules,
            bound,
            trials,
            without,
        } => {
            let mut rs = rule_set(*rules);
            if let Some(w) = without {
                if rs.rule(w).is_none() {
                    return Err(Failure::Usage(format!("no rule named {w:?}")));
                }
                rs = rs.without(w);
            }
            let p = confluence_probe(&rs, *bound, *trials, seed);
            out.check(
                "confluence",
                p.is_clean(),
                format!("{} trials × {} orders, {} mismatches", p.trials, p.orders_per_trial, p.mismatch_count),
            );
            out.result = json!({ "rules": rules_name(*rules), "without": without, "seed": seed, "bound": bound, "probe": p });
        }
    }
    Ok(())
}

fn rules_name(r: Rules) -> &'static str {
    match r {
        Rules::Generic => "generic",
        Rules::G2 => "g2",
    }
}

fn nonzero_entries(rank: usize, dim: usize, data: &[crate::scalars::Rational]) -> Vec<Value> {
    use num_traits::Zero;
    data.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(mut i, x)| {
            let mut idx = vec![0; rank];
            for k in (0..rank).rev() {
                idx[k] = i % dim;
                i /= dim;
            }
            json!([idx, format_rational(x)])
        })
        .collect()
}

fn hurwitz_cmd(cmd: &HurwitzCmd, out: &mut Output) -> Result<(), Failure> {
    match cmd {
        HurwitzCmd::Derive => {
            let h = derive_hurwitz().map_err(|e| Failure::Runtime(e.to_string()))?;
            out.text = [
                ("bubble", &h.bubble),
                ("triangle", &h.triangle),
                ("tree flip", &h.tree_flip),
                ("square", &h.sq1),
                ("rotated square", &h.sq2),
                ("miracle", &h.miracle),
                ("miracle / (δ - 7)", &h.miracle_quotient),
            ]
            .iter()
            .map(|(n, c)| format!("{n}: {c}"))
            .collect::<Vec<_>>()
            .join("\n");
            out.result = serde_json::to_value(h.to_json()).expect("derivation serializes");
        }
        HurwitzCmd::Classify => {
            let t = classify().map_err(|e| Failure::Runtime(e.to_string()))?;
            out.text = t.to_string();
            out.result = serde_json::to_value(t.to_json()).expect("case tree serializes");
        }
    }
    Ok(())
}

fn triality_cmd(cmd: &TrialityCmd, out: &mut Output) -> Result<(), Failure> {
    match cmd {
        TrialityCmd::Verify { name } => {
            let a = algebra(name)?;
            let t = triality_from_algebra(&a);
            out.report("clifford rho", &verify_clifford_rho(&a));
            out.report("cyclic", &check_cyclic(&t));
            let perms = verify_triality_by_permutation(&t);
            for p in &perms {
                out.report(&format!("permutation {:?}", p.permutation), &p.report);
            }
            out.result = json!({ "algebra": a.name(), "dims": t.dims(), "permutations": perms });
            out.text = format!("triality of {}", a.name());
        }
        TrialityCmd::Roundtrip { name } => {
            let a = algebra(name)?;
            let t = triality_from_algebra(&a);
            let unit = a.unit();
            let b = algebra_from_triality(&t, &unit, &unit).map_err(|e| Failure::Runtime(e.to_string()))?;
            let same = b.mul_table() == a.mul_table() && b.form() == a.form();
            out.check("tables equal", same, format!("{} at unit base points", a.name()));
            out.result = json!({ "algebra": a.name(), "rebuilt": b.to_json() });
            out.text = format!("{} -> triality -> algebra", a.name());
        }
    }
    Ok(())
}

fn special_checks(out: &mut Output, r: &SpecialReport) {
    let witness = r
        .witnesses
        .first()
        .map(|w| format!("first witness {} at {:?}", w.check, w.indices))
        .unwrap_or_default();
    let detail = |ok: bool| if ok { String::new() } else { witness.clone() };
    out.check("clifford", r.clifford_ok, detail(r.clifford_ok));
    out.check("symmetry", r.symmetry_ok, detail(r.symmetry_ok));
    out.check("eq", r.eq_ok, detail(r.eq_ok));
    out.check("index", r.index_ok, detail(r.index_ok));
    if let Some(ok) = r.special_ok {
        out.check("special", ok, detail(ok));
    }
}

fn sym_cmd(cmd: &SymCmd, seed: u64, out: &mut Output) -> Result<(), Failure> {
    match cmd {
        SymCmd::Verify { name, special } => {
            let a = algebra(name)?;
            let sys = build_system(&a);
            let r = if *special {
                verify_special_seeded(&sys, seed)
            } else {
                verify_system(&sys)
            };
            special_checks(out, &r);
            out.text = format!("{}: dim V = {}, dim S = {}, {} checks", a.name(), sys.dim_v(), sys.dim_s(), r.checks);
            out.result = json!({ "algebra": a.name(), "dim_v": sys.dim_v(), "dim_s": sys.dim_s(), "report": r });
        }
        SymCmd::Extract { name } => {
            let a = algebra(name)?;
            let sys = build_system(&a);
            match extract_triality(&sys) {
                Ok(t) => {
                    let r = verify_triality(&t);
                    out.report("extracted triality", &r);
                    out.text = format!("triality on dims {:?}", t.dims());
                    out.result = json!({ "algebra": a.name(), "triality": t.to_json(), "report": r });
                }
                Err(e) => out.check("special", false, e.to_string()),
            }
        }
    }
    Ok(())
}

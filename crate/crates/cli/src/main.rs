mod input;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use caplab_core::arith::json_int;
use caplab_core::bounds::{Ext, Inequality, Relation};
use caplab_core::global::Condition;
use caplab_core::glq::permutation_matrix;
use caplab_core::local::local_capacity;
use caplab_core::module::LocalModule;
use caplab_core::oracle::{literal_capacity, oracle_capacity};
use caplab_core::random::{random_instance, Profile};
use caplab_core::witness::WitnessCheck;
use caplab_core::{
    bound_report, build_glq, capacity, geq, snf, verify_glq, verify_witness, witness, Budget, Error,
    FGModule, GlqInstance, Kind, ModuleDescriptor, Result,
};

#[derive(Parser)]
#[command(name = "caplab", version, about = "Surjective, split and injective capacities of finitely generated modules")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Seed for randomized commands; echoed in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Work budget overrides, e.g. `factor=100000,oracle=8192,nodes=1000000`.
    #[arg(long, global = true, env = "CAPLAB_BUDGET")]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Global capacity of M with respect to N.
    Capacity {
        #[arg(long)]
        kind: Kind,
        /// Module descriptor: inline (`Z:1+[4,2]`), JSON, or a path to a JSON file.
        #[arg(short = 'M', long = "module-m")]
        m: String,
        #[arg(short = 'N', long = "module-n")]
        n: String,
        /// Only test `capacity ≥ t`.
        #[arg(long)]
        geq: Option<u64>,
        /// Attach an explicit map certifying the value (Z and Z/n only).
        #[arg(long)]
        witness: bool,
    },
    /// Smith normal form `U·A·V = D` of an integer matrix (rows are relations).
    Snf {
        #[arg(short = 'A', long = "matrix")]
        a: String,
    },
    /// Localization of a module at a prime.
    Localize {
        #[arg(short = 'M', long = "module")]
        m: String,
        /// Prime label: `2` over Z, `3,1` for (3, 1+ω) over a quadratic ring, a name over abstract rings.
        #[arg(short = 'p', long)]
        prime: String,
    },
    /// Class group table of a ring.
    Classgroup {
        /// `Z`, `Z/n`, `quad:D`, `abstract:o1,o2` or JSON.
        #[arg(long)]
        ring: String,
    },
    /// Determinant-one matrix with prescribed reductions modulo given primes.
    Glq {
        #[arg(long)]
        n: usize,
        /// Prime sets, e.g. `1:2,5;2:3`.
        #[arg(long, default_value = "")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
    },
    /// Brute-force capacities of finite p-groups.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Seeded random instances through the capacity bound checks.
    VerifyBounds {
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, value_enum, default_value_t = BoundsBackend::Z)]
        backend: BoundsBackend,
        /// Force N = 0 in every trial.
        #[arg(long)]
        zero_target: bool,
        /// Test hook: added to dim(Y) before checking; a negative value must produce violations.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true, hide = true)]
        tamper_dim_shift: i64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Capacity {
        #[arg(long)]
        kind: Kind,
        /// Cyclic orders, e.g. `4,2`.
        #[arg(short = 'A')]
        a: String,
        #[arg(short = 'B')]
        b: String,
        /// The common prime (checked against the orders when given).
        #[arg(short = 'p')]
        p: Option<u64>,
        /// Enumerate homomorphisms literally instead of using the reduced search.
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BoundsBackend {
    Z,
    Zmod,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Capacity { .. } => "capacity",
            Command::Snf { .. } => "snf",
            Command::Localize { .. } => "localize",
            Command::Classgroup { .. } => "classgroup",
            Command::Glq { .. } => "glq",
            Command::Oracle { .. } => "oracle capacity",
            Command::VerifyBounds { .. } => "verify-bounds",
        }
    }
}

/// A command's result: JSON payload, human text, and whether it reports a violation.
struct Output {
    json: Value,
    human: String,
    violation: bool,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_budget() {
        3
    } else if matches!(e, Error::WitnessRejected(_)) {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match cli.budget.as_deref().map(|s| Budget::default().with_overrides(s)).transpose() {
        Ok(b) => b.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command, cli.seed, &budget) {
        Ok(out) => {
            let text = match cli.format {
                Format::Json => {
                    let mut envelope = serde_json::Map::new();
                    envelope.insert("command".into(), json!(cli.command.name()));
                    envelope.insert("seed".into(), json!(cli.seed));
                    envelope.insert("result".into(), out.json);
                    serde_json::to_string_pretty(&Value::Object(envelope)).expect("serializable") + "\n"
                }
                Format::Human => format!("seed: {}\n{}", cli.seed, out.human),
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(u8::from(out.violation))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: &Command, seed: u64, budget: &Budget) -> Result<Output> {
    match cmd {
        Command::Capacity { kind, m, n, geq, witness } => {
            cmd_capacity(*kind, &input::module(m, budget)?, &input::module(n, budget)?, *geq, *witness, budget)
        }
        Command::Snf { a } => cmd_snf(a, budget),
        Command::Localize { m, prime } => cmd_localize(&input::module(m, budget)?, prime),
        Command::Classgroup { ring } => cmd_classgroup(ring),
        Command::Glq { n, lambda, a } => cmd_glq(*n, lambda, *a),
        Command::Oracle { command: OracleCommand::Capacity { kind, a, b, p, literal } } => {
            cmd_oracle(*kind, a, b, *p, *literal, budget)
        }
        Command::VerifyBounds { trials, backend, zero_target, tamper_dim_shift } => {
            cmd_verify_bounds(seed, *trials, *backend, *zero_target, *tamper_dim_shift, budget)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("engine values serialize")
}

fn describe(m: &FGModule) -> Value {
    to_json(&ModuleDescriptor::of(m))
}

fn condition_text(c: Condition) -> &'static str {
    match c {
        Condition::ZeroTarget => "N = 0, so every t works",
        Condition::Trivial => "t = 0 always holds",
        Condition::TorsionTarget => "N is torsion: minimum of the local values over Ass(N)",
        Condition::RankInequality => "rank M ≥ 1 + t·rank N with every local value ≥ t",
        Condition::ClassEquality => "rank M = t·rank N and [M] = [N]^t with every local value ≥ t",
        Condition::LocalFailure => "a local value at a prime of Ass(N) is too small",
        Condition::RankDeficit => "rank M is too small",
        Condition::ClassMismatch => "rank M = t·rank N but [M] ≠ [N]^t",
        Condition::LocalMinimum => "minimum of the local values over Ass(N), zero prime included",
        Condition::ProductOfLocal => "Z/n: minimum over the prime-power factors",
    }
}

fn certify(kind: Kind, m: &FGModule, n: &FGModule, t: u64, budget: &Budget) -> Result<(caplab_core::Witness, WitnessCheck)> {
    let w = witness(kind, m, n, t, budget)?;
    let check = verify_witness(&w)?;
    if !check.passed() {
        return Err(Error::WitnessRejected(format!("{check:?}")));
    }
    Ok((w, check))
}

fn cmd_capacity(kind: Kind, m: &FGModule, n: &FGModule, t: Option<u64>, want_witness: bool, budget: &Budget) -> Result<Output> {
    let mut human = String::new();
    if let Some(t) = t {
        let report = geq(kind, m, n, t, budget)?;
        let mut json = to_json(&report);
        writeln!(human, "{kind}(M, N) ≥ {t}: {}", report.holds).unwrap();
        writeln!(human, "  clause: {} ({})", report.condition, condition_text(report.condition)).unwrap();
        if want_witness && report.holds {
            let (w, check) = certify(kind, m, n, t, budget)?;
            json["witness"] = to_json(&w);
            json["witness_check"] = to_json(&check);
            writeln!(human, "  witness: {}×{} matrix, verified", w.map.rows(), w.map.cols()).unwrap();
            writeln!(human, "{}", indent(&w.map.to_string())).unwrap();
        }
        return Ok(Output { json, human, violation: false });
    }
    let mut report = capacity(kind, m, n, budget)?;
    let mut check = None;
    if want_witness {
        let t = report.value.finite().unwrap_or(1);
        let (w, c) = certify(kind, m, n, t, budget)?;
        report.witness = Some(w);
        check = Some(c);
    }
    let mut json = to_json(&report);
    if let Some(c) = &check {
        json["witness_check"] = to_json(c);
    }
    writeln!(human, "{kind}(M, N) = {}", report.value).unwrap();
    writeln!(human, "  clause: {} ({})", report.condition, condition_text(report.condition)).unwrap();
    writeln!(human, "  ranks: r = {}, s = {}", report.rank_data.r, report.rank_data.s).unwrap();
    if !report.local_values.is_empty() {
        let parts: Vec<String> = report.local_values.iter().map(|l| format!("{} → {}", to_json(&l.prime).as_str().unwrap_or("?"), l.value)).collect();
        writeln!(human, "  local values: {}", parts.join(", ")).unwrap();
    }
    if let Some(c) = &report.class_check {
        writeln!(human, "  class test at t = {}: [M] = {}, [N]^t = {}, equal: {}", c.t, c.class_m, c.class_n_pow, c.equal).unwrap();
    }
    if let Some(w) = &report.witness {
        writeln!(human, "  witness for t = {}: {}×{} matrix, verified", w.t, w.map.rows(), w.map.cols()).unwrap();
        writeln!(human, "{}", indent(&w.map.to_string())).unwrap();
    }
    Ok(Output { json, human, violation: false })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}

fn cmd_snf(a: &str, budget: &Budget) -> Result<Output> {
    let a = input::matrix(a)?;
    let res = snf(&a);
    if a.rows() != a.cols() {
        eprintln!(
            "note: reading the {}×{} matrix as {} relations on {} generators (rows are relations)",
            a.rows(),
            a.cols(),
            a.rows(),
            a.cols()
        );
    }
    let cokernel = caplab_core::snf::module_from_presentation(&a, budget)?;
    let json = json!({
        "input": to_json(&a),
        "diagonal": json_int::many(&res.diagonal(), serde_json::value::Serializer).expect("integers serialize"),
        "d": to_json(&res.d),
        "u": to_json(&res.u),
        "v": to_json(&res.v),
        "cokernel": describe(&cokernel),
    });
    let diag: Vec<String> = res.diagonal().iter().map(ToString::to_string).collect();
    let human = format!(
        "relations: {}, generators: {}\ndiagonal: [{}]\ncokernel: {}\nU =\n{}\nV =\n{}\n",
        a.rows(),
        a.cols(),
        diag.join(", "),
        cokernel,
        indent(&res.u.to_string()),
        indent(&res.v.to_string())
    );
    Ok(Output { json, human, violation: false })
}

fn cmd_localize(m: &FGModule, prime: &str) -> Result<Output> {
    let p = m.ring().parse_prime(prime)?;
    let local: LocalModule = m.localize(&p)?;
    let json = json!({ "prime": p.to_string(), "local": to_json(&local) });
    let human = format!("M at {p}: free rank {}, exponents {:?}\n", local.free, local.exps);
    Ok(Output { json, human, violation: false })
}

fn cmd_classgroup(ring: &str) -> Result<Output> {
    let ring = input::ring(ring)?;
    let table = ring.class_group()?;
    let json = json!({ "ring": to_json(&ring), "table": to_json(&table) });
    let els: Vec<String> = table.elements.iter().map(ToString::to_string).collect();
    let gens: Vec<String> = table.generators.iter().map(ToString::to_string).collect();
    let human = format!(
        "class group of {ring}: order {}, invariants {:?}\ngenerators: {}\nelements: {}\n",
        table.order,
        table.invariants,
        gens.join(", "),
        els.join(", ")
    );
    Ok(Output { json, human, violation: false })
}

fn cmd_glq(n: usize, lambda: &str, a: Option<i64>) -> Result<Output> {
    let inst = GlqInstance::parse(n, lambda, a)?;
    let res = build_glq(&inst)?;
    let check = verify_glq(&inst, &res);
    let json = json!({
        "instance": to_json(&inst),
        "q": to_json(&res.q),
        "s": json_int::many(&res.s, serde_json::value::Serializer).expect("integers serialize"),
        "b": json_int::opt(&res.b, serde_json::value::Serializer).expect("integers serialize"),
        "transcript": to_json(&res.transcript),
        "check": to_json(&check),
        "verified": check.passed(),
    });
    let mut human = format!("Q =\n{}\n", indent(&res.q.to_string()));
    let s: Vec<String> = res.s.iter().map(ToString::to_string).collect();
    writeln!(human, "s = ({})", s.join(", ")).unwrap();
    if let Some(b) = &res.b {
        writeln!(human, "b = {b}").unwrap();
    }
    for (i, set) in inst.lambdas.iter().enumerate() {
        if !set.is_empty() {
            let p = permutation_matrix(i + 1, n)?;
            let swapped = if p.is_identity() { "identity".to_string() } else { format!("rows {} and {n} swapped", i + 1) };
            writeln!(human, "Λ_{} = {:?}: Q ≡ P·diag(s) with P = {swapped}", i + 1, set).unwrap();
        }
    }
    writeln!(human, "verified: {}", check.passed()).unwrap();
    Ok(Output { json, human, violation: !check.passed() })
}

fn cmd_oracle(kind: Kind, a: &str, b: &str, p: Option<u64>, literal: bool, budget: &Budget) -> Result<Output> {
    let fa = input::finite_module(a)?;
    let fb = input::finite_module(b)?;
    if let Some(p) = p {
        if !caplab_core::arith::is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        for (label, f) in [("A", &fa), ("B", &fb)] {
            if f.prime().is_some_and(|q| q != p) {
                return Err(Error::MismatchedPrimes(format!("{label} is a {}-group", f.prime().unwrap()), format!("-p {p}")));
            }
        }
    }
    let value = if literal { literal_capacity(kind, &fa, &fb, budget)? } else { oracle_capacity(kind, &fa, &fb, budget)? };
    let closed = local_capacity(kind, &LocalModule::new(0, fa.exps().to_vec()), &LocalModule::new(0, fb.exps().to_vec()))?;
    let json = json!({
        "kind": kind,
        "p": fa.prime().or(fb.prime()).or(p),
        "a": fa.orders(),
        "b": fb.orders(),
        "value": value,
        "closed_form": closed,
        "method": if literal { "literal" } else { "search" },
    });
    let human = format!("{kind}(A, B) = {value} by exhaustive search (closed form: {closed})\n");
    Ok(Output { json, human, violation: false })
}

#[derive(Serialize)]
struct Violation {
    trial: u64,
    kind: Kind,
    label: &'static str,
    lhs: Ext,
    rhs: Ext,
    m: Value,
    n: Value,
}

#[derive(Serialize)]
struct Tightest {
    trial: u64,
    kind: Kind,
    label: &'static str,
    gap: i64,
    m: Value,
    n: Value,
}

/// Slack of a satisfied, non-vacuous inequality with finite sides.
fn gap(c: &Inequality) -> Option<i64> {
    match (c.vacuous, c.lhs, c.rhs, c.relation) {
        (false, Ext::Fin(l), Ext::Fin(r), Relation::Le) => Some(r - l),
        (false, Ext::Fin(l), Ext::Fin(r), Relation::Ge) => Some(l - r),
        _ => None,
    }
}

fn cmd_verify_bounds(seed: u64, trials: u64, backend: BoundsBackend, zero_target: bool, shift: i64, budget: &Budget) -> Result<Output> {
    let profile = match backend {
        BoundsBackend::Z => Profile::integers(),
        BoundsBackend::Zmod => Profile::zmod(360),
    };
    let mut violations = Vec::new();
    let mut tightest: Option<Tightest> = None;
    let mut checks = 0usize;
    let mut labels = BTreeSet::new();
    for trial in 0..trials {
        let (m, mut n) = random_instance(seed.wrapping_add(trial), &profile)?;
        if zero_target {
            n = FGModule::zero(m.ring().clone())?;
        }
        for kind in [Kind::Sur, Kind::Spl] {
            let report = bound_report(kind, &m, &n, budget, shift)?;
            for c in &report.checks {
                checks += 1;
                labels.insert(c.label);
                if !c.holds {
                    violations.push(Violation { trial, kind, label: c.label, lhs: c.lhs, rhs: c.rhs, m: describe(&m), n: describe(&n) });
                } else if let Some(g) = gap(c) {
                    if tightest.as_ref().map_or(true, |t| g < t.gap) {
                        tightest = Some(Tightest { trial, kind, label: c.label, gap: g, m: describe(&m), n: describe(&n) });
                    }
                }
            }
        }
    }
    let json = json!({
        "trials": trials,
        "backend": match backend { BoundsBackend::Z => "Z", BoundsBackend::Zmod => "ZmodN" },
        "checks": checks,
        "violation_count": violations.len(),
        "violations": to_json(&violations.iter().take(20).collect::<Vec<_>>()),
        "tightest": to_json(&tightest),
    });
    let mut human = format!("{trials} trials, {checks} checks ({}), {} violations\n", labels.into_iter().collect::<Vec<_>>().join(", "), violations.len());
    for v in violations.iter().take(5) {
        writeln!(human, "  violation: trial {} {} {}: {} vs {}  M = {} N = {}", v.trial, v.kind, v.label, v.lhs, v.rhs, v.m, v.n).unwrap();
    }
    if let Some(t) = &tightest {
        writeln!(human, "tightest: trial {} {} {} with gap {}  M = {} N = {}", t.trial, t.kind, t.label, t.gap, t.m, t.n).unwrap();
    }
    let failed = !violations.is_empty();
    Ok(Output { json, human, violation: failed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use caplab_core::Capacity;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::OracleCap("x".into())), 3);
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::WitnessRejected("x".into())), 1);
    }

    #[test]
    fn gaps() {
        let c = Inequality { label: "x", lhs: Ext::Fin(2), relation: Relation::Ge, rhs: Ext::Fin(0), vacuous: false, holds: true };
        assert_eq!(gap(&c), Some(2));
        let v = Inequality { vacuous: true, ..c.clone() };
        assert_eq!(gap(&v), None);
    }

    #[test]
    fn capacity_value_kinds() {
        assert!(Capacity::Finite(0) < Capacity::Infinite);
    }
}

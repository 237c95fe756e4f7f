//! Acceptance suite. Runs without the libtest harness so that every criterion prints
//! exactly one PASS/FAIL line, with its wall time against the allowed limit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use caplab_core::global::{capacity, geq};
use caplab_core::local::local_capacity;
use caplab_core::module::LocalModule;
use caplab_core::oracle::{oracle_capacity, FiniteModule};
use caplab_core::random::{random_glq_instance, random_instance, random_matrix, Profile};
use caplab_core::ring::ClassElement;
use caplab_core::{
    bound_report, build_glq, snf, verify_glq, verify_witness, witness, Budget, Capacity, FGModule, Kind, PrimeId,
    RingDescriptor,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Over a ring whose class group is cyclic of order 2, with `I` a nonprincipal ideal:
/// neither `R → I` nor `I → R` is onto although every localization is.
fn intro_example() -> Outcome {
    let ring = RingDescriptor::abstract_group(vec![2], &[]).map_err(|e| e.to_string())?;
    let r = FGModule::projective(ring.clone(), 1, ClassElement::Vector(vec![0])).unwrap();
    let i = FGModule::projective(ring, 1, ClassElement::Vector(vec![1])).unwrap();
    let b = Budget::default();
    for (m, n, label) in [(&r, &i, "sur(R, I)"), (&i, &r, "sur(I, R)")] {
        let rep = capacity(Kind::Sur, m, n, &b).map_err(|e| e.to_string())?;
        ensure(rep.value == Capacity::Finite(0), || format!("{label} = {}", rep.value))?;
        ensure(!rep.local_values.is_empty(), || format!("{label}: no local values"))?;
        for lv in &rep.local_values {
            ensure(lv.value == Capacity::Finite(1), || format!("{label}: local value {} at {:?}", lv.value, lv.prime))?;
        }
    }
    Ok("sur(R,I) = sur(I,R) = 0, all local values 1".into())
}

fn shapes(max_len: usize, max_exp: u32) -> Vec<Vec<u32>> {
    fn rec(cur: Vec<u32>, max_len: usize, top: u32, out: &mut Vec<Vec<u32>>) {
        if cur.len() == max_len {
            return;
        }
        for e in 1..=top {
            let mut next = cur.clone();
            next.push(e);
            out.push(next.clone());
            rec(next, max_len, e, out);
        }
    }
    let mut out = vec![vec![]];
    rec(vec![], max_len, max_exp, &mut out);
    out
}

fn oracle_grid() -> Outcome {
    let all = shapes(4, 3);
    // 1 + 3 + 6 + 10 + 15 partitions-with-bounded-parts
    ensure(all.len() == 35, || format!("{} shapes", all.len()))?;
    let budget = Budget { oracle_cap: 3u64.pow(12), ..Budget::default() };
    let mut compared = 0;
    for p in [2u64, 3] {
        for a in &all {
            for b in &all {
                let fa = FiniteModule::from_exps(p, a).unwrap();
                let fb = FiniteModule::from_exps(p, b).unwrap();
                for kind in Kind::ALL {
                    let closed = local_capacity(kind, &LocalModule::new(0, a.clone()), &LocalModule::new(0, b.clone()))
                        .map_err(|e| e.to_string())?;
                    let brute = oracle_capacity(kind, &fa, &fb, &budget).map_err(|e| e.to_string())?;
                    ensure(closed == brute, || format!("p={p} {kind} A={a:?} B={b:?}: closed {closed}, oracle {brute}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} comparisons, 0 mismatches"))
}

fn witness_soundness() -> Outcome {
    let budget = Budget::default();
    let profile = Profile::integers();
    let (mut certified, mut positive) = (0, 0);
    for seed in 0..300u64 {
        let (m, n) = random_instance(seed, &profile).map_err(|e| e.to_string())?;
        for kind in Kind::ALL {
            let v = capacity(kind, &m, &n, &budget).map_err(|e| e.to_string())?.value;
            let Capacity::Finite(v) = v else {
                ensure(n.is_zero(), || format!("seed {seed}: {kind} infinite with N = {n}"))?;
                continue;
            };
            let w = witness(kind, &m, &n, v, &budget).map_err(|e| format!("seed {seed} {kind} t={v}: {e}"))?;
            let check = verify_witness(&w).map_err(|e| e.to_string())?;
            ensure(check.passed(), || format!("seed {seed} {kind} t={v}: {check:?}"))?;
            let above = geq(kind, &m, &n, v + 1, &budget).map_err(|e| e.to_string())?;
            ensure(!above.holds, || format!("seed {seed} {kind}: clause test holds at {}", v + 1))?;
            certified += 1;
            positive += usize::from(v > 0);
        }
    }
    Ok(format!("{certified} witnesses verified ({positive} with t > 0), clause fails at v+1 each time"))
}

fn bound_harness() -> Outcome {
    let budget = Budget::default();
    let profile = Profile::integers();
    let mut checked = 0;
    for seed in 0..500u64 {
        let (m, n) = random_instance(seed, &profile).map_err(|e| e.to_string())?;
        for kind in [Kind::Sur, Kind::Spl] {
            let r = bound_report(kind, &m, &n, &budget, 0).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("seed {seed} {kind}: {:?}", r.violations()))?;
            checked += r.checks.len();
        }
    }
    Ok(format!("{checked} inequalities, 0 violations"))
}

fn glq_instances() -> Outcome {
    for seed in 0..100u64 {
        let inst = random_glq_instance(seed).map_err(|e| e.to_string())?;
        let res = build_glq(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let check = verify_glq(&inst, &res);
        ensure(check.passed(), || format!("seed {seed}: {check:?}"))?;
    }
    Ok("100 instances verified".into())
}

fn class_groups() -> Outcome {
    for (d, order) in [(-4i64, 1u64), (-20, 2), (-23, 3), (-47, 5)] {
        let ring = RingDescriptor::quadratic(d).map_err(|e| e.to_string())?;
        let table = ring.class_group().map_err(|e| e.to_string())?;
        ensure(table.order == order, || format!("D={d}: order {}", table.order))?;
        let els = &table.elements;
        let mul = |x: &ClassElement, y: &ClassElement| ring.compose(x, y).unwrap();
        for x in els {
            for y in els {
                let xy = mul(x, y);
                ensure(els.contains(&xy), || format!("D={d}: {x}·{y} = {xy} not in table"))?;
                for z in els {
                    ensure(mul(&xy, z) == mul(x, &mul(y, z)), || format!("D={d}: associativity fails"))?;
                }
            }
        }
    }
    // (2, 1+ω) with ω = √−5
    let ring = RingDescriptor::quadratic(-20).unwrap();
    let order = ring.quad_order().unwrap();
    let lattice = order.ideal_from_generators(&[(2, 0), (1, 1)]).map_err(|e| e.to_string())?;
    let ideal = ring.from_lattice(&lattice, &Budget::default()).map_err(|e| e.to_string())?;
    let class = ring.class_of_ideal(&ideal).map_err(|e| e.to_string())?;
    ensure(class != ring.identity_class().unwrap(), || "class of (2, 1+ω) is trivial".into())?;
    Ok("orders 1, 2, 3, 5; group laws hold; [(2, 1+ω)] nontrivial".into())
}

fn quasisemilocal() -> Outcome {
    let budget = Budget { oracle_cap: 1 << 40, ..Budget::default() };
    let profile = Profile::zmod(360);
    let mut compared = 0;
    for seed in 0..200u64 {
        let (m, n) = random_instance(seed, &profile).map_err(|e| e.to_string())?;
        let RingDescriptor::IntegersMod { n: modulus } = *m.ring() else { unreachable!() };
        let primes = m.ring().modulus_primes(&budget).map_err(|e| e.to_string())?;
        for kind in Kind::ALL {
            let global = capacity(kind, &m, &n, &budget).map_err(|e| e.to_string())?.value;
            let mut closed = Vec::new();
            let mut brute = Vec::new();
            for (p, _) in &primes {
                let q = PrimeId::Rational(*p);
                let (a, b) = (m.localize(&q).unwrap(), n.localize(&q).unwrap());
                closed.push(local_capacity(kind, &a, &b).map_err(|e| e.to_string())?);
                let fa = FiniteModule::from_local(*p, &a).map_err(|e| e.to_string())?;
                let fb = FiniteModule::from_local(*p, &b).map_err(|e| e.to_string())?;
                brute.push(oracle_capacity(kind, &fa, &fb, &budget).map_err(|e| e.to_string())?);
            }
            let (closed, brute) = (Capacity::min_of(closed), Capacity::min_of(brute));
            ensure(global == closed && closed == brute, || {
                format!("seed {seed} Z/{modulus} {kind} M={m} N={n}: global {global}, min local {closed}, oracle {brute}")
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} comparisons, 0 mismatches"))
}

/// Determinant by cofactor expansion, independent of the engine.
fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i128(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Gcd of all `k × k` minors.
fn minor_gcd(a: &[Vec<i128>], k: usize) -> i128 {
    let (r, c) = (a.len(), a[0].len());
    let mut g = 0i128;
    for rows in subsets(r, k) {
        for cols in subsets(c, k) {
            let sub: Vec<Vec<i128>> = rows.iter().map(|i| cols.iter().map(|j| a[*i][*j]).collect()).collect();
            g = g.gcd(&det_i128(&sub));
        }
    }
    g
}

fn snf_engine() -> Outcome {
    let mut oracle_checked = 0;
    for seed in 0..1000u64 {
        let a = random_matrix(seed, 8, 50);
        let res = snf(&a);
        let uav = res.u.mul(&a).and_then(|x| x.mul(&res.v)).map_err(|e| e.to_string())?;
        ensure(uav == res.d, || format!("seed {seed}: U·A·V ≠ D"))?;
        for t in [&res.u, &res.v] {
            let d = t.det().map_err(|e| e.to_string())?;
            ensure(d.abs().is_one(), || format!("seed {seed}: transform has determinant {d}"))?;
        }
        for i in 0..res.d.rows() {
            for j in 0..res.d.cols() {
                ensure(i == j || res.d[(i, j)].is_zero(), || format!("seed {seed}: off-diagonal entry"))?;
            }
        }
        let diag = res.diagonal();
        ensure(diag.iter().all(|x| !x.is_negative()), || format!("seed {seed}: negative diagonal"))?;
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            ensure(ok, || format!("seed {seed}: {} does not divide {}", w[0], w[1]))?;
        }
        if a.rows() <= 5 && a.cols() <= 5 {
            let rows: Vec<Vec<i128>> =
                (0..a.rows()).map(|i| a.row(i).iter().map(|x| i128::try_from(x).unwrap()).collect()).collect();
            let mut dk = BigInt::one();
            for (k, d) in diag.iter().enumerate() {
                dk *= d;
                let g = BigInt::from(minor_gcd(&rows, k + 1));
                ensure(dk == g, || format!("seed {seed}: d_{} = {dk}, minor gcd {g}", k + 1))?;
            }
            oracle_checked += 1;
        }
    }
    Ok(format!("1000 matrices, {oracle_checked} checked against minor gcds"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("1 intro example over a class group of order 2", 1, intro_example),
        ("2 closed forms vs exhaustive oracle grid", 120, oracle_grid),
        ("3 witness soundness over Z", 120, witness_soundness),
        ("4 capacity bound inequalities", 60, bound_harness),
        ("5 determinant-one construction", 10, glq_instances),
        ("6 class group tables", 5, class_groups),
        ("7 Z/n exactness vs oracle", 60, quasisemilocal),
        ("8 Smith normal form", 60, snf_engine),
    ];
    let mut failures = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let line = match (&outcome, over) {
            (Ok(msg), false) => format!("PASS  criterion {name}: {msg} ({elapsed:.2?} / {limit}s)"),
            (Ok(msg), true) => format!("FAIL  criterion {name}: {msg} but took {elapsed:.2?} > {limit}s"),
            (Err(msg), _) => format!("FAIL  criterion {name}: {msg} ({elapsed:.2?})"),
        };
        if outcome.is_err() || over {
            failures += 1;
        }
        println!("{line}");
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

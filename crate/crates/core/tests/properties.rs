//! Property tests for the algebraic invariants that tie the engine together.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use caplab_core::global::{capacity, geq, Condition};
use caplab_core::glq::{build_glq, verify_glq};
use caplab_core::local::{inj_local, local_capacity, spl_local, sur_local};
use caplab_core::module::{direct_sum_fold, LocalModule};
use caplab_core::oracle::{count_homs, oracle_capacity, FiniteModule};
use caplab_core::random::{random_glq_instance, random_instance, Backend, Profile};
use caplab_core::ring::SplitKind;
use caplab_core::snf::module_from_presentation;
use caplab_core::{Budget, Capacity, FGModule, IntMatrix, Kind, PrimeId, RingDescriptor};

fn budget() -> Budget {
    Budget::default()
}

fn local_module() -> impl Strategy<Value = LocalModule> {
    (0u32..3, prop::collection::vec(1u32..5, 0..5)).prop_map(|(free, exps)| LocalModule::new(free, exps))
}

fn torsion_local() -> impl Strategy<Value = LocalModule> {
    prop::collection::vec(1u32..5, 0..5).prop_map(|exps| LocalModule::new(0, exps))
}

fn profiles() -> Vec<Profile> {
    let c2 = RingDescriptor::abstract_group(vec![2], &[("P", vec![1]), ("Q", vec![0])]).unwrap();
    let c6 = RingDescriptor::abstract_group(vec![2, 3], &[("P", vec![1, 0]), ("Q", vec![0, 2]), ("S", vec![0, 0])]).unwrap();
    let abs = |ring| Profile { backend: Backend::Abstract { ring }, min_rank: 0, max_rank: 4, primes: vec![], max_exp: 3, max_summands: 3 };
    vec![
        Profile::integers(),
        Profile::zmod(120),
        abs(c2),
        abs(c6),
        Profile { backend: Backend::Quadratic { disc: -20 }, ..Profile::integers() },
        Profile { backend: Backend::Quadratic { disc: -23 }, ..Profile::integers() },
    ]
}

/// A pair over one of several backends.
fn any_pair() -> impl Strategy<Value = (FGModule, FGModule)> {
    (0..profiles().len(), any::<u64>()).prop_map(|(i, seed)| random_instance(seed, &profiles()[i]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn split_below_sur_and_inj(a in local_module(), b in local_module()) {
        let spl = spl_local(&a, &b).unwrap();
        prop_assert!(spl <= sur_local(&a, &b).unwrap());
        prop_assert!(spl <= inj_local(&a, &b).unwrap());
    }

    #[test]
    fn adding_a_summand_never_hurts(a in local_module(), b in local_module(), extra in local_module()) {
        let bigger = a.direct_sum(&extra);
        for kind in Kind::ALL {
            prop_assert!(local_capacity(kind, &bigger, &b).unwrap() >= local_capacity(kind, &a, &b).unwrap());
        }
    }

    #[test]
    fn sur_equals_inj_on_torsion(a in torsion_local(), b in torsion_local()) {
        prop_assert_eq!(sur_local(&a, &b).unwrap(), inj_local(&a, &b).unwrap());
    }

    #[test]
    fn local_infinite_iff_zero_target(a in local_module(), b in local_module()) {
        prop_assert_eq!(sur_local(&a, &b).unwrap().is_infinite(), b.is_zero());
    }

    #[test]
    fn hom_count_formula(a in prop::collection::vec(1u32..4, 0..3), b in prop::collection::vec(1u32..4, 0..3)) {
        let fa = FiniteModule::from_exps(2, &a).unwrap();
        let fb = FiniteModule::from_exps(2, &b).unwrap();
        let expected: u64 = a.iter().flat_map(|x| b.iter().map(move |y| 1u64 << x.min(y))).product();
        prop_assert_eq!(count_homs(&fa, &fb, &budget()).unwrap(), expected);
    }

    #[test]
    fn oracle_sur_monotone(a in prop::collection::vec(1u32..4, 0..4), b in prop::collection::vec(1u32..3, 1..3), e in 1u32..4) {
        let fa = FiniteModule::from_exps(3, &a).unwrap();
        let fb = FiniteModule::from_exps(3, &b).unwrap();
        let mut a2 = a.clone();
        a2.push(e);
        let mut b2 = b.clone();
        b2.push(e);
        let big = Budget { oracle_cap: 3u64.pow(12), ..budget() };
        let base = oracle_capacity(Kind::Sur, &fa, &fb, &big).unwrap();
        prop_assert!(oracle_capacity(Kind::Sur, &FiniteModule::from_exps(3, &a2).unwrap(), &fb, &big).unwrap() >= base);
        prop_assert!(oracle_capacity(Kind::Sur, &fa, &FiniteModule::from_exps(3, &b2).unwrap(), &big).unwrap() <= base);
    }

    #[test]
    fn global_orderings((m, n) in any_pair()) {
        let b = budget();
        let sur = capacity(Kind::Sur, &m, &n, &b).unwrap();
        let spl = capacity(Kind::Spl, &m, &n, &b).unwrap();
        let inj = capacity(Kind::Inj, &m, &n, &b).unwrap();
        prop_assert!(spl.value <= sur.value);
        prop_assert!(sur.value <= sur.min_maximal_local());
        prop_assert!(spl.value <= spl.min_maximal_local());
        let inj_min = Capacity::min_of(inj.local_values.iter().map(|l| l.value));
        prop_assert!(inj.value <= inj_min);
    }

    #[test]
    fn downward_closed((m, n) in any_pair()) {
        let b = budget();
        for kind in Kind::ALL {
            let report = capacity(kind, &m, &n, &b).unwrap();
            match report.value {
                Capacity::Infinite => {
                    prop_assert!(n.is_zero());
                    prop_assert!(geq(kind, &m, &n, 7, &b).unwrap().holds);
                }
                Capacity::Finite(v) => {
                    for t in 0..=v {
                        prop_assert!(geq(kind, &m, &n, t, &b).unwrap().holds, "{} fails at {} ≤ {}", kind, t, v);
                    }
                    prop_assert!(!geq(kind, &m, &n, v + 1, &b).unwrap().holds);
                }
            }
        }
    }

    /// When the class clause decides, the torsion parts alone already admit the surjection.
    #[test]
    fn class_clause_torsion_sur((m, n) in any_pair()) {
        let b = budget();
        let report = capacity(Kind::Sur, &m, &n, &b).unwrap();
        if report.condition == Condition::ClassEquality {
            let t = report.value.finite().unwrap();
            let tors = capacity(Kind::Sur, &m.torsion_part(), &n.torsion_part(), &b).unwrap();
            prop_assert!(tors.value.at_least(t));
            prop_assert!(!geq(Kind::Sur, &m, &n, t + 1, &b).unwrap().holds);
        }
    }

    #[test]
    fn elementary_divisors_round_trip((m, _) in any_pair()) {
        let back = FGModule::from_elementary_divisors(m.ring().clone(), m.rank(), m.steinitz().clone(), &m.elementary_divisors()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn localize_outside_ass_is_torsion_free((m, _) in any_pair(), q in prop::sample::select(vec![7u64, 11, 13])) {
        let p = match m.ring() {
            RingDescriptor::Quadratic { .. } => m.ring().prime_split(q).unwrap()[0].clone(),
            RingDescriptor::Abstract { .. } => PrimeId::Named("S".into()),
            _ => PrimeId::Rational(q),
        };
        if m.ring().check_prime(&p).is_ok() && !m.ass(false, &budget()).unwrap().contains(&p) {
            prop_assert!(m.localize(&p).unwrap().exps.is_empty());
        }
    }

    #[test]
    fn mu_is_largest_local_count((m, _) in any_pair()) {
        let t = m.torsion_part();
        let local_max = t.ass(false, &budget()).unwrap().iter().map(|p| t.localize(p).unwrap().exps.len()).max().unwrap_or(0);
        prop_assert_eq!(t.mu_torsion().unwrap(), local_max);
    }

    #[test]
    fn iso_is_an_equivalence((m, n) in any_pair(), (k, _) in any_pair()) {
        for x in [&m, &n] {
            prop_assert!(x.iso(x).unwrap());
            for y in [&m, &n] {
                prop_assert_eq!(x.iso(y).unwrap(), y.iso(x).unwrap());
            }
        }
        if m.ring() == k.ring() && m.iso(&n).unwrap() && n.iso(&k).unwrap() {
            prop_assert!(m.iso(&k).unwrap());
        }
    }

    #[test]
    fn rank_one_decomposition_folds_back((m, _) in any_pair()) {
        if m.rank() >= 1 && m.ring().is_domain() {
            let ring = m.ring();
            let mut classes = vec![ring.identity_class().unwrap(); m.rank() as usize - 1];
            classes.push(m.steinitz().clone());
            let folded = direct_sum_fold(ring, &classes).unwrap().direct_sum(&m.torsion_part()).unwrap();
            prop_assert!(folded.iso(&m).unwrap());
        }
    }

    #[test]
    fn presentation_change_preserves_module(
        entries in prop::collection::vec(-9i64..10, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..4), 0..6),
    ) {
        let a = IntMatrix::from_i64(3, 3, &entries).unwrap();
        // random unimodular P, Q from elementary operations
        let mut p = IntMatrix::identity(3);
        let mut q = IntMatrix::identity(3);
        for (i, j, c) in &ops {
            if i != j {
                for col in 0..3 {
                    let v = p[(*j, col)].clone() * c;
                    p[(*i, col)] += v;
                }
                for row in 0..3 {
                    let v = q[(row, *i)].clone() * c;
                    q[(row, *j)] += v;
                }
            }
        }
        let b = p.mul(&a).unwrap().mul(&q).unwrap();
        let ma = module_from_presentation(&a, &budget()).unwrap();
        let mb = module_from_presentation(&b, &budget()).unwrap();
        prop_assert!(ma.iso(&mb).unwrap());
    }

    #[test]
    fn glq_transcript_identities(seed in any::<u64>()) {
        let inst = random_glq_instance(seed).unwrap();
        let res = build_glq(&inst).unwrap();
        prop_assert!(verify_glq(&inst, &res).passed());
        for step in &res.transcript.chain {
            prop_assert!((&step.a + &step.b).is_one());
            prop_assert!(step.a.is_multiple_of(&step.k));
            prop_assert!(step.b.is_multiple_of(&step.l));
            prop_assert!(step.k.gcd(&step.l).is_one());
        }
        let n = inst.n;
        let chain = &res.transcript.chain;
        let c = &res.transcript.c;
        let mut det = BigInt::from(0);
        for j in 0..n - 1 {
            let coef: BigInt = (0..n - 1).map(|k| if k == j { chain[k].b.clone() } else { chain[k].a.clone() }).product();
            det -= coef * &c[j];
        }
        det += chain.iter().map(|s| s.a.clone()).product::<BigInt>() * &c[n - 1];
        prop_assert!(det.is_one());
    }
}

/// Over `Z`, a failure at `t = v + 1` is confirmed independently: either the rank
/// arithmetic rules it out or the oracle finds no map at some prime, with free summands
/// replaced by cyclic summands of one common height above every torsion exponent.
#[test]
fn failure_above_value_confirmed_by_oracle() {
    let b = Budget { oracle_cap: u64::MAX, ..budget() };
    for seed in 0..200u64 {
        let (m, n) = random_instance(seed, &Profile::integers()).unwrap();
        for kind in [Kind::Sur, Kind::Spl] {
            let Capacity::Finite(v) = capacity(kind, &m, &n, &b).unwrap().value else { continue };
            let t = v + 1;
            let (r, s) = (u64::from(m.rank()), u64::from(n.rank()));
            if r < t * s {
                continue;
            }
            let mut refuted = false;
            for p in n.ass(false, &b).unwrap() {
                let PrimeId::Rational(q) = p else { unreachable!() };
                let (lm, ln) = (m.localize(&p).unwrap(), n.localize(&p).unwrap());
                let height = 1 + lm.max_exp().max(ln.max_exp());
                let proxy = |x: &LocalModule| {
                    let exps: Vec<u32> = x.exps.iter().copied().chain(std::iter::repeat(height).take(x.free as usize)).collect();
                    FiniteModule::from_exps(q, &exps).unwrap()
                };
                if !oracle_capacity(kind, &proxy(&lm), &proxy(&ln), &b).unwrap().at_least(t) {
                    refuted = true;
                }
            }
            assert!(refuted, "seed {seed} {kind}: nothing rules out t = {t} for M = {m}, N = {n}");
        }
    }
}

#[test]
fn ring_laws_on_quadratic_ideals() {
    for d in [-4i64, -20, -23] {
        let ring = RingDescriptor::quadratic(d).unwrap();
        let primes: Vec<PrimeId> = [2u64, 3, 5, 7, 11, 13].iter().flat_map(|p| ring.prime_split(*p).unwrap()).collect();
        let mut rng = caplab_core::random::rng(d.unsigned_abs());
        use rand::seq::SliceRandom;
        use rand::Rng;
        for _ in 0..100 {
            let mut pick = || {
                let mut f = BTreeMap::new();
                for _ in 0..rng.gen_range(1..3) {
                    *f.entry(primes.choose(&mut rng).unwrap().clone()).or_insert(0) += rng.gen_range(1..3u32);
                }
                caplab_core::Ideal { factors: f }
            };
            let (i, j) = (pick(), pick());
            let ij = ring.ideal_mul(&i, &j).unwrap();
            assert_eq!(ring.ideal_norm(&ij).unwrap(), ring.ideal_norm(&i).unwrap() * ring.ideal_norm(&j).unwrap());
            let lhs = ring.class_of_ideal(&ij).unwrap();
            let rhs = ring.compose(&ring.class_of_ideal(&i).unwrap(), &ring.class_of_ideal(&j).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let order = ring.quad_order().unwrap();
        for p in (2u64..=100).filter(|p| caplab_core::arith::is_prime(*p)) {
            let mut acc = caplab_core::ring::QuadIdeal::unit();
            for q in ring.prime_split(p).unwrap() {
                let PrimeId::Quadratic(qp) = &q else { unreachable!() };
                let e = if qp.kind == SplitKind::Ramified { 2 } else { 1 };
                let lattice = ring.to_lattice(&caplab_core::Ideal::prime_power(q.clone(), 1)).unwrap();
                acc = order.ideal_mul(&acc, &order.ideal_pow(&lattice, e).unwrap()).unwrap();
            }
            assert_eq!(acc, order.ideal_from_generators(&[(p as i128, 0)]).unwrap(), "D={d} p={p}");
        }
    }
}

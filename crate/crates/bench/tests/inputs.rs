//! The benchmark workloads must be valid inputs, or the timings measure error paths.

use caplab_core::oracle::oracle_capacity;
use caplab_core::random::{random_instance, random_matrix, Profile};
use caplab_core::{capacity, snf, Budget, FiniteModule, Kind, RingDescriptor};

#[test]
fn workloads_run_cleanly() {
    let budget = Budget::default();
    for s in 0..32 {
        let a = random_matrix(s, 16, 50);
        let r = snf(&a);
        assert_eq!((r.d.rows(), r.d.cols()), (a.rows(), a.cols()));
    }
    for d in [-23i64, -47, -10_007, -1_000_003] {
        assert!(RingDescriptor::quadratic(d).unwrap().class_group().unwrap().order >= 1);
    }
    let a = FiniteModule::new(&[8, 4, 2]).unwrap();
    let b = FiniteModule::new(&[4, 2]).unwrap();
    for kind in Kind::ALL {
        oracle_capacity(kind, &a, &b, &budget).unwrap();
    }
    for s in 0..64 {
        for profile in [Profile::integers(), Profile::zmod(360)] {
            let (m, n) = random_instance(s, &profile).unwrap();
            capacity(Kind::Inj, &m, &n, &budget).unwrap();
        }
    }
}

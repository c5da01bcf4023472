use fairmatch::gen::{random_instance, RandomSpec};
use fairmatch::oracle::brute_force;
use fairmatch::{maxmin, mov, verify, CountVector, Measure};
use proptest::prelude::*;

fn all_vectors(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn maxmin_dominates_mov_on_small_vectors() {
    for len in 1..=4 {
        for v in all_vectors(len, 5) {
            let x = CountVector(v);
            assert!(maxmin(&x) >= mov(&x), "{x:?}");
        }
    }
}

proptest! {
    #[test]
    fn maxmin_dominates_mov(v in prop::collection::vec(0usize..50, 1..8)) {
        let x = CountVector(v);
        prop_assert!(maxmin(&x) >= mov(&x));
    }

    #[test]
    fn measures_ignore_color_order(v in prop::collection::vec(0usize..20, 1..8), seed in any::<u64>()) {
        let mut w = v.clone();
        let len = w.len();
        for i in (1..len).rev() {
            w.swap(i, (seed >> (i % 32)) as usize % (i + 1));
        }
        prop_assert_eq!(mov(&CountVector(v.clone())), mov(&CountVector(w.clone())));
        prop_assert_eq!(maxmin(&CountVector(v)), maxmin(&CountVector(w)));
    }

    #[test]
    fn fairness_relaxes_with_ell(seed in 0u64..5000, mov_measure in any::<bool>()) {
        let mut s = RandomSpec::new(2 + (seed % 6) as usize, 1 + (seed % 3) as usize, 1 + (seed % 4) as usize, seed);
        s.measure = if mov_measure { Measure::Mov } else { Measure::MaxMin };
        s.ell = (seed / 7 % 3) as usize;
        let inst = random_instance(&s).unwrap();
        if let Some(m) = brute_force(&inst).unwrap().matching() {
            prop_assert!(verify(&inst, m).unwrap().is_valid());
            let looser = inst.clone().with_ell(inst.ell + 1);
            prop_assert!(verify(&looser, m).unwrap().is_valid());
        }
    }
}

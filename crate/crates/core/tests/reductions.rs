mod common;

use common::{has_perfect_3dm, satisfiable, smallest_formulas, tiny_3dm};
use fairmatch::gen::{
    random_3dm, random_sat4occ, reduce_3dm_maxmin24, reduce_3dm_maxmin33, reduce_sat_mov25,
    CnfInstance, ThreeDMInstance,
};
use fairmatch::oracle::cover_search;
use fairmatch::{verify, Answer, Instance};

fn decide(inst: &Instance) -> bool {
    let answer = cover_search(inst).unwrap();
    if let Answer::Yes(m) = &answer {
        assert!(verify(inst, m).unwrap().is_valid());
    }
    answer.is_yes()
}

fn check_3dm(t: &ThreeDMInstance) {
    let expect = has_perfect_3dm(t);
    let a = reduce_3dm_maxmin33(t).unwrap();
    assert!(a.max_left_degree() <= 3 && a.max_right_degree() <= 3);
    assert_eq!(a.num_colors, 3);
    assert_eq!(decide(&a), expect, "maxmin33 on {t:?}");
    let b = reduce_3dm_maxmin24(t).unwrap();
    assert!(b.max_left_degree() <= 2 && b.max_right_degree() <= 4);
    assert_eq!(b.num_colors, 3);
    assert_eq!(decide(&b), expect, "maxmin24 on {t:?}");
}

#[test]
fn three_dm_reductions_on_all_tiny_inputs() {
    let all = tiny_3dm();
    assert!(all.len() > 200);
    assert!(all.iter().any(has_perfect_3dm));
    for t in &all {
        check_3dm(t);
    }
}

#[test]
fn three_dm_reductions_on_random_samples() {
    let mut yes = 0;
    for seed in 0..100u64 {
        let q = 2 + (seed % 2) as usize;
        let t = random_3dm(q, q + (seed / 2 % (2 * q as u64 + 1)) as usize, seed).unwrap();
        yes += has_perfect_3dm(&t) as usize;
        check_3dm(&t);
    }
    assert!(yes > 0);
}

fn check_sat(c: &CnfInstance) {
    let inst = reduce_sat_mov25(c).unwrap();
    assert!(inst.max_left_degree() <= 2 && inst.max_right_degree() <= 5);
    assert_eq!(inst.num_colors, 3);
    assert_eq!(decide(&inst), satisfiable(c), "{c:?}");
}

#[test]
fn sat_reduction_on_smallest_formulas() {
    let all = smallest_formulas();
    assert!(all.len() > 50);
    for c in &all {
        check_sat(c);
    }
}

#[test]
fn sat_reduction_on_random_samples() {
    for seed in 0..100u64 {
        let num_vars = if seed % 4 == 0 { 6 } else { 3 };
        check_sat(&random_sat4occ(num_vars, seed).unwrap());
    }
}

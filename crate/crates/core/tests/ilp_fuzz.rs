use fairmatch::ilp::{IlpConfig, IlpModel, Relation};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Row {
    coefs: Vec<i64>,
    rel: Relation,
    rhs: i64,
}

fn row(nvars: usize) -> impl Strategy<Value = Row> {
    (
        prop::collection::vec(-3i64..=3, nvars),
        prop_oneof![Just(Relation::Le), Just(Relation::Eq), Just(Relation::Ge)],
        -6i64..=10,
    )
        .prop_map(|(coefs, rel, rhs)| Row { coefs, rel, rhs })
}

fn system() -> impl Strategy<Value = (Vec<(i64, i64)>, Vec<Row>, Row)> {
    (1usize..=4).prop_flat_map(|nvars| {
        (
            prop::collection::vec(
                (0i64..=4, 0i64..=4).prop_map(|(a, b)| (a.min(b), a.max(b))),
                nvars,
            ),
            prop::collection::vec(row(nvars), 0..=4),
            row(nvars),
        )
    })
}

fn holds(r: &Row, x: &[i64]) -> bool {
    let lhs: i64 = r.coefs.iter().zip(x).map(|(a, b)| a * b).sum();
    match r.rel {
        Relation::Le => lhs <= r.rhs,
        Relation::Eq => lhs == r.rhs,
        Relation::Ge => lhs >= r.rhs,
    }
}

fn enumerate_feasible(bounds: &[(i64, i64)], rows: &[Row]) -> bool {
    let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        if rows.iter().all(|r| holds(r, &x)) {
            return true;
        }
        let mut i = 0;
        while i < x.len() && x[i] == bounds[i].1 {
            x[i] = bounds[i].0;
            i += 1;
        }
        if i == x.len() {
            return false;
        }
        x[i] += 1;
    }
}

fn solve(bounds: &[(i64, i64)], rows: &[Row]) -> Option<Vec<i64>> {
    let mut model = IlpModel::new();
    let vars: Vec<_> = bounds
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| model.add_var(format!("x{i}"), lo, hi).unwrap())
        .collect();
    for r in rows {
        model
            .add_constraint(
                vars.iter().copied().zip(r.coefs.iter().copied()),
                r.rel,
                r.rhs,
            )
            .unwrap();
    }
    model
        .solve(&IlpConfig::default())
        .unwrap()
        .map(|s| s.values().to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn agrees_with_enumeration((bounds, rows, _) in system()) {
        let got = solve(&bounds, &rows);
        prop_assert_eq!(got.is_some(), enumerate_feasible(&bounds, &rows));
        if let Some(x) = got {
            for (v, &(lo, hi)) in x.iter().zip(&bounds) {
                prop_assert!(lo <= *v && *v <= hi);
            }
            prop_assert!(rows.iter().all(|r| holds(r, &x)));
        }
    }

    #[test]
    fn extra_constraints_never_restore_feasibility((bounds, rows, extra) in system()) {
        let before = solve(&bounds, &rows).is_some();
        let mut more = rows.clone();
        more.push(extra);
        let after = solve(&bounds, &more).is_some();
        prop_assert!(before || !after);
    }
}

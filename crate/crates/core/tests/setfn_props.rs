use fairmatch::gen::{random_instance, RandomSpec};
use fairmatch::setfn::NeighborhoodTables;
use fairmatch::setfn::{
    bits, check_modular, check_supermodular, convolve_max, find_touching_separator,
    SetFunctionTable,
};
use fairmatch::Instance;
use proptest::prelude::*;

fn random_graph(seed: u64, k: usize, connect: bool) -> Instance {
    let mut s = RandomSpec::new(2 + (seed % 10) as usize, k, 1 + (seed % 3) as usize, seed);
    s.edge_prob = 0.2 + 0.1 * (seed % 6) as f64;
    s.connect_left = connect;
    random_instance(&s).unwrap()
}

/// Pairwise definition, checked over every pair of subsets.
fn supermodular_everywhere(f: &SetFunctionTable) -> bool {
    (0..=f.full())
        .all(|x| (0..=f.full()).all(|y| f.get(x) + f.get(y) <= f.get(x | y) + f.get(x & y)))
}

#[test]
fn nu_tables_are_supermodular() {
    for seed in 0..200u64 {
        let k = 1 + (seed % 5) as usize;
        let inst = random_graph(seed, k, seed % 3 != 0);
        let tables = NeighborhoodTables::new(&inst).unwrap();
        let adj = inst.left_adj();
        for c in 0..inst.num_colors {
            let t = tables.nu_table(c);
            for mask in 0..=t.full() {
                let direct = (0..inst.n())
                    .filter(|&u| {
                        inst.left_colors[u] == c && adj[u].iter().all(|&v| mask >> v & 1 == 1)
                    })
                    .count();
                assert_eq!(t.get(mask), direct as i64);
            }
            assert!(check_supermodular(&t), "seed {seed} color {c}");
            assert!(supermodular_everywhere(&t));
        }
    }
}

fn modular_from(singletons: &[i64]) -> SetFunctionTable {
    SetFunctionTable::modular(0, singletons).unwrap()
}

/// `max_T f(T) + g(S \ T)`, by enumeration.
fn best_split(f: &SetFunctionTable, g: &SetFunctionTable, s: usize) -> i64 {
    let mut best = i64::MIN;
    for t in 0..=s {
        if t & !s == 0 {
            best = best.max(f.get(t) + g.get(s & !t));
        }
    }
    best
}

fn check_separator(f: &SetFunctionTable, f_prime: &SetFunctionTable, g: &SetFunctionTable) {
    let h = find_touching_separator(f, f_prime, g).unwrap();
    assert!(check_modular(&h));
    for mask in 0..=h.full() {
        assert!(f.get(mask).max(g.get(mask)) <= h.get(mask));
        assert!(h.get(mask) <= f_prime.get(mask));
    }
    assert_eq!(h.get(h.full()), best_split(f, g, f.full()));
    assert!(check_supermodular(&convolve_max(f, g)));
}

#[test]
fn separators_for_neighborhood_functions() {
    let mut done = 0;
    for seed in 0..400u64 {
        let m = 1 + (seed % 4) as usize;
        let inst = random_graph(seed, m, true);
        let tables = NeighborhoodTables::new(&inst).unwrap();
        let c = (seed / 4 % inst.num_colors as u64) as usize;
        let g = tables.nu_table(c);
        let x: Vec<i64> = (0..m).map(|v| ((seed >> v) % 3) as i64).collect();
        let f = modular_from(&x);
        let right_adj = inst.right_adj();
        let cap: Vec<i64> = (0..m)
            .map(|v| {
                let deg = right_adj[v]
                    .iter()
                    .filter(|&&u| inst.left_colors[u] == c)
                    .count() as i64;
                deg.max(x[v]) + (seed / 7 % 2) as i64
            })
            .collect();
        let f_prime = modular_from(&cap);
        check_separator(&f, &f_prime, &g);
        done += 1;
    }
    assert!(done >= 200);
}

fn supermodular_table() -> impl Strategy<Value = SetFunctionTable> {
    (1usize..=4).prop_flat_map(|m| {
        prop::collection::vec((0usize..16, 0i64..4), 0..6).prop_map(move |terms| {
            SetFunctionTable::from_fn(m, |mask| {
                terms
                    .iter()
                    .filter(|&&(need, _)| {
                        let need = need & ((1 << m) - 1);
                        need != 0 && need & !mask == 0
                    })
                    .map(|&(_, w)| w)
                    .sum()
            })
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn separators_for_random_triples(g in supermodular_table(), xs in prop::collection::vec(0i64..4, 4), slack in prop::collection::vec(0i64..3, 4)) {
        let m = g.ground_size;
        prop_assert!(supermodular_everywhere(&g));
        let f = modular_from(&xs[..m]);
        let f_prime = modular_from(
            &(0..m)
                .map(|v| {
                    let reach: i64 = (0..=g.full())
                        .filter(|&s| s >> v & 1 == 1)
                        .map(|s| g.get(s) - g.get(s & !(1 << v)))
                        .max()
                        .unwrap_or(0);
                    reach.max(xs[v]) + slack[v]
                })
                .collect::<Vec<_>>(),
        );
        let dominated = (0..=f.full()).all(|s| f.get(s).max(g.get(s)) <= f_prime.get(s));
        prop_assume!(dominated);
        check_separator(&f, &f_prime, &g);
    }

    #[test]
    fn local_and_pairwise_supermodularity_agree(m in 1usize..=4, values in prop::collection::vec(-3i64..4, 16)) {
        let t = SetFunctionTable::from_fn(m, |mask| values[mask]).unwrap();
        prop_assert_eq!(check_supermodular(&t), supermodular_everywhere(&t));
    }

    #[test]
    fn modular_tables_are_recognized(base in -3i64..4, xs in prop::collection::vec(-3i64..4, 1..=5), poke in 0usize..32) {
        let t = SetFunctionTable::modular(base, &xs).unwrap();
        prop_assert!(check_modular(&t));
        let mut values = t.values.clone();
        let idx = poke % values.len();
        if bits(idx).count() >= 2 {
            values[idx] += 1;
            let bent = SetFunctionTable::new(t.ground_size, values).unwrap();
            prop_assert!(!check_modular(&bent));
        }
    }
}

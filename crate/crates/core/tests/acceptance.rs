//! Acceptance suite: runs every criterion at its pinned tolerance and prints
//! one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    compositions, count_vectors, has_perfect_3dm, representable, satisfiable, smallest_formulas,
    subset_condition, tiny_3dm,
};
use fairmatch::fpt::{
    solve_kc, solve_maxmin_k, solve_maxmin_k_nonempty, solve_mov_k, FptConfig, MovOutcome,
};
use fairmatch::gen::{
    random_3dm, random_instance, random_sat4occ, reduce_3dm_maxmin24, reduce_3dm_maxmin33,
    reduce_sat_mov25, RandomSpec,
};
use fairmatch::ilp::IlpConfig;
use fairmatch::matchflow::{construct_exact, ColorClass};
use fairmatch::oracle::{brute_force, cover_search};
use fairmatch::poly::{
    solve_complete, solve_maxmin_lowdeg, solve_mov_deg4, solve_two_colors, GadgetKit2C,
};
use fairmatch::setfn::{
    check_modular, check_supermodular, convolve_max, find_touching_separator, NeighborhoodTables,
    SetFunctionTable,
};
use fairmatch::{verify, Answer, Error, Instance, Measure};

struct Outcome {
    pass: bool,
    detail: String,
}

/// Tally of YES witnesses checked by `verify`.
#[derive(Default)]
struct Witnesses {
    checked: usize,
    invalid: usize,
}

impl Witnesses {
    fn record(&mut self, inst: &Instance, answer: &Answer) {
        if let Some(m) = answer.matching() {
            self.checked += 1;
            if !verify(inst, m).map(|v| v.is_valid()).unwrap_or(false) {
                self.invalid += 1;
            }
        }
    }
}

fn base_spec(seed: u64, num_colors: usize, measure: Measure) -> RandomSpec {
    let n = 1 + (seed % 10) as usize;
    let k = 1 + (seed / 10 % 3) as usize;
    let mut s = RandomSpec::new(n, k, num_colors, seed);
    s.edge_prob = 0.35 + 0.1 * (seed / 30 % 5) as f64;
    s.ell = (seed / 150 % 3) as usize;
    s.measure = measure;
    s
}

type Solver = fn(&Instance) -> fairmatch::Result<Answer>;

struct Class {
    name: &'static str,
    solver: Solver,
    spec: fn(u64) -> RandomSpec,
}

fn kc(inst: &Instance) -> fairmatch::Result<Answer> {
    solve_kc(inst, &FptConfig::default())
}

fn maxmin_k(inst: &Instance) -> fairmatch::Result<Answer> {
    solve_maxmin_k(inst, &FptConfig::default())
}

fn maxmin_k_nonempty(inst: &Instance) -> fairmatch::Result<Answer> {
    solve_maxmin_k_nonempty(inst, &FptConfig::default())
}

fn mov_deg4(inst: &Instance) -> fairmatch::Result<Answer> {
    solve_mov_deg4(inst, &IlpConfig::default())
}

fn maxmin_lowdeg(inst: &Instance) -> fairmatch::Result<Answer> {
    solve_maxmin_lowdeg(inst, &IlpConfig::default())
}

fn classes() -> Vec<Class> {
    vec![
        Class {
            name: "kc/mov",
            solver: kc,
            spec: |seed| {
                let mut s = base_spec(seed, 1 + (seed % 4) as usize, Measure::Mov);
                s.size_min = (seed / 7 % 2) as usize;
                s
            },
        },
        Class {
            name: "kc/maxmin",
            solver: kc,
            spec: |seed| {
                let mut s = base_spec(seed, 1 + (seed % 4) as usize, Measure::MaxMin);
                s.size_min = (seed / 7 % 2) as usize;
                s
            },
        },
        Class {
            name: "maxmin-k",
            solver: maxmin_k,
            spec: |seed| base_spec(seed, 1 + (seed % 4) as usize, Measure::MaxMin),
        },
        Class {
            name: "maxmin-k-nonempty",
            solver: maxmin_k_nonempty,
            spec: |seed| {
                let mut s = base_spec(seed, 1 + (seed % 4) as usize, Measure::MaxMin);
                s.size_min = 1;
                s
            },
        },
        Class {
            name: "two-colors",
            solver: solve_two_colors,
            spec: |seed| {
                let measure = if seed % 2 == 0 {
                    Measure::Mov
                } else {
                    Measure::MaxMin
                };
                let mut s = base_spec(seed, 2, measure);
                s.size_min = (seed / 7 % 2) as usize;
                s
            },
        },
        Class {
            name: "mov-deg4",
            solver: mov_deg4,
            spec: |seed| {
                let mut s = base_spec(seed, 1 + (seed % 4) as usize, Measure::Mov);
                s.max_right_degree = Some(4);
                s.size_min = (seed / 7 % 2) as usize;
                s
            },
        },
        Class {
            name: "maxmin-lowdeg",
            solver: maxmin_lowdeg,
            spec: |seed| {
                let mut s = base_spec(seed, 1 + (seed % 4) as usize, Measure::MaxMin);
                if seed % 2 == 0 {
                    s.max_right_degree = Some(2);
                } else {
                    s.max_left_degree = Some(2);
                    s.max_right_degree = Some(3);
                }
                s.size_min = (seed / 7 % 2) as usize;
                s
            },
        },
    ]
}

const PER_CLASS: u64 = 600;

/// Criteria 1 to 3 share one randomized suite.
fn oracle_suite(w: &mut Witnesses) -> (Outcome, Outcome) {
    let mut lines = Vec::new();
    let mut all_ok = true;
    let mut mov_instances = Vec::new();
    for class in classes() {
        let mut mismatches = 0;
        let mut yes = 0;
        for seed in 0..PER_CLASS {
            let inst = random_instance(&(class.spec)(seed)).unwrap();
            let truth = brute_force(&inst).unwrap();
            w.record(&inst, &truth);
            let got = (class.solver)(&inst);
            match got {
                Ok(a) => {
                    w.record(&inst, &a);
                    mismatches += (a.is_yes() != truth.is_yes()) as usize;
                }
                Err(_) => mismatches += 1,
            }
            yes += truth.is_yes() as usize;
            if inst.measure == Measure::Mov && inst.at_most_nonempty() {
                mov_instances.push((inst, truth.is_yes()));
            }
        }
        all_ok &= mismatches == 0;
        lines.push(format!(
            "{} {mismatches}/{PER_CLASS} ({yes} yes)",
            class.name
        ));
    }
    let first = Outcome {
        pass: all_ok,
        detail: format!("mismatches: {}", lines.join(", ")),
    };

    let cfg = FptConfig::default();
    let mut false_yes = 0;
    let mut found = 0;
    let mut feasible = 0;
    for (inst, truth) in &mov_instances {
        let outcome = solve_mov_k(inst, &cfg).unwrap();
        if let MovOutcome::Yes(m) = outcome {
            w.record(inst, &Answer::Yes(m));
            if *truth {
                found += 1;
            } else {
                false_yes += 1;
            }
        }
        feasible += *truth as usize;
    }
    let rate = found as f64 / feasible.max(1) as f64;
    let second = Outcome {
        pass: false_yes == 0 && feasible >= 50 && rate >= 0.55,
        detail: format!(
            "{} instances, false yes {false_yes}, success {found}/{feasible} = {rate:.3} (need >= 0.55 over >= 50)",
            mov_instances.len()
        ),
    };
    (first, second)
}

fn complete_characterizations(w: &mut Witnesses) -> Outcome {
    let mut checked = 0;
    let mut mismatches = 0;
    for num_colors in 1..=4 {
        for counts in count_vectors(num_colors, 8) {
            if counts.iter().sum::<usize>() == 0 {
                continue;
            }
            for k in 1..=3 {
                for ell in 0..=2 {
                    for measure in [Measure::Mov, Measure::MaxMin] {
                        for size_min in 0..=1 {
                            let inst = Instance::complete(&counts, k, ell, measure)
                                .unwrap()
                                .with_size(size_min, None)
                                .unwrap();
                            let truth = brute_force(&inst).unwrap();
                            let got = solve_complete(&inst).unwrap();
                            w.record(&inst, &got);
                            let distributed =
                                common::complete_feasible(&counts, k, ell, measure, size_min);
                            checked += 1;
                            if got.is_yes() != truth.is_yes() || distributed != truth.is_yes() {
                                mismatches += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("{checked} instances, {mismatches} mismatches"),
    }
}

fn supermodular_everywhere(f: &SetFunctionTable) -> bool {
    (0..=f.full())
        .all(|x| (0..=f.full()).all(|y| f.get(x) + f.get(y) <= f.get(x | y) + f.get(x & y)))
}

fn set_functions() -> Outcome {
    let mut tables_ok = 0;
    let mut tables = 0;
    for seed in 0..200u64 {
        let mut s = RandomSpec::new(
            2 + (seed % 10) as usize,
            1 + (seed % 5) as usize,
            1 + (seed % 3) as usize,
            seed,
        );
        s.edge_prob = 0.2 + 0.1 * (seed % 6) as f64;
        s.connect_left = seed % 3 != 0;
        let inst = random_instance(&s).unwrap();
        let t = NeighborhoodTables::new(&inst).unwrap();
        for c in 0..inst.num_colors {
            tables += 1;
            let nu = t.nu_table(c);
            tables_ok += (check_supermodular(&nu) && supermodular_everywhere(&nu)) as usize;
        }
    }
    let mut triples = 0;
    let mut good = 0;
    for seed in 0..240u64 {
        let m = 1 + (seed % 4) as usize;
        let mut s = RandomSpec::new(2 + (seed % 9) as usize, m, 1 + (seed % 2) as usize, seed);
        s.edge_prob = 0.3 + 0.1 * (seed % 5) as f64;
        let inst = random_instance(&s).unwrap();
        let c = (seed / 4 % inst.num_colors as u64) as usize;
        let g = NeighborhoodTables::new(&inst).unwrap().nu_table(c);
        let x: Vec<i64> = (0..m).map(|v| ((seed >> v) % 3) as i64).collect();
        let f = SetFunctionTable::modular(0, &x).unwrap();
        let right_adj = inst.right_adj();
        let cap: Vec<i64> = (0..m)
            .map(|v| {
                let deg = right_adj[v]
                    .iter()
                    .filter(|&&u| inst.left_colors[u] == c)
                    .count() as i64;
                deg.max(x[v]) + (seed / 5 % 2) as i64
            })
            .collect();
        let f_prime = SetFunctionTable::modular(0, &cap).unwrap();
        triples += 1;
        let Ok(h) = find_touching_separator(&f, &f_prime, &g) else {
            continue;
        };
        let sandwich = (0..=h.full())
            .all(|s| f.get(s).max(g.get(s)) <= h.get(s) && h.get(s) <= f_prime.get(s));
        let full = h.full();
        let best = (0..=full)
            .map(|t| f.get(t) + g.get(full & !t))
            .max()
            .unwrap();
        let touching = h.get(full) == best;
        let g2_ok = check_supermodular(&convolve_max(&f, &g));
        good += (check_modular(&h) && sandwich && touching && g2_ok) as usize;
    }
    Outcome {
        pass: tables >= 200 && tables_ok == tables && triples >= 200 && good == triples,
        detail: format!(
            "nu tables {tables_ok}/{tables} supermodular, separators {good}/{triples} meet all postconditions"
        ),
    }
}

fn representation() -> Outcome {
    let mut cases = 0;
    let mut exceptions = 0;
    for ell in 0..=6 {
        for p in 0..=6 {
            for m1 in 0..=12usize {
                for m2 in 0..=12 - m1 {
                    let fair = m1 + m2 >= p && m1.abs_diff(m2) <= ell;
                    let kit = GadgetKit2C::new(ell, p, 12);
                    cases += 1;
                    if representable(&kit.s, m1, m2) != fair
                        || kit.represent(m1, m2).is_some() != fair
                    {
                        exceptions += 1;
                    }
                }
            }
        }
    }
    Outcome {
        pass: exceptions == 0,
        detail: format!("{cases} cases, {exceptions} exceptions"),
    }
}

fn cover_decides(inst: &Instance, w: &mut Witnesses) -> bool {
    let a = cover_search(inst).unwrap();
    w.record(inst, &a);
    a.is_yes()
}

fn reductions(w: &mut Witnesses) -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    let mut samples = tiny_3dm();
    samples.extend((0..100u64).map(|seed| {
        let q = 2 + (seed % 2) as usize;
        random_3dm(q, q + (seed / 2 % (2 * q as u64 + 1)) as usize, seed).unwrap()
    }));
    for t in &samples {
        let expect = has_perfect_3dm(t);
        let a = reduce_3dm_maxmin33(t).unwrap();
        let b = reduce_3dm_maxmin24(t).unwrap();
        checked += 2;
        bad += (a.max_left_degree() > 3
            || a.max_right_degree() > 3
            || cover_decides(&a, w) != expect) as usize;
        bad += (b.max_left_degree() > 2
            || b.max_right_degree() > 4
            || b.num_colors != 3
            || cover_decides(&b, w) != expect) as usize;
    }
    let mut formulas = smallest_formulas();
    formulas.extend(
        (0..100u64).map(|seed| random_sat4occ(if seed % 4 == 0 { 6 } else { 3 }, seed).unwrap()),
    );
    for c in &formulas {
        let inst = reduce_sat_mov25(c).unwrap();
        checked += 1;
        bad += (inst.max_left_degree() > 2
            || inst.max_right_degree() > 5
            || inst.num_colors != 3
            || cover_decides(&inst, w) != satisfiable(c)) as usize;
    }
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{checked} reduced instances from {} 3DM inputs and {} formulas, {bad} failures",
            samples.len(),
            formulas.len()
        ),
    }
}

fn scaling(w: &mut Witnesses) -> Outcome {
    let cfg = FptConfig::default();
    let mut notes = Vec::new();
    let mut pass = true;
    for (seed, ell) in [(1u64, 12usize), (2, 0), (3, 6)] {
        let mut s = RandomSpec::new(2000, 3, 50, seed);
        s.measure = Measure::MaxMin;
        s.ell = ell;
        let inst = random_instance(&s).unwrap();
        let start = Instant::now();
        let got = solve_maxmin_k(&inst, &cfg).unwrap();
        let elapsed = start.elapsed();
        w.record(&inst, &got);
        let fast = elapsed < Duration::from_secs(10);
        let (cross, how) = match &got {
            Answer::Yes(m) => (verify(&inst, m).unwrap().is_valid(), "verified"),
            Answer::No => match solve_kc(&inst, &cfg) {
                Ok(a) => (!a.is_yes(), "kc agrees"),
                Err(Error::Budget { .. }) => (true, "kc over budget"),
                Err(_) => (false, "kc failed"),
            },
        };
        pass &= fast && cross;
        notes.push(format!(
            "ell {ell}: {} in {:.2}s ({how}{})",
            if got.is_yes() { "yes" } else { "no" },
            elapsed.as_secs_f64(),
            if cross { "" } else { ", mismatch" }
        ));
    }
    Outcome {
        pass,
        detail: format!("n 2000, 50 colors, k 3; {}", notes.join("; ")),
    }
}

fn hall() -> Outcome {
    let mut instances = 0;
    let mut targets = 0;
    let mut bad = 0;
    for seed in 0..320u64 {
        let k = 1 + (seed % 4) as usize;
        let mut s = RandomSpec::new(1 + (seed / 4 % 7) as usize, k, 1, seed);
        s.edge_prob = 0.25 + 0.15 * (seed % 4) as f64;
        s.connect_left = seed % 5 != 0;
        let class = ColorClass::of(&random_instance(&s).unwrap(), 0);
        instances += 1;
        for z in compositions(class.len(), k) {
            targets += 1;
            let got = construct_exact(&class, &z).unwrap();
            let ok = match &got {
                Some(assign) => {
                    let mut load = vec![0; k];
                    for (i, &v) in assign.iter().enumerate() {
                        load[v] += class.adj[i].contains(&v) as usize;
                    }
                    load == z
                }
                None => true,
            };
            if !ok || got.is_some() != subset_condition(&class.adj, &z) {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: instances >= 300 && bad == 0,
        detail: format!("{instances} instances, {targets} target vectors, {bad} disagreements"),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut witnesses = Witnesses::default();
    let (c1, c2) = oracle_suite(&mut witnesses);
    let c4 = complete_characterizations(&mut witnesses);
    let c5 = set_functions();
    let c6 = representation();
    let c7 = reductions(&mut witnesses);
    let c8 = scaling(&mut witnesses);
    let c9 = hall();
    let c3 = Outcome {
        pass: witnesses.invalid == 0 && witnesses.checked > 0,
        detail: format!(
            "{} witnesses checked, {} rejected",
            witnesses.checked, witnesses.invalid
        ),
    };
    let results = [
        ("oracle agreement", c1),
        ("one-sided randomized MoV", c2),
        ("witness soundness", c3),
        ("complete bipartite characterizations", c4),
        ("set-function properties", c5),
        ("representation of fair pairs", c6),
        ("reduction validity", c7),
        ("scaling smoke test", c8),
        ("subset-condition constructiveness", c9),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.pass as usize;
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

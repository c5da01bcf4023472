//! Test-side reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use fairmatch::gen::{CnfInstance, ThreeDMInstance};
use fairmatch::poly::ADMISSIBLE;
use fairmatch::{CountVector, Measure};

/// All color sequences of length `len` over `0..num_colors`.
pub fn sequences(len: usize, num_colors: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..num_colors).map(move |c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn subset_counts(colors: &[usize], num_colors: usize, mask: usize) -> CountVector {
    let mut counts = vec![0; num_colors];
    for (i, &c) in colors.iter().enumerate() {
        if mask >> i & 1 == 1 {
            counts[c] += 1;
        }
    }
    CountVector(counts)
}

/// Test-side search over representations: every way to give each copy of
/// gadget `i` one of its admissible boundary vectors.
pub fn representable(s: &[usize; 6], m1: usize, m2: usize) -> bool {
    fn go(s: &[usize; 6], i: usize, left: usize, m1: usize, m2: usize) -> bool {
        if i == 6 {
            return m1 == 0 && m2 == 0;
        }
        if left == 0 {
            return go(s, i + 1, s.get(i + 1).copied().unwrap_or(0), m1, m2);
        }
        ADMISSIBLE[i]
            .iter()
            .any(|x| x[0] <= m1 && x[1] <= m2 && go(s, i, left - 1, m1 - x[0], m2 - x[1]))
    }
    go(s, 0, s[0], m1, m2)
}

/// Test-side decision for complete graphs: distribute the color counts over
/// the right vertices one at a time.
pub fn complete_feasible(
    counts: &[usize],
    k: usize,
    ell: usize,
    measure: Measure,
    lo: usize,
) -> bool {
    fn go(
        rem: &mut Vec<usize>,
        v: usize,
        k: usize,
        ell: usize,
        measure: Measure,
        lo: usize,
    ) -> bool {
        let fair = |x: &[usize]| {
            let cv = CountVector(x.to_vec());
            cv.measure(measure) <= ell && cv.total() >= lo
        };
        if v + 1 == k {
            return fair(rem);
        }
        let mut take = vec![0; rem.len()];
        loop {
            if fair(&take) {
                for (r, t) in rem.iter_mut().zip(&take) {
                    *r -= t;
                }
                let ok = go(rem, v + 1, k, ell, measure, lo);
                for (r, t) in rem.iter_mut().zip(&take) {
                    *r += t;
                }
                if ok {
                    return true;
                }
            }
            let mut i = 0;
            while i < take.len() && take[i] == rem[i] {
                take[i] = 0;
                i += 1;
            }
            if i == take.len() {
                return false;
            }
            take[i] += 1;
        }
    }
    go(&mut counts.to_vec(), 0, k, ell, measure, lo)
}

pub fn count_vectors(num_colors: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..num_colors {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let used: usize = s.iter().sum();
                (0..=max_total - used).map(move |x| {
                    let mut t = s.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether some subset of the triples covers every element exactly once.
pub fn has_perfect_3dm(t: &ThreeDMInstance) -> bool {
    let m = t.triples.len();
    (0..1usize << m).any(|mask| {
        let mut hit = [vec![0; t.x], vec![0; t.y], vec![0; t.z]];
        for (i, &(a, b, c)) in t.triples.iter().enumerate() {
            if mask >> i & 1 == 1 {
                hit[0][a] += 1;
                hit[1][b] += 1;
                hit[2][c] += 1;
            }
        }
        hit.iter().all(|h| h.iter().all(|&x| x == 1))
    })
}

pub fn satisfiable(c: &CnfInstance) -> bool {
    (0..1usize << c.num_vars).any(|mask| {
        let assignment: Vec<bool> = (0..c.num_vars).map(|x| mask >> x & 1 == 1).collect();
        c.satisfied_by(&assignment)
    })
}

/// Every triple set of size at most four over dimensions of size at most two.
pub fn tiny_3dm() -> Vec<ThreeDMInstance> {
    let mut out = Vec::new();
    for x in 1..=2 {
        for y in 1..=2 {
            for z in 1..=2 {
                let all: Vec<(usize, usize, usize)> = (0..x)
                    .flat_map(|a| (0..y).flat_map(move |b| (0..z).map(move |c| (a, b, c))))
                    .collect();
                for mask in 0..1usize << all.len() {
                    if mask.count_ones() > 4 {
                        continue;
                    }
                    let triples = (0..all.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| all[i])
                        .collect();
                    let t = ThreeDMInstance { x, y, z, triples };
                    if t.validate().is_ok() {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// All formulas over three variables with each variable twice positive and
/// twice negative, up to clause and literal order.
pub fn smallest_formulas() -> Vec<CnfInstance> {
    fn go(rest: &mut Vec<i32>, clauses: &mut Vec<[i32; 3]>, out: &mut BTreeSet<Vec<[i32; 3]>>) {
        if rest.is_empty() {
            let mut sorted = clauses.clone();
            sorted.sort();
            out.insert(sorted);
            return;
        }
        let first = rest.remove(0);
        for i in 0..rest.len() {
            for j in i + 1..rest.len() {
                let clause = [first, rest[i], rest[j]];
                let (b, a) = (rest.remove(j), rest.remove(i));
                clauses.push(clause);
                go(rest, clauses, out);
                clauses.pop();
                rest.insert(i, a);
                rest.insert(j, b);
            }
        }
        rest.insert(0, first);
    }
    let mut literals: Vec<i32> = (1..=3).flat_map(|x| [x, x, -x, -x]).collect();
    let mut out = BTreeSet::new();
    go(&mut literals, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|clauses| CnfInstance {
            num_vars: 3,
            clauses,
        })
        .collect()
}

/// Vertices whose whole neighborhood lies in `mask`.
pub fn nu_of(adj: &[Vec<usize>], mask: usize) -> usize {
    adj.iter()
        .filter(|a| a.iter().all(|&v| mask >> v & 1 == 1))
        .count()
}

/// Whether every right-vertex subset can absorb the vertices trapped in it.
pub fn subset_condition(adj: &[Vec<usize>], z: &[usize]) -> bool {
    let k = z.len();
    (0..1usize << k).all(|mask| {
        let cap: usize = (0..k).filter(|&v| mask >> v & 1 == 1).map(|v| z[v]).sum();
        cap >= nu_of(adj, mask)
    })
}

/// All vectors of `parts` non-negative entries summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|x| {
            compositions(total - x, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, x);
                    rest
                })
        })
        .collect()
}

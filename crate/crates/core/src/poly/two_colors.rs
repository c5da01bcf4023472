//! Two colors: one-to-one matching in a gadget graph that covers a
//! required vertex set.

use crate::error::{Error, Result};
use crate::matchflow::saturating_matching;
use crate::model::{verify, Answer, Instance, Matching};

/// Markers of a gadget vertex: may take a first-color left vertex, may take
/// a second-color left vertex, must be covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Marks {
    pub one: bool,
    pub two: bool,
    pub required: bool,
}

const fn mark(one: bool, two: bool, required: bool) -> Marks {
    Marks { one, two, required }
}

/// Vertices and edges of one gadget type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetShape {
    pub marks: Vec<Marks>,
    pub edges: Vec<(usize, usize)>,
}

/// Boundary vectors `[x1, x2]` for which gadget `i` still has a matching
/// covering its required vertices after its first-color (x1 = 1) and
/// second-color (x2 = 1) endpoints are taken.
pub const ADMISSIBLE: [&[[usize; 2]]; 6] = [
    &[[0, 0], [1, 1]],
    &[[0, 0], [0, 1], [1, 0], [1, 1]],
    &[[0, 1], [1, 0], [1, 1]],
    &[[0, 0], [0, 1], [1, 0]],
    &[[1, 1]],
    &[[1, 0], [0, 1]],
];

/// Gadget multiplicities for one `(ell, p)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetKit2C {
    pub ell: usize,
    pub p: usize,
    pub s: [usize; 6],
}

impl GadgetKit2C {
    /// Multiplicities for fairness `ell`, size lower bound `p`, and `s1`
    /// copies of the first gadget.
    pub fn new(ell: usize, p: usize, s1: usize) -> Self {
        let s = if ell == 0 {
            [s1, 0, 0, 0, p.div_ceil(2), 0]
        } else if p < ell {
            [s1, 1, 0, ell - p - 1, 0, p]
        } else if (p - ell).is_multiple_of(2) {
            [s1, 0, 1, 0, (p - ell) / 2, ell - 1]
        } else {
            [s1, 0, 0, 1, (p - ell).div_ceil(2), ell - 1]
        };
        GadgetKit2C { ell, p, s }
    }

    pub fn shape(i: usize) -> GadgetShape {
        let (marks, edges): (Vec<Marks>, Vec<(usize, usize)>) = match i {
            0 => (
                vec![
                    mark(true, false, true),
                    mark(false, false, true),
                    mark(false, false, true),
                    mark(false, true, true),
                ],
                vec![(0, 1), (1, 2), (2, 3)],
            ),
            1 => (
                vec![
                    mark(true, false, true),
                    mark(false, false, false),
                    mark(false, true, true),
                ],
                vec![(0, 1), (1, 2), (0, 2)],
            ),
            2 => (
                vec![
                    mark(true, false, true),
                    mark(false, false, false),
                    mark(false, true, true),
                ],
                vec![(0, 1), (1, 2)],
            ),
            3 => (
                vec![
                    mark(true, false, false),
                    mark(false, false, true),
                    mark(false, true, false),
                ],
                vec![(0, 1), (1, 2)],
            ),
            4 => (
                vec![mark(true, false, true), mark(false, true, true)],
                vec![],
            ),
            5 => (vec![mark(true, true, true)], vec![]),
            _ => panic!("gadget index {i} out of range"),
        };
        GadgetShape { marks, edges }
    }

    /// Counts `a[i][j]` of gadget `i` used with boundary `ADMISSIBLE[i][j]`
    /// that sum to `[m1, m2]` with exactly `s[i]` copies of each gadget.
    pub fn represent(&self, m1: usize, m2: usize) -> Option<Vec<Vec<usize>>> {
        let w = m2 + 1;
        let cells = (m1 + 1) * w;
        let mut reach = vec![false; cells];
        reach[0] = true;
        // step[t][cell] = choice index that reached cell at copy t.
        let mut steps: Vec<(usize, Vec<Option<usize>>)> = Vec::new();
        for (i, &copies) in self.s.iter().enumerate() {
            for _ in 0..copies {
                let mut next = vec![false; cells];
                let mut how = vec![None; cells];
                for cell in 0..cells {
                    if !reach[cell] {
                        continue;
                    }
                    let (a, b) = (cell / w, cell % w);
                    for (j, x) in ADMISSIBLE[i].iter().enumerate() {
                        let (na, nb) = (a + x[0], b + x[1]);
                        if na <= m1 && nb <= m2 && !next[na * w + nb] {
                            next[na * w + nb] = true;
                            how[na * w + nb] = Some(j);
                        }
                    }
                }
                reach = next;
                steps.push((i, how));
            }
        }
        let mut cell = m1 * w + m2;
        if !reach[cell] {
            return None;
        }
        let mut a: Vec<Vec<usize>> = ADMISSIBLE.iter().map(|adm| vec![0; adm.len()]).collect();
        for (i, how) in steps.iter().rev() {
            let j = how[cell].expect("reachable cell has a predecessor");
            a[*i][j] += 1;
            let x = ADMISSIBLE[*i][j];
            cell -= x[0] * w + x[1];
        }
        Some(a)
    }
}

/// Decides instances with exactly two colors and any size lower bound.
pub fn solve_two_colors(instance: &Instance) -> Result<Answer> {
    if instance.num_colors != 2 {
        return Err(Error::input(format!(
            "two-color solver needs exactly 2 colors, got {}",
            instance.num_colors
        )));
    }
    if instance.effective_size_max().is_some() {
        return Err(Error::precondition(
            "two-color solver does not support an upper size bound",
        ));
    }
    let n = instance.n();
    if instance.left_adj().iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    let right_adj = instance.right_adj();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut edges = Vec::new();
    let mut must: Vec<usize> = (0..n).collect();
    for (v, nbrs) in right_adj.iter().enumerate() {
        let counts = instance.counts_of(nbrs.iter().copied());
        let s1 = n.min(counts.0[0]).min(counts.0[1]);
        let kit = GadgetKit2C::new(instance.ell, instance.size_min, s1);
        let mut ones = Vec::new();
        let mut twos = Vec::new();
        for (i, &copies) in kit.s.iter().enumerate() {
            let shape = GadgetKit2C::shape(i);
            for _ in 0..copies {
                let base = owner.len();
                for (j, m) in shape.marks.iter().enumerate() {
                    owner.push(Some(v));
                    if m.one {
                        ones.push(base + j);
                    }
                    if m.two {
                        twos.push(base + j);
                    }
                    if m.required {
                        must.push(base + j);
                    }
                }
                edges.extend(shape.edges.iter().map(|&(a, b)| (base + a, base + b)));
            }
        }
        for &u in nbrs {
            let targets = if instance.left_colors[u] == 0 {
                &ones
            } else {
                &twos
            };
            edges.extend(targets.iter().map(|&g| (u, g)));
        }
    }
    let Some(pairs) = saturating_matching(owner.len(), &edges, &must) else {
        return Ok(Answer::No);
    };
    let mut assign = vec![usize::MAX; n];
    for (a, b) in pairs {
        if a < n {
            assign[a] = owner[b].expect("left vertices match into gadgets");
        }
    }
    if assign.contains(&usize::MAX) {
        return Err(Error::internal(
            "two-color matching left a vertex unassigned",
        ));
    }
    let matching = Matching::new(assign);
    if !verify(instance, &matching)?.is_valid() {
        return Err(Error::internal("two-color reconstruction is invalid"));
    }
    Ok(Answer::Yes(matching))
}

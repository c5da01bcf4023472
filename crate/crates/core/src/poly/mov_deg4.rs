//! MoV with right degrees at most four, via degree-list gadgets.

use super::general_factor::{solve_gadgets, GNode, Gadget};
use crate::error::{Error, Result};
use crate::ilp::IlpConfig;
use crate::model::{verify, Answer, Instance, Measure};

/// Positions of `nbrs` grouped by color, largest group first, ties by color id.
pub(crate) fn color_groups(instance: &Instance, nbrs: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, &u) in nbrs.iter().enumerate() {
        let c = instance.left_colors[u];
        match groups.iter_mut().find(|(gc, _)| *gc == c) {
            Some((_, g)) => g.push(i),
            None => groups.push((c, vec![i])),
        }
    }
    groups.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    groups.into_iter().map(|(_, g)| g).collect()
}

fn star(nbrs: Vec<usize>, list: impl IntoIterator<Item = usize>) -> Gadget {
    let m = nbrs.len();
    let mut g = Gadget::new(nbrs);
    let hub = g.inner(list);
    for i in 0..m {
        g.join(GNode::Left(i), hub);
    }
    g
}

/// The gadget of right vertex `v` for MoV fairness `ell`.
pub fn mov_gadget(instance: &Instance, v: usize, nonempty: bool) -> Result<Gadget> {
    let nbrs = instance.right_adj()[v].clone();
    let deg = nbrs.len();
    if deg > 4 {
        return Err(Error::input(format!(
            "right vertex {v} has degree {deg} > 4"
        )));
    }
    let groups = color_groups(instance, &nbrs);
    let lo = nonempty as usize;
    let ell = instance.ell;
    if groups.len() <= 1 {
        return Ok(star(nbrs, lo..=ell.min(deg)).clip());
    }
    let count: Vec<usize> = groups.iter().map(Vec::len).collect();
    if ell >= count[0] {
        return Ok(star(nbrs, lo..=deg).clip());
    }
    let l = |i: usize| GNode::Left(i);
    let a = &groups[0];
    let b = &groups[1];
    let mut g = Gadget::new(nbrs.clone());
    match (ell, count.as_slice(), nonempty) {
        (0, [1, 1], _) => {
            let v1 = g.inner(if nonempty { vec![2] } else { vec![0, 2] });
            g.join(l(a[0]), v1);
            g.join(l(b[0]), v1);
        }
        (0 | 1, [2, 1] | [3, 1], false) => {
            let v1 = g.inner(if ell == 0 { vec![1] } else { vec![0, 1, 2] });
            let v2 = g.inner([1]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            g.join(v1, v2);
        }
        (0, [2, 1] | [3, 1], true) => {
            let v1 = g.inner([1]);
            let v2 = g.inner([1]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
        }
        (0, [1, 1, 1], _) => {
            g = star(nbrs, if nonempty { vec![2, 3] } else { vec![0, 2, 3] });
        }
        (0, [1, 1, 1, 1], _) => {
            g = star(
                nbrs,
                if nonempty {
                    vec![2, 3, 4]
                } else {
                    vec![0, 2, 3, 4]
                },
            );
        }
        (0, [2, 2], _) => {
            let v1 = g.inner([2]);
            let v2 = g.inner([2]);
            let w1 = g.inner([1]);
            let w2 = g.inner([1]);
            for &i in a {
                g.join(l(i), v1);
            }
            for &i in b {
                g.join(l(i), v2);
            }
            if !nonempty {
                g.join(v1, v2);
            }
            g.join(v2, w2);
            g.join(w2, w1);
            g.join(w1, v1);
        }
        (0, [2, 1, 1], _) => {
            let c = &groups[2];
            let v1 = g.inner([1]);
            let v2 = g.inner([1]);
            let v3 = g.inner([1]);
            let v4 = g.inner(if nonempty { vec![0, 1] } else { vec![0, 1, 3] });
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            g.join(l(c[0]), v3);
            g.join(v2, v4);
            g.join(v3, v4);
            g.join(v1, v4);
        }
        (1, [2, 2], false) => {
            let v1 = g.inner([1, 2]);
            let v2 = g.inner([1, 2]);
            for &i in a {
                g.join(l(i), v1);
            }
            for &i in b {
                g.join(l(i), v2);
            }
            g.join(v1, v2);
        }
        (1, [2, 1, 1], false) => {
            let c = &groups[2];
            let v1 = g.inner([0, 1, 2]);
            let v2 = g.inner([1, 2]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            g.join(l(c[0]), v2);
            g.join(v1, v2);
        }
        (1, [2, 1] | [3, 1] | [2, 2], true) => {
            let v1 = g.inner([2]);
            let v2 = g.inner([2]);
            let v3 = g.inner([0, 1]);
            for &i in a {
                g.join(l(i), v1);
            }
            for &i in b {
                g.join(l(i), v2);
            }
            g.join(v1, v2);
            g.join(v1, v3);
            g.join(v2, v3);
        }
        (1, [2, 1, 1], true) => {
            let c = &groups[2];
            let v1 = g.inner([3]);
            let v2 = g.inner([3]);
            let v3 = g.inner([3]);
            let v4 = g.inner([0, 1, 2]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            g.join(l(c[0]), v3);
            g.join(v1, v2);
            g.join(v2, v3);
            g.join(v1, v3);
            g.join(v1, v4);
            g.join(v2, v4);
            g.join(v3, v4);
        }
        (2, [3, 1], false) => {
            let v1 = g.inner([0, 1, 2, 3]);
            let v2 = g.inner([1]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            g.join(v1, v2);
        }
        (2, [3, 1], true) => {
            let v1 = g.inner([2, 3]);
            let w1 = g.inner([1]);
            let w2 = g.inner([1]);
            let v2 = g.inner([1, 3]);
            for &i in a {
                g.join(l(i), v1);
            }
            g.join(l(b[0]), v2);
            for w in [w1, w2] {
                g.join(v1, w);
                g.join(w, v2);
            }
        }
        _ => {
            return Err(Error::internal(format!(
                "no gadget for counts {count:?} with ell {ell}"
            )))
        }
    }
    Ok(g.clip())
}

/// MoV with right degrees at most four and at most the non-emptiness constraint.
pub fn solve_mov_deg4(instance: &Instance, config: &IlpConfig) -> Result<Answer> {
    if instance.measure != Measure::Mov {
        return Err(Error::input("mov-deg4 solver needs the mov measure"));
    }
    if instance.max_right_degree() > 4 {
        return Err(Error::input(format!(
            "mov-deg4 solver needs right degrees at most 4, got {}",
            instance.max_right_degree()
        )));
    }
    if !instance.at_most_nonempty() {
        return Err(Error::input(
            "mov-deg4 solver supports at most the non-emptiness constraint",
        ));
    }
    let nonempty = instance.nonempty();
    let gadgets = (0..instance.k)
        .map(|v| mov_gadget(instance, v, nonempty))
        .collect::<Result<Vec<_>>>()?;
    let Some(matching) = solve_gadgets(instance, &gadgets, config)? else {
        return Ok(Answer::No);
    };
    if !verify(instance, &matching)?.is_valid() {
        return Err(Error::internal("mov-deg4 reconstruction is invalid"));
    }
    Ok(Answer::Yes(matching))
}

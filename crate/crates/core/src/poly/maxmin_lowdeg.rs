//! Max-Min with right degree at most two, or left degree at most two and
//! right degree at most three.

use std::collections::VecDeque;

use super::general_factor::{solve_gadgets, GNode, Gadget};
use super::mov_deg4::color_groups;
use super::two_colors::solve_two_colors;
use crate::error::{Error, Result};
use crate::ilp::IlpConfig;
use crate::matchflow::{
    construct_bounded, max_bipartite_matching, BipGraph, ColorClass, DegreeBounds,
};
use crate::model::{verify, Answer, Instance, Matching, Measure};

fn whole_class(instance: &Instance) -> ColorClass {
    ColorClass {
        vertices: (0..instance.n()).collect(),
        adj: instance.left_adj(),
    }
}

/// Left-perfect assignment with `lower[v] <= |M(v)| <= upper[v]`.
fn bounded(instance: &Instance, lower: Vec<usize>, upper: Vec<usize>) -> Result<Option<Matching>> {
    if lower.iter().zip(&upper).any(|(l, u)| l > u) {
        return Ok(None);
    }
    let bounds = DegreeBounds::new(lower, upper)?;
    Ok(construct_bounded(&whole_class(instance), &bounds).map(Matching::new))
}

/// Left-perfect assignment through capacity-one slots; `slots` lists, per
/// right vertex, the left vertices each of its slots accepts.
fn via_slots(instance: &Instance, slots: &[Vec<Vec<usize>>]) -> Option<Matching> {
    let n = instance.n();
    let mut owner = Vec::new();
    let mut adj = vec![Vec::new(); n];
    for (v, list) in slots.iter().enumerate() {
        for members in list {
            for &u in members {
                adj[u].push(owner.len());
            }
            owner.push(v);
        }
    }
    let m = max_bipartite_matching(&BipGraph::from_adj(owner.len(), adj));
    (m.size() == n).then(|| Matching::new(m.left.iter().map(|s| owner[s.unwrap()]).collect()))
}

fn lowdeg_applies(instance: &Instance) -> bool {
    let dv = instance.max_right_degree();
    dv <= 2 || (instance.max_left_degree() <= 2 && dv <= 3)
}

/// Degree-list gadget for right vertex `v` under non-emptiness with
/// `ell` in `{1, 2}` and at least three colors.
pub fn maxmin_lowdeg_gadget(instance: &Instance, v: usize) -> Result<Gadget> {
    let nbrs = instance.right_adj()[v].clone();
    let deg = nbrs.len();
    let groups = color_groups(instance, &nbrs);
    let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
    let mut g = Gadget::new(nbrs);
    let star = |g: &mut Gadget, list: Vec<usize>| {
        let hub = g.inner(list);
        for i in 0..deg {
            g.join(GNode::Left(i), hub);
        }
    };
    match (instance.ell, counts.as_slice()) {
        (1, [2, 1]) => {
            let v1 = g.inner([1]);
            let v2 = g.inner([1]);
            let w = g.inner([0, 1]);
            for &i in &groups[0] {
                g.join(GNode::Left(i), v1);
            }
            g.join(GNode::Left(groups[1][0]), v2);
            g.join(v1, w);
            g.join(v2, w);
        }
        (1, _) if counts.len() == 1 => star(&mut g, vec![1]),
        (1, _) if counts.iter().all(|&c| c == 1) => star(&mut g, (1..=3).collect()),
        (2, [3]) => star(&mut g, vec![1, 2]),
        (2, _) => star(&mut g, (1..=3).collect()),
        _ => {
            return Err(Error::internal(format!(
                "no max-min gadget for counts {counts:?} with ell {}",
                instance.ell
            )))
        }
    }
    Ok(g.clip())
}

/// Exact solver for the low-degree Max-Min cases.
pub fn solve_maxmin_lowdeg(instance: &Instance, config: &IlpConfig) -> Result<Answer> {
    if instance.measure != Measure::MaxMin {
        return Err(Error::input(
            "maxmin-lowdeg solver needs the maxmin measure",
        ));
    }
    if !lowdeg_applies(instance) {
        return Err(Error::input(format!(
            "maxmin-lowdeg solver needs right degree <= 2, or left degree <= 2 and right \
             degree <= 3; got left {} right {}",
            instance.max_left_degree(),
            instance.max_right_degree()
        )));
    }
    if !instance.at_most_nonempty() {
        return Err(Error::input(
            "maxmin-lowdeg solver supports at most the non-emptiness constraint",
        ));
    }
    if instance.left_adj().iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    if instance.num_colors == 2 {
        return solve_two_colors(instance);
    }
    let found = decide(instance, config)?;
    let Some(matching) = found else {
        return Ok(Answer::No);
    };
    if !verify(instance, &matching)?.is_valid() {
        return Err(Error::internal("maxmin-lowdeg reconstruction is invalid"));
    }
    Ok(Answer::Yes(matching))
}

fn decide(instance: &Instance, config: &IlpConfig) -> Result<Option<Matching>> {
    let k = instance.k;
    let right_adj = instance.right_adj();
    let nonempty = instance.nonempty();
    let lo = vec![nonempty as usize; k];
    let deg: Vec<usize> = right_adj.iter().map(Vec::len).collect();
    let ell = instance.ell;
    let colors = instance.num_colors;
    let all_empty =
        || (instance.n() == 0 && (!nonempty || k == 0)).then(|| Matching::new(Vec::new()));
    if colors == 1 {
        let cap = deg.iter().map(|&d| d.min(ell)).collect();
        return bounded(instance, lo, cap);
    }
    if instance.max_right_degree() <= 2 {
        return match ell {
            0 => Ok(all_empty()),
            1 => {
                let cap = right_adj
                    .iter()
                    .map(|nbrs| {
                        if color_groups(instance, nbrs).len() < nbrs.len() {
                            1
                        } else {
                            nbrs.len()
                        }
                    })
                    .collect();
                bounded(instance, lo, cap)
            }
            _ => bounded(instance, lo, deg),
        };
    }
    match ell {
        0 if colors >= 4 => Ok(all_empty()),
        0 if nonempty => Ok(zero_fair_nonempty(instance)),
        0 => Ok(zero_fair(instance)),
        1 | 2 if nonempty => {
            let gadgets = (0..k)
                .map(|v| maxmin_lowdeg_gadget(instance, v))
                .collect::<Result<Vec<_>>>()?;
            solve_gadgets(instance, &gadgets, config)
        }
        1 => {
            let slots: Vec<Vec<Vec<usize>>> = right_adj
                .iter()
                .map(|nbrs| {
                    color_groups(instance, nbrs)
                        .into_iter()
                        .map(|g| g.into_iter().map(|i| nbrs[i]).collect())
                        .collect()
                })
                .collect();
            Ok(via_slots(instance, &slots))
        }
        2 => {
            let slots: Vec<Vec<Vec<usize>>> = right_adj
                .iter()
                .map(|nbrs| {
                    if nbrs.len() == 3 && color_groups(instance, nbrs).len() == 1 {
                        vec![nbrs.clone(), nbrs.clone()]
                    } else {
                        nbrs.iter().map(|&u| vec![u]).collect()
                    }
                })
                .collect();
            Ok(via_slots(instance, &slots))
        }
        _ => bounded(instance, lo, deg),
    }
}

fn rainbow(instance: &Instance, members: &[usize]) -> bool {
    members.len() == instance.num_colors
        && instance
            .counts_of(members.iter().copied())
            .0
            .iter()
            .all(|&c| c == 1)
}

fn zero_fair_nonempty(instance: &Instance) -> Option<Matching> {
    let left_adj = instance.left_adj();
    if left_adj.iter().any(|a| a.len() != 1) {
        return None;
    }
    let right_adj = instance.right_adj();
    if right_adj.iter().any(|nbrs| !rainbow(instance, nbrs)) {
        return None;
    }
    Some(Matching::new(left_adj.iter().map(|a| a[0]).collect()))
}

/// Three colors, `ell = 0`: every right vertex takes all of its current
/// neighborhood or nothing.
fn zero_fair(instance: &Instance) -> Option<Matching> {
    let n = instance.n();
    let k = instance.k;
    let left_adj = instance.left_adj();
    let right_adj = instance.right_adj();
    let mut alive_u = vec![true; n];
    let mut alive_v = vec![true; k];
    let mut assign = vec![usize::MAX; n];
    let current = |v: usize, alive_u: &[bool]| -> Vec<usize> {
        right_adj[v]
            .iter()
            .copied()
            .filter(|&u| alive_u[u])
            .collect()
    };
    loop {
        let mut changed = false;
        for v in 0..k {
            if alive_v[v] && !rainbow(instance, &current(v, &alive_u)) {
                alive_v[v] = false;
                changed = true;
            }
        }
        for u in 0..n {
            if !alive_u[u] {
                continue;
            }
            let live: Vec<usize> = left_adj[u]
                .iter()
                .copied()
                .filter(|&v| alive_v[v])
                .collect();
            match live.as_slice() {
                [] => return None,
                [v] => {
                    for w in current(*v, &alive_u) {
                        assign[w] = *v;
                        alive_u[w] = false;
                    }
                    alive_v[*v] = false;
                    changed = true;
                    break;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let mut g0: Vec<Vec<usize>> = vec![Vec::new(); k];
    for u in (0..n).filter(|&u| alive_u[u]) {
        let ends: Vec<usize> = left_adj[u]
            .iter()
            .copied()
            .filter(|&v| alive_v[v])
            .collect();
        g0[ends[0]].push(ends[1]);
        g0[ends[1]].push(ends[0]);
    }
    let mut side = vec![usize::MAX; k];
    for start in (0..k).filter(|&v| alive_v[v]) {
        if side[start] != usize::MAX {
            continue;
        }
        side[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &b in &g0[a] {
                if side[b] == usize::MAX {
                    side[b] = 1 - side[a];
                    queue.push_back(b);
                } else if side[b] == side[a] {
                    return None;
                }
            }
        }
    }
    for v in (0..k).filter(|&v| alive_v[v] && side[v] == 0) {
        for u in current(v, &alive_u) {
            assign[u] = v;
        }
    }
    (!assign.contains(&usize::MAX)).then(|| Matching::new(assign))
}

//! Exact reference solvers.
//!
//! * [`brute_force`] enumerates every left-perfect assignment.
//! * [`subset_dp`] runs a reachable-set dynamic program over subsets of the
//!   left side.
//! * [`cover_search`] is an exact-cover search over fair subsets of right
//!   neighborhoods, suited to larger instances with small right degrees.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{verify, Answer, Instance, Matching};

/// Default limit on the number of assignments [`brute_force`] may enumerate.
pub const BRUTE_FORCE_BUDGET: u64 = 10_000_000;
/// Largest left side accepted by [`subset_dp`].
pub const SUBSET_DP_MAX_N: usize = 20;
/// Largest right degree accepted by [`cover_search`].
pub const COVER_MAX_RIGHT_DEGREE: usize = 12;
/// Default node limit for [`cover_search`].
pub const COVER_NODE_BUDGET: u64 = 50_000_000;
/// Largest number of failed states [`cover_search`] remembers.
const COVER_MEMO_CAP: usize = 4_000_000;

pub fn brute_force(instance: &Instance) -> Result<Answer> {
    brute_force_with_budget(instance, BRUTE_FORCE_BUDGET)
}

/// Enumerates assignments in lexicographic order of neighbor choices and
/// returns the first valid one.
pub fn brute_force_with_budget(instance: &Instance, budget: u64) -> Result<Answer> {
    let adj = instance.left_adj();
    if adj.iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    let mut product: u64 = 1;
    for list in &adj {
        product = product.saturating_mul(list.len() as u64);
        if product > budget {
            return Err(Error::budget("brute-force assignments", budget));
        }
    }
    let n = instance.n();
    let mut choice = vec![0usize; n];
    loop {
        let assign: Vec<usize> = (0..n).map(|u| adj[u][choice[u]]).collect();
        let matching = Matching::new(assign);
        if verify(instance, &matching)?.is_valid() {
            return Ok(Answer::Yes(matching));
        }
        let mut u = n;
        loop {
            if u == 0 {
                return Ok(Answer::No);
            }
            u -= 1;
            choice[u] += 1;
            if choice[u] < adj[u].len() {
                break;
            }
            choice[u] = 0;
        }
    }
}

fn admissible(instance: &Instance, members: impl Iterator<Item = usize> + Clone) -> bool {
    let size = members.clone().count();
    instance.size_ok(size) && instance.is_fair(&instance.counts_of(members))
}

fn mask_members(mask: usize) -> impl Iterator<Item = usize> + Clone {
    (0..usize::BITS as usize).filter(move |&u| mask & (1 << u) != 0)
}

/// Reachable-set DP over left subsets: layer `v` holds the sets of left
/// vertices that the first `v` right vertices can absorb with admissible sets.
pub fn subset_dp(instance: &Instance) -> Result<Answer> {
    let n = instance.n();
    if n > SUBSET_DP_MAX_N {
        return Err(Error::budget(
            "subset DP left vertices",
            SUBSET_DP_MAX_N as u64,
        ));
    }
    let size = 1usize << n;
    let full = size - 1;
    let right_adj = instance.right_adj();
    let nbr_masks: Vec<usize> = right_adj
        .iter()
        .map(|us| us.iter().fold(0, |m, &u| m | (1 << u)))
        .collect();
    let admissible_sets: Vec<Vec<bool>> = nbr_masks
        .iter()
        .map(|&nm| {
            let mut ok = vec![false; size];
            let mut s = nm;
            loop {
                ok[s] = admissible(instance, mask_members(s));
                if s == 0 {
                    break;
                }
                s = (s - 1) & nm;
            }
            ok
        })
        .collect();
    let mut layers: Vec<Vec<bool>> = Vec::with_capacity(instance.k + 1);
    let mut start = vec![false; size];
    start[0] = true;
    layers.push(start);
    for v in 0..instance.k {
        let prev = &layers[v];
        let mut next = vec![false; size];
        for m in 0..size {
            if !prev[m] {
                continue;
            }
            let free = nbr_masks[v] & !m;
            let mut s = free;
            loop {
                if admissible_sets[v][s] {
                    next[m | s] = true;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & free;
            }
        }
        layers.push(next);
    }
    if !layers[instance.k][full] {
        return Ok(Answer::No);
    }
    let mut assign = vec![0usize; n];
    let mut rest = full;
    for v in (0..instance.k).rev() {
        let avail = nbr_masks[v] & rest;
        let mut s = avail;
        let chosen = loop {
            if admissible_sets[v][s] && layers[v][rest ^ s] {
                break s;
            }
            if s == 0 {
                return Err(Error::internal("subset DP lost its witness"));
            }
            s = (s - 1) & avail;
        };
        for u in mask_members(chosen) {
            assign[u] = v;
        }
        rest ^= chosen;
    }
    Ok(Answer::Yes(Matching::new(assign)))
}

pub fn cover_search(instance: &Instance) -> Result<Answer> {
    cover_search_with_budget(instance, COVER_NODE_BUDGET)
}

/// Exact cover of the left side by one admissible subset of `N(v)` per right
/// vertex. Right vertices are processed in breadth-first order; a left
/// vertex must be covered by the time its last neighbor is processed, and
/// failed frontiers are remembered.
pub fn cover_search_with_budget(instance: &Instance, max_nodes: u64) -> Result<Answer> {
    let right_adj = instance.right_adj();
    if instance.max_right_degree() > COVER_MAX_RIGHT_DEGREE {
        return Err(Error::budget(
            "cover search right degree",
            COVER_MAX_RIGHT_DEGREE as u64,
        ));
    }
    let left_adj = instance.left_adj();
    if left_adj.iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    let order = sweep_order(&left_adj, &right_adj);
    let mut position = vec![0; instance.k];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let last: Vec<usize> = left_adj
        .iter()
        .map(|nbrs| nbrs.iter().map(|&v| position[v]).max().unwrap())
        .collect();
    let options: Vec<Vec<Vec<usize>>> = order
        .iter()
        .map(|&v| {
            let nbrs = &right_adj[v];
            let d = nbrs.len();
            (0..1usize << d)
                .map(|bits| {
                    (0..d)
                        .filter(|&i| bits & (1 << i) != 0)
                        .map(|i| nbrs[i])
                        .collect::<Vec<usize>>()
                })
                .filter(|set| admissible(instance, set.iter().copied()))
                .collect()
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    let mut state = Cover {
        order,
        right_adj,
        last,
        options,
        assigned: vec![None; instance.n()],
        nodes: 0,
        max_nodes,
        failed: HashSet::new(),
    };
    if state.search(0)? {
        let assign = state.assigned.iter().map(|a| a.unwrap()).collect();
        Ok(Answer::Yes(Matching::new(assign)))
    } else {
        Ok(Answer::No)
    }
}

/// Right vertices in breadth-first order over the graph that joins two right
/// vertices sharing a left neighbor.
fn sweep_order(left_adj: &[Vec<usize>], right_adj: &[Vec<usize>]) -> Vec<usize> {
    let k = right_adj.len();
    let mut seen = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for start in 0..k {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &right_adj[v] {
                for &w in &left_adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    order
}

struct Cover {
    order: Vec<usize>,
    right_adj: Vec<Vec<usize>>,
    last: Vec<usize>,
    /// Admissible sets per position in `order`.
    options: Vec<Vec<Vec<usize>>>,
    assigned: Vec<Option<usize>>,
    nodes: u64,
    max_nodes: u64,
    failed: HashSet<(usize, Vec<u64>)>,
}

impl Cover {
    /// Left vertices of the right vertex at position `i` that are covered so
    /// far; together with `i` this fixes the remaining subproblem.
    fn key(&self, i: usize) -> (usize, Vec<u64>) {
        let mut key = Vec::new();
        let mut word = 0u64;
        let mut bit = 0;
        for v in &self.order[i..] {
            for &u in &self.right_adj[*v] {
                if self.assigned[u].is_some() {
                    word |= 1 << bit;
                }
                bit += 1;
                if bit == 64 {
                    key.push(word);
                    word = 0;
                    bit = 0;
                }
            }
        }
        key.push(word);
        (i, key)
    }

    fn search(&mut self, i: usize) -> Result<bool> {
        if i == self.order.len() {
            return Ok(true);
        }
        let key = self.key(i);
        if self.failed.contains(&key) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::budget("cover search nodes", self.max_nodes));
        }
        let v = self.order[i];
        for oi in 0..self.options[i].len() {
            let fits = self.options[i][oi]
                .iter()
                .all(|&u| self.assigned[u].is_none());
            let covers_due = self.right_adj[v].iter().all(|&u| {
                self.last[u] != i || self.assigned[u].is_some() || self.options[i][oi].contains(&u)
            });
            if !fits || !covers_due {
                continue;
            }
            let set = self.options[i][oi].clone();
            for &u in &set {
                self.assigned[u] = Some(v);
            }
            if self.search(i + 1)? {
                return Ok(true);
            }
            for &u in &set {
                self.assigned[u] = None;
            }
        }
        if self.failed.len() < COVER_MEMO_CAP {
            self.failed.insert(key);
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Measure;

    fn all_oracles(inst: &Instance) -> Vec<Answer> {
        vec![
            brute_force(inst).unwrap(),
            subset_dp(inst).unwrap(),
            cover_search(inst).unwrap(),
        ]
    }

    #[test]
    fn isolated_left_vertex_is_no() {
        let inst = Instance::new(1, vec![0, 0], 1, vec![(0, 0)], 3, Measure::Mov).unwrap();
        for a in all_oracles(&inst) {
            assert_eq!(a, Answer::No);
        }
    }

    #[test]
    fn single_edge_is_yes() {
        let inst = Instance::new(1, vec![0], 1, vec![(0, 0)], 1, Measure::MaxMin).unwrap();
        for a in all_oracles(&inst) {
            assert_eq!(a, Answer::Yes(Matching::new(vec![0])));
        }
    }

    #[test]
    fn unbalanced_pair_is_no_under_mov() {
        let inst = Instance::complete(&[2, 1], 1, 0, Measure::Mov).unwrap();
        for a in all_oracles(&inst) {
            assert_eq!(a, Answer::No);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::complete(&[6, 6], 4, 0, Measure::Mov).unwrap();
        assert!(brute_force_with_budget(&inst, 100).unwrap_err().is_budget());
        let big = Instance::complete(&[11, 11], 1, 0, Measure::Mov).unwrap();
        assert!(subset_dp(&big).unwrap_err().is_budget());
    }

    #[test]
    fn witnesses_verify() {
        let inst = Instance::complete(&[2, 2, 1], 2, 1, Measure::MaxMin)
            .unwrap()
            .with_size(1, None)
            .unwrap();
        for a in all_oracles(&inst) {
            let m = a.matching().expect("instance is feasible");
            assert!(verify(&inst, m).unwrap().is_valid());
        }
    }
}

//! Parameterized solvers built on bounded-dimension ILPs.
//!
//! * [`solve_kc`]: one count variable per (right vertex, color), parameter `k + |C|`.
//! * [`solve_maxmin_k`]: per-vertex lower and upper color counts, parameter `k`.
//! * [`solve_maxmin_k_nonempty`]: the same ILP strengthened by guessed
//!   structure of one witness edge per right vertex.
//! * [`solve_targeted_mov`] and [`solve_mov_k`]: MoV with prescribed top two
//!   colors per right vertex, and the color-coding driver that guesses them.
//!
//! Every YES answer carries a matching reconstructed from the ILP certificate
//! by flow computations and checked with [`verify`].

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ilp::{IlpConfig, IlpModel, Relation, Solution, VarId};
use crate::matchflow::{
    construct_bounded, construct_capped, construct_exact, max_bipartite_matching, BipGraph,
    ColorClass, DegreeBounds,
};
use crate::model::{verify, Answer, Instance, Matching, Measure};
use crate::setfn::{bits, NeighborhoodTables};

/// Limits shared by the parameterized solvers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FptConfig {
    pub ilp: IlpConfig,
    /// Largest `k` accepted by [`solve_maxmin_k_nonempty`] when `ell > 0`.
    pub nonempty_k_cap: usize,
    /// Rounds per partition in [`solve_mov_k`]; `None` uses [`default_rounds`].
    pub rounds: Option<u64>,
    /// Upper limit applied to the default number of rounds.
    pub rounds_cap: u64,
    pub seed: u64,
}

impl Default for FptConfig {
    fn default() -> Self {
        FptConfig {
            ilp: IlpConfig::default(),
            nonempty_k_cap: 3,
            rounds: None,
            rounds_cap: 10_000,
            seed: 0,
        }
    }
}

impl FptConfig {
    fn rounds_for(&self, k: usize) -> u64 {
        self.rounds
            .unwrap_or_else(|| default_rounds(k).min(self.rounds_cap))
    }
}

/// `(2k + 1)^(2k + 1)`, saturating.
pub fn default_rounds(k: usize) -> u64 {
    let base = 2 * k as u64 + 1;
    let mut r: u64 = 1;
    for _ in 0..base {
        r = r.saturating_mul(base);
    }
    r
}

/// Outcome of the one-sided randomized MoV driver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MovOutcome {
    Yes(Matching),
    /// No matching was found within the configured rounds; not a proof of NO.
    NotFound,
}

/// Copy of an instance with a colorless second color added, so that both
/// measures always compare two colors.
fn with_phantom_color(instance: &Instance) -> Instance {
    let mut work = instance.clone();
    if work.num_colors == 1 {
        work.num_colors = 2;
    }
    work
}

fn full_mask(k: usize) -> usize {
    (1usize << k) - 1
}

fn subset_terms(vars: &[VarId], mask: usize, coef: i64) -> Vec<(VarId, i64)> {
    bits(mask).map(|v| (vars[v], coef)).collect()
}

/// Combines per-color assignments into a matching of the whole instance.
fn assemble(instance: &Instance, parts: &[(ColorClass, Vec<usize>)]) -> Result<Matching> {
    let mut assign = vec![usize::MAX; instance.n()];
    for (class, local) in parts {
        for (i, &v) in local.iter().enumerate() {
            assign[class.vertices[i]] = v;
        }
    }
    if assign.contains(&usize::MAX) {
        return Err(Error::internal("reconstruction left a vertex unassigned"));
    }
    Ok(Matching::new(assign))
}

fn checked_yes(instance: &Instance, matching: Matching, solver: &str) -> Result<Answer> {
    let verdict = verify(instance, &matching)?;
    if !verdict.is_valid() {
        return Err(Error::internal(format!(
            "{solver} reconstructed an invalid matching: {}",
            verdict.violations[0]
        )));
    }
    Ok(Answer::Yes(matching))
}

/// The `k + |C|` model: variables `z[v][c]` count color `c` at right vertex `v`.
pub struct KcModel {
    pub model: IlpModel,
    pub z: Vec<Vec<VarId>>,
}

pub fn kc_model(instance: &Instance) -> Result<KcModel> {
    let work = with_phantom_color(instance);
    let k = work.k;
    let nc = work.num_colors;
    let tables = NeighborhoodTables::new(&work)?;
    let counts = work.color_counts();
    let n = work.n() as i64;
    let ell = work.ell as i64;
    let mut model = IlpModel::new();
    let mut z = vec![Vec::with_capacity(nc); k];
    for (v, row) in z.iter_mut().enumerate() {
        for c in 0..nc {
            row.push(model.add_var(format!("z_v{v}_c{c}"), 0, counts.0[c] as i64)?);
        }
    }
    for c in 0..nc {
        let zc: Vec<VarId> = (0..k).map(|v| z[v][c]).collect();
        for w in 0..=full_mask(k) {
            let terms = subset_terms(&zc, w, 1);
            model.add_constraint(terms.clone(), Relation::Ge, tables.nu[c][w] as i64)?;
            model.add_constraint(terms, Relation::Le, tables.big_n[c][w] as i64)?;
        }
    }
    for v in 0..k {
        match work.measure {
            Measure::MaxMin => {
                for c in 0..nc {
                    for c2 in 0..nc {
                        if c != c2 {
                            model.add_constraint(
                                [(z[v][c2], 1), (z[v][c], -1)],
                                Relation::Le,
                                ell,
                            )?;
                        }
                    }
                }
            }
            Measure::Mov => {
                let a: Vec<VarId> = (0..nc)
                    .map(|c| model.add_var(format!("a_v{v}_c{c}"), 0, 1))
                    .collect::<Result<_>>()?;
                let b: Vec<VarId> = (0..nc)
                    .map(|c| model.add_var(format!("b_v{v}_c{c}"), 0, 1))
                    .collect::<Result<_>>()?;
                for c in 0..nc {
                    model.add_constraint([(a[c], 1), (b[c], 1)], Relation::Le, 1)?;
                    for c2 in 0..nc {
                        if c == c2 {
                            continue;
                        }
                        model.add_constraint(
                            [(z[v][c], 1), (z[v][c2], -1), (a[c], -n), (b[c2], -n)],
                            Relation::Ge,
                            -2 * n,
                        )?;
                        model.add_constraint(
                            [(z[v][c], 1), (z[v][c2], -1), (b[c], -n), (a[c2], n)],
                            Relation::Ge,
                            -n,
                        )?;
                        model.add_constraint(
                            [(z[v][c], 1), (z[v][c2], -1), (a[c], n), (b[c2], n)],
                            Relation::Le,
                            ell + 2 * n,
                        )?;
                    }
                }
                model.add_constraint(a.iter().map(|&x| (x, 1)), Relation::Eq, 1)?;
                model.add_constraint(b.iter().map(|&x| (x, 1)), Relation::Eq, 1)?;
            }
        }
        let row: Vec<(VarId, i64)> = z[v].iter().map(|&x| (x, 1)).collect();
        if work.size_min > 0 {
            model.add_constraint(row.clone(), Relation::Ge, work.size_min as i64)?;
        }
        if let Some(q) = work.size_max {
            model.add_constraint(row, Relation::Le, q as i64)?;
        }
    }
    Ok(KcModel { model, z })
}

/// Decides the instance, including arbitrary size constraints, with the
/// `k + |C|` model and rebuilds a matching color by color.
pub fn solve_kc(instance: &Instance, config: &FptConfig) -> Result<Answer> {
    let KcModel { model, z } = kc_model(instance)?;
    let Some(sol) = model.solve(&config.ilp)? else {
        return Ok(Answer::No);
    };
    let mut parts = Vec::new();
    for c in 0..instance.num_colors {
        let class = ColorClass::of(instance, c);
        let targets: Vec<usize> = (0..instance.k)
            .map(|v| sol.value(z[v][c]) as usize)
            .collect();
        let local = construct_exact(&class, &targets)?.ok_or_else(|| {
            Error::internal(format!(
                "no exact matching for color {c} despite a feasible model"
            ))
        })?;
        parts.push((class, local));
    }
    let matching = assemble(instance, &parts)?;
    checked_yes(instance, matching, "solve_kc")
}

/// The parameter-`k` Max-Min model with per-subset bounds.
pub struct MaxMinModel {
    pub model: IlpModel,
    pub x: Vec<VarId>,
    pub y: Vec<VarId>,
}

fn maxmin_model_with(
    instance: &Instance,
    lb_y: &[i64],
    ub_x: &[i64],
    y_min: i64,
) -> Result<MaxMinModel> {
    let k = instance.k;
    let top = instance.color_counts().0.iter().copied().max().unwrap_or(0) as i64;
    let mut model = IlpModel::new();
    let mut x = Vec::with_capacity(k);
    let mut y = Vec::with_capacity(k);
    for v in 0..k {
        x.push(model.add_var(format!("x_v{v}"), 0, top)?);
        y.push(model.add_var(format!("y_v{v}"), y_min.min(top), top)?);
    }
    if y_min > top {
        model.add_constraint([], Relation::Ge, 1)?;
    }
    for v in 0..k {
        model.add_constraint([(x[v], 1), (y[v], -1)], Relation::Le, 0)?;
        model.add_constraint([(y[v], 1), (x[v], -1)], Relation::Le, instance.ell as i64)?;
        if y_min > 0 {
            model.add_constraint([(y[v], 1)], Relation::Ge, y_min)?;
        }
    }
    for w in 0..=full_mask(k) {
        model.add_constraint(subset_terms(&y, w, 1), Relation::Ge, lb_y[w])?;
        model.add_constraint(subset_terms(&x, w, 1), Relation::Le, ub_x[w])?;
    }
    Ok(MaxMinModel { model, x, y })
}

fn base_bounds(tables: &NeighborhoodTables) -> (Vec<i64>, Vec<i64>) {
    let size = 1usize << tables.k;
    let lb = (0..size).map(|w| tables.max_nu(w) as i64).collect();
    let ub = (0..size).map(|w| tables.min_n(w) as i64).collect();
    (lb, ub)
}

pub fn maxmin_k_model(instance: &Instance) -> Result<MaxMinModel> {
    let tables = NeighborhoodTables::new(instance)?;
    let (lb, ub) = base_bounds(&tables);
    maxmin_model_with(instance, &lb, &ub, 0)
}

fn require_maxmin(instance: &Instance, solver: &str) -> Result<()> {
    if instance.measure != Measure::MaxMin {
        return Err(Error::precondition(format!(
            "{solver} needs the maxmin measure"
        )));
    }
    Ok(())
}

fn bounds_from(sol: &Solution, m: &MaxMinModel) -> Result<DegreeBounds> {
    DegreeBounds::new(
        m.x.iter().map(|&v| sol.value(v) as usize).collect(),
        m.y.iter().map(|&v| sol.value(v) as usize).collect(),
    )
}

fn bounded_parts(
    instance: &Instance,
    bounds: &DegreeBounds,
    skip: &[bool],
) -> Result<Vec<(ColorClass, Vec<usize>)>> {
    let mut parts = Vec::new();
    for c in 0..instance.num_colors {
        if skip[c] {
            continue;
        }
        let class = ColorClass::of(instance, c);
        let local = construct_bounded(&class, bounds).ok_or_else(|| {
            Error::internal(format!(
                "no bounded matching for color {c} despite a feasible model"
            ))
        })?;
        parts.push((class, local));
    }
    Ok(parts)
}

/// Max-Min without size constraints via the `2k`-variable model.
pub fn solve_maxmin_k(instance: &Instance, config: &FptConfig) -> Result<Answer> {
    require_maxmin(instance, "solve_maxmin_k")?;
    if instance.size_min > 0 || instance.effective_size_max().is_some() {
        return Err(Error::precondition(
            "solve_maxmin_k does not support size constraints",
        ));
    }
    let padded = with_phantom_color(instance);
    let instance = &padded;
    let m = maxmin_k_model(instance)?;
    let Some(sol) = m.model.solve(&config.ilp)? else {
        return Ok(Answer::No);
    };
    let bounds = bounds_from(&sol, &m)?;
    let parts = bounded_parts(instance, &bounds, &vec![false; instance.num_colors])?;
    let matching = assemble(instance, &parts)?;
    checked_yes(instance, matching, "solve_maxmin_k")
}

/// Guessed structure of one witness edge per right vertex: `mu[v]` is the
/// neighborhood mask of the witness of `v`, `blocks` groups right vertices
/// whose witnesses share a color, and `x`/`y` are the capped differences
/// of that color's N and ν values from the extreme colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessContext {
    pub mu: Vec<usize>,
    pub blocks: Vec<usize>,
    pub x: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
}

impl GuessContext {
    /// `|{v in S & W : mu(v) not inside W}|`
    pub fn alpha(&self, block: usize, w: usize) -> usize {
        bits(self.blocks[block] & w)
            .filter(|&v| self.mu[v] & !w != 0)
            .count()
    }

    /// `|{v in S \ W : mu(v) meets W}|`
    pub fn beta(&self, block: usize, w: usize) -> usize {
        bits(self.blocks[block] & !w)
            .filter(|&v| self.mu[v] & w != 0)
            .count()
    }
}

/// All set partitions of `0..n` as block labels in first-occurrence order,
/// skipping partitions that put a forbidden pair into one block.
pub fn set_partitions(n: usize, forbidden: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn rec(
        i: usize,
        labels: &mut Vec<usize>,
        blocks: usize,
        n: usize,
        forbidden: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            out.push(labels.clone());
            return;
        }
        for b in 0..=blocks {
            if (0..i).any(|j| labels[j] == b && forbidden(j, i)) {
                continue;
            }
            labels.push(b);
            rec(i + 1, labels, blocks.max(b + 1), n, forbidden, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, &mut Vec::with_capacity(n), 0, n, &forbidden, &mut out);
    out
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::with_capacity(out.len() * s);
        for prefix in &out {
            for i in 0..s {
                let mut p = prefix.clone();
                p.push(i);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Picks of one color inside one block, as returned by [`witness`].
type Witness = Vec<(usize, usize)>;

/// Lower and upper degree bounds, used to cache bounded model solves.
type BoundKey = (Vec<i64>, Vec<i64>);

/// One vertex of `class` per right vertex of `block`, each adjacent to its
/// right vertex with neighborhood exactly `mu[v]`. Entries are class indices.
fn witness(class: &ColorClass, block: usize, mu: &[usize]) -> Option<Witness> {
    let vs: Vec<usize> = bits(block).collect();
    let masks: Vec<usize> = class
        .adj
        .iter()
        .map(|nb| nb.iter().fold(0, |m, &v| m | (1 << v)))
        .collect();
    let adj: Vec<Vec<usize>> = vs
        .iter()
        .map(|&v| {
            (0..class.len())
                .filter(|&i| masks[i] == mu[v] && masks[i] & (1 << v) != 0)
                .collect()
        })
        .collect();
    let m = max_bipartite_matching(&BipGraph::from_adj(class.len(), adj));
    if m.size() < vs.len() {
        return None;
    }
    Some(
        vs.iter()
            .zip(&m.left)
            .map(|(&v, i)| (v, i.unwrap()))
            .collect(),
    )
}

/// Max-Min with every right vertex non-empty.
pub fn solve_maxmin_k_nonempty(instance: &Instance, config: &FptConfig) -> Result<Answer> {
    require_maxmin(instance, "solve_maxmin_k_nonempty")?;
    if instance.size_min != 1 || instance.effective_size_max().is_some() {
        return Err(Error::precondition(
            "solve_maxmin_k_nonempty needs size_min = 1 and no upper size bound",
        ));
    }
    let padded = with_phantom_color(instance);
    let instance = &padded;
    let k = instance.k;
    if instance.n() < k {
        return Ok(Answer::No);
    }
    let tables = NeighborhoodTables::new(instance)?;
    let (base_lb, base_ub) = base_bounds(&tables);
    if instance.ell == 0 {
        let m = maxmin_model_with(instance, &base_lb, &base_ub, 1)?;
        let Some(sol) = m.model.solve(&config.ilp)? else {
            return Ok(Answer::No);
        };
        let bounds = bounds_from(&sol, &m)?;
        let parts = bounded_parts(instance, &bounds, &vec![false; instance.num_colors])?;
        let matching = assemble(instance, &parts)?;
        return checked_yes(instance, matching, "solve_maxmin_k_nonempty");
    }
    if k > config.nonempty_k_cap {
        return Err(Error::budget(
            "right vertices for the non-empty max-min search",
            config.nonempty_k_cap as u64,
        ));
    }
    let base = maxmin_model_with(instance, &base_lb, &base_ub, 0)?;
    if base.model.solve(&config.ilp)?.is_none() {
        return Ok(Answer::No);
    }
    let size = 1usize << k;
    let cap = k;
    let classes: Vec<ColorClass> = (0..instance.num_colors)
        .map(|c| ColorClass::of(instance, c))
        .collect();
    let signature = |c: usize| -> (Vec<usize>, Vec<usize>) {
        let x = (0..size)
            .map(|w| (tables.big_n[c][w] - tables.min_n(w)).min(cap))
            .collect();
        let y = (0..size)
            .map(|w| (tables.max_nu(w) - tables.nu[c][w]).min(cap))
            .collect();
        (x, y)
    };
    let mut sigs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut sig_of = Vec::with_capacity(instance.num_colors);
    for c in 0..instance.num_colors {
        let s = signature(c);
        let idx = match sigs.iter().position(|t| *t == s) {
            Some(i) => i,
            None => {
                sigs.push(s);
                sigs.len() - 1
            }
        };
        sig_of.push(idx);
    }
    let left_adj = instance.left_adj();
    let mut mu_options: Vec<Vec<usize>> = vec![Vec::new(); k];
    for nbrs in &left_adj {
        let mask = nbrs.iter().fold(0usize, |m, &v| m | (1 << v));
        for &v in nbrs {
            if !mu_options[v].contains(&mask) {
                mu_options[v].push(mask);
            }
        }
    }
    if mu_options.iter().any(Vec::is_empty) {
        return Ok(Answer::No);
    }
    for opts in &mut mu_options {
        opts.sort_unstable();
    }
    let mut cache: HashMap<BoundKey, Option<(Solution, MaxMinModel)>> = HashMap::new();
    let partitions = set_partitions(k, |_, _| false);
    let mu_choices = cartesian(&mu_options.iter().map(Vec::len).collect::<Vec<_>>());
    for labels in &partitions {
        let nb = labels.iter().max().map_or(0, |&m| m + 1);
        let blocks: Vec<usize> = (0..nb)
            .map(|b| {
                (0..k)
                    .filter(|&v| labels[v] == b)
                    .fold(0, |m, v| m | (1 << v))
            })
            .collect();
        for choice in &mu_choices {
            let mu: Vec<usize> = (0..k).map(|v| mu_options[v][choice[v]]).collect();
            let witnesses: Vec<Vec<Option<Witness>>> = blocks
                .iter()
                .map(|&s| classes.iter().map(|cl| witness(cl, s, &mu)).collect())
                .collect();
            let candidate_sigs: Vec<Vec<usize>> = witnesses
                .iter()
                .map(|per_color| {
                    let mut list: Vec<usize> = (0..instance.num_colors)
                        .filter(|&c| per_color[c].is_some())
                        .map(|c| sig_of[c])
                        .collect();
                    list.sort_unstable();
                    list.dedup();
                    list
                })
                .collect();
            if candidate_sigs.iter().any(Vec::is_empty) {
                continue;
            }
            let sig_choices = cartesian(&candidate_sigs.iter().map(Vec::len).collect::<Vec<_>>());
            for sc in &sig_choices {
                let chosen: Vec<usize> = (0..nb).map(|b| candidate_sigs[b][sc[b]]).collect();
                let h_adj: Vec<Vec<usize>> = (0..nb)
                    .map(|b| {
                        (0..instance.num_colors)
                            .filter(|&c| sig_of[c] == chosen[b] && witnesses[b][c].is_some())
                            .collect()
                    })
                    .collect();
                let h = max_bipartite_matching(&BipGraph::from_adj(instance.num_colors, h_adj));
                if h.size() < nb {
                    continue;
                }
                let ctx = GuessContext {
                    mu: mu.clone(),
                    blocks: blocks.clone(),
                    x: chosen.iter().map(|&s| sigs[s].0.clone()).collect(),
                    y: chosen.iter().map(|&s| sigs[s].1.clone()).collect(),
                };
                let mut lb = base_lb.clone();
                let mut ub = base_ub.clone();
                for b in 0..nb {
                    for w in 0..size {
                        let l = base_lb[w] - ctx.y[b][w] as i64 + ctx.alpha(b, w) as i64;
                        let u = base_ub[w] + ctx.x[b][w] as i64 - ctx.beta(b, w) as i64;
                        lb[w] = lb[w].max(l);
                        ub[w] = ub[w].min(u);
                    }
                }
                let key = (lb, ub);
                if !cache.contains_key(&key) {
                    let m = maxmin_model_with(instance, &key.0, &key.1, 0)?;
                    let found = m.model.solve(&config.ilp)?.map(|s| (s, m));
                    cache.insert(key.clone(), found);
                }
                let Some((sol, m)) = &cache[&key] else {
                    continue;
                };
                let bounds = bounds_from(sol, m)?;
                let mut skip = vec![false; instance.num_colors];
                let mut parts = Vec::new();
                for (b, color) in h.left.iter().enumerate() {
                    let c = color.unwrap();
                    skip[c] = true;
                    let mut class = classes[c].clone();
                    for &(v, i) in witnesses[b][c].as_ref().unwrap() {
                        class.adj[i] = vec![v];
                    }
                    let local = construct_bounded(&class, &bounds).ok_or_else(|| {
                        Error::internal(format!(
                            "no bounded matching for witness color {c} despite a feasible model"
                        ))
                    })?;
                    parts.push((classes[c].clone(), local));
                }
                parts.extend(bounded_parts(instance, &bounds, &skip)?);
                let matching = assemble(instance, &parts)?;
                return checked_yes(instance, matching, "solve_maxmin_k_nonempty");
            }
        }
    }
    Ok(Answer::No)
}

/// Prescribed most and second-most frequent color of every right vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub mu1: Vec<usize>,
    pub mu2: Vec<usize>,
}

impl TargetSpec {
    fn validate(&self, instance: &Instance) -> Result<()> {
        if self.mu1.len() != instance.k || self.mu2.len() != instance.k {
            return Err(Error::input(format!(
                "targets must list one color per right vertex ({})",
                instance.k
            )));
        }
        for v in 0..instance.k {
            let (a, b) = (self.mu1[v], self.mu2[v]);
            if a >= instance.num_colors || b >= instance.num_colors {
                return Err(Error::input(format!(
                    "target color out of range at right vertex {v}"
                )));
            }
            if a == b {
                return Err(Error::input(format!(
                    "right vertex {v} has the same first and second target color {a}"
                )));
            }
        }
        Ok(())
    }
}

pub struct TargetedModel {
    pub model: IlpModel,
    pub y: Vec<VarId>,
    /// `z[v]` lists `(color, var)` for every targeted color.
    pub z: Vec<Vec<(usize, VarId)>>,
    pub targeted: Vec<usize>,
}

pub fn targeted_mov_model(
    instance: &Instance,
    targets: &TargetSpec,
    nonempty: bool,
) -> Result<TargetedModel> {
    targets.validate(instance)?;
    let k = instance.k;
    let tables = NeighborhoodTables::new(instance)?;
    let counts = instance.color_counts();
    let mut targeted: Vec<usize> = targets.mu1.iter().chain(&targets.mu2).copied().collect();
    targeted.sort_unstable();
    targeted.dedup();
    let others: Vec<usize> = (0..instance.num_colors)
        .filter(|c| !targeted.contains(c))
        .collect();
    let n = instance.n() as i64;
    let mut model = IlpModel::new();
    let y: Vec<VarId> = (0..k)
        .map(|v| model.add_var(format!("y_v{v}"), 0, n))
        .collect::<Result<_>>()?;
    let mut z: Vec<Vec<(usize, VarId)>> = vec![Vec::new(); k];
    for (v, row) in z.iter_mut().enumerate() {
        for &c in &targeted {
            row.push((
                c,
                model.add_var(format!("z_v{v}_c{c}"), 0, counts.0[c] as i64)?,
            ));
        }
    }
    let zvar = |v: usize, c: usize| z[v].iter().find(|(cc, _)| *cc == c).unwrap().1;
    for &c in &targeted {
        let zc: Vec<VarId> = (0..k).map(|v| zvar(v, c)).collect();
        for w in 0..=full_mask(k) {
            let terms = subset_terms(&zc, w, 1);
            model.add_constraint(terms.clone(), Relation::Ge, tables.nu[c][w] as i64)?;
            model.add_constraint(terms, Relation::Le, tables.big_n[c][w] as i64)?;
        }
    }
    for w in 0..=full_mask(k) {
        let need = others.iter().map(|&c| tables.nu[c][w]).max().unwrap_or(0);
        model.add_constraint(subset_terms(&y, w, 1), Relation::Ge, need as i64)?;
    }
    for v in 0..k {
        let (m1, m2) = (targets.mu1[v], targets.mu2[v]);
        for &c in &targeted {
            if c != m1 {
                model.add_constraint([(y[v], 1), (zvar(v, c), -1)], Relation::Ge, 0)?;
            }
        }
        model.add_constraint([(y[v], 1), (zvar(v, m2), -1)], Relation::Eq, 0)?;
        model.add_constraint([(zvar(v, m1), 1), (zvar(v, m2), -1)], Relation::Ge, 0)?;
        model.add_constraint(
            [(zvar(v, m1), 1), (zvar(v, m2), -1)],
            Relation::Le,
            instance.ell as i64,
        )?;
        if nonempty {
            model.add_constraint([(zvar(v, m1), 1)], Relation::Ge, 1)?;
        }
    }
    Ok(TargetedModel {
        model,
        y,
        z,
        targeted,
    })
}

/// MoV where the top two colors of every right vertex are prescribed.
pub fn solve_targeted_mov(
    instance: &Instance,
    targets: &TargetSpec,
    nonempty: bool,
    config: &FptConfig,
) -> Result<Answer> {
    if instance.measure != Measure::Mov {
        return Err(Error::precondition(
            "solve_targeted_mov needs the mov measure",
        ));
    }
    if !instance.at_most_nonempty() {
        return Err(Error::precondition(
            "solve_targeted_mov supports at most the non-emptiness constraint",
        ));
    }
    let tm = targeted_mov_model(instance, targets, nonempty)?;
    let Some(sol) = tm.model.solve(&config.ilp)? else {
        return Ok(Answer::No);
    };
    let k = instance.k;
    let mut parts = Vec::new();
    for c in 0..instance.num_colors {
        let class = ColorClass::of(instance, c);
        let local = if tm.targeted.contains(&c) {
            let z: Vec<usize> = (0..k)
                .map(|v| {
                    let var = tm.z[v].iter().find(|(cc, _)| *cc == c).unwrap().1;
                    sol.value(var) as usize
                })
                .collect();
            construct_exact(&class, &z)?
        } else {
            let caps: Vec<usize> = tm.y.iter().map(|&y| sol.value(y) as usize).collect();
            construct_capped(&class, &caps)
        };
        let local = local.ok_or_else(|| {
            Error::internal(format!(
                "no matching for color {c} despite a feasible targeted model"
            ))
        })?;
        parts.push((class, local));
    }
    let matching = assemble(instance, &parts)?;
    if nonempty && matching.groups(k).iter().any(Vec::is_empty) {
        return Err(Error::internal(
            "targeted reconstruction left a right vertex empty",
        ));
    }
    let verdict = verify(instance, &matching)?;
    if verdict
        .violations
        .iter()
        .any(|v| !matches!(v, crate::model::Violation::TooSmall { .. } if !nonempty))
    {
        return Err(Error::internal(format!(
            "targeted reconstruction is invalid: {}",
            verdict.violations[0]
        )));
    }
    Ok(Answer::Yes(matching))
}

/// Partition of the `2k` tokens `(v, rank)`; token `2v + r` stands for rank
/// `r + 1` at right vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPartition {
    pub block_of: Vec<usize>,
    pub num_blocks: usize,
}

/// All token partitions in which no block holds both ranks of one vertex.
pub fn q_partitions(k: usize) -> Vec<QPartition> {
    set_partitions(2 * k, |a, b| a / 2 == b / 2)
        .into_iter()
        .map(|block_of| {
            let num_blocks = block_of.iter().max().map_or(0, |&m| m + 1);
            QPartition {
                block_of,
                num_blocks,
            }
        })
        .collect()
}

/// Randomized MoV solver: guesses token partitions and color-to-block maps
/// and solves the induced targeted problems. YES answers are verified.
pub fn solve_mov_k(instance: &Instance, config: &FptConfig) -> Result<MovOutcome> {
    if instance.measure != Measure::Mov {
        return Err(Error::precondition("solve_mov_k needs the mov measure"));
    }
    if !instance.at_most_nonempty() {
        return Err(Error::precondition(
            "solve_mov_k supports at most the non-emptiness constraint",
        ));
    }
    let nonempty = instance.size_min == 1;
    let work = with_phantom_color(instance);
    let k = work.k;
    let nc = work.num_colors;
    let right_adj = work.right_adj();
    let local_counts: Vec<Vec<usize>> = right_adj
        .iter()
        .map(|us| work.counts_of(us.iter().copied()).0)
        .collect();
    let rounds = config.rounds_for(k);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cache: HashMap<TargetSpec, bool> = HashMap::new();
    let mut lambda = vec![0usize; nc];
    for q in q_partitions(k) {
        let choices = if work.ell == 0 {
            q.num_blocks + 1
        } else {
            q.num_blocks
        };
        for _ in 0..rounds {
            for slot in lambda.iter_mut() {
                *slot = rng.random_range(0..choices);
            }
            let Some(targets) = derive_targets(&q, &lambda, &local_counts, k, nc) else {
                continue;
            };
            if let Some(false) = cache.get(&targets) {
                continue;
            }
            match solve_targeted_mov(&work, &targets, nonempty, config)? {
                Answer::Yes(m) => {
                    if verify(instance, &m)?.is_valid() {
                        return Ok(MovOutcome::Yes(m));
                    }
                    cache.insert(targets, false);
                }
                Answer::No => {
                    cache.insert(targets, false);
                }
            }
        }
    }
    Ok(MovOutcome::NotFound)
}

/// Top color per token among the colors mapped to its block, ties broken by
/// color id. `None` when a block has no color or one block yields two colors.
fn derive_targets(
    q: &QPartition,
    lambda: &[usize],
    local_counts: &[Vec<usize>],
    k: usize,
    nc: usize,
) -> Option<TargetSpec> {
    let mut block_color = vec![usize::MAX; q.num_blocks];
    let mut mu = [vec![0usize; k], vec![0usize; k]];
    for v in 0..k {
        for r in 0..2 {
            let b = q.block_of[2 * v + r];
            let mut best: Option<usize> = None;
            for c in 0..nc {
                if lambda[c] == b && best.is_none_or(|bc| local_counts[v][c] > local_counts[v][bc])
                {
                    best = Some(c);
                }
            }
            let c = best?;
            if block_color[b] == usize::MAX {
                block_color[b] = c;
            } else if block_color[b] != c {
                return None;
            }
            mu[r][v] = c;
        }
    }
    let [mu1, mu2] = mu;
    Some(TargetSpec { mu1, mu2 })
}

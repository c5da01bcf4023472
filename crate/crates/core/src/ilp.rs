//! Exact feasibility search for bounded integer linear systems.
//!
//! Every constraint is normalized to `sum a_i x_i <= b`. The search keeps an
//! interval domain per variable, tightens domains by activity-based bound
//! propagation until a fixpoint, and branches by bisecting the smallest open
//! domain. The search is complete because domains are finite.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

/// Index of a variable inside an [`IlpModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug)]
struct Variable {
    name: String,
    lo: i64,
    hi: i64,
}

#[derive(Clone, Debug)]
struct Constraint {
    terms: Vec<(usize, i64)>,
    rel: Relation,
    rhs: i64,
}

/// Bounded integer variables plus linear constraints.
#[derive(Clone, Debug, Default)]
pub struct IlpModel {
    vars: Vec<Variable>,
    by_name: HashMap<String, usize>,
    constraints: Vec<Constraint>,
}

/// Search limits for [`IlpModel::solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IlpConfig {
    pub max_vars: usize,
    pub max_nodes: u64,
}

impl Default for IlpConfig {
    fn default() -> Self {
        IlpConfig {
            max_vars: 20_000,
            max_nodes: 2_000_000,
        }
    }
}

/// A feasible integer point, indexed by [`VarId`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    values: Vec<i64>,
}

impl Solution {
    pub fn value(&self, var: VarId) -> i64 {
        self.values[var.0]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

impl IlpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Declares a variable with inclusive bounds `lo..=hi`.
    pub fn add_var(&mut self, name: impl Into<String>, lo: i64, hi: i64) -> Result<VarId> {
        let name = name.into();
        if lo > hi {
            return Err(Error::input(format!(
                "variable {name} has empty bounds [{lo}, {hi}]"
            )));
        }
        if self.by_name.contains_key(&name) {
            return Err(Error::input(format!("duplicate variable name {name}")));
        }
        let id = self.vars.len();
        self.by_name.insert(name.clone(), id);
        self.vars.push(Variable { name, lo, hi });
        Ok(VarId(id))
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied().map(VarId)
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.vars[var.0].name
    }

    pub fn bounds(&self, var: VarId) -> (i64, i64) {
        let v = &self.vars[var.0];
        (v.lo, v.hi)
    }

    /// Adds `sum coef * var  rel  rhs`. Repeated variables are merged.
    pub fn add_constraint(
        &mut self,
        terms: impl IntoIterator<Item = (VarId, i64)>,
        rel: Relation,
        rhs: i64,
    ) -> Result<()> {
        let mut merged: Vec<(usize, i64)> = Vec::new();
        for (VarId(j), a) in terms {
            if j >= self.vars.len() {
                return Err(Error::input(format!(
                    "constraint references unknown variable {j}"
                )));
            }
            match merged.iter_mut().find(|(i, _)| *i == j) {
                Some(t) => t.1 += a,
                None => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0);
        merged.sort_unstable();
        self.constraints.push(Constraint {
            terms: merged,
            rel,
            rhs,
        });
        Ok(())
    }

    /// Human-readable LP-style listing, one constraint per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("subject to\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, "  c{i}:");
            if c.terms.is_empty() {
                out.push_str(" 0");
            }
            for (n, &(j, a)) in c.terms.iter().enumerate() {
                let name = &self.vars[j].name;
                let coef = match a.abs() {
                    1 => String::new(),
                    mag => format!("{mag} "),
                };
                let op = match (n, a < 0) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => "+ ",
                    (_, true) => "- ",
                };
                let _ = write!(out, " {op}{coef}{name}");
            }
            let _ = writeln!(out, " {} {}", c.rel, c.rhs);
        }
        out.push_str("bounds\n");
        for v in &self.vars {
            let _ = writeln!(out, "  {} <= {} <= {}", v.lo, v.name, v.hi);
        }
        out.push_str("end\n");
        out
    }

    /// True if `values` satisfies every bound and constraint.
    pub fn is_satisfied_by(&self, values: &[i64]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        let in_bounds = self
            .vars
            .iter()
            .zip(values)
            .all(|(v, &x)| v.lo <= x && x <= v.hi);
        in_bounds
            && self.constraints.iter().all(|c| {
                let lhs: i128 = c
                    .terms
                    .iter()
                    .map(|&(j, a)| a as i128 * values[j] as i128)
                    .sum();
                let rhs = c.rhs as i128;
                match c.rel {
                    Relation::Le => lhs <= rhs,
                    Relation::Eq => lhs == rhs,
                    Relation::Ge => lhs >= rhs,
                }
            })
    }

    /// Decides feasibility; `Ok(None)` means the model has no integer point.
    pub fn solve(&self, config: &IlpConfig) -> Result<Option<Solution>> {
        if self.vars.len() > config.max_vars {
            return Err(Error::budget("ILP variables", config.max_vars as u64));
        }
        let mut search = Search::new(self);
        let found = search.run(config.max_nodes)?;
        if let Some(values) = &found {
            if !self.is_satisfied_by(values) {
                return Err(Error::internal("ILP search produced an infeasible point"));
            }
        }
        Ok(found.map(|values| Solution { values }))
    }
}

/// Solves with the default configuration.
pub fn solve_feasibility(model: &IlpModel) -> Result<Option<Solution>> {
    model.solve(&IlpConfig::default())
}

struct Row {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

struct Search {
    rows: Vec<Row>,
    var_rows: Vec<Vec<usize>>,
    root: Vec<(i64, i64)>,
    in_queue: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(model: &IlpModel) -> Self {
        let mut rows = Vec::new();
        for c in &model.constraints {
            let neg = || c.terms.iter().map(|&(j, a)| (j, -a)).collect::<Vec<_>>();
            match c.rel {
                Relation::Le => rows.push(Row {
                    terms: c.terms.clone(),
                    rhs: c.rhs,
                }),
                Relation::Ge => rows.push(Row {
                    terms: neg(),
                    rhs: -c.rhs,
                }),
                Relation::Eq => {
                    rows.push(Row {
                        terms: c.terms.clone(),
                        rhs: c.rhs,
                    });
                    rows.push(Row {
                        terms: neg(),
                        rhs: -c.rhs,
                    });
                }
            }
        }
        let mut var_rows = vec![Vec::new(); model.vars.len()];
        for (r, row) in rows.iter().enumerate() {
            for &(j, _) in &row.terms {
                var_rows[j].push(r);
            }
        }
        let root = model.vars.iter().map(|v| (v.lo, v.hi)).collect();
        let n_rows = rows.len();
        Search {
            rows,
            var_rows,
            root,
            in_queue: vec![false; n_rows],
            queue: VecDeque::new(),
        }
    }

    /// Tightens `dom` to a fixpoint; returns false on a wipe-out.
    fn propagate(&mut self, dom: &mut [(i64, i64)], seeds: Option<usize>) -> bool {
        match seeds {
            None => {
                for r in 0..self.rows.len() {
                    self.push(r);
                }
            }
            Some(j) => {
                for i in 0..self.var_rows[j].len() {
                    let r = self.var_rows[j][i];
                    self.push(r);
                }
            }
        }
        while let Some(r) = self.queue.pop_front() {
            self.in_queue[r] = false;
            let row = &self.rows[r];
            let mut min_act: i128 = 0;
            for &(j, a) in &row.terms {
                let (lo, hi) = dom[j];
                min_act += if a > 0 {
                    a as i128 * lo as i128
                } else {
                    a as i128 * hi as i128
                };
            }
            let slack = row.rhs as i128 - min_act;
            if slack < 0 {
                self.clear_queue();
                return false;
            }
            let mut changed = Vec::new();
            for &(j, a) in &row.terms {
                let (lo, hi) = dom[j];
                if a > 0 {
                    let cap = lo as i128 + slack / a as i128;
                    if cap < hi as i128 {
                        dom[j].1 = cap as i64;
                        changed.push(j);
                    }
                } else {
                    let floor = hi as i128 - slack / (-(a as i128));
                    if floor > lo as i128 {
                        dom[j].0 = floor as i64;
                        changed.push(j);
                    }
                }
            }
            for j in changed {
                if dom[j].0 > dom[j].1 {
                    self.clear_queue();
                    return false;
                }
                for i in 0..self.var_rows[j].len() {
                    let r2 = self.var_rows[j][i];
                    if r2 != r {
                        self.push(r2);
                    }
                }
            }
        }
        true
    }

    fn push(&mut self, r: usize) {
        if !self.in_queue[r] {
            self.in_queue[r] = true;
            self.queue.push_back(r);
        }
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.in_queue[r] = false;
        }
    }

    fn run(&mut self, max_nodes: u64) -> Result<Option<Vec<i64>>> {
        let mut root = self.root.clone();
        if root.iter().any(|&(lo, hi)| lo > hi) || !self.propagate(&mut root, None) {
            return Ok(None);
        }
        let mut stack = vec![root];
        let mut nodes: u64 = 0;
        while let Some(dom) = stack.pop() {
            nodes += 1;
            if nodes > max_nodes {
                return Err(Error::budget("ILP search nodes", max_nodes));
            }
            let branch = dom
                .iter()
                .enumerate()
                .filter(|(_, &(lo, hi))| lo < hi)
                .min_by_key(|(j, &(lo, hi))| (hi - lo, *j))
                .map(|(j, _)| j);
            let Some(j) = branch else {
                return Ok(Some(dom.into_iter().map(|(lo, _)| lo).collect()));
            };
            let (lo, hi) = dom[j];
            let mid = lo + (hi - lo) / 2;
            let mut upper = dom.clone();
            upper[j] = (mid + 1, hi);
            let mut lower = dom;
            lower[j] = (lo, mid);
            if self.propagate(&mut upper, Some(j)) {
                stack.push(upper);
            }
            if self.propagate(&mut lower, Some(j)) {
                stack.push(lower);
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 5).unwrap();
        m.add_constraint([(x, 1)], Relation::Ge, 1).unwrap();
        m.add_constraint([(x, 1)], Relation::Le, 0).unwrap();
        assert_eq!(solve_feasibility(&m).unwrap(), None);
    }

    #[test]
    fn forced_point() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 1).unwrap();
        let y = m.add_var("y", 0, 1).unwrap();
        m.add_constraint([(x, 1), (y, 1)], Relation::Eq, 2).unwrap();
        let s = solve_feasibility(&m).unwrap().unwrap();
        assert_eq!((s.value(x), s.value(y)), (1, 1));
    }

    #[test]
    fn band_around_diagonal() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 3).unwrap();
        let y = m.add_var("y", 0, 3).unwrap();
        m.add_constraint([(x, 1), (y, -1)], Relation::Le, 1)
            .unwrap();
        m.add_constraint([(y, 1), (x, -1)], Relation::Le, 1)
            .unwrap();
        m.add_constraint([(x, 1), (y, 1)], Relation::Eq, 4).unwrap();
        let s = solve_feasibility(&m).unwrap().unwrap();
        assert!(m.is_satisfied_by(s.values()));
        assert!((s.value(x) - s.value(y)).abs() <= 1);
    }

    #[test]
    fn parity_needs_branching() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 10).unwrap();
        let y = m.add_var("y", 0, 10).unwrap();
        m.add_constraint([(x, 2), (y, -2)], Relation::Eq, 1)
            .unwrap();
        assert_eq!(solve_feasibility(&m).unwrap(), None);
    }

    #[test]
    fn budgets_are_reported() {
        let mut m = IlpModel::new();
        m.add_var("a", 0, 1).unwrap();
        m.add_var("b", 0, 1).unwrap();
        let tight = IlpConfig {
            max_vars: 1,
            max_nodes: 10,
        };
        assert!(m.solve(&tight).unwrap_err().is_budget());
        let mut hard = IlpModel::new();
        let vs: Vec<VarId> = (0..20)
            .map(|i| hard.add_var(format!("v{i}"), 0, 1).unwrap())
            .collect();
        hard.add_constraint(vs.iter().map(|&v| (v, 2)), Relation::Eq, 21)
            .unwrap();
        let small = IlpConfig {
            max_vars: 100,
            max_nodes: 50,
        };
        assert!(hard.solve(&small).unwrap_err().is_budget());
    }

    #[test]
    fn model_errors() {
        let mut m = IlpModel::new();
        assert!(m.add_var("x", 2, 1).is_err());
        m.add_var("x", 0, 1).unwrap();
        assert!(m.add_var("x", 0, 1).is_err());
        assert!(m.add_constraint([(VarId(3), 1)], Relation::Le, 0).is_err());
    }

    #[test]
    fn dump_lists_constraints_and_bounds() {
        let mut m = IlpModel::new();
        let x = m.add_var("x", 0, 3).unwrap();
        let y = m.add_var("y", 1, 2).unwrap();
        m.add_constraint([(x, 1), (y, -2)], Relation::Ge, 0)
            .unwrap();
        let text = m.dump();
        assert!(text.contains("c0: x - 2 y >= 0"), "{text}");
        assert!(text.contains("1 <= y <= 2"), "{text}");
    }
}

//! Instances, matchings, fairness measures and the solution verifier.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fairness measure applied to the colors matched to one right vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Margin of victory: largest count minus second-largest count.
    Mov,
    /// Largest count minus smallest count, absent colors counting zero.
    MaxMin,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Mov => write!(f, "mov"),
            Measure::MaxMin => write!(f, "maxmin"),
        }
    }
}

/// Per-color occurrence counts of a set of left vertices, over the full color set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CountVector(pub Vec<usize>);

impl CountVector {
    pub fn zeros(num_colors: usize) -> Self {
        CountVector(vec![0; num_colors])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Value of `measure` on these counts.
    pub fn measure(&self, measure: Measure) -> usize {
        match measure {
            Measure::Mov => mov(self),
            Measure::MaxMin => maxmin(self),
        }
    }
}

/// Margin of victory. With a single color the second-largest entry is taken as 0.
pub fn mov(counts: &CountVector) -> usize {
    let mut first = 0;
    let mut second = 0;
    for &x in &counts.0 {
        if x > first {
            second = first;
            first = x;
        } else if x > second {
            second = x;
        }
    }
    first - second
}

/// Largest entry minus smallest entry. With a single color the smallest
/// entry is taken as 0, as for [`mov`].
pub fn maxmin(counts: &CountVector) -> usize {
    let hi = counts.0.iter().copied().max().unwrap_or(0);
    let lo = if counts.0.len() < 2 {
        0
    } else {
        counts.0.iter().copied().min().unwrap_or(0)
    };
    hi - lo
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    num_colors: usize,
    left_colors: Vec<usize>,
    k: usize,
    edges: Vec<(usize, usize)>,
    ell: usize,
    measure: Measure,
    #[serde(default)]
    size_min: usize,
    #[serde(default)]
    size_max: Option<usize>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let inst = Instance {
            num_colors: raw.num_colors,
            left_colors: raw.left_colors,
            k: raw.k,
            edges: raw.edges,
            ell: raw.ell,
            measure: raw.measure,
            size_min: raw.size_min,
            size_max: raw.size_max,
        };
        inst.check()?;
        Ok(inst)
    }
}

/// A colored bipartite graph with a fairness requirement.
///
/// Left vertices are `0..n` with `n = left_colors.len()`; right vertices are `0..k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    pub num_colors: usize,
    pub left_colors: Vec<usize>,
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
    pub ell: usize,
    pub measure: Measure,
    pub size_min: usize,
    pub size_max: Option<usize>,
}

impl Instance {
    /// Builds and validates an instance without size constraints.
    pub fn new(
        num_colors: usize,
        left_colors: Vec<usize>,
        k: usize,
        edges: Vec<(usize, usize)>,
        ell: usize,
        measure: Measure,
    ) -> Result<Self> {
        let inst = Instance {
            num_colors,
            left_colors,
            k,
            edges,
            ell,
            measure,
            size_min: 0,
            size_max: None,
        };
        inst.check()?;
        Ok(inst)
    }

    /// Complete bipartite instance where color `c` has `counts[c]` left vertices,
    /// listed color by color.
    pub fn complete(counts: &[usize], k: usize, ell: usize, measure: Measure) -> Result<Self> {
        let left_colors: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(c, &m)| std::iter::repeat_n(c, m))
            .collect();
        let edges = (0..left_colors.len())
            .flat_map(|u| (0..k).map(move |v| (u, v)))
            .collect();
        Instance::new(counts.len(), left_colors, k, edges, ell, measure)
    }

    pub fn with_size(mut self, size_min: usize, size_max: Option<usize>) -> Result<Self> {
        self.size_min = size_min;
        self.size_max = size_max;
        self.check()?;
        Ok(self)
    }

    pub fn with_ell(mut self, ell: usize) -> Self {
        self.ell = ell;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    /// Number of left vertices.
    pub fn n(&self) -> usize {
        self.left_colors.len()
    }

    fn check(&self) -> Result<()> {
        if self.left_colors.is_empty() {
            return Err(Error::input("instance needs at least one left vertex"));
        }
        if self.k == 0 {
            return Err(Error::input("instance needs at least one right vertex"));
        }
        if self.num_colors == 0 {
            return Err(Error::input("instance needs at least one color"));
        }
        if let Some(u) = self.left_colors.iter().position(|&c| c >= self.num_colors) {
            return Err(Error::input(format!(
                "left vertex {u} has color {} but num_colors is {}",
                self.left_colors[u], self.num_colors
            )));
        }
        let mut seen = HashSet::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u >= self.n() || v >= self.k {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) out of range for n = {}, k = {}",
                    self.n(),
                    self.k
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::input(format!("duplicate edge ({u}, {v})")));
            }
        }
        if let Some(q) = self.size_max {
            if self.size_min > q {
                return Err(Error::input(format!(
                    "size_min {} exceeds size_max {q}",
                    self.size_min
                )));
            }
        }
        Ok(())
    }

    /// Sorted right neighbors of every left vertex.
    pub fn left_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Sorted left neighbors of every right vertex.
    pub fn right_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.k];
        for &(u, v) in &self.edges {
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Number of left vertices of every color.
    pub fn color_counts(&self) -> CountVector {
        self.counts_of(0..self.n())
    }

    /// Count vector of an arbitrary set of left vertices.
    pub fn counts_of(&self, left: impl IntoIterator<Item = usize>) -> CountVector {
        let mut counts = CountVector::zeros(self.num_colors);
        for u in left {
            counts.0[self.left_colors[u]] += 1;
        }
        counts
    }

    /// Left vertices of color `c`, ascending.
    pub fn color_class(&self, c: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&u| self.left_colors[u] == c)
            .collect()
    }

    pub fn max_left_degree(&self) -> usize {
        self.left_adj().iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_right_degree(&self) -> usize {
        self.right_adj().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every left vertex is adjacent to every right vertex.
    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n() * self.k
    }

    /// Whether a set with these counts is fair under the instance measure and `ell`.
    pub fn is_fair(&self, counts: &CountVector) -> bool {
        counts.measure(self.measure) <= self.ell
    }

    /// Whether `size` satisfies the size constraints.
    pub fn size_ok(&self, size: usize) -> bool {
        size >= self.size_min && self.size_max.is_none_or(|q| size <= q)
    }

    /// Upper size bound, ignoring bounds that no right vertex can reach.
    pub fn effective_size_max(&self) -> Option<usize> {
        self.size_max.filter(|&q| q < self.n())
    }

    /// True when the size constraints are absent or only demand non-emptiness.
    pub fn at_most_nonempty(&self) -> bool {
        self.size_min <= 1 && self.effective_size_max().is_none()
    }

    /// True when every right vertex must receive at least one left vertex.
    pub fn nonempty(&self) -> bool {
        self.size_min >= 1
    }
}

/// A left-perfect many-to-one assignment: `assign[u]` is the right vertex of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matching {
    pub assign: Vec<usize>,
}

impl Matching {
    pub fn new(assign: Vec<usize>) -> Self {
        Matching { assign }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matching serialization cannot fail")
    }

    /// Left vertices assigned to each right vertex.
    pub fn groups(&self, k: usize) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); k];
        for (u, &v) in self.assign.iter().enumerate() {
            if v < k {
                groups[v].push(u);
            }
        }
        groups
    }
}

/// Outcome of an exact decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes(Matching),
    No,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn matching(&self) -> Option<&Matching> {
        match self {
            Answer::Yes(m) => Some(m),
            Answer::No => None,
        }
    }
}

/// One violated constraint found by [`verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotAdjacent { u: usize, v: usize },
    Unfair { v: usize, value: usize, ell: usize },
    TooSmall { v: usize, size: usize, min: usize },
    TooLarge { v: usize, size: usize, max: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAdjacent { u, v } => {
                write!(
                    f,
                    "left vertex {u} assigned to non-adjacent right vertex {v}"
                )
            }
            Violation::Unfair { v, value, ell } => {
                write!(f, "right vertex {v} has measure {value} > {ell}")
            }
            Violation::TooSmall { v, size, min } => {
                write!(f, "right vertex {v} receives {size} < {min} vertices")
            }
            Violation::TooLarge { v, size, max } => {
                write!(f, "right vertex {v} receives {size} > {max} vertices")
            }
        }
    }
}

/// Result of [`verify`]; valid iff no violations were found.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks adjacency, fairness and size constraints of `matching`.
pub fn verify(instance: &Instance, matching: &Matching) -> Result<Verdict> {
    if matching.assign.len() != instance.n() {
        return Err(Error::input(format!(
            "matching has length {} but the instance has {} left vertices",
            matching.assign.len(),
            instance.n()
        )));
    }
    let edges: HashSet<(usize, usize)> = instance.edges.iter().copied().collect();
    let mut violations = Vec::new();
    for (u, &v) in matching.assign.iter().enumerate() {
        if !edges.contains(&(u, v)) {
            violations.push(Violation::NotAdjacent { u, v });
        }
    }
    for (v, group) in matching.groups(instance.k).into_iter().enumerate() {
        let counts = instance.counts_of(group.iter().copied());
        let value = counts.measure(instance.measure);
        if value > instance.ell {
            violations.push(Violation::Unfair {
                v,
                value,
                ell: instance.ell,
            });
        }
        if group.len() < instance.size_min {
            violations.push(Violation::TooSmall {
                v,
                size: group.len(),
                min: instance.size_min,
            });
        }
        if let Some(max) = instance.size_max {
            if group.len() > max {
                violations.push(Violation::TooLarge {
                    v,
                    size: group.len(),
                    max,
                });
            }
        }
    }
    Ok(Verdict { violations })
}

/// Non-fatal findings of [`validate_instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    IsolatedLeft { u: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::IsolatedLeft { u } => {
                write!(f, "infeasible: isolated left vertex {u}")
            }
        }
    }
}

/// Re-checks the instance invariants and reports left vertices without neighbors.
pub fn validate_instance(instance: &Instance) -> Result<Vec<Warning>> {
    instance.check()?;
    Ok(instance
        .left_adj()
        .iter()
        .enumerate()
        .filter(|(_, adj)| adj.is_empty())
        .map(|(u, _)| Warning::IsolatedLeft { u })
        .collect())
}

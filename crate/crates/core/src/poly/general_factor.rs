//! Spanning subgraphs with prescribed degree lists, and the gadget
//! machinery that reduces fair matching to them.

use crate::error::{Error, Result};
use crate::ilp::{IlpConfig, IlpModel, Relation, VarId};
use crate::model::{Instance, Matching};

/// Undirected graph with an allowed-degree list per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFactorInstance {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    lists: Vec<Vec<usize>>,
}

impl GeneralFactorInstance {
    pub fn new(
        num_vertices: usize,
        edges: Vec<(usize, usize)>,
        mut lists: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if lists.len() != num_vertices {
            return Err(Error::input(format!(
                "{} degree lists for {num_vertices} vertices",
                lists.len()
            )));
        }
        let mut degree = vec![0usize; num_vertices];
        for &(a, b) in &edges {
            if a >= num_vertices || b >= num_vertices {
                return Err(Error::input(format!("edge ({a}, {b}) leaves the graph")));
            }
            if a == b {
                return Err(Error::input(format!("self-loop at vertex {a}")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        for (w, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.last().is_some_and(|&d| d > degree[w]) {
                return Err(Error::input(format!(
                    "degree list of vertex {w} exceeds its degree {}",
                    degree[w]
                )));
            }
        }
        Ok(GeneralFactorInstance {
            num_vertices,
            edges,
            lists,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    /// True iff no list misses two consecutive values between its extremes.
    pub fn has_small_gaps(&self) -> bool {
        self.lists
            .iter()
            .all(|l| l.windows(2).all(|w| w[1] - w[0] <= 2))
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Exact search, one bounded ILP per connected component. Returns the
/// indices of the chosen edges.
pub fn solve_general_factor_exact(
    gf: &GeneralFactorInstance,
    config: &IlpConfig,
) -> Result<Option<Vec<usize>>> {
    let n = gf.num_vertices;
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in &gf.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut comp_vertices: Vec<Vec<usize>> = vec![Vec::new(); n];
    for w in 0..n {
        let r = find(&mut parent, w);
        comp_vertices[r].push(w);
    }
    let mut comp_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, _)) in gf.edges.iter().enumerate() {
        let r = find(&mut parent, a);
        comp_edges[r].push(i);
    }
    let mut chosen = Vec::new();
    for r in 0..n {
        if comp_vertices[r].is_empty() {
            continue;
        }
        match solve_component(gf, &comp_vertices[r], &comp_edges[r], config)? {
            Some(mut part) => chosen.append(&mut part),
            None => return Ok(None),
        }
    }
    chosen.sort_unstable();
    let mut degree = vec![0usize; n];
    for &i in &chosen {
        let (a, b) = gf.edges[i];
        degree[a] += 1;
        degree[b] += 1;
    }
    if (0..n).any(|w| gf.lists[w].binary_search(&degree[w]).is_err()) {
        return Err(Error::internal(
            "general factor search returned a wrong degree",
        ));
    }
    Ok(Some(chosen))
}

fn solve_component(
    gf: &GeneralFactorInstance,
    vertices: &[usize],
    edges: &[usize],
    config: &IlpConfig,
) -> Result<Option<Vec<usize>>> {
    if vertices.iter().any(|&w| gf.lists[w].is_empty()) {
        return Ok(None);
    }
    if edges.is_empty() {
        let ok = vertices.iter().all(|&w| gf.lists[w][0] == 0);
        return Ok(ok.then(Vec::new));
    }
    let mut model = IlpModel::new();
    let x: Vec<VarId> = edges
        .iter()
        .map(|&i| model.add_var(format!("e{i}"), 0, 1))
        .collect::<Result<_>>()?;
    let mut incident: Vec<Vec<VarId>> = vec![Vec::new(); gf.num_vertices];
    for (j, &i) in edges.iter().enumerate() {
        let (a, b) = gf.edges[i];
        incident[a].push(x[j]);
        incident[b].push(x[j]);
    }
    for &w in vertices {
        let list = &gf.lists[w];
        let (lo, hi) = (list[0], *list.last().unwrap());
        let terms: Vec<(VarId, i64)> = incident[w].iter().map(|&e| (e, 1)).collect();
        if hi - lo + 1 == list.len() {
            if lo > 0 {
                model.add_constraint(terms.clone(), Relation::Ge, lo as i64)?;
            }
            if hi < incident[w].len() {
                model.add_constraint(terms, Relation::Le, hi as i64)?;
            }
            continue;
        }
        let sel: Vec<VarId> = list
            .iter()
            .map(|d| model.add_var(format!("d{w}_{d}"), 0, 1))
            .collect::<Result<_>>()?;
        model.add_constraint(sel.iter().map(|&s| (s, 1)), Relation::Eq, 1)?;
        let mut row = terms;
        row.extend(sel.iter().zip(list).map(|(&s, &d)| (s, -(d as i64))));
        model.add_constraint(row, Relation::Eq, 0)?;
    }
    let Some(sol) = model.solve(config)? else {
        return Ok(None);
    };
    Ok(Some(
        edges
            .iter()
            .zip(&x)
            .filter(|(_, &v)| sol.value(v) == 1)
            .map(|(&i, _)| i)
            .collect(),
    ))
}

/// Endpoint of a gadget edge: a left vertex of the neighborhood, by
/// position, or an internal gadget vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GNode {
    Left(usize),
    Inner(usize),
}

/// Degree-list gadget attached to one right vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    /// Global ids of the left vertices the gadget touches.
    pub nbrs: Vec<usize>,
    pub inner_lists: Vec<Vec<usize>>,
    pub edges: Vec<(GNode, GNode)>,
}

impl Gadget {
    pub(crate) fn new(nbrs: Vec<usize>) -> Self {
        Gadget {
            nbrs,
            inner_lists: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub(crate) fn inner(&mut self, list: impl IntoIterator<Item = usize>) -> GNode {
        self.inner_lists.push(list.into_iter().collect());
        GNode::Inner(self.inner_lists.len() - 1)
    }

    pub(crate) fn join(&mut self, a: GNode, b: GNode) {
        self.edges.push((a, b));
    }

    /// Clips every inner list to the vertex degree.
    pub(crate) fn clip(mut self) -> Self {
        let mut degree = vec![0usize; self.inner_lists.len()];
        for &(a, b) in &self.edges {
            for end in [a, b] {
                if let GNode::Inner(i) = end {
                    degree[i] += 1;
                }
            }
        }
        for (list, d) in self.inner_lists.iter_mut().zip(degree) {
            list.retain(|&x| x <= d);
        }
        self
    }

    /// Whether the gadget has a factor in which exactly the left vertices
    /// flagged in `chosen` are covered, each once.
    pub fn admits(&self, chosen: &[bool], config: &IlpConfig) -> Result<bool> {
        let m = self.nbrs.len();
        let node = |g: GNode| match g {
            GNode::Left(i) => i,
            GNode::Inner(i) => m + i,
        };
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (node(a), node(b)))
            .collect();
        let mut lists: Vec<Vec<usize>> = chosen.iter().map(|&c| vec![c as usize]).collect();
        lists.extend(self.inner_lists.iter().cloned());
        let mut degree = vec![0usize; m + self.inner_lists.len()];
        for &(a, b) in &self.edges {
            degree[node(a)] += 1;
            degree[node(b)] += 1;
        }
        for (w, list) in lists.iter_mut().enumerate() {
            list.retain(|&x| x <= degree[w]);
        }
        let gf = GeneralFactorInstance::new(m + self.inner_lists.len(), edges, lists)?;
        Ok(solve_general_factor_exact(&gf, config)?.is_some())
    }
}

/// Merges per-right-vertex gadgets, gives every left vertex the list `{1}`,
/// and reads off `M(v)` from the chosen gadget edges.
pub(crate) fn solve_gadgets(
    instance: &Instance,
    gadgets: &[Gadget],
    config: &IlpConfig,
) -> Result<Option<Matching>> {
    let n = instance.n();
    let mut owner = Vec::new();
    let mut offset = Vec::with_capacity(gadgets.len());
    for (v, g) in gadgets.iter().enumerate() {
        offset.push(n + owner.len());
        owner.extend(std::iter::repeat_n(v, g.inner_lists.len()));
    }
    let total = n + owner.len();
    let mut edges = Vec::new();
    let mut lists: Vec<Vec<usize>> = vec![vec![1]; n];
    for (v, g) in gadgets.iter().enumerate() {
        lists.extend(g.inner_lists.iter().cloned());
        let node = |x: GNode| match x {
            GNode::Left(i) => g.nbrs[i],
            GNode::Inner(i) => offset[v] + i,
        };
        for &(a, b) in &g.edges {
            edges.push((node(a), node(b)));
        }
    }
    let mut degree = vec![0usize; total];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    if degree[..n].contains(&0) {
        return Ok(None);
    }
    let gf = GeneralFactorInstance::new(total, edges, lists)?;
    let Some(chosen) = solve_general_factor_exact(&gf, config)? else {
        return Ok(None);
    };
    let mut assign = vec![usize::MAX; n];
    for i in chosen {
        let (a, b) = gf.edges[i];
        let (u, w) = if a < n { (a, b) } else { (b, a) };
        if u < n && w >= n {
            assign[u] = owner[w - n];
        }
    }
    if assign.contains(&usize::MAX) {
        return Err(Error::internal(
            "gadget factor left a left vertex unassigned",
        ));
    }
    Ok(Some(Matching::new(assign)))
}

//! Matching and flow kernels: Hopcroft-Karp, Dinic with lower bounds, and
//! Edmonds' blossom algorithm for general graphs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::Instance;

/// Bipartite graph with adjacency lists from the left side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipGraph {
    pub n_left: usize,
    pub n_right: usize,
    pub adj: Vec<Vec<usize>>,
}

impl BipGraph {
    pub fn new(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n_left];
        for &(u, v) in edges {
            if u >= n_left || v >= n_right {
                return Err(Error::input(format!("edge ({u}, {v}) out of range")));
            }
            if adj[u].contains(&v) {
                return Err(Error::input(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(BipGraph {
            n_left,
            n_right,
            adj,
        })
    }

    pub fn from_adj(n_right: usize, adj: Vec<Vec<usize>>) -> Self {
        BipGraph {
            n_left: adj.len(),
            n_right,
            adj,
        }
    }
}

/// One-to-one matching; `left[u]` is the partner of left vertex `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipMatching {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl BipMatching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }
}

/// Maximum-cardinality matching by Hopcroft-Karp.
pub fn max_bipartite_matching(g: &BipGraph) -> BipMatching {
    const INF: usize = usize::MAX;
    let mut ml: Vec<Option<usize>> = vec![None; g.n_left];
    let mut mr: Vec<Option<usize>> = vec![None; g.n_right];
    let mut dist = vec![INF; g.n_left];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..g.n_left {
            if ml[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &g.adj[u] {
                match mr[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut iter = vec![0usize; g.n_left];
        for u in 0..g.n_left {
            if ml[u].is_none() {
                augment(g, u, &mut ml, &mut mr, &mut dist, &mut iter);
            }
        }
    }
    BipMatching {
        left: ml,
        right: mr,
    }
}

fn augment(
    g: &BipGraph,
    root: usize,
    ml: &mut [Option<usize>],
    mr: &mut [Option<usize>],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    let mut path: Vec<usize> = vec![root];
    while let Some(&u) = path.last() {
        if iter[u] == g.adj[u].len() {
            dist[u] = usize::MAX;
            path.pop();
            if let Some(&p) = path.last() {
                iter[p] += 1;
            }
            continue;
        }
        let v = g.adj[u][iter[u]];
        match mr[v] {
            None => {
                for &w in path.iter().rev() {
                    let target = g.adj[w][iter[w]];
                    ml[w] = Some(target);
                    mr[target] = Some(w);
                }
                return true;
            }
            Some(w) if dist[w] == dist[u] + 1 => path.push(w),
            _ => iter[u] += 1,
        }
    }
    false
}

/// Dinic max-flow on an integer-capacity network.
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    orig: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); nodes],
            ..Default::default()
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.head.push(Vec::new());
        self.head.len() - 1
    }

    /// Adds an arc and returns its id.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.head[from].push(id);
        self.to.push(to);
        self.cap.push(cap);
        self.orig.push(cap);
        self.head[to].push(id + 1);
        self.to.push(from);
        self.cap.push(0);
        self.orig.push(0);
        id
    }

    /// Flow currently routed on arc `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.orig[id] - self.cap[id]
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let n = self.head.len();
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &e in &self.head[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && level[y] == usize::MAX {
                        level[y] = level[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut iter = vec![0usize; n];
            loop {
                let pushed = self.blocking(s, t, &level, &mut iter);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn blocking(&mut self, s: usize, t: usize, level: &[usize], iter: &mut [usize]) -> i64 {
        let mut path: Vec<usize> = Vec::new();
        let mut x = s;
        loop {
            if x == t {
                let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                }
                return push;
            }
            let mut advanced = false;
            while iter[x] < self.head[x].len() {
                let e = self.head[x][iter[x]];
                let y = self.to[e];
                if self.cap[e] > 0 && level[y] == level[x] + 1 {
                    path.push(e);
                    x = y;
                    advanced = true;
                    break;
                }
                iter[x] += 1;
            }
            if !advanced {
                match path.pop() {
                    None => return 0,
                    Some(e) => {
                        x = self.to[e ^ 1];
                        iter[x] += 1;
                    }
                }
            }
        }
    }
}

/// Network whose arcs carry lower and upper bounds.
#[derive(Clone, Debug)]
pub struct BoundedFlow {
    nodes: usize,
    arcs: Vec<(usize, usize, i64, i64)>,
}

impl BoundedFlow {
    pub fn new(nodes: usize) -> Self {
        BoundedFlow {
            nodes,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, lo: i64, hi: i64) -> usize {
        self.arcs.push((from, to, lo, hi));
        self.arcs.len() - 1
    }

    /// Finds an `s`-`t` flow meeting every arc bound, returning per-arc flows.
    pub fn feasible(&self, s: usize, t: usize) -> Option<Vec<i64>> {
        if self.arcs.iter().any(|&(_, _, lo, hi)| lo > hi || lo < 0) {
            return None;
        }
        let super_s = self.nodes;
        let super_t = self.nodes + 1;
        let mut net = FlowNetwork::new(self.nodes + 2);
        let mut excess = vec![0i64; self.nodes];
        let ids: Vec<usize> = self
            .arcs
            .iter()
            .map(|&(a, b, lo, hi)| {
                excess[b] += lo;
                excess[a] -= lo;
                net.add_edge(a, b, hi - lo)
            })
            .collect();
        let unbounded: i64 = self.arcs.iter().map(|a| a.3).sum::<i64>() + 1;
        net.add_edge(t, s, unbounded);
        let mut demand = 0;
        for (x, &e) in excess.iter().enumerate() {
            if e > 0 {
                net.add_edge(super_s, x, e);
                demand += e;
            } else if e < 0 {
                net.add_edge(x, super_t, -e);
            }
        }
        if net.max_flow(super_s, super_t) != demand {
            return None;
        }
        Some(
            self.arcs
                .iter()
                .zip(ids)
                .map(|(&(_, _, lo, _), id)| lo + net.flow(id))
                .collect(),
        )
    }
}

/// Left vertices of one color together with their right neighborhoods.
///
/// `vertices[i]` is a global left index; `adj[i]` lists its right neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorClass {
    pub vertices: Vec<usize>,
    pub adj: Vec<Vec<usize>>,
}

impl ColorClass {
    pub fn of(instance: &Instance, c: usize) -> Self {
        let left_adj = instance.left_adj();
        let vertices = instance.color_class(c);
        let adj = vertices.iter().map(|&u| left_adj[u].clone()).collect();
        ColorClass { vertices, adj }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Per-right-vertex interval on the number of matched left vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

impl DegreeBounds {
    pub fn new(lower: Vec<usize>, upper: Vec<usize>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::input("bound vectors differ in length"));
        }
        if let Some(v) = (0..lower.len()).find(|&v| lower[v] > upper[v]) {
            return Err(Error::input(format!(
                "right vertex {v} has lower bound {} above upper bound {}",
                lower[v], upper[v]
            )));
        }
        Ok(DegreeBounds { lower, upper })
    }

    pub fn uniform(k: usize, lower: usize, upper: usize) -> Result<Self> {
        Self::new(vec![lower; k], vec![upper; k])
    }
}

/// Assignment with `|M(v)| = z[v]` for every right vertex, built on the
/// clone-expanded graph. Entry `i` is the right vertex of `class.vertices[i]`.
pub fn construct_exact(class: &ColorClass, z: &[usize]) -> Result<Option<Vec<usize>>> {
    let total: usize = z.iter().sum();
    if total != class.len() {
        return Err(Error::input(format!(
            "targets sum to {total} but the class has {} vertices",
            class.len()
        )));
    }
    let mut first_clone = Vec::with_capacity(z.len() + 1);
    let mut acc = 0;
    for &zv in z {
        first_clone.push(acc);
        acc += zv;
    }
    first_clone.push(acc);
    let mut owner = vec![0usize; acc];
    for v in 0..z.len() {
        owner[first_clone[v]..first_clone[v + 1]].fill(v);
    }
    let mut adj = Vec::with_capacity(class.len());
    for nbrs in &class.adj {
        let mut list = Vec::new();
        for &v in nbrs {
            if v >= z.len() {
                return Err(Error::input(format!("right vertex {v} has no target")));
            }
            list.extend(first_clone[v]..first_clone[v + 1]);
        }
        adj.push(list);
    }
    let g = BipGraph::from_adj(acc, adj);
    let m = max_bipartite_matching(&g);
    if m.size() < class.len() {
        return Ok(None);
    }
    Ok(Some(m.left.iter().map(|x| owner[x.unwrap()]).collect()))
}

/// Left-perfect assignment with `lower[v] <= |M(v)| <= upper[v]`.
pub fn construct_bounded(class: &ColorClass, bounds: &DegreeBounds) -> Option<Vec<usize>> {
    let k = bounds.lower.len();
    let n = class.len();
    let s = 0;
    let t = 1;
    let left = |i: usize| 2 + i;
    let right = |v: usize| 2 + n + v;
    let mut flow = BoundedFlow::new(2 + n + k);
    for i in 0..n {
        flow.add_arc(s, left(i), 1, 1);
    }
    let mut edge_arcs = Vec::new();
    for (i, nbrs) in class.adj.iter().enumerate() {
        for &v in nbrs {
            if v < k {
                edge_arcs.push((i, v, flow.add_arc(left(i), right(v), 0, 1)));
            }
        }
    }
    for v in 0..k {
        flow.add_arc(right(v), t, bounds.lower[v] as i64, bounds.upper[v] as i64);
    }
    let values = flow.feasible(s, t)?;
    let mut assign = vec![usize::MAX; n];
    for (i, v, id) in edge_arcs {
        if values[id] == 1 {
            assign[i] = v;
        }
    }
    debug_assert!(assign.iter().all(|&v| v != usize::MAX));
    Some(assign)
}

/// Left-perfect assignment with `|M(v)| <= caps[v]`.
pub fn construct_capped(class: &ColorClass, caps: &[usize]) -> Option<Vec<usize>> {
    let bounds = DegreeBounds {
        lower: vec![0; caps.len()],
        upper: caps.to_vec(),
    };
    construct_bounded(class, &bounds)
}

/// Maximum matching in a general graph by Edmonds' blossom algorithm.
/// Returns `mate[w]` for every vertex.
pub fn max_general_matching(n: usize, edges: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    Blossom::new(adj).run()
}

struct Blossom {
    adj: Vec<Vec<usize>>,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

const NONE: usize = usize::MAX;

impl Blossom {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn run(mut self) -> Vec<Option<usize>> {
        let n = self.adj.len();
        for a in 0..n {
            if self.mate[a] == NONE {
                if let Some(&b) = self.adj[a].iter().find(|&&b| self.mate[b] == NONE) {
                    self.mate[a] = b;
                    self.mate[b] = a;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            let end = self.find_path(root);
            let mut v = end;
            while v != NONE {
                let pv = self.parent[v];
                let ppv = self.mate[pv];
                self.mate[v] = pv;
                self.mate[pv] = v;
                v = ppv;
            }
        }
        self.mate
            .iter()
            .map(|&m| if m == NONE { None } else { Some(m) })
            .collect()
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint or `NONE`.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.adj.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        NONE
    }
}

/// A matching of the general graph in which every vertex of `must` is matched.
///
/// Works on two copies of the graph joined by a twin edge at every vertex
/// outside `must`: a matching covering `must` exists iff the doubled graph
/// has a perfect matching. Returns matched edges with `a < b`.
pub fn saturating_matching(
    n: usize,
    edges: &[(usize, usize)],
    must: &[usize],
) -> Option<Vec<(usize, usize)>> {
    let mut required = vec![false; n];
    for &w in must {
        required[w] = true;
    }
    let mut doubled = Vec::with_capacity(2 * edges.len() + n);
    for &(a, b) in edges {
        doubled.push((a, b));
        doubled.push((a + n, b + n));
    }
    for w in 0..n {
        if !required[w] {
            doubled.push((w, w + n));
        }
    }
    let mate = max_general_matching(2 * n, &doubled);
    if mate.iter().any(Option::is_none) {
        return None;
    }
    let mut out = Vec::new();
    for a in 0..n {
        if let Some(b) = mate[a] {
            if b < n && a < b {
                out.push((a, b));
            }
        }
    }
    Some(out)
}

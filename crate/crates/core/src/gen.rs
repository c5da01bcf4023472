//! Instance generators: seeded random families and reductions from
//! 3-Dimensional Matching and bounded-occurrence 3-SAT.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Measure};

/// Parameters of [`random_instance`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub k: usize,
    pub num_colors: usize,
    pub edge_prob: f64,
    pub max_left_degree: Option<usize>,
    pub max_right_degree: Option<usize>,
    /// Give every left vertex at least one neighbor when the caps allow it.
    pub connect_left: bool,
    pub ell: usize,
    pub measure: Measure,
    pub size_min: usize,
    pub size_max: Option<usize>,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, k: usize, num_colors: usize, seed: u64) -> Self {
        RandomSpec {
            n,
            k,
            num_colors,
            edge_prob: 0.5,
            max_left_degree: None,
            max_right_degree: None,
            connect_left: true,
            ell: 0,
            measure: Measure::MaxMin,
            size_min: 0,
            size_max: None,
            seed,
        }
    }
}

/// Random instance with uniform colors and independent edges, truncated to
/// the degree caps in random order. Deterministic for a fixed seed.
pub fn random_instance(spec: &RandomSpec) -> Result<Instance> {
    if spec.n == 0 || spec.k == 0 || spec.num_colors == 0 {
        return Err(Error::input("n, k and num_colors must be positive"));
    }
    if spec.max_left_degree == Some(0) || spec.max_right_degree == Some(0) {
        return Err(Error::input("degree caps must be positive"));
    }
    if !(0.0..=1.0).contains(&spec.edge_prob) {
        return Err(Error::input("edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let left_colors: Vec<usize> = (0..spec.n)
        .map(|_| rng.random_range(0..spec.num_colors))
        .collect();
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for u in 0..spec.n {
        for v in 0..spec.k {
            if rng.random_bool(spec.edge_prob) {
                candidates.push((u, v));
            }
        }
    }
    candidates.shuffle(&mut rng);
    let cap_l = spec.max_left_degree.unwrap_or(usize::MAX);
    let cap_r = spec.max_right_degree.unwrap_or(usize::MAX);
    let mut deg_l = vec![0usize; spec.n];
    let mut deg_r = vec![0usize; spec.k];
    let mut edges = Vec::new();
    let mut present = vec![false; spec.n * spec.k];
    let mut keep = |(u, v): (usize, usize), edges: &mut Vec<(usize, usize)>| {
        if !present[u * spec.k + v] && deg_l[u] < cap_l && deg_r[v] < cap_r {
            present[u * spec.k + v] = true;
            deg_l[u] += 1;
            deg_r[v] += 1;
            edges.push((u, v));
            true
        } else {
            false
        }
    };
    if spec.connect_left {
        let mut order: Vec<usize> = (0..spec.n).collect();
        order.shuffle(&mut rng);
        for u in order {
            let mut vs: Vec<usize> = (0..spec.k).collect();
            vs.shuffle(&mut rng);
            for v in vs {
                if keep((u, v), &mut edges) {
                    break;
                }
            }
        }
    }
    for edge in candidates {
        keep(edge, &mut edges);
    }
    edges.sort_unstable();
    Instance::new(
        spec.num_colors,
        left_colors,
        spec.k,
        edges,
        spec.ell,
        spec.measure,
    )?
    .with_size(spec.size_min, spec.size_max)
}

/// 3-Dimensional Matching over `X = 0..x`, `Y = 0..y`, `Z = 0..z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreeDMInstance {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl ThreeDMInstance {
    pub fn validate(&self) -> Result<()> {
        if self.x + self.y + self.z == 0 {
            return Err(Error::input("3DM instance has no elements"));
        }
        let mut seen = std::collections::HashSet::new();
        for &t in &self.triples {
            if t.0 >= self.x || t.1 >= self.y || t.2 >= self.z {
                return Err(Error::input(format!("triple {t:?} out of range")));
            }
            if !seen.insert(t) {
                return Err(Error::input(format!("duplicate triple {t:?}")));
            }
        }
        for (dim, occ) in self.occurrences().iter().enumerate() {
            if let Some(e) = occ.iter().position(|o| o.len() > 3) {
                return Err(Error::input(format!(
                    "element {e} of dimension {dim} occurs in more than three triples"
                )));
            }
        }
        Ok(())
    }

    /// `occ[d][e]` lists the triples containing element `e` of dimension `d`.
    pub fn occurrences(&self) -> [Vec<Vec<usize>>; 3] {
        let mut occ = [
            vec![Vec::new(); self.x],
            vec![Vec::new(); self.y],
            vec![Vec::new(); self.z],
        ];
        for (i, &(a, b, c)) in self.triples.iter().enumerate() {
            occ[0][a].push(i);
            occ[1][b].push(i);
            occ[2][c].push(i);
        }
        occ
    }

    fn elements(&self) -> Vec<(usize, usize)> {
        let sizes = [self.x, self.y, self.z];
        (0..3)
            .flat_map(|d| (0..sizes[d]).map(move |e| (d, e)))
            .collect()
    }
}

/// 0-fair Max-Min instance with one left vertex per element (colored by its
/// dimension) and one right vertex per triple. An empty triple set yields a
/// single isolated right vertex.
pub fn reduce_3dm_maxmin33(t: &ThreeDMInstance) -> Result<Instance> {
    t.validate()?;
    let occ = t.occurrences();
    let mut left_colors = Vec::new();
    let mut edges = Vec::new();
    for (d, e) in t.elements() {
        let u = left_colors.len();
        left_colors.push(d);
        for &ti in &occ[d][e] {
            edges.push((u, ti));
        }
    }
    let k = t.triples.len().max(1);
    Instance::new(3, left_colors, k, edges, 0, Measure::MaxMin)
}

/// 0-fair Max-Min instance with left degree at most 2 and right degree at
/// most 4. Right vertices: one per triple, then `v_s^1..3` per element.
/// Left vertices per element: `u_s^1..3`, `a_s^1`, `a_s^2`, `b_s^1`, `b_s^2`.
/// When `s` occurs in `r < 3` triples, `u_s^i` for `i > r` is adjacent to
/// `v_s^i` only.
pub fn reduce_3dm_maxmin24(t: &ThreeDMInstance) -> Result<Instance> {
    t.validate()?;
    let occ = t.occurrences();
    let elements = t.elements();
    let base = t.triples.len();
    let mut left_colors = Vec::new();
    let mut edges = Vec::new();
    for (idx, &(d, e)) in elements.iter().enumerate() {
        let vs = [base + 3 * idx, base + 3 * idx + 1, base + 3 * idx + 2];
        let u_color = d;
        let a_color = (d + 1) % 3;
        let b_color = (d + 2) % 3;
        for i in 0..3 {
            let u = left_colors.len();
            left_colors.push(u_color);
            if let Some(&ti) = occ[d][e].get(i) {
                edges.push((u, ti));
            }
            edges.push((u, vs[i]));
        }
        let a1 = left_colors.len();
        let a2 = a1 + 1;
        let b1 = a1 + 2;
        let b2 = a1 + 3;
        left_colors.extend([a_color, a_color, b_color, b_color]);
        edges.extend([
            (a1, vs[0]),
            (a1, vs[2]),
            (a2, vs[0]),
            (a2, vs[1]),
            (b1, vs[1]),
            (b1, vs[2]),
            (b2, vs[0]),
            (b2, vs[1]),
        ]);
    }
    let k = base + 3 * elements.len();
    Instance::new(3, left_colors, k, edges, 0, Measure::MaxMin)
}

/// CNF with three literals per clause; literal `+i` / `-i` refers to
/// variable `i - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl CnfInstance {
    /// Checks literal ranges and that every variable occurs exactly twice
    /// positively and exactly twice negatively.
    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::input("formula has no variables"));
        }
        let mut pos = vec![0usize; self.num_vars];
        let mut neg = vec![0usize; self.num_vars];
        for clause in &self.clauses {
            for &lit in clause {
                let var = lit.unsigned_abs() as usize;
                if lit == 0 || var > self.num_vars {
                    return Err(Error::input(format!("literal {lit} out of range")));
                }
                if lit > 0 {
                    pos[var - 1] += 1;
                } else {
                    neg[var - 1] += 1;
                }
            }
        }
        if let Some(x) = (0..self.num_vars).find(|&x| pos[x] != 2 || neg[x] != 2) {
            return Err(Error::input(format!(
                "variable {} occurs {} times positively and {} times negatively; expected 2 and 2",
                x + 1,
                pos[x],
                neg[x]
            )));
        }
        Ok(())
    }

    /// Whether `assignment[x]` (true = variable true) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }
}

const ALPHA: usize = 0;
const BETA: usize = 1;
const GAMMA: usize = 2;

/// 0-fair MoV instance with left degree at most 2 and right degree at most 5.
///
/// Per variable `x` the left vertices are `u_x, u_x^{+,a}, u_x^{-,a},
/// u_x^{+,b}, u_x^{-,b}, u_x^{+,1}, u_x^{+,2}, u_x^{-,1}, u_x^{-,2}` and the
/// right vertices `v_x^+, v_x^-`. Per clause `y` the left vertices are
/// `u_y, u_y^1, u_y^2, u_y^{1,b}, u_y^{1,c}, u_y^{2,b}, u_y^{2,c}` and the
/// right vertices `v_y, v_y', v_y^1, v_y^2`. Variable gadgets come first.
pub fn reduce_sat_mov25(c: &CnfInstance) -> Result<Instance> {
    c.validate()?;
    let nx = c.num_vars;
    let var_left = |x: usize| 9 * x;
    let var_right = |x: usize| 2 * x;
    let clause_left = |y: usize| 9 * nx + 7 * y;
    let clause_right = |y: usize| 2 * nx + 4 * y;
    let mut left_colors = Vec::new();
    let mut edges = Vec::new();
    for x in 0..nx {
        let u = var_left(x);
        let (vp, vm) = (var_right(x), var_right(x) + 1);
        left_colors.extend([ALPHA, ALPHA, ALPHA, BETA, BETA, GAMMA, GAMMA, GAMMA, GAMMA]);
        edges.extend([
            (u, vp),
            (u, vm),
            (u + 1, vp),
            (u + 2, vm),
            (u + 3, vp),
            (u + 4, vm),
            (u + 5, vp),
            (u + 6, vp),
            (u + 7, vm),
            (u + 8, vm),
        ]);
    }
    let mut seen_pos = vec![0usize; nx];
    let mut seen_neg = vec![0usize; nx];
    for (y, clause) in c.clauses.iter().enumerate() {
        let u = clause_left(y);
        let r = clause_right(y);
        let (vy, vy_prime, vy1, vy2) = (r, r + 1, r + 2, r + 3);
        left_colors.extend([ALPHA, ALPHA, ALPHA, BETA, GAMMA, BETA, GAMMA]);
        edges.extend([
            (u, vy),
            (u, vy_prime),
            (u + 1, vy),
            (u + 1, vy1),
            (u + 2, vy),
            (u + 2, vy2),
            (u + 3, vy1),
            (u + 4, vy1),
            (u + 5, vy2),
            (u + 6, vy2),
        ]);
        for (i, &lit) in clause.iter().enumerate() {
            let x = lit.unsigned_abs() as usize - 1;
            let occurrence = if lit > 0 {
                seen_pos[x] += 1;
                seen_pos[x]
            } else {
                seen_neg[x] += 1;
                seen_neg[x]
            };
            let offset = if lit > 0 { 4 } else { 6 };
            let gadget_vertex = var_left(x) + offset + occurrence;
            let target = if i == 2 { vy_prime } else { vy };
            edges.push((gadget_vertex, target));
        }
    }
    let k = 2 * nx + 4 * c.clauses.len();
    Instance::new(3, left_colors, k, edges, 0, Measure::Mov)
}

/// Random 3DM instance with `q` elements per dimension and `num_triples`
/// distinct triples, each element in at most three triples.
pub fn random_3dm(q: usize, num_triples: usize, seed: u64) -> Result<ThreeDMInstance> {
    if q == 0 {
        return Err(Error::input("3DM dimension size must be positive"));
    }
    if num_triples > 3 * q || num_triples > q * q * q {
        return Err(Error::input(format!(
            "{num_triples} triples cannot fit with {q} elements per dimension and at most three occurrences"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut count = [vec![0usize; q], vec![0usize; q], vec![0usize; q]];
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        let mut stuck = 0;
        while triples.len() < num_triples && stuck < 1000 {
            let t = (
                rng.random_range(0..q),
                rng.random_range(0..q),
                rng.random_range(0..q),
            );
            if triples.contains(&t)
                || count[0][t.0] == 3
                || count[1][t.1] == 3
                || count[2][t.2] == 3
            {
                stuck += 1;
                continue;
            }
            count[0][t.0] += 1;
            count[1][t.1] += 1;
            count[2][t.2] += 1;
            triples.push(t);
        }
        if triples.len() == num_triples {
            let inst = ThreeDMInstance {
                x: q,
                y: q,
                z: q,
                triples,
            };
            inst.validate()?;
            return Ok(inst);
        }
    }
    Err(Error::input(
        "could not sample a 3DM instance with these sizes",
    ))
}

/// Random formula where every variable occurs exactly twice positively and
/// twice negatively: the `4 * num_vars` literals are shuffled and cut into
/// clauses of three. `num_vars` must be a multiple of 3.
pub fn random_sat4occ(num_vars: usize, seed: u64) -> Result<CnfInstance> {
    if num_vars == 0 || !num_vars.is_multiple_of(3) {
        return Err(Error::input(format!(
            "{num_vars} variables cannot be split into 3-literal clauses with four occurrences each"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut literals: Vec<i32> = (1..=num_vars as i32).flat_map(|x| [x, x, -x, -x]).collect();
    literals.shuffle(&mut rng);
    let clauses = literals
        .chunks_exact(3)
        .map(|ch| [ch[0], ch[1], ch[2]])
        .collect();
    let cnf = CnfInstance { num_vars, clauses };
    cnf.validate()?;
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instance_is_seed_deterministic() {
        let spec = RandomSpec::new(8, 3, 3, 42);
        let a = random_instance(&spec).unwrap();
        let b = random_instance(&spec).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let other = random_instance(&RandomSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a.to_json(), other.to_json());
    }

    #[test]
    fn random_instance_respects_caps() {
        let spec = RandomSpec {
            max_left_degree: Some(2),
            max_right_degree: Some(3),
            edge_prob: 0.9,
            ..RandomSpec::new(10, 5, 2, 7)
        };
        let inst = random_instance(&spec).unwrap();
        assert!(inst.max_left_degree() <= 2);
        assert!(inst.max_right_degree() <= 3);
    }

    #[test]
    fn random_instance_rejects_bad_parameters() {
        assert!(random_instance(&RandomSpec::new(0, 2, 2, 1)).is_err());
        let zero_cap = RandomSpec {
            max_left_degree: Some(0),
            ..RandomSpec::new(3, 2, 2, 1)
        };
        assert!(random_instance(&zero_cap).is_err());
    }

    #[test]
    fn maxmin33_shapes() {
        let single = ThreeDMInstance {
            x: 1,
            y: 1,
            z: 1,
            triples: vec![(0, 0, 0)],
        };
        let inst = reduce_3dm_maxmin33(&single).unwrap();
        assert_eq!(inst.left_colors, vec![0, 1, 2]);
        assert_eq!(inst.edges, vec![(0, 0), (1, 0), (2, 0)]);
        let empty = ThreeDMInstance {
            triples: vec![],
            ..single
        };
        let inst = reduce_3dm_maxmin33(&empty).unwrap();
        assert_eq!(inst.n(), 3);
        assert!(inst.edges.is_empty());
    }

    #[test]
    fn maxmin24_degrees() {
        let t = random_3dm(3, 5, 9).unwrap();
        let inst = reduce_3dm_maxmin24(&t).unwrap();
        assert!(inst.max_left_degree() <= 2);
        assert!(inst.max_right_degree() <= 4);
        assert_eq!(inst.n(), 7 * 9);
    }

    #[test]
    fn three_dm_validation() {
        let too_many = ThreeDMInstance {
            x: 1,
            y: 4,
            z: 4,
            triples: (0..4).map(|i| (0, i, i)).collect(),
        };
        assert!(reduce_3dm_maxmin33(&too_many).is_err());
        assert!(random_3dm(1, 2, 0).is_err());
    }

    #[test]
    fn sat_validation_and_degrees() {
        let short = CnfInstance {
            num_vars: 1,
            clauses: vec![[1, 1, -1]],
        };
        assert!(reduce_sat_mov25(&short).is_err());
        let cnf = random_sat4occ(3, 5).unwrap();
        assert_eq!(cnf.clauses.len(), 4);
        let inst = reduce_sat_mov25(&cnf).unwrap();
        assert!(inst.max_left_degree() <= 2);
        assert!(inst.max_right_degree() <= 5);
        assert_eq!(inst.n(), 55);
        assert!(random_sat4occ(4, 0).is_err());
    }
}

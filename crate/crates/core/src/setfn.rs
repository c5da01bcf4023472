//! Integer set functions over small ground sets, neighborhood tables, and the
//! touching-separator finder.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;

/// Largest ground set a table may have.
pub const MAX_TABLE_GROUND: usize = 24;
/// Largest ground set the separator search accepts.
pub const MAX_SEPARATOR_GROUND: usize = 8;

/// Set function `2^S -> Z` stored by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFunctionTable {
    pub ground_size: usize,
    pub values: Vec<i64>,
}

impl SetFunctionTable {
    pub fn new(ground_size: usize, values: Vec<i64>) -> Result<Self> {
        if ground_size > MAX_TABLE_GROUND {
            return Err(Error::input(format!(
                "ground set of size {ground_size} exceeds {MAX_TABLE_GROUND}"
            )));
        }
        if values.len() != 1 << ground_size {
            return Err(Error::input(format!(
                "table over {ground_size} elements needs {} values, got {}",
                1u64 << ground_size,
                values.len()
            )));
        }
        Ok(SetFunctionTable {
            ground_size,
            values,
        })
    }

    pub fn from_fn(ground_size: usize, f: impl Fn(usize) -> i64) -> Result<Self> {
        if ground_size > MAX_TABLE_GROUND {
            return Err(Error::input(format!(
                "ground set of size {ground_size} exceeds {MAX_TABLE_GROUND}"
            )));
        }
        Self::new(ground_size, (0..1usize << ground_size).map(f).collect())
    }

    /// Modular function with the given singleton values and `f(empty) = base`.
    pub fn modular(base: i64, singletons: &[i64]) -> Result<Self> {
        Self::from_fn(singletons.len(), |mask| {
            base + bits(mask).map(|x| singletons[x]).sum::<i64>()
        })
    }

    pub fn get(&self, mask: usize) -> i64 {
        self.values[mask]
    }

    pub fn full(&self) -> usize {
        (1 << self.ground_size) - 1
    }

    pub fn singleton(&self, x: usize) -> i64 {
        self.values[1 << x]
    }
}

/// Elements of a bitmask in ascending order.
pub fn bits(mask: usize) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(x)
        }
    })
}

/// Right-vertex subsets as bitmasks; errors when an index is out of range.
pub fn subset_mask(k: usize, w: &[usize]) -> Result<usize> {
    let mut mask = 0usize;
    for &v in w {
        if v >= k {
            return Err(Error::input(format!(
                "right vertex {v} out of range for k = {k}"
            )));
        }
        mask |= 1 << v;
    }
    Ok(mask)
}

fn check_color(instance: &Instance, c: usize) -> Result<()> {
    if c >= instance.num_colors {
        return Err(Error::input(format!(
            "color {c} out of range for {} colors",
            instance.num_colors
        )));
    }
    Ok(())
}

/// `|{u in U_c : N(u) is a subset of W}|`.
pub fn nu_c(instance: &Instance, c: usize, w: &[usize]) -> Result<usize> {
    check_color(instance, c)?;
    let mut inside = vec![false; instance.k];
    for &v in w {
        if v >= instance.k {
            return Err(Error::input(format!("right vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let adj = instance.left_adj();
    Ok((0..instance.n())
        .filter(|&u| instance.left_colors[u] == c && adj[u].iter().all(|&v| inside[v]))
        .count())
}

/// `|{u in U_c : N(u) meets W}|`.
pub fn n_c(instance: &Instance, c: usize, w: &[usize]) -> Result<usize> {
    check_color(instance, c)?;
    let mut inside = vec![false; instance.k];
    for &v in w {
        if v >= instance.k {
            return Err(Error::input(format!("right vertex {v} out of range")));
        }
        inside[v] = true;
    }
    let adj = instance.left_adj();
    Ok((0..instance.n())
        .filter(|&u| instance.left_colors[u] == c && adj[u].iter().any(|&v| inside[v]))
        .count())
}

/// ν and N values of every color at every right-vertex subset.
#[derive(Clone, Debug)]
pub struct NeighborhoodTables {
    pub k: usize,
    /// `nu[c][mask]`
    pub nu: Vec<Vec<usize>>,
    /// `big_n[c][mask]`
    pub big_n: Vec<Vec<usize>>,
}

impl NeighborhoodTables {
    pub fn new(instance: &Instance) -> Result<Self> {
        let k = instance.k;
        if k > MAX_TABLE_GROUND {
            return Err(Error::budget(
                "right vertices for subset tables",
                MAX_TABLE_GROUND as u64,
            ));
        }
        let size = 1usize << k;
        let full = size - 1;
        let mut nu = vec![vec![0usize; size]; instance.num_colors];
        for (u, nbrs) in instance.left_adj().iter().enumerate() {
            let mask = nbrs.iter().fold(0usize, |m, &v| m | (1 << v));
            nu[instance.left_colors[u]][mask] += 1;
        }
        for table in &mut nu {
            for bit in 0..k {
                for mask in 0..size {
                    if mask & (1 << bit) != 0 {
                        table[mask] += table[mask ^ (1 << bit)];
                    }
                }
            }
        }
        let big_n = nu
            .iter()
            .map(|t| (0..size).map(|m| t[full] - t[full ^ m]).collect())
            .collect();
        Ok(NeighborhoodTables { k, nu, big_n })
    }

    pub fn nu_table(&self, c: usize) -> SetFunctionTable {
        SetFunctionTable {
            ground_size: self.k,
            values: self.nu[c].iter().map(|&x| x as i64).collect(),
        }
    }

    pub fn n_table(&self, c: usize) -> SetFunctionTable {
        SetFunctionTable {
            ground_size: self.k,
            values: self.big_n[c].iter().map(|&x| x as i64).collect(),
        }
    }

    /// `max_c ν_c(W)` over the given colors.
    pub fn max_nu(&self, mask: usize) -> usize {
        self.nu.iter().map(|t| t[mask]).max().unwrap_or(0)
    }

    /// `min_c N_c(W)` over all colors.
    pub fn min_n(&self, mask: usize) -> usize {
        self.big_n.iter().map(|t| t[mask]).min().unwrap_or(0)
    }
}

/// True iff `f(X) = f(empty) + sum_{x in X} (f({x}) - f(empty))` for every X.
pub fn check_modular(f: &SetFunctionTable) -> bool {
    let base = f.get(0);
    (0..=f.full())
        .all(|mask| f.get(mask) == base + bits(mask).map(|x| f.singleton(x) - base).sum::<i64>())
}

/// True iff `f(X) + f(Y) <= f(X | Y) + f(X & Y)` for all X, Y.
///
/// Uses the equivalent local form: for every X and distinct a, b outside X,
/// `f(X+a) + f(X+b) <= f(X+a+b) + f(X)`.
pub fn check_supermodular(f: &SetFunctionTable) -> bool {
    first_supermodular_violation(f).is_none()
}

/// Some pair `(X, Y)` violating supermodularity, if one exists.
pub fn first_supermodular_violation(f: &SetFunctionTable) -> Option<(usize, usize)> {
    let m = f.ground_size;
    for x in 0..=f.full() {
        for a in 0..m {
            if x & (1 << a) != 0 {
                continue;
            }
            for b in a + 1..m {
                if x & (1 << b) != 0 {
                    continue;
                }
                let xa = x | (1 << a);
                let xb = x | (1 << b);
                if f.get(xa) + f.get(xb) > f.get(xa | xb) + f.get(x) {
                    return Some((xa, xb));
                }
            }
        }
    }
    None
}

/// A violated precondition of [`find_touching_separator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatorPrecondition {
    GroundMismatch,
    GroundTooLarge { size: usize },
    NotModular { which: &'static str },
    NotSupermodular { x: usize, y: usize },
    NonzeroEmpty { which: &'static str },
    NotDominated { subset: usize },
}

impl fmt::Display for SeparatorPrecondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeparatorPrecondition::GroundMismatch => write!(f, "tables have different ground sets"),
            SeparatorPrecondition::GroundTooLarge { size } => {
                write!(
                    f,
                    "ground set of size {size} exceeds {MAX_SEPARATOR_GROUND}"
                )
            }
            SeparatorPrecondition::NotModular { which } => write!(f, "{which} is not modular"),
            SeparatorPrecondition::NotSupermodular { x, y } => {
                write!(f, "g is not supermodular at subsets {x:#b} and {y:#b}")
            }
            SeparatorPrecondition::NonzeroEmpty { which } => {
                write!(f, "{which} is nonzero on the empty set")
            }
            SeparatorPrecondition::NotDominated { subset } => {
                write!(f, "max(f, g) exceeds f' at subset {subset:#b}")
            }
        }
    }
}

/// Every violated precondition of [`find_touching_separator`].
pub fn separator_preconditions(
    f: &SetFunctionTable,
    f_prime: &SetFunctionTable,
    g: &SetFunctionTable,
) -> Vec<SeparatorPrecondition> {
    let mut out = Vec::new();
    if f.ground_size != f_prime.ground_size || f.ground_size != g.ground_size {
        out.push(SeparatorPrecondition::GroundMismatch);
        return out;
    }
    if f.ground_size > MAX_SEPARATOR_GROUND {
        out.push(SeparatorPrecondition::GroundTooLarge {
            size: f.ground_size,
        });
        return out;
    }
    for (which, t) in [("f", f), ("f'", f_prime)] {
        if !check_modular(t) {
            out.push(SeparatorPrecondition::NotModular { which });
        }
    }
    if let Some((x, y)) = first_supermodular_violation(g) {
        out.push(SeparatorPrecondition::NotSupermodular { x, y });
    }
    for (which, t) in [("f", f), ("f'", f_prime), ("g", g)] {
        if t.get(0) != 0 {
            out.push(SeparatorPrecondition::NonzeroEmpty { which });
        }
    }
    for subset in 0..=f.full() {
        if f.get(subset).max(g.get(subset)) > f_prime.get(subset) {
            out.push(SeparatorPrecondition::NotDominated { subset });
        }
    }
    out
}

/// `g'(X) = max_{T subset of X} g(T) + f(X \ T)`.
pub fn convolve_max(f: &SetFunctionTable, g: &SetFunctionTable) -> SetFunctionTable {
    let values = (0..=f.full())
        .map(|x| {
            let mut best = g.get(0) + f.get(x);
            let mut t = x;
            while t > 0 {
                best = best.max(g.get(t) + f.get(x ^ t));
                t = (t - 1) & x;
            }
            best
        })
        .collect();
    SetFunctionTable {
        ground_size: f.ground_size,
        values,
    }
}

/// Modular `h` with `max(f, g) <= h <= f'` and `h(S) = max_T f(T) + g(S \ T)`.
pub fn find_touching_separator(
    f: &SetFunctionTable,
    f_prime: &SetFunctionTable,
    g: &SetFunctionTable,
) -> Result<SetFunctionTable> {
    let failures = separator_preconditions(f, f_prime, g);
    if !failures.is_empty() {
        let msg: Vec<String> = failures.iter().map(ToString::to_string).collect();
        return Err(Error::precondition(msg.join("; ")));
    }
    let m = f.ground_size;
    let g2 = convolve_max(f, g);
    let lo: Vec<i64> = (0..m).map(|x| g2.singleton(x)).collect();
    let hi: Vec<i64> = (0..m).map(|x| f_prime.singleton(x)).collect();
    let target = g2.get(g2.full());
    let mut h = vec![0i64; m];
    if place(0, 0, &mut h, &lo, &hi, &g2, target) {
        return SetFunctionTable::modular(0, &h);
    }
    Err(Error::internal(
        "no touching separator found although the preconditions hold",
    ))
}

fn place(
    i: usize,
    sum: i64,
    h: &mut [i64],
    lo: &[i64],
    hi: &[i64],
    g2: &SetFunctionTable,
    target: i64,
) -> bool {
    let m = h.len();
    if i == m {
        return sum == target;
    }
    let rest_lo: i64 = lo[i + 1..].iter().sum();
    let rest_hi: i64 = hi[i + 1..].iter().sum();
    for value in lo[i]..=hi[i] {
        let total_lo = sum + value + rest_lo;
        let total_hi = sum + value + rest_hi;
        if total_lo > target {
            break;
        }
        if total_hi < target {
            continue;
        }
        h[i] = value;
        let bit = 1usize << i;
        let ok = (0..bit).all(|lower| {
            let x = lower | bit;
            bits(x).map(|e| h[e]).sum::<i64>() >= g2.get(x)
        });
        if ok && place(i + 1, sum + value, h, lo, hi, g2, target) {
            return true;
        }
    }
    false
}

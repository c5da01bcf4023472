//! Complete bipartite graphs: closed-form decisions with constructive
//! count tables.

use crate::error::{Error, Result};
use crate::model::{verify, Answer, Instance, Matching, Measure};

/// `rows[v][c]`: number of color-`c` left vertices assigned to right vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub rows: Vec<Vec<usize>>,
}

/// Color ids by count, largest first, ties by id.
fn sorted_order(counts: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

/// Table over sorted color positions; converts back to color ids.
struct Work {
    rows: Vec<Vec<usize>>,
}

impl Work {
    fn new(k: usize, colors: usize) -> Self {
        Work {
            rows: vec![vec![0; colors]; k],
        }
    }

    fn total(&self, v: usize) -> usize {
        self.rows[v].iter().sum()
    }

    fn present(&self, v: usize) -> Vec<usize> {
        (0..self.rows[v].len())
            .filter(|&i| self.rows[v][i] > 0)
            .collect()
    }

    fn first_empty(&self) -> Option<usize> {
        (0..self.rows.len()).find(|&v| self.total(v) == 0)
    }

    fn shift(&mut self, from: usize, to: usize, colors: &[usize]) {
        for &c in colors {
            self.rows[from][c] -= 1;
            self.rows[to][c] += 1;
        }
    }

    fn into_table(self, order: &[usize]) -> CountTable {
        let rows = self
            .rows
            .into_iter()
            .map(|row| {
                let mut out = vec![0; order.len()];
                for (i, x) in row.into_iter().enumerate() {
                    out[order[i]] = x;
                }
                out
            })
            .collect();
        CountTable { rows }
    }
}

/// MoV decision and witness for complete bipartite graphs.
pub fn solve_complete_mov(
    counts: &[usize],
    k: usize,
    ell: usize,
    nonempty: bool,
) -> Result<Option<CountTable>> {
    let n: usize = counts.iter().sum();
    let order = sorted_order(counts);
    let nc = counts.len();
    let cnt: Vec<usize> = order.iter().map(|&c| counts[c]).collect();
    let get = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0);
    if k == 0 {
        return Ok((n == 0).then(|| CountTable { rows: Vec::new() }));
    }
    let others: usize = (1..=k).map(|i| get(&cnt, i)).sum();
    if get(&cnt, 0) > ell * k + others {
        return Ok(None);
    }
    if nonempty && !((ell > 0 && n >= k) || (ell == 0 && n >= 2 * k)) {
        return Ok(None);
    }
    let mut rem = cnt.clone();
    let mut w = Work::new(k, nc);
    let mut i = 0;
    while i < k && get(&rem, 0) > 0 && get(&rem, 0) >= get(&rem, i + 1) + ell {
        let second = get(&rem, i + 1);
        w.rows[i][0] += second + ell;
        rem[0] -= second + ell;
        if second > 0 {
            w.rows[i][i + 1] += second;
            rem[i + 1] -= second;
        }
        i += 1;
    }
    if get(&rem, 0) > 0 {
        if i >= k {
            return Err(Error::internal(
                "complete mov construction ran out of right vertices",
            ));
        }
        let t = get(&rem, i + 1).min(rem[0]);
        if t > 0 {
            w.rows[i][i + 1] += t;
            rem[i + 1] -= t;
        }
        w.rows[i][0] += rem[0];
        rem[0] = 0;
    }
    for (c, r) in rem.iter().enumerate() {
        w.rows[0][c] += r;
    }
    if nonempty {
        if ell > 0 {
            spread_positive(&mut w)?;
        } else {
            spread_zero(&mut w)?;
        }
    }
    Ok(Some(w.into_table(&order)))
}

fn top_color(row: &[usize]) -> usize {
    let mut best = 0;
    for (c, &x) in row.iter().enumerate() {
        if x > row[best] {
            best = c;
        }
    }
    best
}

fn spread_positive(w: &mut Work) -> Result<()> {
    while let Some(j) = w.first_empty() {
        let i = (0..j)
            .find(|&i| w.total(i) >= 2)
            .ok_or_else(|| Error::internal("no right vertex can spare a left vertex"))?;
        let c = top_color(&w.rows[i]);
        w.shift(i, j, &[c]);
    }
    Ok(())
}

fn spread_zero(w: &mut Work) -> Result<()> {
    let k = w.rows.len();
    while let Some(j) = w.first_empty() {
        let Some(i) = (1..k).find(|&i| w.total(i) > 2) else {
            break;
        };
        let pair = w.present(i);
        w.shift(i, j, &pair[..2]);
    }
    while let Some(j) = w.first_empty() {
        let present = w.present(0);
        if present.len() < 4 {
            break;
        }
        let extra: Vec<usize> = present.into_iter().filter(|&c| c >= 2).take(2).collect();
        w.shift(0, j, &extra);
    }
    while let Some(j) = w.first_empty() {
        let present = w.present(0);
        let row = &w.rows[0];
        if present.len() != 3 || row[0] != row[1] || row[1] <= row[present[2]] {
            break;
        }
        w.shift(0, j, &[0, 1]);
    }
    if w.first_empty().is_none() {
        return Ok(());
    }
    let present = w.present(0);
    if present == [0, 1] {
        while let Some(j) = w.first_empty() {
            if w.total(0) <= 2 {
                return Err(Error::internal(
                    "too few left vertices to fill every right vertex",
                ));
            }
            w.shift(0, j, &[0, 1]);
        }
        return Ok(());
    }
    if present.len() != 3 {
        return Err(Error::internal(
            "unexpected color profile during rebalancing",
        ));
    }
    let alpha = w.rows[0][0];
    let empties: Vec<usize> = (0..k).filter(|&v| w.total(v) == 0).collect();
    let parts = kappa_partition(alpha, empties.len() + 1)
        .ok_or_else(|| Error::internal("no partition into enough zero-fair sets"))?;
    let nc = w.rows[0].len();
    let mut targets = vec![0];
    targets.extend(empties);
    for (part, &v) in parts.iter().zip(&targets) {
        let mut row = vec![0; nc];
        for &(slot, _) in part {
            row[present[slot]] += 1;
        }
        w.rows[v] = row;
    }
    Ok(())
}

/// Splits three color layers of `alpha` vertices each, given as
/// `(color slot, index)`, into `kappa` non-empty sets with margin of
/// victory zero. `None` unless `1 <= kappa <= 3 * alpha / 2`.
pub fn kappa_partition(alpha: usize, kappa: usize) -> Option<Vec<Vec<(usize, usize)>>> {
    if kappa == 0 || kappa > 3 * alpha / 2 {
        return None;
    }
    if kappa <= alpha {
        let mut parts: Vec<Vec<(usize, usize)>> = (0..kappa - 1)
            .map(|j| (0..3).map(|s| (s, j)).collect())
            .collect();
        parts.push(
            (kappa - 1..alpha)
                .flat_map(|j| (0..3).map(move |s| (s, j)))
                .collect(),
        );
        return Some(parts);
    }
    let rotated = |j: usize| {
        vec![
            vec![(0, j), (1, j + 1)],
            vec![(1, j), (2, j + 1)],
            vec![(2, j), (0, j + 1)],
        ]
    };
    if alpha == 2 {
        return Some(rotated(0));
    }
    if alpha % 2 == 1 {
        let mut parts = kappa_partition(alpha - 1, kappa - 1)?;
        parts.push((0..3).map(|s| (s, alpha - 1)).collect());
        Some(parts)
    } else {
        let mut parts = kappa_partition(alpha - 2, kappa - 3)?;
        parts.extend(rotated(alpha - 2));
        Some(parts)
    }
}

/// Max-Min decision and round-robin witness for complete bipartite graphs.
pub fn solve_complete_maxmin(
    counts: &[usize],
    k: usize,
    ell: usize,
    nonempty: bool,
) -> Result<Option<CountTable>> {
    let n: usize = counts.iter().sum();
    if k == 0 {
        return Ok((n == 0).then(|| CountTable { rows: Vec::new() }));
    }
    let order = sorted_order(counts);
    let top = counts[order[0]];
    let bottom = if counts.len() < 2 {
        0
    } else {
        counts[*order.last().unwrap()]
    };
    if top > ell * k + bottom {
        return Ok(None);
    }
    if nonempty && !((ell > 0 && n >= k) || (ell == 0 && top >= k)) {
        return Ok(None);
    }
    let mut rows = vec![vec![0; counts.len()]; k];
    if !nonempty || top >= k {
        for (c, &x) in counts.iter().enumerate() {
            for t in 0..x {
                rows[t % k][c] += 1;
            }
        }
    } else {
        let mut t = 0;
        for &c in &order {
            for _ in 0..counts[c] {
                rows[t % k][c] += 1;
                t += 1;
            }
        }
    }
    Ok(Some(CountTable { rows }))
}

/// Turns a count table into concrete assignments, taking left vertices of
/// each color in index order.
pub fn realize(instance: &Instance, table: &CountTable) -> Result<Matching> {
    let mut assign = vec![usize::MAX; instance.n()];
    for c in 0..instance.num_colors {
        let pool = instance.color_class(c);
        let mut it = pool.iter();
        for (v, row) in table.rows.iter().enumerate() {
            for _ in 0..row[c] {
                let &u = it
                    .next()
                    .ok_or_else(|| Error::internal("count table exceeds a color class"))?;
                assign[u] = v;
            }
        }
        if it.next().is_some() {
            return Err(Error::internal(
                "count table leaves a color class unassigned",
            ));
        }
    }
    Ok(Matching::new(assign))
}

/// Complete bipartite instances with at most the non-emptiness constraint.
pub fn solve_complete(instance: &Instance) -> Result<Answer> {
    if !instance.is_complete() {
        return Err(Error::input(
            "complete solver needs a complete bipartite graph",
        ));
    }
    if !instance.at_most_nonempty() {
        return Err(Error::input(
            "complete solver supports at most the non-emptiness constraint",
        ));
    }
    let counts = instance.color_counts().0;
    let nonempty = instance.nonempty();
    let table = match instance.measure {
        Measure::Mov => solve_complete_mov(&counts, instance.k, instance.ell, nonempty)?,
        Measure::MaxMin => solve_complete_maxmin(&counts, instance.k, instance.ell, nonempty)?,
    };
    let Some(table) = table else {
        return Ok(Answer::No);
    };
    let matching = realize(instance, &table)?;
    if !verify(instance, &matching)?.is_valid() {
        return Err(Error::internal("complete-graph witness is invalid"));
    }
    Ok(Answer::Yes(matching))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mov(counts: &[usize], k: usize, ell: usize) -> bool {
        solve_complete_mov(counts, k, ell, false).unwrap().is_some()
    }

    fn maxmin(counts: &[usize], k: usize, ell: usize) -> bool {
        solve_complete_maxmin(counts, k, ell, false)
            .unwrap()
            .is_some()
    }

    #[test]
    fn examples() {
        assert!(mov(&[4, 3, 1], 2, 0));
        assert!(!mov(&[5, 3, 1], 2, 0));
        assert!(maxmin(&[4, 1], 3, 1));
        assert!(!maxmin(&[4, 1], 1, 2));
        assert!(solve_complete_mov(&[1, 1], 3, 1, true).unwrap().is_none());
        assert!(solve_complete_maxmin(&[3, 3], 3, 0, true)
            .unwrap()
            .is_some());
    }

    #[test]
    fn kappa_small_cases() {
        assert!(kappa_partition(1, 2).is_none());
        assert_eq!(kappa_partition(2, 3).unwrap().len(), 3);
        assert_eq!(kappa_partition(5, 7).unwrap().len(), 7);
        assert!(kappa_partition(4, 7).is_none());
    }
}

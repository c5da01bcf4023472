//! Benchmark fixtures: seeded instances sized for each solver family.

use fairmatch::gen::{random_3dm, random_instance, reduce_3dm_maxmin33, RandomSpec};
use fairmatch::{Instance, Measure};

/// Random instance with the given shape; degree caps are applied when set.
pub fn random(
    n: usize,
    k: usize,
    num_colors: usize,
    ell: usize,
    measure: Measure,
    max_right_degree: Option<usize>,
    seed: u64,
) -> Instance {
    let mut s = RandomSpec::new(n, k, num_colors, seed);
    s.ell = ell;
    s.measure = measure;
    s.edge_prob = 0.7;
    s.max_right_degree = max_right_degree;
    random_instance(&s).expect("fixture parameters are valid")
}

/// Complete bipartite instance with `colors` classes of `per_color` vertices.
pub fn complete(
    per_color: usize,
    colors: usize,
    k: usize,
    ell: usize,
    measure: Measure,
) -> Instance {
    Instance::complete(&vec![per_color; colors], k, ell, measure)
        .expect("fixture parameters are valid")
}

/// Max-Min instance obtained from a random 3-Dimensional Matching instance.
pub fn three_dm(q: usize, seed: u64) -> Instance {
    let t = random_3dm(q, q + 2, seed).expect("fixture parameters are valid");
    reduce_3dm_maxmin33(&t).expect("reduction accepts valid inputs")
}

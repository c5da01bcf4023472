//! Named instance collections for `bench` and for round-trip tests.

use std::fs;
use std::path::Path;

use fairmatch::gen::{
    random_3dm, random_instance, random_sat4occ, reduce_3dm_maxmin24, reduce_3dm_maxmin33,
    reduce_sat_mov25, RandomSpec,
};
use fairmatch::{Error, Instance, Measure, Result};

/// Names accepted by [`builtin_suite`].
pub const BUILTIN_SUITES: &[&str] = &["smoke", "complete", "lowdeg", "reductions", "scaling"];

fn measure_of(i: u64) -> Measure {
    if i.is_multiple_of(2) {
        Measure::Mov
    } else {
        Measure::MaxMin
    }
}

fn smoke() -> Result<Vec<(String, Instance)>> {
    (0..48u64)
        .map(|i| {
            let mut s = RandomSpec::new(
                4 + (i % 9) as usize,
                1 + (i / 3 % 4) as usize,
                1 + (i % 4) as usize,
                i,
            );
            s.measure = measure_of(i);
            s.ell = (i / 5 % 3) as usize;
            s.size_min = (i / 7 % 2) as usize;
            s.edge_prob = 0.6;
            Ok((format!("smoke-{i:02}"), random_instance(&s)?))
        })
        .collect()
}

fn complete() -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for i in 0..24u64 {
        let colors = 1 + (i % 5) as usize;
        let counts: Vec<usize> = (0..colors)
            .map(|c| 1 + ((i * 7 + 3 * c as u64) % 9) as usize)
            .collect();
        let k = 1 + (i / 2 % 5) as usize;
        let inst = Instance::complete(&counts, k, (i / 3 % 3) as usize, measure_of(i))?
            .with_size((i / 4 % 2) as usize, None)?;
        out.push((format!("complete-{i:02}"), inst));
    }
    Ok(out)
}

fn lowdeg() -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for i in 0..32u64 {
        let mut s = RandomSpec::new(8 + (i % 17) as usize, 3 + (i % 6) as usize, 3, i);
        s.measure = measure_of(i);
        s.ell = 1 + (i / 2 % 2) as usize;
        s.edge_prob = 0.7;
        s.size_min = (i / 3 % 2) as usize;
        if s.measure == Measure::Mov {
            s.max_right_degree = Some(4);
        } else {
            s.max_left_degree = Some(2);
            s.max_right_degree = Some(3);
        }
        out.push((format!("lowdeg-{i:02}"), random_instance(&s)?));
    }
    Ok(out)
}

fn reductions() -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for i in 0..8u64 {
        let q = 2 + (i % 2) as usize;
        let t = random_3dm(q, q + 2, i)?;
        out.push((format!("3dm33-{i}"), reduce_3dm_maxmin33(&t)?));
        out.push((format!("3dm24-{i}"), reduce_3dm_maxmin24(&t)?));
        out.push((
            format!("sat-{i}"),
            reduce_sat_mov25(&random_sat4occ(3, i)?)?,
        ));
    }
    Ok(out)
}

fn scaling() -> Result<Vec<(String, Instance)>> {
    let mut out = Vec::new();
    for (i, n) in [100usize, 200, 400, 800].into_iter().enumerate() {
        for measure in [Measure::Mov, Measure::MaxMin] {
            let mut s = RandomSpec::new(n, 3, 10, i as u64);
            s.measure = measure;
            s.ell = n / 30;
            s.edge_prob = 0.8;
            out.push((format!("scaling-{measure}-{n}"), random_instance(&s)?));
        }
    }
    Ok(out)
}

/// A generated suite, or `None` for an unknown name.
pub fn builtin_suite(name: &str) -> Option<Result<Vec<(String, Instance)>>> {
    Some(match name {
        "smoke" => smoke(),
        "complete" => complete(),
        "lowdeg" => lowdeg(),
        "reductions" => reductions(),
        "scaling" => scaling(),
        _ => return None,
    })
}

/// Loads a builtin suite by name, or every `*.json` instance of a directory
/// in file-name order.
pub fn load_suite(spec: &str) -> Result<Vec<(String, Instance)>> {
    if let Some(suite) = builtin_suite(spec) {
        return suite;
    }
    let dir = Path::new(spec);
    if !dir.is_dir() {
        return Err(Error::Input(format!(
            "unknown suite {spec:?}; expected a directory or one of {}",
            BUILTIN_SUITES.join(", ")
        )));
    }
    let read_err = |e: std::io::Error| Error::Input(format!("{spec}: {e}"));
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(read_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).map_err(read_err)?;
            let name = p.file_stem().unwrap_or_default().to_string_lossy().into();
            Ok((name, Instance::from_json(&text)?))
        })
        .collect()
}

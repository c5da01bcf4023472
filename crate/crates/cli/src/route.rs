//! Solver selection and execution.

use std::fmt;

use clap::ValueEnum;
use fairmatch::fpt::{
    solve_kc, solve_maxmin_k, solve_maxmin_k_nonempty, solve_mov_k, solve_targeted_mov, FptConfig,
    MovOutcome, TargetSpec,
};
use fairmatch::oracle::{
    brute_force_with_budget, cover_search_with_budget, subset_dp, SUBSET_DP_MAX_N,
};
use fairmatch::poly::{
    solve_complete, solve_direct, solve_maxmin_lowdeg, solve_mov_deg4, solve_two_colors,
};
use fairmatch::{verify, Answer, Error, Instance, Matching, Measure, Result};

/// Largest `k` routed to the parameterized Max-Min solvers.
pub const MAXMIN_K_LIMIT: usize = 8;
/// Largest `k` routed to the randomized MoV solver.
pub const MOV_K_LIMIT: usize = 3;
/// Largest `k` routed to the `k + |C|` solver.
pub const KC_LIMIT: usize = 12;

/// Solver identifiers accepted by `--algo`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algo {
    Auto,
    Direct,
    Kc,
    MaxminK,
    MaxminKNonempty,
    MovK,
    TargetedMov,
    TwoColors,
    MovDeg4,
    MaxminLowdeg,
    Complete,
    Oracle,
    Dp,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Auto => "auto",
            Algo::Direct => "direct",
            Algo::Kc => "kc",
            Algo::MaxminK => "maxmin-k",
            Algo::MaxminKNonempty => "maxmin-k-nonempty",
            Algo::MovK => "mov-k",
            Algo::TargetedMov => "targeted-mov",
            Algo::TwoColors => "two-colors",
            Algo::MovDeg4 => "mov-deg4",
            Algo::MaxminLowdeg => "maxmin-lowdeg",
            Algo::Complete => "complete",
            Algo::Oracle => "oracle",
            Algo::Dp => "dp",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A solver choice together with the structural feature that triggered it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteDecision {
    pub algo: Algo,
    pub reason: String,
}

impl RouteDecision {
    fn new(algo: Algo, reason: impl Into<String>) -> Self {
        RouteDecision {
            algo,
            reason: reason.into(),
        }
    }
}

fn lowdeg(instance: &Instance) -> bool {
    let dv = instance.max_right_degree();
    dv <= 2 || (instance.max_left_degree() <= 2 && dv <= 3)
}

/// Every applicable solver for `instance`, most specific first. The last
/// entry is always an exact general solver.
pub fn plan(instance: &Instance) -> Vec<RouteDecision> {
    let mut out = Vec::new();
    let k = instance.k;
    let limited = instance.at_most_nonempty();
    if instance.is_complete() && limited {
        out.push(RouteDecision::new(
            Algo::Complete,
            "complete bipartite graph",
        ));
    }
    if instance.num_colors == 2 && instance.effective_size_max().is_none() {
        out.push(RouteDecision::new(Algo::TwoColors, "exactly two colors"));
    }
    match instance.measure {
        Measure::Mov if limited && instance.max_right_degree() <= 4 => {
            out.push(RouteDecision::new(
                Algo::MovDeg4,
                format!("mov with right degree {}", instance.max_right_degree()),
            ));
        }
        Measure::MaxMin if limited && lowdeg(instance) => {
            out.push(RouteDecision::new(
                Algo::MaxminLowdeg,
                format!(
                    "maxmin with degrees left {} right {}",
                    instance.max_left_degree(),
                    instance.max_right_degree()
                ),
            ));
        }
        _ => {}
    }
    if instance.max_left_degree() <= 1 {
        out.push(RouteDecision::new(Algo::Direct, "left degree at most 1"));
    }
    match instance.measure {
        Measure::MaxMin if k <= MAXMIN_K_LIMIT => {
            if instance.size_min == 0 && instance.effective_size_max().is_none() {
                out.push(RouteDecision::new(
                    Algo::MaxminK,
                    format!("maxmin with k = {k}"),
                ));
            } else if instance.size_min == 1
                && instance.effective_size_max().is_none()
                && (instance.ell == 0 || k <= FptConfig::default().nonempty_k_cap)
            {
                out.push(RouteDecision::new(
                    Algo::MaxminKNonempty,
                    format!("non-empty maxmin with k = {k}"),
                ));
            }
        }
        Measure::Mov if limited && k <= MOV_K_LIMIT => {
            out.push(RouteDecision::new(Algo::MovK, format!("mov with k = {k}")));
        }
        _ => {}
    }
    if k <= KC_LIMIT {
        out.push(RouteDecision::new(
            Algo::Kc,
            format!("k = {k} and {} colors", instance.num_colors),
        ));
    }
    if instance.n() <= SUBSET_DP_MAX_N {
        out.push(RouteDecision::new(
            Algo::Dp,
            format!("{} left vertices", instance.n()),
        ));
    }
    out.push(RouteDecision::new(Algo::Oracle, "no structural shortcut"));
    out
}

/// The first solver [`plan`] would try.
pub fn route(instance: &Instance) -> RouteDecision {
    plan(instance).swap_remove(0)
}

/// Result of running one solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes(Matching),
    No,
    /// The solver stopped without an exact answer.
    Unknown(String),
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Yes(_) => "YES",
            Outcome::No => "NO",
            Outcome::Unknown(_) => "UNKNOWN",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Outcome::Yes(_) => 0,
            Outcome::No => 1,
            Outcome::Unknown(_) => 3,
        }
    }
}

impl From<Answer> for Outcome {
    fn from(a: Answer) -> Self {
        match a {
            Answer::Yes(m) => Outcome::Yes(m),
            Answer::No => Outcome::No,
        }
    }
}

/// Options shared by every solver run.
#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub fpt: FptConfig,
    /// Node budget for the search oracles; `None` keeps their defaults.
    pub oracle_budget: Option<u64>,
    pub targets: Option<TargetSpec>,
}

fn oracle(instance: &Instance, budget: Option<u64>) -> Result<Answer> {
    let budget_or = |d: u64| budget.unwrap_or(d);
    match cover_search_with_budget(instance, budget_or(fairmatch::oracle::COVER_NODE_BUDGET)) {
        Err(e) if e.is_budget() => {
            brute_force_with_budget(instance, budget_or(fairmatch::oracle::BRUTE_FORCE_BUDGET))
        }
        other => other,
    }
}

/// Runs one specific solver. Budget errors become [`Outcome::Unknown`];
/// every YES is re-verified before it is returned.
pub fn run_algo(instance: &Instance, algo: Algo, opts: &SolveOptions) -> Result<Outcome> {
    let cfg = &opts.fpt;
    let answer = match algo {
        Algo::Auto => return run_auto(instance, opts).map(|(o, _)| o),
        Algo::Direct => solve_direct(instance),
        Algo::Kc => solve_kc(instance, cfg),
        Algo::MaxminK => solve_maxmin_k(instance, cfg),
        Algo::MaxminKNonempty => solve_maxmin_k_nonempty(instance, cfg),
        Algo::MovK => match solve_mov_k(instance, cfg) {
            Ok(MovOutcome::Yes(m)) => Ok(Answer::Yes(m)),
            Ok(MovOutcome::NotFound) => {
                return Ok(Outcome::Unknown(
                    "randomized rounds exhausted without a matching".into(),
                ))
            }
            Err(e) => Err(e),
        },
        Algo::TargetedMov => {
            let Some(targets) = &opts.targets else {
                return Err(Error::Input("targeted-mov needs --targets".into()));
            };
            solve_targeted_mov(instance, targets, instance.nonempty(), cfg)
        }
        Algo::TwoColors => solve_two_colors(instance),
        Algo::MovDeg4 => solve_mov_deg4(instance, &cfg.ilp),
        Algo::MaxminLowdeg => solve_maxmin_lowdeg(instance, &cfg.ilp),
        Algo::Complete => solve_complete(instance),
        Algo::Oracle => oracle(instance, opts.oracle_budget),
        Algo::Dp => subset_dp(instance),
    };
    match answer {
        Ok(Answer::Yes(m)) => {
            let verdict = verify(instance, &m)?;
            if let Some(v) = verdict.violations.first() {
                return Err(Error::Internal(format!(
                    "{algo} produced an invalid matching: {v}"
                )));
            }
            Ok(Outcome::Yes(m))
        }
        Ok(Answer::No) => Ok(Outcome::No),
        Err(e) if e.is_budget() => Ok(Outcome::Unknown(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Tries the solvers of [`plan`] in order until one gives an exact answer.
/// Returns the outcome and the decision that produced it.
pub fn run_auto(instance: &Instance, opts: &SolveOptions) -> Result<(Outcome, RouteDecision)> {
    let mut last = None;
    for decision in plan(instance) {
        match run_algo(instance, decision.algo, opts)? {
            Outcome::Unknown(why) => last = Some((Outcome::Unknown(why), decision)),
            exact => return Ok((exact, decision)),
        }
    }
    Ok(last.expect("plan is never empty"))
}

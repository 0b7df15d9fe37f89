use std::path::PathBuf;
use std::time::Duration;

use super::{
    rho, sample_restricted_sizes, Goal, SampleReport, SearchConfig, SearchWitness, Strategy,
};
use crate::error::Result;
use crate::group::Modulus;
use crate::setops::{double_restricted, PointSet};
use crate::structures::{
    build_extremal, matches_coset_plus_point_shape, matches_two_coset_shape, ExtremalTemplate,
};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Overrides the per-p default (orbit for p = 5, bnb for p = 7).
    pub strategy: Option<Strategy>,
    pub time_budget: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Sampling mode, used for p >= 11.
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            strategy: None,
            time_budget: None,
            checkpoint: None,
            threads: None,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

impl VerifyOptions {
    fn config(&self, p: u32, m: usize, default: Strategy, goal: Goal) -> SearchConfig {
        SearchConfig {
            time_budget: self.time_budget,
            checkpoint: self.checkpoint.clone(),
            threads: self.threads,
            ..SearchConfig::new(p, 2, m, self.strategy.unwrap_or(default)).goal(goal)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Attained and no smaller value exists.
    Pass,
    /// Attained, and nothing smaller was seen in the part examined.
    Partial,
    /// A set below 4p exists, or the construction misses 4p.
    Fail,
}

#[derive(Clone, Debug)]
pub enum LowerBoundEvidence {
    Search(SearchWitness),
    Sampled(SampleReport),
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub p: u32,
    pub attainment: PointSet,
    pub attainment_value: u32,
    pub lower: LowerBoundEvidence,
    /// Whether the lower-bound half covered every (2p+1)-subset.
    pub complete: bool,
    pub coverage: f64,
    /// 4p when proved.
    pub rho: Option<u32>,
    pub verdict: Verdict,
}

/// Checks min |2^A| = 4p over (2p+1)-subsets of Z_p^2: attainment by the
/// two-cosets-plus-point construction, and the lower bound by a search
/// targeting 4p (p = 5, 7) or by random sampling (larger p).
pub fn verify_two_p_plus_one(p: u32, opts: &VerifyOptions) -> Result<VerifyReport> {
    let modulus = Modulus::new(p, 2)?;
    modulus.require_theorem_scale()?;
    let four_p = 4 * p;
    let m = 2 * p as usize + 1;
    let attainment = build_extremal(&ExtremalTemplate::standard_two_cosets(modulus)?)?;
    let attainment_value = double_restricted(&attainment).len() as u32;
    let attained = attainment_value == four_p;

    let goal = Goal::Minimize {
        target: Some(four_p),
    };
    let (lower, complete, coverage, below) = match p {
        5 | 7 => {
            let default = if p == 5 {
                Strategy::Orbit
            } else {
                Strategy::BranchAndBound
            };
            let w = rho(&opts.config(p, m, default, goal))?;
            let below = w.best_value.is_some();
            let (complete, coverage) = (w.complete, w.coverage());
            (LowerBoundEvidence::Search(w), complete, coverage, below)
        }
        _ => {
            let s = sample_restricted_sizes(modulus, m, opts.samples, opts.seed, four_p)?;
            let below = s.below_threshold > 0;
            (LowerBoundEvidence::Sampled(s), false, 0.0, below)
        }
    };
    let verdict = if !attained || below {
        Verdict::Fail
    } else if complete {
        Verdict::Pass
    } else {
        Verdict::Partial
    };
    Ok(VerifyReport {
        p,
        attainment,
        attainment_value,
        lower,
        complete,
        coverage,
        rho: (verdict == Verdict::Pass).then_some(four_p),
        verdict,
    })
}

#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub set: PointSet,
    pub value: u32,
    /// Two cosets of one order-p subgroup plus a point, labels in progression.
    pub two_coset_shape: bool,
    /// One coset plus a point.
    pub coset_plus_point_shape: bool,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub p: u32,
    pub m: usize,
    pub value: u32,
    pub entries: Vec<CensusEntry>,
    pub search: SearchWitness,
}

/// Canonical forms of all m-subsets of Z_p^2 with |2^A| = value, each
/// annotated with the extremal shapes it matches.
pub fn census_minimizers(
    p: u32,
    m: usize,
    value: u32,
    opts: &VerifyOptions,
) -> Result<CensusReport> {
    let w = rho(&opts.config(p, m, Strategy::Orbit, Goal::Exact(value)))?;
    let entries = w
        .witnesses
        .iter()
        .map(|set| {
            Ok(CensusEntry {
                set: set.clone(),
                value,
                two_coset_shape: matches_two_coset_shape(set)?.is_some(),
                coset_plus_point_shape: matches_coset_plus_point_shape(set)?.is_some(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusReport {
        p,
        m,
        value,
        entries,
        search: w,
    })
}

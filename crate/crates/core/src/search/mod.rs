//! Exact computation of ρ(Z_p^r, m) = min |2^A| over m-subsets A.
//!
//! Three strategies share one engine:
//! - `Exhaustive` visits every m-subset.
//! - `Orbit` (rank 2) visits only sets in a normal form that meets every
//!   affine orbit, without any pruning.
//! - `BranchAndBound` (rank 2) adds pruning by |2^P| and by the best profile
//!   bound any completion of P could reach, maximized over all p + 1 line
//!   directions.
//!
//! Work is split into units (fixed-length prefixes) that run in parallel.
//! Results are merged in unit order, so the reported value and witness list
//! do not depend on the thread count.

mod checkpoint;
mod engine;
mod sampling;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use checkpoint::config_hash;
use checkpoint::Snapshot;
use engine::{Control, Counters, Tables, UnitResult, Worker};
pub use sampling::{sample_restricted_sizes, SampleReport};
pub use verify::{
    census_minimizers, verify_two_p_plus_one, CensusEntry, CensusReport, LowerBoundEvidence,
    Verdict, VerifyOptions, VerifyReport,
};

use crate::error::{Error, Result};
use crate::group::Modulus;
use crate::profiles::CompletionBound;
use crate::setops::{canonical_form, double_restricted, PointSet};

/// Leaf-count estimate above which unpruned strategies refuse to run
/// without a time budget.
pub const INFEASIBLE_LEAVES: f64 = 2e9;

/// Stored raw witnesses across all units before canonicalization.
const WITNESS_LIMIT: usize = 1 << 17;

const SAVE_INTERVAL: Duration = Duration::from_secs(30);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Exhaustive,
    Orbit,
    BranchAndBound,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Orbit => "orbit",
            Strategy::BranchAndBound => "bnb",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "orbit" => Ok(Strategy::Orbit),
            "bnb" => Ok(Strategy::BranchAndBound),
            _ => Err(Error::usage(format!(
                "unknown strategy `{s}` (exhaustive, orbit, bnb)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Find the minimum. With a target only values below it are of
    /// interest, which lets the search prune much harder.
    Minimize { target: Option<u32> },
    /// Find every set with exactly this value.
    Exact(u32),
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Minimize { target: None } => f.write_str("min"),
            Goal::Minimize { target: Some(t) } => write!(f, "below:{t}"),
            Goal::Exact(v) => write!(f, "exact:{v}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub p: u32,
    pub r: u32,
    pub m: usize,
    pub strategy: Strategy,
    pub goal: Goal,
    pub time_budget: Option<Duration>,
    pub checkpoint: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub threads: Option<usize>,
    /// Force-complete pruned prefixes with at most this many points missing
    /// and count any set that beats the cutoff used to prune them.
    pub audit_depth: Option<usize>,
    /// Stop after this many units finish, leaving the rest pending.
    pub unit_limit: Option<usize>,
}

impl SearchConfig {
    pub fn new(p: u32, r: u32, m: usize, strategy: Strategy) -> Self {
        SearchConfig {
            p,
            r,
            m,
            strategy,
            goal: Goal::Minimize { target: None },
            time_budget: None,
            checkpoint: None,
            threads: None,
            audit_depth: None,
            unit_limit: None,
        }
    }

    pub fn goal(mut self, goal: Goal) -> Self {
        self.goal = goal;
        self
    }

    pub fn threads(mut self, n: usize) -> Self {
        self.threads = Some(n);
        self
    }

    /// The text hashed into checkpoints. Threads and budgets are left out so
    /// a run may resume with different ones.
    pub fn canonical_text(&self) -> String {
        format!(
            "p={} r={} m={} strategy={} goal={}",
            self.p, self.r, self.m, self.strategy, self.goal
        )
    }

    pub fn modulus(&self) -> Result<Modulus> {
        Modulus::new(self.p, self.r)
    }

    fn validate(&self) -> Result<Modulus> {
        let modulus = self.modulus()?;
        if self.m > modulus.order() {
            return Err(Error::usage(format!(
                "m = {} exceeds |G| = {}",
                self.m,
                modulus.order()
            )));
        }
        if modulus.order() > 128 {
            return Err(Error::unsupported(
                "search handles groups of order at most 128",
            ));
        }
        if self.strategy != Strategy::Exhaustive && self.r != 2 {
            return Err(Error::unsupported(format!(
                "strategy {} needs rank 2",
                self.strategy
            )));
        }
        Ok(modulus)
    }

    /// Leaves an unpruned run would visit.
    pub fn estimate_leaves(&self) -> f64 {
        let n = self.p.pow(self.r) as u64;
        let m = self.m as u64;
        match self.strategy {
            Strategy::Exhaustive => binomial(n, m),
            _ if m < 2 => binomial(n, m),
            _ => binomial(n - 2, m - 2),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return f64::INFINITY,
        }
    }
    acc as f64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub audited: u64,
    pub violations: u64,
}

#[derive(Clone, Debug)]
pub struct SearchWitness {
    pub modulus: Modulus,
    pub m: usize,
    pub strategy: Strategy,
    pub goal: Goal,
    /// Least |2^A| among recorded sets: the minimum, the least value below
    /// the target, or the exact value in census mode. `None` if no set was
    /// recorded.
    pub best_value: Option<u32>,
    /// Canonical forms attaining `best_value`, sorted.
    pub witnesses: Vec<PointSet>,
    pub witnesses_truncated: bool,
    pub complete: bool,
    pub nodes_visited: u64,
    pub pruned_count: u64,
    pub units_done: usize,
    pub units_total: usize,
    pub audit: Option<AuditReport>,
}

impl SearchWitness {
    pub fn coverage(&self) -> f64 {
        if self.units_total == 0 {
            1.0
        } else {
            self.units_done as f64 / self.units_total as f64
        }
    }

    /// ρ itself, when the run proves it.
    pub fn rho(&self) -> Option<u32> {
        match self.goal {
            Goal::Minimize { target: None } if self.complete => self.best_value,
            _ => None,
        }
    }

    /// Header line then one set per line as sorted flat indices.
    pub fn write_witnesses(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let value = self
            .best_value
            .map_or("none".to_string(), |v| v.to_string());
        let mut text = format!(
            "# p={} r={} m={} value={} complete={}\n",
            self.modulus.p(),
            self.modulus.r(),
            self.m,
            value,
            self.complete
        );
        for w in &self.witnesses {
            let idx: Vec<String> = w.indices().map(|i| i.to_string()).collect();
            text.push_str(&idx.join(" "));
            text.push('\n');
        }
        f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

fn build_completion_tables(t: &Tables, m: usize) -> Result<Vec<Option<CompletionBound>>> {
    if !t.bnb {
        return Ok(Vec::new());
    }
    let p = t.p;
    (0..=p)
        .into_par_iter()
        .map(|cap| {
            if cap == 0 {
                Ok(None)
            } else {
                CompletionBound::new(p, m as u32, cap).map(Some)
            }
        })
        .collect()
}

/// Runs a search. Truncation by budget or unit limit is reported through
/// `complete`, not as an error.
pub fn rho(config: &SearchConfig) -> Result<SearchWitness> {
    let modulus = config.validate()?;
    let estimate = config.estimate_leaves();
    if config.strategy != Strategy::BranchAndBound
        && estimate > INFEASIBLE_LEAVES
        && config.time_budget.is_none()
        && config.unit_limit.is_none()
    {
        return Err(Error::Infeasible { estimate });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| run(config, modulus))
}

fn run(config: &SearchConfig, modulus: Modulus) -> Result<SearchWitness> {
    let m = config.m;
    let t = Tables::new(modulus, m, config.strategy)?;
    let bounds = build_completion_tables(&t, m)?;
    let hash = config_hash(&config.canonical_text());

    let ctl = Control {
        best: AtomicU32::new(u32::MAX),
        stop: AtomicBool::new(false),
        deadline: config.time_budget.map(|b| Instant::now() + b),
    };
    let depth = m.min(t.forced().len() + 2);
    let units = Worker::new(&t, &ctl, config.goal, &bounds, None).prefixes(depth);

    let mut base = Counters::default();
    let mut done: BTreeMap<usize, UnitResult> = BTreeMap::new();
    if let Some(path) = &config.checkpoint {
        if let Some(snap) = Snapshot::load(path)? {
            if snap.hash != hash {
                return Err(Error::Checkpoint(format!(
                    "{} belongs to a different configuration",
                    path.display()
                )));
            }
            if snap.units_total as usize != units.len() {
                return Err(Error::Checkpoint(
                    "unit count does not match this build".into(),
                ));
            }
            ctl.best.store(snap.best, Ordering::Relaxed);
            base.nodes = snap.nodes;
            base.pruned = snap.pruned;
            done = snap.done;
        }
    }
    let pending: Vec<usize> = (0..units.len()).filter(|i| !done.contains_key(i)).collect();

    let shared = Mutex::new((done, Instant::now()));
    let finished = AtomicUsize::new(0);
    let totals = Mutex::new(base);
    let snapshot = |done: &BTreeMap<usize, UnitResult>, counters: Counters| Snapshot {
        hash,
        best: ctl.best.load(Ordering::Relaxed),
        nodes: counters.nodes,
        pruned: counters.pruned,
        units_total: units.len() as u64,
        done: done.clone(),
        pending: (0..units.len())
            .filter(|i| !done.contains_key(i))
            .map(|i| (i, units[i].clone()))
            .collect(),
    };

    pending.par_iter().for_each_init(
        || Worker::new(&t, &ctl, config.goal, &bounds, config.audit_depth),
        |worker, &id| {
            if ctl.stop.load(Ordering::Relaxed) {
                return;
            }
            let before = worker.counters;
            let outcome = worker.run_unit(&units[id]);
            let delta = Counters {
                nodes: worker.counters.nodes - before.nodes,
                pruned: worker.counters.pruned - before.pruned,
                audited: worker.counters.audited - before.audited,
                violations: worker.counters.violations - before.violations,
            };
            let counters = {
                let mut tot = totals.lock().expect("not poisoned");
                tot.nodes += delta.nodes;
                tot.pruned += delta.pruned;
                tot.audited += delta.audited;
                tot.violations += delta.violations;
                *tot
            };
            let Some(result) = outcome else { return };
            let mut guard = shared.lock().expect("not poisoned");
            guard.0.insert(id, result);
            if config
                .unit_limit
                .is_some_and(|l| finished.fetch_add(1, Ordering::Relaxed) + 1 >= l)
            {
                ctl.stop.store(true, Ordering::Relaxed);
            }
            if let Some(path) = &config.checkpoint {
                if guard.1.elapsed() >= SAVE_INTERVAL {
                    // a failed periodic save is retried at the end of the run
                    let _ = snapshot(&guard.0, counters).save(path);
                    guard.1 = Instant::now();
                }
            }
        },
    );

    let (done, _) = shared.into_inner().expect("not poisoned");
    let counters = totals.into_inner().expect("not poisoned");
    if let Some(path) = &config.checkpoint {
        snapshot(&done, counters).save(path)?;
    }
    assemble(config, modulus, &t, units.len(), &done, counters)
}

fn assemble(
    config: &SearchConfig,
    modulus: Modulus,
    t: &Tables,
    units_total: usize,
    done: &BTreeMap<usize, UnitResult>,
    counters: Counters,
) -> Result<SearchWitness> {
    let best = done.values().filter_map(|r| r.min).min();
    let mut truncated = false;
    let mut raw: Vec<u128> = Vec::new();
    for r in done.values().filter(|r| r.min.is_some() && r.min == best) {
        truncated |= r.truncated;
        for &h in &r.hits {
            if raw.len() == WITNESS_LIMIT {
                truncated = true;
                break;
            }
            raw.push(h);
        }
    }
    let canon = |mask: u128| -> Result<PointSet> {
        let set = PointSet::from_mask(modulus, mask);
        if modulus.r() <= 2 {
            canonical_form(&set)
        } else {
            Ok(set)
        }
    };
    let mut witnesses: Vec<PointSet> = raw.into_par_iter().map(canon).collect::<Result<_>>()?;
    witnesses.sort_by(|a, b| a.lex_cmp(b));
    witnesses.dedup();
    if let Some(v) = best {
        for w in &witnesses {
            if double_restricted(w).len() as u32 != v
                || t.restricted_sums(w.to_mask().expect("small")).count_ones() != v
            {
                return Err(Error::Internal(format!(
                    "witness {w:?} does not have value {v}"
                )));
            }
        }
    }
    Ok(SearchWitness {
        modulus,
        m: config.m,
        strategy: config.strategy,
        goal: config.goal,
        best_value: best,
        witnesses,
        witnesses_truncated: truncated,
        complete: done.len() == units_total,
        nodes_visited: counters.nodes,
        pruned_count: counters.pruned,
        units_done: done.len(),
        units_total,
        audit: config.audit_depth.map(|_| AuditReport {
            audited: counters.audited,
            violations: counters.violations,
        }),
    })
}

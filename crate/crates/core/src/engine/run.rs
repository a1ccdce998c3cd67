use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use super::eliminate::{eliminate, Elimination};
use super::roots::{irrational_degree, rational_roots};
use super::state::{BranchState, Limits, Status, System};
use super::trace::{Event, Inputs, Output, Rule, Trace};
use crate::arith::{format_rational, int, prime_power, ArithError, Rational, Site};

pub const WITNESS_COUNT_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Logged deduction steps across all branches.
    pub max_steps: usize,
    /// Branches created by splits.
    pub max_branches: usize,
    /// Candidate assignments tried by the witness search.
    pub max_witness_attempts: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 1_000_000,
            max_branches: 256,
            max_witness_attempts: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub budget: Budget,
    /// Equations are generated up to `horizon_factor * N`.
    pub horizon_factor: u64,
    pub representation_cap: usize,
    pub limits: Limits,
    /// Worker threads for exploring sibling branches; 1 runs inline.
    pub threads: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            budget: Budget::default(),
            horizon_factor: 4,
            representation_cap: super::DEFAULT_REPRESENTATION_CAP,
            limits: Limits::default(),
            threads: 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("table is missing sites {}", fmt_sites(.missing))]
    IncompleteTable { missing: Vec<u64> },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn fmt_sites(sites: &[u64]) -> String {
    let s: Vec<String> = sites.iter().map(u64::to_string).collect();
    s.join(", ")
}

/// A branch that ended with no rule left to apply.
#[derive(Clone, Debug)]
pub struct Survivor {
    pub path: Vec<usize>,
    pub state: BranchState,
    pub notes: Vec<String>,
}

impl Survivor {
    pub fn table(&self) -> BTreeMap<u64, Rational> {
        self.state.pf.known_table()
    }

    pub fn free_sites(&self) -> Vec<Site> {
        self.state.pf.unknown_sites().collect()
    }
}

/// Every branch of a finished search.
#[derive(Clone, Debug)]
pub struct Exploration {
    pub trace: Trace,
    pub survivors: Vec<Survivor>,
    pub contradicted: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// One surviving branch, identity on every `n <= N`.
    Forced {
        table: BTreeMap<u64, Rational>,
    },
    Underdetermined {
        free_sites: Vec<Site>,
        /// Surviving branches, capped at 16.
        witness_count: usize,
        /// Largest `M <= N` with `f(n) = n` for all `n <= M` in every
        /// surviving branch.
        forced_prefix: u64,
        first_free: Option<u64>,
        notes: Vec<String>,
    },
    AllBranchesContradict,
}

impl Outcome {
    pub fn name(&self) -> &'static str {
        match self {
            Outcome::Forced { .. } => "forced",
            Outcome::Underdetermined { .. } => "underdetermined",
            Outcome::AllBranchesContradict => "all-branches-contradict",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub k: usize,
    pub bound: u64,
    pub horizon: u64,
    pub outcome: Outcome,
    pub trace: Trace,
    /// Known values of each surviving branch, keyed by fork path.
    pub survivors: Vec<(Vec<usize>, BTreeMap<u64, Rational>)>,
}

struct Control {
    budget: Budget,
    steps: AtomicUsize,
    branches: AtomicUsize,
    limits: Limits,
    parallel: bool,
}

impl Control {
    fn step(&self) -> bool {
        self.steps.fetch_add(1, Ordering::Relaxed) < self.budget.max_steps
    }

    fn steps_exhausted(&self) -> EngineError {
        EngineError::BudgetExhausted(format!(
            "more than {} deduction steps",
            self.budget.max_steps
        ))
    }
}

#[derive(Default)]
struct Subtree {
    events: Vec<(Vec<usize>, Event)>,
    survivors: Vec<Survivor>,
    contradicted: Vec<Vec<usize>>,
}

impl Subtree {
    fn flush(&mut self, path: &[usize], state: &mut BranchState) {
        self.events
            .extend(state.log.drain(..).map(|e| (path.to_vec(), e)));
    }

    fn append(&mut self, other: Subtree) {
        self.events.extend(other.events);
        self.survivors.extend(other.survivors);
        self.contradicted.extend(other.contradicted);
    }
}

fn validate(k: usize, bound: u64, config: &EngineConfig) -> Result<(), EngineError> {
    let bad = |m: &str| Err(EngineError::InvalidArguments(m.to_string()));
    if k < 2 {
        return bad("k must be at least 2");
    }
    if bound < k as u64 {
        return bad("N must be at least k");
    }
    if config.horizon_factor == 0 {
        return bad("horizon factor must be positive");
    }
    let b = config.budget;
    if b.max_steps == 0 || b.max_branches == 0 || b.max_witness_attempts == 0 {
        return bad("budgets must be positive");
    }
    if config.threads == 0 {
        return bad("threads must be positive");
    }
    Ok(())
}

/// The equation system `run_uniqueness` explores for `(k, N)`.
pub fn uniqueness_system(
    k: usize,
    bound: u64,
    config: &EngineConfig,
) -> Result<System, EngineError> {
    validate(k, bound, config)?;
    let horizon = bound
        .checked_mul(config.horizon_factor)
        .ok_or_else(|| EngineError::InvalidArguments("horizon overflows".into()))?;
    Ok(System::generate(
        k,
        bound,
        horizon,
        config.representation_cap,
        config.limits,
    ))
}

/// Branch-and-prune over the additivity equations for `n <= horizon`, with
/// the verdict taken over `n <= N`.
pub fn run_uniqueness(k: usize, bound: u64, config: &EngineConfig) -> Result<Verdict, EngineError> {
    let system = uniqueness_system(k, bound, config)?;
    let exploration = explore(&system, config)?;
    Ok(verdict(&system, exploration))
}

/// Explores every branch of `system`. Sibling branches run on a pool of
/// `config.threads` workers; results are merged in fork-path order.
pub fn explore(system: &System, config: &EngineConfig) -> Result<Exploration, EngineError> {
    let control = Control {
        budget: config.budget,
        steps: AtomicUsize::new(0),
        branches: AtomicUsize::new(1),
        limits: system.limits,
        parallel: config.threads > 1,
    };
    let mut root = BranchState::new(system);
    root.record(
        Rule::Init,
        Inputs {
            params: system.params(),
            ..Inputs::default()
        },
        Output::System {
            equations: system.equations.len(),
            sites: system.pf.sites().count(),
        },
    );
    let subtree = if control.parallel {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| EngineError::InvalidArguments(e.to_string()))?;
        pool.install(|| branch(root, Vec::new(), &control))?
    } else {
        branch(root, Vec::new(), &control)?
    };
    let mut trace = Trace::default();
    for (path, event) in subtree.events {
        trace.push(&path, event);
    }
    Ok(Exploration {
        trace,
        survivors: subtree.survivors,
        contradicted: subtree.contradicted,
    })
}

fn branch(
    mut state: BranchState,
    path: Vec<usize>,
    control: &Control,
) -> Result<Subtree, EngineError> {
    let mut out = Subtree::default();
    let mut notes = Vec::new();
    loop {
        state
            .propagate(&|| control.step())
            .map_err(|_| control.steps_exhausted())?;
        if state.is_contradiction() {
            out.flush(&path, &mut state);
            out.contradicted.push(path);
            return Ok(out);
        }
        let found = eliminate(&state, control.limits);
        if !control.step() {
            return Err(control.steps_exhausted());
        }
        match found {
            None => {
                state.saturate();
                out.flush(&path, &mut state);
                out.survivors.push(Survivor { path, state, notes });
                return Ok(out);
            }
            Some(Elimination::Inconsistent {
                residue, sources, ..
            }) => {
                state.record(
                    Rule::Contradiction,
                    Inputs {
                        equations: sources.clone(),
                        ..Inputs::default()
                    },
                    Output::Contradiction {
                        residue: format_rational(&residue),
                        eliminated: true,
                    },
                );
                state.status = Status::Contradiction {
                    equation: *sources.last().unwrap(),
                    residue,
                };
                out.flush(&path, &mut state);
                out.contradicted.push(path);
                return Ok(out);
            }
            Some(Elimination::Univariate {
                symbol,
                poly,
                sources,
                derived,
                tier,
                window,
            }) => {
                let site = state.pf.site_of(symbol).value();
                let (_, coefficients) = poly.as_univariate().expect("eliminant is univariate");
                let derived_id = derived.then(|| state.add_derived(poly.clone(), sources.clone()));
                state.record(
                    Rule::Eliminate,
                    Inputs {
                        equations: sources.clone(),
                        sites: vec![site],
                        params: Vec::new(),
                    },
                    Output::Eliminant {
                        site,
                        coefficients: coefficients.iter().map(format_rational).collect(),
                        derived: derived_id,
                        tier: tier.name().to_string(),
                        window,
                    },
                );
                if coefficients.len() == 2 {
                    // solved by the next propagation pass
                    continue;
                }
                let roots = rational_roots(&poly)?;
                let irrational = irrational_degree(&coefficients, &roots);
                if !control.step() {
                    return Err(control.steps_exhausted());
                }
                state.record(
                    Rule::Split,
                    Inputs {
                        equations: vec![derived_id.unwrap_or(sources[0])],
                        sites: vec![site],
                        params: Vec::new(),
                    },
                    Output::Split {
                        site,
                        roots: roots.iter().map(format_rational).collect(),
                        irrational_degree: irrational,
                    },
                );
                if irrational > 0 {
                    notes.push(format!(
                        "f({site}) has {irrational} root(s) outside the rationals; those cases are not explored"
                    ));
                }
                if roots.is_empty() {
                    state.saturate();
                    out.flush(&path, &mut state);
                    out.survivors.push(Survivor { path, state, notes });
                    return Ok(out);
                }
                let created =
                    control.branches.fetch_add(roots.len(), Ordering::Relaxed) + roots.len();
                if created > control.budget.max_branches {
                    return Err(EngineError::BudgetExhausted(format!(
                        "more than {} branches",
                        control.budget.max_branches
                    )));
                }
                out.flush(&path, &mut state);
                let child = |(i, root): (usize, &Rational)| -> Result<Subtree, EngineError> {
                    let mut c = state.clone();
                    let mut child_path = path.clone();
                    child_path.push(i);
                    if !control.step() {
                        return Err(control.steps_exhausted());
                    }
                    c.record(
                        Rule::Branch,
                        Inputs {
                            equations: Vec::new(),
                            sites: vec![site],
                            params: vec![i as u64],
                        },
                        Output::Assign {
                            site,
                            value: format_rational(root),
                        },
                    );
                    c.assign_symbol(symbol, root.clone());
                    let mut sub = branch(c, child_path, control)?;
                    for s in &mut sub.survivors {
                        s.notes.splice(0..0, notes.iter().cloned());
                    }
                    Ok(sub)
                };
                let children: Vec<Result<Subtree, EngineError>> = if control.parallel {
                    roots.par_iter().enumerate().map(child).collect()
                } else {
                    roots.iter().enumerate().map(child).collect()
                };
                for c in children {
                    out.append(c?);
                }
                return Ok(out);
            }
        }
    }
}

/// Classifies an exploration against the identity on `n <= system.bound`.
pub fn verdict(system: &System, exploration: Exploration) -> Verdict {
    let bound = system.bound;
    let survivors = &exploration.survivors;
    let identity_upto = |s: &Survivor, n: u64| s.state.pf.value_at(n) == Some(int(n as i64));
    let mut forced_prefix = 0;
    while forced_prefix < bound
        && survivors
            .iter()
            .all(|s| identity_upto(s, forced_prefix + 1))
    {
        forced_prefix += 1;
    }
    let free: BTreeSet<Site> = survivors
        .iter()
        .flat_map(|s| s.free_sites())
        .filter(|s| s.value() <= bound)
        .collect();
    let outcome = if survivors.is_empty() {
        Outcome::AllBranchesContradict
    } else if survivors.len() == 1 && free.is_empty() && forced_prefix == bound {
        let table = survivors[0]
            .table()
            .into_iter()
            .filter(|(site, _)| *site <= bound)
            .collect();
        Outcome::Forced { table }
    } else {
        let mut notes: Vec<String> = survivors
            .iter()
            .flat_map(|s| s.notes.iter().cloned())
            .collect();
        notes.sort();
        notes.dedup();
        if survivors.len() > 1 {
            notes.push(format!("{} branches survive", survivors.len()));
        }
        Outcome::Underdetermined {
            free_sites: free.into_iter().collect(),
            witness_count: survivors.len().min(WITNESS_COUNT_CAP),
            forced_prefix,
            first_free: (forced_prefix < bound).then_some(forced_prefix + 1),
            notes,
        }
    };
    let tables = survivors
        .iter()
        .map(|s| (s.path.clone(), s.table()))
        .collect();
    Verdict {
        k: system.k,
        bound,
        horizon: system.horizon,
        outcome,
        trace: exploration.trace,
        survivors: tables,
    }
}

/// Sites `<= bound` as `p^e` strings.
pub fn site_names(sites: &[u64]) -> Vec<String> {
    sites
        .iter()
        .filter_map(|&s| prime_power(s))
        .map(|s| s.to_string())
        .collect()
}

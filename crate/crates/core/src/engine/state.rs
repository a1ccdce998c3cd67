use std::collections::VecDeque;

use num_traits::Zero;

use super::equation::{push_equations_for, Equation, Provenance};
use super::trace::{Event, Inputs, Output, Rule};
use crate::arith::{format_rational, prime_powers_up_to, PartialFunction, Poly, Rational, Symbol};

/// Size limits for elimination attempts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_degree: u32,
    pub max_symbols: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 4,
            max_symbols: 6,
        }
    }
}

/// The generated equation system a search starts from.
#[derive(Clone, Debug)]
pub struct System {
    pub k: usize,
    /// Verdicts cover `n <= bound`.
    pub bound: u64,
    /// Equations are generated for `n <= horizon`.
    pub horizon: u64,
    pub cap: usize,
    pub limits: Limits,
    pub pf: PartialFunction,
    pub equations: Vec<Equation>,
}

impl System {
    /// Registers every prime power up to `horizon` in ascending order, so
    /// symbol ids follow site order, then generates the equations.
    pub fn generate(k: usize, bound: u64, horizon: u64, cap: usize, limits: Limits) -> System {
        let mut pf = PartialFunction::new();
        for site in prime_powers_up_to(horizon) {
            pf.register(site);
        }
        let mut equations = Vec::new();
        for n in 1..=horizon {
            push_equations_for(k, n, &mut pf, cap, &mut equations);
        }
        System {
            k,
            bound,
            horizon,
            cap,
            limits,
            pf,
            equations,
        }
    }

    /// A hand-picked system. `bound` and `horizon` only affect reporting.
    pub fn custom(
        pf: PartialFunction,
        equations: Vec<Equation>,
        bound: u64,
        limits: Limits,
    ) -> System {
        System {
            k: 0,
            bound,
            horizon: bound,
            cap: 0,
            limits,
            pf,
            equations,
        }
    }

    /// `[k, bound, horizon, cap, max_degree, max_symbols]`, as recorded by
    /// the `init` trace step.
    pub fn params(&self) -> Vec<u64> {
        vec![
            self.k as u64,
            self.bound,
            self.horizon,
            self.cap as u64,
            self.limits.max_degree as u64,
            self.limits.max_symbols as u64,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Active,
    Contradiction { equation: usize, residue: Rational },
    Saturated,
}

/// Raised when the shared step allowance runs out mid-propagation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepsExhausted;

/// One branch of the search: assignments, the equations in their current
/// folded form, and the steps taken so far.
#[derive(Clone, Debug)]
pub struct BranchState {
    pub pf: PartialFunction,
    equations: Vec<Equation>,
    live: Vec<bool>,
    watch: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    pub log: Vec<Event>,
    pub status: Status,
}

impl BranchState {
    pub fn new(system: &System) -> Self {
        let symbols = system.pf.sites().count();
        let mut state = BranchState {
            pf: system.pf.clone(),
            equations: Vec::with_capacity(system.equations.len()),
            live: Vec::with_capacity(system.equations.len()),
            watch: vec![Vec::new(); symbols],
            queue: VecDeque::new(),
            queued: Vec::new(),
            log: Vec::new(),
            status: Status::Active,
        };
        for e in &system.equations {
            state.push(e.clone());
        }
        state
    }

    fn push(&mut self, equation: Equation) {
        let id = self.equations.len();
        debug_assert_eq!(equation.id, id);
        for s in equation.poly.symbols() {
            let slot = s.id() as usize;
            if slot >= self.watch.len() {
                self.watch.resize(slot + 1, Vec::new());
            }
            self.watch[slot].push(id);
        }
        self.live.push(!equation.poly.is_zero());
        self.queued.push(true);
        self.queue.push_back(id);
        self.equations.push(equation);
    }

    pub fn equation(&self, id: usize) -> &Equation {
        &self.equations[id]
    }

    pub fn equation_count(&self) -> usize {
        self.equations.len()
    }

    /// Adds an equation produced by elimination and returns its id.
    pub fn add_derived(&mut self, poly: Poly, sources: Vec<usize>) -> usize {
        let id = self.equations.len();
        self.push(Equation {
            id,
            poly,
            provenance: Provenance::Derived { sources },
        });
        id
    }

    /// Live equations in id order, each fully folded once propagation has
    /// reached its fixpoint.
    pub fn pending(&self) -> impl Iterator<Item = &Equation> {
        self.equations
            .iter()
            .zip(&self.live)
            .filter(|(_, &l)| l)
            .map(|(e, _)| e)
    }

    pub fn is_live(&self, id: usize) -> bool {
        self.live[id]
    }

    /// The polynomial of equation `id` under the current assignments.
    pub fn folded(&self, id: usize) -> Poly {
        let pf = &self.pf;
        self.equations[id].poly.fold(|s| pf.symbol_value(s))
    }

    /// Refolds every equation and recomputes which are live, as propagation
    /// would leave them. Used by replay, which applies steps without queues.
    pub fn refold_all(&mut self) {
        for id in 0..self.equations.len() {
            let p = self.folded(id);
            self.live[id] = !p.is_zero();
            self.equations[id].poly = p;
        }
        self.queue.clear();
        self.queued.iter_mut().for_each(|q| *q = false);
    }

    pub fn record(&mut self, rule: Rule, inputs: Inputs, output: Output) {
        self.log.push(Event {
            rule,
            inputs,
            output,
        });
    }

    /// Assigns `f(site) := value` for the site behind `symbol` and queues
    /// every equation mentioning it. Assumes the value is consistent.
    pub fn assign_symbol(&mut self, symbol: Symbol, value: Rational) {
        let site = self.pf.site_of(symbol).value();
        self.pf
            .assign(site, value)
            .expect("symbol is unknown until assigned");
        let slot = symbol.id() as usize;
        for &id in &self.watch[slot] {
            if self.live[id] && !self.queued[id] {
                self.queued[id] = true;
                self.queue.push_back(id);
            }
        }
    }

    /// Runs constant folding and single-symbol linear solving to a
    /// fixpoint. `allowance` is decremented once per logged step.
    pub fn propagate(&mut self, allowance: &dyn Fn() -> bool) -> Result<(), StepsExhausted> {
        while let Some(id) = self.queue.pop_front() {
            self.queued[id] = false;
            if !self.live[id] {
                continue;
            }
            let p = self.folded(id);
            if p.is_zero() {
                self.live[id] = false;
                self.equations[id].poly = p;
                continue;
            }
            if let Some(residue) = p.as_constant() {
                self.status = Status::Contradiction {
                    equation: id,
                    residue: residue.clone(),
                };
                self.record(
                    Rule::Contradiction,
                    Inputs {
                        equations: vec![id],
                        ..Inputs::default()
                    },
                    Output::Contradiction {
                        residue: format_rational(&residue),
                        eliminated: false,
                    },
                );
                self.equations[id].poly = p;
                self.queue.clear();
                return Ok(());
            }
            if let Some((symbol, c)) = p.as_univariate().filter(|(_, c)| c.len() == 2) {
                let value = -&c[0] / &c[1];
                let site = self.pf.site_of(symbol).value();
                if !allowance() {
                    return Err(StepsExhausted);
                }
                let rule = solve_rule(&self.equations[id].provenance, site);
                self.record(
                    rule,
                    Inputs {
                        equations: vec![id],
                        sites: vec![site],
                        params: Vec::new(),
                    },
                    Output::Assign {
                        site,
                        value: format_rational(&value),
                    },
                );
                self.live[id] = false;
                self.equations[id].poly = Poly::zero();
                self.assign_symbol(symbol, value);
                continue;
            }
            self.equations[id].poly = p;
        }
        Ok(())
    }

    /// Marks the branch finished with no rule left to apply.
    pub fn saturate(&mut self) {
        self.status = Status::Saturated;
        let free: Vec<u64> = self.pf.unknown_sites().map(|s| s.value()).collect();
        self.record(
            Rule::Saturated,
            Inputs::default(),
            Output::Saturated { free },
        );
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self.status, Status::Contradiction { .. })
    }
}

/// `coprime-division` when the equation is an additivity relation for `n`
/// and the solved site is a proper unitary divisor of `n`, so the step
/// divides `f(n)` by the known value of the cofactor.
pub fn solve_rule(provenance: &Provenance, site: u64) -> Rule {
    match provenance {
        Provenance::Additivity { n, .. }
            if *n != site && n % site == 0 && !(n / site).is_multiple_of(prime_of(site)) =>
        {
            Rule::CoprimeDivision
        }
        _ => Rule::LinearSolve,
    }
}

fn prime_of(site: u64) -> u64 {
    crate::arith::prime_power(site)
        .map(|s| s.prime)
        .unwrap_or(site)
}

/// True when no live equation is a nonzero constant after folding.
pub fn consistent(state: &BranchState) -> bool {
    state.pending().all(|e| {
        let p = state.folded(e.id);
        !p.is_constant() || p.as_constant().is_some_and(|c| c.is_zero())
    })
}

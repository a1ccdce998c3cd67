use std::collections::BTreeMap;

use super::run::{explore, uniqueness_system, EngineConfig, EngineError};
use super::state::BranchState;
use super::verify::verify_assignment;
use crate::arith::{int, Rational, Symbol};

/// Outcome of a witness search that stayed within budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSearch {
    Found {
        /// Values on every prime power `<= N`.
        table: BTreeMap<u64, Rational>,
        /// Fork path of the surviving branch it extends.
        path: Vec<usize>,
        /// Sites `<= N` where the table is not the identity.
        differs: Vec<u64>,
        attempts: usize,
    },
    NoneFound {
        attempts: usize,
    },
}

fn grid(site: u64) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    vec![
        int(site as i64),
        int(0),
        int(1),
        int(-1),
        int(2),
        half,
        int(-2),
        int(3),
    ]
}

struct Search<'a> {
    bound: u64,
    k: usize,
    max_attempts: usize,
    attempts: usize,
    sites: &'a [(u64, Symbol)],
}

impl Search<'_> {
    fn charge(&mut self) -> Result<(), EngineError> {
        self.attempts += 1;
        if self.attempts > self.max_attempts {
            return Err(EngineError::BudgetExhausted(format!(
                "more than {} witness attempts",
                self.max_attempts
            )));
        }
        Ok(())
    }

    fn dfs(
        &mut self,
        state: &BranchState,
        depth: usize,
    ) -> Result<Option<BTreeMap<u64, Rational>>, EngineError> {
        let Some(&(site, symbol)) = self.sites.get(depth) else {
            return self.complete(state);
        };
        if state.pf.known(site).is_some() {
            return self.dfs(state, depth + 1);
        }
        for value in grid(site) {
            self.charge()?;
            let mut next = state.clone();
            next.log.clear();
            next.assign_symbol(symbol, value);
            next.propagate(&|| true).expect("unbounded allowance");
            if next.is_contradiction() {
                continue;
            }
            if let Some(table) = self.dfs(&next, depth + 1)? {
                return Ok(Some(table));
            }
        }
        Ok(None)
    }

    /// Sets every remaining unknown site to the identity and checks the
    /// result up to the bound.
    fn complete(
        &mut self,
        state: &BranchState,
    ) -> Result<Option<BTreeMap<u64, Rational>>, EngineError> {
        let mut table = state.pf.known_table();
        for s in state.pf.unknown_sites() {
            table.insert(s.value(), int(s.value() as i64));
        }
        table.retain(|&q, _| q <= self.bound);
        let differs = table.iter().any(|(&q, v)| *v != int(q as i64));
        if !differs {
            return Ok(None);
        }
        self.charge()?;
        let report = verify_assignment(&table, self.k, self.bound)?;
        Ok(report.ok.then_some(table))
    }
}

/// Looks for a multiplicative `f`, not the identity on some prime power
/// `<= N`, satisfying every additivity equation for `n <= N`.
///
/// Each surviving branch of the uniqueness search is extended by trying
/// the grid `[identity, 0, 1, -1, 2, 1/2, -2, 3]` on its free sites
/// `<= site_bound` in ascending order, propagating after every choice.
/// Remaining free sites take the identity.
pub fn search_nonidentity(
    k: usize,
    bound: u64,
    site_bound: u64,
    config: &EngineConfig,
) -> Result<WitnessSearch, EngineError> {
    let system = uniqueness_system(k, bound, config)?;
    let exploration = explore(&system, config)?;
    let mut attempts = 0;
    for survivor in &exploration.survivors {
        let sites: Vec<(u64, Symbol)> = survivor
            .state
            .pf
            .unknown_sites()
            .filter(|s| s.value() <= site_bound)
            .map(|s| (s.value(), survivor.state.pf.symbol_of(s.value()).unwrap()))
            .collect();
        let mut search = Search {
            bound,
            k,
            max_attempts: config.budget.max_witness_attempts - attempts,
            attempts: 0,
            sites: &sites,
        };
        let found = search.dfs(&survivor.state, 0);
        attempts += search.attempts;
        if let Some(table) = found? {
            let differs = table
                .iter()
                .filter(|(&q, v)| **v != int(q as i64))
                .map(|(&q, _)| q)
                .collect();
            return Ok(WitnessSearch::Found {
                table,
                path: survivor.path.clone(),
                differs,
                attempts,
            });
        }
    }
    Ok(WitnessSearch::NoneFound { attempts })
}

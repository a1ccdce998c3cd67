//! Deduction traces: one record per step, serialized as JSON lines, and a
//! replayer that re-checks every step from the initial system.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::eliminate::{eliminate, Elimination};
use super::roots::{irrational_degree, rational_roots};
use super::state::{consistent, solve_rule, BranchState, Limits, System};
use crate::arith::{format_rational, parse_rational, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Init,
    LinearSolve,
    CoprimeDivision,
    Eliminate,
    Split,
    Branch,
    Contradiction,
    Saturated,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub equations: Vec<usize>,
    pub sites: Vec<u64>,
    pub params: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Output {
    System {
        equations: usize,
        sites: usize,
    },
    Assign {
        site: u64,
        value: String,
    },
    Eliminant {
        site: u64,
        /// Ascending coefficients.
        coefficients: Vec<String>,
        derived: Option<usize>,
        tier: String,
        window: usize,
    },
    Split {
        site: u64,
        roots: Vec<String>,
        irrational_degree: usize,
    },
    Contradiction {
        residue: String,
        eliminated: bool,
    },
    Saturated {
        free: Vec<u64>,
    },
}

/// A step as logged by a branch, before it is numbered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub rule: Rule,
    pub inputs: Inputs,
    pub output: Output,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: usize,
    /// Root index chosen at each split on the way to this branch.
    pub branch: Vec<usize>,
    pub rule: Rule,
    pub inputs: Inputs,
    pub output: Output,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
}

impl Trace {
    pub fn push(&mut self, branch: &[usize], event: Event) {
        let step = self.records.len();
        self.records.push(TraceRecord {
            step,
            branch: branch.to_vec(),
            rule: event.rule,
            inputs: event.inputs,
            output: event.output,
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("trace records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), TraceError> {
        w.write_all(self.to_jsonl().as_bytes())?;
        Ok(())
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Trace, TraceError> {
        let mut records = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record = serde_json::from_str(&line).map_err(|source| TraceError::Parse {
                line: i + 1,
                source,
            })?;
            records.push(record);
        }
        Ok(Trace { records })
    }

    /// Records whose rule is one of the assignment rules, as `(site, value)`.
    pub fn assignments(&self) -> impl Iterator<Item = (&[usize], u64, &str)> {
        self.records
            .iter()
            .filter_map(|r| match (&r.rule, &r.output) {
                (
                    Rule::LinearSolve | Rule::CoprimeDivision | Rule::Branch,
                    Output::Assign { site, value },
                ) => Some((r.branch.as_slice(), *site, value.as_str())),
                _ => None,
            })
    }

    /// Split records as `(branch, site, roots)`.
    pub fn splits(&self) -> impl Iterator<Item = (&[usize], u64, &[String])> {
        self.records.iter().filter_map(|r| match &r.output {
            Output::Split { site, roots, .. } => {
                Some((r.branch.as_slice(), *site, roots.as_slice()))
            }
            _ => None,
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("trace is empty or does not start with an init step")]
    MissingInit,
    #[error("step {step}: {reason}")]
    Step { step: usize, reason: String },
}

/// What replay reconstructs: the final assignment table of every branch
/// that ended saturated, keyed by fork path, and the dead branches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplaySummary {
    pub survivors: BTreeMap<Vec<usize>, BTreeMap<u64, Rational>>,
    pub contradicted: Vec<Vec<usize>>,
}

struct Replayer {
    limits: Limits,
    states: BTreeMap<Vec<usize>, BranchState>,
    /// Split roots per parent path.
    roots: BTreeMap<Vec<usize>, Vec<Rational>>,
    summary: ReplaySummary,
}

fn fail<T>(step: usize, reason: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError::Step {
        step,
        reason: reason.into(),
    })
}

fn parse(step: usize, text: &str) -> Result<Rational, ReplayError> {
    parse_rational(text).map_or_else(|| fail(step, format!("bad rational {text:?}")), Ok)
}

/// Regenerates the system from the `init` step and checks every later step
/// against it: linear solves are re-solved, eliminations are recomputed,
/// split roots are recomputed, contradictions are re-derived and saturated
/// branches are checked to have no constant residue left.
pub fn replay(trace: &Trace) -> Result<ReplaySummary, ReplayError> {
    let first = trace.records.first().ok_or(ReplayError::MissingInit)?;
    if first.rule != Rule::Init || first.inputs.params.len() != 6 || !first.branch.is_empty() {
        return Err(ReplayError::MissingInit);
    }
    let p = &first.inputs.params;
    let limits = Limits {
        max_degree: p[4] as u32,
        max_symbols: p[5] as usize,
    };
    let system = System::generate(p[0] as usize, p[1], p[2], p[3] as usize, limits);
    let expected = Output::System {
        equations: system.equations.len(),
        sites: system.pf.sites().count(),
    };
    if first.output != expected {
        return fail(0, "system size differs from regeneration");
    }
    let mut replayer = Replayer {
        limits,
        states: BTreeMap::from([(Vec::new(), BranchState::new(&system))]),
        roots: BTreeMap::new(),
        summary: ReplaySummary::default(),
    };
    for (i, record) in trace.records.iter().enumerate().skip(1) {
        if record.step != i {
            return fail(i, format!("step index {} out of sequence", record.step));
        }
        replayer.apply(record)?;
    }
    if let Some(path) = replayer.states.keys().next() {
        return fail(
            trace.records.len(),
            format!("branch {path:?} never finished"),
        );
    }
    Ok(replayer.summary)
}

impl Replayer {
    fn state(&mut self, step: usize, path: &[usize]) -> Result<&mut BranchState, ReplayError> {
        match self.states.get_mut(path) {
            Some(s) => Ok(s),
            None => fail(step, format!("unknown or finished branch {path:?}")),
        }
    }

    fn apply(&mut self, r: &TraceRecord) -> Result<(), ReplayError> {
        let step = r.step;
        match (&r.rule, &r.output) {
            (Rule::LinearSolve | Rule::CoprimeDivision, Output::Assign { site, value }) => {
                let value = parse(step, value)?;
                let state = self.state(step, &r.branch)?;
                let &[id] = r.inputs.equations.as_slice() else {
                    return fail(step, "solve needs exactly one equation");
                };
                if id >= state.equation_count() {
                    return fail(step, format!("no equation {id}"));
                }
                let Some(symbol) = state.pf.symbol_of(*site) else {
                    return fail(step, format!("f({site}) is not unknown"));
                };
                let p = state.folded(id);
                match p.as_univariate() {
                    Some((s, c)) if s == symbol && c.len() == 2 && -&c[0] / &c[1] == value => {}
                    _ => {
                        return fail(
                            step,
                            format!("equation {id} does not solve f({site}) = {value}"),
                        )
                    }
                }
                if solve_rule(&state.equation(id).provenance, *site) != r.rule {
                    return fail(step, "rule label differs");
                }
                state.assign_symbol(symbol, value);
            }
            (
                Rule::Eliminate,
                Output::Eliminant {
                    site,
                    coefficients,
                    derived,
                    tier,
                    window,
                },
            ) => {
                let limits = self.limits;
                let state = self.state(step, &r.branch)?;
                state.refold_all();
                let Some(Elimination::Univariate {
                    symbol,
                    poly,
                    sources,
                    derived: is_derived,
                    tier: t,
                    window: w,
                }) = eliminate(state, limits)
                else {
                    return fail(step, "elimination does not reproduce an eliminant");
                };
                let (_, c) = poly.as_univariate().expect("eliminant is univariate");
                let c: Vec<String> = c.iter().map(format_rational).collect();
                if state.pf.site_of(symbol).value() != *site
                    || &c != coefficients
                    || sources != r.inputs.equations
                    || t.name() != tier
                    || w != *window
                    || is_derived != derived.is_some()
                {
                    return fail(step, "eliminant differs from recomputation");
                }
                if let Some(id) = derived {
                    let got = state.add_derived(poly, sources);
                    if got != *id {
                        return fail(step, format!("derived equation id {got}, trace says {id}"));
                    }
                }
            }
            (
                Rule::Split,
                Output::Split {
                    site,
                    roots,
                    irrational_degree: irr,
                },
            ) => {
                let state = self.state(step, &r.branch)?;
                let &[id] = r.inputs.equations.as_slice() else {
                    return fail(step, "split needs exactly one equation");
                };
                let p = state.folded(id);
                let Some((symbol, c)) = p.as_univariate() else {
                    return fail(step, format!("equation {id} is not univariate"));
                };
                if state.pf.site_of(symbol).value() != *site {
                    return fail(step, "split site differs");
                }
                let found = rational_roots(&p).map_err(|e| ReplayError::Step {
                    step,
                    reason: e.to_string(),
                })?;
                let text: Vec<String> = found.iter().map(format_rational).collect();
                if &text != roots || irrational_degree(&c, &found) != *irr {
                    return fail(step, "split roots differ");
                }
                self.roots.insert(r.branch.clone(), found);
            }
            (Rule::Branch, Output::Assign { site, value }) => {
                let Some((&index, parent)) = r.branch.split_last() else {
                    return fail(step, "branch step at the root");
                };
                let value = parse(step, value)?;
                match self.roots.get(parent).and_then(|roots| roots.get(index)) {
                    Some(root) if *root == value => {}
                    _ => return fail(step, "branch value is not the recorded root"),
                }
                let mut child = self.state(step, parent)?.clone();
                child.log.clear();
                let Some(symbol) = child.pf.symbol_of(*site) else {
                    return fail(step, format!("f({site}) is not unknown"));
                };
                child.assign_symbol(symbol, value);
                if index + 1 == self.roots[parent].len() {
                    self.states.remove(parent);
                }
                self.states.insert(r.branch.clone(), child);
            }
            (
                Rule::Contradiction,
                Output::Contradiction {
                    residue,
                    eliminated,
                },
            ) => {
                let residue = parse(step, residue)?;
                let limits = self.limits;
                let state = self.state(step, &r.branch)?;
                if *eliminated {
                    state.refold_all();
                    match eliminate(state, limits) {
                        Some(Elimination::Inconsistent {
                            residue: got,
                            sources,
                            ..
                        }) if got == residue && sources == r.inputs.equations => {}
                        _ => return fail(step, "elimination does not reproduce the contradiction"),
                    }
                } else {
                    let &[id] = r.inputs.equations.as_slice() else {
                        return fail(step, "contradiction needs exactly one equation");
                    };
                    if state.folded(id).as_constant() != Some(residue.clone())
                        || residue == Rational::from_integer(0.into())
                    {
                        return fail(step, format!("equation {id} does not fold to {residue}"));
                    }
                }
                self.states.remove(&r.branch);
                self.summary.contradicted.push(r.branch.clone());
            }
            (Rule::Saturated, Output::Saturated { free }) => {
                let state = self.state(step, &r.branch)?;
                let unknown: Vec<u64> = state.pf.unknown_sites().map(|s| s.value()).collect();
                if &unknown != free {
                    return fail(step, "free sites differ");
                }
                state.refold_all();
                if !consistent(state) {
                    return fail(step, "a saturated branch still has a constant residue");
                }
                let table = state.pf.known_table();
                self.states.remove(&r.branch);
                self.summary.survivors.insert(r.branch.clone(), table);
            }
            _ => return fail(step, format!("rule {:?} with mismatched output", r.rule)),
        }
        Ok(())
    }
}

/// Ascending coefficient strings of a univariate polynomial.
pub fn coefficient_strings(p: &Poly) -> Vec<String> {
    p.as_univariate()
        .map(|(_, c)| c.iter().map(format_rational).collect())
        .unwrap_or_default()
}

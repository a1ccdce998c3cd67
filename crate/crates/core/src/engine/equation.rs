use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{PartialFunction, Poly};
use crate::repr::enumerate_representations;

/// Where an equation came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// `f(n) - sum f(a_i^2)` for one representation of `n`.
    Additivity { n: u64, parts: Vec<u64> },
    /// Difference of the right-hand sides of two representations of `n`.
    CrossRepresentation {
        n: u64,
        first: Vec<u64>,
        second: Vec<u64>,
    },
    /// Produced by elimination from the listed equations.
    Derived { sources: Vec<usize> },
}

impl Provenance {
    pub fn is_cross(&self) -> bool {
        matches!(self, Provenance::CrossRepresentation { .. })
    }
}

fn fmt_parts(parts: &[u64]) -> String {
    let s: Vec<String> = parts.iter().map(u64::to_string).collect();
    format!("({})", s.join(","))
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Additivity { n, parts } => {
                write!(f, "additivity n={n} {}", fmt_parts(parts))
            }
            Provenance::CrossRepresentation { n, first, second } => {
                write!(
                    f,
                    "cross n={n} {} vs {}",
                    fmt_parts(first),
                    fmt_parts(second)
                )
            }
            Provenance::Derived { sources } => write!(f, "derived from {sources:?}"),
        }
    }
}

/// `poly = 0`, with the objects that justify it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub id: usize,
    pub poly: Poly,
    pub provenance: Provenance,
}

/// Representations kept per `n`: the lexicographically first 64.
pub const DEFAULT_REPRESENTATION_CAP: usize = 64;

/// Every additivity equation for `n <= bound` into `k` positive squares,
/// plus one cross-representation equation pairing the first representation
/// of each `n` with every later one. Order: `n` ascending, then
/// representations lexicographically.
pub fn generate_equations(k: usize, bound: u64, pf: &mut PartialFunction) -> Vec<Equation> {
    generate_equations_with_cap(k, bound, pf, DEFAULT_REPRESENTATION_CAP)
}

pub fn generate_equations_with_cap(
    k: usize,
    bound: u64,
    pf: &mut PartialFunction,
    cap: usize,
) -> Vec<Equation> {
    assert!(k >= 2, "generate_equations needs k >= 2");
    let mut out = Vec::new();
    for n in 1..=bound {
        push_equations_for(k, n, pf, cap, &mut out);
    }
    out
}

/// Equations contributed by a single `n`, appended to `out` with
/// consecutive ids.
pub fn push_equations_for(
    k: usize,
    n: u64,
    pf: &mut PartialFunction,
    cap: usize,
    out: &mut Vec<Equation>,
) {
    let reps = enumerate_representations(n, k, Some(cap));
    if reps.is_empty() {
        return;
    }
    let lhs = pf.evaluate(n);
    let sides: Vec<Poly> = reps
        .iter()
        .map(|r| {
            r.parts
                .iter()
                .fold(Poly::zero(), |acc, &a| &acc + &pf.evaluate(a * a))
        })
        .collect();
    for (r, rhs) in reps.iter().zip(&sides) {
        let id = out.len();
        out.push(Equation {
            id,
            poly: &lhs - rhs,
            provenance: Provenance::Additivity {
                n,
                parts: r.parts.clone(),
            },
        });
    }
    for (r, rhs) in reps.iter().zip(&sides).skip(1) {
        let id = out.len();
        out.push(Equation {
            id,
            poly: &sides[0] - rhs,
            provenance: Provenance::CrossRepresentation {
                n,
                first: reps[0].parts.clone(),
                second: r.parts.clone(),
            },
        });
    }
}

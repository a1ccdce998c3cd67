//! Elimination over pending equations.
//!
//! Pending equations are scanned in two tiers: first the cross-representation
//! equations alone, then every pending equation. Within a tier a window of
//! the first 32, 64, 128, ... equations is filtered to those within the size
//! limits and reduced by substitution, pivoting on symbols in descending id
//! order. The first univariate polynomial to appear is returned. A last
//! tier over every equation also pivots on symbols whose coefficient is a
//! polynomial, multiplying through instead of dividing.

use std::collections::BTreeSet;

use super::state::{BranchState, Limits};
use crate::arith::{Poly, Rational, Symbol};

const FIRST_WINDOW: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// An equation already univariate after propagation.
    Pending,
    Cross,
    All,
    /// All equations, also pivoting on symbols with polynomial coefficients.
    Resultant,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Pending => "pending",
            Tier::Cross => "cross",
            Tier::All => "all",
            Tier::Resultant => "resultant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// A polynomial in `symbol` alone, implied by the `sources`.
    Univariate {
        symbol: Symbol,
        poly: Poly,
        sources: Vec<usize>,
        derived: bool,
        tier: Tier,
        window: usize,
    },
    /// The `sources` combine to a nonzero constant.
    Inconsistent {
        residue: Rational,
        sources: Vec<usize>,
        tier: Tier,
        window: usize,
    },
}

#[derive(Clone, Debug)]
struct Item {
    poly: Poly,
    sources: BTreeSet<usize>,
}

/// Searches the pending equations of `state` for an eliminant.
pub fn eliminate(state: &BranchState, limits: Limits) -> Option<Elimination> {
    let pending: Vec<(usize, &Poly, bool)> = state
        .pending()
        .map(|e| (e.id, &e.poly, e.provenance.is_cross()))
        .collect();
    eliminate_polys(&pending, limits)
}

/// Same as [`eliminate`] on `(id, poly, is_cross)` triples in id order.
pub fn eliminate_polys(pending: &[(usize, &Poly, bool)], limits: Limits) -> Option<Elimination> {
    let mut best: Option<(u32, Symbol, usize)> = None;
    for (i, (_, poly, _)) in pending.iter().enumerate() {
        let symbols = poly.symbols();
        if symbols.len() == 1 && poly.degree() >= 1 {
            let key = (poly.degree(), *symbols.iter().next().unwrap(), i);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    if let Some((_, symbol, i)) = best {
        return Some(Elimination::Univariate {
            symbol,
            poly: pending[i].1.clone(),
            sources: vec![pending[i].0],
            derived: false,
            tier: Tier::Pending,
            window: 0,
        });
    }
    for tier in [Tier::Cross, Tier::All, Tier::Resultant] {
        let pool: Vec<&(usize, &Poly, bool)> = pending
            .iter()
            .filter(|(_, _, cross)| tier != Tier::Cross || *cross)
            .collect();
        let mut window = FIRST_WINDOW;
        loop {
            let work: Vec<Item> = pool
                .iter()
                .take(window)
                .filter(|(_, p, _)| within(p, limits))
                .map(|(id, p, _)| Item {
                    poly: (*p).clone(),
                    sources: BTreeSet::from([*id]),
                })
                .collect();
            if let Some(found) = reduce(work, limits, tier, window) {
                return Some(found);
            }
            if window >= pool.len() {
                break;
            }
            window *= 2;
        }
    }
    None
}

fn within(p: &Poly, limits: Limits) -> bool {
    p.degree() <= limits.max_degree && p.symbols().len() <= limits.max_symbols
}

/// Nonconstant coefficient last, then fewer symbols, lower degree, position.
type PivotKey = (bool, usize, u32, usize);

fn reduce(mut work: Vec<Item>, limits: Limits, tier: Tier, window: usize) -> Option<Elimination> {
    let symbols: BTreeSet<Symbol> = work.iter().flat_map(|w| w.poly.symbols()).collect();
    for &t in symbols.iter().rev() {
        let mut pivot: Option<(PivotKey, Poly, Poly)> = None;
        for (i, item) in work.iter().enumerate() {
            let Some((a, b)) = linear_in(&item.poly, t) else {
                continue;
            };
            if tier != Tier::Resultant && !a.is_constant() {
                continue;
            }
            let key = (
                !a.is_constant(),
                item.poly.symbols().len(),
                item.poly.degree(),
                i,
            );
            if pivot.as_ref().is_none_or(|(k, _, _)| key < *k) {
                pivot = Some((key, a, b));
            }
        }
        let Some(((_, _, _, index), a, b)) = pivot else {
            continue;
        };
        let pivot = work.remove(index);
        let mut next = Vec::with_capacity(work.len());
        for item in work {
            if !item.poly.contains(t) {
                next.push(item);
                continue;
            }
            let poly = match a.as_constant() {
                // t = -b / a
                Some(c) => item.poly.substitute_poly(t, &b.scale(&(-c.recip()))),
                None => clear_pivot(&item.poly, t, &a, &b),
            };
            if poly.is_zero() {
                continue;
            }
            let sources: BTreeSet<usize> = item.sources.union(&pivot.sources).copied().collect();
            if let Some(residue) = poly.as_constant() {
                return Some(Elimination::Inconsistent {
                    residue,
                    sources: sources.into_iter().collect(),
                    tier,
                    window,
                });
            }
            if !within(&poly, limits) {
                continue;
            }
            next.push(Item { poly, sources });
        }
        work = next;
        if let Some(found) = univariate(&work, tier, window) {
            return Some(found);
        }
    }
    None
}

/// `(a, b)` with `p = a*t + b` and `t` absent from both.
fn linear_in(p: &Poly, t: Symbol) -> Option<(Poly, Poly)> {
    if p.degree_in(t) != 1 {
        return None;
    }
    let mut a = Poly::zero();
    let mut b = Poly::zero();
    for (m, c) in p.terms() {
        match m.degree_in(t) {
            0 => b.add_term(m.clone(), c.clone()),
            _ => a.add_term(m.without(t), c.clone()),
        }
    }
    Some((a, b))
}

/// `a^e * q(-b/a)` for `q` of degree `e` in `t`: the remainder of `a^e q`
/// modulo `a*t + b`, so it lies in the ideal both generate.
fn clear_pivot(q: &Poly, t: Symbol, a: &Poly, b: &Poly) -> Poly {
    let e = q.degree_in(t);
    let mut by_degree = vec![Poly::zero(); e as usize + 1];
    for (m, c) in q.terms() {
        by_degree[m.degree_in(t) as usize].add_term(m.without(t), c.clone());
    }
    let minus_b = -b;
    let mut out = Poly::zero();
    for (i, c) in by_degree.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        out = &out + &(&(c * &minus_b.pow(i as u32)) * &a.pow(e - i as u32));
    }
    out
}

fn univariate(work: &[Item], tier: Tier, window: usize) -> Option<Elimination> {
    let mut best: Option<((u32, Symbol), usize)> = None;
    for (i, item) in work.iter().enumerate() {
        let symbols = item.poly.symbols();
        if symbols.len() == 1 {
            let key = (item.poly.degree(), *symbols.iter().next().unwrap());
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, i));
            }
        }
    }
    best.map(|((_, symbol), i)| Elimination::Univariate {
        symbol,
        poly: work[i].poly.primitive(),
        sources: work[i].sources.iter().copied().collect(),
        derived: true,
        tier,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, prime_powers_up_to, PartialFunction};
    use crate::engine::equation::push_equations_for;
    use crate::engine::state::System;

    fn pf_upto(bound: u64) -> PartialFunction {
        let mut pf = PartialFunction::new();
        for s in prime_powers_up_to(bound) {
            pf.register(s);
        }
        pf
    }

    fn eliminant(
        pf: PartialFunction,
        k: usize,
        ns: &[u64],
        bound: u64,
    ) -> (PartialFunction, Option<Elimination>) {
        let mut pf = pf;
        let mut equations = Vec::new();
        for &n in ns {
            push_equations_for(k, n, &mut pf, 64, &mut equations);
        }
        let system = System::custom(pf.clone(), equations, bound, Limits::default());
        let mut state = BranchState::new(&system);
        state.propagate(&|| true).unwrap();
        (state.pf.clone(), eliminate(&state, Limits::default()))
    }

    #[test]
    fn six_squares_split_on_four() {
        // x16 = 5 x4 - 4, 3 x9 = 8 x4 - 5 and 4 + x4 x9 = x4 + 4 x9
        let mut pf = pf_upto(16);
        let x = |pf: &mut PartialFunction, q: u64| {
            Poly::symbol(pf.evaluate(q).symbols().into_iter().next().unwrap())
        };
        let (x4, x9, x16) = (x(&mut pf, 4), x(&mut pf, 9), x(&mut pf, 16));
        let c = |v: i64| Poly::constant(int(v));
        let a = &(&x16 - &x4.scale(&int(5))) + &c(4);
        let b = &(&x9.scale(&int(3)) - &x4.scale(&int(8))) + &c(5);
        let d = &(&(&c(4) + &(&x4 * &x9)) - &x4) - &x9.scale(&int(4));
        let pending = [(0usize, &a, true), (1usize, &b, true), (2usize, &d, true)];
        let s4 = pf.symbol_of(4).unwrap();
        match eliminate_polys(&pending, Limits::default()) {
            Some(Elimination::Univariate {
                symbol,
                poly,
                sources,
                ..
            }) => {
                assert_eq!(symbol, s4);
                assert_eq!(poly, Poly::univariate(s4, &[int(4), int(-5), int(1)]));
                assert_eq!(sources, vec![1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_squares_quadratic_in_two() {
        // 3 x2 = 2 + x4, x9 = 1 + 2 x4, x11 = 2 + x9, x2 x11 = x4 + 2 x9
        let mut pf = pf_upto(22);
        pf.assign(3, int(3)).unwrap();
        let (pf, found) = eliminant(pf, 3, &[6, 9, 11, 22], 22);
        let x2 = pf.symbol_of(2).unwrap();
        let expect = Poly::univariate(x2, &[int(4), int(-8), int(3)]);
        match found {
            Some(Elimination::Univariate {
                symbol,
                poly,
                derived,
                ..
            }) => {
                assert_eq!(symbol, x2);
                assert_eq!(poly, expect);
                assert!(derived);
                // x2 = 2 is a root
                assert!(poly.substitute(x2, &int(2)).is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pending_univariate_returned_as_is() {
        let mut pf = pf_upto(3);
        let x = pf.evaluate(3).symbols().into_iter().next().unwrap();
        let poly = Poly::univariate(x, &[int(-6), int(2)]);
        let pending = [(0usize, &poly, false)];
        match eliminate_polys(&pending, Limits::default()) {
            Some(Elimination::Univariate {
                poly: p,
                derived,
                tier,
                ..
            }) => {
                assert_eq!(p, poly);
                assert!(!derived);
                assert_eq!(tier, Tier::Pending);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconsistent_pair() {
        let mut pf = pf_upto(5);
        let x = pf.evaluate(2).symbols().into_iter().next().unwrap();
        let y = pf.evaluate(3).symbols().into_iter().next().unwrap();
        let a = &Poly::symbol(x) - &Poly::symbol(y);
        let b = &(&Poly::symbol(x) - &Poly::symbol(y)) - &Poly::one();
        let pending = [(0usize, &a, true), (1usize, &b, true)];
        match eliminate_polys(&pending, Limits::default()) {
            Some(Elimination::Inconsistent { sources, .. }) => assert_eq!(sources, vec![0, 1]),
            other => panic!("unexpected {other:?}"),
        }
    }
}

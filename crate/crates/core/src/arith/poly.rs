use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Opaque handle for an unknown value. Ids are handed out by
/// [`PartialFunction`](super::PartialFunction) in allocation order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub(crate) u32);

impl Symbol {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// Product of symbol powers, factors sorted by symbol with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Symbol, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn of(symbol: Symbol) -> Self {
        Monomial {
            factors: vec![(symbol, 1)],
        }
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, symbol: Symbol) -> u32 {
        self.factors
            .iter()
            .find(|&&(s, _)| s == symbol)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn without(&self, symbol: Symbol) -> Monomial {
        Monomial {
            factors: self
                .factors
                .iter()
                .copied()
                .filter(|&(s, _)| s != symbol)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = self.factors[i];
            let (b, eb) = other.factors[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    factors.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { factors }
    }
}

// Degree first, then lexicographic on the sorted factor list.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Storage is canonical: no zero coefficients and monomials kept in
/// degree-lexicographic order, so equal polynomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(value: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), value);
        p
    }

    pub fn symbol(symbol: Symbol) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::of(symbol), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Builds `c0 + c1*s + c2*s^2 + ...` from ascending coefficients.
    pub fn univariate(symbol: Symbol, coefficients: &[Rational]) -> Self {
        Poly::from_terms(coefficients.iter().enumerate().map(|(e, c)| {
            let m = if e == 0 {
                Monomial::one()
            } else {
                Monomial {
                    factors: vec![(symbol, e as u32)],
                }
            };
            (m, c.clone())
        }))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coefficient;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, symbol: Symbol) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(symbol))
            .max()
            .unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|&(s, _)| s))
            .collect()
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        self.terms.keys().any(|m| m.degree_in(symbol) > 0)
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every occurrence of `symbol` by `value`.
    pub fn substitute(&self, symbol: Symbol, value: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(symbol);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
            } else {
                out.add_term(m.without(symbol), c * pow_rational(value, e));
            }
        }
        out
    }

    /// Replaces every occurrence of `symbol` by the polynomial `value`.
    pub fn substitute_poly(&self, symbol: Symbol, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (m, c) in &self.terms {
            let e = m.degree_in(symbol) as usize;
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = m.without(symbol);
            for (vm, vc) in &powers[e].terms {
                out.add_term(rest.mul(vm), c * vc);
            }
        }
        out
    }

    /// Substitutes every symbol for which `known` yields a value.
    pub fn fold<'a>(&self, known: impl Fn(Symbol) -> Option<&'a Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coefficient = c.clone();
            let mut rest = Vec::with_capacity(m.factors.len());
            for &(s, e) in &m.factors {
                match known(s) {
                    Some(v) => coefficient *= pow_rational(v, e),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial { factors: rest }, coefficient);
        }
        out
    }

    /// Coefficient `c` when the polynomial reads `c*symbol + rest` with
    /// `symbol` absent from `rest`.
    pub fn linear_coefficient(&self, symbol: Symbol) -> Option<Rational> {
        let mut found = None;
        for (m, c) in &self.terms {
            match m.degree_in(symbol) {
                0 => {}
                1 if m.factors.len() == 1 => found = Some(c.clone()),
                _ => return None,
            }
        }
        found
    }

    /// The single symbol and ascending coefficients, if exactly one symbol occurs.
    pub fn as_univariate(&self) -> Option<(Symbol, Vec<Rational>)> {
        let symbols = self.symbols();
        if symbols.len() != 1 {
            return None;
        }
        let symbol = *symbols.iter().next().unwrap();
        let degree = self.degree_in(symbol) as usize;
        let mut coefficients = vec![Rational::zero(); degree + 1];
        for (m, c) in &self.terms {
            coefficients[m.degree_in(symbol) as usize] = c.clone();
        }
        Some((symbol, coefficients))
    }

    /// Scales to integer coefficients with gcd 1 and a positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return Poly::zero();
        };
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = Rational::new(den, num);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn display_with(&self, name: impl Fn(Symbol) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .factors
                .iter()
                .map(|&(s, e)| {
                    if e == 1 {
                        name(s)
                    } else {
                        format!("{}^{}", name(s), e)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&magnitude.to_string());
            } else {
                if !magnitude.is_one() {
                    out.push_str(&magnitude.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

fn pow_rational(value: &Rational, exponent: u32) -> Rational {
    num_traits::pow(value.clone(), exponent as usize)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|s| s.to_string()))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn x(i: u32) -> Poly {
        Poly::symbol(Symbol(i))
    }

    fn c(v: i64) -> Poly {
        Poly::constant(int(v))
    }

    #[test]
    fn substitute_elimination_step() {
        // 3*x2 - 2 - x4 with x2 := 2 gives 4 - x4
        let (x2, x4) = (Symbol(0), Symbol(1));
        let p = &(&c(3) * &x(0)) - &(&c(2) + &x(1));
        let q = p.substitute(x2, &int(2));
        assert_eq!(q, &c(4) - &Poly::symbol(x4));
    }

    #[test]
    fn substitute_zero_kills_product() {
        let p = &x(0) * &x(1);
        assert!(p.substitute(Symbol(0), &int(0)).is_zero());
    }

    #[test]
    fn substitute_root_of_quadratic() {
        let p = &(&(&x(0) * &x(0)) - &(&c(5) * &x(0))) + &c(4);
        assert!(p.substitute(Symbol(0), &int(4)).is_zero());
        assert_eq!(p.substitute(Symbol(0), &int(2)), c(-2));
        assert_eq!(p.degree_in(Symbol(0)), 2);
    }

    #[test]
    fn canonical_storage() {
        let a = &(&x(1) * &x(0)) + &c(2);
        let b = &c(2) + &(&x(0) * &x(1));
        assert_eq!(a, b);
        let z = &a - &b;
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn primitive_and_display() {
        let p = Poly::univariate(Symbol(0), &[int(8), int(-16), int(6)]);
        let q = p.primitive();
        assert_eq!(q, Poly::univariate(Symbol(0), &[int(4), int(-8), int(3)]));
        assert_eq!(q.display_with(|_| "x".into()), "3*x^2 - 8*x + 4");
        let neg = p.scale(&Rational::new((-1).into(), 3.into()));
        assert_eq!(neg.primitive(), q);
    }

    #[test]
    fn linear_coefficient_requires_isolated_symbol() {
        let p = &(&c(3) * &x(0)) + &(&x(1) * &x(2));
        assert_eq!(p.linear_coefficient(Symbol(0)), Some(int(3)));
        assert_eq!(p.linear_coefficient(Symbol(1)), None);
        let q = &(&x(0) * &x(0)) + &x(0);
        assert_eq!(q.linear_coefficient(Symbol(0)), None);
        assert_eq!(p.linear_coefficient(Symbol(5)), None);
    }

    #[test]
    fn substitute_poly_composes() {
        // x0*x1 with x1 := 2*x0 + 1 gives 2*x0^2 + x0
        let p = &x(0) * &x(1);
        let v = &(&c(2) * &x(0)) + &c(1);
        let q = p.substitute_poly(Symbol(1), &v);
        assert_eq!(q, Poly::univariate(Symbol(0), &[int(0), int(1), int(2)]));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -4i64..5), 0..5).prop_map(|terms| {
            let mut p = Poly::zero();
            for (a, b, s, coef) in terms {
                let mut m = Poly::constant(int(coef));
                for _ in 0..a {
                    m = &m * &x(s);
                }
                for _ in 0..b {
                    m = &m * &x((s + 1) % 3);
                }
                p = &p + &m;
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), d in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &d, &a + &(&b + &d));
            prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
            prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
        }

        #[test]
        fn substitute_is_additive(a in arb_poly(), b in arb_poly(), v in -3i64..4, s in 0u32..3) {
            let v = int(v);
            let s = Symbol(s);
            prop_assert_eq!((&a + &b).substitute(s, &v), &a.substitute(s, &v) + &b.substitute(s, &v));
            prop_assert_eq!((&a + &b).substitute(s, &v).degree_in(s), 0);
            prop_assert_eq!(a.substitute(s, &v), a.substitute_poly(s, &Poly::constant(v.clone())));
        }
    }
}

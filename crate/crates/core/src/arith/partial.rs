use std::collections::BTreeMap;

use num_traits::One;

use super::{factorize, format_rational, prime_power, ArithError, Poly, Rational, Site, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiteValue {
    Known(Rational),
    Unknown(Symbol),
}

/// A multiplicative function known on some prime powers and symbolic on the
/// rest. `f(1) = 1` holds implicitly.
///
/// Every site owns at most one symbol; symbols are never reused after the
/// site becomes known.
#[derive(Clone, Debug, Default)]
pub struct PartialFunction {
    sites: BTreeMap<u64, (Site, SiteValue)>,
    symbol_sites: Vec<Site>,
}

impl PartialFunction {
    pub fn new() -> Self {
        PartialFunction::default()
    }

    /// Tracks `site`, allocating a symbol if it was not seen before.
    pub fn register(&mut self, site: Site) -> &SiteValue {
        let next = self.symbol_sites.len() as u32;
        let entry = self
            .sites
            .entry(site.value())
            .or_insert_with(|| (site, SiteValue::Unknown(Symbol(next))));
        if matches!(entry.1, SiteValue::Unknown(Symbol(id)) if id == next) {
            self.symbol_sites.push(site);
        }
        &entry.1
    }

    pub fn get(&self, site: u64) -> Option<&SiteValue> {
        self.sites.get(&site).map(|(_, v)| v)
    }

    pub fn known(&self, site: u64) -> Option<&Rational> {
        match self.get(site) {
            Some(SiteValue::Known(v)) => Some(v),
            _ => None,
        }
    }

    pub fn site_of(&self, symbol: Symbol) -> Site {
        self.symbol_sites[symbol.0 as usize]
    }

    pub fn symbol_of(&self, site: u64) -> Option<Symbol> {
        match self.get(site) {
            Some(SiteValue::Unknown(s)) => Some(*s),
            _ => None,
        }
    }

    /// Value of the site behind `symbol`, once assigned.
    pub fn symbol_value(&self, symbol: Symbol) -> Option<&Rational> {
        self.known(self.site_of(symbol).value())
    }

    pub fn sites(&self) -> impl Iterator<Item = (&Site, &SiteValue)> {
        self.sites.values().map(|(s, v)| (s, v))
    }

    pub fn unknown_sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.sites.values().filter_map(|(s, v)| match v {
            SiteValue::Unknown(_) => Some(*s),
            SiteValue::Known(_) => None,
        })
    }

    pub fn known_table(&self) -> BTreeMap<u64, Rational> {
        self.sites
            .iter()
            .filter_map(|(&n, (_, v))| match v {
                SiteValue::Known(r) => Some((n, r.clone())),
                SiteValue::Unknown(_) => None,
            })
            .collect()
    }

    /// `f(n)` as a polynomial: the product over the prime-power factors of
    /// `n` of their known value or symbol.
    pub fn evaluate(&mut self, n: u64) -> Poly {
        let mut out = Poly::one();
        for site in factorize(n).sites() {
            let factor = match self.register(site) {
                SiteValue::Known(v) => Poly::constant(v.clone()),
                SiteValue::Unknown(s) => Poly::symbol(*s),
            };
            out = &out * &factor;
        }
        out
    }

    /// Like [`evaluate`](Self::evaluate) but never allocates; untracked
    /// sites yield `None`.
    pub fn evaluate_tracked(&self, n: u64) -> Option<Poly> {
        let mut out = Poly::one();
        for site in factorize(n).sites() {
            let factor = match self.get(site.value())? {
                SiteValue::Known(v) => Poly::constant(v.clone()),
                SiteValue::Unknown(s) => Poly::symbol(*s),
            };
            out = &out * &factor;
        }
        Some(out)
    }

    /// Records `f(site) = value`. Reassigning the same value is a no-op.
    pub fn assign(&mut self, site: u64, value: Rational) -> Result<(), ArithError> {
        let resolved = prime_power(site).ok_or(ArithError::NotPrimePower(site))?;
        self.register(resolved);
        let slot = &mut self.sites.get_mut(&site).expect("registered above").1;
        match slot {
            SiteValue::Known(existing) if *existing == value => Ok(()),
            SiteValue::Known(existing) => Err(ArithError::Conflict {
                site: resolved,
                existing: format_rational(existing),
                attempted: format_rational(&value),
            }),
            SiteValue::Unknown(_) => {
                *slot = SiteValue::Known(value);
                Ok(())
            }
        }
    }

    /// Numeric `f(n)` when every prime-power factor is known.
    pub fn value_at(&self, n: u64) -> Option<Rational> {
        let mut out = Rational::one();
        for site in factorize(n).sites() {
            out *= self.known(site.value())?;
        }
        Some(out)
    }
}

//! Exact Poisson series in the angles `(M, ω)`.
//!
//! A term is `C(e, η, s, c) · a^p · n^k · (R⊕/a)^r · ε^m · cos|sin(j M + i ω)`
//! with `C` an exact [`Coefficient`]. Terms are keyed by everything except the
//! coefficient, so a series has at most one term per key and iterates in key
//! order.

mod coeff;
mod eval;
mod poly;
mod text;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use coeff::Coefficient;
pub use eval::{CompiledSeries, EvalPoint};
pub use poly::{Monomial, Polynomial};

use crate::error::{Error, Result};
use crate::scalar::Exact;
use crate::toy_model::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Cos,
    Sin,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Cos => "cos",
            Kind::Sin => "sin",
        }
    }
}

/// Everything that identifies a term apart from its coefficient.
///
/// Field order is the sort order (and the column order of the text format).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub eps_order: u32,
    pub a_power: i32,
    pub n_power: u32,
    pub roa_power: u32,
    pub kind: Kind,
    pub m_mult: i32,
    pub w_mult: i32,
}

impl TermKey {
    /// Constant (`cos 0`) key with unit factors.
    pub const UNIT: TermKey = TermKey {
        eps_order: 0,
        a_power: 0,
        n_power: 0,
        roa_power: 0,
        kind: Kind::Cos,
        m_mult: 0,
        w_mult: 0,
    };

    pub fn new(kind: Kind, m_mult: i32, w_mult: i32) -> Self {
        TermKey {
            kind,
            m_mult,
            w_mult,
            ..Self::UNIT
        }
    }

    pub fn with_factors(mut self, a_power: i32, n_power: u32, roa_power: u32) -> Self {
        self.a_power = a_power;
        self.n_power = n_power;
        self.roa_power = roa_power;
        self
    }

    pub fn with_eps(mut self, eps_order: u32) -> Self {
        self.eps_order = eps_order;
        self
    }

    /// Brings the phase to `(m, w)` lexicographically nonnegative. Returns the
    /// sign to apply to the coefficient, or `None` for an identically zero
    /// `sin 0` term.
    fn normalized(mut self) -> Option<(TermKey, i64)> {
        let mut sign = 1;
        if self.m_mult < 0 || (self.m_mult == 0 && self.w_mult < 0) {
            self.m_mult = -self.m_mult;
            self.w_mult = -self.w_mult;
            if self.kind == Kind::Sin {
                sign = -1;
            }
        }
        if self.kind == Kind::Sin && self.m_mult == 0 && self.w_mult == 0 {
            return None;
        }
        Some((self, sign))
    }

    fn is_constant_phase(&self) -> bool {
        self.m_mult == 0 && self.w_mult == 0
    }
}

/// A single term of a series.
#[derive(Clone, PartialEq)]
pub struct TrigTerm<S> {
    pub key: TermKey,
    pub coeff: Coefficient<S>,
}

impl<S: Exact> fmt::Debug for TrigTerm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrigTerm({:?}, {})", self.key, self.coeff)
    }
}

impl<S: Exact> TrigTerm<S> {
    pub fn new(key: TermKey, coeff: Coefficient<S>) -> Self {
        TrigTerm { key, coeff }
    }
}

/// Collects terms with repeated keys and sums each key once at the end.
struct Accumulator<S> {
    parts: HashMap<TermKey, Vec<Coefficient<S>>>,
}

impl<S: Exact> Accumulator<S> {
    fn new() -> Self {
        Accumulator {
            parts: HashMap::new(),
        }
    }

    fn push(&mut self, key: TermKey, coeff: Coefficient<S>) {
        if coeff.is_zero() {
            return;
        }
        let Some((key, sign)) = key.normalized() else {
            return;
        };
        let coeff = if sign < 0 { coeff.neg() } else { coeff };
        self.parts.entry(key).or_default().push(coeff);
    }

    fn finish(self) -> PoissonSeries<S> {
        let terms = self
            .parts
            .into_iter()
            .filter_map(|(k, v)| {
                let sum = Coefficient::sum(v.iter());
                (!sum.is_zero()).then_some((k, sum))
            })
            .collect();
        PoissonSeries { terms }
    }
}

/// Finite Poisson series with a unique term per [`TermKey`].
#[derive(Clone, PartialEq)]
pub struct PoissonSeries<S> {
    terms: BTreeMap<TermKey, Coefficient<S>>,
}

impl<S: Exact> Default for PoissonSeries<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Exact> PoissonSeries<S> {
    pub fn zero() -> Self {
        PoissonSeries {
            terms: BTreeMap::new(),
        }
    }

    /// The series with a single constant term equal to one.
    pub fn one() -> Self {
        Self::term(TermKey::UNIT, Coefficient::one())
    }

    pub fn term(key: TermKey, coeff: Coefficient<S>) -> Self {
        Self::from_terms([TrigTerm::new(key, coeff)])
    }

    /// Merges repeated keys and normalizes phases.
    pub fn from_terms(terms: impl IntoIterator<Item = TrigTerm<S>>) -> Self {
        let mut acc = Accumulator::new();
        for t in terms {
            acc.push(t.key, t.coeff);
        }
        acc.finish()
    }

    /// `n` itself (mean motion).
    pub fn mean_motion() -> Self {
        Self::term(TermKey::UNIT.with_factors(0, 1, 0), Coefficient::one())
    }

    /// The semimajor axis `a`.
    pub fn semimajor_axis() -> Self {
        Self::term(TermKey::UNIT.with_factors(1, 0, 0), Coefficient::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &Coefficient<S>)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &TermKey) -> Option<&Coefficient<S>> {
        self.terms.get(key)
    }

    /// Number of coefficient monomials across all terms.
    pub fn monomial_count(&self) -> usize {
        self.terms.values().map(|c| c.numerator().len()).sum()
    }

    pub fn max_eps_order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.eps_order).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            match terms.get_mut(k) {
                Some(slot) => {
                    let sum = slot.add(c);
                    if sum.is_zero() {
                        terms.remove(k);
                    } else {
                        *slot = sum;
                    }
                }
                None => {
                    terms.insert(*k, c.clone());
                }
            }
        }
        PoissonSeries { terms }
    }

    /// Sum of many series with one canonicalization per key.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        S: 'a,
    {
        let mut acc = Accumulator::new();
        for s in items {
            for (k, c) in &s.terms {
                acc.push(*k, c.clone());
            }
        }
        acc.finish()
    }

    pub fn neg(&self) -> Self {
        PoissonSeries {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        PoissonSeries {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (*key, c.scale(k)))
                .collect(),
        }
    }

    pub fn scale_int(&self, num: i64, den: i64) -> Self {
        self.scale(&S::from_frac(num, den))
    }

    /// Multiplies every term by `a^a_power n^n_power (R/a)^roa_power ε^eps`.
    pub fn shift_factors(&self, a_power: i32, n_power: i32, roa_power: i32, eps: i32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut k = *k;
                k.a_power += a_power;
                k.n_power = shifted(k.n_power, n_power, "n");
                k.roa_power = shifted(k.roa_power, roa_power, "R/a");
                k.eps_order = shifted(k.eps_order, eps, "eps");
                (k, c.clone())
            })
            .collect();
        PoissonSeries { terms }
    }

    /// Divides by the mean motion. Fails if a term carries no factor `n`.
    pub fn div_mean_motion(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            if k.n_power == 0 {
                return Err(Error::Internal(format!(
                    "term {k:?} has no factor n to divide by"
                )));
            }
            let mut k = *k;
            k.n_power -= 1;
            terms.insert(k, c.clone());
        }
        Ok(PoissonSeries { terms })
    }

    /// Product with trigonometric linearization. Terms whose ε-order would
    /// exceed `max_eps` are not formed.
    pub fn mul_truncated(&self, other: &Self, max_eps: Option<u32>) -> Self {
        let mut acc = Accumulator::new();
        let half = S::from_frac(1, 2);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let eps = ka.eps_order + kb.eps_order;
                if max_eps.is_some_and(|m| eps > m) {
                    continue;
                }
                let prod = ca.mul(cb);
                if prod.is_zero() {
                    continue;
                }
                let base = TermKey {
                    eps_order: eps,
                    a_power: ka.a_power + kb.a_power,
                    n_power: ka.n_power + kb.n_power,
                    roa_power: ka.roa_power + kb.roa_power,
                    kind: Kind::Cos,
                    m_mult: 0,
                    w_mult: 0,
                };
                if ka.is_constant_phase() || kb.is_constant_phase() {
                    // Constant factor: no linearization needed (cos 0 = 1).
                    let (kind, m, w) = if ka.is_constant_phase() {
                        (kb.kind, kb.m_mult, kb.w_mult)
                    } else {
                        (ka.kind, ka.m_mult, ka.w_mult)
                    };
                    acc.push(
                        TermKey {
                            kind,
                            m_mult: m,
                            w_mult: w,
                            ..base
                        },
                        prod,
                    );
                    continue;
                }
                let half_prod = prod.scale(&half);
                let (dm, dw) = (ka.m_mult - kb.m_mult, ka.w_mult - kb.w_mult);
                let (sm, sw) = (ka.m_mult + kb.m_mult, ka.w_mult + kb.w_mult);
                let diff = |kind| TermKey {
                    kind,
                    m_mult: dm,
                    w_mult: dw,
                    ..base
                };
                let sum = |kind| TermKey {
                    kind,
                    m_mult: sm,
                    w_mult: sw,
                    ..base
                };
                match (ka.kind, kb.kind) {
                    // cos A cos B = ½cos(A−B) + ½cos(A+B)
                    (Kind::Cos, Kind::Cos) => {
                        acc.push(diff(Kind::Cos), half_prod.clone());
                        acc.push(sum(Kind::Cos), half_prod);
                    }
                    // sin A sin B = ½cos(A−B) − ½cos(A+B)
                    (Kind::Sin, Kind::Sin) => {
                        acc.push(diff(Kind::Cos), half_prod.clone());
                        acc.push(sum(Kind::Cos), half_prod.neg());
                    }
                    // sin A cos B = ½sin(A+B) + ½sin(A−B)
                    (Kind::Sin, Kind::Cos) => {
                        acc.push(sum(Kind::Sin), half_prod.clone());
                        acc.push(diff(Kind::Sin), half_prod);
                    }
                    // cos A sin B = ½sin(A+B) − ½sin(A−B)
                    (Kind::Cos, Kind::Sin) => {
                        acc.push(sum(Kind::Sin), half_prod.clone());
                        acc.push(diff(Kind::Sin), half_prod.neg());
                    }
                }
            }
        }
        acc.finish()
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, None)
    }

    /// Multiplies by a coefficient-only factor (no change of key).
    pub fn mul_coeff(&self, factor: &Coefficient<S>) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c.mul(factor)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        PoissonSeries { terms }
    }

    /// Drops every term of ε-order above `max_eps`.
    pub fn truncate(&self, max_eps: u32) -> Self {
        self.filter(|k| k.eps_order <= max_eps)
    }

    /// Terms of ε-order exactly `order`.
    pub fn eps_part(&self, order: u32) -> Self {
        self.filter(|k| k.eps_order == order)
    }

    /// Same series with every term moved to ε-order `order`.
    pub fn at_eps(&self, order: u32) -> Self {
        let mut acc = Accumulator::new();
        for (k, c) in &self.terms {
            acc.push(k.with_eps(order), c.clone());
        }
        acc.finish()
    }

    fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Self {
        PoissonSeries {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to one orbital element.
    ///
    /// Uses `∂η/∂e = −e/η`, `∂s/∂I = c`, `∂c/∂I = −s`, `∂n/∂a = −3n/(2a)` and
    /// `∂(R/a)/∂a = −(R/a)/a`; nothing depends on the node.
    pub fn partial(&self, var: Element) -> Self {
        let mut acc = Accumulator::new();
        for (k, c) in &self.terms {
            match var {
                Element::A => {
                    // d/da of a^p n^k (R/a)^r = (p − 3k/2 − r) a^(p−1) n^k (R/a)^r
                    let twice = 2 * k.a_power - 3 * k.n_power as i32 - 2 * k.roa_power as i32;
                    if twice != 0 {
                        let mut nk = *k;
                        nk.a_power -= 1;
                        acc.push(nk, c.scale(&S::from_frac(twice as i64, 2)));
                    }
                }
                Element::E => acc.push(*k, c.d_e()),
                Element::I => acc.push(*k, c.d_inclination()),
                Element::Raan => {}
                Element::Argp | Element::M => {
                    let mult = if var == Element::M {
                        k.m_mult
                    } else {
                        k.w_mult
                    };
                    if mult == 0 {
                        continue;
                    }
                    let (kind, sign) = match k.kind {
                        Kind::Cos => (Kind::Sin, -mult),
                        Kind::Sin => (Kind::Cos, mult),
                    };
                    acc.push(TermKey { kind, ..*k }, c.scale(&S::from_int(sign as i64)));
                }
            }
        }
        acc.finish()
    }

    /// Average over the mean anomaly: the terms with no `M` in the phase.
    pub fn average_m(&self) -> Self {
        self.filter(|k| k.m_mult == 0)
    }

    /// The terms that depend on the mean anomaly.
    pub fn periodic_m(&self) -> Self {
        self.filter(|k| k.m_mult != 0)
    }

    /// Antiderivative in `M` without integration constant.
    pub fn integrate_m(&self) -> Result<Self> {
        let mut acc = Accumulator::new();
        for (k, c) in &self.terms {
            if k.m_mult == 0 {
                return Err(Error::NonPeriodicIntegrand(format!(
                    "{} {}({}M + {}w) with coefficient {}",
                    k.eps_order,
                    k.kind.as_str(),
                    k.m_mult,
                    k.w_mult,
                    c
                )));
            }
            let (kind, num) = match k.kind {
                Kind::Cos => (Kind::Sin, 1),
                Kind::Sin => (Kind::Cos, -1),
            };
            acc.push(
                TermKey { kind, ..*k },
                c.scale(&S::from_frac(num, k.m_mult as i64)),
            );
        }
        Ok(acc.finish())
    }
}

fn shifted(value: u32, delta: i32, what: &str) -> u32 {
    let v = value as i64 + delta as i64;
    assert!(v >= 0, "negative power of {what} in series factor shift");
    v as u32
}

impl<S: Exact> fmt::Debug for PoissonSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PoissonSeries[\n{}]", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Series};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_frac(n, d)
    }

    fn poly(n: i64) -> Polynomial<Rational> {
        Polynomial::constant(Rational::from_int(n))
    }

    fn trig(kind: Kind, m: i32, w: i32, coeff: Polynomial<Rational>) -> Series {
        Series::term(TermKey::new(kind, m, w), Coefficient::from_poly(coeff))
    }

    #[test]
    fn add_identity_and_inverse() {
        let s = trig(Kind::Cos, 1, 0, poly(2)).add(&trig(Kind::Sin, 2, 2, Polynomial::e()));
        assert_eq!(s.add(&Series::zero()), s);
        assert!(s.add(&s.neg()).is_zero());
        let merged = trig(Kind::Cos, 1, 0, poly(2)).add(&trig(Kind::Cos, 1, 0, poly(3)));
        assert_eq!(merged, trig(Kind::Cos, 1, 0, poly(5)));
    }

    #[test]
    fn product_to_sum() {
        let cos_m = trig(Kind::Cos, 1, 0, poly(1));
        let expected = Series::one()
            .scale(&q(1, 2))
            .add(&trig(Kind::Cos, 2, 0, poly(1)).scale(&q(1, 2)));
        assert_eq!(cos_m.mul(&cos_m), expected);

        let a = trig(Kind::Sin, 1, 2, poly(1));
        let expected = trig(Kind::Sin, 0, 2, poly(1))
            .add(&trig(Kind::Sin, 2, 2, poly(1)))
            .scale(&q(1, 2));
        assert_eq!(a.mul(&cos_m), expected);

        let ecos = trig(Kind::Cos, 1, 0, Polynomial::e());
        let etasin = trig(Kind::Sin, 1, 0, Polynomial::eta());
        let expected =
            trig(Kind::Sin, 2, 0, Polynomial::e().mul(&Polynomial::eta())).scale(&q(1, 2));
        assert_eq!(ecos.mul(&etasin), expected);
    }

    #[test]
    fn phase_normalization() {
        let neg = Series::from_terms([TrigTerm::new(
            TermKey::new(Kind::Sin, -1, 2),
            Coefficient::one(),
        )]);
        assert_eq!(neg, trig(Kind::Sin, 1, -2, poly(-1)));
        let zero = Series::from_terms([TrigTerm::new(
            TermKey::new(Kind::Sin, 0, 0),
            Coefficient::one(),
        )]);
        assert!(zero.is_zero());
    }

    #[test]
    fn partials() {
        // d(n a)/da = −n/2
        let na = Series::mean_motion().shift_factors(1, 0, 0, 0);
        assert_eq!(
            na.partial(Element::A),
            Series::mean_motion().scale(&q(-1, 2))
        );
        // d(η²)/de = −2e
        let eta2 = Series::term(
            TermKey::UNIT,
            Coefficient::from_poly(Polynomial::eta().pow(2)),
        );
        assert_eq!(
            eta2.partial(Element::E),
            Series::term(
                TermKey::UNIT,
                Coefficient::from_poly(Polynomial::e().scale(&q(-2, 1)))
            )
        );
        // d(e sin(2M+2ω))/dω = 2e cos(2M+2ω)
        let s = trig(Kind::Sin, 2, 2, Polynomial::e());
        assert_eq!(
            s.partial(Element::Argp),
            trig(Kind::Cos, 2, 2, Polynomial::e().scale(&q(2, 1)))
        );
        assert!(s.partial(Element::Raan).is_zero());
    }

    #[test]
    fn averaging_and_integration() {
        assert!(trig(Kind::Cos, 1, 0, poly(1)).average_m().is_zero());
        let s = Series::one()
            .scale(&q(3, 1))
            .add(&trig(Kind::Cos, 2, 2, poly(1)));
        assert_eq!(s.average_m(), Series::one().scale(&q(3, 1)));
        let lp = trig(Kind::Cos, 0, 2, poly(1));
        assert_eq!(lp.average_m(), lp);

        assert_eq!(
            trig(Kind::Cos, 2, 0, poly(1)).integrate_m().unwrap(),
            trig(Kind::Sin, 2, 0, poly(1)).scale(&q(1, 2))
        );
        assert_eq!(
            trig(Kind::Sin, 3, 2, poly(1)).integrate_m().unwrap(),
            trig(Kind::Cos, 3, 2, poly(1)).scale(&q(-1, 3))
        );
        assert!(matches!(
            Series::one().scale(&q(5, 1)).integrate_m(),
            Err(Error::NonPeriodicIntegrand(_))
        ));
    }

    #[test]
    fn canonical_equality() {
        let eta2 = Polynomial::eta().pow(2);
        let one_minus_e2 = poly(1).sub(&Polynomial::e().pow(2));
        assert_eq!(
            trig(Kind::Cos, 1, 0, eta2),
            trig(Kind::Cos, 1, 0, one_minus_e2)
        );
        let c2 = Polynomial::c().pow(2);
        let one_minus_s2 = poly(1).sub(&Polynomial::s().pow(2));
        assert_eq!(
            trig(Kind::Sin, 0, 2, c2),
            trig(Kind::Sin, 0, 2, one_minus_s2)
        );
        assert_ne!(
            trig(Kind::Cos, 1, 0, poly(1)),
            trig(Kind::Sin, 1, 0, poly(1))
        );
    }
}

//! Rational functions `N(e, η, s, c) / (e^p η^q)`.
//!
//! Denominators containing `(1 + η)` are accepted on construction and rewritten
//! through `1/(1 + η) = (1 − η)/e²`, so the stored form only carries powers of
//! `e` and `η`. Since `e` and `η` are coprime in the quotient ring, the minimal
//! exponents are unique and the canonical form below is a normal form.

use std::fmt;

use super::poly::Polynomial;
use crate::scalar::{Exact, Real};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coefficient<S> {
    num: Polynomial<S>,
    e_den: u32,
    eta_den: u32,
}

impl<S: Exact> Coefficient<S> {
    pub fn zero() -> Self {
        Coefficient {
            num: Polynomial::zero(),
            e_den: 0,
            eta_den: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(value: S) -> Self {
        Self::from_poly(Polynomial::constant(value))
    }

    pub fn from_poly(num: Polynomial<S>) -> Self {
        Coefficient {
            num,
            e_den: 0,
            eta_den: 0,
        }
    }

    /// `num / (e^e_den · η^eta_den · (1+η)^one_plus_eta_den)`, canonicalized.
    pub fn new(num: Polynomial<S>, e_den: u32, eta_den: u32, one_plus_eta_den: u32) -> Self {
        let one_minus_eta = Polynomial::one().sub(&Polynomial::eta());
        let num = num.mul(&one_minus_eta.pow(one_plus_eta_den));
        Coefficient {
            num,
            e_den: e_den + 2 * one_plus_eta_den,
            eta_den,
        }
        .canonical()
    }

    pub fn numerator(&self) -> &Polynomial<S> {
        &self.num
    }

    /// `(p, q)` in `e^p η^q`.
    pub fn denominator(&self) -> (u32, u32) {
        (self.e_den, self.eta_den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels common factors of `e` and `η` between numerator and denominator.
    fn canonical(mut self) -> Self {
        if self.num.is_zero() {
            self.e_den = 0;
            self.eta_den = 0;
            return self;
        }
        let k = self.e_den.min(self.num.min_e_degree());
        if k > 0 {
            self.num = self.num.div_e_pow(k);
            self.e_den -= k;
        }
        while self.eta_den > 0 {
            match self.num.div_eta() {
                Some(q) => {
                    self.num = q;
                    self.eta_den -= 1;
                }
                None => break,
            }
        }
        self
    }

    /// Numerator rewritten over a larger denominator `e^p η^q` (no canonicalization).
    fn lifted(&self, e_den: u32, eta_den: u32) -> Polynomial<S> {
        debug_assert!(e_den >= self.e_den && eta_den >= self.eta_den);
        self.num
            .mul_e_pow(e_den - self.e_den)
            .mul_eta_pow(eta_den - self.eta_den)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum([self, other])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Coefficient {
            num: self.num.neg(),
            e_den: self.e_den,
            eta_den: self.eta_den,
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Coefficient {
            num: self.num.scale(k),
            e_den: self.e_den,
            eta_den: self.eta_den,
        }
        .canonical()
    }

    /// Sum over a common denominator with a single final canonicalization.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>) -> Self
    where
        S: 'a,
    {
        let items: Vec<&Self> = items.into_iter().filter(|c| !c.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let e_den = items.iter().map(|c| c.e_den).max().unwrap_or(0);
        let eta_den = items.iter().map(|c| c.eta_den).max().unwrap_or(0);
        let mut num = Polynomial::zero();
        for c in items {
            num = num.add(&c.lifted(e_den, eta_den));
        }
        Coefficient {
            num,
            e_den,
            eta_den,
        }
        .canonical()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Coefficient {
            num: self.num.mul(&other.num),
            e_den: self.e_den + other.e_den,
            eta_den: self.eta_den + other.eta_den,
        }
        .canonical()
    }

    /// Total derivative with respect to `e`, using `dη/de = −e/η`.
    ///
    /// For `N / (e^p η^q)` the result is
    /// `(e η² N_e − e² η N_η − p η² N + q e² N) / (e^(p+1) η^(q+2))`.
    pub fn d_e(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let e = Polynomial::<S>::e();
        let eta = Polynomial::<S>::eta();
        let eta2 = eta.mul(&eta);
        let e2 = e.mul(&e);
        let mut num = e.mul(&eta2).mul(&self.num.d_e());
        num = num.sub(&e2.mul(&eta).mul(&self.num.d_eta()));
        if self.e_den > 0 {
            num = num.sub(&eta2.mul(&self.num).scale(&S::from_int(self.e_den as i64)));
        }
        if self.eta_den > 0 {
            num = num.add(&e2.mul(&self.num).scale(&S::from_int(self.eta_den as i64)));
        }
        Coefficient {
            num,
            e_den: self.e_den + 1,
            eta_den: self.eta_den + 2,
        }
        .canonical()
    }

    /// Derivative with respect to the inclination: `ds/dI = c`, `dc/dI = −s`.
    pub fn d_inclination(&self) -> Self {
        let num = self
            .num
            .d_s()
            .mul(&Polynomial::c())
            .sub(&self.num.d_c().mul(&Polynomial::s()));
        Coefficient {
            num,
            e_den: self.e_den,
            eta_den: self.eta_den,
        }
        .canonical()
    }

    /// Numerical value; errors report the offending denominator factor.
    pub fn evaluate<T: Real>(&self, e: T, eta: T, s: T, c: T) -> T {
        let mut value = self.num.evaluate(e, eta, s, c);
        if self.e_den > 0 {
            value = value / e.powi(self.e_den as i32);
        }
        if self.eta_den > 0 {
            value = value / eta.powi(self.eta_den as i32);
        }
        value
    }

    /// Text form of the denominator: `1`, `e^2`, `e*eta^3`, ...
    pub fn denominator_string(&self) -> String {
        let mut parts = Vec::new();
        match self.e_den {
            0 => {}
            1 => parts.push("e".to_string()),
            p => parts.push(format!("e^{p}")),
        }
        match self.eta_den {
            0 => {}
            1 => parts.push("eta".to_string()),
            q => parts.push(format!("eta^{q}")),
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl<S: Exact> fmt::Display for Coefficient<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e_den == 0 && self.eta_den == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.denominator_string())
        }
    }
}

impl<S: Exact> fmt::Debug for Coefficient<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coefficient({self})")
    }
}

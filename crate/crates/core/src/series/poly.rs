//! Polynomials in `(e, η, s, c)` reduced modulo `η² = 1 − e²` and `c² = 1 − s²`.
//!
//! Every polynomial is kept in its unique reduced representative: the degree
//! in `η` and in `c` of each monomial is at most one. The monomials
//! `e^i η^j s^k c^l` with `j, l ∈ {0, 1}` form a basis of the quotient ring,
//! so two reduced polynomials are equal as ring elements exactly when their
//! term lists are identical.

use std::collections::HashMap;
use std::fmt;

use crate::scalar::{Exact, Real};

/// Packed exponent vector. Ordering is graded lexicographic on `(e, η, s, c)`.
///
/// Layout (most significant first): total degree, `e`, `η`, `s`, `c`. Adding two
/// packed values adds every field, which is how monomials multiply.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u64);

const DEG_SHIFT: u32 = 48;
const E_SHIFT: u32 = 32;
const ETA_SHIFT: u32 = 24;
const S_SHIFT: u32 = 8;
const FIELD16: u64 = 0xffff;
const FIELD8: u64 = 0xff;

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn new(e: u32, eta: u32, s: u32, c: u32) -> Self {
        let deg = (e + eta + s + c) as u64;
        Monomial(
            (deg << DEG_SHIFT)
                | ((e as u64) << E_SHIFT)
                | ((eta as u64) << ETA_SHIFT)
                | ((s as u64) << S_SHIFT)
                | c as u64,
        )
    }

    pub fn e(self) -> u32 {
        ((self.0 >> E_SHIFT) & FIELD16) as u32
    }

    pub fn eta(self) -> u32 {
        ((self.0 >> ETA_SHIFT) & FIELD8) as u32
    }

    pub fn s(self) -> u32 {
        ((self.0 >> S_SHIFT) & FIELD16) as u32
    }

    pub fn c(self) -> u32 {
        (self.0 & FIELD8) as u32
    }

    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    fn raw_product(self, other: Monomial) -> Monomial {
        Monomial(self.0 + other.0)
    }

    fn with(self, e: u32, eta: u32, s: u32, c: u32) -> Monomial {
        Monomial::new(e, eta, s, c)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "e^{}η^{}s^{}c^{}",
            self.e(),
            self.eta(),
            self.s(),
            self.c()
        )
    }
}

/// Expands a monomial with arbitrary `η`, `c` degrees into reduced monomials
/// with integer weights.
fn reduce_monomial(m: Monomial, out: &mut Vec<(Monomial, i64)>) {
    let (e, eta, s, c) = (m.e(), m.eta(), m.s(), m.c());
    if eta <= 1 && c <= 1 {
        out.push((m, 1));
        return;
    }
    // η^eta = η^(eta mod 2) (1 − e²)^(eta div 2), same for c with s.
    let eta_pairs = eta / 2;
    let c_pairs = c / 2;
    let eta_terms = binomial_row(eta_pairs);
    let c_terms = binomial_row(c_pairs);
    for (i, bi) in eta_terms.iter().enumerate() {
        for (j, bj) in c_terms.iter().enumerate() {
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            out.push((
                Monomial::new(e + 2 * i as u32, eta % 2, s + 2 * j as u32, c % 2),
                sign * bi * bj,
            ));
        }
    }
}

fn binomial_row(n: u32) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 0..n as i64 {
        let next = row[k as usize] * (n as i64 - k) / (k + 1);
        row.push(next);
    }
    row
}

/// Reduced polynomial with exact coefficients, sorted by [`Monomial`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<S> {
    terms: Vec<(Monomial, S)>,
}

impl<S: Exact> Default for Polynomial<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Exact> Polynomial<S> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(value: S) -> Self {
        if value.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: vec![(Monomial::ONE, value)],
        }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// Single monomial `coeff · e^e η^eta s^s c^c`, reduced.
    pub fn monomial(coeff: S, e: u32, eta: u32, s: u32, c: u32) -> Self {
        Self::from_terms([(Monomial::new(e, eta, s, c), coeff)])
    }

    pub fn e() -> Self {
        Self::monomial(S::one(), 1, 0, 0, 0)
    }

    pub fn eta() -> Self {
        Self::monomial(S::one(), 0, 1, 0, 0)
    }

    pub fn s() -> Self {
        Self::monomial(S::one(), 0, 0, 1, 0)
    }

    pub fn c() -> Self {
        Self::monomial(S::one(), 0, 0, 0, 1)
    }

    /// Builds a polynomial from arbitrary (possibly unreduced, repeated) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut acc: HashMap<Monomial, S> = HashMap::new();
        let mut scratch = Vec::with_capacity(4);
        for (m, coeff) in terms {
            if coeff.is_zero() {
                continue;
            }
            scratch.clear();
            reduce_monomial(m, &mut scratch);
            for &(rm, w) in &scratch {
                let mut v = coeff.clone();
                if w != 1 {
                    v *= S::from_int(w);
                }
                accumulate(&mut acc, rm, v);
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, S>) -> Self {
        let mut terms: Vec<(Monomial, S)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        terms.sort_unstable_by_key(|(m, _)| *m);
        Polynomial { terms }
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    /// The constant value if the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.as_slice() {
            [] => Some(S::zero()),
            [(m, v)] if *m == Monomial::ONE => Some(v.clone()),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (*m, -v.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    let mut v = v.clone();
                    v *= k;
                    (*m, v)
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, va) = &self.terms[i];
            let (mb, vb) = &other.terms[j];
            match ma.cmp(mb) {
                std::cmp::Ordering::Less => {
                    out.push((*ma, va.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((*mb, vb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut v = va.clone();
                    v += vb;
                    if !v.is_zero() {
                        out.push((*ma, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().cloned());
        Polynomial { terms: out }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut acc: HashMap<Monomial, S> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, va) in &self.terms {
            for (mb, vb) in &other.terms {
                let mut v = va.clone();
                v *= vb;
                let m = ma.raw_product(*mb);
                let (e, eta, s, c) = (m.e(), m.eta(), m.s(), m.c());
                match (eta, c) {
                    (0 | 1, 0 | 1) => accumulate(&mut acc, m, v),
                    (2, 0 | 1) => {
                        accumulate(&mut acc, m.with(e, 0, s, c), v.clone());
                        accumulate(&mut acc, m.with(e + 2, 0, s, c), -v);
                    }
                    (0 | 1, 2) => {
                        accumulate(&mut acc, m.with(e, eta, s, 0), v.clone());
                        accumulate(&mut acc, m.with(e, eta, s + 2, 0), -v);
                    }
                    _ => {
                        accumulate(&mut acc, m.with(e, 0, s, 0), v.clone());
                        accumulate(&mut acc, m.with(e + 2, 0, s, 0), -v.clone());
                        accumulate(&mut acc, m.with(e, 0, s + 2, 0), -v.clone());
                        accumulate(&mut acc, m.with(e + 2, 0, s + 2, 0), v);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `e^k`; ordering is preserved.
    pub fn mul_e_pow(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Monomial::new(m.e() + k, m.eta(), m.s(), m.c()), v.clone()))
                .collect(),
        }
    }

    /// Multiplies by `η^k`.
    pub fn mul_eta_pow(&self, k: u32) -> Self {
        let mut out = self.clone();
        let eta = Self::eta();
        for _ in 0..k {
            out = out.mul(&eta);
        }
        out
    }

    /// Smallest power of `e` over all terms (`u32::MAX` for zero).
    pub fn min_e_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.e())
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Divides by `e^k`. Caller guarantees `k ≤ min_e_degree()`.
    pub fn div_e_pow(&self, k: u32) -> Self {
        debug_assert!(k <= self.min_e_degree() || self.is_zero());
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Monomial::new(m.e() - k, m.eta(), m.s(), m.c()), v.clone()))
                .collect(),
        }
    }

    /// Exact division by `η` in the quotient ring, if possible.
    ///
    /// Writing `P = A + η B` with `A`, `B` free of `η`, `P = η Q` holds iff
    /// `(1 − e²)` divides `A`, and then `Q = B + η A / (1 − e²)`.
    pub fn div_eta(&self) -> Option<Self> {
        // Group the η-free part by (s, c) into dense polynomials in e.
        let mut groups: HashMap<(u32, u32), Vec<S>> = HashMap::new();
        let mut quotient: Vec<(Monomial, S)> = Vec::with_capacity(self.terms.len());
        for (m, v) in &self.terms {
            if m.eta() == 1 {
                quotient.push((Monomial::new(m.e(), 0, m.s(), m.c()), v.clone()));
            } else {
                let dense = groups.entry((m.s(), m.c())).or_default();
                let i = m.e() as usize;
                if dense.len() <= i {
                    dense.resize(i + 1, S::zero());
                }
                dense[i] = v.clone();
            }
        }
        for ((s, c), dense) in groups {
            let q = div_one_minus_e2(dense)?;
            for (i, v) in q.into_iter().enumerate() {
                if !v.is_zero() {
                    quotient.push((Monomial::new(i as u32, 1, s, c), v));
                }
            }
        }
        quotient.sort_unstable_by_key(|(m, _)| *m);
        Some(Polynomial { terms: quotient })
    }

    /// Formal partial derivative with respect to `e`, treating `η` as independent.
    pub fn d_e(&self) -> Self {
        self.formal_derivative(
            |m| m.e(),
            |m| Monomial::new(m.e() - 1, m.eta(), m.s(), m.c()),
        )
    }

    /// Formal partial derivative with respect to `η`.
    pub fn d_eta(&self) -> Self {
        self.formal_derivative(
            |m| m.eta(),
            |m| Monomial::new(m.e(), m.eta() - 1, m.s(), m.c()),
        )
    }

    /// Formal partial derivative with respect to `s`.
    pub fn d_s(&self) -> Self {
        self.formal_derivative(
            |m| m.s(),
            |m| Monomial::new(m.e(), m.eta(), m.s() - 1, m.c()),
        )
    }

    /// Formal partial derivative with respect to `c`.
    pub fn d_c(&self) -> Self {
        self.formal_derivative(
            |m| m.c(),
            |m| Monomial::new(m.e(), m.eta(), m.s(), m.c() - 1),
        )
    }

    fn formal_derivative(
        &self,
        degree: impl Fn(Monomial) -> u32,
        lower: impl Fn(Monomial) -> Monomial,
    ) -> Self {
        let terms = self.terms.iter().filter_map(|(m, v)| {
            let d = degree(*m);
            (d > 0).then(|| {
                let mut v = v.clone();
                v *= S::from_int(d as i64);
                (lower(*m), v)
            })
        });
        Self::from_terms(terms)
    }

    pub fn evaluate<T: Real>(&self, e: T, eta: T, s: T, c: T) -> T {
        let mut sum = T::zero();
        for (m, v) in &self.terms {
            let mut term = T::lit(v.to_f64());
            term = term * e.powi(m.e() as i32) * s.powi(m.s() as i32);
            if m.eta() == 1 {
                term = term * eta;
            }
            if m.c() == 1 {
                term = term * c;
            }
            sum = sum + term;
        }
        sum
    }
}

fn accumulate<S: Exact>(acc: &mut HashMap<Monomial, S>, m: Monomial, v: S) {
    match acc.get_mut(&m) {
        Some(slot) => *slot += &v,
        None => {
            acc.insert(m, v);
        }
    }
}

/// Divides a dense polynomial in `e` by `1 − e²`, returning `None` on a
/// nonzero remainder.
fn div_one_minus_e2<S: Exact>(mut a: Vec<S>) -> Option<Vec<S>> {
    while a.last().is_some_and(|v| v.is_zero()) {
        a.pop();
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < 3 {
        return None;
    }
    // Long division by (e² − 1) from the top, then negate.
    let mut q = vec![S::zero(); a.len() - 2];
    for i in (2..a.len()).rev() {
        let lead = a[i].clone();
        if lead.is_zero() {
            continue;
        }
        q[i - 2] = lead.clone();
        a[i - 2] += &lead;
        a[i] = S::zero();
    }
    if !a[0].is_zero() || !a[1].is_zero() {
        return None;
    }
    Some(q.into_iter().map(|v| -v).collect())
}

impl<S: Exact> fmt::Display for Polynomial<S> {
    /// Highest graded-lex monomial first, e.g. `3/4*e^2*s - eta*c + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, v)) in self.terms.iter().rev().enumerate() {
            let negative = v.is_negative();
            let magnitude = v.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let unit = magnitude.is_one();
            if !unit || *m == Monomial::ONE {
                factors.push(magnitude.to_string());
            }
            for (name, deg) in [("e", m.e()), ("eta", m.eta()), ("s", m.s()), ("c", m.c())] {
                match deg {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    d => factors.push(format!("{name}^{d}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<S: Exact> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

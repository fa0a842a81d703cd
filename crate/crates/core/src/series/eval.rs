//! Numerical evaluation of series.
//!
//! [`CompiledSeries`] converts the exact coefficients to floating point once so
//! that right-hand sides can be evaluated many times during integration.
//! Summation follows the canonical term order, so results are reproducible.

use super::{Kind, PoissonSeries};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Real};
use crate::toy_model::{OrbitalElements, PhysicalConstants};

const SINGULAR_GUARD: f64 = 1e-12;

/// Element-dependent quantities shared by every term of an evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalPoint<T> {
    pub e: T,
    pub eta: T,
    pub s: T,
    pub c: T,
    pub a: T,
    pub n: T,
    pub roa: T,
    pub eps: T,
    pub mean_anomaly: T,
    pub argp: T,
}

impl<T: Real> EvalPoint<T> {
    pub fn new(elems: &OrbitalElements<T>, consts: &PhysicalConstants<T>, eps: T) -> Self {
        let e = elems.e;
        let a = elems.a;
        EvalPoint {
            e,
            eta: (T::one() - e * e).sqrt(),
            s: elems.i.sin(),
            c: elems.i.cos(),
            a,
            n: (consts.mu / (a * a * a)).sqrt(),
            roa: consts.r_earth / a,
            eps,
            mean_anomaly: elems.mean_anomaly,
            argp: elems.argp,
        }
    }
}

#[derive(Clone, Debug)]
struct CompiledTerm<T> {
    // (e, η, s, c) exponents and the coefficient, in canonical order.
    monomials: Vec<(i32, bool, i32, bool, T)>,
    e_den: i32,
    eta_den: i32,
    a_power: i32,
    n_power: i32,
    roa_power: i32,
    eps_order: i32,
    kind: Kind,
    m_mult: T,
    w_mult: T,
}

/// Floating-point image of a [`PoissonSeries`].
#[derive(Clone, Debug)]
pub struct CompiledSeries<T> {
    terms: Vec<CompiledTerm<T>>,
    needs_e: bool,
    needs_eta: bool,
}

impl<T: Real> CompiledSeries<T> {
    pub fn new<S: Exact>(series: &PoissonSeries<S>) -> Self {
        let mut needs_e = false;
        let mut needs_eta = false;
        let terms = series
            .iter()
            .map(|(k, c)| {
                let (e_den, eta_den) = c.denominator();
                needs_e |= e_den > 0;
                needs_eta |= eta_den > 0;
                CompiledTerm {
                    monomials: c
                        .numerator()
                        .terms()
                        .iter()
                        .map(|(m, v)| {
                            (
                                m.e() as i32,
                                m.eta() == 1,
                                m.s() as i32,
                                m.c() == 1,
                                T::lit(v.to_f64()),
                            )
                        })
                        .collect(),
                    e_den: e_den as i32,
                    eta_den: eta_den as i32,
                    a_power: k.a_power,
                    n_power: k.n_power as i32,
                    roa_power: k.roa_power as i32,
                    eps_order: k.eps_order as i32,
                    kind: k.kind,
                    m_mult: T::lit(k.m_mult as f64),
                    w_mult: T::lit(k.w_mult as f64),
                }
            })
            .collect();
        CompiledSeries {
            terms,
            needs_e,
            needs_eta,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, p: &EvalPoint<T>) -> Result<T> {
        if self.needs_e && p.e.abs() < T::lit(SINGULAR_GUARD) {
            return Err(Error::SingularEvaluation {
                factor: "e",
                value: p.e.to_f64().unwrap_or(0.0),
            });
        }
        if self.needs_eta && p.eta.abs() < T::lit(SINGULAR_GUARD) {
            return Err(Error::SingularEvaluation {
                factor: "eta",
                value: p.eta.to_f64().unwrap_or(0.0),
            });
        }
        let mut sum = T::zero();
        for t in &self.terms {
            let mut poly = T::zero();
            for &(ie, heta, is, hc, v) in &t.monomials {
                let mut x = v * p.e.powi(ie) * p.s.powi(is);
                if heta {
                    x = x * p.eta;
                }
                if hc {
                    x = x * p.c;
                }
                poly = poly + x;
            }
            let mut value = poly / (p.e.powi(t.e_den) * p.eta.powi(t.eta_den));
            value = value
                * p.a.powi(t.a_power)
                * p.n.powi(t.n_power)
                * p.roa.powi(t.roa_power)
                * p.eps.powi(t.eps_order);
            let phase = t.m_mult * p.mean_anomaly + t.w_mult * p.argp;
            value = value
                * match t.kind {
                    Kind::Cos => phase.cos(),
                    Kind::Sin => phase.sin(),
                };
            sum = sum + value;
        }
        Ok(sum)
    }
}

impl<S: Exact> PoissonSeries<S> {
    /// Numerical value at the given elements, with `ε` set to `eps`.
    pub fn evaluate<T: Real>(
        &self,
        elems: &OrbitalElements<T>,
        consts: &PhysicalConstants<T>,
        eps: T,
    ) -> Result<T> {
        CompiledSeries::new(self).evaluate(&EvalPoint::new(elems, consts, eps))
    }
}

//! Symbolic identities that a derived theory must satisfy.
//!
//! Both checks work with full ε-graded series: an order-`m` coefficient `X_m`
//! enters as `ε^m/m! · X_m`, and nested evaluation `f(x + δ)` is expanded as
//! `Σ_α ∂^α f · δ^α / α!` with all products truncated at the target order.

use super::{ElementSeries, TheoryArtifacts};
use crate::scalar::Exact;
use crate::series::PoissonSeries;
use crate::toy_model::Element;

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

/// `Σ_{m=1}^{order} ε^m/m! · family[m]` per element.
pub fn graded<S: Exact>(
    family: &[ElementSeries<S>],
    order: usize,
    from: usize,
) -> ElementSeries<S> {
    std::array::from_fn(|j| {
        let parts: Vec<PoissonSeries<S>> = (from..=order.min(family.len() - 1))
            .map(|m| family[m][j].at_eps(m as u32).scale_int(1, factorial(m)))
            .collect();
        PoissonSeries::sum(parts.iter())
    })
}

fn min_eps<S: Exact>(s: &PoissonSeries<S>) -> Option<u32> {
    s.iter().map(|(k, _)| k.eps_order).min()
}

/// Variables that can appear in a series (the node never does).
const ACTIVE: [Element; 5] = [
    Element::A,
    Element::E,
    Element::I,
    Element::Argp,
    Element::M,
];

/// `f(x + δ)` truncated at ε-order `max_eps`, for `δ` with no ε⁰ part.
pub fn substitute<S: Exact>(
    f: &PoissonSeries<S>,
    delta: &ElementSeries<S>,
    max_eps: u32,
) -> PoissonSeries<S> {
    let Some(f_min) = min_eps(f) else {
        return PoissonSeries::zero();
    };
    let mut out = f.truncate(max_eps);
    if f_min >= max_eps {
        return out;
    }
    // Depth-first over multisets of variables in nondecreasing order.
    struct Frame<S> {
        derivative: PoissonSeries<S>,
        product: PoissonSeries<S>,
        last: usize,
        run: i64,
        inv_factorial: (i64, i64),
        depth: u32,
    }
    let mut stack = vec![Frame {
        derivative: f.clone(),
        product: PoissonSeries::one(),
        last: 0,
        run: 0,
        inv_factorial: (1, 1),
        depth: 0,
    }];
    let mut terms = Vec::new();
    while let Some(frame) = stack.pop() {
        for v in frame.last..ACTIVE.len() {
            let d_var = &delta[ACTIVE[v].index()];
            if d_var.is_zero() || f_min + frame.depth + 1 > max_eps {
                continue;
            }
            let derivative = frame.derivative.partial(ACTIVE[v]);
            if derivative.is_zero() {
                continue;
            }
            let product = frame.product.mul_truncated(d_var, Some(max_eps - f_min));
            if product.is_zero() {
                continue;
            }
            let run = if frame.depth > 0 && v == frame.last {
                frame.run + 1
            } else {
                1
            };
            let inv_factorial = (frame.inv_factorial.0, frame.inv_factorial.1 * run);
            terms.push(
                derivative
                    .mul_truncated(&product, Some(max_eps))
                    .scale_int(inv_factorial.0, inv_factorial.1),
            );
            stack.push(Frame {
                derivative,
                product,
                last: v,
                run,
                inv_factorial,
                depth: frame.depth + 1,
            });
        }
    }
    terms.push(out);
    out = PoissonSeries::sum(terms.iter());
    out
}

/// Residual of "inverse then direct" against the identity, through
/// ε-order `order`. Empty for a consistent pair of transforms.
pub fn compose_transforms<S: Exact>(
    direct: &[ElementSeries<S>],
    inverse: &[ElementSeries<S>],
    order: usize,
) -> ElementSeries<S> {
    let max_eps = order as u32;
    let delta_inv = graded(inverse, order, 1);
    let delta_dir = graded(direct, order, 1);
    std::array::from_fn(|j| {
        delta_inv[j]
            .add(&substitute(&delta_dir[j], &delta_inv, max_eps))
            .truncate(max_eps)
    })
}

/// Residual of the transformed osculating flow against the derived mean
/// variations, through ε-order `order`.
///
/// With `x = y + δ(y)` the direct transform, the osculating equations
/// `ẋ = X(x)` hold along the mean flow `ẏ = Y(y)` iff
/// `X(y + δ) − (I + ∂δ/∂y) Y = 0`, which is what is returned.
pub fn verify_mean_by_substitution<S: Exact>(
    theory: &TheoryArtifacts<S>,
    flow: &[ElementSeries<S>],
    order: usize,
) -> ElementSeries<S> {
    let max_eps = order as u32;
    let delta = graded(&theory.direct, order, 1);
    let x_flow = graded(flow, order, 0);
    let y_flow = graded(&theory.mean_variations, order, 0);
    std::array::from_fn(|j| {
        let mut parts = vec![substitute(&x_flow[j], &delta, max_eps), y_flow[j].neg()];
        for el in ACTIVE {
            let d = delta[j].partial(el);
            let y = &y_flow[el.index()];
            if !d.is_zero() && !y.is_zero() {
                parts.push(d.mul_truncated(y, Some(max_eps)).neg());
            }
        }
        PoissonSeries::sum(parts.iter()).truncate(max_eps)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Coefficient, Kind, TermKey};
    use crate::{Rational, Series};

    fn cos_m(eps: u32) -> Series {
        Series::term(
            TermKey::new(Kind::Cos, 1, 0).with_eps(eps),
            Coefficient::one(),
        )
    }

    #[test]
    fn substitution_matches_taylor_series_of_cosine() {
        // cos(M + ε) = cos M − ε sin M − ε²/2 cos M + ε³/6 sin M + …
        let mut delta: ElementSeries<Rational> = Default::default();
        delta[5] = Series::one().at_eps(1);
        let out = substitute(&cos_m(0), &delta, 3);
        let sin_m = |eps| {
            Series::term(
                TermKey::new(Kind::Sin, 1, 0).with_eps(eps),
                Coefficient::one(),
            )
        };
        let expected = Series::sum(
            [
                cos_m(0),
                sin_m(1).neg(),
                cos_m(2).scale_int(-1, 2),
                sin_m(3).scale_int(1, 6),
            ]
            .iter(),
        );
        assert_eq!(out, expected);
    }

    #[test]
    fn substitution_handles_mixed_partials() {
        // f = a·cos M, δ_a = ε, δ_M = ε: f(x+δ) through ε² is
        // a cos M + ε(cos M − a sin M) + ε²(−sin M − a/2 cos M).
        let f = Series::term(
            TermKey::new(Kind::Cos, 1, 0).with_factors(1, 0, 0),
            Coefficient::one(),
        );
        let mut delta: ElementSeries<Rational> = Default::default();
        delta[0] = Series::one().at_eps(1);
        delta[5] = Series::one().at_eps(1);
        let out = substitute(&f, &delta, 2);
        let t = |kind, a, eps, num, den| {
            Series::term(
                TermKey::new(kind, 1, 0).with_factors(a, 0, 0).with_eps(eps),
                Coefficient::one(),
            )
            .scale_int(num, den)
        };
        let expected = Series::sum(
            [
                t(Kind::Cos, 1, 0, 1, 1),
                t(Kind::Cos, 0, 1, 1, 1),
                t(Kind::Sin, 1, 1, -1, 1),
                t(Kind::Sin, 0, 2, -1, 1),
                t(Kind::Cos, 1, 2, -1, 2),
            ]
            .iter(),
        );
        assert_eq!(out, expected);
    }
}

//! Lie transforms for vectorial flows.
//!
//! Every order-`m` object is stored as its Taylor coefficient, so the full
//! quantity is `Σ ε^m/m! · X_m`. The triangles in [`triangle`] propagate these
//! coefficients; [`theory`] solves the homological equation order by order;
//! [`checks`] holds the symbolic identities that validate a derivation.

pub mod cache;
pub mod checks;
pub mod theory;
pub mod triangle;

pub use theory::{derive, derive_with_flow, Frame, Theory, TheoryArtifacts};
pub use triangle::{Linear, Triangle};

use crate::scalar::Exact;
use crate::series::PoissonSeries;
use crate::toy_model::Element;

/// One series per orbital element, in the order `a, e, I, Ω, ω, M`.
pub type ElementSeries<S> = [PoissonSeries<S>; 6];

/// Gradient of each generator component, reused by every operator call.
type Jacobian<S> = [[PoissonSeries<S>; 6]; 6];

/// Generator terms `W_1, W_2, …` with cached partial derivatives.
#[derive(Clone, Default)]
pub struct Generator<S> {
    orders: Vec<ElementSeries<S>>,
    jacobians: Vec<Jacobian<S>>,
}

impl<S: Exact> Generator<S> {
    pub fn new() -> Self {
        Generator {
            orders: Vec::new(),
            jacobians: Vec::new(),
        }
    }

    pub fn from_orders(orders: impl IntoIterator<Item = ElementSeries<S>>) -> Self {
        let mut g = Self::new();
        for w in orders {
            g.push(w);
        }
        g
    }

    pub fn push(&mut self, w: ElementSeries<S>) {
        self.jacobians.push(jacobian(&w));
        self.orders.push(w);
    }

    /// Highest available order.
    pub fn order(&self) -> usize {
        self.orders.len()
    }

    /// `W_i`, `i ≥ 1`.
    pub fn get(&self, i: usize) -> &ElementSeries<S> {
        &self.orders[i - 1]
    }

    pub fn orders(&self) -> &[ElementSeries<S>] {
        &self.orders
    }

    /// Scalar operator `L_i(ψ) = Σ_k ∂ψ/∂x_k W_{k,i}`.
    pub fn lie_scalar(&self, i: usize, psi: &PoissonSeries<S>) -> PoissonSeries<S> {
        lie_operator_scalar(psi, self.get(i))
    }

    /// Vector operator `L*_{j,i}(Φ) = Σ_k (∂Φ_j/∂x_k W_{k,i} − ∂W_{j,i}/∂x_k Φ_k)`.
    pub fn lie_vector(&self, i: usize, phi: &ElementSeries<S>) -> ElementSeries<S> {
        vector_with_jacobian(phi, self.get(i), &self.jacobians[i - 1])
    }
}

fn jacobian<S: Exact>(w: &ElementSeries<S>) -> Jacobian<S> {
    std::array::from_fn(|j| std::array::from_fn(|k| w[j].partial(Element::ALL[k])))
}

/// `Σ_k ∂ψ/∂x_k W_k`.
pub fn lie_operator_scalar<S: Exact>(
    psi: &PoissonSeries<S>,
    w: &ElementSeries<S>,
) -> PoissonSeries<S> {
    let parts: Vec<PoissonSeries<S>> = Element::ALL
        .iter()
        .filter(|&&el| !w[el.index()].is_zero())
        .map(|&el| {
            let d = psi.partial(el);
            if d.is_zero() {
                d
            } else {
                d.mul(&w[el.index()])
            }
        })
        .collect();
    PoissonSeries::sum(parts.iter())
}

/// The vector operator for one generator slice `w`.
pub fn lie_operator_vector<S: Exact>(
    target: &ElementSeries<S>,
    w: &ElementSeries<S>,
) -> ElementSeries<S> {
    vector_with_jacobian(target, w, &jacobian(w))
}

fn vector_with_jacobian<S: Exact>(
    phi: &ElementSeries<S>,
    w: &ElementSeries<S>,
    dw: &Jacobian<S>,
) -> ElementSeries<S> {
    std::array::from_fn(|j| {
        let mut parts = Vec::new();
        if !phi[j].is_zero() {
            parts.push(lie_operator_scalar(&phi[j], w));
        }
        for k in 0..6 {
            if !dw[j][k].is_zero() && !phi[k].is_zero() {
                parts.push(dw[j][k].mul(&phi[k]).neg());
            }
        }
        PoissonSeries::sum(parts.iter())
    })
}

/// `F_{0,m}` for `m = 0..=order` of a function with Taylor seeds `F_{m,0}`
/// (missing seeds are zero).
pub fn scalar_triangle<S: Exact>(
    seeds: &[PoissonSeries<S>],
    generator: &Generator<S>,
    order: usize,
) -> Vec<PoissonSeries<S>> {
    let seed = |m: usize| seeds.get(m).cloned().unwrap_or_default();
    let mut t = Triangle::new(seed(0));
    for d in 1..=order {
        t.extend(seed(d), false, |i, _, f| generator.lie_scalar(i, f));
    }
    (0..=order).map(|m| t.get(0, m).clone()).collect()
}

/// Transform of the coordinate `x_j` itself: `x_{j,0,m}` for `m = 1..=order`
/// (index 0 of the result is unused and zero).
pub fn coordinate_triangle<S: Exact>(
    el: Element,
    generator: &Generator<S>,
    order: usize,
) -> Vec<PoissonSeries<S>> {
    let mut t = Triangle::new(PoissonSeries::zero());
    for _ in 1..=order {
        t.extend(PoissonSeries::zero(), false, coordinate_op(el, generator));
    }
    (0..=order).map(|m| t.get(0, m).clone()).collect()
}

/// `L_i` for a coordinate triangle; the `(0, 0)` slot stands for `x_j`.
pub(crate) fn coordinate_op<S: Exact>(
    el: Element,
    generator: &Generator<S>,
) -> impl Fn(usize, (usize, usize), &PoissonSeries<S>) -> PoissonSeries<S> + '_ {
    move |i, pos, f| {
        if pos == (0, 0) {
            generator.get(i)[el.index()].clone()
        } else {
            generator.lie_scalar(i, f)
        }
    }
}

/// `Φ_{0,m}` for `m = 0..=order` of a flow with seeds `Φ_{m,0}` under a
/// fully known generator.
pub fn vector_triangle<S: Exact>(
    seeds: &[ElementSeries<S>],
    generator: &Generator<S>,
    order: usize,
) -> Vec<ElementSeries<S>> {
    let seed = |m: usize| seeds.get(m).cloned().unwrap_or_default();
    let mut t = Triangle::new(seed(0));
    for d in 1..=order {
        t.extend(seed(d), false, |i, _, f| generator.lie_vector(i, f));
    }
    (0..=order).map(|m| t.get(0, m).clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Kind, TermKey};
    use crate::{Rational, Series};

    fn keplerian() -> ElementSeries<Rational> {
        std::array::from_fn(|j| {
            if j == 5 {
                Series::mean_motion()
            } else {
                Series::zero()
            }
        })
    }

    #[test]
    fn vector_operator_on_keplerian_flow() {
        // W with only the a-component: W_1 = a cos M.
        let mut w: ElementSeries<Rational> = Default::default();
        w[0] = Series::term(
            TermKey::new(Kind::Cos, 1, 0).with_factors(1, 0, 0),
            crate::series::Coefficient::one(),
        );
        let out = lie_operator_vector(&keplerian(), &w);
        // Component a: −∂W_a/∂M · n = a n sin M.
        let expected_a = Series::term(
            TermKey::new(Kind::Sin, 1, 0).with_factors(1, 1, 0),
            crate::series::Coefficient::one(),
        );
        assert_eq!(out[0], expected_a);
        // Component M: ∂n/∂a · W_a = −3/2 n cos M.
        let expected_m = Series::term(
            TermKey::new(Kind::Cos, 1, 0).with_factors(0, 1, 0),
            crate::series::Coefficient::one(),
        )
        .scale_int(-3, 2);
        assert_eq!(out[5], expected_m);
        for j in 1..5 {
            assert!(out[j].is_zero());
        }
    }

    #[test]
    fn zero_generator_is_identity() {
        let g = Generator::from_orders([Default::default(), Default::default()]);
        assert!(lie_operator_vector(&keplerian(), g.get(1))
            .iter()
            .all(Series::is_zero));
        let seeds = [Series::semimajor_axis(), Series::one()];
        let out = scalar_triangle(&seeds, &g, 2);
        assert_eq!(out[0], seeds[0]);
        assert_eq!(out[1], seeds[1]);
        assert!(out[2].is_zero());
    }

    #[test]
    fn coordinate_triangle_second_order() {
        let w1: ElementSeries<Rational> = std::array::from_fn(|j| {
            Series::term(
                TermKey::new(Kind::Cos, 1, 0).with_factors(if j == 0 { 1 } else { 0 }, 0, 0),
                crate::series::Coefficient::one(),
            )
        });
        let w2: ElementSeries<Rational> = std::array::from_fn(|_| Series::one());
        let g = Generator::from_orders([w1.clone(), w2.clone()]);
        let x = coordinate_triangle(Element::A, &g, 2);
        assert_eq!(x[1], w1[0]);
        assert_eq!(x[2], w2[0].add(&g.lie_scalar(1, &w1[0])));
        // The generic triangle agrees when seeded with the function `a`.
        let generic = scalar_triangle(&[Series::semimajor_axis()], &g, 2);
        assert_eq!(generic[1], x[1]);
        assert_eq!(generic[2], x[2]);
    }
}

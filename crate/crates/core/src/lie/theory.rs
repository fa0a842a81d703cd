//! Order-by-order construction of the two mean-element theories.

use std::fmt;

use super::triangle::{Linear, Triangle};
use super::{coordinate_op, coordinate_triangle, vector_triangle, ElementSeries, Generator};
use crate::error::{Error, Result};
use crate::scalar::Exact;
use crate::series::PoissonSeries;
use crate::toy_model::{toy_flow, Element};
use crate::Rational;

/// Choice of the integration constants of the homological equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    /// Mean-to-osculating transformation pure periodic in `M`.
    One,
    /// Generator pure periodic in `M` (all constants zero).
    Two,
}

impl Theory {
    pub fn number(self) -> u8 {
        match self {
            Theory::One => 1,
            Theory::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Theory> {
        match n {
            1 => Some(Theory::One),
            2 => Some(Theory::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theory {}", self.number())
    }
}

/// Set of variables an artifact is a function of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Frame {
    Mean,
    Osculating,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::Mean => "mean",
            Frame::Osculating => "osculating",
        }
    }
}

/// Everything a derivation produces. Vectors are indexed by order; index 0 is
/// the Keplerian flow for `mean_variations` and zero elsewhere.
#[derive(Clone, PartialEq)]
pub struct TheoryArtifacts<S> {
    pub theory: Theory,
    pub order: usize,
    /// `Φ_{j,0,m}`, functions of the mean elements.
    pub mean_variations: Vec<ElementSeries<S>>,
    /// `W_{j,m}`.
    pub generator: Vec<ElementSeries<S>>,
    /// `C_{j,m} = ⟨W_{j,m}⟩_M`.
    pub constants: Vec<ElementSeries<S>>,
    /// `x_{j,0,m}`, mean to osculating, functions of the mean elements.
    pub direct: Vec<ElementSeries<S>>,
    /// `x'_{j,0,m}`, osculating to mean, functions of the osculating elements.
    pub inverse: Vec<ElementSeries<S>>,
    /// `V_{j,m}`.
    pub inverse_generator: Vec<ElementSeries<S>>,
}

impl<S: Exact> fmt::Debug for TheoryArtifacts<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TheoryArtifacts")
            .field("theory", &self.theory)
            .field("order", &self.order)
            .field("term_counts", &self.term_counts())
            .finish()
    }
}

impl<S: Exact> TheoryArtifacts<S> {
    pub fn phi(&self, el: Element, m: usize) -> &PoissonSeries<S> {
        &self.mean_variations[m][el.index()]
    }

    pub fn w(&self, el: Element, m: usize) -> &PoissonSeries<S> {
        &self.generator[m][el.index()]
    }

    pub fn constant(&self, el: Element, m: usize) -> &PoissonSeries<S> {
        &self.constants[m][el.index()]
    }

    pub fn direct(&self, el: Element, m: usize) -> &PoissonSeries<S> {
        &self.direct[m][el.index()]
    }

    pub fn inverse(&self, el: Element, m: usize) -> &PoissonSeries<S> {
        &self.inverse[m][el.index()]
    }

    /// Generator terms as a [`Generator`].
    pub fn generator_terms(&self) -> Generator<S> {
        Generator::from_orders(self.generator.iter().skip(1).cloned())
    }

    /// Total number of terms per order across all artifact families.
    pub fn term_counts(&self) -> Vec<usize> {
        (1..=self.order)
            .map(|m| {
                [
                    &self.mean_variations,
                    &self.generator,
                    &self.constants,
                    &self.direct,
                    &self.inverse,
                ]
                .iter()
                .map(|fam| fam[m].iter().map(PoissonSeries::len).sum::<usize>())
                .sum()
            })
            .collect()
    }
}

/// The `−⟨·⟩_M` of a tentative correction: the constant that makes the
/// correction of that order pure periodic.
pub fn require_pure_periodic<S: Exact>(tentative: &PoissonSeries<S>) -> PoissonSeries<S> {
    tentative.average_m().neg()
}

/// `∂n/∂a · x = −(3n/2a) x`.
fn dn_da<S: Exact>(x: &PoissonSeries<S>) -> PoissonSeries<S> {
    x.shift_factors(-1, 1, 0, 0).scale_int(-3, 2)
}

/// Solves the homological equation of one order given the known part
/// `Φ̃_{j,0,m}` and the integration constants. Returns `(Φ_{j,0,m}, W_{j,m})`.
pub fn solve_homological<S: Exact>(
    tilde: &ElementSeries<S>,
    constants: &ElementSeries<S>,
) -> Result<(ElementSeries<S>, ElementSeries<S>)> {
    let mut phi: ElementSeries<S> = Default::default();
    let mut w: ElementSeries<S> = Default::default();
    let mut periodic_a = PoissonSeries::zero();
    for j in 0..5 {
        phi[j] = tilde[j].average_m();
        let p = tilde[j].periodic_m().integrate_m()?.div_mean_motion()?;
        w[j] = p.add(&constants[j]);
        if j == 0 {
            periodic_a = p;
        }
    }
    phi[5] = tilde[5].average_m().add(&dn_da(&constants[0]));
    let integrand = tilde[5].periodic_m().add(&dn_da(&periodic_a));
    w[5] = integrand
        .integrate_m()?
        .div_mean_motion()?
        .add(&constants[5]);
    Ok((phi, w))
}

/// Derives a theory of the toy model up to `order`.
pub fn derive(theory: Theory, order: usize) -> Result<TheoryArtifacts<Rational>> {
    let flow = toy_flow();
    let seeds: Vec<ElementSeries<Rational>> =
        (0..=flow.max_order()).map(|m| flow.order(m)).collect();
    derive_with_flow(&seeds, theory, order)
}

/// Derives a theory for the flow with Taylor seeds `Φ_{j,m,0}` (index `m`;
/// missing orders are zero). `flow[0]` must depend on nothing but `a`.
pub fn derive_with_flow<S: Exact>(
    flow: &[ElementSeries<S>],
    theory: Theory,
    order: usize,
) -> Result<TheoryArtifacts<S>> {
    if order == 0 {
        return Err(Error::InvalidInput(
            "derivation order must be at least 1".into(),
        ));
    }
    let zero = || -> ElementSeries<S> { Default::default() };
    let keplerian = flow.first().cloned().unwrap_or_default();
    let mut generator = Generator::new();
    let mut flow_triangle = Triangle::new(keplerian.clone());
    let mut coords: [Triangle<PoissonSeries<S>>; 6] =
        std::array::from_fn(|_| Triangle::new(PoissonSeries::zero()));

    let mut mean_variations = vec![keplerian.clone()];
    let mut constants = vec![zero()];
    let mut direct = vec![zero()];

    for m in 1..=order {
        let seed = flow.get(m).cloned().unwrap_or_default();
        flow_triangle.extend(seed, true, |i, _, f| generator.lie_vector(i, f));
        let tilde = flow_triangle.last().clone();

        for el in Element::ALL {
            coords[el.index()].extend(PoissonSeries::zero(), true, coordinate_op(el, &generator));
        }
        let c: ElementSeries<S> = match theory {
            Theory::One => std::array::from_fn(|j| require_pure_periodic(coords[j].last())),
            Theory::Two => zero(),
        };

        let (phi, w) = solve_homological(&tilde, &c)?;
        generator.push(w.clone());

        let correction = generator.lie_vector(m, &keplerian);
        if tilde.plus(&correction) != phi {
            return Err(Error::Internal(format!(
                "homological equation not satisfied at order {m}"
            )));
        }
        flow_triangle.complete(&correction);
        for j in 0..6 {
            coords[j].complete(&w[j]);
        }

        mean_variations.push(phi);
        constants.push(c);
        direct.push(std::array::from_fn(|j| coords[j].last().clone()));
    }

    let (inverse_generator, inverse) = build_inverse_transform(&generator, order);
    let mut w_all = vec![zero()];
    w_all.extend(generator.orders().iter().cloned());

    Ok(TheoryArtifacts {
        theory,
        order,
        mean_variations,
        generator: w_all,
        constants,
        direct,
        inverse,
        inverse_generator,
    })
}

/// Mean-to-osculating corrections `x_{j,0,m}`, `m = 0..=order`.
pub fn build_direct_transform<S: Exact>(
    generator: &Generator<S>,
    order: usize,
) -> Vec<ElementSeries<S>> {
    let per_element: Vec<Vec<PoissonSeries<S>>> = Element::ALL
        .iter()
        .map(|&el| coordinate_triangle(el, generator, order))
        .collect();
    (0..=order)
        .map(|m| std::array::from_fn(|j| per_element[j][m].clone()))
        .collect()
}

/// Inverse generator `V_{j,m}` and osculating-to-mean corrections
/// `x'_{j,0,m}`, both indexed `m = 0..=order`.
///
/// `W` is carried to the new variables as a flow with seeds
/// `B_{j,i,0} = W_{j,i+1}`, and `V_{i+1} = −B_{0,i}`.
pub fn build_inverse_transform<S: Exact>(
    generator: &Generator<S>,
    order: usize,
) -> (Vec<ElementSeries<S>>, Vec<ElementSeries<S>>) {
    let seeds: Vec<ElementSeries<S>> = (1..=order).map(|i| generator.get(i).clone()).collect();
    let b = vector_triangle(&seeds, generator, order - 1);
    let v = Generator::from_orders(b.iter().map(|bi| bi.times(-1)));
    let mut v_all = vec![Default::default()];
    v_all.extend(v.orders().iter().cloned());
    (v_all, build_direct_transform(&v, order))
}

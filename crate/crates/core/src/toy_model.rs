//! The J2-type toy model: element sets, physical constants, and the
//! osculating variation equations as exact series.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{Exact, Real};
use crate::series::{Coefficient, CompiledSeries, EvalPoint, Kind, Polynomial, TermKey, TrigTerm};
use crate::{Rational, Series};

/// The six Keplerian elements, in the order `(a, e, I, Ω, ω, M)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    A,
    E,
    I,
    Raan,
    Argp,
    M,
}

impl Element {
    pub const ALL: [Element; 6] = [
        Element::A,
        Element::E,
        Element::I,
        Element::Raan,
        Element::Argp,
        Element::M,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Short name used in file names and CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            Element::A => "a",
            Element::E => "e",
            Element::I => "i",
            Element::Raan => "raan",
            Element::Argp => "argp",
            Element::M => "M",
        }
    }

    pub fn from_name(name: &str) -> Option<Element> {
        Element::ALL.into_iter().find(|el| el.name() == name)
    }

    pub fn is_angle(self) -> bool {
        !matches!(self, Element::A | Element::E)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants<T> {
    /// Gravitational parameter, km³/s².
    pub mu: T,
    /// Equatorial radius, km.
    pub r_earth: T,
    pub j2: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(mu: T, r_earth: T, j2: T) -> Result<Self> {
        if !(mu > T::zero()) || !(r_earth > T::zero()) || !(j2 >= T::zero() && j2 < T::one()) {
            return Err(Error::InvalidInput(format!(
                "constants out of range: mu = {mu}, R = {r_earth}, J2 = {j2}"
            )));
        }
        Ok(PhysicalConstants { mu, r_earth, j2 })
    }

    /// Earth values of the reference test case.
    pub fn earth() -> Self {
        PhysicalConstants {
            mu: T::lit(398600.4415),
            r_earth: T::lit(6378.1363),
            j2: T::lit(0.001082634),
        }
    }

    pub fn with_j2(self, j2: T) -> Self {
        PhysicalConstants { j2, ..self }
    }
}

/// Keplerian elements: `a` in km, angles in radians.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct OrbitalElements<T> {
    pub a: T,
    pub e: T,
    pub i: T,
    pub raan: T,
    pub argp: T,
    pub mean_anomaly: T,
}

/// Eccentricity and `|sin I|` must stay at least this far from the singular
/// values of the element set.
pub const SINGULARITY_MARGIN: f64 = 0.05;

impl<T: Real> OrbitalElements<T> {
    /// Validated constructor.
    pub fn new(a: T, e: T, i: T, raan: T, argp: T, mean_anomaly: T) -> Result<Self> {
        let el = OrbitalElements {
            a,
            e,
            i,
            raan,
            argp,
            mean_anomaly,
        };
        el.validate()?;
        Ok(el)
    }

    pub fn validate(&self) -> Result<()> {
        let margin = T::lit(SINGULARITY_MARGIN);
        if !(self.a > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "semimajor axis must be positive, got {}",
                self.a
            )));
        }
        if !(self.e >= margin && self.e < T::one()) {
            return Err(Error::InvalidInput(format!(
                "eccentricity must lie in [{SINGULARITY_MARGIN}, 1), got {}",
                self.e
            )));
        }
        if !(self.i > T::zero() && self.i < T::PI()) || self.i.sin().abs() < margin {
            return Err(Error::InvalidInput(format!(
                "inclination must satisfy 0 < I < pi and |sin I| >= {SINGULARITY_MARGIN}, got {}",
                self.i
            )));
        }
        Ok(())
    }

    /// e = 0.2, I = 20°, a = 9500 km, remaining angles zero.
    pub fn test_case() -> Self {
        OrbitalElements {
            a: T::lit(9500.0),
            e: T::lit(0.2),
            i: T::lit(20f64.to_radians()),
            raan: T::zero(),
            argp: T::zero(),
            mean_anomaly: T::zero(),
        }
    }

    pub fn to_array(&self) -> [T; 6] {
        [
            self.a,
            self.e,
            self.i,
            self.raan,
            self.argp,
            self.mean_anomaly,
        ]
    }

    pub fn from_array(x: [T; 6]) -> Self {
        OrbitalElements {
            a: x[0],
            e: x[1],
            i: x[2],
            raan: x[3],
            argp: x[4],
            mean_anomaly: x[5],
        }
    }

    pub fn get(&self, el: Element) -> T {
        self.to_array()[el.index()]
    }
}

/// The osculating flow `dx_j/dt = Σ ε^m/m! Φ_{j,m,0}`.
///
/// Only `m = 0` (Keplerian) and `m = 1` are nonzero for this model.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    orders: [[Series; 6]; 2],
}

impl FlowField {
    /// `Φ_{j,m,0}`; zero for `m ≥ 2`.
    pub fn phi(&self, el: Element, m: usize) -> Series {
        self.orders
            .get(m)
            .map(|o| o[el.index()].clone())
            .unwrap_or_default()
    }

    pub fn order(&self, m: usize) -> [Series; 6] {
        self.orders.get(m).cloned().unwrap_or_default()
    }

    /// Highest order with nonzero terms.
    pub fn max_order(&self) -> usize {
        1
    }
}

fn poly(terms: &[(i64, u32, u32, u32, u32)]) -> Polynomial<Rational> {
    Polynomial::from_terms(terms.iter().map(|&(k, e, eta, s, c)| {
        (
            crate::series::Monomial::new(e, eta, s, c),
            Rational::from_int(k),
        )
    }))
}

/// `prefactor · Σ items`, each item `(kind, M multiplier, ω multiplier, polynomial)`.
fn bracket(
    prefactor: Coefficient<Rational>,
    factors: (i32, u32, u32),
    items: &[(Kind, i32, i32, Polynomial<Rational>)],
) -> Series {
    Series::from_terms(items.iter().map(|(kind, m, w, p)| {
        TrigTerm::new(
            TermKey::new(*kind, *m, *w).with_factors(factors.0, factors.1, factors.2),
            prefactor.mul(&Coefficient::from_poly(p.clone())),
        )
    }))
}

fn frac_coeff(
    num: i64,
    den: i64,
    over_e: u32,
    over_eta: u32,
    times: Polynomial<Rational>,
) -> Coefficient<Rational> {
    Coefficient::new(
        times.scale(&Rational::from_frac(num, den)),
        over_e,
        over_eta,
        0,
    )
}

/// Exact encoding of the osculating variation equations of the toy model.
pub fn build_toy_flow() -> FlowField {
    use Kind::{Cos, Sin};
    let one = || Polynomial::<Rational>::one();
    let keplerian: [Series; 6] = std::array::from_fn(|j| {
        if j == 5 {
            Series::mean_motion()
        } else {
            Series::zero()
        }
    });

    // da/dt = a n (R/a)² (3/4)[...]
    let a_dot = bracket(
        frac_coeff(3, 4, 0, 0, one()),
        (1, 1, 2),
        &[
            (Sin, 1, 0, poly(&[(6, 1, 0, 2, 0), (-4, 1, 0, 0, 0)])),
            (Sin, 1, 2, poly(&[(1, 1, 0, 2, 0)])),
            (Sin, 2, 2, poly(&[(-4, 0, 0, 2, 0)])),
            (Sin, 3, 2, poly(&[(-21, 1, 0, 2, 0)])),
        ],
    );
    // de/dt = n (R/a)² (η/e)(3/8)[...]
    let e_dot = bracket(
        frac_coeff(3, 8, 1, 0, poly(&[(1, 0, 1, 0, 0)])),
        (0, 1, 2),
        &[
            (Sin, 1, 0, poly(&[(6, 1, 1, 2, 0), (-4, 1, 1, 0, 0)])),
            (Sin, 1, 2, poly(&[(1, 1, 1, 2, 0), (-2, 1, 0, 2, 0)])),
            (Sin, 2, 2, poly(&[(-4, 0, 1, 2, 0), (4, 0, 0, 2, 0)])),
            (Sin, 3, 2, poly(&[(-21, 1, 1, 2, 0), (14, 1, 0, 2, 0)])),
        ],
    );
    // dI/dt = n (R/a)² (cs/η)(3/4)[...]
    let i_dot = bracket(
        frac_coeff(3, 4, 0, 1, poly(&[(1, 0, 0, 1, 1)])),
        (0, 1, 2),
        &[
            (Sin, 1, 2, poly(&[(1, 1, 0, 0, 0)])),
            (Sin, 2, 2, poly(&[(-2, 0, 0, 0, 0)])),
            (Sin, 3, 2, poly(&[(-7, 1, 0, 0, 0)])),
        ],
    );
    // dΩ/dt = −n (R/a)² (c/η)(3/4)[...]
    let raan_dot = bracket(
        frac_coeff(-3, 4, 0, 1, poly(&[(1, 0, 0, 0, 1)])),
        (0, 1, 2),
        &[
            (Cos, 0, 0, poly(&[(2, 0, 0, 0, 0)])),
            (Cos, 1, 0, poly(&[(6, 1, 0, 0, 0)])),
            (Cos, 1, 2, poly(&[(1, 1, 0, 0, 0)])),
            (Cos, 2, 2, poly(&[(-2, 0, 0, 0, 0)])),
            (Cos, 3, 2, poly(&[(-7, 1, 0, 0, 0)])),
        ],
    );
    // dω/dt = −n (R/a)² (1/(eη))(3/8){...}
    let argp_dot = bracket(
        frac_coeff(-3, 8, 1, 1, one()),
        (0, 1, 2),
        &[
            (Cos, 0, 0, poly(&[(4, 1, 0, 2, 0), (-4, 1, 0, 0, 0)])),
            (Cos, 2, 2, poly(&[(-4, 1, 0, 2, 0), (4, 1, 0, 0, 0)])),
            (
                Cos,
                1,
                0,
                poly(&[
                    (6, 2, 0, 2, 0),
                    (-8, 2, 0, 0, 0),
                    (6, 0, 0, 2, 0),
                    (-4, 0, 0, 0, 0),
                ]),
            ),
            (
                Cos,
                1,
                2,
                poly(&[(1, 2, 0, 2, 0), (-2, 2, 0, 0, 0), (1, 0, 0, 2, 0)]),
            ),
            (
                Cos,
                3,
                2,
                poly(&[(-7, 2, 0, 2, 0), (14, 2, 0, 0, 0), (-7, 0, 0, 2, 0)]),
            ),
        ],
    );
    // dM/dt − n = −n (R/a)² (1/e)(3/8){...}
    let m_dot = bracket(
        frac_coeff(-3, 8, 1, 0, one()),
        (0, 1, 2),
        &[
            (Cos, 0, 0, poly(&[(12, 1, 0, 2, 0), (-8, 1, 0, 0, 0)])),
            (Cos, 2, 2, poly(&[(-12, 1, 0, 2, 0)])),
            (
                Cos,
                1,
                0,
                poly(&[
                    (42, 2, 0, 2, 0),
                    (-28, 2, 0, 0, 0),
                    (-6, 0, 0, 2, 0),
                    (4, 0, 0, 0, 0),
                ]),
            ),
            (Cos, 1, 2, poly(&[(7, 2, 0, 2, 0), (-1, 0, 0, 2, 0)])),
            (Cos, 3, 2, poly(&[(-49, 2, 0, 2, 0), (7, 0, 0, 2, 0)])),
        ],
    );

    FlowField {
        orders: [keplerian, [a_dot, e_dot, i_dot, raan_dot, argp_dot, m_dot]],
    }
}

/// Shared exact flow, built on first use.
pub fn toy_flow() -> &'static FlowField {
    static FLOW: OnceLock<FlowField> = OnceLock::new();
    FLOW.get_or_init(build_toy_flow)
}

/// Compiled osculating right-hand side `Φ_{j,0,0} + J2 Φ_{j,1,0}`.
#[derive(Clone, Debug)]
pub struct OsculatingRhs<T> {
    first_order: [CompiledSeries<T>; 6],
}

impl<T: Real> OsculatingRhs<T> {
    pub fn new(flow: &FlowField) -> Self {
        OsculatingRhs {
            first_order: std::array::from_fn(|j| CompiledSeries::new(&flow.order(1)[j])),
        }
    }

    /// Element rates: km/s for `a`, 1/s for `e`, rad/s for the angles.
    pub fn rates(
        &self,
        elems: &OrbitalElements<T>,
        consts: &PhysicalConstants<T>,
    ) -> Result<[T; 6]> {
        let p = EvalPoint::new(elems, consts, T::one());
        let mut out = [T::zero(); 6];
        for (j, series) in self.first_order.iter().enumerate() {
            out[j] = consts.j2 * series.evaluate(&p)?;
        }
        out[5] = out[5] + p.n;
        Ok(out)
    }
}

/// One-shot evaluation of the osculating variation equations.
pub fn osculating_rhs<T: Real>(
    elems: &OrbitalElements<T>,
    consts: &PhysicalConstants<T>,
) -> Result<[T; 6]> {
    elems.validate()?;
    OsculatingRhs::new(toy_flow()).rates(elems, consts)
}

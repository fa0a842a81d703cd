//! Reference integration of the osculating flow and the semi-analytic
//! pipeline: osculating to mean, mean propagation, mean to osculating.

mod dopri;
mod kepler;
mod semianalytic;

pub use dopri::{integrate, IntegrationStats, IntegratorConfig};
pub use kepler::{elements_to_cartesian, kepler_solve};
pub use semianalytic::{
    osc_to_mean, propagate_mean, semianalytic_pipeline, FramedSeries, SemiAnalytic, TheoryConfig,
};

use crate::error::Result;
use crate::scalar::Real;
use crate::toy_model::{toy_flow, OrbitalElements, OsculatingRhs, PhysicalConstants};

/// State at one output time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateSample<T> {
    pub t: T,
    /// Osculating elements, `M` wrapped to `[0, 2π)`.
    pub osculating: OrbitalElements<T>,
    pub position: [T; 3],
    pub velocity: [T; 3],
}

impl<T: Real> StateSample<T> {
    /// Sample at `t` of the given osculating elements; `M` may be unwrapped.
    pub fn from_elements(t: T, elems: &OrbitalElements<T>, mu: T) -> Result<Self> {
        let (position, velocity) = elements_to_cartesian(elems, mu)?;
        let mut osculating = *elems;
        osculating.mean_anomaly = wrap_two_pi(elems.mean_anomaly);
        Ok(StateSample {
            t,
            osculating,
            position,
            velocity,
        })
    }
}

/// Angle reduced to `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(x: T) -> T {
    let r = x % T::TAU();
    if r < T::zero() {
        r + T::TAU()
    } else {
        r
    }
}

/// Angle reduced to `(−π, π]`.
pub fn wrap_pi<T: Real>(x: T) -> T {
    let r = wrap_two_pi(x);
    if r > T::PI() {
        r - T::TAU()
    } else {
        r
    }
}

/// Relative tolerances of the anomaly are measured against one turn.
pub(crate) fn angle_caps<T: Real>() -> [Option<T>; 6] {
    let turn = Some(T::TAU());
    [None, None, turn, turn, turn, turn]
}

/// Integrates the osculating variation equations and samples them on `t_grid`.
pub fn propagate_osculating<T: Real>(
    init: &OrbitalElements<T>,
    consts: &PhysicalConstants<T>,
    t_grid: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<(Vec<StateSample<T>>, IntegrationStats)> {
    init.validate()?;
    let rhs = OsculatingRhs::new(toy_flow());
    let (states, stats) = integrate(
        |_, y: &[T; 6]| rhs.rates(&OrbitalElements::from_array(*y), consts),
        T::zero(),
        init.to_array(),
        t_grid,
        cfg,
        angle_caps(),
    )?;
    let samples = t_grid
        .iter()
        .zip(&states)
        .map(|(&t, y)| StateSample::from_elements(t, &OrbitalElements::from_array(*y), consts.mu))
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, stats))
}

/// `0, dt, 2dt, …` up to and including `duration` (when it is a multiple).
pub fn uniform_grid<T: Real>(duration: T, dt: T) -> Vec<T> {
    let count = (duration / dt + T::lit(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(0);
    (0..=count)
        .map(|k| T::from_usize(k).unwrap_or_else(T::zero) * dt)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        use std::f64::consts::PI;
        assert_eq!(wrap_two_pi(-0.5), 2.0 * PI - 0.5);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_pi(PI), PI);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-15);
    }

    #[test]
    fn grid_includes_endpoint() {
        let g = uniform_grid(900.0, 300.0);
        assert_eq!(g, vec![0.0, 300.0, 600.0, 900.0]);
        assert_eq!(uniform_grid(0.0, 300.0), vec![0.0]);
    }

    #[test]
    fn keplerian_reference_run() {
        let init = OrbitalElements::<f64>::test_case();
        let consts = PhysicalConstants::earth().with_j2(0.0);
        let grid = uniform_grid(86400.0, 3600.0);
        let (samples, _) =
            propagate_osculating(&init, &consts, &grid, &IntegratorConfig::reference()).unwrap();
        let n = (consts.mu / init.a.powi(3)).sqrt();
        for s in &samples {
            let o = &s.osculating;
            assert!((o.a - init.a).abs() < 1e-12 * init.a);
            assert!((o.e - init.e).abs() < 1e-12 && (o.i - init.i).abs() < 1e-12);
            assert!(o.raan.abs() < 1e-12 && o.argp.abs() < 1e-12);
            assert!(wrap_pi(o.mean_anomaly - n * s.t).abs() < 1e-10);
        }
    }
}

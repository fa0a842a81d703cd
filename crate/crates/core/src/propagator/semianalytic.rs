//! Numerical use of a derived theory.

use super::{angle_caps, integrate, IntegrationStats, IntegratorConfig, StateSample};
use crate::error::{Error, Result};
use crate::lie::{Frame, Theory, TheoryArtifacts};
use crate::scalar::{Exact, Real};
use crate::series::{CompiledSeries, EvalPoint, PoissonSeries};
use crate::toy_model::{Element, OrbitalElements, PhysicalConstants};

/// Which truncation of a theory is used: the `m`-th order theory carries
/// mean rates to order `m + 1` and the transformation to order `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryConfig {
    pub theory: Theory,
    pub order: usize,
    /// Adds the order `m + 2` rate of the mean semimajor axis.
    pub patched: bool,
}

impl TheoryConfig {
    pub fn new(theory: Theory, order: usize, patched: bool) -> Result<Self> {
        if !(1..=2).contains(&order) {
            return Err(Error::InvalidInput(format!(
                "theory order must be 1 or 2, got {order}"
            )));
        }
        Ok(TheoryConfig {
            theory,
            order,
            patched,
        })
    }

    /// Derivation order the artifacts must reach.
    pub fn required_order(&self) -> usize {
        self.order + 1 + usize::from(self.patched && self.theory == Theory::One)
    }
}

/// A compiled series that only accepts elements of its own frame.
#[derive(Clone, Debug)]
pub struct FramedSeries<T> {
    frame: Frame,
    series: CompiledSeries<T>,
}

impl<T: Real> FramedSeries<T> {
    pub fn new<S: Exact>(frame: Frame, series: &PoissonSeries<S>) -> Self {
        FramedSeries {
            frame,
            series: CompiledSeries::new(series),
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn evaluate(&self, frame: Frame, point: &EvalPoint<T>) -> Result<T> {
        if frame != self.frame {
            return Err(Error::FrameMismatch {
                expected: self.frame.as_str(),
                found: frame.as_str(),
            });
        }
        self.series.evaluate(point)
    }
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

/// `Σ ε^m/m! X_m` over the given orders, as one series in `ε`.
fn scaled_sum<S: Exact>(
    parts: impl IntoIterator<Item = (usize, PoissonSeries<S>)>,
) -> PoissonSeries<S> {
    let scaled: Vec<PoissonSeries<S>> = parts
        .into_iter()
        .map(|(m, x)| x.at_eps(m as u32).scale_int(1, factorial(m)))
        .collect();
    PoissonSeries::sum(scaled.iter())
}

/// Mean rates and both transformations of one theory, compiled for
/// evaluation with `ε = J2`.
#[derive(Clone, Debug)]
pub struct SemiAnalytic<T> {
    config: TheoryConfig,
    rates: [FramedSeries<T>; 6],
    direct: [FramedSeries<T>; 6],
    inverse: [FramedSeries<T>; 6],
}

impl<T: Real> SemiAnalytic<T> {
    pub fn new<S: Exact>(artifacts: &TheoryArtifacts<S>, config: TheoryConfig) -> Result<Self> {
        let config = TheoryConfig::new(config.theory, config.order, config.patched)?;
        if artifacts.theory != config.theory {
            return Err(Error::InvalidInput(format!(
                "artifacts belong to {}, configuration asks for {}",
                artifacts.theory, config.theory
            )));
        }
        let need = config.required_order();
        if artifacts.order < need {
            return Err(Error::MissingArtifact(format!(
                "{} at order {} needs derivation order {need}, have {}",
                config.theory, config.order, artifacts.order
            )));
        }
        let m = config.order;
        let patch = config.patched && config.theory == Theory::One;
        let rates = std::array::from_fn(|j| {
            let mut parts: Vec<_> = (0..=m + 1)
                .map(|k| (k, artifacts.mean_variations[k][j].clone()))
                .collect();
            if patch && j == Element::A.index() {
                parts.push((m + 2, artifacts.mean_variations[m + 2][j].clone()));
            }
            FramedSeries::new(Frame::Mean, &scaled_sum(parts))
        });
        let direct = std::array::from_fn(|j| {
            FramedSeries::new(
                Frame::Mean,
                &scaled_sum((1..=m).map(|k| (k, artifacts.direct[k][j].clone()))),
            )
        });
        let inverse = std::array::from_fn(|j| {
            let top = if j == Element::A.index() { m + 1 } else { m };
            FramedSeries::new(
                Frame::Osculating,
                &scaled_sum((1..=top).map(|k| (k, artifacts.inverse[k][j].clone()))),
            )
        });
        Ok(SemiAnalytic {
            config,
            rates,
            direct,
            inverse,
        })
    }

    pub fn config(&self) -> TheoryConfig {
        self.config
    }

    /// `dy/dt` of the mean elements.
    pub fn mean_rates(
        &self,
        mean: &OrbitalElements<T>,
        consts: &PhysicalConstants<T>,
    ) -> Result<[T; 6]> {
        let p = EvalPoint::new(mean, consts, consts.j2);
        let mut out = [T::zero(); 6];
        for (o, s) in out.iter_mut().zip(&self.rates) {
            *o = s.evaluate(Frame::Mean, &p)?;
        }
        Ok(out)
    }

    /// Osculating elements from mean ones.
    pub fn mean_to_osc(
        &self,
        mean: &OrbitalElements<T>,
        consts: &PhysicalConstants<T>,
    ) -> Result<OrbitalElements<T>> {
        apply(&self.direct, Frame::Mean, mean, consts)
    }

    /// Mean elements from osculating ones.
    pub fn osc_to_mean(
        &self,
        osc: &OrbitalElements<T>,
        consts: &PhysicalConstants<T>,
    ) -> Result<OrbitalElements<T>> {
        apply(&self.inverse, Frame::Osculating, osc, consts)
    }
}

fn apply<T: Real>(
    corrections: &[FramedSeries<T>; 6],
    frame: Frame,
    x: &OrbitalElements<T>,
    consts: &PhysicalConstants<T>,
) -> Result<OrbitalElements<T>> {
    let p = EvalPoint::new(x, consts, consts.j2);
    let mut y = x.to_array();
    for (v, s) in y.iter_mut().zip(corrections) {
        if !s.is_empty() {
            *v = *v + s.evaluate(frame, &p)?;
        }
    }
    Ok(OrbitalElements::from_array(y))
}

/// Initial mean elements of a semi-analytic run.
pub fn osc_to_mean<T: Real>(
    init: &OrbitalElements<T>,
    theory: &SemiAnalytic<T>,
    consts: &PhysicalConstants<T>,
) -> Result<OrbitalElements<T>> {
    init.validate()?;
    theory.osc_to_mean(init, consts)
}

/// Integrates the mean variations; `M` is left unwrapped.
pub fn propagate_mean<T: Real>(
    init_mean: &OrbitalElements<T>,
    theory: &SemiAnalytic<T>,
    consts: &PhysicalConstants<T>,
    t_grid: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<(Vec<OrbitalElements<T>>, IntegrationStats)> {
    let (states, stats) = integrate(
        |_, y: &[T; 6]| theory.mean_rates(&OrbitalElements::from_array(*y), consts),
        T::zero(),
        init_mean.to_array(),
        t_grid,
        cfg,
        angle_caps(),
    )?;
    Ok((
        states
            .into_iter()
            .map(OrbitalElements::from_array)
            .collect(),
        stats,
    ))
}

/// Osculating to mean, mean propagation, and mean to osculating at every
/// output time.
pub fn semianalytic_pipeline<T: Real>(
    init_osc: &OrbitalElements<T>,
    theory: &SemiAnalytic<T>,
    consts: &PhysicalConstants<T>,
    t_grid: &[T],
    cfg: &IntegratorConfig<T>,
) -> Result<(Vec<StateSample<T>>, IntegrationStats)> {
    let mean0 = osc_to_mean(init_osc, theory, consts)?;
    let (means, stats) = propagate_mean(&mean0, theory, consts, t_grid, cfg)?;
    let samples = t_grid
        .iter()
        .zip(&means)
        .map(|(&t, mean)| {
            StateSample::from_elements(t, &theory.mean_to_osc(mean, consts)?, consts.mu)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Series;

    #[test]
    fn config_bounds() {
        assert!(TheoryConfig::new(Theory::One, 0, false).is_err());
        assert!(TheoryConfig::new(Theory::One, 3, false).is_err());
        assert_eq!(
            TheoryConfig::new(Theory::One, 2, true)
                .unwrap()
                .required_order(),
            4
        );
        assert_eq!(
            TheoryConfig::new(Theory::Two, 2, true)
                .unwrap()
                .required_order(),
            3
        );
    }

    #[test]
    fn frame_mismatch_is_refused() {
        let s = FramedSeries::<f64>::new(Frame::Mean, &Series::semimajor_axis());
        let el = OrbitalElements::test_case();
        let p = EvalPoint::new(&el, &PhysicalConstants::earth(), 0.0);
        assert_eq!(s.evaluate(Frame::Mean, &p).unwrap(), 9500.0);
        assert!(matches!(
            s.evaluate(Frame::Osculating, &p),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn scaled_sum_uses_taylor_factors() {
        let one = Series::one();
        let s = scaled_sum([(0, one.clone()), (2, one.clone()), (3, one)]);
        let el = OrbitalElements::<f64>::test_case();
        let v = s.evaluate(&el, &PhysicalConstants::earth(), 0.5).unwrap();
        assert!((v - (1.0 + 0.125 + 0.125 / 6.0)).abs() < 1e-15);
    }
}

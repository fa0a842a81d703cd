//! Kepler's equation and the two-body element-to-state map.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::toy_model::OrbitalElements;

const MAX_ITERATIONS: usize = 50;

/// Eccentric anomaly `E` with `E − e sin E = M`.
///
/// Newton's method on `M` reduced to `(−π, π]`, kept inside the bracket
/// `[M − e, M + e]` that always contains the root. The returned `E` is shifted
/// back by the same multiple of `2π`, so it is continuous in an unwrapped `M`.
pub fn kepler_solve<T: Real>(mean_anomaly: T, e: T) -> Result<T> {
    if !(e >= T::zero() && e < T::one()) || !mean_anomaly.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Kepler equation needs 0 <= e < 1 and finite M, got e = {e}, M = {mean_anomaly}"
        )));
    }
    let two_pi = T::TAU();
    let turns = (mean_anomaly / two_pi).round();
    let m = mean_anomaly - turns * two_pi;
    let tol = T::lit(1e-13).max(T::epsilon() * T::lit(8.0));

    let (mut lo, mut hi) = (m - e, m + e);
    let mut big_e = m;
    for _ in 0..MAX_ITERATIONS {
        let f = big_e - e * big_e.sin() - m;
        if f.abs() <= tol {
            return Ok(big_e + turns * two_pi);
        }
        if f > T::zero() {
            hi = big_e;
        } else {
            lo = big_e;
        }
        let step = f / (T::one() - e * big_e.cos());
        let mut next = big_e - step;
        if !(next > lo && next < hi) {
            next = (lo + hi) * T::lit(0.5);
        }
        big_e = next;
    }
    Err(Error::NoConvergence {
        mean_anomaly: mean_anomaly.to_f64().unwrap_or(f64::NAN),
        eccentricity: e.to_f64().unwrap_or(f64::NAN),
    })
}

/// Inertial position (km) and velocity (km/s).
pub fn elements_to_cartesian<T: Real>(
    elems: &OrbitalElements<T>,
    mu: T,
) -> Result<([T; 3], [T; 3])> {
    let (a, e) = (elems.a, elems.e);
    let big_e = kepler_solve(elems.mean_anomaly, e)?;
    let (sin_e, cos_e) = big_e.sin_cos();
    let eta = (T::one() - e * e).sqrt();
    let r = a * (T::one() - e * cos_e);
    let x_pf = a * (cos_e - e);
    let y_pf = a * eta * sin_e;
    let speed = (mu * a).sqrt() / r;
    let vx_pf = -speed * sin_e;
    let vy_pf = speed * eta * cos_e;

    let (so, co) = elems.raan.sin_cos();
    let (sw, cw) = elems.argp.sin_cos();
    let (si, ci) = elems.i.sin_cos();
    let p = [co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si];
    let q = [-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si];
    let pos = std::array::from_fn(|k| p[k] * x_pf + q[k] * y_pf);
    let vel = std::array::from_fn(|k| p[k] * vx_pf + q[k] * vy_pf);
    Ok((pos, vel))
}

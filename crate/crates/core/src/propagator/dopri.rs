//! Dormand–Prince 5(4) with PI step control and 4th-order dense output.

use crate::error::{Error, Result};
use crate::scalar::Real;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const MIN_SHRINK: f64 = 0.2;
const MAX_GROWTH: f64 = 10.0;
const MAX_STEPS: usize = 10_000_000;

/// Tolerances and step limits of the adaptive integrator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Upper bound on the step size, s.
    pub max_step: T,
}

impl<T: Real> IntegratorConfig<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_step: T) -> Result<Self> {
        let cfg = IntegratorConfig {
            rel_tol,
            abs_tol,
            max_step,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: T| x > T::zero() && x < T::lit(1e-3);
        if !ok(self.rel_tol) || !ok(self.abs_tol) || !(self.max_step > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "integrator needs tolerances in (0, 1e-3) and max_step > 0, got rel {}, abs {}, max_step {}",
                self.rel_tol, self.abs_tol, self.max_step
            )));
        }
        Ok(())
    }

    /// Settings of the osculating reference run.
    pub fn reference() -> Self {
        IntegratorConfig {
            rel_tol: T::lit(1e-12),
            abs_tol: T::lit(1e-12),
            max_step: T::lit(3600.0),
        }
    }

    /// Settings of the mean-element run: long steps, same tolerance.
    pub fn mean() -> Self {
        IntegratorConfig {
            rel_tol: T::lit(1e-12),
            abs_tol: T::lit(1e-12),
            max_step: T::lit(43200.0),
        }
    }
}

/// Counters of one integration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub rhs_evaluations: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Integrates `y' = f(t, y)` and returns `y` at each time of `grid`.
///
/// `grid` must be ascending and start at or after `t0`. `magnitude_cap[i]`
/// bounds the value of `|y_i|` used in the relative tolerance; angles that
/// grow without bound (an unwrapped anomaly) are scaled by one turn, not by
/// their accumulated size.
pub fn integrate<T, F, const N: usize>(
    mut f: F,
    t0: T,
    y0: [T; N],
    grid: &[T],
    cfg: &IntegratorConfig<T>,
    magnitude_cap: [Option<T>; N],
) -> Result<(Vec<[T; N]>, IntegrationStats)>
where
    T: Real,
    F: FnMut(T, &[T; N]) -> Result<[T; N]>,
{
    cfg.validate()?;
    if grid.windows(2).any(|w| !(w[1] >= w[0])) || grid.first().is_some_and(|&g| g < t0) {
        return Err(Error::InvalidInput(
            "output grid must be ascending and start at t0".into(),
        ));
    }
    let mut stats = IntegrationStats::default();
    let mut out = Vec::with_capacity(grid.len());
    let mut next = 0;
    while next < grid.len() && grid[next] == t0 {
        out.push(y0);
        next += 1;
    }
    let Some(&t_end) = grid.last() else {
        return Ok((out, stats));
    };
    if next == grid.len() {
        return Ok((out, stats));
    }

    let lit = T::lit;
    let scale = |y: &[T; N], z: &[T; N], i: usize| {
        let mut mag = y[i].abs().max(z[i].abs());
        if let Some(cap) = magnitude_cap[i] {
            mag = mag.min(cap);
        }
        cfg.abs_tol + cfg.rel_tol * mag
    };
    let mut eval = |t: T, y: &[T; N], stats: &mut IntegrationStats| -> Result<[T; N]> {
        stats.rhs_evaluations += 1;
        let dy = f(t, y)?;
        if dy.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepFailure {
                t: t.to_f64().unwrap_or(f64::NAN),
                reason: "non-finite derivative".into(),
            });
        }
        Ok(dy)
    };

    let mut t = t0;
    let mut y = y0;
    let mut k1 = eval(t, &y, &mut stats)?;
    let mut h = initial_step(&mut eval, t, &y, &k1, cfg, &scale, &mut stats)?.min(t_end - t);
    let mut err_old = lit(1e-4);
    let mut rejected_last = false;

    while next < grid.len() {
        if stats.accepted_steps + stats.rejected_steps >= MAX_STEPS {
            return Err(Error::StepFailure {
                t: t.to_f64().unwrap_or(f64::NAN),
                reason: "step limit reached".into(),
            });
        }
        let h_min = lit(16.0) * T::epsilon() * t.abs().max(T::one());
        if h < h_min {
            return Err(Error::StepFailure {
                t: t.to_f64().unwrap_or(f64::NAN),
                reason: format!("step size {h} below resolution"),
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let mut k: [[T; N]; 7] = [[T::zero(); N]; 7];
        k[0] = k1;
        for s in 1..7 {
            let ys: [T; N] = std::array::from_fn(|i| {
                let mut acc = T::zero();
                for (r, kr) in k.iter().enumerate().take(s) {
                    acc = acc + lit(A[s][r]) * kr[i];
                }
                y[i] + h * acc
            });
            let ts = if s >= 5 { t + h } else { t + lit(C[s]) * h };
            k[s] = eval(ts, &ys, &mut stats)?;
        }
        let y_new: [T; N] = std::array::from_fn(|i| {
            let mut acc = T::zero();
            for r in 0..6 {
                acc = acc + lit(A[6][r]) * k[r][i];
            }
            y[i] + h * acc
        });
        // Row 6 of A holds the solution weights, so k[6] = f(t + h, y_new).
        let mut err = T::zero();
        for i in 0..N {
            let mut e = T::zero();
            for r in 0..7 {
                e = e + lit(E[r]) * k[r][i];
            }
            let ratio = h * e / scale(&y, &y_new, i);
            err = err + ratio * ratio;
        }
        err = (err / lit(N as f64)).sqrt();
        if !err.is_finite() {
            return Err(Error::StepFailure {
                t: t.to_f64().unwrap_or(f64::NAN),
                reason: "non-finite error estimate".into(),
            });
        }

        let expo = lit(0.2 - BETA * 0.75);
        let fac11 = err.powf(expo);
        if err <= T::one() {
            let t_new = if last { t_end } else { t + h };
            while next < grid.len() && grid[next] <= t_new {
                let theta = if h > T::zero() {
                    (grid[next] - t) / h
                } else {
                    T::one()
                };
                out.push(dense(&y, &y_new, &k, h, theta));
                next += 1;
            }
            stats.accepted_steps += 1;
            let mut fac = fac11 / err_old.powf(lit(BETA)) / lit(SAFETY);
            fac = fac.max(lit(1.0 / MAX_GROWTH)).min(lit(1.0 / MIN_SHRINK));
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            err_old = err.max(lit(1e-4));
            rejected_last = false;
            t = t_new;
            y = y_new;
            k1 = k[6];
            h = h_new.min(cfg.max_step);
        } else {
            stats.rejected_steps += 1;
            h = h / (fac11 / lit(SAFETY)).min(lit(1.0 / MIN_SHRINK));
            rejected_last = true;
        }
    }
    Ok((out, stats))
}

fn dense<T: Real, const N: usize>(
    y0: &[T; N],
    y1: &[T; N],
    k: &[[T; N]; 7],
    h: T,
    theta: T,
) -> [T; N] {
    if theta == T::one() {
        return *y1;
    }
    let one = T::one();
    std::array::from_fn(|i| {
        let diff = y1[i] - y0[i];
        let bspl = h * k[0][i] - diff;
        let c4 = diff - h * k[6][i] - bspl;
        let mut d = T::zero();
        for r in 0..7 {
            d = d + T::lit(D[r]) * k[r][i];
        }
        let c5 = h * d;
        y0[i] + theta * (diff + (one - theta) * (bspl + theta * (c4 + (one - theta) * c5)))
    })
}

/// Starting step from the size of the solution and its first two derivatives.
fn initial_step<T, F, S, const N: usize>(
    eval: &mut F,
    t: T,
    y: &[T; N],
    f0: &[T; N],
    cfg: &IntegratorConfig<T>,
    scale: &S,
    stats: &mut IntegrationStats,
) -> Result<T>
where
    T: Real,
    F: FnMut(T, &[T; N], &mut IntegrationStats) -> Result<[T; N]>,
    S: Fn(&[T; N], &[T; N], usize) -> T,
{
    let norm = |v: &[T; N]| {
        let sum = (0..N).fold(T::zero(), |acc, i| {
            let r = v[i] / scale(y, y, i);
            acc + r * r
        });
        (sum / T::lit(N as f64)).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let mut h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h0 = h0.min(cfg.max_step);
    let y1: [T; N] = std::array::from_fn(|i| y[i] + h0 * f0[i]);
    let f1 = eval(t + h0, &y1, stats)?;
    let diff: [T; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= T::lit(1e-15) {
        (h0 * T::lit(1e-3)).max(T::lit(1e-6))
    } else {
        (T::lit(0.01) / d1.max(d2)).powf(T::lit(0.2))
    };
    Ok((T::lit(100.0) * h0).min(h1).min(cfg.max_step))
}

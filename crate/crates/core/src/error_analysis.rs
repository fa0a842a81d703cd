//! Position errors in the intrinsic frame and element differences.

use std::io::Write;

use crate::error::{Error, Result};
use crate::propagator::{wrap_pi, StateSample};
use crate::scalar::Real;
use crate::toy_model::Element;

pub const CSV_HEADER: [&str; 11] = [
    "t_s",
    "rss_km",
    "along_km",
    "radial_km",
    "cross_km",
    "da_km",
    "de",
    "di_rad",
    "draan_rad",
    "dargp_rad",
    "dM_rad",
];

const DEGENERATE: f64 = 1e-9;

/// Test minus reference at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord<T> {
    pub t: T,
    pub rss: T,
    pub along: T,
    pub radial: T,
    pub cross: T,
    /// Element differences, angles wrapped to `(−π, π]`.
    pub delta_elements: [T; 6],
}

/// Quantity averaged by [`error_average`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Rss,
    Along,
    Radial,
    Cross,
    Element(Element),
}

impl<T: Real> ErrorRecord<T> {
    pub fn get(&self, metric: Metric) -> T {
        match metric {
            Metric::Rss => self.rss,
            Metric::Along => self.along,
            Metric::Radial => self.radial,
            Metric::Cross => self.cross,
            Metric::Element(el) => self.delta_elements[el.index()],
        }
    }
}

fn sub<T: Real>(x: &[T; 3], y: &[T; 3]) -> [T; 3] {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

fn dot<T: Real>(x: &[T; 3], y: &[T; 3]) -> T {
    x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

fn cross<T: Real>(x: &[T; 3], y: &[T; 3]) -> [T; 3] {
    [
        x[1] * y[2] - x[2] * y[1],
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ]
}

fn unit<T: Real>(x: &[T; 3]) -> [T; 3] {
    let n = dot(x, x).sqrt();
    [x[0] / n, x[1] / n, x[2] / n]
}

/// Radial, cross-track and along-track unit vectors of a state.
pub fn intrinsic_frame<T: Real>(position: &[T; 3], velocity: &[T; 3]) -> Result<[[T; 3]; 3]> {
    let h = cross(position, velocity);
    let h_norm = dot(&h, &h).sqrt();
    if !(h_norm >= T::lit(DEGENERATE)) {
        return Err(Error::DegenerateState(h_norm.to_f64().unwrap_or(f64::NAN)));
    }
    let radial = unit(position);
    let normal = unit(&h);
    let along = cross(&normal, &radial);
    Ok([radial, normal, along])
}

/// Errors of `test` against `reference`, projected on the reference frame.
pub fn intrinsic_errors<T: Real>(
    reference: &StateSample<T>,
    test: &StateSample<T>,
) -> Result<ErrorRecord<T>> {
    if reference.t != test.t {
        return Err(Error::InvalidInput(format!(
            "sample times differ: {} vs {}",
            reference.t, test.t
        )));
    }
    let [radial, normal, along] = intrinsic_frame(&reference.position, &reference.velocity)?;
    let d = sub(&test.position, &reference.position);
    let x = test.osculating.to_array();
    let y = reference.osculating.to_array();
    let delta_elements = std::array::from_fn(|j| {
        let diff = x[j] - y[j];
        if Element::ALL[j].is_angle() {
            wrap_pi(diff)
        } else {
            diff
        }
    });
    Ok(ErrorRecord {
        t: reference.t,
        rss: dot(&d, &d).sqrt(),
        along: dot(&d, &along),
        radial: dot(&d, &radial),
        cross: dot(&d, &normal),
        delta_elements,
    })
}

/// Pairwise errors of two runs on the same grid.
pub fn error_history<T: Real>(
    reference: &[StateSample<T>],
    test: &[StateSample<T>],
) -> Result<Vec<ErrorRecord<T>>> {
    if reference.len() != test.len() {
        return Err(Error::InvalidInput(format!(
            "runs have {} and {} samples",
            reference.len(),
            test.len()
        )));
    }
    reference
        .iter()
        .zip(test)
        .map(|(r, t)| intrinsic_errors(r, t))
        .collect()
}

/// Arithmetic mean of one metric; `None` for an empty history.
pub fn error_average<T: Real>(records: &[ErrorRecord<T>], metric: Metric) -> Option<T> {
    if records.is_empty() {
        return None;
    }
    let sum = records.iter().fold(T::zero(), |acc, r| acc + r.get(metric));
    Some(sum / T::from_usize(records.len())?)
}

/// Largest absolute value of one metric over records with `t` in `[from, to]`.
pub fn envelope<T: Real>(records: &[ErrorRecord<T>], metric: Metric, from: T, to: T) -> T {
    records
        .iter()
        .filter(|r| r.t >= from && r.t <= to)
        .fold(T::zero(), |acc, r| acc.max(r.get(metric).abs()))
}

fn sci<T: Real>(x: T) -> String {
    format!("{:.11e}", x.to_f64().unwrap_or(f64::NAN))
}

/// Writes the error history as CSV with 12 significant digits.
pub fn write_errors_csv<T: Real, W: Write>(records: &[ErrorRecord<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for r in records {
        let mut row = vec![r.t.to_f64().unwrap_or(f64::NAN).to_string()];
        row.extend([r.rss, r.along, r.radial, r.cross].into_iter().map(sci));
        row.extend(r.delta_elements.into_iter().map(sci));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a trajectory as CSV: time, osculating elements, position, velocity.
pub fn write_trajectory_csv<T: Real, W: Write>(samples: &[StateSample<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "t_s", "a_km", "e", "i_rad", "raan_rad", "argp_rad", "M_rad", "x_km", "y_km", "z_km",
        "vx_km_s", "vy_km_s", "vz_km_s",
    ])
    .map_err(csv_error)?;
    for s in samples {
        let mut row = vec![s.t.to_f64().unwrap_or(f64::NAN).to_string()];
        row.extend(s.osculating.to_array().into_iter().map(sci));
        row.extend(s.position.into_iter().chain(s.velocity).map(sci));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Internal(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toy_model::OrbitalElements;

    fn sample(t: f64, m: f64) -> StateSample<f64> {
        let el = OrbitalElements::new(9500.0, 0.2, 0.35, 0.1, 0.2, m).unwrap();
        StateSample::from_elements(t, &el, 398600.4415).unwrap()
    }

    #[test]
    fn identical_states_have_no_error() {
        let s = sample(0.0, 1.0);
        let r = intrinsic_errors(&s, &s).unwrap();
        assert_eq!((r.rss, r.along, r.radial, r.cross), (0.0, 0.0, 0.0, 0.0));
        assert!(r.delta_elements.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn velocity_displacement_at_periapsis_is_along_track() {
        let reference = sample(0.0, 0.0);
        let mut test = reference;
        let v = unit(&reference.velocity);
        for k in 0..3 {
            test.position[k] += 1e-3 * v[k];
        }
        let r = intrinsic_errors(&reference, &test).unwrap();
        // Cancellation against ~1e4 km coordinates limits the agreement.
        assert!((r.along - 1e-3).abs() < 1e-11);
        assert!(r.radial.abs() < 1e-11 && r.cross.abs() < 1e-11);
    }

    #[test]
    fn anomaly_difference_is_wrapped() {
        let a = sample(0.0, 0.01);
        let b = sample(0.0, std::f64::consts::TAU - 0.01);
        let r = intrinsic_errors(&a, &b).unwrap();
        assert!((r.delta_elements[5] + 0.02).abs() < 1e-12);
    }

    #[test]
    fn averages() {
        let rec = |t: f64, rss: f64| ErrorRecord {
            t,
            rss,
            along: 0.0,
            radial: 0.0,
            cross: 0.0,
            delta_elements: [rss; 6],
        };
        let rs = [rec(0.0, 2.0), rec(1.0, 2.0), rec(2.0, 2.0)];
        assert_eq!(error_average(&rs, Metric::Rss), Some(2.0));
        assert_eq!(error_average(&rs, Metric::Element(Element::A)), Some(2.0));
        assert_eq!(error_average::<f64>(&[], Metric::Rss), None);
        assert_eq!(
            envelope(&[rec(0.0, -5.0), rec(3.0, 1.0)], Metric::Rss, 1.0, 4.0),
            1.0
        );
    }

    #[test]
    fn mismatched_times_are_refused() {
        assert!(intrinsic_errors(&sample(0.0, 1.0), &sample(1.0, 1.0)).is_err());
    }

    #[test]
    fn csv_layout() {
        let recs = [ErrorRecord {
            t: 0.0,
            rss: 1e-3,
            along: 0.0,
            radial: -2.5,
            cross: 1.0 / 3.0,
            delta_elements: [0.0; 6],
        }];
        let mut buf = Vec::new();
        write_errors_csv(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 11);
        assert_eq!(row[0], "0");
        assert_eq!(row[1], "1.00000000000e-3");
        assert_eq!(row[3], "-2.50000000000e0");
        assert_eq!(row[4], "3.33333333333e-1");
    }
}

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use meanelem_core::error_analysis::{
    envelope, error_average, error_history, write_errors_csv, write_trajectory_csv, Metric,
};
use meanelem_core::lie::cache::{read_artifacts, write_artifacts};
use meanelem_core::lie::checks::{compose_transforms, verify_mean_by_substitution};
use meanelem_core::lie::{derive as derive_theory, ElementSeries};
use meanelem_core::propagator::{
    propagate_osculating, semianalytic_pipeline, uniform_grid, SemiAnalytic, TheoryConfig,
};
use meanelem_core::reference::{
    first_difference, half_split_checks, theory_checks, FixtureCheck, FixtureSet,
};
use meanelem_core::toy_model::toy_flow;
use meanelem_core::{Artifacts, Element, Error, Rational, Result, Series, Theory};

use crate::scenario::Scenario;

pub fn derive(theories: &[Theory], order: usize, cache: &Path) -> Result<bool> {
    for &t in theories {
        let start = Instant::now();
        let art = derive_theory(t, order)?;
        write_artifacts(cache, &art)?;
        println!(
            "{t}, order {order}: derived in {:.1} s, written to {}",
            start.elapsed().as_secs_f64(),
            cache.display()
        );
        println!("  order  terms");
        for (m, n) in art.term_counts().iter().enumerate() {
            println!("  {:>5}  {n:>5}", m + 1);
        }
    }
    Ok(true)
}

fn residual_check(label: String, residual: &ElementSeries<Rational>) -> FixtureCheck {
    let mismatch = Element::ALL.iter().find_map(|&el| {
        first_difference(&residual[el.index()], &Series::zero())
            .map(|d| format!("{} component, {d}", el.name()))
    });
    FixtureCheck { label, mismatch }
}

pub fn verify(
    theories: &[Theory],
    order: usize,
    cache: &Path,
    fixtures: Option<&Path>,
) -> Result<bool> {
    let fx = match fixtures {
        Some(dir) => FixtureSet::from_dir(dir)?,
        None => FixtureSet::embedded(),
    };
    let flow = toy_flow();
    let seeds: Vec<ElementSeries<Rational>> =
        (0..=flow.max_order()).map(|m| flow.order(m)).collect();
    let mut loaded: Vec<Artifacts> = Vec::new();
    for &t in theories {
        loaded.push(read_artifacts(cache, t, order)?);
    }

    let mut checks = Vec::new();
    for art in &loaded {
        let t = art.theory;
        checks.extend(theory_checks(art, &fx)?.into_iter().map(|mut c| {
            c.label = format!("{t}: {}", c.label);
            c
        }));
        for m in 1..=order {
            checks.push(residual_check(
                format!("{t}: inverse then direct is the identity through order {m}"),
                &compose_transforms(&art.direct, &art.inverse, m),
            ));
            checks.push(residual_check(
                format!("{t}: mean flow satisfies the substitution identity through order {m}"),
                &verify_mean_by_substitution(art, &seeds, m),
            ));
        }
    }
    if let [one, two] = loaded.as_slice() {
        if order >= 2 {
            checks.extend(half_split_checks(one, two));
        }
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for c in &checks {
        println!("{c}");
    }
    println!("{} checks, {failed} failed", checks.len());
    Ok(failed == 0)
}

fn run_label(tc: &TheoryConfig) -> String {
    let patch = if tc.patched { "_patched" } else { "" };
    format!("theory{}_order{}{patch}", tc.theory.number(), tc.order)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

pub fn propagate(
    source: &str,
    theory: Option<Theory>,
    order: Option<usize>,
    patched: bool,
    cache: &Path,
    out: &Path,
) -> Result<bool> {
    let mut sc = Scenario::load(source)?;
    if theory.is_some() || order.is_some() || patched {
        sc.override_theory(theory, order, patched)?;
    }
    let mut theories = Vec::new();
    for tc in &sc.theory_configs {
        let art: Artifacts = read_artifacts(cache, tc.theory, tc.required_order())?;
        theories.push(SemiAnalytic::<f64>::new(&art, *tc)?);
    }
    let dir = out.join(&sc.name);
    fs::create_dir_all(&dir)
        .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))?;

    let grid = uniform_grid(sc.duration, sc.sample_dt);
    let start = Instant::now();
    let (reference, stats) = propagate_osculating(
        &sc.init_elements,
        &sc.constants,
        &grid,
        &sc.reference_integrator,
    )?;
    write_trajectory_csv(&reference, create(&dir.join("reference.csv"))?)?;
    println!(
        "{}: reference run, {} samples, {} right-hand-side evaluations, {:.2} s",
        sc.name,
        grid.len(),
        stats.rhs_evaluations,
        start.elapsed().as_secs_f64()
    );

    let runs = std::thread::scope(|s| {
        let handles: Vec<_> = theories
            .iter()
            .map(|sa| {
                s.spawn(|| {
                    semianalytic_pipeline(
                        &sc.init_elements,
                        sa,
                        &sc.constants,
                        &grid,
                        &sc.mean_integrator,
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("propagation thread"))
            .collect::<Vec<_>>()
    });

    let last_day = (sc.duration - 86400.0).max(0.0);
    for (sa, run) in theories.iter().zip(runs) {
        let (samples, _) = run?;
        let errors = error_history(&reference, &samples)?;
        let label = run_label(&sa.config());
        write_trajectory_csv(&samples, create(&dir.join(format!("{label}.csv")))?)?;
        write_errors_csv(&errors, create(&dir.join(format!("{label}_errors.csv")))?)?;
        let max_rss = errors.iter().fold(0.0f64, |acc, e| acc.max(e.rss));
        let mean_da = error_average(&errors, Metric::Element(Element::A)).unwrap_or(0.0);
        println!(
            "{}: {label}: max RSS {:.4} m, mean da {:.4} m, last-day along-track envelope {:.4} m",
            sc.name,
            max_rss * 1e3,
            mean_da * 1e3,
            envelope(&errors, Metric::Along, last_day, sc.duration) * 1e3
        );
    }
    println!("{}: CSV written to {}", sc.name, dir.display());
    Ok(true)
}

//! Propagation scenarios: TOML files with angles in degrees.

use std::path::Path;

use serde::Deserialize;

use meanelem_core::propagator::{IntegratorConfig, TheoryConfig};
use meanelem_core::toy_model::{OrbitalElements, PhysicalConstants};
use meanelem_core::{Error, Result, Theory};

/// Scenarios shipped with the binary, addressable by name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "first_order_theory1",
        include_str!("../scenarios/first_order_theory1.toml"),
    ),
    (
        "first_order_theory2",
        include_str!("../scenarios/first_order_theory2.toml"),
    ),
    (
        "second_order",
        include_str!("../scenarios/second_order.toml"),
    ),
    ("three_weeks", include_str!("../scenarios/three_weeks.toml")),
    (
        "three_weeks_patched",
        include_str!("../scenarios/three_weeks_patched.toml"),
    ),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    duration_s: f64,
    #[serde(default = "default_sample_dt")]
    sample_dt_s: f64,
    elements: ElementsFile,
    #[serde(default)]
    constants: Option<ConstantsFile>,
    theory: TheoryFile,
    #[serde(default)]
    integrator: IntegratorFile,
}

fn default_sample_dt() -> f64 {
    300.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementsFile {
    a_km: f64,
    e: f64,
    i_deg: f64,
    raan_deg: f64,
    argp_deg: f64,
    mean_anomaly_deg: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsFile {
    mu_km3_s2: f64,
    r_earth_km: f64,
    j2: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoryFile {
    theories: Vec<u8>,
    order: usize,
    #[serde(default)]
    patched: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntegratorFile {
    reference: Option<StepFile>,
    mean: Option<StepFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFile {
    rel_tol: f64,
    abs_tol: f64,
    max_step_s: f64,
}

impl StepFile {
    fn config(&self) -> Result<IntegratorConfig<f64>> {
        IntegratorConfig::new(self.rel_tol, self.abs_tol, self.max_step_s)
    }
}

/// A validated scenario in internal units.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub init_elements: OrbitalElements<f64>,
    pub constants: PhysicalConstants<f64>,
    pub theory_configs: Vec<TheoryConfig>,
    pub duration: f64,
    pub sample_dt: f64,
    pub reference_integrator: IntegratorConfig<f64>,
    pub mean_integrator: IntegratorConfig<f64>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: ScenarioFile =
            toml::from_str(text).map_err(|e| Error::InvalidInput(format!("scenario: {e}")))?;
        raw.validate()
    }

    /// Reads a scenario file, or a bundled scenario when `source` names one and
    /// no such file exists.
    pub fn load(source: &str) -> Result<Self> {
        let path = Path::new(source);
        if !path.exists() {
            if let Some((_, text)) = BUNDLED.iter().find(|(name, _)| *name == source) {
                return Scenario::parse(text);
            }
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("scenario {}: {e}", path.display())))?;
        Scenario::parse(&text)
    }

    /// Replaces the theory selection with command-line choices.
    pub fn override_theory(
        &mut self,
        theory: Option<Theory>,
        order: Option<usize>,
        patched: bool,
    ) -> Result<()> {
        let theories: Vec<Theory> = match theory {
            Some(t) => vec![t],
            None => self.theory_configs.iter().map(|c| c.theory).collect(),
        };
        let order = order.unwrap_or(self.theory_configs[0].order);
        let patched = patched || self.theory_configs[0].patched;
        self.theory_configs = theories
            .into_iter()
            .map(|t| TheoryConfig::new(t, order, patched))
            .collect::<Result<_>>()?;
        Ok(())
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario> {
        let bad = |m: String| Error::InvalidInput(format!("scenario '{}': {m}", self.name));
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(bad(
                "name must be nonempty and use only [A-Za-z0-9_-]".into()
            ));
        }
        if !(self.duration_s > 0.0) || !(self.sample_dt_s > 0.0) {
            return Err(bad(format!(
                "duration_s and sample_dt_s must be positive, got {} and {}",
                self.duration_s, self.sample_dt_s
            )));
        }
        if self.theory.theories.is_empty() {
            return Err(bad("theory.theories must list 1, 2 or both".into()));
        }
        let el = &self.elements;
        let init = OrbitalElements::new(
            el.a_km,
            el.e,
            el.i_deg.to_radians(),
            el.raan_deg.to_radians(),
            el.argp_deg.to_radians(),
            el.mean_anomaly_deg.to_radians(),
        )?;
        let constants = match &self.constants {
            Some(c) => PhysicalConstants::new(c.mu_km3_s2, c.r_earth_km, c.j2)?,
            None => PhysicalConstants::earth(),
        };
        let mut theory_configs = Vec::new();
        for &n in &self.theory.theories {
            let t = Theory::from_number(n).ok_or_else(|| bad(format!("unknown theory {n}")))?;
            if theory_configs.iter().any(|c: &TheoryConfig| c.theory == t) {
                return Err(bad(format!("theory {n} listed twice")));
            }
            theory_configs.push(TheoryConfig::new(
                t,
                self.theory.order,
                self.theory.patched,
            )?);
        }
        let reference_integrator = match &self.integrator.reference {
            Some(s) => s.config()?,
            None => IntegratorConfig::reference(),
        };
        let mean_integrator = match &self.integrator.mean {
            Some(s) => s.config()?,
            None => IntegratorConfig::mean(),
        };
        Ok(Scenario {
            name: self.name,
            init_elements: init,
            constants,
            theory_configs,
            duration: self.duration_s,
            sample_dt: self.sample_dt_s,
            reference_integrator,
            mean_integrator,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_parse() {
        for (name, text) in BUNDLED {
            let s = Scenario::parse(text).unwrap();
            assert_eq!(&s.name, name);
            assert_eq!(s.init_elements, OrbitalElements::test_case());
            assert_eq!(s.sample_dt, 300.0);
        }
        let three_weeks_patched = Scenario::load("three_weeks_patched").unwrap();
        assert!(three_weeks_patched
            .theory_configs
            .iter()
            .all(|c| c.patched && c.order == 2));
        assert_eq!(three_weeks_patched.duration, 21.0 * 86400.0);
    }

    #[test]
    fn rejects_bad_input() {
        let base = BUNDLED[0].1;
        assert!(
            Scenario::parse(&base.replace("duration_s = 259200.0", "duration_s = -1.0")).is_err()
        );
        assert!(Scenario::parse(&base.replace("e = 0.2", "e = 0.01")).is_err());
        assert!(Scenario::parse(&base.replace("order = 1", "order = 3")).is_err());
        assert!(Scenario::parse(&format!("{base}\nunknown = 1\n")).is_err());
        assert!(Scenario::load("no_such_scenario").is_err());
    }

    #[test]
    fn theory_override() {
        let mut s = Scenario::load("three_weeks").unwrap();
        s.override_theory(Some(Theory::One), Some(1), true).unwrap();
        assert_eq!(
            s.theory_configs,
            vec![TheoryConfig::new(Theory::One, 1, true).unwrap()]
        );
    }
}

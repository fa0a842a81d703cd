//! Hand-transcribed ground truth and the comparisons run against it.
//!
//! The fixtures are compiled into the crate; [`FixtureSet::from_dir`] reads a
//! replacement set with the same layout (`toy/*.series`, `printed/*.series`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lie::TheoryArtifacts;
use crate::series::PoissonSeries;
use crate::toy_model::Element;
use crate::{Rational, Series, Theory};

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name, ".series")))),*]
    };
}

const EMBEDDED: &[(&str, &str)] = fixtures![
    "toy/phi1_a",
    "toy/phi1_e",
    "toy/phi1_i",
    "toy/phi1_raan",
    "toy/phi1_argp",
    "toy/phi1_M",
    "printed/W1_a",
    "printed/W1_e",
    "printed/W1_i",
    "printed/W1_raan",
    "printed/W1_argp",
    "printed/W1_M",
    "printed/phi01_a",
    "printed/phi01_e",
    "printed/phi01_i",
    "printed/phi01_raan",
    "printed/phi01_argp",
    "printed/phi01_M",
    "printed/phi02_a",
    "printed/phi02_e",
    "printed/phi02_i",
    "printed/phi02_raan",
    "printed/phi02_argp",
    "printed/phi02_M_theory1",
    "printed/phi02_M_theory2",
    "printed/C12_a_theory1",
    "printed/direct2_a_theory1",
    "printed/inverse2_a_theory1",
    "printed/inverse2_a_long_theory1",
    "printed/phi03_a_theory1",
];

/// A named collection of fixture texts.
#[derive(Clone, Debug)]
pub struct FixtureSet {
    texts: BTreeMap<String, String>,
}

impl FixtureSet {
    pub fn embedded() -> Self {
        FixtureSet {
            texts: EMBEDDED
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }

    /// Reads every fixture name from `dir`; a missing file is an error.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut texts = BTreeMap::new();
        for (name, _) in EMBEDDED {
            let path = dir.join(format!("{name}.series"));
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::InvalidInput(format!("fixture {}: {e}", path.display())))?;
            texts.insert(name.to_string(), text);
        }
        Ok(FixtureSet { texts })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.texts.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Result<Series> {
        let text = self
            .texts
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown fixture '{name}'")))?;
        Series::from_text(text).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line,
                message: format!("fixture {name}: {message}"),
            },
            other => other,
        })
    }

    pub fn toy(&self, el: Element) -> Result<Series> {
        self.get(&format!("toy/phi1_{}", el.name()))
    }
}

/// Describes the first key at which two series differ, if any.
pub fn first_difference(got: &Series, expected: &Series) -> Option<String> {
    if got == expected {
        return None;
    }
    let diff = got.sub(expected);
    let (k, _) = diff.iter().next()?;
    let show = |s: &Series| {
        s.get(k)
            .map(|c| c.to_string())
            .unwrap_or_else(|| "absent".into())
    };
    Some(format!(
        "term eps^{} a^{} n^{} (R/a)^{} {}({}M + {}w): derived {}, expected {}",
        k.eps_order,
        k.a_power,
        k.n_power,
        k.roa_power,
        k.kind.as_str(),
        k.m_mult,
        k.w_mult,
        show(got),
        show(expected)
    ))
}

/// One comparison of a derived series with its ground truth.
#[derive(Clone, Debug)]
pub struct FixtureCheck {
    pub label: String,
    pub mismatch: Option<String>,
}

impl FixtureCheck {
    pub fn new(label: impl Into<String>, got: &Series, expected: &Series) -> Self {
        FixtureCheck {
            label: label.into(),
            mismatch: first_difference(got, expected),
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for FixtureCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            None => write!(f, "PASS  {}", self.label),
            Some(m) => write!(f, "FAIL  {}: {m}", self.label),
        }
    }
}

/// Comparisons available for a single theory at its derived order.
pub fn theory_checks(t: &TheoryArtifacts<Rational>, fx: &FixtureSet) -> Result<Vec<FixtureCheck>> {
    let mut out = Vec::new();
    for el in Element::ALL {
        out.push(FixtureCheck::new(
            format!("W_{},1", el.name()),
            t.w(el, 1),
            &fx.get(&format!("printed/W1_{}", el.name()))?,
        ));
    }
    for el in Element::ALL {
        out.push(FixtureCheck::new(
            format!("direct x_{},0,1 = W_{},1", el.name(), el.name()),
            t.direct(el, 1),
            t.w(el, 1),
        ));
        out.push(FixtureCheck::new(
            format!("inverse x'_{},0,1 = -x_{},0,1", el.name(), el.name()),
            t.inverse(el, 1),
            &t.direct(el, 1).neg(),
        ));
    }
    for el in Element::ALL {
        out.push(FixtureCheck::new(
            format!("Phi_{},0,1", el.name()),
            t.phi(el, 1),
            &fx.get(&format!("printed/phi01_{}", el.name()))?,
        ));
    }
    if t.order < 2 {
        return Ok(out);
    }
    for el in &Element::ALL[..5] {
        out.push(FixtureCheck::new(
            format!("Phi_{},0,2", el.name()),
            t.phi(*el, 2),
            &fx.get(&format!("printed/phi02_{}", el.name()))?,
        ));
    }
    let a = Element::A;
    let direct_a2 = fx.get("printed/direct2_a_theory1")?;
    let inverse_a2 = fx.get("printed/inverse2_a_theory1")?;
    let inverse_a2_long = fx.get("printed/inverse2_a_long_theory1")?;
    out.push(FixtureCheck::new(
        "<a'_0,2>_M = a'_0,2,long (table coefficients)",
        &inverse_a2.average_m(),
        &inverse_a2_long,
    ));
    match t.theory {
        Theory::One => {
            out.push(FixtureCheck::new(
                "C_a,2",
                t.constant(a, 2),
                &fx.get("printed/C12_a_theory1")?,
            ));
            out.push(FixtureCheck::new(
                "Phi_M,0,2",
                t.phi(Element::M, 2),
                &fx.get("printed/phi02_M_theory1")?,
            ));
            out.push(FixtureCheck::new("a_0,2", t.direct(a, 2), &direct_a2));
            out.push(FixtureCheck::new("a'_0,2", t.inverse(a, 2), &inverse_a2));
            out.push(FixtureCheck::new(
                "<a'_0,2>_M",
                &t.inverse(a, 2).average_m(),
                &inverse_a2_long,
            ));
            if t.order >= 3 {
                out.push(FixtureCheck::new(
                    "Phi_a,0,3",
                    t.phi(a, 3),
                    &fx.get("printed/phi03_a_theory1")?,
                ));
            }
        }
        Theory::Two => {
            out.push(FixtureCheck::new(
                "Phi_M,0,2",
                t.phi(Element::M, 2),
                &fx.get("printed/phi02_M_theory2")?,
            ));
            out.push(FixtureCheck::new(
                "a_0,2,short",
                &t.direct(a, 2).periodic_m(),
                &direct_a2,
            ));
            out.push(FixtureCheck::new(
                "a_0,2,long = 1/2 a'_0,2,long of theory 1",
                &t.direct(a, 2).average_m(),
                &inverse_a2_long.scale_int(1, 2),
            ));
            out.push(FixtureCheck::new(
                "a'_0,2,short",
                &t.inverse(a, 2).periodic_m(),
                &inverse_a2.periodic_m(),
            ));
            out.push(FixtureCheck::new(
                "a'_0,2,long = a_0,2,long",
                &t.inverse(a, 2).average_m(),
                &t.direct(a, 2).average_m(),
            ));
            for m in 1..=t.order {
                out.push(FixtureCheck::new(
                    format!("Phi_a,0,{m} = 0"),
                    t.phi(a, m),
                    &PoissonSeries::zero(),
                ));
            }
        }
    }
    Ok(out)
}

/// Second-order long-period split: the direct long-period terms of theory 2
/// are one half of the inverse long-period terms of theory 1, per element.
pub fn half_split_checks(
    one: &TheoryArtifacts<Rational>,
    two: &TheoryArtifacts<Rational>,
) -> Vec<FixtureCheck> {
    Element::ALL
        .iter()
        .map(|&el| {
            FixtureCheck::new(
                format!(
                    "<x_{},0,2>_M (theory 2) = 1/2 <x'_{},0,2>_M (theory 1)",
                    el.name(),
                    el.name()
                ),
                &two.direct(el, 2).average_m(),
                &one.inverse(el, 2).average_m().scale_int(1, 2),
            )
        })
        .collect()
}

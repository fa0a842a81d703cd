//! On-disk theory cache: `theory{1|2}/order{m}/{kind}_{element}.series`.

use std::fs;
use std::path::{Path, PathBuf};

use super::theory::{Frame, Theory, TheoryArtifacts};
use super::ElementSeries;
use crate::error::{Error, Result};
use crate::scalar::Exact;
use crate::series::PoissonSeries;
use crate::toy_model::Element;

/// Artifact families, with file prefix and evaluation frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArtifactKind {
    Phi,
    W,
    Direct,
    Inverse,
    C,
    V,
}

impl ArtifactKind {
    pub const ALL: [ArtifactKind; 6] = [
        ArtifactKind::Phi,
        ArtifactKind::W,
        ArtifactKind::Direct,
        ArtifactKind::Inverse,
        ArtifactKind::C,
        ArtifactKind::V,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            ArtifactKind::Phi => "phi",
            ArtifactKind::W => "W",
            ArtifactKind::Direct => "direct",
            ArtifactKind::Inverse => "inverse",
            ArtifactKind::C => "C",
            ArtifactKind::V => "V",
        }
    }

    pub fn frame(self) -> Frame {
        match self {
            ArtifactKind::Phi | ArtifactKind::Direct | ArtifactKind::W | ArtifactKind::C => {
                Frame::Mean
            }
            ArtifactKind::Inverse | ArtifactKind::V => Frame::Osculating,
        }
    }

    fn family<S>(self, t: &TheoryArtifacts<S>) -> &Vec<ElementSeries<S>> {
        match self {
            ArtifactKind::Phi => &t.mean_variations,
            ArtifactKind::W => &t.generator,
            ArtifactKind::Direct => &t.direct,
            ArtifactKind::Inverse => &t.inverse,
            ArtifactKind::C => &t.constants,
            ArtifactKind::V => &t.inverse_generator,
        }
    }
}

pub fn theory_dir(root: &Path, theory: Theory) -> PathBuf {
    root.join(format!("theory{}", theory.number()))
}

pub fn artifact_path(
    root: &Path,
    theory: Theory,
    m: usize,
    kind: ArtifactKind,
    el: Element,
) -> PathBuf {
    theory_dir(root, theory)
        .join(format!("order{m}"))
        .join(format!("{}_{}.series", kind.prefix(), el.name()))
}

/// Writes every artifact of orders `1..=order`. Existing files with identical
/// content are left untouched.
pub fn write_artifacts<S: Exact>(root: &Path, t: &TheoryArtifacts<S>) -> Result<()> {
    for m in 1..=t.order {
        fs::create_dir_all(theory_dir(root, t.theory).join(format!("order{m}")))?;
        for kind in ArtifactKind::ALL {
            for el in Element::ALL {
                let path = artifact_path(root, t.theory, m, kind, el);
                let text = kind.family(t)[m][el.index()].to_text();
                if fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
                    fs::write(&path, text)?;
                }
            }
        }
    }
    Ok(())
}

/// Highest order with a complete set of files in the cache.
pub fn cached_order(root: &Path, theory: Theory) -> usize {
    let mut m = 0;
    while ArtifactKind::ALL.iter().all(|&k| {
        Element::ALL
            .iter()
            .all(|&el| artifact_path(root, theory, m + 1, k, el).is_file())
    }) {
        m += 1;
    }
    m
}

/// Reads a theory of exactly `order` from the cache.
pub fn read_artifacts<S: Exact>(
    root: &Path,
    theory: Theory,
    order: usize,
) -> Result<TheoryArtifacts<S>> {
    let available = cached_order(root, theory);
    if order == 0 || available < order {
        return Err(Error::MissingArtifact(format!(
            "{} needs order {order} in {}, found order {available}; run `meanelem derive` first",
            theory,
            root.display()
        )));
    }
    let read_family = |kind: ArtifactKind| -> Result<Vec<ElementSeries<S>>> {
        let mut out: Vec<ElementSeries<S>> = vec![Default::default()];
        for m in 1..=order {
            let mut row: ElementSeries<S> = Default::default();
            for el in Element::ALL {
                let path = artifact_path(root, theory, m, kind, el);
                let text = fs::read_to_string(&path)?;
                row[el.index()] = PoissonSeries::from_text(&text).map_err(|e| match e {
                    Error::Parse { line, message } => Error::Parse {
                        line,
                        message: format!("{}: {message}", path.display()),
                    },
                    other => other,
                })?;
            }
            out.push(row);
        }
        Ok(out)
    };
    let mut mean_variations = read_family(ArtifactKind::Phi)?;
    mean_variations[0] = std::array::from_fn(|j| {
        if j == 5 {
            PoissonSeries::mean_motion()
        } else {
            PoissonSeries::zero()
        }
    });
    Ok(TheoryArtifacts {
        theory,
        order,
        mean_variations,
        generator: read_family(ArtifactKind::W)?,
        constants: read_family(ArtifactKind::C)?,
        direct: read_family(ArtifactKind::Direct)?,
        inverse: read_family(ArtifactKind::Inverse)?,
        inverse_generator: read_family(ArtifactKind::V)?,
    })
}

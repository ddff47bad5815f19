//! The JSON model file: a space, generators, and optional measure and
//! isomorphism.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measure::FiniteMeasure;
use crate::morphism::SpaceIso;
use crate::pseudogroup::{GeneratingSystem, Generator, LoadReport, PartialMap};
use crate::rational::Exact;
use crate::space::FiniteMetricSpace;

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFragment {
    pub points: Vec<String>,
    pub dist: Vec<Vec<Exact>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFragment {
    pub name: String,
    /// Source label to image label.
    pub map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default = "schema_version")]
    pub version: u32,
    pub points: Vec<String>,
    pub dist: Vec<Vec<Exact>>,
    #[serde(default)]
    pub generators: Vec<GeneratorFragment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<BTreeMap<String, Exact>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpaceFragment>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub sys: GeneratingSystem,
    pub load: LoadReport,
    pub mu: Option<FiniteMeasure>,
    pub iso: Option<SpaceIso>,
    /// SHA-256 of the file bytes, hex.
    pub hash: String,
}

impl Model {
    pub fn measure(&self) -> Result<&FiniteMeasure> {
        self.mu
            .as_ref()
            .ok_or_else(|| Error::input("this command needs a measure (`mu`) in the model file"))
    }

    pub fn iso(&self) -> Result<&SpaceIso> {
        self.iso
            .as_ref()
            .ok_or_else(|| Error::input("this command needs `phi` and `target` in the model file"))
    }
}

fn build_space(points: &[String], dist: &[Vec<Exact>]) -> Result<FiniteMetricSpace> {
    let rows = dist
        .iter()
        .map(|r| r.iter().map(|e| e.0.clone()).collect())
        .collect();
    FiniteMetricSpace::new(points.to_vec(), rows)
}

fn build_measure(
    space: &FiniteMetricSpace,
    weights: &BTreeMap<String, Exact>,
) -> Result<FiniteMeasure> {
    let weights = weights
        .iter()
        .map(|(k, v)| (k.clone(), v.0.clone()))
        .collect();
    FiniteMeasure::from_labels(space, &weights)
}

/// Without a target fragment the target is the image of `phi` with the
/// transported metric, so `phi` is an isometry.
fn build_iso(
    space: &Arc<FiniteMetricSpace>,
    phi: &BTreeMap<String, String>,
    target: Option<&SpaceFragment>,
) -> Result<SpaceIso> {
    let n = space.len();
    let mut image = vec![None; n];
    for (x, y) in phi {
        image[space.index_of(x)?] = Some(y.clone());
    }
    if let Some(x) = image.iter().position(Option::is_none) {
        return Err(Error::input(format!(
            "phi does not map `{}`",
            space.label(x)
        )));
    }
    let image: Vec<String> = image.into_iter().flatten().collect();
    let target = match target {
        Some(t) => build_space(&t.points, &t.dist)?,
        None => {
            let rows = (0..n)
                .map(|u| (0..n).map(|v| space.dist(u, v).clone()).collect())
                .collect();
            FiniteMetricSpace::new(image.clone(), rows)?
        }
    };
    let phi = image
        .iter()
        .map(|y| target.index_of(y))
        .collect::<Result<Vec<_>>>()?;
    SpaceIso::new(space.clone(), Arc::new(target), phi)
}

/// A standalone measure file, `{"mu": {...}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub mu: BTreeMap<String, Exact>,
}

/// A standalone isomorphism file, `{"phi": {...}}` with an optional target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsoFile {
    pub phi: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpaceFragment>,
}

fn read(path: &Path) -> Result<(String, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    let hash = hash_bytes(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::input(format!("{} is not UTF-8", path.display())))?;
    Ok((text, hash))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("{what}: {e}")))
}

pub fn hash_bytes(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text, "model file")
    }

    /// Validates every fragment and completes the generators with the
    /// identity and missing inverses.
    pub fn into_model(self, hash: String) -> Result<Model> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::input(format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                self.version
            )));
        }
        let space = Arc::new(build_space(&self.points, &self.dist)?);
        let n = space.len();
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let pairs = g
                    .map
                    .iter()
                    .map(|(x, y)| Ok((space.index_of(x)?, space.index_of(y)?)))
                    .collect::<Result<Vec<_>>>()?;
                let map = PartialMap::from_pairs(n, n, pairs).map_err(|e| match e {
                    Error::Map { reason, .. } => Error::Map {
                        name: g.name.clone(),
                        reason,
                    },
                    e => e,
                })?;
                let mut gen = Generator::new(g.name.clone(), map);
                if let Some(core) = &g.core {
                    gen = gen.with_core(space.set_from_labels(core)?);
                }
                Ok(gen)
            })
            .collect::<Result<Vec<_>>>()?;
        let (sys, load) = GeneratingSystem::symmetrize(space.clone(), generators)?;
        let mu = self
            .mu
            .as_ref()
            .map(|w| build_measure(&space, w))
            .transpose()?;
        let iso = match (&self.phi, &self.target) {
            (None, None) => None,
            (Some(phi), target) => Some(build_iso(&space, phi, target.as_ref())?),
            (None, Some(_)) => return Err(Error::input("`target` needs `phi`")),
        };
        Ok(Model {
            sys,
            load,
            mu,
            iso,
            hash,
        })
    }
}

pub fn load_model(path: &Path) -> Result<Model> {
    let (text, hash) = read(path)?;
    ModelFile::parse(&text)?.into_model(hash)
}

impl Model {
    /// Replaces the measure with the one in a measure file.
    pub fn with_measure_file(mut self, path: &Path) -> Result<Self> {
        let (text, hash) = read(path)?;
        let file: MeasureFile = parse_json(&text, "measure file")?;
        self.mu = Some(build_measure(self.sys.space(), &file.mu)?);
        self.hash = hash_bytes(format!("{}{hash}", self.hash).as_bytes());
        Ok(self)
    }

    /// Replaces the isomorphism with the one in an iso file.
    pub fn with_iso_file(mut self, path: &Path) -> Result<Self> {
        let (text, hash) = read(path)?;
        let file: IsoFile = parse_json(&text, "iso file")?;
        self.iso = Some(build_iso(
            self.sys.space_arc(),
            &file.phi,
            file.target.as_ref(),
        )?);
        self.hash = hash_bytes(format!("{}{hash}", self.hash).as_bytes());
        Ok(self)
    }
}

//! One-map-per-file TOML documents.
//!
//! ```toml
//! # Whitney map S³ → S⁵
//! name = "whitney"
//! source_n = 1
//! components = ["z", "z*w", "w^2"]
//!
//! [params]
//! a = "3/5"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use cr_ahlfors::maps::{MapSource, SphereMap};
use cr_ahlfors::parse::ParseContext;
use cr_ahlfors::{RadicalNumber, RationalFunction};
use serde::Deserialize;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub name: String,
    pub source_n: usize,
    pub components: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed map document: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("parameter `{name}`: {msg}")]
    Param { name: String, msg: String },
    #[error("component {index} (`{src}`): {err}")]
    Component { index: usize, src: String, err: cr_ahlfors::parse::ParseError },
    #[error("source_n must be at least 1")]
    SourceDim,
}

impl MapDocument {
    pub fn from_str(src: &str) -> Result<Self, DocumentError> {
        let doc: Self = toml::from_str(src)?;
        if doc.source_n == 0 {
            return Err(DocumentError::SourceDim);
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, DocumentError> {
        let src = std::fs::read_to_string(path)
            .map_err(|source| DocumentError::Io { path: path.display().to_string(), source })?;
        Self::from_str(&src)
    }

    /// Parameters are constant expressions, resolved in name order (so a
    /// parameter may refer to alphabetically earlier ones).
    fn context(&self) -> Result<ParseContext, DocumentError> {
        let nvars = self.source_n + 1;
        let mut ctx = ParseContext::new(nvars);
        for (name, src) in &self.params {
            let err = |msg: String| DocumentError::Param { name: name.clone(), msg };
            let v = ctx.parse(src).map_err(|e| err(e.to_string()))?;
            let c = constant_of(&v).ok_or_else(|| err(format!("`{src}` is not a constant")))?;
            ctx = ctx.with_param(name, c);
        }
        Ok(ctx)
    }

    pub fn components(&self) -> Result<Vec<RationalFunction>, DocumentError> {
        let ctx = self.context()?;
        self.components
            .iter()
            .enumerate()
            .map(|(index, src)| ctx.parse(src).map_err(|err| DocumentError::Component { index, src: src.clone(), err }))
            .collect()
    }

    /// The map without the sphere-map check, so callers can report the remainder.
    pub fn to_map_unchecked(&self) -> anyhow::Result<SphereMap> {
        let comps = self.components()?;
        Ok(SphereMap::new_unchecked(&self.name, self.source_n, comps, MapSource::Sphere)?
            .with_params(self.params.clone()))
    }

    pub fn to_map(&self) -> anyhow::Result<SphereMap> {
        let comps = self.components()?;
        Ok(SphereMap::new(&self.name, self.source_n, comps)?.with_params(self.params.clone()))
    }
}

fn constant_of(f: &RationalFunction) -> Option<RadicalNumber> {
    let n = f.num().as_constant()?;
    let d = f.den().as_constant()?;
    Some(n.mul_ref(&d.inv()?))
}

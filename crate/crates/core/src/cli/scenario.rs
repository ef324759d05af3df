//! Flat key-value scenario files (TOML syntax, no tables).

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// A scalar that may be written as an integer, a float or a string; kept
/// as text so high-precision literals survive.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Scalar {
    pub fn text(&self) -> String {
        match self {
            Scalar::Int(i) => i.to_string(),
            Scalar::Float(f) => format!("{f:e}"),
            Scalar::Text(s) => s.clone(),
        }
    }
}

/// Field names mirror the command-line flags with `_` for `-`.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub nbar: Option<Scalar>,
    pub k: Option<Scalar>,
    pub tau: Option<Scalar>,
    pub m_max: Option<Scalar>,
    pub samples: Option<Scalar>,
    pub digits: Option<Scalar>,
    pub l: Option<Scalar>,
    pub p: Option<Scalar>,
    pub strategy: Option<Scalar>,
    pub seed: Option<Scalar>,
    pub count: Option<Scalar>,
    pub format: Option<Scalar>,
    pub sig: Option<Scalar>,
    pub mass_amu: Option<Scalar>,
    pub xi: Option<Scalar>,
    pub wavelength: Option<Scalar>,
    pub field: Option<Scalar>,
    pub beam_area: Option<Scalar>,
    pub power: Option<Scalar>,
    pub omega_l: Option<Scalar>,
    pub coupling: Option<Scalar>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::argument(format!("scenario: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

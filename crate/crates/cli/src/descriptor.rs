//! TOML descriptor files.
//!
//! ```toml
//! schema_version = 1
//! family = "OrthogonalOdd"
//! anchor_rank = 1
//!
//! [[blocks]]
//! label = "rho"
//! k_i = 1
//! d_i = 3
//! mu_class = "POLE"
//! t_i = 1
//! a_gl = "1"
//! a_end = "3/2"
//! b_end = "1/2"
//! k_even = false
//! tau_outer_invariant = false
//!
//! [scalar_config]
//! D = 2
//! ```

use std::fs;
use std::path::Path;

use hecke_core::classify::{Block, Family, InertialDescriptor, MuClass};
use hecke_core::opmodel::SimpleConstants;
use hecke_core::params::{ParameterSet, SimpleParameter};
use hecke_core::scalar::{parse_rational, ParamScalar, Rational, ScalarConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    schema_version: u32,
    family: String,
    anchor_rank: u32,
    blocks: Vec<BlockRecord>,
    scalar_config: ScalarRecord,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRecord {
    label: String,
    k_i: u32,
    d_i: u32,
    mu_class: String,
    t_i: u32,
    a_gl: String,
    a_end: String,
    b_end: String,
    k_even: bool,
    tau_outer_invariant: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalarRecord {
    #[serde(rename = "D")]
    denominator: u32,
    #[serde(default)]
    constants: Vec<ConstantsRecord>,
    #[serde(default)]
    param_overrides: Vec<ParamOverride>,
}

/// Operator-model constants for one simple root, or for all when `simple` is absent.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsRecord {
    simple: Option<usize>,
    c_prime: Option<String>,
    c_sqrt: Option<String>,
    eps1: Option<i8>,
    eps_minus1: Option<i8>,
}

/// Replaces the derived `(a, b)` of one simple root (1-based).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamOverride {
    simple: usize,
    a: String,
    b: String,
}

/// A parsed, shape-checked descriptor together with its scalar settings.
#[derive(Clone, Debug)]
pub struct Descriptor {
    pub inertial: InertialDescriptor,
    pub config: ScalarConfig,
    constants: Vec<(Option<usize>, SimpleConstants)>,
    overrides: Vec<(usize, Rational, Rational)>,
}

fn rational(field: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).ok_or_else(|| CliError::Schema(format!("{field}: {text:?} is not a rational of the form \"p/q\"")))
}

impl Descriptor {
    pub fn from_path(path: &Path) -> CliResult<Descriptor> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Descriptor::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> CliResult<Descriptor> {
        let file: DescriptorFile = toml::from_str(text).map_err(|e| CliError::Schema(e.to_string().trim_end().to_string()))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        let family = Family::parse(&file.family).ok_or_else(|| CliError::Schema(format!("unknown family {:?}", file.family)))?;
        let mut blocks = Vec::with_capacity(file.blocks.len());
        for b in file.blocks {
            let mu_class =
                MuClass::parse(&b.mu_class).ok_or_else(|| CliError::Schema(format!("block {:?}: unknown mu_class {:?}", b.label, b.mu_class)))?;
            blocks.push(Block {
                a_gl: rational("a_gl", &b.a_gl)?,
                a_end: rational("a_end", &b.a_end)?,
                b_end: rational("b_end", &b.b_end)?,
                label: b.label,
                k_i: b.k_i,
                d_i: b.d_i,
                mu_class,
                t_i: b.t_i,
                k_even: b.k_even,
                tau_outer_invariant: b.tau_outer_invariant,
            });
        }
        let inertial = InertialDescriptor { family, anchor_rank: file.anchor_rank, blocks };
        let sc = file.scalar_config;
        if sc.denominator == 0 {
            return Err(CliError::Schema("scalar_config.D must be positive".into()));
        }
        let mut constants = Vec::new();
        for c in sc.constants {
            let mut k = SimpleConstants::default();
            if let Some(t) = &c.c_prime {
                k.c_prime = ParamScalar::from_rational(rational("c_prime", t)?);
            }
            if let Some(t) = &c.c_sqrt {
                k.c_sqrt = ParamScalar::from_rational(rational("c_sqrt", t)?);
            }
            k.eps1 = c.eps1.unwrap_or(1);
            k.eps_minus1 = c.eps_minus1.unwrap_or(1);
            constants.push((c.simple, k));
        }
        let overrides = sc
            .param_overrides
            .iter()
            .map(|o| Ok((o.simple, rational("a", &o.a)?, rational("b", &o.b)?)))
            .collect::<CliResult<Vec<_>>>()?;
        inertial.validate_shape()?;
        Ok(Descriptor { inertial, config: ScalarConfig::new(sc.denominator), constants, overrides })
    }

    pub fn with_denominator(mut self, d: Option<u32>) -> CliResult<Descriptor> {
        if let Some(d) = d {
            if d == 0 {
                return Err(CliError::Schema("--denominator must be positive".into()));
            }
            self.config = ScalarConfig::new(d);
        }
        Ok(self)
    }

    /// Derived parameters with the file's overrides applied.
    pub fn apply_overrides(&self, params: &ParameterSet) -> CliResult<ParameterSet> {
        let n = params.len();
        let mut simple: Vec<SimpleParameter> = (0..n).map(|i| SimpleParameter::new(params.a(i).clone(), params.b(i).clone())).collect();
        for (s, a, b) in &self.overrides {
            if *s == 0 || *s > n {
                return Err(CliError::Schema(format!("param_overrides: simple {s} out of range 1..={n}")));
            }
            simple[s - 1] = SimpleParameter::new(a.clone(), b.clone());
        }
        Ok(ParameterSet::new(self.config, simple)?)
    }

    pub fn has_overrides(&self) -> bool {
        !self.overrides.is_empty()
    }

    /// One entry per simple root, or a single shared entry.
    pub fn constants(&self, n: usize) -> CliResult<Vec<SimpleConstants>> {
        let shared = self.constants.iter().rev().find(|(s, _)| s.is_none()).map(|(_, c)| c.clone()).unwrap_or_default();
        if self.constants.iter().all(|(s, _)| s.is_none()) {
            return Ok(vec![shared]);
        }
        let mut out = vec![shared; n];
        for (s, c) in &self.constants {
            if let Some(s) = s {
                if *s == 0 || *s > n {
                    return Err(CliError::Schema(format!("constants: simple {s} out of range 1..={n}")));
                }
                out[s - 1] = c.clone();
            }
        }
        Ok(out)
    }
}

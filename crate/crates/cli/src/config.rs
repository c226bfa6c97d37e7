//! Scenario files.
//!
//! A scenario is a TOML document with a top-level `command` key, an
//! optional `[output]` table and one table of parameters named after the
//! command. Every table rejects keys it does not know. Missing parameter
//! tables fall back to the defaults below.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use qtherm::correlations::QubitPair;
use qtherm::engines::{EngineConfig, MachineKind};
use qtherm::exchangers::ExchangerSetup;
use qtherm::otto::{OttoCycleSpec, SpectrumFamily, FIG3_HOT_RANGE};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Otto,
    Map2d,
    Wigner,
    Engine,
    Signature,
    Exchanger,
    Friction,
    Corr,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Otto => "otto",
            Command::Map2d => "map2d",
            Command::Wigner => "wigner",
            Command::Engine => "engine",
            Command::Signature => "signature",
            Command::Exchanger => "exchanger",
            Command::Friction => "friction",
            Command::Corr => "corr",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub command: Command,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub otto: Option<OttoCycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map2d: Option<Map2dParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine: Option<EngineParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SweepParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exchanger: Option<ExchangerParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub friction: Option<FrictionParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corr: Option<CorrParams>,
}

pub fn default_otto() -> OttoCycleSpec {
    OttoCycleSpec::new(SpectrumFamily::harmonic(1.0), SpectrumFamily::harmonic(0.6), 1.0, 0.5)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Map2dParams {
    pub lx_c: f64,
    pub ly_c: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub mass: f64,
    pub hbar: f64,
    /// Points per axis.
    pub n: usize,
    pub lx_range: (f64, f64),
    pub ly_range: (f64, f64),
}

impl Default for Map2dParams {
    fn default() -> Self {
        let t_c = PI * PI / 2.0;
        Map2dParams {
            lx_c: 1.0,
            ly_c: 0.25,
            t_h: 2.0 * t_c,
            t_c,
            mass: 1.0,
            hbar: 1.0,
            n: 50,
            lx_range: FIG3_HOT_RANGE[0],
            ly_range: FIG3_HOT_RANGE[1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WignerParams {
    /// Potential `a x^{2n}`.
    pub n: u32,
    pub a_c: f64,
    pub a_h: f64,
    pub mass: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub hbar: Vec<f64>,
}

impl Default for WignerParams {
    fn default() -> Self {
        WignerParams { n: 2, a_c: 1.0, a_h: 2.0, mass: 1.0, t_h: 2.0, t_c: 1.0, hbar: vec![0.05, 0.1, 0.2, 0.4] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineParams {
    pub params: EngineConfig,
    pub machines: Vec<MachineKind>,
    /// Run each machine coherently, dephased, or both.
    pub dephased: Vec<bool>,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            params: EngineConfig::nv_center(1.0),
            machines: MachineKind::ALL.to_vec(),
            dephased: vec![false, true],
        }
    }
}

/// A `τ_cyc` sweep of the three-level engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepParams {
    pub params: EngineConfig,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams { params: EngineConfig::nv_center(1.0), tau_min: 1e-4, tau_max: 10.0, points: 30 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExchangerParams {
    pub setup: ExchangerSetup,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
}

impl Default for ExchangerParams {
    fn default() -> Self {
        ExchangerParams {
            setup: ExchangerSetup::resonant(2.0, 1.0, 0.2, 2.0, 1.0, 0.01),
            tau_min: 3e-3,
            tau_max: 0.1,
            points: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrictionParams {
    RotatingQubit { omega_i: f64, omega_f: f64, theta_f: f64, t_f: f64, beta_i: f64 },
    Random { dim: usize, count: usize, seed: u64, t_f: f64, beta_i: f64, ratio: f64 },
}

impl Default for FrictionParams {
    fn default() -> Self {
        FrictionParams::RotatingQubit { omega_i: 1.0, omega_f: 2.0, theta_f: 1.0, t_f: 2.0, beta_i: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorrParams {
    pub pair: QubitPair,
    /// Diagonal shift of the initial state; `None` takes the largest allowed.
    pub shift: Option<f64>,
    pub theta_points: usize,
    /// `χ` runs from 0 to the positivity limit in this many steps.
    pub chi_points: usize,
}

impl Default for CorrParams {
    fn default() -> Self {
        CorrParams {
            pair: QubitPair { gap: 1.0, beta_a: 0.5, beta_b: 2.0 },
            shift: None,
            theta_points: 33,
            chi_points: 9,
        }
    }
}

impl ScenarioConfig {
    /// Fills in the parameter table of the selected command and rejects
    /// tables that belong to other commands.
    pub fn normalize(mut self) -> Result<Self, CliError> {
        let present = [
            ("otto", self.otto.is_some()),
            ("map2d", self.map2d.is_some()),
            ("wigner", self.wigner.is_some()),
            ("engine", self.engine.is_some()),
            ("signature", self.signature.is_some()),
            ("exchanger", self.exchanger.is_some()),
            ("friction", self.friction.is_some()),
            ("corr", self.corr.is_some()),
        ];
        for (name, set) in present {
            if set && name != self.command.as_str() {
                return Err(CliError::Parse(format!(
                    "table `{name}` does not belong to command `{}`",
                    self.command.as_str()
                )));
            }
        }
        match self.command {
            Command::Otto => {
                self.otto.get_or_insert_with(default_otto);
            }
            Command::Map2d => {
                self.map2d.get_or_insert_with(Default::default);
            }
            Command::Wigner => {
                self.wigner.get_or_insert_with(Default::default);
            }
            Command::Engine => {
                self.engine.get_or_insert_with(Default::default);
            }
            Command::Signature => {
                self.signature.get_or_insert_with(Default::default);
            }
            Command::Exchanger => {
                self.exchanger.get_or_insert_with(Default::default);
            }
            Command::Friction => {
                self.friction.get_or_insert_with(Default::default);
            }
            Command::Corr => {
                self.corr.get_or_insert_with(Default::default);
            }
        }
        Ok(self)
    }

    /// Canonical JSON of everything except the output table: sorted keys,
    /// no whitespace. Two configs describing the same computation share it.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("output");
        }
        serde_json::to_string(&v).expect("value serializes")
    }

    pub fn hash(&self) -> String {
        hash_str(&self.canonical_json())
    }
}

pub fn hash_str(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

/// Parses a scenario from TOML text, applying `key=value` overrides first.
pub fn parse(text: &str, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: ScenarioConfig =
        toml::Value::Table(doc).try_into().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    cfg.normalize()
}

pub fn load(path: &Path, overrides: &[String]) -> Result<ScenarioConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, overrides)
}

/// `a.b.c=value`, where `value` is any TOML value and falls back to a bare
/// string when it does not parse as one.
pub fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Parse(format!("override `{spec}` is not of the form key=value")))?;
    let key = key.trim();
    let value = parse_value(raw.trim());
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Parse(format!("override key `{key}` has an empty segment")));
    }
    let mut table = doc;
    for p in &parts[..parts.len() - 1] {
        let entry = table.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Parse(format!("override key `{key}`: `{p}` is not a table")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

//! `key = value` run configuration.
//!
//! One entry per line, `#` starts a comment, keys are case-sensitive and
//! every number is a plain SI decimal. Command-line flags named after the
//! keys override file values.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::any_to_any::AnyToAnyScenario;
use crate::error::{Error, Result};
use crate::many_to_one::GatheringScenario;
use crate::radio::{IdleEnergy, RadioParams};

/// The bundled reference configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../../config/table1.conf");

pub const KEYS: [&str; 14] = [
    "e_t", "e_r", "e_d", "e_id", "c", "n", "D", "K", "A", "T_d", "P", "B", "E_0", "paradigm",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paradigm {
    AnyToAny,
    ManyToOne,
}

impl FromStr for Paradigm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any_to_any" => Ok(Paradigm::AnyToAny),
            "many_to_one" => Ok(Paradigm::ManyToOne),
            other => Err(Error::Config(format!(
                "paradigm must be any_to_any or many_to_one, got {other:?}"
            ))),
        }
    }
}

/// Raw entries of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!(
                    "line {}: unknown key {key:?}",
                    lineno + 1
                )));
            }
            if value.is_empty() {
                return Err(Error::Config(format!(
                    "line {}: {key} has no value",
                    lineno + 1
                )));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key}",
                    lineno + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Replaces `key`, adding it if absent.
    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn remove(&mut self, key: &str) {
        self.entries.remove(key);
    }
}

/// Validated parameters for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub radio: RadioParams,
    pub paradigm: Option<Paradigm>,
    pub distance: Option<f64>,
    pub nodes: Option<usize>,
    pub packets: Option<u64>,
    pub cycle: Option<f64>,
    pub rate: Option<f64>,
    pub packet_bits: Option<u64>,
    pub initial_energy: Option<f64>,
}

fn parse_value<T: FromStr>(file: &ConfigFile, key: &str) -> Result<Option<T>> {
    file.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
        })
        .transpose()
}

fn require<T: FromStr>(file: &ConfigFile, key: &str) -> Result<T> {
    parse_value(file, key)?.ok_or_else(|| Error::Config(format!("missing required key {key}")))
}

impl RunConfig {
    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        let idle = match (
            parse_value::<f64>(file, "e_id")?,
            parse_value::<f64>(file, "c")?,
        ) {
            (Some(e_id), None) => IdleEnergy::PerPacket(e_id),
            (None, Some(c)) => IdleEnergy::Fraction(c),
            (Some(_), Some(_)) => {
                return Err(Error::Config("give only one of e_id and c".into()));
            }
            (None, None) => return Err(Error::Config("missing e_id (or c)".into())),
        };
        let radio = RadioParams::new(
            require(file, "e_t")?,
            require(file, "e_r")?,
            require(file, "e_d")?,
            idle,
            require(file, "n")?,
        )?;
        let config = Self {
            radio,
            paradigm: parse_value(file, "paradigm")?,
            distance: parse_value(file, "D")?,
            nodes: parse_value(file, "K")?,
            packets: parse_value(file, "A")?,
            cycle: parse_value(file, "T_d")?,
            rate: parse_value(file, "P")?,
            packet_bits: parse_value(file, "B")?,
            initial_energy: parse_value(file, "E_0")?,
        };
        config.check_ranges()?;
        Ok(config)
    }

    fn check_ranges(&self) -> Result<()> {
        let positive = [
            ("D", self.distance),
            ("T_d", self.cycle),
            ("P", self.rate),
            ("E_0", self.initial_energy),
        ];
        for (key, value) in positive {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Config(format!("{key} must be > 0, got {v}")));
                }
            }
        }
        if self.nodes == Some(0) {
            return Err(Error::Config("K must be >= 1".into()));
        }
        if self.packets == Some(0) {
            return Err(Error::Config("A must be >= 1".into()));
        }
        if self.packet_bits == Some(0) {
            return Err(Error::Config("B must be >= 1".into()));
        }
        Ok(())
    }

    pub fn require_paradigm(&self, wanted: Paradigm) -> Result<()> {
        match self.paradigm {
            Some(p) if p != wanted => Err(Error::Config(format!(
                "this command needs paradigm {wanted:?}, config says {p:?}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn distance(&self) -> Result<f64> {
        self.distance.ok_or_else(|| missing("D"))
    }

    pub fn nodes(&self) -> Result<usize> {
        self.nodes.ok_or_else(|| missing("K"))
    }

    pub fn packets(&self) -> Result<u64> {
        self.packets.ok_or_else(|| missing("A"))
    }

    pub fn cycle(&self) -> Result<f64> {
        self.cycle.ok_or_else(|| missing("T_d"))
    }

    pub fn rate(&self) -> Result<f64> {
        self.rate.ok_or_else(|| missing("P"))
    }

    pub fn relay_scenario(&self) -> Result<AnyToAnyScenario> {
        AnyToAnyScenario::new(
            self.distance()?,
            self.packets()?,
            self.cycle()?,
            self.rate()?,
        )
    }

    pub fn gathering_scenario(&self) -> Result<GatheringScenario> {
        Ok(
            GatheringScenario::new(self.nodes()?, self.distance()?, self.cycle()?, self.rate()?)?
                .with_metadata(self.packet_bits, self.initial_energy),
        )
    }
}

fn missing(key: &str) -> Error {
    Error::Config(format!("missing required key {key}"))
}

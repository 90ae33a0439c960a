//! Values with explicit unit suffixes, written as `"<number> <unit>"`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ringpair::units::Normalization;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// t·Ω
    PerLinewidth,
    Second,
    Millisecond,
    Microsecond,
    Nanosecond,
    Picosecond,
    Femtosecond,
    /// ω/Ω
    Linewidth,
    RadPerSecond,
    Meter,
    Millimeter,
    Micrometer,
    Nanometer,
    Picometer,
    Pi,
    Radian,
    Degree,
    /// Multiples of 1/τ_p.
    PerTauP,
}

const UNITS: &[(&str, Unit)] = &[
    ("/linewidth", Unit::PerLinewidth),
    ("s", Unit::Second),
    ("ms", Unit::Millisecond),
    ("us", Unit::Microsecond),
    ("ns", Unit::Nanosecond),
    ("ps", Unit::Picosecond),
    ("fs", Unit::Femtosecond),
    ("linewidths", Unit::Linewidth),
    ("linewidth", Unit::Linewidth),
    ("rad/s", Unit::RadPerSecond),
    ("m", Unit::Meter),
    ("mm", Unit::Millimeter),
    ("um", Unit::Micrometer),
    ("nm", Unit::Nanometer),
    ("pm", Unit::Picometer),
    ("pi", Unit::Pi),
    ("rad", Unit::Radian),
    ("deg", Unit::Degree),
    ("/tau_p", Unit::PerTauP),
];

impl Unit {
    pub fn symbol(self) -> &'static str {
        UNITS
            .iter()
            .find(|(_, u)| *u == self)
            .map(|(s, _)| *s)
            .expect("every unit has a symbol")
    }

    pub fn is_length(self) -> bool {
        self.meters().is_some()
    }

    fn seconds(self) -> Option<f64> {
        Some(match self {
            Unit::Second => 1.0,
            Unit::Millisecond => 1e-3,
            Unit::Microsecond => 1e-6,
            Unit::Nanosecond => 1e-9,
            Unit::Picosecond => 1e-12,
            Unit::Femtosecond => 1e-15,
            _ => return None,
        })
    }

    fn meters(self) -> Option<f64> {
        Some(match self {
            Unit::Meter => 1.0,
            Unit::Millimeter => 1e-3,
            Unit::Micrometer => 1e-6,
            Unit::Nanometer => 1e-9,
            Unit::Picometer => 1e-12,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: Unit,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self { value, unit }
    }

    fn needs<'a>(&self, norm: Option<&'a Normalization>) -> Result<&'a Normalization, String> {
        norm.ok_or_else(|| {
            format!(
                "'{self}' is in physical units; set resonator.q_loaded and resonator.wavelength (or omega0)"
            )
        })
    }

    fn wrong(&self, expected: &str) -> String {
        format!("'{self}' is not {expected}")
    }

    /// Duration as t·Ω.
    pub fn time(&self, norm: Option<&Normalization>) -> Result<f64, String> {
        match (self.unit, self.unit.seconds()) {
            (Unit::PerLinewidth, _) => Ok(self.value),
            (_, Some(scale)) => Ok(self.needs(norm)?.time(self.value * scale)),
            _ => Err(self.wrong("a time (/linewidth, s, ms, us, ns, ps, fs)")),
        }
    }

    /// Angular frequency as ω/Ω.
    pub fn frequency(&self, norm: Option<&Normalization>) -> Result<f64, String> {
        match self.unit {
            Unit::Linewidth => Ok(self.value),
            Unit::RadPerSecond => Ok(self.needs(norm)?.frequency(self.value)),
            _ => Err(self.wrong("a frequency (linewidths, rad/s)")),
        }
    }

    /// Frequency in linewidths only; used for numerics settings.
    pub fn linewidths(&self) -> Result<f64, String> {
        match self.unit {
            Unit::Linewidth => Ok(self.value),
            _ => Err(self.wrong("in linewidths")),
        }
    }

    /// Angle in radians.
    pub fn phase(&self) -> Result<f64, String> {
        match self.unit {
            Unit::Pi => Ok(self.value * PI),
            Unit::Radian => Ok(self.value),
            Unit::Degree => Ok(self.value.to_radians()),
            _ => Err(self.wrong("a phase (pi, rad, deg)")),
        }
    }

    /// Length in meters.
    pub fn length(&self) -> Result<f64, String> {
        self.unit
            .meters()
            .map(|m| self.value * m)
            .ok_or_else(|| self.wrong("a length (m, mm, um, nm, pm)"))
    }

    /// Gaussian bandwidth σ/Ω, given τ_pΩ.
    pub fn bandwidth(&self, tau_p: f64, norm: Option<&Normalization>) -> Result<f64, String> {
        match self.unit {
            Unit::PerTauP => Ok(self.value / tau_p),
            _ => self
                .frequency(norm)
                .map_err(|_| self.wrong("a bandwidth (/tau_p, linewidths, rad/s)")),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit.symbol())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (number, unit) = s
            .split_once(char::is_whitespace)
            .ok_or_else(|| format!("'{s}' needs a unit, written as '<number> <unit>'"))?;
        let value: f64 = number
            .parse()
            .map_err(|_| format!("'{number}' is not a number"))?;
        if !value.is_finite() {
            return Err(format!("'{number}' is not finite"));
        }
        let unit = unit.trim();
        let unit = UNITS
            .iter()
            .find(|(symbol, _)| *symbol == unit)
            .map(|(_, u)| *u)
            .ok_or_else(|| {
                let known: Vec<&str> = UNITS.iter().map(|(s, _)| *s).collect();
                format!(
                    "unknown unit '{unit}'; expected one of {}",
                    known.join(", ")
                )
            })?;
        Ok(Self { value, unit })
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

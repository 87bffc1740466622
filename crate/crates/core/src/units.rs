//! Unit systems for the Schwarzschild sector. Temperatures are energies
//! (`k_B = 1`); [`Constants::boltzmann`] converts to kelvin in SI.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};

/// Mass of the Sun in kilograms.
pub const SOLAR_MASS_KG: f64 = 1.98892e30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitSystem {
    /// `G = c = hbar = k_B = 1`.
    #[default]
    Natural,
    /// CODATA 2018 SI values.
    Si,
}

impl UnitSystem {
    pub fn constants(self) -> Constants {
        match self {
            UnitSystem::Natural => Constants {
                gravitational: 1.0,
                light_speed: 1.0,
                hbar: 1.0,
                boltzmann: 1.0,
            },
            UnitSystem::Si => Constants {
                gravitational: 6.674_30e-11,
                light_speed: 299_792_458.0,
                hbar: 1.054_571_817e-34,
                boltzmann: 1.380_649e-23,
            },
        }
    }
}

impl FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" => Ok(UnitSystem::Natural),
            "si" => Ok(UnitSystem::Si),
            other => Err(param(
                "units",
                format!("expected `natural` or `si`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Si => "si",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub gravitational: f64,
    pub light_speed: f64,
    pub hbar: f64,
    pub boltzmann: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unit_names() {
        assert_eq!(
            "natural".parse::<UnitSystem>().unwrap(),
            UnitSystem::Natural
        );
        assert_eq!(" SI ".parse::<UnitSystem>().unwrap(), UnitSystem::Si);
        assert!("cgs".parse::<UnitSystem>().is_err());
        assert_eq!(UnitSystem::Si.to_string(), "si");
    }
}

//! Presets for the nine published comparisons, all with a Gamma(1)-mixed
//! exponent.

use std::str::FromStr;

use shotnoise::laws::LawSpec;
use shotnoise::transforms::{AmplitudeLaw, ExponentLaw};

use crate::config::GridSpec;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Density,
    Cdf,
    Both,
}

impl Quantity {
    pub fn density(self) -> bool {
        matches!(self, Quantity::Density | Quantity::Both)
    }

    pub fn cdf(self) -> bool {
        matches!(self, Quantity::Cdf | Quantity::Both)
    }
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "density" => Ok(Quantity::Density),
            "cdf" => Ok(Quantity::Cdf),
            "both" => Ok(Quantity::Both),
            _ => Err(CliError::Usage(format!(
                "quantity `{s}`: expected density, cdf or both"
            ))),
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Quantity::Density => "density",
            Quantity::Cdf => "cdf",
            Quantity::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub spec: LawSpec,
    pub quantity: Quantity,
    pub grid: GridSpec,
    pub bin_width: f64,
}

pub fn preset(figure: u8) -> Result<Preset, CliError> {
    let exponent = ExponentLaw::GammaMixed { alpha: 1.0 };
    let (amplitude, quantity, grid, bin_width) = match figure {
        1 => (
            AmplitudeLaw::DeterministicOne,
            Quantity::Density,
            (0.0, 6.0, 301),
            0.02,
        ),
        2 => (
            AmplitudeLaw::DeterministicOne,
            Quantity::Cdf,
            (0.0, 6.0, 301),
            0.02,
        ),
        3 => (
            AmplitudeLaw::Gamma { beta: 1.0 },
            Quantity::Density,
            (0.0, 6.0, 301),
            0.02,
        ),
        4 => (
            AmplitudeLaw::Gamma { beta: 1.0 },
            Quantity::Cdf,
            (0.0, 6.0, 301),
            0.02,
        ),
        5 => (
            AmplitudeLaw::Gamma { beta: 0.5 },
            Quantity::Density,
            (0.0, 6.0, 121),
            0.05,
        ),
        6 => (
            AmplitudeLaw::SymmetricLaplace { beta: 1.0 },
            Quantity::Density,
            (0.0, 6.0, 121),
            0.05,
        ),
        7 => (
            AmplitudeLaw::SymmetricLaplace { beta: 1.0 },
            Quantity::Cdf,
            (0.0, 6.0, 121),
            0.05,
        ),
        8 => (
            AmplitudeLaw::SymmetricLaplace { beta: 2.0 },
            Quantity::Cdf,
            (0.0, 6.0, 121),
            0.05,
        ),
        9 => (
            AmplitudeLaw::SymmetricLaplace { beta: 0.5 },
            Quantity::Cdf,
            (0.0, 6.0, 121),
            0.05,
        ),
        _ => return Err(CliError::Usage(format!("figure {figure}: expected 1 to 9"))),
    };
    Ok(Preset {
        spec: LawSpec::new(exponent, amplitude)?,
        quantity,
        grid: GridSpec {
            lo: grid.0,
            hi: grid.1,
            n_points: grid.2,
        },
        bin_width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for k in 1..=9 {
            let p = preset(k).unwrap();
            assert!(p.grid.to_grid().is_ok());
            assert_eq!(p.spec.exponent, ExponentLaw::GammaMixed { alpha: 1.0 });
        }
        assert!(preset(0).is_err());
        assert!(preset(10).is_err());
    }

    #[test]
    fn quantity_round_trip() {
        for q in [Quantity::Density, Quantity::Cdf, Quantity::Both] {
            assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
        }
        assert!("pdf".parse::<Quantity>().is_err());
    }
}

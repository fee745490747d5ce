//! Run configuration: TOML file, environment override, command-line flags.

use std::path::Path;

use anticyc::padic::PrecisionPolicy;
use serde::Deserialize;

pub const PRECISION_ENV: &str = "ANTICYC_PRECISION";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupBlock {
    #[serde(rename = "D")]
    pub d: Option<i64>,
    pub p: Option<u64>,
    #[serde(rename = "N")]
    pub level: Option<u64>,
    pub n_plus: Option<u64>,
    pub n_minus: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionBlock {
    #[serde(rename = "N")]
    pub digits: Option<u32>,
    #[serde(rename = "M")]
    pub series_terms: Option<usize>,
    #[serde(rename = "MW")]
    pub weight_terms: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n_max: Option<u32>,
    /// Characters as "n:j" (conductor exponent, generator image).
    pub chars: Option<Vec<String>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub setup: SetupBlock,
    #[serde(default)]
    pub precision: PrecisionBlock,
    /// Builtin label or path to a form-data JSON file.
    pub form: Option<String>,
    #[serde(default)]
    pub grid: GridBlock,
    pub output: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// `base`, then the environment variable, then the config block, then the flag.
    pub fn precision(&self, base: PrecisionPolicy, flag: Option<&str>) -> Result<PrecisionPolicy, String> {
        let mut pol = match std::env::var(PRECISION_ENV) {
            Ok(s) if !s.trim().is_empty() => {
                PrecisionPolicy::parse(&s).map_err(|e| format!("{PRECISION_ENV}: {e}"))?
            }
            _ => base,
        };
        if let Some(d) = self.precision.digits {
            pol.digits = d;
        }
        if let Some(m) = self.precision.series_terms {
            pol.series_terms = m;
        }
        if let Some(w) = self.precision.weight_terms {
            pol.weight_terms = w;
        }
        if let Some(s) = flag {
            pol = PrecisionPolicy::parse(s).map_err(|e| e.to_string())?;
        }
        pol.validate().map_err(|e| e.to_string())?;
        Ok(pol)
    }
}

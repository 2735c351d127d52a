use std::fs;

use mlsi_core::measure::{HalfLine, HalfLineDescriptor, PotentialFamily, PotentialSpec};
use mlsi_core::{YoungFn, YoungSpec};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::error::CliError;

pub const MEASURE_FAMILIES: &[&str] = &["power_law", "gaussian", "double_exp", "custom"];
pub const WEIGHT_FAMILIES: &[&str] = &["uniform", "exponential"];
pub const YOUNG_FAMILIES: &[&str] = &["power", "scaled_power", "plus_square", "conjugate", "spliced"];

/// Reads a JSON description given inline (`{...}`) or as a file path.
/// Returns the value and a label naming where it came from.
pub fn load_json(arg: &str) -> Result<(Value, String), CliError> {
    if arg.trim_start().starts_with('{') {
        let v = serde_json::from_str(arg).map_err(|e| CliError::Parse {
            source_name: "inline JSON".into(),
            message: e.to_string(),
        })?;
        return Ok((v, "inline JSON".into()));
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::Io {
        path: arg.into(),
        source: e,
    })?;
    let v = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        source_name: arg.into(),
        message: e.to_string(),
    })?;
    Ok((v, arg.into()))
}

fn family_of(v: &Value, origin: &str, allowed: &[&str]) -> Result<(), CliError> {
    let family = v.get("family").and_then(Value::as_str).ok_or_else(|| CliError::Parse {
        source_name: origin.into(),
        message: "missing string field \"family\"".into(),
    })?;
    if allowed.contains(&family) {
        Ok(())
    } else {
        Err(CliError::UnknownFamily {
            family: family.into(),
            supported: allowed.join(", "),
        })
    }
}

fn decode<T: DeserializeOwned>(v: Value, origin: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse {
        source_name: origin.into(),
        message: e.to_string(),
    })
}

pub fn measure(arg: &str) -> Result<PotentialSpec, CliError> {
    let (v, origin) = load_json(arg)?;
    family_of(&v, &origin, MEASURE_FAMILIES)?;
    let family: PotentialFamily = decode(v, &origin)?;
    Ok(PotentialSpec::new(family)?)
}

pub fn half_line(arg: &str) -> Result<HalfLine, CliError> {
    let (v, origin) = load_json(arg)?;
    let allowed: Vec<&str> = WEIGHT_FAMILIES.iter().chain(MEASURE_FAMILIES).copied().collect();
    family_of(&v, &origin, &allowed)?;
    let d: HalfLineDescriptor = decode(v, &origin)?;
    Ok(d.build()?)
}

pub fn young(arg: &str) -> Result<YoungFn, CliError> {
    let (v, origin) = load_json(arg)?;
    family_of(&v, &origin, YOUNG_FAMILIES)?;
    let s: YoungSpec = decode(v, &origin)?;
    Ok(s.build()?)
}

/// The measure and the speed measure, which defaults to the measure.
pub fn measure_pair(measure_arg: &str, nu_arg: Option<&str>) -> Result<(PotentialSpec, PotentialSpec), CliError> {
    let mu = measure(measure_arg)?;
    let nu = match nu_arg {
        Some(a) => measure(a)?,
        None => mu.clone(),
    };
    Ok((mu, nu))
}

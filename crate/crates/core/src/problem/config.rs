//! Plain-text `key = value` run configuration.
//!
//! ```text
//! alpha = 1.0
//! beta = 0.5
//! psi = identity        # identity | exp_minus_one | square | log1p
//! psi_k = 1.0           # only read for exp_minus_one
//! nu = 0.5
//! lambda = 50
//! T = 1
//! grid_n = 257
//! h = sqrt              # sqrt | log1p | zero | saturating_linear:<c>, optional "- <shift>"
//! m = constant          # constant | affine:<slope> | saturating:<scale>
//! zeta0 = 1
//! zeta_inf = 1
//! r = 0.8
//! tol = 1e-10
//! max_iter = 2000
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::problem::{
    FractionalOrder, KirchhoffFn, Nonlinearity, NonlinearityKind, ProblemSpec, PsiFunction,
};
use crate::scalar::Scalar;

pub const CONFIG_KEYS: [&str; 15] = [
    "alpha", "beta", "psi", "psi_k", "nu", "lambda", "T", "grid_n", "h", "m", "zeta0", "zeta_inf",
    "r", "tol", "max_iter",
];

/// Keys that only some values of another key need.
const CONDITIONAL_KEYS: [&str; 1] = ["psi_k"];

pub type ConfigKey = &'static str;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("unknown override key `{0}`")]
    UnknownOverride(String),
    #[error("missing key `{0}`")]
    MissingKey(String),
    #[error("bad value for `{key}` (`{value}`): {reason}")]
    BadValue { key: String, value: String, reason: String },
}

/// Iteration settings carried alongside the problem data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings<S> {
    pub r: S,
    pub tol: S,
    pub max_iter: usize,
}

/// Splits the text into a key map, rejecting unknown and duplicate keys.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, text: raw.trim().to_string() })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line, text: raw.trim().to_string() });
        }
        if !CONFIG_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line, key: key.to_string() });
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
    }
    Ok(out)
}

/// Parses `text`, applies `overrides` on top, and builds the problem.
///
/// Returns the merged key map as well so callers can echo it.
pub fn parse_config<S: Scalar>(
    text: &str,
    overrides: &[(String, String)],
) -> Result<(ProblemSpec<S>, RunSettings<S>, BTreeMap<String, String>), ConfigError> {
    let mut map = parse_pairs(text)?;
    for (k, v) in overrides {
        if !CONFIG_KEYS.contains(&k.as_str()) {
            return Err(ConfigError::UnknownOverride(k.clone()));
        }
        map.insert(k.clone(), v.trim().to_string());
    }
    let (spec, settings) = build(&map)?;
    Ok((spec, settings, map))
}

fn build<S: Scalar>(map: &BTreeMap<String, String>) -> Result<(ProblemSpec<S>, RunSettings<S>), ConfigError> {
    for key in CONFIG_KEYS.iter().filter(|k| !CONDITIONAL_KEYS.contains(k)) {
        if !map.contains_key(*key) {
            return Err(ConfigError::MissingKey(key.to_string()));
        }
    }
    let get = |k: &str| map[k].as_str();

    let psi = match get("psi") {
        "identity" => PsiFunction::Identity,
        "exp_minus_one" => {
            let raw = map.get("psi_k").ok_or_else(|| ConfigError::MissingKey("psi_k".into()))?;
            PsiFunction::ExpMinusOne { k: real("psi_k", raw)? }
        }
        "square" => PsiFunction::Square,
        "log1p" => PsiFunction::Log1p,
        other => return Err(bad("psi", other, "expected identity, exp_minus_one, square or log1p")),
    };

    let zeta0: S = real("zeta0", get("zeta0"))?;
    let zeta_inf: S = real("zeta_inf", get("zeta_inf"))?;
    let m = parse_kirchhoff(get("m"), zeta0, zeta_inf)?;
    let h = parse_nonlinearity(get("h"))?;

    let spec = ProblemSpec {
        order: FractionalOrder::new(real("alpha", get("alpha"))?, real("beta", get("beta"))?),
        psi,
        t_end: real("T", get("T"))?,
        grid_n: count("grid_n", get("grid_n"))?,
        m,
        h,
        nu: real("nu", get("nu"))?,
        lambda: real("lambda", get("lambda"))?,
    };
    let settings = RunSettings {
        r: real("r", get("r"))?,
        tol: real("tol", get("tol"))?,
        max_iter: count("max_iter", get("max_iter"))?,
    };
    if !(settings.tol > S::zero()) {
        return Err(bad("tol", get("tol"), "must be positive"));
    }
    if settings.max_iter < 1 {
        return Err(bad("max_iter", get("max_iter"), "must be at least 1"));
    }
    Ok((spec, settings))
}

fn parse_kirchhoff<S: Scalar>(value: &str, zeta0: S, zeta_inf: S) -> Result<KirchhoffFn<S>, ConfigError> {
    let (kind, param) = split_param(value);
    match (kind, param) {
        ("constant", None) => {
            if zeta_inf != zeta0 {
                return Err(bad("m", value, "constant M needs zeta_inf equal to zeta0"));
            }
            Ok(KirchhoffFn::Constant { c: zeta0 })
        }
        ("affine", Some(p)) => Ok(KirchhoffFn::Affine { a0: zeta0, b0: real("m", p)?, cap: zeta_inf }),
        ("saturating", Some(p)) => Ok(KirchhoffFn::Saturating { zeta0, zeta_inf, scale: real("m", p)? }),
        _ => Err(bad("m", value, "expected constant, affine:<slope> or saturating:<scale>")),
    }
}

fn parse_nonlinearity<S: Scalar>(value: &str) -> Result<Nonlinearity<S>, ConfigError> {
    let (head, shift) = match value.split_once(" - ") {
        Some((head, shift)) => (head.trim(), real("h", shift.trim())?),
        None => (value, S::zero()),
    };
    let kind = match split_param(head) {
        ("sqrt", None) => NonlinearityKind::Sqrt,
        ("log1p", None) => NonlinearityKind::Log1p,
        ("zero", None) => NonlinearityKind::Zero,
        ("saturating_linear", Some(c)) => NonlinearityKind::SaturatingLinear { c: real("h", c)? },
        _ => return Err(bad("h", value, "expected sqrt, log1p, zero or saturating_linear:<c>")),
    };
    Ok(Nonlinearity::shifted(kind, shift))
}

fn split_param(value: &str) -> (&str, Option<&str>) {
    match value.split_once(':') {
        Some((k, p)) => (k.trim(), Some(p.trim())),
        None => (value.trim(), None),
    }
}

fn real<S: Scalar>(key: &str, value: &str) -> Result<S, ConfigError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .and_then(S::from_f64)
        .ok_or_else(|| bad(key, value, "not a finite real number"))
}

fn count(key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse::<usize>().map_err(|_| bad(key, value, "not a nonnegative integer"))
}

fn bad(key: &str, value: &str, reason: &str) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), value: value.to_string(), reason: reason.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# classical catalog problem
alpha = 1.0
beta = 0.5
psi = identity
nu = 0.5
lambda = 50
T = 1
grid_n = 257
h = sqrt
m = constant
zeta0 = 1
zeta_inf = 1
r = 0.8
tol = 1e-10
max_iter = 2000
";

    #[test]
    fn parses_sample() {
        let (spec, settings, echo) = parse_config::<f64>(SAMPLE, &[]).unwrap();
        assert_eq!(spec.lambda, 50.0);
        assert_eq!(spec.grid_n, 257);
        assert_eq!(spec.m, KirchhoffFn::Constant { c: 1.0 });
        assert_eq!(settings.max_iter, 2000);
        assert_eq!(echo.len(), 14);
    }

    #[test]
    fn overrides_replace_values() {
        let ov = vec![("lambda".to_string(), "7.5".to_string()), ("psi".into(), "exp_minus_one".into()), ("psi_k".into(), "2".into())];
        let (spec, _, _) = parse_config::<f64>(SAMPLE, &ov).unwrap();
        assert_eq!(spec.lambda, 7.5);
        assert_eq!(spec.psi, PsiFunction::ExpMinusOne { k: 2.0 });
    }

    #[test]
    fn unknown_and_missing_keys_rejected() {
        let text = format!("{SAMPLE}gamma = 3\n");
        assert!(matches!(parse_config::<f64>(&text, &[]), Err(ConfigError::UnknownKey { line: 16, .. })));
        let text = SAMPLE.replace("nu = 0.5\n", "");
        assert_eq!(parse_config::<f64>(&text, &[]).unwrap_err(), ConfigError::MissingKey("nu".into()));
        let ov = vec![("speed".to_string(), "1".to_string())];
        assert!(matches!(parse_config::<f64>(SAMPLE, &ov), Err(ConfigError::UnknownOverride(_))));
    }

    #[test]
    fn duplicate_and_syntax_errors() {
        let text = format!("{SAMPLE}alpha = 0.9\n");
        assert!(matches!(parse_pairs(&text), Err(ConfigError::DuplicateKey { .. })));
        assert!(matches!(parse_pairs("alpha 0.9"), Err(ConfigError::Syntax { line: 1, .. })));
    }

    #[test]
    fn catalog_value_grammar() {
        let h: Nonlinearity<f64> = parse_nonlinearity("saturating_linear:2 - 0.1").unwrap();
        assert_eq!(h.kind, NonlinearityKind::SaturatingLinear { c: 2.0 });
        assert_eq!(h.shift, 0.1);
        let m: KirchhoffFn<f64> = parse_kirchhoff("affine:0.5", 1.0, 3.0).unwrap();
        assert_eq!(m, KirchhoffFn::Affine { a0: 1.0, b0: 0.5, cap: 3.0 });
        assert!(parse_kirchhoff::<f64>("constant", 1.0, 2.0).is_err());
        assert!(parse_nonlinearity::<f64>("cube").is_err());
    }

    #[test]
    fn exp_psi_needs_rate() {
        let text = SAMPLE.replace("psi = identity", "psi = exp_minus_one");
        assert_eq!(parse_config::<f64>(&text, &[]).unwrap_err(), ConfigError::MissingKey("psi_k".into()));
    }
}

use std::collections::BTreeMap;

use super::ScaleFamily;
use crate::error::{Error, Result};
use crate::real::Real;

/// Names accepted by the `family` key.
pub const FAMILY_NAMES: [&str; 8] = [
    "brownian_drift",
    "gamma_ratio",
    "two_stable",
    "abate_whitt",
    "killed_stable",
    "gamma_compound",
    "linnik",
    "bessel_ladder",
];

/// Parameter keys for each family, in constructor order.
pub fn family_keys(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "brownian_drift" => &["kappa", "d"],
        "gamma_ratio" => &["beta", "c", "nu", "lambda"],
        "two_stable" => &["a", "b", "alpha", "beta", "m"],
        "abate_whitt" => &["lambda", "mu"],
        "killed_stable" => &["kappa", "c", "alpha", "gamma"],
        "gamma_compound" => &["kappa", "lambda", "gamma", "nu"],
        "linnik" => &["lambda", "alpha"],
        "bessel_ladder" => &[],
        _ => return None,
    })
}

/// Keys that modify the base family; applied as tilt, then conjugate,
/// then drift_negative.
pub const MODIFIER_KEYS: [&str; 3] = ["tilt", "conjugate", "drift_negative"];

fn number<T: Real>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse::<f64>()
        .map(T::lit)
        .map_err(|_| Error::Parameter(format!("parameter '{key}' expects a number, got '{raw}'")))
}

fn flag(key: &str, raw: &str) -> Result<bool> {
    match raw.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Parameter(format!("parameter '{key}' expects true or false, got '{raw}'"))),
    }
}

/// Splits `key=value` tokens separated by whitespace.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for tok in text.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("expected key=value, got '{tok}'")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

/// Builds a family from `family=<name>` plus its parameters and optional
/// `tilt=<β>`, `conjugate=true`, `drift_negative=<β>`. Unknown keys are
/// rejected.
pub fn parse_family<T: Real>(params: &BTreeMap<String, String>) -> Result<ScaleFamily<T>> {
    let name = params
        .get("family")
        .ok_or_else(|| Error::Parameter("missing 'family' key".into()))?
        .as_str();
    let keys = family_keys(name).ok_or_else(|| {
        Error::Parameter(format!("unknown family '{name}'; expected one of {}", FAMILY_NAMES.join(", ")))
    })?;
    for k in params.keys() {
        if k != "family" && !keys.contains(&k.as_str()) && !MODIFIER_KEYS.contains(&k.as_str()) {
            return Err(Error::Parameter(format!("unknown parameter '{k}' for family {name}")));
        }
    }
    let get = |k: &str| -> Result<T> {
        match params.get(k) {
            Some(v) => number(k, v),
            None if name == "two_stable" && k == "m" => Ok(T::zero()),
            None => Err(Error::Parameter(format!("family {name} needs parameter '{k}'"))),
        }
    };
    let v: Vec<T> = keys.iter().map(|k| get(k)).collect::<Result<_>>()?;
    let mut fam = match name {
        "brownian_drift" => ScaleFamily::brownian_drift(v[0], v[1])?,
        "gamma_ratio" => ScaleFamily::gamma_ratio(v[0], v[1], v[2], v[3])?,
        "two_stable" => ScaleFamily::two_stable(v[0], v[1], v[2], v[3], v[4])?,
        "abate_whitt" => ScaleFamily::abate_whitt(v[0], v[1])?,
        "killed_stable" => ScaleFamily::killed_stable(v[0], v[1], v[2], v[3])?,
        "gamma_compound" => ScaleFamily::gamma_compound(v[0], v[1], v[2], v[3])?,
        "linnik" => ScaleFamily::linnik(v[0], v[1])?,
        _ => ScaleFamily::bessel_ladder(),
    };
    if let Some(raw) = params.get("tilt") {
        fam = fam.tilt(number("tilt", raw)?)?;
    }
    if let Some(raw) = params.get("conjugate") {
        if flag("conjugate", raw)? {
            fam = fam.conjugate_family()?;
        }
    }
    if let Some(raw) = params.get("drift_negative") {
        fam = fam.drift_negative(number("drift_negative", raw)?)?;
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ScaleFamily<f64>> {
        parse_family(&parse_key_values(s)?)
    }

    #[test]
    fn round_trip_examples() {
        let f = parse("family=gamma_compound kappa=1 lambda=1 gamma=1 nu=0.5").unwrap();
        assert_eq!(f, ScaleFamily::gamma_compound(1.0, 1.0, 1.0, 0.5).unwrap());
        let f = parse("family=two_stable a=1 b=1 alpha=0.5 beta=0.8").unwrap();
        assert_eq!(f.name(), "two_stable");
        let f = parse("family=bessel_ladder").unwrap();
        assert_eq!(f.describe(), "bessel_ladder()");
    }

    #[test]
    fn modifiers_in_order() {
        let f = parse("family=gamma_ratio beta=1 c=1 nu=0 lambda=0.5 conjugate=true drift_negative=0.25").unwrap();
        assert_eq!(f.describe(), "drift_negative(conjugate(gamma_ratio(beta=1, c=1, nu=0, lambda=0.5)), beta=0.25)");
        let f = parse("family=brownian_drift kappa=1 d=1 tilt=2 conjugate=1").unwrap();
        assert_eq!(f.describe(), "conjugate(tilt(brownian_drift(kappa=1, d=1), beta=2))");
    }

    #[test]
    fn errors_are_parameter_errors() {
        for bad in [
            "family=nope",
            "kappa=1",
            "family=brownian_drift kappa=1",
            "family=brownian_drift kappa=1 d=1 extra=2",
            "family=brownian_drift kappa=x d=1",
            "family=brownian_drift kappa=1 d=-1",
            "family=linnik lambda=1 alpha=1 conjugate=maybe",
            "justtext",
        ] {
            assert!(matches!(parse(bad), Err(Error::Parameter(_))), "{bad}");
        }
    }
}

//! Parsers for command-line values.

use anyhow::{anyhow, bail, Context, Result};
use symroof::families::Family;
use symroof::{FamilyPoint, MonotoneSpec, SchmidtVector};

/// Largest deviation of `Σλ` from 1 accepted without `--normalize`.
pub const LAMBDA_SUM_TOL: f64 = 1e-9;

/// `vidal:K`, `renyi:ALPHA`, `entropy` or `concurrence:K`.
pub fn monotone(s: &str) -> Result<MonotoneSpec> {
    let (name, arg) = match s.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (s, None),
    };
    let int = |a: Option<&str>| -> Result<usize> {
        let a = a.ok_or_else(|| anyhow!("monotone `{name}` needs a parameter, as in `{name}:2`"))?;
        a.parse().with_context(|| format!("invalid parameter `{a}` for `{name}`"))
    };
    let spec = match name {
        "entropy" if arg.is_none() => MonotoneSpec::entropy(),
        "vidal" => MonotoneSpec::vidal(int(arg)?)?,
        "concurrence" => MonotoneSpec::concurrence(int(arg)?)?,
        "renyi" => {
            let a = arg.ok_or_else(|| anyhow!("monotone `renyi` needs an order, as in `renyi:2`"))?;
            MonotoneSpec::renyi(a.parse().with_context(|| format!("invalid Rényi order `{a}`"))?)?
        }
        _ => bail!("unknown monotone `{s}`; expected vidal:K, renyi:ALPHA, entropy or concurrence:K"),
    };
    Ok(spec)
}

/// A comma-separated list of nonnegative weights.
///
/// Without `normalize` the entries must sum to 1 within [`LAMBDA_SUM_TOL`].
pub fn lambda(s: &str, normalize: bool) -> Result<SchmidtVector> {
    let weights: Vec<f64> = s
        .split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>().with_context(|| format!("invalid Schmidt coefficient `{x}`"))
        })
        .collect::<Result<_>>()?;
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        bail!("Schmidt coefficient {w} is not a nonnegative number");
    }
    let sum: f64 = weights.iter().sum();
    if normalize {
        if sum <= 0.0 {
            bail!("Schmidt coefficients sum to zero");
        }
        return Ok(SchmidtVector::normalized(weights)?);
    }
    if (sum - 1.0).abs() > LAMBDA_SUM_TOL {
        bail!("Schmidt coefficients sum to {sum}, not 1; pass --normalize to rescale");
    }
    if (sum - 1.0).abs() > symroof::qcore::types::SUM_TOL {
        return Ok(SchmidtVector::normalized(weights)?);
    }
    Ok(SchmidtVector::from_unsorted(weights)?)
}

/// Family names accepted by `--family`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyName {
    Werner,
    Iso,
    Oo,
    PpWerner,
    PpIso,
}

/// Builds a family point from `--family`, `--a`, `--b` and `--d`.
pub fn family_point(name: FamilyName, a: Option<f64>, b: Option<f64>, d: usize) -> Result<FamilyPoint> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| anyhow!("family {name:?} needs --{flag}"));
    let family = match name {
        FamilyName::Werner => Family::Werner { a: need(a, "a")? },
        FamilyName::Iso => Family::Isotropic { b: need(b, "b")? },
        FamilyName::Oo => Family::OO { a: need(a, "a")?, b: need(b, "b")? },
        FamilyName::PpWerner => Family::PPWerner { a: need(a, "a")?, b: need(b, "b")? },
        FamilyName::PpIso => Family::PPIsotropic { a: need(a, "a")?, b: need(b, "b")? },
    };
    Ok(FamilyPoint::new(family, d)?)
}

/// Target of a conversion witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Werner(f64),
    Isotropic(f64),
}

/// `werner:A` or `iso:B`.
pub fn target(s: &str) -> Result<Target> {
    let (name, value) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("target `{s}` must look like werner:A or iso:B"))?;
    let x: f64 = value.parse().with_context(|| format!("invalid target coordinate `{value}`"))?;
    match name {
        "werner" => Ok(Target::Werner(x)),
        "iso" | "isotropic" => Ok(Target::Isotropic(x)),
        _ => bail!("unknown target family `{name}`; expected werner or iso"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_labels_round_trip() {
        for s in ["vidal:2", "renyi:0.5", "entropy", "concurrence:3"] {
            assert_eq!(monotone(s).unwrap().label(), s);
        }
        for s in ["vidal", "renyi:1", "entropy:2", "tangle", "vidal:x"] {
            assert!(monotone(s).is_err(), "{s}");
        }
    }

    #[test]
    fn lambda_sums_are_checked() {
        assert_eq!(lambda("0.3,0.7", false).unwrap().as_slice(), &[0.7, 0.3]);
        assert!(lambda("0.3,0.6", false).is_err());
        assert_eq!(lambda("3,1", true).unwrap().as_slice(), &[0.75, 0.25]);
        assert!(lambda("0.5,-0.5,1", true).is_err());
        assert!(lambda("a,b", false).is_err());
    }

    #[test]
    fn targets() {
        assert_eq!(target("werner:0.9").unwrap(), Target::Werner(0.9));
        assert_eq!(target("iso:0.95").unwrap(), Target::Isotropic(0.95));
        assert!(target("oo:0.1").is_err());
        assert!(target("iso").is_err());
    }
}

//! Textual family specifications: `clayton:theta=2`, `negbin:theta=0.3,alpha=2`, `logsv`.

use std::fmt;
use std::str::FromStr;

use super::{CustomGenerator, Generator, Kind};
use crate::error::{Error, Result};
use crate::scalar::Real;

struct Params<'a> {
    family: &'a str,
    pairs: Vec<(&'a str, f64)>,
}

impl<'a> Params<'a> {
    fn parse(family: &'a str, body: Option<&'a str>) -> Result<Self> {
        let mut pairs = Vec::new();
        if let Some(body) = body {
            for item in body.split(',') {
                let item = item.trim();
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::parse(item, "expected key=value"))?;
                let key = key.trim();
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(value.trim(), format!("`{key}` needs a number")))?;
                if pairs.iter().any(|(k, _)| *k == key) {
                    return Err(Error::parse(key, "duplicate parameter"));
                }
                pairs.push((key, value));
            }
        }
        Ok(Params { family, pairs })
    }

    fn take(&mut self, key: &str) -> Result<f64> {
        match self.pairs.iter().position(|(k, _)| *k == key) {
            Some(i) => Ok(self.pairs.remove(i).1),
            None => Err(Error::parse(
                self.family,
                format!("missing parameter `{key}`"),
            )),
        }
    }

    fn finish(self) -> Result<()> {
        match self.pairs.first() {
            Some((k, _)) => Err(Error::parse(
                *k,
                format!("unknown parameter for {}", self.family),
            )),
            None => Ok(()),
        }
    }
}

impl<T: Real> FromStr for Generator<T> {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (family, body) = match spec.split_once(':') {
            Some((f, b)) => (f.trim(), Some(b)),
            None => (spec, None),
        };
        let lower = family.to_ascii_lowercase();
        if lower == "testfn" {
            return match body.map(str::trim) {
                Some("exp-t2") => Ok(Generator::custom(CustomGenerator::exp_neg_square())),
                Some(other) => Err(Error::parse(other, "unknown test function")),
                None => Err(Error::parse(family, "test function name required")),
            };
        }
        let mut p = Params::parse(family, body)?;
        let g = match lower.as_str() {
            "clayton" => Generator::clayton(T::lit(p.take("theta")?)),
            "gumbel" => Generator::gumbel(T::lit(p.take("theta")?)),
            "frank" => Generator::frank(T::lit(p.take("theta")?)),
            "joeb5" | "b5" => Generator::joe_b5(T::lit(p.take("theta")?)),
            "negbin" => {
                let theta = p.take("theta")?;
                let alpha = p.take("alpha")?;
                Generator::neg_binomial(T::lit(theta), T::lit(alpha))
            }
            "logsv" => Ok(Generator::log_sv()),
            _ => return Err(Error::parse(family, "unknown family")),
        }?;
        p.finish()?;
        Ok(g)
    }
}

impl<T: Real> fmt::Display for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match &self.kind {
            Kind::Clayton { theta }
            | Kind::Gumbel { theta }
            | Kind::Frank { theta, .. }
            | Kind::JoeB5 { theta } => write!(f, "{name}:theta={}", theta.as_f64()),
            Kind::NegBinomial { theta, alpha } => {
                write!(
                    f,
                    "{name}:theta={},alpha={}",
                    theta.as_f64(),
                    alpha.as_f64()
                )
            }
            Kind::LogSv | Kind::Custom(_) => f.write_str(name),
        }
    }
}

impl<T: Real> Generator<T> {
    /// Parses a family specification string.
    pub fn parse(spec: &str) -> Result<Self> {
        spec.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::FamilyKind;

    #[test]
    fn round_trips_catalog_specs() {
        for s in [
            "clayton:theta=2",
            "gumbel:theta=2",
            "frank:theta=1",
            "joeb5:theta=1.5",
            "negbin:theta=0.3,alpha=2",
            "logsv",
            "testfn:exp-t2",
        ] {
            let g: Generator<f64> = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
    }

    #[test]
    fn errors_name_the_offending_token() {
        let token = |s: &str| match s.parse::<Generator<f64>>() {
            Err(Error::Parse { token, .. }) => token,
            other => panic!("{s}: {other:?}"),
        };
        assert_eq!(token("clayon:theta=2"), "clayon");
        assert_eq!(token("clayton:theta=abc"), "abc");
        assert_eq!(token("clayton:theta"), "theta");
        assert_eq!(token("clayton:theta=1,rho=2"), "rho");
        assert_eq!(token("negbin:theta=0.3"), "negbin");
    }

    #[test]
    fn range_violations_are_parameter_errors() {
        assert!(matches!(
            "gumbel:theta=0.5".parse::<Generator<f64>>(),
            Err(Error::InvalidParameter { name: "theta", .. })
        ));
        let g: Generator<f64> = "negbin:alpha=1,theta=0".parse().unwrap();
        assert_eq!(g.kind(), FamilyKind::NegBinomial);
    }
}

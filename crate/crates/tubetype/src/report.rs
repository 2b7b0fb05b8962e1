//! Serializable results shared by the library checks and the CLI.
//!
//! Exact rationals are carried as decimal strings under `num`/`den` so that
//! consumers never round them through floats.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RatJson {
    fn from(r: &BigRational) -> Self {
        RatJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl RatJson {
    pub fn to_rational(&self) -> Option<BigRational> {
        let num = self.num.parse().ok()?;
        let den = self.den.parse().ok()?;
        Some(BigRational::new(num, den))
    }
}

/// Outcome of one numeric residual check over the valid samples of a grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub surface: String,
    pub samples: usize,
    pub max_rel: f64,
    pub mean_rel: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(
        check: impl Into<String>,
        surface: impl Into<String>,
        samples: usize,
        max_rel: f64,
        mean_rel: f64,
        tolerance: f64,
    ) -> Self {
        ResidualReport {
            check: check.into(),
            surface: surface.into(),
            samples,
            max_rel,
            mean_rel,
            tolerance,
            pass: max_rel < tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rational_roundtrip() {
        let r = BigRational::new((-135135).into(), 4.into());
        let j = RatJson::from(&r);
        assert_eq!(j.num, "-135135");
        assert_eq!(j.den, "4");
        assert_eq!(j.to_rational(), Some(r));
    }

    #[test]
    fn residual_pass_is_strict() {
        let r = ResidualReport::new("x", "sphere", 10, 1e-6, 1e-7, 1e-5);
        assert!(r.pass);
        let r = ResidualReport::new("x", "sphere", 10, 1e-5, 1e-7, 1e-5);
        assert!(!r.pass);
    }
}

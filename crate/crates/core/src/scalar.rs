//! Scalar abstraction shared by geometry and measure.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating point scalar usable for coordinates and values.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("representable constant")
    }

    fn f(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn half() -> Self {
        Self::c(0.5)
    }

    fn two() -> Self {
        Self::c(2.0)
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Numerical tolerances.
///
/// `FAIRSQUARE_TOL` overrides them, either as a single number (sets `geo` and
/// `val`) or as `key=value` pairs separated by commas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Geometric predicate tolerance, relative to the size of the pieces compared.
    pub geo: f64,
    /// Value tolerance, relative to the total value in play.
    pub val: f64,
    /// Slack when checking a reported fraction against its bound.
    pub guarantee: f64,
    /// Slack when checking a probe result against an upper bound.
    pub probe: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { geo: 1e-9, val: 1e-9, guarantee: 1e-6, probe: 1e-3 }
    }
}

impl Tolerances {
    pub fn from_env() -> Self {
        match std::env::var("FAIRSQUARE_TOL") {
            Ok(s) => Self::parse(&s).unwrap_or_default(),
            Err(_) => Self::default(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut t = Self::default();
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            if !(v > 0.0) {
                return None;
            }
            t.geo = v;
            t.val = v;
            return Some(t);
        }
        for part in s.split(',') {
            let (k, v) = part.split_once('=')?;
            let v: f64 = v.trim().parse().ok()?;
            if !(v > 0.0) {
                return None;
            }
            match k.trim() {
                "geo" => t.geo = v,
                "val" => t.val = v,
                "guarantee" => t.guarantee = v,
                "probe" => t.probe = v,
                _ => return None,
            }
        }
        Some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Tolerances::parse("1e-7").unwrap().geo, 1e-7);
        let t = Tolerances::parse("probe=0.01, val=1e-8").unwrap();
        assert_eq!(t.probe, 0.01);
        assert_eq!(t.val, 1e-8);
        assert_eq!(t.geo, 1e-9);
        assert!(Tolerances::parse("bogus=1").is_none());
        assert!(Tolerances::parse("-1").is_none());
    }

    #[test]
    fn constants() {
        assert_eq!(<f32 as Real>::c(0.25), 0.25f32);
        assert_eq!(<f64 as Real>::half(), 0.5);
    }
}

//! Half-integer labels for highest weights.

use std::fmt;
use std::str::FromStr;

use crate::error::{QError, Result};

/// A nonnegative half-integer `l`, stored as `2l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub const fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    pub fn from_f64(l: f64) -> Result<Self> {
        let twice = 2.0 * l;
        if !(twice >= 0.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(QError::InvalidSpin(l.to_string()));
        }
        Ok(Spin(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Weights `2m` in descending order `2l, 2l - 2, ..., -2l`.
    pub fn twice_weights(self) -> impl Iterator<Item = i64> {
        let l2 = self.0 as i64;
        (0..=l2).map(move |i| l2 - 2 * i)
    }

    pub fn plus_half(self) -> Spin {
        Spin(self.0 + 1)
    }

    pub fn minus_half(self) -> Option<Spin> {
        self.0.checked_sub(1).map(Spin)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = QError;

    /// Accepts `"3/2"`, `"1.5"` or `"2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| QError::InvalidSpin(s.into()))?;
            let d: i64 = d.trim().parse().map_err(|_| QError::InvalidSpin(s.into()))?;
            return match d {
                1 if n >= 0 => Ok(Spin(2 * n as u32)),
                2 if n >= 0 => Ok(Spin(n as u32)),
                _ => Err(QError::InvalidSpin(s.into())),
            };
        }
        let v: f64 = s.parse().map_err(|_| QError::InvalidSpin(s.into()))?;
        Spin::from_f64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/2".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("1.5".parse::<Spin>().unwrap(), Spin::from_twice(3));
        assert_eq!("2".parse::<Spin>().unwrap(), Spin::from_twice(4));
        assert!("-1".parse::<Spin>().is_err());
        assert!("0.3".parse::<Spin>().is_err());
        assert!("1/3".parse::<Spin>().is_err());
    }

    #[test]
    fn weights_descend() {
        let w: Vec<i64> = Spin::from_twice(3).twice_weights().collect();
        assert_eq!(w, vec![3, 1, -1, -3]);
        assert_eq!(Spin::HALF.to_string(), "1/2");
        assert_eq!(Spin::ONE.to_string(), "1");
    }
}

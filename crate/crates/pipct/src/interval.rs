//! Closed intervals `[a, b]` and the affine map to the reference interval `[-1, 1]`.

use crate::error::{Error, Result};

/// Round-off allowance when clamping reference coordinates back into `[-1, 1]`.
pub(crate) const UNIT_CLAMP_TOL: f64 = 1e-12;

/// A finite interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a >= b {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints must be finite with a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// Maps a reference coordinate `y` in `[-1, 1]` onto the interval:
    /// `a + (b - a) (y + 1) / 2`.
    pub fn from_unit(&self, y: f64) -> Result<f64> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(Error::InvalidArgument(format!(
                "reference coordinate {y} outside [-1, 1]"
            )));
        }
        Ok(self.a + (self.b - self.a) * (y + 1.0) * 0.5)
    }

    /// Inverse of [`from_unit`](Self::from_unit). Round-off excursions with
    /// `|y| <= 1 + 1e-12` are clamped back to the endpoints; anything further
    /// out is rejected.
    pub fn to_unit(&self, x: f64) -> Result<f64> {
        let y = (2.0 * x - self.a - self.b) / (self.b - self.a);
        if y.abs() <= 1.0 {
            Ok(y)
        } else if y.abs() <= 1.0 + UNIT_CLAMP_TOL {
            Ok(y.signum())
        } else {
            Err(Error::OutOfDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Left and right halves split at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.midpoint();
        (Interval { a: self.a, b: m }, Interval { a: m, b: self.b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_endpoints() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn identity_interval_maps_through() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        assert!((iv.from_unit(0.3).unwrap() - 0.3).abs() <= f64::EPSILON);
    }

    #[test]
    fn endpoints_map_to_endpoints() {
        let iv = Interval::new(2.0, 6.0).unwrap();
        assert_eq!(iv.from_unit(-1.0).unwrap(), 2.0);
        assert_eq!(iv.from_unit(1.0).unwrap(), 6.0);
        assert_eq!(Interval::new(0.0, 1.0).unwrap().from_unit(0.0).unwrap(), 0.5);
    }

    #[test]
    fn from_unit_rejects_outside_reference() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(iv.from_unit(1.5).is_err());
        assert!(iv.from_unit(-1.0000001).is_err());
    }

    #[test]
    fn to_unit_clamps_round_off_only() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert_eq!(iv.to_unit(1.0 + 4e-13).unwrap(), 1.0);
        assert_eq!(iv.to_unit(-4e-13).unwrap(), -1.0);
        assert!(iv.to_unit(1.01).is_err());
    }

    #[test]
    fn round_trip_within_ulp_scale() {
        let iv = Interval::new(-3.5, 7.25).unwrap();
        for k in 0..=100 {
            let y = -1.0 + 2.0 * (k as f64) / 100.0;
            let x = iv.from_unit(y).unwrap();
            let back = iv.to_unit(x).unwrap();
            assert!((back - y).abs() <= 4.0 * f64::EPSILON, "y={y} back={back}");
        }
    }
}

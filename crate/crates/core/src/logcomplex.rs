//! Complex numbers stored as (log₂ modulus, argument).
//!
//! Orbit computations at horizon 10⁴ with |λ| = 2 involve coordinates of size
//! 2^{−10⁴}; storing the exponent separately keeps them representable until
//! the final conversion, where anything below the f64 range is genuinely zero
//! at the precision of the norms being compared.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    log2_abs: f64,
    arg: f64,
}

fn reduce(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log2_abs: f64::NEG_INFINITY,
        arg: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        log2_abs: 0.0,
        arg: 0.0,
    };

    pub fn from_parts(log2_abs: f64, arg: f64) -> Self {
        if log2_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log2_abs,
            arg: reduce(arg),
        }
    }

    pub fn from_c64(z: C64) -> Self {
        if z == C64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self::from_parts(z.norm().log2(), z.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.log2_abs == f64::NEG_INFINITY
    }

    pub fn log2_abs(&self) -> f64 {
        self.log2_abs
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    /// Converts back; values below the subnormal range become zero.
    pub fn to_c64(self) -> C64 {
        if self.is_zero() || self.log2_abs < -1100.0 {
            return C64::new(0.0, 0.0);
        }
        C64::from_polar(self.log2_abs.exp2(), self.arg)
    }

    pub fn abs(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.log2_abs.exp2()
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.log2_abs + other.log2_abs, self.arg + other.arg)
    }

    /// Integer power; negative exponents invert.
    pub fn powi(self, e: i64) -> Self {
        if e == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return if e > 0 { Self::ZERO } else { Self::from_parts(f64::INFINITY, 0.0) };
        }
        Self::from_parts(self.log2_abs * e as f64, self.arg * e as f64)
    }

    /// Principal m-th root, argument in (−π/m, π/m].
    pub fn principal_root(self, m: u32) -> Self {
        if self.is_zero() {
            return self;
        }
        let theta = if self.arg <= -PI { PI } else { self.arg };
        Self {
            log2_abs: self.log2_abs / m as f64,
            arg: theta / m as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_products() {
        let z = C64::new(-1.5, 2.25);
        let w = C64::new(0.5, -3.0);
        let lz = LogComplex::from_c64(z);
        assert!((lz.to_c64() - z).norm() < 1e-14);
        assert!((lz.mul(LogComplex::from_c64(w)).to_c64() - z * w).norm() < 1e-13);
        assert!((lz.powi(3).to_c64() - z * z * z).norm() < 1e-12);
        assert!((lz.powi(-1).to_c64() - 1.0 / z).norm() < 1e-14);
    }

    #[test]
    fn tiny_magnitudes_survive_until_conversion() {
        let half = LogComplex::from_c64(C64::new(0.5, 0.0));
        let tiny = half.powi(10_000);
        assert_eq!(tiny.log2_abs(), -10_000.0);
        assert_eq!(tiny.to_c64(), C64::new(0.0, 0.0));
        let back = tiny.mul(LogComplex::from_c64(C64::new(2.0, 0.0)).powi(9_999));
        assert!((back.to_c64() - C64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn principal_root_matches_seqspace() {
        let z = C64::new(-4.0, 0.0);
        let r = LogComplex::from_c64(z).principal_root(2).to_c64();
        let s = crate::seqspace::principal_root(z, 2);
        assert!((r - s).norm() < 1e-15);
    }
}

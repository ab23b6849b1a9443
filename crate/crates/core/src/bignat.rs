//! Arbitrary-precision naturals (backed by `num-bigint`) and their base-2 logarithms.

use std::f64::consts::LN_2;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

pub type BigNat = BigUint;

/// 2^e.
pub fn pow2(e: u64) -> BigNat {
    BigNat::one() << e
}

/// log₂ n from the bit length plus the leading 64-bit window; −∞ for zero.
pub fn log2(n: &BigNat) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().expect("fits in 64 bits").to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64-bit window");
    shift as f64 + (top as f64).log2()
}

/// log₂(2^e + offset) without materialising 2^e.
///
/// The correction term log₂(1 + offset·2^{−e}) is evaluated with `ln_1p`; it
/// vanishes below double precision once e exceeds ~1074.
pub fn log2_pow2_offset(e: u64, offset: i64) -> f64 {
    let rel = if e > 1100 {
        0.0
    } else {
        offset as f64 * (-(e as f64)).exp2()
    };
    assert!(rel > -1.0, "2^{e} + {offset} must be positive");
    e as f64 + rel.ln_1p() / LN_2
}

/// Serde adapter writing a [`BigNat`] as a decimal string.
pub mod decimal {
    use super::BigNat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigNat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigNat, D::Error> {
        let s = String::deserialize(d)?;
        BigNat::parse_bytes(s.trim().as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal natural: {s:?}")))
    }
}

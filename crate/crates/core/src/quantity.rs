//! Scalar types for rates and cache sizes.
//!
//! Structured sources use exact rationals; joint-pmf sources use `f64`.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};

/// An exact number of bits.
pub type Bits = Ratio<i64>;

pub fn bits(n: i64) -> Bits {
    Bits::from_integer(n)
}

pub trait Quantity: Num + Copy + PartialOrd + Debug + Send + Sync {
    fn ratio(numer: i64, denom: i64) -> Self;
    fn to_f64(self) -> f64;
    fn approx_eq(self, other: Self) -> bool;
    /// Decimal rendering used in CSV output; integral values print without a fraction.
    fn render(self) -> String;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn max2(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min2(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Quantity for Bits {
    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn approx_eq(self, other: Self) -> bool {
        self == other
    }

    fn render(self) -> String {
        if self.is_integer() {
            self.to_integer().to_string()
        } else {
            render_f64(Quantity::to_f64(self))
        }
    }
}

impl Quantity for f64 {
    fn ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn approx_eq(self, other: Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= 1e-9 * scale
    }

    fn render(self) -> String {
        render_f64(self)
    }
}

fn render_f64(v: f64) -> String {
    if v.fract().is_zero() && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Parses `"1200"`, `"2401/2"` or `"1200.25"` into an exact value.
pub fn parse_bits(s: &str) -> Option<Bits> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Ratio::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().ok()?
        };
        let denom = 10i64.checked_pow(frac.len() as u32)?;
        let frac: i64 = frac.parse().ok()?;
        let mag = whole.abs().checked_mul(denom)?.checked_add(frac)?;
        let numer = if negative { -mag } else { mag };
        return Some(Ratio::new(numer, denom));
    }
    s.parse::<i64>().ok().map(Ratio::from_integer)
}

/// Integral value of an exact quantity, if it is one and non-negative.
pub fn to_u64(v: Bits) -> Option<u64> {
    if v.is_integer() && v >= Bits::zero() {
        u64::try_from(v.to_integer()).ok()
    } else {
        None
    }
}

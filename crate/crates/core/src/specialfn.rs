//! Special functions shared by the rest of the crate.
//!
//! Information is carried in nats throughout; [`InfoQuantity::bits`] is the
//! only place the base changes. The `0·ln 0 = 0` convention is taken by
//! explicit branch rather than by trusting IEEE behaviour of `0 * -inf`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `π²/6 = Li₂(1)`.
pub const PI2_6: f64 = PI * PI / 6.0;

/// A density in `[0, 1]`: hole density, punch density, output density.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("probability", value)
    }

    /// Like [`Probability::new`] but reports `name` in the error.
    pub fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::NotAProbability { name, value })
        }
    }

    /// Clamps into `[0, 1]`. For values that are probabilities up to rounding.
    pub(crate) fn saturating(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        Probability(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 − p`.
    #[inline]
    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Probability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: f64 = s.trim().parse().map_err(|_| Error::NotAProbability {
            name: "probability",
            value: f64::NAN,
        })?;
        Probability::new(value)
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// An amount of information, stored in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct InfoQuantity(f64);

impl InfoQuantity {
    pub const ZERO: InfoQuantity = InfoQuantity(0.0);

    #[inline]
    pub fn from_nats(nats: f64) -> Self {
        InfoQuantity(nats)
    }

    #[inline]
    pub fn from_bits(bits: f64) -> Self {
        to_nats(bits)
    }

    #[inline]
    pub fn nats(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn bits(self) -> f64 {
        to_bits(self)
    }
}

impl std::ops::Add for InfoQuantity {
    type Output = InfoQuantity;
    fn add(self, rhs: Self) -> Self {
        InfoQuantity(self.0 + rhs.0)
    }
}

impl std::ops::Sub for InfoQuantity {
    type Output = InfoQuantity;
    fn sub(self, rhs: Self) -> Self {
        InfoQuantity(self.0 - rhs.0)
    }
}

impl std::ops::Mul<f64> for InfoQuantity {
    type Output = InfoQuantity;
    fn mul(self, rhs: f64) -> Self {
        InfoQuantity(self.0 * rhs)
    }
}

impl std::iter::Sum for InfoQuantity {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        InfoQuantity(iter.map(|x| x.0).sum())
    }
}

#[inline]
pub fn to_bits(x: InfoQuantity) -> f64 {
    x.0 / LN_2
}

#[inline]
pub fn to_nats(bits: f64) -> InfoQuantity {
    InfoQuantity(bits * LN_2)
}

/// `x·(−ln x)`, zero at both ends.
#[inline]
pub(crate) fn xlnbar(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

pub fn self_info(x: Probability) -> InfoQuantity {
    InfoQuantity(xlnbar(x.0))
}

/// Binary entropy `H(p) = p·ln̄p + p̄·ln̄p̄` in nats.
pub fn entropy(p: Probability) -> InfoQuantity {
    InfoQuantity(entropy_raw(p.0))
}

#[inline]
pub(crate) fn entropy_raw(p: f64) -> f64 {
    xlnbar(p) + xlnbar(1.0 - p)
}

/// `−ln x` for `x = 1 − xbar`, using whichever of the pair is more precise.
#[inline]
pub(crate) fn neg_ln_pair(x: f64, xbar: f64) -> f64 {
    if x < 0.5 {
        -x.ln()
    } else {
        -(-xbar).ln_1p()
    }
}

/// Dilogarithm `Li₂(x) = Σ xᵏ/k²` on `[0, 1]`.
///
/// Direct summation below one half, the reflection
/// `Li₂(x) = π²/6 − ln x·ln(1−x) − Li₂(1−x)` above.
pub fn dilog(x: Probability) -> InfoQuantity {
    let x = x.0;
    InfoQuantity(dilog_pair(x, 1.0 - x))
}

/// `Li₂(x)` where the caller also knows `1 − x` to full precision.
pub(crate) fn dilog_pair(x: f64, xbar: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if xbar <= 0.0 {
        PI2_6
    } else if x <= 0.5 {
        dilog_series(x)
    } else {
        let ln_x = -neg_ln_pair(x, xbar);
        let ln_xbar = xbar.ln();
        PI2_6 - ln_x * ln_xbar - dilog_series(xbar)
    }
}

fn dilog_series(x: f64) -> f64 {
    debug_assert!((0.0..=0.5).contains(&x));
    let mut sum = 0.0;
    let mut power = x;
    let mut k = 1.0_f64;
    loop {
        let term = power / (k * k);
        sum += term;
        if term < 1e-16 * sum.max(f64::MIN_POSITIVE) || term == 0.0 {
            break;
        }
        power *= x;
        k += 1.0;
    }
    sum
}

/// Plug-in mutual information of a 2×2 joint distribution, in nats.
///
/// `joint[x][y]` need not be normalised; it is divided by its total.
/// Zero cells contribute nothing.
pub fn mutual_information(joint: &[[f64; 2]; 2]) -> f64 {
    let total: f64 = joint.iter().flatten().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let px = [
        (joint[0][0] + joint[0][1]) / total,
        (joint[1][0] + joint[1][1]) / total,
    ];
    let py = [
        (joint[0][0] + joint[1][0]) / total,
        (joint[0][1] + joint[1][1]) / total,
    ];
    let mut mi = 0.0;
    for (x, row) in joint.iter().enumerate() {
        for (y, &count) in row.iter().enumerate() {
            let pxy = count / total;
            if pxy > 0.0 {
                mi += pxy * (pxy / (px[x] * py[y])).ln();
            }
        }
    }
    mi.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn p(x: f64) -> Probability {
        Probability::new(x).unwrap()
    }

    // Reference sum with no reflection, summed until terms vanish.
    fn series_oracle(x: f64) -> f64 {
        let mut s = 0.0;
        for k in 1..200_000u32 {
            let k = k as f64;
            let t = x.powf(k) / (k * k);
            s += t;
            if t < 1e-18 {
                break;
            }
        }
        s
    }

    #[test]
    fn probability_rejects_out_of_range() {
        assert!(Probability::new(-0.1).is_err());
        assert!(Probability::new(1.0 + 1e-12).is_err());
        assert!(Probability::new(f64::NAN).is_err());
        assert!(Probability::new(f64::INFINITY).is_err());
        assert!("0.25".parse::<Probability>().is_ok());
        assert!("abc".parse::<Probability>().is_err());
    }

    #[test]
    fn entropy_points() {
        assert!((entropy(p(0.5)).nats() - LN_2).abs() < 1e-15);
        assert_eq!(entropy(p(0.0)).nats(), 0.0);
        assert_eq!(entropy(p(1.0)).nats(), 0.0);
        // mpmath, 30 digits
        assert!((entropy(p(0.8)).nats() - 0.500_402_423_538_188).abs() < 1e-15);
    }

    #[test]
    fn self_info_points() {
        assert_eq!(self_info(p(0.0)).nats(), 0.0);
        assert_eq!(self_info(p(1.0)).nats(), 0.0);
        assert!((self_info(p(1.0 / E)).nats() - 1.0 / E).abs() < 1e-15);
    }

    #[test]
    fn dilog_points() {
        assert_eq!(dilog(p(0.0)).nats(), 0.0);
        assert!((dilog(p(1.0)).nats() - PI2_6).abs() < 1e-15);
        let half = PI * PI / 12.0 - LN_2 * LN_2 / 2.0;
        assert!((dilog(p(0.5)).nats() - half).abs() < 1e-14);
        assert!((series_oracle(0.5) - half).abs() < 1e-14);
    }

    #[test]
    fn dilog_matches_direct_series() {
        // Direct series converges slowly near 1; keep the oracle where it is exact.
        for i in 0..=90 {
            let x = i as f64 / 100.0;
            let d = (dilog(p(x)).nats() - series_oracle(x)).abs();
            assert!(d < 1e-12, "x={x} diff={d}");
        }
    }

    #[test]
    fn dilog_derivative_matches_finite_differences() {
        let h = 1e-5;
        for i in 1..=19 {
            let x = 0.05 * i as f64;
            let fd = (dilog(p(x + h)).nats() - dilog(p(x - h)).nats()) / (2.0 * h);
            let exact = -(1.0 - x).ln() / x;
            assert!(((fd - exact) / exact).abs() < 1e-6, "x={x}");
        }
    }

    #[test]
    fn dilog_monotone_on_grid() {
        let mut prev = -1.0;
        for i in 0..=10_000 {
            let v = dilog(p(i as f64 / 10_000.0)).nats();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn unit_conversion() {
        assert!((to_bits(InfoQuantity::from_nats(LN_2)) - 1.0).abs() < 1e-15);
        assert_eq!(to_bits(InfoQuantity::ZERO), 0.0);
        assert!((to_bits(InfoQuantity::from_nats(PI2_6)) - 2.373138220831251).abs() < 1e-12);
        assert!((to_nats(1.0).nats() - LN_2).abs() < 1e-16);
    }

    #[test]
    fn generic_mi_of_independent_table_is_zero() {
        let t = [[0.06, 0.14], [0.24, 0.56]];
        assert!(mutual_information(&t).abs() < 1e-15);
        assert_eq!(mutual_information(&[[0.0; 2]; 2]), 0.0);
        // noiseless binary channel
        assert!((mutual_information(&[[0.5, 0.0], [0.0, 0.5]]) - LN_2).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn entropy_symmetric(x in 0.0f64..=1.0) {
            prop_assert!((entropy(p(x)).nats() - entropy(p(1.0 - x)).nats()).abs() <= 1e-15);
        }

        #[test]
        fn entropy_is_sum_of_self_info(x in 0.0f64..=1.0) {
            let lhs = entropy(p(x)).nats();
            let rhs = self_info(p(x)).nats() + self_info(p(1.0 - x)).nats();
            prop_assert!((lhs - rhs).abs() <= 1e-15);
        }

        #[test]
        fn dilog_reflection(x in 1e-9f64..(1.0 - 1e-9)) {
            let lhs = dilog(p(x)).nats() + dilog(p(1.0 - x)).nats();
            let rhs = PI2_6 - x.ln() * (1.0 - x).ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }

        #[test]
        fn bits_nats_roundtrip(b in -1e6f64..1e6) {
            let back = to_bits(to_nats(b));
            prop_assert!((back - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}

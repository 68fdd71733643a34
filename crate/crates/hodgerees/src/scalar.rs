//! Scalar backends for the subspace algebra.
//!
//! Two backends implement the [`Scalar`] trait:
//!
//! * [`GaussianRational`] — exact arithmetic in Q(i), a pair of
//!   arbitrary-precision rationals `a + b·i`. Every structural computation
//!   (filtrations, Hodge numbers, splitting levels) runs here, so dimension
//!   counts are exact and equality is decidable.
//! * [`num_complex::Complex64`] — double-precision complex numbers for
//!   transcendental period-matrix work (entries like `2πi`, logarithms of
//!   cross-ratios, theta values). Rank decisions on this backend are made
//!   against a global relative tolerance: a pivot is treated as zero when
//!   `|pivot| ≤ τ · max|entry|` of the working matrix.
//!
//! The tolerance τ is process-global (default `1e-9`, see
//! [`rank_tolerance`]/[`set_rank_tolerance`]) so that every rank decision in a
//! run uses one consistent policy.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default relative rank tolerance for the floating backend.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-9;

static RANK_TOL_BITS: AtomicU64 = AtomicU64::new(f64::to_bits(DEFAULT_RANK_TOLERANCE));

/// Current global relative tolerance used by floating-point rank decisions.
pub fn rank_tolerance() -> f64 {
    f64::from_bits(RANK_TOL_BITS.load(Ordering::Relaxed))
}

/// Override the global relative rank tolerance (must be positive and finite).
///
/// Exact-backend computations ignore it entirely.
pub fn set_rank_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "rank tolerance must be positive and finite");
    RANK_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// A field element usable by the generic subspace algebra.
///
/// Implementors are complex fields with a distinguished real structure:
/// conjugation is coordinatewise with respect to the fixed ambient basis, and
/// `abs_score` gives a floating estimate of the magnitude used for pivot
/// selection (and, on inexact backends, for zero thresholding).
pub trait Scalar:
    Sized
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Whether arithmetic and equality on this backend are exact.
    const EXACT: bool;

    /// Complex conjugate with respect to the fixed real basis.
    fn conj(&self) -> Self;

    /// Floating estimate of `|self|`, used to pick pivots (and on inexact
    /// backends to decide zeroness). Exact backends must still report `0.0`
    /// only as an estimate — exact zero tests go through [`Zero::is_zero`].
    fn abs_score(&self) -> f64;

    /// Embed a signed integer.
    fn from_i64(v: i64) -> Self;

    /// The imaginary unit.
    fn i() -> Self;

    /// Whether this entry should be treated as zero under `threshold`
    /// (ignored by exact backends, which test exact zeroness).
    fn is_zero_with(&self, threshold: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_score() <= threshold
        }
    }
}

/// Exact element of Q(i): `re + im·i` with arbitrary-precision rationals.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// `a/b` as a real element.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// `(a/b) + (c/d)·i`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Squared modulus `re² + im²` (a nonnegative rational).
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        GaussianRational { re, im }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / &n;
        GaussianRational { re, im }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    fn abs_score(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        let s = re.hypot(im);
        if s == 0.0 && !self.is_zero() {
            // Underflowed estimate of a nonzero exact value.
            f64::MIN_POSITIVE
        } else {
            s
        }
    }

    fn from_i64(v: i64) -> Self {
        GaussianRational::from_ratio(v, 1)
    }

    fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }
}

fn fmt_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Display for GaussianRational {
    /// Canonical serialization: `a/b` when the value is real, otherwise
    /// `a/b+c/d i` (with the sign of the imaginary part folded into the
    /// separator).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_ratio(&self.re))
        } else if self.im.is_negative() {
            write!(f, "{}-{} i", fmt_ratio(&self.re), fmt_ratio(&-self.im.clone()))
        } else {
            write!(f, "{}+{} i", fmt_ratio(&self.re), fmt_ratio(&self.im))
        }
    }
}

/// Error from parsing a Gaussian-rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian rational literal {input:?}: {reason}")]
pub struct ParseGaussianRationalError {
    pub input: String,
    pub reason: &'static str,
}

fn parse_plain_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num_str.trim()).ok()?;
    let den = BigInt::from_str(den_str.trim()).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

impl FromStr for GaussianRational {
    type Err = ParseGaussianRationalError;

    /// Accepts `a/b`, `a/b+c/d i`, `a/b-c/d i`, a bare integer `a`, and
    /// pure-imaginary forms like `c/d i` or `-c i`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &'static str| ParseGaussianRationalError { input: s.to_string(), reason };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty literal"));
        }
        if let Some(body) = compact.strip_suffix('i') {
            // Find the separator between the real and imaginary parts: a '+'
            // or '-' that is not the leading sign.
            // The separator is the LAST '+'/'-' that is not the leading sign,
            // so "-1/2-3/4i" splits before "3/4".
            let mut split = None;
            for (idx, ch) in body.char_indices().skip(1) {
                if ch == '+' || ch == '-' {
                    split = Some(idx);
                }
            }
            match split {
                Some(idx) => {
                    let re = parse_plain_rational(&body[..idx]).ok_or_else(|| err("bad real part"))?;
                    let sign = if body[idx..].starts_with('-') { -1 } else { 1 };
                    let im_body = &body[idx + 1..];
                    let im_mag = if im_body.is_empty() {
                        BigRational::one()
                    } else {
                        parse_plain_rational(im_body).ok_or_else(|| err("bad imaginary part"))?
                    };
                    let im = if sign < 0 { -im_mag } else { im_mag };
                    Ok(GaussianRational { re, im })
                }
                None => {
                    // Pure imaginary: "c/di", "i", "-i".
                    let im = if body.is_empty() {
                        BigRational::one()
                    } else if body == "-" {
                        -BigRational::one()
                    } else {
                        parse_plain_rational(body).ok_or_else(|| err("bad imaginary part"))?
                    };
                    Ok(GaussianRational { re: BigRational::zero(), im })
                }
            }
        } else {
            let re = parse_plain_rational(&compact).ok_or_else(|| err("bad rational"))?;
            Ok(GaussianRational { re, im: BigRational::zero() })
        }
    }
}

impl Scalar for num_complex::Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        num_complex::Complex64::conj(self)
    }

    fn abs_score(&self) -> f64 {
        self.norm()
    }

    fn from_i64(v: i64) -> Self {
        num_complex::Complex64::new(v as f64, 0.0)
    }

    fn i() -> Self {
        num_complex::Complex64::new(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = GaussianRational::i();
        // i² = −1
        assert_eq!(i.clone() * i.clone(), -GaussianRational::one());
        // (1+i)(1−i) = 2
        let z = GaussianRational::from_parts(1, 1, 1, 1);
        assert_eq!(z.clone() * z.conj(), q(2, 1));
        // division round-trips
        let w = GaussianRational::from_parts(3, 4, -2, 5);
        assert_eq!(w.clone() / z.clone() * z, w);
    }

    #[test]
    fn display_round_trip() {
        let cases = [
            GaussianRational::from_parts(1, 2, 3, 4),
            GaussianRational::from_parts(-1, 2, -3, 4),
            q(5, 1),
            q(-7, 3),
            GaussianRational::i(),
            -GaussianRational::i(),
            GaussianRational::zero(),
        ];
        for c in cases {
            let s = c.to_string();
            let back: GaussianRational = s.parse().unwrap();
            assert_eq!(back, c, "round-trip through {s:?}");
        }
    }

    #[test]
    fn parse_forms() {
        let p = |s: &str| s.parse::<GaussianRational>().unwrap();
        assert_eq!(p("1/2"), q(1, 2));
        assert_eq!(p("3"), q(3, 1));
        assert_eq!(p("-3"), q(-3, 1));
        assert_eq!(p("1/2+3/4 i"), GaussianRational::from_parts(1, 2, 3, 4));
        assert_eq!(p("1/2-3/4 i"), GaussianRational::from_parts(1, 2, -3, 4));
        assert_eq!(p("i"), GaussianRational::i());
        assert_eq!(p("-i"), -GaussianRational::i());
        assert_eq!(p("2 i"), GaussianRational::from_parts(0, 1, 2, 1));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("".parse::<GaussianRational>().is_err());
        assert!("1/2+".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn tolerance_global() {
        assert_eq!(rank_tolerance(), DEFAULT_RANK_TOLERANCE);
        set_rank_tolerance(1e-6);
        assert_eq!(rank_tolerance(), 1e-6);
        set_rank_tolerance(DEFAULT_RANK_TOLERANCE);
    }
}

//! Scalar arithmetic for the two simulation backends.
//!
//! The exact backend works in the field ℚ(i, √2): every amplitude produced by
//! balanced beam splitters with the "i on reflection" convention lives there.
//! An element is stored as four rationals, `q0 + q1·i + q2·√2 + q3·i·√2`.
//!
//! Factors such as 1/√3 are not in the field. States therefore keep
//! unnormalized amplitudes together with an exact squared norm, and only the
//! float backend ever materializes normalized amplitudes.
//!
//! Real quantities (squared norms, probabilities, traces) in the exact backend
//! are elements of the real subfield ℚ(√2), represented as an [`ExactScalar`]
//! with vanishing imaginary parts. In every circuit built here they reduce to
//! plain rationals.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms.
pub type Rational = BigRational;

/// Double-precision complex mirror of [`ExactScalar`].
pub type ComplexFloat = Complex64;

/// Absolute tolerance for every floating-point comparison.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Float amplitudes with modulus below this are pruned as exact zeros.
const FLOAT_PRUNE: f64 = 1e-14;

/// Which arithmetic a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float => f.write_str("float"),
        }
    }
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Element of ℚ(i, √2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    q: [Rational; 4],
}

// Gaussian rational helpers: (re, im) pairs over ℚ.
type Gauss = (Rational, Rational);

fn gauss_mul(a: &Gauss, b: &Gauss) -> Gauss {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gauss_add(a: Gauss, b: Gauss) -> Gauss {
    (a.0 + b.0, a.1 + b.1)
}

fn gauss_scale(a: Gauss, k: &Rational) -> Gauss {
    (a.0 * k, a.1 * k)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

fn rational_to_f64(q: &Rational) -> Result<f64> {
    match q.to_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::FloatOverflow(q.to_string())),
    }
}

impl ExactScalar {
    pub fn new(q0: Rational, q1: Rational, q2: Rational, q3: Rational) -> Self {
        Self {
            q: [q0, q1, q2, q3],
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(Zero::is_zero)
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::new(q, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn i() -> Self {
        Self::new(
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    pub fn sqrt2() -> Self {
        Self::new(
            Rational::zero(),
            Rational::zero(),
            Rational::one(),
            Rational::zero(),
        )
    }

    /// 1/√2 = √2/2.
    pub fn frac_1_sqrt_2() -> Self {
        Self::new(
            Rational::zero(),
            Rational::zero(),
            rational(1, 2),
            Rational::zero(),
        )
    }

    /// Coefficients `[q0, q1, q2, q3]` of `q0 + q1·i + q2·√2 + q3·i·√2`.
    pub fn coefficients(&self) -> &[Rational; 4] {
        &self.q
    }

    fn parts(&self) -> (Gauss, Gauss) {
        let [q0, q1, q2, q3] = &self.q;
        ((q0.clone(), q1.clone()), (q2.clone(), q3.clone()))
    }

    fn from_parts(rational_part: Gauss, surd_part: Gauss) -> Self {
        Self::new(rational_part.0, rational_part.1, surd_part.0, surd_part.1)
    }

    pub fn conj(&self) -> Self {
        let [q0, q1, q2, q3] = &self.q;
        Self::new(q0.clone(), -q1, q2.clone(), -q3)
    }

    /// `a · conj(a)`, a non-negative element of the real subfield ℚ(√2).
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn is_real(&self) -> bool {
        self.q[1].is_zero() && self.q[3].is_zero()
    }

    /// The value as a plain rational, if it has no `i` or `√2` component.
    pub fn to_rational(&self) -> Option<Rational> {
        (self.q[1].is_zero() && self.q[2].is_zero() && self.q[3].is_zero())
            .then(|| self.q[0].clone())
    }

    pub fn real_part(&self) -> Self {
        Self::new(
            self.q[0].clone(),
            Rational::zero(),
            self.q[2].clone(),
            Rational::zero(),
        )
    }

    /// Multiplicative inverse, `None` for zero.
    ///
    /// Writing `x = a + b√2` with `a, b ∈ ℚ(i)`, the inverse is
    /// `(a − b√2) / (a² − 2b²)` and the denominator lies in ℚ(i).
    pub fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            return None;
        }
        let (a, b) = self.parts();
        let two = Rational::from_integer(2.into());
        let aa = gauss_mul(&a, &a);
        let bb = gauss_scale(gauss_mul(&b, &b), &two);
        let n = (aa.0 - bb.0, aa.1 - bb.1);
        let mod_sq = &n.0 * &n.0 + &n.1 * &n.1;
        let n_inv = (&n.0 / &mod_sq, -(&n.1 / &mod_sq));
        let numer_rat = gauss_mul(&a, &n_inv);
        let numer_surd = gauss_mul(&(-b.0, -b.1), &n_inv);
        Some(Self::from_parts(numer_rat, numer_surd))
    }

    /// Square root of a non-negative rational when it lies in ℚ(√2):
    /// `q = r²` gives `r`, `q = 2r²` gives `r·√2`.
    pub fn sqrt_rational(q: &Rational) -> Option<Self> {
        if let Some(r) = rational_sqrt(q) {
            return Some(Self::from_rational(r));
        }
        let half = q / Rational::from_integer(2.into());
        rational_sqrt(&half)
            .map(|r| Self::new(Rational::zero(), Rational::zero(), r, Rational::zero()))
    }

    pub fn to_float(&self) -> Result<ComplexFloat> {
        let [q0, q1, q2, q3] = &self.q;
        let s = std::f64::consts::SQRT_2;
        let re = rational_to_f64(q0)? + rational_to_f64(q2)? * s;
        let im = rational_to_f64(q1)? + rational_to_f64(q3)? * s;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::FloatOverflow(self.to_string()));
        }
        Ok(ComplexFloat::new(re, im))
    }

    /// Sign-aware comparison of two elements of the real subfield.
    /// Returns `None` if either operand has an imaginary part.
    pub fn real_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.is_real() || !other.is_real() {
            return None;
        }
        let x = &self.q[0] - &other.q[0];
        let y = &self.q[2] - &other.q[2];
        // sign of x + y·√2
        let sign = match (x.signum().to_i32(), y.signum().to_i32()) {
            (Some(sx), Some(sy)) if sx >= 0 && sy >= 0 => (sx + sy).signum(),
            (Some(sx), Some(sy)) if sx <= 0 && sy <= 0 => (sx + sy).signum(),
            (Some(sx), _) => {
                let two = Rational::from_integer(2.into());
                match (&x * &x).cmp(&(&y * &y * two)) {
                    Ordering::Greater => sx,
                    Ordering::Less => -sx,
                    Ordering::Equal => 0,
                }
            }
            _ => unreachable!("signum of a rational is -1, 0 or 1"),
        };
        Some(sign.cmp(&0))
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.real_cmp(other)
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }

    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar::one()
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            q: std::array::from_fn(|k| &self.q[k] + &rhs.q[k]),
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            q: std::array::from_fn(|k| &self.q[k] - &rhs.q[k]),
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2 over ℚ(i)
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let (a, b) = self.parts();
        let (c, d) = rhs.parts();
        let two = Rational::from_integer(2.into());
        let rat = gauss_add(gauss_mul(&a, &c), gauss_scale(gauss_mul(&b, &d), &two));
        let surd = gauss_add(gauss_mul(&a, &d), gauss_mul(&b, &c));
        ExactScalar::from_parts(rat, surd)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            q: std::array::from_fn(|k| -&self.q[k]),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar { (&self).$m(&rhs) }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (l, r) in self.q.iter_mut().zip(&rhs.q) {
            *l += r;
        }
    }
}

/// Panics on division by zero, like integer division.
impl Div for ExactScalar {
    type Output = ExactScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        self * rhs.inv().expect("division by zero ExactScalar")
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(<Self as Zero>::zero(), |acc, x| acc + x)
    }
}

const TERM_SUFFIXES: [&str; 4] = ["", "*i", "*r2", "*i*r2"];

/// Canonical form `q0 + q1*i + q2*r2 + q3*i*r2`, zero terms omitted, `0` for zero.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(self) {
            return f.write_str("0");
        }
        let mut first = true;
        for (coef, suffix) in self.q.iter().zip(TERM_SUFFIXES) {
            if coef.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{coef}{suffix}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        if s == "0" {
            return Ok(<Self as Zero>::zero());
        }
        let mut q: [Option<Rational>; 4] = Default::default();
        let mut last = None;
        for term in s.split(" + ") {
            // longest suffix first so "*i*r2" is not read as "*r2"
            let (slot, body) = [3usize, 2, 1]
                .into_iter()
                .find_map(|k| term.strip_suffix(TERM_SUFFIXES[k]).map(|b| (k, b)))
                .unwrap_or((0, term));
            if last.is_some_and(|l| slot <= l) || body.is_empty() || body.contains(' ') {
                return Err(bad());
            }
            let coef = Rational::from_str(body).map_err(|_| bad())?;
            if coef.is_zero() {
                return Err(bad());
            }
            q[slot] = Some(coef);
            last = Some(slot);
        }
        Ok(Self {
            q: q.map(Option::unwrap_or_default),
        })
    }
}

/// Arithmetic shared by the exact and float backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Type of squared norms and probabilities.
    type Real: Clone
        + fmt::Debug
        + fmt::Display
        + PartialOrd
        + Send
        + Sync
        + Add<Output = Self::Real>
        + Sub<Output = Self::Real>
        + Mul<Output = Self::Real>
        + Div<Output = Self::Real>;

    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn frac_1_sqrt_2() -> Self;
    fn from_rational(q: &Rational) -> Result<Self>;
    fn from_real(r: Self::Real) -> Self;
    fn conj(&self) -> Self;
    fn norm_sq(&self) -> Self::Real;
    fn real_part(&self) -> Self::Real;
    /// Exact zero, or below the pruning threshold in float mode.
    fn is_zero(&self) -> bool;
    fn approx_eq(&self, other: &Self) -> bool;
    /// `√q`, or `None` when the backend cannot represent it.
    fn sqrt_rational(q: &Rational) -> Option<Self>;
    fn to_complex(&self) -> Result<ComplexFloat>;

    fn real_zero() -> Self::Real;
    fn real_one() -> Self::Real;
    fn real_from_rational(q: &Rational) -> Result<Self::Real>;
    fn real_is_zero(r: &Self::Real) -> bool;
    fn real_approx_eq(a: &Self::Real, b: &Self::Real) -> bool;
    fn real_to_f64(r: &Self::Real) -> Result<f64>;
    /// Exact value of a real quantity, when the backend tracks one.
    fn real_to_exact(r: &Self::Real) -> Option<ExactScalar>;
}

impl Scalar for ExactScalar {
    type Real = ExactScalar;

    const BACKEND: Backend = Backend::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn imag_unit() -> Self {
        ExactScalar::i()
    }
    fn frac_1_sqrt_2() -> Self {
        ExactScalar::frac_1_sqrt_2()
    }
    fn from_rational(q: &Rational) -> Result<Self> {
        Ok(ExactScalar::from_rational(q.clone()))
    }
    fn from_real(r: Self::Real) -> Self {
        r
    }
    fn conj(&self) -> Self {
        ExactScalar::conj(self)
    }
    fn norm_sq(&self) -> Self::Real {
        ExactScalar::norm_sq(self)
    }
    fn real_part(&self) -> Self::Real {
        ExactScalar::real_part(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn sqrt_rational(q: &Rational) -> Option<Self> {
        ExactScalar::sqrt_rational(q)
    }
    fn to_complex(&self) -> Result<ComplexFloat> {
        self.to_float()
    }
    fn real_zero() -> Self::Real {
        Zero::zero()
    }
    fn real_one() -> Self::Real {
        One::one()
    }
    fn real_from_rational(q: &Rational) -> Result<Self::Real> {
        Ok(ExactScalar::from_rational(q.clone()))
    }
    fn real_is_zero(r: &Self::Real) -> bool {
        Zero::is_zero(r)
    }
    fn real_approx_eq(a: &Self::Real, b: &Self::Real) -> bool {
        a == b
    }
    fn real_to_f64(r: &Self::Real) -> Result<f64> {
        Ok(r.to_float()?.re)
    }
    fn real_to_exact(r: &Self::Real) -> Option<ExactScalar> {
        Some(r.clone())
    }
}

impl Scalar for ComplexFloat {
    type Real = f64;

    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        ComplexFloat::new(0.0, 0.0)
    }
    fn one() -> Self {
        ComplexFloat::new(1.0, 0.0)
    }
    fn imag_unit() -> Self {
        ComplexFloat::new(0.0, 1.0)
    }
    fn frac_1_sqrt_2() -> Self {
        ComplexFloat::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    }
    fn from_rational(q: &Rational) -> Result<Self> {
        Ok(ComplexFloat::new(rational_to_f64(q)?, 0.0))
    }
    fn from_real(r: f64) -> Self {
        ComplexFloat::new(r, 0.0)
    }
    fn conj(&self) -> Self {
        ComplexFloat::conj(self)
    }
    fn norm_sq(&self) -> f64 {
        ComplexFloat::norm_sqr(self)
    }
    fn real_part(&self) -> f64 {
        self.re
    }
    fn is_zero(&self) -> bool {
        self.norm() < FLOAT_PRUNE
    }
    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).norm() <= FLOAT_TOLERANCE
    }
    fn sqrt_rational(q: &Rational) -> Option<Self> {
        let x = q.to_f64()?;
        (x >= 0.0 && x.is_finite()).then(|| ComplexFloat::new(x.sqrt(), 0.0))
    }
    fn to_complex(&self) -> Result<ComplexFloat> {
        Ok(*self)
    }
    fn real_zero() -> f64 {
        0.0
    }
    fn real_one() -> f64 {
        1.0
    }
    fn real_from_rational(q: &Rational) -> Result<f64> {
        rational_to_f64(q)
    }
    fn real_is_zero(r: &f64) -> bool {
        r.abs() < FLOAT_PRUNE
    }
    fn real_approx_eq(a: &f64, b: &f64) -> bool {
        (a - b).abs() <= FLOAT_TOLERANCE
    }
    fn real_to_f64(r: &f64) -> Result<f64> {
        Ok(*r)
    }
    fn real_to_exact(_: &f64) -> Option<ExactScalar> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn s(q0: (i64, i64), q1: (i64, i64), q2: (i64, i64), q3: (i64, i64)) -> ExactScalar {
        ExactScalar::new(q(q0.0, q0.1), q(q1.0, q1.1), q(q2.0, q2.1), q(q3.0, q3.1))
    }

    fn half() -> ExactScalar {
        ExactScalar::from_rational(q(1, 2))
    }

    // (1 + i)/√2
    fn one_plus_i_over_sqrt2() -> ExactScalar {
        (ExactScalar::one() + ExactScalar::i()) * ExactScalar::frac_1_sqrt_2()
    }

    #[test]
    fn mul_examples() {
        let r = ExactScalar::frac_1_sqrt_2();
        assert_eq!(&r * &r, half());
        assert_eq!(
            ExactScalar::i() * ExactScalar::i(),
            ExactScalar::from_int(-1)
        );
        let w = one_plus_i_over_sqrt2();
        assert_eq!(&w * &w, ExactScalar::i());
    }

    #[test]
    fn norm_sq_examples() {
        let i_half = ExactScalar::i() * half();
        assert_eq!(i_half.norm_sq(), ExactScalar::from_rational(q(1, 4)));
        assert_eq!(ExactScalar::frac_1_sqrt_2().norm_sq(), half());
        assert_eq!(one_plus_i_over_sqrt2().norm_sq(), ExactScalar::one());
        // 1 + √2 has a surd-valued squared norm, 3 + 2√2
        let x = ExactScalar::one() + ExactScalar::sqrt2();
        assert_eq!(x.norm_sq(), s((3, 1), (0, 1), (2, 1), (0, 1)));
    }

    #[test]
    fn to_float_examples() {
        assert_eq!(half().to_float().unwrap(), ComplexFloat::new(0.5, 0.0));
        let z = (ExactScalar::i() * ExactScalar::sqrt2())
            .to_float()
            .unwrap();
        assert_eq!(z.re, 0.0);
        assert!((z.im - std::f64::consts::SQRT_2).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn to_float_reports_overflow() {
        let huge = Rational::from_integer(BigInt::from(10).pow(400));
        let err = ExactScalar::from_rational(huge).to_float().unwrap_err();
        assert!(matches!(err, Error::FloatOverflow(_)));
    }

    #[test]
    fn sqrt_rational_cases() {
        assert_eq!(ExactScalar::sqrt_rational(&q(1, 4)), Some(half()));
        assert_eq!(
            ExactScalar::sqrt_rational(&q(1, 2)),
            Some(ExactScalar::frac_1_sqrt_2())
        );
        assert_eq!(
            ExactScalar::sqrt_rational(&q(8, 9)),
            Some(s((0, 1), (0, 1), (2, 3), (0, 1)))
        );
        assert_eq!(ExactScalar::sqrt_rational(&q(3, 4)), None);
        assert_eq!(ExactScalar::sqrt_rational(&q(-1, 4)), None);
        assert_eq!(
            ExactScalar::sqrt_rational(&q(0, 1)),
            Some(ExactScalar::zero())
        );
    }

    #[test]
    fn real_ordering() {
        let one = ExactScalar::one();
        let r2 = ExactScalar::sqrt2();
        assert!(r2 > one);
        assert!(ExactScalar::from_rational(q(3, 2)) > r2);
        assert!(ExactScalar::from_rational(q(7, 5)) < r2);
        // 3 - 2√2 ≈ 0.17 > 0
        let small = s((3, 1), (0, 1), (-2, 1), (0, 1));
        assert!(small > ExactScalar::zero());
        assert!(-small < ExactScalar::zero());
        assert_eq!(ExactScalar::i().partial_cmp(&one), None);
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(half().to_string(), "1/2");
        assert_eq!(
            s((1, 2), (-1, 3), (0, 1), (5, 1)).to_string(),
            "1/2 + -1/3*i + 5*i*r2"
        );
        assert_eq!(ExactScalar::frac_1_sqrt_2().to_string(), "1/2*r2");
        for text in [
            "0",
            "-1",
            "1/2*i",
            "1/2 + 1/2*r2",
            "1 + 2*i + 3*r2 + -4/7*i*r2",
        ] {
            let x: ExactScalar = text.parse().unwrap();
            assert_eq!(x.to_string(), text);
        }
    }

    #[test]
    fn parse_rejects_non_canonical() {
        for text in [
            "", "1 + 0*i", "1*i + 2", "1 + 1", "x", "1/0", "1 +2*i", "*i",
        ] {
            assert!(text.parse::<ExactScalar>().is_err(), "{text:?} parsed");
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rational(n, d))
    }

    fn exact_scalar() -> impl Strategy<Value = ExactScalar> {
        [
            small_rational(),
            small_rational(),
            small_rational(),
            small_rational(),
        ]
        .prop_map(|[a, b, c, d]| ExactScalar::new(a, b, c, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(a in exact_scalar(), b in exact_scalar(), c in exact_scalar()) {
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &(-&a), ExactScalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), ExactScalar::one());
            }
        }

        #[test]
        fn conjugation_and_norm_are_multiplicative(a in exact_scalar(), b in exact_scalar()) {
            let ab = &a * &b;
            prop_assert_eq!(ab.conj(), a.conj() * b.conj());
            prop_assert_eq!(ab.norm_sq(), a.norm_sq() * b.norm_sq());
            prop_assert!(a.norm_sq().is_real());
            prop_assert!(a.norm_sq() >= ExactScalar::zero());
        }

        #[test]
        fn to_float_is_a_homomorphism(a in exact_scalar(), b in exact_scalar()) {
            let (fa, fb) = (a.to_float().unwrap(), b.to_float().unwrap());
            let sum = (&a + &b).to_float().unwrap();
            let prod = (&a * &b).to_float().unwrap();
            let rel = |x: ComplexFloat, y: ComplexFloat| (x - y).norm() / y.norm().max(1.0);
            prop_assert!(rel(fa + fb, sum) <= 1e-12);
            prop_assert!(rel(fa * fb, prod) <= 1e-12);
        }

        #[test]
        fn canonical_string_round_trip(a in exact_scalar()) {
            let text = a.to_string();
            let back: ExactScalar = text.parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}

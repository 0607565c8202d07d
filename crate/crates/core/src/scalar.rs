//! Exact rational scalar used for every coordinate, length and displacement.
//!
//! Values that are integers fitting in an `i128` are kept inline; everything
//! else falls back to an arbitrary-precision [`BigRational`]. The two
//! representations are canonical (a value is stored inline whenever it can
//! be), so the fast path is observationally identical to pure big-rational
//! arithmetic.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Clone)]
enum Repr {
    Int(i128),
    Big(Box<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number `{0}`: expected an integer, a decimal or `p/q`")]
pub struct ScalarParseError(pub String);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Repr::Int(0));

    pub fn zero() -> Scalar {
        Scalar::ZERO
    }

    pub fn from_integer(v: i128) -> Scalar {
        Scalar(Repr::Int(v))
    }

    /// `numer / denom` in lowest terms.
    ///
    /// Panics when `denom` is zero.
    pub fn ratio(numer: i128, denom: i128) -> Scalar {
        assert!(denom != 0, "zero denominator");
        Scalar::from_big(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_big(r: BigRational) -> Scalar {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i128() {
                return Scalar(Repr::Int(v));
            }
        }
        Scalar(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        self.as_big().into_owned()
    }

    fn as_big(&self) -> Cow<'_, BigRational> {
        match &self.0 {
            Repr::Int(v) => Cow::Owned(BigRational::from_integer(BigInt::from(*v))),
            Repr::Big(r) => Cow::Borrowed(r),
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.0, Repr::Int(_))
    }

    pub fn as_i128(&self) -> Option<i128> {
        match self.0 {
            Repr::Int(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Int(0))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Int(v) => *v < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn half(&self) -> Scalar {
        match &self.0 {
            Repr::Int(v) if v % 2 == 0 => Scalar(Repr::Int(v / 2)),
            _ => Scalar::from_big(self.as_big().into_owned() / BigRational::from_integer(2.into())),
        }
    }

    /// Nearest `f64`; only for reporting, never for decisions.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Int(v) => *v as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Numerator and (positive) denominator in lowest terms.
    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let r = self.as_big();
        (r.numer().clone(), r.denom().clone())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Scalar {
            fn from(v: $t) -> Scalar {
                Scalar(Repr::Int(v as i128))
            }
        }
    )*};
}
from_int!(i8, i16, i32, i64, i128, u8, u16, u32, u64, usize);

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Scalar {
        Scalar::from_big(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Scalar {
        Scalar::from_big(BigRational::from_integer(v))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Scalar) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Int(a), Repr::Int(b)) => a.cmp(b),
            _ => self.as_big().as_ref().cmp(other.as_big().as_ref()),
        }
    }
}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Int(v) => v.hash(state),
            Repr::Big(r) => {
                r.numer().hash(state);
                r.denom().hash(state);
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                if let (Repr::Int(a), Repr::Int(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Scalar(Repr::Int(v));
                    }
                }
                Scalar::from_big($trait::$method(
                    self.as_big().as_ref(),
                    rhs.as_big().as_ref(),
                ))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(self, &rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Int(v) => match v.checked_neg() {
                Some(n) => Scalar(Repr::Int(n)),
                None => Scalar::from_big(-BigRational::from_integer(BigInt::from(*v))),
            },
            Repr::Big(r) => Scalar::from_big(-r.as_ref().clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Int(v) => write!(f, "{v}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    /// Accepts `123`, `-4.25`, `.5`, `3.` and `p/q`. Decimals are converted
    /// exactly (`0.1` is `1/10`).
    fn from_str(s: &str) -> Result<Scalar, ScalarParseError> {
        let err = || ScalarParseError(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p = parse_int(p).ok_or_else(err)?;
            let q = parse_int(q).ok_or_else(err)?;
            if q.is_zero() {
                return Err(err());
            }
            return Ok(Scalar::from_big(BigRational::new(p, q)));
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let (negative, whole) = match whole.as_bytes().first() {
                Some(b'-') => (true, &whole[1..]),
                Some(b'+') => (false, &whole[1..]),
                _ => (false, whole),
            };
            let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if (whole.is_empty() && frac.is_empty()) || !all_digits(whole) || !all_digits(frac) {
                return Err(err());
            }
            let text = format!("{whole}{frac}");
            let numer: BigInt = text.parse().map_err(|_| err())?;
            let denom = num_traits::pow(BigInt::from(10), frac.len());
            let r = BigRational::new(if negative { -numer } else { numer }, denom);
            return Ok(Scalar::from_big(r));
        }
        parse_int(s).map(Scalar::from).ok_or_else(err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(s("0.1"), Scalar::ratio(1, 10));
        assert_eq!(s("-1.25"), Scalar::ratio(-5, 4));
        assert_eq!(s(".5"), Scalar::ratio(1, 2));
        assert_eq!(s("3."), Scalar::from(3));
        assert_eq!(s("6/4"), Scalar::ratio(3, 2));
        assert_eq!(s("-6/-4"), Scalar::ratio(3, 2));
        assert_eq!(s("+7"), Scalar::from(7));
        assert!(s("4/2").is_integer());
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "", ".", "1/0", "a", "1.2.3", "1e3", "--1", "1/", "- 1", "1.-2",
        ] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(Scalar::ratio(4, -6).to_string(), "-2/3");
        assert_eq!(Scalar::ratio(8, 4).to_string(), "2");
        assert_eq!(Scalar::from(-3).half().to_string(), "-3/2");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Scalar::from(i128::MAX);
        let sum = &big + &Scalar::from(1);
        assert!(!sum.is_integer());
        assert_eq!(sum.to_string(), "170141183460469231731687303715884105728");
        let back = &sum - &Scalar::from(1);
        assert!(back.is_integer());
        assert_eq!(back, big);
        let min = Scalar::from(i128::MIN);
        assert_eq!(-(-&min), min);
        assert_eq!((&min * &Scalar::from(-1)).to_big(), -min.to_big());
    }

    fn small_rat() -> impl Strategy<Value = (i64, i64)> {
        (-1_000_000i64..1_000_000, 1i64..50)
    }

    proptest! {
        #[test]
        fn agrees_with_big_rational(a in small_rat(), b in small_rat(), huge in any::<i64>()) {
            let x = Scalar::ratio(a.0 as i128 * huge as i128, a.1 as i128);
            let y = Scalar::ratio(b.0 as i128, b.1 as i128);
            let bx = x.to_big();
            let by = y.to_big();
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
            prop_assert_eq!(&x.half() + &x.half(), x.clone());
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
}

//! Coefficient fields: exact rationals and prime fields.
//!
//! All computations in the crate are generic over [`Field`]. Nothing here is
//! floating point; equality is always exact.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    /// Image of a rational number, `None` when the denominator vanishes in the field.
    fn from_rational(r: &BigRational) -> Option<Self>;
    /// 0 for the rationals.
    fn characteristic() -> u64;
    /// All elements when the field is finite, in a fixed order starting with 0, 1.
    fn elements() -> Option<Vec<Self>>;
    fn kind() -> FieldKind;
    /// The element as a rational number, for characteristic zero only.
    fn to_rational(&self) -> Option<BigRational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }

    /// Parse the textual form used in module files (`"-3/4"`, `"5"`).
    fn parse(s: &str) -> Option<Self> {
        parse_rational(s).and_then(|r| Self::from_rational(&r))
    }
}

/// Runtime descriptor for the coefficient field of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    /// Primes with a compiled-in field implementation.
    pub const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

    pub fn is_supported(&self) -> bool {
        match self {
            FieldKind::Rational => true,
            FieldKind::Prime(p) => Self::SUPPORTED_PRIMES.contains(p),
        }
    }
}

impl Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" || s == "QQ" {
            return Ok(FieldKind::Rational);
        }
        if let Some(rest) = s.strip_prefix('F') {
            let p: u64 = rest.parse().map_err(|_| format!("bad field descriptor `{s}`"))?;
            let kind = FieldKind::Prime(p);
            if !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            if !kind.is_supported() {
                return Err(format!(
                    "prime field F{p} is not supported (available: {:?})",
                    Self::SUPPORTED_PRIMES
                ));
            }
            return Ok(kind);
        }
        Err(format!("bad field descriptor `{s}` (expected Q or F<p>)"))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Parse `a`, `-a`, `a/b` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Run `$body` with the type alias `$F` bound to the concrete field for `$kind`.
///
/// Expands to a `match`; unsupported primes fall through to `$fallback`.
#[macro_export]
macro_rules! with_field {
    ($kind:expr, $F:ident => $body:expr, $fallback:expr) => {
        match $kind {
            $crate::field::FieldKind::Rational => {
                type $F = $crate::field::Q;
                $body
            }
            $crate::field::FieldKind::Prime(2) => {
                type $F = $crate::field::Fp<2>;
                $body
            }
            $crate::field::FieldKind::Prime(3) => {
                type $F = $crate::field::Fp<3>;
                $body
            }
            $crate::field::FieldKind::Prime(5) => {
                type $F = $crate::field::Fp<5>;
                $body
            }
            $crate::field::FieldKind::Prime(7) => {
                type $F = $crate::field::Fp<7>;
                $body
            }
            $crate::field::FieldKind::Prime(11) => {
                type $F = $crate::field::Fp<11>;
                $body
            }
            $crate::field::FieldKind::Prime(13) => {
                type $F = $crate::field::Fp<13>;
                $body
            }
            _ => $fallback,
        }
    };
}

// ---------------------------------------------------------------------------
// Rationals

/// Exact rational number. Values whose numerator and denominator fit in an
/// `i64` stay inline; everything else is a heap `BigRational`.
#[derive(Clone)]
pub struct Q(Repr);

#[derive(Clone)]
enum Repr {
    /// Reduced, denominator positive.
    Small(i64, i64),
    Big(BigRational),
}

impl Q {
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "zero denominator");
        Q::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        let (mut n, mut d) = (num, den);
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Q(Repr::Small(n, d)),
            _ => Q(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Q(Repr::Small(n, d)),
            _ => Q(Repr::Big(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer_denom(&self) -> (BigInt, BigInt) {
        let r = self.to_big();
        (r.numer().clone(), r.denom().clone())
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            // canonical form: a value that fits is always Small
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, rhs: Q) -> Q {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Q::from_i128(a + c, b);
            }
            if let (Some(x), Some(y), Some(z)) =
                (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d))
            {
                if let Some(s) = x.checked_add(y) {
                    return Q::from_i128(s, z);
                }
            }
        }
        Q::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, rhs: Q) -> Q {
        self + (-rhs)
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, rhs: Q) -> Q {
        if let (Repr::Small(a, b), Repr::Small(c, d)) = (&self.0, &rhs.0) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(n), Some(m)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Q::from_i128(n, m);
            }
        }
        Q::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self.0 {
            Repr::Small(n, d) if n != i64::MIN => Q(Repr::Small(-n, d)),
            Repr::Small(n, d) => Q::from_i128(-(n as i128), d as i128),
            Repr::Big(r) => Q::from_big(-r),
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Q(Repr::Small(0, 1))
    }
    fn one() -> Self {
        Q(Repr::Small(1, 1))
    }
    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
    fn inv(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Q::from_i128(*d as i128, *n as i128)),
            Repr::Big(r) => Some(Q::from_big(r.recip())),
        }
    }
    fn from_i64(v: i64) -> Self {
        Q(Repr::Small(v, 1))
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        Some(Q::from_big(r.clone()))
    }
    fn characteristic() -> u64 {
        0
    }
    fn elements() -> Option<Vec<Self>> {
        None
    }
    fn kind() -> FieldKind {
        FieldKind::Rational
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.to_big())
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// Element of the prime field with `P` elements. `P` must be prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    pub fn value(&self) -> u64 {
        self.0
    }

    fn pow(mut self, mut e: u64) -> Self {
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * self;
            }
            self = self * self;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp((self.0 * rhs.0) % P)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        let p = BigInt::from(P);
        let n = r.numer().mod_floor(&p).to_u64()?;
        let d = r.denom().mod_floor(&p).to_u64()?;
        Fp(d).inv().map(|di| Fp(n) * di)
    }
    fn characteristic() -> u64 {
        P
    }
    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
    fn kind() -> FieldKind {
        FieldKind::Prime(P)
    }
    fn to_rational(&self) -> Option<BigRational> {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rational_normal_form() {
        assert_eq!(Q::new(2, 4), Q::new(-1, -2));
        assert_eq!(Q::new(3, -6).to_string(), "-1/2");
        assert!(Q::new(0, 5).is_zero());
        assert_eq!(Q::new(1, 3).inv(), Some(Q::from_i64(3)));
    }

    #[test]
    fn rational_overflow_promotes() {
        let big = Q::from_i64(i64::MAX);
        let sq = big.clone() * big.clone();
        assert_eq!(sq.clone() * Q::new(1, i64::MAX), big);
        let back = (sq + Q::one()) - Q::one();
        assert_eq!(back, Q::from_i64(i64::MAX) * Q::from_i64(i64::MAX));
    }

    #[test]
    fn prime_field_inverses() {
        for x in Fp::<13>::elements().unwrap().into_iter().skip(1) {
            assert_eq!(x * x.inv().unwrap(), Fp::one());
        }
        assert_eq!(Fp::<2>::from_rational(&parse_rational("1/3").unwrap()), Some(Fp(1)));
        assert_eq!(Fp::<3>::from_rational(&parse_rational("1/3").unwrap()), None);
    }

    #[test]
    fn field_kind_parsing() {
        assert_eq!("Q".parse::<FieldKind>(), Ok(FieldKind::Rational));
        assert_eq!("F5".parse::<FieldKind>(), Ok(FieldKind::Prime(5)));
        assert!("F4".parse::<FieldKind>().is_err());
        assert!("F17".parse::<FieldKind>().is_err());
    }

    proptest! {
        #[test]
        fn rational_ops_match_bigrational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Q::new(a, b);
            let y = Q::new(c, d);
            let (bx, by) = (x.to_big(), y.to_big());
            prop_assert_eq!((x.clone() + y.clone()).to_big(), &bx + &by);
            prop_assert_eq!((x.clone() * y.clone()).to_big(), &bx * &by);
            prop_assert_eq!((x - y).to_big(), bx - by);
        }
    }
}

//! Exact number types.
//!
//! Everything in this crate is generic over two traits:
//!
//! * [`Scalar`]: an exact ordered field. Implemented for every
//!   [`num_rational::Ratio`] over a signed integer type; the crate-level
//!   alias [`crate::Rational`] picks the arbitrary-precision one.
//! * [`Capacity`]: an ordered abelian group over some `Scalar`, which is
//!   all that max-flow, cut enumeration and Gomory-Hu construction need.
//!   Every scalar is a capacity, and so is [`Tiered`], a two-level
//!   lexicographic value `a·∞ + b` used for "infinite" edges.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// An ordered abelian group of edge capacities over an exact field.
pub trait Capacity:
    Clone
    + Ord
    + Debug
    + Display
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    type Field: Scalar;

    fn from_field(x: Self::Field) -> Self;

    /// The ordinary (rational) component of the value.
    fn finite_part(&self) -> &Self::Field;

    fn is_finite(&self) -> bool;

    /// Adds `delta` to the finite component.
    fn shift_finite(&self, delta: &Self::Field) -> Self;

    /// Replaces the finite component by `f(finite)`.
    fn map_finite<F: FnOnce(&Self::Field) -> Self::Field>(&self, f: F) -> Self;

    /// Parses one capacity token of the text format.
    fn parse_token(token: &str) -> Option<Self>;
}

/// An exact ordered field.
pub trait Scalar: Capacity<Field = Self> + Num + Signed {
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    fn floor(&self) -> Self;

    /// The denominator in lowest terms, as an integral scalar.
    fn denominator_value(&self) -> Self;

    /// Least common multiple of two integral scalars.
    fn lcm_integral(&self, other: &Self) -> Self;

    fn pow2(exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = Self::one() + Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        result
    }
}

impl<T> Capacity for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + Send + Sync + 'static,
{
    type Field = Self;

    fn from_field(x: Self) -> Self {
        x
    }

    fn finite_part(&self) -> &Self {
        self
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn shift_finite(&self, delta: &Self) -> Self {
        self.clone() + delta.clone()
    }

    fn map_finite<F: FnOnce(&Self) -> Self>(&self, f: F) -> Self {
        f(self)
    }

    fn parse_token(token: &str) -> Option<Self> {
        parse_scalar(token)
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + Send + Sync + 'static,
{
    fn from_ratio(numer: i64, denom: i64) -> Self {
        let n = T::from_i64(numer).expect("numerator fits the integer type");
        let d = T::from_i64(denom).expect("denominator fits the integer type");
        Ratio::new(n, d)
    }

    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn denominator_value(&self) -> Self {
        Ratio::from_integer(self.denom().clone())
    }

    fn lcm_integral(&self, other: &Self) -> Self {
        Ratio::from_integer(self.numer().lcm(other.numer()))
    }
}

/// A value `infinite·∞ + finite`, ordered lexicographically.
///
/// Edges of capacity `∞` are never cut by a finite minimum cut, which is
/// exactly what contracted edges of a minor model need.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tiered<S> {
    pub infinite: S,
    pub finite: S,
}

impl<S: Scalar> Tiered<S> {
    pub fn finite(value: S) -> Self {
        Self {
            infinite: S::zero(),
            finite: value,
        }
    }

    pub fn infinity() -> Self {
        Self {
            infinite: S::one(),
            finite: S::zero(),
        }
    }
}

impl<S: Scalar> Zero for Tiered<S> {
    fn zero() -> Self {
        Self::finite(S::zero())
    }

    fn is_zero(&self) -> bool {
        self.infinite.is_zero() && self.finite.is_zero()
    }
}

impl<S: Scalar> Add for Tiered<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            infinite: self.infinite + rhs.infinite,
            finite: self.finite + rhs.finite,
        }
    }
}

impl<S: Scalar> Sub for Tiered<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            infinite: self.infinite - rhs.infinite,
            finite: self.finite - rhs.finite,
        }
    }
}

impl<S: Scalar> Neg for Tiered<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            infinite: -self.infinite,
            finite: -self.finite,
        }
    }
}

impl<S: Scalar> Display for Tiered<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.infinite.is_zero() {
            return write!(f, "{}", self.finite);
        }
        if self.infinite.is_one() {
            write!(f, "inf")?;
        } else {
            write!(f, "{}*inf", self.infinite)?;
        }
        if self.finite.is_positive() {
            write!(f, "+{}", self.finite)?;
        } else if self.finite.is_negative() {
            write!(f, "-{}", self.finite.abs())?;
        }
        Ok(())
    }
}

impl<S: Scalar> Debug for Tiered<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<S: Scalar> Capacity for Tiered<S> {
    type Field = S;

    fn from_field(x: S) -> Self {
        Self::finite(x)
    }

    fn finite_part(&self) -> &S {
        &self.finite
    }

    fn is_finite(&self) -> bool {
        self.infinite.is_zero()
    }

    fn shift_finite(&self, delta: &S) -> Self {
        Self {
            infinite: self.infinite.clone(),
            finite: self.finite.clone() + delta.clone(),
        }
    }

    fn map_finite<F: FnOnce(&S) -> S>(&self, f: F) -> Self {
        Self {
            infinite: self.infinite.clone(),
            finite: f(&self.finite),
        }
    }

    fn parse_token(token: &str) -> Option<Self> {
        parse_tiered(token)
    }
}

/// Parses `p`, `p/q`, `-p/q`.
pub fn parse_scalar<S: Scalar>(token: &str) -> Option<S> {
    let token = token.trim();
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let num = parse_integer::<S>(num)?;
    let den = parse_integer::<S>(den)?;
    if den.is_zero() {
        return None;
    }
    Some(num / den)
}

// Decimal digits folded into the scalar, so arbitrarily long integers work
// for big rationals.
fn parse_integer<S: Scalar>(token: &str) -> Option<S> {
    let (negative, digits) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let ten = S::from_int(10);
    let mut value = S::zero();
    for b in digits.bytes() {
        value = value * ten.clone() + S::from_int(i64::from(b - b'0'));
    }
    Some(if negative { -value } else { value })
}

/// Parses a capacity token: a rational, `inf`, `inf+p/q`, `a*inf`, `a*inf-p/q`.
pub fn parse_tiered<S: Scalar>(token: &str) -> Option<Tiered<S>> {
    let token = token.trim();
    let Some(pos) = token.find("inf") else {
        return parse_scalar(token).map(Tiered::finite);
    };
    let head = &token[..pos];
    let tail = &token[pos + 3..];
    let infinite = if head.is_empty() {
        S::one()
    } else {
        parse_scalar(head.strip_suffix('*')?)?
    };
    let finite = if tail.is_empty() {
        S::zero()
    } else if let Some(rest) = tail.strip_prefix('+') {
        parse_scalar(rest)?
    } else {
        let rest = tail.strip_prefix('-')?;
        -parse_scalar::<S>(rest)?
    };
    Some(Tiered { infinite, finite })
}

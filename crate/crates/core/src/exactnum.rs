//! Scalar abstraction, exact rationals and real quadratic surds.
//!
//! All geometry runs over a [`Scalar`]. The exact instantiation is
//! [`Rat`] (arbitrary precision); floating types are accepted for
//! rendering-side convenience but give no exactness guarantees.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, the universal exact scalar.
pub type Rat = BigRational;

/// Ordered field used by the geometric kernel.
pub trait Scalar:
    Clone + PartialOrd + fmt::Debug + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// Greatest integral value not exceeding `self`.
    fn floor_val(&self) -> Self;

    fn from_int(i: i64) -> Self {
        Self::from_i64(i).expect("integer fits scalar")
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    fn half() -> Self {
        Self::from_frac(1, 2)
    }
}

impl Scalar for BigRational {
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for Ratio<i64> {
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for Ratio<i128> {
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for f64 {
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

impl Scalar for f32 {
    fn floor_val(&self) -> Self {
        self.floor()
    }
}

/// `n/d` as a [`Rat`]. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("malformed surd {0:?}")]
    BadSurd(String),
    #[error("radicand {0} is not square-free and positive")]
    BadRadicand(BigInt),
    #[error("mixed radicands {0} and {1}")]
    MixedRadicand(BigInt, BigInt),
    #[error("division by zero")]
    DivisionByZero,
}

/// Parses `p/q` or `p` (ASCII or Unicode minus), normalizing to lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat, NumError> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || NumError::BadRational(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t.as_str(), "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(NumError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Greatest integer `<= q`.
pub fn rat_floor(q: &Rat) -> BigInt {
    q.floor().to_integer()
}

/// Fractional part `q - floor(q)`, in `[0, 1)`.
pub fn rat_frac(q: &Rat) -> Rat {
    q - q.floor()
}

fn is_square_free(d: &BigInt) -> bool {
    if d.sign() != Sign::Plus {
        return false;
    }
    let mut k = BigInt::from(2);
    let mut rest = d.clone();
    while &k * &k <= rest {
        let sq = &k * &k;
        if (&rest % &sq).is_zero() {
            return false;
        }
        while (&rest % &k).is_zero() {
            rest /= &k;
        }
        k += 1;
    }
    true
}

/// `a + b·√d` with rational `a`, `b` and a square-free radicand `d ≥ 2`.
///
/// Values with `b = 0` are rational and combine with any radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rat,
    b: Rat,
    d: BigInt,
}

impl Surd {
    pub fn new(a: Rat, b: Rat, d: impl Into<BigInt>) -> Result<Self, NumError> {
        let d = d.into();
        if !is_square_free(&d) || d < BigInt::from(2) {
            return Err(NumError::BadRadicand(d));
        }
        Ok(Surd { a, b, d })
    }

    /// Rational embedded with radicand `d`.
    pub fn from_rat(a: Rat, d: impl Into<BigInt>) -> Result<Self, NumError> {
        Surd::new(a, Rat::zero(), d)
    }

    /// `a + b·√n` for any positive `n`, pulling square factors out of the radicand.
    pub fn with_radicand(a: Rat, b: Rat, n: impl Into<BigInt>) -> Result<Self, NumError> {
        let mut n: BigInt = n.into();
        if n.sign() != Sign::Plus {
            return Err(NumError::BadRadicand(n));
        }
        let mut coef = BigInt::one();
        let mut k = BigInt::from(2);
        while &k * &k <= n {
            let sq = &k * &k;
            while (&n % &sq).is_zero() {
                n /= &sq;
                coef *= &k;
            }
            k += 1;
        }
        let b = b * Rat::from_integer(coef);
        if n.is_one() {
            return Surd::new(a + b, Rat::zero(), 2);
        }
        Surd::new(a, b, n)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }
    pub fn b(&self) -> &Rat {
        &self.b
    }
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_radicand(&self, o: &Surd) -> Result<BigInt, NumError> {
        if self.d == o.d || o.b.is_zero() {
            Ok(self.d.clone())
        } else if self.b.is_zero() {
            Ok(o.d.clone())
        } else {
            Err(NumError::MixedRadicand(self.d.clone(), o.d.clone()))
        }
    }

    pub fn try_add(&self, o: &Surd) -> Result<Surd, NumError> {
        let d = self.common_radicand(o)?;
        Ok(Surd {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d,
        })
    }

    pub fn try_sub(&self, o: &Surd) -> Result<Surd, NumError> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Surd) -> Result<Surd, NumError> {
        let d = self.common_radicand(o)?;
        let dr = Rat::from_integer(d.clone());
        Ok(Surd {
            a: &self.a * &o.a + &self.b * &o.b * dr,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        })
    }

    pub fn try_div(&self, o: &Surd) -> Result<Surd, NumError> {
        let d = self.common_radicand(o)?;
        let norm = o.norm_with(&d);
        if norm.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let conj = Surd {
            a: o.a.clone(),
            b: -&o.b,
            d: d.clone(),
        };
        let num = Surd { d, ..self.clone() }.try_mul(&conj)?;
        Ok(Surd {
            a: num.a / &norm,
            b: num.b / &norm,
            d: num.d,
        })
    }

    fn norm_with(&self, d: &BigInt) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(d.clone())
    }

    pub fn neg(&self) -> Surd {
        Surd {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    pub fn add_rat(&self, q: &Rat) -> Surd {
        Surd {
            a: &self.a + q,
            ..self.clone()
        }
    }

    pub fn mul_rat(&self, q: &Rat) -> Surd {
        Surd {
            a: &self.a * q,
            b: &self.b * q,
            d: self.d.clone(),
        }
    }

    /// Exact sign, decided by comparing `a²` with `b²·d` when the terms disagree.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rat::zero());
        let sb = self.b.cmp(&Rat::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rat::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_rat(&self, q: &Rat) -> Ordering {
        self.add_rat(&-q).signum()
    }

    /// Greatest integer `<= self`, by integer square roots and exact sign tests.
    pub fn floor(&self) -> BigInt {
        // floor(|b|·√d) = floor(√(b²d)) = isqrt(p·q) div q for b²d = p/q.
        let b2d = &self.b * &self.b * Rat::from_integer(self.d.clone());
        let root = (b2d.numer() * b2d.denom()).sqrt() / b2d.denom();
        let guess = if self.b.is_negative() { -root } else { root } + rat_floor(&self.a);
        let mut n = guess;
        while self.cmp_rat(&Rat::from_integer(n.clone())) == Ordering::Less {
            n -= 1;
        }
        while self.cmp_rat(&Rat::from_integer(&n + 1)) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Rational enclosure `lo <= self <= hi` with `hi - lo <= |b|·2·10^-digits`.
    pub fn bounds(&self, digits: u32) -> (Rat, Rat) {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.d * &scale * &scale;
        let lo_root = scaled.sqrt();
        let hi_root = &lo_root + 1;
        let lo = Rat::new(lo_root, scale.clone());
        let hi = Rat::new(hi_root, scale);
        let (l, h) = if self.b.is_negative() {
            (&self.b * hi, &self.b * lo)
        } else {
            (&self.b * lo, &self.b * hi)
        };
        (&self.a + l, &self.a + h)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Parses `a+b*sqrt(d)`, `a-b*sqrt(d)`, `b*sqrt(d)` or `sqrt(d)`.
    pub fn parse(s: &str) -> Result<Surd, NumError> {
        let bad = || NumError::BadSurd(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('\u{2212}', "-");
        let open = t.find("sqrt(").ok_or_else(bad)?;
        let close = t.rfind(')').ok_or_else(bad)?;
        if close != t.len() - 1 || close < open + 5 {
            return Err(bad());
        }
        let d = BigInt::from_str(&t[open + 5..close]).map_err(|_| bad())?;
        let head = &t[..open];
        let head = head.strip_suffix('*').unwrap_or(head);
        // split head into the rational part and the signed coefficient of the root
        let split = head
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("0", head),
        };
        let a = parse_rat(a_str).map_err(|_| bad())?;
        let b = match b_str {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            other => parse_rat(other.strip_prefix('+').unwrap_or(other)).map_err(|_| bad())?,
        };
        Surd::new(a, b, d)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(
                f,
                "{}-{}*sqrt({})",
                fmt_rat(&self.a),
                fmt_rat(&-&self.b),
                self.d
            )
        } else {
            write!(
                f,
                "{}+{}*sqrt({})",
                fmt_rat(&self.a),
                fmt_rat(&self.b),
                self.d
            )
        }
    }
}

/// Greatest integer `<= x`.
pub fn surd_floor(x: &Surd) -> BigInt {
    x.floor()
}

/// Integer ceiling of `n/d` for positive `d`.
pub fn div_ceil(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

//! Parameter-side arithmetic: the renormalization map `R`, coding
//! sequences, splitted expansions, convergents and the named parameter
//! intervals on which maximal domains are computed.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactnum::{fmt_rat, rat_floor, NumError, Rat, Surd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenormError {
    #[error("parameter must lie in [0, 1)")]
    OutOfRange,
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("expansion hits a zero denominator")]
    ZeroDenominator,
    #[error("index ({0}, {1}) outside the family's range")]
    BadIndex(i64, i64),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A value of the coding map: `(m, n, r)` with `n = None` standing for `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodingTriple {
    pub m: i64,
    pub n: Option<i64>,
    pub r: i64,
}

impl CodingTriple {
    pub const HALF: CodingTriple = CodingTriple {
        m: 2,
        n: Some(0),
        r: 1,
    };
    pub const FLIP: CodingTriple = CodingTriple {
        m: 0,
        n: Some(1),
        r: -1,
    };
    pub const ZERO: CodingTriple = CodingTriple {
        m: 0,
        n: None,
        r: 1,
    };

    pub fn new(m: i64, n: i64, r: i64) -> Self {
        CodingTriple { m, n: Some(n), r }
    }

    fn shape_ok(&self) -> bool {
        match (self.m, self.n, self.r) {
            (2, Some(n), 1) => n >= 0,
            (0, Some(1), -1) | (0, None, 1) => true,
            _ => false,
        }
    }
}

impl fmt::Display for CodingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.n {
            Some(n) => write!(f, "({},{},{})", self.m, n, self.r),
            None => write!(f, "({},inf,{})", self.m, self.r),
        }
    }
}

/// Parameters the renormalization map can act on exactly.
pub trait RenormParam: Clone + PartialEq + Sized {
    fn cmp_rat(&self, q: &Rat) -> Ordering;
    /// `floor(s / (1 - 2s))` for `s < 1/2`.
    fn ratio_floor(&self) -> Result<BigInt, RenormError>;
    fn renorm(&self) -> Result<Self, RenormError>;
}

fn check_unit(c0: Ordering, c1: Ordering) -> Result<(), RenormError> {
    if c0 == Ordering::Less || c1 != Ordering::Less {
        return Err(RenormError::OutOfRange);
    }
    Ok(())
}

impl RenormParam for Rat {
    fn cmp_rat(&self, q: &Rat) -> Ordering {
        self.cmp(q)
    }

    fn ratio_floor(&self) -> Result<BigInt, RenormError> {
        Ok(rat_floor(
            &(self / (Rat::one() - self * Rat::from_integer(2.into()))),
        ))
    }

    fn renorm(&self) -> Result<Rat, RenormError> {
        renorm_r(self)
    }
}

impl RenormParam for Surd {
    fn cmp_rat(&self, q: &Rat) -> Ordering {
        Surd::cmp_rat(self, q)
    }

    fn ratio_floor(&self) -> Result<BigInt, RenormError> {
        Ok(self.ratio()?.floor())
    }

    fn renorm(&self) -> Result<Surd, RenormError> {
        renorm_r_surd(self)
    }
}

impl Surd {
    fn ratio(&self) -> Result<Surd, NumError> {
        let den = self
            .mul_rat(&Rat::from_integer((-2).into()))
            .add_rat(&Rat::one());
        self.try_div(&den)
    }
}

fn half() -> Rat {
    Rat::new(1.into(), 2.into())
}

/// `R(s)`: `frac(s/(1-2s))` below one half, `1 - s` from one half on.
pub fn renorm_r(s: &Rat) -> Result<Rat, RenormError> {
    check_unit(s.cmp(&Rat::zero()), s.cmp(&Rat::one()))?;
    if *s >= half() {
        return Ok(Rat::one() - s);
    }
    let x = s / (Rat::one() - s * Rat::from_integer(2.into()));
    Ok(&x - Rat::from_integer(rat_floor(&x)))
}

/// `R` on a quadratic surd, with the floor decided by exact sign tests.
pub fn renorm_r_surd(s: &Surd) -> Result<Surd, RenormError> {
    check_unit(s.cmp_rat(&Rat::zero()), s.cmp_rat(&Rat::one()))?;
    if s.cmp_rat(&half()) != Ordering::Less {
        return Ok(s.neg().add_rat(&Rat::one()));
    }
    let x = s.ratio()?;
    Ok(x.add_rat(&-Rat::from_integer(x.floor())))
}

/// The fixed point `(-n + √(n(n+2)))/2` of `R` in `(0, 1/2)`.
pub fn fixed_point(n: i64) -> Result<Surd, RenormError> {
    let h = half();
    Ok(Surd::with_radicand(
        Rat::from_integer((-n).into()) * &h,
        h,
        n * (n + 2),
    )?)
}

/// The coding map `ℳ`.
pub fn coding_map<P: RenormParam>(s: &P) -> Result<CodingTriple, RenormError> {
    let c0 = s.cmp_rat(&Rat::zero());
    check_unit(c0, s.cmp_rat(&Rat::one()))?;
    if c0 == Ordering::Equal {
        return Ok(CodingTriple::ZERO);
    }
    Ok(match s.cmp_rat(&half()) {
        Ordering::Equal => CodingTriple::HALF,
        Ordering::Greater => CodingTriple::FLIP,
        Ordering::Less => {
            let n = s.ratio_floor()?.to_i64().ok_or(RenormError::OutOfRange)?;
            CodingTriple::new(2, n, 1)
        }
    })
}

/// How a splitted expansion ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// Truncation of an infinite expansion.
    Infinite,
    EndsAtHalf,
    EndsAtZero,
}

/// Coding sequence of `s`, stopping once an iterate hits 0 or 1/2, or after
/// `limit` triples. The flag reports which of the three happened.
pub fn coding_prefix<P: RenormParam>(
    s: &P,
    limit: usize,
) -> Result<(Vec<CodingTriple>, Terminal), RenormError> {
    let mut out = Vec::new();
    let mut cur = s.clone();
    while out.len() < limit {
        let c = coding_map(&cur)?;
        if c == CodingTriple::ZERO {
            return Ok((out, Terminal::EndsAtZero));
        }
        out.push(c);
        // (2,0,1) is also the code of every s below 1/3, so test the value
        if cur.cmp_rat(&half()) == Ordering::Equal {
            return Ok((out, Terminal::EndsAtHalf));
        }
        cur = cur.renorm()?;
    }
    Ok((out, Terminal::Infinite))
}

/// The coding sequence of a rational parameter, which is always finite.
pub fn coding_sequence(s: &Rat) -> Result<Vec<CodingTriple>, RenormError> {
    let (seq, _) = coding_prefix(s, usize::MAX)?;
    Ok(seq)
}

/// Checks the two admissibility rules: no two consecutive flips and no flip
/// at the end. A trailing `(2,0,1)` is read as the code of 1/2.
pub fn check_admissible(seq: &[CodingTriple]) -> Result<(), RenormError> {
    for (k, c) in seq.iter().enumerate() {
        if !c.shape_ok() || c.n.is_none() {
            return Err(RenormError::NotAdmissible(format!("bad triple {c} at {k}")));
        }
    }
    if seq
        .windows(2)
        .any(|w| w[0] == CodingTriple::FLIP && w[1] == CodingTriple::FLIP)
    {
        return Err(RenormError::NotAdmissible("consecutive (0,1,-1)".into()));
    }
    if seq.last() == Some(&CodingTriple::FLIP) {
        return Err(RenormError::NotAdmissible("ends with (0,1,-1)".into()));
    }
    Ok(())
}

/// Evaluates a finite admissible coding sequence as the nested fraction
/// `1/(m0 + 1/(n0 + r0/(m1 + ...)))`, dropping the final `1/n` when the
/// sequence ends in `(2,0,1)`. The empty sequence is 0.
pub fn eval_coding(seq: &[CodingTriple]) -> Result<Rat, RenormError> {
    check_admissible(seq)?;
    let Some(last) = seq.last() else {
        return Ok(Rat::zero());
    };
    let int = |k: i64| Rat::from_integer(k.into());
    let inv = |x: Rat| {
        if x.is_zero() {
            Err(RenormError::ZeroDenominator)
        } else {
            Ok(x.recip())
        }
    };
    // value of m_k + 1/(n_k + r_k/(...)), built from the inside out
    let mut tail = if *last == CodingTriple::HALF {
        int(last.m)
    } else {
        int(last.m) + inv(int(last.n.expect("checked")))?
    };
    for c in seq[..seq.len() - 1].iter().rev() {
        let inner = int(c.n.expect("checked")) + int(c.r) * inv(tail)?;
        tail = int(c.m) + inv(inner)?;
    }
    inv(tail)
}

/// A splitted expansion `(0; a_1, a_2, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitExpansion {
    pub terms: Vec<i64>,
    pub terminal: Terminal,
}

impl SplitExpansion {
    /// A finite expansion written out in full. Odd length means the orbit
    /// stopped at 1/2.
    pub fn finite(terms: Vec<i64>) -> Self {
        let terminal = if terms.len() % 2 == 1 {
            Terminal::EndsAtHalf
        } else {
            Terminal::EndsAtZero
        };
        SplitExpansion { terms, terminal }
    }

    /// Splits a coding sequence into signed digits.
    pub fn from_coding(seq: &[CodingTriple], terminal: Terminal) -> Result<Self, RenormError> {
        let mut terms = Vec::new();
        let mut sign = 1;
        for c in seq {
            let n =
                c.n.ok_or_else(|| RenormError::NotAdmissible("infinite n".into()))?;
            terms.push(c.m * sign);
            terms.push(n * sign);
            sign *= c.r;
        }
        if terminal == Terminal::EndsAtHalf {
            terms.pop();
        }
        Ok(SplitExpansion { terms, terminal })
    }

    /// Recovers the coding sequence. Signs are undone pair by pair.
    pub fn to_coding(&self) -> Result<Vec<CodingTriple>, RenormError> {
        let bad = || RenormError::NotAdmissible("digits do not split into coding triples".into());
        let mut out = Vec::new();
        let mut sign = 1;
        let mut k = 0;
        while k < self.terms.len() {
            let m = self.terms[k] * sign;
            let c = match self.terms.get(k + 1) {
                Some(&n) => {
                    let n = n * sign;
                    match (m, n) {
                        (2, n) if n >= 0 => CodingTriple::new(2, n, 1),
                        (0, 1) => CodingTriple::FLIP,
                        _ => return Err(bad()),
                    }
                }
                None if m == 2 && self.terminal == Terminal::EndsAtHalf => CodingTriple::HALF,
                None => return Err(bad()),
            };
            sign *= c.r;
            out.push(c);
            k += 2;
        }
        Ok(out)
    }

    /// Collapses every interior `0` digit by adding its neighbours, giving a
    /// signed continued fraction.
    pub fn signed_cf(&self) -> Vec<i64> {
        let mut t = self.terms.clone();
        let mut j = 1;
        while j + 1 < t.len() {
            if t[j] == 0 {
                let merged = t[j - 1] + t[j + 1];
                t.splice(j - 1..=j + 1, [merged]);
                j = j.max(2) - 1;
            } else {
                j += 1;
            }
        }
        t
    }
}

impl fmt::Display for SplitExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(i64::to_string).collect();
        write!(f, "(0; {})", parts.join(","))?;
        if self.terminal == Terminal::Infinite {
            write!(f, "...")?;
        }
        Ok(())
    }
}

/// Splitted expansion of a rational parameter in `(0, 1)`.
pub fn split_expansion(s: &Rat) -> Result<SplitExpansion, RenormError> {
    if *s <= Rat::zero() {
        return Err(RenormError::OutOfRange);
    }
    let (seq, terminal) = coding_prefix(s, usize::MAX)?;
    SplitExpansion::from_coding(&seq, terminal)
}

/// The first `pairs` coding triples of a surd, split into digits.
pub fn split_expansion_surd(s: &Surd, pairs: usize) -> Result<SplitExpansion, RenormError> {
    let (seq, terminal) = coding_prefix(s, pairs)?;
    SplitExpansion::from_coding(&seq, terminal)
}

/// Value of the finite continued fraction `(0; a_1, ..., a_k)` with
/// arbitrary integer digits.
pub fn eval_cf(digits: &[i64]) -> Result<Rat, RenormError> {
    let mut x: Option<Rat> = None;
    for &a in digits.iter().rev() {
        let a = Rat::from_integer(a.into());
        x = Some(match x {
            None => a,
            Some(t) if t.is_zero() => return Err(RenormError::ZeroDenominator),
            Some(t) => a + t.recip(),
        });
    }
    match x {
        None => Ok(Rat::zero()),
        Some(t) if t.is_zero() => Err(RenormError::ZeroDenominator),
        Some(t) => Ok(t.recip()),
    }
}

/// Evaluates a splitted expansion through its coding sequence.
pub fn eval_expansion(e: &SplitExpansion) -> Result<Rat, RenormError> {
    eval_coding(&e.to_coding()?)
}

/// Convergents `p_k/q_k` of `(0; a_1, a_2, ...)` for `k = 1..=min(K, len)`.
///
/// A leading zero digit is skipped by seeding `p_1 = 0, q_1 = 1`, `p_2 = 1, q_2 = a_2`.
pub fn convergents(digits: &[i64], count: usize) -> Vec<(BigInt, BigInt)> {
    let big = |k: i64| BigInt::from(k);
    let mut out = Vec::new();
    let (mut p2, mut q2) = (big(0), big(1));
    let (mut p1, mut q1);
    let mut start = 1;
    match digits.first() {
        None => return out,
        Some(0) => {
            out.push((big(0), big(1)));
            let Some(&a2) = digits.get(1) else { return out };
            p1 = big(1);
            q1 = big(a2);
            out.push((p1.clone(), q1.clone()));
            p2 = big(0);
            q2 = big(1);
            start = 2;
        }
        Some(&a1) => {
            p1 = big(1);
            q1 = big(a1);
            out.push((p1.clone(), q1.clone()));
        }
    }
    for &a in &digits[start..] {
        if out.len() >= count {
            break;
        }
        let p = big(a) * &p1 + &p2;
        let q = big(a) * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        out.push((p1.clone(), q1.clone()));
    }
    out.truncate(count);
    out
}

/// `|p/q - s| <= c/q²`, decided exactly.
pub fn within_bound(p: &BigInt, q: &BigInt, s: &Surd, c: &Rat) -> bool {
    let pq = Rat::new(p.clone(), q.clone());
    let diff = s.add_rat(&-pq);
    let bound = c / Rat::from_integer(q * q);
    diff.cmp_rat(&bound) != Ordering::Greater && diff.cmp_rat(&-bound) != Ordering::Less
}

/// The parameter-interval families on which maximal-domain counts are fixed.
///
/// `A` through `E` live on the renormalized side. `Lifted` is the interval
/// `[s_{m,n}, s_{m,n-1}]` with `s_{m,n} = (0;2,2,2,m,n)`, which `R` maps onto
/// the `A` interval with the same indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    Lifted,
}

impl std::str::FromStr for Family {
    type Err = RenormError;
    fn from_str(s: &str) -> Result<Self, RenormError> {
        Ok(match s {
            "A" | "Abar" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "S" | "Lifted" => Family::Lifted,
            _ => return Err(RenormError::NotAdmissible(format!("unknown family {s}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedInterval {
    pub family: Family,
    pub m: i64,
    pub n: i64,
    pub lo: Rat,
    pub hi: Rat,
}

impl NamedInterval {
    pub fn contains(&self, s: &Rat) -> bool {
        self.lo <= *s && *s <= self.hi
    }
}

impl fmt::Display for NamedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}

/// `s_{m,n} = (0;2,2,2,m,n)`.
pub fn s_mn(m: i64, n: i64) -> Result<Rat, RenormError> {
    eval_cf(&[2, 2, 2, m, n])
}

/// `t_{m,n} = (0;2,m,n) = R(s_{m,n})`.
pub fn t_mn(m: i64, n: i64) -> Result<Rat, RenormError> {
    eval_cf(&[2, m, n])
}

/// A named interval with its endpoints sorted.
pub fn named_interval(family: Family, m: i64, n: i64) -> Result<NamedInterval, RenormError> {
    let ok = match family {
        Family::A | Family::Lifted => m >= 2 && n >= 2,
        Family::B => m >= 2 && n >= 1,
        Family::C => m >= 1 && m % 2 == 1 && n >= 1,
        Family::D | Family::E => m >= 2 && m % 2 == 0 && n >= 2,
    };
    if !ok {
        return Err(RenormError::BadIndex(m, n));
    }
    let (a, b) = match family {
        Family::A => (eval_cf(&[2, m, n])?, eval_cf(&[2, m, n - 1])?),
        Family::B => (eval_cf(&[2, m, 1, n])?, eval_cf(&[2, m, 1, n + 1])?),
        Family::C | Family::D => (eval_cf(&[2, 1, m, n])?, eval_cf(&[2, 1, m, n + 1])?),
        Family::E => (eval_cf(&[2, 1, m, 1, n])?, eval_cf(&[2, 1, m, 1, n - 1])?),
        Family::Lifted => (s_mn(m, n)?, s_mn(m, n - 1)?),
    };
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Ok(NamedInterval {
        family,
        m,
        n,
        lo,
        hi,
    })
}

/// Denominators of the `R`-orbit of `p/q` until it reaches 0 or 1/2.
pub fn orbit_denominators(s: &Rat) -> Result<Vec<BigInt>, RenormError> {
    let mut out = vec![s.denom().clone()];
    let mut cur = s.clone();
    while !cur.is_zero() && cur != half() {
        cur = renorm_r(&cur)?;
        out.push(cur.denom().clone());
    }
    Ok(out)
}

/// True when every second denominator of the orbit drops by at least two.
pub fn denominators_drop(dens: &[BigInt]) -> bool {
    dens.windows(3).all(|w| w[2] <= &w[0] - 2)
}

/// Parses a comma-separated digit list.
pub fn parse_digits(s: &str) -> Result<Vec<i64>, RenormError> {
    s.split(',')
        .map(|t| t.trim().replace('\u{2212}', "-").parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| RenormError::NotAdmissible(format!("bad digit list {s:?}")))
}

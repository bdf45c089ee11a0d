//! Coefficient ring: polynomials over the rationals in the odd parameters
//! `w1, w3, w5, ...`.
//!
//! Even-indexed parameters are identically zero, so `Scalar::omega(2k)`
//! returns zero and the variable set only ever contains odd indices. Plain
//! rationals are the constant polynomials; there is no separate type for them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::text::Cursor;

/// A monomial in the odd parameters. Entry `k` of the exponent vector is the
/// power of `w_{2k+1}`; trailing zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OmegaMonomial(Vec<u32>);

impl OmegaMonomial {
    pub fn one() -> Self {
        OmegaMonomial(Vec::new())
    }

    /// The monomial `w_index`. `index` must be odd.
    pub fn var(index: u32) -> Self {
        debug_assert!(index % 2 == 1);
        let k = (index / 2) as usize;
        let mut exps = vec![0; k + 1];
        exps[k] = 1;
        OmegaMonomial(exps)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(odd index, exponent)` pairs with nonzero exponent, increasing index.
    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(k, e)| (2 * k as u32 + 1, *e))
    }

    fn mul(&self, other: &Self) -> Self {
        let (long, short) = if self.0.len() >= other.0.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut exps = long.0.clone();
        for (e, f) in exps.iter_mut().zip(&short.0) {
            *e += f;
        }
        OmegaMonomial(exps)
    }
}

/// Graded lexicographic order, with `w1 > w3 > w5 > ...` among variables.
impl Ord for OmegaMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for k in 0..n {
                let a = self.0.get(k).copied().unwrap_or(0);
                let b = other.0.get(k).copied().unwrap_or(0);
                if a != b {
                    return a.cmp(&b);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for OmegaMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OmegaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (idx, e) in self.factors() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "w{idx}")?;
            } else {
                write!(f, "w{idx}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact scalar: a sparse polynomial with `BigRational` coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    /// Never holds a zero coefficient.
    terms: BTreeMap<OmegaMonomial, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut s = Scalar::zero();
        s.add_term(OmegaMonomial::one(), q);
        s
    }

    /// The parameter `w_index`; zero when `index` is even (including 0).
    pub fn omega(index: u32) -> Self {
        if index.is_multiple_of(2) {
            return Scalar::zero();
        }
        let mut s = Scalar::zero();
        s.add_term(OmegaMonomial::var(index), BigRational::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The value of a constant polynomial.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&OmegaMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&OmegaMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(OmegaMonomial::degree).max().unwrap_or(0)
    }

    /// Largest parameter index that occurs, if any.
    pub fn max_omega(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|m| m.factors().map(|(i, _)| i).max())
            .max()
    }

    pub fn add_term(&mut self, m: OmegaMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate with every parameter replaced by a rational value.
    pub fn eval(&self, value: &dyn Fn(u32) -> Option<BigRational>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, e) in m.factors() {
                let v = value(idx).ok_or(Error::MissingOmega(idx))?;
                for _ in 0..e {
                    term *= &v;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Evaluate against a table of parameter values.
    pub fn specialize(&self, values: &BTreeMap<u32, BigRational>) -> Result<BigRational> {
        self.eval(&|i| values.get(&i).cloned())
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        let mut cur = Cursor::new(s);
        let v = parse_sum(&mut cur)?;
        cur.expect_end()?;
        Ok(v)
    }

    /// True when printing needs parentheses to be used as a factor.
    pub fn needs_parens(&self) -> bool {
        self.terms.len() > 1
    }
}

pub(crate) fn parse_sum(cur: &mut Cursor<'_>) -> Result<Scalar> {
    let mut acc = if cur.eat('-') {
        -parse_product(cur)?
    } else {
        parse_product(cur)?
    };
    loop {
        if cur.eat('+') {
            acc += parse_product(cur)?;
        } else if cur.eat('-') {
            acc -= parse_product(cur)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(cur: &mut Cursor<'_>) -> Result<Scalar> {
    let mut acc = parse_power(cur)?;
    loop {
        if cur.eat('*') {
            acc = &acc * &parse_power(cur)?;
        } else if cur.eat('/') {
            acc = acc.scale(&parse_divisor(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

/// After a `/`: parse a nonzero rational and return its reciprocal.
pub(crate) fn parse_divisor(cur: &mut Cursor<'_>) -> Result<BigRational> {
    let pos = cur.pos();
    let d = parse_power(cur)?
        .as_rational()
        .filter(|q| !q.is_zero())
        .ok_or_else(|| Error::parse(pos, "divisor must be a nonzero rational"))?;
    Ok(d.recip())
}

pub(crate) fn parse_power(cur: &mut Cursor<'_>) -> Result<Scalar> {
    if cur.eat('-') {
        return Ok(-parse_power(cur)?);
    }
    let base = parse_atom(cur)?;
    if cur.eat('^') {
        let e = cur.uint()?;
        Ok(base.pow(e))
    } else {
        Ok(base)
    }
}

fn parse_atom(cur: &mut Cursor<'_>) -> Result<Scalar> {
    match cur.peek() {
        Some('(') => {
            cur.bump();
            let v = parse_sum(cur)?;
            cur.expect(')')?;
            Ok(v)
        }
        Some('w') => {
            cur.bump();
            let idx = cur.uint()?;
            if idx == 0 {
                return Err(cur.error("parameter indices start at w1"));
            }
            Ok(Scalar::omega(idx))
        }
        Some(c) if c.is_ascii_digit() => {
            let start = cur.pos();
            let d = cur.digits().expect("peeked a digit");
            let n: BigInt = d.parse().map_err(|_| Error::parse(start, "bad integer literal"))?;
            Ok(Scalar::from_rational(BigRational::from_integer(n)))
        }
        _ => Err(cur.error("expected a number, parameter or '('")),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += rhs;
        self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_parameters_vanish() {
        assert!(Scalar::omega(2).is_zero());
        assert!(Scalar::omega(0).is_zero());
        assert!(!Scalar::omega(3).is_zero());
    }

    #[test]
    fn print_parse_round_trip() {
        let w1 = Scalar::omega(1);
        let w3 = Scalar::omega(3);
        let s = &(&w1 * &w1) * &Scalar::from_int(2) - w3.scale(&BigRational::new(1.into(), 2.into()))
            + Scalar::from_int(-7);
        let text = s.to_string();
        assert_eq!(text, "2*w1^2 - 1/2*w3 - 7");
        assert_eq!(Scalar::parse(&text).unwrap(), s);
    }

    #[test]
    fn parse_handles_parentheses_and_powers() {
        let s = Scalar::parse("(w1 + 1)^2 - w1^2").unwrap();
        assert_eq!(s, Scalar::parse("2*w1 + 1").unwrap());
        assert_eq!(
            Scalar::parse("-3/6").unwrap(),
            Scalar::from_rational(BigRational::new((-1).into(), 2.into()))
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(Scalar::parse("w"), Err(Error::Parse { .. })));
        assert!(matches!(Scalar::parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(Scalar::parse("w1 +"), Err(Error::Parse { .. })));
        assert!(matches!(Scalar::parse("w0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn specialize_requires_every_variable() {
        let s = Scalar::parse("w1*w3 + 1").unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(1, rat(2));
        assert_eq!(s.specialize(&vals), Err(Error::MissingOmega(3)));
        vals.insert(3, rat(5));
        assert_eq!(s.specialize(&vals).unwrap(), rat(11));
    }
}

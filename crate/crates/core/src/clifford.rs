//! Sergeev-type Hecke-Clifford algebras on `n` strands.
//!
//! Two flavours share the code: the unbarred algebra with `c_i^2 = -1` and the
//! barred one with `c̄_i^2 = +1`. In both, the Clifford generators anticommute
//! pairwise and `w^{-1} c_i w = c_{(i)w}`. Elements are sums of normal words
//! `c^α w` with `α ∈ Z_2^n` and `w ∈ Σ_n`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{parse_cycles, Perm};
use crate::scalar::Scalar;
use crate::text::Cursor;

/// Which Clifford relation the odd generators satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliffordKind {
    /// `c_i^2 = -1`.
    Unbarred,
    /// `c̄_i^2 = +1`.
    Barred,
}

impl CliffordKind {
    pub fn square(self) -> i8 {
        match self {
            CliffordKind::Unbarred => -1,
            CliffordKind::Barred => 1,
        }
    }
}

/// Bring a product `c_{i_1} c_{i_2} ... c_{i_k}` (0-based indices) into the
/// normal form `±c^α`, where every generator squares to `square`.
pub(crate) fn normal_order(seq: &[usize], square: i8) -> (i8, u32) {
    let mut sign = 1i8;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                sign = -sign;
            }
        }
    }
    let mut bits = 0u32;
    for &i in seq {
        if bits & (1 << i) != 0 {
            // Sorted copies are adjacent, so each pair contributes one square.
            sign *= square;
        }
        bits ^= 1 << i;
    }
    (sign, bits)
}

/// Indices of the set bits of `bits`, increasing.
pub(crate) fn bit_indices(bits: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| bits & (1 << i) != 0)
}

/// A normal word `c^α w`. Bit `k` of `alpha` stands for `c_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordWord {
    pub perm: Perm,
    pub alpha: u32,
}

impl CliffordWord {
    pub fn identity(n: usize) -> Self {
        CliffordWord {
            perm: Perm::identity(n),
            alpha: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.perm.degree()
    }

    pub fn is_odd(&self) -> bool {
        self.alpha.count_ones() % 2 == 1
    }

    /// `(c^α w)(c^β v) = ± c^γ (wv)`.
    pub fn mul(&self, other: &CliffordWord, kind: CliffordKind) -> (i8, CliffordWord) {
        // w c_j = c_{(j)w^{-1}} w.
        let winv = self.perm.inverse();
        let mut seq: Vec<usize> = bit_indices(self.alpha).collect();
        seq.extend(bit_indices(other.alpha).map(|j| winv.image(j)));
        let (sign, alpha) = normal_order(&seq, kind.square());
        (
            sign,
            CliffordWord {
                perm: self.perm.then(&other.perm),
                alpha,
            },
        )
    }

    fn fmt_bits(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c[")?;
        for i in 0..self.degree() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (self.alpha >> i) & 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for CliffordWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_bits(f)?;
        write!(f, " * {}", self.perm)
    }
}

/// Parse `[b_1,...,b_n]` after a `c` or `cb` prefix into a bit mask.
pub(crate) fn parse_bits(cur: &mut Cursor<'_>, n: usize) -> Result<u32> {
    cur.expect('[')?;
    let mut bits = 0u32;
    let mut count = 0;
    if !cur.eat(']') {
        loop {
            let pos = cur.pos();
            match cur.uint()? {
                0 => {}
                1 => bits |= 1 << count,
                v => return Err(Error::parse(pos, format!("bit must be 0 or 1, got {v}"))),
            }
            count += 1;
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    if count != n {
        return Err(cur.error(format!("expected {n} bits, found {count}")));
    }
    Ok(bits)
}

/// A linear combination of normal words in `HC_n` or its barred twin.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    kind: CliffordKind,
    terms: BTreeMap<CliffordWord, Scalar>,
}

impl CliffordElement {
    pub fn zero(n: usize, kind: CliffordKind) -> Self {
        CliffordElement {
            n,
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(kind: CliffordKind, w: CliffordWord, coeff: Scalar) -> Self {
        let mut e = CliffordElement::zero(w.degree(), kind);
        e.add_term(w, coeff);
        e
    }

    pub fn one(n: usize, kind: CliffordKind) -> Self {
        CliffordElement::from_word(kind, CliffordWord::identity(n), Scalar::one())
    }

    /// The simple transposition `s_i`, 1-based.
    pub fn s(n: usize, kind: CliffordKind, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::Index(format!("s{i} needs 1 <= i < {n}")));
        }
        Ok(Self::perm(kind, Perm::simple(n, i)))
    }

    /// The Clifford generator `c_i`, 1-based.
    pub fn c(n: usize, kind: CliffordKind, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index(format!("c{i} needs 1 <= i <= {n}")));
        }
        let w = CliffordWord {
            perm: Perm::identity(n),
            alpha: 1 << (i - 1),
        };
        Ok(CliffordElement::from_word(kind, w, Scalar::one()))
    }

    pub fn perm(kind: CliffordKind, p: Perm) -> Self {
        CliffordElement::from_word(kind, CliffordWord { perm: p, alpha: 0 }, Scalar::one())
    }

    /// Jucys-Murphy element: `L_i = 𝔏_i + c_i 𝔏_i c_i` in the unbarred algebra
    /// and `L̄_i = 𝔏̄_i - c̄_i 𝔏̄_i c̄_i` in the barred one, where `𝔏_i` sums the
    /// transpositions `(j, i)` with `j < i`.
    pub fn jucys_murphy(n: usize, kind: CliffordKind, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Index(format!("L{i} needs 1 <= i <= {n}")));
        }
        let mut frak = CliffordElement::zero(n, kind);
        for j in 0..i - 1 {
            frak += &CliffordElement::perm(kind, Perm::transposition(n, j, i - 1));
        }
        let c = CliffordElement::c(n, kind, i)?;
        let conj = &(&c * &frak) * &c;
        // Sign chosen so that the conjugate term is `-square * c 𝔏 c`.
        let coeff = Scalar::from_int(-(kind.square() as i64));
        Ok(&frak + &conj.scale(&coeff))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CliffordKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CliffordWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: CliffordWord, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = CliffordElement::zero(self.n, self.kind);
        for (w, k) in &self.terms {
            out.add_term(w.clone(), k * c);
        }
        out
    }

    pub fn parse(s: &str, n: usize, kind: CliffordKind) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let v = parse_sum(&mut cur, n, kind)?;
        cur.expect_end()?;
        Ok(v)
    }
}

fn parse_sum(cur: &mut Cursor<'_>, n: usize, kind: CliffordKind) -> Result<CliffordElement> {
    let mut acc = CliffordElement::zero(n, kind);
    let mut negate = cur.eat('-');
    loop {
        let t = parse_product(cur, n, kind)?;
        if negate {
            acc -= &t;
        } else {
            acc += &t;
        }
        if cur.eat('+') {
            negate = false;
        } else if cur.eat('-') {
            negate = true;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(cur: &mut Cursor<'_>, n: usize, kind: CliffordKind) -> Result<CliffordElement> {
    let mut acc = parse_factor(cur, n, kind)?;
    loop {
        if cur.eat('/') {
            acc = acc.scale(&Scalar::from_rational(crate::scalar::parse_divisor(cur)?));
            continue;
        }
        cur.eat('*');
        match cur.peek() {
            Some(c) if c == '(' || c == 'c' || c == 's' || c == 'w' || c.is_ascii_digit() => {
                acc = &acc * &parse_factor(cur, n, kind)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(cur: &mut Cursor<'_>, n: usize, kind: CliffordKind) -> Result<CliffordElement> {
    let start = cur.pos();
    if cur.peek() == Some('(') && looks_like_cycle(cur.rest()) {
        let p = parse_cycles(cur, n)?;
        return Ok(CliffordElement::perm(kind, p));
    }
    cur.skip_ws();
    if cur.rest().starts_with("c[") {
        cur.bump();
        let alpha = parse_bits(cur, n)?;
        let w = CliffordWord {
            perm: Perm::identity(n),
            alpha,
        };
        return Ok(CliffordElement::from_word(kind, w, Scalar::one()));
    }
    match cur.peek() {
        Some('c') | Some('s') => {
            let name = cur.word();
            let i = cur.uint()? as usize;
            let e = match name {
                "c" => CliffordElement::c(n, kind, i),
                "s" => CliffordElement::s(n, kind, i),
                _ => return Err(Error::parse(start, format!("unknown generator '{name}'"))),
            };
            e.map_err(|err| Error::parse(start, err.to_string()))
        }
        _ => {
            let s = crate::scalar::parse_power(cur)?;
            Ok(CliffordElement::one(n, kind).scale(&s))
        }
    }
}

/// A parenthesised group holding only digits and spaces is a cycle.
pub(crate) fn looks_like_cycle(rest: &str) -> bool {
    let inner = &rest[1..];
    match inner.find(')') {
        Some(end) => inner[..end].chars().all(|c| c.is_ascii_digit() || c.is_whitespace()),
        None => false,
    }
}

impl std::ops::AddAssign<&CliffordElement> for CliffordElement {
    fn add_assign(&mut self, rhs: &CliffordElement) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&CliffordElement> for CliffordElement {
    fn sub_assign(&mut self, rhs: &CliffordElement) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl std::ops::Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Sub for &CliffordElement {
    type Output = CliffordElement;
    fn sub(self, rhs: &CliffordElement) -> CliffordElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        assert_eq!(
            (self.n, self.kind),
            (rhs.n, rhs.kind),
            "multiplying elements of different Hecke-Clifford algebras"
        );
        let mut out = CliffordElement::zero(self.n, self.kind);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let (sign, w) = a.mul(b, self.kind);
                let c = ca * cb;
                out.add_term(w, if sign < 0 { -c } else { c });
            }
        }
        out
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(w, c)| (c, w)))
    }
}

impl fmt::Debug for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordElement({self})")
    }
}

/// Shared printer for `coeff * body + ...` sums. Negative rational
/// coefficients are folded into the joining sign, a unit coefficient is
/// dropped, and a body printed as `1` leaves the coefficient alone.
pub(crate) fn write_sum<'a, B: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (&'a Scalar, B)>,
) -> fmt::Result {
    let mut first = true;
    for (c, body) in terms {
        let (neg, abs) = match c.as_rational() {
            Some(q) if q < num_traits::Zero::zero() => (true, Scalar::from_rational(-q)),
            _ => (false, c.clone()),
        };
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let body = body.to_string();
        if body == "1" {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{body}")?;
        } else if abs.needs_parens() {
            write!(f, "({abs}) * {body}")?;
        } else {
            write!(f, "{abs} * {body}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, n: usize, kind: CliffordKind) -> CliffordElement {
        CliffordElement::parse(s, n, kind).unwrap()
    }

    #[test]
    fn clifford_squares() {
        let c1 = CliffordElement::c(2, CliffordKind::Unbarred, 1).unwrap();
        let one = CliffordElement::one(2, CliffordKind::Unbarred);
        assert_eq!(&c1 * &c1, one.scale(&Scalar::from_int(-1)));
        let cb1 = CliffordElement::c(2, CliffordKind::Barred, 1).unwrap();
        assert_eq!(&cb1 * &cb1, CliffordElement::one(2, CliffordKind::Barred));
    }

    #[test]
    fn conjugation_moves_clifford_generators() {
        // s_1 c_1 s_1 = c_2
        let k = CliffordKind::Unbarred;
        let s1 = CliffordElement::s(3, k, 1).unwrap();
        let c1 = CliffordElement::c(3, k, 1).unwrap();
        let c2 = CliffordElement::c(3, k, 2).unwrap();
        assert_eq!(&(&s1 * &c1) * &s1, c2);
    }

    #[test]
    fn jucys_murphy_relations() {
        for kind in [CliffordKind::Unbarred, CliffordKind::Barred] {
            let n = 4;
            let l: Vec<_> = (1..=n)
                .map(|i| CliffordElement::jucys_murphy(n, kind, i).unwrap())
                .collect();
            assert!(l[0].is_zero());
            for a in &l {
                for b in &l {
                    assert_eq!(a * b, b * a);
                }
            }
            // s_i L_i s_i = L_{i+1} - (1 - sq c_i c_{i+1}) s_i with sq = c^2.
            for i in 1..n {
                let s = CliffordElement::s(n, kind, i).unwrap();
                let ci = CliffordElement::c(n, kind, i).unwrap();
                let cj = CliffordElement::c(n, kind, i + 1).unwrap();
                let one = CliffordElement::one(n, kind);
                let sq = Scalar::from_int(kind.square() as i64);
                let corr = &(&one - &(&ci * &cj).scale(&-sq)) * &s;
                let lhs = &(&s * &l[i - 1]) * &s;
                assert_eq!(lhs, &l[i] - &corr);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let k = CliffordKind::Unbarred;
        let e = el("c[1,0,1] * (1 2 3) - 2*w1 * c[0,1,0] * (1)(2 3)", 3, k);
        let printed = e.to_string();
        assert_eq!(el(&printed, 3, k), e);
        assert_eq!(el("c1 * c1", 3, k), el("-1 * c[0,0,0] * (1)(2)(3)", 3, k));
    }
}

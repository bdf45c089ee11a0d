//! The affine walled Brauer-Clifford superalgebra `BC^aff_{r,t}`.
//!
//! Elements are combinations of regular monomials `x^γ b x̄^δ`, where `b` is a
//! basis monomial of `BC_{r,t}` and the coefficients are polynomials in the
//! central parameters `ω_{2k+1}`. Right multiplication by a letter rewrites
//! `b x̄^δ · letter` with exact identities of the algebra; writing
//! `x'_i = x_i + L_i`, `x̄'_j = x̄_j + L̄_j` and `E_{ij} = e_{ij} - ē_{ij}`:
//!
//! * `x̄_j x'_i = x'_i x̄_j + x'_i E_{ij} - E_{ij} x'_i`;
//! * `d x'_i = x'_k d` if the bottom vertex `i` of `d` is joined to the top
//!   vertex `k`, and `d x'_i = -d x̄'_j` if it is joined to the bottom barred
//!   vertex `j`;
//! * `x̄_j e_1 = e_1 x̄'_j - L̄_j e_1` for `j ≥ 2`;
//! * `d x̄_1^a e_1 = ω̄_a d` if `d` has the bottom cap `(1, 1̄)`;
//! * `x̄_1^a e_1 = Σ_j a_{a,j} x_1^j e_1`, see [`omega_bar_expansion`];
//! * the affine Hecke-Clifford relations move `x̄_j` past `s̄_l` and `c̄_l`.
//!
//! The left factor `x^γ` never takes part in a rewrite, so results are
//! memoised on `(b, δ, letter)`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use parking_lot::RwLock;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::bc::{defining_relations, elements as el, named_element, BcAlgebra, BcElement, BcMonomial, Gen};
use crate::clifford::{parse_bits, write_sum};
use crate::diagram::parse_diagram;
use crate::error::{Error, Result};
use crate::relation::{Relation, RelationReport};
use crate::scalar::{parse_divisor, parse_power, Scalar};
use crate::text::Cursor;

/// Default recursion budget of the rewriting engine.
pub const DEFAULT_FUEL: usize = 512;

/// Letters of `BC^aff_{r,t}`: the generators of `BC_{r,t}`, the polynomial
/// generators `x_i`, `x̄_j`, and their shifted forms `x'_i`, `x̄'_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    S(usize),
    Sb(usize),
    C(usize),
    Cb(usize),
    E,
    X(usize),
    Xb(usize),
    Xp(usize),
    Xbp(usize),
}

impl Letter {
    pub fn is_odd(self) -> bool {
        matches!(self, Letter::C(_) | Letter::Cb(_))
    }

    /// Filtration degree: one for the polynomial letters, zero otherwise.
    pub fn degree(self) -> u32 {
        matches!(self, Letter::X(_) | Letter::Xb(_) | Letter::Xp(_) | Letter::Xbp(_)) as u32
    }

    pub fn to_gen(self) -> Option<Gen> {
        match self {
            Letter::S(i) => Some(Gen::S(i)),
            Letter::Sb(j) => Some(Gen::Sb(j)),
            Letter::C(i) => Some(Gen::C(i)),
            Letter::Cb(j) => Some(Gen::Cb(j)),
            Letter::E => Some(Gen::E),
            _ => None,
        }
    }

    /// The generators of `BC^aff_{r,t}`: those of `BC_{r,t}` with `x_1`, `x̄_1`.
    pub fn generators(r: usize, t: usize) -> Vec<Letter> {
        let mut out: Vec<Letter> = Gen::all(r, t).into_iter().map(Letter::from).collect();
        out.push(Letter::X(1));
        out.push(Letter::Xb(1));
        out
    }

    fn check(self, r: usize, t: usize) -> Result<()> {
        let ok = match self {
            Letter::S(i) => (1..r).contains(&i),
            Letter::Sb(j) => (1..t).contains(&j),
            Letter::C(i) | Letter::X(i) | Letter::Xp(i) => (1..=r).contains(&i),
            Letter::Cb(j) | Letter::Xb(j) | Letter::Xbp(j) => (1..=t).contains(&j),
            Letter::E => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Index(format!("{self} outside shape ({r}, {t})")))
        }
    }
}

impl From<Gen> for Letter {
    fn from(g: Gen) -> Letter {
        match g {
            Gen::S(i) => Letter::S(i),
            Gen::Sb(j) => Letter::Sb(j),
            Gen::C(i) => Letter::C(i),
            Gen::Cb(j) => Letter::Cb(j),
            Gen::E => Letter::E,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::S(i) => write!(f, "s{i}"),
            Letter::Sb(j) => write!(f, "sb{j}"),
            Letter::C(i) => write!(f, "c{i}"),
            Letter::Cb(j) => write!(f, "cb{j}"),
            Letter::E => write!(f, "e1"),
            Letter::X(i) => write!(f, "x{i}"),
            Letter::Xb(j) => write!(f, "xb{j}"),
            Letter::Xp(i) => write!(f, "xp{i}"),
            Letter::Xbp(j) => write!(f, "xbp{j}"),
        }
    }
}

/// A regular monomial `x^γ b x̄^δ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RegularMonomial {
    pub gamma: Vec<u32>,
    pub bc: BcMonomial,
    pub delta: Vec<u32>,
}

impl RegularMonomial {
    /// `b` with no polynomial part.
    pub fn from_bc(bc: BcMonomial) -> Self {
        RegularMonomial {
            gamma: vec![0; bc.r()],
            delta: vec![0; bc.t()],
            bc,
        }
    }

    pub fn identity(r: usize, t: usize) -> Result<Self> {
        Ok(RegularMonomial::from_bc(BcMonomial::identity(r, t)?))
    }

    pub fn r(&self) -> usize {
        self.gamma.len()
    }

    pub fn t(&self) -> usize {
        self.delta.len()
    }

    pub fn degree(&self) -> u32 {
        self.gamma.iter().chain(&self.delta).sum()
    }

    pub fn is_odd(&self) -> bool {
        self.bc.is_odd()
    }

    /// The word `x_1^{γ_1} ⋯ x_r^{γ_r} · word(b) · x̄_1^{δ_1} ⋯ x̄_t^{δ_t}`.
    pub fn word(&self) -> Vec<Letter> {
        let mut w = Vec::new();
        for (i, &g) in self.gamma.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::X(i + 1), g as usize));
        }
        w.extend(self.bc.word().into_iter().map(Letter::from));
        for (j, &d) in self.delta.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::Xb(j + 1), d as usize));
        }
        w
    }

    /// Display adaptor printing the word form, e.g. `x1^2*e1*s1*xb1`.
    pub fn word_display(&self) -> MonomialWords<'_> {
        MonomialWords(self)
    }

    fn shifted(&self, gamma: &[u32]) -> RegularMonomial {
        let mut m = self.clone();
        for (a, b) in m.gamma.iter_mut().zip(gamma) {
            *a += b;
        }
        m
    }
}

impl Ord for RegularMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.gamma.cmp(&other.gamma))
            .then_with(|| self.delta.cmp(&other.delta))
            .then_with(|| self.bc.cmp(&other.bc))
    }
}

impl PartialOrd for RegularMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_exponents(f: &mut fmt::Formatter<'_>, prefix: &str, v: &[u32]) -> fmt::Result {
    write!(f, "{prefix}[")?;
    for (k, e) in v.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, "]")
}

impl fmt::Display for RegularMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gamma.iter().any(|&g| g > 0) {
            write_exponents(f, "x", &self.gamma)?;
            write!(f, " ")?;
        }
        write!(f, "{}", self.bc)?;
        if self.delta.iter().any(|&d| d > 0) {
            write!(f, " ")?;
            write_exponents(f, "xb", &self.delta)?;
        }
        Ok(())
    }
}

impl fmt::Debug for RegularMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub struct MonomialWords<'a>(&'a RegularMonomial);

impl fmt::Display for MonomialWords<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        let mut parts: Vec<String> = Vec::new();
        let power = |name: String, e: u32| if e == 1 { name } else { format!("{name}^{e}") };
        for (i, &g) in m.gamma.iter().enumerate().filter(|(_, &g)| g > 0) {
            parts.push(power(format!("x{}", i + 1), g));
        }
        if !m.bc.word().is_empty() {
            parts.push(m.bc.word_display().to_string());
        }
        for (j, &d) in m.delta.iter().enumerate().filter(|(_, &d)| d > 0) {
            parts.push(power(format!("xb{}", j + 1), d));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A linear combination of regular monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct AffElement {
    r: usize,
    t: usize,
    terms: BTreeMap<RegularMonomial, Scalar>,
}

impl AffElement {
    pub fn zero(r: usize, t: usize) -> Self {
        AffElement {
            r,
            t,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize, t: usize) -> Result<Self> {
        Ok(AffElement::from_monomial(RegularMonomial::identity(r, t)?))
    }

    pub fn from_monomial(m: RegularMonomial) -> Self {
        let mut e = AffElement::zero(m.r(), m.t());
        e.add_term(m, Scalar::one());
        e
    }

    pub fn scalar(r: usize, t: usize, c: Scalar) -> Result<Self> {
        Ok(AffElement::one(r, t)?.scale(&c))
    }

    /// The image of `x ∈ BC_{r,t}`.
    pub fn from_bc(x: &BcElement) -> Self {
        let mut out = AffElement::zero(x.r(), x.t());
        for (m, c) in x.terms() {
            out.add_term(RegularMonomial::from_bc(m.clone()), c.clone());
        }
        out
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&RegularMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &RegularMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest degree of a term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(RegularMonomial::degree).max()
    }

    pub fn add_term(&mut self, m: RegularMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = AffElement::zero(self.r, self.t);
        if c.is_zero() {
            return out;
        }
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d * c);
        }
        out
    }

    /// Replace every parameter `w_a` by a rational value.
    pub fn specialize(&self, values: &BTreeMap<u32, BigRational>) -> Result<AffElement> {
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Scalar::from_rational(c.specialize(values)?));
        }
        Ok(out)
    }

    /// Display adaptor printing every monomial in word form.
    pub fn word_display(&self) -> AffWords<'_> {
        AffWords(self)
    }

    pub(crate) fn shifted(&self, gamma: &[u32]) -> AffElement {
        if gamma.iter().all(|&g| g == 0) {
            return self.clone();
        }
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in &self.terms {
            out.add_term(m.shifted(gamma), c.clone());
        }
        out
    }
}

pub struct AffWords<'a>(&'a AffElement);

impl fmt::Display for AffWords<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.0.terms.iter().map(|(m, c)| (c, m.word_display())))
    }
}

impl fmt::Display for AffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(m, c)| (c, m)))
    }
}

impl fmt::Debug for AffElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffElement({self})")
    }
}

impl std::ops::AddAssign<&AffElement> for AffElement {
    fn add_assign(&mut self, rhs: &AffElement) {
        assert_eq!((self.r, self.t), (rhs.r, rhs.t), "adding elements of different shapes");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&AffElement> for AffElement {
    fn sub_assign(&mut self, rhs: &AffElement) {
        assert_eq!(
            (self.r, self.t),
            (rhs.r, rhs.t),
            "subtracting elements of different shapes"
        );
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl std::ops::Add for &AffElement {
    type Output = AffElement;
    fn add(self, rhs: &AffElement) -> AffElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Sub for &AffElement {
    type Output = AffElement;
    fn sub(self, rhs: &AffElement) -> AffElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Neg for &AffElement {
    type Output = AffElement;
    fn neg(self) -> AffElement {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Coefficients `a_{n,0}, ..., a_{n,n}` with `x̄_1^n e_1 = Σ_j a_{n,j} x_1^j e_1`.
///
/// They satisfy `a_{0,0} = 1`, `a_{n+1,j+1} = -a_{n,j}` and
/// `a_{n+1,0} = -Σ_j a_{n,j} ω_j`, where `ω_j = 0` for even `j`.
pub fn omega_bar_expansion(n: u32) -> Vec<Scalar> {
    let mut a = vec![Scalar::one()];
    for _ in 0..n {
        let mut next = vec![Scalar::zero(); a.len() + 1];
        let mut head = Scalar::zero();
        for (j, c) in a.iter().enumerate() {
            next[j + 1] = -c;
            head -= &(c * &Scalar::omega(j as u32));
        }
        next[0] = head;
        a = next;
    }
    a
}

/// `ω̄_n = Σ_j a_{n,j} ω_j` as a polynomial in the odd parameters.
pub fn omega_bar(n: u32) -> Scalar {
    let mut out = Scalar::zero();
    for (j, c) in omega_bar_expansion(n).iter().enumerate() {
        out += &(c * &Scalar::omega(j as u32));
    }
    out
}

type MemoKey = (BcMonomial, Vec<u32>, Letter);

/// `BC^aff_{r,t}` with memoised right multiplication.
pub struct AffineAlgebra {
    r: usize,
    t: usize,
    fuel: usize,
    bc: BcAlgebra,
    l: Vec<BcElement>,
    lbar: Vec<BcElement>,
    /// `e_{ij} - ē_{ij}`, indexed `[i - 1][j - 1]`.
    e_minus: Vec<Vec<BcElement>>,
    memo: RwLock<HashMap<MemoKey, Arc<AffElement>>>,
}

impl AffineAlgebra {
    pub fn new(r: usize, t: usize) -> Result<Self> {
        AffineAlgebra::with_fuel(r, t, DEFAULT_FUEL)
    }

    /// `fuel` bounds the nesting depth of rewrites before
    /// [`Error::FuelExhausted`] is returned.
    pub fn with_fuel(r: usize, t: usize, fuel: usize) -> Result<Self> {
        let bc = BcAlgebra::new(r, t)?;
        if r == 0 || t == 0 {
            return Err(Error::shape("r >= 1 and t >= 1", format!("({r}, {t})")));
        }
        let l = (1..=r).map(|i| el::jm_l(r, t, i)).collect::<Result<_>>()?;
        let lbar = (1..=t).map(|j| el::jm_lbar(r, t, j)).collect::<Result<_>>()?;
        let e_minus = (1..=r)
            .map(|i| {
                (1..=t)
                    .map(|j| Ok(&el::e(r, t, i, j)? - &el::ebar(r, t, i, j)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(AffineAlgebra {
            r,
            t,
            fuel,
            bc,
            l,
            lbar,
            e_minus,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn fuel(&self) -> usize {
        self.fuel
    }

    /// The finite algebra `BC_{r,t}` of degree-zero monomials.
    pub fn bc(&self) -> &BcAlgebra {
        &self.bc
    }

    pub fn one(&self) -> AffElement {
        AffElement::one(self.r, self.t).expect("shape checked in new")
    }

    fn mono(&self, bc: BcMonomial, delta: Vec<u32>) -> AffElement {
        AffElement::from_monomial(RegularMonomial {
            gamma: vec![0; self.r],
            bc,
            delta,
        })
    }

    fn check_shape(&self, x: &AffElement) -> Result<()> {
        if (x.r, x.t) != (self.r, self.t) {
            return Err(Error::shape(
                format!("({}, {})", self.r, self.t),
                format!("({}, {})", x.r, x.t),
            ));
        }
        Ok(())
    }

    /// `x · g`.
    pub fn act(&self, x: &AffElement, g: Letter) -> Result<AffElement> {
        self.check_shape(x)?;
        g.check(self.r, self.t)?;
        self.act_at(x, g, 0)
    }

    /// `x · w`, one letter at a time.
    pub fn act_word(&self, x: &AffElement, w: &[Letter]) -> Result<AffElement> {
        self.check_shape(x)?;
        for g in w {
            g.check(self.r, self.t)?;
        }
        self.act_word_at(x, w, 0)
    }

    /// `x · Σ c_k w_k`.
    pub fn act_combination(&self, x: &AffElement, terms: &[(Scalar, Vec<Letter>)]) -> Result<AffElement> {
        let mut acc = AffElement::zero(self.r, self.t);
        for (c, w) in terms {
            acc += &self.act_word(x, w)?.scale(c);
        }
        Ok(acc)
    }

    /// The product of the letters of `w`.
    pub fn word(&self, w: &[Letter]) -> Result<AffElement> {
        self.act_word(&self.one(), w)
    }

    /// `Σ c_k w_k` as an element.
    pub fn combination(&self, terms: &[(Scalar, Vec<Letter>)]) -> Result<AffElement> {
        self.act_combination(&self.one(), terms)
    }

    pub fn mul(&self, a: &AffElement, b: &AffElement) -> Result<AffElement> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in b.terms() {
            out += &self.act_word_at(a, &m.word(), 0)?.scale(c);
        }
        Ok(out)
    }

    pub fn pow(&self, a: &AffElement, e: u32) -> Result<AffElement> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// The anti-involution fixing every generator: reverse each monomial's
    /// word and multiply it out again.
    pub fn sigma(&self, x: &AffElement) -> Result<AffElement> {
        self.check_shape(x)?;
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in x.terms() {
            let mut w = m.word();
            w.reverse();
            out += &self.act_word_at(&self.one(), &w, 0)?.scale(c);
        }
        Ok(out)
    }

    fn act_word_at(&self, x: &AffElement, w: &[Letter], depth: usize) -> Result<AffElement> {
        let mut acc = x.clone();
        for &g in w {
            acc = self.act_at(&acc, g, depth)?;
        }
        Ok(acc)
    }

    fn act_at(&self, x: &AffElement, g: Letter, depth: usize) -> Result<AffElement> {
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in x.terms() {
            let img = self.act_mono(&m.bc, &m.delta, g, depth)?;
            for (n, d) in img.shifted(&m.gamma).terms {
                out.add_term(n, c * &d);
            }
        }
        Ok(out)
    }

    /// `x · h` for `h ∈ BC_{r,t}`.
    fn act_bc_at(&self, x: &AffElement, h: &BcElement, depth: usize) -> Result<AffElement> {
        let mut out = AffElement::zero(self.r, self.t);
        for (m, c) in h.terms() {
            let w: Vec<Letter> = m.word().into_iter().map(Letter::from).collect();
            out += &self.act_word_at(x, &w, depth)?.scale(c);
        }
        Ok(out)
    }

    fn act_mono(&self, b: &BcMonomial, delta: &[u32], g: Letter, depth: usize) -> Result<Arc<AffElement>> {
        let key = (b.clone(), delta.to_vec(), g);
        let hit = self.memo.read().get(&key).cloned();
        if let Some(v) = hit {
            return Ok(v);
        }
        if depth >= self.fuel {
            return Err(Error::FuelExhausted(self.fuel));
        }
        let v = Arc::new(self.rewrite(b, delta, g, depth + 1)?);
        self.memo.write().insert(key, v.clone());
        Ok(v)
    }

    fn bc_step(&self, b: &BcMonomial, delta: &[u32], g: Gen) -> Result<AffElement> {
        let mut out = AffElement::zero(self.r, self.t);
        if let Some((sign, p)) = self.bc.mul_gen_right(b, g)? {
            let m = RegularMonomial {
                gamma: vec![0; self.r],
                bc: p,
                delta: delta.to_vec(),
            };
            out.add_term(m, Scalar::from_int(sign as i64));
        }
        Ok(out)
    }

    /// `b x̄^δ · g` as a combination of regular monomials.
    fn rewrite(&self, b: &BcMonomial, delta: &[u32], g: Letter, depth: usize) -> Result<AffElement> {
        let (r, t) = (self.r, self.t);
        let here = || self.mono(b.clone(), delta.to_vec());
        let peel = |j: usize| {
            let mut d = delta.to_vec();
            d[j - 1] -= 1;
            self.mono(b.clone(), d)
        };
        let act = |x: &AffElement, l: Letter| self.act_at(x, l, depth);
        let act_bc = |x: &AffElement, h: &BcElement| self.act_bc_at(x, h, depth);
        // Largest j with δ_j > 0, 1-based.
        let last = delta.iter().rposition(|&d| d > 0).map(|j| j + 1);
        let zeros = vec![0u32; t];

        match g {
            Letter::S(_) | Letter::C(_) => self.bc_step(b, delta, g.to_gen().expect("BC letter")),
            Letter::Xb(j) => {
                let mut d = delta.to_vec();
                d[j - 1] += 1;
                Ok(self.mono(b.clone(), d))
            }
            Letter::Xbp(j) => Ok(&act(&here(), Letter::Xb(j))? + &act_bc(&here(), &self.lbar[j - 1])?),
            Letter::X(i) => Ok(&act(&here(), Letter::Xp(i))? - &act_bc(&here(), &self.l[i - 1])?),
            Letter::Sb(_) | Letter::Cb(_) if last.is_none() => self.bc_step(b, delta, g.to_gen().expect("BC letter")),
            Letter::Cb(l) => {
                let j = last.expect("guarded above");
                let img = act(&act(&peel(j), Letter::Cb(l))?, Letter::Xb(j))?;
                Ok(if j == l { -&img } else { img })
            }
            Letter::Sb(l) => {
                let j = last.expect("guarded above");
                let m1 = peel(j);
                let swapped = act(&m1, Letter::Sb(l))?;
                if j == l + 1 {
                    let cc = self.act_word_at(&m1, &[Letter::Cb(l), Letter::Cb(l + 1)], depth)?;
                    Ok(&(&act(&swapped, Letter::Xb(l))? - &m1) - &cc)
                } else if j == l {
                    let cc = self.act_word_at(&m1, &[Letter::Cb(l + 1), Letter::Cb(l)], depth)?;
                    Ok(&(&act(&swapped, Letter::Xb(l + 1))? + &m1) + &cc)
                } else {
                    act(&swapped, Letter::Xb(j))
                }
            }
            Letter::E => match last {
                None => self.bc_step(b, delta, Gen::E),
                Some(j) if j >= 2 => {
                    let m1 = peel(j);
                    let moved = act(&act(&m1, Letter::E)?, Letter::Xbp(j))?;
                    let corr = act(&act_bc(&m1, &self.lbar[j - 1])?, Letter::E)?;
                    Ok(&moved - &corr)
                }
                Some(_) => {
                    let a = delta[0];
                    let d = &b.diagram;
                    let n = r + t;
                    if d.partner(n) == n + r {
                        if b.beta & 1 == 1 {
                            return Ok(AffElement::zero(r, t));
                        }
                        return Ok(self.mono(b.clone(), zeros).scale(&omega_bar(a)));
                    }
                    let coeffs = omega_bar_expansion(a);
                    let mut cur = self.mono(b.clone(), zeros);
                    let mut acc = AffElement::zero(r, t);
                    for (j, c) in coeffs.iter().enumerate() {
                        if !c.is_zero() {
                            acc += &act(&cur, Letter::E)?.scale(c);
                        }
                        if j < a as usize {
                            cur = act(&cur, Letter::Xp(1))?;
                        }
                    }
                    Ok(acc)
                }
            },
            Letter::Xp(i) => match last {
                None => {
                    let d = &b.diagram;
                    let n = r + t;
                    let v = d.vertex(d.partner(n + i - 1));
                    let bel = BcElement::from_monomial(b.clone());
                    let mut out = AffElement::zero(r, t);
                    if !v.bottom {
                        let k = v.index;
                        let sign = Scalar::from_int(if (b.alpha >> (k - 1)) & 1 == 1 { -1 } else { 1 });
                        let mut gamma = vec![0; r];
                        gamma[k - 1] = 1;
                        out.add_term(
                            RegularMonomial {
                                gamma,
                                bc: b.clone(),
                                delta: zeros,
                            },
                            sign.clone(),
                        );
                        out += &AffElement::from_bc(&self.l[k - 1].try_mul(&bel)?).scale(&sign);
                    } else {
                        let j = v.index;
                        let sign = Scalar::from_int(if (b.beta >> (j - 1)) & 1 == 1 { 1 } else { -1 });
                        let mut d = zeros;
                        d[j - 1] = 1;
                        out.add_term(
                            RegularMonomial {
                                gamma: vec![0; r],
                                bc: b.clone(),
                                delta: d,
                            },
                            sign.clone(),
                        );
                        out += &AffElement::from_bc(&bel.try_mul(&self.lbar[j - 1])?).scale(&sign);
                    }
                    Ok(out)
                }
                Some(j) => {
                    let m1 = peel(j);
                    let e = &self.e_minus[i - 1][j - 1];
                    let a = act(&m1, Letter::Xp(i))?;
                    let first = &act(&a, Letter::Xb(j))? + &act_bc(&a, e)?;
                    Ok(&first - &act(&act_bc(&m1, e)?, Letter::Xp(i))?)
                }
            },
        }
    }

    /// A regular monomial with a uniform basis monomial of `BC_{r,t}` and a
    /// polynomial part of degree at most `max_degree`.
    pub fn random_monomial<R: Rng>(&self, rng: &mut R, max_degree: u32) -> RegularMonomial {
        let deg = rng.gen_range(0..=max_degree);
        let mut gamma = vec![0; self.r];
        let mut delta = vec![0; self.t];
        for _ in 0..deg {
            let s = rng.gen_range(0..self.r + self.t);
            if s < self.r {
                gamma[s] += 1;
            } else {
                delta[s - self.r] += 1;
            }
        }
        let bc = self.bc.basis().choose(rng).expect("basis is never empty").clone();
        RegularMonomial { gamma, bc, delta }
    }

    /// Defining relations, with the parameter relations for exponents up to
    /// `2 * kmax + 1`.
    pub fn relations(&self, kmax: u32) -> Vec<Relation<Letter>> {
        affine_relations(self.r, self.t, kmax)
    }

    /// Check relations as right operators on the given monomials.
    pub fn check_relations(&self, rels: &[Relation<Letter>], on: &[RegularMonomial]) -> Result<RelationReport> {
        let mut report = RelationReport {
            relations: rels.len(),
            ..Default::default()
        };
        for m in on {
            let x = AffElement::from_monomial(m.clone());
            for rel in rels {
                let lhs = self.act_combination(&x, &rel.lhs)?;
                let rhs = self.act_combination(&x, &rel.rhs)?;
                report.record(lhs == rhs, || format!("{} fails on {}", rel.name, m.word_display()));
            }
        }
        Ok(report)
    }

    /// Parse an element. Besides the syntax of `BC_{r,t}` this accepts
    /// `x<i>`, `xb<i>`, `xp<i>`, `xbp<i>` and exponent vectors `x[..]`, `xb[..]`.
    pub fn parse(&self, s: &str) -> Result<AffElement> {
        let mut cur = Cursor::new(s);
        let x = self.parse_sum(&mut cur)?;
        cur.expect_end()?;
        Ok(x)
    }

    fn parse_sum(&self, cur: &mut Cursor<'_>) -> Result<AffElement> {
        let mut acc = AffElement::zero(self.r, self.t);
        let mut negate = cur.eat('-');
        loop {
            let term = self.parse_product(cur)?;
            if negate {
                acc -= &term;
            } else {
                acc += &term;
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

    fn parse_product(&self, cur: &mut Cursor<'_>) -> Result<AffElement> {
        let mut acc = self.parse_factor(cur)?;
        loop {
            if cur.eat('/') {
                acc = acc.scale(&Scalar::from_rational(parse_divisor(cur)?));
                continue;
            }
            let explicit = cur.eat('*');
            match cur.peek() {
                Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                    let f = self.parse_factor(cur)?;
                    acc = self.mul(&acc, &f)?;
                }
                _ if explicit => return Err(cur.error("expected a factor after '*'")),
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&self, cur: &mut Cursor<'_>) -> Result<AffElement> {
        let (r, t) = (self.r, self.t);
        let start = cur.pos();
        let base = match cur.peek() {
            Some(c) if c.is_ascii_digit() || c == '(' || c == 'w' => {
                return AffElement::scalar(r, t, parse_power(cur)?);
            }
            Some('D') => AffElement::from_monomial(RegularMonomial::from_bc(BcMonomial::from_diagram(parse_diagram(
                cur,
                Some((r, t)),
            )?))),
            Some(_) => {
                let name = cur.word();
                if cur.peek_raw() == Some('[') {
                    let mut m = RegularMonomial::identity(r, t)?;
                    match name {
                        "c" => m.bc.alpha = parse_bits(cur, r)?,
                        "cb" => m.bc.beta = parse_bits(cur, t)?,
                        "x" => m.gamma = parse_exponents(cur, r)?,
                        "xb" => m.delta = parse_exponents(cur, t)?,
                        _ => return Err(Error::parse(start, format!("unknown prefix '{name}['"))),
                    }
                    self.word(&m.word())?
                } else {
                    let i = cur.uint()? as usize;
                    let letter = match name {
                        "x" => Some(Letter::X(i)),
                        "xb" => Some(Letter::Xb(i)),
                        "xp" => Some(Letter::Xp(i)),
                        "xbp" => Some(Letter::Xbp(i)),
                        _ => None,
                    };
                    let relabel = |e: Error| match e {
                        Error::Parse { .. } => e,
                        other => Error::parse(start, other.to_string()),
                    };
                    match letter {
                        Some(l) => self.word(&[l]).map_err(relabel)?,
                        None => AffElement::from_bc(&named_element(name, i, r, t).map_err(relabel)?),
                    }
                }
            }
            None => return Err(cur.error("expected a factor")),
        };
        if cur.eat('^') {
            let e = cur.uint()?;
            return self.pow(&base, e);
        }
        Ok(base)
    }
}

fn parse_exponents(cur: &mut Cursor<'_>, n: usize) -> Result<Vec<u32>> {
    cur.expect('[')?;
    let mut out = Vec::new();
    if !cur.eat(']') {
        loop {
            out.push(cur.uint()?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
    }
    if out.len() != n {
        return Err(cur.error(format!("expected {n} exponents, found {}", out.len())));
    }
    Ok(out)
}

fn term(c: i64, w: Vec<Letter>) -> (Scalar, Vec<Letter>) {
    (Scalar::from_int(c), w)
}

fn relation(
    name: impl Into<String>,
    lhs: Vec<(Scalar, Vec<Letter>)>,
    rhs: Vec<(Scalar, Vec<Letter>)>,
) -> Relation<Letter> {
    Relation {
        name: name.into(),
        lhs: lhs.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
        rhs: rhs.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
    }
}

/// Defining relations of `BC^aff_{r,t}`: those of `BC_{r,t}`, the affine
/// Hecke-Clifford relations on each side of the wall, and the mixed affine
/// relations with parameter exponents up to `2 * kmax + 1`.
pub fn affine_relations(r: usize, t: usize, kmax: u32) -> Vec<Relation<Letter>> {
    use Letter::*;
    let mut rels: Vec<Relation<Letter>> = defining_relations(r, t)
        .into_iter()
        .map(|rel| {
            let conv = |side: Vec<(Scalar, Vec<Gen>)>| {
                side.into_iter()
                    .map(|(c, w)| (c, w.into_iter().map(Letter::from).collect()))
                    .collect()
            };
            Relation {
                name: rel.name,
                lhs: conv(rel.lhs),
                rhs: conv(rel.rhs),
            }
        })
        .collect();

    // Affine Hecke-Clifford relations, unbarred side.
    rels.push(relation(
        "x1 c1 = -c1 x1",
        vec![term(1, vec![X(1), C(1)])],
        vec![term(-1, vec![C(1), X(1)])],
    ));
    for i in 2..=r {
        rels.push(Relation::words(
            format!("x1 c{i} commute"),
            vec![X(1), C(i)],
            vec![C(i), X(1)],
        ));
    }
    for j in 2..r {
        rels.push(Relation::words(
            format!("x1 s{j} commute"),
            vec![X(1), S(j)],
            vec![S(j), X(1)],
        ));
    }
    for i in 1..r {
        rels.push(relation(
            format!("x{} = s{i} x{i} s{i} - (1 - c{i} c{}) s{i}", i + 1, i + 1),
            vec![term(1, vec![X(i + 1)])],
            vec![
                term(1, vec![S(i), X(i), S(i)]),
                term(-1, vec![S(i)]),
                term(1, vec![C(i), C(i + 1), S(i)]),
            ],
        ));
        rels.push(Relation::words(
            format!("x{i} x{} commute", i + 1),
            vec![X(i), X(i + 1)],
            vec![X(i + 1), X(i)],
        ));
    }
    // Barred side.
    rels.push(relation(
        "xb1 cb1 = -cb1 xb1",
        vec![term(1, vec![Xb(1), Cb(1)])],
        vec![term(-1, vec![Cb(1), Xb(1)])],
    ));
    for j in 2..=t {
        rels.push(Relation::words(
            format!("xb1 cb{j} commute"),
            vec![Xb(1), Cb(j)],
            vec![Cb(j), Xb(1)],
        ));
    }
    for j in 2..t {
        rels.push(Relation::words(
            format!("xb1 sb{j} commute"),
            vec![Xb(1), Sb(j)],
            vec![Sb(j), Xb(1)],
        ));
    }
    for j in 1..t {
        rels.push(relation(
            format!("xb{} = sb{j} xb{j} sb{j} - (1 + cb{j} cb{}) sb{j}", j + 1, j + 1),
            vec![term(1, vec![Xb(j + 1)])],
            vec![
                term(1, vec![Sb(j), Xb(j), Sb(j)]),
                term(-1, vec![Sb(j)]),
                term(-1, vec![Cb(j), Cb(j + 1), Sb(j)]),
            ],
        ));
        rels.push(Relation::words(
            format!("xb{j} xb{} commute", j + 1),
            vec![Xb(j), Xb(j + 1)],
            vec![Xb(j + 1), Xb(j)],
        ));
    }

    // Mixed relations.
    rels.push(relation(
        "e1 (x1 + xb1) = 0",
        vec![term(1, vec![E, X(1)]), term(1, vec![E, Xb(1)])],
        vec![],
    ));
    rels.push(relation(
        "(x1 + xb1) e1 = 0",
        vec![term(1, vec![X(1), E]), term(1, vec![Xb(1), E])],
        vec![],
    ));
    if r >= 2 {
        rels.push(Relation::words(
            "e1 commutes with s1 x1 s1",
            vec![E, S(1), X(1), S(1)],
            vec![S(1), X(1), S(1), E],
        ));
    }
    if t >= 2 {
        rels.push(Relation::words(
            "e1 commutes with sb1 xb1 sb1",
            vec![E, Sb(1), Xb(1), Sb(1)],
            vec![Sb(1), Xb(1), Sb(1), E],
        ));
    }
    rels.push(relation(
        "x1 commutes with e1 + xb1 - ebar1",
        vec![
            term(1, vec![X(1), E]),
            term(1, vec![X(1), Xb(1)]),
            term(-1, vec![X(1), C(1), E, C(1)]),
        ],
        vec![
            term(1, vec![E, X(1)]),
            term(1, vec![Xb(1), X(1)]),
            term(-1, vec![C(1), E, C(1), X(1)]),
        ],
    ));
    for k in 0..=kmax {
        let odd = 2 * k + 1;
        let mut w = vec![E];
        w.extend(std::iter::repeat_n(X(1), odd as usize));
        w.push(E);
        rels.push(Relation::scaled(
            format!("e1 x1^{odd} e1 = w{odd} e1"),
            w,
            Scalar::omega(odd),
            vec![E],
        ));
        let even = 2 * k + 2;
        let mut w = vec![E];
        w.extend(std::iter::repeat_n(X(1), even as usize));
        w.push(E);
        rels.push(Relation::scaled(
            format!("e1 x1^{even} e1 = 0"),
            w,
            Scalar::zero(),
            vec![],
        ));
    }
    for a in 1..=2 * kmax + 2 {
        let mut w = vec![E];
        w.extend(std::iter::repeat_n(Xb(1), a as usize));
        w.push(E);
        rels.push(Relation::scaled(
            format!("e1 xb1^{a} e1 = wb{a} e1"),
            w,
            omega_bar(a),
            vec![E],
        ));
    }
    for j in 1..=t {
        rels.push(Relation::words(
            format!("x1 cb{j} commute"),
            vec![X(1), Cb(j)],
            vec![Cb(j), X(1)],
        ));
    }
    for i in 1..=r {
        rels.push(Relation::words(
            format!("xb1 c{i} commute"),
            vec![Xb(1), C(i)],
            vec![C(i), Xb(1)],
        ));
    }
    for j in 1..t {
        rels.push(Relation::words(
            format!("x1 sb{j} commute"),
            vec![X(1), Sb(j)],
            vec![Sb(j), X(1)],
        ));
    }
    for i in 1..r {
        rels.push(Relation::words(
            format!("xb1 s{i} commute"),
            vec![Xb(1), S(i)],
            vec![S(i), Xb(1)],
        ));
    }
    rels
}

/// The homomorphism `Φ_k : BC^aff_{r,t} → BC_{r+k,t+k}` sending `s_i, s̄_j,
/// c_l, c̄_m` to the same generators shifted by `k`, `e_1` to `e_{k+1}`,
/// `x_1`, `x̄_1` to `y_{k+1}`, `ȳ_{k+1}` and `ω_a` to `ω_{a,k+1}`.
pub struct Phi {
    r: usize,
    t: usize,
    k: usize,
    target: BcAlgebra,
    omegas: RefCell<HashMap<u32, BcElement>>,
}

impl Phi {
    pub fn new(r: usize, t: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Index("Phi_k needs k >= 1".into()));
        }
        Ok(Phi {
            r,
            t,
            k,
            target: BcAlgebra::new(r + k, t + k)?,
            omegas: RefCell::new(HashMap::new()),
        })
    }

    pub fn target(&self) -> &BcAlgebra {
        &self.target
    }

    fn shape(&self) -> (usize, usize) {
        (self.r + self.k, self.t + self.k)
    }

    /// `ω_{a,k+1}`, cached.
    pub fn omega(&self, a: u32) -> Result<BcElement> {
        if let Some(w) = self.omegas.borrow().get(&a) {
            return Ok(w.clone());
        }
        let w = self.target.omega(a, self.k + 1)?;
        self.omegas.borrow_mut().insert(a, w.clone());
        Ok(w)
    }

    /// Image of a parameter polynomial.
    pub fn scalar(&self, c: &Scalar) -> Result<BcElement> {
        let (rr, tt) = self.shape();
        let mut out = BcElement::zero(rr, tt);
        for (m, q) in c.terms() {
            let mut p = BcElement::one(rr, tt)?;
            for (idx, e) in m.factors() {
                p = p.try_mul(&self.omega(idx)?.pow(e)?)?;
            }
            out += &p.scale(&Scalar::from_rational(q.clone()));
        }
        Ok(out)
    }

    fn gen(&self, g: Gen) -> Result<BcElement> {
        let (rr, tt) = self.shape();
        let k = self.k;
        match g {
            Gen::S(i) => BcElement::gen(rr, tt, Gen::S(k + i)),
            Gen::Sb(j) => BcElement::gen(rr, tt, Gen::Sb(k + j)),
            Gen::C(i) => BcElement::gen(rr, tt, Gen::C(k + i)),
            Gen::Cb(j) => BcElement::gen(rr, tt, Gen::Cb(k + j)),
            Gen::E => el::e(rr, tt, k + 1, k + 1),
        }
    }

    /// Image of an element of the source `BC_{r,t}`.
    pub fn bc(&self, x: &BcElement) -> Result<BcElement> {
        let (rr, tt) = self.shape();
        let mut out = BcElement::zero(rr, tt);
        for (m, c) in x.terms() {
            let mut p = BcElement::one(rr, tt)?;
            for g in m.word() {
                p = p.try_mul(&self.gen(g)?)?;
            }
            out += &p.scale(c);
        }
        Ok(out)
    }

    pub fn letter(&self, l: Letter) -> Result<BcElement> {
        l.check(self.r, self.t)?;
        let (rr, tt) = self.shape();
        let k = self.k;
        let conj = |base: BcElement, s: fn(usize) -> Gen, i: usize| -> Result<BcElement> {
            let mut p = base;
            for a in 1..i {
                let g = BcElement::gen(rr, tt, s(k + a))?;
                p = g.try_mul(&p)?.try_mul(&g)?;
            }
            Ok(p)
        };
        match l {
            Letter::Xp(i) => conj(el::y(rr, tt, k + 1)?, Gen::S, i),
            Letter::Xbp(j) => conj(el::ybar(rr, tt, k + 1)?, Gen::Sb, j),
            Letter::X(i) => {
                let li = self.bc(&el::jm_l(self.r, self.t, i)?)?;
                Ok(&self.letter(Letter::Xp(i))? - &li)
            }
            Letter::Xb(j) => {
                let lj = self.bc(&el::jm_lbar(self.r, self.t, j)?)?;
                Ok(&self.letter(Letter::Xbp(j))? - &lj)
            }
            _ => self.gen(l.to_gen().expect("BC letter")),
        }
    }

    pub fn word(&self, w: &[Letter]) -> Result<BcElement> {
        let (rr, tt) = self.shape();
        let mut p = BcElement::one(rr, tt)?;
        for &l in w {
            p = p.try_mul(&self.letter(l)?)?;
        }
        Ok(p)
    }

    pub fn combination(&self, terms: &[(Scalar, Vec<Letter>)]) -> Result<BcElement> {
        let (rr, tt) = self.shape();
        let mut out = BcElement::zero(rr, tt);
        for (c, w) in terms {
            out += &self.scalar(c)?.try_mul(&self.word(w)?)?;
        }
        Ok(out)
    }

    pub fn element(&self, x: &AffElement) -> Result<BcElement> {
        let terms: Vec<(Scalar, Vec<Letter>)> = x.terms().map(|(m, c)| (c.clone(), m.word())).collect();
        self.combination(&terms)
    }

    /// Every relation holds between the images.
    pub fn check_relations(&self, rels: &[Relation<Letter>]) -> Result<RelationReport> {
        let mut report = RelationReport {
            relations: rels.len(),
            ..Default::default()
        };
        for rel in rels {
            let lhs = self.combination(&rel.lhs)?;
            let rhs = self.combination(&rel.rhs)?;
            report.record(lhs == rhs, || format!("{} fails under Phi_{}", rel.name, self.k));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_bar_low_orders() {
        let w = Scalar::omega;
        assert_eq!(omega_bar(1), -w(1));
        assert!(omega_bar(2).is_zero());
        assert_eq!(omega_bar(3), &(-w(3)) - &w(1).pow(2));
        assert!(omega_bar(4).is_zero());
    }

    #[test]
    fn e1_x1_e1_is_w1_e1() {
        let alg = AffineAlgebra::new(1, 1).unwrap();
        let x = alg.parse("e1*x1").unwrap();
        let y = alg.parse("e1").unwrap();
        assert_eq!(alg.mul(&x, &y).unwrap().word_display().to_string(), "w1 * e1");
    }

    #[test]
    fn words_multiply_to_their_monomials() {
        use rand::SeedableRng;
        let alg = AffineAlgebra::new(2, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = alg.random_monomial(&mut rng, 3);
            let x = alg.word(&m.word()).unwrap();
            assert_eq!(x, AffElement::from_monomial(m.clone()), "{m}");
            assert_eq!(alg.parse(&m.to_string()).unwrap(), x);
            assert_eq!(alg.parse(&m.word_display().to_string()).unwrap(), x);
        }
    }

    #[test]
    fn relations_hold_on_small_monomials() {
        let alg = AffineAlgebra::new(1, 1).unwrap();
        let rels = alg.relations(1);
        let mut on = Vec::new();
        for bc in alg.bc().basis() {
            for (g, d) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                on.push(RegularMonomial {
                    gamma: vec![g],
                    bc: bc.clone(),
                    delta: vec![d],
                });
            }
        }
        let rep = alg.check_relations(&rels, &on).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}

//! The walled Brauer-Clifford superalgebra `BC_{r,t}`.
//!
//! Basis monomials are `c^α d c̄^β` with `d` a walled Brauer diagram. In
//! diagram language every strand of `d` carries one decoration slot:
//!
//! * a vertical unbarred strand and a cap use their top unbarred end (`c`),
//! * a vertical barred strand and a cup use their bottom barred end (`c̄`).
//!
//! A product of two monomials stacks the diagrams and slides every bead along
//! its strand to the slot of the resulting strand. Beads keep their order
//! along a strand, change type when they pass a cap or cup, and the Koszul
//! sign of the induced reordering of bead heights is recorded. Beads meeting
//! in one slot then multiply with `c^2 = -1`, `c̄^2 = 1`. A closed loop gives
//! zero. The product of two monomials is therefore zero or `±` a monomial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use parking_lot::RwLock;

use crate::clifford::{bit_indices, parse_bits, write_sum};
use crate::diagram::{parse_diagram, DiagramLetter, Factorization, Site, WalledDiagram};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::relation::{Relation, RelationReport};
use crate::scalar::{parse_divisor, parse_power, Scalar};
use crate::text::Cursor;

/// Generators of `BC_{r,t}`; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    S(usize),
    Sb(usize),
    E,
    C(usize),
    Cb(usize),
}

impl Gen {
    pub fn is_odd(self) -> bool {
        matches!(self, Gen::C(_) | Gen::Cb(_))
    }

    /// All generators of `BC_{r,t}`.
    pub fn all(r: usize, t: usize) -> Vec<Gen> {
        let mut out: Vec<Gen> = (1..r).map(Gen::S).collect();
        out.extend((1..t).map(Gen::Sb));
        out.push(Gen::E);
        out.extend((1..=r).map(Gen::C));
        out.extend((1..=t).map(Gen::Cb));
        out
    }
}

impl From<DiagramLetter> for Gen {
    fn from(l: DiagramLetter) -> Gen {
        match l {
            DiagramLetter::S(i) => Gen::S(i),
            DiagramLetter::Sb(j) => Gen::Sb(j),
            DiagramLetter::E => Gen::E,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::S(i) => write!(f, "s{i}"),
            Gen::Sb(j) => write!(f, "sb{j}"),
            Gen::E => write!(f, "e1"),
            Gen::C(i) => write!(f, "c{i}"),
            Gen::Cb(j) => write!(f, "cb{j}"),
        }
    }
}

/// A basis monomial `c^α d c̄^β`. Bit `k` of `alpha` (`beta`) is `c_{k+1}`
/// (`c̄_{k+1}`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BcMonomial {
    pub alpha: u32,
    pub diagram: WalledDiagram,
    pub beta: u32,
}

/// Lexicographic comparison of bit vectors read from index 1 upwards.
fn bits_cmp(a: u32, b: u32) -> Ordering {
    b.reverse_bits().cmp(&a.reverse_bits()).reverse()
}

impl Ord for BcMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diagram
            .cmp(&other.diagram)
            .then_with(|| bits_cmp(self.alpha, other.alpha))
            .then_with(|| bits_cmp(self.beta, other.beta))
    }
}

impl PartialOrd for BcMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl BcMonomial {
    pub fn identity(r: usize, t: usize) -> Result<Self> {
        Ok(BcMonomial {
            alpha: 0,
            diagram: WalledDiagram::identity(r, t)?,
            beta: 0,
        })
    }

    pub fn from_diagram(diagram: WalledDiagram) -> Self {
        BcMonomial {
            alpha: 0,
            diagram,
            beta: 0,
        }
    }

    /// The monomial of a single generator.
    pub fn generator(r: usize, t: usize, g: Gen) -> Result<Self> {
        let mut m = BcMonomial::identity(r, t)?;
        match g {
            Gen::S(i) => m.diagram = WalledDiagram::s(r, t, i)?,
            Gen::Sb(j) => m.diagram = WalledDiagram::sb(r, t, j)?,
            Gen::E => m.diagram = WalledDiagram::e(r, t, 1, 1)?,
            Gen::C(i) if (1..=r).contains(&i) => m.alpha = 1 << (i - 1),
            Gen::Cb(j) if (1..=t).contains(&j) => m.beta = 1 << (j - 1),
            _ => return Err(Error::Index(format!("{g} outside shape ({r}, {t})"))),
        }
        Ok(m)
    }

    pub fn r(&self) -> usize {
        self.diagram.r()
    }

    pub fn t(&self) -> usize {
        self.diagram.t()
    }

    pub fn is_odd(&self) -> bool {
        (self.alpha.count_ones() + self.beta.count_ones()) % 2 == 1
    }

    /// The canonical word `c^α · (diagram word) · c̄^β`.
    pub fn word(&self) -> Vec<Gen> {
        let mut w: Vec<Gen> = bit_indices(self.alpha).map(|i| Gen::C(i + 1)).collect();
        w.extend(self.diagram.generator_word().into_iter().map(Gen::from));
        w.extend(bit_indices(self.beta).map(|j| Gen::Cb(j + 1)));
        w
    }

    /// Display adaptor printing the canonical word, e.g. `c1*s1*e1`.
    pub fn word_display(&self) -> WordDisplay<'_> {
        WordDisplay(self)
    }

    fn fmt_bits(f: &mut fmt::Formatter<'_>, prefix: &str, bits: u32, n: usize) -> fmt::Result {
        write!(f, "{prefix}[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (bits >> i) & 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        BcMonomial::fmt_bits(f, "c", self.alpha, self.r())?;
        write!(f, " {} ", self.diagram)?;
        BcMonomial::fmt_bits(f, "cb", self.beta, self.t())
    }
}

impl fmt::Debug for BcMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub struct WordDisplay<'a>(&'a BcMonomial);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.0.word();
        if w.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in w.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Product of two basis monomials: zero, or a sign times a monomial.
pub fn mul_monomials(a: &BcMonomial, b: &BcMonomial) -> Result<Option<(i8, BcMonomial)>> {
    let Some(st) = a.diagram.stack(&b.diagram)? else {
        return Ok(None);
    };
    let (r, t) = (a.r(), a.t());
    let n = r + t;
    const NONE: u8 = u8::MAX;
    // Height rank of every bead: a's c's, a's c̄'s, b's c's, b's c̄'s.
    let mut top_rank = vec![NONE; n];
    let mut mid_rank = vec![NONE; n];
    let mut bot_rank = vec![NONE; n];
    let mut k = 0u8;
    for i in bit_indices(a.alpha) {
        top_rank[i] = k;
        k += 1;
    }
    for j in bit_indices(a.beta) {
        mid_rank[r + j] = k;
        k += 1;
    }
    for i in bit_indices(b.alpha) {
        mid_rank[i] = k;
        k += 1;
    }
    for j in bit_indices(b.beta) {
        bot_rank[r + j] = k;
        k += 1;
    }
    let rank_at = |s: &Site| -> Option<u8> {
        let x = match *s {
            Site::Top(c) => top_rank[c],
            Site::Middle(c) => mid_rank[c],
            Site::Bottom(c) => bot_rank[c],
        };
        (x != NONE).then_some(x)
    };

    // Final top-to-bottom order: top slots in column order, beads nearest
    // the slot end highest; then bottom slots, beads nearest the end lowest.
    let mut order: Vec<u8> = Vec::with_capacity(k as usize);
    let mut sign = 1i8;
    let (mut alpha, mut beta) = (0u32, 0u32);
    for i in 0..r {
        let before = order.len();
        order.extend(st.paths[i].iter().filter_map(rank_at));
        let cnt = order.len() - before;
        if cnt % 2 == 1 {
            alpha |= 1 << i;
        }
        if (cnt / 2) % 2 == 1 {
            sign = -sign;
        }
    }
    for j in 0..t {
        let before = order.len();
        order.extend(st.paths[n + r + j].iter().rev().filter_map(rank_at));
        if (order.len() - before) % 2 == 1 {
            beta |= 1 << j;
        }
    }
    debug_assert_eq!(order.len(), k as usize);
    for x in 0..order.len() {
        for y in x + 1..order.len() {
            if order[x] > order[y] {
                sign = -sign;
            }
        }
    }
    Ok(Some((
        sign,
        BcMonomial {
            alpha,
            diagram: st.diagram,
            beta,
        },
    )))
}

/// A linear combination of basis monomials of `BC_{r,t}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BcElement {
    r: usize,
    t: usize,
    terms: BTreeMap<BcMonomial, Scalar>,
}

impl BcElement {
    pub fn zero(r: usize, t: usize) -> Self {
        BcElement {
            r,
            t,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(r: usize, t: usize) -> Result<Self> {
        Ok(BcElement::from_monomial(BcMonomial::identity(r, t)?))
    }

    pub fn from_monomial(m: BcMonomial) -> Self {
        let mut e = BcElement::zero(m.r(), m.t());
        e.add_term(m, Scalar::one());
        e
    }

    pub fn scalar(r: usize, t: usize, c: Scalar) -> Result<Self> {
        Ok(BcElement::one(r, t)?.scale(&c))
    }

    pub fn gen(r: usize, t: usize, g: Gen) -> Result<Self> {
        Ok(BcElement::from_monomial(BcMonomial::generator(r, t, g)?))
    }

    /// Product of the letters of `word`.
    pub fn word(r: usize, t: usize, word: &[Gen]) -> Result<Self> {
        let mut acc = BcElement::one(r, t)?;
        for &g in word {
            acc = acc.try_mul(&BcElement::gen(r, t, g)?)?;
        }
        Ok(acc)
    }

    /// Linear combination of words.
    pub fn combination(r: usize, t: usize, terms: &[(Scalar, Vec<Gen>)]) -> Result<Self> {
        let mut acc = BcElement::zero(r, t);
        for (c, w) in terms {
            acc += &BcElement::word(r, t, w)?.scale(c);
        }
        Ok(acc)
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

    pub fn terms(&self) -> impl Iterator<Item = (&BcMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &BcMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: BcMonomial, c: Scalar) {
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
        let mut out = BcElement::zero(self.r, self.t);
        if c.is_zero() {
            return out;
        }
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    fn check_shape(&self, other: &BcElement) -> Result<()> {
        if (self.r, self.t) != (other.r, other.t) {
            return Err(Error::shape(
                format!("BC_{{{},{}}}", self.r, self.t),
                format!("BC_{{{},{}}}", other.r, other.t),
            ));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &BcElement) -> Result<BcElement> {
        self.check_shape(other)?;
        let mut out = BcElement::zero(self.r, self.t);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((sign, m)) = mul_monomials(a, b)? {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &BcElement) -> Result<BcElement> {
        self.check_shape(other)?;
        Ok(self + other)
    }

    pub fn pow(&self, e: u32) -> Result<BcElement> {
        let mut acc = BcElement::one(self.r, self.t)?;
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `ab - ba`, without super signs.
    pub fn commutator(&self, other: &BcElement) -> Result<BcElement> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    /// True when every term has the same parity `odd`.
    pub fn is_homogeneous_of(&self, odd: bool) -> bool {
        self.terms.keys().all(|m| m.is_odd() == odd)
    }

    /// Embed into `BC_{r,t}` for a larger shape by padding with identity
    /// strands (unbarred and barred indices are preserved).
    pub fn embed(&self, r: usize, t: usize) -> Result<BcElement> {
        let mut out = BcElement::zero(r, t);
        for (m, c) in &self.terms {
            let mono = BcMonomial {
                alpha: m.alpha,
                diagram: m.diagram.embed(r, t)?,
                beta: m.beta,
            };
            out.add_term(mono, c.clone());
        }
        Ok(out)
    }

    /// Print each monomial as its canonical generator word.
    pub fn word_display(&self) -> ElementWords<'_> {
        ElementWords(self)
    }

    /// Parse canonical or word syntax, e.g. `2 * c[1,0] D{..} cb[0]` or
    /// `w1*e1*c1 - s1`.
    pub fn parse(s: &str, r: usize, t: usize) -> Result<BcElement> {
        let mut cur = Cursor::new(s);
        let v = parse_sum(&mut cur, r, t)?;
        cur.expect_end()?;
        Ok(v)
    }
}

pub struct ElementWords<'a>(&'a BcElement);

impl fmt::Display for ElementWords<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.0.terms.iter().map(|(m, c)| (c, m.word_display())))
    }
}

impl fmt::Display for BcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(m, c)| (c, m)))
    }
}

impl fmt::Debug for BcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BcElement({self})")
    }
}

fn parse_sum(cur: &mut Cursor<'_>, r: usize, t: usize) -> Result<BcElement> {
    let mut acc = BcElement::zero(r, t);
    let mut negate = cur.eat('-');
    loop {
        let term = parse_product(cur, r, t)?;
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

fn parse_product(cur: &mut Cursor<'_>, r: usize, t: usize) -> Result<BcElement> {
    let mut acc = parse_factor(cur, r, t)?;
    loop {
        if cur.eat('/') {
            acc = acc.scale(&Scalar::from_rational(parse_divisor(cur)?));
            continue;
        }
        let explicit = cur.eat('*');
        match cur.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == '(' => {
                acc = acc.try_mul(&parse_factor(cur, r, t)?)?;
            }
            _ if explicit => return Err(cur.error("expected a factor after '*'")),
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(cur: &mut Cursor<'_>, r: usize, t: usize) -> Result<BcElement> {
    let start = cur.pos();
    let base = match cur.peek() {
        Some(c) if c.is_ascii_digit() || c == '(' || c == 'w' => {
            return BcElement::scalar(r, t, parse_power(cur)?);
        }
        Some('D') => BcElement::from_monomial(BcMonomial::from_diagram(parse_diagram(cur, Some((r, t)))?)),
        Some(_) => {
            let name = cur.word();
            if cur.peek_raw() == Some('[') {
                let (alpha, beta) = match name {
                    "c" => (parse_bits(cur, r)?, 0),
                    "cb" => (0, parse_bits(cur, t)?),
                    _ => return Err(Error::parse(start, format!("unknown prefix '{name}['"))),
                };
                let mut m = BcMonomial::identity(r, t)?;
                m.alpha = alpha;
                m.beta = beta;
                BcElement::from_monomial(m)
            } else {
                let i = cur.uint()? as usize;
                named_element(name, i, r, t).map_err(|e| match e {
                    Error::Parse { .. } => e,
                    other => Error::parse(start, other.to_string()),
                })?
            }
        }
        None => return Err(cur.error("expected a factor")),
    };
    if cur.eat('^') {
        let e = cur.uint()?;
        return base.pow(e);
    }
    Ok(base)
}

/// Named elements accepted by the parser: generators plus `e<i>` (= `e_{i,i}`),
/// `L<i>`, `Lb<i>`, `y<i>`, `yb<i>`.
pub(crate) fn named_element(name: &str, i: usize, r: usize, t: usize) -> Result<BcElement> {
    match name {
        "s" => BcElement::gen(r, t, Gen::S(i)),
        "sb" => BcElement::gen(r, t, Gen::Sb(i)),
        "c" => BcElement::gen(r, t, Gen::C(i)),
        "cb" => BcElement::gen(r, t, Gen::Cb(i)),
        "e" => elements::e(r, t, i, i),
        "L" => elements::jm_l(r, t, i),
        "Lb" => elements::jm_lbar(r, t, i),
        "y" => elements::y(r, t, i),
        "yb" => elements::ybar(r, t, i),
        _ => Err(Error::parse(0, format!("unknown generator '{name}{i}'"))),
    }
}

impl std::ops::AddAssign<&BcElement> for BcElement {
    fn add_assign(&mut self, rhs: &BcElement) {
        assert_eq!((self.r, self.t), (rhs.r, rhs.t), "adding elements of different shapes");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::SubAssign<&BcElement> for BcElement {
    fn sub_assign(&mut self, rhs: &BcElement) {
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

impl std::ops::Add for &BcElement {
    type Output = BcElement;
    fn add(self, rhs: &BcElement) -> BcElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Sub for &BcElement {
    type Output = BcElement;
    fn sub(self, rhs: &BcElement) -> BcElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Neg for &BcElement {
    type Output = BcElement;
    fn neg(self) -> BcElement {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Multiplication of elements of the same shape. Panics on a shape
/// mismatch; use [`BcElement::try_mul`] for untrusted operands.
impl std::ops::Mul for &BcElement {
    type Output = BcElement;
    fn mul(self, rhs: &BcElement) -> BcElement {
        self.try_mul(rhs).expect("multiplying elements of different shapes")
    }
}

/// Named elements of `BC_{r,t}`: transpositions, `e_{i,j}`, Jucys-Murphy
/// elements and the elements `y_i`, `ȳ_i`.
pub mod elements {
    use super::*;

    fn idx(name: &str, i: usize, hi: usize) -> Result<()> {
        if i == 0 || i > hi {
            return Err(Error::Index(format!("{name}{i} needs 1 <= {i} <= {hi}")));
        }
        Ok(())
    }

    /// Diagram of a permutation of the unbarred and barred columns.
    pub fn perm_diagram(r: usize, t: usize, pu: Perm, pb: Perm) -> Result<WalledDiagram> {
        let fz = Factorization {
            f: 0,
            top_code: Vec::new(),
            bottom_code: Vec::new(),
            w_unbarred: pu,
            w_barred: pb,
        };
        WalledDiagram::from_factorization(r, t, &fz)
    }

    /// The transposition `(i, j)` of unbarred columns.
    pub fn transposition(r: usize, t: usize, i: usize, j: usize) -> Result<BcElement> {
        idx("(i,j) with i = ", i, r)?;
        idx("(i,j) with j = ", j, r)?;
        let d = perm_diagram(r, t, Perm::transposition(r, i - 1, j - 1), Perm::identity(t))?;
        Ok(BcElement::from_monomial(BcMonomial::from_diagram(d)))
    }

    /// The transposition `(ī, j̄)` of barred columns.
    pub fn transposition_bar(r: usize, t: usize, i: usize, j: usize) -> Result<BcElement> {
        idx("(ib,jb) with i = ", i, t)?;
        idx("(ib,jb) with j = ", j, t)?;
        let d = perm_diagram(r, t, Perm::identity(r), Perm::transposition(t, i - 1, j - 1))?;
        Ok(BcElement::from_monomial(BcMonomial::from_diagram(d)))
    }

    /// `e_{i,j}`: cap and cup joining unbarred `i` with barred `j`.
    pub fn e(r: usize, t: usize, i: usize, j: usize) -> Result<BcElement> {
        Ok(BcElement::from_monomial(BcMonomial::from_diagram(WalledDiagram::e(
            r, t, i, j,
        )?)))
    }

    /// `ē_{i,j} = c_i e_{i,j} c_i`.
    pub fn ebar(r: usize, t: usize, i: usize, j: usize) -> Result<BcElement> {
        let c = BcElement::gen(r, t, Gen::C(i))?;
        Ok(&(&c * &e(r, t, i, j)?) * &c)
    }

    fn frak_l(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let mut acc = BcElement::zero(r, t);
        for j in 1..i {
            acc += &transposition(r, t, j, i)?;
        }
        Ok(acc)
    }

    fn frak_lbar(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let mut acc = BcElement::zero(r, t);
        for j in 1..i {
            acc += &transposition_bar(r, t, j, i)?;
        }
        Ok(acc)
    }

    /// `L_i = 𝔏_i + c_i 𝔏_i c_i`.
    pub fn jm_l(r: usize, t: usize, i: usize) -> Result<BcElement> {
        idx("L", i, r)?;
        let l = frak_l(r, t, i)?;
        let c = BcElement::gen(r, t, Gen::C(i))?;
        Ok(&l + &(&(&c * &l) * &c))
    }

    /// `L̄_i = 𝔏̄_i - c̄_i 𝔏̄_i c̄_i`.
    pub fn jm_lbar(r: usize, t: usize, i: usize) -> Result<BcElement> {
        idx("Lb", i, t)?;
        let l = frak_lbar(r, t, i)?;
        let c = BcElement::gen(r, t, Gen::Cb(i))?;
        Ok(&l - &(&(&c * &l) * &c))
    }

    /// `η_i = Σ_{j<i} (e_{i,j} - (j, i))`.
    pub fn eta(r: usize, t: usize, i: usize) -> Result<BcElement> {
        idx("eta", i, r)?;
        let mut acc = BcElement::zero(r, t);
        for j in 1..i {
            if j <= t {
                acc += &e(r, t, i, j)?;
            }
            acc -= &transposition(r, t, j, i)?;
        }
        Ok(acc)
    }

    /// `η̄_i = Σ_{j<i} (e_{j,i} - (j̄, ī))`.
    pub fn etabar(r: usize, t: usize, i: usize) -> Result<BcElement> {
        idx("etabar", i, t)?;
        let mut acc = BcElement::zero(r, t);
        for j in 1..i {
            if j <= r {
                acc += &e(r, t, j, i)?;
            }
            acc -= &transposition_bar(r, t, j, i)?;
        }
        Ok(acc)
    }

    /// `y_i = η_i + c_i η_i c_i`.
    pub fn y(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let eta = eta(r, t, i)?;
        let c = BcElement::gen(r, t, Gen::C(i))?;
        Ok(&eta + &(&(&c * &eta) * &c))
    }

    /// `ȳ_i = η̄_i - c̄_i η̄_i c̄_i`.
    pub fn ybar(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let eta = etabar(r, t, i)?;
        let c = BcElement::gen(r, t, Gen::Cb(i))?;
        Ok(&eta - &(&(&c * &eta) * &c))
    }

    /// `ỹ_i = s_i y_i s_i - (1 - c_i c_{i+1}) s_i`.
    pub fn ytilde(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let s = BcElement::gen(r, t, Gen::S(i))?;
        let cc = BcElement::word(r, t, &[Gen::C(i), Gen::C(i + 1)])?;
        let one = BcElement::one(r, t)?;
        Ok(&(&(&s * &y(r, t, i)?) * &s) - &(&(&one - &cc) * &s))
    }

    /// `ỹ̄_i = s̄_i ȳ_i s̄_i - (1 + c̄_i c̄_{i+1}) s̄_i`.
    pub fn ybartilde(r: usize, t: usize, i: usize) -> Result<BcElement> {
        let s = BcElement::gen(r, t, Gen::Sb(i))?;
        let cc = BcElement::word(r, t, &[Gen::Cb(i), Gen::Cb(i + 1)])?;
        let one = BcElement::one(r, t)?;
        Ok(&(&(&s * &ybar(r, t, i)?) * &s) - &(&(&one + &cc) * &s))
    }
}

/// `BC_{r,t}` with its basis and a memo table for right multiplication by
/// generators.
pub struct BcAlgebra {
    r: usize,
    t: usize,
    basis: OnceLock<Vec<BcMonomial>>,
    gen_cache: RwLock<HashMap<(BcMonomial, Gen), SignedMonomial>>,
}

/// A product of basis monomials: zero, or a sign times a monomial.
type SignedMonomial = Option<(i8, BcMonomial)>;

impl BcAlgebra {
    pub fn new(r: usize, t: usize) -> Result<Self> {
        WalledDiagram::identity(r, t)?;
        Ok(BcAlgebra {
            r,
            t,
            basis: OnceLock::new(),
            gen_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// All basis monomials `c^α d c̄^β`, sorted.
    pub fn basis(&self) -> &[BcMonomial] {
        self.basis.get_or_init(|| {
            let mut out = Vec::new();
            for d in WalledDiagram::enumerate(self.r, self.t).expect("shape checked in new") {
                for alpha in 0..1u32 << self.r {
                    for beta in 0..1u32 << self.t {
                        out.push(BcMonomial {
                            alpha,
                            diagram: d.clone(),
                            beta,
                        });
                    }
                }
            }
            out.sort();
            out
        })
    }

    /// `(total, even, odd)` basis counts.
    pub fn super_rank(&self) -> (usize, usize, usize) {
        let odd = self.basis().iter().filter(|m| m.is_odd()).count();
        (self.basis().len(), self.basis().len() - odd, odd)
    }

    /// `m · g`, memoised.
    pub fn mul_gen_right(&self, m: &BcMonomial, g: Gen) -> Result<Option<(i8, BcMonomial)>> {
        let key = (m.clone(), g);
        if let Some(v) = self.gen_cache.read().get(&key) {
            return Ok(v.clone());
        }
        let gm = BcMonomial::generator(self.r, self.t, g)?;
        let v = mul_monomials(m, &gm)?;
        self.gen_cache.write().insert(key, v.clone());
        Ok(v)
    }

    /// `x · g` for an element `x`.
    pub fn act_gen(&self, x: &BcElement, g: Gen) -> Result<BcElement> {
        let mut out = BcElement::zero(self.r, self.t);
        for (m, c) in x.terms() {
            if let Some((sign, p)) = self.mul_gen_right(m, g)? {
                out.add_term(p, if sign < 0 { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// `x · w` for a word `w`, one generator at a time.
    pub fn act_word(&self, x: &BcElement, w: &[Gen]) -> Result<BcElement> {
        let mut acc = x.clone();
        for &g in w {
            acc = self.act_gen(&acc, g)?;
        }
        Ok(acc)
    }

    /// `x · Σ c_k w_k`.
    pub fn act_combination(&self, x: &BcElement, terms: &[(Scalar, Vec<Gen>)]) -> Result<BcElement> {
        let mut acc = BcElement::zero(self.r, self.t);
        for (c, w) in terms {
            acc += &self.act_word(x, w)?.scale(c);
        }
        Ok(acc)
    }

    /// The anti-involution fixing every generator: reverse each monomial's
    /// word and multiply it out again.
    pub fn tau(&self, x: &BcElement) -> Result<BcElement> {
        let mut out = BcElement::zero(self.r, self.t);
        for (m, c) in x.terms() {
            let mut w = m.word();
            w.reverse();
            let img = self.act_word(&BcElement::one(self.r, self.t)?, &w)?;
            out += &img.scale(c);
        }
        Ok(out)
    }

    /// Basis monomials of the copy of `BC_{k-1,k-1}` on the first `k - 1`
    /// unbarred and barred columns.
    fn sub_basis(&self, k: usize) -> Result<Vec<BcMonomial>> {
        if k == 1 {
            return Ok(vec![BcMonomial::identity(self.r, self.t)?]);
        }
        let small = BcAlgebra::new(k - 1, k - 1)?;
        small
            .basis()
            .iter()
            .map(|m| {
                Ok(BcMonomial {
                    alpha: m.alpha,
                    diagram: m.diagram.embed(self.r, self.t)?,
                    beta: m.beta,
                })
            })
            .collect()
    }

    /// Solve `Z e_k = p` for `Z` in the embedded `BC_{k-1,k-1}`. Each basis
    /// monomial `b` maps to `± (b e_k)`, a single monomial, and distinct `b`
    /// give distinct monomials, so the system is diagonal.
    pub fn divide_by_e(&self, p: &BcElement, k: usize) -> Result<BcElement> {
        let ek = elements::e(self.r, self.t, k, k)?;
        let ek_mono = ek.terms().next().expect("e_k is a monomial").0.clone();
        let mut image: HashMap<BcMonomial, (i8, BcMonomial)> = HashMap::new();
        for b in self.sub_basis(k)? {
            let (sign, m) =
                mul_monomials(&b, &ek_mono)?.ok_or_else(|| Error::Inconsistent(format!("{b} e_{k} vanished")))?;
            if image.insert(m, (sign, b)).is_some() {
                return Err(Error::Inconsistent(format!(
                    "right multiplication by e_{k} is not injective on the subalgebra"
                )));
            }
        }
        let mut z = BcElement::zero(self.r, self.t);
        for (m, c) in p.terms() {
            let (sign, b) = image
                .get(m)
                .ok_or_else(|| Error::Inconsistent(format!("term {m} is not of the form b e_{k}")))?;
            z.add_term(b.clone(), if *sign < 0 { -c } else { c.clone() });
        }
        Ok(z)
    }

    /// `ω_{a,k}`: the unique element of `BC_{k-1,k-1}` with
    /// `e_k y_k^a e_k = ω_{a,k} e_k`.
    pub fn omega(&self, a: u32, k: usize) -> Result<BcElement> {
        self.check_k(k)?;
        let ek = elements::e(self.r, self.t, k, k)?;
        let y = elements::y(self.r, self.t, k)?;
        let p = &(&ek * &y.pow(a)?) * &ek;
        self.divide_by_e(&p, k)
    }

    /// `ω̄_{a,k}`: the unique element of `BC_{k-1,k-1}` with
    /// `e_k ȳ_k^a e_k = ω̄_{a,k} e_k`.
    pub fn omega_bar(&self, a: u32, k: usize) -> Result<BcElement> {
        self.check_k(k)?;
        let ek = elements::e(self.r, self.t, k, k)?;
        let y = elements::ybar(self.r, self.t, k)?;
        let p = &(&ek * &y.pow(a)?) * &ek;
        self.divide_by_e(&p, k)
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.r.min(self.t) {
            return Err(Error::Index(format!(
                "k = {k} must satisfy 1 <= k <= min(r, t) = {}",
                self.r.min(self.t)
            )));
        }
        Ok(())
    }

    /// Defining relations: the Hecke-Clifford relations on both sides of the
    /// wall and the ten mixed relations, for every admissible index.
    pub fn relations(&self) -> Vec<Relation<Gen>> {
        defining_relations(self.r, self.t)
    }

    /// Check relations as right operators on the given monomials: for each
    /// `m`, compare `m · lhs` with `m · rhs`.
    pub fn check_relations(&self, rels: &[Relation<Gen>], on: &[BcMonomial]) -> Result<RelationReport> {
        let mut report = RelationReport {
            relations: rels.len(),
            ..Default::default()
        };
        for m in on {
            let x = BcElement::from_monomial(m.clone());
            for rel in rels {
                let lhs = self.act_combination(&x, &rel.lhs)?;
                let rhs = self.act_combination(&x, &rel.rhs)?;
                report.record(lhs == rhs, || format!("{} fails on {m}", rel.name));
            }
        }
        Ok(report)
    }
}

/// Relations of the Hecke-Clifford algebras and the mixed relations, written
/// with `Gen` letters.
pub fn defining_relations(r: usize, t: usize) -> Vec<Relation<Gen>> {
    use Gen::*;
    let minus = || Scalar::from_int(-1);
    let mut rels = Vec::new();

    // Symmetric groups and Clifford relations on each side of the wall.
    for (n, s, c, sq, tag) in [
        (r, S as fn(usize) -> Gen, C as fn(usize) -> Gen, -1, ""),
        (t, Sb, Cb, 1, "b"),
    ] {
        for i in 1..n {
            rels.push(Relation::words(format!("s{tag}{i}^2 = 1"), vec![s(i), s(i)], vec![]));
            if i + 1 < n {
                rels.push(Relation::words(
                    format!("braid s{tag}{i}"),
                    vec![s(i), s(i + 1), s(i)],
                    vec![s(i + 1), s(i), s(i + 1)],
                ));
            }
            for j in i + 2..n {
                rels.push(Relation::words(
                    format!("s{tag}{i} s{tag}{j} commute"),
                    vec![s(i), s(j)],
                    vec![s(j), s(i)],
                ));
            }
        }
        for i in 1..=n {
            rels.push(Relation::scaled(
                format!("c{tag}{i}^2 = {sq}"),
                vec![c(i), c(i)],
                Scalar::from_int(sq),
                vec![],
            ));
            for j in i + 1..=n {
                rels.push(Relation::scaled(
                    format!("c{tag}{i} c{tag}{j} anticommute"),
                    vec![c(i), c(j)],
                    minus(),
                    vec![c(j), c(i)],
                ));
            }
            // w^{-1} c_i w = c_{(i)w} for the generators w = s_j.
            for j in 1..n {
                let img = if i == j {
                    j + 1
                } else if i == j + 1 {
                    j
                } else {
                    i
                };
                rels.push(Relation::words(
                    format!("s{tag}{j} c{tag}{i} s{tag}{j} = c{tag}{img}"),
                    vec![s(j), c(i), s(j)],
                    vec![c(img)],
                ));
            }
        }
    }

    // Mixed relations. `e1` identifies `c1` with `cb1` on either side.
    rels.push(Relation::words("e1 c1 = e1 cb1", vec![E, C(1)], vec![E, Cb(1)]));
    rels.push(Relation::words("c1 e1 = cb1 e1", vec![C(1), E], vec![Cb(1), E]));
    // Generators on opposite sides of the wall (super)commute.
    for i in 1..=r {
        for j in 1..t {
            rels.push(Relation::words(
                format!("sb{j} c{i} commute"),
                vec![Sb(j), C(i)],
                vec![C(i), Sb(j)],
            ));
        }
        for j in 1..=t {
            rels.push(Relation::scaled(
                format!("c{i} cb{j} anticommute"),
                vec![C(i), Cb(j)],
                minus(),
                vec![Cb(j), C(i)],
            ));
        }
    }
    for i in 1..r {
        for j in 1..=t {
            rels.push(Relation::words(
                format!("s{i} cb{j} commute"),
                vec![S(i), Cb(j)],
                vec![Cb(j), S(i)],
            ));
        }
        for j in 1..t {
            rels.push(Relation::words(
                format!("s{i} sb{j} commute"),
                vec![S(i), Sb(j)],
                vec![Sb(j), S(i)],
            ));
        }
    }
    rels.push(Relation::scaled("e1^2 = 0", vec![E, E], Scalar::zero(), vec![]));
    if r >= 2 {
        rels.push(Relation::words("e1 s1 e1 = e1", vec![E, S(1), E], vec![E]));
    }
    if t >= 2 {
        rels.push(Relation::words("e1 sb1 e1 = e1", vec![E, Sb(1), E], vec![E]));
    }
    for i in 2..r {
        rels.push(Relation::words(
            format!("s{i} e1 commute"),
            vec![S(i), E],
            vec![E, S(i)],
        ));
    }
    for i in 2..t {
        rels.push(Relation::words(
            format!("sb{i} e1 commute"),
            vec![Sb(i), E],
            vec![E, Sb(i)],
        ));
    }
    if r >= 2 && t >= 2 {
        rels.push(Relation::words(
            "e1 s1 sb1 e1 s1 = e1 s1 sb1 e1 sb1",
            vec![E, S(1), Sb(1), E, S(1)],
            vec![E, S(1), Sb(1), E, Sb(1)],
        ));
        rels.push(Relation::words(
            "s1 e1 s1 sb1 e1 = sb1 e1 s1 sb1 e1",
            vec![S(1), E, S(1), Sb(1), E],
            vec![Sb(1), E, S(1), Sb(1), E],
        ));
    }
    for i in 2..=r {
        rels.push(Relation::words(
            format!("c{i} e1 commute"),
            vec![C(i), E],
            vec![E, C(i)],
        ));
    }
    for i in 2..=t {
        rels.push(Relation::words(
            format!("cb{i} e1 commute"),
            vec![Cb(i), E],
            vec![E, Cb(i)],
        ));
    }
    rels.push(Relation::scaled(
        "e1 c1 e1 = 0",
        vec![E, C(1), E],
        Scalar::zero(),
        vec![],
    ));
    rels.push(Relation::scaled(
        "e1 cb1 e1 = 0",
        vec![E, Cb(1), E],
        Scalar::zero(),
        vec![],
    ));
    rels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str, r: usize, t: usize) -> BcElement {
        BcElement::parse(s, r, t).unwrap()
    }

    #[test]
    fn bead_signs_on_small_cases() {
        let e = el("e1", 1, 1);
        assert_eq!(el("c1*cb1*e1", 1, 1), -&e);
        assert_eq!(el("cb1*c1*e1", 1, 1), e);
        assert_eq!(el("e1*c1", 1, 1), el("e1*cb1", 1, 1));
        assert_eq!(el("s1*c1", 2, 1), el("c2*s1", 2, 1));
        assert!(el("e1*e1", 1, 1).is_zero());
    }

    #[test]
    fn super_rank_counts() {
        for (r, t, total) in [(1, 1, 8), (2, 1, 48), (2, 2, 384)] {
            let a = BcAlgebra::new(r, t).unwrap();
            assert_eq!(a.super_rank(), (total, total / 2, total / 2));
        }
    }

    #[test]
    fn words_reproduce_monomials() {
        let a = BcAlgebra::new(2, 2).unwrap();
        for m in a.basis() {
            let w = BcElement::word(2, 2, &m.word()).unwrap();
            assert_eq!(w, BcElement::from_monomial(m.clone()), "{m}");
        }
    }

    #[test]
    fn relations_hold_in_bc_2_1() {
        let a = BcAlgebra::new(2, 1).unwrap();
        let report = a.check_relations(&a.relations(), a.basis()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn text_round_trip() {
        let a = BcAlgebra::new(2, 1).unwrap();
        let x = el("2*w1 * c1*s1*e1 - 1/3 * cb1 + y2", 2, 1);
        assert_eq!(el(&x.to_string(), 2, 1), x);
        assert_eq!(el(&x.word_display().to_string(), 2, 1), x);
        for m in a.basis() {
            let s = BcElement::from_monomial(m.clone()).to_string();
            assert_eq!(el(&s, 2, 1), BcElement::from_monomial(m.clone()));
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(BcElement::parse("s3", 2, 1), Err(Error::Parse { .. })));
        assert!(matches!(BcElement::parse("e1 *", 1, 1), Err(Error::Parse { .. })));
        assert!(matches!(
            BcElement::parse("D{1:1b; 1':1b'}", 2, 1),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(BcElement::parse("c[1,1]", 1, 1), Err(Error::Parse { .. })));
    }
}

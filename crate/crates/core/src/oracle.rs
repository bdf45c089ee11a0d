//! Right action of `BC_{r,t}` on the mixed tensor space `V^{⊗r} ⊗ (V^*)^{⊗t}`
//! of the natural module `V = C^{n|n}` of the queer Lie superalgebra.
//!
//! The basis of `V` is `v_i`, `i ∈ {±1, .., ±n}`, with `v_i` even for `i > 0`
//! and odd for `i < 0`; `V^*` has the dual basis `v̄_i`. Generators act on
//! tensor factors with the usual super sign `(-1)^{|g| · |x_1 ... x_{q-1}|}`
//! when an operator `g` reaches factor `q`:
//!
//! * `s_i`, `s̄_j`: super flip of two adjacent factors,
//! * `c_i`: `v_{±m} ↦ ±v_{∓m}` on factor `i`; `c̄_j`: `v̄_{±m} ↦ -v̄_{∓m}`, the
//!   dual action of `c`,
//! * `e_1`: contraction of factor `1` with factor `1̄` followed by insertion of
//!   the canonical element, `v_a ⊗ v̄_b ↦ (-1)^{|a|} δ_{ab} Σ_i v_i ⊗ v̄_i` when
//!   the two factors are adjacent, with an extra sign for factors in between.
//!
//! Matrices act on row vectors, so a word `g_1 g_2 ... g_k` is represented by
//! the product of the generator matrices in the same order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bc::{BcElement, BcMonomial, Gen};
use crate::error::{Error, Result};
use crate::relation::{Relation, RelationReport};

/// A sparse square matrix over the rationals acting on row vectors:
/// `(x)(fg) = ((x)f)g`.
#[derive(Clone, PartialEq, Eq)]
pub struct RepMatrix {
    dim: usize,
    /// Row `i` lists the image of basis vector `i`, sorted by column, with no
    /// zero entries.
    rows: Vec<Vec<(u32, BigRational)>>,
}

impl RepMatrix {
    pub fn zero(dim: usize) -> Self {
        RepMatrix {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        RepMatrix {
            dim,
            rows: (0..dim).map(|i| vec![(i as u32, BigRational::one())]).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        self.rows[i]
            .binary_search_by_key(&(j as u32), |e| e.0)
            .map(|k| self.rows[i][k].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    /// Row `i` as `(column, value)` pairs.
    pub fn row(&self, i: usize) -> &[(u32, BigRational)] {
        &self.rows[i]
    }

    fn from_accumulators(dim: usize, acc: Vec<BTreeMap<u32, BigRational>>) -> Self {
        RepMatrix {
            dim,
            rows: acc
                .into_iter()
                .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    /// Product in the right-operator convention: first `self`, then `other`.
    pub fn then(&self, other: &RepMatrix) -> RepMatrix {
        assert_eq!(self.dim, other.dim);
        let acc = self
            .rows
            .iter()
            .map(|row| {
                let mut out = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k as usize] {
                        *out.entry(*j).or_insert_with(BigRational::zero) += a * b;
                    }
                }
                out
            })
            .collect();
        RepMatrix::from_accumulators(self.dim, acc)
    }

    pub fn add(&self, other: &RepMatrix) -> RepMatrix {
        self.add_scaled(other, &BigRational::one())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &RepMatrix, c: &BigRational) -> RepMatrix {
        assert_eq!(self.dim, other.dim);
        let acc = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out: BTreeMap<u32, BigRational> = a.iter().cloned().collect();
                for (j, v) in b {
                    *out.entry(*j).or_insert_with(BigRational::zero) += v * c;
                }
                out
            })
            .collect();
        RepMatrix::from_accumulators(self.dim, acc)
    }

    pub fn scale(&self, c: &BigRational) -> RepMatrix {
        RepMatrix::zero(self.dim).add_scaled(self, c)
    }
}

impl fmt::Debug for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepMatrix(dim {}, nnz {})", self.dim, self.nnz())
    }
}

/// The mixed tensor space for `q(n)` with `r` copies of `V` and `t` of `V^*`.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    n: usize,
    r: usize,
    t: usize,
}

impl TensorSpace {
    pub fn new(n: usize, r: usize, t: usize) -> Result<Self> {
        let factors = (r + t) as u32;
        if n == 0 || r == 0 || t == 0 {
            return Err(Error::shape("n, r, t >= 1", format!("n = {n}, r = {r}, t = {t}")));
        }
        match (2 * n).checked_pow(factors) {
            Some(d) if d <= 1 << 22 => Ok(TensorSpace { n, r, t }),
            _ => Err(Error::shape(
                "a tensor space of dimension at most 2^22",
                format!("(2*{n})^{factors}"),
            )),
        }
    }

    pub fn dim(&self) -> usize {
        (2 * self.n).pow((self.r + self.t) as u32)
    }

    fn factors(&self) -> usize {
        self.r + self.t
    }

    /// Digits of a basis index: factor `q` holds a value in `0..2n`, where
    /// `0..n` encode `v_1..v_n` and `n..2n` encode `v_{-1}..v_{-n}`.
    fn digits(&self, mut idx: usize) -> Vec<usize> {
        let b = 2 * self.n;
        (0..self.factors())
            .map(|_| {
                let d = idx % b;
                idx /= b;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        let b = 2 * self.n;
        digits.iter().rev().fold(0, |acc, &d| acc * b + d)
    }

    fn parity(&self, d: usize) -> usize {
        usize::from(d >= self.n)
    }

    /// `v_{±m} ↔ v_{∓m}` on a digit.
    fn flip(&self, d: usize) -> usize {
        if d < self.n {
            d + self.n
        } else {
            d - self.n
        }
    }

    fn parity_before(&self, digits: &[usize], q: usize) -> usize {
        digits[..q].iter().map(|&d| self.parity(d)).sum::<usize>() % 2
    }

    /// Image of one basis vector under a generator, as signed basis vectors.
    pub fn apply_gen(&self, idx: usize, g: Gen) -> Result<Vec<(usize, i64)>> {
        let (n, r, t) = (self.n, self.r, self.t);
        let x = self.digits(idx);
        let sign = |e: usize| if e.is_multiple_of(2) { 1 } else { -1 };
        Ok(match g {
            Gen::S(i) | Gen::Sb(i) => {
                if i == 0 {
                    return Err(Error::Index(format!("{g} outside shape ({r}, {t})")));
                }
                let (lo, limit) = if matches!(g, Gen::S(_)) {
                    (i - 1, r)
                } else {
                    (r + i - 1, t)
                };
                if i >= limit {
                    return Err(Error::Index(format!("{g} outside shape ({r}, {t})")));
                }
                let mut y = x.clone();
                y.swap(lo, lo + 1);
                vec![(self.index(&y), sign(self.parity(x[lo]) * self.parity(x[lo + 1])))]
            }
            Gen::C(i) | Gen::Cb(i) => {
                if i == 0 {
                    return Err(Error::Index(format!("{g} outside shape ({r}, {t})")));
                }
                let (q, limit) = if matches!(g, Gen::C(_)) {
                    (i - 1, r)
                } else {
                    (r + i - 1, t)
                };
                if i > limit {
                    return Err(Error::Index(format!("{g} outside shape ({r}, {t})")));
                }
                let mut y = x.clone();
                y[q] = self.flip(x[q]);
                // c: v_+ -> v_-, v_- -> -v_+ ; c̄: v̄_± -> -v̄_∓.
                let local = match g {
                    Gen::C(_) => self.parity(x[q]),
                    _ => 1,
                };
                vec![(self.index(&y), sign(self.parity_before(&x, q) + local))]
            }
            Gen::E => {
                let (a, b) = (0, r);
                if x[a] != x[b] {
                    return Ok(Vec::new());
                }
                let k = x[a];
                let between: usize = x[a + 1..b].iter().map(|&d| self.parity(d)).sum();
                (0..2 * n)
                    .map(|i| {
                        let mut y = x.clone();
                        y[a] = i;
                        y[b] = i;
                        let e = self.parity(k) + (self.parity(i) + self.parity(k)) * between;
                        (self.index(&y), sign(e))
                    })
                    .collect()
            }
        })
    }

    /// Push a sparse row vector through a generator.
    fn apply_gen_to_vec(&self, v: &BTreeMap<u32, BigRational>, g: Gen) -> Result<BTreeMap<u32, BigRational>> {
        let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (idx, c) in v {
            for (j, s) in self.apply_gen(*idx as usize, g)? {
                let slot = out.entry(j as u32).or_insert_with(BigRational::zero);
                if s > 0 {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Matrix of the product of `word`.
    pub fn word(&self, word: &[Gen]) -> Result<RepMatrix> {
        let dim = self.dim();
        let mut acc = Vec::with_capacity(dim);
        for idx in 0..dim {
            let mut v = BTreeMap::new();
            v.insert(idx as u32, BigRational::one());
            for &g in word {
                v = self.apply_gen_to_vec(&v, g)?;
            }
            acc.push(v);
        }
        Ok(RepMatrix::from_accumulators(dim, acc))
    }

    pub fn generator(&self, g: Gen) -> Result<RepMatrix> {
        self.word(&[g])
    }

    /// `ρ(m)` computed from the canonical word of `m`.
    pub fn monomial(&self, m: &BcMonomial) -> Result<RepMatrix> {
        self.check_shape(m.r(), m.t())?;
        self.word(&m.word())
    }

    /// `ρ(x)`; every coefficient of `x` must be a rational number.
    pub fn element(&self, x: &BcElement) -> Result<RepMatrix> {
        self.check_shape(x.r(), x.t())?;
        let mut acc = RepMatrix::zero(self.dim());
        for (m, c) in x.terms() {
            let q = c
                .as_rational()
                .ok_or_else(|| Error::Inconsistent(format!("coefficient {c} is not a rational number")))?;
            acc = acc.add_scaled(&self.monomial(m)?, &q);
        }
        Ok(acc)
    }

    /// Matrix of `Σ c_k w_k`; coefficients must be rational.
    pub fn combination(&self, terms: &[(crate::Scalar, Vec<Gen>)]) -> Result<RepMatrix> {
        let mut acc = RepMatrix::zero(self.dim());
        for (c, w) in terms {
            let q = c
                .as_rational()
                .ok_or_else(|| Error::Inconsistent(format!("coefficient {c} is not a rational number")))?;
            acc = acc.add_scaled(&self.word(w)?, &q);
        }
        Ok(acc)
    }

    fn check_shape(&self, r: usize, t: usize) -> Result<()> {
        if (r, t) != (self.r, self.t) {
            return Err(Error::shape(format!("({}, {})", self.r, self.t), format!("({r}, {t})")));
        }
        Ok(())
    }

    /// Check relations as matrix identities.
    pub fn check_relations(&self, rels: &[Relation<Gen>]) -> Result<RelationReport> {
        let mut report = RelationReport {
            relations: rels.len(),
            ..Default::default()
        };
        for rel in rels {
            let ok = self.combination(&rel.lhs)? == self.combination(&rel.rhs)?;
            report.record(ok, || format!("{} fails as a matrix identity", rel.name));
        }
        Ok(report)
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn mod_pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, a);
        }
        a = mod_mul(a, a);
        e >>= 1;
    }
    acc
}

fn to_mod(q: &BigRational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let reduce = |x: &BigInt| -> u64 {
        let m = ((x % &p) + &p) % &p;
        u64::try_from(m).expect("reduced below the prime")
    };
    let den = reduce(q.denom());
    if den == 0 {
        return None;
    }
    Some(mod_mul(reduce(q.numer()), mod_pow(den, PRIME - 2)))
}

/// Rank of a list of sparse vectors over a field, by sparse elimination.
/// `reduce` eliminates the pivot entry of `v` using pivot row `p`.
fn sparse_rank<T: Clone>(
    vectors: Vec<BTreeMap<u64, T>>,
    mut reduce: impl FnMut(&mut BTreeMap<u64, T>, &BTreeMap<u64, T>, u64),
) -> usize {
    let mut pivots: HashMap<u64, BTreeMap<u64, T>> = HashMap::new();
    for mut v in vectors {
        while let Some((&lead, _)) = v.iter().next() {
            match pivots.get(&lead) {
                Some(p) => reduce(&mut v, p, lead),
                None => {
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Exact rank of the span of the given matrices, viewed as vectors.
///
/// A rank computation modulo the prime `2^61 - 1` gives a lower bound; when
/// it already equals the number of matrices it is exact. Otherwise the rank
/// is recomputed over the rationals.
pub fn span_rank(mats: &[RepMatrix]) -> usize {
    fn flatten(m: &RepMatrix) -> Vec<(u64, &BigRational)> {
        m.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| ((i * m.dim) as u64 + *j as u64, v)))
            .collect()
    }
    let modular: Option<Vec<BTreeMap<u64, u64>>> = mats
        .iter()
        .map(|m| flatten(m).into_iter().map(|(k, v)| to_mod(v).map(|x| (k, x))).collect())
        .collect();
    if let Some(vs) = modular {
        let vs = vs
            .into_iter()
            .map(|mut v| {
                v.retain(|_, x| *x != 0);
                v
            })
            .collect();
        let rank = sparse_rank(vs, |v, p, lead| {
            let f = mod_mul(v[&lead], mod_pow(p[&lead], PRIME - 2));
            for (k, x) in p {
                let e = v.entry(*k).or_insert(0);
                *e = (*e + PRIME - mod_mul(f, *x)) % PRIME;
                if *e == 0 {
                    v.remove(k);
                }
            }
        });
        if rank == mats.len() {
            return rank;
        }
    }
    let vs = mats
        .iter()
        .map(|m| flatten(m).into_iter().map(|(k, v)| (k, v.clone())).collect())
        .collect();
    sparse_rank(vs, |v: &mut BTreeMap<u64, BigRational>, p, lead| {
        let f = &v[&lead] / &p[&lead];
        for (k, x) in p {
            let e = v.entry(*k).or_insert_with(BigRational::zero);
            *e -= &f * x;
            if e.is_zero() {
                v.remove(k);
            }
        }
    })
}

/// Largest absolute entry, for diagnostics.
pub fn max_abs_entry(m: &RepMatrix) -> BigRational {
    m.rows
        .iter()
        .flatten()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::{defining_relations, BcAlgebra};

    #[test]
    fn e1_on_adjacent_factors() {
        let sp = TensorSpace::new(1, 1, 1).unwrap();
        // v_1 ⊗ v̄_1 -> v_1 ⊗ v̄_1 + v_{-1} ⊗ v̄_{-1}.
        let img = sp.apply_gen(0, Gen::E).unwrap();
        assert_eq!(img, vec![(0, 1), (3, 1)]);
        // v_{-1} ⊗ v̄_{-1} picks up the sign of an odd vector.
        let img = sp.apply_gen(3, Gen::E).unwrap();
        assert_eq!(img, vec![(0, -1), (3, -1)]);
    }

    #[test]
    fn defining_relations_hold_as_matrices() {
        for (r, t) in [(1, 1), (2, 1)] {
            let sp = TensorSpace::new(r + t, r, t).unwrap();
            let report = sp.check_relations(&defining_relations(r, t)).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn representation_is_multiplicative_on_bc_1_1() {
        let a = BcAlgebra::new(1, 1).unwrap();
        let sp = TensorSpace::new(2, 1, 1).unwrap();
        let mats: Vec<_> = a.basis().iter().map(|m| sp.monomial(m).unwrap()).collect();
        for (i, x) in a.basis().iter().enumerate() {
            for (j, y) in a.basis().iter().enumerate() {
                let prod = &BcElement::from_monomial(x.clone()) * &BcElement::from_monomial(y.clone());
                assert_eq!(sp.element(&prod).unwrap(), mats[i].then(&mats[j]), "{x} * {y}");
            }
        }
        assert_eq!(span_rank(&mats), 8);
    }
}

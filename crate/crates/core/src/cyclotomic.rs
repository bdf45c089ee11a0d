//! Cyclotomic quotients `BC_{ℓ,r,t}` of `BC^aff_{r,t}` by `f(x_1)` and
//! `g(x̄_1)`, with `f(x) = x^k ∏_i (x² - u_i²)` of degree `ℓ = k + 2m`.
//!
//! A [`CycloSpec`] fixes `k`, the squares `u_i²` and rational values for the
//! parameters `ω_a`; the values below `ℓ` are free seeds and the rest follow
//! from the admissibility recursion. `g` is always derived from `f` and the
//! parameters through `e_1 f(x_1) = (-1)^k e_1 g(x̄_1)`.
//!
//! Reduction rewrites `x_i^ℓ` as `x_i^ℓ - f(x'_i)` and `x̄_j^ℓ` as
//! `x̄_j^ℓ - g(x̄'_j)`. Both differences have degree below `ℓ`, so repeated
//! rewriting ends with every exponent in `0..ℓ`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affine::{omega_bar_expansion, AffElement, AffineAlgebra, Letter, RegularMonomial, DEFAULT_FUEL};
use crate::error::{Error, Result};
use crate::relation::RelationReport;
use crate::scalar::{rat, Scalar};

/// Number of parameter values `ω_0, ω_1, ...` kept by a [`Cyclotomic`]
/// algebra for specialisation.
pub const OMEGA_COUNT: usize = 96;

/// Upper bound on rewriting steps in one reduction.
const MAX_STEPS: usize = 1 << 22;

/// Data of a cyclotomic quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloSpec {
    k: u32,
    u2: Vec<BigRational>,
    /// User-supplied parameter values, by index.
    omegas: BTreeMap<u32, BigRational>,
    /// Optional user-supplied `g`, ascending coefficients.
    g: Option<Vec<BigRational>>,
}

/// Outcome of the admissibility recursion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorsionReport {
    /// `b_{ℓ'} = Σ_i a_i ω_{ℓ'-i}` for every checked `ℓ'`.
    pub b: Vec<(u32, BigRational)>,
    /// Nonzero even-indexed parameters.
    pub even: Vec<(u32, BigRational)>,
}

impl TorsionReport {
    /// The nonzero `b_{ℓ'}`.
    pub fn witnesses(&self) -> impl Iterator<Item = &(u32, BigRational)> {
        self.b.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn passed(&self) -> bool {
        self.even.is_empty() && self.witnesses().next().is_none()
    }
}

/// The polynomial `g`, with the shape data `g(x) = x^{k1} ∏_{j ≤ m1} (x² - ū_j²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPolynomial {
    /// Ascending coefficients `g_0, ..., g_ℓ`; `g_ℓ = 1`.
    pub coeffs: Vec<BigRational>,
    pub k1: u32,
    pub m1: u32,
}

impl fmt::Display for GPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "xb")
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[BigRational], var: &str) -> fmt::Result {
    let mut first = true;
    for (d, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        first = false;
        let mono = match d {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{d}"),
        };
        if mono.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{mono}")?;
        } else {
            write!(f, "{abs}*{mono}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn parse_rational(v: &str, key: &str) -> Result<BigRational> {
    Scalar::parse(v.trim())?
        .as_rational()
        .ok_or_else(|| Error::InvalidSpec(format!("{key} must be a rational number, got '{v}'")))
}

impl CycloSpec {
    pub fn new(k: u32, u2: Vec<BigRational>, omegas: BTreeMap<u32, BigRational>) -> Result<Self> {
        if u2.iter().any(Zero::is_zero) {
            return Err(Error::InvalidSpec("every u_i^2 must be nonzero".into()));
        }
        let spec = CycloSpec { k, u2, omegas, g: None };
        if spec.level() == 0 {
            return Err(Error::InvalidSpec("the level k + 2m must be positive".into()));
        }
        for i in (1..spec.level()).step_by(2) {
            if !spec.omegas.contains_key(&i) {
                return Err(Error::InvalidSpec(format!("missing seed value w{i}")));
            }
        }
        Ok(spec)
    }

    /// `f = x² - 6` with `ω_1 = -6`: the level-two parameters of the mixed
    /// tensor space for `q(n)` with `p = 2`, `n = 2`.
    pub fn level_two_default() -> Self {
        CycloSpec::new(0, vec![rat(6)], BTreeMap::from([(1, rat(-6))])).expect("valid default")
    }

    /// Parse `key=value` lines: `k=<n>`, `u2=<q>[,<q>...]` (repeatable),
    /// `w<i>=<q>`, and optionally `g=<g_0>,...,<g_ℓ>` to be checked against
    /// the derived `g`. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut k = 0;
        let mut u2 = Vec::new();
        let mut omegas = BTreeMap::new();
        let mut g = None;
        let mut offset = 0;
        for line in text.lines() {
            let start = offset;
            offset += line.len() + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(start, format!("expected key=value, got '{line}'")))?;
            let key = key.trim();
            match key {
                "k" => {
                    k = value
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(start, format!("k must be a nonnegative integer, got '{value}'")))?;
                }
                "u2" => {
                    for v in value.split(',') {
                        u2.push(parse_rational(v, "u2")?);
                    }
                }
                "g" => {
                    g = Some(
                        value
                            .split(',')
                            .map(|v| parse_rational(v, "g"))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                _ => {
                    let index = key
                        .strip_prefix('w')
                        .and_then(|i| i.parse::<u32>().ok())
                        .ok_or_else(|| Error::parse(start, format!("unknown key '{key}'")))?;
                    omegas.insert(index, parse_rational(value, key)?);
                }
            }
        }
        let mut spec = CycloSpec::new(k, u2, omegas)?;
        spec.g = g;
        Ok(spec)
    }

    /// The `key=value` form read by [`CycloSpec::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("k={}\n", self.k);
        for u in &self.u2 {
            out.push_str(&format!("u2={u}\n"));
        }
        for (i, w) in &self.omegas {
            out.push_str(&format!("w{i}={w}\n"));
        }
        if let Some(g) = &self.g {
            let parts: Vec<String> = g.iter().map(ToString::to_string).collect();
            out.push_str(&format!("g={}\n", parts.join(",")));
        }
        out
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn u2(&self) -> &[BigRational] {
        &self.u2
    }

    /// `ℓ = k + 2m`.
    pub fn level(&self) -> u32 {
        self.k + 2 * self.u2.len() as u32
    }

    /// Ascending coefficients `f_0, ..., f_ℓ` of `f`.
    pub fn f(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.k as usize];
        out.push(BigRational::one());
        for u in &self.u2 {
            let mut next = vec![BigRational::zero(); out.len() + 2];
            for (d, c) in out.iter().enumerate() {
                next[d + 2] += c;
                next[d] -= c * u;
            }
            out = next;
        }
        out
    }

    /// `a_0 = 1, a_1, ..., a_{2m}`: the coefficients of `∏ (x² - u_i²)` from
    /// the top, so that `f(x) = Σ_i a_i x^{ℓ-i}`.
    pub fn a(&self) -> Vec<BigRational> {
        let f = self.f();
        (0..=2 * self.u2.len()).map(|i| f[f.len() - 1 - i].clone()).collect()
    }

    /// `ω_0, ..., ω_{count-1}` from the seeds below `ℓ` and the recursion
    /// `ω_{ℓ'} = -Σ_{i ≥ 1} a_i ω_{ℓ'-i}` above; supplied values at or above
    /// `ℓ` are ignored.
    pub fn admissible_stream(&self, count: usize) -> Vec<BigRational> {
        self.stream(count, false)
    }

    /// Like [`CycloSpec::admissible_stream`], but supplied values take
    /// precedence everywhere.
    pub fn omega_values(&self, count: usize) -> Vec<BigRational> {
        self.stream(count, true)
    }

    fn stream(&self, count: usize, overrides: bool) -> Vec<BigRational> {
        let ell = self.level() as usize;
        let a = self.a();
        let mut w: Vec<BigRational> = Vec::with_capacity(count);
        for n in 0..count {
            let given = self.omegas.get(&(n as u32)).filter(|_| overrides || n < ell);
            let v = match given {
                Some(v) => v.clone(),
                None if n < ell => BigRational::zero(),
                None => {
                    let mut acc = BigRational::zero();
                    for (i, ai) in a.iter().enumerate().skip(1) {
                        acc -= ai * &w[n - i];
                    }
                    acc
                }
            };
            w.push(v);
        }
        w
    }

    /// `b_{ℓ'}` for `ℓ ≤ ℓ' ≤ upto`, computed from the supplied values.
    pub fn torsion_check(&self, upto: u32) -> TorsionReport {
        let w = self.omega_values(upto as usize + 1);
        let a = self.a();
        let ell = self.level();
        let b = (ell..=upto)
            .map(|l| {
                let mut acc = BigRational::zero();
                for (i, ai) in a.iter().enumerate() {
                    acc += ai * &w[l as usize - i];
                }
                (l, acc)
            })
            .collect();
        let even = self
            .omegas
            .iter()
            .filter(|(i, v)| *i % 2 == 0 && !v.is_zero())
            .map(|(i, v)| (*i, v.clone()))
            .collect();
        TorsionReport { b, even }
    }

    /// Depth to which [`CycloSpec::check_admissible`] runs the recursion:
    /// past every supplied value and two full periods beyond `ℓ`.
    pub fn check_depth(&self) -> u32 {
        let top = self.omegas.keys().max().copied().unwrap_or(0);
        top.max(self.level()) + 2 * self.level() + 2
    }

    /// Reject even parameters and nonzero `b_{ℓ'}`.
    pub fn check_admissible(&self) -> Result<()> {
        let report = self.torsion_check(self.check_depth());
        if let Some((i, v)) = report.even.first() {
            return Err(Error::InvalidSpec(format!("w{i} must be zero, got {v}")));
        }
        if let Some((index, v)) = report.witnesses().next() {
            return Err(Error::NonAdmissible {
                index: *index,
                witness: v.to_string(),
            });
        }
        Ok(())
    }

    /// Solve `e_1 f(x_1) = (-1)^k e_1 g(x̄_1)` for monic `g` of degree `ℓ`,
    /// using `e_1 x̄_1^n = Σ_j a_{n,j} e_1 x_1^j`.
    pub fn derive_g(&self) -> Result<GPolynomial> {
        let ell = self.level() as usize;
        let w = self.omega_values(ell + 1);
        let value = |i: u32| w.get(i as usize).cloned();
        let expansion: Vec<Vec<BigRational>> = (0..=ell as u32)
            .map(|n| omega_bar_expansion(n).iter().map(|c| c.eval(&value)).collect())
            .collect::<Result<_>>()?;
        let f = self.f();
        let sign = if self.k.is_multiple_of(2) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let mut g = vec![BigRational::zero(); ell + 1];
        for j in (0..=ell).rev() {
            let mut rhs = &sign * &f[j];
            for (n, gn) in g.iter().enumerate().skip(j + 1) {
                rhs -= gn * &expansion[n][j];
            }
            g[j] = rhs / &expansion[j][j];
        }
        if !g[ell].is_one() {
            return Err(Error::Inconsistent(format!(
                "derived g has leading coefficient {}",
                g[ell]
            )));
        }
        if let Some((d, _)) = g.iter().enumerate().find(|(d, c)| (ell - d) % 2 == 1 && !c.is_zero()) {
            return Err(Error::InvalidSpec(format!(
                "derived g has a term of degree {d}, so it is not of the form x^k1 * prod(x^2 - v^2)"
            )));
        }
        let k1 = g.iter().position(|c| !c.is_zero()).expect("g is monic") as u32;
        let m1 = (ell as u32 - k1) / 2;
        if let Some(given) = &self.g {
            if *given != g {
                return Err(Error::InvalidSpec(format!(
                    "supplied g does not match the derived g = {}",
                    GPolynomial { coeffs: g, k1, m1 }
                )));
            }
        }
        Ok(GPolynomial { coeffs: g, k1, m1 })
    }
}

impl fmt::Display for CycloSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f = ")?;
        write_poly(f, &self.f(), "x")?;
        for (i, w) in &self.omegas {
            write!(f, ", w{i} = {w}")?;
        }
        Ok(())
    }
}

/// Order in which [`Cyclotomic::reduce_with`] removes high exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Rewrite `x_i^ℓ` (lowest `i` first) before `x̄_j^ℓ`.
    XFirst,
    /// Rewrite `x̄_j^ℓ` (highest `j` first) before `x_i^ℓ`.
    XbarFirst,
}

/// `BC_{ℓ,r,t}` over the rationals: affine arithmetic followed by reduction.
pub struct Cyclotomic {
    spec: CycloSpec,
    ell: u32,
    aff: AffineAlgebra,
    omega: Vec<BigRational>,
    g: GPolynomial,
    /// `x_i^ℓ - f(x'_i)`, specialised.
    rx: Vec<AffElement>,
    /// `x̄_j^ℓ - g(x̄'_j)`, specialised.
    rxb: Vec<AffElement>,
}

impl Cyclotomic {
    pub fn new(r: usize, t: usize, spec: CycloSpec) -> Result<Self> {
        Cyclotomic::with_fuel(r, t, spec, DEFAULT_FUEL)
    }

    pub fn with_fuel(r: usize, t: usize, spec: CycloSpec, fuel: usize) -> Result<Self> {
        spec.check_admissible()?;
        let g = spec.derive_g()?;
        let aff = AffineAlgebra::with_fuel(r, t, fuel)?;
        let ell = spec.level();
        let omega = spec.omega_values(OMEGA_COUNT);
        let mut c = Cyclotomic {
            ell,
            aff,
            omega,
            g,
            rx: Vec::new(),
            rxb: Vec::new(),
            spec,
        };
        let f = c.spec.f();
        for i in 1..=r {
            let top = c.aff.word(&vec![Letter::X(i); ell as usize])?;
            let poly = c.poly(&f, Letter::Xp(i))?;
            c.rx.push(c.specialize(&(&top - &poly))?);
        }
        let gc = c.g.coeffs.clone();
        for j in 1..=t {
            let top = c.aff.word(&vec![Letter::Xb(j); ell as usize])?;
            let poly = c.poly(&gc, Letter::Xbp(j))?;
            c.rxb.push(c.specialize(&(&top - &poly))?);
        }
        Ok(c)
    }

    fn poly(&self, coeffs: &[BigRational], l: Letter) -> Result<AffElement> {
        let terms: Vec<(Scalar, Vec<Letter>)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (Scalar::from_rational(c.clone()), vec![l; d]))
            .collect();
        self.aff.combination(&terms)
    }

    pub fn spec(&self) -> &CycloSpec {
        &self.spec
    }

    pub fn level(&self) -> u32 {
        self.ell
    }

    pub fn g(&self) -> &GPolynomial {
        &self.g
    }

    pub fn affine(&self) -> &AffineAlgebra {
        &self.aff
    }

    pub fn r(&self) -> usize {
        self.aff.r()
    }

    pub fn t(&self) -> usize {
        self.aff.t()
    }

    /// Replace the parameters by their values.
    pub fn specialize(&self, x: &AffElement) -> Result<AffElement> {
        let mut out = AffElement::zero(x.r(), x.t());
        let value = |i: u32| self.omega.get(i as usize).cloned();
        for (m, c) in x.terms() {
            out.add_term(m.clone(), Scalar::from_rational(c.eval(&value)?));
        }
        Ok(out)
    }

    pub fn is_reduced_monomial(&self, m: &RegularMonomial) -> bool {
        m.gamma.iter().chain(&m.delta).all(|&e| e < self.ell)
    }

    /// Every exponent lies in `0..ℓ` and every coefficient is rational.
    pub fn is_reduced(&self, x: &AffElement) -> bool {
        x.terms().all(|(m, c)| self.is_reduced_monomial(m) && c.is_constant())
    }

    pub fn reduce(&self, x: &AffElement) -> Result<AffElement> {
        self.reduce_with(x, ReductionOrder::XFirst)
    }

    pub fn reduce_with(&self, x: &AffElement, order: ReductionOrder) -> Result<AffElement> {
        let (r, t) = (self.r(), self.t());
        let mut pending: BTreeMap<RegularMonomial, Scalar> = self
            .specialize(x)?
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut done = AffElement::zero(r, t);
        let mut steps = 0;
        while let Some((m, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            if self.is_reduced_monomial(&m) {
                done.add_term(m, c);
                continue;
            }
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::FuelExhausted(MAX_STEPS));
            }
            for (n, d) in self.step(&m, order)?.terms() {
                let slot = pending.entry(n.clone()).or_insert_with(Scalar::zero);
                *slot += &(&c * d);
            }
        }
        Ok(done)
    }

    /// One rewrite of a monomial with an exponent of at least `ℓ`.
    fn step(&self, m: &RegularMonomial, order: ReductionOrder) -> Result<AffElement> {
        let ell = self.ell;
        let xi = m.gamma.iter().position(|&e| e >= ell);
        let xj = m.delta.iter().rposition(|&e| e >= ell);
        let use_x = match order {
            ReductionOrder::XFirst => xi.is_some(),
            ReductionOrder::XbarFirst => xj.is_none(),
        };
        let out = if use_x {
            let i = xi.expect("some exponent is too large");
            let mut rest = m.gamma.clone();
            rest[i] -= ell;
            let tail = AffElement::from_monomial(RegularMonomial {
                gamma: vec![0; m.r()],
                bc: m.bc.clone(),
                delta: m.delta.clone(),
            });
            self.aff.mul(&self.rx[i], &tail)?.shifted(&rest)
        } else {
            let j = xj.expect("some exponent is too large");
            let mut head = m.clone();
            head.delta[j] -= ell;
            self.aff.mul(&AffElement::from_monomial(head), &self.rxb[j])?
        };
        self.specialize(&out)
    }

    /// Product in the quotient.
    pub fn mul(&self, a: &AffElement, b: &AffElement) -> Result<AffElement> {
        self.reduce(&self.aff.mul(a, b)?)
    }

    /// Parse with the affine syntax and reduce.
    pub fn parse(&self, s: &str) -> Result<AffElement> {
        self.reduce(&self.aff.parse(s)?)
    }

    /// Regular monomials with every exponent in `0..ℓ`, sorted.
    pub fn basis(&self) -> Vec<RegularMonomial> {
        let (r, t) = (self.r(), self.t());
        let ell = self.ell;
        let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..r + t {
            exps = exps
                .into_iter()
                .flat_map(|v| {
                    (0..ell).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        let mut out = Vec::new();
        for e in &exps {
            for b in self.aff.bc().basis() {
                out.push(RegularMonomial {
                    gamma: e[..r].to_vec(),
                    bc: b.clone(),
                    delta: e[r..].to_vec(),
                });
            }
        }
        out.sort();
        out
    }

    fn random_reduced<R: Rng>(&self, rng: &mut R) -> RegularMonomial {
        let mut m = self.aff.random_monomial(rng, 0);
        for e in m.gamma.iter_mut().chain(m.delta.iter_mut()) {
            *e = rng.gen_range(0..self.ell);
        }
        m
    }

    /// Products of basis monomials reduce to combinations of basis monomials:
    /// all pairs when `samples` is `None`, otherwise that many seeded pairs.
    pub fn closure_check(&self, samples: Option<usize>, seed: u64) -> Result<RelationReport> {
        let basis = self.basis();
        let pairs: Vec<(&RegularMonomial, &RegularMonomial)> = match samples {
            None => basis.iter().flat_map(|a| basis.iter().map(move |b| (a, b))).collect(),
            Some(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n)
                    .map(|_| {
                        let a = basis.choose(&mut rng).expect("basis is never empty");
                        let b = basis.choose(&mut rng).expect("basis is never empty");
                        (a, b)
                    })
                    .collect()
            }
        };
        let mut report = RelationReport {
            relations: 1,
            ..Default::default()
        };
        for (a, b) in pairs {
            let p = self.mul(
                &AffElement::from_monomial(a.clone()),
                &AffElement::from_monomial(b.clone()),
            )?;
            report.record(self.is_reduced(&p), || {
                format!("({}) ({}) leaves the reduced span", a.word_display(), b.word_display())
            });
        }
        Ok(report)
    }

    /// Defining relations of the affine algebra on seeded reduced monomials,
    /// both sides reduced.
    pub fn relation_check(&self, samples: usize, kmax: u32, seed: u64) -> Result<RelationReport> {
        let rels = self.aff.relations(kmax);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = RelationReport {
            relations: rels.len(),
            ..Default::default()
        };
        for _ in 0..samples {
            let m = self.random_reduced(&mut rng);
            let x = AffElement::from_monomial(m.clone());
            for rel in &rels {
                let lhs = self.reduce(&self.aff.act_combination(&x, &rel.lhs)?)?;
                let rhs = self.reduce(&self.aff.act_combination(&x, &rel.rhs)?)?;
                report.record(lhs == rhs, || format!("{} fails on {}", rel.name, m.word_display()));
            }
        }
        Ok(report)
    }

    /// `(ab)c = a(bc)` in the quotient on seeded reduced monomials.
    pub fn associativity(&self, samples: usize, seed: u64) -> Result<RelationReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = RelationReport {
            relations: 1,
            ..Default::default()
        };
        for _ in 0..samples {
            let m: Vec<RegularMonomial> = (0..3).map(|_| self.random_reduced(&mut rng)).collect();
            let [a, b, c] = [0, 1, 2].map(|i| AffElement::from_monomial(m[i].clone()));
            let left = self.mul(&self.mul(&a, &b)?, &c)?;
            let right = self.mul(&a, &self.mul(&b, &c)?)?;
            report.record(left == right, || {
                format!(
                    "({}) ({}) ({}) is not associative",
                    m[0].word_display(),
                    m[1].word_display(),
                    m[2].word_display()
                )
            });
        }
        Ok(report)
    }

    /// Both reduction orders agree on seeded affine monomials of degree at
    /// most `max_degree`.
    pub fn confluence_check(&self, samples: usize, max_degree: u32, seed: u64) -> Result<RelationReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = RelationReport {
            relations: 1,
            ..Default::default()
        };
        for _ in 0..samples {
            let m = self.aff.random_monomial(&mut rng, max_degree);
            let x = AffElement::from_monomial(m.clone());
            let a = self.reduce_with(&x, ReductionOrder::XFirst)?;
            let b = self.reduce_with(&x, ReductionOrder::XbarFirst)?;
            report.record(a == b, || format!("reduction orders disagree on {}", m.word_display()));
        }
        Ok(report)
    }
}

/// `2^{r+t} ℓ^{r+t} (r+t)!`.
pub fn rank_formula(ell: u32, r: usize, t: usize) -> u128 {
    let n = (r + t) as u32;
    let fact: u128 = (1..=n as u128).product();
    2u128.pow(n) * (ell as u128).pow(n) * fact
}

/// The bubble parameters `δ_k`, `δ̄_k` (indexed from 1) of the parameters
/// `ω_1, ω_2, ...`: `δ̄_k = (-1)^k ω_k` and
/// `δ_k = δ̄_k + Σ_{0<i<k/2} δ_{2i-1} δ̄_{k-2i}`.
pub fn omega_to_delta(omega: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let dbar: Vec<Scalar> = omega
        .iter()
        .enumerate()
        .map(|(i, w)| if (i + 1) % 2 == 0 { w.clone() } else { -w })
        .collect();
    let mut delta: Vec<Scalar> = Vec::with_capacity(omega.len());
    for k in 1..=omega.len() {
        let mut v = dbar[k - 1].clone();
        for i in (1..).take_while(|i| 2 * i < k) {
            v += &(&delta[2 * i - 2] * &dbar[k - 2 * i - 1]);
        }
        delta.push(v);
    }
    (delta, dbar)
}

/// Inverse of [`omega_to_delta`]: recover `ω_k` from `δ_1, δ_2, ...`.
pub fn delta_to_omega(delta: &[Scalar]) -> Vec<Scalar> {
    let mut dbar: Vec<Scalar> = Vec::with_capacity(delta.len());
    for k in 1..=delta.len() {
        let mut v = delta[k - 1].clone();
        for i in (1..).take_while(|i| 2 * i < k) {
            v -= &(&delta[2 * i - 2] * &dbar[k - 2 * i - 1]);
        }
        dbar.push(v);
    }
    dbar.iter()
        .enumerate()
        .map(|(i, d)| if (i + 1) % 2 == 0 { d.clone() } else { -d })
        .collect()
}

/// Coefficients of `u^{-1}, ..., u^{-order}` in
/// `(1 + s Σ_{i≥1} δ_{i-1} u^{-i}) (1 - s Σ_{j≥1} δ̄_{j-1} u^{-j}) - 1`
/// with `δ_0 = δ̄_0 = 0` and `s = ±1`. With `s = 1` this vanishes exactly
/// when `δ_k - δ̄_k = Σ_{a+b=k-1} δ_a δ̄_b`; `s = -1` gives the product
/// `(1 - Σ δ u^{-i}) (1 + Σ δ̄ u^{-j})`.
pub fn generating_function_defect(delta: &[Scalar], dbar: &[Scalar], order: usize, s: i64) -> Vec<Scalar> {
    let coeff = |v: &[Scalar], n: usize| -> Scalar {
        if n >= 2 && n - 2 < v.len() {
            v[n - 2].clone()
        } else {
            Scalar::zero()
        }
    };
    let s = Scalar::from_int(s);
    (1..=order)
        .map(|n| {
            let mut c = &(&coeff(delta, n) - &coeff(dbar, n)) * &s;
            for i in 1..n {
                c -= &(&coeff(delta, i) * &coeff(dbar, n - i));
            }
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_and_stream_for_level_two() {
        let spec = CycloSpec::level_two_default();
        assert_eq!(spec.f(), vec![rat(-6), rat(0), rat(1)]);
        let w = spec.admissible_stream(8);
        assert_eq!(
            w,
            vec![rat(0), rat(-6), rat(0), rat(-36), rat(0), rat(-216), rat(0), rat(-1296)]
        );
        assert!(spec.torsion_check(20).passed());
    }

    #[test]
    fn g_for_quadratic_f() {
        // g_0 = -u^2 - w1.
        let spec = CycloSpec::new(0, vec![rat(6)], BTreeMap::from([(1, rat(4))])).unwrap();
        let g = spec.derive_g().unwrap();
        assert_eq!(g.coeffs, vec![rat(-10), rat(0), rat(1)]);
        assert_eq!((g.k1, g.m1), (0, 1));
    }

    #[test]
    fn g_for_linear_f() {
        let spec = CycloSpec::new(1, vec![], BTreeMap::new()).unwrap();
        assert_eq!(spec.derive_g().unwrap().coeffs, vec![rat(0), rat(1)]);
    }

    #[test]
    fn perturbed_w3_has_b3_witness() {
        let spec = CycloSpec::new(0, vec![rat(6)], BTreeMap::from([(1, rat(-6)), (3, rat(-35))])).unwrap();
        let rep = spec.torsion_check(10);
        let first = rep.witnesses().next().unwrap().clone();
        assert_eq!(first, (3, rat(1)));
        assert_eq!(
            spec.check_admissible(),
            Err(Error::NonAdmissible {
                index: 3,
                witness: "1".into()
            })
        );
    }

    #[test]
    fn nonzero_even_parameter_is_rejected() {
        let spec = CycloSpec::new(0, vec![rat(6)], BTreeMap::from([(1, rat(-6)), (2, rat(1))])).unwrap();
        assert!(matches!(spec.check_admissible(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn spec_text_round_trip() {
        let text = "# level two\nk=0\nu2=6\nw1=-6\n";
        let spec = CycloSpec::parse(text).unwrap();
        assert_eq!(spec, CycloSpec::level_two_default());
        assert_eq!(CycloSpec::parse(&spec.to_text()).unwrap(), spec);
        assert!(CycloSpec::parse("k=0\nu2=6\n").is_err());
        assert!(matches!(CycloSpec::parse("k=0\nq=1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rank_formula_values() {
        assert_eq!(rank_formula(2, 1, 1), 32);
        assert_eq!(rank_formula(2, 2, 1), 384);
        assert_eq!(rank_formula(1, 1, 1), 8);
    }

    #[test]
    fn delta_low_orders() {
        let w: Vec<Scalar> = (1..=4).map(Scalar::omega).collect();
        let (d, db) = omega_to_delta(&w);
        assert_eq!(db[0], -Scalar::omega(1));
        assert_eq!(d[0], db[0]);
        assert_eq!(d[2], &db[2] + &(&d[0] * &db[0]));
        assert_eq!(delta_to_omega(&d), w);
    }
}

//! Self-checks: defining relations of `BC_{r,t}` on the whole basis, seeded
//! associativity, the identities satisfied by `y_i`, `ȳ_i` and `ω_{a,k}`,
//! agreement with the tensor space representation, and the corresponding
//! checks for `BC^aff_{r,t}` and the maps `Φ_k`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::affine::{omega_bar, omega_bar_expansion, AffElement, AffineAlgebra, Letter, Phi, RegularMonomial};
use crate::bc::{elements as el, BcAlgebra, BcElement, BcMonomial, Gen};
use crate::error::Result;
use crate::oracle::{span_rank, TensorSpace};
use crate::relation::RelationReport;
use crate::scalar::Scalar;

/// Every defining relation, as a right operator on every basis monomial.
pub fn relation_closure(alg: &BcAlgebra) -> Result<RelationReport> {
    alg.check_relations(&alg.relations(), alg.basis())
}

fn random_monomials(alg: &BcAlgebra, rng: &mut ChaCha8Rng, k: usize) -> Vec<BcMonomial> {
    (0..k)
        .map(|_| alg.basis().choose(rng).expect("basis is never empty").clone())
        .collect()
}

/// `(ab)c = a(bc)` on `samples` seeded triples of basis monomials.
pub fn associativity(alg: &BcAlgebra, samples: usize, seed: u64) -> Result<RelationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RelationReport {
        relations: 1,
        ..Default::default()
    };
    for _ in 0..samples {
        let m = random_monomials(alg, &mut rng, 3);
        let [a, b, c] = [0, 1, 2].map(|i| BcElement::from_monomial(m[i].clone()));
        let left = a.try_mul(&b)?.try_mul(&c)?;
        let right = a.try_mul(&b.try_mul(&c)?)?;
        report.record(left == right, || {
            format!("({}) ({}) ({}) is not associative", m[0], m[1], m[2])
        });
    }
    Ok(report)
}

struct Suite {
    report: RelationReport,
}

impl Suite {
    fn eq(&mut self, name: String, lhs: &BcElement, rhs: &BcElement) {
        self.report.relations += 1;
        self.report.record(lhs == rhs, || format!("{name}: {lhs} != {rhs}"));
    }

    fn commute(&mut self, name: String, a: &BcElement, b: &BcElement) {
        self.eq(name, &(a * b), &(b * a));
    }

    fn anticommute(&mut self, name: String, a: &BcElement, b: &BcElement) {
        self.eq(name, &(a * b), &-&(b * a));
    }

    fn zero(&mut self, name: String, x: &BcElement) {
        let z = BcElement::zero(x.r(), x.t());
        self.eq(name, x, &z);
    }
}

/// Identities satisfied by the elements `y_i`, `ȳ_i`, `ỹ_i` and `ω_{a,k}` in
/// `BC_{r,t}`, for every admissible index.
pub fn jm_suite(alg: &BcAlgebra) -> Result<RelationReport> {
    let (r, t) = (alg.r(), alg.t());
    let m = r.min(t);
    let g = |x: Gen| BcElement::gen(r, t, x);
    let y: Vec<BcElement> = (1..=r).map(|i| el::y(r, t, i)).collect::<Result<_>>()?;
    let yb: Vec<BcElement> = (1..=t).map(|i| el::ybar(r, t, i)).collect::<Result<_>>()?;
    let (y, yb) = (|i: usize| &y[i - 1], |i: usize| &yb[i - 1]);
    let e = |i: usize| el::e(r, t, i, i);
    let mut s = Suite {
        report: RelationReport::default(),
    };

    for i in 1..=r {
        for j in 1..r {
            if j + 1 != i && j != i {
                s.commute(format!("s{j} y{i} = y{i} s{j}"), &g(Gen::S(j))?, y(i));
            }
        }
        for j in 1..t {
            if j + 1 != i {
                s.commute(format!("sb{j} y{i} = y{i} sb{j}"), &g(Gen::Sb(j))?, y(i));
            }
        }
        s.anticommute(format!("y{i} c{i} = -c{i} y{i}"), y(i), &g(Gen::C(i))?);
        for j in (1..=r).filter(|&j| j != i) {
            s.commute(format!("y{i} c{j} = c{j} y{i}"), y(i), &g(Gen::C(j))?);
        }
        for j in i..=t {
            s.commute(format!("y{i} cb{j} = cb{j} y{i}"), y(i), &g(Gen::Cb(j))?);
        }
        if i < r {
            s.commute(format!("y{i} y{} = y{} y{i}", i + 1, i + 1), y(i), y(i + 1));
            s.commute(format!("y{i} yt{i} = yt{i} y{i}"), y(i), &el::ytilde(r, t, i)?);
        }
    }
    for i in 1..=t {
        for j in 1..t {
            if j + 1 != i && j != i {
                s.commute(format!("sb{j} yb{i} = yb{i} sb{j}"), &g(Gen::Sb(j))?, yb(i));
            }
        }
        for j in 1..r {
            if j + 1 != i {
                s.commute(format!("s{j} yb{i} = yb{i} s{j}"), &g(Gen::S(j))?, yb(i));
            }
        }
        s.anticommute(format!("yb{i} cb{i} = -cb{i} yb{i}"), yb(i), &g(Gen::Cb(i))?);
        for j in (1..=t).filter(|&j| j != i) {
            s.commute(format!("yb{i} cb{j} = cb{j} yb{i}"), yb(i), &g(Gen::Cb(j))?);
        }
        for j in i..=r {
            s.commute(format!("yb{i} c{j} = c{j} yb{i}"), yb(i), &g(Gen::C(j))?);
        }
        if i < t {
            s.commute(format!("yb{i} yb{} = yb{} yb{i}", i + 1, i + 1), yb(i), yb(i + 1));
            s.commute(format!("yb{i} ybt{i} = ybt{i} yb{i}"), yb(i), &el::ybartilde(r, t, i)?);
        }
    }

    for i in 1..=m {
        let ei = e(i)?;
        let shifted = &(&ei + yb(i)) - &el::ebar(r, t, i, i)?;
        s.commute(format!("y{i} (e{i} + yb{i} - ebar{i}) commute"), y(i), &shifted);
        let l = &el::jm_l(r, t, i)? - &el::jm_lbar(r, t, i)?;
        s.eq(format!("e{i} yb{i} = e{i} (L{i} - Lb{i})"), &(&ei * yb(i)), &(&ei * &l));
        s.eq(format!("e{i} y{i} = e{i} (Lb{i} - L{i})"), &(&ei * y(i)), &-&(&ei * &l));
        if i < r {
            let syx = &(&g(Gen::S(i))? * y(i)) * &g(Gen::S(i))?;
            s.commute(format!("e{i} commutes with s{i} y{i} s{i}"), &ei, &syx);
        }
        if i < t {
            let syx = &(&g(Gen::Sb(i))? * yb(i)) * &g(Gen::Sb(i))?;
            s.commute(format!("e{i} commutes with sb{i} yb{i} sb{i}"), &ei, &syx);
        }
        let ci = g(Gen::C(i))?;
        for k in 0..=4 {
            let x = &(&(&ei * &y(i).pow(k)?) * &ci) * &ei;
            s.zero(format!("e{i} y{i}^{k} c{i} e{i} = 0"), &x);
        }
        for k in [1, 2, 4] {
            s.zero(format!("e{i} y{i}^{k} e{i} = 0"), &(&(&ei * &y(i).pow(k)?) * &ei));
            s.zero(format!("e{i} yb{i}^{k} e{i} = 0"), &(&(&ei * &yb(i).pow(k)?) * &ei));
        }
        for a in [1, 2, 4] {
            s.zero(format!("omega({a},{i}) = 0"), &alg.omega(a, i)?);
            s.zero(format!("omegabar({a},{i}) = 0"), &alg.omega_bar(a, i)?);
        }
    }

    for k in 2..=m {
        for (name, w) in [("omega", alg.omega(3, k)?), ("omegabar", alg.omega_bar(3, k)?)] {
            let mut central_in: Vec<(String, BcElement)> = vec![("e1".into(), e(1)?)];
            for l in 1..k {
                central_in.push((format!("c{l}"), g(Gen::C(l))?));
                central_in.push((format!("cb{l}"), g(Gen::Cb(l))?));
            }
            for l in 1..k - 1 {
                central_in.push((format!("s{l}"), g(Gen::S(l))?));
                central_in.push((format!("sb{l}"), g(Gen::Sb(l))?));
            }
            central_in.push((format!("y{k}"), y(k).clone()));
            central_in.push((format!("yb{k}"), yb(k).clone()));
            for l in k..=r {
                central_in.push((format!("c{l}"), g(Gen::C(l))?));
            }
            for l in k..=t {
                central_in.push((format!("cb{l}"), g(Gen::Cb(l))?));
            }
            for (hname, h) in central_in {
                s.commute(format!("{name}(3,{k}) commutes with {hname}"), &w, &h);
            }
        }
    }
    Ok(s.report)
}

/// Result of comparing `BC_{r,t}` with its action on the mixed tensor space.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub n: usize,
    pub dim: usize,
    /// Defining relations as matrix identities.
    pub relations: RelationReport,
    /// `ρ(ab) = ρ(a) ρ(b)` on seeded pairs of basis monomials.
    pub products: RelationReport,
    /// Rank of the span of the images of all basis monomials.
    pub rank: usize,
    pub basis: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.relations.passed() && self.products.passed()
    }
}

/// Compare `BC_{r,t}` with the representation on `V^{⊗r} ⊗ (V^*)^{⊗t}`,
/// `V = C^{n|n}`.
pub fn oracle_check(alg: &BcAlgebra, n: usize, samples: usize, seed: u64) -> Result<OracleReport> {
    let space = TensorSpace::new(n, alg.r(), alg.t())?;
    let relations = space.check_relations(&alg.relations())?;
    let images: Vec<_> = alg.basis().iter().map(|m| space.monomial(m)).collect::<Result<_>>()?;
    let index = |m: &BcMonomial| alg.basis().binary_search(m).expect("basis monomial");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut products = RelationReport {
        relations: 1,
        ..Default::default()
    };
    for _ in 0..samples {
        let m = random_monomials(alg, &mut rng, 2);
        let lhs = images[index(&m[0])].then(&images[index(&m[1])]);
        let prod = BcElement::from_monomial(m[0].clone()).try_mul(&BcElement::from_monomial(m[1].clone()))?;
        let mut rhs = crate::oracle::RepMatrix::zero(space.dim());
        for (p, c) in prod.terms() {
            let q = c.as_rational().expect("BC products have rational coefficients");
            rhs = rhs.add_scaled(&images[index(p)], &q);
        }
        products.record(lhs == rhs, || {
            format!("rho({}) rho({}) != rho of the product", m[0], m[1])
        });
    }
    Ok(OracleReport {
        n,
        dim: space.dim(),
        relations,
        products,
        rank: span_rank(&images),
        basis: images.len(),
    })
}

/// Defining relations of `BC^aff_{r,t}` (parameter exponents up to
/// `2 * kmax + 2`) as right operators on seeded regular monomials of degree at
/// most `max_degree`.
pub fn affine_relation_check(
    alg: &AffineAlgebra,
    samples: usize,
    max_degree: u32,
    kmax: u32,
    seed: u64,
) -> Result<RelationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on: Vec<RegularMonomial> = (0..samples)
        .map(|_| alg.random_monomial(&mut rng, max_degree))
        .collect();
    alg.check_relations(&alg.relations(kmax), &on)
}

/// `(ab)c = a(bc)` on seeded triples of regular monomials of degree at most
/// `max_degree`.
pub fn affine_associativity(alg: &AffineAlgebra, samples: usize, max_degree: u32, seed: u64) -> Result<RelationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RelationReport {
        relations: 1,
        ..Default::default()
    };
    for _ in 0..samples {
        let m: Vec<RegularMonomial> = (0..3).map(|_| alg.random_monomial(&mut rng, max_degree)).collect();
        let [a, b, c] = [0, 1, 2].map(|i| AffElement::from_monomial(m[i].clone()));
        let left = alg.mul(&alg.mul(&a, &b)?, &c)?;
        let right = alg.mul(&a, &alg.mul(&b, &c)?)?;
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

/// Checks on `ω̄_n` for `n ≤ max_n` in `BC^aff_{r,t}`:
///
/// * `e_1 x̄_1^n e_1` reduced letter by letter equals `ω̄_n e_1`;
/// * `e_1 · (x̄_1^n e_1)`, with the inner product reduced first, agrees;
/// * `σ` fixes `e_1 x̄_1^n e_1`.
pub fn omega_bar_check(alg: &AffineAlgebra, max_n: u32) -> Result<RelationReport> {
    let mut report = RelationReport::default();
    let e1 = alg.word(&[Letter::E])?;
    for n in 1..=max_n {
        report.relations += 1;
        let mut w = vec![Letter::E];
        w.extend(std::iter::repeat_n(Letter::Xb(1), n as usize));
        w.push(Letter::E);
        let direct = alg.word(&w)?;
        let expected = e1.scale(&omega_bar(n));
        report.record(direct == expected, || {
            format!("e1 xb1^{n} e1 = {direct}, expected {expected}")
        });
        let inner = alg.word(&w[1..])?;
        let split = alg.mul(&e1, &inner)?;
        report.record(split == direct, || {
            format!("e1 (xb1^{n} e1) = {split} differs from {direct}")
        });
        report.record(alg.sigma(&direct)? == direct, || format!("sigma moves e1 xb1^{n} e1"));
        let coeffs = omega_bar_expansion(n);
        report.record(coeffs.len() == n as usize + 1, || {
            format!("expansion of order {n} has wrong length")
        });
    }
    Ok(report)
}

/// Result of checking `Φ_k` on `BC^aff_{r,t}`.
#[derive(Clone, Debug)]
pub struct PhiReport {
    pub k: usize,
    /// Defining relations map to identities in `BC_{r+k,t+k}`.
    pub relations: RelationReport,
    /// The image of `ω̄_n` (a polynomial in the `ω_a`) equals `ω̄_{n,k+1}`
    /// computed directly in `BC_{r+k,t+k}`, and `ω_3` maps to `ω_{3,k+1}`.
    pub parameters: RelationReport,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.relations.passed() && self.parameters.passed()
    }
}

pub fn phi_check(r: usize, t: usize, k: usize, kmax: u32) -> Result<PhiReport> {
    let phi = Phi::new(r, t, k)?;
    let relations = phi.check_relations(&crate::affine::affine_relations(r, t, kmax))?;
    let mut parameters = RelationReport::default();
    let target = phi.target();
    for n in 1..=2 * kmax + 1 {
        parameters.relations += 1;
        let img = phi.scalar(&omega_bar(n))?;
        let direct = target.omega_bar(n, k + 1)?;
        parameters.record(img == direct, || {
            format!("Phi_{k}(wb{n}) = {img}, direct value {direct}")
        });
    }
    parameters.relations += 1;
    let w3 = phi.scalar(&Scalar::omega(3))?;
    let direct = target.omega(3, k + 1)?;
    parameters.record(w3 == direct, || format!("Phi_{k}(w3) = {w3}, direct value {direct}"));
    Ok(PhiReport {
        k,
        relations,
        parameters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_algebras_pass_every_check() {
        let alg = BcAlgebra::new(2, 1).unwrap();
        assert!(relation_closure(&alg).unwrap().passed());
        assert!(associativity(&alg, 100, 1).unwrap().passed());
        let jm = jm_suite(&alg).unwrap();
        assert!(jm.passed(), "{jm}");
        let o = oracle_check(&alg, 3, 100, 2).unwrap();
        assert!(o.passed(), "{} / {}", o.relations, o.products);
        assert_eq!(o.rank, 48);
    }
}

//! The affine Hecke algebra with unequal parameters in the normal form
//! `Σ_w P_w U_w`, its extension by diagram automorphisms, and Levi subalgebras.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{IMatrix, LatticeAutomorphism, Monomial};
use crate::laurent::LaurentPoly;
use crate::params::ParameterSet;
use crate::report::{Check, Report};
use crate::root_datum::BasedRootDatum;
use crate::scalar::{ParamScalar, ScalarConfig};
use crate::weyl::{generate_group, DiagramAutomorphism, WeylGroup};

/// `H(Σ, {q_α}, {q_i})` on an enumerated Weyl group.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra {
    group: WeylGroup,
    params: ParameterSet,
    doubled: Vec<bool>,
    reflections: Vec<LatticeAutomorphism>,
    q_alpha: Vec<ParamScalar>,
    q_a: Vec<ParamScalar>,
    q_b: Vec<ParamScalar>,
}

/// `Σ_w P_w U_w`, keyed by the element index in the algebra's Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeckeElement {
    rank: usize,
    terms: BTreeMap<usize, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        HeckeElement { rank, terms: BTreeMap::new() }
    }

    pub fn term(w: usize, p: LaurentPoly) -> Self {
        let rank = p.rank();
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(w, p);
        }
        HeckeElement { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> {
        self.terms.iter().map(|(w, p)| (*w, p))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: usize) -> LaurentPoly {
        self.terms.get(&w).cloned().unwrap_or_else(|| LaurentPoly::zero(self.rank))
    }

    pub fn add_term(&mut self, w: usize, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&w) {
            Some(old) => old + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add_term(*w, p);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElement) -> HeckeElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HeckeElement {
        self.map(|p| -p)
    }

    pub fn scale(&self, c: &ParamScalar) -> HeckeElement {
        self.map(|p| p.scale(c))
    }

    /// `p · x` with `p` on the left.
    pub fn left_poly(&self, p: &LaurentPoly) -> HeckeElement {
        self.map(|x| p * x)
    }

    fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> HeckeElement {
        let mut out = HeckeElement::zero(self.rank);
        for (w, p) in &self.terms {
            let image = f(p);
            if !image.is_zero() {
                out.terms.insert(*w, image);
            }
        }
        out
    }
}

impl HeckeAlgebra {
    /// Builds the algebra, rejecting misplaced `b` and unequal parameters on conjugate simples.
    pub fn new(datum: &BasedRootDatum, params: ParameterSet, cap: usize) -> Result<Self> {
        params.check_placement(datum)?;
        params.check_conjugacy(datum)?;
        Self::new_unchecked(datum, params, cap)
    }

    /// Skips the conjugacy check; only for exercising the verifiers on broken input.
    pub fn new_unchecked(datum: &BasedRootDatum, params: ParameterSet, cap: usize) -> Result<Self> {
        params.check_placement(datum)?;
        let group = WeylGroup::new(datum, cap)?;
        let n = datum.num_simples();
        let doubled = (0..n).map(|i| datum.is_doubled_coroot(i)).collect::<Result<Vec<_>>>()?;
        let reflections = (0..n).map(|i| LatticeAutomorphism::new(datum.simple_reflection(i))).collect::<Result<Vec<_>>>()?;
        let q_alpha: Vec<ParamScalar> = (0..n).map(|i| params.q_alpha(i)).collect();
        let q_a: Vec<ParamScalar> = (0..n).map(|i| params.q_a(i)).collect();
        let q_b: Vec<ParamScalar> = (0..n).map(|i| params.q_b(i)).collect();
        for i in 0..n {
            debug_assert_eq!(&q_a[i] * &q_a[i], &q_alpha[i] * &params.q_i(i));
        }
        Ok(HeckeAlgebra { group, params, doubled, reflections, q_alpha, q_a, q_b })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        self.group.datum()
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn config(&self) -> ScalarConfig {
        self.params.config
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    pub fn num_simples(&self) -> usize {
        self.datum().num_simples()
    }

    pub fn q_alpha(&self, i: usize) -> &ParamScalar {
        &self.q_alpha[i]
    }

    pub fn is_doubled(&self, i: usize) -> bool {
        self.doubled[i]
    }

    pub fn reflection(&self, i: usize) -> &LatticeAutomorphism {
        &self.reflections[i]
    }

    pub fn zero(&self) -> HeckeElement {
        HeckeElement::zero(self.rank())
    }

    pub fn one(&self) -> HeckeElement {
        HeckeElement::term(0, LaurentPoly::one(self.rank()))
    }

    pub fn scalar(&self, c: ParamScalar) -> HeckeElement {
        HeckeElement::term(0, LaurentPoly::constant(self.rank(), c))
    }

    pub fn poly(&self, p: LaurentPoly) -> HeckeElement {
        HeckeElement::term(0, p)
    }

    /// `Z_λ`.
    pub fn z(&self, lambda: &[i32]) -> HeckeElement {
        self.poly(LaurentPoly::monomial(Monomial(lambda.to_vec())))
    }

    /// `U_w` by element index.
    pub fn u(&self, w: usize) -> HeckeElement {
        HeckeElement::term(w, LaurentPoly::one(self.rank()))
    }

    /// `U_{s_i}` (0-based).
    pub fn u_simple(&self, i: usize) -> HeckeElement {
        self.u(self.group.simple_index(i))
    }

    /// `U_w` for a word of 0-based simple indices (need not be reduced).
    pub fn u_word(&self, word: &[usize]) -> HeckeElement {
        let mut x = self.one();
        for &i in word.iter().rev() {
            x = self.left_mul_simple(i, &x);
        }
        x
    }

    /// `D_s(p)`, defined by `p U_s − U_s (^s p) = D_s(p)`.
    pub fn bernstein_correction(&self, i: usize, p: &LaurentPoly) -> Result<LaurentPoly> {
        let alpha = Monomial(self.datum().simple_root(i).to_vec());
        let num = p - &p.act(&self.reflections[i]);
        if num.is_zero() {
            return Ok(num);
        }
        let one = ParamScalar::one();
        let q1 = &self.q_alpha[i] - &one;
        let inexact = || Error::InexactDivision(format!("D_s{} of {:?}", i + 1, p));
        if !self.doubled[i] {
            let quot = num.divide_by_binomial(&one, &alpha.neg()).ok_or_else(inexact)?;
            Ok(quot.scale(&q1))
        } else {
            let quot = num.divide_by_binomial(&one, &alpha.scale(-2)).ok_or_else(inexact)?;
            let factor = &LaurentPoly::constant(self.rank(), q1)
                + &LaurentPoly::term(alpha.neg(), &self.q_a[i] - &self.q_b[i]);
            Ok(&factor * &quot)
        }
    }

    /// `U_{s_i} · x`.
    pub fn left_mul_simple(&self, i: usize, x: &HeckeElement) -> HeckeElement {
        let s = &self.reflections[i];
        let q = &self.q_alpha[i];
        let q1 = q - &ParamScalar::one();
        let mut out = self.zero();
        for (w, p) in &x.terms {
            let sp = p.act(s);
            // U_s P = ^sP U_s − D_s(^sP)
            let corr = self.bernstein_correction(i, &sp).expect("group-algebra inputs divide exactly");
            let sw = self.group.left_mul(i, *w);
            if self.group.length(sw) > self.group.length(*w) {
                out.add_term(sw, &sp);
            } else {
                out.add_term(sw, &sp.scale(q));
                out.add_term(*w, &sp.scale(&q1));
            }
            out.add_term(*w, &-&corr);
        }
        out
    }

    /// Normal form of `x · y`.
    pub fn mul(&self, x: &HeckeElement, y: &HeckeElement) -> HeckeElement {
        let mut cache: HashMap<usize, HeckeElement> = HashMap::new();
        let mut out = self.zero();
        for (w, p) in &x.terms {
            let uy = self.u_times(*w, y, &mut cache);
            for (v, c) in &uy.terms {
                out.add_term(*v, &(p * c));
            }
        }
        out
    }

    fn u_times(&self, w: usize, y: &HeckeElement, cache: &mut HashMap<usize, HeckeElement>) -> HeckeElement {
        if w == 0 {
            return y.clone();
        }
        if let Some(r) = cache.get(&w) {
            return r.clone();
        }
        let first = self.group.word(w)[0];
        let rest = self.group.left_mul(first, w);
        let inner = self.u_times(rest, y, cache);
        let r = self.left_mul_simple(first, &inner);
        cache.insert(w, r.clone());
        r
    }

    /// Commutes with every `U_s` and every `Z_{e_i}`.
    pub fn is_central(&self, x: &HeckeElement) -> bool {
        let n = self.rank();
        let mut gens: Vec<HeckeElement> = (0..self.num_simples()).map(|i| self.u_simple(i)).collect();
        for i in 0..n {
            gens.push(self.poly(LaurentPoly::monomial(Monomial::unit(n, i))));
        }
        gens.iter().all(|g| self.mul(g, x) == self.mul(x, g))
    }

    /// Quadratic, braid, associativity and Bernstein checks.
    ///
    /// Quadratic and braid relations are tested as identities of left
    /// multiplication operators on a set of test elements, so the braid
    /// check is not a tautology of the normal form.
    pub fn verify_presentation<R: Rng>(&self, budget: usize, rng: &mut R) -> Report {
        let mut report = Report::new();
        let n = self.num_simples();
        let rank = self.rank();
        let mut tests = vec![self.one()];
        for i in 0..rank {
            let e = Monomial::unit(rank, i);
            tests.push(self.poly(LaurentPoly::monomial(e.clone())));
            tests.push(self.poly(LaurentPoly::monomial(e.neg())));
        }
        for _ in 0..3 {
            tests.push(self.random_element(rng, 2, 2));
        }
        for i in 0..n {
            let q = &self.q_alpha[i];
            let bad = tests.iter().position(|y| {
                let a = self.left_mul_simple(i, y).sub(&y.scale(q));
                let b = self.left_mul_simple(i, &a).add(&a);
                !b.is_zero()
            });
            report.push(Check::from_result(
                format!("quadratic(s{})", i + 1),
                bad.map_or(Ok(()), |k| Err(format!("fails on test element {k}"))),
            ));
        }
        for i in 0..n {
            for j in i + 1..n {
                let m = self.datum().coxeter_exponent(i, j);
                let name = format!("braid(s{},s{})", i + 1, j + 1);
                if m == 0 {
                    report.push(Check::skipped(name, "infinite order"));
                    continue;
                }
                let word = |a: usize, b: usize| (0..m).map(|k| if k % 2 == 0 { a } else { b }).collect::<Vec<_>>();
                let (wl, wr) = (word(i, j), word(j, i));
                let apply = |w: &[usize], y: &HeckeElement| w.iter().rev().fold(y.clone(), |acc, &s| self.left_mul_simple(s, &acc));
                let bad = tests.iter().position(|y| apply(&wl, y) != apply(&wr, y));
                report.push(Check::from_result(name, bad.map_or(Ok(()), |k| Err(format!("fails on test element {k}")))));
            }
        }
        let mut failures = 0;
        for _ in 0..budget {
            let x = self.random_element(rng, 1, 2);
            let y = self.random_element(rng, 1, 2);
            let z = self.random_element(rng, 1, 2);
            if self.mul(&self.mul(&x, &y), &z) != self.mul(&x, &self.mul(&y, &z)) {
                failures += 1;
            }
        }
        report.push(Check::from_result(
            "associativity",
            if failures == 0 { Ok(()) } else { Err(format!("{failures} of {budget} triples")) },
        ));
        report.push(self.verify_bernstein(budget.max(1) * 10, rng));
        report
    }

    /// `Z_λ U_s − U_s Z_{sλ} = D_s(Z_λ)` with exact division, and the division multiplied back.
    pub fn verify_bernstein<R: Rng>(&self, count: usize, rng: &mut R) -> Check {
        let n = self.num_simples();
        if n == 0 {
            return Check::pass("bernstein");
        }
        let rank = self.rank();
        for _ in 0..count {
            let i = rng.gen_range(0..n);
            let lambda = Monomial((0..rank).map(|_| rng.gen_range(-3..=3)).collect());
            let z = LaurentPoly::monomial(lambda.clone());
            let d = match self.bernstein_correction(i, &z) {
                Ok(d) => d,
                Err(e) => return Check::fail("bernstein", e.to_string()),
            };
            let slam = self.reflections[i].apply(&lambda);
            let lhs = self.mul(&self.poly(z.clone()), &self.u_simple(i)).sub(&self.mul(&self.u_simple(i), &self.poly(LaurentPoly::monomial(slam.clone()))));
            if lhs != self.poly(d.clone()) {
                return Check::fail("bernstein", format!("commutation fails for s{} and λ = {:?}", i + 1, lambda.0));
            }
            let alpha = Monomial(self.datum().simple_root(i).to_vec());
            let one = LaurentPoly::one(rank);
            let q1 = &self.q_alpha[i] - &ParamScalar::one();
            let diff = &z - &LaurentPoly::monomial(slam);
            let ok = if self.doubled[i] {
                let den = &one - &LaurentPoly::monomial(alpha.scale(-2));
                let fac = &LaurentPoly::constant(rank, q1) + &LaurentPoly::term(alpha.neg(), &self.q_a[i] - &self.q_b[i]);
                &d * &den == &fac * &diff
            } else {
                let den = &one - &LaurentPoly::monomial(alpha.neg());
                &d * &den == diff.scale(&q1)
            };
            if !ok {
                return Check::fail("bernstein", format!("remainder for s{} and λ = {:?}", i + 1, lambda.0));
            }
        }
        Check::pass("bernstein")
    }

    /// A sparse random element: up to `max_terms` terms, coefficients with
    /// up to two monomials of coordinates in `[−degree, degree]`.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_terms: usize, degree: i32) -> HeckeElement {
        let rank = self.rank();
        let mut x = self.zero();
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let w = rng.gen_range(0..self.group.order());
            let mut p = LaurentPoly::zero(rank);
            for _ in 0..rng.gen_range(1..=2) {
                let m = Monomial((0..rank).map(|_| rng.gen_range(-degree..=degree)).collect());
                let c = ParamScalar::from_int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
                p.add_term(m, c);
            }
            x.add_term(w, &p);
        }
        x
    }

    /// Text form accepted by [`parse_element`].
    pub fn format_element(&self, x: &HeckeElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let cfg = self.config();
        let mut parts = Vec::new();
        for (w, p) in &x.terms {
            let poly = p.display_q(&cfg);
            let u = format!(
                "U[{}]",
                self.group.word(*w).iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
            );
            parts.push(match (*w == 0, p.is_one()) {
                (true, _) => poly,
                (false, true) => u,
                (false, false) if p.len() == 1 && !poly.contains(" - ") && !poly.contains(" + ") => format!("{poly}*{u}"),
                (false, false) => format!("({poly})*{u}"),
            });
        }
        let mut out = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(part);
            } else if let Some(rest) = part.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(part);
            }
        }
        out
    }
}

/// `Hecke ⋊ R`: finite sums `Σ_r (r, h_r)`.
#[derive(Clone, Debug)]
pub struct EndoAlgebra {
    hecke: HeckeAlgebra,
    r: Vec<DiagramAutomorphism>,
    r_index: HashMap<IMatrix, usize>,
    /// `conj[r][w]` = index of `r⁻¹ w r`.
    conj: Vec<Vec<usize>>,
    r_inv: Vec<LatticeAutomorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoElement {
    terms: BTreeMap<usize, HeckeElement>,
}

impl EndoElement {
    pub fn zero() -> Self {
        EndoElement { terms: BTreeMap::new() }
    }

    pub fn term(r: usize, h: HeckeElement) -> Self {
        let mut terms = BTreeMap::new();
        if !h.is_zero() {
            terms.insert(r, h);
        }
        EndoElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &HeckeElement)> {
        self.terms.iter().map(|(r, h)| (*r, h))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &EndoElement) -> EndoElement {
        let mut out = self.clone();
        for (r, h) in &other.terms {
            let sum = match out.terms.get(r) {
                Some(old) => old.add(h),
                None => h.clone(),
            };
            if sum.is_zero() {
                out.terms.remove(r);
            } else {
                out.terms.insert(*r, sum);
            }
        }
        out
    }
}

impl EndoAlgebra {
    /// Every generator must permute the simples without changing their parameters.
    pub fn new(hecke: HeckeAlgebra, generators: &[DiagramAutomorphism], cap: usize) -> Result<Self> {
        let n = hecke.num_simples();
        for g in generators {
            for i in 0..n {
                let j = g.permutation()[i];
                if hecke.q_alpha(i) != hecke.q_alpha(j) || hecke.params().q_i(i) != hecke.params().q_i(j) || hecke.doubled[i] != hecke.doubled[j] {
                    return Err(Error::ParameterPlacement(format!(
                        "R-generator sends s{} to s{} with different parameters",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let r = generate_group(hecke.datum(), generators, cap)?;
        let r_index = r.iter().enumerate().map(|(k, x)| (x.matrix().clone(), k)).collect();
        let conj = r
            .iter()
            .map(|x| (0..hecke.group.order()).map(|w| hecke.group.conjugate_by_inverse(x, w)).collect())
            .collect();
        let r_inv = r.iter().map(|x| x.inverse().automorphism()).collect();
        Ok(EndoAlgebra { hecke, r, r_index, conj, r_inv })
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    pub fn r_elements(&self) -> &[DiagramAutomorphism] {
        &self.r
    }

    pub fn r_order(&self) -> usize {
        self.r.len()
    }

    pub fn r_mul(&self, a: usize, b: usize) -> usize {
        self.r_index[&self.r[a].matrix().mul(self.r[b].matrix())]
    }

    /// Index of `r⁻¹ w r`.
    pub fn conjugate(&self, r: usize, w: usize) -> usize {
        self.conj[r][w]
    }

    pub fn embed(&self, h: HeckeElement) -> EndoElement {
        EndoElement::term(0, h)
    }

    /// `(r, 1)`.
    pub fn j(&self, r: usize) -> EndoElement {
        EndoElement::term(r, self.hecke.one())
    }

    /// `ρ_r`: `U_w ↦ U_{r⁻¹wr}`, `Z_λ ↦ Z_{r⁻¹λ}`.
    pub fn rho(&self, r: usize, h: &HeckeElement) -> HeckeElement {
        let mut out = self.hecke.zero();
        for (w, p) in &h.terms {
            out.add_term(self.conj[r][*w], &p.act(&self.r_inv[r]));
        }
        out
    }

    /// `(r, h)(r′, h′) = (r r′, ρ_{r′}(h) h′)`.
    pub fn mul(&self, x: &EndoElement, y: &EndoElement) -> EndoElement {
        let mut out = EndoElement::zero();
        for (r, h) in &x.terms {
            for (r2, h2) in &y.terms {
                let prod = self.hecke.mul(&self.rho(*r2, h), h2);
                out = out.add(&EndoElement::term(self.r_mul(*r, *r2), prod));
            }
        }
        out
    }

    /// `ρ_r` respects products of generators: `ρ(xy) = ρ(x)ρ(y)` for `x, y ∈ {U_s, Z_{±e_i}}`.
    pub fn verify_rho(&self) -> Report {
        let h = &self.hecke;
        let rank = h.rank();
        let mut gens: Vec<HeckeElement> = (0..h.num_simples()).map(|i| h.u_simple(i)).collect();
        for i in 0..rank {
            let e = Monomial::unit(rank, i);
            gens.push(h.poly(LaurentPoly::monomial(e.clone())));
            gens.push(h.poly(LaurentPoly::monomial(e.neg())));
        }
        let mut report = Report::new();
        for r in 0..self.r.len() {
            let mut bad = None;
            for (a, x) in gens.iter().enumerate() {
                for (b, y) in gens.iter().enumerate() {
                    if self.rho(r, &h.mul(x, y)) != h.mul(&self.rho(r, x), &self.rho(r, y)) {
                        bad = Some((a, b));
                    }
                }
            }
            report.push(Check::from_result(
                format!("rho_automorphism(r{r})"),
                bad.map_or(Ok(()), |(a, b)| Err(format!("generators {a}, {b}"))),
            ));
        }
        report
    }
}

/// A Levi subalgebra `H(Δ′) ⊂ H(Δ)` on the same lattice.
#[derive(Clone, Debug)]
pub struct LeviEmbedding {
    pub subset: Vec<usize>,
    pub sub: HeckeAlgebra,
    map: Vec<usize>,
}

impl LeviEmbedding {
    pub fn embed(&self, x: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero(x.rank);
        for (w, p) in &x.terms {
            out.add_term(self.map[*w], p);
        }
        out
    }

    /// Ambient index of a sub-group element.
    pub fn ambient_index(&self, w: usize) -> usize {
        self.map[w]
    }
}

/// The standalone algebra of the sub-datum spanned by `subset`, with inherited parameters.
pub fn levi_embed(alg: &HeckeAlgebra, subset: &[usize], cap: usize) -> Result<LeviEmbedding> {
    let sub_datum = alg.datum().sub_datum(subset)?;
    let params = alg.params.restrict(subset);
    let sub = HeckeAlgebra::new(&sub_datum, params, cap)?;
    let map = sub
        .group()
        .elements()
        .iter()
        .map(|e| alg.group().index_of(e.matrix()).ok_or_else(|| Error::InvalidDescriptor("subgroup element missing".into())))
        .collect::<Result<Vec<_>>>()?;
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    Ok(LeviEmbedding { subset, sub, map })
}

/// Parses `3*q^2 * Z[1,-1] * U[1,2,1] - (q - 1)*U[2] + ...`.
///
/// `U[...]` takes 1-based simple indices; `U[]` is the identity.
pub fn parse_element(alg: &HeckeAlgebra, text: &str) -> Result<HeckeElement> {
    let mut p = Parser { alg, src: text.as_bytes(), pos: 0 };
    let x = p.expr()?;
    p.ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(x)
}

struct Parser<'a> {
    alg: &'a HeckeAlgebra,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { position: self.pos + 1, message: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<HeckeElement> {
        let mut acc = self.alg.zero();
        let mut first = true;
        loop {
            let neg = if self.eat(b'-') {
                true
            } else if self.eat(b'+') || first {
                false
            } else {
                return Ok(acc);
            };
            first = false;
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<HeckeElement> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = self.alg.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.pos < self.src.len() && self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        s.parse().map_err(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.eat(b']') {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat(b']') {
                return Ok(out);
            }
            self.expect(b',')?;
        }
    }

    fn factor(&mut self) -> Result<HeckeElement> {
        let rank = self.alg.rank();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(b'q') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    if self.eat(b'(') {
                        let n = self.int()?;
                        let d = if self.eat(b'/') { self.int()? } else { 1 };
                        if d == 0 {
                            return Err(self.err("zero denominator"));
                        }
                        self.expect(b')')?;
                        crate::scalar::rat(n, d)
                    } else {
                        crate::scalar::rat(self.int()?, 1)
                    }
                } else {
                    crate::scalar::rat(1, 1)
                };
                let at = self.pos;
                let c = self.alg.config().qpow(&exp).map_err(|e| Error::Parse { position: at, message: e.to_string() })?;
                Ok(self.alg.scalar(c))
            }
            Some(b'Z') => {
                self.pos += 1;
                let at = self.pos;
                let v = self.int_list()?;
                if v.len() != rank {
                    return Err(Error::Parse { position: at + 1, message: format!("Z needs {rank} coordinates, got {}", v.len()) });
                }
                Ok(self.alg.z(&v.iter().map(|&x| x as i32).collect::<Vec<_>>()))
            }
            Some(b'U') => {
                self.pos += 1;
                let at = self.pos;
                let v = self.int_list()?;
                let n = self.alg.num_simples();
                let mut word = Vec::new();
                for i in v {
                    if i < 1 || i as usize > n {
                        return Err(Error::Parse { position: at + 1, message: format!("simple index {i} out of range 1..={n}") });
                    }
                    word.push(i as usize - 1);
                }
                Ok(self.alg.u_word(&word))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let d = if self.peek() == Some(b'/') && self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                    self.int()?
                } else {
                    1
                };
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                Ok(self.alg.scalar(ParamScalar::from_rational(crate::scalar::rat(n, d))))
            }
            Some(_) => Err(self.err("expected a number, q, Z[...], U[...] or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_standard_datum, CartanType, ComponentSpec};
    use crate::scalar::rat;
    use crate::weyl::DEFAULT_CAP;
    use rand::SeedableRng;

    fn alg(specs: &[(CartanType, usize)], a: (i64, i64), b: (i64, i64)) -> HeckeAlgebra {
        let specs: Vec<ComponentSpec> = specs.iter().map(|&(l, r)| ComponentSpec::new(l, r)).collect();
        let d = build_standard_datum(&specs).unwrap();
        let params = (0..d.num_simples())
            .map(|i| {
                let bb = if d.is_doubled_coroot(i).unwrap() { rat(b.0, b.1) } else { rat(0, 1) };
                crate::params::SimpleParameter::new(rat(a.0, a.1), bb)
            })
            .collect();
        HeckeAlgebra::new(&d, ParameterSet::new(ScalarConfig::new(2), params).unwrap(), DEFAULT_CAP).unwrap()
    }

    fn a1() -> HeckeAlgebra {
        // A1 on the rank-1 lattice with α = 2e, α∨ = e (not doubled).
        let d = build_standard_datum(&[ComponentSpec::new(CartanType::C, 1)]).unwrap();
        let p = ParameterSet::uniform(ScalarConfig::new(2), 1, rat(1, 1), rat(0, 1)).unwrap();
        HeckeAlgebra::new(&d, p, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn quadratic_example() {
        let h = a1();
        let u = h.u_simple(0);
        let q = h.q_alpha(0).clone();
        let expected = u.scale(&(&q - &ParamScalar::one())).add(&h.scalar(q));
        assert_eq!(h.mul(&u, &u), expected);
    }

    #[test]
    fn bernstein_examples() {
        let h = a1();
        let q1 = h.q_alpha(0) - &ParamScalar::one();
        // D_s(Z_α) = (q−1)(Z_α + 1)
        let za = LaurentPoly::monomial(Monomial(vec![2]));
        let expected = (&za + &LaurentPoly::one(1)).scale(&q1);
        assert_eq!(h.bernstein_correction(0, &za).unwrap(), expected);
        assert!(h.bernstein_correction(0, &LaurentPoly::one(1)).unwrap().is_zero());
        // U_s Z_{−α} = Z_α U_s − (q−1)(Z_α + 1)
        let lhs = h.mul(&h.u_simple(0), &h.z(&[-2]));
        let rhs = h.mul(&h.z(&[2]), &h.u_simple(0)).sub(&h.poly(expected));
        assert_eq!(lhs, rhs);

        let b1 = alg(&[(CartanType::B, 1)], (3, 2), (1, 2));
        let cfg = b1.config();
        let z = LaurentPoly::monomial(Monomial(vec![1]));
        let d = b1.bernstein_correction(0, &z).unwrap();
        let expected = &z.scale(&(b1.q_alpha(0) - &ParamScalar::one()))
            + &LaurentPoly::constant(1, &cfg.qpow(&rat(3, 2)).unwrap() - &cfg.qpow(&rat(1, 2)).unwrap());
        assert_eq!(d, expected);
    }

    #[test]
    fn fixed_weight_commutes() {
        let h = alg(&[(CartanType::A, 1)], (1, 1), (0, 1));
        let z = h.z(&[1, 1]);
        assert_eq!(h.mul(&z, &h.u_simple(0)), h.mul(&h.u_simple(0), &z));
    }

    #[test]
    fn presentation_b2() {
        let h = alg(&[(CartanType::B, 2)], (3, 2), (1, 2));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let r = h.verify_presentation(5, &mut rng);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn centrality() {
        let h = alg(&[(CartanType::A, 1)], (1, 1), (0, 1));
        let s = h.reflection(0).clone();
        let orbit = crate::laurent::orbit_sum(&Monomial(vec![1, 0]), &[s], 10).unwrap();
        assert!(h.is_central(&h.poly(orbit)));
        assert!(!h.is_central(&h.z(&[1, -1])));
        assert!(h.is_central(&h.scalar(ParamScalar::from_int(5))));
    }

    #[test]
    fn parse_round_trip() {
        let h = alg(&[(CartanType::B, 2)], (1, 1), (0, 1));
        let x = parse_element(&h, "3*q^2 * Z[1,-1] * U[1,2,1] - (q - 1)*U[2] + q^(1/2)").unwrap();
        let text = h.format_element(&x);
        assert_eq!(parse_element(&h, &text).unwrap(), x);
        let err = parse_element(&h, "U[1,5]").unwrap_err();
        assert!(matches!(err, Error::Parse { position: 2, .. }), "{err:?}");
        assert!(matches!(parse_element(&h, "Z[1]"), Err(Error::Parse { .. })));
        assert!(matches!(parse_element(&h, "q^(1/3)"), Err(Error::Parse { .. })));
    }
}

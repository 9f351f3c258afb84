//! The intertwining-operator model: the module `⊕ K(B) J_r J_w` with the
//! rank-one relations, the normalized operators `T_s`, and the map from the
//! Hecke presentation.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hecke::{EndoAlgebra, EndoElement, HeckeAlgebra, HeckeElement};
use crate::lattice::{IMatrix, LatticeAutomorphism, Monomial};
use crate::laurent::LaurentPoly;
use crate::params::ParameterSet;
use crate::rational::RationalFunction;
use crate::report::{Check, Report};
use crate::root_datum::BasedRootDatum;
use crate::scalar::{ParamScalar, Rational, ScalarConfig};
use crate::weyl::{generate_group, DiagramAutomorphism, WeylGroup};

/// Per-simple constants that the analytic model fixes and this model takes as input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleConstants {
    /// `c′_s` in the μ-function.
    pub c_prime: ParamScalar,
    /// The chosen square root of `c_s`.
    pub c_sqrt: ParamScalar,
    pub eps1: i8,
    pub eps_minus1: i8,
}

impl Default for SimpleConstants {
    fn default() -> Self {
        SimpleConstants { c_prime: ParamScalar::one(), c_sqrt: ParamScalar::one(), eps1: 1, eps_minus1: 1 }
    }
}

impl SimpleConstants {
    pub fn c(&self) -> ParamScalar {
        &self.c_sqrt * &self.c_sqrt
    }

    /// `c″ = c′ c`.
    pub fn c_double_prime(&self) -> ParamScalar {
        &self.c_prime * &self.c()
    }
}

#[derive(Clone, Debug)]
struct SimpleData {
    alpha: Monomial,
    s: LatticeAutomorphism,
    q_alpha: ParamScalar,
    /// `J_s²`.
    phi: RationalFunction,
    /// `R_s = p_s J_s`.
    p: RationalFunction,
    r: RationalFunction,
}

/// Everything needed to compute in the operator model.
#[derive(Debug)]
pub struct OperatorConfig {
    group: WeylGroup,
    params: ParameterSet,
    constants: Vec<SimpleConstants>,
    perturbation: Vec<ParamScalar>,
    r: Vec<DiagramAutomorphism>,
    r_index: HashMap<IMatrix, usize>,
    conj: Vec<Vec<usize>>,
    r_aut: Vec<LatticeAutomorphism>,
    w_aut: Vec<LatticeAutomorphism>,
    simple: Vec<SimpleData>,
    t_cache: Vec<OnceLock<OperatorElement>>,
}

impl Clone for OperatorConfig {
    fn clone(&self) -> Self {
        let mut out = OperatorConfig {
            group: self.group.clone(),
            params: self.params.clone(),
            constants: self.constants.clone(),
            perturbation: self.perturbation.clone(),
            r: self.r.clone(),
            r_index: self.r_index.clone(),
            conj: self.conj.clone(),
            r_aut: self.r_aut.clone(),
            w_aut: self.w_aut.clone(),
            simple: self.simple.clone(),
            t_cache: Vec::new(),
        };
        out.t_cache = (0..out.group.order()).map(|_| OnceLock::new()).collect();
        out
    }
}

/// `Σ f_{r,w} J_r J_w`, keyed by `(r, w)` element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorElement {
    rank: usize,
    terms: BTreeMap<(usize, usize), RationalFunction>,
}

impl OperatorElement {
    pub fn zero(rank: usize) -> Self {
        OperatorElement { rank, terms: BTreeMap::new() }
    }

    pub fn term(r: usize, w: usize, f: RationalFunction) -> Self {
        let mut x = Self::zero(f.rank());
        x.add_term((r, w), &f);
        x
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &RationalFunction)> {
        self.terms.iter().map(|(k, f)| (*k, f))
    }

    pub fn coeff(&self, r: usize, w: usize) -> RationalFunction {
        self.terms.get(&(r, w)).cloned().unwrap_or_else(|| RationalFunction::zero(self.rank))
    }

    fn add_term(&mut self, key: (usize, usize), f: &RationalFunction) {
        if f.is_zero() {
            return;
        }
        let sum = match self.terms.get(&key) {
            Some(old) => old.try_add(f).expect("same rank"),
            None => f.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &OperatorElement) -> OperatorElement {
        let mut out = self.clone();
        for (k, f) in &other.terms {
            out.add_term(*k, f);
        }
        out
    }

    pub fn sub(&self, other: &OperatorElement) -> OperatorElement {
        self.add(&other.scale(&-&ParamScalar::one()))
    }

    pub fn scale(&self, c: &ParamScalar) -> OperatorElement {
        let mut out = Self::zero(self.rank);
        for (k, f) in &self.terms {
            out.add_term(*k, &f.scale(c));
        }
        out
    }

    /// `f · x`.
    pub fn left_function(&self, f: &RationalFunction) -> OperatorElement {
        let mut out = Self::zero(self.rank);
        for (k, g) in &self.terms {
            out.add_term(*k, &f.try_mul(g).expect("same rank"));
        }
        out
    }
}

/// `c′ (1−X)(1−X⁻¹)(1+X)(1+X⁻¹) / ((1−Xq^{−a})(1−X⁻¹q^{−a})(1+Xq^{−b})(1+X⁻¹q^{−b}))` with `X = Z_α`.
pub fn mu_function(config: &ScalarConfig, alpha: &Monomial, a: &Rational, b: &Rational, c_prime: &ParamScalar) -> Result<RationalFunction> {
    let rank = alpha.rank();
    let one = ParamScalar::one();
    let qa = config.qpow(&-a)?;
    let qb = config.qpow(&-b)?;
    let num = four_factors(rank, alpha, &one, &one).scale(c_prime);
    let neg = -&qb;
    RationalFunction::with_factors(num, &[(qa.clone(), alpha.clone()), (qa, alpha.neg()), (neg.clone(), alpha.clone()), (neg, alpha.neg())])
}

/// `(1 − xZ_α)(1 − xZ_{−α})(1 + yZ_α)(1 + yZ_{−α})`.
fn four_factors(rank: usize, alpha: &Monomial, x: &ParamScalar, y: &ParamScalar) -> LaurentPoly {
    let one = LaurentPoly::one(rank);
    let f = |c: ParamScalar, m: Monomial| &one - &LaurentPoly::term(m, c);
    let mut p = f(x.clone(), alpha.clone());
    p = &p * &f(x.clone(), alpha.neg());
    p = &p * &f(-y, alpha.clone());
    &p * &f(-y, alpha.neg())
}

/// Which checks [`OperatorConfig::verify`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpSuites {
    pub quadratic: bool,
    pub sweep_signs: bool,
    pub braid: bool,
    pub triangularity: bool,
    pub r_conjugation: bool,
    pub j_relations: bool,
}

impl Default for OpSuites {
    fn default() -> Self {
        OpSuites { quadratic: true, sweep_signs: false, braid: true, triangularity: true, r_conjugation: true, j_relations: true }
    }
}

/// `{J_r T_w}` coordinates of an operator element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExpansion {
    pub coefficients: BTreeMap<(usize, usize), RationalFunction>,
    /// Every coefficient is a Laurent polynomial.
    pub integral: bool,
}

impl OperatorConfig {
    /// `constants` holds one entry per simple root, or a single entry used for all.
    pub fn new(
        datum: &BasedRootDatum,
        params: ParameterSet,
        constants: Vec<SimpleConstants>,
        r_generators: &[DiagramAutomorphism],
        cap: usize,
    ) -> Result<Self> {
        let n = datum.num_simples();
        if params.len() != n {
            return Err(Error::ParameterMismatch(format!("{} parameters for {n} simple roots", params.len())));
        }
        let constants = match constants.len() {
            1 => vec![constants[0].clone(); n],
            k if k == n => constants,
            0 if n == 0 => constants,
            k => return Err(Error::ParameterMismatch(format!("{k} constant sets for {n} simple roots"))),
        };
        let zero = Rational::from_integer(0.into());
        for (i, p) in params.simple.iter().enumerate() {
            if p.a <= zero || p.b < zero || p.a < p.b {
                return Err(Error::ParameterMismatch(format!("need a > 0, b ≥ 0, a ≥ b at simple {}; got ({}, {})", i + 1, p.a, p.b)));
            }
        }
        for (i, c) in constants.iter().enumerate() {
            if c.c_sqrt.is_zero() || c.c_prime.is_zero() {
                return Err(Error::ParameterMismatch(format!("c and c′ must be invertible at simple {}", i + 1)));
            }
            if c.eps1.abs() != 1 || c.eps_minus1.abs() != 1 {
                return Err(Error::ParameterMismatch(format!("signs must be ±1 at simple {}", i + 1)));
            }
            if !Monomial(datum.simple_root(i).to_vec()).is_primitive() {
                return Err(Error::NonDisciplinedDenominator(format!(
                    "simple root {} is not primitive in the lattice; use the flipped (type B) realization",
                    i + 1
                )));
            }
        }
        let group = WeylGroup::new(datum, cap)?;
        let r = generate_group(datum, r_generators, cap)?;
        // Constants must agree along W-conjugacy and R-orbits of simples.
        let mut same: Vec<(usize, usize)> = (0..n).map(|i| (datum.param_class(i), i)).collect();
        for g in &r {
            same.extend((0..n).map(|i| (i, g.permutation()[i])));
        }
        for (i, j) in same {
            if params.simple[i] != params.simple[j] || constants[i] != constants[j] {
                return Err(Error::ParameterMismatch(format!(
                    "simples {} and {} are conjugate but carry different parameters or constants",
                    i + 1,
                    j + 1
                )));
            }
        }
        let r_index = r.iter().enumerate().map(|(k, x)| (x.matrix().clone(), k)).collect();
        let conj = r.iter().map(|x| (0..group.order()).map(|w| group.conjugate_by_inverse(x, w)).collect()).collect();
        let r_aut = r.iter().map(|x| x.automorphism()).collect();
        let w_aut = group.elements().iter().map(|w| w.automorphism()).collect();
        let mut cfg = OperatorConfig {
            t_cache: (0..group.order()).map(|_| OnceLock::new()).collect(),
            group,
            params,
            constants,
            perturbation: vec![ParamScalar::zero(); n],
            r,
            r_index,
            conj,
            r_aut,
            w_aut,
            simple: Vec::new(),
        };
        cfg.rebuild()?;
        Ok(cfg)
    }

    fn rebuild(&mut self) -> Result<()> {
        let datum = self.group.datum().clone();
        let rank = datum.rank();
        let cfg = self.params.config;
        let one = ParamScalar::one();
        let mut simple = Vec::new();
        for i in 0..datum.num_simples() {
            let alpha = Monomial(datum.simple_root(i).to_vec());
            let s = LatticeAutomorphism::new(datum.simple_reflection(i))?;
            let (a, b) = (self.params.a(i), self.params.b(i));
            let k = &self.constants[i];
            let q_alpha = self.params.q_alpha(i);
            let qa = cfg.qpow(a)?;
            let qb = cfg.qpow(b)?;
            // J_s² = c″ μ⁻¹ = c (μ/c′)⁻¹
            let num = four_factors(rank, &alpha, &cfg.qpow(&-a)?, &cfg.qpow(&-b)?).scale(&k.c());
            let phi = RationalFunction::with_factors(num, &[(one.clone(), alpha.clone()), (one.clone(), alpha.neg()), (-&one, alpha.clone()), (-&one, alpha.neg())])?;
            let zero = Rational::from_integer(0.into());
            let equal_case = Rational::from_integer(k.eps1.into()) * b == Rational::from_integer(k.eps_minus1.into()) * b || *b == zero;
            let coef = -&(&q_alpha * &k.c_sqrt.inv().expect("checked nonzero")).scale_sign(k.eps1);
            let p = if equal_case {
                RationalFunction::from_poly(LaurentPoly::term(alpha.clone(), coef))
            } else {
                RationalFunction::constant(rank, coef)
            };
            // r_s = ((q_α−1)X² + (q^a−q^b)X) / (X² − 1)
            let x2 = alpha.scale(2);
            let rnum = &LaurentPoly::term(x2, &q_alpha - &one) + &LaurentPoly::term(alpha.clone(), &qa - &qb);
            let mut r = RationalFunction::with_factors(-&rnum, &[(one.clone(), alpha.clone()), (-&one, alpha.clone())])?;
            if !self.perturbation[i].is_zero() {
                r = r.try_add(&RationalFunction::constant(rank, self.perturbation[i].clone()))?;
            }
            simple.push(SimpleData { alpha, s, q_alpha, phi, p, r });
        }
        self.simple = simple;
        self.t_cache = (0..self.group.order()).map(|_| OnceLock::new()).collect();
        Ok(())
    }

    /// Adds `delta` to the constant `r_s` of simple `i`; breaks the model on purpose.
    pub fn with_perturbation(mut self, i: usize, delta: ParamScalar) -> Result<Self> {
        if i >= self.perturbation.len() {
            return Err(Error::SimpleIndexOutOfRange { index: i, count: self.perturbation.len() });
        }
        self.perturbation[i] = delta;
        self.rebuild()?;
        Ok(self)
    }

    /// The same config with every simple's signs replaced.
    pub fn with_signs(&self, eps1: i8, eps_minus1: i8) -> Result<Self> {
        let constants = self
            .constants
            .iter()
            .map(|c| SimpleConstants { eps1, eps_minus1, ..c.clone() })
            .collect();
        let gens: Vec<DiagramAutomorphism> = self.r.clone();
        let mut cfg = OperatorConfig::new(self.datum(), self.params.clone(), constants, &gens, usize::MAX)?;
        cfg.perturbation = self.perturbation.clone();
        cfg.rebuild()?;
        Ok(cfg)
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

    pub fn constants(&self, i: usize) -> &SimpleConstants {
        &self.constants[i]
    }

    pub fn rank(&self) -> usize {
        self.datum().rank()
    }

    pub fn r_elements(&self) -> &[DiagramAutomorphism] {
        &self.r
    }

    pub fn r_index(&self, m: &IMatrix) -> Option<usize> {
        self.r_index.get(m).copied()
    }

    fn r_mul(&self, a: usize, b: usize) -> usize {
        self.r_index[&self.r[a].matrix().mul(self.r[b].matrix())]
    }

    /// `μ` attached to simple root `i`.
    pub fn mu_eval(&self, i: usize) -> Result<RationalFunction> {
        mu_function(&self.params.config, &self.simple[i].alpha, self.params.a(i), self.params.b(i), &self.constants[i].c_prime)
    }

    /// `J_s²` as a function.
    pub fn phi(&self, i: usize) -> &RationalFunction {
        &self.simple[i].phi
    }

    /// `p_s` with `R_s = p_s J_s`.
    pub fn p(&self, i: usize) -> &RationalFunction {
        &self.simple[i].p
    }

    /// `r_s` with `T_s = R_s + r_s`.
    pub fn r_correction(&self, i: usize) -> &RationalFunction {
        &self.simple[i].r
    }

    pub fn one(&self) -> OperatorElement {
        self.function(RationalFunction::one(self.rank()))
    }

    pub fn function(&self, f: RationalFunction) -> OperatorElement {
        OperatorElement::term(0, 0, f)
    }

    /// `J_r` by R-index.
    pub fn j_r(&self, r: usize) -> OperatorElement {
        OperatorElement::term(r, 0, RationalFunction::one(self.rank()))
    }

    /// `J_w` by W-index.
    pub fn j_w(&self, w: usize) -> OperatorElement {
        OperatorElement::term(0, w, RationalFunction::one(self.rank()))
    }

    pub fn j_simple(&self, i: usize) -> OperatorElement {
        self.j_w(self.group.simple_index(i))
    }

    /// `R_s`.
    pub fn build_r(&self, i: usize) -> OperatorElement {
        OperatorElement::term(0, self.group.simple_index(i), self.simple[i].p.clone())
    }

    /// `T_s = R_s + r_s`.
    pub fn build_t(&self, i: usize) -> OperatorElement {
        self.build_r(i).add(&self.function(self.simple[i].r.clone()))
    }

    /// `T_w` along the canonical reduced word.
    pub fn t_w(&self, w: usize) -> &OperatorElement {
        self.t_cache[w].get_or_init(|| {
            let word = self.group.word(w).to_vec();
            word.iter().fold(self.one(), |acc, &s| self.j_mul(&acc, &self.build_t(s)))
        })
    }

    /// `^{g} f` for `g` given by an automorphism.
    fn act(f: &RationalFunction, g: &LatticeAutomorphism) -> RationalFunction {
        f.act(g)
    }

    /// `J_s · Σ h_u J_u`.
    fn left_j_simple(&self, i: usize, h: &BTreeMap<usize, RationalFunction>) -> BTreeMap<usize, RationalFunction> {
        let sd = &self.simple[i];
        let mut out: BTreeMap<usize, RationalFunction> = BTreeMap::new();
        for (u, f) in h {
            let sf = Self::act(f, &sd.s);
            let su = self.group.left_mul(i, *u);
            let coeff = if self.group.length(su) > self.group.length(*u) { sf } else { sf.try_mul(&sd.phi).expect("same rank") };
            let entry = out.entry(su).or_insert_with(|| RationalFunction::zero(f.rank()));
            *entry = entry.try_add(&coeff).expect("same rank");
        }
        out.retain(|_, f| !f.is_zero());
        out
    }

    /// `J_v J_{w′} = Σ h_u J_u`.
    fn jj(&self, v: usize, w2: usize, cache: &mut HashMap<(usize, usize), BTreeMap<usize, RationalFunction>>) -> BTreeMap<usize, RationalFunction> {
        if let Some(h) = cache.get(&(v, w2)) {
            return h.clone();
        }
        let h = if v == 0 {
            BTreeMap::from([(w2, RationalFunction::one(self.rank()))])
        } else {
            let first = self.group.word(v)[0];
            let rest = self.group.left_mul(first, v);
            let inner = self.jj(rest, w2, cache);
            self.left_j_simple(first, &inner)
        };
        cache.insert((v, w2), h.clone());
        h
    }

    /// Normal form of `x · y`.
    pub fn j_mul(&self, x: &OperatorElement, y: &OperatorElement) -> OperatorElement {
        let mut cache = HashMap::new();
        let mut out = OperatorElement::zero(self.rank());
        for (&(r, w), f) in &x.terms {
            for (&(r2, w2), g) in &y.terms {
                // J_r J_w g J_{r′} J_{w′} = ^{rw}g J_{rr′} J_{r′⁻¹wr′} J_{w′}
                let g_moved = Self::act(&Self::act(g, &self.w_aut[w]), &self.r_aut[r]);
                let fg = f.try_mul(&g_moved).expect("same rank");
                let v = self.conj[r2][w];
                let rr = self.r_mul(r, r2);
                for (u, h) in self.jj(v, w2, &mut cache) {
                    let c = fg.try_mul(&Self::act(&h, &self.r_aut[rr])).expect("same rank");
                    out.add_term((rr, u), &c);
                }
            }
        }
        out
    }

    /// Coordinates in the basis `{J_r T_w}`, by triangular elimination from the top length down.
    pub fn change_basis(&self, x: &OperatorElement) -> Result<BasisExpansion> {
        let mut residual = x.clone();
        let mut coefficients = BTreeMap::new();
        while let Some((&(r, w), f)) = residual.terms.iter().max_by_key(|(&(r, w), _)| (self.group.length(w), r, w)) {
            let f = f.clone();
            let basis = self.j_mul(&self.j_r(r), self.t_w(w));
            let lead = basis.coeff(r, w);
            if !lead.is_laurent_unit() {
                return Err(Error::SingularLeadingCoefficient(format!("J_r{r} T_w{w}")));
            }
            let g = f.try_div(&lead)?;
            residual = residual.sub(&basis.left_function(&g));
            if residual.terms.contains_key(&(r, w)) {
                return Err(Error::SingularLeadingCoefficient(format!("J_r{r} T_w{w} does not eliminate")));
            }
            coefficients.insert((r, w), g);
        }
        let integral = coefficients.values().all(|g: &RationalFunction| g.is_polynomial());
        Ok(BasisExpansion { coefficients, integral })
    }

    /// `Σ g_{r,w} J_r T_w`.
    pub fn expand(&self, e: &BasisExpansion) -> OperatorElement {
        let mut out = OperatorElement::zero(self.rank());
        for (&(r, w), g) in &e.coefficients {
            out = out.add(&self.j_mul(&self.j_r(r), self.t_w(w)).left_function(g));
        }
        out
    }

    /// Image of a Hecke element under `U_s ↦ T_s`, `Z ↦ X`.
    pub fn hecke_to_opmodel(&self, alg: &HeckeAlgebra, x: &HeckeElement) -> Result<OperatorElement> {
        self.check_compatible(alg)?;
        let mut out = OperatorElement::zero(self.rank());
        for (w, p) in x.terms() {
            let k = self
                .group
                .index_of(alg.group().element(w).matrix())
                .ok_or_else(|| Error::ParameterMismatch("Weyl groups differ".into()))?;
            out = out.add(&self.t_w(k).left_function(&RationalFunction::from_poly(p.clone())));
        }
        Ok(out)
    }

    /// `(r, h) ↦ J_r · image(h)`.
    pub fn endo_to_opmodel(&self, endo: &EndoAlgebra, x: &EndoElement) -> Result<OperatorElement> {
        let mut out = OperatorElement::zero(self.rank());
        for (r, h) in x.terms() {
            let k = self
                .r_index(endo.r_elements()[r].matrix())
                .ok_or_else(|| Error::ParameterMismatch("R-groups differ".into()))?;
            out = out.add(&self.j_mul(&self.j_r(k), &self.hecke_to_opmodel(endo.hecke(), h)?));
        }
        Ok(out)
    }

    fn check_compatible(&self, alg: &HeckeAlgebra) -> Result<()> {
        let d = alg.datum();
        if d.rank() != self.rank() || d.simple_roots() != self.datum().simple_roots() || d.simple_coroots() != self.datum().simple_coroots() {
            return Err(Error::ParameterMismatch("the Hecke algebra and the operator model use different root data".into()));
        }
        for i in 0..d.num_simples() {
            if alg.params().simple[i] != self.params.simple[i] {
                return Err(Error::ParameterMismatch(format!("simple {} has different (a, b) in the two models", i + 1)));
            }
            if alg.params().config != self.params.config {
                return Err(Error::ParameterMismatch("different denominators".into()));
            }
        }
        Ok(())
    }

    /// True when some braid hypothesis covers the pair `(i, j)`.
    pub fn braid_hypothesis(&self, i: usize, j: usize) -> bool {
        let zero = Rational::from_integer(0.into());
        let (bi, bj) = (self.params.b(i), self.params.b(j));
        match self.datum().coxeter_exponent(i, j) {
            2 => true,
            _ if *bi == zero && *bj == zero => true,
            4 => {
                let long = if self.datum().cartan_entry(i, j) == -2 { i } else { j };
                *self.params.b(long) == zero
            }
            _ => false,
        }
    }

    /// `(T_s + 1)(T_s − q_α) = 0`.
    pub fn check_quadratic(&self, i: usize) -> Check {
        let t = self.build_t(i);
        let a = t.add(&self.one());
        let b = t.sub(&self.one().scale(&self.simple[i].q_alpha));
        let prod = self.j_mul(&a, &b);
        let name = format!("quadratic(s{})", i + 1);
        if prod.is_zero() {
            Check::pass(name)
        } else {
            Check::fail(name, format!("{} nonzero terms remain", prod.terms.len()))
        }
    }

    pub fn check_braid(&self, i: usize, j: usize) -> Check {
        let name = format!("braid(s{},s{})", i + 1, j + 1);
        if !self.braid_hypothesis(i, j) {
            return Check::skipped(name, "hypotheses-not-met");
        }
        let m = self.datum().coxeter_exponent(i, j);
        let (ti, tj) = (self.build_t(i), self.build_t(j));
        let prod = |a: &OperatorElement, b: &OperatorElement| (0..m).fold(self.one(), |acc, k| self.j_mul(&acc, if k % 2 == 0 { a } else { b }));
        if prod(&ti, &tj) == prod(&tj, &ti) {
            Check::pass(name)
        } else {
            Check::fail(name, format!("alternating products of length {m} differ"))
        }
    }

    /// `T_w T_{w′} = b J_{ww′} + lower`, `b` a unit, for every length-additive pair.
    pub fn check_triangularity(&self) -> Check {
        let g = &self.group;
        for w in 0..g.order() {
            for w2 in 0..g.order() {
                let ww = g.mul(w, w2);
                if g.length(ww) != g.length(w) + g.length(w2) {
                    continue;
                }
                let prod = self.j_mul(self.t_w(w), self.t_w(w2));
                let lead_ok = prod.coeff(0, ww).is_laurent_unit();
                let rest_ok = prod.terms().all(|((r, u), _)| r == 0 && (u == ww || g.length(u) < g.length(ww)));
                if !(lead_ok && rest_ok) {
                    return Check::fail("triangularity", format!("pair ({:?}, {:?})", g.word(w), g.word(w2)));
                }
            }
        }
        Check::pass("triangularity")
    }

    /// `T_w J_r = J_r T_{r⁻¹wr}` for every `r`, `w`.
    pub fn check_r_conjugation(&self) -> Check {
        for r in 0..self.r.len() {
            for w in 0..self.group.order() {
                let lhs = self.j_mul(self.t_w(w), &self.j_r(r));
                let rhs = self.j_mul(&self.j_r(r), self.t_w(self.conj[r][w]));
                if lhs != rhs {
                    return Check::fail("r_conjugation", format!("r{r}, w = {:?}", self.group.word(w)));
                }
            }
        }
        Check::pass("r_conjugation")
    }

    /// `J_s J_s μ = c″` and `J_s f = ^s f J_s`.
    pub fn check_j_relations(&self) -> Check {
        let rank = self.rank();
        for i in 0..self.simple.len() {
            let js = self.j_simple(i);
            let sq = self.j_mul(&js, &js);
            let mu = match self.mu_eval(i) {
                Ok(m) => m,
                Err(e) => return Check::fail("j_relations", e.to_string()),
            };
            let expected = self.function(RationalFunction::constant(rank, self.constants[i].c_double_prime()));
            if sq.left_function(&mu) != expected {
                return Check::fail("j_relations", format!("J_s{}² μ ≠ c″", i + 1));
            }
            for k in 0..rank {
                let f = RationalFunction::monomial(Monomial::unit(rank, k));
                let lhs = self.j_mul(&js, &self.function(f.clone()));
                let rhs = js.left_function(&f.act(&self.simple[i].s));
                if lhs != rhs {
                    return Check::fail("j_relations", format!("J_s{} does not act on X_e{}", i + 1, k + 1));
                }
            }
        }
        Check::pass("j_relations")
    }

    pub fn verify(&self, suites: OpSuites) -> Report {
        let mut report = Report::new();
        let n = self.simple.len();
        if suites.quadratic {
            if suites.sweep_signs {
                for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    match self.with_signs(e1, e2) {
                        Ok(cfg) => {
                            for i in 0..n {
                                let mut c = cfg.check_quadratic(i);
                                c.name = format!("{}[eps={:+},{:+}]", c.name, e1, e2);
                                report.push(c);
                            }
                        }
                        Err(e) => report.push(Check::fail(format!("quadratic[eps={e1:+},{e2:+}]"), e.to_string())),
                    }
                }
            } else {
                for i in 0..n {
                    report.push(self.check_quadratic(i));
                }
            }
        }
        if suites.j_relations {
            report.push(self.check_j_relations());
        }
        if suites.braid {
            for i in 0..n {
                for j in i + 1..n {
                    report.push(self.check_braid(i, j));
                }
            }
        }
        if suites.triangularity {
            report.push(self.check_triangularity());
        }
        if suites.r_conjugation {
            report.push(self.check_r_conjugation());
        }
        report
    }

    /// Random element with polynomial coefficients on `J_r J_w`.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_terms: usize, degree: i32) -> OperatorElement {
        let rank = self.rank();
        let mut x = OperatorElement::zero(rank);
        for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
            let r = rng.gen_range(0..self.r.len());
            let w = rng.gen_range(0..self.group.order());
            let m = Monomial((0..rank).map(|_| rng.gen_range(-degree..=degree)).collect());
            let c = ParamScalar::from_int(rng.gen_range(1..=3));
            x.add_term((r, w), &RationalFunction::from_poly(LaurentPoly::term(m, c)));
        }
        x
    }

    /// Human-readable listing of the terms.
    pub fn format_element(&self, x: &OperatorElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let cfg = self.params.config;
        x.terms()
            .map(|((r, w), f)| {
                let word = self.group.word(w).iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
                format!("({})*J_r{r}*J[{word}]", f.display_q(&cfg))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

trait ScaleSign {
    fn scale_sign(&self, s: i8) -> ParamScalar;
}

impl ScaleSign for ParamScalar {
    fn scale_sign(&self, s: i8) -> ParamScalar {
        if s < 0 {
            -self
        } else {
            self.clone()
        }
    }
}

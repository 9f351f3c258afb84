//! The group algebra of the character lattice over the parameter field.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::lattice::{LatticeAutomorphism, Monomial};
use crate::scalar::{ParamScalar, ScalarConfig};

/// A finite sum `Σ c_λ Z_λ` with `c_λ` in the parameter field.
///
/// Zero coefficients are never stored, so two polynomials are equal exactly
/// when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<Monomial, ParamScalar>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, ParamScalar::one())
    }

    pub fn constant(rank: usize, c: ParamScalar) -> Self {
        Self::term(Monomial::zero(rank), c)
    }

    /// `Z_λ`.
    pub fn monomial(lambda: Monomial) -> Self {
        Self::term(lambda, ParamScalar::one())
    }

    pub fn term(lambda: Monomial, c: ParamScalar) -> Self {
        let rank = lambda.rank();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(lambda, c);
        }
        LaurentPoly { rank, terms }
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Monomial, ParamScalar)>) -> Self {
        let mut p = LaurentPoly::zero(rank);
        for (m, c) in terms {
            assert_eq!(m.rank(), rank, "monomial rank");
            p.add_term(m, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_zero() && c.is_one())
    }

    /// A single nonzero term `c Z_λ`: the units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// Returns the scalar when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<ParamScalar> {
        match self.terms.len() {
            0 => Some(ParamScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> ParamScalar {
        self.terms.get(m).cloned().unwrap_or_else(ParamScalar::zero)
    }

    /// Lexicographically greatest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &ParamScalar)> {
        self.terms.iter().next_back()
    }

    pub fn trailing_term(&self) -> Option<(&Monomial, &ParamScalar)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_rank(&self, other: &LaurentPoly) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(other)?;
        let mut out = LaurentPoly::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.add(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ParamScalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by `Z_λ`.
    pub fn shift(&self, lambda: &Monomial) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.add(lambda), c.clone())).collect(),
        }
    }

    /// `Z_λ ↦ Z_{wλ}` extended linearly.
    pub fn act(&self, w: &LatticeAutomorphism) -> LaurentPoly {
        assert_eq!(w.rank(), self.rank, "automorphism rank");
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (w.apply(m), c.clone())).collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&ParamScalar) -> ParamScalar) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Coordinatewise minimum and maximum exponent of the support.
    fn bounding_box(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for m in it {
            for i in 0..self.rank {
                lo[i] = lo[i].min(m.0[i]);
                hi[i] = hi[i].max(m.0[i]);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient `self / divisor`, failing unless the remainder is zero.
    ///
    /// Long division on lexicographically leading terms; the Newton polytope of
    /// the quotient is confined to the box `box(self) − box(divisor)`, which
    /// bounds the loop when the division is not exact.
    pub fn exact_divide(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_rank(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.rank));
        }
        if divisor.is_unit() {
            let (m, c) = divisor.terms.iter().next().unwrap();
            let inv = c.inv().expect("nonzero coefficient");
            return Ok(self.shift(&m.neg()).scale(&inv));
        }
        let (plo, phi) = self.bounding_box().unwrap();
        let (dlo, dhi) = divisor.bounding_box().unwrap();
        let lo: Vec<i32> = plo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = phi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::InexactDivision(format!("{self:?} / {divisor:?}")));
        }
        let (dm, dc) = divisor.leading_term().unwrap();
        let dc_inv = dc.inv().expect("nonzero coefficient");
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.rank);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.sub(dm);
            if qm.0.iter().enumerate().any(|(i, &x)| x < lo[i] || x > hi[i]) {
                return Err(Error::InexactDivision(format!("{self:?} / {divisor:?}")));
            }
            let qc = c * &dc_inv;
            for (m2, c2) in &divisor.terms {
                rem.add_term(m2.add(&qm), -(&qc * c2));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Division by the binomial `1 − c Z_β` (`β ≠ 0`), or `None` if it does not divide.
    ///
    /// Terms are grouped along cosets of `Zβ`; on each coset the polynomial
    /// in `t = Z_β` is divided synthetically by `1 − c t`.
    pub fn divide_by_binomial(&self, c: &ParamScalar, beta: &Monomial) -> Option<LaurentPoly> {
        let pivot = beta.0.iter().position(|&x| x != 0)?;
        let step = beta.0[pivot];
        let mut lines: BTreeMap<Monomial, BTreeMap<i32, &ParamScalar>> = BTreeMap::new();
        for (m, coef) in &self.terms {
            let k = m.0[pivot].div_euclid(step);
            let base = m.sub(&beta.scale(k));
            lines.entry(base).or_default().insert(k, coef);
        }
        let mut out = LaurentPoly::zero(self.rank);
        for (base, line) in lines {
            let kmin = *line.keys().next().unwrap();
            let kmax = *line.keys().next_back().unwrap();
            if kmin == kmax {
                return None;
            }
            let mut prev = ParamScalar::zero();
            for k in kmin..kmax {
                let a = line.get(&k).map(|x| (*x).clone()).unwrap_or_else(ParamScalar::zero);
                let qk = &a + &(c * &prev);
                out.add_term(base.add(&beta.scale(k)), qk.clone());
                prev = qk;
            }
            let top = line[&kmax];
            if !(top + &(c * &prev)).is_zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Renders with the parameter field read in powers of `q`.
    pub fn display_q(&self, config: &ScalarConfig) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let coef = config.display(c);
            let needs_paren = coef.contains(' ') || coef.contains('/');
            let z = if m.is_zero() { None } else { Some(format!("Z{:?}", m.0).replace(' ', "")) };
            let s = match (z, coef.as_str()) {
                (None, _) => coef.clone(),
                (Some(z), "1") => z,
                (Some(z), "-1") => format!("-{z}"),
                (Some(z), _) if needs_paren => format!("({coef})*{z}"),
                (Some(z), _) => format!("{coef}*{z}"),
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (i, p) in parts.into_iter().enumerate() {
            if i == 0 {
                out.push_str(&p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&p);
            }
        }
        out
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.display_q(&ScalarConfig::new(1)).replace('q', "v");
        f.write_str(&s)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("rank mismatch")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("rank mismatch")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("rank mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-ParamScalar::one())
    }
}

/// `Σ_{μ ∈ orbit(λ)} Z_μ` for the group generated by `generators`.
pub fn orbit_sum(lambda: &Monomial, generators: &[LatticeAutomorphism], cap: usize) -> Result<LaurentPoly> {
    let orbit = orbit(lambda, generators, cap)?;
    Ok(LaurentPoly::from_terms(lambda.rank(), orbit.into_iter().map(|m| (m, ParamScalar::one()))))
}

/// The orbit of `λ`, enumerated breadth first.
pub fn orbit(lambda: &Monomial, generators: &[LatticeAutomorphism], cap: usize) -> Result<BTreeSet<Monomial>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(lambda.clone());
    queue.push_back(lambda.clone());
    while let Some(m) = queue.pop_front() {
        for g in generators {
            let image = g.apply(&m);
            if seen.insert(image.clone()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                queue.push_back(image);
            }
        }
    }
    Ok(seen)
}

/// True iff every generator fixes `p`.
pub fn is_invariant(p: &LaurentPoly, generators: &[LatticeAutomorphism]) -> bool {
    generators.iter().all(|g| p.act(g) == *p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IMatrix;
    use crate::scalar::rat;

    fn z(v: &[i32]) -> LaurentPoly {
        LaurentPoly::monomial(Monomial(v.to_vec()))
    }

    fn one(rank: usize) -> LaurentPoly {
        LaurentPoly::one(rank)
    }

    #[test]
    fn group_algebra_law() {
        assert!((&z(&[1]) * &z(&[-1])).is_one());
        let s = &(&one(1) - &z(&[1])) + &z(&[1]);
        assert!(s.is_one());
        // (1 − Z_α)(1 + Z_α) = 1 − Z_2α
        let p = &(&one(1) - &z(&[1])) * &(&one(1) + &z(&[1]));
        assert_eq!(p, &one(1) - &z(&[2]));
    }

    #[test]
    fn rank_mismatch_is_reported() {
        assert_eq!(z(&[1]).try_add(&z(&[1, 0])).unwrap_err(), Error::RankMismatch { left: 1, right: 2 });
    }

    #[test]
    fn weyl_action_examples() {
        let s = LatticeAutomorphism::new(IMatrix::diagonal(&[-1])).unwrap();
        assert_eq!(z(&[1]).act(&s), z(&[-1]));
        assert!(one(1).act(&s).is_one());
        // A2 in simple-root coordinates: s_1(α_2) = α_1 + α_2.
        let s1 = LatticeAutomorphism::new(IMatrix::reflection(&[1, 0], &[2, -1])).unwrap();
        assert_eq!(z(&[0, 1]).act(&s1), z(&[1, 1]));
    }

    #[test]
    fn exact_divide_examples() {
        let num = &one(1) - &z(&[2]);
        let den = &one(1) - &z(&[1]);
        assert_eq!(num.exact_divide(&den).unwrap(), &one(1) + &z(&[1]));
        let p = &z(&[3, 1]) + &z(&[0, -2]);
        assert_eq!(p.exact_divide(&one(2)).unwrap(), p);
        // (Z_λ − Z_{λ−α}) / (1 − Z_{−α}) = Z_λ
        let lam = [2, 5];
        let num = &z(&lam) - &z(&[lam[0] - 1, lam[1]]);
        let den = &one(2) - &z(&[-1, 0]);
        assert_eq!(num.exact_divide(&den).unwrap(), z(&lam));
    }

    #[test]
    fn exact_divide_detects_remainder() {
        let num = &one(1) + &z(&[2]);
        let den = &one(1) - &z(&[1]);
        assert!(matches!(num.exact_divide(&den), Err(Error::InexactDivision(_))));
        assert!(num.divide_by_binomial(&ParamScalar::one(), &Monomial(vec![1])).is_none());
    }

    #[test]
    fn binomial_division_agrees_with_long_division() {
        let c = ParamScalar::monomial(rat(3, 1), -2);
        let beta = Monomial(vec![1, -1]);
        let b = &one(2) - &LaurentPoly::term(beta.clone(), c.clone());
        let f = &(&z(&[2, 0]) + &z(&[0, 1])) - &LaurentPoly::constant(2, ParamScalar::from_int(5));
        let p = &f * &b;
        assert_eq!(p.divide_by_binomial(&c, &beta).unwrap(), f);
        assert_eq!(p.exact_divide(&b).unwrap(), f);
    }

    #[test]
    fn orbit_sum_examples() {
        let s = LatticeAutomorphism::new(IMatrix::diagonal(&[-1])).unwrap();
        let o = orbit_sum(&Monomial(vec![1]), std::slice::from_ref(&s), 100).unwrap();
        assert_eq!(o, &z(&[1]) + &z(&[-1]));
        assert!(is_invariant(&o, std::slice::from_ref(&s)));
        assert!(orbit_sum(&Monomial(vec![0]), std::slice::from_ref(&s), 100).unwrap().is_one());
        assert!(!is_invariant(&z(&[1]), std::slice::from_ref(&s)));
        assert!(is_invariant(&LaurentPoly::constant(1, ParamScalar::from_int(7)), &[s]));
    }

    #[test]
    fn orbit_cap() {
        let shear = LatticeAutomorphism::new(IMatrix::from_rows(vec![vec![1, 1], vec![0, 1]])).unwrap();
        let err = orbit(&Monomial(vec![0, 1]), &[shear], 50).unwrap_err();
        assert_eq!(err, Error::OrbitCapExceeded { cap: 50 });
    }
}

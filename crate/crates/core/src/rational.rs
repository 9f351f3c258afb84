//! Fractions of the Laurent ring with binomial denominators.
//!
//! Every denominator that arises in the intertwining-operator calculus is a
//! product of factors `1 − c Z_β`. Such a factor is irreducible when `β` is
//! primitive, and two factors are associate only if they are equal after the
//! rewriting `1 − c Z_{−β} = −c Z_{−β} (1 − c⁻¹ Z_β)`. Keeping `β`
//! lexicographically positive therefore gives each fraction a unique reduced
//! form `num / Π (1 − c_k Z_{β_k})^{m_k}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{LatticeAutomorphism, Monomial};
use crate::laurent::LaurentPoly;
use crate::scalar::{ParamScalar, ScalarConfig};

/// The factor `1 − coeff · Z_direction`, with `direction` primitive and lex-positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub direction: Monomial,
    pub coeff: ParamScalar,
}

impl Binomial {
    /// Normalizes `1 − c Z_γ` into `unit · (1 − c' Z_β)`; returns `(unit, factor)`.
    pub fn normalize(c: ParamScalar, gamma: Monomial) -> Result<(LaurentPoly, Binomial)> {
        if c.is_zero() || gamma.is_zero() {
            return Err(Error::NonDisciplinedDenominator(format!("degenerate factor 1 - ({c}) Z{gamma:?}")));
        }
        if !gamma.is_primitive() {
            return Err(Error::NonDisciplinedDenominator(format!("direction {gamma:?} is not primitive")));
        }
        let rank = gamma.rank();
        if gamma.is_lex_positive() {
            return Ok((LaurentPoly::one(rank), Binomial { direction: gamma, coeff: c }));
        }
        let unit = LaurentPoly::term(gamma.clone(), -&c);
        let coeff = c.inv().expect("nonzero");
        Ok((unit, Binomial { direction: gamma.neg(), coeff }))
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let rank = self.direction.rank();
        &LaurentPoly::one(rank) - &LaurentPoly::term(self.direction.clone(), self.coeff.clone())
    }
}

/// An element of the fraction field of the Laurent ring, in reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: BTreeMap<Binomial, u32>,
}

impl RationalFunction {
    pub fn zero(rank: usize) -> Self {
        RationalFunction { num: LaurentPoly::zero(rank), den: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::from_poly(LaurentPoly::one(rank))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: BTreeMap::new() }
    }

    pub fn constant(rank: usize, c: ParamScalar) -> Self {
        Self::from_poly(LaurentPoly::constant(rank, c))
    }

    pub fn monomial(lambda: Monomial) -> Self {
        Self::from_poly(LaurentPoly::monomial(lambda))
    }

    /// `num / Π (1 − c Z_γ)` for arbitrary nonzero `c` and primitive `γ`.
    pub fn with_factors(num: LaurentPoly, factors: &[(ParamScalar, Monomial)]) -> Result<Self> {
        let mut num = num;
        let mut den = BTreeMap::new();
        for (c, gamma) in factors {
            if gamma.rank() != num.rank() {
                return Err(Error::RankMismatch { left: num.rank(), right: gamma.rank() });
            }
            let (unit, b) = Binomial::normalize(c.clone(), gamma.clone())?;
            // 1/(u·b) = u⁻¹/b, and u is a single term.
            num = num.exact_divide(&unit)?;
            *den.entry(b).or_insert(0) += 1;
        }
        Ok(RationalFunction { num, den }.reduced())
    }

    /// `1 / (1 − c Z_γ)`.
    pub fn inverse_binomial(rank: usize, c: ParamScalar, gamma: Monomial) -> Result<Self> {
        Self::with_factors(LaurentPoly::one(rank), &[(c, gamma)])
    }

    fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let keys: Vec<Binomial> = self.den.keys().cloned().collect();
        for b in keys {
            loop {
                let m = self.den[&b];
                if m == 0 {
                    break;
                }
                match self.num.divide_by_binomial(&b.coeff, &b.direction) {
                    Some(q) => {
                        self.num = q;
                        if m == 1 {
                            self.den.remove(&b);
                            break;
                        }
                        self.den.insert(b.clone(), m - 1);
                    }
                    None => break,
                }
            }
        }
        self
    }

    pub fn rank(&self) -> usize {
        self.num.rank()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> impl Iterator<Item = (&Binomial, u32)> {
        self.den.iter().map(|(b, m)| (b, *m))
    }

    pub fn denominator(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(self.rank());
        for (b, m) in &self.den {
            let p = b.to_poly();
            for _ in 0..*m {
                d = &d * &p;
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// True when the value lies in the Laurent ring.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&LaurentPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    /// A unit of the Laurent ring: a single term `c Z_λ`.
    pub fn is_laurent_unit(&self) -> bool {
        self.den.is_empty() && self.num.is_unit()
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: other.rank() });
        }
        Ok(())
    }

    fn factor_product(factors: &BTreeMap<Binomial, u32>, rank: usize) -> LaurentPoly {
        let mut d = LaurentPoly::one(rank);
        for (b, m) in factors {
            let p = b.to_poly();
            for _ in 0..*m {
                d = &d * &p;
            }
        }
        d
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let mut den = self.den.clone();
        for (b, &m) in &other.den {
            let e = den.entry(b.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let missing = |own: &BTreeMap<Binomial, u32>| -> BTreeMap<Binomial, u32> {
            den.iter()
                .filter_map(|(b, &m)| {
                    let have = own.get(b).copied().unwrap_or(0);
                    (m > have).then(|| (b.clone(), m - have))
                })
                .collect()
        };
        let rank = self.rank();
        let a = &self.num * &Self::factor_product(&missing(&self.den), rank);
        let b = &other.num * &Self::factor_product(&missing(&other.den), rank);
        Ok(RationalFunction { num: &a + &b, den }.reduced())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rank()));
        }
        let mut den = self.den.clone();
        for (b, &m) in &other.den {
            *den.entry(b.clone()).or_insert(0) += m;
        }
        Ok(RationalFunction { num: &self.num * &other.num, den }.reduced())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiplicative inverse.
    ///
    /// Available when the numerator is a single term or a unit times
    /// binomials of the admissible shape; otherwise the inverse would leave
    /// the denominator discipline.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rank = self.rank();
        let den_poly = Self::factor_product(&self.den, rank);
        if self.num.is_unit() {
            let (m, c) = self.num.terms().next().unwrap();
            let unit_inv = LaurentPoly::term(m.neg(), c.inv().expect("nonzero"));
            return Ok(RationalFunction { num: &unit_inv * &den_poly, den: BTreeMap::new() });
        }
        Err(Error::NonDisciplinedDenominator(format!("inverse of {:?}", self.num)))
    }

    /// Division by a fraction whose inverse is admissible.
    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    /// `Z_λ ↦ Z_{wλ}` on numerator and denominator.
    pub fn act(&self, w: &LatticeAutomorphism) -> Self {
        let mut num = self.num.act(w);
        let mut den = BTreeMap::new();
        for (b, &m) in &self.den {
            let image = w.apply(&b.direction);
            let (unit, nb) = Binomial::normalize(b.coeff.clone(), image).expect("automorphisms keep directions primitive");
            if !unit.is_one() {
                let mut u = LaurentPoly::one(num.rank());
                for _ in 0..m {
                    u = &u * &unit;
                }
                num = num.exact_divide(&u).expect("unit division");
            }
            *den.entry(nb).or_insert(0) += m;
        }
        RationalFunction { num, den }.reduced()
    }

    /// Evaluates with `Z_{e_i}` replaced by `point[i]`; `None` at a pole.
    pub fn eval(&self, point: &[ParamScalar]) -> Option<ParamScalar> {
        let ev = |p: &LaurentPoly| -> Option<ParamScalar> {
            let mut acc = ParamScalar::zero();
            for (m, c) in p.terms() {
                let mut t = c.clone();
                for (x, &e) in point.iter().zip(&m.0) {
                    if e < 0 && x.is_zero() {
                        return None;
                    }
                    t = &t * &x.pow(e as i64);
                }
                acc = &acc + &t;
            }
            Some(acc)
        };
        let n = ev(&self.num)?;
        let d = ev(&self.denominator())?;
        n.checked_div(&d).ok()
    }

    pub fn display_q(&self, config: &ScalarConfig) -> String {
        let num = self.num.display_q(config);
        if self.den.is_empty() {
            return num;
        }
        let mut den = Vec::new();
        for (b, m) in &self.den {
            let f = b.to_poly().display_q(config);
            if *m == 1 {
                den.push(format!("({f})"));
            } else {
                den.push(format!("({f})^{m}"));
            }
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        format!("{num}/{}", den.join(""))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.display_q(&ScalarConfig::new(1)).replace('q', "v");
        f.write_str(&s)
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IMatrix;

    fn z(v: &[i32]) -> LaurentPoly {
        LaurentPoly::monomial(Monomial(v.to_vec()))
    }

    fn x(v: &[i32]) -> RationalFunction {
        RationalFunction::monomial(Monomial(v.to_vec()))
    }

    #[test]
    fn reduction_cancels_common_factor() {
        let one = ParamScalar::one();
        let num = &LaurentPoly::one(1) - &z(&[2]);
        let f = RationalFunction::with_factors(num, &[(one, Monomial(vec![1]))]).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.numerator(), &(&LaurentPoly::one(1) + &z(&[1])));
    }

    #[test]
    fn negative_direction_is_normalized() {
        // 1/(1 − Z_{−1}) = −Z_1/(1 − Z_1)
        let one = ParamScalar::one();
        let a = RationalFunction::inverse_binomial(1, one.clone(), Monomial(vec![-1])).unwrap();
        let b = RationalFunction::with_factors(-&z(&[1]), &[(one, Monomial(vec![1]))]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sum_over_common_denominator() {
        // 1/(1−X) + 1/(1+X) = 2/(1−X²), and 1/(1−X²) reduces back to the two factors.
        let one = ParamScalar::one();
        let a = RationalFunction::inverse_binomial(1, one.clone(), Monomial(vec![1])).unwrap();
        let b = RationalFunction::inverse_binomial(1, -&one, Monomial(vec![1])).unwrap();
        let s = a.try_add(&b).unwrap();
        let prod = a.try_mul(&b).unwrap().scale(&ParamScalar::from_int(2));
        assert_eq!(s, prod);
        assert_eq!(s.try_sub(&a).unwrap(), b);
        assert!(s.try_sub(&s).unwrap().is_zero());
    }

    #[test]
    fn action_renormalizes() {
        let one = ParamScalar::one();
        let s = LatticeAutomorphism::new(IMatrix::diagonal(&[-1])).unwrap();
        let f = RationalFunction::inverse_binomial(1, one.clone(), Monomial(vec![1])).unwrap();
        let g = f.act(&s);
        let expected = RationalFunction::inverse_binomial(1, one, Monomial(vec![-1])).unwrap();
        assert_eq!(g, expected);
        // f + ^s f = 1
        assert!(f.try_add(&g).unwrap().is_one());
    }

    #[test]
    fn unit_inverse() {
        let f = RationalFunction::with_factors(z(&[2]), &[(ParamScalar::v_pow(-1), Monomial(vec![1]))]).unwrap();
        let g = f.inv().unwrap();
        assert!(f.try_mul(&g).unwrap().is_one());
        let h = RationalFunction::from_poly(&LaurentPoly::one(1) + &z(&[1]));
        assert!(matches!(h.inv(), Err(Error::NonDisciplinedDenominator(_))));
    }

    #[test]
    fn non_primitive_direction_rejected() {
        let r = RationalFunction::inverse_binomial(1, ParamScalar::one(), Monomial(vec![2]));
        assert!(matches!(r, Err(Error::NonDisciplinedDenominator(_))));
    }

    #[test]
    fn evaluation() {
        let f = x(&[1]).try_add(&RationalFunction::one(1)).unwrap();
        assert_eq!(f.eval(&[ParamScalar::from_int(2)]), Some(ParamScalar::from_int(3)));
        let g = RationalFunction::inverse_binomial(1, ParamScalar::one(), Monomial(vec![1])).unwrap();
        assert_eq!(g.eval(&[ParamScalar::one()]), None);
    }
}

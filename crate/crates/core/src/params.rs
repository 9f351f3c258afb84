//! Exponent data `(a_s, b_s)` attached to the simple roots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_datum::BasedRootDatum;
use crate::scalar::{ParamScalar, Rational, ScalarConfig};

/// `q_α = q^{a+b}` and, on a doubled simple, `q_i = q^{a−b}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleParameter {
    pub a: Rational,
    pub b: Rational,
}

impl SimpleParameter {
    pub fn new(a: Rational, b: Rational) -> Self {
        SimpleParameter { a, b }
    }
}

/// One `(a, b)` pair per simple root, read at a fixed denominator `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub config: ScalarConfig,
    pub simple: Vec<SimpleParameter>,
}

impl ParameterSet {
    pub fn new(config: ScalarConfig, simple: Vec<SimpleParameter>) -> Result<Self> {
        for p in &simple {
            config.qpow(&p.a)?;
            config.qpow(&p.b)?;
        }
        Ok(ParameterSet { config, simple })
    }

    /// The same `(a, b)` on every simple root.
    pub fn uniform(config: ScalarConfig, count: usize, a: Rational, b: Rational) -> Result<Self> {
        Self::new(config, vec![SimpleParameter::new(a, b); count])
    }

    pub fn len(&self) -> usize {
        self.simple.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simple.is_empty()
    }

    pub fn a(&self, i: usize) -> &Rational {
        &self.simple[i].a
    }

    pub fn b(&self, i: usize) -> &Rational {
        &self.simple[i].b
    }

    fn q(&self, r: &Rational) -> ParamScalar {
        self.config.qpow(r).expect("checked at construction")
    }

    pub fn q_alpha(&self, i: usize) -> ParamScalar {
        self.q(&(self.a(i) + self.b(i)))
    }

    pub fn q_i(&self, i: usize) -> ParamScalar {
        self.q(&(self.a(i) - self.b(i)))
    }

    /// `q^{a}`, the exact square root of `q_α q_i`.
    pub fn q_a(&self, i: usize) -> ParamScalar {
        self.q(self.a(i))
    }

    /// `q^{b}`, the exact square root of `q_α / q_i`.
    pub fn q_b(&self, i: usize) -> ParamScalar {
        self.q(self.b(i))
    }

    /// Nonzero `b` is admissible only on simples with doubled coroot.
    pub fn check_placement(&self, datum: &BasedRootDatum) -> Result<()> {
        if self.simple.len() != datum.num_simples() {
            return Err(Error::ParameterPlacement(format!(
                "{} parameters for {} simple roots",
                self.simple.len(),
                datum.num_simples()
            )));
        }
        for (i, p) in self.simple.iter().enumerate() {
            if p.b != Rational::from_integer(0.into()) && !datum.is_doubled_coroot(i)? {
                return Err(Error::ParameterPlacement(format!(
                    "b = {} on simple root {} which is not the short root of a B component",
                    p.b,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Weyl-conjugate simples must carry the same `q_α` (and the same `q_i`).
    pub fn check_conjugacy(&self, datum: &BasedRootDatum) -> Result<()> {
        for i in 0..self.simple.len() {
            let c = datum.param_class(i);
            if c != i && (self.q_alpha(c) != self.q_alpha(i) || self.q_i(c) != self.q_i(i)) {
                return Err(Error::UnequalConjugateParameters { first: c + 1, second: i + 1 });
            }
        }
        Ok(())
    }

    pub fn restrict(&self, subset: &[usize]) -> ParameterSet {
        let mut idx = subset.to_vec();
        idx.sort_unstable();
        idx.dedup();
        ParameterSet { config: self.config, simple: idx.iter().map(|&i| self.simple[i].clone()).collect() }
    }
}

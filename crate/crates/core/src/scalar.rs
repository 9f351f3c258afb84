//! The parameter field: rational functions in a formal symbol `v` with
//! exact rational coefficients, where `v` stands for `q^(1/D)`.
//!
//! Every value is stored as `v^shift * num(v) / den(v)` with `num` and `den`
//! coprime polynomials not divisible by `v`, and `den` monic. This makes the
//! representation canonical, so structural equality is value equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Dense polynomial in `v`, coefficients from low to high degree, no trailing zeros.
///
/// Stored as machine integers whenever every coefficient is a small
/// integer; the choice is canonical, so derived equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum VPoly {
    Int(Vec<i64>),
    Rat(Vec<Rational>),
}

const SMALL: i128 = 1 << 62;

impl VPoly {
    fn zero() -> Self {
        VPoly::Int(Vec::new())
    }

    fn one() -> Self {
        VPoly::Int(vec![1])
    }

    fn from_ints(mut c: Vec<i128>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        if c.iter().all(|x| x.abs() < SMALL) {
            VPoly::Int(c.into_iter().map(|x| x as i64).collect())
        } else {
            VPoly::Rat(c.into_iter().map(|x| Rational::from_integer(BigInt::from(x))).collect())
        }
    }

    fn from_rats(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let small: Option<Vec<i64>> = c
            .iter()
            .map(|x| if x.is_integer() { x.numer().to_i64().filter(|n| (*n as i128).abs() < SMALL) } else { None })
            .collect();
        match small {
            Some(v) => VPoly::Int(v),
            None => VPoly::Rat(c),
        }
    }

    fn rats(&self) -> Vec<Rational> {
        match self {
            VPoly::Int(v) => v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect(),
            VPoly::Rat(v) => v.clone(),
        }
    }

    fn len(&self) -> usize {
        match self {
            VPoly::Int(v) => v.len(),
            VPoly::Rat(v) => v.len(),
        }
    }

    fn coeff(&self, i: usize) -> Rational {
        match self {
            VPoly::Int(v) => Rational::from_integer(BigInt::from(v[i])),
            VPoly::Rat(v) => v[i].clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.len() == 0
    }

    fn is_one(&self) -> bool {
        matches!(self, VPoly::Int(v) if v.len() == 1 && v[0] == 1)
    }

    fn degree(&self) -> usize {
        self.len().saturating_sub(1)
    }

    fn lead(&self) -> Rational {
        self.coeff(self.len() - 1)
    }

    fn low_zeros(&self) -> usize {
        match self {
            VPoly::Int(v) => v.iter().take_while(|c| **c == 0).count(),
            VPoly::Rat(v) => v.iter().take_while(|c| c.is_zero()).count(),
        }
    }

    fn drop_low(self, k: usize) -> Self {
        match self {
            VPoly::Int(mut v) => {
                v.drain(..k);
                VPoly::Int(v)
            }
            VPoly::Rat(mut v) => {
                v.drain(..k);
                VPoly::Rat(v)
            }
        }
    }

    fn neg(&self) -> Self {
        match self {
            VPoly::Int(v) => VPoly::Int(v.iter().map(|c| -c).collect()),
            VPoly::Rat(v) => VPoly::Rat(v.iter().map(|c| -c).collect()),
        }
    }

    fn scale(&self, c: &Rational) -> Self {
        if let (VPoly::Int(v), true) = (self, c.is_integer()) {
            if let Some(k) = c.numer().to_i64() {
                let out: Option<Vec<i128>> = v.iter().map(|&x| (x as i128).checked_mul(k as i128)).collect();
                if let Some(out) = out {
                    return Self::from_ints(out);
                }
            }
        }
        Self::from_rats(self.rats().iter().map(|x| x * c).collect())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return VPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if let (VPoly::Int(a), VPoly::Int(b)) = (self, other) {
            if let Some(out) = mul_i128(a, b) {
                return Self::from_ints(out);
            }
        }
        let (a, b) = (self.rats(), other.rats());
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::from_rats(out)
    }

    /// `self * v^k + other`, `k >= 0`.
    fn add_shifted(&self, k: usize, other: &Self) -> Self {
        let len = (self.len() + k).max(other.len());
        if let (VPoly::Int(a), VPoly::Int(b)) = (self, other) {
            let mut out = vec![0i128; len];
            for (i, &x) in a.iter().enumerate() {
                out[i + k] += x as i128;
            }
            for (i, &x) in b.iter().enumerate() {
                out[i] += x as i128;
            }
            return Self::from_ints(out);
        }
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.rats().into_iter().enumerate() {
            out[i + k] += a;
        }
        for (i, b) in other.rats().into_iter().enumerate() {
            out[i] += b;
        }
        Self::from_rats(out)
    }

    fn divrem(&self, divisor: &Self) -> (Self, Self) {
        if self.len() < divisor.len() {
            return (VPoly::zero(), self.clone());
        }
        let mut rem = self.rats();
        let div = divisor.rats();
        let dl = divisor.lead();
        let dd = divisor.degree();
        let mut quot = vec![Rational::zero(); self.len() - divisor.len() + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, d) in div.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        (Self::from_rats(quot), Self::from_rats(rem))
    }

    fn monic(&self) -> Self {
        self.scale(&(Rational::one() / self.lead()))
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }
}

fn mul_i128(a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].checked_add((x as i128) * (y as i128))?;
        }
    }
    Some(out)
}

/// An exact element of the parameter field `Q(v)`, `v = q^(1/D)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamScalar {
    shift: i64,
    num: VPoly,
    den: VPoly,
}

impl ParamScalar {
    pub fn zero() -> Self {
        ParamScalar { shift: 0, num: VPoly::zero(), den: VPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamScalar { shift: 0, num: VPoly::from_rats(vec![c]), den: VPoly::one() }
    }

    /// The monomial `v^k`.
    pub fn v_pow(k: i64) -> Self {
        ParamScalar { shift: k, num: VPoly::one(), den: VPoly::one() }
    }

    /// `c * v^k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ParamScalar { shift: k, num: VPoly::from_rats(vec![c]), den: VPoly::one() }
    }

    /// Builds `sum coeffs[i] v^(low + i)` divided by `sum den[i] v^i`.
    pub fn from_coefficients(low: i64, num: Vec<Rational>, den: Vec<Rational>) -> Result<Self> {
        let den = VPoly::from_rats(den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(low, VPoly::from_rats(num), den))
    }

    fn normalized(mut shift: i64, num: VPoly, den: VPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let k = num.low_zeros();
        let num = num.drop_low(k);
        shift += k as i64;
        let k = den.low_zeros();
        let den = den.drop_low(k);
        shift -= k as i64;
        let (mut num, mut den) = (num, den);
        if den.degree() > 0 {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        if !den.lead().is_one() {
            let inv = Rational::one() / den.lead();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        ParamScalar { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is `c * v^k` for a rational `c`.
    pub fn is_monomial(&self) -> bool {
        self.num.len() == 1 && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial in `v`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Returns `Some(c)` when the value is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.shift == 0 && self.num.len() == 1 && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(-self.shift, self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// Evaluates at a rational value of `v`. Returns `None` at a pole.
    pub fn eval(&self, v: &Rational) -> Option<Rational> {
        let horner = |p: &VPoly| {
            p.rats().iter().rev().fold(Rational::zero(), |acc, c| acc * v + c)
        };
        let d = horner(&self.den);
        if d.is_zero() || (v.is_zero() && self.shift < 0) {
            return None;
        }
        let vs = if self.shift >= 0 {
            num_traits::pow(v.clone(), self.shift as usize)
        } else {
            Rational::one() / num_traits::pow(v.clone(), (-self.shift) as usize)
        };
        Some(horner(&self.num) * vs / d)
    }

    /// Renders the value in powers of `q`, reading `v` as `q^(1/denominator)`.
    pub fn display_q(&self, denominator: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let num = render_vpoly(&self.num, self.shift, denominator);
        if self.den.is_one() {
            return num;
        }
        let den = render_vpoly(&self.den, 0, denominator);
        let wrap = |s: String, p: &VPoly| {
            let terms = p.rats().iter().filter(|c| !c.is_zero()).count();
            if terms > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(num, &self.num), wrap(den, &self.den))
    }
}

fn q_power(k: i64, denominator: u32) -> String {
    let r = Rational::new(BigInt::from(k), BigInt::from(denominator));
    if r.is_one() {
        "q".to_string()
    } else if r.is_integer() {
        format!("q^{}", r.numer())
    } else {
        format!("q^({}/{})", r.numer(), r.denom())
    }
}

fn render_vpoly(p: &VPoly, shift: i64, denominator: u32) -> String {
    let mut out = String::new();
    for (i, c) in p.rats().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let k = shift + i as i64;
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag_s = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("{}/{}", mag.numer(), mag.denom())
        };
        if k == 0 {
            out.push_str(&mag_s);
        } else if mag.is_one() {
            out.push_str(&q_power(k, denominator));
        } else {
            out.push_str(&format!("{}*{}", mag_s, q_power(k, denominator)));
        }
    }
    out
}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Displays in the raw symbol `v`.
impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.display_q(1).replace('q', "v");
        f.write_str(&s)
    }
}

impl<'a> Add<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.shift.min(rhs.shift);
        let ka = (self.shift - low) as usize;
        let kb = (rhs.shift - low) as usize;
        if self.den.is_one() && rhs.den.is_one() {
            let a = self.num.clone();
            let num = if ka >= kb {
                a.add_shifted(ka - kb, &rhs.num)
            } else {
                rhs.num.add_shifted(kb - ka, &a)
            };
            let shift = low + ka.min(kb) as i64;
            return ParamScalar::normalized(shift, num, VPoly::one());
        }
        let a = self.num.mul(&rhs.den);
        let b = rhs.num.mul(&self.den);
        let num = if ka >= kb { a.add_shifted(ka - kb, &b) } else { b.add_shifted(kb - ka, &a) };
        let shift = low + ka.min(kb) as i64;
        ParamScalar::normalized(shift, num, self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        if self.is_zero() || rhs.is_zero() {
            return ParamScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamScalar {
                shift: self.shift + rhs.shift,
                num: self.num.mul(&rhs.num),
                den: VPoly::one(),
            };
        }
        ParamScalar::normalized(
            self.shift + rhs.shift,
            self.num.mul(&rhs.num),
            self.den.mul(&rhs.den),
        )
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: ParamScalar) -> ParamScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ParamScalar> for ParamScalar {
            type Output = ParamScalar;
            fn $m(self, rhs: &ParamScalar) -> ParamScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Global configuration of the parameter field: `v = q^(1/denominator)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScalarConfig {
    pub denominator: u32,
}

impl Default for ScalarConfig {
    fn default() -> Self {
        ScalarConfig { denominator: 2 }
    }
}

impl ScalarConfig {
    pub fn new(denominator: u32) -> Self {
        assert!(denominator > 0, "denominator must be positive");
        ScalarConfig { denominator }
    }

    /// `q^r` as `v^(r D)`.
    pub fn qpow(&self, r: &Rational) -> Result<ParamScalar> {
        let scaled = r * Rational::from_integer(BigInt::from(self.denominator));
        if !scaled.is_integer() {
            return Err(Error::DenominatorMismatch {
                exponent: r.to_string(),
                denominator: self.denominator,
            });
        }
        let k: i64 = scaled
            .to_integer()
            .try_into()
            .map_err(|_| Error::DenominatorMismatch { exponent: r.to_string(), denominator: self.denominator })?;
        Ok(ParamScalar::v_pow(k))
    }

    /// `q` itself.
    pub fn q(&self) -> ParamScalar {
        ParamScalar::v_pow(self.denominator as i64)
    }

    /// True when `r D` is an integer.
    pub fn represents(&self, r: &Rational) -> bool {
        (r * Rational::from_integer(BigInt::from(self.denominator))).is_integer()
    }

    pub fn display(&self, x: &ParamScalar) -> String {
        x.display_q(self.denominator)
    }
}

/// Least common multiple of the denominators, useful when choosing `D`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> u32 {
    let mut l = BigInt::one();
    for r in values {
        l = l.lcm(r.denom());
    }
    l.try_into().unwrap_or(u32::MAX)
}

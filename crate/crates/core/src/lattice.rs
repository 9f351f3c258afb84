//! Integer vectors and integral automorphisms of the character lattice.

use std::fmt;

use crate::error::{Error, Result};

/// An exponent vector `λ`, standing for the group-algebra element `Z_λ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn zero(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        Monomial(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), other.rank());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.rank(), other.rank());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i32) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    /// First nonzero coordinate is positive.
    pub fn is_lex_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    /// Gcd of the coordinates equals one.
    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i32, |g, &x| gcd(g, x.abs())) == 1
    }

    pub fn dot(&self, other: &[i32]) -> i32 {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }
}

impl From<Vec<i32>> for Monomial {
    fn from(v: Vec<i32>) -> Self {
        Monomial(v)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub(crate) fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Square integer matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMatrix {
    n: usize,
    data: Vec<i32>,
}

impl IMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<i32>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IMatrix { n, data: rows.into_iter().flatten().collect() }
    }

    /// The diagonal matrix with the given entries.
    pub fn diagonal(entries: &[i32]) -> Self {
        let n = entries.len();
        let mut m = IMatrix { n, data: vec![0; n * n] };
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    /// The reflection `λ ↦ λ − ⟨λ, coroot⟩ root`.
    pub fn reflection(root: &[i32], coroot: &[i32]) -> Self {
        let n = root.len();
        let mut m = IMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] -= root[i] * coroot[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i32 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IMatrix::identity(self.n)
    }

    pub fn mul(&self, other: &IMatrix) -> IMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        IMatrix { n, data }
    }

    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum()).collect()
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Monomial {
        Monomial(self.apply(&m.0))
    }

    /// Action on covectors: `φ ↦ φ ∘ self⁻¹`, i.e. multiplication by the inverse transpose.
    pub fn transpose(&self) -> IMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        IMatrix { n, data }
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i64> = self.data.iter().map(|&x| x as i64).collect();
        let mut sign = 1i64;
        let mut prev = 1i64;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        sign * a[(n - 1) * n + (n - 1)]
    }

    /// Integral inverse, when the determinant is ±1.
    pub fn inverse(&self) -> Result<IMatrix> {
        let det = self.determinant();
        if det != 1 && det != -1 {
            return Err(Error::NonIntegralAction);
        }
        Ok(self.adjugate().scale(det as i32))
    }

    fn scale(&self, k: i32) -> IMatrix {
        IMatrix { n: self.n, data: self.data.iter().map(|x| x * k).collect() }
    }

    fn minor(&self, r: usize, c: usize) -> IMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i != r && j != c {
                    data.push(self.data[i * n + j]);
                }
            }
        }
        IMatrix { n: n - 1, data }
    }

    fn adjugate(&self) -> IMatrix {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                data[j * n + i] = s * self.minor(i, j).determinant() as i32;
            }
        }
        IMatrix { n, data }
    }
}

impl fmt::Debug for IMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// An integral invertible linear map of the lattice (checked at construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeAutomorphism {
    matrix: IMatrix,
}

impl LatticeAutomorphism {
    pub fn new(matrix: IMatrix) -> Result<Self> {
        matrix.inverse()?;
        Ok(LatticeAutomorphism { matrix })
    }

    pub fn identity(n: usize) -> Self {
        LatticeAutomorphism { matrix: IMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, m: &Monomial) -> Monomial {
        self.matrix.apply_monomial(m)
    }

    pub fn compose(&self, other: &LatticeAutomorphism) -> LatticeAutomorphism {
        LatticeAutomorphism { matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn inverse(&self) -> LatticeAutomorphism {
        LatticeAutomorphism { matrix: self.matrix.inverse().expect("checked at construction") }
    }
}

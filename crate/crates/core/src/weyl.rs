//! Finite Weyl groups realized as integer matrices on the character lattice.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{IMatrix, LatticeAutomorphism};
use crate::root_datum::BasedRootDatum;

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A Weyl group element with its cached length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    matrix: IMatrix,
    length: usize,
}

/// Number of positive roots sent to negative roots.
fn inversion_count(pos: &HashSet<Vec<i32>>, m: &IMatrix) -> usize {
    pos.iter().filter(|a| !pos.contains(&m.apply(a))).count()
}

impl WeylElement {
    pub fn identity(datum: &BasedRootDatum) -> Self {
        WeylElement { matrix: IMatrix::identity(datum.rank()), length: 0 }
    }

    /// `s_i` (0-based simple index).
    pub fn simple(datum: &BasedRootDatum, i: usize) -> Self {
        WeylElement { matrix: datum.simple_reflection(i), length: 1 }
    }

    pub(crate) fn from_matrix(datum: &BasedRootDatum, matrix: IMatrix) -> Self {
        let length = inversion_count(&datum.positive_set(), &matrix);
        WeylElement { matrix, length }
    }

    /// Product along a word of 0-based simple indices.
    pub fn from_word(datum: &BasedRootDatum, word: &[usize]) -> Self {
        let mut m = IMatrix::identity(datum.rank());
        for &i in word {
            m = m.mul(&datum.simple_reflection(i));
        }
        Self::from_matrix(datum, m)
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.matrix
    }

    pub fn automorphism(&self) -> LatticeAutomorphism {
        LatticeAutomorphism::new(self.matrix.clone()).expect("Weyl elements are unimodular")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn mul(&self, datum: &BasedRootDatum, other: &WeylElement) -> WeylElement {
        Self::from_matrix(datum, self.matrix.mul(&other.matrix))
    }

    pub fn inv(&self) -> WeylElement {
        // Lengths agree: w and w⁻¹ have inversion sets of the same size.
        WeylElement { matrix: self.matrix.inverse().expect("unimodular"), length: self.length }
    }

    /// Left descent test: `ℓ(s_i w) < ℓ(w)` iff `w⁻¹ α_i < 0`.
    pub fn has_left_descent(&self, datum: &BasedRootDatum, i: usize) -> bool {
        let inv = self.matrix.inverse().expect("unimodular");
        let img = inv.apply(datum.simple_root(i));
        datum.root_sign(&img) == Some(false)
    }

    /// Lexicographically smallest reduced word (0-based indices).
    pub fn reduced_word(&self, datum: &BasedRootDatum) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length);
        let mut cur = self.matrix.clone();
        for _ in 0..self.length {
            let inv = cur.inverse().expect("unimodular");
            let s = (0..datum.num_simples())
                .find(|&i| datum.root_sign(&inv.apply(datum.simple_root(i))) == Some(false))
                .expect("nontrivial element has a descent");
            word.push(s);
            cur = datum.simple_reflection(s).mul(&cur);
        }
        word
    }

    /// `{α > 0 : wα < 0}`.
    pub fn inversion_set(&self, datum: &BasedRootDatum) -> Vec<Vec<i32>> {
        let pos = datum.positive_set();
        let mut out: Vec<Vec<i32>> = datum
            .positive_roots()
            .into_iter()
            .filter(|a| !pos.contains(&self.matrix.apply(a)))
            .collect();
        out.sort();
        out
    }
}

/// The longest element: `−1` on the root span composed with the diagram symmetry.
pub fn longest_element(datum: &BasedRootDatum) -> WeylElement {
    let mut w = WeylElement::identity(datum);
    loop {
        let next = (0..datum.num_simples()).find(|&i| !w.has_left_descent(datum, i));
        match next {
            Some(i) => w = WeylElement::simple(datum, i).mul(datum, &w),
            None => return w,
        }
    }
}

/// All elements, breadth first from the identity (so sorted by length).
pub fn enumerate(datum: &BasedRootDatum, cap: usize) -> Result<Vec<WeylElement>> {
    Ok(WeylGroup::new(datum, cap)?.elements().to_vec())
}

/// A diagram automorphism: a lattice automorphism permuting the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramAutomorphism {
    matrix: IMatrix,
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(datum: &BasedRootDatum, matrix: IMatrix) -> Result<Self> {
        let inv = matrix.inverse()?;
        let dual = inv.transpose();
        let simples = datum.simple_roots();
        let mut perm = Vec::with_capacity(simples.len());
        for i in 0..simples.len() {
            let img = matrix.apply(&simples[i]);
            let j = simples
                .iter()
                .position(|s| *s == img)
                .ok_or_else(|| Error::SemidirectViolation(format!("{matrix:?} moves simple root {} off the base", i + 1)))?;
            if dual.apply(datum.simple_coroot(i)) != datum.simple_coroot(j) {
                return Err(Error::SemidirectViolation(format!("{matrix:?} does not respect coroot {}", i + 1)));
            }
            perm.push(j);
        }
        Ok(DiagramAutomorphism { matrix, perm })
    }

    pub fn identity(datum: &BasedRootDatum) -> Self {
        DiagramAutomorphism { matrix: IMatrix::identity(datum.rank()), perm: (0..datum.num_simples()).collect() }
    }

    pub fn matrix(&self) -> &IMatrix {
        &self.matrix
    }

    pub fn automorphism(&self) -> LatticeAutomorphism {
        LatticeAutomorphism::new(self.matrix.clone()).expect("checked at construction")
    }

    /// `r(α_i) = α_{perm[i]}`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism {
            matrix: self.matrix.mul(&other.matrix),
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        }
    }

    pub fn inverse(&self) -> DiagramAutomorphism {
        let mut perm = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j] = i;
        }
        DiagramAutomorphism { matrix: self.matrix.inverse().expect("unimodular"), perm }
    }

    /// `r w r⁻¹`.
    pub fn conjugate(&self, datum: &BasedRootDatum, w: &WeylElement) -> WeylElement {
        let inv = self.matrix.inverse().expect("unimodular");
        WeylElement::from_matrix(datum, self.matrix.mul(w.matrix()).mul(&inv))
    }
}

/// Closure of a finite set of automorphisms under composition.
pub fn generate_group(datum: &BasedRootDatum, gens: &[DiagramAutomorphism], cap: usize) -> Result<Vec<DiagramAutomorphism>> {
    let mut out = vec![DiagramAutomorphism::identity(datum)];
    let mut seen: HashSet<IMatrix> = out.iter().map(|r| r.matrix.clone()).collect();
    let mut k = 0;
    while k < out.len() {
        for g in gens {
            let h = out[k].compose(g);
            if seen.insert(h.matrix.clone()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                out.push(h);
            }
        }
        k += 1;
    }
    Ok(out)
}

/// A fully enumerated Weyl group with multiplication tables by simple reflections.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: BasedRootDatum,
    elements: Vec<WeylElement>,
    index: HashMap<IMatrix, usize>,
    words: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl WeylGroup {
    pub fn new(datum: &BasedRootDatum, cap: usize) -> Result<Self> {
        let n = datum.num_simples();
        let simples: Vec<IMatrix> = (0..n).map(|i| datum.simple_reflection(i)).collect();
        let pos = datum.positive_set();
        let id = IMatrix::identity(datum.rank());
        let mut elements = vec![WeylElement { matrix: id.clone(), length: 0 }];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let mut row = Vec::with_capacity(n);
            for s in &simples {
                let m = elements[k].matrix.mul(s);
                let j = match index.get(&m) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::OrbitCapExceeded { cap });
                        }
                        let length = inversion_count(&pos, &m);
                        elements.push(WeylElement { matrix: m.clone(), length });
                        index.insert(m, elements.len() - 1);
                        queue.push_back(elements.len() - 1);
                        elements.len() - 1
                    }
                };
                row.push(j);
            }
            if right.len() <= k {
                right.resize(k + 1, Vec::new());
            }
            right[k] = row;
        }
        let count = elements.len();
        let mut left = vec![vec![0; n]; count];
        for (k, e) in elements.iter().enumerate() {
            for (i, s) in simples.iter().enumerate() {
                left[k][i] = index[&s.mul(&e.matrix)];
            }
        }
        let inverse = elements.iter().map(|e| index[&e.matrix.inverse().expect("unimodular")]).collect();
        let words = elements.iter().map(|e| e.reduced_word(datum)).collect();
        Ok(WeylGroup { datum: datum.clone(), elements, index, words, left, right, inverse })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &WeylElement {
        &self.elements[k]
    }

    pub fn index_of(&self, m: &IMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn length(&self, k: usize) -> usize {
        self.elements[k].length
    }

    /// Lex-minimal reduced word, 0-based.
    pub fn word(&self, k: usize) -> &[usize] {
        &self.words[k]
    }

    pub fn simple_index(&self, i: usize) -> usize {
        self.right[0][i]
    }

    /// Index of `s_i · w_k`.
    pub fn left_mul(&self, i: usize, k: usize) -> usize {
        self.left[k][i]
    }

    /// Index of `w_k · s_i`.
    pub fn right_mul(&self, k: usize, i: usize) -> usize {
        self.right[k][i]
    }

    pub fn inverse(&self, k: usize) -> usize {
        self.inverse[k]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.words[a].iter().rev().fold(b, |acc, &i| self.left[acc][i])
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &i| self.right[acc][i])
    }

    pub fn longest(&self) -> usize {
        (0..self.order()).max_by_key(|&k| self.elements[k].length).unwrap_or(0)
    }

    /// Index of `r⁻¹ w_k r`.
    pub fn conjugate_by_inverse(&self, r: &DiagramAutomorphism, k: usize) -> usize {
        let inv = r.inverse();
        let m = inv.matrix().mul(self.elements[k].matrix()).mul(r.matrix());
        self.index[&m]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_standard_datum, CartanType, ComponentSpec};

    fn datum(specs: &[(CartanType, usize)]) -> BasedRootDatum {
        let specs: Vec<ComponentSpec> = specs.iter().map(|&(l, r)| ComponentSpec::new(l, r)).collect();
        build_standard_datum(&specs).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let d = datum(&[(CartanType::A, 2)]);
        let s1 = WeylElement::simple(&d, 0);
        let s2 = WeylElement::simple(&d, 1);
        assert!(s1.mul(&d, &s1).is_identity());
        assert_eq!(s1.mul(&d, &s2).length(), 2);
        let w = s1.mul(&d, &s2);
        assert!(w.mul(&d, &w.inv()).is_identity());
    }

    #[test]
    fn reduced_words() {
        let d = datum(&[(CartanType::A, 2)]);
        assert_eq!(WeylElement::identity(&d).reduced_word(&d), Vec::<usize>::new());
        assert_eq!(WeylElement::simple(&d, 0).reduced_word(&d), vec![0]);
        assert_eq!(longest_element(&d).reduced_word(&d), vec![0, 1, 0]);
    }

    #[test]
    fn longest_lengths() {
        let b2 = datum(&[(CartanType::B, 2)]);
        assert_eq!(longest_element(&b2).length(), 4);
        let a1 = datum(&[(CartanType::A, 1)]);
        assert_eq!(longest_element(&a1), WeylElement::simple(&a1, 0));
        let aa = datum(&[(CartanType::A, 1), (CartanType::A, 1)]);
        assert_eq!(longest_element(&aa).reduced_word(&aa), vec![0, 1]);
    }

    #[test]
    fn enumeration_orders() {
        for (l, r, n) in [(CartanType::A, 1, 2), (CartanType::B, 2, 8), (CartanType::B, 3, 48), (CartanType::D, 3, 24)] {
            assert_eq!(enumerate(&datum(&[(l, r)]), DEFAULT_CAP).unwrap().len(), n);
        }
        let err = enumerate(&datum(&[(CartanType::B, 3)]), 10).unwrap_err();
        assert_eq!(err, Error::OrbitCapExceeded { cap: 10 });
    }

    #[test]
    fn group_tables_agree_with_matrices() {
        let d = datum(&[(CartanType::B, 2)]);
        let g = WeylGroup::new(&d, DEFAULT_CAP).unwrap();
        for a in 0..g.order() {
            assert_eq!(g.from_word(g.word(a)), a);
            for b in 0..g.order() {
                let m = g.element(a).matrix().mul(g.element(b).matrix());
                assert_eq!(g.index_of(&m), Some(g.mul(a, b)));
            }
        }
    }
}

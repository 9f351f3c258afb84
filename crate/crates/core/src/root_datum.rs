//! Based root data in explicit coordinates.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{IMatrix, LatticeAutomorphism};

/// Root closure stops here; anything larger is certainly not finite type at desk scale.
const ROOT_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
}

impl CartanType {
    pub fn parse(letter: &str) -> Result<Self> {
        match letter.trim() {
            "A" | "a" => Ok(CartanType::A),
            "B" | "b" => Ok(CartanType::B),
            "C" | "c" => Ok(CartanType::C),
            "D" | "d" => Ok(CartanType::D),
            other => Err(Error::UnsupportedType(other.to_string())),
        }
    }

    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
        }
    }
}

/// One irreducible piece requested from [`build_standard_datum`].
///
/// `A_r` occupies `r + 1` coordinates (roots `e_i − e_j`), the other types
/// occupy `rank` coordinates. `A_0` and `D_1` are empty systems on one
/// coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub letter: CartanType,
    pub rank: usize,
}

impl ComponentSpec {
    pub fn new(letter: CartanType, rank: usize) -> Self {
        ComponentSpec { letter, rank }
    }

    pub fn coordinates(&self) -> usize {
        match self.letter {
            CartanType::A => self.rank + 1,
            _ => self.rank,
        }
    }

    pub fn num_simples(&self) -> usize {
        match (self.letter, self.rank) {
            (CartanType::D, 1) => 0,
            (_, r) => r,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.num_simples() == 0
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u64 {
        let fact = |n: usize| (1..=n as u64).product::<u64>();
        match self.letter {
            CartanType::A => fact(self.rank + 1),
            CartanType::B | CartanType::C => (1u64 << self.rank) * fact(self.rank),
            CartanType::D if self.rank == 1 => 1,
            CartanType::D => (1u64 << (self.rank - 1)) * fact(self.rank),
        }
    }

    /// Positive root count.
    pub fn num_positive_roots(&self) -> usize {
        let r = self.rank;
        match self.letter {
            CartanType::A => r * (r + 1) / 2,
            CartanType::B | CartanType::C => r * r,
            CartanType::D => r * (r - 1),
        }
    }

    fn simple_system(&self) -> (Vec<Vec<i32>>, Vec<Vec<i32>>) {
        let n = self.coordinates();
        let e = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        let diff = |i: usize, j: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v[j] = -1;
            v
        };
        let scale = |v: Vec<i32>, k: i32| v.into_iter().map(|x| x * k).collect::<Vec<_>>();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        match self.letter {
            CartanType::A => {
                for i in 0..self.rank {
                    roots.push(diff(i, i + 1));
                    coroots.push(diff(i, i + 1));
                }
            }
            CartanType::B => {
                for i in 0..self.rank - 1 {
                    roots.push(diff(i, i + 1));
                    coroots.push(diff(i, i + 1));
                }
                roots.push(e(self.rank - 1));
                coroots.push(scale(e(self.rank - 1), 2));
            }
            CartanType::C => {
                for i in 0..self.rank - 1 {
                    roots.push(diff(i, i + 1));
                    coroots.push(diff(i, i + 1));
                }
                roots.push(scale(e(self.rank - 1), 2));
                coroots.push(e(self.rank - 1));
            }
            CartanType::D => {
                if self.rank >= 2 {
                    for i in 0..self.rank - 1 {
                        roots.push(diff(i, i + 1));
                        coroots.push(diff(i, i + 1));
                    }
                    let mut last = vec![0; n];
                    last[self.rank - 2] = 1;
                    last[self.rank - 1] = 1;
                    roots.push(last.clone());
                    coroots.push(last);
                }
            }
        }
        (roots, coroots)
    }
}

impl fmt::Display for ComponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter.letter(), self.rank)
    }
}

/// Per-component data of a based root datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInfo {
    pub letter: CartanType,
    pub rank: usize,
    /// Indices into the simple-root list, in Bourbaki order.
    pub simples: Vec<usize>,
    /// Conjugacy-class label of each simple (the smallest simple index of its class).
    pub param_class: Vec<usize>,
    /// `α∨ ∈ 2Λ∨` for each simple.
    pub doubled: Vec<bool>,
    /// Coordinate slice owned by the component, when built from specs.
    pub coordinates: Option<Range<usize>>,
}

impl ComponentInfo {
    pub fn spec(&self) -> ComponentSpec {
        ComponentSpec::new(self.letter, self.rank)
    }
}

/// `(Λ, Σ, Λ∨, Σ∨, Δ)` with `Λ = Z^rank` and the dot-product pairing.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    rank: usize,
    roots: Vec<Vec<i32>>,
    coroots: Vec<Vec<i32>>,
    simples: Vec<usize>,
    components: Vec<ComponentInfo>,
    positive: Vec<usize>,
    index: HashMap<Vec<i32>, usize>,
}

impl PartialEq for BasedRootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.simple_roots() == other.simple_roots()
            && self.simple_coroots() == other.simple_coroots()
            && self.roots.iter().collect::<BTreeSet<_>>() == other.roots.iter().collect::<BTreeSet<_>>()
    }
}

fn dot(a: &[i32], b: &[i32]) -> i32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn reflect(v: &[i32], root: &[i32], coroot: &[i32]) -> Vec<i32> {
    let k = dot(v, coroot);
    v.iter().zip(root).map(|(x, r)| x - k * r).collect()
}

/// Positive roots and coroots generated from a simple system.
fn positive_closure(simple_roots: &[Vec<i32>], simple_coroots: &[Vec<i32>]) -> (Vec<Vec<i32>>, Vec<Vec<i32>>) {
    let mut roots: Vec<Vec<i32>> = Vec::new();
    let mut coroots: Vec<Vec<i32>> = Vec::new();
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::new();
    for (r, c) in simple_roots.iter().zip(simple_coroots) {
        if seen.insert(r.clone()) {
            roots.push(r.clone());
            coroots.push(c.clone());
            queue.push_back(roots.len() - 1);
        }
    }
    while let Some(k) = queue.pop_front() {
        if roots.len() > ROOT_CAP {
            break;
        }
        for (a, av) in simple_roots.iter().zip(simple_coroots) {
            if roots[k] == *a {
                continue;
            }
            let g = reflect(&roots[k], a, av);
            if g.iter().all(|&x| x == 0) || seen.contains(&g) {
                continue;
            }
            let gv = reflect(&coroots[k], av, a);
            seen.insert(g.clone());
            roots.push(g);
            coroots.push(gv);
            queue.push_back(roots.len() - 1);
        }
    }
    (roots, coroots)
}

impl BasedRootDatum {
    /// Assembles a datum from explicit lists without validating it.
    ///
    /// `simples` indexes into `roots`. Components are recovered from the
    /// Dynkin diagram; unclassifiable pieces are left out (see
    /// [`validate_datum`]).
    pub fn from_parts(rank: usize, roots: Vec<Vec<i32>>, coroots: Vec<Vec<i32>>, simples: Vec<usize>) -> Self {
        let mut d = BasedRootDatum {
            rank,
            roots,
            coroots,
            simples,
            components: Vec::new(),
            positive: Vec::new(),
            index: HashMap::new(),
        };
        d.reindex();
        d.components = d.dynkin_components().unwrap_or_default();
        d
    }

    fn from_simple_system(
        rank: usize,
        simple_roots: Vec<Vec<i32>>,
        simple_coroots: Vec<Vec<i32>>,
    ) -> (Vec<Vec<i32>>, Vec<Vec<i32>>, Vec<usize>) {
        let (pos, posv) = positive_closure(&simple_roots, &simple_coroots);
        let mut roots = pos.clone();
        let mut coroots = posv.clone();
        for (r, c) in pos.iter().zip(&posv) {
            roots.push(r.iter().map(|x| -x).collect());
            coroots.push(c.iter().map(|x| -x).collect());
        }
        let _ = rank;
        let simples = (0..simple_roots.len()).collect();
        (roots, coroots, simples)
    }

    fn reindex(&mut self) {
        self.index = self.roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let sr: Vec<Vec<i32>> = self.simples.iter().map(|&i| self.roots[i].clone()).collect();
        let sc: Vec<Vec<i32>> = self.simples.iter().map(|&i| self.coroots[i].clone()).collect();
        let (pos, _) = positive_closure(&sr, &sc);
        self.positive = pos.iter().filter_map(|r| self.index.get(r).copied()).collect();
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i32>] {
        &self.coroots
    }

    pub fn num_simples(&self) -> usize {
        self.simples.len()
    }

    pub fn simple_root(&self, i: usize) -> &[i32] {
        &self.roots[self.simples[i]]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i32] {
        &self.coroots[self.simples[i]]
    }

    pub fn simple_roots(&self) -> Vec<Vec<i32>> {
        self.simples.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn simple_coroots(&self) -> Vec<Vec<i32>> {
        self.simples.iter().map(|&i| self.coroots[i].clone()).collect()
    }

    pub fn components(&self) -> &[ComponentInfo] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    /// The positive system determined by the base.
    pub fn positive_roots(&self) -> Vec<Vec<i32>> {
        self.positive.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn positive_coroots(&self) -> Vec<Vec<i32>> {
        self.positive.iter().map(|&i| self.coroots[i].clone()).collect()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }

    /// `Some(true)` for a positive root, `Some(false)` for a negative one.
    pub fn root_sign(&self, v: &[i32]) -> Option<bool> {
        let i = *self.index.get(v)?;
        Some(self.positive.contains(&i))
    }

    pub(crate) fn positive_set(&self) -> HashSet<Vec<i32>> {
        self.positive.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn coroot_of(&self, root: &[i32]) -> Option<&[i32]> {
        self.index.get(root).map(|&i| self.coroots[i].as_slice())
    }

    /// `λ ↦ λ − ⟨λ, α∨⟩ α`.
    pub fn reflection_matrix(&self, root: &[i32]) -> Result<LatticeAutomorphism> {
        let coroot = self.coroot_of(root).ok_or_else(|| Error::NotARoot(root.to_vec()))?;
        LatticeAutomorphism::new(IMatrix::reflection(root, coroot))
    }

    pub fn simple_reflection(&self, i: usize) -> IMatrix {
        IMatrix::reflection(self.simple_root(i), self.simple_coroot(i))
    }

    /// `⟨α_i, α_j∨⟩`.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i32 {
        dot(self.simple_root(i), self.simple_coroot(j))
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i32>> {
        let n = self.num_simples();
        (0..n).map(|i| (0..n).map(|j| self.cartan_entry(i, j)).collect()).collect()
    }

    /// Order of `s_i s_j` (1 when `i == j`).
    pub fn coxeter_exponent(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.cartan_entry(i, j) * self.cartan_entry(j, i) {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => 0,
        }
    }

    pub fn is_doubled_coroot(&self, i: usize) -> Result<bool> {
        if i >= self.num_simples() {
            return Err(Error::SimpleIndexOutOfRange { index: i, count: self.num_simples() });
        }
        Ok(self.simple_coroot(i).iter().all(|x| x % 2 == 0))
    }

    /// Conjugacy-class label of a simple root (smallest simple index in its class).
    pub fn param_class(&self, i: usize) -> usize {
        self.components
            .iter()
            .find_map(|c| c.simples.iter().position(|&s| s == i).map(|k| c.param_class[k]))
            .unwrap_or(i)
    }

    /// The sub-datum on the same lattice spanned by the given simple roots.
    pub fn sub_datum(&self, subset: &[usize]) -> Result<BasedRootDatum> {
        let mut idx: Vec<usize> = subset.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.num_simples()) {
            return Err(Error::SimpleIndexOutOfRange { index: bad, count: self.num_simples() });
        }
        let sr = idx.iter().map(|&i| self.simple_root(i).to_vec()).collect();
        let sc = idx.iter().map(|&i| self.simple_coroot(i).to_vec()).collect();
        let (roots, coroots, simples) = Self::from_simple_system(self.rank, sr, sc);
        let mut d = BasedRootDatum {
            rank: self.rank,
            roots,
            coroots,
            simples,
            components: Vec::new(),
            positive: Vec::new(),
            index: HashMap::new(),
        };
        d.reindex();
        d.components = d.dynkin_components()?;
        Ok(d)
    }

    fn dynkin_neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.num_simples()).filter(|&j| j != i && self.cartan_entry(i, j) != 0).collect()
    }

    /// Connected components of the Dynkin diagram, each classified.
    fn dynkin_components(&self) -> Result<Vec<ComponentInfo>> {
        let n = self.num_simples();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                for j in self.dynkin_neighbours(comp[k]) {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            let (letter, ordered) = self.classify_connected(&comp)?;
            out.push(self.component_info(letter, ordered, None));
        }
        Ok(out)
    }

    fn component_info(&self, letter: CartanType, simples: Vec<usize>, coordinates: Option<Range<usize>>) -> ComponentInfo {
        let rank = match letter {
            CartanType::D if simples.is_empty() => 1,
            _ => simples.len(),
        };
        // Conjugacy classes: connected through single bonds.
        let mut class: Vec<usize> = simples.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for a in 0..simples.len() {
                for b in 0..simples.len() {
                    let (i, j) = (simples[a], simples[b]);
                    if i != j && self.cartan_entry(i, j) * self.cartan_entry(j, i) == 1 && class[b] > class[a] {
                        class[b] = class[a];
                        changed = true;
                    }
                }
            }
        }
        let doubled = simples.iter().map(|&i| self.simple_coroot(i).iter().all(|x| x % 2 == 0)).collect();
        ComponentInfo { letter, rank, simples, param_class: class, doubled, coordinates }
    }

    /// Cartan type of a connected set of simples, with the simples in Bourbaki order.
    fn classify_connected(&self, comp: &[usize]) -> Result<(CartanType, Vec<usize>)> {
        let unsupported = |what: &str| Err(Error::UnsupportedType(what.to_string()));
        if comp.len() == 1 {
            let i = comp[0];
            let letter = if self.simple_coroot(i).iter().all(|x| x % 2 == 0) { CartanType::B } else { CartanType::A };
            return Ok((letter, vec![i]));
        }
        let mut double = Vec::new();
        for (a, &i) in comp.iter().enumerate() {
            for &j in &comp[a + 1..] {
                match self.cartan_entry(i, j) * self.cartan_entry(j, i) {
                    0 | 1 => {}
                    2 => double.push((i, j)),
                    3 => return unsupported("G2"),
                    _ => return unsupported("non-finite Cartan matrix"),
                }
            }
        }
        let deg = |i: usize| self.dynkin_neighbours(i).len();
        let edges: usize = comp.iter().map(|&i| deg(i)).sum::<usize>() / 2;
        if edges != comp.len() - 1 {
            return unsupported("affine or cyclic diagram");
        }
        let branch: Vec<usize> = comp.iter().copied().filter(|&i| deg(i) >= 3).collect();
        let walk = |start: usize| -> Vec<usize> {
            let mut path = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            loop {
                let next = self.dynkin_neighbours(cur).into_iter().find(|&j| j != prev);
                match next {
                    Some(j) => {
                        prev = cur;
                        cur = j;
                        path.push(j);
                    }
                    None => return path,
                }
            }
        };
        match (double.len(), branch.len()) {
            (0, 0) => {
                let end = *comp.iter().find(|&&i| deg(i) == 1).unwrap();
                Ok((CartanType::A, walk(end)))
            }
            (1, 0) => {
                let (i, j) = double[0];
                let ends: Vec<usize> = comp.iter().copied().filter(|&k| deg(k) == 1).collect();
                // The double bond must sit at an end of the path.
                let tail = if deg(i) == 1 && comp.len() > 2 {
                    i
                } else if deg(j) == 1 && comp.len() > 2 {
                    j
                } else if comp.len() == 2 {
                    // B2 = C2: put the short root last.
                    if self.cartan_entry(i, j) == -1 { i } else { j }
                } else {
                    return unsupported("F4");
                };
                let start = *ends.iter().find(|&&k| k != tail).unwrap();
                let path = walk(start);
                let (prev, last) = (path[path.len() - 2], path[path.len() - 1]);
                // Short end root α has ⟨α, β∨⟩ = −1 against its long neighbour β.
                let letter = if self.cartan_entry(last, prev) == -1 { CartanType::B } else { CartanType::C };
                Ok((letter, path))
            }
            (0, 1) => {
                let b = branch[0];
                if deg(b) != 3 {
                    return unsupported("star with more than three arms");
                }
                let arms: Vec<Vec<usize>> = self
                    .dynkin_neighbours(b)
                    .into_iter()
                    .map(|j| {
                        let mut arm = vec![j];
                        let mut prev = b;
                        let mut cur = j;
                        while let Some(k) = self.dynkin_neighbours(cur).into_iter().find(|&k| k != prev) {
                            arm.push(k);
                            prev = cur;
                            cur = k;
                        }
                        arm
                    })
                    .collect();
                let short: Vec<&Vec<usize>> = arms.iter().filter(|a| a.len() == 1).collect();
                if short.len() < 2 {
                    return unsupported("E");
                }
                let long = arms.iter().max_by_key(|a| a.len()).unwrap();
                let mut path: Vec<usize> = long.iter().rev().copied().collect();
                path.push(b);
                let mut leaves: Vec<usize> = arms.iter().filter(|a| !std::ptr::eq(*a, long)).map(|a| a[0]).collect();
                leaves.sort_unstable();
                path.extend(leaves);
                Ok((CartanType::D, path))
            }
            _ => unsupported("non-ABCD diagram"),
        }
    }
}

/// Standard realization of a direct sum of irreducible types.
///
/// Components are laid out on consecutive coordinate slices; `B_d` has
/// short roots `±e_i` with coroots `±2e_i`, `C_d` has long roots `±2e_i`
/// with coroots `±e_i`.
pub fn build_standard_datum(specs: &[ComponentSpec]) -> Result<BasedRootDatum> {
    let rank: usize = specs.iter().map(|s| s.coordinates()).sum();
    let mut simple_roots = Vec::new();
    let mut simple_coroots = Vec::new();
    let mut layout = Vec::new();
    let mut offset = 0;
    for spec in specs {
        match spec.letter {
            CartanType::B | CartanType::C if spec.rank == 0 => {
                return Err(Error::UnsupportedType(format!("{spec}")));
            }
            CartanType::D if spec.rank == 0 => return Err(Error::UnsupportedType(format!("{spec}"))),
            _ => {}
        }
        let (r, c) = spec.simple_system();
        let pad = |v: Vec<i32>| {
            let mut out = vec![0; rank];
            out[offset..offset + v.len()].copy_from_slice(&v);
            out
        };
        let first = simple_roots.len();
        simple_roots.extend(r.into_iter().map(pad));
        simple_coroots.extend(c.into_iter().map(pad));
        layout.push((first..simple_roots.len(), offset..offset + spec.coordinates()));
        offset += spec.coordinates();
    }
    let (roots, coroots, simples) = BasedRootDatum::from_simple_system(rank, simple_roots, simple_coroots);
    let mut d = BasedRootDatum {
        rank,
        roots,
        coroots,
        simples,
        components: Vec::new(),
        positive: Vec::new(),
        index: HashMap::new(),
    };
    d.reindex();
    d.components = specs
        .iter()
        .zip(layout)
        .map(|(spec, (simples, coords))| {
            let mut info = d.component_info(spec.letter, simples.collect(), Some(coords));
            info.rank = spec.rank;
            info
        })
        .collect();
    Ok(d)
}

/// Outcome of [`validate_datum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumReport {
    pub passed: bool,
    /// First violated invariant.
    pub failure: Option<String>,
}

impl DatumReport {
    fn fail(msg: String) -> Self {
        DatumReport { passed: false, failure: Some(msg) }
    }
}

/// Checks the root-datum axioms and reports the first violation.
pub fn validate_datum(d: &BasedRootDatum) -> DatumReport {
    if d.roots.len() != d.coroots.len() {
        return DatumReport::fail("roots and coroots have different lengths".into());
    }
    if d.roots.iter().chain(&d.coroots).any(|v| v.len() != d.rank) {
        return DatumReport::fail("vector of wrong rank".into());
    }
    let set: HashSet<&Vec<i32>> = d.roots.iter().collect();
    for r in &d.roots {
        let twice: Vec<i32> = r.iter().map(|x| 2 * x).collect();
        if set.contains(&twice) {
            return DatumReport::fail(format!("non-reduced: {r:?} and {twice:?} are both roots"));
        }
    }
    for (r, c) in d.roots.iter().zip(&d.coroots) {
        let p = dot(r, c);
        if p != 2 {
            return DatumReport::fail(format!("pairing <{r:?}, {c:?}> = {p}, expected 2"));
        }
    }
    let coset: HashSet<&Vec<i32>> = d.coroots.iter().collect();
    for (r, c) in d.roots.iter().zip(&d.coroots) {
        for (x, xv) in d.roots.iter().zip(&d.coroots) {
            if !set.contains(&reflect(x, r, c)) {
                return DatumReport::fail(format!("reflection in {r:?} does not permute the roots"));
            }
            if !coset.contains(&reflect(xv, c, r)) {
                return DatumReport::fail(format!("reflection in {r:?} does not permute the coroots"));
            }
        }
    }
    let sr = d.simple_roots();
    let sc = d.simple_coroots();
    let (pos, _) = positive_closure(&sr, &sc);
    let mut generated: HashSet<Vec<i32>> = pos.iter().cloned().collect();
    generated.extend(pos.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    if let Some(r) = d.roots.iter().find(|r| !generated.contains(*r)) {
        return DatumReport::fail(format!("root {r:?} is not a W-translate of a simple root"));
    }
    if generated.len() != d.roots.len() {
        return DatumReport::fail("root list is not closed under the Weyl group".into());
    }
    if let Err(e) = d.dynkin_components() {
        return DatumReport::fail(format!("Cartan matrix not of type A/B/C/D: {e}"));
    }
    DatumReport { passed: true, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(specs: &[(CartanType, usize)]) -> BasedRootDatum {
        let specs: Vec<ComponentSpec> = specs.iter().map(|&(l, r)| ComponentSpec::new(l, r)).collect();
        build_standard_datum(&specs).unwrap()
    }

    #[test]
    fn a1_smallest() {
        let d = datum(&[(CartanType::A, 1)]);
        assert_eq!(d.roots().len(), 2);
        assert_eq!(dot(d.simple_root(0), d.simple_coroot(0)), 2);
        assert!(!d.is_doubled_coroot(0).unwrap());
    }

    #[test]
    fn b2_positive_roots_and_doubling() {
        let d = datum(&[(CartanType::B, 2)]);
        let pos: BTreeSet<Vec<i32>> = d.positive_roots().into_iter().collect();
        let expected: BTreeSet<Vec<i32>> = [vec![1, -1], vec![0, 1], vec![1, 0], vec![1, 1]].into_iter().collect();
        assert_eq!(pos, expected);
        assert_eq!(d.coroot_of(&[0, 1]).unwrap(), &[0, 2]);
        assert!(d.is_doubled_coroot(1).unwrap());
        assert!(!d.is_doubled_coroot(0).unwrap());
        assert!(d.is_doubled_coroot(2).is_err());
    }

    #[test]
    fn direct_sum_is_orthogonal() {
        let d = datum(&[(CartanType::A, 2), (CartanType::A, 1)]);
        assert_eq!(d.rank(), 5);
        assert_eq!(d.num_positive_roots(), 4);
        assert_eq!(d.cartan_entry(0, 2), 0);
        assert_eq!(d.components().len(), 2);
    }

    #[test]
    fn reflection_examples() {
        let d = datum(&[(CartanType::B, 2)]);
        let s = d.reflection_matrix(&[0, 1]).unwrap();
        assert_eq!(s.matrix().apply(&[3, 4]), vec![3, -4]);
        assert!(s.compose(&s).matrix().is_identity());
        assert_eq!(d.reflection_matrix(&[1, 2]).unwrap_err(), Error::NotARoot(vec![1, 2]));
        let a1 = datum(&[(CartanType::B, 1)]);
        assert_eq!(a1.reflection_matrix(&[1]).unwrap().matrix(), &IMatrix::diagonal(&[-1]));
    }

    #[test]
    fn degenerate_components() {
        let d = datum(&[(CartanType::D, 1), (CartanType::A, 0), (CartanType::D, 2)]);
        assert_eq!(d.rank(), 4);
        assert_eq!(d.num_simples(), 2);
        assert_eq!(d.num_positive_roots(), 2);
        assert_eq!(d.components()[2].param_class, vec![0, 1]);
    }

    #[test]
    fn param_classes() {
        let b3 = datum(&[(CartanType::B, 3)]);
        assert_eq!(b3.components()[0].param_class, vec![0, 0, 2]);
        assert_eq!(b3.components()[0].doubled, vec![false, false, true]);
        let c3 = datum(&[(CartanType::C, 3)]);
        assert_eq!(c3.components()[0].doubled, vec![false, false, false]);
    }

    #[test]
    fn dynkin_recovers_types() {
        for (l, r) in [(CartanType::A, 3), (CartanType::B, 3), (CartanType::C, 3), (CartanType::D, 4), (CartanType::B, 2)] {
            let d = datum(&[(l, r)]);
            let comps = d.dynkin_components().unwrap();
            assert_eq!(comps.len(), 1);
            assert_eq!(comps[0].letter, l, "{l:?}{r}");
        }
    }

    #[test]
    fn validation_planted_defects() {
        let d = datum(&[(CartanType::B, 2)]);
        assert!(validate_datum(&d).passed);
        let mut roots = d.roots().to_vec();
        let mut coroots = d.coroots().to_vec();
        roots.push(vec![0, 2]);
        coroots.push(vec![0, 1]);
        let simples = (0..d.num_simples()).map(|i| d.index[d.simple_root(i)]).collect();
        let bad = BasedRootDatum::from_parts(2, roots, coroots, simples);
        let rep = validate_datum(&bad);
        assert!(!rep.passed);
        assert!(rep.failure.unwrap().starts_with("non-reduced"));

        let a1 = datum(&[(CartanType::A, 1)]);
        let mut coroots = a1.coroots().to_vec();
        coroots[0] = vec![2, -1];
        let bad = BasedRootDatum::from_parts(2, a1.roots().to_vec(), coroots, vec![0]);
        assert!(validate_datum(&bad).failure.unwrap().starts_with("pairing"));
    }

    #[test]
    fn unsupported_letter() {
        assert_eq!(CartanType::parse("E").unwrap_err(), Error::UnsupportedType("E".into()));
    }
}

//! From an inertial descriptor to component types, R-group, root datum and
//! Hecke parameters.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IMatrix;
use crate::params::{ParameterSet, SimpleParameter};
use crate::root_datum::{build_standard_datum, BasedRootDatum, CartanType, ComponentSpec};
use crate::scalar::{Rational, ScalarConfig};
use crate::weyl::{generate_group, DiagramAutomorphism, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Symplectic,
    OrthogonalOdd,
    OrthogonalEven,
    GLInnerForm,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Symplectic, Family::OrthogonalOdd, Family::OrthogonalEven, Family::GLInnerForm];

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "Symplectic" => Some(Family::Symplectic),
            "OrthogonalOdd" => Some(Family::OrthogonalOdd),
            "OrthogonalEven" => Some(Family::OrthogonalEven),
            "GLInnerForm" => Some(Family::GLInnerForm),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MuClass {
    #[serde(rename = "POLE")]
    Pole,
    #[serde(rename = "SELFDUAL_NOPOLE")]
    SelfDualNoPole,
    #[serde(rename = "OTHER")]
    Other,
}

impl MuClass {
    pub const ALL: [MuClass; 3] = [MuClass::Pole, MuClass::SelfDualNoPole, MuClass::Other];

    pub fn parse(s: &str) -> Option<MuClass> {
        match s {
            "POLE" => Some(MuClass::Pole),
            "SELFDUAL_NOPOLE" => Some(MuClass::SelfDualNoPole),
            "OTHER" => Some(MuClass::Other),
            _ => None,
        }
    }
}

/// One family of equal GL factors `GL_{k_i}^{d_i}` in the Levi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub k_i: u32,
    pub d_i: u32,
    pub mu_class: MuClass,
    pub t_i: u32,
    pub a_gl: Rational,
    pub a_end: Rational,
    pub b_end: Rational,
    pub k_even: bool,
    pub tau_outer_invariant: bool,
}

impl Block {
    /// A block with unit parameters and flags consistent with `k_i`.
    pub fn simple(label: &str, k_i: u32, d_i: u32, mu_class: MuClass) -> Self {
        let one = Rational::from_integer(1.into());
        Block {
            label: label.to_string(),
            k_i,
            d_i,
            mu_class,
            t_i: 1,
            a_gl: one.clone(),
            a_end: one,
            b_end: Rational::from_integer(0.into()),
            k_even: k_i.is_multiple_of(2),
            tau_outer_invariant: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InertialDescriptor {
    pub family: Family,
    pub anchor_rank: u32,
    pub blocks: Vec<Block>,
}

impl InertialDescriptor {
    /// Structural checks that do not involve the parameter field.
    pub fn validate_shape(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescriptor(m));
        if self.blocks.is_empty() {
            return bad("at least one block is required".into());
        }
        if self.family == Family::GLInnerForm && self.anchor_rank != 0 {
            return bad("GLInnerForm has no anchor factor; anchor_rank must be 0".into());
        }
        let mut labels = HashSet::new();
        let zero = Rational::from_integer(0.into());
        for b in &self.blocks {
            if !labels.insert(b.label.as_str()) {
                return bad(format!("duplicate block label {:?}", b.label));
            }
            if b.k_i == 0 || b.d_i == 0 || b.t_i == 0 {
                return bad(format!("block {:?}: k_i, d_i and t_i must be at least 1", b.label));
            }
            if b.a_gl <= zero {
                return bad(format!("block {:?}: a_gl must be positive", b.label));
            }
            if b.b_end < zero || b.a_end < b.b_end {
                return bad(format!("block {:?}: need a_end >= b_end >= 0", b.label));
            }
            if b.mu_class == MuClass::Pole && b.a_end <= zero {
                return bad(format!("block {:?}: POLE requires a_end > 0", b.label));
            }
            if b.k_even != (b.k_i % 2 == 0) {
                return bad(format!("block {:?}: k_even disagrees with k_i = {}", b.label, b.k_i));
            }
            if b.tau_outer_invariant && (self.family == Family::GLInnerForm || self.anchor_rank == 0) {
                return bad(format!("block {:?}: tau_outer_invariant needs a nontrivial anchor factor", b.label));
            }
        }
        Ok(())
    }

    /// Shape checks plus representability of every exponent at denominator `D`.
    pub fn validate(&self, config: &ScalarConfig) -> Result<()> {
        self.validate_shape()?;
        for b in &self.blocks {
            for r in [&b.a_gl, &b.a_end, &b.b_end] {
                config.qpow(r)?;
            }
        }
        Ok(())
    }
}

/// Component type of each block, before the C→B flip.
pub fn classify_components(desc: &InertialDescriptor) -> Result<Vec<ComponentSpec>> {
    desc.validate_shape()?;
    let k = desc.anchor_rank;
    desc.blocks
        .iter()
        .map(|b| {
            let d = b.d_i as usize;
            let a = ComponentSpec::new(CartanType::A, d - 1);
            let spec = match desc.family {
                Family::GLInnerForm => a,
                Family::OrthogonalOdd => by_mu(b.mu_class, CartanType::B, d),
                _ if k != 0 => by_mu(b.mu_class, CartanType::B, d),
                Family::Symplectic => by_mu(b.mu_class, CartanType::C, d),
                Family::OrthogonalEven if b.k_i >= 2 => by_mu(b.mu_class, CartanType::C, d),
                Family::OrthogonalEven => match b.mu_class {
                    MuClass::Pole => {
                        return Err(Error::InvalidDescriptor(format!(
                            "block {:?}: POLE is impossible for OrthogonalEven with k = 0 and k_i = 1",
                            b.label
                        )))
                    }
                    m => by_mu(m, CartanType::B, d),
                },
            };
            Ok(spec)
        })
        .collect()
}

fn by_mu(mu: MuClass, pole_type: CartanType, d: usize) -> ComponentSpec {
    match mu {
        MuClass::Pole => ComponentSpec::new(pole_type, d),
        MuClass::SelfDualNoPole => ComponentSpec::new(CartanType::D, d),
        MuClass::Other => ComponentSpec::new(CartanType::A, d - 1),
    }
}

/// Types after the lattice normalization: `C` becomes `B`.
pub fn flipped(components: &[ComponentSpec]) -> Vec<ComponentSpec> {
    components
        .iter()
        .map(|c| match c.letter {
            CartanType::C => ComponentSpec::new(CartanType::B, c.rank),
            _ => *c,
        })
        .collect()
}

/// The root datum on the character lattice; short simples of B components are doubled.
pub fn lattice_datum(components: &[ComponentSpec]) -> Result<BasedRootDatum> {
    build_standard_datum(&flipped(components))
}

/// Blocks contributing a factor `Z/2` to the R-group.
pub fn r_blocks(desc: &InertialDescriptor, components: &[ComponentSpec]) -> Vec<usize> {
    if desc.family == Family::GLInnerForm {
        return Vec::new();
    }
    desc.blocks
        .iter()
        .zip(components)
        .enumerate()
        .filter(|(_, (b, c))| {
            c.letter == CartanType::D
                && (desc.family != Family::OrthogonalEven || b.k_even || (desc.anchor_rank != 0 && b.tau_outer_invariant))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Generators of R(O): sign change of the last coordinate of each contributing D block.
pub fn r_group(desc: &InertialDescriptor, components: &[ComponentSpec], datum: &BasedRootDatum) -> Result<Vec<DiagramAutomorphism>> {
    let mut offsets = Vec::new();
    let mut off = 0;
    for c in flipped(components) {
        offsets.push(off);
        off += c.coordinates();
    }
    r_blocks(desc, components)
        .into_iter()
        .map(|i| {
            let last = offsets[i] + components[i].coordinates() - 1;
            let mut diag = vec![1; datum.rank()];
            diag[last] = -1;
            DiagramAutomorphism::new(datum, IMatrix::diagonal(&diag))
        })
        .collect()
}

/// The verified decomposition `W(M,O) = R ⋉ W_O`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylStructure {
    pub w_order: usize,
    pub r_order: usize,
    pub total_order: usize,
}

/// Checks `R ∩ W_O = 1`, that R normalizes W_O and `|W(M,O)| = |R|·|W_O|`.
pub fn weyl_structure(datum: &BasedRootDatum, r_generators: &[DiagramAutomorphism], cap: usize) -> Result<WeylStructure> {
    let w = WeylGroup::new(datum, cap)?;
    let r = generate_group(datum, r_generators, cap)?;
    let pos = datum.positive_set();
    for g in r_generators {
        if !g.compose(g).is_identity() {
            return Err(Error::SemidirectViolation(format!("{:?} is not an involution", g.matrix())));
        }
        if pos.iter().any(|a| !pos.contains(&g.matrix().apply(a))) {
            return Err(Error::SemidirectViolation(format!("{:?} does not preserve the positive roots", g.matrix())));
        }
        let ginv = g.inverse();
        for (i, &j) in g.permutation().iter().enumerate() {
            let conj = g.matrix().mul(&datum.simple_reflection(i)).mul(ginv.matrix());
            if conj != datum.simple_reflection(j) {
                return Err(Error::SemidirectViolation(format!("conjugate of s_{} is not simple", i + 1)));
            }
        }
    }
    for x in &r {
        if !x.is_identity() && w.index_of(x.matrix()).is_some() {
            return Err(Error::SemidirectViolation(format!("{:?} lies in both R and W_O", x.matrix())));
        }
    }
    // Closure of all generators together.
    let mut gens: Vec<IMatrix> = (0..datum.num_simples()).map(|i| datum.simple_reflection(i)).collect();
    gens.extend(r_generators.iter().map(|g| g.matrix().clone()));
    let id = IMatrix::identity(datum.rank());
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let h = m.mul(g);
            if seen.insert(h.clone()) {
                if seen.len() > cap {
                    return Err(Error::OrbitCapExceeded { cap });
                }
                queue.push_back(h);
            }
        }
    }
    let st = WeylStructure { w_order: w.order(), r_order: r.len(), total_order: seen.len() };
    if st.total_order != st.w_order * st.r_order {
        return Err(Error::SemidirectViolation(format!(
            "|W(M,O)| = {} but |R|·|W_O| = {}",
            st.total_order,
            st.w_order * st.r_order
        )));
    }
    Ok(st)
}

/// Per-simple `(a, b)`: A-type and D-type simples take `a_gl`; the last simple of a B component takes `(a_end, b_end)`.
pub fn hecke_parameters(
    desc: &InertialDescriptor,
    components: &[ComponentSpec],
    datum: &BasedRootDatum,
    config: &ScalarConfig,
) -> Result<ParameterSet> {
    let zero = Rational::from_integer(0.into());
    let mut simple = vec![SimpleParameter::new(zero.clone(), zero.clone()); datum.num_simples()];
    for ((b, spec), info) in desc.blocks.iter().zip(flipped(components)).zip(datum.components()) {
        if spec.letter != CartanType::B && b.b_end != zero {
            return Err(Error::ParameterPlacement(format!(
                "block {:?}: b_end = {} but the component is {}; b is only allowed on the short root of a B component",
                b.label, b.b_end, spec
            )));
        }
        for (pos, &i) in info.simples.iter().enumerate() {
            let is_end = spec.letter == CartanType::B && pos + 1 == info.simples.len();
            simple[i] = if is_end {
                SimpleParameter::new(b.a_end.clone(), b.b_end.clone())
            } else {
                SimpleParameter::new(b.a_gl.clone(), zero.clone())
            };
        }
    }
    ParameterSet::new(*config, simple)
}

/// Everything derived from a descriptor.
#[derive(Clone, Debug)]
pub struct ClassifiedOrbit {
    pub descriptor: InertialDescriptor,
    pub components: Vec<ComponentSpec>,
    pub datum: BasedRootDatum,
    pub r_generators: Vec<DiagramAutomorphism>,
    pub structure: WeylStructure,
    pub params: ParameterSet,
}

pub fn classify(desc: &InertialDescriptor, config: &ScalarConfig, cap: usize) -> Result<ClassifiedOrbit> {
    desc.validate(config)?;
    let components = classify_components(desc)?;
    let datum = lattice_datum(&components)?;
    let r_generators = r_group(desc, &components, &datum)?;
    let structure = weyl_structure(&datum, &r_generators, cap)?;
    let params = hecke_parameters(desc, &components, &datum, config)?;
    Ok(ClassifiedOrbit { descriptor: desc.clone(), components, datum, r_generators, structure, params })
}

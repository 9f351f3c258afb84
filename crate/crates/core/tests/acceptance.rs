//! End-to-end criteria. Prints one line per criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use hecke_core::classify::{classify, lattice_datum, Block, Family, InertialDescriptor, MuClass};
use hecke_core::hecke::{levi_embed, HeckeAlgebra};
use hecke_core::lattice::Monomial;
use hecke_core::laurent::{orbit_sum, LaurentPoly};
use hecke_core::opmodel::{OpSuites, OperatorConfig, SimpleConstants};
use hecke_core::params::{ParameterSet, SimpleParameter};
use hecke_core::report::Status;
use hecke_core::root_datum::{build_standard_datum, validate_datum, BasedRootDatum, CartanType, ComponentSpec};
use hecke_core::scalar::{rat, ParamScalar, ScalarConfig};
use hecke_core::weyl::DEFAULT_CAP;
use hecke_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const GRID: [((i64, i64), (i64, i64)); 5] = [((1, 1), (0, 1)), ((1, 2), (1, 2)), ((1, 1), (1, 1)), ((2, 1), (1, 1)), ((3, 2), (1, 2))];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sc() -> ScalarConfig {
    ScalarConfig::new(2)
}

fn datum(specs: &[(CartanType, usize)]) -> BasedRootDatum {
    let specs: Vec<ComponentSpec> = specs.iter().map(|&(l, r)| ComponentSpec::new(l, r)).collect();
    build_standard_datum(&specs).unwrap()
}

/// `(a, b)` on doubled simples, `(a, 0)` elsewhere.
fn grid_params(d: &BasedRootDatum, a: (i64, i64), b: (i64, i64)) -> ParameterSet {
    let simple = (0..d.num_simples())
        .map(|i| {
            let bb = if d.is_doubled_coroot(i).unwrap() { rat(b.0, b.1) } else { rat(0, 1) };
            SimpleParameter::new(rat(a.0, a.1), bb)
        })
        .collect();
    ParameterSet::new(sc(), simple).unwrap()
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

// Expected component string, written out as a table independent of the library.
fn expected_type(family: Family, k: u32, k_i: u32, mu: MuClass, d: u32) -> Option<String> {
    let a = format!("A{}", d - 1);
    Some(match (family, mu) {
        (Family::GLInnerForm, _) => a,
        (_, MuClass::Other) => a,
        (_, MuClass::SelfDualNoPole) => format!("D{d}"),
        (Family::OrthogonalOdd, MuClass::Pole) => format!("B{d}"),
        (_, MuClass::Pole) if k > 0 => format!("B{d}"),
        (Family::Symplectic, MuClass::Pole) => format!("C{d}"),
        (Family::OrthogonalEven, MuClass::Pole) if k_i == 2 => format!("C{d}"),
        (Family::OrthogonalEven, MuClass::Pole) => return None,
    })
}

fn expected_weyl_order(name: &str) -> u64 {
    let n: u64 = name[1..].parse().unwrap();
    match &name[..1] {
        "A" => factorial(n + 1),
        "B" | "C" => (1u64 << n) * factorial(n),
        "D" if n == 0 => 1,
        "D" => (1u64 << (n - 1)) * factorial(n),
        _ => unreachable!(),
    }
}

struct Cell {
    desc: InertialDescriptor,
    expected: Vec<Option<String>>,
    expected_r: usize,
}

fn grid() -> Vec<Cell> {
    let mut cells = Vec::new();
    for family in Family::ALL {
        for k in 0..=2u32 {
            if family == Family::GLInnerForm && k != 0 {
                continue;
            }
            for tau in [false, true] {
                if tau && (family == Family::GLInnerForm || k == 0) {
                    continue;
                }
                for k_i in 1..=2u32 {
                    for mu in MuClass::ALL {
                        for d in 1..=3u32 {
                            let mut b = Block::simple("x", k_i, d, mu);
                            b.tau_outer_invariant = tau;
                            let expected = vec![expected_type(family, k, k_i, mu, d)];
                            let sd = family != Family::GLInnerForm && mu == MuClass::SelfDualNoPole;
                            let r_ok = family != Family::OrthogonalEven || k_i == 2 || (k != 0 && tau);
                            cells.push(Cell {
                                desc: InertialDescriptor { family, anchor_rank: k, blocks: vec![b] },
                                expected,
                                expected_r: if sd && r_ok { 2 } else { 1 },
                            });
                        }
                    }
                    // Two self-dual blocks: R = (Z/2)².
                    if family != Family::GLInnerForm {
                        let mut b1 = Block::simple("x", k_i, 2, MuClass::SelfDualNoPole);
                        let mut b2 = Block::simple("y", k_i, 3, MuClass::SelfDualNoPole);
                        b1.tau_outer_invariant = tau;
                        b2.tau_outer_invariant = tau;
                        let r_ok = family != Family::OrthogonalEven || k_i == 2 || (k != 0 && tau);
                        cells.push(Cell {
                            desc: InertialDescriptor { family, anchor_rank: k, blocks: vec![b1, b2] },
                            expected: vec![Some("D2".into()), Some("D3".into())],
                            expected_r: if r_ok { 4 } else { 1 },
                        });
                    }
                }
            }
        }
    }
    cells
}

fn criterion_1() -> Outcome {
    let cells = grid();
    let mut legal = 0;
    for cell in &cells {
        let got = classify(&cell.desc, &sc(), DEFAULT_CAP);
        if cell.expected.iter().any(|e| e.is_none()) {
            ensure(matches!(got, Err(Error::InvalidDescriptor(_))), || format!("{:?} should be rejected", cell.desc))?;
            continue;
        }
        legal += 1;
        let orbit = got.map_err(|e| format!("{:?}: {e}", cell.desc))?;
        let names: Vec<String> = orbit.components.iter().map(|c| c.to_string()).collect();
        let expected: Vec<String> = cell.expected.iter().map(|e| e.clone().unwrap()).collect();
        ensure(names == expected, || format!("{:?}: got {names:?}, expected {expected:?}", cell.desc))?;
        let w: u64 = names.iter().map(|n| expected_weyl_order(n)).product();
        ensure(orbit.structure.w_order as u64 == w, || format!("{names:?}: |W| = {}", orbit.structure.w_order))?;
        ensure(orbit.structure.r_order == cell.expected_r, || {
            format!("{:?}: |R| = {}, expected {}", cell.desc, orbit.structure.r_order, cell.expected_r)
        })?;
    }
    Ok(format!("{legal} legal cells, {} rejected", cells.len() - legal))
}

fn criterion_2() -> Outcome {
    let mut n = 0;
    for cell in grid() {
        let Ok(orbit) = classify(&cell.desc, &sc(), DEFAULT_CAP) else { continue };
        let st = &orbit.structure;
        ensure(st.total_order == st.w_order * st.r_order, || format!("{:?}", cell.desc))?;
        // R ∩ W_O = 1 and normalization, checked directly.
        let group = hecke_core::weyl::WeylGroup::new(&orbit.datum, DEFAULT_CAP).map_err(|e| e.to_string())?;
        for g in &orbit.r_generators {
            ensure(group.index_of(g.matrix()).is_none(), || "R meets W_O".into())?;
            for i in 0..orbit.datum.num_simples() {
                let c = g.matrix().mul(&orbit.datum.simple_reflection(i)).mul(g.inverse().matrix());
                ensure(group.index_of(&c).is_some(), || "R does not normalize W_O".into())?;
            }
        }
        n += 1;
    }
    Ok(format!("{n} cells"))
}

fn criterion_3() -> Outcome {
    let mut flipped = 0;
    for cell in grid() {
        let Ok(orbit) = classify(&cell.desc, &sc(), DEFAULT_CAP) else { continue };
        let d = lattice_datum(&orbit.components).map_err(|e| e.to_string())?;
        for (spec, info) in orbit.components.iter().zip(d.components()) {
            let want = if spec.letter == CartanType::C { CartanType::B } else { spec.letter };
            if spec.is_empty() {
                continue;
            }
            ensure(info.letter == want, || format!("{spec} became {:?}", info.letter))?;
            for (pos, &i) in info.simples.iter().enumerate() {
                let even = d.simple_coroot(i).iter().all(|x| x % 2 == 0);
                let short_end = want == CartanType::B && pos + 1 == info.simples.len();
                ensure(even == short_end, || format!("{spec}: simple {i} coroot {:?}", d.simple_coroot(i)))?;
                ensure(d.is_doubled_coroot(i).unwrap() == short_end, || format!("{spec}: doubled flag on {i}"))?;
            }
            if spec.letter == CartanType::C {
                flipped += 1;
            }
        }
    }
    Ok(format!("{flipped} C components flipped"))
}

fn hecke_datums() -> Vec<(&'static str, BasedRootDatum)> {
    vec![
        ("A1", datum(&[(CartanType::A, 1)])),
        ("A2", datum(&[(CartanType::A, 2)])),
        ("A1xA1", datum(&[(CartanType::A, 1), (CartanType::A, 1)])),
        ("B2", datum(&[(CartanType::B, 2)])),
        ("B3", datum(&[(CartanType::B, 3)])),
    ]
}

/// `D_s(Z_λ)` summed as a finite geometric series.
fn bernstein_oracle(alg: &HeckeAlgebra, i: usize, lambda: &Monomial) -> LaurentPoly {
    let d = alg.datum();
    let rank = d.rank();
    let alpha = Monomial(d.simple_root(i).to_vec());
    let n = lambda.dot(d.simple_coroot(i));
    let doubled = alg.is_doubled(i);
    let step = if doubled { alpha.scale(2) } else { alpha.clone() };
    let count = if doubled { n / 2 } else { n };
    let mut quot = LaurentPoly::zero(rank);
    if count > 0 {
        for k in 0..count {
            quot.add_term(lambda.sub(&step.scale(k)), ParamScalar::one());
        }
    } else {
        for k in 1..=-count {
            quot.add_term(lambda.add(&step.scale(k)), -&ParamScalar::one());
        }
    }
    let params = alg.params();
    let q1 = alg.q_alpha(i) - &ParamScalar::one();
    if doubled {
        let qa = params.q_a(i);
        let qb = params.q_b(i);
        let factor = &LaurentPoly::constant(rank, q1) + &LaurentPoly::term(alpha.neg(), &qa - &qb);
        &factor * &quot
    } else {
        quot.scale(&q1)
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut triples = 0;
    let mut divisions = 0;
    let datums = hecke_datums();
    let per_point = 10_000 / (datums.len() * GRID.len()) + 1;
    for (name, d) in &datums {
        for (a, b) in GRID {
            let alg = HeckeAlgebra::new(d, grid_params(d, a, b), DEFAULT_CAP).map_err(|e| format!("{name}: {e}"))?;
            let report = alg.verify_presentation(20, &mut rng);
            triples += 20;
            ensure(report.passed(), || format!("{name} {a:?},{b:?}: {report}"))?;
            ensure(report.find("associativity").is_some(), || "associativity missing".into())?;
            for i in 0..alg.num_simples() {
                let u = alg.u_simple(i);
                let q = alg.scalar(alg.q_alpha(i).clone());
                let lhs = alg.mul(&u.add(&alg.one()), &u.sub(&q));
                ensure(lhs.is_zero(), || format!("{name}: quadratic s{}", i + 1))?;
            }
            for _ in 0..per_point {
                let i = rng.gen_range(0..alg.num_simples());
                let lambda = Monomial((0..d.rank()).map(|_| rng.gen_range(-4..=4)).collect());
                let got = alg.bernstein_correction(i, &LaurentPoly::monomial(lambda.clone())).map_err(|e| e.to_string())?;
                ensure(got == bernstein_oracle(&alg, i, &lambda), || format!("{name}: D_s{} at {:?}", i + 1, lambda.0))?;
                divisions += 1;
            }
        }
    }
    Ok(format!("{triples} triples per datum: {}, {divisions} divisions", triples / datums.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut central = 0;
    for (name, d) in hecke_datums() {
        let alg = HeckeAlgebra::new(&d, grid_params(&d, (3, 2), (1, 2)), DEFAULT_CAP).map_err(|e| e.to_string())?;
        let gens: Vec<_> = (0..d.num_simples()).map(|i| alg.reflection(i).clone()).collect();
        for _ in 0..20 {
            let lambda = Monomial((0..d.rank()).map(|_| rng.gen_range(-2..=2)).collect());
            let sum = orbit_sum(&lambda, &gens, DEFAULT_CAP).map_err(|e| e.to_string())?;
            ensure(alg.is_central(&alg.poly(sum)), || format!("{name}: orbit sum of {:?} not central", lambda.0))?;
            central += 1;
            let moved = (0..d.num_simples()).any(|i| gens[i].apply(&lambda) != lambda);
            if moved {
                ensure(!alg.is_central(&alg.poly(LaurentPoly::monomial(lambda.clone()))), || {
                    format!("{name}: Z{:?} reported central", lambda.0)
                })?;
            }
        }
    }
    Ok(format!("{central} orbit sums central"))
}

fn op_config(d: &BasedRootDatum, params: Vec<SimpleParameter>, c_sqrt: i64, eps: (i8, i8)) -> Result<OperatorConfig, String> {
    let constants = SimpleConstants { c_sqrt: ParamScalar::from_int(c_sqrt), eps1: eps.0, eps_minus1: eps.1, ..Default::default() };
    let p = ParameterSet::new(sc(), params).map_err(|e| e.to_string())?;
    OperatorConfig::new(d, p, vec![constants], &[], DEFAULT_CAP).map_err(|e| e.to_string())
}

fn sp(a: (i64, i64), b: (i64, i64)) -> SimpleParameter {
    SimpleParameter::new(rat(a.0, a.1), rat(b.0, b.1))
}

fn criterion_6() -> Outcome {
    let a1 = datum(&[(CartanType::A, 1)]);
    let mut quad = 0;
    for (a, b) in GRID {
        let mut outcomes = Vec::new();
        for c_sqrt in [1, 2] {
            for eps in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let cfg = op_config(&a1, vec![sp(a, b)], c_sqrt, eps)?;
                let c = cfg.check_quadratic(0);
                ensure(c.status == Status::Pass, || format!("A1 {a:?},{b:?} c^1/2={c_sqrt} eps={eps:?}: {:?}", c.detail))?;
                outcomes.push(c.status);
                quad += 1;
            }
        }
    }
    let mut braids = 0;
    let a2 = datum(&[(CartanType::A, 2)]);
    let a1a1 = datum(&[(CartanType::A, 1), (CartanType::A, 1)]);
    let b2 = datum(&[(CartanType::B, 2)]);
    for (a, b) in GRID {
        let cases = [
            ("A2", &a2, vec![sp(a, (0, 1)), sp(a, (0, 1))]),
            ("A1xA1", &a1a1, vec![sp(a, b), sp((2, 1), (1, 2))]),
            ("B2", &b2, vec![sp((1, 1), (0, 1)), sp(a, b)]),
        ];
        for (name, d, params) in cases {
            let cfg = op_config(d, params, 1, (1, 1))?;
            let c = cfg.check_braid(0, 1);
            ensure(c.status == Status::Pass, || format!("{name} {a:?},{b:?}: braid {:?} {:?}", c.status, c.detail))?;
            braids += 1;
        }
    }
    let cfg = op_config(&b2, vec![sp((1, 1), (1, 2)), sp((3, 2), (1, 2))], 1, (1, 1))?;
    ensure(cfg.check_braid(0, 1).status == Status::Skipped, || "B2 with both b ≠ 0 not skipped".into())?;

    let cfg = op_config(&b2, vec![sp((1, 1), (0, 1)), sp((3, 2), (1, 2))], 2, (1, 1))?;
    let tri = cfg.check_triangularity();
    ensure(tri.status == Status::Pass, || format!("triangularity: {:?}", tri.detail))?;

    // D2 with its R-group.
    let desc = InertialDescriptor {
        family: Family::Symplectic,
        anchor_rank: 2,
        blocks: vec![Block::simple("x", 1, 2, MuClass::SelfDualNoPole)],
    };
    let orbit = classify(&desc, &sc(), DEFAULT_CAP).map_err(|e| e.to_string())?;
    let cfg = OperatorConfig::new(&orbit.datum, orbit.params.clone(), vec![SimpleConstants::default()], &orbit.r_generators, DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    ensure(cfg.r_elements().len() == 2, || "D2 R-group should have order 2".into())?;
    let rc = cfg.check_r_conjugation();
    ensure(rc.status == Status::Pass, || format!("R-conjugation: {:?}", rc.detail))?;
    let full = cfg.verify(OpSuites::default());
    ensure(full.passed(), || format!("D2+R suite: {full}"))?;
    Ok(format!("{quad} quadratic runs, {braids} braid pairs, triangularity on W(B2), R-conjugation on D2"))
}

fn criterion_7() -> Outcome {
    let b2 = datum(&[(CartanType::B, 2)]);
    let params = ParameterSet::new(sc(), vec![sp((1, 1), (0, 1)), sp((3, 2), (1, 2))]).unwrap();
    let alg = HeckeAlgebra::new(&b2, params.clone(), DEFAULT_CAP).map_err(|e| e.to_string())?;
    let cfg = OperatorConfig::new(&b2, params, vec![SimpleConstants::default()], &[], DEFAULT_CAP).map_err(|e| e.to_string())?;
    for i in 0..2 {
        let img = cfg.hecke_to_opmodel(&alg, &alg.u_simple(i)).map_err(|e| e.to_string())?;
        ensure(img == cfg.build_t(i), || format!("U_s{} does not map to T_s", i + 1))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pairs = 30;
    for k in 0..pairs {
        let x = alg.random_element(&mut rng, 2, 1);
        let y = alg.random_element(&mut rng, 2, 1);
        let lhs = cfg.hecke_to_opmodel(&alg, &alg.mul(&x, &y)).map_err(|e| e.to_string())?;
        let rhs = cfg.j_mul(
            &cfg.hecke_to_opmodel(&alg, &x).map_err(|e| e.to_string())?,
            &cfg.hecke_to_opmodel(&alg, &y).map_err(|e| e.to_string())?,
        );
        let el = cfg.change_basis(&lhs).map_err(|e| e.to_string())?;
        let er = cfg.change_basis(&rhs).map_err(|e| e.to_string())?;
        ensure(el == er, || format!("pair {k}: images differ"))?;
        ensure(el.integral, || format!("pair {k}: image not in the T-lattice"))?;
        // Hecke coordinates come back from the T-basis.
        let prod = alg.mul(&x, &y);
        for (w, p) in prod.terms() {
            let c = el.coefficients.get(&(0, w)).cloned().unwrap_or_else(|| hecke_core::rational::RationalFunction::zero(2));
            ensure(c == hecke_core::rational::RationalFunction::from_poly(p.clone()), || format!("pair {k}: coordinate at w{w}"))?;
        }
        ensure(cfg.expand(&er) == rhs, || format!("pair {k}: round trip"))?;
    }
    for _ in 0..5 {
        let z = cfg.random_element(&mut rng, 3, 1);
        let e = cfg.change_basis(&z).map_err(|e| e.to_string())?;
        ensure(cfg.expand(&e) == z, || "round trip of a J-element".into())?;
    }
    Ok(format!("{pairs} products on B2"))
}

fn criterion_8() -> Outcome {
    let b3 = datum(&[(CartanType::B, 3)]);
    let alg = HeckeAlgebra::new(&b3, grid_params(&b3, (3, 2), (1, 2)), DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut subsets = 0;
    for mask in 0..8u32 {
        let subset: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        let levi = levi_embed(&alg, &subset, DEFAULT_CAP).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let x = levi.sub.random_element(&mut rng, 2, 2);
            let y = levi.sub.random_element(&mut rng, 2, 2);
            let lhs = levi.embed(&levi.sub.mul(&x, &y));
            let rhs = alg.mul(&levi.embed(&x), &levi.embed(&y));
            ensure(lhs == rhs, || format!("subset {subset:?}"))?;
        }
        subsets += 1;
    }
    Ok(format!("{subsets} subsets × 20 products"))
}

fn criterion_9() -> Outcome {
    let a2 = datum(&[(CartanType::A, 2)]);
    let bad = ParameterSet::new(sc(), vec![sp((1, 1), (0, 1)), sp((2, 1), (0, 1))]).unwrap();
    let err = HeckeAlgebra::new(&a2, bad.clone(), DEFAULT_CAP);
    ensure(matches!(err, Err(Error::UnequalConjugateParameters { .. })), || "unequal q accepted".into())?;
    let alg = HeckeAlgebra::new_unchecked(&a2, bad, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let report = alg.verify_presentation(5, &mut ChaCha8Rng::seed_from_u64(9));
    ensure(report.find("braid(s1,s2)").is_some_and(|c| c.status == Status::Fail), || format!("braid not flagged: {report}"))?;

    let a1 = datum(&[(CartanType::A, 1)]);
    let cfg = op_config(&a1, vec![sp((1, 1), (0, 1))], 1, (1, 1))?
        .with_perturbation(0, ParamScalar::from_rational(rat(1, 7)))
        .map_err(|e| e.to_string())?;
    ensure(cfg.check_quadratic(0).status == Status::Fail, || "perturbed r_s passes".into())?;

    let d = datum(&[(CartanType::B, 2)]);
    let mut roots: Vec<Vec<i32>> = d.roots().to_vec();
    let mut coroots: Vec<Vec<i32>> = d.coroots().to_vec();
    let short = d.simple_root(1).to_vec();
    roots.push(short.iter().map(|x| 2 * x).collect());
    coroots.push(d.simple_coroot(1).iter().map(|x| x / 2).collect());
    let simples: Vec<usize> = (0..2).map(|i| d.roots().iter().position(|r| r == d.simple_root(i)).unwrap()).collect();
    let broken = BasedRootDatum::from_parts(2, roots, coroots, simples);
    let rep = validate_datum(&broken);
    ensure(!rep.passed && rep.failure.as_deref().is_some_and(|f| f.contains("non-reduced")), || format!("{rep:?}"))?;
    Ok("all three planted defects detected".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 classification grid", criterion_1, Duration::from_secs(1)),
        ("2 semidirect structure", criterion_2, Duration::from_secs(5)),
        ("3 root-datum flip", criterion_3, Duration::MAX),
        ("4 Hecke presentation", criterion_4, Duration::from_secs(60)),
        ("5 center", criterion_5, Duration::MAX),
        ("6 operator model", criterion_6, Duration::from_secs(120)),
        ("7 presentation bridge", criterion_7, Duration::MAX),
        ("8 Levi compatibility", criterion_8, Duration::MAX),
        ("9 negative controls", criterion_9, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {name}: PASS ({elapsed:.2?}) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({elapsed:.2?}) {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

//! The four subcommands. Each returns a JSON document plus a text rendering.

use std::fmt::Write as _;
use std::thread;

use hecke_core::classify::{classify, ClassifiedOrbit};
use hecke_core::hecke::{parse_element, EndoAlgebra, HeckeAlgebra, HeckeElement};
use hecke_core::lattice::Monomial;
use hecke_core::laurent::orbit_sum;
use hecke_core::opmodel::{OpSuites, OperatorConfig};
use hecke_core::params::ParameterSet;
use hecke_core::report::{Check, Report, Status};
use hecke_core::root_datum::BasedRootDatum;
use hecke_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::descriptor::Descriptor;
use crate::error::CliResult;

pub const REPORT_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_BUDGET: usize = 20;
pub const DEFAULT_CAP: usize = 100_000;

/// Above this Weyl group order the bridge suite is skipped.
const BRIDGE_MAX_ORDER: usize = 24;

pub struct Output {
    pub document: Value,
    pub text: String,
    /// False when an executed exact check failed.
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteSet {
    pub hecke: bool,
    pub opmodel: bool,
    pub bridge: bool,
}

impl SuiteSet {
    pub const ALL: SuiteSet = SuiteSet { hecke: true, opmodel: true, bridge: true };
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cap: usize,
    pub seed: u64,
    pub budget: usize,
    pub suites: SuiteSet,
    pub sweep_signs: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cap: DEFAULT_CAP, seed: DEFAULT_SEED, budget: DEFAULT_BUDGET, suites: SuiteSet::ALL, sweep_signs: false }
    }
}

struct Prepared {
    orbit: ClassifiedOrbit,
    params: ParameterSet,
}

fn prepare(desc: &Descriptor, cap: usize) -> CliResult<Prepared> {
    let orbit = classify(&desc.inertial, &desc.config, cap)?;
    let params = desc.apply_overrides(&orbit.params)?;
    Ok(Prepared { orbit, params })
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn datum_components(d: &BasedRootDatum) -> Vec<String> {
    d.components().iter().map(|c| format!("{}{}", c.letter.letter(), c.rank)).collect()
}

fn parameter_table(d: &BasedRootDatum, p: &ParameterSet) -> CliResult<Vec<Value>> {
    let cfg = p.config;
    (0..d.num_simples())
        .map(|i| {
            Ok(json!({
                "simple": i + 1,
                "root": d.simple_root(i),
                "a": p.a(i).to_string(),
                "b": p.b(i).to_string(),
                "doubled_coroot": d.is_doubled_coroot(i)?,
                "q_alpha": cfg.display(&p.q_alpha(i)),
                "q_i": cfg.display(&p.q_i(i)),
                "conjugacy_class": d.param_class(i) + 1,
            }))
        })
        .collect()
}

fn r_permutations(orbit: &ClassifiedOrbit) -> Vec<Vec<usize>> {
    orbit.r_generators.iter().map(|g| one_based(g.permutation())).collect()
}

pub fn run_classify(desc: &Descriptor, cap: usize) -> CliResult<Output> {
    let Prepared { orbit, params } = prepare(desc, cap)?;
    let d = &orbit.datum;
    let table = parameter_table(d, &params)?;
    let mut notes = Vec::new();
    if d.num_simples() == 0 {
        notes.push("no roots: the Hecke algebra is the Laurent polynomial ring of the lattice".to_string());
    }
    if orbit.structure.r_order == 1 {
        notes.push("R is trivial".to_string());
    }
    if desc.has_overrides() {
        notes.push("parameters overridden by the descriptor".to_string());
    }
    let components: Vec<String> = orbit.components.iter().map(|c| c.to_string()).collect();
    let document = json!({
        "report_version": REPORT_VERSION,
        "command": "classify",
        "family": orbit.descriptor.family.to_string(),
        "anchor_rank": orbit.descriptor.anchor_rank,
        "denominator": desc.config.denominator,
        "components": components,
        "datum": {
            "rank": d.rank(),
            "components": datum_components(d),
            "simple_roots": d.simple_roots(),
            "simple_coroots": d.simple_coroots(),
            "cartan_matrix": d.cartan_matrix(),
            "positive_roots": d.num_positive_roots(),
        },
        "w_order": orbit.structure.w_order,
        "r_order": orbit.structure.r_order,
        "total_order": orbit.structure.total_order,
        "r_generators": r_permutations(&orbit),
        "parameters": table,
        "notes": notes,
    });

    let mut text = String::new();
    let show = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(" x ") };
    writeln!(text, "family      {} (anchor rank {})", orbit.descriptor.family, orbit.descriptor.anchor_rank).unwrap();
    writeln!(text, "components  {}", show(&components)).unwrap();
    writeln!(text, "datum       {} on Z^{}", show(&datum_components(d)), d.rank()).unwrap();
    writeln!(
        text,
        "|W_O| = {}, |R| = {}, |W(M,O)| = {}",
        orbit.structure.w_order, orbit.structure.r_order, orbit.structure.total_order
    )
    .unwrap();
    if d.num_simples() > 0 {
        writeln!(text, "simple  root            a      b      q_alpha    q_i").unwrap();
        let cfg = params.config;
        for i in 0..d.num_simples() {
            let root = format!("{:?}", d.simple_root(i));
            writeln!(
                text,
                "s{:<6} {:<15} {:<6} {:<6} {:<10} {}{}",
                i + 1,
                root,
                params.a(i).to_string(),
                params.b(i).to_string(),
                cfg.display(&params.q_alpha(i)),
                cfg.display(&params.q_i(i)),
                if d.is_doubled_coroot(i)? { "  (doubled coroot)" } else { "" }
            )
            .unwrap();
        }
    }
    for p in r_permutations(&orbit) {
        writeln!(text, "R generator permutes simples as {p:?}").unwrap();
    }
    for n in &notes {
        writeln!(text, "note: {n}").unwrap();
    }
    Ok(Output { document, text, passed: true })
}

fn alternating(i: usize, j: usize, m: usize) -> String {
    (0..m).map(|k| format!("U{}", if k % 2 == 0 { i + 1 } else { j + 1 })).collect::<Vec<_>>().join(" ")
}

pub fn run_present(desc: &Descriptor, cap: usize) -> CliResult<Output> {
    let Prepared { orbit, params } = prepare(desc, cap)?;
    let d = &orbit.datum;
    let cfg = params.config;
    let n = d.num_simples();
    let mut quadratic = Vec::new();
    let mut braid = Vec::new();
    let mut bernstein = Vec::new();
    for i in 0..n {
        quadratic.push(format!("(U{0} + 1)(U{0} - {1}) = 0", i + 1, cfg.display(&params.q_alpha(i))));
        for j in i + 1..n {
            let m = d.coxeter_exponent(i, j);
            braid.push(format!("{} = {}", alternating(i, j, m), alternating(j, i, m)));
        }
        let alpha = format!("{:?}", d.simple_root(i));
        let s = i + 1;
        let lhs = format!("Z[l] U{s} - U{s} Z[s{s}(l)]");
        bernstein.push(if d.is_doubled_coroot(i)? {
            format!(
                "{lhs} = (({} - 1) + ({} - {}) Z[-a]) (Z[l] - Z[s{s}(l)]) / (1 - Z[-2a]), a = {alpha}",
                cfg.display(&params.q_alpha(i)),
                cfg.display(&params.q_a(i)),
                cfg.display(&params.q_b(i)),
            )
        } else {
            format!("{lhs} = ({} - 1) (Z[l] - Z[s{s}(l)]) / (1 - Z[-a]), a = {alpha}", cfg.display(&params.q_alpha(i)))
        });
    }
    let r_action: Vec<String> = orbit
        .r_generators
        .iter()
        .map(|g| {
            let p = one_based(g.permutation());
            let pairs: Vec<String> = p.iter().enumerate().map(|(k, j)| format!("s{} -> s{j}", k + 1)).collect();
            format!("J U_s J^-1 = U_r(s): {}", pairs.join(", "))
        })
        .collect();
    let document = json!({
        "report_version": REPORT_VERSION,
        "command": "present",
        "lattice_rank": d.rank(),
        "generators": (1..=n).map(|i| format!("U{i}")).collect::<Vec<_>>(),
        "quadratic": quadratic,
        "braid": braid,
        "bernstein": bernstein,
        "r_order": orbit.structure.r_order,
        "r_action": r_action,
    });
    let mut text = String::new();
    writeln!(text, "generators U1..U{n}, Z[l] for l in Z^{}", d.rank()).unwrap();
    for (title, lines) in [("quadratic", &quadratic), ("braid", &braid), ("bernstein", &bernstein), ("R action", &r_action)] {
        if lines.is_empty() {
            continue;
        }
        writeln!(text, "{title}:").unwrap();
        for l in lines {
            writeln!(text, "  {l}").unwrap();
        }
    }
    if n == 0 {
        writeln!(text, "no relations: the algebra is the Laurent polynomial ring").unwrap();
    }
    Ok(Output { document, text, passed: true })
}

fn prefixed(prefix: &str, r: Report) -> Report {
    let mut out = Report::new();
    for mut c in r.checks {
        c.name = format!("{prefix}/{}", c.name);
        out.push(c);
    }
    out
}

fn hecke_algebra(p: &Prepared, cap: usize, report: &mut Report) -> CliResult<HeckeAlgebra> {
    match HeckeAlgebra::new(&p.orbit.datum, p.params.clone(), cap) {
        Ok(a) => {
            report.push(Check::pass("conjugate_parameters"));
            Ok(a)
        }
        Err(e @ Error::UnequalConjugateParameters { .. }) => {
            report.push(Check::fail("conjugate_parameters", e.to_string()));
            Ok(HeckeAlgebra::new_unchecked(&p.orbit.datum, p.params.clone(), cap)?)
        }
        Err(e) => Err(e.into()),
    }
}

fn hecke_suite(alg: &HeckeAlgebra, orbit: &ClassifiedOrbit, budget: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut report = alg.verify_presentation(budget, rng);
    let rank = alg.rank();
    let gens: Vec<_> = (0..alg.num_simples()).map(|i| alg.reflection(i).clone()).collect();
    let mut bad = None;
    for k in 0..5 {
        let lambda = Monomial((0..rank).map(|_| rng.gen_range(-2..=2)).collect());
        match orbit_sum(&lambda, &gens, alg.group().order()) {
            Ok(p) if alg.is_central(&alg.poly(p.clone())) => {}
            Ok(_) => bad = Some(format!("orbit sum {k} of {lambda:?} is not central")),
            Err(e) => bad = Some(e.to_string()),
        }
    }
    report.push(Check::from_result("center", bad.map_or(Ok(()), Err)));
    if orbit.r_generators.is_empty() {
        return report;
    }
    match EndoAlgebra::new(alg.clone(), &orbit.r_generators, alg.group().order().max(2)) {
        Ok(endo) => report.extend(endo.verify_rho()),
        Err(e) => report.push(Check::fail("rho_automorphism", e.to_string())),
    }
    report
}

fn bridge_suite(alg: &HeckeAlgebra, cfg: &OperatorConfig, budget: usize, rng: &mut ChaCha8Rng) -> Report {
    let mut report = Report::new();
    if alg.group().order() > BRIDGE_MAX_ORDER {
        report.push(Check::skipped("products", format!("|W| = {} exceeds {BRIDGE_MAX_ORDER}", alg.group().order())));
        return report;
    }
    let image = |x: &HeckeElement| cfg.hecke_to_opmodel(alg, x).map_err(|e| e.to_string());
    let mut products = || -> Result<(), String> {
        for k in 0..budget {
            let x = alg.random_element(rng, 2, 1);
            let y = alg.random_element(rng, 2, 1);
            let lhs = cfg.change_basis(&image(&alg.mul(&x, &y))?).map_err(|e| e.to_string())?;
            let rhs = cfg.change_basis(&cfg.j_mul(&image(&x)?, &image(&y)?)).map_err(|e| e.to_string())?;
            if lhs != rhs {
                return Err(format!("product {k}: images differ"));
            }
            if !lhs.integral {
                return Err(format!("product {k}: image leaves the T-lattice"));
            }
        }
        Ok(())
    };
    report.push(Check::from_result("products", products()));
    report
}

pub fn run_verify(desc: &Descriptor, opts: &VerifyOptions) -> CliResult<Output> {
    let prepared = prepare(desc, opts.cap)?;
    let mut setup = Report::new();
    let alg = hecke_algebra(&prepared, opts.cap, &mut setup)?;
    let constants = desc.constants(prepared.orbit.datum.num_simples())?;
    let op = OperatorConfig::new(&prepared.orbit.datum, prepared.params.clone(), constants, &prepared.orbit.r_generators, opts.cap);

    let rng = |k: u64| ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(k));
    let suites = OpSuites { sweep_signs: opts.sweep_signs, ..OpSuites::default() };
    let (hecke, opmodel, bridge) = thread::scope(|s| {
        let h = opts.suites.hecke.then(|| s.spawn(|| hecke_suite(&alg, &prepared.orbit, opts.budget, &mut rng(1))));
        let o = opts.suites.opmodel.then(|| {
            s.spawn(|| match &op {
                Ok(cfg) => cfg.verify(suites),
                Err(e) => {
                    let mut r = Report::new();
                    r.push(Check::fail("config", e.to_string()));
                    r
                }
            })
        });
        let b = opts.suites.bridge.then(|| {
            s.spawn(|| match &op {
                Ok(cfg) => bridge_suite(&alg, cfg, opts.budget, &mut rng(3)),
                Err(e) => {
                    let mut r = Report::new();
                    r.push(Check::skipped("products", format!("operator model unavailable: {e}")));
                    r
                }
            })
        });
        let join = |j: Option<thread::ScopedJoinHandle<'_, Report>>| j.map(|j| j.join().expect("suite thread panicked"));
        (join(h), join(o), join(b))
    });

    let mut report = prefixed("setup", setup);
    for (name, r) in [("hecke", hecke), ("opmodel", opmodel), ("bridge", bridge)] {
        if let Some(r) = r {
            report.extend(prefixed(name, r));
        }
    }
    let passed = report.passed();
    let document = json!({
        "report_version": REPORT_VERSION,
        "command": "verify",
        "seed": opts.seed,
        "budget": opts.budget,
        "datum": datum_components(&prepared.orbit.datum),
        "passed": passed,
        "counts": {
            "pass": report.count(Status::Pass),
            "fail": report.count(Status::Fail),
            "skipped": report.count(Status::Skipped),
        },
        "checks": report.checks,
    });
    let mut text = report.to_string();
    writeln!(
        text,
        "{}: {} passed, {} failed, {} skipped",
        if passed { "PASS" } else { "FAIL" },
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped)
    )
    .unwrap();
    Ok(Output { document, text, passed })
}

/// Multiplies the parsed elements left to right.
pub fn run_mul(desc: &Descriptor, cap: usize, exprs: &[String]) -> CliResult<Output> {
    let prepared = prepare(desc, cap)?;
    let alg = HeckeAlgebra::new(&prepared.orbit.datum, prepared.params, cap)?;
    let mut acc = alg.one();
    for e in exprs {
        acc = alg.mul(&acc, &parse_element(&alg, e)?);
    }
    let result = alg.format_element(&acc);
    let document = json!({
        "report_version": REPORT_VERSION,
        "command": "mul",
        "factors": exprs,
        "result": result,
    });
    Ok(Output { document, text: format!("{result}\n"), passed: true })
}

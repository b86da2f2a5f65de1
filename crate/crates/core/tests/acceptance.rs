//! Acceptance suite. Runs without the libtest harness and prints one line
//! per criterion; exits non-zero if any criterion fails.

mod common;

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use immersion_core::cdga::{
    CdgaMorphism, Element, FinitePresentation, FreeCdga, GeneratorSet, GradedAlgebra, GradedVector,
};
use immersion_core::immersion::{
    assemble_phi, decide_with_phi, explain_comparison, parse_problem, Cohomology, ModeComparison,
};
use immersion_core::lift::{
    decide_dga_lift, decide_dga_lift_general, solve_linear_dga_system, GradedMap, LiftOutcome,
    LiftProblem, LinearDgaSystem, RelativeModel,
};
use immersion_core::linalg::{rat, Rational};
use immersion_core::mono::{build_mono_model, DifferentialMode, MonoModelSpec};
use immersion_oracle as oracle;
use rand::Rng;
use serde_json::Value;

use common::*;

const AXIOM_CASES: usize = 1000;
const AXIOM_BUDGET: Duration = Duration::from_secs(10);
const SYSTEM_CASES: usize = 50;
const SYSTEM_BUDGET: Duration = Duration::from_secs(30);
const RELATIVE_CASES: usize = 100;
const COHOMOLOGY_BUDGET: Duration = Duration::from_secs(60);
const CLI_BUDGET: Duration = Duration::from_secs(5);
const DETERMINISM_RUNS: usize = 5;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < budget, || {
        format!("{what} took {t:?}, budget {budget:?}")
    })?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// 1. algebra axioms

fn sign(a: u32, b: u32) -> Rational {
    if a % 2 == 1 && b % 2 == 1 {
        rat(-1)
    } else {
        rat(1)
    }
}

fn axioms() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut counts = [0usize; 4];
    let mut nontrivial = 0;
    let mut model = random_cdga(&mut r, 5, 9);
    let mut case = 0;
    while case < AXIOM_CASES {
        if case % 20 == 0 {
            model = random_cdga(&mut r, 5, 9);
        }
        case += 1;
        let gens = model.generators().clone();
        let degrees: Vec<u32> = gens.iter().map(|g| g.degree).collect();
        let (ka, kb, kc) = (
            populated_degree(&mut r, &model, 10),
            populated_degree(&mut r, &model, 10),
            populated_degree(&mut r, &model, 8),
        );
        let a = random_element(&mut r, &model, ka);
        let b = random_element(&mut r, &model, kb);
        let c = random_element(&mut r, &model, kc);
        let m = |x: &Element, y: &Element| x.mul(y).map_err(|e| e.to_string());
        let d = |x: &Element| model.apply_diff(x).map_err(|e| e.to_string());

        if !a.is_zero() && !b.is_zero() && !c.is_zero() {
            nontrivial += 1;
        }
        let ab = m(&a, &b)?;
        let ba = m(&b, &a)?;
        ensure(ab == ba.scale(&sign(ka, kb)), || {
            format!("commutativity fails for {a} and {b}")
        })?;
        let pa = oracle::poly_from_element(&a);
        let pb = oracle::poly_from_element(&b);
        ensure(
            oracle::poly_from_element(&ab) == oracle::poly_mul(&pa, &pb, &degrees),
            || format!("product of {a} and {b} disagrees with the oracle"),
        )?;
        counts[0] += 1;

        ensure(m(&ab, &c)? == m(&a, &m(&b, &c)?)?, || {
            format!("associativity fails for {a}, {b}, {c}")
        })?;
        counts[1] += 1;

        let lhs = d(&ab)?;
        let rhs = m(&d(&a)?, &b)?
            .add(&m(&a, &d(&b)?)?.scale(&sign(ka, 1)))
            .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("Leibniz fails for {a} and {b}"))?;
        let diffs: Vec<_> = (0..gens.len())
            .map(|i| oracle::poly_from_element(model.generator_differential(i)))
            .collect();
        ensure(
            oracle::poly_from_element(&lhs)
                == oracle::leibniz(&oracle::poly_from_element(&ab), &diffs, &degrees),
            || format!("d({a}·{b}) disagrees with the oracle"),
        )?;
        counts[2] += 1;

        ensure(d(&d(&a)?)?.is_zero(), || format!("d² ≠ 0 on {a}"))?;
        counts[3] += 1;
    }
    let t = within(start, AXIOM_BUDGET, "axiom checks")?;
    ensure(nontrivial * 2 >= AXIOM_CASES, || {
        format!("only {nontrivial} cases with non-zero operands")
    })?;
    Ok(format!(
        "{} commutativity, {} associativity, {} Leibniz, {} d²=0 cases ({nontrivial} with non-zero operands) in {t:.2?}",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

// ---------------------------------------------------------------------------
// 2. linear solver against the naive oracle

fn random_system_case<R: Rng>(r: &mut R, ambient: &FreeCdga) -> Result<(bool, usize), String> {
    let k = r.gen_range(1..=3);
    let degrees = random_degrees(r, k, 6);
    let mut coefficients = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            let deg = degrees[i] + 1;
            if deg >= degrees[j] && r.gen_bool(0.4) {
                let e = random_element(r, ambient, deg - degrees[j]);
                coefficients[i][j] = Some(
                    ambient
                        .to_vector(&e, deg - degrees[j])
                        .map_err(|e| e.to_string())?,
                );
            }
        }
    }
    let consistent = r.gen_bool(0.5);
    let mut constants = Vec::with_capacity(k);
    if consistent {
        // constants chosen so that a random x is a solution
        let xs: Vec<Element> = degrees
            .iter()
            .map(|&n| random_element(r, ambient, n))
            .collect();
        for i in 0..k {
            let mut c = ambient.apply_diff(&xs[i]).map_err(|e| e.to_string())?;
            for j in 0..k {
                if let Some(a) = &coefficients[i][j] {
                    let a = ambient.to_element(a).map_err(|e| e.to_string())?;
                    c = c
                        .sub(&a.mul(&xs[j]).map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())?;
                }
            }
            constants.push(
                ambient
                    .to_vector(&c, degrees[i] + 1)
                    .map_err(|e| e.to_string())?,
            );
        }
    } else {
        for &n in &degrees {
            let e = random_element(r, ambient, n + 1);
            constants.push(ambient.to_vector(&e, n + 1).map_err(|e| e.to_string())?);
        }
    }
    let system = LinearDgaSystem::new(ambient, degrees, constants, coefficients)
        .map_err(|e| e.to_string())?;
    let ours = solve_linear_dga_system(&system).map_err(|e| e.to_string())?;
    let naive = oracle::naive_linear_solve(&system);
    ensure(ours.is_empty() == naive.is_empty(), || {
        "emptiness differs from the oracle".into()
    })?;
    if consistent {
        ensure(!ours.is_empty(), || {
            "system built around a solution was declared empty".into()
        })?;
    }
    if let Some(p) = ours.point() {
        ensure(naive.contains(p), || {
            "our point is not an oracle solution".into()
        })?;
        ensure(ours.contains(naive.point.as_ref().unwrap()), || {
            "oracle point is not in our space".into()
        })?;
        ensure(ours.directions().len() == naive.directions.len(), || {
            "dimensions differ".into()
        })?;
        for v in ours.directions() {
            ensure(naive.contains_direction(v), || {
                "our direction is not an oracle direction".into()
            })?;
        }
        for v in &naive.directions {
            let shifted: Vec<Rational> = p.iter().zip(v).map(|(a, b)| a + b).collect();
            ensure(ours.contains(&shifted), || {
                "oracle direction is not in our space".into()
            })?;
        }
    }
    Ok((ours.is_empty(), system.degrees().len()))
}

fn linear_systems() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut empty = 0;
    for _ in 0..SYSTEM_CASES {
        let ambient = random_cdga(&mut r, 4, 6);
        if random_system_case(&mut r, &ambient)?.0 {
            empty += 1;
        }
    }
    let t = within(start, SYSTEM_BUDGET, "solver comparison")?;
    Ok(format!(
        "{SYSTEM_CASES} systems agree with the oracle ({empty} inconsistent) in {t:.2?}"
    ))
}

// ---------------------------------------------------------------------------
// 3. witness soundness

fn check_witness_images<T: oracle::OracleAlgebra>(
    model: &RelativeModel,
    target: &T,
    base_images: &[GradedVector],
    outcome: &LiftOutcome,
    cutoff: u32,
) -> Result<(), String> {
    let LiftOutcome::Exists(w) = outcome else {
        return Ok(());
    };
    let mut images = base_images.to_vec();
    images.extend(w.images.iter().map(|i| i.vector.clone()));
    oracle::check_morphism(model.total(), target, &images, cutoff)
}

fn fixture_soundness() -> Result<usize, String> {
    let mut verified = 0;
    for name in [
        "cp2_n7.json",
        "hp2_n13.json",
        "sphere3_n4.json",
        "divergent_n11.json",
        "cp2_n5.json",
        "cp2_free_n5.json",
    ] {
        let problem = parse_problem(&fixture_text(name)).map_err(|e| e.to_string())?;
        for mode in [DifferentialMode::DualClass, DifferentialMode::PaperLiteral] {
            let spec = problem.spec(mode).map_err(|e| e.to_string())?;
            let model = build_mono_model(&spec).map_err(|e| e.to_string())?;
            let phi = assemble_phi(&problem, &model).map_err(|e| e.to_string())?;
            let lift = LiftProblem::unconstrained(&model, &problem.cohomology, &phi)
                .with_cutoff(problem.cutoff);
            let outcome = decide_dga_lift(&lift).map_err(|e| e.to_string())?;
            let res = match &problem.cohomology {
                Cohomology::Presentation(p) => check_witness_images(
                    &model,
                    &oracle::PresentationOracle::new(p),
                    phi.images(),
                    &outcome,
                    problem.cutoff,
                ),
                Cohomology::Free(f) => check_witness_images(
                    &model,
                    &oracle::FreeOracle::new(f),
                    phi.images(),
                    &outcome,
                    problem.cutoff,
                ),
            };
            res.map_err(|e| format!("{name} ({mode}): {e}"))?;
            if outcome.exists() {
                verified += 1;
            }
        }
    }
    Ok(verified)
}

/// Base: free with zero differential. Fibre: each differential a random
/// cocycle at most linear in the earlier fibre generators.
fn random_relative_model<R: Rng>(r: &mut R) -> RelativeModel {
    let nb = r.gen_range(1..=3);
    let base_degrees = random_degrees(r, nb, 6);
    let base_gens = GeneratorSet::new((0..nb).map(|i| (format!("b{i}"), base_degrees[i]))).unwrap();
    let base = FreeCdga::with_zero_differential(base_gens.clone());
    let nf = r.gen_range(1..=3);
    let mut fiber_degrees: Vec<u32> = (0..nf).map(|_| r.gen_range(3..=7)).collect();
    fiber_degrees.sort_unstable();
    let mut total = base.clone();
    let mut fiber_diffs: Vec<Element> = Vec::new();
    for (j, &deg) in fiber_degrees.iter().enumerate() {
        let space = linear_cocycles(&total, nb, deg + 1);
        let v = sample(r, &space).unwrap();
        let dw = total.to_element(&GradedVector::new(deg + 1, v)).unwrap();
        let fiber =
            GeneratorSet::new((0..=j).map(|i| (format!("w{i}"), fiber_degrees[i]))).unwrap();
        let gens = base_gens.concat(&fiber).unwrap();
        fiber_diffs = fiber_diffs
            .iter()
            .map(|e| e.embed(&gens).unwrap())
            .collect();
        fiber_diffs.push(dw.embed(&gens).unwrap());
        total = RelativeModel::new(base.clone(), fiber, fiber_diffs.clone(), deg)
            .unwrap()
            .total()
            .clone();
    }
    let fiber = GeneratorSet::new((0..nf).map(|i| (format!("w{i}"), fiber_degrees[i]))).unwrap();
    RelativeModel::new(base, fiber, fiber_diffs, *fiber_degrees.last().unwrap()).unwrap()
}

fn random_base_images<R: Rng, X: GradedAlgebra>(
    r: &mut R,
    base: &FreeCdga,
    mx: &X,
) -> Vec<GradedVector> {
    base.generators()
        .iter()
        .map(|g| {
            if r.gen_bool(0.35) {
                return mx.zero(g.degree);
            }
            let coords = sample(r, &mx.cocycles(g.degree)).unwrap_or_default();
            GradedVector::new(g.degree, coords)
        })
        .collect()
}

#[derive(Default)]
struct SoundnessTally {
    yes: usize,
    no: usize,
    constrained: usize,
}

fn relative_case<X, O>(
    r: &mut impl Rng,
    model: &RelativeModel,
    mx: &X,
    o: &O,
    cutoff: u32,
    tally: &mut SoundnessTally,
) -> Result<(), String>
where
    X: GradedAlgebra,
    O: oracle::OracleAlgebra,
{
    let images = random_base_images(r, model.base(), mx);
    let phi = CdgaMorphism::new(model.base(), mx, images.clone()).map_err(|e| e.to_string())?;
    let lift = LiftProblem::unconstrained(model, mx, &phi).with_cutoff(cutoff);
    let fast = decide_dga_lift(&lift).map_err(|e| e.to_string())?;
    let general = decide_dga_lift_general(&lift).map_err(|e| e.to_string())?;
    ensure(fast.exists() == general.exists(), || {
        "fast and general paths disagree".into()
    })?;
    if model.is_fiber_constant() {
        // decoupled: existence is the conjunction of per-generator exactness
        let mut all_exact = true;
        for j in 0..model.fiber().len() {
            if model.fiber().degree(j) > cutoff {
                continue;
            }
            let form = model.linear_form(j).map_err(|e| e.to_string())?;
            let class = phi
                .apply(&form.constant, model.fiber().degree(j) + 1)
                .map_err(|e| e.to_string())?;
            all_exact &= mx
                .exact_witness(&class)
                .map_err(|e| e.to_string())?
                .is_some();
        }
        ensure(all_exact == fast.exists(), || {
            "verdict differs from per-generator exactness".into()
        })?;
    }
    check_witness_images(model, o, &images, &fast, cutoff)?;
    check_witness_images(model, o, &images, &general, cutoff)?;
    let LiftOutcome::Exists(w) = fast else {
        tally.no += 1;
        return Ok(());
    };
    tally.yes += 1;

    // constrained by the lift just found: the answer must be that lift
    let mut f_images = images.clone();
    f_images.extend(w.images.iter().map(|i| i.vector.clone()));
    let f = CdgaMorphism::unvalidated(model.total(), mx, f_images).map_err(|e| e.to_string())?;
    let top = model
        .total()
        .generators()
        .iter()
        .map(|g| g.degree)
        .max()
        .unwrap_or(0);
    let i = GradedMap::identity(mx, top.max(cutoff) + 1);
    let constrained = LiftProblem::new(model, mx, &phi, Some(mx), Some(&f), Some(&i))
        .map_err(|e| e.to_string())?
        .with_cutoff(cutoff);
    match decide_dga_lift(&constrained).map_err(|e| e.to_string())? {
        LiftOutcome::Exists(w2) => {
            ensure(w2 == w, || "constrained lift differs from f".into())?;
            check_witness_images(model, o, &images, &LiftOutcome::Exists(w2), cutoff)?;
        }
        LiftOutcome::Obstructed(ob) => {
            return Err(format!("constraint by a valid lift obstructed: {ob:?}"))
        }
    }
    tally.constrained += 1;
    Ok(())
}

fn witness_soundness() -> Outcome {
    let fixtures = fixture_soundness()?;
    let mut r = rng(3);
    let mut tally = SoundnessTally::default();
    let truncated = [
        FinitePresentation::truncated_polynomial("x", 2, 4).unwrap(),
        FinitePresentation::truncated_polynomial("u", 4, 2).unwrap(),
        FinitePresentation::truncated_polynomial("x", 2, 2).unwrap(),
    ];
    for case in 0..RELATIVE_CASES {
        let model = random_relative_model(&mut r);
        let top_fiber = (0..model.fiber().len())
            .map(|j| model.fiber().degree(j))
            .max()
            .unwrap();
        if case % 2 == 0 {
            let mx = random_cdga(&mut r, 3, 6);
            relative_case(
                &mut r,
                &model,
                &mx,
                &oracle::FreeOracle::new(&mx),
                top_fiber,
                &mut tally,
            )
        } else {
            let mx = &truncated[case % truncated.len()];
            relative_case(
                &mut r,
                &model,
                mx,
                &oracle::PresentationOracle::new(mx),
                mx.top(),
                &mut tally,
            )
        }
        .map_err(|e| format!("random case {case}: {e}"))?;
    }
    ensure(tally.yes >= 10 && tally.no >= 10, || {
        format!(
            "degenerate sample: {} lifts, {} obstructed",
            tally.yes, tally.no
        )
    })?;
    Ok(format!(
        "{fixtures} fixture witnesses, {RELATIVE_CASES} random models ({} lifts verified, {} obstructed, {} constrained)",
        tally.yes, tally.no, tally.constrained
    ))
}

// ---------------------------------------------------------------------------
// 4. cohomology of the model

fn model_cohomology() -> Outcome {
    let start = Instant::now();
    let mut done = Vec::new();
    for (m, n) in [(1, 4), (3, 6), (4, 7), (3, 8)] {
        let model = build_mono_model(&MonoModelSpec::new(m, n).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let ours: Vec<usize> = (0..=2 * n)
            .map(|k| model.total().cohomology_dim(k))
            .collect();
        let expected = oracle::bso_product_dimensions(m, n, 2 * n);
        ensure(ours == expected, || {
            format!("({m},{n}): got {ours:?}, expected {expected:?}")
        })?;
        done.push(format!("({m},{n})"));
    }
    let t = within(start, COHOMOLOGY_BUDGET, "cohomology computation")?;
    Ok(format!("{} through degree 2n in {t:.2?}", done.join(" ")))
}

// ---------------------------------------------------------------------------
// 5. classical cases through the command line

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immersion-decider"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_fixture(sub: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![sub, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    cli(&args)
}

/// Degree-`degree` coefficient of `(Σ p_j)⁻¹` over a single even generator,
/// as the coefficient of the named power.
fn inverse_coefficient(
    gen: &str,
    gen_degree: u32,
    pontrjagin: &[(u32, i64)],
    degree: u32,
) -> Result<(String, Rational), String> {
    let gens = GeneratorSet::new([(gen, gen_degree)]).map_err(|e| e.to_string())?;
    let x = Element::generator(&gens, 0);
    let mut total = vec![Element::zero(&gens); degree as usize + 1];
    total[0] = Element::one(&gens);
    for &(d, c) in pontrjagin {
        total[d as usize] = x.pow(d / gen_degree).unwrap().scale(&rat(c));
    }
    let inv = oracle::invert_series(&total, degree)?;
    let power = degree / gen_degree;
    let label = if power == 1 {
        gen.to_string()
    } else {
        format!("{gen}^{power}")
    };
    Ok((
        label,
        inv[degree as usize].coefficient(&x.pow(power).unwrap().terms().next().unwrap().0.clone()),
    ))
}

fn failing_row(json: &Value) -> Option<&Value> {
    json["obstructions"]
        .as_array()?
        .iter()
        .find(|r| r["exact"] == Value::Bool(false))
}

fn classical_cases() -> Outcome {
    let mut done = Vec::new();
    // (fixture, exit code, failing generator with its class degree)
    let cases: [(&str, i32, Option<(&str, u32)>); 6] = [
        ("cp2_n5.json", 1, Some(("gamma_1", 4))),
        ("cp2_n7.json", 0, None),
        ("hp2_n11.json", 1, Some(("gamma_2", 8))),
        ("hp2_n13.json", 0, None),
        ("sphere3_n4.json", 0, None),
        ("cp2_free_n5.json", 1, Some(("gamma_1", 4))),
    ];
    for (name, code, failing) in cases {
        let start = Instant::now();
        let out = cli_fixture("decide", name, &["--json"]);
        within(start, CLI_BUDGET, name)?;
        ensure(out.status.code() == Some(code), || {
            format!("{name}: exit {:?}, expected {code}", out.status.code())
        })?;
        let json: Value =
            serde_json::from_slice(&out.stdout).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            json["immersible"] == if code == 0 { "YES" } else { "NO" },
            || format!("{name}: wrong verdict"),
        )?;
        match failing {
            None => ensure(failing_row(&json).is_none(), || {
                format!("{name}: unexpected obstruction")
            })?,
            Some((gen, degree)) => {
                let row = failing_row(&json).ok_or(format!("{name}: no failing row"))?;
                ensure(row["name"] == gen && row["degree"] == degree, || {
                    format!("{name}: failing row {row}")
                })?;
                ensure(row["witness"].is_null(), || {
                    format!("{name}: obstructed row has a witness")
                })?;
                let (label, coeff) = if name.starts_with("hp2") {
                    inverse_coefficient("u", 4, &[(4, 2), (8, 7)], 8)?
                } else {
                    inverse_coefficient("x", 2, &[(4, 3)], 4)?
                };
                let basis: Vec<&str> = row["basis"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .filter_map(Value::as_str)
                    .collect();
                let pos = basis
                    .iter()
                    .position(|b| *b == label)
                    .ok_or(format!("{name}: no basis element {label}"))?;
                let class = row["class"][pos].as_str().unwrap_or_default();
                ensure(class == coeff.to_string(), || {
                    format!("{name}: class {class}, oracle {coeff}")
                })?;
            }
        }
        done.push(format!(
            "{name}={}",
            json["immersible"].as_str().unwrap_or("?")
        ));
    }
    Ok(done.join(" "))
}

// ---------------------------------------------------------------------------
// 6. rejected inputs

fn rejected_inputs() -> Outcome {
    let scope = cli_fixture("decide", "cp2_n6.json", &[]);
    let stderr = String::from_utf8_lossy(&scope.stderr);
    ensure(scope.status.code() == Some(2), || {
        format!("scope: exit {:?}", scope.status.code())
    })?;
    ensure(scope.stdout.is_empty(), || "scope: verdict printed".into())?;
    ensure(
        stderr.contains("codimension n - m = 2 is not supported"),
        || format!("scope diagnostic: {stderr}"),
    )?;

    let torus = cli_fixture("decide", "torus3_n4.json", &[]);
    let stderr = String::from_utf8_lossy(&torus.stderr);
    ensure(torus.status.code() == Some(2), || {
        format!("torus: exit {:?}", torus.status.code())
    })?;
    ensure(torus.stdout.is_empty(), || "torus: verdict printed".into())?;
    ensure(
        stderr.contains("H^1(M;Q) has dimension 3") && stderr.contains("M+"),
        || format!("torus diagnostic: {stderr}"),
    )?;

    let dump = cli(&["dump-model", "--m", "4", "--n", "6"]);
    ensure(dump.status.code() == Some(2), || {
        "dump-model accepted even codimension".into()
    })?;
    Ok("even codimension and H^1 ≠ 0 exit 2 with diagnostics".into())
}

// ---------------------------------------------------------------------------
// 7. mode comparison

/// `(3, 6)` over `Q[x]/(x^5)` with `p(TM) = 1 + x²` and `f*p(TN) = 1 + 2x² + x⁴`.
fn three_in_six(mode: DifferentialMode) -> Result<immersion_core::immersion::Verdict, String> {
    let mx = FinitePresentation::truncated_polynomial("x", 2, 4).map_err(|e| e.to_string())?;
    let spec = MonoModelSpec::with_mode(3, 6, mode).map_err(|e| e.to_string())?;
    let model = build_mono_model(&spec).map_err(|e| e.to_string())?;
    let images: Vec<GradedVector> = model
        .base()
        .generators()
        .iter()
        .map(|g| match g.name.as_str() {
            "alpha_1" => GradedVector::new(4, vec![rat(2)]),
            "alpha_2" => GradedVector::new(8, vec![rat(1)]),
            "beta_1" => GradedVector::new(4, vec![rat(1)]),
            _ => mx.zero(g.degree),
        })
        .collect();
    let phi = CdgaMorphism::new(model.base(), &mx, images).map_err(|e| e.to_string())?;
    decide_with_phi(&spec, &model, &mx, &phi, mx.top()).map_err(|e| e.to_string())
}

fn mode_comparison() -> Outcome {
    let mut reports = Vec::new();
    for _ in 0..2 {
        let c = ModeComparison {
            dual_class: three_in_six(DifferentialMode::DualClass)?,
            paper_literal: three_in_six(DifferentialMode::PaperLiteral)?,
        };
        ensure(
            c.dual_class.immersible && !c.paper_literal.immersible,
            || {
                format!(
                    "(3,6): dual {} literal {}",
                    c.dual_class.answer(),
                    c.paper_literal.answer()
                )
            },
        )?;
        ensure(c.differing_rows() == ["gamma_2"], || {
            format!("(3,6): rows {:?}", c.differing_rows())
        })?;
        reports.push(explain_comparison(&c));
    }
    ensure(reports[0] == reports[1], || {
        "(3,6) report is not deterministic".into()
    })?;
    ensure(reports[0].contains("DIVERGENCE"), || {
        "(3,6) report does not flag the divergence".into()
    })?;

    let div = cli_fixture("compare", "divergent_n11.json", &[]);
    let text = String::from_utf8_lossy(&div.stdout);
    ensure(
        div.status.code() == Some(0) && text.contains("DIVERGENCE"),
        || format!("divergent fixture: {text}"),
    )?;
    let same = cli_fixture("compare", "hp2_n11.json", &[]);
    let text = String::from_utf8_lossy(&same.stdout);
    ensure(
        text.contains("modes agree: NO") && !text.contains("DIVERGENCE"),
        || format!("hp2: {text}"),
    )?;
    Ok("(3,6) over Q[x]/(x^5) and divergent_n11 flagged, hp2_n11 agrees".into())
}

// ---------------------------------------------------------------------------
// 8. determinism

fn fixture_suite_output() -> Vec<u8> {
    let mut out = Vec::new();
    for name in [
        "cp2_n5.json",
        "cp2_n7.json",
        "cp2_free_n5.json",
        "hp2_n11.json",
        "hp2_n13.json",
        "divergent_n11.json",
        "sphere3_n4.json",
        "cp2_n6.json",
        "torus3_n4.json",
    ] {
        for (sub, extra) in [
            ("decide", &["--json"][..]),
            ("explain", &[]),
            ("compare", &["--json"]),
        ] {
            let o = cli_fixture(sub, name, extra);
            out.extend(format!("{name} {sub} {:?}\n", o.status.code()).bytes());
            out.extend(o.stdout);
            out.extend(o.stderr);
        }
    }
    out.extend(cli(&["dump-model", "--m", "4", "--n", "11"]).stdout);
    out
}

fn determinism() -> Outcome {
    let first = fixture_suite_output();
    for run in 1..DETERMINISM_RUNS {
        ensure(fixture_suite_output() == first, || {
            format!("run {run} differs from run 0")
        })?;
    }
    Ok(format!(
        "{DETERMINISM_RUNS} runs byte-identical ({} bytes)",
        first.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("algebra axioms", axioms),
        ("linear solver vs naive oracle", linear_systems),
        ("witness soundness", witness_soundness),
        ("model cohomology vs BSO product", model_cohomology),
        ("classical cases via CLI", classical_cases),
        ("scope and simple connectivity", rejected_inputs),
        ("differential mode comparison", mode_comparison),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match result {
            Ok(detail) => println!(
                "acceptance {}: PASS {name}: {detail} [{:.2?}]",
                i + 1,
                start.elapsed()
            ),
            Err(e) => {
                failed += 1;
                println!(
                    "acceptance {}: FAIL {name}: {e} [{:.2?}]",
                    i + 1,
                    start.elapsed()
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

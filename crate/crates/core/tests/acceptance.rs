//! End-to-end acceptance checks. Run with `--nocapture` to see one line per
//! criterion.

use std::collections::BTreeSet;

use hardy_core::amplitude::{rational, Backend, ComplexFloat, ExactScalar, Scalar};
use hardy_core::bosonic::{
    apply_bs_bosonic, hom_coincidence_probability, hom_output, BosonicState, FockKet,
};
use hardy_core::hardy::{
    full_table, full_table_with, run_scenario, Detector, FullTable, Layout, Probability,
    ScenarioConfig, ScenarioOutcome,
};
use hardy_core::lhv::{audit, quantum_constraints};
use hardy_core::measurement::{
    annihilation_channel, apply_channel, condition_on_no_absorption, project_knowledge,
    KnowledgeProjector,
};
use hardy_core::optics::{apply_bs1_pair, BeamSplitter};
use hardy_core::state::{make_input, Arm, BasisKet, DensityMatrix, PathLabel, StateVector};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use Detector::{C, D};
use PathLabel::{U, V};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

const TOL: f64 = 1e-12;

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_rational(rational(n, d))
}

fn ensure(cond: bool, what: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn pair(a: PathLabel, b: PathLabel) -> BasisKet {
    BasisKet::pair(a, b)
}

fn eq3<A: Scalar>() -> Result<StateVector<A>, String> {
    apply_bs1_pair(&make_input::<A>()).map_err(err)
}

/// `amp(k) / amp(reference)` for every ket in the support.
fn relative_amplitudes(
    state: &StateVector<ExactScalar>,
    reference: BasisKet,
) -> Result<Vec<(BasisKet, ExactScalar)>, String> {
    let base = state
        .amplitude(&reference)
        .inv()
        .ok_or_else(|| format!("reference ket {reference} has zero amplitude"))?;
    Ok(state.amplitudes().map(|(k, a)| (*k, a * &base)).collect())
}

fn criterion_1() -> Outcome {
    let psi = eq3::<ExactScalar>()?;
    let i = ExactScalar::i();
    let expected = StateVector::from_terms([
        (pair(V, V), q(1, 2)),
        (pair(V, U), &i * &q(1, 2)),
        (pair(U, V), &i * &q(1, 2)),
        (pair(U, U), q(-1, 2)),
    ]);
    ensure(psi == expected, format!("got\n{psi}"))?;
    ensure(*psi.norm_sq() == q(1, 1), "norm is not 1")
}

fn criterion_2() -> Outcome {
    let psi = eq3::<ExactScalar>()?;
    let (post, survival) =
        project_knowledge(&psi, &KnowledgeProjector::no_annihilation()).map_err(err)?;
    let i = ExactScalar::i();
    let rel = relative_amplitudes(&post, pair(V, V))?;
    let expected = [
        (pair(V, V), q(1, 1)),
        (pair(V, U), i.clone()),
        (pair(U, V), i),
    ];
    let sorted: BTreeSet<_> = rel.iter().map(|(k, a)| (*k, a.to_string())).collect();
    let want: BTreeSet<_> = expected.iter().map(|(k, a)| (*k, a.to_string())).collect();
    ensure(sorted == want, format!("relative amplitudes {rel:?}"))?;
    ensure(survival == q(3, 4), format!("survival {survival}"))?;
    let p_uu = post.probability_of(pair(U, U)).map_err(err)?;
    ensure(p_uu == q(0, 1), format!("P(uu) = {p_uu}"))
}

fn criterion_3() -> Outcome {
    let cfg = ScenarioConfig::new(Layout::OutOut, rational(1, 1), Backend::Exact).map_err(err)?;
    let out = run_scenario(&cfg).map_err(err)?;
    let state = out
        .state
        .as_exact_pure()
        .ok_or("p = 1 yields a pure state")?;
    let dd = pair(PathLabel::D, PathLabel::D);
    let cd = pair(PathLabel::C, PathLabel::D);
    let dc = pair(PathLabel::D, PathLabel::C);
    ensure(
        state.support() == BTreeSet::from([dd, cd, dc]),
        format!("support {:?}", state.support()),
    )?;
    let i = ExactScalar::i();
    for (k, a) in relative_amplitudes(state, dd)? {
        let want = if k == dd { q(1, 1) } else { i.clone() };
        ensure(a == want, format!("relative amplitude of {k} is {a}"))?;
    }
    ensure(
        out.conditional.get(C, C).is_exactly(0, 1),
        "P(c+c-|OO) != 0",
    )
}

fn chain_rows(t: &FullTable) -> Vec<(&'static str, &Probability, (i64, i64))> {
    vec![
        (
            "P(c+c-|OO)",
            t.get(Layout::OutOut).conditional.get(C, C),
            (0, 1),
        ),
        (
            "P(d+d-|IO)",
            t.get(Layout::InOut).conditional.get(D, D),
            (0, 1),
        ),
        (
            "P(d+d-|OI)",
            t.get(Layout::OutIn).conditional.get(D, D),
            (0, 1),
        ),
        (
            "P(d+d-|II)",
            t.get(Layout::InIn).conditional.get(D, D),
            (1, 12),
        ),
        (
            "P(d+d-, no gamma|II)",
            t.get(Layout::InIn).unconditional.get(D, D),
            (1, 16),
        ),
        (
            "P(gamma|II)",
            &t.get(Layout::InIn).unconditional.gamma,
            (1, 4),
        ),
    ]
}

fn criterion_4() -> Outcome {
    let exact = full_table();
    for (name, p, (n, d)) in chain_rows(&exact) {
        ensure(p.is_exactly(n, d), format!("{name} = {p}, want {n}/{d}"))?;
    }
    let float = full_table_with(Backend::Float);
    for (name, p, (n, d)) in chain_rows(&float) {
        let want = n as f64 / d as f64;
        ensure(
            (p.float - want).abs() <= TOL,
            format!("float {name} = {}", p.float),
        )?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    // p = 1: channel then conditioning equals the projected pure state
    let psi = eq3::<ExactScalar>()?;
    let rho = DensityMatrix::from_pure(&psi).map_err(err)?;
    let full =
        apply_channel(&rho, &annihilation_channel(rational(1, 1)).map_err(err)?).map_err(err)?;
    let (cond, survival) = condition_on_no_absorption(&full).map_err(err)?;
    let (post, _) = project_knowledge(&psi, &KnowledgeProjector::no_annihilation()).map_err(err)?;
    ensure(
        cond == DensityMatrix::from_pure(&post).map_err(err)?,
        "p = 1 density path differs from pure path",
    )?;
    ensure(survival == q(3, 4), format!("survival {survival}"))?;
    for layout in Layout::ALL {
        let cfg = ScenarioConfig::new(layout, rational(1, 1), Backend::Exact).map_err(err)?;
        run_scenario(&cfg).map_err(|e| format!("{layout}: {e}"))?;
    }

    let cfg = ScenarioConfig::new(Layout::InIn, rational(0, 1), Backend::Exact).map_err(err)?;
    let out = run_scenario(&cfg).map_err(err)?;
    ensure(
        out.conditional.get(C, C).is_exactly(1, 1),
        "p = 0: P(c+c-|II) != 1",
    )?;

    for (n, d) in [(0, 1), (1, 2), (1, 1)] {
        let ch = annihilation_channel(rational(n, d)).map_err(err)?;
        let trace = apply_channel(&rho, &ch)
            .map_err(err)?
            .trace()
            .map_err(err)?;
        ensure(trace == q(1, 1), format!("trace {trace} at p = {n}/{d}"))?;
    }
    let rho_f = DensityMatrix::from_pure(&eq3::<ComplexFloat>()?).map_err(err)?;
    let trace = apply_channel(&rho_f, &annihilation_channel(rational(1, 4)).map_err(err)?)
        .map_err(err)?
        .trace()
        .map_err(err)?;
    ensure(
        (trace - 1.0).abs() <= TOL,
        format!("float trace {trace} at p = 1/4"),
    )?;

    let half =
        apply_channel(&rho, &annihilation_channel(rational(1, 2)).map_err(err)?).map_err(err)?;
    let block = half.restrict(|k| *k != BasisKet::Absorbed);
    // un-renormalized particle block of ρ′; after renormalizing it is pure
    let purity = block.purity().map_err(err)?;
    ensure(
        purity < q(1, 1) && purity == q(49, 64),
        format!("particle-block purity {purity}"),
    )?;
    let purity = half.purity().map_err(err)?;
    ensure(
        purity == q(25, 32),
        format!("purity of the full state {purity}"),
    )
}

fn criterion_6() -> Outcome {
    let cs = quantum_constraints();
    ensure(cs.zero_events.len() == 3, "expected three zero constraints")?;
    let verdict = audit(&cs);
    ensure(verdict.contradiction, "no contradiction found")?;
    ensure(
        verdict.witnesses.is_empty(),
        "a surviving strategy produces d+d- at (in,in)",
    )?;
    ensure(
        verdict.eliminated.len() + verdict.surviving_strategies.len() == 16,
        "not 16 strategies",
    )?;
    for skip in 0..cs.zero_events.len() {
        let mut relaxed = cs.clone();
        let dropped = relaxed.zero_events.remove(skip);
        ensure(
            !audit(&relaxed).contradiction,
            format!("still contradictory without {dropped}"),
        )?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let p = hom_coincidence_probability();
    ensure(p == rational(0, 1), format!("coincidence probability {p}"))?;
    let bs = BeamSplitter::second(Arm::Plus);
    let ket = |l| BasisKet::pair(l, PathLabel::S);
    for (occ, label) in [([1u32, 0], U), ([0, 1], V)] {
        let boson = apply_bs_bosonic(&BosonicState::<ExactScalar>::fock(&occ).map_err(err)?, 0, 1)
            .map_err(err)?;
        let dist = bs
            .apply(&StateVector::<ExactScalar>::basis(ket(label)))
            .map_err(err)?;
        ensure(
            boson.amplitude(&FockKet(vec![1, 0])) == dist.amplitude(&ket(PathLabel::C))
                && boson.amplitude(&FockKet(vec![0, 1])) == dist.amplitude(&ket(PathLabel::D)),
            format!("single photon in {label} disagrees"),
        )?;
    }
    Ok(())
}

fn close(exact: &ExactScalar, float: f64, what: &str) -> Outcome {
    let e = exact.to_float().map_err(err)?.re;
    ensure(
        (e - float).abs() <= TOL,
        format!("{what}: exact {exact} vs float {float}"),
    )
}

fn outcomes_agree(e: &ScenarioOutcome, f: &ScenarioOutcome, tag: &str) -> Outcome {
    let layout = e.config.layout();
    for (te, tf) in [
        (&e.conditional, &f.conditional),
        (&e.unconditional, &f.unconditional),
    ] {
        for (key, pe) in &te.rows {
            let x = pe
                .exact
                .as_ref()
                .ok_or("exact table lost its exact value")?;
            close(x, tf.rows[key].float, &format!("{tag} {layout} {key:?}"))?;
        }
    }
    let g = e
        .unconditional
        .gamma
        .exact
        .as_ref()
        .ok_or("missing exact gamma")?;
    close(
        g,
        f.unconditional.gamma.float,
        &format!("{tag} {layout} gamma"),
    )
}

fn scenario(layout: Layout, p: (i64, i64), backend: Backend) -> Result<ScenarioOutcome, String> {
    let cfg = ScenarioConfig::new(layout, rational(p.0, p.1), backend).map_err(err)?;
    run_scenario(&cfg).map_err(err)
}

fn criterion_8() -> Outcome {
    let psi = eq3::<ExactScalar>()?;
    let psi_f = eq3::<ComplexFloat>()?;
    for (k, a) in psi.amplitudes() {
        let b = psi_f.amplitude(k);
        let a = a.to_float().map_err(err)?;
        ensure((a - b).norm() <= TOL, format!("amplitude of {k}"))?;
    }
    let (_, s) = project_knowledge(&psi_f, &KnowledgeProjector::no_annihilation()).map_err(err)?;
    ensure((s - 0.75).abs() <= TOL, format!("float survival {s}"))?;
    let (exact, float) = (full_table(), full_table_with(Backend::Float));
    for layout in Layout::ALL {
        outcomes_agree(exact.get(layout), float.get(layout), "p=1")?;
        for p in [(0, 1), (1, 2)] {
            let tag = format!("p={}/{}", p.0, p.1);
            outcomes_agree(
                &scenario(layout, p, Backend::Exact)?,
                &scenario(layout, p, Backend::Float)?,
                &tag,
            )?;
        }
    }
    let hom = hom_output::<ComplexFloat>();
    let coinc = hom.probability(|k| k.0 == [1, 1]).map_err(err)?;
    ensure(coinc.abs() <= TOL, format!("float coincidence {coinc}"))?;
    for (name, p) in [
        ("OO cc", float.get(Layout::OutOut).conditional.get(C, C)),
        ("IO dd", float.get(Layout::InOut).conditional.get(D, D)),
        ("OI dd", float.get(Layout::OutIn).conditional.get(D, D)),
    ] {
        ensure(p.float.abs() <= TOL, format!("float {name} = {}", p.float))?;
    }
    Ok(())
}

fn small_rational() -> impl Strategy<Value = ExactScalar> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn exact_scalar() -> impl Strategy<Value = ExactScalar> {
    (
        small_rational(),
        small_rational(),
        small_rational(),
        small_rational(),
    )
        .prop_map(|(a, b, c, d)| {
            let i = ExactScalar::i();
            let r2 = ExactScalar::sqrt2();
            a + &b * &i + &c * &r2 + &(&d * &i) * &r2
        })
}

/// States on the BS2+ input ports, any electron label among {u, v}.
fn bs2_input() -> impl Strategy<Value = StateVector<ExactScalar>> {
    proptest::collection::vec(exact_scalar(), 4).prop_map(|amps| {
        let kets = [pair(U, U), pair(U, V), pair(V, U), pair(V, V)];
        StateVector::from_terms(kets.into_iter().zip(amps))
    })
}

fn run_property<S: Strategy>(
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let bs = BeamSplitter::second(Arm::Plus);
    run_property((bs2_input(), bs2_input()), |(a, b)| {
        let (ba, bb) = (bs.apply(&a).unwrap(), bs.apply(&b).unwrap());
        prop_assert_eq!(ba.inner(&bb), a.inner(&b));
        prop_assert_eq!(ba.norm_sq(), a.norm_sq());
        Ok(())
    })
    .map_err(|e| format!("unitarity: {e}"))?;

    run_property(
        (exact_scalar(), exact_scalar(), exact_scalar()),
        |(a, b, c)| {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &ExactScalar::zero(), a.clone());
            prop_assert_eq!(&a * &ExactScalar::one(), a.clone());
            prop_assert_eq!(&a + &(-&a), ExactScalar::zero());
            if let Some(inv) = a.inv() {
                prop_assert_eq!(&a * &inv, ExactScalar::one());
            } else {
                prop_assert!(a.is_zero());
            }
            Ok(())
        },
    )
    .map_err(|e| format!("field axioms: {e}"))?;

    let grid = [(0, 1), (1, 9), (1, 2), (8, 9), (1, 1)];
    for p in grid {
        for backend in [Backend::Exact, Backend::Float] {
            for layout in Layout::ALL {
                let out = scenario(layout, p, backend)?;
                for table in [&out.conditional, &out.unconditional] {
                    let total = table.total();
                    let ok = match (&total.exact, backend) {
                        (Some(x), Backend::Exact) => *x == q(1, 1),
                        _ => (total.float - 1.0).abs() <= TOL,
                    };
                    ensure(
                        ok,
                        format!("{layout} p={}/{} {backend}: rows sum to {total}", p.0, p.1),
                    )?;
                }
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("1 input through first beam splitters", criterion_1),
        ("2 knowledge projection", criterion_2),
        ("3 both second beam splitters removed", criterion_3),
        ("4 Hardy chain", criterion_4),
        ("5 channel consistency", criterion_5),
        ("6 local hidden variable audit", criterion_6),
        ("7 two-photon bunching", criterion_7),
        ("8 exact and float backends agree", criterion_8),
        ("9 property suites", criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("criterion {name}: PASS"),
            Err(why) => {
                println!("criterion {name}: FAIL: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qap::code::{weight_one_errors, StabilizerCode};
use qap::ftgate::{CosetSelection, FaultTolerantAction, FtError, LogicalGate, TransferAmplitude, TOLERANCE};
use qap::io::FtBundle;
use qap::oracle::DenseOperator;
use qap::Spinor;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sp(s: &str) -> Spinor {
    Spinor::parse(s).unwrap()
}

fn five() -> StabilizerCode {
    StabilizerCode::new("five", &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(sp)).unwrap()
}

fn action(code: &StabilizerCode, gate: &str) -> FaultTolerantAction {
    let errs = weight_one_errors(code.n()).unwrap();
    FaultTolerantAction::with_defaults(code, LogicalGate::named(gate, code.k()).unwrap(), &errs).unwrap()
}

fn assert_passes(act: &FaultTolerantAction, errs: &[Spinor]) {
    assert!(act.verify_unitarity().passed());
    assert!(act.transfer_forms_agree());
    assert!(act.verify_eigen_invariance().unwrap().passed());
    assert!(act.verify_logical_action().unwrap().passed());
    let r = act.verify_correction(errs).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
}

#[test]
fn five_qubit_gates_pass_and_recover() {
    let code = five();
    let errs = weight_one_errors(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in ["I", "X", "Y", "Z", "H", "S", "T"] {
        let act = action(&code, g);
        assert_passes(&act, &errs);
        for e in &errs {
            for i in 0..2 {
                let o = act.correction_cycle(&[(c(1.0, 0.0), *e)], i, &mut rng).unwrap();
                assert!(o.fidelity >= 1.0 - 1e-10, "{g} {} {i}", e.pauli_label());
                assert!((o.probability - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn superposed_noise_is_corrected() {
    let act = action(&five(), "H");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let noise = [(c(h, 0.0), sp("XIIII")), (c(0.0, h), sp("IIZII"))];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..2 {
        let o = act.correction_cycle(&noise, i, &mut rng).unwrap();
        assert!(o.success);
        assert!((o.probability - 0.5).abs() < 1e-10);
    }
    let bad = [(c(h, 0.0), sp("XIIII")), (c(h, 0.0), sp("XIIII"))];
    assert!(matches!(act.correction_cycle(&bad, 0, &mut rng), Err(FtError::NoiseBlocks(..))));
}

#[test]
fn correction_cycle_is_deterministic() {
    let act = action(&five(), "X");
    let noise = [(c(1.0, 0.0), sp("XXIII"))];
    let run = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..4).map(|_| act.correction_cycle(&noise, 1, &mut rng).unwrap()).collect::<Vec<_>>()
    };
    assert_eq!(run(11), run(11));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let failed = ["XXIII", "IZZII", "YIYII", "IIXIZ"].iter().any(|e| {
        (0..2).any(|i| !act.correction_cycle(&[(c(1.0, 0.0), sp(e))], i, &mut rng).unwrap().success)
    });
    assert!(failed);
}

#[test]
fn composition_matches_direct_construction() {
    let code = five();
    let x = action(&code, "X");
    let z = action(&code, "Z");
    let xz = FaultTolerantAction::compose(&x, &z).unwrap();
    assert_passes(&xz, &weight_one_errors(5).unwrap());
    let y = action(&code, "Y");
    let words = code.encoded_codewords().unwrap();
    let a = from_operator(xz.dense());
    let b = from_operator(y.dense());
    let ua: Vec<Complex64> = words.iter().flat_map(|w| apply(&a, w)).collect();
    let ub: Vec<Complex64> = words.iter().flat_map(|w| apply(&b, w)).collect();
    assert!(phase_free_diff(&ua, &ub) < 1e-10);
}

#[test]
fn permuted_transfer_amplitude() {
    let code = five();
    let errs = weight_one_errors(5).unwrap();
    let p_in = CosetSelection::from_errors(&code, &errs).unwrap();
    let d = 15;
    let mut x = DenseOperator::zeros(d);
    for b in 0..d {
        x.set((b + 4) % d, b, if b % 2 == 0 { c(1.0, 0.0) } else { c(0.0, -1.0) });
    }
    let t = TransferAmplitude {
        x,
        correlated_phases: None,
    };
    let act = FaultTolerantAction::build(&code, LogicalGate::named("S", 1).unwrap(), p_in.clone(), p_in, t).unwrap();
    assert_passes(&act, &errs);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for e in &errs {
        let o = act.correction_cycle(&[(c(1.0, 0.0), *e)], 0, &mut rng).unwrap();
        assert!(o.success, "{}", e.pauli_label());
    }
}

#[test]
fn non_unitary_inputs_are_rejected() {
    let m = DenseOperator::from_rows(vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
    assert!(matches!(LogicalGate::new(1, m), Err(FtError::NonUnitaryGate(_))));
    let code = five();
    let p = CosetSelection::trivial(4, 1).unwrap();
    let t = TransferAmplitude {
        x: DenseOperator::zeros(15),
        correlated_phases: None,
    };
    let r = FaultTolerantAction::build(&code, LogicalGate::named("X", 1).unwrap(), p.clone(), p, t);
    assert!(matches!(r, Err(FtError::NonUnitaryTransfer(_))));
}

#[test]
fn bundle_round_trip() {
    let act = action(&five(), "H");
    let bundle = FtBundle::from_action(&act);
    let text = bundle.to_json();
    let back = FtBundle::from_json(&text).unwrap();
    assert_eq!(back, bundle);
    assert_eq!(back.to_json(), text);
    let rebuilt = back.to_action().unwrap();
    assert!(from_operator(rebuilt.dense()) == from_operator(act.dense()));
    assert!(back.corrections_match(&rebuilt));
}

fn unitary_2x2() -> impl Strategy<Value = DenseOperator> {
    (0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, 0.0..1.0f64).prop_map(
        |(a, b, g, t)| {
            let th = t * std::f64::consts::FRAC_PI_2;
            let e = |x: f64| Complex64::from_polar(1.0, x);
            DenseOperator::from_rows(vec![
                vec![e(a) * th.cos(), -e(a + g) * th.sin()],
                vec![e(b) * th.sin(), e(b + g) * th.cos()],
            ])
            .unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn arbitrary_logical_unitaries(u in unitary_2x2()) {
        let code = five();
        let errs = weight_one_errors(5).unwrap();
        let act = FaultTolerantAction::with_defaults(&code, LogicalGate::new(1, u).unwrap(), &errs).unwrap();
        prop_assert!(act.verify_unitarity().max_residual <= TOLERANCE);
        prop_assert!(act.verify_eigen_invariance().unwrap().passed());
        prop_assert!(act.verify_logical_action().unwrap().passed());
        prop_assert!(act.verify_correction(&errs).unwrap().passed());
    }
}

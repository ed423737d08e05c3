mod common;

use common::*;
use proptest::prelude::*;
use qap::code::{hamming_embed, intrinsic_orthogonality, weight_one_errors, HammingCode, StabilizerCode};
use qap::partition::{gaussian_binomial, count_subgroups_of_index};
use qap::{BitString, Spinor};

fn sp(s: &str) -> Spinor {
    Spinor::parse(s).unwrap()
}

fn zz() -> StabilizerCode {
    StabilizerCode::new("zz", &[sp("ZZ")]).unwrap()
}

fn repetition() -> StabilizerCode {
    StabilizerCode::new("rep", &[sp("ZZI"), sp("IZZ")]).unwrap()
}

fn five() -> StabilizerCode {
    StabilizerCode::new("five", &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(sp)).unwrap()
}

fn steane() -> StabilizerCode {
    let g = ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"].map(sp);
    StabilizerCode::new("steane", &g).unwrap()
}

#[test]
fn reference_partitions_have_expected_shape() {
    for code in [zz(), repetition(), five()] {
        let (n, k) = (code.n(), code.k());
        let m = n - k;
        let table = code.partition().table().unwrap();
        assert_eq!(table.blocks.len(), 1 << m);
        let mut seen = std::collections::BTreeSet::new();
        for b in &table.blocks {
            assert_eq!(b.cosets.len(), 1 << (2 * k));
            for c in &b.cosets {
                assert_eq!(c.elements.len(), 1 << m);
                for e in &c.elements {
                    assert_eq!(code.partition().lookup(e).unwrap(), (c.tau, c.mu));
                    assert!(seen.insert(e.symplectic().unwrap()));
                }
            }
        }
        assert_eq!(seen.len(), 1 << (2 * n));
    }
}

#[test]
fn distances() {
    assert_eq!(five().max_correctable_t().unwrap().t, 1);
    assert_eq!(five().max_correctable_t().unwrap().w_min, Some(3));
    assert_eq!(steane().max_correctable_t().unwrap().w_min, Some(3));
    assert_eq!(repetition().max_correctable_t().unwrap().w_min, Some(1));
    let w1 = weight_one_errors(5).unwrap();
    assert!(five().is_correctable(&w1).unwrap().correctable);
    assert!(!repetition().is_correctable(&weight_one_errors(3).unwrap()).unwrap().correctable);
    let x_only: Vec<Spinor> = (0..3).map(|q| Spinor::single(3, q, 'X').unwrap()).collect();
    assert!(repetition().is_correctable(&x_only).unwrap().correctable);
}

#[test]
fn codewords_span_projector_and_decompose_space() {
    for code in [repetition(), five(), steane()] {
        let p = from_operator(&code.projector().unwrap());
        let words = code.encoded_codewords().unwrap();
        let d = p.len();
        let mut sum = vec![vec![c(0.0, 0.0); d]; d];
        for w in &words {
            for r in 0..d {
                for col in 0..d {
                    sum[r][col] += w[r] * w[col].conj();
                }
            }
        }
        assert!(max_diff(&sum, &p) < 1e-10, "{}", code.id());
        let spaces = code.eigenspace_decomposition().unwrap();
        let all: Vec<&Vec<num_complex::Complex64>> = spaces.iter().flat_map(|(_, v)| v).collect();
        assert_eq!(all.len(), d);
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let ip: num_complex::Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn intrinsic_closed_form_matches_dense() {
    let code = StabilizerCode::intrinsic(3, 1).unwrap();
    let all: Vec<Spinor> = Spinor::all_hermitian(3).unwrap().collect();
    let labels: Vec<BitString> = (0..2).map(|i| BitString::from_index(1, i).unwrap()).collect();
    for s in &all {
        for t in all.iter().step_by(3) {
            for i in &labels {
                for j in &labels {
                    let a = code.orthogonality_probe(s, t, i, j).unwrap();
                    let b = intrinsic_orthogonality(1, s, t, i, j).unwrap();
                    assert!((a - b).norm() < 1e-12, "{} {} {i} {j}", s.pauli_label(), t.pauli_label());
                }
            }
        }
    }
}

#[test]
fn hamming_embedding_labels() {
    let rows = ["1110000", "1001100", "0101010", "1101001"].map(|s| BitString::parse(s).unwrap());
    let closed: Vec<BitString> = (0..16u32)
        .map(|mask| {
            (0..4).filter(|i| mask >> i & 1 == 1).fold(BitString::zeros(7).unwrap(), |acc, i| {
                acc.add(&rows[i]).unwrap()
            })
        })
        .collect();
    let h = HammingCode::new(7, closed).unwrap();
    let emb = hamming_embed(&h).unwrap();
    for idx in 0..128u64 {
        let beta = BitString::from_index(7, idx).unwrap();
        let (tau, _) = emb.label_of_string(&beta).unwrap();
        assert_eq!(tau.weight() == 0, h.classical_syndrome(&beta).unwrap().weight() == 0);
    }
    assert_eq!(count_subgroups_of_index(4, 2).unwrap() as u128, gaussian_binomial(4, 2));
}

fn hermitian(n: usize) -> impl Strategy<Value = Spinor> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>()).prop_map(move |(z, a)| {
        Spinor::hermitian_from(
            BitString::from_raw(n, z & mask).unwrap(),
            BitString::from_raw(n, a & mask).unwrap(),
        )
        .unwrap()
    })
}

fn low_weight(n: usize, max_w: usize) -> impl Strategy<Value = Spinor> {
    prop::collection::vec((0..n, prop::sample::select(vec!['X', 'Y', 'Z'])), 1..=max_w).prop_map(move |v| {
        v.into_iter()
            .fold(Spinor::identity(n).unwrap(), |acc, (q, l)| {
                acc.multiply(&Spinor::single(n, q, l).unwrap()).unwrap()
            })
            .hermitian()
    })
}

/// `⟨ψ_i| A† B |ψ_j⟩ = c_{AB} δ_ij` over `errors ∪ {I}` on the dense codewords.
fn knill_laflamme(code: &StabilizerCode, errors: &[Spinor]) -> bool {
    let words = code.encoded_codewords().unwrap();
    let mut set = vec![Spinor::identity(code.n()).unwrap()];
    set.extend_from_slice(errors);
    for a in &set {
        let ad = dagger(&from_label(&a.pauli_label()));
        for b in &set {
            let op = matmul(&ad, &from_label(&b.pauli_label()));
            let c00: num_complex::Complex64 = words[0].iter().zip(apply(&op, &words[0])).map(|(x, y)| x.conj() * y).sum();
            for (i, wi) in words.iter().enumerate() {
                let v = apply(&op, wi);
                for (j, wj) in words.iter().enumerate() {
                    let ip: num_complex::Complex64 = wj.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                    let want = if i == j { c00 } else { c(0.0, 0.0) };
                    if (ip - want).norm() > 1e-9 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transport_preserves_labels(s in hermitian(5), t in hermitian(5)) {
        let code = five();
        let intr = StabilizerCode::intrinsic(5, 1).unwrap();
        let ts = code.transport(&s).unwrap();
        prop_assert_eq!(code.partition().lookup(&ts).unwrap(), intr.partition().lookup(&s).unwrap());
        prop_assert_eq!(code.partition().syndrome(&ts).unwrap(), intr.partition().syndrome(&s).unwrap());
        let tt = code.transport(&t).unwrap();
        let rep = code.partition().verify_closure([(ts, tt), (s, t)]).unwrap();
        prop_assert!(rep.passed());
    }

    #[test]
    fn correctability_agrees_with_knill_laflamme(errs in prop::collection::vec(low_weight(5, 2), 1..4)) {
        let code = five();
        let symbolic = code.is_correctable(&errs).unwrap().correctable;
        prop_assert_eq!(symbolic, knill_laflamme(&code, &errs));
    }

    #[test]
    fn correctability_agrees_on_repetition(errs in prop::collection::vec(low_weight(3, 2), 1..4)) {
        let code = repetition();
        prop_assert_eq!(code.is_correctable(&errs).unwrap().correctable, knill_laflamme(&code, &errs));
    }

    #[test]
    fn closure_on_steane(s in hermitian(7), t in hermitian(7)) {
        let rep = steane().partition().verify_closure([(s, t)]).unwrap();
        prop_assert!(rep.passed());
    }
}

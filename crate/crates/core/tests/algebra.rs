mod common;

use common::*;
use proptest::prelude::*;
use qap::oracle::spinor_matrix;
use qap::{BitString, Spinor};

fn all_tagged(n: usize) -> Vec<Spinor> {
    let mut out = Vec::new();
    for s in Spinor::all_hermitian(n).unwrap() {
        for p in 0..4 {
            out.push(s.with_phase((s.phase() + p) % 4));
        }
    }
    out
}

#[test]
fn labels_match_oracle_matrices() {
    for n in 1..=3 {
        for s in all_tagged(n) {
            let a = from_label(&s.pauli_label());
            let b = from_operator(&spinor_matrix(&s).unwrap());
            assert!(max_diff(&a, &b) < 1e-15, "{}", s.pauli_label());
        }
    }
}

#[test]
fn products_and_commutation_two_qubits() {
    let all = all_tagged(2);
    for s in &all {
        let ms = from_label(&s.pauli_label());
        for t in &all {
            let mt = from_label(&t.pauli_label());
            let st = matmul(&ms, &mt);
            let prod = s.multiply(t).unwrap();
            assert!(max_diff(&st, &from_label(&prod.pauli_label())) < 1e-12);
            let ts = matmul(&mt, &ms);
            assert_eq!(s.commutes(t).unwrap(), max_diff(&st, &ts) < 1e-12);
            let b = s.bi_add(t).unwrap();
            assert!(b.is_hermitian());
            assert!(b.same_class(&prod));
        }
    }
}

#[test]
fn adjoint_and_hermitian_form() {
    for s in all_tagged(3) {
        let m = from_label(&s.pauli_label());
        assert!(max_diff(&dagger(&m), &from_label(&s.adjoint().pauli_label())) < 1e-15);
        let h = from_label(&s.hermitian().pauli_label());
        assert!(max_diff(&dagger(&h), &h) < 1e-15);
        assert_eq!(s.is_hermitian(), max_diff(&dagger(&m), &m) < 1e-15);
    }
}

#[test]
fn basis_action_three_qubits() {
    for s in all_tagged(3) {
        let m = from_label(&s.pauli_label());
        for b in 0..8u64 {
            let beta = BitString::from_index(3, b).unwrap();
            let (p, out) = s.apply_to_basis(&beta).unwrap();
            let v = apply(&m, &basis(8, b as usize));
            let mut want = basis(8, out.to_index() as usize);
            let ph = qap::oracle::i_pow(p);
            for x in want.iter_mut() {
                *x *= ph;
            }
            assert!(v.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }
}

fn spinor(n: usize) -> impl Strategy<Value = Spinor> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(z, a, p)| {
        Spinor::new(
            BitString::from_raw(n, z & mask).unwrap(),
            BitString::from_raw(n, a & mask).unwrap(),
            p,
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_dense(s in spinor(4), t in spinor(4)) {
        let want = matmul(&from_label(&s.pauli_label()), &from_label(&t.pauli_label()));
        let got = from_label(&s.multiply(&t).unwrap().pauli_label());
        prop_assert!(max_diff(&want, &got) < 1e-12);
    }

    #[test]
    fn product_is_associative(s in spinor(6), t in spinor(6), u in spinor(6)) {
        let a = s.multiply(&t).unwrap().multiply(&u).unwrap();
        let b = s.multiply(&t.multiply(&u).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sympl_is_commutator_parity(s in spinor(8), t in spinor(8)) {
        let st = s.multiply(&t).unwrap();
        let ts = t.multiply(&s).unwrap();
        prop_assert!(st.same_class(&ts));
        let flipped = st.phase() != ts.phase();
        prop_assert_eq!(flipped, s.sympl(&t).unwrap() == 1);
    }

    #[test]
    fn bi_addition_is_a_group_law(s in spinor(8), t in spinor(8), u in spinor(8)) {
        let a = s.bi_add(&t).unwrap().bi_add(&u).unwrap();
        let b = s.bi_add(&t.bi_add(&u).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(s.bi_add(&t).unwrap(), t.bi_add(&s).unwrap());
        prop_assert!(s.bi_add(&s).unwrap().is_identity_class());
    }

    #[test]
    fn label_and_canonical_forms_round_trip(s in spinor(7)) {
        prop_assert_eq!(Spinor::parse(&s.pauli_label()).unwrap(), s);
        prop_assert_eq!(Spinor::parse(&s.to_string()).unwrap(), s);
    }
}

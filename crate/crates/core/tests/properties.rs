use std::f64::consts::PI;

use proptest::prelude::*;

use lgspin::dynamics::{
    heisenberg_correlation_2d, make_unsharp, nonselective, sequential_pair_statistics,
    DichotomicObservable, Measurement, QuantumState,
};
use lgspin::macrorealism::{
    lg_sums, lgch_values, nirm_feasibility, nsit_check, record_from_correlations, ExperimentRecord,
    JointDistribution16, NirmVerdict,
};
use lgspin::numerics::{expm_i_hermitian, trace_product_re, ComplexMatrix, C64};
use lgspin::spin_lg::{kb_pair_statistics, AngleSchedule, SpinValue};

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-2.0f64..2.0, dim * dim * 2).prop_map(move |v| {
        let m = ComplexMatrix::from_fn(dim, |r, c| {
            C64::new(v[2 * (r * dim + c)], v[2 * (r * dim + c) + 1])
        });
        (&m + &m.adjoint()).scale(0.5)
    })
}

fn any_hermitian() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..6).prop_flat_map(hermitian)
}

fn pair_of_hermitian() -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (2usize..6).prop_flat_map(|d| (hermitian(d), hermitian(d)))
}

fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
}

fn weights() -> impl Strategy<Value = [f64; 16]> {
    (
        prop::array::uniform16(0.0f64..1.0),
        prop::array::uniform16(any::<bool>()),
    )
        .prop_filter_map("need some weight", |(w, keep)| {
            let mut w = w;
            for (x, k) in w.iter_mut().zip(keep) {
                if !k {
                    *x = 0.0;
                }
            }
            let total: f64 = w.iter().sum();
            (total > 1e-3).then(|| w.map(|x| x / total))
        })
}

proptest! {
    #[test]
    fn evolution_inverse_and_semigroup(h in any_hermitian(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let us = expm_i_hermitian(&h, s).unwrap();
        let ut = expm_i_hermitian(&h, t).unwrap();
        let back = &us * &expm_i_hermitian(&h, -s).unwrap();
        prop_assert!(back.distance(&ComplexMatrix::identity(h.dim())) < 1e-10);
        let ust = expm_i_hermitian(&h, s + t).unwrap();
        prop_assert!((&us * &ut).distance(&ust) < 1e-10);
        prop_assert!(us.is_unitary(1e-10));
    }

    #[test]
    fn trace_is_cyclic((a, b) in pair_of_hermitian()) {
        let ab = (&a * &b).trace();
        let ba = (&b * &a).trace();
        prop_assert!((ab - ba).norm() < 1e-10);
        prop_assert!((trace_product_re(&a, &b) - ab.re).abs() < 1e-10);
    }

    #[test]
    fn heisenberg_equals_sequential(n in unit_vector(), h1 in hermitian(2), h2 in hermitian(2)) {
        let q = &(&ComplexMatrix::pauli_x().scale(n[0]) + &ComplexMatrix::pauli_y().scale(n[1]))
            + &ComplexMatrix::pauli_z().scale(n[2]);
        let obs = DichotomicObservable::from_hermitian(q).unwrap();
        let u1 = expm_i_hermitian(&h1, 1.0).unwrap();
        let u2 = expm_i_hermitian(&h2, 1.0).unwrap();
        let heis = heisenberg_correlation_2d(&obs, &u1, &u2).unwrap();
        let seq = sequential_pair_statistics(
            &QuantumState::maximally_mixed(2).unwrap(),
            Measurement::Sharp(&obs),
            &(&u2 * &u1.adjoint()),
            Measurement::Sharp(&obs),
            &u1,
        ).unwrap().correlation();
        prop_assert!((heis - seq).abs() < 1e-10);
    }

    #[test]
    fn maximally_mixed_is_invariant(two_j in 1u32..8, lambda in 0.01f64..=1.0, dt in 0.0..PI) {
        let spin = SpinValue::new(two_j).unwrap();
        let n = spin.dim();
        let obs = lgspin::spin_lg::parity_observable(spin);
        let e = make_unsharp(&obs, lambda).unwrap();
        let mixed = QuantumState::maximally_mixed(n).unwrap();
        let after = nonselective(&mixed, Measurement::Unsharp(&e)).unwrap();
        prop_assert!(after.rho().distance(mixed.rho()) < 1e-12);
        let stats = kb_pair_statistics(spin, 0.3, 0.3 + dt, lambda).unwrap();
        // parity + covers the even-indexed basis states; E₊ adds white noise
        let plus = lambda * n.div_ceil(2) as f64 / n as f64 + (1.0 - lambda) / 2.0;
        prop_assert!((stats.first_plus() - plus).abs() < 1e-10);
        prop_assert!((stats.second_plus() - plus).abs() < 1e-10);
    }

    #[test]
    fn parity_unsharp_lambda_squared(two_j in 1u32..8, lambda in 0.01f64..=1.0, t1 in 0.0..PI, dt in 0.0..PI) {
        let spin = SpinValue::new(two_j).unwrap();
        let sharp = kb_pair_statistics(spin, t1, t1 + dt, 1.0).unwrap().correlation();
        let unsharp = kb_pair_statistics(spin, t1, t1 + dt, lambda).unwrap().correlation();
        prop_assert!((unsharp - lambda * lambda * sharp).abs() < 1e-10);
    }

    #[test]
    fn classical_records_raise_no_alarm(w in weights()) {
        let jd = JointDistribution16::new(w).unwrap();
        let rec = jd.to_record().unwrap();
        prop_assert!(nsit_check(&rec, 1e-12).ok);
        for k in lg_sums(&rec) {
            prop_assert!(k <= 2.0 + 1e-10);
        }
        for v in lgch_values(&rec) {
            prop_assert!((-1.0 - 1e-10..=1e-10).contains(&v));
        }
        match nirm_feasibility(&rec, 1e-9).unwrap() {
            NirmVerdict::Feasible { witness, max_residual } => {
                prop_assert!(max_residual < 1e-8);
                let back = witness.to_record().unwrap();
                for (a, b) in back.pairs().iter().zip(rec.pairs()) {
                    for (x, y) in a.as_array().iter().zip(b.as_array()) {
                        prop_assert!((x - y).abs() < 1e-8);
                    }
                }
            }
            NirmVerdict::Infeasible { .. } => prop_assert!(false, "planted distribution judged infeasible"),
        }
    }

    #[test]
    fn lgch_is_shifted_lg_sum(c in prop::array::uniform4(-1.0f64..=1.0)) {
        let rec = record_from_correlations(c[0], c[1], c[2], c[3]).unwrap();
        let lg = lg_sums(&rec);
        let ch = lgch_values(&rec);
        for (k, v) in lg.iter().zip(ch) {
            prop_assert!((v - (k - 2.0) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn certificates_separate(c in prop::array::uniform4(-1.0f64..=1.0)) {
        let rec = record_from_correlations(c[0], c[1], c[2], c[3]).unwrap();
        let max_lg = lg_sums(&rec).into_iter().fold(f64::MIN, f64::max);
        match nirm_feasibility(&rec, 1e-9).unwrap() {
            NirmVerdict::Feasible { max_residual, .. } => {
                prop_assert!(max_lg <= 2.0 + 1e-7);
                prop_assert!(max_residual <= 1e-9 + 1e-12);
            }
            NirmVerdict::Infeasible { certificate } => {
                prop_assert!(max_lg > 2.0 - 1e-7);
                prop_assert!(certificate.verify(&rec));
            }
        }
    }

    #[test]
    fn record_json_round_trip(w in weights()) {
        let rec = JointDistribution16::new(w).unwrap().to_record().unwrap();
        let back = ExperimentRecord::from_json_str(&rec.to_json_string()).unwrap();
        prop_assert_eq!(back, rec);
    }

    #[test]
    fn schedule_text_round_trip(a in prop::array::uniform4(-10.0f64..10.0)) {
        let text = format!("{},{},{},{}", a[0], a[1], a[2], a[3]);
        let s: AngleSchedule = text.parse().unwrap();
        prop_assert_eq!(s.alphas(), a);
    }
}

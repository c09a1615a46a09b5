use fockppt::ensemble::{random_trace_class, seeded, EnsembleSpec};
use fockppt::fock::{expectation, min_eig, pt_fock, reduction_operator, to_fock};
use fockppt::gaussian::{normalize, partial_transpose, ppt_check, trace};
use fockppt::states::{
    impure_squeezed, impure_witness_analytic, impure_witness_analytic_with_nodes,
    phase_damped_tmsv, psi2, three_mode, three_mode_audit, tmsv, tmsv_schmidt_fock,
    tmsv_tail_weight, witness_psi_m, MixtureSpec, PhaseDampedTmsvSpec, ThreeModeSpec, Truncation,
};
use fockppt::{Bipartition, Error, GaussianOperator, ModeSubset, DEFAULT_TOLERANCE};

#[test]
fn tmsv_gaussian_and_schmidt_forms_agree() {
    for r in [0.2, 0.7, 1.1] {
        let g = to_fock(&tmsv(r).unwrap(), &[9, 9]).unwrap();
        assert!(g.max_abs_diff(&tmsv_schmidt_fock(r, 9)).unwrap() < 1e-12);
    }
}

#[test]
fn tmsv_pt_minimum() {
    let r: f64 = 0.5;
    let f = pt_fock(&tmsv_schmidt_fock(r, 8), &ModeSubset::new([1]).unwrap()).unwrap();
    assert!((min_eig(&f).unwrap() + r.tanh() / r.cosh().powi(2)).abs() < 1e-12);
}

#[test]
fn tmsv_tail_closes_trace() {
    let r: f64 = 0.8;
    for c in [4, 10, 20] {
        let t = tmsv_schmidt_fock(r, c).trace().re;
        assert!((t + tmsv_tail_weight(r, c) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn mixture_trace_with_deep_cutoff() {
    let spec = MixtureSpec::uniform(0.5, 1.0).unwrap();
    let f = impure_squeezed(&spec, Truncation::new(34).with_max_tail(1e-8), 64).unwrap();
    assert!((f.trace().re - 1.0).abs() < 1e-8);
    // a shallow cutoff with the same tail requirement is rejected
    let err = impure_squeezed(&spec, Truncation::new(14).with_max_tail(1e-8), 64).unwrap_err();
    assert!(matches!(err, Error::InsufficientCutoff(_)));
}

#[test]
fn uniform_witness_closed_form() {
    let spec = MixtureSpec::uniform(0.5, 1.0).unwrap();
    let closed = -(2.0 / 3.0) * (1.0f64.tanh().powi(3) - 0.5f64.tanh().powi(3));
    assert!((impure_witness_analytic(&spec, 0).unwrap() - closed).abs() < 1e-10);
    assert!((closed + 0.22871).abs() < 1e-5);
    // spectral convergence: 16 nodes already agree
    let coarse = impure_witness_analytic_with_nodes(&spec, 0, 16).unwrap();
    assert!((coarse - closed).abs() < 1e-12);
}

#[test]
fn mixture_witness_matches_oracle() {
    let spec: MixtureSpec = serde_json::from_str(
        r#"{"r_lower": 0.5, "r_upper": 1.0, "p_density": {"uniform": {"weight": 0.8}}, "pprime": [[0.2]]}"#,
    )
    .unwrap();
    assert!(impure_witness_analytic(&spec, 0).is_err());
    let rho = impure_squeezed(&spec, Truncation::new(10), 64).unwrap();
    let pt = pt_fock(&rho, &ModeSubset::new([1]).unwrap()).unwrap();
    let oracle = expectation(&pt, &witness_psi_m(1, &[10, 10]).unwrap())
        .unwrap()
        .re;
    let analytic = impure_witness_analytic(&spec, 1).unwrap();
    assert!(analytic < 0.0);
    assert!((oracle - analytic).abs() < 1e-12);
}

#[test]
fn phase_damping_witness_values() {
    let p = Bipartition::parse("0|1", 2).unwrap();
    let w = |r: f64, gt: f64| {
        let rho = phase_damped_tmsv(
            &PhaseDampedTmsvSpec::new(r, gt).unwrap(),
            Truncation::new(10),
        )
        .unwrap();
        expectation(
            &reduction_operator(&rho, &p).unwrap(),
            &psi2(&[10, 10]).unwrap(),
        )
        .unwrap()
        .re
    };
    assert!((w(0.5, 1.0) + 0.066849).abs() < 1e-6);
    assert_eq!(w(0.0, 1.0), 0.0);
    let row: Vec<f64> = (0..6).map(|k| w(0.7, k as f64).abs()).collect();
    assert!(row.windows(2).all(|p| p[1] < p[0]));
}

#[test]
fn three_mode_zero_damping_anchor() {
    let spec = ThreeModeSpec::real(2.0, 0.0, 0.0, 0.0).unwrap();
    let row = three_mode_audit(&spec, 6, DEFAULT_TOLERANCE, 1e-6).unwrap();
    assert!(row.candidate_npt && row.analytic_npt && row.oracle_npt);
    assert!((row.omega + 2.0).abs() < 1e-12);
    let p = Bipartition::parse("0,1|2", 3).unwrap();
    assert!(
        ppt_check(&three_mode(&spec), &p, DEFAULT_TOLERANCE)
            .unwrap()
            .is_npt
    );
}

#[test]
fn three_mode_damped_threshold_from_spectrum() {
    // ω < -1 exactly when |ζ13|² + |ζ23|² > (1 - λ)(1 - λ3)
    let (lambda, lambda3) = (0.4, 0.2);
    let bound = (1.0f64 - lambda) * (1.0 - lambda3);
    for (z, expect) in [(0.97 * bound.sqrt(), false), (1.03 * bound.sqrt(), true)] {
        let row = three_mode_audit(
            &ThreeModeSpec::real(z, 0.0, lambda, lambda3).unwrap(),
            6,
            1e-12,
            1e-9,
        )
        .unwrap();
        assert_eq!(row.analytic_npt, expect);
        assert_eq!(row.oracle_npt, expect);
        assert!(!row.candidate_npt);
    }
}

#[test]
fn normalize_against_oracle_trace() {
    for seed in 0..5 {
        let g = random_trace_class(&mut seeded(seed), 2, EnsembleSpec::DILUTE).with_log_scale(-2.0);
        let n = normalize(&g).unwrap();
        assert!((trace(&n).unwrap() - 1.0).abs() < 1e-12);
        assert!((to_fock(&n, &[12, 12]).unwrap().trace().re - 1.0).abs() < 1e-8);
    }
}

#[test]
fn operator_json_round_trip_is_exact() {
    for seed in 0..5 {
        let g = random_trace_class(&mut seeded(seed), 3, EnsembleSpec::STRONG);
        let pt = partial_transpose(&g, &ModeSubset::new([0, 2]).unwrap()).unwrap();
        for op in [g, pt] {
            let text = serde_json::to_string(&op).unwrap();
            let back: GaussianOperator = serde_json::from_str(&text).unwrap();
            assert_eq!(back, op);
        }
    }
}

#[test]
fn spec_json_round_trips() {
    let s = ThreeModeSpec::real(0.3, 0.4, 0.1, 0.2).unwrap();
    let back: ThreeModeSpec = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    let m = MixtureSpec::uniform(0.2, 0.9).unwrap();
    let back: MixtureSpec = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back, m);
    assert!(serde_json::from_str::<PhaseDampedTmsvSpec>(r#"{"r": -1.0, "gamma_t": 0.0}"#).is_err());
    assert!(serde_json::from_str::<ThreeModeSpec>(r#"{"lambda": 1.5, "lambda3": 0.0}"#).is_err());
}

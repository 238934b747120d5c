//! Property tests for the structural invariants: tensor algebra, spectral
//! reconstruction, constructor guarantees, and the entropy inequalities
//! that hold for every state.

use nalgebra::DMatrix;
use proptest::prelude::*;

use qvenn::entropy::{
    bipartite_diagram, conditional_entropy, nonclassical_count_default, ternary_mutual_entropy,
    von_neumann_entropy,
};
use qvenn::separability::{conditional_spectrum_test, ppt_test, PptVerdict};
use qvenn::states::{
    ghz_state, random_density, random_pure, random_separable, werner_state,
};
use qvenn::{C64, DensityOperator, HermitianOperator, SubsystemLayout};

fn qubit(label: &str) -> SubsystemLayout {
    SubsystemLayout::new([(label, 2)]).unwrap()
}

fn random_hermitian(layout: SubsystemLayout, seed: u64) -> HermitianOperator {
    let rho = random_density(&layout, layout.total_dim(), seed).unwrap();
    // shift and scale so it is Hermitian but not a state
    let m = rho.entries() * C64::new(3.0, 0.0)
        - DMatrix::<C64>::identity(rho.dim(), rho.dim()) * C64::new(0.4, 0.0);
    HermitianOperator::new(rho.layout().clone(), m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kronecker_is_associative(seed in 0u64..5000) {
        let a = random_hermitian(qubit("A"), seed);
        let b = random_hermitian(qubit("B"), seed + 1);
        let c = random_hermitian(qubit("C"), seed + 2);
        let left = a.tensor_product(&b).unwrap().tensor_product(&c).unwrap();
        let right = a.tensor_product(&b.tensor_product(&c).unwrap()).unwrap();
        let dev = (left.entries() - right.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(dev < 1e-12, "associativity deviation {dev}");
    }

    #[test]
    fn partial_transpose_is_involutive_and_trace_preserving(seed in 0u64..5000) {
        let rho = random_density(&SubsystemLayout::qubits(2).unwrap(), 4, seed).unwrap();
        let pt = rho.partial_transpose("B").unwrap();
        prop_assert!((pt.trace() - 1.0).abs() < 1e-12);
        let back = pt.partial_transpose("B").unwrap();
        prop_assert_eq!(back.entries(), rho.entries());
    }

    #[test]
    fn spectral_reconstruction_is_faithful(seed in 0u64..5000, n_parts in 1usize..4) {
        // up to 4^3 = 64 dimensions
        let layout = SubsystemLayout::new(
            (0..n_parts).map(|i| (format!("P{i}"), 4usize)),
        ).unwrap();
        let op = random_hermitian(layout, seed);
        let spectrum = op.spectral_decompose().unwrap();
        let err = (spectrum.recompose() - op.entries()).norm() / op.entries().norm();
        prop_assert!(err < 1e-9, "reconstruction error {err}");
    }

    #[test]
    fn werner_family_is_linear(x in 0.0f64..=1.0) {
        let w = werner_state(x).unwrap();
        let w0 = werner_state(0.0).unwrap();
        let w1 = werner_state(1.0).unwrap();
        let blend = w0.entries() * C64::new(1.0 - x, 0.0) + w1.entries() * C64::new(x, 0.0);
        let dev = (w.entries() - blend).norm();
        prop_assert!(dev < 1e-12);
    }

    #[test]
    fn pure_tripartite_schmidt_symmetry(seed in 0u64..5000) {
        // |S(AB) − S(C)| vanishes for every pure tripartite state
        let psi = random_pure(&SubsystemLayout::qubits(3).unwrap(), seed);
        let rho = psi.to_density();
        let s_ab = von_neumann_entropy(&rho.partial_trace(&["A", "B"]).unwrap());
        let s_c = von_neumann_entropy(&rho.partial_trace(&["C"]).unwrap());
        prop_assert!((s_ab - s_c).abs() < 1e-9, "{s_ab} vs {s_c}");
    }

    #[test]
    fn ternary_center_vanishes_for_pure_states(seed in 0u64..5000) {
        let psi = random_pure(&SubsystemLayout::qubits(3).unwrap(), seed);
        let rho = psi.to_density();
        let center = ternary_mutual_entropy(&rho, &["A"], &["B"], &["C"]).unwrap();
        prop_assert!(center.abs() < 1e-8, "center {center}");
    }

    #[test]
    fn negative_conditional_entropy_needs_a_nonclassical_eigenvalue(seed in 0u64..5000) {
        let rho = random_density(&SubsystemLayout::qubits(2).unwrap(), 1 + (seed as usize) % 4, seed).unwrap();
        let s = conditional_entropy(&rho, &["B"]).unwrap();
        if s < -1e-6 {
            let op = qvenn::entropy::conditional_amplitude_operator(
                &rho, &["B"], qvenn::tol::DEFAULT_EPSILON,
            ).unwrap();
            prop_assert!(nonclassical_count_default(&op).unwrap() >= 1);
        }
    }

    #[test]
    fn diagram_identities_hold_on_random_states(seed in 0u64..5000) {
        let rho = random_density(&SubsystemLayout::qubits(2).unwrap(), 1 + (seed as usize) % 4, seed).unwrap();
        let d = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
        prop_assert!((d.s_a_given_b - (d.s_ab - d.s_b)).abs() < 1e-9);
        prop_assert!((d.s_mutual - (d.s_a + d.s_b - d.s_ab)).abs() < 1e-9);
        prop_assert!(d.s_ab >= (d.s_a - d.s_b).abs() - 1e-9);
    }
}

#[test]
fn product_reduction_on_100_seeded_trials() {
    for seed in 0..100u64 {
        let rho_a = random_density(&qubit("A"), 1 + (seed as usize) % 2, seed).unwrap();
        let rho_b = random_density(&qubit("B"), 1 + (seed as usize) % 2, seed + 7000).unwrap();
        let joint = rho_a.tensor_product(&rho_b).unwrap();
        let back = joint.partial_trace(&["A"]).unwrap();
        let dev = (back.entries() - rho_a.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12, "seed {seed}: deviation {dev}");
    }
}

#[test]
fn ghz_single_party_marginals_are_flat() {
    for n in 2..=4 {
        let rho = ghz_state(n).unwrap().to_density();
        for label in rho.layout().labels() {
            let marginal = rho.partial_trace(&[label]).unwrap();
            assert!((marginal.entries()[(0, 0)].re - 0.5).abs() < 1e-12);
            assert!((marginal.entries()[(1, 1)].re - 0.5).abs() < 1e-12);
            assert!(marginal.entries()[(0, 1)].norm() < 1e-12);
        }
    }
}

#[test]
fn random_separable_passes_both_necessary_conditions() {
    // classicality of the conditional spectrum and PPT, 200 seeded trials
    let layout_a = qubit("A");
    let layout_b = qubit("B");
    for trial in 0..200u64 {
        let n_terms = 1 + (trial as usize) % 8;
        let (rho, spec) = random_separable(&layout_a, &layout_b, n_terms, 90_000 + trial).unwrap();
        let report = conditional_spectrum_test(&rho, (&["A"], &["B"])).unwrap();
        assert!(
            report.classicality_passed,
            "trial {trial}: max eigenvalue {}",
            report.max_conditional_eigenvalue_ab.max(report.max_conditional_eigenvalue_ba)
        );
        let (min_eig, verdict) = ppt_test(&rho, "B").unwrap();
        assert_eq!(verdict, PptVerdict::NotDetected, "trial {trial}: {min_eig}");
        assert!(min_eig > -1e-9, "trial {trial}: PPT min {min_eig}");

        // separable lower bound on the conditional entropy
        let bound = spec.weighted_factor_entropy_a();
        assert!(
            report.s_a_given_b >= bound - 1e-6,
            "trial {trial}: S(A|B) = {} < bound {bound}",
            report.s_a_given_b
        );
    }
}

#[test]
fn every_constructor_output_is_a_valid_state() {
    // eigenvalues clamped non-negative, unit trace
    let states: Vec<DensityOperator> = vec![
        qvenn::states::bell_state(qvenn::states::BellState::PhiMinus).to_density(),
        ghz_state(3).unwrap().to_density(),
        werner_state(0.37).unwrap(),
        random_density(&SubsystemLayout::qubits(2).unwrap(), 3, 11).unwrap(),
        random_separable(&qubit("A"), &qubit("B"), 3, 12).unwrap().0,
    ];
    for rho in &states {
        assert!((rho.entries().trace().re - 1.0).abs() < 1e-10);
        assert!(rho.eigenvalues().iter().all(|&l| l >= 0.0));
        let h = rho.as_hermitian();
        assert!(qvenn::linalg::hermiticity_deviation(h.entries()) < 1e-10);
    }
}

#[test]
fn werner_hierarchy_of_tests() {
    // along the family: S(A|B) < 0 ⇒ classicality fails ⇒ PPT fails
    for k in 0..=40 {
        let x = k as f64 / 40.0;
        let rho = werner_state(x).unwrap();
        let report = conditional_spectrum_test(&rho, (&["A"], &["B"])).unwrap();
        if report.s_a_given_b < -1e-9 {
            assert!(
                !report.classicality_passed,
                "x={x}: negative entropy without spectrum violation"
            );
        }
        if !report.classicality_passed {
            assert!(
                !report.ppt_passed,
                "x={x}: classicality failed but PPT passed"
            );
        }
    }
}

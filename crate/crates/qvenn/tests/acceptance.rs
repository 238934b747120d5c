//! Acceptance suite: the contract this crate must satisfy, one test per
//! criterion, every tolerance pinned in the assertions.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! pass/fail line per criterion.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qvenn::entropy::{
    bipartite_diagram, conditional_amplitude_operator, conditional_entropy,
    conditional_mutual_entropy, entropy_trace, multiway_mutual_entropy, mutual_entropy,
    ternary_mutual_entropy, trotter_approximant, von_neumann_entropy, ClassicalDistribution,
};
use qvenn::kholevo::{
    accessible_information, classical_vs_quantum_mutual, evolve_with_unitary,
    joint_preparer_state, kholevo_bound, measure_ensemble, two_signal_ensemble,
    PreparationEnsemble,
};
use qvenn::measurement::{
    ancilla_statistics, attach_ancilla, collapse_oracle_joint_distribution,
    entropic_uncertainty_check, epr_experiment, joint_pointer_distribution,
    sequential_measurement, AncillaDiagram, ChainState, MeasurementModel, Observable,
};
use qvenn::separability::{locate_werner_thresholds, random_separable_survey};
use qvenn::states::{
    bell_state, ghz_state, qubit_pure, random_density, random_pure, random_unitary, BellState,
    QubitBasisState,
};
use qvenn::{C64, DensityOperator, SubsystemLayout};

fn pass(n: u32, what: &str) {
    println!("criterion {n} ({what}): PASS");
}

/// Random probability vector from normalized exponential draws.
fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

#[test]
fn criterion_1_epr_diagram() {
    let rho = bell_state(BellState::PhiPlus).to_density();
    let d = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
    assert!((d.s_a - 1.0).abs() < 1e-9, "S(A) = {}", d.s_a);
    assert!((d.s_b - 1.0).abs() < 1e-9, "S(B) = {}", d.s_b);
    assert!(d.s_ab.abs() < 1e-9, "S(AB) = {}", d.s_ab);
    assert!((d.s_a_given_b + 1.0).abs() < 1e-9, "S(A|B) = {}", d.s_a_given_b);
    assert!((d.s_b_given_a + 1.0).abs() < 1e-9, "S(B|A) = {}", d.s_b_given_a);
    assert!((d.s_mutual - 2.0).abs() < 1e-9, "S(A:B) = {}", d.s_mutual);

    let op = conditional_amplitude_operator(&rho, &["B"], qvenn::tol::DEFAULT_EPSILON).unwrap();
    let spectrum = op.spectral_decompose().unwrap();
    let expected = [2.0, 0.0, 0.0, 0.0];
    for (got, want) in spectrum.eigenvalues.iter().zip(expected) {
        assert!(
            (got - want).abs() < 1e-6,
            "conditional spectrum {:?}",
            spectrum.eigenvalues
        );
    }
    pass(1, "EPR diagram (-1, 2, -1) and conditional spectrum {2,0,0,0}");
}

#[test]
fn criterion_2_ghz_calculus() {
    let ghz = ghz_state(3).unwrap().to_density();
    let center = ternary_mutual_entropy(&ghz, &["A"], &["B"], &["C"]).unwrap();
    assert!(center.abs() < 1e-8, "S(A:B:C) = {center}");

    let ab = ghz.partial_trace(&["A", "B"]).unwrap();
    let d = bipartite_diagram(&ab, (&["A"], &["B"])).unwrap();
    assert!(d.s_a_given_b.abs() < 1e-9);
    assert!((d.s_mutual - 1.0).abs() < 1e-9);
    assert!(d.s_b_given_a.abs() < 1e-9);

    let d = bipartite_diagram(&ghz, (&["A", "B"], &["C"])).unwrap();
    assert!((d.s_a_given_b + 1.0).abs() < 1e-9);
    assert!((d.s_mutual - 2.0).abs() < 1e-9);
    assert!((d.s_b_given_a + 1.0).abs() < 1e-9);

    let ghz4 = ghz_state(4).unwrap().to_density();
    let m4 = multiway_mutual_entropy(&ghz4, &[&["A"], &["B"], &["C"], &["D"]]).unwrap();
    assert!((m4 - 2.0).abs() < 1e-8, "4-way mutual = {m4}");
    pass(2, "GHZ ternary calculus and 4-party alternation");
}

#[test]
fn criterion_3_definition_consistency() {
    // trace form vs. entropy difference on 500 random bipartite states
    let dims = [(2usize, 2usize), (2, 3), (3, 3)];
    let mut max_dev: f64 = 0.0;
    for trial in 0..500u64 {
        let (da, db) = dims[(trial % 3) as usize];
        let layout =
            SubsystemLayout::new([("A", da), ("B", db)]).unwrap();
        let d = da * db;
        let rho = random_density(&layout, d, 1000 + trial).unwrap();
        let op = conditional_amplitude_operator(&rho, &["B"], 1e-12).unwrap();
        let via_trace = entropy_trace(&rho, &op, 1e-12).unwrap();
        let via_diff = conditional_entropy(&rho, &["B"]).unwrap();
        let dev = (via_trace - via_diff).abs();
        max_dev = max_dev.max(dev);
        assert!(dev < 1e-5, "trial {trial}: {via_trace} vs {via_diff}");
    }

    // approximant error decreases from n = 16 to n = 1024
    for trial in 0..20u64 {
        let layout = SubsystemLayout::qubits(2).unwrap();
        let rho = random_density(&layout, 4, 2000 + trial).unwrap();
        let limit =
            conditional_amplitude_operator(&rho, &["B"], qvenn::tol::DEFAULT_EPSILON).unwrap();
        let err = |n: u32| {
            let a = trotter_approximant(&rho, &["B"], n, qvenn::tol::DEFAULT_EPSILON).unwrap();
            (a.entries() - limit.entries()).norm()
        };
        let coarse = err(16);
        let fine = err(1024);
        assert!(fine < coarse, "trial {trial}: {coarse} -> {fine}");
    }
    pass(3, &format!(
        "definition consistency (max deviation {max_dev:.2e}) and approximant convergence"
    ));
}

#[test]
fn criterion_4_inequality_suite() {
    // strong subadditivity on 500 tripartite states
    for trial in 0..500u64 {
        let layout = SubsystemLayout::qubits(3).unwrap();
        let rank = 1 + (trial as usize) % 8;
        let rho = random_density(&layout, rank, 3000 + trial).unwrap();
        let cmi = conditional_mutual_entropy(&rho, &["A"], &["B"], &["C"]).unwrap();
        assert!(cmi >= -1e-9, "trial {trial}: S(A:B|C) = {cmi}");
    }

    // Araki-Lieb and the doubled mutual-entropy bound on bipartite states
    for trial in 0..200u64 {
        let layout = SubsystemLayout::qubits(2).unwrap();
        let rank = 1 + (trial as usize) % 4;
        let rho = random_density(&layout, rank, 4000 + trial).unwrap();
        let d = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
        assert!(
            d.s_ab >= (d.s_a - d.s_b).abs() - 1e-9,
            "Araki-Lieb violated at trial {trial}"
        );
        assert!(
            d.s_mutual <= 2.0 * d.s_a.min(d.s_b) + 1e-9,
            "mutual bound violated at trial {trial}"
        );
        assert!(d.s_mutual >= -1e-9);
    }

    // classical (diagonal) states obey the tighter classical bound
    let mut rng = ChaCha8Rng::seed_from_u64(4500);
    for trial in 0..200 {
        let p = random_simplex(&mut rng, 4);
        let m = DMatrix::from_diagonal(&DVector::from_iterator(
            4,
            p.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let rho = DensityOperator::from_matrix(SubsystemLayout::qubits(2).unwrap(), m).unwrap();
        let d = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
        assert!(
            d.s_mutual <= d.s_a.min(d.s_b) + 1e-9,
            "classical bound violated at trial {trial}"
        );
    }

    // local-unitary invariance of every diagram entry
    for trial in 0..50u64 {
        let layout = SubsystemLayout::qubits(2).unwrap();
        let rho = random_density(&layout, 1 + (trial as usize) % 4, 5000 + trial).unwrap();
        let before = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
        let u = random_unitary(2, 6000 + trial).kronecker(&random_unitary(2, 7000 + trial));
        let rotated =
            DensityOperator::from_matrix(layout, &u * rho.entries() * u.adjoint()).unwrap();
        let after = bipartite_diagram(&rotated, (&["A"], &["B"])).unwrap();
        for (x, y) in [
            (before.s_a, after.s_a),
            (before.s_b, after.s_b),
            (before.s_ab, after.s_ab),
            (before.s_a_given_b, after.s_a_given_b),
            (before.s_b_given_a, after.s_b_given_a),
            (before.s_mutual, after.s_mutual),
        ] {
            assert!((x - y).abs() < 1e-9, "trial {trial}: {x} vs {y}");
        }
    }
    pass(4, "strong subadditivity, Araki-Lieb, mutual bounds, local-unitary invariance");
}

#[test]
fn criterion_5_separability_thresholds_and_survey() {
    let thresholds = locate_werner_thresholds().unwrap();
    let third = 1.0 / 3.0;
    assert!(
        (thresholds.x_classicality - third).abs() < 1e-4,
        "classicality threshold at {}",
        thresholds.x_classicality
    );
    assert!(
        (thresholds.x_ppt - third).abs() < 1e-4,
        "PPT threshold at {}",
        thresholds.x_ppt
    );

    let survey = random_separable_survey(200, (2, 2), 12345).unwrap();
    assert_eq!(
        survey.classicality_violations, 0,
        "violations: {:?}",
        survey.violation_log
    );
    assert_eq!(survey.negative_conditional_entropies, 0);
    pass(5, &format!(
        "Werner thresholds at 1/3 (classicality {:.6}, PPT {:.6}), survey clean",
        thresholds.x_classicality, thresholds.x_ppt
    ));
}

#[test]
fn criterion_6_measurement_chains() {
    // balanced superposition measured twice with the same observable
    let q = qubit_pure("Q", QubitBasisState::Plus);
    let model = MeasurementModel::minimal(Observable::pauli_z());
    let chain = attach_ancilla(&ChainState::new(&q), &model).unwrap();
    let chain = attach_ancilla(&chain, &model).unwrap();

    let stats = ancilla_statistics(&chain).unwrap();
    let s_ancillae = von_neumann_entropy(&stats.ancilla_state);
    assert!((s_ancillae - 1.0).abs() < 1e-8, "S(AA') = {s_ancillae}");

    let s_q_given = conditional_entropy(chain.state(), &["A1", "A2"]).unwrap();
    assert!((s_q_given + 1.0).abs() < 1e-8, "S(Q|AA') = {s_q_given}");

    let ternary = ternary_mutual_entropy(chain.state(), &["Q"], &["A1"], &["A2"]).unwrap();
    assert!(ternary.abs() < 1e-8, "S(Q:A:A') = {ternary}");

    let total = von_neumann_entropy(chain.state());
    assert!(total.abs() < 1e-8, "S(QAA') = {total}");

    // Born statistics
    assert!((stats.outcome_distribution[0] - 0.5).abs() < 1e-10);
    assert!((stats.outcome_distribution[1] - 0.5).abs() < 1e-10);

    // same-observable sequential measurement matches the collapse oracle
    for seed in 0..10u64 {
        let layout = SubsystemLayout::new([("Q", 2)]).unwrap();
        let psi = random_pure(&layout, 8000 + seed);
        let chain =
            sequential_measurement(&psi, &Observable::pauli_z(), &Observable::pauli_z()).unwrap();
        let ancillae = chain.state().partial_trace(&["A1", "A2"]).unwrap();
        let s_b_given_a = conditional_entropy(&ancillae, &["A1"]).unwrap();
        assert!(s_b_given_a.abs() < 1e-9, "seed {seed}: S(B|A) = {s_b_given_a}");

        let oracle = collapse_oracle_joint_distribution(&psi, &Observable::pauli_z());
        let joint = joint_pointer_distribution(&chain).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (joint[i][j] - oracle[i][j]).abs() < 1e-10,
                    "seed {seed} ({i},{j})"
                );
            }
        }
    }
    pass(6, "pointer chain entropies, Born statistics, collapse-oracle equivalence");
}

#[test]
fn criterion_7_entropic_uncertainty() {
    for seed in 0..50u64 {
        let layout = SubsystemLayout::new([("Q", 2)]).unwrap();
        let psi = random_pure(&layout, 9000 + seed);
        let check =
            entropic_uncertainty_check(&psi, &Observable::pauli_z(), &Observable::pauli_x())
                .unwrap();
        assert!(
            check.lhs >= 1.0 - 1e-9,
            "seed {seed}: S(A)+S(B) = {}",
            check.lhs
        );
        assert!((check.rhs - 1.0).abs() < 1e-9);
    }
    // equality at z-eigenstates
    for which in [QubitBasisState::Zero, QubitBasisState::One] {
        let check = entropic_uncertainty_check(
            &qubit_pure("Q", which),
            &Observable::pauli_z(),
            &Observable::pauli_x(),
        )
        .unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-9, "equality case: {}", check.lhs);
    }
    pass(7, "entropic uncertainty bound with equality at eigenstates");
}

#[test]
fn criterion_8_epr_measurement() {
    let same = epr_experiment(&Observable::pauli_z(), &Observable::pauli_z()).unwrap();
    assert!(same.ancilla_diagram.s_a_given_b.abs() < 1e-9);
    assert!((same.ancilla_diagram.s_mutual - 1.0).abs() < 1e-9);
    assert!(same.ancilla_diagram.s_b_given_a.abs() < 1e-9);

    let orthogonal = epr_experiment(&Observable::pauli_z(), &Observable::pauli_x()).unwrap();
    assert!(orthogonal.ancilla_diagram.s_mutual.abs() < 1e-9);
    assert!((orthogonal.ancilla_diagram.s_a - 1.0).abs() < 1e-9);
    assert!((orthogonal.ancilla_diagram.s_b - 1.0).abs() < 1e-9);
    pass(8, "EPR pair: same-axis (0,1,0), orthogonal-axis independence");
}

#[test]
fn criterion_9_kholevo_lab() {
    // the {|0>, |+>} ensemble
    let ens = two_signal_ensemble(
        0.5,
        qubit_pure("Q", QubitBasisState::Zero).to_density(),
        qubit_pure("Q", QubitBasisState::Plus).to_density(),
    )
    .unwrap();
    let chi = kholevo_bound(&ens);
    assert!((chi - 0.600876).abs() < 1e-5, "chi = {chi}");

    let model = MeasurementModel::minimal(Observable::pauli_z());
    let info = accessible_information(&ens, &model).unwrap();
    assert!((info - 0.311278).abs() < 1e-5, "I = {info}");

    // bound chain and decomposition on 200 random (ensemble, measurement) pairs
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    for trial in 0..200u64 {
        let n_signals = 2 + (trial as usize) % 3; // 2..=4
        let dq = 2 + (trial as usize) % 2; // qubit or qutrit signals
        let layout = SubsystemLayout::new([("Q", dq)]).unwrap();
        let priors = ClassicalDistribution::new(random_simplex(&mut rng, n_signals)).unwrap();
        let signals: Vec<DensityOperator> = (0..n_signals)
            .map(|k| {
                let rank = 1 + ((trial as usize + k) % dq);
                random_density(&layout, rank, 10_000 + 10 * trial + k as u64).unwrap()
            })
            .collect();
        let ens = PreparationEnsemble::new(priors, signals).unwrap();

        let basis = random_unitary(dq, 20_000 + trial);
        let obs = Observable::new("random", basis).unwrap();
        let model = MeasurementModel::minimal(obs);

        let (rho_xa, report) = measure_ensemble(&ens, &model).unwrap();
        let h_p = ens.preparer_entropy();
        assert!(report.accessible_info >= -1e-9, "trial {trial}");
        assert!(
            report.accessible_info <= report.chi + 1e-9,
            "trial {trial}: I = {} > chi = {}",
            report.accessible_info,
            report.chi
        );
        assert!(report.chi <= h_p + 1e-9, "trial {trial}");
        assert!(
            (report.chi - report.accessible_info - report.deficit).abs() < 1e-9,
            "trial {trial}: decomposition residual"
        );
        assert!(report.conservation_residual < 1e-9, "trial {trial}");
        assert!((report.chi - report.s_xq_mutual).abs() < 1e-9, "trial {trial}");
        assert!(
            qvenn::kholevo::off_diagonal_mass(&rho_xa) < 1e-10,
            "trial {trial}: rho_X'A' not diagonal"
        );
    }

    // conservation under arbitrary (non-measurement) unitaries
    let rho_xq = joint_preparer_state(&ens).unwrap();
    let s_before = mutual_entropy(&rho_xq, (&["X"], &["Q"])).unwrap();
    for seed in 0..20u64 {
        let u = random_unitary(4, 30_000 + seed);
        let post = evolve_with_unitary(&rho_xq, &ens, &u, 2).unwrap();
        let s_after = mutual_entropy(&post, (&["X"], &["Q", "A"])).unwrap();
        assert!(
            (s_after - s_before).abs() < 1e-9,
            "seed {seed}: conservation residual {}",
            (s_after - s_before).abs()
        );
    }

    // classical mutual information never exceeds the quantum one
    for trial in 0..200u64 {
        let layout = SubsystemLayout::qubits(2).unwrap();
        let rho = random_density(&layout, 1 + (trial as usize) % 4, 40_000 + trial).unwrap();
        let bx = random_unitary(2, 50_000 + trial);
        let by = random_unitary(2, 60_000 + trial);
        let (h, s) = classical_vs_quantum_mutual(&rho, &bx, &by).unwrap();
        assert!(h <= s + 1e-9, "trial {trial}: H = {h} > S = {s}");
    }
    pass(9, "Kholevo bound, decomposition, conservation, classical-quantum inequality");
}

/// The spec examples exercised through the measurement chain with an
/// explicitly mixed-state input: the diagram shape survives.
#[test]
fn pointer_diagram_variants() {
    let q = qubit_pure("Q", QubitBasisState::Plus);
    let model = MeasurementModel::minimal(Observable::pauli_z());
    let chain = attach_ancilla(&ChainState::new(&q), &model).unwrap();
    let chain = attach_ancilla(&chain, &model).unwrap();
    let chain = attach_ancilla(&chain, &model).unwrap();
    let stats = ancilla_statistics(&chain).unwrap();
    match stats.diagram {
        AncillaDiagram::Ternary(t) => {
            assert!((t.s_a_b_given_c - 0.0).abs() < 1e-8 || t.s_a_b_given_c >= -1e-9);
            assert!((t.venn_sum() - t.s_abc).abs() < 1e-8);
        }
        _ => panic!("expected ternary diagram for three ancillae"),
    }
}

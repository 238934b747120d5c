//! Accessible-information laboratory: preparer ensembles, measurement of
//! mixed states, the Kholevo bound, its conservation and chain-rule
//! decomposition, and the classical-vs-quantum mutual entropy inequality.
//!
//! A preparer with internal variable X (an N-dimensional register,
//! diagonal in its own basis) emits signal state ρ_i with probability
//! p_i. The joint state ρ_XQ = Σ_i p_i |x_i⟩⟨x_i| ⊗ ρ_i is separable and
//! block-diagonal, and its mutual entropy
//!
//! > χ = S(X:Q) = S(Σ p_i ρ_i) − Σ p_i S(ρ_i)
//!
//! is the Kholevo bound. Measuring Q unitarily with an ancilla conserves
//! S(X:QA), and the chain rule splits it into the information that
//! reached the pointer, S(X′:A′), plus a non-negative deficit
//! S(X′:Q′|A′). With orthogonal pointers S(X′:A′) collapses to the
//! classical mutual information of the outcome table, so the accessible
//! information can never exceed χ.

use nalgebra::DMatrix;

use crate::entropy::{
    conditional_mutual_entropy, entropy_of_values, mutual_entropy, shannon_entropy,
    von_neumann_entropy, ClassicalDistribution,
};
use crate::error::{Error, Result};
use crate::linalg::{lift_matrix, DensityOperator, SubsystemLayout, C64};
use crate::measurement::{measurement_unitary, MeasurementModel};

/// Label reserved for the preparer register.
pub const PREPARER_LABEL: &str = "X";

/// A preparer distribution {p_i} with its signal states {ρ_i}.
///
/// The preparer basis |x_i⟩ is the computational basis of an N-dimensional
/// register labeled `X`; signals share one layout that must not use that
/// label.
#[derive(Debug, Clone)]
pub struct PreparationEnsemble {
    priors: ClassicalDistribution,
    signals: Vec<DensityOperator>,
}

impl PreparationEnsemble {
    pub fn new(priors: ClassicalDistribution, signals: Vec<DensityOperator>) -> Result<Self> {
        if priors.probabilities().len() != signals.len() || signals.is_empty() {
            return Err(Error::BadArity(format!(
                "{} priors for {} signals",
                priors.probabilities().len(),
                signals.len()
            )));
        }
        let layout = signals[0].layout();
        for rho in &signals[1..] {
            if rho.layout() != layout {
                return Err(Error::LayoutMismatch(
                    "all signals must share one layout".into(),
                ));
            }
        }
        if layout.labels().contains(&PREPARER_LABEL) {
            return Err(Error::DuplicateLabel(PREPARER_LABEL.into()));
        }
        Ok(Self { priors, signals })
    }

    pub fn priors(&self) -> &[f64] {
        self.priors.probabilities()
    }

    pub fn signals(&self) -> &[DensityOperator] {
        &self.signals
    }

    pub fn n_signals(&self) -> usize {
        self.signals.len()
    }

    /// The emitted average state ρ = Σ p_i ρ_i.
    pub fn average_state(&self) -> DensityOperator {
        let d = self.signals[0].dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for (p, rho) in self.priors().iter().zip(&self.signals) {
            acc += rho.entries() * C64::new(*p, 0.0);
        }
        DensityOperator::from_matrix(self.signals[0].layout().clone(), acc)
            .expect("convex mixture of states is a state")
    }

    /// H[p]: entropy of the preparer variable.
    pub fn preparer_entropy(&self) -> f64 {
        shannon_entropy(&self.priors)
    }
}

/// ρ_XQ = Σ_i p_i |x_i⟩⟨x_i| ⊗ ρ_i on the layout (X, signal parts…).
///
/// Block-diagonal over the preparer basis, so
/// S(XQ) = H[p] + Σ p_i S(ρ_i).
pub fn joint_preparer_state(ens: &PreparationEnsemble) -> Result<DensityOperator> {
    let n = ens.n_signals();
    let dq = ens.signals()[0].dim();
    let layout =
        SubsystemLayout::new([(PREPARER_LABEL, n)])?.join(ens.signals()[0].layout())?;
    let mut m = DMatrix::<C64>::zeros(n * dq, n * dq);
    for (i, (p, rho)) in ens.priors().iter().zip(ens.signals()).enumerate() {
        let block = rho.entries() * C64::new(*p, 0.0);
        m.view_mut((i * dq, i * dq), (dq, dq)).copy_from(&block);
    }
    DensityOperator::from_matrix(layout, m)
}

/// The Kholevo bound χ = S(Σ p_i ρ_i) − Σ p_i S(ρ_i), in bits.
///
/// Always within [0, H[p]]; equals the mutual entropy S(X:Q) of the
/// joint preparer state.
pub fn kholevo_bound(ens: &PreparationEnsemble) -> f64 {
    let mixed = von_neumann_entropy(&ens.average_state());
    let average: f64 = ens
        .priors()
        .iter()
        .zip(ens.signals())
        .map(|(p, rho)| p * von_neumann_entropy(rho))
        .sum();
    mixed - average
}

/// Accessible information for a given projective measurement, from the
/// classical outcome table: H[Tr(P_α ρ)] − Σ_i p_i H[Tr(P_α ρ_i)].
///
/// This is the independent classical route; [`measure_ensemble`] computes
/// the same number as a quantum mutual entropy.
pub fn accessible_information(ens: &PreparationEnsemble, model: &MeasurementModel) -> Result<f64> {
    let table = outcome_table(ens, model)?;
    let marginal: Vec<f64> = (0..model.observable().n_outcomes())
        .map(|alpha| {
            ens.priors()
                .iter()
                .zip(&table)
                .map(|(p, row)| p * row[alpha])
                .sum()
        })
        .collect();
    let conditional: f64 = ens
        .priors()
        .iter()
        .zip(&table)
        .map(|(p, row)| p * entropy_of_values(row))
        .sum();
    Ok(entropy_of_values(&marginal) - conditional)
}

/// Conditional outcome probabilities p(α|i) = Tr(P_α ρ_i).
pub fn outcome_table(ens: &PreparationEnsemble, model: &MeasurementModel) -> Result<Vec<Vec<f64>>> {
    let dq = ens.signals()[0].dim();
    if model.observable().dim() != dq {
        return Err(Error::InvalidModel(format!(
            "observable dimension {} does not match signal dimension {dq}",
            model.observable().dim()
        )));
    }
    Ok(ens
        .signals()
        .iter()
        .map(|rho| {
            (0..model.observable().n_outcomes())
                .map(|alpha| {
                    (model.observable().projector(alpha) * rho.entries())
                        .trace()
                        .re
                })
                .collect()
        })
        .collect())
}

/// Everything the measurement of an ensemble produces.
#[derive(Debug, Clone)]
pub struct KholevoReport {
    /// χ = S(ρ) − Σ p_i S(ρ_i).
    pub chi: f64,
    /// S(X:Q) of the joint preparer state (must equal χ).
    pub s_xq_mutual: f64,
    /// S(X′:A′) after measurement = information about the preparation.
    pub accessible_info: f64,
    /// S(X′:Q′|A′): what never reached the pointer. Non-negative.
    pub deficit: f64,
    /// |S(X′:Q′A′) − S(X:Q)|: conservation residual of the mutual
    /// entropy under the unitary coupling.
    pub conservation_residual: f64,
}

/// Couple the ensemble's quantum system to an ancilla via the model's
/// unitary, trace out Q, and report the full information budget together
/// with the diagonal post-measurement state ρ_X'A'.
pub fn measure_ensemble(
    ens: &PreparationEnsemble,
    model: &MeasurementModel,
) -> Result<(DensityOperator, KholevoReport)> {
    let rho_xq = joint_preparer_state(ens)?;
    let s_xq_mutual = {
        let q_labels: Vec<&str> = ens.signals()[0].layout().labels();
        mutual_entropy(&rho_xq, (&[PREPARER_LABEL], &q_labels))?
    };
    let chi = kholevo_bound(ens);

    let post = evolve_with_ancilla(&rho_xq, ens, model)?;
    let q_labels: Vec<&str> = ens.signals()[0].layout().labels();
    let ancilla: Vec<&str> = vec!["A"];

    let rho_xa = post.partial_trace(&[&[PREPARER_LABEL], ancilla.as_slice()].concat())?;
    let accessible_info = mutual_entropy(&rho_xa, (&[PREPARER_LABEL], &ancilla))?;

    let deficit = conditional_mutual_entropy(&post, &[PREPARER_LABEL], &q_labels, &ancilla)?;

    let qa: Vec<&str> = q_labels.iter().copied().chain(["A"]).collect();
    let conserved = mutual_entropy(&post, (&[PREPARER_LABEL], &qa))?;
    let report = KholevoReport {
        chi,
        s_xq_mutual,
        accessible_info,
        deficit,
        conservation_residual: (conserved - s_xq_mutual).abs(),
    };
    Ok((rho_xa, report))
}

/// (1_X ⊗ U_QA)(ρ_XQ ⊗ |0⟩⟨0|)(1_X ⊗ U_QA)† for the model's coupling.
fn evolve_with_ancilla(
    rho_xq: &DensityOperator,
    ens: &PreparationEnsemble,
    model: &MeasurementModel,
) -> Result<DensityOperator> {
    let u = measurement_unitary(model)?;
    evolve_with_unitary(rho_xq, ens, &u, model.ancilla_dim())
}

/// Same extension and evolution with an arbitrary unitary on Q ⊗ A;
/// used to check mutual-entropy conservation beyond measurement-shaped
/// couplings.
pub fn evolve_with_unitary(
    rho_xq: &DensityOperator,
    ens: &PreparationEnsemble,
    u_qa: &DMatrix<C64>,
    ancilla_dim: usize,
) -> Result<DensityOperator> {
    let dq = ens.signals()[0].dim();
    if u_qa.nrows() != dq * ancilla_dim {
        return Err(Error::InvalidModel(format!(
            "unitary of dimension {} does not match Q ⊗ A dimension {}",
            u_qa.nrows(),
            dq * ancilla_dim
        )));
    }
    let full_layout = rho_xq
        .layout()
        .join(&SubsystemLayout::new([("A", ancilla_dim)])?)?;
    let mut reference = DMatrix::<C64>::zeros(ancilla_dim, ancilla_dim);
    reference[(0, 0)] = C64::new(1.0, 0.0);
    let extended = rho_xq.entries().kronecker(&reference);
    // U acts on every part except the preparer register (position 0)
    let acting: Vec<usize> = (1..full_layout.len()).collect();
    let u_full = lift_matrix(u_qa, &acting, &full_layout);
    DensityOperator::from_matrix(full_layout, &u_full * extended * u_full.adjoint())
}

/// Classical vs. quantum mutual entropy of a bipartite state.
///
/// h_classical is the Shannon mutual information of the joint table
/// p_xy = ⟨x, y|ρ|x, y⟩ in a product basis; s_quantum is S(X:Y). The
/// classical value never exceeds the quantum one.
pub fn classical_vs_quantum_mutual(
    rho_xy: &DensityOperator,
    basis_x: &DMatrix<C64>,
    basis_y: &DMatrix<C64>,
) -> Result<(f64, f64)> {
    let layout = rho_xy.layout();
    if layout.len() != 2 {
        return Err(Error::BadArity(format!(
            "need a two-part layout, got {} parts",
            layout.len()
        )));
    }
    let labels = layout.labels();
    let (dx, dy) = (layout.parts()[0].1, layout.parts()[1].1);
    if basis_x.nrows() != dx || basis_y.nrows() != dy {
        return Err(Error::LayoutMismatch(
            "basis dimensions must match the two parts".into(),
        ));
    }
    let product_basis = basis_x.kronecker(basis_y);
    // p_xy = <x,y| ρ |x,y>
    let mut joint = vec![vec![0.0; dy]; dx];
    for (x, row) in joint.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let col = product_basis.column(x * dy + y);
            *cell = (col.adjoint() * rho_xy.entries() * col)[(0, 0)].re;
        }
    }
    let px: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
    let py: Vec<f64> = (0..dy).map(|y| joint.iter().map(|row| row[y]).sum()).collect();
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    let h_classical = entropy_of_values(&px) + entropy_of_values(&py) - entropy_of_values(&flat);

    let s_quantum = mutual_entropy(rho_xy, (&[labels[0]], &[labels[1]]))?;
    Ok((h_classical, s_quantum))
}

/// Off-diagonal mass of a state in the product basis |x_i⟩ ⊗ |α⟩ — the
/// post-measurement ρ_X'A' must be diagonal there.
pub fn off_diagonal_mass(rho: &DensityOperator) -> f64 {
    let d = rho.dim();
    let mut mass: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                mass = mass.max(rho.entries()[(i, j)].norm());
            }
        }
    }
    mass
}

/// Accessible information along a sweep of rotated single-qubit
/// measurement bases; step in degrees (default 1°).
pub fn measurement_angle_sweep(
    ens: &PreparationEnsemble,
    step_degrees: f64,
) -> Result<Vec<(f64, f64)>> {
    if ens.signals()[0].dim() != 2 {
        return Err(Error::InvalidModel(
            "angle sweep needs single-qubit signals".into(),
        ));
    }
    if !(step_degrees > 0.0) {
        return Err(Error::RangeError {
            name: "step_degrees",
            value: step_degrees,
            min: f64::MIN_POSITIVE,
            max: 180.0,
        });
    }
    let mut out = Vec::new();
    let mut deg: f64 = 0.0;
    while deg < 180.0 + 1e-9 {
        let obs = crate::measurement::Observable::rotated(deg.to_radians());
        let info = accessible_information(ens, &MeasurementModel::minimal(obs))?;
        out.push((deg, info));
        deg += step_degrees;
    }
    Ok(out)
}

/// Convenience: a two-signal qubit ensemble from named pure states.
pub fn two_signal_ensemble(
    p0: f64,
    rho0: DensityOperator,
    rho1: DensityOperator,
) -> Result<PreparationEnsemble> {
    PreparationEnsemble::new(
        ClassicalDistribution::new(vec![p0, 1.0 - p0])?,
        vec![rho0, rho1],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::Observable;
    use crate::states::{qubit_pure, random_density, QubitBasisState};
    use approx::assert_relative_eq;

    /// H₂((1 + 1/√2)/2): entropy of the {|0⟩, |+⟩} average state.
    const ZERO_PLUS_CHI: f64 = 0.6008760366928562;
    /// H₂(3/4) − 1/2: computational-basis information about {|0⟩, |+⟩}.
    const ZERO_PLUS_INFO: f64 = 0.31127812445913283;

    fn zero_plus_ensemble() -> PreparationEnsemble {
        two_signal_ensemble(
            0.5,
            qubit_pure("Q", QubitBasisState::Zero).to_density(),
            qubit_pure("Q", QubitBasisState::Plus).to_density(),
        )
        .unwrap()
    }

    fn orthogonal_ensemble() -> PreparationEnsemble {
        two_signal_ensemble(
            0.5,
            qubit_pure("Q", QubitBasisState::Zero).to_density(),
            qubit_pure("Q", QubitBasisState::One).to_density(),
        )
        .unwrap()
    }

    #[test]
    fn joint_state_block_structure() {
        let ens = orthogonal_ensemble();
        let rho_xq = joint_preparer_state(&ens).unwrap();
        // S(XQ) = H[p] + Σ p_i S(ρ_i) = 1 + 0
        assert_relative_eq!(von_neumann_entropy(&rho_xq), 1.0, epsilon = 1e-9);
        // Tr_X recovers the average state
        let q = rho_xq.partial_trace(&["Q"]).unwrap();
        let avg = ens.average_state();
        assert!((q.entries() - avg.entries()).norm() < 1e-12);
    }

    #[test]
    fn identical_signals_carry_nothing() {
        let rho = random_density(&SubsystemLayout::new([("Q", 2)]).unwrap(), 2, 5).unwrap();
        let ens = two_signal_ensemble(0.5, rho.clone(), rho).unwrap();
        let rho_xq = joint_preparer_state(&ens).unwrap();
        let s_xq = mutual_entropy(&rho_xq, (&["X"], &["Q"])).unwrap();
        assert!(s_xq.abs() < 1e-9);
        assert!(kholevo_bound(&ens).abs() < 1e-9);
    }

    #[test]
    fn average_state_entropy_of_zero_plus() {
        let ens = zero_plus_ensemble();
        let s_q = von_neumann_entropy(&ens.average_state());
        assert_relative_eq!(s_q, ZERO_PLUS_CHI, epsilon = 1e-9);
        // eigenvalues (1 ± 1/√2)/2
        let spec = ens.average_state().spectral_decompose().unwrap();
        assert_relative_eq!(
            spec.eigenvalues[0],
            (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn kholevo_bound_values() {
        assert_relative_eq!(kholevo_bound(&orthogonal_ensemble()), 1.0, epsilon = 1e-9);
        assert_relative_eq!(
            kholevo_bound(&zero_plus_ensemble()),
            ZERO_PLUS_CHI,
            epsilon = 1e-5
        );
        // equals S(X:Q) of the joint state
        let ens = zero_plus_ensemble();
        let rho_xq = joint_preparer_state(&ens).unwrap();
        let s_xq = mutual_entropy(&rho_xq, (&["X"], &["Q"])).unwrap();
        assert_relative_eq!(kholevo_bound(&ens), s_xq, epsilon = 1e-9);
    }

    #[test]
    fn orthogonal_signals_matching_basis_extract_everything() {
        let ens = orthogonal_ensemble();
        let model = MeasurementModel::minimal(Observable::pauli_z());
        let (rho_xa, report) = measure_ensemble(&ens, &model).unwrap();
        assert_relative_eq!(report.accessible_info, 1.0, epsilon = 1e-9);
        assert_relative_eq!(report.chi, 1.0, epsilon = 1e-9);
        assert!(report.deficit.abs() < 1e-8);
        assert!(report.conservation_residual < 1e-9);
        assert!(off_diagonal_mass(&rho_xa) < 1e-10);
    }

    #[test]
    fn zero_plus_computational_basis_loses_information() {
        let ens = zero_plus_ensemble();
        let model = MeasurementModel::minimal(Observable::pauli_z());
        let (_, report) = measure_ensemble(&ens, &model).unwrap();
        assert_relative_eq!(report.accessible_info, ZERO_PLUS_INFO, epsilon = 1e-5);
        assert_relative_eq!(report.chi, ZERO_PLUS_CHI, epsilon = 1e-5);
        assert!(report.accessible_info <= report.chi + 1e-9);
        // decomposition χ = I + deficit
        assert_relative_eq!(
            report.chi,
            report.accessible_info + report.deficit,
            epsilon = 1e-9
        );

        // the classical route agrees
        let classical = accessible_information(&ens, &model).unwrap();
        assert_relative_eq!(classical, report.accessible_info, epsilon = 1e-9);
        // outcome table rows: (1, 0) and (1/2, 1/2)
        let table = outcome_table(&ens, &model).unwrap();
        assert_relative_eq!(table[0][0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(table[1][0], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn single_signal_yields_no_information() {
        let rho = qubit_pure("Q", QubitBasisState::Plus).to_density();
        let ens = PreparationEnsemble::new(
            ClassicalDistribution::new(vec![1.0]).unwrap(),
            vec![rho],
        )
        .unwrap();
        for obs in [Observable::pauli_z(), Observable::pauli_x(), Observable::pauli_y()] {
            let (_, report) = measure_ensemble(&ens, &MeasurementModel::minimal(obs)).unwrap();
            assert!(report.accessible_info.abs() < 1e-9);
        }
    }

    #[test]
    fn unbiased_basis_on_orthogonal_signals_reads_nothing() {
        let ens = orthogonal_ensemble();
        let model = MeasurementModel::minimal(Observable::pauli_x());
        let info = accessible_information(&ens, &model).unwrap();
        assert!(info.abs() < 1e-9, "info {info}");

        let matched = MeasurementModel::minimal(Observable::pauli_z());
        let info = accessible_information(&ens, &matched).unwrap();
        assert_relative_eq!(info, ens.preparer_entropy(), epsilon = 1e-9);
    }

    #[test]
    fn conservation_under_random_unitaries() {
        use crate::states::random_unitary;
        let ens = zero_plus_ensemble();
        let rho_xq = joint_preparer_state(&ens).unwrap();
        let s_before = mutual_entropy(&rho_xq, (&["X"], &["Q"])).unwrap();
        for seed in 0..5 {
            let u = random_unitary(4, seed);
            let post = evolve_with_unitary(&rho_xq, &ens, &u, 2).unwrap();
            let s_after = mutual_entropy(&post, (&["X"], &["Q", "A"])).unwrap();
            assert!(
                (s_after - s_before).abs() < 1e-9,
                "seed {seed}: {s_before} vs {s_after}"
            );
        }
    }

    #[test]
    fn classical_never_exceeds_quantum_mutual() {
        let epr = crate::states::bell_state(crate::states::BellState::PhiPlus).to_density();
        let eye = DMatrix::<C64>::identity(2, 2);
        let (h, s) = classical_vs_quantum_mutual(&epr, &eye, &eye).unwrap();
        assert_relative_eq!(h, 1.0, epsilon = 1e-9);
        assert_relative_eq!(s, 2.0, epsilon = 1e-9);

        // classical diagonal state: h = s
        let mut m = DMatrix::<C64>::zeros(4, 4);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(3, 3)] = C64::new(0.5, 0.0);
        let cc = DensityOperator::from_matrix(SubsystemLayout::qubits(2).unwrap(), m).unwrap();
        let (h, s) = classical_vs_quantum_mutual(&cc, &eye, &eye).unwrap();
        assert_relative_eq!(h, s, epsilon = 1e-9);

        // product state: both vanish
        let product = DensityOperator::maximally_mixed(SubsystemLayout::qubits(2).unwrap());
        let (h, s) = classical_vs_quantum_mutual(&product, &eye, &eye).unwrap();
        assert!(h.abs() < 1e-9 && s.abs() < 1e-9);
    }

    #[test]
    fn angle_sweep_peaks_at_matching_basis() {
        let ens = orthogonal_ensemble();
        let sweep = measurement_angle_sweep(&ens, 15.0).unwrap();
        let (best_angle, best_info) = sweep
            .iter()
            .copied()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_relative_eq!(best_info, 1.0, epsilon = 1e-9);
        assert!(best_angle.rem_euclid(180.0) < 1e-9 || (180.0 - best_angle).abs() < 1e-9);
    }
}

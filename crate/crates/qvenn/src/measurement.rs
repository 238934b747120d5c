//! Unitary, collapse-free measurement model: ancilla chains, sequential
//! measurements of commuting and non-commuting observables, entropic
//! uncertainty checks, and two-party entangled-pair experiments.
//!
//! A measurement couples the observed system Q to an ancilla register A
//! through the unitary U = Σ_α P_α ⊗ V_α, where P_α projects onto the
//! α-th eigenspace of the observable and the pointer unitary V_α moves
//! the ancilla from its reference state |0⟩ to |α⟩. Nothing collapses:
//! a pure input stays globally pure, outcome randomness lives entirely in
//! the reduced state of the ancillae once Q is ignored, and the outcome
//! statistics reproduce the Born rule exactly.
//!
//! Pointer unitaries are modular-addition permutations on the ancilla
//! basis, the simplest choice with orthogonal pointer states. Ancillae
//! are single d-dimensional registers labeled `A1`, `A2`, … in attachment
//! order.

use nalgebra::DMatrix;

use crate::entropy::{
    bipartite_diagram, entropy_of_values, ternary_diagram, von_neumann_entropy, BipartiteDiagram,
    ClassicalDistribution, TernaryDiagram,
};
use crate::error::{Error, Result};
use crate::linalg::{lift_matrix, DensityOperator, SubsystemLayout, C64};
use crate::states::{bell_state, BellState, PureState};
use crate::tol;

/// An observable given by its orthonormal eigenbasis, with eigenvectors
/// optionally grouped into degenerate outcomes.
#[derive(Debug, Clone)]
pub struct Observable {
    label: String,
    /// Columns are the eigenvectors |a_i⟩.
    eigenbasis: DMatrix<C64>,
    /// Eigenvector indices per outcome; projectors P_α sum the dyads of a
    /// group. Singleton groups by default.
    outcome_groups: Vec<Vec<usize>>,
}

impl Observable {
    /// Non-degenerate observable: one outcome per eigenvector.
    pub fn new(label: impl Into<String>, eigenbasis: DMatrix<C64>) -> Result<Self> {
        let groups = (0..eigenbasis.ncols()).map(|i| vec![i]).collect();
        Self::with_outcome_groups(label, eigenbasis, groups)
    }

    /// Observable with degenerate outcomes: `outcome_groups[α]` lists the
    /// eigenvector indices whose dyads sum to the projector P_α.
    pub fn with_outcome_groups(
        label: impl Into<String>,
        eigenbasis: DMatrix<C64>,
        outcome_groups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let d = eigenbasis.nrows();
        if eigenbasis.ncols() != d {
            return Err(Error::InvalidModel("eigenbasis must be square".into()));
        }
        let unitarity = (eigenbasis.adjoint() * &eigenbasis - DMatrix::<C64>::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if unitarity > tol::HERMITICITY {
            return Err(Error::InvalidModel(format!(
                "eigenbasis not unitary (deviation {unitarity:.3e})"
            )));
        }
        let mut seen = vec![false; d];
        for group in &outcome_groups {
            for &i in group {
                if i >= d || seen[i] {
                    return Err(Error::InvalidModel(
                        "outcome groups must partition the eigenvectors".into(),
                    ));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidModel(
                "outcome groups must cover every eigenvector".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            eigenbasis,
            outcome_groups,
        })
    }

    /// Computational (σ_z) basis on a qubit.
    pub fn pauli_z() -> Self {
        Self::new("z", DMatrix::<C64>::identity(2, 2)).unwrap()
    }

    /// Hadamard (σ_x) basis |±⟩ on a qubit.
    pub fn pauli_x() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_column_slice(
            2,
            2,
            &[
                C64::new(r, 0.0),
                C64::new(r, 0.0),
                C64::new(r, 0.0),
                C64::new(-r, 0.0),
            ],
        );
        Self::new("x", m).unwrap()
    }

    /// Circular (σ_y) basis |±i⟩ on a qubit.
    pub fn pauli_y() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_column_slice(
            2,
            2,
            &[
                C64::new(r, 0.0),
                C64::new(0.0, r),
                C64::new(r, 0.0),
                C64::new(0.0, -r),
            ],
        );
        Self::new("y", m).unwrap()
    }

    /// Qubit basis rotated by `theta` radians in the x–z plane:
    /// {cosθ|0⟩ + sinθ|1⟩, −sinθ|0⟩ + cosθ|1⟩}.
    pub fn rotated(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let m = DMatrix::from_column_slice(
            2,
            2,
            &[
                C64::new(c, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(c, 0.0),
            ],
        );
        Self::new(format!("theta={theta}"), m).unwrap()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eigenbasis(&self) -> &DMatrix<C64> {
        &self.eigenbasis
    }

    /// System dimension the observable acts on.
    pub fn dim(&self) -> usize {
        self.eigenbasis.nrows()
    }

    /// Number of distinguishable outcomes.
    pub fn n_outcomes(&self) -> usize {
        self.outcome_groups.len()
    }

    /// Projector P_α onto the α-th outcome eigenspace.
    pub fn projector(&self, alpha: usize) -> DMatrix<C64> {
        let d = self.dim();
        let mut p = DMatrix::<C64>::zeros(d, d);
        for &i in &self.outcome_groups[alpha] {
            let col = self.eigenbasis.column(i);
            p += col * col.adjoint();
        }
        p
    }

    /// Overlap matrix U_ij = ⟨b_j|a_i⟩ between this observable's
    /// eigenvectors and another's.
    pub fn overlap_with(&self, other: &Observable) -> DMatrix<C64> {
        // entry (i, j) = <b_j | a_i>
        (other.eigenbasis.adjoint() * &self.eigenbasis).transpose()
    }
}

/// A measurement model: observable plus the pointer permutations that
/// write outcomes into an ancilla of dimension `ancilla_dim`.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    observable: Observable,
    ancilla_dim: usize,
    /// V_α: modular-addition permutations with V_α|0⟩ = |α⟩.
    pointer_maps: Vec<DMatrix<C64>>,
}

impl MeasurementModel {
    pub fn new(observable: Observable, ancilla_dim: usize) -> Result<Self> {
        let n = observable.n_outcomes();
        if ancilla_dim < n {
            return Err(Error::InvalidModel(format!(
                "ancilla dimension {ancilla_dim} below outcome count {n}"
            )));
        }
        let pointer_maps = (0..n)
            .map(|alpha| {
                let mut v = DMatrix::<C64>::zeros(ancilla_dim, ancilla_dim);
                for j in 0..ancilla_dim {
                    v[((j + alpha) % ancilla_dim, j)] = C64::new(1.0, 0.0);
                }
                v
            })
            .collect();
        Ok(Self {
            observable,
            ancilla_dim,
            pointer_maps,
        })
    }

    /// Model with the minimal ancilla (one pointer state per outcome).
    pub fn minimal(observable: Observable) -> Self {
        let n = observable.n_outcomes();
        Self::new(observable, n).expect("ancilla_dim = n_outcomes is always valid")
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    pub fn pointer_maps(&self) -> &[DMatrix<C64>] {
        &self.pointer_maps
    }
}

/// The coupling unitary U = Σ_α P_α ⊗ V_α on system ⊗ ancilla.
///
/// Acting on |a_i⟩|0⟩ it yields |a_i⟩|i⟩: initially the pointer sits at
/// zero, afterwards it labels the outcome.
pub fn measurement_unitary(model: &MeasurementModel) -> Result<DMatrix<C64>> {
    let dq = model.observable.dim();
    let da = model.ancilla_dim;
    let mut u = DMatrix::<C64>::zeros(dq * da, dq * da);
    for alpha in 0..model.observable.n_outcomes() {
        u += model
            .observable
            .projector(alpha)
            .kronecker(&model.pointer_maps[alpha]);
    }
    let unitarity = (u.adjoint() * &u - DMatrix::<C64>::identity(dq * da, dq * da))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if unitarity > tol::HERMITICITY {
        return Err(Error::InvalidModel(format!(
            "coupling is not unitary (deviation {unitarity:.3e}); projectors must resolve the identity"
        )));
    }
    Ok(u)
}

/// A measured system with its trail of ancillae.
///
/// Immutable: attaching an ancilla returns a new value. If the initial
/// state was pure the global state stays pure after every attachment
/// (unitarity), and each step asserts it.
#[derive(Debug, Clone)]
pub struct ChainState {
    state: DensityOperator,
    q_labels: Vec<String>,
    /// (ancilla label, observable label) in attachment order.
    history: Vec<(String, String)>,
    initial_entropy: f64,
}

impl ChainState {
    /// Start a chain from a pure system state.
    pub fn new(q: &PureState) -> Self {
        Self::from_density(q.to_density())
    }

    /// Start a chain from a mixed system state.
    pub fn from_density(rho: DensityOperator) -> Self {
        Self {
            q_labels: rho.layout().labels().iter().map(|s| s.to_string()).collect(),
            initial_entropy: von_neumann_entropy(&rho),
            state: rho,
            history: Vec::new(),
        }
    }

    /// Global state over Q and all attached ancillae.
    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    /// Labels of the measured system.
    pub fn q_labels(&self) -> Vec<&str> {
        self.q_labels.iter().map(|s| s.as_str()).collect()
    }

    /// Labels of the ancillae in attachment order.
    pub fn ancilla_labels(&self) -> Vec<&str> {
        self.history.iter().map(|(a, _)| a.as_str()).collect()
    }

    /// (ancilla, observable) pairs in attachment order.
    pub fn history(&self) -> &[(String, String)] {
        &self.history
    }

    /// Entropy of the state the chain started from.
    pub fn initial_entropy(&self) -> f64 {
        self.initial_entropy
    }
}

/// Attach a fresh ancilla measuring the whole system Q.
pub fn attach_ancilla(chain: &ChainState, model: &MeasurementModel) -> Result<ChainState> {
    let targets = chain.q_labels();
    attach_ancilla_to(chain, model, &targets)
}

/// Attach a fresh ancilla whose observable acts on the `targets` subset
/// of Q (the general form needed when parties are measured separately).
pub fn attach_ancilla_to(
    chain: &ChainState,
    model: &MeasurementModel,
    targets: &[&str],
) -> Result<ChainState> {
    let positions = chain.state.layout().positions_of(targets)?;
    for label in targets {
        if !chain.q_labels.iter().any(|q| q == label) {
            return Err(Error::UnknownLabel(format!("{label} is not a system label")));
        }
    }
    let target_dim: usize = positions
        .iter()
        .map(|&p| chain.state.layout().parts()[p].1)
        .product();
    if model.observable.dim() != target_dim {
        return Err(Error::InvalidModel(format!(
            "observable dimension {} does not match target dimension {target_dim}",
            model.observable.dim()
        )));
    }

    let ancilla_label = format!("A{}", chain.history.len() + 1);
    let ancilla_layout = SubsystemLayout::new([(ancilla_label.as_str(), model.ancilla_dim)])?;
    let full_layout = chain.state.layout().join(&ancilla_layout)?;

    // extend with the ancilla at its reference state |0⟩⟨0|
    let mut reference = DMatrix::<C64>::zeros(model.ancilla_dim, model.ancilla_dim);
    reference[(0, 0)] = C64::new(1.0, 0.0);
    let extended = chain.state.entries().kronecker(&reference);

    // the coupling acts on (targets..., new ancilla), embedded in the rest
    let u = measurement_unitary(model)?;
    let mut acting = positions.clone();
    acting.push(full_layout.len() - 1);
    let u_full = lift_matrix(&u, &acting, &full_layout);
    let evolved = &u_full * extended * u_full.adjoint();

    let state = DensityOperator::from_matrix(full_layout, evolved)?;
    let global_entropy = von_neumann_entropy(&state);
    if (global_entropy - chain.initial_entropy).abs() > 1e-8 {
        return Err(Error::InvalidModel(format!(
            "global entropy drifted from {:.3e} to {global_entropy:.3e} under a unitary",
            chain.initial_entropy
        )));
    }

    let mut history = chain.history.clone();
    history.push((ancilla_label, model.observable.label.clone()));
    Ok(ChainState {
        state,
        q_labels: chain.q_labels.clone(),
        history,
        initial_entropy: chain.initial_entropy,
    })
}

/// Entropy diagram over the ancilla registers, shaped by their number.
#[derive(Debug, Clone)]
pub enum AncillaDiagram {
    /// One ancilla: no diagram beyond its entropy.
    Single { s: f64 },
    /// Two ancillae: bipartite diagram of (first | second).
    Bipartite(BipartiteDiagram),
    /// Three ancillae: full ternary diagram.
    Ternary(TernaryDiagram),
    /// More: only the joint entropy is reported.
    Joint { s: f64 },
}

/// What the ancillae alone reveal: their reduced state, the entropy
/// diagram over them, and the outcome distribution read off the pointer
/// basis of the most recent ancilla.
#[derive(Debug, Clone)]
pub struct AncillaStatistics {
    pub ancilla_state: DensityOperator,
    pub diagram: AncillaDiagram,
    /// p_α = ⟨α|ρ_A|α⟩ for the last-attached ancilla.
    pub outcome_distribution: Vec<f64>,
}

/// Trace out Q and report the ancilla-side statistics.
pub fn ancilla_statistics(chain: &ChainState) -> Result<AncillaStatistics> {
    if chain.history.is_empty() {
        return Err(Error::NoAncilla);
    }
    let ancillae = chain.ancilla_labels();
    let ancilla_state = chain.state.partial_trace(&ancillae)?;

    let diagram = match ancillae.len() {
        1 => AncillaDiagram::Single {
            s: von_neumann_entropy(&ancilla_state),
        },
        2 => AncillaDiagram::Bipartite(bipartite_diagram(
            &ancilla_state,
            (&[ancillae[0]], &[ancillae[1]]),
        )?),
        3 => AncillaDiagram::Ternary(ternary_diagram(
            &ancilla_state,
            &[ancillae[0]],
            &[ancillae[1]],
            &[ancillae[2]],
        )?),
        _ => AncillaDiagram::Joint {
            s: von_neumann_entropy(&ancilla_state),
        },
    };

    let last = *ancillae.last().unwrap();
    let last_state = chain.state.partial_trace(&[last])?;
    let outcome_distribution: Vec<f64> = (0..last_state.dim())
        .map(|k| last_state.entries()[(k, k)].re)
        .collect();

    Ok(AncillaStatistics {
        ancilla_state,
        diagram,
        outcome_distribution,
    })
}

/// Measure `first` and then `second` on the same system, each with its
/// own minimal ancilla (labels `A1`, `A2`).
///
/// When the observables coincide the two pointers are perfectly
/// correlated — S(A2|A1) = 0 — with no collapse anywhere in the model.
pub fn sequential_measurement(
    q: &PureState,
    first: &Observable,
    second: &Observable,
) -> Result<ChainState> {
    let chain = ChainState::new(q);
    let chain = attach_ancilla(&chain, &MeasurementModel::minimal(first.clone()))?;
    attach_ancilla(&chain, &MeasurementModel::minimal(second.clone()))
}

/// Both sides of the entropic uncertainty relation
/// S(A) + S(B) ≥ min_i H[|U_ij|²].
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyCheck {
    /// S(A) + S(B): ancilla entropies after measuring `first` then `second`.
    pub lhs: f64,
    /// Smallest row entropy of the squared overlap matrix.
    pub rhs: f64,
}

/// Run the sequential measurement and evaluate both sides of the
/// entropic uncertainty relation for the observable pair.
pub fn entropic_uncertainty_check(
    q: &PureState,
    first: &Observable,
    second: &Observable,
) -> Result<UncertaintyCheck> {
    let chain = sequential_measurement(q, first, second)?;
    let s_a = von_neumann_entropy(&chain.state.partial_trace(&["A1"])?);
    let s_b = von_neumann_entropy(&chain.state.partial_trace(&["A2"])?);

    let overlap = first.overlap_with(second);
    let mut rhs = f64::INFINITY;
    for i in 0..overlap.nrows() {
        let row: Vec<f64> = (0..overlap.ncols())
            .map(|j| overlap[(i, j)].norm_sqr())
            .collect();
        rhs = rhs.min(entropy_of_values(&row));
    }
    Ok(UncertaintyCheck { lhs: s_a + s_b, rhs })
}

/// Results of measuring the two halves of an entangled pair with
/// separate ancillae.
#[derive(Debug, Clone)]
pub struct EprExperiment {
    /// Final four-party state over Q1, Q2, A1, A2.
    pub state: DensityOperator,
    /// Diagram of the pair before any measurement: (−1, 2, −1).
    pub pre_measurement_diagram: BipartiteDiagram,
    /// Reduced state of the two ancillae.
    pub ancilla_state: DensityOperator,
    /// Diagram of (A1 | A2) on the reduced ancilla state.
    pub ancilla_diagram: BipartiteDiagram,
    /// S(Q1Q2 | A1A2): negative, balancing the ancilla entropy.
    pub s_q_given_ancillae: f64,
    /// S(Q1Q2 : A1A2).
    pub s_q_ancillae_mutual: f64,
    /// Global entropy of the four-party state (zero: unitarity).
    pub s_total: f64,
}

/// Prepare (|00⟩ + |11⟩)/√2 on Q1, Q2 and measure each half with its own
/// single-qubit observable.
pub fn epr_experiment(first_axis: &Observable, second_axis: &Observable) -> Result<EprExperiment> {
    if first_axis.dim() != 2 || second_axis.dim() != 2 {
        return Err(Error::InvalidModel(
            "pair experiment needs single-qubit observables".into(),
        ));
    }
    let pair = bell_state(BellState::PhiPlus);
    // relabel A, B -> Q1, Q2 to keep ancilla names free
    let layout = SubsystemLayout::new([("Q1", 2), ("Q2", 2)])?;
    let q = PureState::new(layout, pair.amplitudes().clone())?;
    let pre = q.to_density();
    let pre_measurement_diagram = bipartite_diagram(&pre, (&["Q1"], &["Q2"]))?;

    let chain = ChainState::new(&q);
    let chain = attach_ancilla_to(&chain, &MeasurementModel::minimal(first_axis.clone()), &["Q1"])?;
    let chain =
        attach_ancilla_to(&chain, &MeasurementModel::minimal(second_axis.clone()), &["Q2"])?;

    let state = chain.state().clone();
    let ancilla_state = state.partial_trace(&["A1", "A2"])?;
    let ancilla_diagram = bipartite_diagram(&ancilla_state, (&["A1"], &["A2"]))?;
    let s_total = von_neumann_entropy(&state);
    let s_ancillae = von_neumann_entropy(&ancilla_state);
    let s_q_given_ancillae = s_total - s_ancillae;
    let s_q = von_neumann_entropy(&state.partial_trace(&["Q1", "Q2"])?);
    Ok(EprExperiment {
        pre_measurement_diagram,
        ancilla_state,
        ancilla_diagram,
        s_q_given_ancillae,
        s_q_ancillae_mutual: s_q + s_ancillae - s_total,
        s_total,
        state,
    })
}

/// Projection-postulate prediction for two sequential measurements of
/// the same observable: p(i, j) = |⟨a_i|ψ⟩|²·δ_ij, computed with plain
/// probability arithmetic (the oracle the unitary chain must reproduce).
pub fn collapse_oracle_joint_distribution(q: &PureState, obs: &Observable) -> Vec<Vec<f64>> {
    let n = obs.n_outcomes();
    let amps = q.amplitudes();
    let mut joint = vec![vec![0.0; n]; n];
    for (alpha, row) in joint.iter_mut().enumerate() {
        let p = obs.projector(alpha);
        let projected = &p * amps;
        // after outcome alpha the collapsed state is P|ψ⟩/norm; measuring
        // the same observable again yields alpha with certainty
        row[alpha] = projected.norm_squared();
    }
    joint
}

/// Joint pointer distribution p(i, j) = ⟨ij|ρ_{A1A2}|ij⟩ of a two-ancilla
/// chain.
pub fn joint_pointer_distribution(chain: &ChainState) -> Result<Vec<Vec<f64>>> {
    let ancillae = chain.ancilla_labels();
    if ancillae.len() != 2 {
        return Err(Error::BadArity(format!(
            "need exactly 2 ancillae, chain has {}",
            ancillae.len()
        )));
    }
    let rho = chain.state.partial_trace(&ancillae)?;
    let d2 = rho.layout().dim_of(ancillae[1])?;
    let d1 = rho.layout().dim_of(ancillae[0])?;
    let mut joint = vec![vec![0.0; d2]; d1];
    for (i, row) in joint.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = rho.entries()[(i * d2 + j, i * d2 + j)].re;
        }
    }
    Ok(joint)
}

/// Born-rule distribution |⟨a_i|ψ⟩|² over measurement outcomes.
pub fn born_distribution(q: &PureState, obs: &Observable) -> ClassicalDistribution {
    let probs: Vec<f64> = (0..obs.n_outcomes())
        .map(|alpha| (obs.projector(alpha) * q.amplitudes()).norm_squared())
        .collect();
    ClassicalDistribution::new(probs).expect("projective outcomes form a distribution")
}

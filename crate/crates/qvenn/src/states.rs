//! Constructors for the named states and ensembles used throughout the
//! crate, plus seeded random-state generators for property surveys.
//!
//! Random generators take explicit seeds and own their generator state;
//! the same seed always reproduces the same entries.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{DensityOperator, SubsystemLayout, C64};
use crate::tol;

/// A normalized state vector on a labeled layout.
#[derive(Debug, Clone)]
pub struct PureState {
    layout: SubsystemLayout,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Wrap an amplitude vector, checking normalization.
    pub fn new(layout: SubsystemLayout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::LayoutMismatch(format!(
                "{} amplitudes for layout dimension {}",
                amplitudes.len(),
                layout.total_dim()
            )));
        }
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > tol::TRACE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// The projector |ψ⟩⟨ψ| as a density operator.
    pub fn to_density(&self) -> DensityOperator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::from_matrix(self.layout.clone(), m)
            .expect("projector of a normalized vector is a state")
    }
}

/// The four maximally entangled two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    /// (|00⟩ + |11⟩)/√2
    PhiPlus,
    /// (|00⟩ − |11⟩)/√2
    PhiMinus,
    /// (|01⟩ + |10⟩)/√2
    PsiPlus,
    /// (|01⟩ − |10⟩)/√2, the singlet
    PsiMinus,
}

/// One of the Bell states on qubits `A`, `B`.
pub fn bell_state(which: BellState) -> PureState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match which {
        BellState::PhiPlus => [r, 0.0, 0.0, r],
        BellState::PhiMinus => [r, 0.0, 0.0, -r],
        BellState::PsiPlus => [0.0, r, r, 0.0],
        BellState::PsiMinus => [0.0, r, -r, 0.0],
    };
    let v = DVector::from_iterator(4, amps.iter().map(|&x| C64::new(x, 0.0)));
    PureState::new(SubsystemLayout::qubits(2).unwrap(), v).unwrap()
}

/// The n-party Greenberger-Horne-Zeilinger state
/// (|0…0⟩ + |1…1⟩)/√2 on qubits `A`, `B`, `C`, …
pub fn ghz_state(n_parties: usize) -> Result<PureState> {
    if n_parties < 2 {
        return Err(Error::BadArity(format!(
            "GHZ state needs at least 2 parties, got {n_parties}"
        )));
    }
    let layout = SubsystemLayout::qubits(n_parties)?;
    let d = layout.total_dim();
    let mut v = DVector::from_element(d, C64::new(0.0, 0.0));
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[0] = r;
    v[d - 1] = r;
    PureState::new(layout, v)
}

/// Impure singlet: x·|Ψ⁻⟩⟨Ψ⁻| + (1−x)·I/4 on qubits `A`, `B`.
pub fn werner_state(x: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::RangeError {
            name: "x",
            value: x,
            min: 0.0,
            max: 1.0,
        });
    }
    let singlet = bell_state(BellState::PsiMinus).to_density();
    let background = DMatrix::<C64>::identity(4, 4) * C64::new((1.0 - x) / 4.0, 0.0);
    let entries = singlet.entries() * C64::new(x, 0.0) + background;
    DensityOperator::from_matrix(SubsystemLayout::qubits(2).unwrap(), entries)
}

/// Construction record for a separable state: weights w_k and product
/// factors (ρ_A⁽ᵏ⁾, ρ_B⁽ᵏ⁾).
#[derive(Debug, Clone)]
pub struct SeparableSpec {
    weights: Vec<f64>,
    factors: Vec<(DensityOperator, DensityOperator)>,
}

impl SeparableSpec {
    /// Validate weights (non-negative, summing to 1) and factor layouts
    /// (every pair must share the same two layouts).
    pub fn new(
        weights: Vec<f64>,
        factors: Vec<(DensityOperator, DensityOperator)>,
    ) -> Result<Self> {
        if weights.len() != factors.len() || weights.is_empty() {
            return Err(Error::BadArity(format!(
                "{} weights for {} factor pairs",
                weights.len(),
                factors.len()
            )));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}"
            )));
        }
        let (first_a, first_b) = &factors[0];
        for (rho_a, rho_b) in &factors[1..] {
            if rho_a.layout() != first_a.layout() || rho_b.layout() != first_b.layout() {
                return Err(Error::LayoutMismatch(
                    "all factor pairs must share the two layouts".into(),
                ));
            }
        }
        Ok(Self { weights, factors })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn factors(&self) -> &[(DensityOperator, DensityOperator)] {
        &self.factors
    }

    /// Weighted average of the A-factor entropies, the lower bound that
    /// separable conditional entropies must respect.
    pub fn weighted_factor_entropy_a(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.factors)
            .map(|(w, (rho_a, _))| w * crate::entropy::von_neumann_entropy(rho_a))
            .sum()
    }
}

/// Σ_k w_k ρ_A⁽ᵏ⁾ ⊗ ρ_B⁽ᵏ⁾ for a validated construction record.
pub fn separable_mixture(spec: &SeparableSpec) -> Result<DensityOperator> {
    let mut acc: Option<DMatrix<C64>> = None;
    let mut layout = None;
    for (w, (rho_a, rho_b)) in spec.weights().iter().zip(spec.factors()) {
        let term = rho_a.tensor_product(rho_b)?;
        layout.get_or_insert_with(|| term.layout().clone());
        let scaled = term.entries() * C64::new(*w, 0.0);
        acc = Some(match acc {
            Some(m) => m + scaled,
            None => scaled,
        });
    }
    DensityOperator::from_matrix(layout.unwrap(), acc.unwrap())
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_complex(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Random mixed state of the given rank: G G†/Tr(G G†) with G a seeded
/// total_dim × rank matrix of independent standard complex Gaussians
/// (the Hilbert-Schmidt-induced measure at full rank).
pub fn random_density(layout: &SubsystemLayout, rank: usize, seed: u64) -> Result<DensityOperator> {
    let d = layout.total_dim();
    if rank == 0 || rank > d {
        return Err(Error::RankError { rank, dim: d });
    }
    let mut rng = rng_for(seed);
    let g = DMatrix::<C64>::from_fn(d, rank, |_, _| standard_complex(&mut rng));
    let gg = &g * g.adjoint();
    let trace = gg.trace().re;
    DensityOperator::from_matrix(layout.clone(), gg / C64::new(trace, 0.0))
}

/// Random pure state: a normalized vector of standard complex Gaussians
/// (uniform on the sphere).
pub fn random_pure(layout: &SubsystemLayout, seed: u64) -> PureState {
    let mut rng = rng_for(seed);
    random_pure_with(layout, &mut rng)
}

fn random_pure_with(layout: &SubsystemLayout, rng: &mut ChaCha8Rng) -> PureState {
    let d = layout.total_dim();
    let mut v = DVector::from_fn(d, |_, _| standard_complex(rng));
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    PureState::new(layout.clone(), v).expect("normalized by construction")
}

/// Random Haar-distributed unitary: QR of a complex Gaussian matrix with
/// the R-diagonal phases absorbed into Q.
pub fn random_unitary(dim: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = rng_for(seed);
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| standard_complex(&mut rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / C64::new(rkk.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Flat-simplex probability vector from normalized exponential draws.
pub fn random_simplex(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_for(seed);
    simplex_with(&mut rng, n)
}

fn simplex_with(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut weights: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rand::Rng::gen(rng);
            // exponential draw; u is in [0, 1)
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    weights
}

/// Random mixture of pure product states together with its construction
/// record. Weights come from a flat simplex distribution (normalized
/// exponential draws); each factor is a seeded random pure state.
pub fn random_separable(
    layout_a: &SubsystemLayout,
    layout_b: &SubsystemLayout,
    n_terms: usize,
    seed: u64,
) -> Result<(DensityOperator, SeparableSpec)> {
    if n_terms == 0 {
        return Err(Error::BadArity("n_terms must be at least 1".into()));
    }
    let mut rng = rng_for(seed);
    let weights = simplex_with(&mut rng, n_terms);
    let factors: Vec<(DensityOperator, DensityOperator)> = (0..n_terms)
        .map(|_| {
            let a = random_pure_with(layout_a, &mut rng).to_density();
            let b = random_pure_with(layout_b, &mut rng).to_density();
            (a, b)
        })
        .collect();
    let spec = SeparableSpec::new(weights, factors)?;
    let state = separable_mixture(&spec)?;
    Ok((state, spec))
}

/// Named single-qubit basis vectors used by the CLI and the measurement
/// examples: |0⟩, |1⟩, |±⟩ = (|0⟩ ± |1⟩)/√2, |±i⟩ = (|0⟩ ± i|1⟩)/√2.
pub fn qubit_pure(label: &str, which: QubitBasisState) -> PureState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (a0, a1) = match which {
        QubitBasisState::Zero => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
        QubitBasisState::One => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
        QubitBasisState::Plus => (C64::new(r, 0.0), C64::new(r, 0.0)),
        QubitBasisState::Minus => (C64::new(r, 0.0), C64::new(-r, 0.0)),
        QubitBasisState::PlusI => (C64::new(r, 0.0), C64::new(0.0, r)),
        QubitBasisState::MinusI => (C64::new(r, 0.0), C64::new(0.0, -r)),
    };
    let layout = SubsystemLayout::new([(label, 2)]).unwrap();
    PureState::new(layout, DVector::from_vec(vec![a0, a1])).unwrap()
}

/// The six single-qubit cardinal states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitBasisState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

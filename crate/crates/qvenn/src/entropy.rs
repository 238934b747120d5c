//! Quantum entropy calculus: entropies, conditional/mutual amplitude
//! operators, Venn diagrams, chain rules, and inequality checks.
//!
//! All entropies are in bits. The conditional amplitude operator
//!
//! > ρ_{A|B} = exp( ln ρ_{AB} − ln(1_A ⊗ ρ_B) )
//!
//! is the matrix analogue of a conditional probability: Hermitian and
//! positive, but — unlike a probability — it can have eigenvalues larger
//! than one, which is exactly when the conditional entropy
//! S(A|B) = S(AB) − S(B) can go negative. The infinite Lie-Trotter limit
//! in its product definition is evaluated in closed form as the exp of a
//! log difference; finite-n approximants are kept for validation only.
//! Singular operators are handled by an epsilon regularization inside the
//! logs, never by direct inversion.

use crate::error::{Error, Result};
use crate::linalg::{
    partition_positions, DensityOperator, HermitianOperator, SubsystemLayout,
};
use crate::tol;

const LN_2: f64 = std::f64::consts::LN_2;

/// A non-negative probability vector summing to one.
#[derive(Debug, Clone)]
pub struct ClassicalDistribution {
    probabilities: Vec<f64>,
}

impl ClassicalDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidDistribution("negative probability".into()));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidDistribution(format!("sum is {sum}")));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// −Σ λ log₂ λ over the spectrum, with 0·log 0 := 0.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_values(rho.eigenvalues())
}

/// Shannon entropy of a distribution, base 2.
pub fn shannon_entropy(p: &ClassicalDistribution) -> f64 {
    entropy_of_values(p.probabilities())
}

/// Base-2 entropy of raw non-negative values (callers guarantee they sum
/// to one); used for spectra and outcome tables alike.
pub fn entropy_of_values(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.log2())
        .sum::<f64>()
}

fn complement_labels<'a>(layout: &'a SubsystemLayout, subset: &[&str]) -> Result<Vec<&'a str>> {
    let positions = layout.positions_of(subset)?;
    if positions.len() == layout.len() {
        return Err(Error::OverlappingParts(
            "subset must be a proper subset of the layout".into(),
        ));
    }
    Ok(layout
        .labels()
        .into_iter()
        .enumerate()
        .filter(|(p, _)| !positions.contains(p))
        .map(|(_, l)| l)
        .collect())
}

/// Entropy of the reduced state on `labels`.
fn marginal_entropy(rho: &DensityOperator, labels: &[&str]) -> Result<f64> {
    Ok(von_neumann_entropy(&rho.partial_trace(labels)?))
}

/// S(A|B) = S(AB) − S(B), conditioning on the `given` labels.
///
/// May be negative; that is the signature of entanglement across the cut.
pub fn conditional_entropy(rho: &DensityOperator, given: &[&str]) -> Result<f64> {
    complement_labels(rho.layout(), given)?;
    Ok(von_neumann_entropy(rho) - marginal_entropy(rho, given)?)
}

/// S(A:B) = S(A) + S(B) − S(AB) for a bipartition of the layout.
pub fn mutual_entropy(rho: &DensityOperator, parts: (&[&str], &[&str])) -> Result<f64> {
    partition_positions(rho.layout(), &[parts.0, parts.1])?;
    Ok(marginal_entropy(rho, parts.0)? + marginal_entropy(rho, parts.1)?
        - von_neumann_entropy(rho))
}

/// S(A:B|C) = S(AC) + S(BC) − S(C) − S(ABC).
///
/// Non-negative for every state (strong subadditivity).
pub fn conditional_mutual_entropy(
    rho: &DensityOperator,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    partition_positions(rho.layout(), &[a, b, c])?;
    let ac: Vec<&str> = a.iter().chain(c).copied().collect();
    let bc: Vec<&str> = b.iter().chain(c).copied().collect();
    Ok(marginal_entropy(rho, &ac)? + marginal_entropy(rho, &bc)?
        - marginal_entropy(rho, c)?
        - von_neumann_entropy(rho))
}

/// Ternary mutual entropy S(A:B:C) = S(A:B) − S(A:B|C), symmetric in its
/// three parts; may be negative.
pub fn ternary_mutual_entropy(
    rho: &DensityOperator,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    partition_positions(rho.layout(), &[a, b, c])?;
    let ab: Vec<&str> = a.iter().chain(b).copied().collect();
    let reduced = rho.partial_trace(&ab)?;
    let s_a_b = mutual_entropy(&reduced, (a, b))?;
    Ok(s_a_b - conditional_mutual_entropy(rho, a, b, c)?)
}

/// n-way mutual entropy by inclusion-exclusion:
/// Σ_{∅≠T⊆[n]} (−1)^{|T|+1} S(T). Reduces to [`mutual_entropy`] at n = 2.
pub fn multiway_mutual_entropy(rho: &DensityOperator, partition: &[&[&str]]) -> Result<f64> {
    if partition.len() < 2 {
        return Err(Error::BadArity(format!(
            "multiway mutual entropy needs at least 2 parts, got {}",
            partition.len()
        )));
    }
    partition_positions(rho.layout(), partition)?;
    let n = partition.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let labels: Vec<&str> = (0..n)
            .filter(|k| mask & (1 << k) != 0)
            .flat_map(|k| partition[k].iter().copied())
            .collect();
        let s = if labels.len() == rho.layout().len() {
            von_neumann_entropy(rho)
        } else {
            marginal_entropy(rho, &labels)?
        };
        let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * s;
    }
    Ok(total)
}

/// The six entries of a bipartite entropy Venn diagram, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteDiagram {
    pub s_a: f64,
    pub s_b: f64,
    pub s_ab: f64,
    /// Left lobe: S(A|B).
    pub s_a_given_b: f64,
    /// Right lobe: S(B|A).
    pub s_b_given_a: f64,
    /// Overlap: S(A:B).
    pub s_mutual: f64,
}

/// Populate a bipartite diagram for a two-block partition of the layout.
pub fn bipartite_diagram(
    rho: &DensityOperator,
    parts: (&[&str], &[&str]),
) -> Result<BipartiteDiagram> {
    partition_positions(rho.layout(), &[parts.0, parts.1])?;
    let s_a = marginal_entropy(rho, parts.0)?;
    let s_b = marginal_entropy(rho, parts.1)?;
    let s_ab = von_neumann_entropy(rho);
    Ok(BipartiteDiagram {
        s_a,
        s_b,
        s_ab,
        s_a_given_b: s_ab - s_b,
        s_b_given_a: s_ab - s_a,
        s_mutual: s_a + s_b - s_ab,
    })
}

/// The seven Venn entries of a tripartite diagram plus every marginal and
/// joint entropy, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TernaryDiagram {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub s_ab: f64,
    pub s_ac: f64,
    pub s_bc: f64,
    pub s_abc: f64,
    /// Outer lobes: S(A|BC), S(B|AC), S(C|AB).
    pub s_a_given_bc: f64,
    pub s_b_given_ac: f64,
    pub s_c_given_ab: f64,
    /// Pairwise overlaps: S(A:B|C), S(A:C|B), S(B:C|A).
    pub s_a_b_given_c: f64,
    pub s_a_c_given_b: f64,
    pub s_b_c_given_a: f64,
    /// Center: S(A:B:C).
    pub s_ternary: f64,
}

impl TernaryDiagram {
    /// Sum of the seven Venn entries; equals S(ABC) by construction, so
    /// the residual is a numeric health check.
    pub fn venn_sum(&self) -> f64 {
        self.s_a_given_bc
            + self.s_b_given_ac
            + self.s_c_given_ab
            + self.s_a_b_given_c
            + self.s_a_c_given_b
            + self.s_b_c_given_a
            + self.s_ternary
    }
}

/// Populate a ternary diagram for a three-block partition of the layout.
pub fn ternary_diagram(
    rho: &DensityOperator,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<TernaryDiagram> {
    partition_positions(rho.layout(), &[a, b, c])?;
    fn join<'a>(x: &[&'a str], y: &[&'a str]) -> Vec<&'a str> {
        x.iter().chain(y).copied().collect()
    }
    let s_a = marginal_entropy(rho, a)?;
    let s_b = marginal_entropy(rho, b)?;
    let s_c = marginal_entropy(rho, c)?;
    let s_ab = marginal_entropy(rho, &join(a, b))?;
    let s_ac = marginal_entropy(rho, &join(a, c))?;
    let s_bc = marginal_entropy(rho, &join(b, c))?;
    let s_abc = von_neumann_entropy(rho);
    let s_a_b_given_c = s_ac + s_bc - s_c - s_abc;
    let s_a_c_given_b = s_ab + s_bc - s_b - s_abc;
    let s_b_c_given_a = s_ab + s_ac - s_a - s_abc;
    Ok(TernaryDiagram {
        s_a,
        s_b,
        s_c,
        s_ab,
        s_ac,
        s_bc,
        s_abc,
        s_a_given_bc: s_abc - s_bc,
        s_b_given_ac: s_abc - s_ac,
        s_c_given_ab: s_abc - s_ab,
        s_a_b_given_c,
        s_a_c_given_b,
        s_b_c_given_a,
        s_ternary: s_a + s_b + s_c - s_ab - s_ac - s_bc + s_abc,
    })
}

/// 1_A ⊗ ρ_B on the full layout, with ρ_B the reduction onto `given`.
fn lifted_marginal(rho: &DensityOperator, given: &[&str]) -> Result<HermitianOperator> {
    let rho_b = rho.partial_trace(given)?;
    rho_b.as_hermitian().lift(rho.layout())
}

/// Conditional amplitude operator
/// ρ_{A|B} = exp( ln(ρ_{AB} + εI) − ln(1_A ⊗ ρ_B + εI) ).
///
/// Hermitian and positive; eigenvalues above one are "non-classical" and
/// witness negative conditional entropy. For commuting joint and marginal
/// operators this equals the pseudo-inverse product ρ_{AB}(1 ⊗ ρ_B)⁺ on
/// the support.
pub fn conditional_amplitude_operator(
    rho: &DensityOperator,
    given: &[&str],
    epsilon: f64,
) -> Result<HermitianOperator> {
    complement_labels(rho.layout(), given)?;
    let log_joint = rho.as_hermitian().regularized_log(epsilon)?;
    let log_cond = lifted_marginal(rho, given)?.regularized_log(epsilon)?;
    log_joint.sub(&log_cond)?.matrix_function(f64::exp)
}

/// Mutual amplitude operator
/// ρ_{A:B} = exp( ln(ρ_A ⊗ ρ_B + εI) − ln(ρ_{AB} + εI) ),
/// restricted to the support of ρ_{AB}.
///
/// The log difference is projected onto the support before exponentiating;
/// off-support directions come out as identity and contribute nothing to
/// −Tr ρ_{AB} log₂ ρ_{A:B}.
pub fn mutual_amplitude_operator(
    rho: &DensityOperator,
    parts: (&[&str], &[&str]),
    epsilon: f64,
) -> Result<HermitianOperator> {
    partition_positions(rho.layout(), &[parts.0, parts.1])?;
    // (ρ_A ⊗ 1)(1 ⊗ ρ_B) = ρ_A ⊗ ρ_B in the original label order
    let product = lifted_marginal(rho, parts.0)?.entries()
        * lifted_marginal(rho, parts.1)?.entries();
    let product = HermitianOperator::new(rho.layout().clone(), product)?;
    let log_product = product.regularized_log(epsilon)?;
    let log_joint = rho.as_hermitian().regularized_log(epsilon)?;
    let support = rho.as_hermitian().support_projector()?;
    log_product
        .sub(&log_joint)?
        .project_with(&support)?
        .matrix_function(f64::exp)
}

/// −Tr[ρ log₂ op] evaluated with a regularized log; the trace form of the
/// conditional/mutual entropies (used as the cross-check route).
pub fn entropy_trace(rho: &DensityOperator, op: &HermitianOperator, epsilon: f64) -> Result<f64> {
    let log_op = op.regularized_log(epsilon)?;
    let prod = rho.entries() * log_op.entries();
    Ok(-prod.trace().re / LN_2)
}

/// Finite-n symmetrized product approximant of the conditional amplitude
/// operator: [σ^{-1/2n} ρ^{1/n} σ^{-1/2n}]^n with ρ = ρ_{AB} + εI and
/// σ = 1 ⊗ ρ_B + εI. Converges to [`conditional_amplitude_operator`] as
/// n → ∞; each approximant is Hermitian by construction.
pub fn trotter_approximant(
    rho: &DensityOperator,
    given: &[&str],
    n: u32,
    epsilon: f64,
) -> Result<HermitianOperator> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::BadArity(format!("n must be a power of two, got {n}")));
    }
    complement_labels(rho.layout(), given)?;
    let nf = f64::from(n);
    let eye = HermitianOperator::identity(rho.layout().clone());
    let joint = rho.as_hermitian().add(&eye.scale(epsilon))?;
    let sigma = lifted_marginal(rho, given)?.add(&eye.scale(epsilon))?;
    let root = joint.matrix_function(|l| l.max(0.0).powf(1.0 / nf))?;
    let sigma_root_inv = sigma.matrix_function(|l| l.max(0.0).powf(-0.5 / nf))?;
    let base = sigma_root_inv.entries() * root.entries() * sigma_root_inv.entries();
    let base = HermitianOperator::new(rho.layout().clone(), base)?;
    base.matrix_function(|l| l.max(0.0).powi(n as i32))
}

/// Count of eigenvalues exceeding the classicality threshold.
///
/// A density operator never has one; a conditional amplitude operator of
/// an entangled state does.
pub fn nonclassical_eigenvalue_count(op: &HermitianOperator, threshold: f64) -> Result<usize> {
    let spectrum = op.spectral_decompose()?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l > threshold)
        .count())
}

/// [`nonclassical_eigenvalue_count`] at the default threshold 1 + 1e-9.
pub fn nonclassical_count_default(op: &HermitianOperator) -> Result<usize> {
    nonclassical_eigenvalue_count(op, tol::CLASSICALITY_THRESHOLD)
}

/// Residuals of the entropy and mutual-entropy chain rules for an ordered
/// partition A₁, …, Aₙ:
///
/// * S(A₁⋯Aₙ) = S(A₁) + S(A₂|A₁) + S(A₃|A₁A₂) + ⋯
/// * S(A₁⋯Aₙ₋₁:Aₙ) = Σᵢ S(Aᵢ:Aₙ|A₁⋯Aᵢ₋₁)
#[derive(Debug, Clone, Copy)]
pub struct ChainRuleReport {
    pub entropy_residual: f64,
    pub mutual_residual: f64,
}

/// Evaluate both chain rules and report absolute residuals.
pub fn verify_chain_rules(rho: &DensityOperator, partition: &[&[&str]]) -> Result<ChainRuleReport> {
    if partition.len() < 2 {
        return Err(Error::BadArity(
            "chain rules need at least 2 parts".into(),
        ));
    }
    partition_positions(rho.layout(), partition)?;
    let s = |labels: &[&str]| -> Result<f64> {
        if labels.len() == rho.layout().len() {
            Ok(von_neumann_entropy(rho))
        } else {
            marginal_entropy(rho, labels)
        }
    };

    // entropy chain: S(A1..An) = Σ_i [S(A1..Ai) − S(A1..A(i-1))]
    let mut sum = 0.0;
    let mut prefix: Vec<&str> = Vec::new();
    let mut prev = 0.0;
    for part in partition {
        prefix.extend_from_slice(part);
        let here = s(&prefix)?;
        sum += here - prev;
        prev = here;
    }
    let entropy_residual = (von_neumann_entropy(rho) - sum).abs();

    // mutual chain against the last block B:
    // S(A1..A(n-1):B) = Σ_i S(Ai:B|A1..A(i-1))
    let b = partition[partition.len() - 1];
    let heads = &partition[..partition.len() - 1];
    let all_heads: Vec<&str> = heads.iter().flat_map(|p| p.iter().copied()).collect();
    let mut with_all = all_heads.clone();
    with_all.extend_from_slice(b);
    let lhs = s(&all_heads)? + s(b)? - s(&with_all)?;
    let mut rhs = 0.0;
    let mut head_prefix: Vec<&str> = Vec::new();
    for part in heads {
        // S(Ai:B|prefix) = S(prefix Ai) + S(prefix B) − S(prefix) − S(prefix Ai B)
        let mut with_part = head_prefix.clone();
        with_part.extend_from_slice(part);
        let mut with_b = head_prefix.clone();
        with_b.extend_from_slice(b);
        let mut with_both = with_part.clone();
        with_both.extend_from_slice(b);
        let s_prefix = if head_prefix.is_empty() { 0.0 } else { s(&head_prefix)? };
        rhs += s(&with_part)? + s(&with_b)? - s_prefix - s(&with_both)?;
        head_prefix = with_part;
    }
    Ok(ChainRuleReport {
        entropy_residual,
        mutual_residual: (lhs - rhs).abs(),
    })
}

//! Dense complex linear algebra for labeled multipartite Hermitian operators.
//!
//! Operators live on a [`SubsystemLayout`]: an ordered list of named
//! subsystems with dimensions. The joint basis index of a multi-index
//! (i₁, …, iₘ) is Σₖ iₖ·(product of dims right of k), i.e. the leftmost
//! label is the most significant tensor factor, matching the usual basis
//! listing {00, 01, 10, 11} for two qubits.
//!
//! Everything here is immutable after construction and all operations are
//! pure functions, so values can be shared freely across threads.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tol;

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex<f64>;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// An ordered list of named subsystems with dimensions.
///
/// Ordering is significant: the leftmost part is the most significant
/// tensor factor. Labels are unique and non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    parts: Vec<(String, usize)>,
}

impl SubsystemLayout {
    /// Build a layout from (label, dimension) pairs.
    pub fn new<S: Into<String>>(parts: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let parts: Vec<(String, usize)> = parts
            .into_iter()
            .map(|(label, dim)| (label.into(), dim))
            .collect();
        if parts.is_empty() {
            return Err(Error::BadArity("layout needs at least one part".into()));
        }
        for (label, dim) in &parts {
            if label.is_empty() {
                return Err(Error::BadArity("empty subsystem label".into()));
            }
            if *dim == 0 {
                return Err(Error::BadArity(format!("part `{label}` has dimension 0")));
            }
        }
        for (i, (label, _)) in parts.iter().enumerate() {
            if parts[i + 1..].iter().any(|(other, _)| other == label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { parts })
    }

    /// Layout of `n` qubits labeled `A`, `B`, `C`, …
    pub fn qubits(n: usize) -> Result<Self> {
        if n == 0 || n > 26 {
            return Err(Error::BadArity(format!("{n} qubit labels requested")));
        }
        Self::new((0..n).map(|i| (((b'A' + i as u8) as char).to_string(), 2)))
    }

    /// Total Hilbert-space dimension (product of part dimensions).
    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|(_, d)| d).product()
    }

    /// The (label, dim) pairs in order.
    pub fn parts(&self) -> &[(String, usize)] {
        &self.parts
    }

    /// Labels in order.
    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|(l, _)| l.as_str()).collect()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Position of `label`, or an `UnknownLabel` error.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Dimension of the part called `label`.
    pub fn dim_of(&self, label: &str) -> Result<usize> {
        self.position(label).map(|p| self.parts[p].1)
    }

    /// Positions of `labels`, sorted into layout order.
    ///
    /// Errors on unknown or repeated labels.
    pub fn positions_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut positions = Vec::with_capacity(labels.len());
        for label in labels {
            let p = self.position(label)?;
            if positions.contains(&p) {
                return Err(Error::DuplicateLabel((*label).to_string()));
            }
            positions.push(p);
        }
        positions.sort_unstable();
        Ok(positions)
    }

    /// Sub-layout of the given positions (which must be sorted).
    fn sub_layout(&self, positions: &[usize]) -> SubsystemLayout {
        SubsystemLayout {
            parts: positions.iter().map(|&p| self.parts[p].clone()).collect(),
        }
    }

    /// Concatenation of two layouts; labels must not collide.
    pub fn join(&self, other: &SubsystemLayout) -> Result<SubsystemLayout> {
        for (label, _) in &other.parts {
            if self.parts.iter().any(|(l, _)| l == label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(SubsystemLayout { parts })
    }

    /// Stride of each part: product of the dimensions to its right.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.parts.len()];
        for k in (0..self.parts.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.parts[k + 1].1;
        }
        strides
    }

    /// Joint-index offsets contributed by the parts at `positions`:
    /// entry `a` is the offset of the `a`-th multi-index over those parts
    /// (enumerated with the leftmost part most significant).
    fn axis_offsets(&self, positions: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let dims: Vec<usize> = positions.iter().map(|&p| self.parts[p].1).collect();
        let count: usize = dims.iter().product();
        let mut offsets = vec![0usize; count];
        for (a, offset) in offsets.iter_mut().enumerate() {
            let mut rem = a;
            let mut acc = 0usize;
            for (k, &p) in positions.iter().enumerate().rev() {
                let idx = rem % dims[k];
                rem /= dims[k];
                acc += idx * strides[p];
            }
            *offset = acc;
        }
        offsets
    }

    /// Complement of `positions` (sorted).
    fn complement(&self, positions: &[usize]) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|p| !positions.contains(p))
            .collect()
    }
}

/// A Hermitian operator on a labeled multipartite space.
///
/// Hermitian but not necessarily unit-trace: conditional and mutual
/// amplitude operators, projectors, and identities all live here.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    layout: SubsystemLayout,
    entries: DMatrix<C64>,
}

impl HermitianOperator {
    /// Wrap a matrix, checking shape and hermiticity.
    pub fn new(layout: SubsystemLayout, entries: DMatrix<C64>) -> Result<Self> {
        let d = layout.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::LayoutMismatch(format!(
                "matrix is {}x{} but layout dimension is {d}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let deviation = hermiticity_deviation(&entries);
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { layout, entries })
    }

    /// The identity operator on `layout`.
    pub fn identity(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        Self {
            layout,
            entries: DMatrix::identity(d, d),
        }
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Real part of the trace (the imaginary part vanishes by hermiticity).
    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Kronecker product consistent with the layout ordering convention:
    /// the result layout is `self.parts` then `other.parts`.
    pub fn tensor_product(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        let layout = self.layout.join(&other.layout)?;
        let entries = self.entries.kronecker(&other.entries);
        Ok(HermitianOperator { layout, entries })
    }

    /// Transpose the indices of one subsystem, leaving the rest alone.
    ///
    /// Trace-preserving and an involution.
    pub fn partial_transpose(&self, part: &str) -> Result<HermitianOperator> {
        let p = self.layout.position(part)?;
        let part_offsets = self.layout.axis_offsets(&[p]);
        let rest_positions = self.layout.complement(&[p]);
        let rest_offsets = self.layout.axis_offsets(&rest_positions);
        let d = self.dim();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for &ri in &rest_offsets {
            for &rj in &rest_offsets {
                for &pi in &part_offsets {
                    for &pj in &part_offsets {
                        // swap the part component between row and column
                        out[(ri + pj, rj + pi)] = self.entries[(ri + pi, rj + pj)];
                    }
                }
            }
        }
        Ok(HermitianOperator {
            layout: self.layout.clone(),
            entries: out,
        })
    }

    /// Embed an operator acting on a subset of the layout into the full
    /// space, acting as the identity on the remaining parts.
    ///
    /// `self.layout` must list a subset of `full`'s labels in the same
    /// relative order (as produced by [`DensityOperator::partial_trace`]).
    pub fn lift(&self, full: &SubsystemLayout) -> Result<HermitianOperator> {
        let labels = self.layout.labels();
        let positions = full.positions_of(&labels)?;
        if full.sub_layout(&positions) != self.layout {
            return Err(Error::LayoutMismatch(
                "operator labels must appear in layout order".into(),
            ));
        }
        let entries = lift_matrix(&self.entries, &positions, full);
        Ok(HermitianOperator {
            layout: full.clone(),
            entries,
        })
    }

    /// Eigendecomposition with eigenvalues sorted descending.
    pub fn spectral_decompose(&self) -> Result<Spectrum> {
        let deviation = hermiticity_deviation(&self.entries);
        if deviation > tol::HERMITICITY {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Spectrum::of(&self.entries))
    }

    /// Spectral function: V f(diag λ) V†.
    ///
    /// Eigenvalues in `[-CLAMP, 0)` are clamped to 0 before applying `f`,
    /// so fractional powers work on numerically singular operators.
    /// Errors if `f` returns a non-finite value anywhere on the spectrum.
    pub fn matrix_function(&self, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
        let spectrum = self.spectral_decompose()?;
        let mapped: Vec<f64> = spectrum
            .eigenvalues
            .iter()
            .map(|&lambda| {
                let lambda = if lambda < 0.0 && lambda >= -tol::CLAMP {
                    0.0
                } else {
                    lambda
                };
                f(lambda)
            })
            .collect();
        if let Some(bad) = mapped.iter().position(|v| !v.is_finite()) {
            return Err(Error::DomainError(format!(
                "f({:.6e}) is not finite",
                spectrum.eigenvalues[bad]
            )));
        }
        Ok(HermitianOperator {
            layout: self.layout.clone(),
            entries: spectrum.recompose_with(&mapped),
        })
    }

    /// Spectral natural log of `self + epsilon·identity`.
    ///
    /// The regularization keeps singular operators inside the domain of the
    /// log; the result is monotone in `epsilon` on each eigenvalue.
    /// Eigenvalues at or below the support tolerance are treated as exact
    /// zeros first: they are roundoff images of null directions, and
    /// feeding them to the log would amplify the noise by 1/epsilon.
    pub fn regularized_log(&self, epsilon: f64) -> Result<HermitianOperator> {
        if epsilon <= 0.0 {
            return Err(Error::RangeError {
                name: "epsilon",
                value: epsilon,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        let spectrum = self.spectral_decompose()?;
        if let Some(&min) = spectrum.eigenvalues.last() {
            if min < -tol::CLAMP {
                return Err(Error::DomainError(format!(
                    "negative eigenvalue {min:.6e} beyond clamp tolerance"
                )));
            }
        }
        let mapped: Vec<f64> = spectrum
            .eigenvalues
            .iter()
            .map(|&lambda| {
                let on_support = if lambda > tol::SUPPORT { lambda } else { 0.0 };
                (on_support + epsilon).ln()
            })
            .collect();
        Ok(HermitianOperator {
            layout: self.layout.clone(),
            entries: spectrum.recompose_with(&mapped),
        })
    }

    /// Projector onto the span of eigenvectors with eigenvalue above the
    /// support tolerance.
    pub fn support_projector(&self) -> Result<HermitianOperator> {
        self.matrix_function(|lambda| if lambda > tol::SUPPORT { 1.0 } else { 0.0 })
    }

    /// `self + other` (layouts must match).
    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.combine(other, |a, b| a + b)
    }

    /// `self - other` (layouts must match).
    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &HermitianOperator,
        op: impl Fn(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>,
    ) -> Result<HermitianOperator> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(
                "operands live on different layouts".into(),
            ));
        }
        Ok(HermitianOperator {
            layout: self.layout.clone(),
            entries: op(&self.entries, &other.entries),
        })
    }

    /// Scale by a real factor.
    pub fn scale(&self, factor: f64) -> HermitianOperator {
        HermitianOperator {
            layout: self.layout.clone(),
            entries: &self.entries * c(factor),
        }
    }

    /// Conjugate by `P`: P·self·P (used for support projections).
    pub fn project_with(&self, projector: &HermitianOperator) -> Result<HermitianOperator> {
        if self.layout != projector.layout {
            return Err(Error::LayoutMismatch(
                "projector lives on a different layout".into(),
            ));
        }
        Ok(HermitianOperator {
            layout: self.layout.clone(),
            entries: &projector.entries * &self.entries * &projector.entries,
        })
    }
}

/// Positive unit-trace Hermitian operator: the universal state carrier.
///
/// Construction clamps eigenvalues in `[-CLAMP, 0)` to zero and rejects
/// anything more negative; the clamped eigenvalues are cached for entropy
/// computations.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: HermitianOperator,
    eigenvalues: Vec<f64>,
}

impl DensityOperator {
    /// Validate and wrap a Hermitian operator as a state.
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::TraceNotOne { trace });
        }
        let spectrum = Spectrum::of(&op.entries);
        let min = spectrum.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -tol::CLAMP {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        // clamp roundoff negatives; rebuild the matrix only if any occurred
        if min < 0.0 {
            let clamped: Vec<f64> = spectrum.eigenvalues.iter().map(|l| l.max(0.0)).collect();
            let entries = spectrum.recompose_with(&clamped);
            Ok(Self {
                op: HermitianOperator {
                    layout: op.layout,
                    entries,
                },
                eigenvalues: clamped,
            })
        } else {
            Ok(Self {
                op,
                eigenvalues: spectrum.eigenvalues,
            })
        }
    }

    /// Build directly from a layout and a dense matrix.
    pub fn from_matrix(layout: SubsystemLayout, entries: DMatrix<C64>) -> Result<Self> {
        Self::new(HermitianOperator::new(layout, entries)?)
    }

    /// Maximally mixed state I/d on `layout`.
    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let op = HermitianOperator::identity(layout).scale(1.0 / d as f64);
        let eigenvalues = vec![1.0 / d as f64; d];
        Self { op, eigenvalues }
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.op.layout
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.op.entries
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// View as a plain Hermitian operator.
    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.op
    }

    /// Eigenvalues (descending, clamped to be non-negative).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Product state ρ ⊗ σ.
    pub fn tensor_product(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let op = self.op.tensor_product(&other.op)?;
        // eigenvalues of a Kronecker product are pairwise products
        let mut eigenvalues: Vec<f64> = self
            .eigenvalues
            .iter()
            .flat_map(|a| other.eigenvalues.iter().map(move |b| a * b))
            .collect();
        eigenvalues.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(DensityOperator { op, eigenvalues })
    }

    /// Reduced state on the `keep` labels (original order), tracing out
    /// everything else.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityOperator> {
        let layout = &self.op.layout;
        if keep.is_empty() {
            return Err(Error::BadArity("must keep at least one label".into()));
        }
        let keep_positions = layout.positions_of(keep)?;
        let traced_positions = layout.complement(&keep_positions);
        if traced_positions.is_empty() {
            return Ok(self.clone());
        }
        let keep_offsets = layout.axis_offsets(&keep_positions);
        let traced_offsets = layout.axis_offsets(&traced_positions);
        let dk = keep_offsets.len();
        let mut out = DMatrix::<C64>::zeros(dk, dk);
        for (i, &oi) in keep_offsets.iter().enumerate() {
            for (j, &oj) in keep_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_offsets {
                    acc += self.op.entries[(oi + t, oj + t)];
                }
                out[(i, j)] = acc;
            }
        }
        DensityOperator::new(HermitianOperator {
            layout: layout.sub_layout(&keep_positions),
            entries: out,
        })
    }

    /// Partial transpose on one subsystem. The result is Hermitian and
    /// trace-one but may fail positivity, so it is not a state.
    pub fn partial_transpose(&self, part: &str) -> Result<HermitianOperator> {
        self.op.partial_transpose(part)
    }

    /// Eigendecomposition of the state.
    pub fn spectral_decompose(&self) -> Result<Spectrum> {
        self.op.spectral_decompose()
    }

    /// Purity Tr ρ².
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }
}

/// Eigendecomposition of a Hermitian operator: descending real eigenvalues
/// with an orthonormal set of eigenvector columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    fn of(entries: &DMatrix<C64>) -> Self {
        let se = entries.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let d = entries.nrows();
        let mut eigenvectors = DMatrix::<C64>::zeros(d, d);
        for (col, &k) in order.iter().enumerate() {
            eigenvectors.set_column(col, &se.eigenvectors.column(k));
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    /// V diag(values) V† for an arbitrary replacement of the eigenvalues.
    pub fn recompose_with(&self, values: &[f64]) -> DMatrix<C64> {
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| c(v)),
        ));
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }

    /// V diag(λ) V† with the stored eigenvalues.
    pub fn recompose(&self) -> DMatrix<C64> {
        self.recompose_with(&self.eigenvalues)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Max absolute elementwise deviation of a matrix from its adjoint.
pub fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let adj = m.adjoint();
    (m - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Embed `sub` (acting on the parts at `positions` of `full`) into the full
/// space, as identity elsewhere. Works for arbitrary square matrices, not
/// just Hermitian ones, so measurement unitaries reuse it.
pub fn lift_matrix(
    sub: &DMatrix<C64>,
    positions: &[usize],
    full: &SubsystemLayout,
) -> DMatrix<C64> {
    let sub_offsets = full.axis_offsets(positions);
    let rest_positions = full.complement(positions);
    let rest_offsets = full.axis_offsets(&rest_positions);
    let d = full.total_dim();
    let mut out = DMatrix::<C64>::zeros(d, d);
    for (i, &oi) in sub_offsets.iter().enumerate() {
        for (j, &oj) in sub_offsets.iter().enumerate() {
            let v = sub[(i, j)];
            if v != C64::new(0.0, 0.0) {
                for &r in &rest_offsets {
                    out[(oi + r, oj + r)] = v;
                }
            }
        }
    }
    out
}

/// Positions (in layout order) of a label set, checking that the sets in
/// `groups` are disjoint and together cover the whole layout.
pub fn partition_positions(
    layout: &SubsystemLayout,
    groups: &[&[&str]],
) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; layout.len()];
    let mut out = Vec::with_capacity(groups.len());
    for group in groups {
        if group.is_empty() {
            return Err(Error::OverlappingParts("empty part in partition".into()));
        }
        let positions = layout.positions_of(group)?;
        for &p in &positions {
            if seen[p] {
                return Err(Error::OverlappingParts(format!(
                    "label `{}` appears in two parts",
                    layout.parts[p].0
                )));
            }
            seen[p] = true;
        }
        out.push(positions);
    }
    if seen.iter().any(|s| !s) {
        let missing: Vec<&str> = seen
            .iter()
            .enumerate()
            .filter(|(_, s)| !**s)
            .map(|(p, _)| layout.parts[p].0.as_str())
            .collect();
        return Err(Error::OverlappingParts(format!(
            "partition does not cover {missing:?}"
        )));
    }
    Ok(out)
}

//! Dense complex linear algebra on the small composite Hilbert space of two
//! particles carrying a two-level momentum and a spin-1.
//!
//! Composite indices are row-major over the factor order: the first factor
//! varies slowest. Every module in the crate relies on this one convention.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Dim, Matrix, RawStorage};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest entry modulus of a complex matrix or vector.
pub trait MaxModulus {
    fn max_modulus(&self) -> f64;
}

impl<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>> MaxModulus for Matrix<Complex64, R, C, S> {
    fn max_modulus(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Tolerance on norms and traces.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on Hermiticity of density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue a density matrix may carry from rounding.
pub const EIGEN_TOL: f64 = 1e-10;

/// One of the four physical subsystems. The declaration order is the
/// canonical factor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubsystemLabel {
    #[serde(rename = "pA")]
    PA,
    #[serde(rename = "pB")]
    PB,
    #[serde(rename = "sA")]
    SA,
    #[serde(rename = "sB")]
    SB,
}

impl SubsystemLabel {
    pub const ALL: [SubsystemLabel; 4] = [Self::PA, Self::PB, Self::SA, Self::SB];

    pub fn dim(self) -> usize {
        match self {
            Self::PA | Self::PB => 2,
            Self::SA | Self::SB => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PA => "pA",
            Self::PB => "pB",
            Self::SA => "sA",
            Self::SB => "sB",
        }
    }

    pub fn is_momentum(self) -> bool {
        matches!(self, Self::PA | Self::PB)
    }
}

impl fmt::Display for SubsystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubsystemLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName {
                kind: "subsystem",
                name: s.to_string(),
            })
    }
}

/// Ordered list of tensor factors. Dimensions are fixed by the labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SubsystemLabel>", into = "Vec<SubsystemLabel>")]
pub struct FactorOrder(Vec<SubsystemLabel>);

impl FactorOrder {
    pub fn new(labels: Vec<SubsystemLabel>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidFactorOrder("no factors".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidFactorOrder(format!("label {l} repeated")));
            }
        }
        Ok(Self(labels))
    }

    /// `[pA, pB, sA, sB]`
    pub fn canonical() -> Self {
        Self(SubsystemLabel::ALL.to_vec())
    }

    pub fn labels(&self) -> &[SubsystemLabel] {
        &self.0
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|l| l.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|l| l.dim()).product()
    }

    pub fn position(&self, label: SubsystemLabel) -> Option<usize> {
        self.0.iter().position(|&l| l == label)
    }

    pub fn contains(&self, label: SubsystemLabel) -> bool {
        self.0.contains(&label)
    }

    pub fn is_permutation_of(&self, other: &FactorOrder) -> bool {
        self.0.len() == other.0.len() && self.0.iter().all(|l| other.contains(*l))
    }

    /// Row-major strides: `index = sum(digit[k] * stride[k])`.
    fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        strides
    }
}

impl TryFrom<Vec<SubsystemLabel>> for FactorOrder {
    type Error = Error;

    fn try_from(labels: Vec<SubsystemLabel>) -> Result<Self> {
        Self::new(labels)
    }
}

impl From<FactorOrder> for Vec<SubsystemLabel> {
    fn from(order: FactorOrder) -> Self {
        order.0
    }
}

impl fmt::Display for FactorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|l| l.name()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

/// Unit-norm amplitude vector over a factor order.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    order: FactorOrder,
}

impl PureState {
    pub fn new(amplitudes: CVector, order: FactorOrder) -> Result<Self> {
        check_len(amplitudes.len(), order.total_dim())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, order })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector, order: FactorOrder) -> Result<Self> {
        check_len(amplitudes.len(), order.total_dim())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            order,
        })
    }

    pub(crate) fn from_parts_unchecked(amplitudes: CVector, order: FactorOrder) -> Self {
        debug_assert_eq!(amplitudes.len(), order.total_dim());
        Self { amplitudes, order }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn order(&self) -> &FactorOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`. Both states must share a factor order.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.order != other.order {
            return Err(Error::InvalidFactorOrder(format!(
                "cannot compare states over {} and {}",
                self.order, other.order
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix over a factor order.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    order: FactorOrder,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, order: FactorOrder) -> Result<Self> {
        let n = order.total_dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: entries.nrows().max(entries.ncols()),
            });
        }
        let hermitian_defect = (&entries - entries.adjoint()).max_modulus();
        if hermitian_defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {hermitian_defect:e})"
            )));
        }
        let trace = entries.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EIGEN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { entries, order })
    }

    pub(crate) fn from_parts_unchecked(entries: CMatrix, order: FactorOrder) -> Self {
        Self { entries, order }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn order(&self) -> &FactorOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

fn check_len(actual: usize, expected: usize) -> Result<()> {
    if actual != expected {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Kronecker product of two column vectors.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let n = b.len();
    CVector::from_fn(a.len() * n, |i, _| a[i / n] * b[i % n])
}

/// `|ψ⟩⟨ψ|`. Normalization is guaranteed by [`PureState`].
pub fn outer(psi: &PureState) -> DensityMatrix {
    let a = psi.amplitudes();
    DensityMatrix::from_parts_unchecked(a * a.adjoint(), psi.order().clone())
}

/// `Tr(ρ²)`
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ.
    rho.entries().iter().map(|z| z.norm_sqr()).sum()
}

/// Kept and traced factors of a selection, with the composite index of every
/// (kept, traced) pair in the parent space.
struct Split {
    kept: FactorOrder,
    kept_dim: usize,
    rest_dim: usize,
    // full index for kept index r and rest index t at r * rest_dim + t
    full: Vec<usize>,
}

impl Split {
    fn new(order: &FactorOrder, keep: &[SubsystemLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidSelection("nothing to keep".into()));
        }
        for (i, l) in keep.iter().enumerate() {
            if !order.contains(*l) {
                return Err(Error::InvalidSelection(format!("{l} is not a factor of {order}")));
            }
            if keep[..i].contains(l) {
                return Err(Error::InvalidSelection(format!("{l} listed twice")));
            }
        }
        let mut kept_labels = keep.to_vec();
        kept_labels.sort();
        let rest_labels: Vec<_> = order
            .labels()
            .iter()
            .copied()
            .filter(|l| !kept_labels.contains(l))
            .collect();

        let strides = order.strides();
        let stride_of = |l: SubsystemLabel| strides[order.position(l).expect("label present")];
        let offsets = |labels: &[SubsystemLabel]| -> Vec<usize> {
            // parent-space offset of every composite index over `labels`
            let mut out = vec![0usize];
            for &l in labels {
                let s = stride_of(l);
                out = out
                    .iter()
                    .flat_map(|&base| (0..l.dim()).map(move |d| base + d * s))
                    .collect();
            }
            out
        };
        let kept_off = offsets(&kept_labels);
        let rest_off = offsets(&rest_labels);
        let full = kept_off
            .iter()
            .flat_map(|&k| rest_off.iter().map(move |&t| k + t))
            .collect();

        Ok(Self {
            kept: FactorOrder(kept_labels),
            kept_dim: kept_off.len(),
            rest_dim: rest_off.len(),
            full,
        })
    }
}

/// Reduced density matrix on `keep`, returned in canonical label order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[SubsystemLabel]) -> Result<DensityMatrix> {
    let split = Split::new(rho.order(), keep)?;
    let m = rho.entries();
    let (kd, rd) = (split.kept_dim, split.rest_dim);
    let reduced = CMatrix::from_fn(kd, kd, |r, c| {
        (0..rd)
            .map(|t| m[(split.full[r * rd + t], split.full[c * rd + t])])
            .sum()
    });
    Ok(DensityMatrix::from_parts_unchecked(reduced, split.kept))
}

/// Reduced density matrix of a pure state on `keep`, computed directly from
/// the amplitudes as `M M†` where `M` is the kept × traced reshaping.
/// Agrees with `partial_trace(&outer(psi), keep)`.
pub fn reduced_state(psi: &PureState, keep: &[SubsystemLabel]) -> Result<DensityMatrix> {
    let split = Split::new(psi.order(), keep)?;
    let a = psi.amplitudes();
    let rd = split.rest_dim;
    let m = CMatrix::from_fn(split.kept_dim, rd, |r, t| a[split.full[r * rd + t]]);
    Ok(DensityMatrix::from_parts_unchecked(&m * m.adjoint(), split.kept))
}

/// Purity of the reduced state on `keep`, without forming the reduced matrix
/// as a [`DensityMatrix`].
pub(crate) fn reduced_purity(psi: &PureState, keep: &[SubsystemLabel]) -> Result<f64> {
    Ok(purity(&reduced_state(psi, keep)?))
}

/// Reorders the tensor factors of `psi` without changing its physical content.
pub fn permute_factors(psi: &PureState, new_order: &FactorOrder) -> Result<PureState> {
    let old = psi.order();
    if !new_order.is_permutation_of(old) {
        return Err(Error::InvalidFactorOrder(format!(
            "{new_order} is not a permutation of {old}"
        )));
    }
    // Walking new-order indices row-major, map each to its old composite index.
    let old_strides = old.strides();
    let new_dims = new_order.dims();
    let src_strides: Vec<usize> = new_order
        .labels()
        .iter()
        .map(|&l| old_strides[old.position(l).expect("permutation")])
        .collect();
    let a = psi.amplitudes();
    let mut digits = vec![0usize; new_dims.len()];
    let mut out = CVector::zeros(a.len());
    for slot in out.iter_mut() {
        let src: usize = digits.iter().zip(&src_strides).map(|(d, s)| d * s).sum();
        *slot = a[src];
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    Ok(PureState::from_parts_unchecked(out, new_order.clone()))
}

/// Basis vector `e_index` of length `dim`.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

/// Lifts a real matrix into the complex algebra.
pub fn complexify(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

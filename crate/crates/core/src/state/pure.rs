use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DensityOperator, SubsystemLayout};
use crate::error::{Error, Result};
use crate::linalg::{self, c, real, CVector};

/// Tolerance on `Σ|a_i|² = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized state vector over a computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    layout: SubsystemLayout,
}

impl PureState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 {
            return Err(Error::InvalidLayout("state vector is empty".into()));
        }
        Self::with_layout(CVector::from_vec(amplitudes), SubsystemLayout::single(dim))
    }

    pub fn with_layout(amplitudes: CVector, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes, layout })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = CVector::from_vec(amplitudes);
        let norm = v.norm();
        if v.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        let dim = v.len();
        Ok(Self {
            amplitudes: v.unscale(norm),
            layout: SubsystemLayout::single(dim),
        })
    }

    pub(crate) fn from_parts(amplitudes: CVector, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(amplitudes.len(), layout.total_dim());
        debug_assert!((amplitudes.norm_squared() - 1.0).abs() < 1e-9);
        Self { amplitudes, layout }
    }

    /// `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(
            index < dim,
            "basis index {index} out of range for dimension {dim}"
        );
        Self::from_parts(
            linalg::basis_vector(dim, index),
            SubsystemLayout::single(dim),
        )
    }

    /// `|0⟩`, the `+1` eigenstate of `σ_3`.
    pub fn zero() -> Self {
        Self::basis(2, 0)
    }

    /// `|1⟩`, the `−1` eigenstate of `σ_3`.
    pub fn one() -> Self {
        Self::basis(2, 1)
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`; also spin up along x.
    pub fn plus() -> Self {
        Self::qubit(real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2))
    }

    /// `|−⟩ = (|0⟩ − |1⟩)/√2`; also spin down along x.
    pub fn minus() -> Self {
        Self::qubit(real(FRAC_1_SQRT_2), real(-FRAC_1_SQRT_2))
    }

    /// `(|0⟩ + i|1⟩)/√2`.
    pub fn plus_i() -> Self {
        Self::qubit(real(FRAC_1_SQRT_2), c(0.0, FRAC_1_SQRT_2))
    }

    /// `cos θ|0⟩ + sin θ|1⟩`.
    pub fn real_qubit(theta: f64) -> Self {
        Self::qubit(real(theta.cos()), real(theta.sin()))
    }

    fn qubit(a: Complex64, b: Complex64) -> Self {
        Self::from_parts(CVector::from_vec(vec![a, b]), SubsystemLayout::single(2))
    }

    /// Haar-random state: independent complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        assert!(dim >= 1);
        loop {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            if let Ok(state) = Self::normalized(amps) {
                return state;
            }
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `|ψ⟩⟨ψ|` carrying the same layout.
    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_trusted(linalg::outer(&self.amplitudes), self.layout.clone())
    }

    /// Same amplitudes viewed under a different subsystem layout of equal total dimension.
    pub fn relabel(self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: layout.total_dim(),
            });
        }
        Ok(Self { layout, ..self })
    }
}

/// The state orthogonal to a qubit state `(a, b)`, fixed as `(−b̄, ā)`.
pub fn orthogonal_complement(psi: &PureState) -> Result<PureState> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    let a = psi.amplitudes[0];
    let b = psi.amplitudes[1];
    Ok(PureState::qubit(-b.conj(), a.conj()))
}

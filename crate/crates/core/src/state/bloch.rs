use serde::{Deserialize, Serialize};

use super::{DensityOperator, SubsystemLayout};
use crate::error::{Error, Result};
use crate::linalg::{self, real};

/// Bloch vector `r` of a qubit, `ρ = ½(𝕀 + r·σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub const TOL: f64 = 1e-12;

    pub fn new(r: [f64; 3]) -> Result<Self> {
        let v = Self(r);
        if !r.iter().all(|x| x.is_finite()) || v.norm() > 1.0 + Self::TOL {
            return Err(Error::BlochOutOfRange(v.norm()));
        }
        Ok(v)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }
}

/// `r_i = Tr[ρ σ_i]`.
pub fn bloch_of(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let r = [
        linalg::trace_of_product(m, &linalg::sigma_x()).re,
        linalg::trace_of_product(m, &linalg::sigma_y()).re,
        linalg::trace_of_product(m, &linalg::sigma_z()).re,
    ];
    // a valid ρ can overshoot |r| = 1 only by round-off
    Ok(BlochVector(r))
}

/// `½(𝕀 + r·σ)`.
pub fn bloch_to(r: &BlochVector) -> DensityOperator {
    let [x, y, z] = r.0;
    let m = (linalg::identity(2)
        + linalg::sigma_x() * real(x)
        + linalg::sigma_y() * real(y)
        + linalg::sigma_z() * real(z))
        * real(0.5);
    DensityOperator::from_trusted(m, SubsystemLayout::single(2))
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local Hilbert-space dimensions of a composite system `H_0 ⊗ H_1 ⊗ …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout(
                "layout must list at least one subsystem".into(),
            ));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidLayout(format!(
                "subsystem {pos} has dimension 0"
            )));
        }
        Ok(Self { dims })
    }

    /// A single subsystem of dimension `dim`.
    pub fn single(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self { dims: vec![dim] }
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Product of all local dimensions.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims }
    }

    /// Sub-layout of the listed subsystems, in the given order.
    pub(crate) fn select(&self, indices: &[usize]) -> Self {
        Self {
            dims: indices.iter().map(|&i| self.dims[i]).collect(),
        }
    }

    /// Row-major strides: the stride of the last subsystem is 1.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero() {
        assert!(SubsystemLayout::new(vec![]).is_err());
        assert!(SubsystemLayout::new(vec![2, 0]).is_err());
    }

    #[test]
    fn strides_and_total() {
        let l = SubsystemLayout::new(vec![2, 3, 4]).unwrap();
        assert_eq!(l.total_dim(), 24);
        assert_eq!(l.strides(), vec![12, 4, 1]);
    }
}

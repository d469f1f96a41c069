//! Finite-dimensional states: pure vectors, density operators, tensor products,
//! partial traces, distances and the qubit Bloch representation.

mod bloch;
mod density;
mod layout;
mod pure;

pub use bloch::{bloch_of, bloch_to, BlochVector};
pub use density::{
    check_density_operator, from_ensemble, is_density_operator, partial_trace, trace_distance,
    DensityOperator, DensityTolerance, OperatorJson,
};
pub use layout::SubsystemLayout;
pub use pure::{orthogonal_complement, PureState, NORM_TOL};

use crate::linalg;

/// Kronecker product that concatenates subsystem layouts.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        PureState::from_parts(
            linalg::kron_vec(self.amplitudes(), other.amplitudes()),
            self.layout().concat(other.layout()),
        )
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Self {
        DensityOperator::from_trusted(
            linalg::kron(self.matrix(), other.matrix()),
            self.layout().concat(other.layout()),
        )
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// Left fold of [`tensor`] over a non-empty sequence.
pub fn tensor_all<'a, T, I>(factors: I) -> Option<T>
where
    T: Tensor + Clone + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let mut iter = factors.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, f| acc.tensor(f)))
}

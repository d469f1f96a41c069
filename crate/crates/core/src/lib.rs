//! Quantum ensembles and their statistical operators.
//!
//! The crate builds density operators from preparation procedures and shows
//! when two procedures that share a single-particle operator can still be told
//! apart. Correlations between successive preparations can do it, and so can
//! exact knowledge of a batch's composition. A perfect cloner would also do it,
//! but the optimal physical (Buzek-Hillery) cloner does not.

pub mod cloning;
pub mod ensemble;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod measurement;
pub mod rng;
pub mod state;

pub use cloning::{CloneOutput, Cloner, CloningChannel, MeasurementSetting};
pub use ensemble::{Ensemble, SigmaZMoments};
pub use error::{DensityDiagnostic, Error, Result};
pub use measurement::{Observable, OutcomeDistribution, Projector};
pub use state::{BlochVector, DensityOperator, PureState, SubsystemLayout};

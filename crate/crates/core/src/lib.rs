//! Effects, finite POVMs, phase and phase-space observables, and the
//! measure-theoretic models around the norm-1 property.

pub mod arcs;
pub mod effect;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod phase;
pub mod phase_space;
pub mod povm;
pub mod quadrature;
pub mod random;
pub mod special;
pub mod tcs;

pub use arcs::{arc_fourier, ArcSet};
pub use effect::{Effect, ToleranceConfig};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector};
pub use measure::{BorelDescriptor, CyclicCovarianceModel, FatCantorModel};
pub use phase::{GramKernel, Truncation};
pub use phase_space::{Axis, PolarRegion, RealRegion};
pub use povm::{CheckMode, PartitionPovm, StateVector};
pub use tcs::TcsParams;

//! Exact lengths of extremal rays on Q-factorial toric Fano varieties with
//! Picard number one (fake weighted projective spaces).
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: integer lattice algebra (Hermite/Smith forms, indices,
//!   saturations, overlattices).
//! * [`fan`]: validated fans with `n + 1` rays, their weights,
//!   multiplicities and covering weighted projective space.
//! * [`intersection`]: divisor/curve intersection numbers, anticanonical
//!   degrees, the length `l(X)` and the local weighted blow-up numbers.
//! * [`acc`]: ray normalisation, the per-index bound certificates,
//!   instance enumeration and length scans.
//!
//! No floating point is used anywhere.

pub mod acc;
pub mod fan;
pub mod intersection;
pub mod lattice;
pub mod rational;

pub use fan::{CoveringData, CurveClass, FanError, FanoFan};
pub use intersection::{LengthReport, LocalBlowupReport};
pub use lattice::{IntMatrix, LatticeError, Overlattice};

//! A quaternionic quantum error-correction laboratory.
//!
//! Layers, bottom up:
//!
//! * [`quaternion`]: Hamilton quaternions, the scalar field.
//! * [`hspace`]: vectors and matrices over the quaternions with explicit
//!   left/right multiplication semantics.
//! * [`gates`] and [`register`]: the gate library and an n-q-qubit
//!   state-vector simulator.
//! * [`stabilizer`]: Pauli strings with quaternionic phases, stabilizer codes,
//!   syndromes, decoding and audits of published syndrome tables.
//! * [`noise`]: Pauli and quaternionic rotation error channels.
//! * [`experiments`]: Monte Carlo logical error rates and scaling fits.

pub mod error;
pub mod experiments;
pub mod gates;
pub mod hspace;
pub mod quaternion;
pub mod register;
pub mod noise;
pub mod stabilizer;

pub use error::{Error, QuatError, Result, ShapeError};
pub use hspace::{MulSide, QMatrix, QVector};
pub use quaternion::{Basis, ImaginaryAxis, Quaternion};
pub use register::QRegister;

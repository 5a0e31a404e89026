//! Thermal Bell-correlation witness for the infinite-range Ising model.
//!
//! The crate computes exact and approximate spectra of the collective spin
//! Hamiltonian `B_x S_x + B_z S_z + (J/2)(S_z² − N/4)`, its canonical
//! thermodynamics, and the temperature below which the thermal energy
//! violates the classical bound of a two-setting Bell inequality.
//!
//! - [`spin`]: sectors, degeneracies, tridiagonal sector Hamiltonians, dense oracle
//! - [`oscillator`]: closed-form bosonic spectrum `E(S, n)`
//! - [`thermo`]: partition functions and mean energies
//! - [`bell`]: inequality ↔ Hamiltonian mapping, witness, critical temperatures

pub mod bell;
pub mod error;
pub mod oscillator;
pub mod special;
pub mod spin;
pub mod thermo;
pub mod tridiag;
pub mod validate;

pub use bell::{BellInequality, MeasurementSettings, WitnessReport};
pub use error::{Error, Result};
pub use oscillator::{BogoliubovParams, ConstantTerm, HpLevel};
pub use spin::{Couplings, ModelParams, SectorSpectrum, SpinSector};
pub use thermo::{Method, ThermalPoint};

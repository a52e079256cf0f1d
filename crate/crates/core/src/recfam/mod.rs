//! Recurrence families on finite windows: hitting-time sets, difference,
//! IP and SIP sets, Bohr sets, Weyl sums, return masses, matrix
//! coefficients, mixing classification of shifts of finite type and
//! two-set cover entropies.
//!
//! Every family statement is relative to an explicit horizon.

pub mod bohr;
pub mod classify;
pub mod correlation;
pub mod nset;
pub mod real;
pub mod sets;
pub mod upe;
pub mod weyl;
pub mod window;

pub use bohr::{bohr_membership, BohrReport, BohrSpec};
pub use classify::{classify_sft, SftClass};
pub use correlation::{matrix_coefficient, poincare_return_masses, MatrixCoefficients, ReturnMassReport};
pub use nset::n_set;
pub use real::QuadraticReal;
pub use sets::{difference_set, ip_set, sip_set};
pub use upe::{upe_witness, UpeReport};
pub use weyl::{rotation_recurrence, weyl_average, RotationRecurrence, SequenceSpec, WeylAverage};
pub use window::{classify_window, meets_every_run, IntegerWindowSet, Provenance, WindowClass};

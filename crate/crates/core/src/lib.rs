//! Finite symbolic dynamics toolkit.
//!
//! Subshifts (full shifts, subshifts of finite type, primitive substitutions and
//! rational Sturmian codings) are presented by finite data, and every quantity
//! computed here is either exact (integer or rational arithmetic over a finite
//! block universe) or a float carrying a documented tolerance.
//!
//! The crate is organised in five layers:
//!
//! * [`symcore`]: alphabets, words, subshifts, cylinder unions, covers and partitions.
//! * [`entrolab`]: block entropies, minimal subcovers, cover entropy, SFT entropy and
//!   Markov measures.
//! * [`varprin`]: good points, empirical measures, the open-cover variational check
//!   and the universal Rohlin tower.
//! * [`towers`]: return-time profiles, two-height Kakutani-Rohlin towers, nesting,
//!   fiber statistics and uniformity defects.
//! * [`recfam`]: return-time sets, family classification on integer windows, Bohr
//!   sets, Weyl sums, recurrence and mixing classification.

pub mod caps;
pub mod config;
pub mod entrolab;
pub mod error;
pub mod exact;
pub mod recfam;
pub mod symcore;
pub mod towers;
pub mod varprin;

pub use caps::Caps;
pub use error::{Error, Result};
pub use symcore::{Alphabet, CoverSpec, CylinderUnion, PartitionSpec, Seed, Subshift, Word};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

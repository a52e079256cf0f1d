//! Finite presentations of subshifts, their languages, cylinder sets,
//! covers and partitions.

pub mod cover;
pub mod cylinder;
pub mod graph;
pub mod pattern;
pub mod subshift;
pub mod word;

pub use cover::{code_partition, parse_cover, parse_partition, parse_union, refines, CoverSpec, PartitionSpec};
pub use cylinder::CylinderUnion;
pub use graph::VertexGraph;
pub use pattern::{contains_pattern, exists_with_symbols};
pub use subshift::{Seed, Subshift, SubshiftKind};
pub use word::{Alphabet, Word};

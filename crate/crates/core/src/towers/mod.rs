//! Skyscrapers, Kakutani-Rohlin towers and fiber statistics.

pub mod fibers;
pub mod kr;
pub mod markers;
pub mod nest;
pub mod tower;
pub mod uniformity;

pub use fibers::{good_fiber_fraction, FiberReport};
pub use kr::kr_two_heights;
pub use nest::nest_tower;
pub use tower::{return_times, skyscraper, Column, ReturnTimeProfile, TowerDescription, TowerKind};
pub use uniformity::{natural_measure, uniformity_defect, CylinderMeasure, SubstitutionFrequencies, UniformityMode, UniformityReport};

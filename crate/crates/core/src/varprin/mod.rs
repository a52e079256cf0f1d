//! Good points, empirical measures, lower and upper cover entropies, and
//! universal Rohlin towers.

pub mod attain;
pub mod empirical;
pub mod goodpoint;
pub mod hcheck;
pub mod partitions;
pub mod rohlin;

pub use attain::{attain_cover_entropy, AttainReport, AttainStage};
pub use empirical::{empirical_measure, EmpiricalMeasure};
pub use goodpoint::{find_good_point, GoodPointCertificate, GoodPointOptions};
pub use hcheck::{evaluate_h_check, VariationalReport};
pub use partitions::finer_partitions;
pub use rohlin::{universal_rohlin, RohlinReport};

//! Block entropies, the counting lemma, cover entropy by exact minimal
//! subcovers, SFT entropy, and Markov measure entropy.

pub mod blocks;
pub mod cover_entropy;
pub mod markov;
pub mod partition_entropy;
pub mod setcover;
pub mod spectral;

pub use blocks::{
    block_entropy, block_frequencies, count_low_entropy_words, lemma_table, nats_to_bits, phi, BlockDistribution,
    LemmaReport, LemmaRow, ENTROPY_TOL,
};
pub use cover_entropy::{cover_entropy, min_subcover_count, CoverEntropy, SubcoverMethod};
pub use markov::{parse_measure, periodic_orbit_measure, MarkovMeasure};
pub use partition_entropy::{partition_entropy_under_markov, PartitionEntropy};
pub use setcover::{min_set_cover, SetCoverSolution};
pub use spectral::{dominant_perron, sft_entropy, spectral_radius};

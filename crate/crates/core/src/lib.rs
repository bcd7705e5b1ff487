//! Decay-time densities of single and entangled neutral kaons under several
//! competing prescriptions, with tools to tell them apart.
//!
//! Times are in units of the short lifetime and rates in units of its inverse
//! unless stated otherwise.

pub mod biexp;
pub mod cli;
pub mod discrimination;
pub mod error;
pub mod joint;
pub mod leading;
pub mod model;
pub mod numerics;
pub mod params;
pub mod single;

pub use biexp::{BiExpSum, BiExpTerm};
pub use discrimination::{
    chi_square_binned, discriminate, kl_divergence, required_sample_size, DiscriminationReport,
    SampleSize,
};
pub use error::{DecayError, Result};
pub use joint::{
    approach_comparison, joint_densities, joint_density, joint_density_with, joint_survival,
    total_survival, ApproachComparison, DensityOptions, GridSpec, JointDensity, Negativity,
    NormalizationPolicy, PairVerdict,
};
pub use model::{ApproachKind, Channel, EntangledStateSpec};
pub use numerics::{sample_events, EventBatch};
pub use params::{CpSector, KaonParams};
pub use single::{density_single, SuperpositionSpec};

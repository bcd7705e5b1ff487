//! Independent numerical oracles and Monte Carlo event generation.

mod diff;
mod quad;
mod sample;

pub use diff::{
    finite_diff_gradient_sum, finite_diff_mixed, richardson_mixed, ridders_gradient_sum, ridders_mixed,
    Extrapolated, DEFAULT_STEP,
};
pub use quad::{
    quad_semiinf_1d, quad_semiinf_1d_with, quad_semiinf_2d, quad_semiinf_2d_with, QuadOptions,
    QuadratureResult,
};
pub use sample::{
    chunk_seed, sample_events, Event, EventBatch, ModelDescriptor, RejectionEnvelope, CHUNK_SIZE,
    RNG_ALGORITHM,
};

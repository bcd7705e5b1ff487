//! Rejection sampling of joint decay times.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biexp::BiExpSum;
use crate::error::{invalid, DecayError, Result};
use crate::joint::{JointDensity, Negativity};
use crate::model::Channel;

/// Accepted events generated per independently seeded chunk.
pub const CHUNK_SIZE: usize = 4096;

/// Identifier of the generator and seed derivation stored with every batch.
pub const RNG_ALGORITHM: &str = "chacha8/splitmix64-chunk4096";

/// Seed of chunk `index`: two splitmix64 rounds over `seed` and the index.
pub fn chunk_seed(seed: u64, index: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(seed) ^ index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t_l: f64,
    pub t_r: f64,
    pub channel: Channel,
}

/// Plain-data description of the density a batch was drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub approach: String,
    pub state: String,
    pub channel: String,
    pub normalization: String,
    pub gamma_s: f64,
    pub gamma_l: f64,
    pub delta_m: f64,
    pub epsilon_re: f64,
    pub epsilon_im: f64,
}

impl ModelDescriptor {
    pub fn of(density: &JointDensity) -> Self {
        Self {
            approach: density.approach.name().to_string(),
            state: density.state.to_string(),
            channel: density.channel.to_string(),
            normalization: density.options.policy.to_string(),
            gamma_s: density.params.gamma_s,
            gamma_l: density.params.gamma_l,
            delta_m: density.params.delta_m,
            epsilon_re: density.params.epsilon.re,
            epsilon_im: density.params.epsilon.im,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventBatch {
    pub events: Vec<Event>,
    pub seed: u64,
    pub model: ModelDescriptor,
    pub rng_algorithm: String,
    pub acceptance_rate: f64,
}

impl EventBatch {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }
}

/// `Σ_k |c_k| exp(−Re z_l,k t_l − Re z_r,k t_r)`, which bounds `Re Σ_k c_k e^{…}`.
#[derive(Debug, Clone)]
pub struct RejectionEnvelope {
    terms: Vec<(f64, f64, f64)>,
    picker: WeightedIndex<f64>,
}

impl RejectionEnvelope {
    pub fn new(carrier: &BiExpSum) -> Result<Self> {
        let mut terms = Vec::with_capacity(carrier.len());
        let mut weights = Vec::with_capacity(carrier.len());
        for (index, t) in carrier.terms().iter().enumerate() {
            let (a, b) = (t.z_l.re, t.z_r.re);
            if !(a > 0.0 && b > 0.0) {
                return Err(DecayError::EnvelopeDegenerate { index });
            }
            let c = t.coeff.norm();
            terms.push((c, a, b));
            weights.push(c / (a * b));
        }
        let picker = WeightedIndex::new(&weights)
            .map_err(|e| invalid("density", format!("cannot build envelope: {e}")))?;
        Ok(Self { terms, picker })
    }

    pub fn eval(&self, t_l: f64, t_r: f64) -> f64 {
        self.terms.iter().map(|(c, a, b)| c * (-a * t_l - b * t_r).exp()).sum()
    }

    fn propose<R: Rng>(&self, rng: &mut R) -> (f64, f64) {
        let (_, a, b) = self.terms[self.picker.sample(rng)];
        // 1 − U lies in (0, 1], so the logarithm is finite
        let t_l = -(1.0 - rng.random::<f64>()).ln() / a;
        let t_r = -(1.0 - rng.random::<f64>()).ln() / b;
        (t_l, t_r)
    }
}

fn run_chunk(
    carrier: &BiExpSum,
    envelope: &RejectionEnvelope,
    channel: Channel,
    seed: u64,
    index: usize,
    wanted: usize,
) -> (Vec<Event>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, index as u64));
    let mut out = Vec::with_capacity(wanted);
    let mut proposals = 0u64;
    while out.len() < wanted {
        let (t_l, t_r) = envelope.propose(&mut rng);
        proposals += 1;
        let g = envelope.eval(t_l, t_r);
        let f = carrier.eval_re(t_l, t_r);
        let u: f64 = rng.random();
        if u * g < f {
            out.push(Event { t_l, t_r, channel });
        }
    }
    (out, proposals)
}

/// Draw `n` events from `density`. Output depends only on `(density, n, seed)`,
/// not on the thread count.
pub fn sample_events(density: &JointDensity, n: usize, seed: u64) -> Result<EventBatch> {
    if n == 0 {
        return Err(invalid("n", "at least one event is required"));
    }
    if let Negativity::Present { min_value, t_l, t_r } = density.negativity {
        return Err(DecayError::NegativeDensity {
            approach: density.approach.name().to_string(),
            min_value,
            t_l,
            t_r,
        });
    }
    if density.is_zero() {
        return Err(DecayError::NotNormalizable { mass: 0.0 });
    }
    let carrier = &density.carrier;
    let envelope = RejectionEnvelope::new(carrier)?;
    let chunks = n.div_ceil(CHUNK_SIZE);
    let parts: Vec<(Vec<Event>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let wanted = CHUNK_SIZE.min(n - k * CHUNK_SIZE);
            run_chunk(carrier, &envelope, density.channel, seed, k, wanted)
        })
        .collect();
    let proposals: u64 = parts.iter().map(|p| p.1).sum();
    let events: Vec<Event> = parts.into_iter().flat_map(|p| p.0).collect();
    Ok(EventBatch {
        acceptance_rate: events.len() as f64 / proposals as f64,
        events,
        seed,
        model: ModelDescriptor::of(density),
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biexp::BiExpTerm;
    use crate::joint::joint_density;
    use crate::model::{ApproachKind, EntangledStateSpec};
    use crate::params::KaonParams;

    #[test]
    fn chunk_seeds_differ() {
        assert_ne!(chunk_seed(1, 0), chunk_seed(1, 1));
        assert_ne!(chunk_seed(1, 0), chunk_seed(2, 0));
    }

    #[test]
    fn envelope_rejects_growing_terms() {
        let s = BiExpSum::new(vec![BiExpTerm::real(1.0, 1.0, 0.0)]);
        assert!(matches!(
            RejectionEnvelope::new(&s),
            Err(DecayError::EnvelopeDegenerate { index: 0 })
        ));
    }

    #[test]
    fn refuses_negative_density() {
        let d = joint_density(
            ApproachKind::StandardNew,
            &EntangledStateSpec::singlet(),
            &KaonParams::default(),
            "11".parse().unwrap(),
        )
        .unwrap();
        let err = sample_events(&d, 10, 1).unwrap_err();
        assert!(matches!(err, DecayError::NegativeDensity { .. }));
        assert!(err.to_string().contains("standard-new"));
    }

    #[test]
    fn deterministic_and_nonnegative() {
        let d = joint_density(
            ApproachKind::Hybrid,
            &EntangledStateSpec::singlet(),
            &KaonParams::default(),
            "12".parse().unwrap(),
        )
        .unwrap();
        let a = sample_events(&d, 5000, 42).unwrap();
        let b = sample_events(&d, 5000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5000);
        assert!(a.events.iter().all(|e| e.t_l >= 0.0 && e.t_r >= 0.0));
        assert!(a.acceptance_rate > 0.0 && a.acceptance_rate <= 1.0);
        assert!(sample_events(&d, 0, 42).is_err());
    }
}

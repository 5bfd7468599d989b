use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::Direction;
use crate::error::{Error, Result};

/// Rejection sampling gives up after this many consecutive rejected draws.
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 1000;

/// Seeded source of uniformly distributed unit vectors.
///
/// Samples are normalized standard-normal vectors drawn from a ChaCha8 stream,
/// so the same `(seed, count, dimension)` always yields the same sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionSampler {
    pub seed: u64,
    pub count: usize,
}

impl DirectionSampler {
    pub fn new(seed: u64, count: usize) -> Self {
        DirectionSampler { seed, count }
    }

    pub fn sample(&self, ambient_dim: usize) -> Result<Vec<Direction>> {
        self.sample_filtered(ambient_dim, |_| true)
    }

    /// Draws until `count` samples pass `accept`.
    pub fn sample_filtered(
        &self,
        ambient_dim: usize,
        mut accept: impl FnMut(&Direction) -> bool,
    ) -> Result<Vec<Direction>> {
        if ambient_dim < 1 {
            return Err(Error::InvalidEmbedding("sampling needs ambient dimension >= 1".into()));
        }
        if self.count < 1 {
            return Err(Error::Precondition("sample count must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::with_capacity(self.count);
        let mut rejected = 0usize;
        while out.len() < self.count {
            let v = DVector::from_iterator(ambient_dim, (0..ambient_dim).map(|_| StandardNormal.sample(&mut rng)));
            let Ok(d) = Direction::from_vector(v) else {
                continue;
            };
            if accept(&d) {
                out.push(d);
                rejected = 0;
            } else {
                rejected += 1;
                if rejected >= MAX_CONSECUTIVE_REJECTIONS {
                    return Err(Error::SamplerExhausted(rejected));
                }
            }
        }
        Ok(out)
    }
}

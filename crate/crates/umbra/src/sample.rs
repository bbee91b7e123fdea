//! Counter-based uniform sampling on the unit sphere.
//!
//! Every draw is a pure function of `(seed, sample index)`: the generator
//! state for sample `i` is derived by hashing the pair, so any partition of
//! an index range across threads or batches reproduces the serial sequence
//! bit for bit. Directions come from normalizing a vector of independent
//! standard normal deviates, which is rotation-invariant by construction.

use crate::error::{Error, Result};
use crate::geom::{UnitVector, Vector};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective 64-bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent sub-seed, used to decorrelate the component
/// estimators of a composite check (one stream per tagged quantity).
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GOLDEN)))
}

/// Per-sample generator: a SplitMix64 sequence started at a hashed position.
struct SampleRng {
    state: u64,
}

impl SampleRng {
    #[inline]
    fn for_sample(seed: u64, index: u64) -> Self {
        Self { state: mix64(seed ^ mix64(index.wrapping_mul(GOLDEN).wrapping_add(GOLDEN))) }
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in (0, 1].
    #[inline]
    fn next_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform in [0, 1).
    #[inline]
    fn next_closed_open(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// One Box-Muller pair of standard normals.
    #[inline]
    fn next_normal_pair(&mut self) -> (f64, f64) {
        let r = (-2.0 * self.next_open_closed().ln()).sqrt();
        let phi = std::f64::consts::TAU * self.next_closed_open();
        (r * phi.cos(), r * phi.sin())
    }
}

/// A deterministic stream of sphere samples identified by `(seed, index)`.
///
/// The stream is a value: cloning it or handing disjoint index ranges to
/// different workers cannot change what any index produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleStream {
    seed: u64,
    next_index: u64,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, next_index: 0 }
    }

    /// A stream positioned at `index`, for batch splitting.
    pub fn at(seed: u64, index: u64) -> Self {
        Self { seed, next_index: index }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    /// Draw the next unit vector in `dim`-space and advance by one index.
    pub fn sample_unit_vector(&mut self, dim: usize) -> Result<UnitVector> {
        let v = unit_vector_at(self.seed, self.next_index, dim)?;
        self.next_index += 1;
        Ok(v)
    }
}

/// The unit vector for `(seed, index)`: uniform on `S^(dim-1)`.
pub fn unit_vector_at(seed: u64, index: u64, dim: usize) -> Result<UnitVector> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    let mut rng = SampleRng::for_sample(seed, index);
    let mut coords = vec![0.0; dim];
    loop {
        let mut i = 0;
        while i < dim {
            let (a, b) = rng.next_normal_pair();
            coords[i] = a;
            if i + 1 < dim {
                coords[i + 1] = b;
            }
            i += 2;
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        // Rejection keeps the draw a pure function of (seed, index); the
        // branch fires with probability ~1e-100 per sample.
        if norm_sq > 1e-100 {
            let inv = norm_sq.sqrt().recip();
            for c in &mut coords {
                *c *= inv;
            }
            return UnitVector::new(Vector::new(coords)?);
        }
    }
}

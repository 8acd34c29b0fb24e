//! Deterministic splittable random streams.
//!
//! Monte Carlo results must be reproducible from a single seed regardless of
//! how work is scheduled across threads. Instead of sharing one generator,
//! every independent unit of work (trial, bootstrap draw, sample path) gets
//! its own [`RngStream`] derived from a parent seed and an integer label.
//! Child derivation depends only on `(seed, label)`, never on how many
//! variates the parent has produced, so the tree of streams is stable.
//!
//! The core generator is a SplitMix64-style counter: the state advances by a
//! fixed odd increment and each output is a strong 64-bit mix of the state.
//! Normals come from the Marsaglia polar method with the spare variate
//! cached between calls.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Finalizer from SplitMix64: bijective, avalanching 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic stream of pseudo-random variates.
#[derive(Debug, Clone)]
pub struct RngStream {
    /// Seed the stream was created with; children derive from this alone.
    seed: u64,
    /// Counter state, advanced once per `next_u64`.
    state: u64,
    /// Cached second variate from the polar method.
    spare_normal: Option<f64>,
}

impl RngStream {
    /// Creates a stream from a 64-bit seed.
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            state: seed,
            spare_normal: None,
        }
    }

    /// Seed this stream was constructed with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent child stream from `(seed, label)`.
    ///
    /// The derivation ignores the parent's position, so children created
    /// before and after the parent has been used are identical. Two rounds
    /// of mixing keep distinct `(seed, label)` pairs decorrelated even for
    /// small consecutive labels.
    pub fn child(&self, label: u64) -> RngStream {
        let tweaked = mix64(label.wrapping_mul(GOLDEN_GAMMA) ^ 0x5851_f42d_4c95_7f2d);
        RngStream::new(mix64(self.seed ^ tweaked))
    }

    /// Next raw 64-bit value.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform variate on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate via the polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * factor);
                return u * factor;
            }
        }
    }

    /// Fills `out` with independent standard normals.
    pub fn fill_normals(&mut self, out: &mut [f64]) {
        for slot in out.iter_mut() {
            *slot = self.normal();
        }
    }
}

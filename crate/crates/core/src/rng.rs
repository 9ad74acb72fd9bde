//! Splittable 64-bit random streams for the Monte Carlo simulator.
//!
//! A stream is a SplitMix64 generator; substreams are derived from a
//! master seed and a chunk index by the same finalizer, so trial chunk k
//! always sees the same sequence no matter which worker runs it. That is
//! the whole determinism story: fixed chunking plus fixed-order reduction.

/// SplitMix64 finalizer; full-period bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// An exclusively owned random stream. Not `Sync`: one worker per stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Substream for chunk `index` of the run seeded by `master_seed`.
    pub fn substream(master_seed: u64, index: u64) -> Self {
        Self::new(mix64(master_seed ^ mix64(index ^ 0xA0761D6478BD642F)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1]; safe under `ln`.
    #[inline]
    pub fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller.
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Gamma(shape, scale) by Marsaglia–Tsang squeeze, valid for shape >= 1.
    pub fn next_gamma(&mut self, shape: f64, scale: f64) -> f64 {
        debug_assert!(shape >= 1.0 && scale > 0.0);
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.next_normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.next_open_f64();
            if u < 1.0 - 0.0331 * x * x * x * x {
                return d * v * scale;
            }
            if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v * scale;
            }
        }
    }
}

/// Seed derivation for one sweep grid point: a function of the master seed
/// and the point's SNR only, so two schemes evaluated at the same point
/// share gain draws (common random numbers).
pub fn point_seed(master_seed: u64, rho_db: f64) -> u64 {
    mix64(master_seed ^ mix64(rho_db.to_bits()))
}

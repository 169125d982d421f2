//! Random corpora drawn from a Zipf-Mandelbrot population, for simulation
//! and validation work.
//!
//! Tokens are sampled directly from the token-mass distribution: a uniform
//! draw is mapped through the token quantile to an occurrence probability pi
//! and then to a type identity via the structural type distribution
//! G(pi) = (C/alpha)(pi^-alpha - B^-alpha), the number of types with
//! probability at least pi. Each type occupies a unit interval of G, so no
//! population truncation is needed even for heavy tails.

use std::collections::BTreeMap;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diversity::FrequencySpectrum;
use crate::error::Result;

/// Draws `n_tokens` tokens from ZM(alpha, b); returns opaque type keys,
/// one per token, deterministically for a given seed.
pub fn sample_zm_token_keys(alpha: f64, b: f64, n_tokens: usize, seed: u64) -> Vec<u64> {
    assert!(alpha > 0.0 && alpha < 1.0 && b > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (1.0 - alpha) * b.powf(alpha - 1.0);
    let b_neg_alpha = b.powf(-alpha);
    let mut keys = Vec::with_capacity(n_tokens);
    for _ in 0..n_tokens {
        // w in (0, 1]: top token-mass share above the drawn type
        let w = 1.0 - rng.random::<f64>();
        let pi = b * w.powf(1.0 / (1.0 - alpha));
        let g = (c / alpha) * (pi.powf(-alpha) - b_neg_alpha);
        keys.push(g.floor().to_bits());
    }
    keys
}

/// Frequency spectrum of a seeded ZM sample.
pub fn sample_zm_spectrum(
    alpha: f64,
    b: f64,
    n_tokens: usize,
    seed: u64,
) -> Result<FrequencySpectrum> {
    let keys = sample_zm_token_keys(alpha, b, n_tokens, seed);
    spectrum_of_keys(&keys)
}

/// Builds a spectrum from per-token type keys.
pub fn spectrum_of_keys(keys: &[u64]) -> Result<FrequencySpectrum> {
    let mut freq: HashMap<u64, u64> = HashMap::new();
    for &k in keys {
        *freq.entry(k).or_insert(0) += 1;
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &m in freq.values() {
        *counts.entry(m).or_insert(0) += 1;
    }
    FrequencySpectrum::from_counts(counts)
}

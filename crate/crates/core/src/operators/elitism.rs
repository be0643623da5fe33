use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which previous-generation individuals are carried over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElitismMode {
    #[default]
    Best,
    Random,
}

/// `max(1, floor(fraction * n))`
pub fn elite_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64).floor() as usize).clamp(1, n.max(1))
}

/// Replace the `k` worst offspring with `k` individuals from `prev`.
///
/// In [`ElitismMode::Best`] the transferred individuals are the `k` fittest
/// of `prev`. Ties are broken by position, so the result is deterministic.
pub fn apply_elitism<T: Clone, R: Rng + ?Sized>(
    prev: &[T],
    mut offspring: Vec<T>,
    fraction: f64,
    mode: ElitismMode,
    fitness: impl Fn(&T) -> f64,
    rng: &mut R,
) -> Result<Vec<T>> {
    if prev.len() != offspring.len() {
        return Err(Error::operator(format!(
            "elitism needs equal generations, got {} previous and {} offspring",
            prev.len(),
            offspring.len()
        )));
    }
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::operator(format!(
            "elitism fraction must be in [0, 1), got {fraction}"
        )));
    }
    let n = prev.len();
    if n == 0 {
        return Ok(offspring);
    }
    let k = elite_count(fraction, n);

    let donors: Vec<usize> = match mode {
        ElitismMode::Best => {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| fitness(&prev[b]).total_cmp(&fitness(&prev[a])));
            order.truncate(k);
            order
        }
        ElitismMode::Random => index::sample(rng, n, k).into_vec(),
    };

    let mut worst: Vec<usize> = (0..n).collect();
    worst.sort_by(|&a, &b| fitness(&offspring[a]).total_cmp(&fitness(&offspring[b])));
    for (&slot, &donor) in worst.iter().zip(&donors) {
        offspring[slot] = prev[donor].clone();
    }
    Ok(offspring)
}

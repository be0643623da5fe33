use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::SelectionKind;
use crate::error::{Error, Result};

/// Draw `count` parent indices i.i.d. according to `kind`. Larger fitness is better.
pub fn select<R: Rng + ?Sized>(
    kind: SelectionKind,
    fitnesses: &[f64],
    count: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if fitnesses.is_empty() {
        return Err(Error::operator("selection over an empty population"));
    }
    match kind {
        SelectionKind::Tournament { size } => {
            if size < 2 {
                return Err(Error::operator(format!("tournament size {size} < 2")));
            }
            Ok((0..count)
                .map(|_| tournament(fitnesses, size, rng))
                .collect())
        }
        SelectionKind::Roulette | SelectionKind::Ranked => {
            let weights = selection_probabilities(kind, fitnesses)?;
            let dist = WeightedIndex::new(&weights)
                .map_err(|e| Error::operator(format!("invalid selection weights: {e}")))?;
            Ok((0..count).map(|_| dist.sample(rng)).collect())
        }
    }
}

fn tournament<R: Rng + ?Sized>(fitnesses: &[f64], size: usize, rng: &mut R) -> usize {
    let n = fitnesses.len();
    let mut winner = rng.gen_range(0..n);
    let mut ties = 1u32;
    for _ in 1..size {
        let c = rng.gen_range(0..n);
        if fitnesses[c] > fitnesses[winner] {
            winner = c;
            ties = 1;
        } else if fitnesses[c] == fitnesses[winner] && c != winner {
            // Reservoir step: each tied contestant ends up winning with equal probability.
            ties += 1;
            if rng.gen_range(0..ties) == 0 {
                winner = c;
            }
        }
    }
    winner
}

/// Per-index selection probabilities for the proportional kinds.
///
/// Roulette uses `f_i / sum f`; ranked sorts ascending, gives ranks `1..N`
/// (tied fitnesses share the mean rank of their block) and uses `r_i / sum r`.
/// Tournament has no closed form here and is rejected.
pub fn selection_probabilities(kind: SelectionKind, fitnesses: &[f64]) -> Result<Vec<f64>> {
    if fitnesses.is_empty() {
        return Err(Error::operator("selection over an empty population"));
    }
    let weights = match kind {
        SelectionKind::Roulette => {
            if let Some(bad) = fitnesses.iter().find(|f| !(f.is_finite() && **f > 0.0)) {
                return Err(Error::operator(format!(
                    "roulette selection needs positive fitness, found {bad}"
                )));
            }
            fitnesses.to_vec()
        }
        SelectionKind::Ranked => ranks(fitnesses),
        SelectionKind::Tournament { .. } => {
            return Err(Error::operator("tournament selection has no weight vector"))
        }
    };
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

fn ranks(fitnesses: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| fitnesses[a].total_cmp(&fitnesses[b]));
    let mut ranks = vec![0.0; fitnesses.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && fitnesses[order[end]] == fitnesses[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end; share their mean.
        let mean_rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mean_rank;
        }
        start = end;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn roulette_closed_form() {
        let p = selection_probabilities(SelectionKind::Roulette, &[1.0; 4]).unwrap();
        assert!(close(&p, &[0.25; 4]));
        let p = selection_probabilities(SelectionKind::Roulette, &[3.0, 1.0]).unwrap();
        assert!(close(&p, &[0.75, 0.25]));
    }

    #[test]
    fn ranked_closed_form() {
        let p = selection_probabilities(SelectionKind::Ranked, &[0.1, 0.2, 0.7]).unwrap();
        assert!(close(&p, &[1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]));
        // Order of input does not matter, only rank.
        let p = selection_probabilities(SelectionKind::Ranked, &[0.7, 0.1, 0.2]).unwrap();
        assert!(close(&p, &[3.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0]));
    }

    #[test]
    fn ranked_ties_share_mean_rank() {
        // Ranks 1, 2.5, 2.5, 4 over sum 10.
        let p = selection_probabilities(SelectionKind::Ranked, &[0.1, 0.5, 0.5, 0.9]).unwrap();
        assert!(close(&p, &[0.1, 0.25, 0.25, 0.4]));
    }

    #[test]
    fn roulette_rejects_non_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(select(SelectionKind::Roulette, &[1.0, 0.0], 1, &mut rng).is_err());
        assert!(select(SelectionKind::Roulette, &[1.0, -2.0], 1, &mut rng).is_err());
        assert!(select(SelectionKind::Ranked, &[], 1, &mut rng).is_err());
        assert!(select(SelectionKind::Tournament { size: 3 }, &[], 1, &mut rng).is_err());
    }

    #[test]
    fn tournament_prefers_better() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fit = [0.1, 0.2, 0.3, 0.9];
        let picks = select(
            SelectionKind::Tournament { size: 3 },
            &fit,
            10_000,
            &mut rng,
        )
        .unwrap();
        let best = picks.iter().filter(|&&i| i == 3).count() as f64 / 10_000.0;
        // 1 - (3/4)^3 = 0.578
        assert!((best - 0.578125).abs() < 0.02, "{best}");
    }

    #[test]
    fn tournament_breaks_ties_uniformly() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let fit = [1.0, 1.0];
        let picks = select(
            SelectionKind::Tournament { size: 2 },
            &fit,
            20_000,
            &mut rng,
        )
        .unwrap();
        let zeros = picks.iter().filter(|&&i| i == 0).count() as f64 / 20_000.0;
        assert!((zeros - 0.5).abs() < 0.02, "{zeros}");
    }
}

use rand::Rng;

use super::MutationKind;
use crate::encoding::Genome;
use crate::error::{Error, Result};

/// Flip each bit independently with probability `rate`.
pub fn mutate_binary<R: Rng + ?Sized>(bits: &mut [bool], rate: f64, rng: &mut R) {
    if rate <= 0.0 {
        return;
    }
    if rate >= 1.0 {
        bits.iter_mut().for_each(|b| *b = !*b);
        return;
    }
    for b in bits.iter_mut() {
        if rng.gen::<f64>() < rate {
            *b = !*b;
        }
    }
}

/// Reverse `p[i..=j]`.
pub fn invert_segment(p: &mut [usize], i: usize, j: usize) {
    p[i..=j].reverse();
}

pub fn swap_elements(p: &mut [usize], i: usize, j: usize) {
    p.swap(i, j);
}

/// Remove the element at `from` and reinsert it so that it ends up at index `to`.
pub fn shift_element(p: &mut Vec<usize>, from: usize, to: usize) {
    let v = p.remove(from);
    p.insert(to, v);
}

/// Cut out `p[i..=j]` and reinsert the block so that it starts at index `dest`
/// of the result.
pub fn move_segment(p: &mut Vec<usize>, i: usize, j: usize, dest: usize) {
    let block: Vec<usize> = p.drain(i..=j).collect();
    let tail = p.split_off(dest);
    p.extend(block);
    p.extend(tail);
}

/// Apply one permutation move chosen at random.
pub fn mutate_permutation<R: Rng + ?Sized>(
    kind: MutationKind,
    p: &mut Vec<usize>,
    rng: &mut R,
) -> Result<()> {
    let n = p.len();
    if n < 2 {
        return Err(Error::operator(format!(
            "permutation mutation needs n >= 2, got {n}"
        )));
    }
    match kind {
        MutationKind::Inversion => {
            let (i, j) = distinct_pair(n, rng);
            invert_segment(p, i.min(j), i.max(j));
        }
        MutationKind::Swap => {
            let (i, j) = distinct_pair(n, rng);
            swap_elements(p, i, j);
        }
        MutationKind::Shift => {
            let (from, to) = distinct_pair(n, rng);
            shift_element(p, from, to);
        }
        MutationKind::Movement => {
            // Segment shorter than n so there is somewhere to move it.
            let i = rng.gen_range(0..n);
            let max_len = (n - i).min(n - 1);
            let j = i + rng.gen_range(0..max_len);
            let seg = j - i + 1;
            // Destinations 0..=n-seg, excluding the current start i.
            let mut dest = rng.gen_range(0..n - seg);
            if dest >= i {
                dest += 1;
            }
            move_segment(p, i, j, dest);
        }
        MutationKind::BitFlip(_) => {
            return Err(Error::operator(
                "bit-flip mutation does not apply to permutations",
            ))
        }
    }
    Ok(())
}

fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Mutate a genome in place. `rate` is the resolved bit-flip probability.
pub fn mutate<R: Rng + ?Sized>(
    kind: MutationKind,
    genome: &mut Genome,
    rate: f64,
    rng: &mut R,
) -> Result<()> {
    match (kind, genome) {
        (MutationKind::BitFlip(_), Genome::Bits { bits, .. }) => {
            mutate_binary(bits, rate, rng);
            Ok(())
        }
        (MutationKind::BitFlip(_), Genome::Perm(_)) => Err(Error::operator(
            "bit-flip mutation does not apply to permutations",
        )),
        (_, Genome::Bits { .. }) => Err(Error::operator(format!(
            "{kind} mutation needs a permutation genome"
        ))),
        (_, Genome::Perm(p)) => mutate_permutation(kind, p, rng),
    }
}

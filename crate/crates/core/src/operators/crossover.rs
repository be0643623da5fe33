use rand::Rng;

use super::CrossoverKind;
use crate::encoding::{is_permutation, Genome};
use crate::error::{Error, Result};

/// Children swap everything from cut `c` onward.
pub fn one_point_at(p1: &[bool], p2: &[bool], c: usize) -> (Vec<bool>, Vec<bool>) {
    let mut c1 = p1[..c].to_vec();
    c1.extend_from_slice(&p2[c..]);
    let mut c2 = p2[..c].to_vec();
    c2.extend_from_slice(&p1[c..]);
    (c1, c2)
}

/// Children swap the half-open segment `[i, j)`.
pub fn two_point_at(p1: &[bool], p2: &[bool], i: usize, j: usize) -> (Vec<bool>, Vec<bool>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    c1[i..j].copy_from_slice(&p2[i..j]);
    c2[i..j].copy_from_slice(&p1[i..j]);
    (c1, c2)
}

/// Child 1 takes `p1` where the mask is false and `p2` where it is true; child 2 the complement.
pub fn uniform_with_mask(p1: &[bool], p2: &[bool], mask: &[bool]) -> (Vec<bool>, Vec<bool>) {
    p1.iter()
        .zip(p2)
        .zip(mask)
        .map(|((&a, &b), &m)| if m { (b, a) } else { (a, b) })
        .unzip()
}

/// Crossover of two bit strings. Cut points and masks are drawn from `rng`.
pub fn crossover_binary<R: Rng + ?Sized>(
    kind: CrossoverKind,
    p1: &[bool],
    p2: &[bool],
    rng: &mut R,
) -> Result<(Vec<bool>, Vec<bool>)> {
    if p1.len() != p2.len() {
        return Err(Error::operator(format!(
            "parent lengths differ ({} vs {})",
            p1.len(),
            p2.len()
        )));
    }
    let len = p1.len();
    if len < 2 {
        return Err(Error::operator(format!(
            "crossover needs at least 2 bits, got {len}"
        )));
    }
    match kind {
        CrossoverKind::OnePoint => {
            let c = rng.gen_range(1..len);
            Ok(one_point_at(p1, p2, c))
        }
        CrossoverKind::TwoPoint => {
            if len < 3 {
                return Err(Error::operator("two-point crossover needs at least 3 bits"));
            }
            let i = rng.gen_range(1..=len - 2);
            let j = rng.gen_range(i + 1..=len - 1);
            Ok(two_point_at(p1, p2, i, j))
        }
        CrossoverKind::Uniform => {
            let mask: Vec<bool> = (0..len).map(|_| rng.gen::<bool>()).collect();
            Ok(uniform_with_mask(p1, p2, &mask))
        }
        CrossoverKind::OrderOx1 => Err(Error::operator(
            "OX1 applies to permutations, not bit strings",
        )),
    }
}

/// OX1 with the inclusive segment `[i, j]`.
///
/// Child 1 keeps `p1[i..=j]` in place; the remaining slots, starting right
/// after `j` and wrapping around, take the elements of `p2` read from position
/// `j + 1` onward (wrapping), skipping those already copied. Child 2 swaps roles.
pub fn order_crossover_at(
    p1: &[usize],
    p2: &[usize],
    i: usize,
    j: usize,
) -> (Vec<usize>, Vec<usize>) {
    (ox1_child(p1, p2, i, j), ox1_child(p2, p1, i, j))
}

fn ox1_child(keep: &[usize], fill: &[usize], i: usize, j: usize) -> Vec<usize> {
    let n = keep.len();
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for pos in i..=j {
        child[pos] = keep[pos];
        used[keep[pos]] = true;
    }
    let mut slot = (j + 1) % n;
    for k in 0..n {
        let v = fill[(j + 1 + k) % n];
        if used[v] {
            continue;
        }
        child[slot] = v;
        used[v] = true;
        slot = (slot + 1) % n;
        if slot == i {
            // Wrapped around to the copied segment; everything is placed.
            break;
        }
    }
    child
}

pub fn crossover_order<R: Rng + ?Sized>(
    p1: &[usize],
    p2: &[usize],
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if p1.len() != p2.len() {
        return Err(Error::operator(format!(
            "parent lengths differ ({} vs {})",
            p1.len(),
            p2.len()
        )));
    }
    if p1.len() < 2 {
        return Err(Error::operator("OX1 needs permutations of length >= 2"));
    }
    if !is_permutation(p1) || !is_permutation(p2) {
        return Err(Error::operator("OX1 parents must be permutations of 0..n"));
    }
    let n = p1.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    Ok(order_crossover_at(p1, p2, a.min(b), a.max(b)))
}

/// Dispatch on genome kind.
pub fn crossover<R: Rng + ?Sized>(
    kind: CrossoverKind,
    p1: &Genome,
    p2: &Genome,
    rng: &mut R,
) -> Result<(Genome, Genome)> {
    match (p1, p2) {
        (
            Genome::Bits {
                coding: c1,
                bits: b1,
            },
            Genome::Bits {
                coding: c2,
                bits: b2,
            },
        ) if c1 == c2 => {
            let (x, y) = crossover_binary(kind, b1, b2, rng)?;
            Ok((
                Genome::Bits {
                    coding: *c1,
                    bits: x,
                },
                Genome::Bits {
                    coding: *c1,
                    bits: y,
                },
            ))
        }
        (Genome::Perm(a), Genome::Perm(b)) => {
            if kind != CrossoverKind::OrderOx1 {
                return Err(Error::operator(format!(
                    "{kind} crossover does not apply to permutations"
                )));
            }
            let (x, y) = crossover_order(a, b, rng)?;
            Ok((Genome::Perm(x), Genome::Perm(y)))
        }
        _ => Err(Error::operator("parents have different genome kinds")),
    }
}

//! Permutation plumbing: enumeration, lexicographic indexing, and the
//! seeded shuffle used everywhere randomness is needed.
//!
//! All randomized operations in this crate draw from ChaCha8
//! ([`rand_chacha::ChaCha8Rng`]) seeded with a caller-supplied u64, and
//! permutations are produced by the Fisher-Yates swap loop below, so
//! results are reproducible bit-for-bit from (seed, stream) alone.

use itertools::Itertools;
use rand::Rng;

pub fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// All permutations of the slice, lexicographic in the order the
/// elements are given.
pub fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    items.iter().copied().permutations(items.len()).collect()
}

/// Lexicographic rank of a permutation of 0..n.
pub fn permutation_index(perm: &[usize]) -> u64 {
    let n = perm.len();
    let mut used = vec![false; n];
    let mut index: u64 = 0;
    for (i, &v) in perm.iter().enumerate() {
        let smaller = (0..v).filter(|&u| !used[u]).count() as u64;
        index += smaller * factorial(n - 1 - i) as u64;
        used[v] = true;
    }
    index
}

/// Inverse of [`permutation_index`].
pub fn nth_permutation(n: usize, mut index: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut perm = Vec::with_capacity(n);
    for i in 0..n {
        let f = factorial(n - 1 - i) as u64;
        let pick = (index / f) as usize;
        index %= f;
        perm.push(pool.remove(pick));
    }
    perm
}

/// In-place Fisher-Yates shuffle.
pub fn shuffle<T, R: Rng>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// Uniform random permutation of 0..n.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    shuffle(rng, &mut perm);
    perm
}

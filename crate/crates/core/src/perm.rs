//! Symmetric group action on tensor words with Koszul signs.

use crate::error::{Error, Result};
use crate::space::Basis;

/// A permutation of `0..n`, stored as its images: `sigma[j] = σ(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Fails unless `images` is a bijection of `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidMap(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The transposition of positions `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, j);
        Permutation(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Permutation(inv)
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(current.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }
}

/// Applies `σ_tw`: the letter at position `j` moves to position `σ(j)`, giving
/// `v_{σ⁻¹(1)} ⊗ … ⊗ v_{σ⁻¹(n)}`. Returns the new word and whether the Koszul
/// sign is negative; the sign is the product of `(-1)^{|v_i||v_j|}` over the
/// pairs `i < j` that `σ` inverts.
pub fn twist_permutation(sigma: &Permutation, word: &[Basis]) -> Result<(Vec<Basis>, bool)> {
    if sigma.len() != word.len() {
        return Err(Error::LengthMismatch {
            expected: sigma.len(),
            found: word.len(),
        });
    }
    let n = word.len();
    let mut out = word.to_vec();
    for (j, &target) in sigma.0.iter().enumerate() {
        out[target] = word[j];
    }
    let mut negative = false;
    for i in 0..n {
        if !word[i].is_odd() {
            continue;
        }
        for j in i + 1..n {
            if word[j].is_odd() && sigma.0[i] > sigma.0[j] {
                negative = !negative;
            }
        }
    }
    Ok((out, negative))
}

/// Koszul sign parity of reordering `word` into sorted order (stable).
pub fn sorting_sign(word: &[Basis]) -> (Vec<Basis>, bool) {
    let mut idx: Vec<usize> = (0..word.len()).collect();
    idx.sort_by_key(|&i| (word[i], i));
    // idx[p] = original position of the letter landing at p; σ(idx[p]) = p.
    let mut images = vec![0; word.len()];
    for (p, &orig) in idx.iter().enumerate() {
        images[orig] = p;
    }
    twist_permutation(&Permutation(images), word).expect("lengths agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(i: usize) -> Basis {
        Basis::new(1, i)
    }

    fn even(i: usize) -> Basis {
        Basis::new(0, i)
    }

    #[test]
    fn identity_keeps_word() {
        let w = vec![odd(0), even(0), odd(1)];
        let (out, neg) = twist_permutation(&Permutation::identity(3), &w).unwrap();
        assert_eq!(out, w);
        assert!(!neg);
    }

    #[test]
    fn odd_transposition_is_negative() {
        let (out, neg) = twist_permutation(&Permutation::transposition(2, 0, 1), &[odd(0), odd(1)]).unwrap();
        assert_eq!(out, vec![odd(1), odd(0)]);
        assert!(neg);
        let (_, neg) =
            twist_permutation(&Permutation::transposition(2, 0, 1), &[odd(0), even(1)]).unwrap();
        assert!(!neg);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            twist_permutation(&Permutation::identity(2), &[odd(0)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn enumerates_all() {
        assert_eq!(Permutation::all(0).len(), 1);
        assert_eq!(Permutation::all(4).len(), 24);
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn sorting_sign_matches_manual() {
        let (sorted, neg) = sorting_sign(&[odd(1), odd(0)]);
        assert_eq!(sorted, vec![odd(0), odd(1)]);
        assert!(neg);
    }
}

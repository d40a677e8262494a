//! Operators on word spaces built from maps on the letters.
//!
//! All tensor-power operators here follow the Koszul rule
//! `(f_1 ⊗ … ⊗ f_n)(a_1 ⊗ … ⊗ a_n) = (-1)^{Σ_{i<j} |f_j||a_i|} f_1(a_1) ⊗ … ⊗ f_n(a_n)`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::map::GradedMap;
use crate::scalar::{self, Scalar};
use crate::space::{Basis, SpaceRef, Word};
use crate::vector::Vector;

/// Sparse combination of words, used before words are mapped into a word space.
pub type WordComb = BTreeMap<Word, Scalar>;

pub(crate) fn comb_add(comb: &mut WordComb, word: Word, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = comb.entry(word.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        comb.remove(&word);
    }
}

/// Expands `c · v_1 ⊗ … ⊗ v_n` where each `v_i` is a vector of letters.
pub(crate) fn expand_product(factors: &[Vector], c: &Scalar, out: &mut WordComb) {
    let mut partial: Vec<(Word, Scalar)> = vec![(Vec::with_capacity(factors.len()), c.clone())];
    for f in factors {
        if f.is_zero() {
            return;
        }
        let mut next = Vec::with_capacity(partial.len() * f.len());
        for (w, x) in &partial {
            for (b, y) in f.iter() {
                let mut w2 = w.clone();
                w2.push(*b);
                next.push((w2, x * y));
            }
        }
        partial = next;
    }
    for (w, x) in partial {
        comb_add(out, w, x);
    }
}

/// Converts a word combination into a vector of a word space. Words outside the
/// space (too long) are an invariant violation and panic.
pub(crate) fn comb_to_vector(space: &SpaceRef, comb: &WordComb) -> Vector {
    comb.iter()
        .map(|(w, c)| {
            let b = space
                .word_basis(w)
                .unwrap_or_else(|| panic!("word of length {} outside word space", w.len()));
            (b, c.clone())
        })
        .collect()
}

/// Koszul sign of applying maps of the given degrees positionwise to `word`.
pub(crate) fn positional_sign(word: &[Basis], degrees: &[i32]) -> bool {
    let mut odd = false;
    let mut prefix = 0i64;
    for (a, &k) in word.iter().zip(degrees) {
        if k.rem_euclid(2) == 1 && prefix.rem_euclid(2) == 1 {
            odd = !odd;
        }
        prefix += a.degree as i64;
    }
    odd
}

/// `(f_1 ⊗ … ⊗ f_n)(word)` as a word combination.
pub(crate) fn apply_positionwise(maps: &[&GradedMap], word: &[Basis], out: &mut WordComb, c: &Scalar) {
    let degrees: Vec<i32> = maps.iter().map(|m| m.degree()).collect();
    let sign = scalar::sign(positional_sign(word, &degrees));
    let images: Vec<Vector> = maps.iter().zip(word).map(|(m, a)| m.image(*a)).collect();
    expand_product(&images, &(c * sign), out);
}

fn word_of(space: &SpaceRef, b: Basis) -> &Word {
    space.word(b).expect("word space")
}

/// `⊕_n f^{⊗n}` between two word spaces. A map of nonzero degree `k` needs a
/// word space of a single length `n`; the result then has degree `n·k`.
pub fn letterwise(f: &GradedMap, source: &SpaceRef, target: &SpaceRef) -> GradedMap {
    let degree = if f.degree() == 0 {
        0
    } else {
        let (lo, hi) = source.word_lengths().expect("word space");
        assert!(lo == hi, "letterwise extension of a map of nonzero degree needs one word length");
        lo as i32 * f.degree()
    };
    let one = scalar::one();
    GradedMap::from_fn(source, target, degree, |b| {
        let w = word_of(source, b);
        let maps = vec![f; w.len()];
        let mut comb = WordComb::new();
        apply_positionwise(&maps, w, &mut comb, &one);
        comb_to_vector(target, &comb)
    })
}

/// `Σ_i Id^{⊗i} ⊗ f ⊗ Id^{⊗(n-i-1)}` on a word space (the coderivation
/// extending a linear `f: V -> V`).
pub fn derivation(f: &GradedMap, space: &SpaceRef) -> GradedMap {
    let gens = space.word_generators().expect("word space").clone();
    let id = GradedMap::identity(&gens);
    let one = scalar::one();
    GradedMap::from_fn(space, space, f.degree(), |b| {
        let w = word_of(space, b);
        let mut comb = WordComb::new();
        for i in 0..w.len() {
            let maps: Vec<&GradedMap> = (0..w.len()).map(|j| if j == i { f } else { &id }).collect();
            apply_positionwise(&maps, w, &mut comb, &one);
        }
        comb_to_vector(space, &comb)
    })
}

/// `Σ_i (ιπ)^{⊗i} ⊗ h ⊗ Id^{⊗(n-i-1)}` on a word space, with `ιπ` and `h`
/// endomorphisms of the generators.
pub fn tensor_homotopy(iota_pi: &GradedMap, h: &GradedMap, space: &SpaceRef) -> GradedMap {
    let gens = space.word_generators().expect("word space").clone();
    let id = GradedMap::identity(&gens);
    let one = scalar::one();
    GradedMap::from_fn(space, space, h.degree(), |b| {
        let w = word_of(space, b);
        let mut comb = WordComb::new();
        for i in 0..w.len() {
            let maps: Vec<&GradedMap> = (0..w.len())
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => iota_pi,
                    std::cmp::Ordering::Equal => h,
                    std::cmp::Ordering::Greater => &id,
                })
                .collect();
            apply_positionwise(&maps, w, &mut comb, &one);
        }
        comb_to_vector(space, &comb)
    })
}

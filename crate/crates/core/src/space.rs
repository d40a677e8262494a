//! Graded vector spaces with finite ordered bases.
//!
//! A [`GradedSpace`] assigns to finitely many degrees an ordered list of basis
//! labels. Basis elements are addressed by [`Basis`] (degree plus position), never
//! by label. Spaces built by [`GradedSpace::tensor`] and [`GradedSpace::words`]
//! remember their factor structure so tensor-aware operations can decompose
//! basis elements.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::vector::Vector;

pub type SpaceRef = Arc<GradedSpace>;

/// A basis element: its degree and its position inside that degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub degree: i32,
    pub index: usize,
}

impl Basis {
    pub fn new(degree: i32, index: usize) -> Self {
        Basis { degree, index }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// A word over the basis of a generator space.
pub type Word = Vec<Basis>;

/// Sum of letter degrees.
pub fn word_degree(word: &[Basis]) -> i32 {
    word.iter().map(|b| b.degree).sum()
}

pub struct GradedSpace {
    components: BTreeMap<i32, Vec<String>>,
    structure: Structure,
    fingerprint: u64,
}

pub(crate) enum Structure {
    Plain,
    Tensor(TensorIndex),
    Words(WordIndex),
    Invariants(InvariantIndex),
}

pub(crate) struct TensorIndex {
    pub(crate) left: SpaceRef,
    pub(crate) right: SpaceRef,
    pub(crate) factors: BTreeMap<i32, Vec<(Basis, Basis)>>,
    pub(crate) lookup: HashMap<(Basis, Basis), Basis>,
}

pub(crate) struct WordIndex {
    pub(crate) generators: SpaceRef,
    pub(crate) min_len: usize,
    pub(crate) max_len: usize,
    pub(crate) words: BTreeMap<i32, Vec<Word>>,
    pub(crate) lookup: HashMap<Word, Basis>,
}

/// Basis of orbit sums inside a word space; each basis vector has a distinguished
/// ambient word (its sorted word) carrying coefficient ±1, and distinct basis
/// vectors have disjoint supports.
pub(crate) struct InvariantIndex {
    pub(crate) ambient: SpaceRef,
    pub(crate) vectors: BTreeMap<i32, Vec<Vector>>,
    pub(crate) leading: BTreeMap<i32, Vec<(Basis, Scalar)>>,
    pub(crate) lookup: HashMap<Basis, Basis>,
}

impl GradedSpace {
    /// Builds a plain space. Empty components are rejected, as are duplicate
    /// labels within one degree.
    pub fn new<I, S>(components: I) -> Result<SpaceRef>
    where
        I: IntoIterator<Item = (i32, Vec<S>)>,
        S: Into<String>,
    {
        let mut map: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for (deg, labels) in components {
            if map.contains_key(&deg) {
                return Err(Error::InvalidSpace(format!("degree {deg} listed twice")));
            }
            let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
            if labels.is_empty() {
                return Err(Error::InvalidSpace(format!("degree {deg} has an empty basis")));
            }
            let mut seen = HashSet::new();
            for l in &labels {
                if !seen.insert(l.as_str()) {
                    return Err(Error::InvalidSpace(format!(
                        "label {l} repeated in degree {deg}"
                    )));
                }
            }
            map.insert(deg, labels);
        }
        Ok(Arc::new(Self::assemble(map, Structure::Plain)))
    }

    pub fn empty() -> SpaceRef {
        Arc::new(Self::assemble(BTreeMap::new(), Structure::Plain))
    }

    /// Convenience constructor for literal spaces in tests and examples.
    pub fn from_labels(components: &[(i32, &[&str])]) -> Result<SpaceRef> {
        Self::new(
            components
                .iter()
                .map(|(d, ls)| (*d, ls.iter().map(|s| s.to_string()).collect::<Vec<_>>())),
        )
    }

    fn assemble(components: BTreeMap<i32, Vec<String>>, structure: Structure) -> Self {
        let mut hasher = DefaultHasher::new();
        components.hash(&mut hasher);
        GradedSpace {
            fingerprint: hasher.finish(),
            components,
            structure,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.components.keys().copied()
    }

    pub fn dim(&self, degree: i32) -> usize {
        self.components.get(&degree).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn labels(&self, degree: i32) -> &[String] {
        self.components.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn components(&self) -> &BTreeMap<i32, Vec<String>> {
        &self.components
    }

    pub fn label(&self, b: Basis) -> &str {
        &self.components[&b.degree][b.index]
    }

    pub fn contains(&self, b: Basis) -> bool {
        b.index < self.dim(b.degree)
    }

    /// All basis elements in (degree, index) order.
    pub fn basis(&self) -> Vec<Basis> {
        self.components
            .iter()
            .flat_map(|(&d, ls)| (0..ls.len()).map(move |i| Basis::new(d, i)))
            .collect()
    }

    /// Looks a label up across all degrees; ambiguous labels return the lowest degree.
    pub fn find(&self, label: &str) -> Option<Basis> {
        self.components.iter().find_map(|(&d, ls)| {
            ls.iter()
                .position(|l| l == label)
                .map(|i| Basis::new(d, i))
        })
    }

    /// True when every label occurs in exactly one degree.
    pub fn labels_globally_unique(&self) -> bool {
        let mut seen = HashSet::new();
        self.components
            .values()
            .flatten()
            .all(|l| seen.insert(l.as_str()))
    }

    /// `L[k]`, with `L[k]^i = L^{i+k}`; labels are preserved.
    pub fn shift(&self, k: i32) -> SpaceRef {
        let components = self
            .components
            .iter()
            .map(|(d, ls)| (d - k, ls.clone()))
            .collect();
        Arc::new(Self::assemble(components, Structure::Plain))
    }

    /// Renders a vector as `c label + c label`, or `0`.
    pub fn render(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        v.iter()
            .map(|(b, c)| {
                let label = if self.contains(*b) {
                    self.label(*b).to_string()
                } else {
                    format!("<{}:{}>", b.degree, b.index)
                };
                format!("{} {}", scalar::format(c), label)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    // ---- tensor products ----

    /// `left ⊗ right`, ordered within each degree by (left basis, right basis).
    pub fn tensor(left: &SpaceRef, right: &SpaceRef) -> SpaceRef {
        let mut factors: BTreeMap<i32, Vec<(Basis, Basis)>> = BTreeMap::new();
        for a in left.basis() {
            for b in right.basis() {
                factors.entry(a.degree + b.degree).or_default().push((a, b));
            }
        }
        let plain = |s: &GradedSpace, b: Basis| s.label(b).to_string();
        let qualified = |s: &GradedSpace, b: Basis| format!("{}@{}", s.label(b), b.degree);
        let mut components = Self::pair_labels(left, right, &factors, plain);
        if !labels_unique(&components) {
            components = Self::pair_labels(left, right, &factors, qualified);
        }
        let mut lookup = HashMap::new();
        for (&d, pairs) in &factors {
            for (i, p) in pairs.iter().enumerate() {
                lookup.insert(*p, Basis::new(d, i));
            }
        }
        let index = TensorIndex {
            left: left.clone(),
            right: right.clone(),
            factors,
            lookup,
        };
        Arc::new(Self::assemble(components, Structure::Tensor(index)))
    }

    fn pair_labels(
        left: &GradedSpace,
        right: &GradedSpace,
        factors: &BTreeMap<i32, Vec<(Basis, Basis)>>,
        name: impl Fn(&GradedSpace, Basis) -> String,
    ) -> BTreeMap<i32, Vec<String>> {
        factors
            .iter()
            .map(|(&d, pairs)| {
                let ls = pairs
                    .iter()
                    .map(|(a, b)| format!("{}⊗{}", name(left, *a), name(right, *b)))
                    .collect();
                (d, ls)
            })
            .collect()
    }

    pub fn is_tensor(&self) -> bool {
        matches!(self.structure, Structure::Tensor(_))
    }

    /// The two factors of a tensor space.
    pub fn tensor_factors(&self) -> Option<(&SpaceRef, &SpaceRef)> {
        match &self.structure {
            Structure::Tensor(t) => Some((&t.left, &t.right)),
            _ => None,
        }
    }

    pub fn pair(&self, b: Basis) -> Option<(Basis, Basis)> {
        match &self.structure {
            Structure::Tensor(t) => t.factors.get(&b.degree).map(|v| v[b.index]),
            _ => None,
        }
    }

    pub fn pair_basis(&self, a: Basis, b: Basis) -> Option<Basis> {
        match &self.structure {
            Structure::Tensor(t) => t.lookup.get(&(a, b)).copied(),
            _ => None,
        }
    }

    /// Recursively flattens a (possibly nested) tensor basis element into the
    /// letters of its plain factors.
    pub fn flatten(&self, b: Basis) -> Vec<Basis> {
        match &self.structure {
            Structure::Tensor(t) => {
                let (x, y) = t.factors[&b.degree][b.index];
                let mut out = t.left.flatten(x);
                out.extend(t.right.flatten(y));
                out
            }
            Structure::Words(w) => w.words[&b.degree][b.index].clone(),
            _ => vec![b],
        }
    }

    // ---- word spaces ----

    /// Words of length `min_len..=max_len` over the basis of `generators`, ordered
    /// by (length, lexicographic letters) and bucketed by total degree.
    pub fn words(generators: &SpaceRef, min_len: usize, max_len: usize) -> SpaceRef {
        let letters = generators.basis();
        let mut words: BTreeMap<i32, Vec<Word>> = BTreeMap::new();
        let mut current: Vec<Word> = vec![Vec::new()];
        for len in 1..=max_len {
            let mut next = Vec::with_capacity(current.len() * letters.len());
            for w in &current {
                for &l in &letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            current = next;
            if len >= min_len {
                for w in &current {
                    words.entry(word_degree(w)).or_default().push(w.clone());
                }
            }
        }
        let unique = generators.labels_globally_unique();
        let components = words
            .iter()
            .map(|(&d, ws)| {
                let ls = ws
                    .iter()
                    .map(|w| {
                        w.iter()
                            .map(|&l| {
                                if unique {
                                    generators.label(l).to_string()
                                } else {
                                    format!("{}@{}", generators.label(l), l.degree)
                                }
                            })
                            .collect::<Vec<_>>()
                            .join("⊗")
                    })
                    .collect();
                (d, ls)
            })
            .collect();
        let mut lookup = HashMap::new();
        for (&d, ws) in &words {
            for (i, w) in ws.iter().enumerate() {
                lookup.insert(w.clone(), Basis::new(d, i));
            }
        }
        let index = WordIndex {
            generators: generators.clone(),
            min_len,
            max_len,
            words,
            lookup,
        };
        Arc::new(Self::assemble(components, Structure::Words(index)))
    }

    pub fn is_word_space(&self) -> bool {
        matches!(self.structure, Structure::Words(_))
    }

    pub fn word_generators(&self) -> Option<&SpaceRef> {
        match &self.structure {
            Structure::Words(w) => Some(&w.generators),
            _ => None,
        }
    }

    pub fn word_lengths(&self) -> Option<(usize, usize)> {
        match &self.structure {
            Structure::Words(w) => Some((w.min_len, w.max_len)),
            _ => None,
        }
    }

    pub fn word(&self, b: Basis) -> Option<&Word> {
        match &self.structure {
            Structure::Words(w) => w.words.get(&b.degree).map(|v| &v[b.index]),
            _ => None,
        }
    }

    pub fn word_basis(&self, word: &[Basis]) -> Option<Basis> {
        match &self.structure {
            Structure::Words(w) => w.lookup.get(word).copied(),
            _ => None,
        }
    }

    // ---- invariant subspaces ----

    /// A space whose basis is a family of vectors of `ambient` with pairwise
    /// disjoint supports; `leading[i]` names a support word and the coefficient
    /// it carries in vector `i`.
    pub(crate) fn invariants(
        ambient: &SpaceRef,
        entries: Vec<(Vector, Basis, Scalar)>,
    ) -> SpaceRef {
        let mut vectors: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        let mut leading: BTreeMap<i32, Vec<(Basis, Scalar)>> = BTreeMap::new();
        let mut components: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        let mut lookup = HashMap::new();
        for (v, lead, coeff) in entries {
            let d = lead.degree;
            let idx = vectors.entry(d).or_default().len();
            lookup.insert(lead, Basis::new(d, idx));
            components
                .entry(d)
                .or_default()
                .push(format!("S({})", ambient.label(lead)));
            vectors.get_mut(&d).unwrap().push(v);
            leading.entry(d).or_default().push((lead, coeff));
        }
        let index = InvariantIndex {
            ambient: ambient.clone(),
            vectors,
            leading,
            lookup,
        };
        Arc::new(Self::assemble(components, Structure::Invariants(index)))
    }

    pub fn invariant_ambient(&self) -> Option<&SpaceRef> {
        match &self.structure {
            Structure::Invariants(i) => Some(&i.ambient),
            _ => None,
        }
    }

    /// The ambient vector represented by a basis element of an invariant space.
    pub fn invariant_vector(&self, b: Basis) -> Option<&Vector> {
        match &self.structure {
            Structure::Invariants(i) => i.vectors.get(&b.degree).map(|v| &v[b.index]),
            _ => None,
        }
    }

    /// Coordinates of an ambient vector in the invariant basis, or `None` if it
    /// is not in their span.
    pub fn invariant_coordinates(&self, v: &Vector) -> Option<Vector> {
        let Structure::Invariants(inv) = &self.structure else {
            return None;
        };
        let mut coords = Vector::new();
        for (b, c) in v.iter() {
            if let Some(&target) = inv.lookup.get(b) {
                let (_, lead_coeff) = &inv.leading[&target.degree][target.index];
                coords.add_term(target, c / lead_coeff);
            }
        }
        let mut rebuilt = Vector::new();
        for (b, c) in coords.iter() {
            rebuilt.add_scaled(&inv.vectors[&b.degree][b.index], c);
        }
        (rebuilt == *v).then_some(coords)
    }
}

fn labels_unique(components: &BTreeMap<i32, Vec<String>>) -> bool {
    components.values().all(|ls| {
        let mut seen = HashSet::new();
        ls.iter().all(|l| seen.insert(l.as_str()))
    })
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint && self.components == other.components)
    }
}

impl Eq for GradedSpace {}

impl fmt::Debug for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.components.iter().map(|(d, ls)| (d, ls.len())))
            .finish()
    }
}

/// `L[1]`: the degree-`i` component is the degree-`(i+1)` component of `L`.
pub fn shift_space(space: &GradedSpace) -> SpaceRef {
    space.shift(1)
}

/// Inverse of [`shift_space`].
pub fn unshift_space(space: &GradedSpace) -> SpaceRef {
    space.shift(-1)
}

pub fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicate_components() {
        assert!(GradedSpace::from_labels(&[(0, &[])]).is_err());
        assert!(GradedSpace::from_labels(&[(0, &["x", "x"])]).is_err());
        assert!(GradedSpace::from_labels(&[(0, &["x"]), (1, &["x"])]).is_ok());
    }

    #[test]
    fn shift_moves_degrees_down() {
        let l = GradedSpace::from_labels(&[(0, &["a", "b"])]).unwrap();
        let v = shift_space(&l);
        assert_eq!(v.degrees().collect::<Vec<_>>(), vec![-1]);
        assert_eq!(v.labels(-1), l.labels(0));
        assert_eq!(*unshift_space(&v), *l);
        let e = GradedSpace::empty();
        assert!(shift_space(&e).is_empty());
    }

    #[test]
    fn shift_component_rule() {
        let l = GradedSpace::from_labels(&[(-2, &["p"]), (0, &["a", "b"]), (3, &["z"])]).unwrap();
        let s = shift_space(&l);
        for i in -5..5 {
            assert_eq!(s.labels(i), l.labels(i + 1));
        }
    }

    #[test]
    fn tensor_space_indexing() {
        let a = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let t = GradedSpace::tensor(&a, &a);
        assert_eq!(t.dim(0), 1);
        assert_eq!(t.dim(1), 2);
        assert_eq!(t.dim(2), 1);
        assert_eq!(t.labels(1), &["x⊗y".to_string(), "y⊗x".to_string()]);
        let x = Basis::new(0, 0);
        let y = Basis::new(1, 0);
        let b = t.pair_basis(y, x).unwrap();
        assert_eq!(t.pair(b), Some((y, x)));
    }

    #[test]
    fn tensor_labels_disambiguate() {
        let a = GradedSpace::from_labels(&[(0, &["x"]), (1, &["x"])]).unwrap();
        let t = GradedSpace::tensor(&a, &a);
        assert_eq!(t.labels(1), &["x@0⊗x@1".to_string(), "x@1⊗x@0".to_string()]);
    }

    #[test]
    fn word_space_enumeration() {
        let v = GradedSpace::from_labels(&[(0, &["x"]), (1, &["y"])]).unwrap();
        let w = GradedSpace::words(&v, 1, 3);
        assert_eq!(w.total_dim(), 2 + 4 + 8);
        let word = vec![Basis::new(1, 0), Basis::new(0, 0), Basis::new(1, 0)];
        let b = w.word_basis(&word).unwrap();
        assert_eq!(b.degree, 2);
        assert_eq!(w.word(b), Some(&word));
        assert_eq!(w.label(b), "y⊗x⊗y");
        assert_eq!(w.flatten(b), word);
    }
}

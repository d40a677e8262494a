//! The reduced tensor coalgebra `T̄(V) = ⊕_{n≥1} ⊗ⁿV`, truncated at a maximal weight.
//!
//! Every operator used here (coderivations, coalgebra morphisms, the tensor-trick
//! maps) sends weight `n` into weights `≤ n`, so the truncation `T̄_{≤W}(V)` is
//! closed under all of them and identities checked on it are exact.

use std::fmt::Write as _;

use crate::complex::{DGModule, ValidationReport, Witness};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::map::GradedMap;
use crate::scalar::{self, Scalar};
use crate::space::{same_space, Basis, GradedSpace, SpaceRef, Word};
use crate::symmetric;
use crate::vector::{PairVector, Vector};
use crate::words::{self, comb_to_vector, expand_product, WordComb};

/// `T̄_{≤W}(V)` with its basis of words of length `1..=W`.
#[derive(Clone, Debug)]
pub struct TruncatedCoalgebra {
    generators: SpaceRef,
    max_weight: usize,
    space: SpaceRef,
}

impl TruncatedCoalgebra {
    pub fn new(generators: &SpaceRef, max_weight: usize) -> Result<Self> {
        if max_weight == 0 {
            return Err(Error::InvalidSpace("maximal weight must be at least 1".into()));
        }
        Ok(TruncatedCoalgebra {
            generators: generators.clone(),
            max_weight,
            space: GradedSpace::words(generators, 1, max_weight),
        })
    }

    pub fn generators(&self) -> &SpaceRef {
        &self.generators
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn word(&self, b: Basis) -> &Word {
        self.space.word(b).expect("word space")
    }

    pub fn weight(&self, b: Basis) -> usize {
        self.word(b).len()
    }

    pub fn basis_of(&self, word: &[Basis]) -> Option<Basis> {
        self.space.word_basis(word)
    }

    /// The weight-one word of a generator.
    pub fn letter(&self, g: Basis) -> Basis {
        self.basis_of(&[g]).expect("generator")
    }

    pub fn words_of_weight(&self, n: usize) -> Vec<Basis> {
        self.space.basis().into_iter().filter(|&b| self.weight(b) == n).collect()
    }

    /// Same generators and truncation.
    pub fn same_as(&self, other: &TruncatedCoalgebra) -> bool {
        self.max_weight == other.max_weight && same_space(&self.generators, &other.generators)
    }

    /// The deconcatenation coproduct `𝔞`.
    pub fn coproduct(&self, v: &Vector) -> PairVector {
        let mut out = PairVector::new();
        for (b, c) in v.iter() {
            let w = self.word(*b);
            for i in 1..w.len() {
                let left = self.basis_of(&w[..i]).expect("prefix");
                let right = self.basis_of(&w[i..]).expect("suffix");
                out.add_term(left, right, c.clone());
            }
        }
        out
    }

    /// The projection `p: T̄(V) -> V` onto weight one.
    pub fn corestriction(&self, v: &Vector) -> Vector {
        v.iter()
            .filter_map(|(b, c)| {
                let w = self.word(*b);
                (w.len() == 1).then(|| (w[0], c.clone()))
            })
            .collect()
    }

    pub fn projection_map(&self) -> GradedMap {
        GradedMap::from_fn(&self.space, &self.generators, 0, |b| {
            let w = self.word(b);
            if w.len() == 1 {
                Vector::basis(w[0])
            } else {
                Vector::new()
            }
        })
    }

    /// The inclusion `V -> T̄(V)` as weight-one words.
    pub fn inclusion_map(&self) -> GradedMap {
        GradedMap::from_fn(&self.generators, &self.space, 0, |g| Vector::basis(self.letter(g)))
    }

    /// Renders an element of `T̄(V) ⊗ T̄(V)`.
    pub fn render_pairs(&self, pv: &PairVector) -> String {
        render_pairs(&self.space, &self.space, pv)
    }
}

/// `𝔞(w)` for an element `w` of a truncated coalgebra.
pub fn reduced_coproduct(coalgebra: &TruncatedCoalgebra, v: &Vector) -> PairVector {
    coalgebra.coproduct(v)
}

pub fn render_pairs(left: &SpaceRef, right: &SpaceRef, pv: &PairVector) -> String {
    if pv.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, ((a, b), c)) in pv.iter().enumerate() {
        if i > 0 {
            s.push_str(" + ");
        }
        let _ = write!(s, "{} ({})|({})", scalar::format(c), left.label(*a), right.label(*b));
    }
    s
}

/// `(f ⊗ g)(Σ c x⊗y) = Σ c (-1)^{|g||x|} f(x) ⊗ g(y)`.
pub fn apply_pair(f: &GradedMap, g: &GradedMap, pv: &PairVector) -> PairVector {
    let g_odd = g.degree().rem_euclid(2) == 1;
    let mut out = PairVector::new();
    for ((x, y), c) in pv.iter() {
        let sign = scalar::sign(g_odd && x.is_odd());
        out.add_product(&f.image(*x), &g.image(*y), &(c * sign));
    }
    out
}

/// A coderivation of `T̄_{≤W}(V)`, determined by its corestriction
/// `q = Σ q_n` with `q_n: ⊗ⁿV -> V`. The family is stored as one map from the
/// word space to `V`.
#[derive(Clone, Debug)]
pub struct CoderivationSpec {
    ambient: TruncatedCoalgebra,
    corestriction: GradedMap,
}

impl CoderivationSpec {
    pub fn new(ambient: &TruncatedCoalgebra, corestriction: GradedMap) -> Result<Self> {
        if !same_space(corestriction.source(), ambient.space())
            || !same_space(corestriction.target(), ambient.generators())
        {
            return Err(Error::SpaceMismatch(
                "corestriction must map the truncated coalgebra to its generators".into(),
            ));
        }
        let corestriction = corestriction.with_spaces(ambient.space(), ambient.generators())?;
        Ok(CoderivationSpec {
            ambient: ambient.clone(),
            corestriction,
        })
    }

    pub fn zero(ambient: &TruncatedCoalgebra, degree: i32) -> Self {
        CoderivationSpec {
            ambient: ambient.clone(),
            corestriction: GradedMap::zero(ambient.space(), ambient.generators(), degree),
        }
    }

    /// The coderivation with `q_1 = d` and `q_n = 0` otherwise.
    pub fn from_linear(ambient: &TruncatedCoalgebra, d: &GradedMap) -> Result<Self> {
        let q = d.compose(&ambient.projection_map())?;
        CoderivationSpec::new(ambient, q)
    }

    /// Builds `q` from `(word, output letter, coefficient)` entries.
    pub fn from_terms(
        ambient: &TruncatedCoalgebra,
        degree: i32,
        terms: impl IntoIterator<Item = (Word, Basis, Scalar)>,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for (w, out, c) in terms {
            let b = ambient.basis_of(&w).ok_or_else(|| {
                Error::InvalidMap(format!("word of length {} outside the truncation", w.len()))
            })?;
            entries.push((b, out, c));
        }
        let q = GradedMap::from_entries(ambient.space(), ambient.generators(), degree, entries)?;
        Ok(CoderivationSpec {
            ambient: ambient.clone(),
            corestriction: q,
        })
    }

    pub fn ambient(&self) -> &TruncatedCoalgebra {
        &self.ambient
    }

    pub fn degree(&self) -> i32 {
        self.corestriction.degree()
    }

    pub fn corestriction(&self) -> &GradedMap {
        &self.corestriction
    }

    /// `q_n`, as a map on the whole word space vanishing off weight `n`.
    pub fn component(&self, n: usize) -> GradedMap {
        let amb = &self.ambient;
        self.corestriction.restrict_columns(|b| amb.weight(b) == n)
    }

    /// `q_1` as an endomorphism of `V`.
    pub fn linear_part(&self) -> GradedMap {
        let amb = &self.ambient;
        GradedMap::from_fn(amb.generators(), amb.generators(), self.degree(), |g| {
            self.corestriction.image(amb.letter(g))
        })
    }

    pub fn add(&self, other: &CoderivationSpec) -> Result<CoderivationSpec> {
        CoderivationSpec::new(&self.ambient, self.corestriction.add(&other.corestriction)?)
    }
}

/// The coderivation `Q` with `pQ = q`:
/// `Q(a_1…a_n) = Σ_{l,i} (-1)^{k(|a_1|+…+|a_i|)} a_1…a_i ⊗ q(a_{i+1}…a_{i+l}) ⊗ … ⊗ a_n`.
pub fn extend_coderivation(q: &CoderivationSpec) -> GradedMap {
    let amb = &q.ambient;
    let k_odd = q.degree().rem_euclid(2) == 1;
    GradedMap::from_fn(amb.space(), amb.space(), q.degree(), |b| {
        let w = amb.word(b);
        let n = w.len();
        let mut out = Vector::new();
        let mut prefix_degree = 0i32;
        for i in 0..n {
            let sign = scalar::sign(k_odd && prefix_degree.rem_euclid(2) == 1);
            for l in 1..=n - i {
                let inner = amb.basis_of(&w[i..i + l]).expect("subword");
                for (letter, c) in q.corestriction.image(inner).iter() {
                    let mut word: Word = Vec::with_capacity(n - l + 1);
                    word.extend_from_slice(&w[..i]);
                    word.push(*letter);
                    word.extend_from_slice(&w[i + l..]);
                    out.add_term(amb.basis_of(&word).expect("shorter word"), c * &sign);
                }
            }
            prefix_degree += w[i].degree;
        }
        out
    })
}

/// Calls `f` with every decomposition of `0..n` into consecutive nonempty blocks.
pub(crate) fn for_each_composition(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    if n == 0 {
        return;
    }
    let mut blocks = Vec::with_capacity(n);
    for mask in 0u64..(1u64 << (n - 1)) {
        blocks.clear();
        let mut start = 0;
        for cut in 1..n {
            if mask & (1 << (cut - 1)) != 0 {
                blocks.push((start, cut));
                start = cut;
            }
        }
        blocks.push((start, n));
        f(&blocks);
    }
}

/// `F(a_1…a_n) = Σ f(block_1) ⊗ … ⊗ f(block_m)` over ordered partitions into
/// consecutive blocks, given a lookup for the values of `f` on words.
pub(crate) fn morphism_image(
    word: &[Basis],
    f: impl Fn(&[Basis]) -> Vector,
    target: &TruncatedCoalgebra,
) -> Vector {
    let mut comb = WordComb::new();
    let one = scalar::one();
    for_each_composition(word.len(), |blocks| {
        let images: Vec<Vector> = blocks.iter().map(|&(s, e)| f(&word[s..e])).collect();
        expand_product(&images, &one, &mut comb);
    });
    comb_to_vector(target.space(), &comb)
}

/// The unique coalgebra morphism `F: T̄(V) -> T̄(V')` with `pF = f`, for a
/// degree-0 map `f` from the word space of `source` to the generators of `target`.
pub fn extend_coalgebra_morphism(
    f: &GradedMap,
    source: &TruncatedCoalgebra,
    target: &TruncatedCoalgebra,
) -> Result<GradedMap> {
    if f.degree() != 0 {
        return Err(Error::DegreeMismatch("coalgebra morphisms have degree 0".into()));
    }
    if !same_space(f.source(), source.space()) || !same_space(f.target(), target.generators()) {
        return Err(Error::SpaceMismatch(
            "corestriction must map the source coalgebra to the target generators".into(),
        ));
    }
    if target.max_weight() < source.max_weight() {
        return Err(Error::SpaceMismatch("target truncation is lower than the source".into()));
    }
    Ok(GradedMap::from_fn(source.space(), target.space(), 0, |b| {
        let w = source.word(b);
        morphism_image(w, |block| f.image(source.basis_of(block).expect("subword")), target)
    }))
}

/// Records the first input `v` with `(F⊗F)𝔞(v) ≠ 𝔞F(v)`.
pub fn check_coalgebra_morphism(
    check: &str,
    map: &GradedMap,
    source: &TruncatedCoalgebra,
    target: &TruncatedCoalgebra,
    inputs: &[Vector],
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let bad = inputs.iter().find_map(|v| {
        let lhs = apply_pair(map, map, &source.coproduct(v));
        let rhs = target.coproduct(&map.apply(v));
        let diff = &lhs - &rhs;
        (!diff.is_zero()).then(|| (v, diff))
    });
    if let Some((v, diff)) = bad {
        report.push(
            check,
            Witness::new(source.space().render(v), target.render_pairs(&diff)),
        );
    }
    report
}

/// Records the first input with `𝔞Q(v) ≠ (Q⊗Id + Id⊗Q)𝔞(v)`.
pub fn check_coderivation(
    check: &str,
    map: &GradedMap,
    coalgebra: &TruncatedCoalgebra,
    inputs: &[Vector],
) -> ValidationReport {
    let id = GradedMap::identity(coalgebra.space());
    let mut report = ValidationReport::default();
    let bad = inputs.iter().find_map(|v| {
        let a = coalgebra.coproduct(v);
        let mut rhs = apply_pair(map, &id, &a);
        rhs.add_assign(&apply_pair(&id, map, &a));
        let lhs = coalgebra.coproduct(&map.apply(v));
        let diff = &lhs - &rhs;
        (!diff.is_zero()).then(|| (v, diff))
    });
    if let Some((v, diff)) = bad {
        report.push(
            check,
            Witness::new(coalgebra.space().render(v), coalgebra.render_pairs(&diff)),
        );
    }
    report
}

/// A contraction between truncated tensor coalgebras.
#[derive(Clone, Debug)]
pub struct CoalgebraContraction {
    pub big: TruncatedCoalgebra,
    pub small: TruncatedCoalgebra,
    pub contraction: Contraction,
}

/// The tensor trick: `(T̄(M) ⇄ T̄(N), Th)` with inclusion `⊕ι^{⊗n}`,
/// projection `⊕π^{⊗n}` and `Th = Σ_n Tⁿh`, truncated at weight `max_weight`.
pub fn tensor_trick(c: &Contraction, max_weight: usize) -> Result<CoalgebraContraction> {
    let big = TruncatedCoalgebra::new(&c.big.space, max_weight)?;
    let small = TruncatedCoalgebra::new(&c.small.space, max_weight)?;
    let d_big = words::derivation(&c.big.differential, big.space());
    let d_small = words::derivation(&c.small.differential, small.space());
    let big_module = DGModule::new(big.space(), d_big)?;
    let small_module = DGModule::new(small.space(), d_small)?;
    let incl = words::letterwise(&c.incl, small.space(), big.space());
    let proj = words::letterwise(&c.proj, big.space(), small.space());
    let homotopy = words::tensor_homotopy(&c.iota_pi(), &c.homotopy, big.space());
    let contraction = Contraction::new(big_module, small_module, incl, proj, homotopy)?;
    Ok(CoalgebraContraction {
        big,
        small,
        contraction,
    })
}

/// Which inputs coalgebra identities are checked on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Every basis word.
    Words,
    /// The orbit-sum basis of the symmetric tensors.
    Invariants,
}

pub fn domain_inputs(coalgebra: &TruncatedCoalgebra, domain: Domain) -> Vec<Vector> {
    match domain {
        Domain::Words => coalgebra.space().basis().into_iter().map(Vector::basis).collect(),
        Domain::Invariants => symmetric::invariant_vectors(coalgebra.space()),
    }
}

pub mod check {
    pub const PROJECTION_MORPHISM: &str = "pi is a coalgebra morphism";
    pub const INCLUSION_MORPHISM: &str = "iota is a coalgebra morphism";
    pub const HOMOTOPY_COMPATIBLE: &str = "(iota pi (x) h + h (x) Id) a = a h";
}

/// Empty iff `π` and `ι` are coalgebra morphisms and
/// `(ιπ ⊗ h + h ⊗ Id)∘𝔞 = 𝔞∘h` on the chosen inputs.
pub fn is_coalgebra_contraction(cc: &CoalgebraContraction, domain: Domain) -> ValidationReport {
    let c = &cc.contraction;
    let big_inputs = domain_inputs(&cc.big, domain);
    let small_inputs = domain_inputs(&cc.small, domain);
    let mut report = check_coalgebra_morphism(check::PROJECTION_MORPHISM, &c.proj, &cc.big, &cc.small, &big_inputs);
    report.extend(check_coalgebra_morphism(
        check::INCLUSION_MORPHISM,
        &c.incl,
        &cc.small,
        &cc.big,
        &small_inputs,
    ));
    report.extend(check_homotopy_compatibility(cc, &big_inputs));
    report
}

fn check_homotopy_compatibility(cc: &CoalgebraContraction, inputs: &[Vector]) -> ValidationReport {
    let c = &cc.contraction;
    let ip = c.iota_pi();
    let id = GradedMap::identity(cc.big.space());
    let mut report = ValidationReport::default();
    let bad = inputs.iter().find_map(|v| {
        let a = cc.big.coproduct(v);
        let mut rhs = apply_pair(&ip, &c.homotopy, &a);
        rhs.add_assign(&apply_pair(&c.homotopy, &id, &a));
        let lhs = cc.big.coproduct(&c.homotopy.apply(v));
        let diff = &lhs - &rhs;
        (!diff.is_zero()).then(|| (v, diff))
    });
    if let Some((v, diff)) = bad {
        report.push(
            check::HOMOTOPY_COMPATIBLE,
            Witness::new(cc.big.space().render(v), cc.big.render_pairs(&diff)),
        );
    }
    report
}

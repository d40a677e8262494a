//! Acceptance suite. Every assertion is exact; each criterion prints one line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hpt_core::builtins::{dgla_acyclic, sl2_example};
use hpt_core::coalgebra::{
    check_coalgebra_morphism, extend_coderivation, tensor_trick, TruncatedCoalgebra,
};
use hpt_core::contraction::{homology_contraction, validate_contraction, Contraction};
use hpt_core::map::GradedMap;
use hpt_core::perturbation::{
    check_nilpotency, composition_compatibility_check, linfty_transfer, ordinary_transfer,
    perturbed_inclusion, recursive_inclusion, relative_transfer, CheckStatus, Perturbation,
};
use hpt_core::random::{
    random_complex, random_composite, random_lie_table, random_linfty, random_non_jacobi_table,
    random_perturbation, rng, ComplexShape,
};
use hpt_core::scalar::{self, Scalar};
use hpt_core::space::{Basis, SpaceRef};
use hpt_core::subspace::Subspace;
use hpt_core::symmetric::{encode_bilinear, invariant_vectors, is_codifferential, sl2, Encoding, Side};
use hpt_core::vector::Vector;
use num_traits::Zero;

const MAX_ITER: usize = 100;

fn seeds(base: u64, n: u64) -> impl Iterator<Item = u64> {
    (0..n).map(move |i| base * 1000 + i)
}

/// Criterion 1: `homology_contraction` satisfies every contraction axiom, and
/// its small side has the Betti numbers computed by dense rank.
fn contraction_axioms() -> String {
    let mut checked = 0;
    for seed in seeds(1, 100) {
        let m = random_complex(&mut rng(seed), ComplexShape::default(), "x");
        let c = homology_contraction(&m);
        let report = validate_contraction(&c);
        assert!(report.is_ok(), "seed {seed}: {:?}", report.violations);
        assert!(c.small.differential.is_zero(), "seed {seed}");
        for (k, b) in common::betti(&m.space, &m.differential) {
            assert_eq!(c.small.space.dim(k), b, "seed {seed}, degree {k}");
        }
        checked += 1;
    }
    format!("{checked} complexes")
}

type Pairs = std::collections::BTreeMap<(Vec<Basis>, Vec<Basis>), Scalar>;

fn word_of(space: &SpaceRef, b: Basis) -> Vec<Basis> {
    space.word(b).expect("word space").clone()
}

fn parity(word: &[Basis]) -> bool {
    word.iter().map(|b| b.degree).sum::<i32>().rem_euclid(2) == 1
}

/// `𝔞(v)` as explicit pairs of words.
fn deconcatenate(space: &SpaceRef, v: &Vector, out: &mut Pairs, sign: &Scalar) {
    for (b, c) in v.iter() {
        let w = word_of(space, *b);
        for cut in 1..w.len() {
            *out.entry((w[..cut].to_vec(), w[cut..].to_vec())).or_insert_with(Scalar::zero) += c * sign;
        }
    }
}

fn add_products(space: &SpaceRef, left: &Vector, right: &Vector, sign: &Scalar, out: &mut Pairs) {
    for (a, ca) in left.iter() {
        for (b, cb) in right.iter() {
            *out.entry((word_of(space, *a), word_of(space, *b))).or_insert_with(Scalar::zero) += ca * cb * sign;
        }
    }
}

fn nonzero(p: Pairs) -> Pairs {
    p.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Criterion 2: `𝔞∘Th = (T(ιπ)⊗Th + Th⊗Id)∘𝔞` on every word of weight ≤ 4.
fn tensor_trick_identity() -> String {
    let shape = ComplexShape {
        min_degree: -1,
        max_degree: 1,
        max_dim: 2,
    };
    let mut words = 0;
    let mut seed = 2000;
    let mut instances = 0;
    while instances < 20 {
        seed += 1;
        let m = random_complex(&mut rng(seed), shape, "v");
        let dim = m.space.total_dim();
        if dim == 0 || dim > 3 {
            continue;
        }
        instances += 1;
        let cc = tensor_trick(&homology_contraction(&m), 4).unwrap();
        let space = cc.big.space().clone();
        let th = &cc.contraction.homotopy;
        let tip = cc.contraction.iota_pi();
        let one = scalar::one();
        for b in space.basis() {
            let w = word_of(&space, b);
            let mut lhs = Pairs::new();
            deconcatenate(&space, &th.image(b), &mut lhs, &one);
            let mut rhs = Pairs::new();
            for cut in 1..w.len() {
                let (u, v) = (&w[..cut], &w[cut..]);
                let ub = Vector::basis(space.word_basis(u).unwrap());
                let vb = Vector::basis(space.word_basis(v).unwrap());
                // Th has degree −1, so passing it over u costs (−1)^{|u|}.
                let koszul = scalar::sign(parity(u));
                add_products(&space, &tip.apply(&ub), &th.apply(&vb), &koszul, &mut rhs);
                add_products(&space, &th.apply(&ub), &vb, &one, &mut rhs);
            }
            assert_eq!(nonzero(lhs), nonzero(rhs), "seed {seed}, word {}", space.label(b));
            words += 1;
        }
    }
    format!("{instances} contractions, {words} words")
}

fn ordinary_instances() -> Vec<(u64, Contraction, GradedMap)> {
    let shape = ComplexShape {
        min_degree: -2,
        max_degree: 2,
        max_dim: 3,
    };
    seeds(3, 50)
        .map(|seed| {
            let inst = random_perturbation(&mut rng(seed), shape);
            (seed, inst.contraction, inst.delta)
        })
        .collect()
}

fn assert_equal_maps(name: &str, seed: u64, a: &GradedMap, b: &GradedMap) {
    if let Some((x, l, r)) = a.difference_witness(b) {
        panic!(
            "seed {seed}: {name} fails at {}: {} vs {}",
            a.source().label(x),
            a.target().render(&l),
            b.target().render(&r)
        );
    }
}

/// Criterion 3: the ordinary perturbation lemma, recomputed from the returned maps.
fn ordinary_lemma() -> String {
    let mut nontrivial = 0;
    for (seed, c, delta) in ordinary_instances() {
        check_nilpotency(&c, &delta, MAX_ITER).unwrap();
        let p = Perturbation::global(&c.big, delta.clone()).unwrap();
        let r = ordinary_transfer(&c, &p, MAX_ITER).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(r.checks.iter().all(|k| k.status == CheckStatus::Passed), "seed {seed}");
        let (i, pr) = (&r.inclusion, &r.projection);
        let dm = r.small_differential(&c);
        let total = c.big.differential.add(&delta).unwrap();
        let c_ = |x: hpt_core::error::Result<GradedMap>| x.unwrap();
        assert!(c_(dm.compose(&dm)).is_zero(), "seed {seed}: (d_M + D)^2");
        assert_equal_maps("iota chain map", seed, &c_(total.compose(i)), &c_(i.compose(&dm)));
        assert_equal_maps("pi chain map", seed, &c_(pr.compose(&total)), &c_(dm.compose(pr)));
        assert_equal_maps("pi iota", seed, &c_(pr.compose(i)), &GradedMap::identity(&c.small.space));
        let h = &c.homotopy;
        assert!(c_(h.compose(i)).is_zero(), "seed {seed}: h iota_delta");
        assert!(c_(pr.compose(h)).is_zero(), "seed {seed}: pi_delta h");
        assert_equal_maps("pi iota_delta", seed, &c_(c.proj.compose(i)), &GradedMap::identity(&c.small.space));
        assert_equal_maps("pi_delta iota", seed, &c_(pr.compose(&c.incl)), &GradedMap::identity(&c.small.space));
        if !r.transferred.is_zero() {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 0, "every transferred perturbation vanished");
    format!("50 perturbations, {nontrivial} with D != 0")
}

/// Criterion 4: series against a dense solve of `(Id − h∂) X = ι`, and series
/// against the weight recursion for L∞ instances.
fn oracle_equivalence() -> String {
    let mut blocks = 0;
    for (seed, c, delta) in ordinary_instances() {
        let series = perturbed_inclusion(&c, &delta, MAX_ITER).unwrap();
        let h_delta = c.homotopy.compose(&delta).unwrap();
        for k in c.small.space.degrees() {
            let n = c.big.space.dim(k);
            let a = common::sub(&common::identity(n), &common::block(&h_delta, k));
            let x = common::solve(&a, &common::block(&c.incl, k)).expect("Id - h delta is invertible");
            for j in 0..c.small.space.dim(k) {
                assert_eq!(series.image(Basis::new(k, j)), common::column(&x, j, k), "seed {seed}, degree {k}");
            }
            blocks += 1;
        }
    }
    let mut higher = 0;
    for seed in seeds(4, 10) {
        let ex = random_linfty(&mut rng(seed), 4).unwrap();
        let r = linfty_transfer(&ex.contraction, &ex.codifferential, MAX_ITER).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let rec = recursive_inclusion(&ex.contraction, &ex.codifferential).unwrap();
        assert_equal_maps("recursion", seed, &rec, &r.inclusion_family);
        if r.brackets.iter().any(|s| s.arity >= 3) {
            higher += 1;
        }
    }
    format!("{blocks} dense blocks, 10 L-infinity instances ({higher} with brackets of arity >= 3)")
}

/// Criterion 5: the sl₂ encoding is a codifferential on symmetric tensors but
/// not on all tensors, and the relative lemma runs on `A = S̄(V)` although
/// `ψ ≠ 0` on `T̄(V)`.
fn relative_lemma() -> String {
    let q = encode_bilinear(&sl2(), Encoding::Lie, 3).unwrap();
    assert!(is_codifferential(&q, Side::Symmetric).unwrap().is_ok());
    let w = is_codifferential(&q, Side::Tensor).unwrap().unwrap_err();
    assert!(!w.input.contains(" + ") && w.input.matches('⊗').count() == 2, "{w}");

    let ex = sl2_example(3).unwrap();
    let cc = tensor_trick(&ex.contraction, 3).unwrap();
    let big_q = extend_coderivation(&ex.codifferential)
        .with_spaces(cc.big.space(), cc.big.space())
        .unwrap();
    let delta = big_q.sub(&cc.contraction.big.differential).unwrap();
    let p = Perturbation::over(&cc.contraction.big, delta, Subspace::Symmetric(cc.big.space().clone())).unwrap();
    let r = relative_transfer(
        &cc.contraction,
        &p,
        &Subspace::Symmetric(cc.small.space().clone()),
        MAX_ITER,
    )
    .unwrap();
    assert!(!r.diagnostics.psi.is_zero());
    format!("tensor witness {}", w.input)
}

fn weight_at_most(coalgebra: &TruncatedCoalgebra, v: &Vector, n: usize) -> bool {
    v.support().all(|b| coalgebra.weight(b) <= n)
}

/// Criterion 6: transfer along the acyclic pair of the shipped example.
fn linfty_example() -> String {
    let ex = dgla_acyclic(5).unwrap();
    let r = linfty_transfer(&ex.contraction, &ex.codifferential, MAX_ITER).unwrap();
    let small = &r.coalgebra.small;
    let big = &r.coalgebra.big;
    assert!(is_codifferential(&r.transferred, Side::Symmetric).unwrap().is_ok());

    let inputs: Vec<Vector> = invariant_vectors(small.space())
        .into_iter()
        .filter(|v| weight_at_most(small, v, 4))
        .collect();
    let report = check_coalgebra_morphism("iota_delta", &r.transfer.inclusion, small, big, &inputs);
    assert!(report.is_ok(), "{:?}", report.violations);
    let q_big = extend_coderivation(&ex.codifferential).with_spaces(big.space(), big.space()).unwrap();
    let q_small = extend_coderivation(&r.transferred);
    for v in &inputs {
        let lhs = q_big.apply(&r.transfer.inclusion.apply(v));
        let rhs = r.transfer.inclusion.apply(&q_small.apply(v));
        assert_eq!(lhs, rhs, "chain map fails on {}", small.space().render(v));
    }
    let ternary: Vec<String> = r
        .brackets
        .iter()
        .filter(|s| s.arity == 3)
        .map(|s| format!("l3({}) = {} {}", s.inputs.join(","), s.coefficient, s.output))
        .collect();
    assert!(!ternary.is_empty());
    ternary.join("; ")
}

/// Criterion 7: `(ιi)_∂ = ι_∂ i_{D_∂}` on two-step composites.
fn composition() -> String {
    let shape = ComplexShape {
        min_degree: -2,
        max_degree: 2,
        max_dim: 2,
    };
    for seed in seeds(7, 20) {
        let inst = random_composite(&mut rng(seed), shape);
        assert!(validate_contraction(&inst.inner).is_ok(), "seed {seed}");
        assert!(validate_contraction(&inst.outer).is_ok(), "seed {seed}");
        assert!(
            composition_compatibility_check(&inst.outer, &inst.inner, &inst.delta, MAX_ITER).unwrap(),
            "seed {seed}"
        );
    }
    "20 composites".into()
}

/// Criterion 8: Jacobi tables pass the symmetric criterion, broken ones fail at
/// weight 3.
fn jacobi_criterion() -> String {
    let mut r = rng(8);
    for _ in 0..20 {
        let t = random_lie_table(&mut r);
        assert!(t.is_antisymmetric() && t.jacobi_witness().is_none());
        let q = encode_bilinear(&t, Encoding::Lie, 3).unwrap();
        assert!(is_codifferential(&q, Side::Symmetric).unwrap().is_ok());
    }
    for _ in 0..20 {
        let t = random_non_jacobi_table(&mut r);
        assert!(t.is_antisymmetric() && t.jacobi_witness().is_some());
        let q = encode_bilinear(&t, Encoding::Lie, 3).unwrap();
        let w = is_codifferential(&q, Side::Symmetric).unwrap().unwrap_err();
        assert!(w.input.split(" + ").all(|term| term.matches('⊗').count() == 2), "{w}");
    }
    "20 Lie tables, 20 broken tables".into()
}

fn main() {
    let criteria: [(&str, u64, fn() -> String); 8] = [
        ("1 contraction axioms", 10, contraction_axioms),
        ("2 tensor trick identity", 30, tensor_trick_identity),
        ("3 ordinary perturbation lemma", 30, ordinary_lemma),
        ("4 oracle equivalence", 60, oracle_equivalence),
        ("5 relative lemma on sl2", 5, relative_lemma),
        ("6 L-infinity transfer", 60, linfty_example),
        ("7 composition compatibility", 10, composition),
        ("8 Jacobi criterion", 10, jacobi_criterion),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) if elapsed <= Duration::from_secs(budget) => {
                println!("PASS criterion {name} ({:.2}s): {detail}", elapsed.as_secs_f64());
            }
            Ok(detail) => {
                failed += 1;
                println!(
                    "FAIL criterion {name}: took {:.2}s, budget {budget}s: {detail}",
                    elapsed.as_secs_f64()
                );
            }
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

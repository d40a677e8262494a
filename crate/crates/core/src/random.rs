//! Seeded random instances for property tests and benchmarks.
//!
//! Complexes are built in a normal form (acyclic pairs plus homology cells) and
//! then conjugated by a random automorphism, so the differential is dense while
//! its rank profile stays under control. Perturbations are built on direct sums
//! of "levels": the homotopy preserves the level, the perturbation strictly
//! lowers it, so local nilpotency holds by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtins::LinftyExample;
use crate::coalgebra::{extend_coalgebra_morphism, CoderivationSpec, TruncatedCoalgebra};
use crate::complex::DGModule;
use crate::contraction::{compose_contractions, direct_sum_contractions, homology_contraction, Contraction};
use crate::error::Result;
use crate::map::GradedMap;
use crate::scalar::{self, frac, int, Scalar};
use crate::space::{Basis, GradedSpace, SpaceRef};
use crate::symmetric::{sl2, BilinearTable};
use crate::vector::Vector;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero rational, usually an integer.
pub fn nonzero_scalar(rng: &mut SeededRng) -> Scalar {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3..=3);
    }
    if rng.gen_bool(0.2) {
        frac(n, rng.gen_range(2..=3))
    } else {
        int(n)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ComplexShape {
    pub min_degree: i32,
    pub max_degree: i32,
    pub max_dim: usize,
}

impl Default for ComplexShape {
    fn default() -> Self {
        ComplexShape {
            min_degree: -3,
            max_degree: 3,
            max_dim: 4,
        }
    }
}

/// A random degree-preserving automorphism and its inverse, as a product of
/// elementary operations.
pub fn random_automorphism(rng: &mut SeededRng, space: &SpaceRef, steps: usize) -> (GradedMap, GradedMap) {
    let mut g = GradedMap::identity(space);
    let mut g_inv = GradedMap::identity(space);
    let degrees: Vec<i32> = space.degrees().collect();
    if degrees.is_empty() {
        return (g, g_inv);
    }
    for _ in 0..steps {
        let deg = *degrees.choose(rng).expect("nonempty");
        let n = space.dim(deg);
        let i = rng.gen_range(0..n);
        let (e, e_inv) = if n > 1 && rng.gen_bool(0.8) {
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let c = nonzero_scalar(rng);
            let (bi, bj) = (Basis::new(deg, i), Basis::new(deg, j));
            let e = GradedMap::from_entries(space, space, 0, [(bj, bi, c.clone())]).expect("entry");
            (e.clone(), e.neg())
        } else {
            let c = nonzero_scalar(rng);
            let bi = Basis::new(deg, i);
            let e = GradedMap::from_entries(space, space, 0, [(bi, bi, &c - scalar::one())]).expect("entry");
            let e_inv = GradedMap::from_entries(space, space, 0, [(bi, bi, scalar::one() / &c - scalar::one())])
                .expect("entry");
            (e, e_inv)
        };
        let id = GradedMap::identity(space);
        g = id.add(&e).expect("shape").compose(&g).expect("shape");
        g_inv = g_inv.compose(&id.add(&e_inv).expect("shape")).expect("shape");
    }
    (g, g_inv)
}

/// A random complex whose labels are `{prefix}0, {prefix}1, …`.
pub fn random_complex(rng: &mut SeededRng, shape: ComplexShape, prefix: &str) -> DGModule {
    let degrees: Vec<i32> = (shape.min_degree..=shape.max_degree).collect();
    let dims: Vec<usize> = degrees.iter().map(|_| rng.gen_range(0..=shape.max_dim)).collect();
    // ranks[k] is the rank of d from degrees[k] to degrees[k + 1].
    let mut ranks = vec![0usize; degrees.len()];
    for k in 0..degrees.len().saturating_sub(1) {
        let used = if k == 0 { 0 } else { ranks[k - 1] };
        let avail = dims[k] - used;
        ranks[k] = rng.gen_range(0..=avail.min(dims[k + 1]));
    }
    let mut counter = 0;
    let mut components = Vec::new();
    for (k, &deg) in degrees.iter().enumerate() {
        if dims[k] == 0 {
            continue;
        }
        let labels: Vec<String> = (0..dims[k])
            .map(|_| {
                counter += 1;
                format!("{prefix}{}", counter - 1)
            })
            .collect();
        components.push((deg, labels));
    }
    let space = GradedSpace::new(components).expect("fresh labels");
    // In degrees[k] the first ranks[k-1] vectors are images and the next ranks[k]
    // vectors map onto the images in the next degree.
    let mut entries = Vec::new();
    for k in 0..degrees.len().saturating_sub(1) {
        let offset = if k == 0 { 0 } else { ranks[k - 1] };
        for i in 0..ranks[k] {
            entries.push((
                Basis::new(degrees[k], offset + i),
                Basis::new(degrees[k + 1], i),
                nonzero_scalar(rng),
            ));
        }
    }
    let d = GradedMap::from_entries(&space, &space, 1, entries).expect("normal form");
    let (g, g_inv) = random_automorphism(rng, &space, 3 * space.total_dim());
    let d = g.compose(&d).and_then(|m| m.compose(&g_inv)).expect("shape");
    DGModule::new(&space, d).expect("degree 1")
}

/// A sparse random map of the given degree.
pub fn random_map(rng: &mut SeededRng, source: &SpaceRef, target: &SpaceRef, degree: i32, density: f64) -> GradedMap {
    let mut entries = Vec::new();
    for s in source.basis() {
        let deg = s.degree + degree;
        for j in 0..target.dim(deg) {
            if rng.gen_bool(density) {
                entries.push((s, Basis::new(deg, j), nonzero_scalar(rng)));
            }
        }
    }
    GradedMap::from_entries(source, target, degree, entries).expect("degrees match")
}

/// A direct sum of contractions with the injections and projections of each
/// summand on the big side.
#[derive(Clone, Debug)]
pub struct Leveled {
    pub contraction: Contraction,
    pub inject: Vec<GradedMap>,
    pub project: Vec<GradedMap>,
}

pub fn fold_levels(levels: &[Contraction]) -> Leveled {
    let mut acc = levels[0].clone();
    let mut inject = vec![GradedMap::identity(&acc.big.space)];
    let mut project = vec![GradedMap::identity(&acc.big.space)];
    for c in &levels[1..] {
        let (sum, big, _) = direct_sum_contractions(&acc, c);
        inject = inject
            .iter()
            .map(|m| big.inject_left.compose(m).expect("shape"))
            .collect();
        inject.push(big.inject_right.clone());
        project = project
            .iter()
            .map(|m| m.compose(&big.project_left).expect("shape"))
            .collect();
        project.push(big.project_right.clone());
        acc = sum;
    }
    Leveled {
        contraction: acc,
        inject,
        project,
    }
}

/// `∂ = g(d + e)g⁻¹ − d`, where `g = 1 + u` with `u` strictly level-lowering and
/// `e = ι₀ φ π_top` sends the top level to the bottom one through homology.
/// `bottom_incl` and `top_proj` are chain maps between those levels and complexes
/// with zero differential.
fn level_perturbation(
    rng: &mut SeededRng,
    leveled: &Leveled,
    bottom_incl: &GradedMap,
    top_proj: &GradedMap,
) -> GradedMap {
    let big = &leveled.contraction.big;
    let n = leveled.inject.len();
    let mut u = GradedMap::zero(&big.space, &big.space, 0);
    for hi in 1..n {
        for lo in 0..hi {
            let r = random_map(
                rng,
                leveled.project[hi].target(),
                leveled.inject[lo].source(),
                0,
                0.4,
            );
            let term = leveled.inject[lo]
                .compose(&r)
                .and_then(|m| m.compose(&leveled.project[hi]))
                .expect("shape");
            u = u.add(&term).expect("shape");
        }
    }
    let id = GradedMap::identity(&big.space);
    let g = id.add(&u).expect("shape");
    let mut g_inv = id.clone();
    let mut power = id;
    loop {
        power = power.compose(&u).expect("shape").neg();
        if power.is_zero() {
            break;
        }
        g_inv = g_inv.add(&power).expect("shape");
    }
    let phi = random_map(rng, top_proj.target(), bottom_incl.source(), 1, 0.6);
    let e = leveled.inject[0]
        .compose(bottom_incl)
        .and_then(|m| m.compose(&phi))
        .and_then(|m| m.compose(top_proj))
        .and_then(|m| m.compose(&leveled.project[n - 1]))
        .expect("shape");
    let d = &big.differential;
    g.compose(&d.add(&e).expect("shape"))
        .and_then(|m| m.compose(&g_inv))
        .and_then(|m| m.sub(d))
        .expect("shape")
}

/// A contraction with a locally nilpotent perturbation of its big module.
#[derive(Clone, Debug)]
pub struct PerturbationInstance {
    pub contraction: Contraction,
    pub delta: GradedMap,
}

fn level_count(rng: &mut SeededRng) -> usize {
    rng.gen_range(2..=3)
}

pub fn random_perturbation(rng: &mut SeededRng, shape: ComplexShape) -> PerturbationInstance {
    let n = level_count(rng);
    let levels: Vec<Contraction> = (0..n)
        .map(|l| homology_contraction(&random_complex(rng, shape, &format!("n{l}_"))))
        .collect();
    let leveled = fold_levels(&levels);
    let delta = level_perturbation(rng, &leveled, &levels[0].incl, &levels[n - 1].proj);
    PerturbationInstance {
        contraction: leveled.contraction,
        delta,
    }
}

/// Two contractions `N ⇄ M` (`inner`) and `M ⇄ H` (`outer`) with a locally
/// nilpotent perturbation of `N`.
#[derive(Clone, Debug)]
pub struct CompositeInstance {
    pub outer: Contraction,
    pub inner: Contraction,
    pub delta: GradedMap,
}

pub fn random_composite(rng: &mut SeededRng, shape: ComplexShape) -> CompositeInstance {
    let n = level_count(rng);
    let mut inners = Vec::new();
    let mut outers = Vec::new();
    let mut totals = Vec::new();
    for l in 0..n {
        let p = homology_contraction(&random_complex(rng, shape, &format!("p{l}_")));
        let q = Contraction::identity(&random_complex(rng, shape, &format!("q{l}_")));
        let (inner, _, _) = direct_sum_contractions(&p, &q);
        let outer = homology_contraction(&inner.small);
        totals.push(compose_contractions(&outer, &inner).expect("chained"));
        inners.push(inner);
        outers.push(outer);
    }
    let inner = fold_levels(&inners);
    let outer = fold_levels(&outers).contraction;
    let delta = level_perturbation(rng, &inner, &totals[0].incl, &totals[n - 1].proj);
    let outer = Contraction::new(
        inner.contraction.small.clone(),
        outer.small,
        outer.incl,
        outer.proj,
        outer.homotopy,
    )
    .expect("same spaces");
    CompositeInstance {
        outer,
        inner: inner.contraction,
        delta,
    }
}

/// A shifted dg Lie algebra with central brackets and acyclic pairs `d s = t`,
/// conjugated by a random automorphism of the generators, with its homology
/// contraction.
pub fn random_linfty(rng: &mut SeededRng, max_weight: usize) -> Result<LinftyExample> {
    // Three odd generators are needed for a ternary bracket on distinct letters.
    let na = 3;
    let nst = rng.gen_range(1..=2);
    let nz = 1;
    let mut odd: Vec<String> = (0..na).map(|i| format!("a{i}")).collect();
    odd.extend((0..nst).map(|i| format!("t{i}")));
    let mut even: Vec<String> = (0..nst).map(|i| format!("s{i}")).collect();
    even.extend((0..nz).map(|i| format!("z{i}")));
    let v = GradedSpace::new(vec![(-2, even), (-1, odd)])?;
    let a = |i: usize| Basis::new(-1, i);
    let t = |i: usize| Basis::new(-1, na + i);
    let s = |i: usize| Basis::new(-2, i);
    let z = |i: usize| Basis::new(-2, nst + i);

    let amb = TruncatedCoalgebra::new(&v, max_weight)?;
    let mut terms = Vec::new();
    for i in 0..nst {
        terms.push((vec![s(i)], t(i), int(1)));
    }
    let half = frac(1, 2);
    // Graded symmetric: q(y x) = (-1)^{|x||y|} q(x y).
    let symmetric_pair = |x: Basis, y: Basis, out: Basis, c: Scalar, terms: &mut Vec<_>| {
        let eps = scalar::sign(x.is_odd() && y.is_odd());
        terms.push((vec![x, y], out, &c * &half));
        terms.push((vec![y, x], out, &c * &half * eps));
    };
    for i in 0..na {
        for j in (i + 1)..na {
            for k in 0..nst {
                if rng.gen_bool(0.7) {
                    symmetric_pair(a(i), a(j), t(k), nonzero_scalar(rng), &mut terms);
                }
            }
        }
        for k in 0..nst {
            for m in 0..nz {
                if rng.gen_bool(0.7) {
                    symmetric_pair(s(k), a(i), z(m), nonzero_scalar(rng), &mut terms);
                }
            }
        }
    }
    let q = CoderivationSpec::from_terms(&amb, 1, terms)?;
    let (g, g_inv) = random_automorphism(rng, &v, 2 * v.total_dim());
    let g_inv_words = extend_coalgebra_morphism(&g_inv.compose(&amb.projection_map())?, &amb, &amb)?;
    let q = CoderivationSpec::new(&amb, g.compose(q.corestriction())?.compose(&g_inv_words)?)?;
    let m = DGModule::new(&v, q.linear_part())?;
    Ok(LinftyExample {
        contraction: homology_contraction(&m),
        codifferential: q,
    })
}

/// A random Lie algebra: 2-step nilpotent, sl₂, or their direct sum, in a random
/// basis.
pub fn random_lie_table(rng: &mut SeededRng) -> BilinearTable {
    let kind = rng.gen_range(0..3);
    let base = match kind {
        0 => two_step_nilpotent(rng),
        1 => sl2(),
        _ => direct_sum_tables(&sl2(), &two_step_nilpotent(rng)),
    };
    conjugate_table(rng, &base)
}

fn two_step_nilpotent(rng: &mut SeededRng) -> BilinearTable {
    let nx = rng.gen_range(2..=3);
    let nz = rng.gen_range(1..=2);
    let labels: Vec<String> = (0..nx).map(|i| format!("x{i}")).chain((0..nz).map(|i| format!("z{i}"))).collect();
    let space = GradedSpace::new(vec![(0, labels)]).expect("labels");
    let mut t = BilinearTable::new(&space).expect("degree 0");
    for i in 0..nx {
        for j in (i + 1)..nx {
            let mut v = Vector::new();
            for k in 0..nz {
                if rng.gen_bool(0.7) {
                    v.add_term(Basis::new(0, nx + k), nonzero_scalar(rng));
                }
            }
            t.set(j, i, v.scaled(&int(-1)));
            t.set(i, j, v);
        }
    }
    t
}

fn direct_sum_tables(a: &BilinearTable, b: &BilinearTable) -> BilinearTable {
    let (na, nb) = (a.dim(), b.dim());
    let labels: Vec<String> = (0..na + nb).map(|i| format!("e{i}")).collect();
    let space = GradedSpace::new(vec![(0, labels)]).expect("labels");
    let mut t = BilinearTable::new(&space).expect("degree 0");
    for (&(i, j), v) in a.entries() {
        t.set(i, j, v.clone());
    }
    for (&(i, j), v) in b.entries() {
        let shifted: Vector = v.iter().map(|(k, c)| (Basis::new(0, na + k.index), c.clone())).collect();
        t.set(na + i, na + j, shifted);
    }
    t
}

/// `[x, y]' = g[g⁻¹x, g⁻¹y]`.
fn conjugate_table(rng: &mut SeededRng, table: &BilinearTable) -> BilinearTable {
    let space = table.space().clone();
    let (g, g_inv) = random_automorphism(rng, &space, 2 * space.total_dim());
    let mut t = BilinearTable::new(&space).expect("degree 0");
    let n = table.dim();
    for i in 0..n {
        for j in 0..n {
            let x = g_inv.image(Basis::new(0, i));
            let y = g_inv.image(Basis::new(0, j));
            let v = g.apply(&table.apply(&x, &y));
            if !v.is_zero() {
                t.set(i, j, v);
            }
        }
    }
    t
}

/// A random Lie table with one antisymmetric pair of structure constants
/// changed so that the Jacobi identity fails.
pub fn random_non_jacobi_table(rng: &mut SeededRng) -> BilinearTable {
    loop {
        let mut t = random_lie_table(rng);
        let n = t.dim();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.gen_range(0..n);
        let c = nonzero_scalar(rng);
        let mut v = t.product(i, j);
        v.add_term(Basis::new(0, k), c);
        t.set(j, i, v.scaled(&int(-1)));
        t.set(i, j, v);
        if t.jacobi_witness().is_some() {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::check_complex;
    use crate::contraction::validate_contraction;

    #[test]
    fn random_complexes_square_to_zero() {
        let mut r = rng(1);
        for _ in 0..20 {
            let m = random_complex(&mut r, ComplexShape::default(), "x");
            assert!(check_complex(&m).is_ok());
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = random_perturbation(&mut rng(7), ComplexShape::default());
        let b = random_perturbation(&mut rng(7), ComplexShape::default());
        assert_eq!(a.delta, b.delta);
        assert!(validate_contraction(&a.contraction).is_ok());
    }

    #[test]
    fn non_jacobi_tables_are_antisymmetric() {
        let mut r = rng(3);
        for _ in 0..5 {
            let t = random_non_jacobi_table(&mut r);
            assert!(t.is_antisymmetric());
            assert!(random_lie_table(&mut r).jacobi_witness().is_none());
        }
    }
}

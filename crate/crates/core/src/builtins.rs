//! Small built-in examples.

use crate::coalgebra::{CoderivationSpec, TruncatedCoalgebra};
use crate::complex::DGModule;
use crate::contraction::{homology_contraction, Contraction};
use crate::error::Result;
use crate::map::GradedMap;
use crate::scalar::{frac, int};
use crate::space::{Basis, GradedSpace, SpaceRef};
use crate::symmetric::{encode_bilinear, sl2, Encoding};

/// A contraction of the generators together with a codifferential on
/// `T̄_{≤W}` of the big side.
#[derive(Clone, Debug)]
pub struct LinftyExample {
    pub contraction: Contraction,
    pub codifferential: CoderivationSpec,
}

pub const NAMES: &[&str] = &["sl2", "dgla-acyclic"];

pub fn by_name(name: &str, max_weight: usize) -> Option<Result<LinftyExample>> {
    match name {
        "sl2" => Some(sl2_example(max_weight)),
        "dgla-acyclic" => Some(dgla_acyclic(max_weight)),
        _ => None,
    }
}

/// `sl₂[1]` with zero differential, its Lie codifferential, and the identity
/// contraction.
pub fn sl2_example(max_weight: usize) -> Result<LinftyExample> {
    let q = encode_bilinear(&sl2(), Encoding::Lie, max_weight)?;
    let v = q.ambient().generators().clone();
    let m = DGModule::trivial(&v);
    Ok(LinftyExample {
        contraction: Contraction::identity(&m),
        codifferential: q,
    })
}

fn basis(space: &SpaceRef, label: &str) -> Basis {
    space.find(label).expect("builtin label")
}

/// A shifted dg Lie algebra with an acyclic pair `d s = t`. Generators `a, b, c, t`
/// in degree −1 and `s, z` in degree −2, with `[a,b] = t` and `[s,c] = z`.
/// Contracting away `s, t` leaves `a, b, c, z` with a nonzero ternary bracket.
pub fn dgla_acyclic(max_weight: usize) -> Result<LinftyExample> {
    let v = GradedSpace::from_labels(&[(-2, &["s", "z"]), (-1, &["a", "b", "c", "t"])])?;
    let b = |l: &str| basis(&v, l);
    let d = GradedMap::from_entries(&v, &v, 1, [(b("s"), b("t"), int(1))])?;
    let m = DGModule::new(&v, d)?;
    let amb = TruncatedCoalgebra::new(&v, max_weight.max(3))?;
    let half = frac(1, 2);
    let q = CoderivationSpec::from_terms(
        &amb,
        1,
        [
            (vec![b("s")], b("t"), int(1)),
            (vec![b("a"), b("b")], b("t"), half.clone()),
            (vec![b("b"), b("a")], b("t"), -half.clone()),
            (vec![b("s"), b("c")], b("z"), half.clone()),
            (vec![b("c"), b("s")], b("z"), half),
        ],
    )?;
    Ok(LinftyExample {
        contraction: homology_contraction(&m),
        codifferential: q,
    })
}

use std::collections::HashMap;

use serde::Serialize;

use crate::coalgebra::{
    check_coalgebra_morphism, domain_inputs, extend_coderivation, morphism_image, tensor_trick,
    CoalgebraContraction, CoderivationSpec, Domain, TruncatedCoalgebra,
};
use crate::complex::{ValidationReport, Witness};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::exec;
use crate::map::GradedMap;
use crate::scalar;
use crate::space::{same_space, SpaceRef, Word};
use crate::subspace::Subspace;
use crate::symmetric::{self, is_codifferential, Side};
use crate::vector::Vector;

use super::{assert_checks, check, relative_transfer, CheckOutcome, Perturbation, TransferResult};

/// One coefficient of a corestriction family: `f(S(x_1 … x_n)) ∋ c · y`, where
/// `S(x_1 … x_n)` is the orbit sum of the sorted word.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StructureConstant {
    pub arity: usize,
    pub inputs: Vec<String>,
    pub output: String,
    pub coefficient: String,
}

#[derive(Clone, Debug)]
pub struct LinftyResult {
    pub coalgebra: CoalgebraContraction,
    pub transfer: TransferResult,
    /// Corestriction of `d_W + D_∂` on `T̄(W)`.
    pub transferred: CoderivationSpec,
    /// `p ι_∂: T̄(W) -> V`.
    pub inclusion_family: GradedMap,
    /// The transferred brackets `λ_n` on the orbit-sum basis of `S̄(W)`.
    pub brackets: Vec<StructureConstant>,
    /// `p ι_∂` on the orbit-sum basis of `S̄(W)`.
    pub inclusion_constants: Vec<StructureConstant>,
}

impl LinftyResult {
    /// Whether some bracket of the given arity is nonzero.
    pub fn has_arity(&self, n: usize) -> bool {
        self.brackets.iter().any(|s| s.arity == n)
    }
}

/// Lists `f` on every orbit sum of `source`, in lexicographic order.
pub fn structure_constants(f: &GradedMap, source: &TruncatedCoalgebra, target: &SpaceRef) -> Vec<StructureConstant> {
    let gens = source.generators();
    let mut out = Vec::new();
    for v in symmetric::invariant_vectors(source.space()) {
        let (lead, _) = v.leading().expect("nonzero orbit sum");
        let word = source.word(lead);
        let inputs: Vec<String> = word.iter().map(|&b| gens.label(b).to_string()).collect();
        for (y, c) in f.apply(&v).iter() {
            out.push(StructureConstant {
                arity: word.len(),
                inputs: inputs.clone(),
                output: target.label(*y).to_string(),
                coefficient: scalar::format(c),
            });
        }
    }
    out.sort();
    out
}

/// Homotopy transfer of the codifferential with corestriction `q` on `S̄(V)`
/// along a contraction `(W ⇄ V, k)` of the generators. Runs the relative lemma on
/// the tensor-trick contraction with `A = S̄(V)` and `A ∩ M = S̄(W)`, then
/// asserts that the transferred family is a codifferential on `S̄(W)`, that
/// `D_∂` is the coderivation of its corestriction, that `ι_∂` is a coalgebra
/// morphism, and that the recursion for `p ι_∂` agrees with the series.
pub fn linfty_transfer(c: &Contraction, q: &CoderivationSpec, max_iter: usize) -> Result<LinftyResult> {
    let amb = q.ambient();
    if !same_space(amb.generators(), &c.big.space) {
        return Err(Error::SpaceMismatch("coderivation is not on the contraction's generators".into()));
    }
    if let Err(w) = is_codifferential(q, Side::Symmetric)? {
        return Err(Error::NotACodifferential(w));
    }
    let q1 = q.linear_part();
    if let Some((b, x, y)) = q1.difference_witness(&c.big.differential) {
        return Err(Error::PreconditionFailed {
            condition: "linear part of q is the differential of the generators".into(),
            witness: Witness::basis(&c.big.space, b, &c.big.space, &(&x - &y)),
        });
    }
    let cc = tensor_trick(c, amb.max_weight())?;
    let big_q = extend_coderivation(q).with_spaces(cc.big.space(), cc.big.space())?;
    let delta = big_q.sub(&cc.contraction.big.differential)?;
    let pert = Perturbation::over(
        &cc.contraction.big,
        delta,
        Subspace::Symmetric(cc.big.space().clone()),
    )?;
    let small_part = Subspace::Symmetric(cc.small.space().clone());
    let mut transfer = relative_transfer(&cc.contraction, &pert, &small_part, max_iter)?;

    let small_d = transfer.small_differential(&cc.contraction);
    let lambda = CoderivationSpec::new(&cc.small, cc.small.projection_map().compose(&small_d)?)?;
    let mut checks = Vec::new();
    checks.push(CheckOutcome::from_witness(
        check::TRANSFERRED_CODIFFERENTIAL,
        is_codifferential(&lambda, Side::Symmetric)?.err(),
    ));
    let mut r = ValidationReport::default();
    r.expect_equal(check::TRANSFERRED_CODERIVATION, &extend_coderivation(&lambda), &small_d);
    checks.push(CheckOutcome::from_report(check::TRANSFERRED_CODERIVATION, r));
    checks.push(CheckOutcome::from_report(
        check::INCLUSION_MORPHISM,
        check_coalgebra_morphism(
            check::INCLUSION_MORPHISM,
            &transfer.inclusion,
            &cc.small,
            &cc.big,
            &domain_inputs(&cc.small, Domain::Words),
        ),
    ));
    let family = cc.big.projection_map().compose(&transfer.inclusion)?;
    let recursive = recursive_inclusion(c, q)?;
    let mut r = ValidationReport::default();
    r.expect_equal(check::RECURSION_AGREES, &recursive, &family);
    checks.push(CheckOutcome::from_report(check::RECURSION_AGREES, r));
    assert_checks(&checks)?;
    transfer.checks.extend(checks);

    let brackets = structure_constants(lambda.corestriction(), &cc.small, cc.small.generators());
    let inclusion_constants = structure_constants(&family, &cc.small, cc.big.generators());
    Ok(LinftyResult {
        coalgebra: cc,
        transfer,
        transferred: lambda,
        inclusion_family: family,
        brackets,
        inclusion_constants,
    })
}

/// `p ι_∂` from the recursion `p ι_∂ = p ι + k p ∂ ι_∂`, where `ι_∂` is the
/// coalgebra morphism with corestriction `p ι_∂`. Since `∂` strictly lowers
/// weight, the value on weight `n` only needs the values on weights `< n`.
pub fn recursive_inclusion(c: &Contraction, q: &CoderivationSpec) -> Result<GradedMap> {
    let amb = q.ambient();
    if !same_space(amb.generators(), &c.big.space) {
        return Err(Error::SpaceMismatch("coderivation is not on the contraction's generators".into()));
    }
    let small = TruncatedCoalgebra::new(&c.small.space, amb.max_weight())?;
    let mut values: HashMap<Word, Vector> = HashMap::new();
    for n in 1..=amb.max_weight() {
        let words = small.words_of_weight(n);
        let images = exec::map_indexed(&words, |&b| {
            let w = small.word(b);
            if n == 1 {
                return c.incl.image(w[0]);
            }
            let lower = morphism_image(
                w,
                |block| {
                    if block.len() == n {
                        Vector::new()
                    } else {
                        values[block].clone()
                    }
                },
                amb,
            );
            let mut p_delta = Vector::new();
            for (u, cu) in lower.iter() {
                if amb.weight(*u) >= 2 {
                    p_delta.add_scaled(&q.corestriction().image(*u), cu);
                }
            }
            c.homotopy.apply(&p_delta)
        });
        for (b, v) in words.into_iter().zip(images) {
            values.insert(small.word(b).clone(), v);
        }
    }
    Ok(GradedMap::from_fn(small.space(), amb.generators(), 0, |b| values[small.word(b)].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{dgla_acyclic, sl2_example};

    #[test]
    fn identity_contraction_transfers_sl2_unchanged() {
        let ex = sl2_example(3).unwrap();
        let r = linfty_transfer(&ex.contraction, &ex.codifferential, 3).unwrap();
        assert!(r.transfer.transferred.sub(&r.transfer.transferred).unwrap().is_zero());
        assert!(r.has_arity(2));
        assert!(!r.has_arity(3));
        let brackets: Vec<_> = r
            .brackets
            .iter()
            .map(|s| format!("{}->{}:{}", s.inputs.join(","), s.output, s.coefficient))
            .collect();
        assert!(brackets.contains(&"A,B->H:1".to_string()), "{brackets:?}");
    }

    #[test]
    fn acyclic_pair_produces_ternary_bracket() {
        let ex = dgla_acyclic(3).unwrap();
        let r = linfty_transfer(&ex.contraction, &ex.codifferential, 3).unwrap();
        // [a,b] = t projects to zero, so only the ternary bracket survives.
        assert!(!r.has_arity(2));
        assert!(r.has_arity(3), "{:?}", r.brackets);
        assert!(r.brackets.iter().all(|s| s.arity == 3 && s.output == "z"));
    }

    #[test]
    fn non_codifferential_is_rejected() {
        let ex = dgla_acyclic(3).unwrap();
        let amb = ex.codifferential.ambient();
        let v = amb.generators();
        let (a, c, t) = (v.find("a").unwrap(), v.find("c").unwrap(), v.find("t").unwrap());
        let extra = CoderivationSpec::from_terms(amb, 1, [(vec![a, c], t, scalar::int(1)), (vec![c, a], t, scalar::int(-1))]).unwrap();
        let q = ex.codifferential.add(&extra).unwrap();
        let q = q.add(&CoderivationSpec::from_terms(amb, 1, [(vec![t, c], t, scalar::int(1)), (vec![c, t], t, scalar::int(-1))]).unwrap()).unwrap();
        let err = linfty_transfer(&ex.contraction, &q, 3).unwrap_err();
        assert!(matches!(err, Error::NotACodifferential(_)), "{err:?}");
    }
}

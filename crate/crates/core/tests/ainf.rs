use std::collections::BTreeMap;

use proptest::prelude::*;
use rectify_core::ainf::*;
use rectify_core::catalog;
use rectify_core::corpus::{dg_corpus, CorpusParams};
use rectify_core::exactlin::{FieldSpec, Scalar};

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn f5() -> FieldSpec {
    FieldSpec::prime(5)
}

fn sum(field: FieldSpec, terms: &[(i64, LinComb)]) -> LinComb {
    let mut acc = LinComb::new();
    for (c, v) in terms {
        for (g, x) in v {
            let cur = acc.remove(g).unwrap_or_else(|| field.zero());
            let next = field.add(&cur, &field.mul(&field.from_i64(*c), x));
            if !next.is_zero() {
                acc.insert(*g, next);
            }
        }
    }
    acc
}

fn lin_op(cat: &AInfCategory, args: &[LinComb]) -> LinComb {
    multilinear(cat.field(), args, |x| op(cat, x)).unwrap()
}

/// Direct DG axioms on generators: d² = 0, Leibniz, associativity.
fn dg_axioms_hold(cat: &AInfCategory) -> bool {
    let field = cat.field();
    let one = field.one();
    let gens = cat.generators();
    let e = |g: usize| single(g, one.clone());
    for g in 0..gens.len() {
        let dg = lin_op(cat, &[e(g)]);
        if !lin_op(cat, &[dg]).is_empty() {
            return false;
        }
    }
    for b in 0..gens.len() {
        for a in (0..gens.len()).filter(|&a| gens[a].target == gens[b].source) {
            let lhs = lin_op(cat, &[lin_op(cat, &[e(b), e(a)])]);
            let sign = if gens[b].degree.rem_euclid(2) == 1 { -1 } else { 1 };
            let rhs = sum(
                field,
                &[
                    (1, lin_op(cat, &[lin_op(cat, &[e(b)]), e(a)])),
                    (sign, lin_op(cat, &[e(b), lin_op(cat, &[e(a)])])),
                ],
            );
            if lhs != rhs {
                return false;
            }
            for c in (0..gens.len()).filter(|&c| gens[c].source == gens[b].target) {
                let l = lin_op(cat, &[lin_op(cat, &[e(c), e(b)]), e(a)]);
                let r = lin_op(cat, &[e(c), lin_op(cat, &[e(b), e(a)])]);
                if l != r {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn dg_corpus_satisfies_relations_and_direct_axioms() {
    for cat in dg_corpus(f5(), 7, 20, &CorpusParams::default()) {
        assert!(cat.is_dg());
        assert!(dg_axioms_hold(&cat));
        let report = check_ainf_relations(&cat, 4).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert!(include_dg(&cat).is_ok());
    }
}

#[test]
fn broken_leibniz_is_caught_by_both() {
    // d(x·x) = 0 but d(x)·x − x·d(x) = y·x = z.
    let cat = AInfCategory::builder(q())
        .object("X")
        .morphism("x", "X", "X", 1)
        .morphism("y", "X", "X", 2)
        .morphism("z", "X", "X", 3)
        .op_i(&["x"], &[("y", 1)])
        .op_i(&["y", "x"], &[("z", 1)])
        .build()
        .unwrap();
    assert!(!dg_axioms_hold(&cat));
    assert!(!check_ainf_relations(&cat, 3).unwrap().holds());
}

#[test]
fn non_associative_triple_is_the_only_violation() {
    let cat = catalog::non_associative(q());
    let report = check_ainf_relations(&cat, 3).unwrap();
    assert_eq!(report.violations.len(), 1);
    let v = &report.violations[0];
    assert_eq!(v.arity, 3);
    assert_eq!(v.tuple, ["h", "g", "f"]);
    assert_eq!(v.value, vec![("hgf".to_string(), "1".to_string())]);
}

#[test]
fn m3_example_holds_and_is_not_dg() {
    let a = catalog::m3_example(q());
    assert!(check_ainf_relations(&a, 6).unwrap().holds());
    assert!(!a.is_dg());
    assert_eq!(include_dg(&a).unwrap_err().to_string(), "not a DG category: m_3 nonzero");
}

#[test]
fn quasi_equivalence_examples() {
    let k = catalog::point(q());
    let id = AInfFunctor::identity(&k);
    assert_eq!(is_quasi_equivalence(&k, &k, &id, None).unwrap().verdict, Verdict::True);

    let ext = catalog::contractible_extension(q());
    let incl = AInfFunctor::builder(&k, &ext).object("X", "X").build().unwrap();
    let cert = is_quasi_equivalence(&k, &ext, &incl, None).unwrap();
    assert_eq!(cert.verdict, Verdict::True);
    assert!(cert.hom_pairs.iter().all(|p| p.quasi_iso));

    let pair = catalog::disjoint_pair(q());
    let incl = AInfFunctor::builder(&k, &pair).object("X", "X").build().unwrap();
    let cert = is_quasi_equivalence(&k, &pair, &incl, None).unwrap();
    assert_eq!(cert.verdict, Verdict::False);
    assert_eq!(
        cert.essential_surjectivity[1],
        EssentialWitness::Missing { object: "Y".into(), message: "no H⁰-isomorph of Y in image".into() }
    );
}

#[test]
fn essential_surjectivity_finds_an_inverse_pair() {
    for field in [q(), f5()] {
        let mu = catalog::matrix_units(field);
        let k = catalog::point(field);
        let incl = AInfFunctor::builder(&k, &mu).object("X", "X").build().unwrap();
        let cert = is_quasi_equivalence(&k, &mu, &incl, None).unwrap();
        assert_eq!(cert.verdict, Verdict::True, "{cert:?}");
        match &cert.essential_surjectivity[1] {
            EssentialWitness::Isomorphism { preimage, u, v, .. } => {
                assert_eq!(preimage, "X");
                assert_eq!(u, &vec![("[psi]".to_string(), "1".to_string())]);
                assert_eq!(v, &vec![("[phi]".to_string(), "1".to_string())]);
            }
            other => panic!("expected an isomorphism witness, got {other:?}"),
        }
    }
}

#[test]
fn iso_search_respects_scalars() {
    // ψ∘φ = 2·id: φ is still invertible, with inverse ψ/2.
    let field = q();
    let c = AInfCategory::builder(field)
        .objects(&["X", "Z"])
        .morphism("phi", "X", "Z", 0)
        .morphism("psi", "Z", "X", 0)
        .op_i(&["psi", "phi"], &[("id_X", 2)])
        .op_i(&["phi", "psi"], &[("id_Z", 2)])
        .build()
        .unwrap();
    let h0 = h0_category(&c).unwrap();
    match find_isomorphism(h0.linear(), 0, 1) {
        IsoSearch::Found { u, v } => {
            let uv = h0.linear().compose(&v, &u).unwrap();
            assert_eq!(&uv, h0.linear().unit(0));
        }
        other => panic!("{other:?}"),
    }
    // Over 𝔽_2 the same data is not an isomorphism.
    let c2 = AInfCategory::builder(FieldSpec::prime(2))
        .objects(&["X", "Z"])
        .morphism("phi", "X", "Z", 0)
        .morphism("psi", "Z", "X", 0)
        .op_i(&["psi", "phi"], &[("id_X", 2)])
        .op_i(&["phi", "psi"], &[("id_Z", 2)])
        .build()
        .unwrap();
    let h0 = h0_category(&c2).unwrap();
    assert_eq!(find_isomorphism(h0.linear(), 0, 1), IsoSearch::NotIsomorphic);
}

#[test]
fn h_functor_examples() {
    let ext = catalog::contractible_extension(q());
    let k = catalog::point(q());
    // Quotient killing u and v.
    let quot = AInfFunctor::builder(&ext, &k).object("X", "X").build().unwrap();
    assert!(check_functor_relations(&ext, &k, &quot, 3).unwrap().holds());
    let hf = h_functor(&ext, &k, &quot).unwrap();
    assert_eq!(hf.images, vec![single(0, q().one())]);
    assert_eq!(is_quasi_equivalence(&ext, &k, &quot, None).unwrap().verdict, Verdict::True);

    let id = AInfFunctor::identity(&ext);
    let hid = h_functor(&ext, &ext, &id).unwrap();
    let h = cohomology_category(&ext, None).unwrap();
    let n = h.linear().classes().len();
    assert_eq!(hid.images, (0..n).map(|i| single(i, q().one())).collect::<Vec<_>>());
}

#[test]
fn functor_relation_examples() {
    let a = catalog::a2_path(q());
    let id = AInfFunctor::identity(&a);
    assert!(check_functor_relations(&a, &a, &id, 6).unwrap().holds());
    let m3 = catalog::m3_example(q());
    let id = AInfFunctor::identity(&m3);
    assert!(check_functor_relations(&m3, &m3, &id, 6).unwrap().holds());
}

#[test]
fn nonstrict_functor_relations() {
    // The identity on underlying graded data, into the same data with m_3 = 0.
    let m3 = catalog::m3_example(q());
    let formal = AInfCategory::builder(q()).object("X").morphism("x", "X", "X", 1).morphism("y", "X", "X", 2).build().unwrap();
    let f = AInfFunctor::builder(&m3, &formal)
        .object("X", "X")
        .component_i(&["x"], &[("x", 1)])
        .component_i(&["y"], &[("y", 1)])
        .build()
        .unwrap();
    let report = check_functor_relations(&m3, &formal, &f, 3).unwrap();
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].tuple, ["x", "x", "x"]);
}

#[test]
fn functor_composition_agrees_on_f1() {
    let ext = catalog::contractible_extension(q());
    let k = catalog::point(q());
    let incl = AInfFunctor::builder(&k, &ext).object("X", "X").build().unwrap();
    let quot = AInfFunctor::builder(&ext, &k).object("X", "X").build().unwrap();
    let comp = AInfFunctor::compose(&incl, &quot, &k, &ext, &k).unwrap();
    assert_eq!(comp, AInfFunctor::identity(&k));
    assert_eq!(is_quasi_equivalence(&k, &k, &comp, None).unwrap().verdict, Verdict::True);
}

#[test]
fn empty_category_operations() {
    let e = AInfCategory::builder(q()).build().unwrap();
    assert!(check_ainf_relations(&e, 6).unwrap().holds());
    let h = cohomology_category(&e, None).unwrap();
    assert!(h.linear().classes().is_empty());
    let id = AInfFunctor::identity(&e);
    let cert = is_quasi_equivalence(&e, &e, &id, None).unwrap();
    assert_eq!(cert.verdict, Verdict::True);
    assert!(cert.hom_pairs.is_empty());
}

#[test]
fn cohomology_of_corpus_is_associative() {
    for cat in dg_corpus(q(), 11, 15, &CorpusParams::default()) {
        let h = cohomology_category(&cat, None).unwrap();
        h.linear().check_axioms().unwrap();
        for o in 0..cat.objects().len() {
            let dims: BTreeMap<i32, usize> = h.linear().hom_dims(o, o);
            assert!(dims.get(&0).copied().unwrap_or(0) >= 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn identity_is_a_quasi_equivalence(seed in any::<u64>()) {
        let cat = dg_corpus(f5(), seed, 1, &CorpusParams::default()).pop().unwrap();
        let id = AInfFunctor::identity(&cat);
        prop_assert!(check_functor_relations(&cat, &cat, &id, 3).unwrap().holds());
        prop_assert_eq!(is_quasi_equivalence(&cat, &cat, &id, None).unwrap().verdict, Verdict::True);
    }

    #[test]
    fn composite_of_quasi_equivalences(seed in any::<u64>()) {
        let field = f5();
        let cat = dg_corpus(field, seed, 1, &CorpusParams::default()).pop().unwrap();
        let id = AInfFunctor::identity(&cat);
        let twice = AInfFunctor::compose(&id, &id, &cat, &cat, &cat).unwrap();
        prop_assert_eq!(&twice, &id);
        let cert = is_quasi_equivalence(&cat, &cat, &twice, None).unwrap();
        prop_assert_eq!(cert.verdict, Verdict::True);
    }
}

#[test]
fn scalars_render_canonically() {
    let f = q();
    let half: Scalar = f.parse("2/4").unwrap();
    assert_eq!(half.to_string(), "1/2");
}

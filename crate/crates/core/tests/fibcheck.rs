use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rectify_core::ainf::*;
use rectify_core::catalog;
use rectify_core::corpus::{dg_corpus, CorpusParams};
use rectify_core::exactlin::{FieldSpec, Scalar};
use rectify_core::fibcheck::*;
use rectify_core::relcat::{examples as rel, random_galois_adjunction, FiniteRelativeCategory, RelativeFunctor};

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn identity_is_fibration<C: AInfLike>(c: &C) {
    let v = is_fibration(c, c, &AInfFunctor::identity(c)).unwrap();
    assert_eq!(v.verdict, Verdict::True, "{v:?}");
}

#[test]
fn identity_on_catalog_and_corpus() {
    for name in catalog::NAMES {
        let c = catalog::by_name(name, q()).unwrap();
        if check_ainf_relations(&c, 4.min(c.arity_bound())).unwrap().holds() {
            identity_is_fibration(&c);
        }
    }
    for c in dg_corpus(FieldSpec::prime(5), 9, 20, &CorpusParams::default()) {
        identity_is_fibration(&c);
    }
}

#[test]
fn non_surjective_counterexample() {
    let (a, b, f) = examples::non_surjective(q());
    let v = is_fibration(&a, &b, &f).unwrap();
    assert_eq!(v.verdict, Verdict::False);
    assert_eq!(v.surjectivity_failures, vec![SurjectivityFailure { source: "X".into(), target: "X".into(), degree: 1 }]);
    assert!(v.isofibration_failures.is_empty());
    assert_eq!(is_acyclic_fibration(&a, &b, &f).unwrap(), Verdict::False);
}

#[test]
fn missing_lift_counterexample() {
    for field in [q(), FieldSpec::prime(2)] {
        let (a, b, f) = examples::missing_lift(field);
        let v = is_fibration(&a, &b, &f).unwrap();
        assert_eq!(v.verdict, Verdict::False);
        assert!(v.surjectivity_failures.is_empty());
        assert_eq!(
            v.isofibration_failures,
            vec![LiftFailure { source_object: "X".into(), target_object: "Z".into(), iso: vec![("[phi]".into(), "1".into())] }]
        );
    }
}

/// `u ↦ 0` from `X` with `d u = v` onto `k`: onto in degree 0, and `H⁰` of
/// the source is spanned by the unit.
#[test]
fn contractible_quotient_is_acyclic_fibration() {
    let a = catalog::contractible_extension(q());
    let k = catalog::point(q());
    let f = AInfFunctor::builder(&a, &k).object("X", "X").build().unwrap();
    assert_eq!(is_fibration(&a, &k, &f).unwrap().verdict, Verdict::True);
    assert_eq!(is_acyclic_fibration(&a, &k, &f).unwrap(), Verdict::True);
    // Composing with the identity of k keeps both conditions.
    let g = AInfFunctor::identity(&k);
    let gf = AInfFunctor::compose(&f, &g, &a, &k, &k).unwrap();
    assert_eq!(is_fibration(&a, &k, &gf).unwrap().verdict, Verdict::True);
}

#[test]
fn invalid_functor_is_rejected() {
    let a = catalog::contractible_extension(q());
    let f = AInfFunctor::builder(&a, &a).object("X", "X").component_i(&["u"], &[("u", 1)]).build().unwrap();
    assert!(matches!(is_fibration(&a, &a, &f), Err(rectify_core::Error::Precondition(_)) | Err(rectify_core::Error::NotChainMap { .. })));
}

#[test]
fn finite_isofibration_examples() {
    let iso = FiniteRelativeCategory::minimal(rel::walking_isomorphism());
    assert_eq!(is_isofibration_finite(&RelativeFunctor::identity(&iso)).unwrap().verdict, Verdict::True);

    let point = FiniteRelativeCategory::minimal(rel::terminal());
    let include = RelativeFunctor::from_names(&point, &iso, &[("*", "a")], &[]).unwrap();
    let report = is_isofibration_finite(&include).unwrap();
    assert_eq!(report.verdict, Verdict::False);
    assert_eq!(report.failures.iter().map(|f| f.target_object.as_str()).collect::<Vec<_>>(), vec!["b"]);

    let collapse = RelativeFunctor::from_names(&iso, &point, &[("a", "*"), ("b", "*")], &[("u", "id_*"), ("v", "id_*")]).unwrap();
    assert_eq!(is_isofibration_finite(&collapse).unwrap().verdict, Verdict::True);
}

/// Functors that are onto objects and full lift every isomorphism.
#[test]
fn surjective_full_functors_are_isofibrations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for _ in 0..200 {
        let d = random_galois_adjunction(&mut rng, 3);
        let f = &d.left;
        let (s, t) = (f.source.cat(), f.target.cat());
        let onto = (0..t.objects().len()).all(|y| f.object_map.contains(&y));
        let full = (0..s.objects().len()).all(|x| {
            (0..s.objects().len()).all(|y| {
                t.hom(f.object_map[x], f.object_map[y]).all(|m| s.hom(x, y).any(|n| f.morphism_map[n] == m))
            })
        });
        if onto && full {
            checked += 1;
            assert_eq!(is_isofibration_finite(f).unwrap().verdict, Verdict::True);
        }
    }
    assert!(checked >= 5, "{checked}");
}

/// A copy of `a` with every non-unit basis element `g` rescaled to `g' = g/λ_g`,
/// and the isomorphism `g ↦ λ_g g'`.
fn rescaled_copy(a: &AInfCategory, rng: &mut ChaCha8Rng) -> (AInfCategory, AInfFunctor) {
    let field = a.field();
    let p = field.characteristic() as i64;
    let gens = a.generators();
    let lambda: Vec<Scalar> =
        gens.iter().map(|g| if g.is_unit { field.one() } else { field.from_i64(rng.gen_range(1..p)) }).collect();
    let prime = |g: usize| if gens[g].is_unit { gens[g].name.clone() } else { format!("{}'", gens[g].name) };
    let mut b = AInfCategory::builder(field).arity_bound(a.arity_bound());
    for o in a.objects() {
        b = b.object(o);
    }
    for (i, g) in gens.iter().enumerate().filter(|(_, g)| !g.is_unit) {
        b = b.morphism(&prime(i), &a.objects()[g.source], &a.objects()[g.target], g.degree);
    }
    for (inputs, out) in a.ops() {
        let denom = inputs.iter().fold(field.one(), |acc, &g| field.mul(&acc, &lambda[g]));
        let names: Vec<String> = inputs.iter().map(|&g| prime(g)).collect();
        let outs: Vec<(String, Scalar)> =
            out.iter().map(|(h, c)| (prime(*h), field.div(&field.mul(c, &lambda[*h]), &denom).unwrap())).collect();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        let outs: Vec<(&str, Scalar)> = outs.iter().map(|(n, c)| (n.as_str(), c.clone())).collect();
        b = b.op(&names, &outs);
    }
    let copy = b.build().unwrap();
    let mut fb = AInfFunctor::builder(a, &copy);
    for o in a.objects() {
        fb = fb.object(o, o);
    }
    for (i, g) in gens.iter().enumerate().filter(|(_, g)| !g.is_unit) {
        fb = fb.component(&[g.name.as_str()], &[(prime(i).as_str(), lambda[i].clone())]);
    }
    let f = fb.build().unwrap();
    (copy, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn isomorphisms_are_acyclic_fibrations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in dg_corpus(FieldSpec::prime(5), seed, 2, &CorpusParams::default()) {
            let (b, f) = rescaled_copy(&a, &mut rng);
            prop_assert!(check_functor_relations(&a, &b, &f, 3).unwrap().holds());
            prop_assert_eq!(is_acyclic_fibration(&a, &b, &f).unwrap(), Verdict::True);
        }
    }

    #[test]
    fn fibrations_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for a in dg_corpus(FieldSpec::prime(5), seed, 2, &CorpusParams::default()) {
            let (b, f) = rescaled_copy(&a, &mut rng);
            let (c, g) = rescaled_copy(&b, &mut rng);
            prop_assert_eq!(is_fibration(&a, &b, &f).unwrap().verdict, Verdict::True);
            prop_assert_eq!(is_fibration(&b, &c, &g).unwrap().verdict, Verdict::True);
            let gf = AInfFunctor::compose(&f, &g, &a, &b, &c).unwrap();
            prop_assert_eq!(is_fibration(&a, &c, &gf).unwrap().verdict, Verdict::True);
        }
    }
}

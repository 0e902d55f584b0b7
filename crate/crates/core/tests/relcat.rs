use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rectify_core::relcat::examples::*;
use rectify_core::relcat::*;

fn names(loc: &ClassStructure, x: usize, y: usize) -> Vec<String> {
    loc.hom(x, y).iter().map(|&c| loc.classes()[c].normal_form.clone()).collect()
}

fn parallel_with_f() -> FiniteRelativeCategory {
    FiniteRelativeCategory::with_names(parallel_pair(), &["f"]).unwrap()
}

fn arrow_with_f() -> FiniteRelativeCategory {
    FiniteRelativeCategory::with_names(walking_arrow(), &["f"]).unwrap()
}

#[test]
fn relative_functor_checks() {
    let c = arrow_with_f();
    assert!(check_relative_functor(&RelativeFunctor::identity(&c)).holds());

    let minimal = FiniteRelativeCategory::minimal(walking_arrow());
    let f = RelativeFunctor::from_names(&c, &minimal, &[("a", "a"), ("b", "b")], &[("f", "f")]).unwrap();
    let report = check_relative_functor(&f);
    assert_eq!(report.violations, vec![FunctorViolation::WeakEquivalence { morphism: "f".into() }]);
    assert!(report.is_functor());

    let swap = RelativeFunctor::from_names(&c, &c, &[("a", "b"), ("b", "a")], &[("f", "f")]).unwrap();
    assert!(check_relative_functor(&swap).violations.contains(&FunctorViolation::Endpoints { morphism: "f".into() }));
}

#[test]
fn composite_of_relative_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let d = random_galois_adjunction(&mut rng, 3);
        let rl = d.left.then(&d.right);
        assert!(check_relative_functor(&rl).holds());
        assert!(check_relative_functor(&rl.then(&rl)).holds());
    }
}

#[test]
fn dk_adjunction_examples() {
    let yes = check_dk_adjunction(&walking_arrow_adjunction(true)).unwrap();
    assert!(yes.verdict);
    let no = check_dk_adjunction(&walking_arrow_adjunction(false)).unwrap();
    assert!(!no.verdict);
    assert_eq!(no.unit_failures, vec!["a".to_string()]);
    assert!(no.counit_failures.is_empty());
}

/// With `W` all morphisms the verdict is exactly adjunction validity.
#[test]
fn dk_adjunction_with_all_morphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let d = random_galois_adjunction(&mut rng, 3);
        let d = d
            .with_weqs(FiniteRelativeCategory::maximal(d.c1().cat().clone()), FiniteRelativeCategory::maximal(d.c2().cat().clone()))
            .unwrap();
        assert!(check_dk_adjunction(&d).unwrap().verdict);
    }
}

#[test]
fn dk_adjunction_with_isomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = [0usize; 2];
    for _ in 0..40 {
        let d = random_galois_adjunction(&mut rng, 3);
        let d = d
            .with_weqs(
                FiniteRelativeCategory::isomorphisms(d.c1().cat().clone()),
                FiniteRelativeCategory::isomorphisms(d.c2().cat().clone()),
            )
            .unwrap();
        let verdict = check_dk_adjunction(&d).unwrap().verdict;
        assert_eq!(verdict, d.is_adjoint_equivalence());
        seen[verdict as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn localize_identities_only() {
    let c = FiniteRelativeCategory::minimal(parallel_pair());
    let loc = localize(&c, 1).unwrap();
    assert!(loc.stabilized);
    assert_eq!(names(&loc, 0, 1), vec!["f", "g"]);
}

#[test]
fn localize_walking_arrow() {
    let c = arrow_with_f();
    let loc = localize(&c, 3).unwrap();
    assert!(loc.stabilized);
    assert_eq!(loc.hom_sizes(), vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(names(&loc, 1, 0), vec!["f⁻¹"]);
    assert!(!localize(&c, 2).unwrap().stabilized);
    assert!(!localize(&c, 1).unwrap().stabilized);
}

/// Hand enumeration at width 3: `f` inverted makes `End(a)` free on `f⁻¹∘g`,
/// so `(a, b)` already contains `g∘f⁻¹∘g` besides `f` and `g`.
#[test]
fn localize_parallel_pair() {
    let loc = localize(&parallel_with_f(), 4).unwrap();
    assert!(!loc.stabilized);
    assert_eq!(names(&loc, 0, 0), vec!["id_a", "f⁻¹∘g"]);
    assert_eq!(names(&loc, 0, 1), vec!["f", "g", "g∘f⁻¹∘g"]);
    assert_eq!(names(&loc, 1, 0), vec!["f⁻¹"]);
    assert_eq!(names(&loc, 1, 1), vec!["id_b", "g∘f⁻¹"]);
}

#[test]
fn weak_equivalences_become_invertible() {
    for c in [arrow_with_f(), parallel_with_f()] {
        let loc = localize(&c, 3).unwrap();
        for &w in c.weq() {
            assert!(loc.inverse(loc.image_of(w)).is_some());
        }
    }
}

#[test]
fn hammock_agrees_with_localization() {
    for c in [arrow_with_f(), parallel_with_f(), FiniteRelativeCategory::minimal(parallel_pair())] {
        let h = hammock_pi0(&c, 4).unwrap();
        assert!(h.comparison.is_isomorphism(), "{:?}", h.comparison);
    }
}

#[test]
fn localization_equivalence_walking_arrow() {
    let out = check_localization_equivalence(&walking_arrow_adjunction(true), 3).unwrap();
    let AtBound::Determined(eq) = out else { panic!("indeterminate: {out:?}") };
    assert!(eq.verdict);
    assert_eq!(eq.unit_isos.iter().map(|w| (w.iso.as_str(), w.inverse.as_str())).collect::<Vec<_>>(), vec![("f", "f⁻¹"), ("id_b", "id_b")]);
    assert!(check_localization_equivalence(&walking_arrow_adjunction(false), 3).is_err());
    assert!(matches!(check_localization_equivalence(&walking_arrow_adjunction(true), 2).unwrap(), AtBound::Indeterminate { .. }));
}

#[test]
fn localization_equivalence_adjoint_equivalence() {
    let c = FiniteRelativeCategory::isomorphisms(walking_isomorphism());
    let t = FiniteRelativeCategory::isomorphisms(terminal());
    let left = RelativeFunctor::from_names(&c, &t, &[("a", "*"), ("b", "*")], &[("u", "id_*"), ("v", "id_*")]).unwrap();
    let right = RelativeFunctor::from_names(&t, &c, &[("*", "a")], &[]).unwrap();
    let u = c.cat().morphism_id("v").unwrap();
    let d = AdjunctionData { left, right, unit: vec![0, u], counit: vec![0] };
    let out = check_localization_equivalence(&d, 3).unwrap().determined().unwrap();
    assert!(out.verdict);
}

#[test]
fn homotopy_functor_examples() {
    let c = parallel_with_f();
    let loc = localize(&c, 3).unwrap();
    let id = homotopy_category_functor(&RelativeFunctor::identity(&c), &loc, &loc).unwrap().determined().unwrap();
    assert_eq!(id.class_map, (0..loc.classes().len()).collect::<Vec<_>>());

    let arrow = arrow_with_f();
    let target = localize(&arrow, 3).unwrap();
    let collapse = RelativeFunctor::from_names(&c, &arrow, &[("a", "a"), ("b", "b")], &[("f", "f"), ("g", "f")]).unwrap();
    let fc = homotopy_category_functor(&collapse, &loc, &target).unwrap().determined().unwrap();
    for &class in loc.hom(0, 0) {
        assert_eq!(fc.apply(class), target.identity(0));
    }
    let images: Vec<usize> = loc.hom(0, 1).iter().map(|&c| fc.apply(c)).collect();
    assert!(images.iter().all(|&i| i == target.image_of(2)));
    for &w in c.weq() {
        assert!(target.inverse(fc.apply(loc.image_of(w))).is_some());
    }
}

fn preorder_strategy() -> impl Strategy<Value = FiniteCategory> {
    (1usize..=3, proptest::collection::vec(any::<bool>(), 9)).prop_map(|(n, bits)| {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        FiniteCategory::preorder(&refs, |a, b| bits[a * 3 + b]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Inverting only isomorphisms changes nothing.
    #[test]
    fn isomorphisms_localize_to_the_category(cat in preorder_strategy()) {
        let c = FiniteRelativeCategory::isomorphisms(cat.clone());
        let loc = localize(&c, 3).unwrap();
        prop_assert!(loc.stabilized);
        for m in 0..cat.morphisms().len() {
            let class = &loc.classes()[loc.image_of(m)];
            prop_assert_eq!(&class.normal_form, cat.name(m));
        }
        prop_assert_eq!(loc.classes().len(), cat.morphisms().len());
        let h = hammock_pi0(&c, 3).unwrap();
        prop_assert!(h.comparison.is_isomorphism());
    }
}

use std::collections::BTreeMap;

use rectify_core::ainf::*;
use rectify_core::barcobar::*;
use rectify_core::catalog;
use rectify_core::corpus::{dg_corpus, CorpusParams};
use rectify_core::exactlin::FieldSpec;

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

#[test]
fn bar_examples() {
    let k = bar(&catalog::point(q()), 4).unwrap();
    assert!(k.words().is_empty());
    let a2 = bar(&catalog::a2_path(q()), 3).unwrap();
    assert_eq!(a2.words().len(), 1);
    assert_eq!(a2.word_name(0), "[f]");
    assert_eq!(a2.dims(), BTreeMap::from([((0, 1, -1), 1)]));
}

#[test]
fn bar_rejects_invalid_input() {
    let err = bar(&catalog::non_associative(q()), 3).unwrap_err();
    assert!(err.to_string().contains("h, g, f"), "{err}");
}

/// Independent count of bar words on one object with `k` letters: Σ_{n≤L} k^n.
#[test]
fn bar_word_count_oracle() {
    let m3 = catalog::m3_example(q());
    for l in 1..=5 {
        let b = bar(&m3, l).unwrap();
        assert_eq!(b.words().len(), (1..=l as u32).map(|n| 2usize.pow(n)).sum::<usize>());
    }
}

/// Cobar words of total length `n` over a one-object alphabet of size `k`:
/// `k^n` letter sequences times `2^{n−1}` ways to bracket them.
#[test]
fn cobar_word_count_oracle() {
    let m3 = catalog::m3_example(q());
    let stage = rectify(&m3, 4).unwrap();
    let expected: usize = 1 + (1..=4u32).map(|n| 2usize.pow(n) * 2usize.pow(n - 1)).sum::<usize>();
    assert_eq!(stage.generators().len(), expected);
}

#[test]
fn rectify_examples() {
    let k = rectify(&catalog::point(q()), 4).unwrap();
    assert_eq!(k.generators().len(), 1);

    let a2 = rectify(&catalog::a2_path(q()), 4).unwrap();
    let h0 = h0_category(&a2).unwrap();
    assert_eq!(h0.linear().classes().len(), 3);

    let m3 = rectify(&catalog::m3_example(q()), 3).unwrap();
    assert!(check_ainf_relations(&m3, 3).unwrap().holds());
}

#[test]
fn stage_is_dg_on_corpus() {
    for cat in dg_corpus(FieldSpec::prime(5), 3, 4, &CorpusParams::default()) {
        let stage = rectify(&cat, 3).unwrap();
        let report = check_ainf_relations(&stage, 3).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
    }
}

#[test]
fn unit_map_examples() {
    let k = catalog::point(q());
    let stage = rectify(&k, 3).unwrap();
    let eta = unit_map(&k, &stage, 3).unwrap();
    assert_eq!(is_quasi_equivalence(&k, &stage, &eta.functor, None).unwrap().verdict, Verdict::True);

    let m3 = catalog::m3_example(q());
    let stage = rectify(&m3, 6).unwrap();
    let eta = unit_map(&m3, &stage, 4).unwrap();
    assert!(eta.report.holds());
    assert_eq!(eta.report.arity_checked, 4);
    assert!(!eta.functor.is_strict());
}

#[test]
fn counit_and_triangle() {
    for a in [catalog::point(q()), catalog::a2_path(q()), catalog::matrix_units(q())] {
        let stage = rectify(&a, 3).unwrap();
        let eps = counit_map(&a, &stage).unwrap();
        let eta = unit_map(&a, &stage, 3).unwrap();
        assert!(triangle_on_letters(&a, &stage, &eta.functor, &eps.functor));
        let cert = is_quasi_equivalence(&stage, &a, &eps.functor, Some((-1, 1))).unwrap();
        assert_eq!(cert.verdict, Verdict::True, "{cert:?}");
    }
    let m3 = catalog::m3_example(q());
    let stage = rectify(&m3, 3).unwrap();
    assert_eq!(counit_map(&m3, &stage).unwrap_err().to_string(), "not a DG category: m_3 nonzero");
}

#[test]
fn stabilization_examples() {
    let k = stabilization_report(&catalog::point(q()), 3, (-1, 1)).unwrap();
    assert_eq!(k.stabilized_at(), Some(2));
    assert_eq!(k.dims_at(2)[&("X".into(), "X".into(), 0)], 1);

    let a2 = stabilization_report(&catalog::a2_path(q()), 5, (-1, 1)).unwrap();
    let at = a2.stabilized_at().unwrap();
    assert!(at <= 4);
    assert!(a2.inclusions.iter().all(|i| i.chain_map && i.composition.holds()));

    let m3 = stabilization_report(&catalog::m3_example(q()), 6, (-2, 3)).unwrap();
    for e in &m3.entries {
        assert_eq!(e.dims.len(), 6);
        assert_eq!(e.maps_iso.len(), 5);
    }
}

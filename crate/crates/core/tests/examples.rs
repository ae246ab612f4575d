//! Worked examples checked beyond the acceptance criteria.

use sgpoid::decomposition::{
    interchangeable, object_isomorphism, preimage_sets_equivalent, Strategy,
};
use sgpoid::fixtures;
use sgpoid::pipeline::{decompose, functor_of};
use sgpoid::semigroupoid::{ArrowSet, Semigroupoid};

fn ids(s: &Semigroupoid, labels: &[&str]) -> ArrowSet {
    labels
        .iter()
        .map(|l| s.arrow_by_label(l).unwrap())
        .collect()
}

#[test]
fn no_compression_loops_stay_apart() {
    let doc = fixtures::sgd("nocompress.sgd").unwrap();
    let s = doc.semigroupoid();
    let a = |l: &str| s.arrow_by_label(l).unwrap();
    for (f, g) in [("a", "c"), ("id1", "id2"), ("a", "id2"), ("id1", "c")] {
        assert!(interchangeable(s, a(f), a(g)).is_none(), "{f} ~ {g}");
    }
    let x1 = s.object_by_label("X1").unwrap();
    let x2 = s.object_by_label("X2").unwrap();
    assert_eq!(object_isomorphism(s, x1, x2), None);
}

#[test]
fn no_compression_preimages_are_not_equivalent() {
    let loaded = fixtures::functor("nocompress.fun").unwrap();
    let (phi, _) = functor_of(&loaded).unwrap();
    let pre = phi.preimages().unwrap();
    for (i, p) in pre.iter().enumerate() {
        for q in &pre[i + 1..] {
            assert!(preimage_sets_equivalent(phi.source(), p, q).is_none());
        }
    }
    let s = phi.source();
    assert!(preimage_sets_equivalent(s, &ids(s, &["id1", "a"]), &ids(s, &["id2", "c"])).is_none());
    for strategy in [Strategy::Sets, Strategy::Objects, Strategy::None] {
        let run = decompose(&loaded, strategy).unwrap();
        assert!(run.equals_tracing_product(), "{strategy}");
        assert!(!run.kernel.compressed());
        assert_eq!(run.cascade.arrow_count(), 12);
    }
}

#[test]
fn literal_interchangeability_of_constants() {
    let doc = fixtures::sgd("nocompress.sgd").unwrap();
    let s = doc.semigroupoid();
    let a = |l: &str| s.arrow_by_label(l).unwrap();
    assert!(interchangeable(s, a("b"), a("d")).is_some());
}

#[test]
fn z4_strategies() {
    let loaded = fixtures::functor("z4phi.fun").unwrap();
    let objects = decompose(&loaded, Strategy::Objects).unwrap();
    assert_eq!(objects.kernel.arrow_set().len(), 2);
    assert!(objects.certificate.valid());
    let sets = decompose(&loaded, Strategy::Sets).unwrap();
    assert_eq!(sets.kernel.arrow_set().len(), 4);
    assert!(sets.certificate.valid());
    let none = decompose(&loaded, Strategy::None).unwrap();
    assert_eq!(none.cascade.arrow_count(), 8);
    assert!(none.equals_tracing_product());
}

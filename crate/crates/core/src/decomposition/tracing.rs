use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::certificate::{verify_emulation, EmulationCertificate};
use crate::error::{Error, Result};
use crate::relational::RelationalFunctor;
use crate::semigroupoid::{Arrow, ArrowId, ArrowSet, Object, ObjectId, Semigroupoid};

/// A two-level product whose arrows are pairs `(top arrow, bottom coordinate)`.
///
/// `traced[i]` is the source arrow that pair `i` stands for: the bottom
/// coordinate itself in a tracing product, its decoding in a cascade. Objects
/// are pairs of a top object and the traced arrow's object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelProduct {
    pub semigroupoid: Semigroupoid,
    pub top: Arc<Semigroupoid>,
    pub source: Arc<Semigroupoid>,
    pub pairs: Vec<(ArrowId, ArrowId)>,
    pub traced: Vec<ArrowId>,
}

/// One product arrow before the table is built: top arrow, stored bottom
/// coordinate, traced source arrow.
pub(crate) type Entry = (ArrowId, ArrowId, ArrowId);

/// Builds the pair semigroupoid. `encode(fg, ab)` gives the stored coordinate of
/// the composite of two pairs; `coord_labels` labels stored coordinates.
pub(crate) fn build_product(
    top: Arc<Semigroupoid>,
    source: Arc<Semigroupoid>,
    coord_labels: &Semigroupoid,
    entries: Vec<Entry>,
    encode: impl Fn(ArrowId, ArrowId) -> Result<ArrowId>,
) -> Result<LevelProduct> {
    let ends = |&(f, _, a): &Entry| ((top.dom(f), source.dom(a)), (top.cod(f), source.cod(a)));
    let object_pairs: BTreeSet<(ObjectId, ObjectId)> = entries
        .iter()
        .flat_map(|e| {
            let (d, c) = ends(e);
            [d, c]
        })
        .collect();
    let object_index: BTreeMap<(ObjectId, ObjectId), ObjectId> = object_pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let objects = object_pairs
        .iter()
        .map(|&(y, x)| Object {
            label: format!("({},{})", top.object_label(y), source.object_label(x)),
        })
        .collect();
    let arrows: Vec<Arrow> = entries
        .iter()
        .map(|e| {
            let (d, c) = ends(e);
            Arrow {
                dom: object_index[&d],
                cod: object_index[&c],
                label: format!(
                    "({},{})",
                    top.arrow_label(e.0),
                    coord_labels.arrow_label(e.1)
                ),
            }
        })
        .collect();
    let index: HashMap<(ArrowId, ArrowId), ArrowId> = entries
        .iter()
        .enumerate()
        .map(|(i, &(f, a, _))| ((f, a), i))
        .collect();

    let mut by_dom: Vec<Vec<ArrowId>> = vec![Vec::new(); object_pairs.len()];
    for (i, a) in arrows.iter().enumerate() {
        by_dom[a.dom].push(i);
    }
    let mut table = BTreeMap::new();
    for (i, &(f, _, a)) in entries.iter().enumerate() {
        for &j in &by_dom[arrows[i].cod] {
            let (g, _, b) = entries[j];
            let fg = top.compose(f, g)?;
            let ab = source.compose(a, b)?;
            let stored = encode(fg, ab)?;
            let k = *index.get(&(fg, stored)).ok_or_else(|| {
                Error::NotClosed(arrows[i].label.clone(), arrows[j].label.clone())
            })?;
            table.insert((i, j), k);
        }
    }
    let semigroupoid = Semigroupoid::new(objects, arrows, table)?;
    Ok(LevelProduct {
        semigroupoid,
        top,
        source,
        pairs: entries.iter().map(|&(f, a, _)| (f, a)).collect(),
        traced: entries.iter().map(|&(_, _, a)| a).collect(),
    })
}

impl LevelProduct {
    pub fn arrow_count(&self) -> usize {
        self.pairs.len()
    }

    /// The candidate emulation `a ↦ {pairs tracing a}`.
    pub fn embedding(&self) -> Result<RelationalFunctor> {
        let mut map = vec![ArrowSet::new(); self.source.arrow_count()];
        for (i, &a) in self.traced.iter().enumerate() {
            map[a].insert(i);
        }
        RelationalFunctor::new(
            self.source.clone(),
            Arc::new(self.semigroupoid.clone()),
            map,
        )
    }

    pub fn certificate(&self) -> Result<EmulationCertificate> {
        Ok(verify_emulation(&self.embedding()?))
    }

    /// Pairs as a set, for comparing arrow sets of products.
    pub fn pair_set(&self) -> BTreeSet<(ArrowId, ArrowId)> {
        self.pairs.iter().copied().collect()
    }
}

fn require_valid(phi: &RelationalFunctor) -> Result<Vec<ArrowSet>> {
    if let Some(v) = phi.validate().first() {
        return Err(Error::InvalidFunctor(v.describe(phi)));
    }
    phi.preimages()
}

/// `T ×_φ S`: every top arrow paired with each of its preimages, composed
/// componentwise, with the certificate for `τ(a) = {(x, a) : x ∈ φ(a)}`.
pub fn tracing_product(phi: &RelationalFunctor) -> Result<(LevelProduct, EmulationCertificate)> {
    let pre = require_valid(phi)?;
    let entries = pre
        .iter()
        .enumerate()
        .flat_map(|(f, p)| p.iter().map(move |&a| (f, a, a)))
        .collect();
    let product = build_product(
        phi.target_arc().clone(),
        phi.source_arc().clone(),
        phi.source(),
        entries,
        |_, ab| Ok(ab),
    )?;
    let cert = product.certificate()?;
    Ok((product, cert))
}

pub(crate) fn preimages_of_valid(phi: &RelationalFunctor) -> Result<Vec<ArrowSet>> {
    require_valid(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroupoid::SemigroupoidBuilder;

    fn cyclic(n: usize, prefix: &str, suffix: &str) -> Semigroupoid {
        let mut b = SemigroupoidBuilder::new().object("*");
        let name = |i: usize| format!("{prefix}{i}{suffix}");
        for i in 0..n {
            b = b.arrow(&name(i), "*", "*");
        }
        for i in 0..n {
            for j in 0..n {
                b = b.compose(&name(i), &name(j), &name((i + j) % n));
            }
        }
        b.build().unwrap()
    }

    fn z4_to_z2() -> RelationalFunctor {
        RelationalFunctor::new(
            Arc::new(cyclic(4, "+", "")),
            Arc::new(cyclic(2, "+", "'")),
            (0..4).map(|i| ArrowSet::from([i % 2])).collect(),
        )
        .unwrap()
    }

    #[test]
    fn z4_tracing_product() {
        let (p, cert) = tracing_product(&z4_to_z2()).unwrap();
        assert_eq!(p.arrow_count(), 4);
        assert!(p.semigroupoid.validate().is_empty());
        assert!(cert.valid());
        assert_eq!(p.semigroupoid.arrow_label(1), "(+0',+2)");
    }

    #[test]
    fn identity_tracing_product_is_a_copy() {
        let s = Arc::new(cyclic(3, "r", ""));
        let (p, cert) = tracing_product(&RelationalFunctor::identity(s)).unwrap();
        assert_eq!(p.arrow_count(), 3);
        assert!(cert.valid());
    }

    #[test]
    fn non_surjective_functor_is_rejected() {
        let s = Arc::new(cyclic(1, "e", ""));
        let t = Arc::new(cyclic(2, "+", ""));
        let phi = RelationalFunctor::new(s, t, vec![ArrowSet::from([0])]).unwrap();
        assert_eq!(
            tracing_product(&phi).unwrap_err(),
            Error::NotSurjective(vec![1])
        );
    }

    #[test]
    fn top_component_composes_alone() {
        let (p, _) = tracing_product(&z4_to_z2()).unwrap();
        for (&(i, j), &k) in p.semigroupoid.table() {
            assert_eq!(
                p.top.product(p.pairs[i].0, p.pairs[j].0),
                Some(p.pairs[k].0)
            );
        }
    }
}

//! Relational functors between semigroupoids, and relational morphisms of
//! transformation semigroups.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroupoid::{ArrowId, ArrowSet, ObjectId, Semigroupoid};
use crate::transformation::TransformationSemigroupoid;

/// A candidate relational functor, stored as plain data.
///
/// Validity is not enforced on construction; call [`RelationalFunctor::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalFunctor {
    source: Arc<Semigroupoid>,
    target: Arc<Semigroupoid>,
    arrow_map: Vec<ArrowSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorViolation {
    EmptyImage {
        f: ArrowId,
    },
    /// `φ(f)φ(g)` is empty for a composable pair.
    EmptyComposite {
        f: ArrowId,
        g: ArrowId,
    },
    /// `composite ∈ φ(f)φ(g)` but `composite ∉ φ(fg)`.
    NotContained {
        f: ArrowId,
        g: ArrowId,
        composite: ArrowId,
    },
}

impl FunctorViolation {
    pub fn describe(&self, phi: &RelationalFunctor) -> String {
        let s = phi.source();
        let t = phi.target();
        match *self {
            FunctorViolation::EmptyImage { f } => {
                format!("arrow {} has an empty image", s.arrow_label(f))
            }
            FunctorViolation::EmptyComposite { f, g } => format!(
                "no composable pair in φ({})φ({})",
                s.arrow_label(f),
                s.arrow_label(g)
            ),
            FunctorViolation::NotContained { f, g, composite } => {
                let fg = s.product(f, g).map(|h| s.arrow_label(h)).unwrap_or("?");
                format!(
                    "pair ({}, {}): {} ∈ φ({})φ({}) but not in φ({})",
                    s.arrow_label(f),
                    s.arrow_label(g),
                    t.arrow_label(composite),
                    s.arrow_label(f),
                    s.arrow_label(g),
                    fg
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub surjective: bool,
    pub injective: bool,
}

pub type ObjectRelation = BTreeSet<(ObjectId, ObjectId)>;

impl RelationalFunctor {
    pub fn new(
        source: Arc<Semigroupoid>,
        target: Arc<Semigroupoid>,
        arrow_map: Vec<ArrowSet>,
    ) -> Result<Self> {
        if arrow_map.len() != source.arrow_count() {
            return Err(Error::ArrowMapLength {
                expected: source.arrow_count(),
                got: arrow_map.len(),
            });
        }
        if let Some(&bad) = arrow_map
            .iter()
            .flatten()
            .find(|&&a| a >= target.arrow_count())
        {
            return Err(Error::DanglingArrow(bad));
        }
        Ok(Self {
            source,
            target,
            arrow_map,
        })
    }

    pub fn identity(s: Arc<Semigroupoid>) -> Self {
        let arrow_map = (0..s.arrow_count()).map(|a| ArrowSet::from([a])).collect();
        Self {
            source: s.clone(),
            target: s,
            arrow_map,
        }
    }

    pub fn source(&self) -> &Semigroupoid {
        &self.source
    }

    pub fn target(&self) -> &Semigroupoid {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<Semigroupoid> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<Semigroupoid> {
        &self.target
    }

    pub fn image(&self, f: ArrowId) -> &ArrowSet {
        &self.arrow_map[f]
    }

    pub fn arrow_map(&self) -> &[ArrowSet] {
        &self.arrow_map
    }

    /// Empty iff every image is non-empty and, for every composable source pair
    /// `(f, g)`, `φ(f)φ(g)` is non-empty and contained in `φ(fg)`.
    pub fn validate(&self) -> Vec<FunctorViolation> {
        let s = &*self.source;
        let t = &*self.target;
        let mut report = Vec::new();
        for (f, img) in self.arrow_map.iter().enumerate() {
            if img.is_empty() {
                report.push(FunctorViolation::EmptyImage { f });
            }
        }
        let outgoing = s.outgoing();
        for f in 0..s.arrow_count() {
            for &g in &outgoing[s.cod(f)] {
                let composites = t.compose_sets(&self.arrow_map[f], &self.arrow_map[g]);
                if composites.is_empty() {
                    report.push(FunctorViolation::EmptyComposite { f, g });
                    continue;
                }
                // A missing fg is the source's defect; validate_semigroupoid reports it.
                let Some(fg) = s.product(f, g) else { continue };
                for &composite in composites.difference(&self.arrow_map[fg]) {
                    report.push(FunctorViolation::NotContained { f, g, composite });
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Smallest object relation containing the dom and cod pairs of related arrows.
    pub fn induced_object_relation(&self) -> ObjectRelation {
        let mut rel = ObjectRelation::new();
        for (f, img) in self.arrow_map.iter().enumerate() {
            for &f2 in img {
                rel.insert((self.source.dom(f), self.target.dom(f2)));
                rel.insert((self.source.cod(f), self.target.cod(f2)));
            }
        }
        rel
    }

    /// `(φτ)(f) = ⋃_{f' ∈ φ(f)} τ(f')`.
    pub fn compose(&self, next: &RelationalFunctor) -> Result<RelationalFunctor> {
        if self.target != next.source {
            return Err(Error::ChainMismatch);
        }
        let arrow_map = self
            .arrow_map
            .iter()
            .map(|img| {
                img.iter()
                    .flat_map(|&a| next.arrow_map[a].iter().copied())
                    .collect()
            })
            .collect();
        Ok(RelationalFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            arrow_map,
        })
    }

    pub fn uncovered(&self) -> Vec<ArrowId> {
        let covered: ArrowSet = self.arrow_map.iter().flatten().copied().collect();
        (0..self.target.arrow_count())
            .filter(|a| !covered.contains(a))
            .collect()
    }

    /// Pairs of distinct source arrows whose images intersect, with a shared arrow.
    pub fn collisions(&self) -> Vec<(ArrowId, ArrowId, ArrowId)> {
        let mut first_owner: BTreeMap<ArrowId, ArrowId> = BTreeMap::new();
        let mut out = Vec::new();
        for (f, img) in self.arrow_map.iter().enumerate() {
            for &a in img {
                match first_owner.get(&a) {
                    Some(&g) if g != f => out.push((g, f, a)),
                    Some(_) => {}
                    None => {
                        first_owner.insert(a, f);
                    }
                }
            }
        }
        out
    }

    pub fn classify(&self) -> Classification {
        Classification {
            surjective: self.uncovered().is_empty(),
            injective: self.collisions().is_empty(),
        }
    }

    /// `φ⁻¹(f)` for every target arrow `f`. Errors with the uncovered arrows when
    /// `φ` is not surjective.
    pub fn preimages(&self) -> Result<Vec<ArrowSet>> {
        let uncovered = self.uncovered();
        if !uncovered.is_empty() {
            return Err(Error::NotSurjective(uncovered));
        }
        let mut pre = vec![ArrowSet::new(); self.target.arrow_count()];
        for (a, img) in self.arrow_map.iter().enumerate() {
            for &f in img {
                pre[f].insert(a);
            }
        }
        Ok(pre)
    }

    /// Functor onto the one-arrow semigroupoid.
    pub fn to_trivial(s: Arc<Semigroupoid>) -> Self {
        let target = Arc::new(trivial_semigroupoid());
        let arrow_map = vec![ArrowSet::from([0]); s.arrow_count()];
        Self {
            source: s,
            target,
            arrow_map,
        }
    }

    /// Functor onto the type semigroupoid: one arrow per non-empty hom-set.
    pub fn to_types(s: Arc<Semigroupoid>) -> Self {
        let target = type_semigroupoid(&s);
        let target = Arc::new(target);
        let arrow_map = (0..s.arrow_count())
            .map(|a| {
                let label = type_label(&s, s.dom(a), s.cod(a));
                ArrowSet::from([target.arrow_by_label(&label).expect("type arrow exists")])
            })
            .collect();
        Self {
            source: s,
            target,
            arrow_map,
        }
    }
}

fn trivial_semigroupoid() -> Semigroupoid {
    crate::semigroupoid::SemigroupoidBuilder::new()
        .object("•")
        .arrow("e", "•", "•")
        .compose("e", "e", "e")
        .build()
        .expect("trivial semigroupoid")
}

fn type_label(s: &Semigroupoid, x: ObjectId, y: ObjectId) -> String {
    format!("{}→{}", s.object_label(x), s.object_label(y))
}

/// The semigroupoid of arrow types: objects of `s`, one arrow `X→Y` per
/// non-empty hom-set, `(X→Y)(Y→Z) = X→Z`.
pub fn type_semigroupoid(s: &Semigroupoid) -> Semigroupoid {
    let types: BTreeSet<(ObjectId, ObjectId)> = s.arrows().iter().map(|a| (a.dom, a.cod)).collect();
    let types: Vec<(ObjectId, ObjectId)> = types.into_iter().collect();
    let index: BTreeMap<(ObjectId, ObjectId), ArrowId> =
        types.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let arrows = types
        .iter()
        .map(|&(x, y)| crate::semigroupoid::Arrow {
            dom: x,
            cod: y,
            label: type_label(s, x, y),
        })
        .collect();
    let mut table = BTreeMap::new();
    for (i, &(x, y)) in types.iter().enumerate() {
        for (j, &(y2, z)) in types.iter().enumerate() {
            if y == y2 {
                if let Some(&k) = index.get(&(x, z)) {
                    table.insert((i, j), k);
                }
            }
        }
    }
    Semigroupoid::new(s.objects().to_vec(), arrows, table).expect("type semigroupoid")
}

/// A relational morphism `(φ0, φ1)` between one-object transformation semigroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationalMorphismTS {
    pub source: Arc<TransformationSemigroupoid>,
    pub target: Arc<TransformationSemigroupoid>,
    /// `φ0`: source state → target states.
    pub state_rel: Vec<BTreeSet<usize>>,
    /// `φ1`: source arrow → target arrows.
    pub arrow_rel: Vec<ArrowSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorphismViolation {
    EmptyStateImage {
        state: usize,
    },
    EmptyArrowImage {
        arrow: ArrowId,
    },
    /// `y ∈ φ0(x)`, `t ∈ φ1(s)` but `y·t ∉ φ0(x·s)`.
    IncompatibleAction {
        state: usize,
        arrow: ArrowId,
        target_state: usize,
        target_arrow: ArrowId,
    },
}

impl MorphismViolation {
    pub fn describe(&self, m: &RelationalMorphismTS) -> String {
        let src = &m.source;
        let tgt = &m.target;
        match *self {
            MorphismViolation::EmptyStateImage { state } => {
                format!("state {} has an empty image", src.state_label(0, state))
            }
            MorphismViolation::EmptyArrowImage { arrow } => {
                format!(
                    "arrow {} has an empty image",
                    src.abstract_().arrow_label(arrow)
                )
            }
            MorphismViolation::IncompatibleAction {
                state,
                arrow,
                target_state,
                target_arrow,
            } => format!(
                "incompatible action: {} ∈ φ0({}) and {} ∈ φ1({}) but {}·{} ∉ φ0({}·{})",
                tgt.state_label(0, target_state),
                src.state_label(0, state),
                tgt.abstract_().arrow_label(target_arrow),
                src.abstract_().arrow_label(arrow),
                tgt.state_label(0, target_state),
                tgt.abstract_().arrow_label(target_arrow),
                src.state_label(0, state),
                src.abstract_().arrow_label(arrow),
            ),
        }
    }
}

/// Empty iff `m` is fully defined and `φ0(x)·φ1(s) ⊆ φ0(x·s)` for all `x`, `s`.
pub fn validate_relational_morphism_ts(m: &RelationalMorphismTS) -> Result<Vec<MorphismViolation>> {
    for (name, ts) in [("source", &m.source), ("target", &m.target)] {
        if ts.state_sets().len() != 1 {
            return Err(Error::Unsupported(format!(
                "{name} of a relational morphism must have exactly one object"
            )));
        }
    }
    let n_src = m.source.state_sets()[0].states.len();
    let n_tgt = m.target.state_sets()[0].states.len();
    if m.state_rel.len() != n_src {
        return Err(Error::InvalidMorphism(format!(
            "state relation covers {} states, expected {n_src}",
            m.state_rel.len()
        )));
    }
    if m.arrow_rel.len() != m.source.arrow_count() {
        return Err(Error::ArrowMapLength {
            expected: m.source.arrow_count(),
            got: m.arrow_rel.len(),
        });
    }
    if let Some(&y) = m.state_rel.iter().flatten().find(|&&y| y >= n_tgt) {
        return Err(Error::DanglingState {
            object: 0,
            state: y,
        });
    }
    if let Some(&t) = m
        .arrow_rel
        .iter()
        .flatten()
        .find(|&&t| t >= m.target.arrow_count())
    {
        return Err(Error::DanglingArrow(t));
    }
    let mut report = Vec::new();
    for (state, img) in m.state_rel.iter().enumerate() {
        if img.is_empty() {
            report.push(MorphismViolation::EmptyStateImage { state });
        }
    }
    for (arrow, img) in m.arrow_rel.iter().enumerate() {
        if img.is_empty() {
            report.push(MorphismViolation::EmptyArrowImage { arrow });
        }
    }
    for x in 0..n_src {
        for (s, img) in m.arrow_rel.iter().enumerate() {
            let xs = m.source.transformation(s).mapping[x];
            for &y in &m.state_rel[x] {
                for &t in img {
                    let yt = m.target.transformation(t).mapping[y];
                    if !m.state_rel[xs].contains(&yt) {
                        report.push(MorphismViolation::IncompatibleAction {
                            state: x,
                            arrow: s,
                            target_state: y,
                            target_arrow: t,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

//! Concrete representations: finite state sets and total functions between them.

mod diagnostics;
mod typing;

pub use diagnostics::{
    pad_with_identities, sink_completion, DiagnosticMode, DiagnosticReport, OrbitWitness,
};
pub use typing::{
    action_semigroupoid, holonomy_seed_morphism, image_sets, image_typed_semigroupoid,
    pinhole_typed_semigroupoid, Pinhole,
};

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroupoid::{Arrow, ArrowId, Object, ObjectId, Semigroupoid, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateSet {
    pub label: String,
    pub states: Vec<String>,
}

impl StateSet {
    pub fn new(
        label: impl Into<String>,
        states: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Self {
            label: label.into(),
            states: states.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// A total function between two state sets, as cod-state indices per dom-state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transformation {
    pub dom: ObjectId,
    pub cod: ObjectId,
    pub mapping: Vec<usize>,
}

impl Transformation {
    pub fn new(dom: ObjectId, cod: ObjectId, mapping: Vec<usize>) -> Self {
        Self { dom, cod, mapping }
    }

    pub fn endo(mapping: Vec<usize>) -> Self {
        Self::new(0, 0, mapping)
    }

    pub fn identity(object: ObjectId, size: usize) -> Self {
        Self::new(object, object, (0..size).collect())
    }

    pub fn image(&self) -> Vec<usize> {
        let mut img = self.mapping.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_permutation(&self) -> bool {
        self.dom == self.cod && self.image().len() == self.mapping.len()
    }
}

pub fn apply(t: &Transformation, x: usize) -> Result<usize> {
    t.mapping.get(x).copied().ok_or(Error::StateOutOfRange {
        state: x,
        size: t.mapping.len(),
    })
}

/// `x ↦ t2(t1(x))`: first `t1`, then `t2`.
pub fn compose_transformations(t1: &Transformation, t2: &Transformation) -> Result<Transformation> {
    if t1.cod != t2.dom {
        return Err(Error::NotComposable {
            f: 0,
            g: 1,
            cod_f: t1.cod,
            dom_g: t2.dom,
        });
    }
    let mapping = t1
        .mapping
        .iter()
        .map(|&y| apply(t2, y))
        .collect::<Result<Vec<_>>>()?;
    Ok(Transformation::new(t1.dom, t2.cod, mapping))
}

/// A family of state sets with typed transformations between them, plus the
/// induced abstract composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationSemigroupoid {
    state_sets: Vec<StateSet>,
    maps: Vec<Transformation>,
    abstract_: Semigroupoid,
}

impl TransformationSemigroupoid {
    /// Builds from explicitly listed arrows. The table is filled wherever the
    /// composite function is among the arrows; missing composites are left for
    /// [`Self::validate`] to report.
    pub fn new(state_sets: Vec<StateSet>, arrows: Vec<(String, Transformation)>) -> Result<Self> {
        for (i, set) in state_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::EmptyStateSet(i));
            }
        }
        let mut index: HashMap<&Transformation, ArrowId> = HashMap::new();
        for (id, (_, t)) in arrows.iter().enumerate() {
            check_typed(&state_sets, id, t)?;
            if let Some(&prev) = index.get(t) {
                return Err(Error::DuplicateArrow(prev, id));
            }
            index.insert(t, id);
        }
        let mut table = BTreeMap::new();
        for (f, (_, t1)) in arrows.iter().enumerate() {
            for (g, (_, t2)) in arrows.iter().enumerate() {
                if t1.cod == t2.dom {
                    let h = compose_transformations(t1, t2)?;
                    if let Some(&id) = index.get(&h) {
                        table.insert((f, g), id);
                    }
                }
            }
        }
        let objects = state_sets
            .iter()
            .map(|s| Object {
                label: s.label.clone(),
            })
            .collect();
        let abstract_arrows = arrows
            .iter()
            .map(|(label, t)| Arrow {
                dom: t.dom,
                cod: t.cod,
                label: label.clone(),
            })
            .collect();
        let abstract_ = Semigroupoid::new(objects, abstract_arrows, table)?;
        let maps = arrows.into_iter().map(|(_, t)| t).collect();
        Ok(Self {
            state_sets,
            maps,
            abstract_,
        })
    }

    /// Breadth-first closure of `generators` under composition.
    ///
    /// Generators are deduplicated extensionally (first label wins). New arrows are
    /// found by right-multiplying every arrow, in id order, by every generator, in
    /// generator order; each is labelled by the word that first produced it.
    pub fn generate_closure(
        state_sets: Vec<StateSet>,
        generators: Vec<(String, Transformation)>,
    ) -> Result<Self> {
        for (id, (_, t)) in generators.iter().enumerate() {
            check_typed(&state_sets, id, t)?;
        }
        let mut arrows: Vec<(String, Transformation)> = Vec::new();
        let mut seen: HashMap<Transformation, ArrowId> = HashMap::new();
        for (label, t) in &generators {
            if !seen.contains_key(t) {
                seen.insert(t.clone(), arrows.len());
                arrows.push((label.clone(), t.clone()));
            }
        }
        let gens: Vec<(String, Transformation)> = arrows.clone();
        let mut queue: VecDeque<ArrowId> = (0..arrows.len()).collect();
        while let Some(i) = queue.pop_front() {
            for (glabel, g) in &gens {
                if arrows[i].1.cod != g.dom {
                    continue;
                }
                let h = compose_transformations(&arrows[i].1, g)?;
                if !seen.contains_key(&h) {
                    seen.insert(h.clone(), arrows.len());
                    queue.push_back(arrows.len());
                    let label = format!("{}·{}", arrows[i].0, glabel);
                    arrows.push((label, h));
                }
            }
        }
        Self::new(state_sets, arrows)
    }

    pub fn state_sets(&self) -> &[StateSet] {
        &self.state_sets
    }

    pub fn transformation(&self, a: ArrowId) -> &Transformation {
        &self.maps[a]
    }

    pub fn transformations(&self) -> &[Transformation] {
        &self.maps
    }

    pub fn abstract_(&self) -> &Semigroupoid {
        &self.abstract_
    }

    pub fn arrow_count(&self) -> usize {
        self.maps.len()
    }

    pub fn label(&self, a: ArrowId) -> &str {
        self.abstract_.arrow_label(a)
    }

    pub fn state_label(&self, object: ObjectId, state: usize) -> &str {
        self.state_sets
            .get(object)
            .and_then(|s| s.states.get(state))
            .map(String::as_str)
            .unwrap_or("?")
    }

    pub fn find(&self, t: &Transformation) -> Option<ArrowId> {
        self.maps.iter().position(|m| m == t)
    }

    pub fn is_one_object(&self) -> bool {
        self.state_sets.len() == 1
    }

    /// Abstract violations (closure, associativity) plus any table entry that
    /// disagrees with function composition.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = self.abstract_.validate();
        for (&(f, g), &h) in self.abstract_.table() {
            match compose_transformations(&self.maps[f], &self.maps[g]) {
                Ok(m) if m == self.maps[h] => {}
                _ => report.push(Violation::CompositeType { f, g, h }),
            }
        }
        report
    }

    /// Renders a transformation as a two-row listing, e.g. `(0 1 / 1 0)`.
    pub fn render(&self, t: &Transformation) -> String {
        let dom = &self.state_sets[t.dom].states;
        let cod = &self.state_sets[t.cod].states;
        let top: Vec<&str> = dom.iter().map(String::as_str).collect();
        let bottom: Vec<&str> = t.mapping.iter().map(|&y| cod[y].as_str()).collect();
        format!("({} / {})", top.join(" "), bottom.join(" "))
    }
}

fn check_typed(state_sets: &[StateSet], id: ArrowId, t: &Transformation) -> Result<()> {
    for object in [t.dom, t.cod] {
        if object >= state_sets.len() {
            return Err(Error::DanglingObject { arrow: id, object });
        }
    }
    let expected = state_sets[t.dom].len();
    if t.mapping.len() != expected {
        return Err(Error::MappingArity {
            expected,
            got: t.mapping.len(),
        });
    }
    let size = state_sets[t.cod].len();
    if let Some(&state) = t.mapping.iter().find(|&&y| y >= size) {
        return Err(Error::DanglingState {
            object: t.cod,
            state,
        });
    }
    Ok(())
}

/// The full transformation semigroup `T_n` on states `0..n`, in
/// lexicographic order of mappings.
pub fn full_transformation_semigroup(n: usize) -> TransformationSemigroupoid {
    let states: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut mapping = vec![0; n];
        let mut c = code;
        for slot in mapping.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        let label = mapping
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join("");
        arrows.push((format!("t{label}"), Transformation::endo(mapping)));
    }
    TransformationSemigroupoid::new(vec![StateSet::new("X", states)], arrows)
        .expect("T_n is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_mode() -> TransformationSemigroupoid {
        TransformationSemigroupoid::generate_closure(
            vec![
                StateSet::new("X1", ["0_1", "1_1"]),
                StateSet::new("X2", ["0_2", "1_2", "2_2"]),
            ],
            vec![
                ("+1_1".into(), Transformation::new(0, 0, vec![1, 0])),
                ("+1_2".into(), Transformation::new(1, 1, vec![1, 2, 0])),
                ("f".into(), Transformation::new(0, 1, vec![0, 0])),
                ("g".into(), Transformation::new(1, 0, vec![0, 0, 0])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flip_flop_word() {
        let r = Transformation::endo(vec![0, 1]);
        let w0 = Transformation::endo(vec![0, 0]);
        let w1 = Transformation::endo(vec![1, 1]);
        let mut x = 0;
        let mut visited = vec![x];
        for t in [&w1, &r, &r, &w0, &r, &w1, &r] {
            x = apply(t, x).unwrap();
            visited.push(x);
        }
        assert_eq!(visited, vec![0, 1, 1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn apply_edge_cases() {
        let id = Transformation::identity(0, 3);
        assert_eq!(apply(&id, 2), Ok(2));
        let plus2 = Transformation::endo(vec![2, 3, 0, 1]);
        assert_eq!(apply(&plus2, 1), Ok(3));
        assert!(matches!(
            apply(&plus2, 4),
            Err(Error::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn communicating_vessels_transfer() {
        let c = Transformation::new(0, 0, vec![1, 0]);
        let r = Transformation::new(1, 1, vec![1, 1]);
        let f = Transformation::new(0, 1, vec![0, 1]);
        let g = Transformation::new(1, 0, vec![0, 1]);
        let gcf = compose_transformations(&compose_transformations(&g, &c).unwrap(), &f).unwrap();
        assert_eq!(gcf, Transformation::new(1, 1, vec![1, 0]));
        let frg = compose_transformations(&compose_transformations(&f, &r).unwrap(), &g).unwrap();
        assert_eq!(frg, Transformation::new(0, 0, vec![1, 1]));
        assert!(compose_transformations(&f, &c).is_err());
    }

    #[test]
    fn closure_sizes() {
        let z4 = TransformationSemigroupoid::generate_closure(
            vec![StateSet::new("X", ["0", "1", "2", "3"])],
            vec![("+1".into(), Transformation::endo(vec![1, 2, 3, 0]))],
        )
        .unwrap();
        assert_eq!(z4.arrow_count(), 4);
        assert!(z4.validate().is_empty());
        let id = TransformationSemigroupoid::generate_closure(
            vec![StateSet::new("X", ["0", "1"])],
            vec![("id".into(), Transformation::identity(0, 2))],
        )
        .unwrap();
        assert_eq!(id.arrow_count(), 1);
        // Composites with the switch maps are new constants; an independent
        // closure oracle counts 15 arrows.
        let dm = dual_mode();
        assert_eq!(dm.arrow_count(), 15);
        assert!(dm.validate().is_empty());
    }

    #[test]
    fn closure_is_idempotent() {
        let dm = dual_mode();
        let again = TransformationSemigroupoid::generate_closure(
            dm.state_sets().to_vec(),
            (0..dm.arrow_count())
                .map(|a| (dm.label(a).to_string(), dm.transformation(a).clone()))
                .collect(),
        )
        .unwrap();
        assert_eq!(again, dm);
    }

    #[test]
    fn ill_typed_generator_is_rejected() {
        let err = TransformationSemigroupoid::generate_closure(
            vec![StateSet::new("X", ["0", "1"])],
            vec![("bad".into(), Transformation::endo(vec![0, 1, 1]))],
        );
        assert_eq!(
            err,
            Err(Error::MappingArity {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn full_transformation_semigroup_sizes() {
        assert_eq!(full_transformation_semigroup(2).arrow_count(), 4);
        let t3 = full_transformation_semigroup(3);
        assert_eq!(t3.arrow_count(), 27);
        assert!(t3.validate().is_empty());
    }
}

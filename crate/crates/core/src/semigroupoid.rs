//! Abstract finite semigroupoids given by an explicit partial composition table.
//!
//! Arrows compose on the right: for `f: X -> Y` and `g: Y -> Z` the composite
//! is written `fg` and has type `X -> Z`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjectId = usize;
pub type ArrowId = usize;
pub type ArrowSet = BTreeSet<ArrowId>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Object {
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub dom: ObjectId,
    pub cod: ObjectId,
    pub label: String,
}

/// A finite semigroupoid: objects, typed arrows and a sparse composition table.
///
/// Construction only checks that ids resolve. Closure, typing of composites and
/// associativity are reported by [`Semigroupoid::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semigroupoid {
    objects: Vec<Object>,
    arrows: Vec<Arrow>,
    table: BTreeMap<(ArrowId, ArrowId), ArrowId>,
}

/// A single defect found by [`Semigroupoid::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `cod(f) = dom(g)` but the table has no entry for `(f, g)`.
    MissingComposite { f: ArrowId, g: ArrowId },
    /// The table has an entry for a pair that is not composable.
    SpuriousEntry { f: ArrowId, g: ArrowId, h: ArrowId },
    /// `fg = h` but `h` does not have type `dom(f) -> cod(g)`.
    CompositeType { f: ArrowId, g: ArrowId, h: ArrowId },
    /// `(fg)h != f(gh)`.
    NonAssociative {
        f: ArrowId,
        g: ArrowId,
        h: ArrowId,
        left: ArrowId,
        right: ArrowId,
    },
}

impl Violation {
    pub fn describe(&self, s: &Semigroupoid) -> String {
        let l = |a: ArrowId| s.arrow_label(a);
        match *self {
            Violation::MissingComposite { f, g } => {
                format!("missing composite for composable pair ({}, {})", l(f), l(g))
            }
            Violation::SpuriousEntry { f, g, h } => format!(
                "table entry {}·{} = {} for a non-composable pair",
                l(f),
                l(g),
                l(h)
            ),
            Violation::CompositeType { f, g, h } => {
                format!("composite {}·{} = {} has the wrong type", l(f), l(g), l(h))
            }
            Violation::NonAssociative {
                f,
                g,
                h,
                left,
                right,
            } => format!(
                "associativity fails on ({}, {}, {}): ({}{}){} = {} but {}({}{}) = {}",
                l(f),
                l(g),
                l(h),
                l(f),
                l(g),
                l(h),
                l(left),
                l(f),
                l(g),
                l(h),
                l(right)
            ),
        }
    }
}

impl Semigroupoid {
    pub fn new(
        objects: Vec<Object>,
        arrows: Vec<Arrow>,
        table: BTreeMap<(ArrowId, ArrowId), ArrowId>,
    ) -> Result<Self> {
        for (id, a) in arrows.iter().enumerate() {
            for object in [a.dom, a.cod] {
                if object >= objects.len() {
                    return Err(Error::DanglingObject { arrow: id, object });
                }
            }
        }
        for (&(f, g), &h) in &table {
            for a in [f, g, h] {
                if a >= arrows.len() {
                    return Err(Error::DanglingArrow(a));
                }
            }
        }
        Ok(Self {
            objects,
            arrows,
            table,
        })
    }

    /// The empty semigroupoid.
    pub fn empty() -> Self {
        Self {
            objects: Vec::new(),
            arrows: Vec::new(),
            table: BTreeMap::new(),
        }
    }

    pub fn objects(&self) -> &[Object] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn table(&self) -> &BTreeMap<(ArrowId, ArrowId), ArrowId> {
        &self.table
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, f: ArrowId) -> &Arrow {
        &self.arrows[f]
    }

    pub fn dom(&self, f: ArrowId) -> ObjectId {
        self.arrows[f].dom
    }

    pub fn cod(&self, f: ArrowId) -> ObjectId {
        self.arrows[f].cod
    }

    pub fn arrow_label(&self, f: ArrowId) -> &str {
        self.arrows.get(f).map(|a| a.label.as_str()).unwrap_or("?")
    }

    pub fn object_label(&self, x: ObjectId) -> &str {
        self.objects.get(x).map(|o| o.label.as_str()).unwrap_or("?")
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.label == label)
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o.label == label)
    }

    pub fn all_arrows(&self) -> ArrowSet {
        (0..self.arrows.len()).collect()
    }

    pub fn is_composable(&self, f: ArrowId, g: ArrowId) -> bool {
        self.arrows[f].cod == self.arrows[g].dom
    }

    /// Table lookup without type checking; `None` for non-composable pairs.
    pub fn product(&self, f: ArrowId, g: ArrowId) -> Option<ArrowId> {
        self.table.get(&(f, g)).copied()
    }

    /// `fg`, or a not-composable error carrying both types.
    pub fn compose(&self, f: ArrowId, g: ArrowId) -> Result<ArrowId> {
        for a in [f, g] {
            if a >= self.arrows.len() {
                return Err(Error::DanglingArrow(a));
            }
        }
        if !self.is_composable(f, g) {
            return Err(Error::NotComposable {
                f,
                g,
                cod_f: self.cod(f),
                dom_g: self.dom(g),
            });
        }
        self.product(f, g).ok_or(Error::MissingComposite { f, g })
    }

    /// Composes a path of optional arrows, where `None` stands for a formal identity.
    pub fn compose_path(&self, path: &[Option<ArrowId>]) -> Option<ArrowId> {
        let mut acc: Option<ArrowId> = None;
        for step in path.iter().flatten() {
            acc = match acc {
                None => Some(*step),
                Some(a) => {
                    if !self.is_composable(a, *step) {
                        return None;
                    }
                    Some(self.product(a, *step)?)
                }
            };
        }
        acc
    }

    /// Set-wise composition: compose when we can, ignore the rest.
    pub fn compose_sets(&self, p: &ArrowSet, q: &ArrowSet) -> ArrowSet {
        let mut out = ArrowSet::new();
        for &f in p {
            for &g in q {
                if self.is_composable(f, g) {
                    if let Some(h) = self.product(f, g) {
                        out.insert(h);
                    }
                }
            }
        }
        out
    }

    pub fn hom_set(&self, x: ObjectId, y: ObjectId) -> ArrowSet {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| a.dom == x && a.cod == y)
            .map(|(i, _)| i)
            .collect()
    }

    /// Arrows grouped by domain object.
    pub fn outgoing(&self) -> Vec<Vec<ArrowId>> {
        let mut out = vec![Vec::new(); self.objects.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            out[a.dom].push(i);
        }
        out
    }

    /// Every violated invariant, with the witnessing pair or triple.
    /// An empty report means `self` is a semigroupoid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let outgoing = self.outgoing();
        for (f, a) in self.arrows.iter().enumerate() {
            for &g in &outgoing[a.cod] {
                if !self.table.contains_key(&(f, g)) {
                    report.push(Violation::MissingComposite { f, g });
                }
            }
        }
        for (&(f, g), &h) in &self.table {
            if !self.is_composable(f, g) {
                report.push(Violation::SpuriousEntry { f, g, h });
            } else if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) {
                report.push(Violation::CompositeType { f, g, h });
            }
        }
        for (f, a) in self.arrows.iter().enumerate() {
            for &g in &outgoing[a.cod] {
                let Some(fg) = self.product(f, g) else {
                    continue;
                };
                for &h in &outgoing[self.cod(g)] {
                    let (Some(gh), true) = (self.product(g, h), self.is_composable(fg, h)) else {
                        continue;
                    };
                    if !self.is_composable(f, gh) {
                        continue;
                    }
                    if let (Some(left), Some(right)) = (self.product(fg, h), self.product(f, gh)) {
                        if left != right {
                            report.push(Violation::NonAssociative {
                                f,
                                g,
                                h,
                                left,
                                right,
                            });
                        }
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Closure of `seeds` under composition inside `self`.
    pub fn close_subset(&self, seeds: &ArrowSet) -> ArrowSet {
        let mut closed = seeds.clone();
        let mut frontier: Vec<ArrowId> = seeds.iter().copied().collect();
        while let Some(f) = frontier.pop() {
            let current: Vec<ArrowId> = closed.iter().copied().collect();
            for g in current {
                for (a, b) in [(f, g), (g, f)] {
                    if self.is_composable(a, b) {
                        if let Some(h) = self.product(a, b) {
                            if closed.insert(h) {
                                frontier.push(h);
                            }
                        }
                    }
                }
            }
        }
        closed
    }

    /// The sub-semigroupoid generated by `seeds`, reindexed densely.
    /// Returns the sub-semigroupoid and, for each of its arrows, the original id.
    pub fn generated_subsemigroupoid(&self, seeds: &ArrowSet) -> (Semigroupoid, Vec<ArrowId>) {
        let closed = self.close_subset(seeds);
        let objects: BTreeSet<ObjectId> = closed
            .iter()
            .flat_map(|&a| [self.dom(a), self.cod(a)])
            .collect();
        let object_index: BTreeMap<ObjectId, ObjectId> =
            objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let original: Vec<ArrowId> = closed.iter().copied().collect();
        let arrow_index: BTreeMap<ArrowId, ArrowId> =
            original.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let sub_objects = objects.iter().map(|&o| self.objects[o].clone()).collect();
        let sub_arrows = original
            .iter()
            .map(|&a| Arrow {
                dom: object_index[&self.dom(a)],
                cod: object_index[&self.cod(a)],
                label: self.arrows[a].label.clone(),
            })
            .collect();
        let mut table = BTreeMap::new();
        for &f in &original {
            for &g in &original {
                if let Some(h) = self.product(f, g) {
                    table.insert((arrow_index[&f], arrow_index[&g]), arrow_index[&h]);
                }
            }
        }
        let sub = Semigroupoid {
            objects: sub_objects,
            arrows: sub_arrows,
            table,
        };
        (sub, original)
    }

    /// Whether `e` acts as a two-sided identity on every arrow of `scope` it is
    /// composable with: `e·a = a` when `cod(e) = dom(a)`, `a·e = a` when `cod(a) = dom(e)`.
    pub fn acts_as_identity_on(&self, e: ArrowId, scope: &ArrowSet) -> bool {
        scope.iter().all(|&a| {
            let left = !self.is_composable(e, a) || self.product(e, a) == Some(a);
            let right = !self.is_composable(a, e) || self.product(a, e) == Some(a);
            left && right
        })
    }

    pub fn label_set(&self, set: &ArrowSet) -> String {
        let labels: Vec<&str> = set.iter().map(|&a| self.arrow_label(a)).collect();
        format!("{{{}}}", labels.join(", "))
    }
}

impl fmt::Display for Semigroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "semigroupoid with {} objects and {} arrows",
            self.objects.len(),
            self.arrows.len()
        )
    }
}

/// Small builder used by fixtures and tests to write tables by label.
#[derive(Default)]
pub struct SemigroupoidBuilder {
    objects: Vec<Object>,
    arrows: Vec<Arrow>,
    table: BTreeMap<(ArrowId, ArrowId), ArrowId>,
}

impl SemigroupoidBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, label: &str) -> Self {
        self.objects.push(Object {
            label: label.to_string(),
        });
        self
    }

    pub fn arrow(mut self, label: &str, dom: &str, cod: &str) -> Self {
        let find = |l: &str| {
            self.objects
                .iter()
                .position(|o| o.label == l)
                .unwrap_or_else(|| panic!("unknown object {l}"))
        };
        let (dom, cod) = (find(dom), find(cod));
        self.arrows.push(Arrow {
            dom,
            cod,
            label: label.to_string(),
        });
        self
    }

    pub fn compose(mut self, f: &str, g: &str, h: &str) -> Self {
        let find = |l: &str| {
            self.arrows
                .iter()
                .position(|a| a.label == l)
                .unwrap_or_else(|| panic!("unknown arrow {l}"))
        };
        let key = (find(f), find(g));
        let value = find(h);
        self.table.insert(key, value);
        self
    }

    pub fn build(self) -> Result<Semigroupoid> {
        Semigroupoid::new(self.objects, self.arrows, self.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_flop() -> Semigroupoid {
        let mut b = SemigroupoidBuilder::new()
            .object("*")
            .arrow("r", "*", "*")
            .arrow("w0", "*", "*")
            .arrow("w1", "*", "*");
        for (f, g, h) in [
            ("r", "r", "r"),
            ("r", "w0", "w0"),
            ("r", "w1", "w1"),
            ("w0", "r", "w0"),
            ("w0", "w0", "w0"),
            ("w0", "w1", "w1"),
            ("w1", "r", "w1"),
            ("w1", "w0", "w0"),
            ("w1", "w1", "w1"),
        ] {
            b = b.compose(f, g, h);
        }
        b.build().unwrap()
    }

    fn fig2() -> Semigroupoid {
        let mut b = SemigroupoidBuilder::new()
            .object("X")
            .object("Y")
            .arrow("a", "X", "X")
            .arrow("b", "X", "X")
            .arrow("c", "X", "Y")
            .arrow("d", "X", "Y")
            .arrow("e", "X", "Y")
            .arrow("f", "Y", "Y");
        let rows = [
            ("a", ["a", "b", "c", "d", "e"]),
            ("b", ["b", "a", "d", "c", "e"]),
        ];
        for (f, row) in rows {
            for (g, h) in ["a", "b", "c", "d", "e"].iter().zip(row) {
                b = b.compose(f, g, h);
            }
        }
        for f in ["c", "d", "e"] {
            b = b.compose(f, "f", "e");
        }
        b = b.compose("f", "f", "f");
        b.build().unwrap()
    }

    fn id(s: &Semigroupoid, l: &str) -> ArrowId {
        s.arrow_by_label(l).unwrap()
    }

    fn set(s: &Semigroupoid, ls: &[&str]) -> ArrowSet {
        ls.iter().map(|l| id(s, l)).collect()
    }

    #[test]
    fn flip_flop_is_valid() {
        assert!(flip_flop().validate().is_empty());
        assert_eq!(flip_flop().compose(1, 2), Ok(2));
    }

    #[test]
    fn removing_an_entry_reports_the_missing_pair() {
        let s = flip_flop();
        let mut table = s.table().clone();
        table.remove(&(1, 2));
        let broken = Semigroupoid::new(s.objects().to_vec(), s.arrows().to_vec(), table).unwrap();
        let report = broken.validate();
        assert!(report.contains(&Violation::MissingComposite { f: 1, g: 2 }));
    }

    #[test]
    fn fig2_compose_and_hom_sets() {
        let s = fig2();
        assert!(s.validate().is_empty());
        assert_eq!(s.compose(id(&s, "b"), id(&s, "c")), Ok(id(&s, "d")));
        assert!(matches!(
            s.compose(id(&s, "c"), id(&s, "a")),
            Err(Error::NotComposable { .. })
        ));
        assert_eq!(s.hom_set(0, 1), set(&s, &["c", "d", "e"]));
        assert!(s.hom_set(1, 0).is_empty());
    }

    #[test]
    fn set_wise_composition() {
        let s = fig2();
        assert_eq!(
            s.compose_sets(&set(&s, &["a", "b"]), &set(&s, &["c", "e"])),
            set(&s, &["c", "d", "e"])
        );
        assert!(s
            .compose_sets(&set(&s, &["c"]), &set(&s, &["a"]))
            .is_empty());
        assert!(s
            .compose_sets(&ArrowSet::new(), &set(&s, &["a"]))
            .is_empty());
    }

    #[test]
    fn dangling_references_are_structural_errors() {
        let err = Semigroupoid::new(
            vec![Object { label: "X".into() }],
            vec![Arrow {
                dom: 0,
                cod: 3,
                label: "a".into(),
            }],
            BTreeMap::new(),
        );
        assert_eq!(
            err,
            Err(Error::DanglingObject {
                arrow: 0,
                object: 3
            })
        );
    }

    #[test]
    fn non_associative_table_is_reported() {
        // Two arrows on one object, with a table that is closed but not associative.
        let s = SemigroupoidBuilder::new()
            .object("*")
            .arrow("p", "*", "*")
            .arrow("q", "*", "*")
            .compose("p", "p", "q")
            .compose("p", "q", "p")
            .compose("q", "p", "p")
            .compose("q", "q", "p")
            .build()
            .unwrap();
        assert!(s
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::NonAssociative { .. })));
    }

    #[test]
    fn empty_semigroupoid_is_valid() {
        assert!(Semigroupoid::empty().validate().is_empty());
    }
}

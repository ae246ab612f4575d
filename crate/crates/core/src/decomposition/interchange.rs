use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroupoid::{ArrowId, ArrowSet, ObjectId, Semigroupoid};

/// Connecting arrows for `f: X → Y` and `g: Z → U` with
/// `f = x_to_z·g·u_to_y` and `g = z_to_x·f·y_to_u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InterchangeWitness {
    pub x_to_z: ArrowId,
    pub z_to_x: ArrowId,
    pub y_to_u: ArrowId,
    pub u_to_y: ArrowId,
}

impl InterchangeWitness {
    /// The same families read as a witness for `(g, f)`.
    pub fn swapped(self) -> Self {
        Self {
            x_to_z: self.z_to_x,
            z_to_x: self.x_to_z,
            y_to_u: self.u_to_y,
            u_to_y: self.y_to_u,
        }
    }
}

fn path(s: &Semigroupoid, arrows: &[ArrowId]) -> Option<ArrowId> {
    let steps: Vec<Option<ArrowId>> = arrows.iter().map(|&a| Some(a)).collect();
    s.compose_path(&steps)
}

/// Checks every equation of the definition, types included.
pub fn check_interchange(s: &Semigroupoid, f: ArrowId, g: ArrowId, w: &InterchangeWitness) -> bool {
    let (x, y, z, u) = (s.dom(f), s.cod(f), s.dom(g), s.cod(g));
    let typed = [
        (w.x_to_z, x, z),
        (w.z_to_x, z, x),
        (w.y_to_u, y, u),
        (w.u_to_y, u, y),
    ]
    .iter()
    .all(|&(a, d, c)| s.dom(a) == d && s.cod(a) == c);
    typed
        && path(s, &[w.x_to_z, g, w.u_to_y]) == Some(f)
        && path(s, &[w.z_to_x, f, w.y_to_u]) == Some(g)
        && path(s, &[w.x_to_z, w.z_to_x, f]) == Some(f)
        && path(s, &[f, w.y_to_u, w.u_to_y]) == Some(f)
        && path(s, &[w.z_to_x, w.x_to_z, g]) == Some(g)
        && path(s, &[g, w.u_to_y, w.y_to_u]) == Some(g)
}

/// First witness in lexicographic order of `(x_to_z, z_to_x, y_to_u, u_to_y)`.
pub fn interchangeable(s: &Semigroupoid, f: ArrowId, g: ArrowId) -> Option<InterchangeWitness> {
    let (x, y, z, u) = (s.dom(f), s.cod(f), s.dom(g), s.cod(g));
    let left: Vec<(ArrowId, ArrowId)> = s
        .hom_set(x, z)
        .into_iter()
        .cartesian_product(s.hom_set(z, x).into_iter().collect::<Vec<_>>())
        .filter(|&(xz, zx)| path(s, &[xz, zx, f]) == Some(f) && path(s, &[zx, xz, g]) == Some(g))
        .collect();
    if left.is_empty() {
        return None;
    }
    let right: Vec<(ArrowId, ArrowId)> = s
        .hom_set(y, u)
        .into_iter()
        .cartesian_product(s.hom_set(u, y).into_iter().collect::<Vec<_>>())
        .filter(|&(yu, uy)| path(s, &[f, yu, uy]) == Some(f) && path(s, &[g, uy, yu]) == Some(g))
        .collect();
    left.iter()
        .cartesian_product(right.iter())
        .map(
            |(&(x_to_z, z_to_x), &(y_to_u, u_to_y))| InterchangeWitness {
                x_to_z,
                z_to_x,
                y_to_u,
                u_to_y,
            },
        )
        .find(|w| check_interchange(s, f, g, w))
}

/// Green's D-relation (equal to J in a finite semigroup), by brute force in `S¹`.
pub fn d_relation(s: &Semigroupoid, f: ArrowId, g: ArrowId) -> Result<bool> {
    if s.object_count() != 1 {
        return Err(Error::Unsupported(format!(
            "the D-relation needs a one-object semigroupoid, got {} objects",
            s.object_count()
        )));
    }
    let ideal = |a: ArrowId| -> BTreeSet<ArrowId> {
        let with_one: Vec<Option<ArrowId>> = std::iter::once(None)
            .chain(s.all_arrows().into_iter().map(Some))
            .collect();
        let mut out = BTreeSet::new();
        for &l in &with_one {
            for &r in &with_one {
                if let Some(p) = s.compose_path(&[l, Some(a), r]) {
                    out.insert(p);
                }
            }
        }
        out
    };
    Ok(ideal(g).contains(&f) && ideal(f).contains(&g))
}

/// An isomorphism of the supporting objects of two arrow sets `P` and `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetEquivalenceWitness {
    /// `σ: Ob|_P → Ob|_Q`.
    pub sigma: BTreeMap<ObjectId, ObjectId>,
    /// `X ↦ t_{X→σX}`.
    pub forward: BTreeMap<ObjectId, ArrowId>,
    /// `X ↦ t_{σX→X}`.
    pub backward: BTreeMap<ObjectId, ArrowId>,
    /// `p ↦ t_{σX→X}·p·t_{Y→σY}` for `p: X → Y`.
    pub bijection: BTreeMap<ArrowId, ArrowId>,
}

impl SetEquivalenceWitness {
    /// Conjugates an arrow with both ends in the domain of `σ`.
    pub fn conjugate(&self, s: &Semigroupoid, p: ArrowId) -> Option<ArrowId> {
        let back = *self.backward.get(&s.dom(p))?;
        let fwd = *self.forward.get(&s.cod(p))?;
        path(s, &[back, p, fwd])
    }

    /// Conjugates back from `Q` to `P`.
    pub fn unconjugate(&self, s: &Semigroupoid, q: ArrowId) -> Option<ArrowId> {
        let x = self.preimage_object(s.dom(q))?;
        let y = self.preimage_object(s.cod(q))?;
        path(s, &[self.forward[&x], q, self.backward[&y]])
    }

    fn preimage_object(&self, target: ObjectId) -> Option<ObjectId> {
        self.sigma
            .iter()
            .find(|(_, &t)| t == target)
            .map(|(&x, _)| x)
    }

    pub fn inverse(&self, s: &Semigroupoid, p: &ArrowSet, q: &ArrowSet) -> Option<Self> {
        let sigma = self.sigma.iter().map(|(&x, &y)| (y, x)).collect();
        let forward = self
            .sigma
            .iter()
            .map(|(x, y)| (*y, self.backward[x]))
            .collect();
        let backward = self
            .sigma
            .iter()
            .map(|(x, y)| (*y, self.forward[x]))
            .collect();
        finish(s, q, p, sigma, forward, backward)
    }

    /// `self: P → Q` followed by `next: Q → R`.
    pub fn then(&self, next: &Self, s: &Semigroupoid, p: &ArrowSet, r: &ArrowSet) -> Option<Self> {
        let mut sigma = BTreeMap::new();
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (&x, &y) in &self.sigma {
            let z = *next.sigma.get(&y)?;
            sigma.insert(x, z);
            forward.insert(x, path(s, &[self.forward[&x], next.forward[&y]])?);
            backward.insert(x, path(s, &[next.backward[&y], self.backward[&x]])?);
        }
        finish(s, p, r, sigma, forward, backward)
    }
}

pub fn supporting_objects(s: &Semigroupoid, p: &ArrowSet) -> BTreeSet<ObjectId> {
    p.iter().flat_map(|&a| [s.dom(a), s.cod(a)]).collect()
}

fn roundtrips_hold(s: &Semigroupoid, scope: &ArrowSet, fwd: ArrowId, bwd: ArrowId) -> bool {
    match (path(s, &[fwd, bwd]), path(s, &[bwd, fwd])) {
        (Some(there), Some(back)) => {
            s.acts_as_identity_on(there, scope) && s.acts_as_identity_on(back, scope)
        }
        _ => false,
    }
}

/// Fills in the bijection and checks every condition; `None` if any fails.
fn finish(
    s: &Semigroupoid,
    p: &ArrowSet,
    q: &ArrowSet,
    sigma: BTreeMap<ObjectId, ObjectId>,
    forward: BTreeMap<ObjectId, ArrowId>,
    backward: BTreeMap<ObjectId, ArrowId>,
) -> Option<SetEquivalenceWitness> {
    let w = SetEquivalenceWitness {
        sigma,
        forward,
        backward,
        bijection: BTreeMap::new(),
    };
    let bijection = bijection_onto(s, &w, p, q)?;
    let w = SetEquivalenceWitness { bijection, ..w };
    verify_set_witness(s, p, q, &w).then_some(w)
}

fn bijection_onto(
    s: &Semigroupoid,
    w: &SetEquivalenceWitness,
    p: &ArrowSet,
    q: &ArrowSet,
) -> Option<BTreeMap<ArrowId, ArrowId>> {
    let mut map = BTreeMap::new();
    for &a in p {
        map.insert(a, w.conjugate(s, a)?);
    }
    let image: ArrowSet = map.values().copied().collect();
    (image == *q && image.len() == p.len()).then_some(map)
}

/// Rechecks a witness from scratch.
pub fn verify_set_witness(
    s: &Semigroupoid,
    p: &ArrowSet,
    q: &ArrowSet,
    w: &SetEquivalenceWitness,
) -> bool {
    let op = supporting_objects(s, p);
    let oq = supporting_objects(s, q);
    let domain: BTreeSet<ObjectId> = w.sigma.keys().copied().collect();
    let range: BTreeSet<ObjectId> = w.sigma.values().copied().collect();
    if domain != op || range != oq || range.len() != domain.len() {
        return false;
    }
    let scope: ArrowSet = p.union(q).copied().collect();
    for (&x, &y) in &w.sigma {
        let (Some(&fwd), Some(&bwd)) = (w.forward.get(&x), w.backward.get(&x)) else {
            return false;
        };
        let typed = s.dom(fwd) == x && s.cod(fwd) == y && s.dom(bwd) == y && s.cod(bwd) == x;
        if !typed || !roundtrips_hold(s, &scope, fwd, bwd) {
            return false;
        }
    }
    let Some(forward_map) = bijection_onto(s, w, p, q) else {
        return false;
    };
    if forward_map != w.bijection {
        return false;
    }
    let back: Option<ArrowSet> = q.iter().map(|&b| w.unconjugate(s, b)).collect();
    back.as_ref() == Some(p)
}

/// Searches object bijections in lexicographic order, then connecting arrow
/// families in id order.
pub fn preimage_sets_equivalent(
    s: &Semigroupoid,
    p: &ArrowSet,
    q: &ArrowSet,
) -> Option<SetEquivalenceWitness> {
    if p.is_empty() || q.is_empty() || p.len() != q.len() {
        return None;
    }
    let op: Vec<ObjectId> = supporting_objects(s, p).into_iter().collect();
    let oq: Vec<ObjectId> = supporting_objects(s, q).into_iter().collect();
    if op.len() != oq.len() {
        return None;
    }
    let scope: ArrowSet = p.union(q).copied().collect();
    let mut families: BTreeMap<(ObjectId, ObjectId), Vec<(ArrowId, ArrowId)>> = BTreeMap::new();
    for &x in &op {
        for &y in &oq {
            let pairs = s
                .hom_set(x, y)
                .into_iter()
                .cartesian_product(s.hom_set(y, x).into_iter().collect::<Vec<_>>())
                .filter(|&(fwd, bwd)| roundtrips_hold(s, &scope, fwd, bwd))
                .collect();
            families.insert((x, y), pairs);
        }
    }
    for perm in oq.iter().copied().permutations(oq.len()) {
        let sigma: BTreeMap<ObjectId, ObjectId> =
            op.iter().copied().zip(perm.iter().copied()).collect();
        if op.iter().any(|&x| families[&(x, sigma[&x])].is_empty()) {
            continue;
        }
        let mut search = Search {
            s,
            p,
            q,
            op: &op,
            sigma: &sigma,
            families: &families,
            forward: BTreeMap::new(),
            backward: BTreeMap::new(),
        };
        if let Some(w) = search.run(0) {
            return Some(w);
        }
    }
    None
}

struct Search<'a> {
    s: &'a Semigroupoid,
    p: &'a ArrowSet,
    q: &'a ArrowSet,
    op: &'a [ObjectId],
    sigma: &'a BTreeMap<ObjectId, ObjectId>,
    families: &'a BTreeMap<(ObjectId, ObjectId), Vec<(ArrowId, ArrowId)>>,
    forward: BTreeMap<ObjectId, ArrowId>,
    backward: BTreeMap<ObjectId, ArrowId>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> Option<SetEquivalenceWitness> {
        if depth == self.op.len() {
            return finish(
                self.s,
                self.p,
                self.q,
                self.sigma.clone(),
                self.forward.clone(),
                self.backward.clone(),
            );
        }
        let x = self.op[depth];
        for &(fwd, bwd) in &self.families[&(x, self.sigma[&x])] {
            self.forward.insert(x, fwd);
            self.backward.insert(x, bwd);
            if self.consistent() {
                if let Some(w) = self.run(depth + 1) {
                    return Some(w);
                }
            }
        }
        self.forward.remove(&x);
        self.backward.remove(&x);
        None
    }

    /// Every arrow of `P` whose ends are assigned conjugates into `Q`.
    fn consistent(&self) -> bool {
        let s = self.s;
        self.p.iter().all(
            |&a| match (self.backward.get(&s.dom(a)), self.forward.get(&s.cod(a))) {
                (Some(&back), Some(&fwd)) => {
                    path(s, &[back, a, fwd]).is_some_and(|c| self.q.contains(&c))
                }
                _ => true,
            },
        )
    }
}

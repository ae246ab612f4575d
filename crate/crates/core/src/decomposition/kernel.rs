use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::interchange::{preimage_sets_equivalent, SetEquivalenceWitness};
use super::tracing::preimages_of_valid;
use crate::error::{Error, Result};
use crate::relational::RelationalFunctor;
use crate::semigroupoid::{ArrowId, ArrowSet, ObjectId, Semigroupoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Identify preimage sets related by a set-equivalence witness.
    Sets,
    /// Conjugate every arrow onto representative objects of isomorphic objects.
    Objects,
    /// Keep every preimage: the cascade is the tracing product.
    None,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sets" => Ok(Strategy::Sets),
            "objects" => Ok(Strategy::Objects),
            "none" => Ok(Strategy::None),
            other => Err(format!(
                "unknown strategy `{other}` (expected sets, objects or none)"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Sets => "sets",
            Strategy::Objects => "objects",
            Strategy::None => "none",
        })
    }
}

/// Which member of an equivalence class becomes its representative.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentativeRule {
    #[default]
    SmallestMinId,
    LargestMinId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOptions {
    pub strategy: Strategy,
    pub representative: RepresentativeRule,
    /// Hand-written codecs `top ↦ (preimage arrow ↦ kernel arrow)`; they replace
    /// the search for the listed top arrows.
    pub explicit: BTreeMap<ArrowId, BTreeMap<ArrowId, ArrowId>>,
}

impl KernelOptions {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            representative: RepresentativeRule::default(),
            explicit: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodecSource {
    Identity,
    SetWitness(SetEquivalenceWitness),
    /// Per object: `(to_rep, from_rep)`, `None` for the representative itself.
    ObjectConjugation(BTreeMap<ObjectId, (Option<ArrowId>, Option<ArrowId>)>),
    Explicit,
}

/// `enc_f` and `dec_f` for one top arrow `f`, as explicit finite maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopCodec {
    pub top: ArrowId,
    pub scope: ArrowSet,
    pub enc: BTreeMap<ArrowId, ArrowId>,
    pub dec: BTreeMap<ArrowId, ArrowId>,
    pub via: CodecSource,
}

impl TopCodec {
    fn identity(top: ArrowId, scope: &ArrowSet) -> Self {
        let enc: BTreeMap<ArrowId, ArrowId> = scope.iter().map(|&a| (a, a)).collect();
        Self {
            top,
            scope: scope.clone(),
            dec: enc.clone(),
            enc,
            via: CodecSource::Identity,
        }
    }

    /// From an injective encoding map; `None` if it is not injective.
    fn from_enc(top: ArrowId, enc: BTreeMap<ArrowId, ArrowId>, via: CodecSource) -> Option<Self> {
        let dec: BTreeMap<ArrowId, ArrowId> = enc.iter().map(|(&a, &b)| (b, a)).collect();
        (dec.len() == enc.len()).then(|| Self {
            top,
            scope: enc.keys().copied().collect(),
            enc,
            dec,
            via,
        })
    }

    pub fn encode(&self, a: ArrowId) -> Result<ArrowId> {
        self.enc.get(&a).copied().ok_or(Error::Scope {
            top: self.top,
            arrow: a,
        })
    }

    pub fn decode(&self, a: ArrowId) -> Result<ArrowId> {
        self.dec.get(&a).copied().ok_or(Error::Scope {
            top: self.top,
            arrow: a,
        })
    }

    pub fn encoded_set(&self) -> ArrowSet {
        self.enc.values().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Codec {
    pub tops: Vec<TopCodec>,
}

impl Codec {
    pub fn encode(&self, f: ArrowId, a: ArrowId) -> Result<ArrowId> {
        self.get(f)?.encode(a)
    }

    pub fn decode(&self, f: ArrowId, a: ArrowId) -> Result<ArrowId> {
        self.get(f)?.decode(a)
    }

    fn get(&self, f: ArrowId) -> Result<&TopCodec> {
        self.tops.get(f).ok_or(Error::DanglingArrow(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelClass {
    /// The top arrow whose preimage is kept.
    pub representative: ArrowId,
    pub members: Vec<ArrowId>,
    /// `[φ⁻¹(f)]`: the arrows kept for the class.
    pub arrows: ArrowSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    pub strategy: Strategy,
    pub classes: Vec<KernelClass>,
    pub codec: Codec,
    pub preimages: Vec<ArrowSet>,
    pub source: Arc<Semigroupoid>,
}

impl Kernel {
    /// Kept arrows counted per class, so overlapping classes count twice.
    pub fn arrow_count(&self) -> usize {
        self.classes.iter().map(|c| c.arrows.len()).sum()
    }

    pub fn arrow_set(&self) -> ArrowSet {
        self.classes
            .iter()
            .flat_map(|c| c.arrows.iter().copied())
            .collect()
    }

    /// The kernel as a semigroupoid: the kept arrows closed under composition
    /// in the source. Also returns the source id of each kernel arrow.
    pub fn semigroupoid(&self) -> (Semigroupoid, Vec<ArrowId>) {
        self.source.generated_subsemigroupoid(&self.arrow_set())
    }

    pub fn class_of(&self, top: ArrowId) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&top))
    }

    /// Whether any two top arrows share a class.
    pub fn compressed(&self) -> bool {
        self.classes.iter().any(|c| c.members.len() > 1)
    }
}

type Member = (ArrowId, Option<SetEquivalenceWitness>);

fn min_id(p: &ArrowSet) -> ArrowId {
    p.iter().next().copied().unwrap_or(ArrowId::MAX)
}

fn pick_representative(members: &[ArrowId], pre: &[ArrowSet], rule: RepresentativeRule) -> ArrowId {
    let key = |&f: &ArrowId| (min_id(&pre[f]), f);
    let it = members.iter().copied();
    match rule {
        RepresentativeRule::SmallestMinId => it.min_by_key(key),
        RepresentativeRule::LargestMinId => it.max_by_key(key),
    }
    .expect("classes are non-empty")
}

/// Groups preimages and builds the codec according to `options`.
pub fn build_kernel(phi: &RelationalFunctor, options: &KernelOptions) -> Result<Kernel> {
    let pre = preimages_of_valid(phi)?;
    let s = phi.source();
    let mut explicit_codecs = BTreeMap::new();
    for (&top, map) in &options.explicit {
        explicit_codecs.insert(top, explicit_codec(top, map, pre.get(top))?);
    }
    let searched: Vec<ArrowId> = (0..pre.len())
        .filter(|f| !explicit_codecs.contains_key(f))
        .collect();
    let (mut classes, mut codecs) = match options.strategy {
        Strategy::None => {
            let classes = searched
                .iter()
                .map(|&f| KernelClass {
                    representative: f,
                    members: vec![f],
                    arrows: pre[f].clone(),
                })
                .collect();
            let codecs = searched
                .iter()
                .map(|&f| (f, TopCodec::identity(f, &pre[f])))
                .collect();
            (classes, codecs)
        }
        Strategy::Sets => sets_classes(s, &pre, &searched, options.representative),
        Strategy::Objects => objects_classes(s, &pre, &searched, options.representative),
    };
    for (top, codec) in explicit_codecs {
        let arrows = codec.encoded_set();
        match classes.iter_mut().find(|c| c.arrows == arrows) {
            Some(class) => class.members.push(top),
            None => classes.push(KernelClass {
                representative: top,
                members: vec![top],
                arrows,
            }),
        }
        codecs.insert(top, codec);
    }
    for class in &mut classes {
        class.members.sort_unstable();
    }
    classes.sort_by_key(|c| (min_id(&c.arrows), c.representative));
    let codec = Codec {
        tops: (0..pre.len())
            .map(|f| codecs.remove(&f).expect("every top has a codec"))
            .collect(),
    };
    Ok(Kernel {
        strategy: options.strategy,
        classes,
        codec,
        preimages: pre,
        source: phi.source_arc().clone(),
    })
}

fn explicit_codec(
    top: ArrowId,
    map: &BTreeMap<ArrowId, ArrowId>,
    scope: Option<&ArrowSet>,
) -> Result<TopCodec> {
    let bad = |reason: String| Error::BadCodec { top, reason };
    let scope = scope.ok_or_else(|| bad("no such top arrow".into()))?;
    let domain: ArrowSet = map.keys().copied().collect();
    if &domain != scope {
        return Err(bad(format!("covers {domain:?}, preimage is {scope:?}")));
    }
    TopCodec::from_enc(top, map.clone(), CodecSource::Explicit)
        .ok_or_else(|| bad("two arrows encode to the same arrow".into()))
}

type Classes = (Vec<KernelClass>, BTreeMap<ArrowId, TopCodec>);

fn witness_codec(top: ArrowId, w: SetEquivalenceWitness) -> TopCodec {
    TopCodec::from_enc(top, w.bijection.clone(), CodecSource::SetWitness(w))
        .expect("set witnesses are bijections")
}

/// Greedy grouping by set equivalence. Members reach the representative
/// directly or through a verified composite of witnesses via the first member;
/// a member that reaches it neither way is split off.
fn sets_classes(
    s: &Semigroupoid,
    pre: &[ArrowSet],
    tops: &[ArrowId],
    rule: RepresentativeRule,
) -> Classes {
    let mut order = tops.to_vec();
    order.sort_by_key(|&f| (min_id(&pre[f]), f));
    // anchor, members with witness anchor → member
    let mut groups: Vec<(ArrowId, Vec<Member>)> = Vec::new();
    for f in order {
        let joined = groups.iter_mut().find_map(|(anchor, members)| {
            preimage_sets_equivalent(s, &pre[*anchor], &pre[f]).map(|w| members.push((f, Some(w))))
        });
        if joined.is_none() {
            groups.push((f, vec![(f, None)]));
        }
    }
    let mut classes = Vec::new();
    let mut codecs = BTreeMap::new();
    let mut pending = Vec::new();
    for (anchor, members) in groups {
        let ids: Vec<ArrowId> = members.iter().map(|(f, _)| *f).collect();
        let rep = pick_representative(&ids, pre, rule);
        let anchor_to_rep = members
            .iter()
            .find(|(f, _)| *f == rep)
            .and_then(|(_, w)| w.clone());
        let mut kept = Vec::new();
        for (f, anchor_to_f) in &members {
            let f = *f;
            if f == rep {
                codecs.insert(f, TopCodec::identity(f, &pre[f]));
                kept.push(f);
                continue;
            }
            let witness = preimage_sets_equivalent(s, &pre[f], &pre[rep]).or_else(|| {
                if f == anchor {
                    return anchor_to_rep.clone();
                }
                // f → anchor → rep
                let to_anchor = anchor_to_f.as_ref()?.inverse(s, &pre[anchor], &pre[f])?;
                match &anchor_to_rep {
                    Some(w) => to_anchor.then(w, s, &pre[f], &pre[rep]),
                    None => Some(to_anchor),
                }
            });
            match witness {
                Some(w) => {
                    codecs.insert(f, witness_codec(f, w));
                    kept.push(f);
                }
                None => pending.push(f),
            }
        }
        classes.push(KernelClass {
            representative: rep,
            members: kept,
            arrows: pre[rep].clone(),
        });
    }
    for f in pending {
        codecs.insert(f, TopCodec::identity(f, &pre[f]));
        classes.push(KernelClass {
            representative: f,
            members: vec![f],
            arrows: pre[f].clone(),
        });
    }
    (classes, codecs)
}

/// `u: X → Y`, `v: Y → X` with `uv` acting as identity on every arrow at `X`
/// and `vu` on every arrow at `Y`.
pub fn object_isomorphism(
    s: &Semigroupoid,
    x: ObjectId,
    y: ObjectId,
) -> Option<(ArrowId, ArrowId)> {
    let all = s.all_arrows();
    for u in s.hom_set(x, y) {
        for v in s.hom_set(y, x) {
            let (Ok(uv), Ok(vu)) = (s.compose(u, v), s.compose(v, u)) else {
                continue;
            };
            if s.acts_as_identity_on(uv, &all) && s.acts_as_identity_on(vu, &all) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Representative object and `(to_rep, from_rep)` for every object.
pub fn object_classes(
    s: &Semigroupoid,
    rule: RepresentativeRule,
) -> BTreeMap<ObjectId, (ObjectId, Option<ArrowId>, Option<ArrowId>)> {
    let mut objects: Vec<ObjectId> = (0..s.object_count()).collect();
    if rule == RepresentativeRule::LargestMinId {
        objects.reverse();
    }
    let mut reps: Vec<ObjectId> = Vec::new();
    let mut out = BTreeMap::new();
    for x in objects {
        let found = reps
            .iter()
            .find_map(|&r| object_isomorphism(s, x, r).map(|(to, from)| (r, to, from)));
        match found {
            Some((r, to, from)) => {
                out.insert(x, (r, Some(to), Some(from)));
            }
            None => {
                reps.push(x);
                out.insert(x, (x, None, None));
            }
        }
    }
    out
}

/// Conjugates every preimage onto representative objects; tops whose encoded
/// sets coincide share a class. Falls back to set witnesses for a top whose
/// conjugation is not injective.
fn objects_classes(
    s: &Semigroupoid,
    pre: &[ArrowSet],
    tops: &[ArrowId],
    rule: RepresentativeRule,
) -> Classes {
    let objects = object_classes(s, rule);
    let mut codecs = BTreeMap::new();
    let mut fallback = Vec::new();
    for &f in tops {
        let mut enc = BTreeMap::new();
        let mut ok = true;
        for &a in &pre[f] {
            let (_, _, from) = objects[&s.dom(a)];
            let (_, to, _) = objects[&s.cod(a)];
            match s.compose_path(&[from, Some(a), to]) {
                Some(b) => {
                    enc.insert(a, b);
                }
                None => ok = false,
            }
        }
        let families = pre[f]
            .iter()
            .flat_map(|&a| [s.dom(a), s.cod(a)])
            .map(|x| (x, (objects[&x].1, objects[&x].2)))
            .collect();
        let codec = ok
            .then(|| TopCodec::from_enc(f, enc, CodecSource::ObjectConjugation(families)))
            .flatten()
            .filter(|c| conjugation_roundtrips(s, c, &objects));
        match codec {
            Some(c) => {
                codecs.insert(f, c);
            }
            None => fallback.push(f),
        }
    }
    let mut by_set: BTreeMap<ArrowSet, Vec<ArrowId>> = BTreeMap::new();
    for (&f, c) in &codecs {
        by_set.entry(c.encoded_set()).or_default().push(f);
    }
    let mut classes: Vec<KernelClass> = by_set
        .into_iter()
        .map(|(arrows, members)| KernelClass {
            representative: pick_representative(&members, pre, rule),
            members,
            arrows,
        })
        .collect();
    if !fallback.is_empty() {
        let (more, more_codecs) = sets_classes(s, pre, &fallback, rule);
        classes.extend(more);
        codecs.extend(more_codecs);
    }
    (classes, codecs)
}

/// `dec(a') = to_rep(dom)·a'·from_rep(cod)` has to recover every preimage arrow.
fn conjugation_roundtrips(
    s: &Semigroupoid,
    c: &TopCodec,
    objects: &BTreeMap<ObjectId, (ObjectId, Option<ArrowId>, Option<ArrowId>)>,
) -> bool {
    c.enc.iter().all(|(&a, &b)| {
        let (_, to, _) = objects[&s.dom(a)];
        let (_, _, from) = objects[&s.cod(a)];
        s.compose_path(&[to, Some(b), from]) == Some(a)
    })
}

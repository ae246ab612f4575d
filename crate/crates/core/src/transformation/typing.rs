use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{StateSet, Transformation, TransformationSemigroupoid};
use crate::error::{Error, Result};
use crate::relational::{validate_relational_morphism_ts, RelationalFunctor, RelationalMorphismTS};
use crate::semigroupoid::{Arrow, ArrowId, ArrowSet, Object, Semigroupoid};

fn require_one_object(ts: &TransformationSemigroupoid, what: &str) -> Result<()> {
    if ts.is_one_object() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} needs a one-object transformation semigroupoid, got {} objects",
            ts.state_sets().len()
        )))
    }
}

/// `{X·s | s ∈ S}` as sorted state-index subsets.
pub fn image_sets(ts: &TransformationSemigroupoid) -> Result<BTreeSet<Vec<usize>>> {
    require_one_object(ts, "image_sets")?;
    Ok(ts
        .transformations()
        .iter()
        .map(Transformation::image)
        .collect())
}

fn subset_label(ts: &TransformationSemigroupoid, subset: &[usize]) -> String {
    let names: Vec<&str> = subset.iter().map(|&x| ts.state_label(0, x)).collect();
    format!("{{{}}}", names.join(","))
}

/// Restriction of `t` to `subset`, as indices into the image subset.
fn restrict(t: &Transformation, subset: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut image: Vec<usize> = subset.iter().map(|&x| t.mapping[x]).collect();
    image.sort_unstable();
    image.dedup();
    let mapping = subset
        .iter()
        .map(|&x| {
            image
                .binary_search(&t.mapping[x])
                .expect("image contains x·t")
        })
        .collect();
    (image, mapping)
}

/// Image-set typing: one object per image set (the full state set always
/// included, first), arrows are restrictions of elements to each object, and
/// `φ` sends each element to its restrictions.
pub fn image_typed_semigroupoid(
    ts: &TransformationSemigroupoid,
) -> Result<(TransformationSemigroupoid, RelationalFunctor)> {
    let images = image_sets(ts)?;
    let n = ts.state_sets()[0].len();
    let full: Vec<usize> = (0..n).collect();
    let mut subsets = vec![full.clone()];
    let mut rest: Vec<Vec<usize>> = images.into_iter().filter(|s| *s != full).collect();
    rest.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    subsets.extend(rest);
    let object_of: HashMap<Vec<usize>, usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();

    let state_sets: Vec<StateSet> = subsets
        .iter()
        .map(|s| StateSet {
            label: subset_label(ts, s),
            states: s
                .iter()
                .map(|&x| ts.state_label(0, x).to_string())
                .collect(),
        })
        .collect();

    let mut arrows: Vec<(String, Transformation)> = Vec::new();
    let mut index: HashMap<Transformation, ArrowId> = HashMap::new();
    let mut arrow_map = vec![ArrowSet::new(); ts.arrow_count()];
    for (a, t) in ts.transformations().iter().enumerate() {
        for (obj, subset) in subsets.iter().enumerate() {
            let (image, mapping) = restrict(t, subset);
            let cod = object_of[&image];
            let r = Transformation::new(obj, cod, mapping);
            let id = *index.entry(r.clone()).or_insert_with(|| {
                arrows.push((format!("{}|{}", ts.label(a), state_sets[obj].label), r));
                arrows.len() - 1
            });
            arrow_map[a].insert(id);
        }
    }
    let typed = TransformationSemigroupoid::new(state_sets, arrows)?;
    let phi = RelationalFunctor::new(
        Arc::new(ts.abstract_().clone()),
        Arc::new(typed.abstract_().clone()),
        arrow_map,
    )?;
    Ok((typed, phi))
}

/// The action semigroupoid of a one-object transformation semigroup: one object
/// per state `y`, one arrow `(y, t): y → y·t` per state and element, with
/// `(y, t)(y·t, t') = (y, tt')`. Arrow `(y, t)` has id `y·|T| + t`.
pub fn action_semigroupoid(ts: &TransformationSemigroupoid) -> Result<Semigroupoid> {
    require_one_object(ts, "action_semigroupoid")?;
    let states = &ts.state_sets()[0].states;
    let m = ts.arrow_count();
    let objects = states.iter().map(|s| Object { label: s.clone() }).collect();
    let mut arrows = Vec::with_capacity(states.len() * m);
    for (y, state) in states.iter().enumerate() {
        for t in 0..m {
            arrows.push(Arrow {
                dom: y,
                cod: ts.transformation(t).mapping[y],
                label: format!("{}@{}", ts.label(t), state),
            });
        }
    }
    let mut table = BTreeMap::new();
    for y in 0..states.len() {
        for t in 0..m {
            let yt = ts.transformation(t).mapping[y];
            for t2 in 0..m {
                if let Some(tt2) = ts.abstract_().product(t, t2) {
                    table.insert((y * m + t, yt * m + t2), y * m + tt2);
                }
            }
        }
    }
    Semigroupoid::new(objects, arrows, table)
}

/// Result of pinhole typing a relational morphism of transformation semigroups.
#[derive(Clone, Debug)]
pub struct Pinhole {
    /// Objects are the preimages `pre(y) = {x : y ∈ φ0(x)}`; arrows are restrictions.
    pub ts: TransformationSemigroupoid,
    /// Top state of each object of `ts`.
    pub top_state: Vec<usize>,
    /// The action semigroupoid of the target: the top level with states as objects.
    pub top: Arc<Semigroupoid>,
    /// `ψ`: restriction arrow ↦ the top arrows `(y, t)` it was copied under.
    pub psi: RelationalFunctor,
    /// `ψ` followed by forgetting the top state, onto the target's abstract table.
    pub flat: RelationalFunctor,
}

/// Copies the dynamics of the source into the preimages of the target states.
pub fn pinhole_typed_semigroupoid(m: &RelationalMorphismTS) -> Result<Pinhole> {
    let report = validate_relational_morphism_ts(m)?;
    if let Some(v) = report.first() {
        return Err(Error::InvalidMorphism(v.describe(m)));
    }
    let src = &m.source;
    let tgt = &m.target;
    let n_top = tgt.state_sets()[0].len();
    let mut pre: Vec<Vec<usize>> = vec![Vec::new(); n_top];
    for (x, img) in m.state_rel.iter().enumerate() {
        for &y in img {
            pre[y].push(x);
        }
    }
    let top_state: Vec<usize> = (0..n_top).filter(|&y| !pre[y].is_empty()).collect();
    let object_of: BTreeMap<usize, usize> =
        top_state.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let state_sets: Vec<StateSet> = top_state
        .iter()
        .map(|&y| StateSet {
            label: subset_label(src, &pre[y]),
            states: pre[y]
                .iter()
                .map(|&x| src.state_label(0, x).to_string())
                .collect(),
        })
        .collect();

    let top = Arc::new(action_semigroupoid(tgt)?);
    let n_tgt_arrows = tgt.arrow_count();
    let mut arrows: Vec<(String, Transformation)> = Vec::new();
    let mut index: HashMap<Transformation, ArrowId> = HashMap::new();
    let mut psi_map: Vec<ArrowSet> = Vec::new();
    let mut flat_map: Vec<ArrowSet> = Vec::new();
    for (s, ts_map) in src.transformations().iter().enumerate() {
        for &y in &top_state {
            for &t in &m.arrow_rel[s] {
                let y2 = tgt.transformation(t).mapping[y];
                let dom_states = &pre[y];
                let cod_states = &pre[y2];
                let mapping = dom_states
                    .iter()
                    .map(|&x| {
                        let xs = ts_map.mapping[x];
                        cod_states
                            .iter()
                            .position(|&z| z == xs)
                            .expect("compatible actions keep x·s in pre(y·t)")
                    })
                    .collect();
                let r = Transformation::new(object_of[&y], object_of[&y2], mapping);
                let id = *index.entry(r.clone()).or_insert_with(|| {
                    arrows.push((format!("{}_{}", src.label(s), tgt.state_label(0, y)), r));
                    psi_map.push(ArrowSet::new());
                    flat_map.push(ArrowSet::new());
                    arrows.len() - 1
                });
                psi_map[id].insert(y * n_tgt_arrows + t);
                flat_map[id].insert(t);
            }
        }
    }
    let ts = TransformationSemigroupoid::new(state_sets, arrows)?;
    if let Some(v) = ts.validate().first() {
        return Err(match v {
            crate::semigroupoid::Violation::MissingComposite { f, g } => {
                Error::NotClosed(ts.label(*f).to_string(), ts.label(*g).to_string())
            }
            other => Error::InvalidFunctor(other.describe(ts.abstract_())),
        });
    }
    let p = Arc::new(ts.abstract_().clone());
    let psi = RelationalFunctor::new(p.clone(), top, psi_map)?;
    if let Some(v) = psi.validate().first() {
        return Err(Error::InvalidFunctor(v.describe(&psi)));
    }
    let flat = RelationalFunctor::new(p, Arc::new(tgt.abstract_().clone()), flat_map)?;
    Ok(Pinhole {
        ts,
        top_state,
        top: psi.target_arc().clone(),
        psi,
        flat,
    })
}

/// The seed morphism of the holonomy method: `x ↦ X∖{x}`, permutations to
/// themselves, any other element to the constant maps onto states outside its image.
pub fn holonomy_seed_morphism(ts: &TransformationSemigroupoid) -> Result<RelationalMorphismTS> {
    require_one_object(ts, "holonomy_seed_morphism")?;
    let n = ts.state_sets()[0].len();
    if n < 2 {
        return Err(Error::Degenerate(
            "a single state has no complement to map to".into(),
        ));
    }
    let mut generators: Vec<(String, Transformation)> = Vec::new();
    let mut images: Vec<Vec<Transformation>> = Vec::new();
    for (a, t) in ts.transformations().iter().enumerate() {
        let img = if t.is_permutation() {
            generators.push((ts.label(a).to_string(), t.clone()));
            vec![t.clone()]
        } else {
            let image = t.image();
            let mut consts = Vec::new();
            for z in (0..n).filter(|z| !image.contains(z)) {
                let c = Transformation::endo(vec![z; n]);
                generators.push((format!("c_{}", ts.state_label(0, z)), c.clone()));
                consts.push(c);
            }
            consts
        };
        images.push(img);
    }
    let target =
        TransformationSemigroupoid::generate_closure(ts.state_sets().to_vec(), generators)?;
    let arrow_rel = images
        .iter()
        .map(|img| {
            img.iter()
                .map(|t| target.find(t).expect("generator is in its closure"))
                .collect()
        })
        .collect();
    let state_rel = (0..n)
        .map(|x| (0..n).filter(|&y| y != x).collect())
        .collect();
    Ok(RelationalMorphismTS {
        source: Arc::new(ts.clone()),
        target: Arc::new(target),
        state_rel,
        arrow_rel,
    })
}

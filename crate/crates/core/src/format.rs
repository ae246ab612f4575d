//! Line-oriented text formats.
//!
//! Semigroupoid files (`.sgd`):
//!
//! ```text
//! # comment
//! object X                     abstract object
//! object X = 0 1 2             object with states
//! arrow a : X -> Y             abstract arrow
//! arrow a : X -> Y = 1 0 0     transformation: image of each state of X
//! compose a b = c              table entry ab = c
//! ```
//!
//! Either every object lists states and every arrow a mapping (a transformation
//! semigroupoid, whose table follows from the functions), or none do.
//!
//! Functor files (`.fun`), with paths relative to the file:
//!
//! ```text
//! source s.sgd
//! target t.sgd
//! map a -> x y                 φ(a) = {x, y}; commas between items are optional
//! staterel 0 -> 1              φ0(0) = {1}; selects the transformation route
//! encode f : a -> b            enc_f(a) = b
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::relational::{RelationalFunctor, RelationalMorphismTS};
use crate::semigroupoid::{Arrow, ArrowId, ArrowSet, Object, Semigroupoid, Violation};
use crate::transformation::{
    compose_transformations, StateSet, Transformation, TransformationSemigroupoid,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Resolution { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl FormatError {
    /// 2 for unreadable or malformed input, 1 for well-formed input that does not resolve.
    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Resolution { .. } => 1,
            _ => 2,
        }
    }

    fn in_file(self, path: &Path) -> Self {
        let prefix = path.display().to_string();
        match self {
            FormatError::Syntax { line, message } => FormatError::Syntax {
                line,
                message: format!("{prefix}: {message}"),
            },
            FormatError::Resolution { line, message } => FormatError::Resolution {
                line,
                message: format!("{prefix}: {message}"),
            },
            io => io,
        }
    }
}

type ParseResult<T> = std::result::Result<T, FormatError>;

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn resolution(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Resolution {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, as `(line number, tokens)`.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SgdDocument {
    Abstract(Semigroupoid),
    Concrete(TransformationSemigroupoid),
}

impl SgdDocument {
    pub fn semigroupoid(&self) -> &Semigroupoid {
        match self {
            SgdDocument::Abstract(s) => s,
            SgdDocument::Concrete(ts) => ts.abstract_(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            SgdDocument::Abstract(s) => s.validate(),
            SgdDocument::Concrete(ts) => ts.validate(),
        }
    }

    pub fn concrete(&self) -> Option<&TransformationSemigroupoid> {
        match self {
            SgdDocument::Concrete(ts) => Some(ts),
            SgdDocument::Abstract(_) => None,
        }
    }

    pub fn emit(&self) -> String {
        match self {
            SgdDocument::Abstract(s) => emit_sgd(s),
            SgdDocument::Concrete(ts) => emit_ts(ts),
        }
    }
}

struct ObjectDecl<'a> {
    line: usize,
    label: &'a str,
    states: Option<Vec<&'a str>>,
}

struct ArrowDecl<'a> {
    line: usize,
    label: &'a str,
    dom: &'a str,
    cod: &'a str,
    images: Option<Vec<&'a str>>,
}

pub fn parse_sgd(text: &str) -> ParseResult<SgdDocument> {
    let mut objects: Vec<ObjectDecl> = Vec::new();
    let mut arrows: Vec<ArrowDecl> = Vec::new();
    let mut composes: Vec<(usize, [&str; 3])> = Vec::new();
    for (line, t) in tokenized(text) {
        match t[0] {
            "object" => {
                let (label, states) = match t.len() {
                    2 => (t[1], None),
                    n if n >= 4 && t[2] == "=" => (t[1], Some(t[3..].to_vec())),
                    _ => return Err(syntax(line, "expected `object LABEL [= STATE ...]`")),
                };
                objects.push(ObjectDecl {
                    line,
                    label,
                    states,
                });
            }
            "arrow" => {
                let shape = t.len() >= 6 && t[2] == ":" && t[4] == "->";
                let images = match t.len() {
                    6 if shape => None,
                    n if shape && n >= 8 && t[6] == "=" => Some(t[7..].to_vec()),
                    _ => {
                        return Err(syntax(
                            line,
                            "expected `arrow LABEL : DOM -> COD [= STATE ...]`",
                        ))
                    }
                };
                arrows.push(ArrowDecl {
                    line,
                    label: t[1],
                    dom: t[3],
                    cod: t[5],
                    images,
                });
            }
            "compose" => {
                if t.len() != 5 || t[3] != "=" {
                    return Err(syntax(line, "expected `compose F G = H`"));
                }
                composes.push((line, [t[1], t[2], t[4]]));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    let mut object_ids: HashMap<&str, usize> = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        if object_ids.insert(o.label, i).is_some() {
            return Err(resolution(
                o.line,
                format!("object `{}` declared twice", o.label),
            ));
        }
    }
    let mut arrow_ids: HashMap<&str, usize> = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if arrow_ids.insert(a.label, i).is_some() {
            return Err(resolution(
                a.line,
                format!("arrow `{}` declared twice", a.label),
            ));
        }
    }
    let object_of = |line: usize, label: &str| {
        object_ids
            .get(label)
            .copied()
            .ok_or_else(|| resolution(line, format!("unknown object `{label}`")))
    };
    let arrow_of = |line: usize, label: &str| {
        arrow_ids
            .get(label)
            .copied()
            .ok_or_else(|| resolution(line, format!("unknown arrow `{label}`")))
    };
    let typed: Vec<(usize, usize)> = arrows
        .iter()
        .map(|a| Ok((object_of(a.line, a.dom)?, object_of(a.line, a.cod)?)))
        .collect::<ParseResult<_>>()?;
    let resolved: Vec<(usize, [usize; 3])> = composes
        .iter()
        .map(|&(line, [f, g, h])| {
            Ok((
                line,
                [arrow_of(line, f)?, arrow_of(line, g)?, arrow_of(line, h)?],
            ))
        })
        .collect::<ParseResult<_>>()?;

    let concrete =
        objects.iter().any(|o| o.states.is_some()) || arrows.iter().any(|a| a.images.is_some());
    if !concrete {
        let mut table = BTreeMap::new();
        for &(line, [f, g, h]) in &resolved {
            if typed[f].1 != typed[g].0 {
                return Err(resolution(
                    line,
                    format!(
                        "`{}` and `{}` are not composable",
                        arrows[f].label, arrows[g].label
                    ),
                ));
            }
            if let Some(prev) = table.insert((f, g), h) {
                if prev != h {
                    return Err(resolution(line, "conflicting composite for this pair"));
                }
            }
        }
        let objs = objects
            .iter()
            .map(|o| Object {
                label: o.label.to_string(),
            })
            .collect();
        let arrs = arrows
            .iter()
            .zip(&typed)
            .map(|(a, &(dom, cod))| Arrow {
                dom,
                cod,
                label: a.label.to_string(),
            })
            .collect();
        return Semigroupoid::new(objs, arrs, table)
            .map(SgdDocument::Abstract)
            .map_err(|e| resolution(0, e.to_string()));
    }

    let mut state_sets = Vec::new();
    for o in &objects {
        let Some(states) = &o.states else {
            return Err(resolution(
                o.line,
                format!(
                    "object `{}` has no states but other declarations do",
                    o.label
                ),
            ));
        };
        let distinct: BTreeSet<&&str> = states.iter().collect();
        if distinct.len() != states.len() {
            return Err(resolution(
                o.line,
                format!("object `{}` repeats a state", o.label),
            ));
        }
        state_sets.push(StateSet::new(o.label, states.iter().copied()));
    }
    let mut maps = Vec::new();
    for (a, &(dom, cod)) in arrows.iter().zip(&typed) {
        let Some(images) = &a.images else {
            return Err(resolution(
                a.line,
                format!(
                    "arrow `{}` has no mapping but the objects have states",
                    a.label
                ),
            ));
        };
        let expected = state_sets[dom].len();
        if images.len() != expected {
            return Err(resolution(
                a.line,
                format!(
                    "arrow `{}` lists {} images for {} states of `{}`",
                    a.label,
                    images.len(),
                    expected,
                    a.dom
                ),
            ));
        }
        let mapping = images
            .iter()
            .map(|img| {
                state_sets[cod]
                    .states
                    .iter()
                    .position(|s| s == img)
                    .ok_or_else(|| {
                        resolution(a.line, format!("`{img}` is not a state of `{}`", a.cod))
                    })
            })
            .collect::<ParseResult<Vec<usize>>>()?;
        maps.push((a.label.to_string(), Transformation::new(dom, cod, mapping)));
    }
    for &(line, [f, g, h]) in &resolved {
        let composite = compose_transformations(&maps[f].1, &maps[g].1).map_err(|_| {
            resolution(
                line,
                format!(
                    "`{}` and `{}` are not composable",
                    arrows[f].label, arrows[g].label
                ),
            )
        })?;
        if composite != maps[h].1 {
            return Err(resolution(
                line,
                format!(
                    "`{}` followed by `{}` is not the function `{}`",
                    arrows[f].label, arrows[g].label, arrows[h].label
                ),
            ));
        }
    }
    TransformationSemigroupoid::new(state_sets, maps)
        .map(SgdDocument::Concrete)
        .map_err(|e| match e {
            crate::error::Error::DuplicateArrow(first, second) => resolution(
                arrows[second].line,
                format!(
                    "arrow `{}` is the same function as `{}`",
                    arrows[second].label, arrows[first].label
                ),
            ),
            other => resolution(0, other.to_string()),
        })
}

pub fn emit_sgd(s: &Semigroupoid) -> String {
    let mut out = String::new();
    for o in s.objects() {
        out.push_str(&format!("object {}\n", o.label));
    }
    for a in s.arrows() {
        out.push_str(&format!(
            "arrow {} : {} -> {}\n",
            a.label,
            s.object_label(a.dom),
            s.object_label(a.cod)
        ));
    }
    for (&(f, g), &h) in s.table() {
        out.push_str(&format!(
            "compose {} {} = {}\n",
            s.arrow_label(f),
            s.arrow_label(g),
            s.arrow_label(h)
        ));
    }
    out
}

pub fn emit_ts(ts: &TransformationSemigroupoid) -> String {
    let mut out = String::new();
    for set in ts.state_sets() {
        out.push_str(&format!(
            "object {} = {}\n",
            set.label,
            set.states.join(" ")
        ));
    }
    for (a, t) in ts.transformations().iter().enumerate() {
        let images: Vec<&str> = t
            .mapping
            .iter()
            .map(|&y| ts.state_label(t.cod, y))
            .collect();
        out.push_str(&format!(
            "arrow {} : {} -> {} = {}\n",
            ts.label(a),
            ts.state_sets()[t.dom].label,
            ts.state_sets()[t.cod].label,
            images.join(" ")
        ));
    }
    out
}

pub fn read_file(path: &Path) -> ParseResult<String> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_sgd(path: &Path) -> ParseResult<SgdDocument> {
    parse_sgd(&read_file(path)?).map_err(|e| e.in_file(path))
}

/// A parsed functor file, before its labels are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunFile {
    pub source: String,
    pub target: String,
    pub maps: Vec<(usize, String, Vec<String>)>,
    pub staterels: Vec<(usize, String, Vec<String>)>,
    pub encodes: Vec<(usize, String, String, String)>,
}

fn relation_items(tokens: &[&str]) -> Vec<String> {
    tokens
        .iter()
        .flat_map(|t| t.strip_suffix(',').unwrap_or(t).split(", "))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn parse_fun(text: &str) -> ParseResult<FunFile> {
    let mut source = None;
    let mut target = None;
    let mut fun = FunFile {
        source: String::new(),
        target: String::new(),
        maps: Vec::new(),
        staterels: Vec::new(),
        encodes: Vec::new(),
    };
    for (line, t) in tokenized(text) {
        match t[0] {
            "source" | "target" if t.len() == 2 => {
                let slot = if t[0] == "source" {
                    &mut source
                } else {
                    &mut target
                };
                if slot.replace(t[1].to_string()).is_some() {
                    return Err(syntax(line, format!("`{}` given twice", t[0])));
                }
            }
            "map" | "staterel" if t.len() >= 4 && t[2] == "->" => {
                let items = relation_items(&t[3..]);
                if items.is_empty() {
                    return Err(syntax(line, "empty image"));
                }
                let entry = (line, t[1].to_string(), items);
                if t[0] == "map" {
                    fun.maps.push(entry);
                } else {
                    fun.staterels.push(entry);
                }
            }
            "encode" if t.len() == 6 && t[2] == ":" && t[4] == "->" => {
                fun.encodes
                    .push((line, t[1].to_string(), t[3].to_string(), t[5].to_string()));
            }
            other => {
                return Err(syntax(
                    line,
                    format!("malformed or unknown directive `{other}`"),
                ))
            }
        }
    }
    fun.source = source.ok_or_else(|| syntax(0, "missing `source`"))?;
    fun.target = target.ok_or_else(|| syntax(0, "missing `target`"))?;
    Ok(fun)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorSpec {
    Abstract(RelationalFunctor),
    Morphism(RelationalMorphismTS),
}

/// A resolved functor file together with its unresolved `encode` lines, which
/// refer to the functor finally decomposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedFunctor {
    pub spec: FunctorSpec,
    pub encodes: Vec<(usize, String, String, String)>,
    pub source: SgdDocument,
    pub target: SgdDocument,
}

fn resolve_map(
    maps: &[(usize, String, Vec<String>)],
    source: &Semigroupoid,
    target: &Semigroupoid,
) -> ParseResult<Vec<ArrowSet>> {
    let mut images = vec![ArrowSet::new(); source.arrow_count()];
    for (line, a, items) in maps {
        let a = source
            .arrow_by_label(a)
            .ok_or_else(|| resolution(*line, format!("unknown source arrow `{a}`")))?;
        for item in items {
            let x = target
                .arrow_by_label(item)
                .ok_or_else(|| resolution(*line, format!("unknown target arrow `{item}`")))?;
            images[a].insert(x);
        }
    }
    if let Some(a) = images.iter().position(BTreeSet::is_empty) {
        return Err(resolution(
            0,
            format!("source arrow `{}` is not mapped", source.arrow_label(a)),
        ));
    }
    Ok(images)
}

pub fn resolve_fun(
    fun: &FunFile,
    source: SgdDocument,
    target: SgdDocument,
) -> ParseResult<LoadedFunctor> {
    let arrow_map = resolve_map(&fun.maps, source.semigroupoid(), target.semigroupoid())?;
    let spec = if fun.staterels.is_empty() {
        let phi = RelationalFunctor::new(
            Arc::new(source.semigroupoid().clone()),
            Arc::new(target.semigroupoid().clone()),
            arrow_map,
        )
        .map_err(|e| resolution(0, e.to_string()))?;
        FunctorSpec::Abstract(phi)
    } else {
        let line = fun.staterels[0].0;
        let (Some(src), Some(tgt)) = (source.concrete(), target.concrete()) else {
            return Err(resolution(
                line,
                "`staterel` needs transformation semigroups on both sides",
            ));
        };
        if !src.is_one_object() || !tgt.is_one_object() {
            return Err(resolution(
                line,
                "`staterel` needs one-object source and target",
            ));
        }
        let state = |ts: &TransformationSemigroupoid, line: usize, label: &str| {
            ts.state_sets()[0]
                .states
                .iter()
                .position(|s| s == label)
                .ok_or_else(|| resolution(line, format!("unknown state `{label}`")))
        };
        let mut state_rel = vec![BTreeSet::new(); src.state_sets()[0].len()];
        for (line, x, items) in &fun.staterels {
            let x = state(src, *line, x)?;
            for y in items {
                state_rel[x].insert(state(tgt, *line, y)?);
            }
        }
        FunctorSpec::Morphism(RelationalMorphismTS {
            source: Arc::new(src.clone()),
            target: Arc::new(tgt.clone()),
            state_rel,
            arrow_rel: arrow_map,
        })
    };
    Ok(LoadedFunctor {
        spec,
        encodes: fun.encodes.clone(),
        source,
        target,
    })
}

/// Resolves `encode` lines against the functor that is decomposed.
pub fn resolve_encodes(
    encodes: &[(usize, String, String, String)],
    phi: &RelationalFunctor,
) -> ParseResult<BTreeMap<ArrowId, BTreeMap<ArrowId, ArrowId>>> {
    let mut out: BTreeMap<ArrowId, BTreeMap<ArrowId, ArrowId>> = BTreeMap::new();
    for (line, top, a, b) in encodes {
        let find = |s: &Semigroupoid, label: &str| {
            s.arrow_by_label(label)
                .ok_or_else(|| resolution(*line, format!("unknown arrow `{label}`")))
        };
        let top = find(phi.target(), top)?;
        let a = find(phi.source(), a)?;
        let b = find(phi.source(), b)?;
        if out.entry(top).or_default().insert(a, b).is_some() {
            return Err(resolution(*line, "arrow encoded twice"));
        }
    }
    Ok(out)
}

fn relative(base: &Path, file: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(file)
}

pub fn load_fun(path: &Path) -> ParseResult<LoadedFunctor> {
    let fun = parse_fun(&read_file(path)?).map_err(|e| e.in_file(path))?;
    let source = load_sgd(&relative(path, &fun.source))?;
    let target = load_sgd(&relative(path, &fun.target))?;
    resolve_fun(&fun, source, target).map_err(|e| e.in_file(path))
}

//! The two naive ways of turning a transformation semigroupoid into a single
//! transformation semigroup, kept as diagnostics: they show what goes wrong.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{compose_transformations, StateSet, Transformation, TransformationSemigroupoid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticMode {
    Pad,
    Sink,
}

/// A product of two completed originals, not composable before completion, that is not itself an original,
/// together with its cyclic orbit `p, p², …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub left: String,
    pub right: String,
    pub orbit: Vec<Transformation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub mode: DiagnosticMode,
    pub original_arrow_count: usize,
    pub completed_state_count: usize,
    pub completed_arrow_count: usize,
    pub new_elements: Vec<Transformation>,
    pub orbit_witness: Option<OrbitWitness>,
    /// Pairs of originals whose completed product is the all-sink map.
    pub sink_absorbed_pairs: usize,
}

/// Disjoint union of all state sets; labels are qualified only when they clash.
fn union_states(ts: &TransformationSemigroupoid) -> (Vec<usize>, Vec<String>) {
    let mut offsets = Vec::new();
    let mut all: Vec<(String, String)> = Vec::new();
    for set in ts.state_sets() {
        offsets.push(all.len());
        all.extend(set.states.iter().map(|s| (s.clone(), set.label.clone())));
    }
    let mut counts = std::collections::HashMap::new();
    for (s, _) in &all {
        *counts.entry(s.clone()).or_insert(0usize) += 1;
    }
    let labels = all
        .into_iter()
        .map(|(s, obj)| {
            if counts[&s] > 1 {
                format!("{s}@{obj}")
            } else {
                s
            }
        })
        .collect();
    (offsets, labels)
}

fn orbit_of(p: &Transformation) -> Vec<Transformation> {
    let mut orbit = vec![p.clone()];
    let mut seen: HashSet<Transformation> = HashSet::from([p.clone()]);
    loop {
        let next = compose_transformations(orbit.last().unwrap(), p).expect("endo");
        if !seen.insert(next.clone()) {
            return orbit;
        }
        orbit.push(next);
    }
}

fn complete(
    ts: &TransformationSemigroupoid,
    mode: DiagnosticMode,
    completed: Vec<Transformation>,
    mut labels: Vec<String>,
) -> (TransformationSemigroupoid, DiagnosticReport) {
    if mode == DiagnosticMode::Sink {
        labels.push("_".into());
    }
    let n = labels.len();
    let state_sets = vec![StateSet::new("U", labels)];
    let generators: Vec<(String, Transformation)> = completed
        .iter()
        .enumerate()
        .map(|(a, t)| (ts.label(a).to_string(), t.clone()))
        .collect();
    let closure = TransformationSemigroupoid::generate_closure(state_sets, generators)
        .expect("completed maps are total endomaps");
    let originals: HashSet<&Transformation> = completed.iter().collect();
    let new_elements: Vec<Transformation> = closure
        .transformations()
        .iter()
        .filter(|t| !originals.contains(t))
        .cloned()
        .collect();

    let sink = Transformation::endo(vec![n - 1; n]);
    let mut orbit_witness = None;
    let mut sink_absorbed_pairs = 0;
    for (i, a) in completed.iter().enumerate() {
        for (j, b) in completed.iter().enumerate() {
            let p = compose_transformations(a, b).expect("endo");
            if mode == DiagnosticMode::Sink && !ts.abstract_().is_composable(i, j) && p == sink {
                sink_absorbed_pairs += 1;
            }
            if orbit_witness.is_none()
                && !ts.abstract_().is_composable(i, j)
                && !originals.contains(&p)
            {
                orbit_witness = Some(OrbitWitness {
                    left: ts.label(i).to_string(),
                    right: ts.label(j).to_string(),
                    orbit: orbit_of(&p),
                });
            }
        }
    }
    let report = DiagnosticReport {
        mode,
        original_arrow_count: ts.arrow_count(),
        completed_state_count: n,
        completed_arrow_count: closure.arrow_count(),
        new_elements,
        orbit_witness,
        sink_absorbed_pairs,
    };
    (closure, report)
}

/// Each arrow acts on the disjoint union of all state sets, as itself on its
/// domain and as the identity elsewhere.
pub fn pad_with_identities(
    ts: &TransformationSemigroupoid,
) -> (TransformationSemigroupoid, DiagnosticReport) {
    let (offsets, labels) = union_states(ts);
    let n = labels.len();
    let padded = ts
        .transformations()
        .iter()
        .map(|t| {
            let mut mapping: Vec<usize> = (0..n).collect();
            for (x, &y) in t.mapping.iter().enumerate() {
                mapping[offsets[t.dom] + x] = offsets[t.cod] + y;
            }
            Transformation::endo(mapping)
        })
        .collect();
    complete(ts, DiagnosticMode::Pad, padded, labels)
}

/// Adds a sink state; states outside an arrow's domain, and the sink, go to the sink.
pub fn sink_completion(
    ts: &TransformationSemigroupoid,
) -> (TransformationSemigroupoid, DiagnosticReport) {
    let (offsets, labels) = union_states(ts);
    let sink = labels.len();
    let completed = ts
        .transformations()
        .iter()
        .map(|t| {
            let mut mapping = vec![sink; sink + 1];
            for (x, &y) in t.mapping.iter().enumerate() {
                mapping[offsets[t.dom] + x] = offsets[t.cod] + y;
            }
            Transformation::endo(mapping)
        })
        .collect();
    complete(ts, DiagnosticMode::Sink, completed, labels)
}

impl DiagnosticReport {
    pub fn render(&self, completed: &TransformationSemigroupoid) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            DiagnosticMode::Pad => "pad with identities",
            DiagnosticMode::Sink => "sink completion",
        };
        out.push_str(&format!("mode: {mode}\n"));
        out.push_str(&format!("original arrows: {}\n", self.original_arrow_count));
        out.push_str(&format!(
            "completed states: {}\n",
            self.completed_state_count
        ));
        out.push_str(&format!(
            "completed arrows: {}\n",
            self.completed_arrow_count
        ));
        out.push_str(&format!("new elements: {}\n", self.new_elements.len()));
        for t in &self.new_elements {
            out.push_str(&format!("  {}\n", completed.render(t)));
        }
        if let Some(w) = &self.orbit_witness {
            out.push_str(&format!(
                "orbit of {}·{}: {} elements\n",
                w.left,
                w.right,
                w.orbit.len()
            ));
            for t in &w.orbit {
                out.push_str(&format!("  {}\n", completed.render(t)));
            }
        }
        if self.mode == DiagnosticMode::Sink {
            out.push_str(&format!(
                "sink-absorbed pairs: {}\n",
                self.sink_absorbed_pairs
            ));
        }
        out
    }
}

/// States of the union that an arrow moves.
#[cfg(test)]
fn support(t: &Transformation) -> std::collections::BTreeSet<usize> {
    t.mapping
        .iter()
        .enumerate()
        .filter(|(x, y)| x != *y)
        .map(|(x, _)| x)
        .collect()
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
    fn padding_the_dual_mode_counter_creates_a_six_orbit() {
        let (padded, report) = pad_with_identities(&dual_mode());
        assert_eq!(report.completed_state_count, 5);
        let w = report.orbit_witness.as_ref().unwrap();
        assert_eq!((w.left.as_str(), w.right.as_str()), ("+1_1", "+1_2"));
        assert_eq!(w.orbit.len(), 6);
        assert!(!report.new_elements.is_empty());
        assert!(padded.validate().is_empty());
        assert_eq!(support(&w.orbit[0]), (0..5).collect());
    }

    #[test]
    fn sink_completion_of_the_dual_mode_counter() {
        let ts = dual_mode();
        let (completed, report) = sink_completion(&ts);
        assert_eq!(report.completed_state_count, 6);
        assert!(completed.validate().is_empty());
        assert!(report.sink_absorbed_pairs > 0);
        let sink = Transformation::endo(vec![5; 6]);
        assert!(completed.find(&sink).is_some());
        // +1_1 followed by a map out of X2 only.
        let p = compose_transformations(
            &completed.transformation(0).clone(),
            completed.transformation(3),
        )
        .unwrap();
        assert_eq!(p, sink);
    }

    #[test]
    fn same_type_endo_arrows_never_hit_the_sink() {
        let ts = TransformationSemigroupoid::generate_closure(
            vec![StateSet::new("X", ["0", "1", "2"])],
            vec![("+1".into(), Transformation::endo(vec![1, 2, 0]))],
        )
        .unwrap();
        let (_, report) = sink_completion(&ts);
        assert_eq!(report.sink_absorbed_pairs, 0);
        assert!(report.new_elements.is_empty());
    }

    #[test]
    fn padding_a_single_endo_arrow_changes_nothing() {
        let ts = TransformationSemigroupoid::new(
            vec![StateSet::new("X", ["0", "1"])],
            vec![("w0".into(), Transformation::endo(vec![0, 0]))],
        )
        .unwrap();
        let (padded, report) = pad_with_identities(&ts);
        assert_eq!(padded.arrow_count(), 1);
        assert!(report.new_elements.is_empty());
        assert!(report.orbit_witness.is_none());
    }

    #[test]
    fn clashing_state_labels_are_qualified() {
        let ts = TransformationSemigroupoid::new(
            vec![StateSet::new("A", ["0", "1"]), StateSet::new("B", ["0"])],
            vec![("u".into(), Transformation::new(0, 1, vec![0, 0]))],
        )
        .unwrap();
        let (padded, _) = pad_with_identities(&ts);
        assert_eq!(padded.state_sets()[0].states, ["0@A", "1", "0@B"]);
    }
}

//! Graphviz output: objects as nodes, arrows as labelled edges.

use std::fmt::Write;

use crate::semigroupoid::Semigroupoid;

fn quoted(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

fn body(out: &mut String, s: &Semigroupoid, prefix: &str, indent: &str) {
    for (i, o) in s.objects().iter().enumerate() {
        writeln!(out, "{indent}{prefix}{i} [label={}];", quoted(&o.label)).unwrap();
    }
    for a in s.arrows() {
        writeln!(
            out,
            "{indent}{prefix}{} -> {prefix}{} [label={}];",
            a.dom,
            a.cod,
            quoted(&a.label)
        )
        .unwrap();
    }
}

pub fn semigroupoid_dot(s: &Semigroupoid) -> String {
    let mut out = String::from("digraph {\n");
    body(&mut out, s, "n", "  ");
    out.push_str("}\n");
    out
}

/// Two levels side by side, each in its own cluster.
pub fn decomposition_dot(top: &Semigroupoid, bottom: &Semigroupoid) -> String {
    let mut out = String::from("digraph {\n");
    for (name, s, prefix) in [("top", top, "t"), ("bottom", bottom, "b")] {
        writeln!(
            out,
            "  subgraph cluster_{name} {{\n    label={};",
            quoted(name)
        )
        .unwrap();
        body(&mut out, s, prefix, "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroupoid::SemigroupoidBuilder;

    #[test]
    fn loops_and_escaping() {
        let s = SemigroupoidBuilder::new()
            .object("X")
            .arrow("a\"", "X", "X")
            .compose("a\"", "a\"", "a\"")
            .build()
            .unwrap();
        assert_eq!(
            semigroupoid_dot(&s),
            "digraph {\n  n0 [label=\"X\"];\n  n0 -> n0 [label=\"a\\\"\"];\n}\n"
        );
    }

    #[test]
    fn empty_body() {
        assert_eq!(semigroupoid_dot(&Semigroupoid::empty()), "digraph {\n}\n");
    }

    #[test]
    fn clusters() {
        let dot = decomposition_dot(&Semigroupoid::empty(), &Semigroupoid::empty());
        assert!(dot.contains("subgraph cluster_top"));
        assert!(dot.contains("subgraph cluster_bottom"));
    }
}

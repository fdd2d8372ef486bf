//! Graphviz export of state diagrams.
//!
//! One node per state and one edge per transition labelled `σ|o(s,σ)`,
//! with `ε` for an empty output. When both bits lead to the same state the
//! two labels share a single edge.

use std::fmt::Write;

use ratgroup_core::{Transducer, Word};

fn out_label(w: &Word) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.to_string()
    }
}

pub fn to_dot(t: &Transducer) -> String {
    to_dot_named(t, &crate::format::default_names(t))
}

pub fn to_dot_named(t: &Transducer, names: &[String]) -> String {
    let mut s = String::new();
    s.push_str("digraph transducer {\n  rankdir=LR;\n  __start [shape=point];\n");
    for q in t.states() {
        let shape = if q == t.initial() {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(s, "  \"{}\" [shape={shape}];", names[q.index()]);
    }
    let _ = writeln!(s, "  __start -> \"{}\";", names[t.initial().index()]);
    for q in t.states() {
        let [e0, e1] = t.edges_of(q);
        let from = &names[q.index()];
        if e0.to == e1.to {
            let _ = writeln!(
                s,
                "  \"{from}\" -> \"{}\" [label=\"0|{}\\n1|{}\"];",
                names[e0.to.index()],
                out_label(&e0.out),
                out_label(&e1.out)
            );
        } else {
            for (bit, e) in [(0, e0), (1, e1)] {
                let _ = writeln!(
                    s,
                    "  \"{from}\" -> \"{}\" [label=\"{bit}|{}\"];",
                    names[e.to.index()],
                    out_label(&e.out)
                );
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use ratgroup_core::construct::fp_machine;

    #[test]
    fn two_state_labels() {
        let t = crate::format::parse(
            r#"{"states":["s0","s1"],"initial":"s0","transitions":{
                "s0":{"0":{"out":"","to":"s1"},"1":{"out":"11","to":"s0"}},
                "s1":{"0":{"out":"0","to":"s0"},"1":{"out":"10","to":"s0"}}}}"#,
        )
        .unwrap();
        let d = to_dot(&t);
        assert!(d.contains("\"s0\" -> \"s1\" [label=\"0|ε\"]"));
        assert!(d.contains("\"s0\" -> \"s0\" [label=\"1|11\"]"));
        assert!(d.contains("\"s1\" -> \"s0\" [label=\"0|0\\n1|10\"]"));
        assert_eq!(d.matches("shape=").count(), 3);
        assert!(d.contains("\"s0\" [shape=doublecircle]"));
    }

    #[test]
    fn identity_and_fp3() {
        let d = to_dot(&Transducer::identity());
        assert!(d.contains("[label=\"0|0\\n1|1\"]"));
        let d = to_dot(&fp_machine(3));
        assert!(d.contains("\"s0\" -> \"s1\" [label=\"0|0\\n1|1\"]"));
        assert!(d.contains("\"s1\" -> \"s2\" [label=\"0|0\\n1|1\"]"));
        assert!(d.contains("\"s2\" -> \"s0\" [label=\"0|1\\n1|0\"]"));
    }
}

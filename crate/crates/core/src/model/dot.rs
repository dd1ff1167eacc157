use std::collections::BTreeMap;
use std::fmt::Write;

use crate::model::Dag;

fn is_plain_id(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn quote(s: &str) -> String {
    if is_plain_id(s) {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

/// Graphviz rendering listing every node and arc once.
///
/// With a color map, every node gets a `fillcolor` (nodes absent from the map
/// fall back to white).
pub fn export_dot(dag: &Dag, node_colors: Option<&BTreeMap<String, String>>) -> String {
    let mut out = String::from("digraph beliefnet {\n");
    out.push_str("  rankdir=TB;\n");
    match node_colors {
        Some(_) => out.push_str("  node [shape=ellipse, style=filled];\n"),
        None => out.push_str("  node [shape=ellipse];\n"),
    }
    for name in dag.nodes() {
        match node_colors {
            Some(colors) => {
                let color = colors.get(name).map_or("#ffffff", String::as_str);
                let _ = writeln!(out, "  {} [fillcolor={}];", quote(name), quote(color));
            }
            None => {
                let _ = writeln!(out, "  {};", quote(name));
            }
        }
    }
    for (from, to) in dag.arcs() {
        let _ = writeln!(out, "  {} -> {};", quote(dag.name(from)), quote(dag.name(to)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc() {
        let dag = Dag::from_arcs(&["A", "B"], &[("A", "B")]).unwrap();
        let dot = export_dot(&dag, None);
        assert!(dot.contains("A -> B"));
        assert_eq!(dot.matches("->").count(), 1);
    }

    #[test]
    fn colors_on_every_node() {
        let dag = Dag::from_arcs(&["A", "B", "C"], &[("A", "B")]).unwrap();
        let colors: BTreeMap<String, String> = [("A".into(), "#ff0000".into())].into();
        let dot = export_dot(&dag, Some(&colors));
        assert_eq!(dot.matches("fillcolor=").count(), 3);
        assert!(dot.contains("A [fillcolor=\"#ff0000\"]"));
    }

    #[test]
    fn quotes_awkward_names() {
        let dag = Dag::from_arcs(&["Age 60+", "B"], &[("Age 60+", "B")]).unwrap();
        assert!(export_dot(&dag, None).contains("\"Age 60+\" -> B"));
    }
}

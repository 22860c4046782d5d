use serde::{Deserialize, Serialize};

use crate::graphs::Graph;

/// The node part of an edge label: a graph node or the extra symbol `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelNode {
    Node(usize),
    Rho,
}

/// An edge label `(a, i)` with `a ∈ G ∪ {ρ}` and color `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub node: LabelNode,
    pub color: usize,
}

impl EdgeLabel {
    pub fn node(node: usize, color: usize) -> Self {
        EdgeLabel { node: LabelNode::Node(node), color }
    }

    pub fn rho(color: usize) -> Self {
        EdgeLabel { node: LabelNode::Rho, color }
    }
}

/// Whether a triangle may be labelled `(a, i), (b, j), (c, l)`:
///
/// 1. `|{i, j, l}| > 1`, or
/// 2. `a, b, c ∈ G` and `{a, b, c}` spans an edge of `g`, or
/// 3. exactly one of `a, b, c` is `ρ` and the other two are adjacent, or
/// 4. two or more of `a, b, c` are `ρ`.
pub fn valid_labelled_triangle(e1: EdgeLabel, e2: EdgeLabel, e3: EdgeLabel, g: &Graph) -> bool {
    if !(e1.color == e2.color && e2.color == e3.color) {
        return true;
    }
    let nodes: Vec<usize> = [e1, e2, e3]
        .iter()
        .filter_map(|e| match e.node {
            LabelNode::Node(v) => Some(v),
            LabelNode::Rho => None,
        })
        .collect();
    let adj = |u: usize, v: usize| u < g.node_count() && v < g.node_count() && g.has_edge(u, v);
    match nodes.as_slice() {
        [a, b, c] => adj(*a, *b) || adj(*b, *c) || adj(*a, *c),
        [a, b] => adj(*a, *b),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = Graph::from_edges(4, [(0, 1)]).unwrap();
        let n = EdgeLabel::node;
        assert!(valid_labelled_triangle(n(0, 0), n(2, 1), n(3, 2), &g));
        assert!(valid_labelled_triangle(n(0, 0), n(1, 0), n(3, 0), &g));
        assert!(valid_labelled_triangle(EdgeLabel::rho(0), EdgeLabel::rho(1), n(2, 0), &g));
        assert!(valid_labelled_triangle(EdgeLabel::rho(0), EdgeLabel::rho(0), n(2, 0), &g));
        assert!(!valid_labelled_triangle(n(0, 0), n(2, 0), n(3, 0), &g));
        assert!(valid_labelled_triangle(EdgeLabel::rho(1), n(0, 1), n(1, 1), &g));
        assert!(!valid_labelled_triangle(EdgeLabel::rho(1), n(0, 1), n(2, 1), &g));
    }
}

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::finite_ra::{AtomId, FiniteAtomStructure, IDENTITY};

/// A finite structure whose labelled pairs carry atoms of a finite atom
/// structure. Unlabelled pairs lie outside the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomLabelledStructure {
    nodes: usize,
    labels: HashMap<(usize, usize), AtomId>,
}

impl AtomLabelledStructure {
    /// `nodes` nodes, each `(x, x)` labelled with the identity.
    pub fn new(nodes: usize) -> Self {
        AtomLabelledStructure {
            nodes,
            labels: (0..nodes).map(|x| ((x, x), IDENTITY)).collect(),
        }
    }

    /// Labels `(x, y)` with `a` and `(y, x)` with its converse.
    pub fn set(&mut self, s: &FiniteAtomStructure, x: usize, y: usize, a: AtomId) -> Result<()> {
        if x >= self.nodes || y >= self.nodes || a >= s.atom_count() {
            return Err(Error::InvalidParameter(format!("edge ({x}, {y}) with atom {a} out of range")));
        }
        if (x == y) != (a == IDENTITY) {
            return Err(Error::InvalidParameter("identity labels exactly the diagonal".into()));
        }
        self.labels.insert((x, y), a);
        self.labels.insert((y, x), s.converse(a));
        Ok(())
    }

    pub fn label(&self, x: usize, y: usize) -> Option<AtomId> {
        self.labels.get(&(x, y)).copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes.iter().all(|&x| nodes.iter().all(|&y| self.labels.contains_key(&(x, y))))
    }
}

/// The 5-cycle representation of 𝐌 with two diversity atoms: atom 1 labels
/// distance 1, atom 2 labels distance 2.
pub fn pentagon() -> AtomLabelledStructure {
    let mut g = AtomLabelledStructure::new(5);
    for x in 0..5 {
        for y in 0..5 {
            if x != y {
                let d = (y + 5 - x) % 5;
                let atom = if d == 1 || d == 4 { 1 } else { 2 };
                g.labels.insert((x, y), atom);
            }
        }
    }
    g
}

/// Every clique `C` with `|C| < m`, every `x, y ∈ C` and every `a, b` with
/// `l(x, y) <= a;b` admit a node `z` such that `C ∪ {z}` is a clique,
/// `l(x, z) = a` and `l(z, y) = b`.
pub fn is_m_square(g: &AtomLabelledStructure, s: &FiniteAtomStructure, m: usize) -> bool {
    fn cliques(g: &AtomLabelledStructure, max: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for v in start..g.nodes {
            cur.push(v);
            if g.is_clique(cur) {
                cliques(g, max, cur, v + 1, out);
            }
            cur.pop();
        }
    }
    if m <= 1 {
        return true;
    }
    let mut all = Vec::new();
    cliques(g, m - 1, &mut Vec::new(), 0, &mut all);
    all.iter().all(|c| {
        c.iter().all(|&x| {
            c.iter().all(|&y| {
                let l = g.label(x, y).expect("clique pairs are labelled");
                s.atoms().all(|a| {
                    s.atoms().all(|b| {
                        !s.consistent(a, b, l)
                            || (0..g.nodes).any(|z| {
                                g.label(x, z) == Some(a)
                                    && g.label(z, y) == Some(b)
                                    && c.iter().all(|&w| g.labels.contains_key(&(z, w)))
                            })
                    })
                })
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_ra::{check_axioms, default_atom_names, make_m};

    #[test]
    fn pentagon_represents_small_m() {
        let m = make_m(&default_atom_names(2)).unwrap();
        assert!(check_axioms(&m).is_clean());
        let g = pentagon();
        for k in 0..=5 {
            assert!(is_m_square(&g, &m, k), "m = {k}");
        }
        // the pentagon realises exactly the consistent triples of the algebra
        for x in 0..5 {
            for y in 0..5 {
                for z in 0..5 {
                    let (a, b, c) = (g.label(x, y).unwrap(), g.label(y, z).unwrap(), g.label(x, z).unwrap());
                    assert!(m.consistent(a, b, c));
                }
            }
        }
    }

    #[test]
    fn single_edge_is_not_3_square() {
        let m = make_m(&default_atom_names(2)).unwrap();
        let mut g = AtomLabelledStructure::new(2);
        g.set(&m, 0, 1, 1).unwrap();
        assert!(!is_m_square(&g, &m, 3));
        assert!(is_m_square(&g, &m, 1));
    }

    #[test]
    fn set_rejects_bad_labels() {
        let m = make_m(&default_atom_names(2)).unwrap();
        let mut g = AtomLabelledStructure::new(2);
        assert!(g.set(&m, 0, 1, IDENTITY).is_err());
        assert!(g.set(&m, 0, 0, 1).is_err());
        assert!(g.set(&m, 0, 5, 1).is_err());
    }
}

//! Finite families of polygons ordered by dominance, with their Hasse
//! diagram.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{dominates, HNPolygon};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumPoset {
    /// Distinct polygons, sorted by vertex list.
    pub elements: Vec<HNPolygon>,
    /// `(i, j)`: element `i` covers element `j`.
    pub covers: Vec<(usize, usize)>,
}

/// Dominance relation on `ps`, then its transitive reduction.
pub fn build_poset(ps: &[HNPolygon]) -> Result<StratumPoset> {
    let mut elements = ps.to_vec();
    elements.sort();
    elements.dedup();
    if let Some(first) = elements.first() {
        if let Some(bad) = elements
            .iter()
            .find(|p| (p.rank(), p.degree()) != (first.rank(), first.degree()))
        {
            return Err(Error::EndpointMismatch(
                first.rank(),
                first.degree(),
                bad.rank(),
                bad.degree(),
            ));
        }
    }

    let n = elements.len();
    // above[i][j]: i ≻ j strictly
    let mut above = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                above[i][j] = dominates(&elements[i], &elements[j])?;
            }
        }
    }

    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if above[i][j] && !(0..n).any(|k| above[i][k] && above[k][j]) {
                covers.push((i, j));
            }
        }
    }
    Ok(StratumPoset { elements, covers })
}

impl StratumPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements covered by nothing.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.covers.iter().any(|&(_, j)| j == i))
            .collect()
    }

    /// Elements covering nothing.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.covers.iter().any(|&(a, _)| a == i))
            .collect()
    }

    /// Graphviz rendering: one node per element labelled by its vertex list,
    /// one edge `i -> j` per cover.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, p) in self.elements.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{p}\"];").expect("write to String");
        }
        for (i, j) in &self.covers {
            writeln!(out, "  n{i} -> n{j};").expect("write to String");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poset serialization is infallible")
    }
}

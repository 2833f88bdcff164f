//! On-disk JSON schemas for systems and graphs.
//!
//! A system document:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "atoms": ["x", "y"],
//!   "labels": ["a"],
//!   "dual_maps": { "a": { "x": "y", "y": "x" } }
//! }
//! ```
//!
//! `dual_maps` is keyed by label, then by atom; a missing label key is the
//! nowhere-defined map. A graph document has `vertices` and named `edges`
//! with `source` and `range`. Serialization uses ordered maps, so rendering
//! is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::BdsError;
use crate::graph::{Edge, GraphSpec};
use crate::system::Bds;

pub const FORMAT_VERSION: u32 = 1;

/// Serialized form of a [`Bds`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BdsDocument {
    pub format_version: u32,
    pub atoms: Vec<String>,
    pub labels: Vec<String>,
    pub dual_maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl BdsDocument {
    pub fn from_bds(sys: &Bds) -> Self {
        let mut dual_maps = BTreeMap::new();
        for l in 0..sys.label_count() {
            let mut map = BTreeMap::new();
            for u in 0..sys.atom_count() {
                if let Some(v) = sys.dual_map(l, u) {
                    map.insert(sys.atom_id(u).to_owned(), sys.atom_id(v).to_owned());
                }
            }
            if !map.is_empty() {
                dual_maps.insert(sys.label_id(l).to_owned(), map);
            }
        }
        BdsDocument {
            format_version: FORMAT_VERSION,
            atoms: sys.atom_ids().to_vec(),
            labels: sys.label_ids().to_vec(),
            dual_maps,
        }
    }

    pub fn to_bds(&self) -> Result<Bds, BdsError> {
        if self.format_version != FORMAT_VERSION {
            return Err(BdsError::InvalidSystem(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let atom_index = |id: &str| {
            self.atoms
                .iter()
                .position(|a| a == id)
                .ok_or_else(|| BdsError::UnknownAtom(id.to_owned()))
        };
        let mut maps = vec![vec![None; self.atoms.len()]; self.labels.len()];
        for (label, entries) in &self.dual_maps {
            let l = self
                .labels
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| BdsError::UnknownLabel(label.clone()))?;
            for (from, to) in entries {
                maps[l][atom_index(from)?] = Some(atom_index(to)?);
            }
        }
        Bds::new(self.atoms.clone(), self.labels.clone(), maps)
    }
}

/// Serialized form of a [`GraphSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub format_version: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl GraphDocument {
    pub fn from_graph(g: &GraphSpec) -> Self {
        GraphDocument {
            format_version: FORMAT_VERSION,
            vertices: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
        }
    }

    pub fn to_graph(&self) -> Result<GraphSpec, BdsError> {
        if self.format_version != FORMAT_VERSION {
            return Err(BdsError::InvalidSystem(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        GraphSpec::new(self.vertices.clone(), self.edges.clone())
    }
}

pub fn parse_bds(json: &str) -> Result<Bds, BdsError> {
    let doc: BdsDocument =
        serde_json::from_str(json).map_err(|e| BdsError::InvalidSystem(format!("JSON: {e}")))?;
    doc.to_bds()
}

pub fn render_bds(sys: &Bds) -> String {
    serde_json::to_string_pretty(&BdsDocument::from_bds(sys)).expect("document serialization")
}

pub fn parse_graph(json: &str) -> Result<GraphSpec, BdsError> {
    let doc: GraphDocument =
        serde_json::from_str(json).map_err(|e| BdsError::InvalidSystem(format!("JSON: {e}")))?;
    doc.to_graph()
}

pub fn render_graph(g: &GraphSpec) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("document serialization")
}

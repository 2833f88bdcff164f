//! Directed multigraphs and their two system constructions.
//!
//! The *vertex construction* keeps a graph's vertices as atoms and reverses
//! its edges into dual maps, so forward walks in the dual graph are reversed
//! edge paths and the returning words of a vertex are exactly its closed
//! paths, read in path order. The *boundary construction* takes the boundary
//! paths themselves as atoms (finite paths into sinks plus eventually
//! periodic infinite paths), with each edge acting by prepending itself.
//!
//! [`graph_condition_k`] decides Condition (K) straight from the edge lists,
//! without going through either construction, so the constructions and the
//! system-level deciders can be checked against it.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::BdsError;
use crate::scc::tarjan;
use crate::system::Bds;

/// Cap on the number of boundary paths materialized for one graph.
const BOUNDARY_PATH_CAP: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub source: String,
    pub range: String,
}

/// A finite directed multigraph with named edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl GraphSpec {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, BdsError> {
        if vertices.is_empty() {
            return Err(BdsError::InvalidSystem("a graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if v.is_empty() {
                return Err(BdsError::InvalidSystem("empty vertex name".into()));
            }
            if !seen.insert(v.clone()) {
                return Err(BdsError::InvalidSystem(format!("duplicate vertex {v:?}")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &edges {
            if e.name.is_empty() {
                return Err(BdsError::InvalidSystem("empty edge name".into()));
            }
            if !seen.insert(e.name.clone()) {
                return Err(BdsError::InvalidSystem(format!("duplicate edge {:?}", e.name)));
            }
            for endpoint in [&e.source, &e.range] {
                if !vertices.contains(endpoint) {
                    return Err(BdsError::InvalidSystem(format!(
                        "edge {:?} uses unknown vertex {endpoint:?}",
                        e.name
                    )));
                }
            }
        }
        Ok(GraphSpec { vertices, edges })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn vertex_index(&self, name: &str) -> usize {
        self.vertices.iter().position(|v| v == name).expect("validated vertex name")
    }

    /// `out[v]` = `(edge index, target vertex)`, in edge declaration order.
    fn out_edges(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            out[self.vertex_index(&e.source)].push((i, self.vertex_index(&e.range)));
        }
        out
    }
}

/// Atoms are the vertices; each edge becomes a label whose dual map sends the
/// edge's range to its source (and is undefined elsewhere).
pub fn vertex_construction(g: &GraphSpec) -> Bds {
    let n = g.vertices.len();
    let labels: Vec<String> = g.edges.iter().map(|e| e.name.clone()).collect();
    let maps = g
        .edges
        .iter()
        .map(|e| {
            let mut map = vec![None; n];
            map[g.vertex_index(&e.range)] = Some(g.vertex_index(&e.source));
            map
        })
        .collect();
    Bds::new(g.vertices.clone(), labels, maps).expect("validated graphs build directly")
}

/// Certificate for a graph-side Condition (K) failure: a vertex all of whose
/// closed paths are powers of one primitive edge sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphKWitness {
    pub vertex: String,
    /// Shortest closed path at the vertex, as edge names in path order.
    pub path: Vec<String>,
    /// Primitive root of that path.
    pub root: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphKVerdict {
    pub satisfied: bool,
    pub witness: Option<GraphKWitness>,
}

/// Decide Condition (K) for a graph directly on its edge lists: it fails
/// exactly when some vertex lies on essentially one cycle, meaning every
/// closed path through it is a power of a single primitive path. Checked per
/// vertex with a phase automaton over its strongly connected component, the
/// same way [`return_language_single_power`](crate::return_language_single_power)
/// works, but reading paths forward and never touching the dual formalism.
pub fn graph_condition_k(g: &GraphSpec) -> GraphKVerdict {
    let out = g.out_edges();
    let n = g.vertices.len();
    let adj: Vec<Vec<usize>> = out
        .iter()
        .map(|es| es.iter().map(|&(_, t)| t).collect())
        .collect();
    let comp = tarjan(&adj);

    for v in 0..n {
        let Some(path) = shortest_closed_path(&out, v) else { continue };
        let root = primitive_root(&path);
        let m = root.len();
        let mut seen = vec![false; n * m];
        seen[v * m] = true;
        let mut queue = VecDeque::from([(v, 0usize)]);
        let mut uniform = true;
        'bfs: while let Some((x, p)) = queue.pop_front() {
            for &(e, t) in &out[x] {
                if comp[t] != comp[v] {
                    continue;
                }
                if e != root[p] {
                    uniform = false;
                    break 'bfs;
                }
                let q = (p + 1) % m;
                if t == v && q != 0 {
                    uniform = false;
                    break 'bfs;
                }
                if !seen[t * m + q] {
                    seen[t * m + q] = true;
                    queue.push_back((t, q));
                }
            }
        }
        if uniform {
            let name = |&e: &usize| g.edges[e].name.clone();
            return GraphKVerdict {
                satisfied: false,
                witness: Some(GraphKWitness {
                    vertex: g.vertices[v].clone(),
                    path: path.iter().map(name).collect(),
                    root: root.iter().map(name).collect(),
                }),
            };
        }
    }
    GraphKVerdict { satisfied: true, witness: None }
}

/// Shortest closed path from `v` as edge indices, ties broken by edge
/// declaration order; `None` if `v` is not on a cycle.
fn shortest_closed_path(out: &[Vec<(usize, usize)>], v: usize) -> Option<Vec<usize>> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; out.len()];
    let mut visited = vec![false; out.len()];
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for &(e, t) in &out[x] {
            if t == v {
                let mut path = vec![e];
                let mut cur = x;
                while cur != v {
                    let (pv, pe) = parent[cur].expect("path reconstruction reaches the start");
                    path.push(pe);
                    cur = pv;
                }
                path.reverse();
                return Some(path);
            }
            if !visited[t] {
                visited[t] = true;
                parent[t] = Some((x, e));
                queue.push_back(t);
            }
        }
    }
    None
}

fn primitive_root(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| seq[i] == seq[i - p]) {
            return seq[..p].to_vec();
        }
    }
    seq.to_vec()
}

/// One boundary path of a graph: either a finite path ending in a sink
/// (possibly of length zero) or an eventually periodic infinite path in
/// lasso form. `start` is the first vertex; `edges` is the finite part in
/// path order; a nonempty `cycle` is repeated forever after it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryPath {
    pub start: String,
    pub edges: Vec<String>,
    pub cycle: Vec<String>,
}

impl BoundaryPath {
    pub fn is_infinite(&self) -> bool {
        !self.cycle.is_empty()
    }

    /// An infinite path that is a cycle from its first vertex on.
    pub fn is_pure_cycle(&self) -> bool {
        self.is_infinite() && self.edges.is_empty()
    }

    /// Canonical name: the start vertex for length-zero paths, dot-joined
    /// edge names otherwise, with an infinite tail as `(…)^inf`.
    pub fn render(&self) -> String {
        if self.edges.is_empty() && self.cycle.is_empty() {
            return self.start.clone();
        }
        let stem = self.edges.join(".");
        if self.cycle.is_empty() {
            stem
        } else if stem.is_empty() {
            format!("({})^inf", self.cycle.join("."))
        } else {
            format!("{stem}.({})^inf", self.cycle.join("."))
        }
    }
}

/// All boundary paths of the graph: finite paths ending in sinks plus
/// eventually periodic infinite paths.
///
/// The space is finite exactly when no cycle has an exit, i.e. every vertex
/// on a cycle has out-degree one: an exit pumps arbitrarily many loops ahead
/// of itself, and without exits every infinite path is a lasso into one of
/// the pairwise disjoint terminal cycles while finite boundary paths stay in
/// the acyclic region. Graphs with an exit are rejected with the pumpable
/// cycle and its exit edge; path counts beyond an internal cap are rejected
/// as oversized.
pub fn boundary_paths(g: &GraphSpec) -> Result<Vec<BoundaryPath>, BdsError> {
    let out = g.out_edges();
    let n = g.vertices.len();
    let adj: Vec<Vec<usize>> = out
        .iter()
        .map(|es| es.iter().map(|&(_, t)| t).collect())
        .collect();
    let comp = tarjan(&adj);
    let on_cycle: Vec<bool> = (0..n)
        .map(|v| {
            (0..n).any(|w| w != v && comp[w] == comp[v])
                || out[v].iter().any(|&(_, t)| t == v)
        })
        .collect();

    for v in 0..n {
        if on_cycle[v] && out[v].len() > 1 {
            let cycle = shortest_closed_path(&out, v).expect("on-cycle vertices close up");
            let exit = out[v]
                .iter()
                .map(|&(e, _)| e)
                .find(|&e| e != cycle[0])
                .expect("a second out-edge exists");
            return Err(BdsError::InfiniteBoundary {
                cycle: cycle
                    .iter()
                    .map(|&e| g.edges[e].name.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
                exit: g.edges[exit].name.clone(),
            });
        }
    }

    // Exit-free: cycles are disjoint orbits of the (now functional) on-cycle
    // region. Record for each cycle vertex its cycle, phase-aligned.
    let mut cycle_of: Vec<Option<Vec<usize>>> = vec![None; n]; // edge seq from v
    for v in 0..n {
        if !on_cycle[v] || cycle_of[v].is_some() {
            continue;
        }
        let mut orbit_edges = Vec::new();
        let mut orbit_vertices = vec![v];
        let mut cur = v;
        loop {
            let &(e, t) = &out[cur][0];
            orbit_edges.push(e);
            if t == v {
                break;
            }
            orbit_vertices.push(t);
            cur = t;
        }
        for (i, &w) in orbit_vertices.iter().enumerate() {
            let mut rotated = orbit_edges[i..].to_vec();
            rotated.extend_from_slice(&orbit_edges[..i]);
            cycle_of[w] = Some(rotated);
        }
    }

    let edge_name = |e: usize| g.edges[e].name.clone();
    let mut paths: Vec<BoundaryPath> = Vec::new();
    let push = |p: BoundaryPath, paths: &mut Vec<BoundaryPath>| -> Result<(), BdsError> {
        paths.push(p);
        if paths.len() > BOUNDARY_PATH_CAP {
            return Err(BdsError::SizeLimit { atoms: paths.len(), max: BOUNDARY_PATH_CAP });
        }
        Ok(())
    };

    // Pure cycles.
    for v in 0..n {
        if let Some(cycle) = &cycle_of[v] {
            push(
                BoundaryPath {
                    start: g.vertices[v].clone(),
                    edges: vec![],
                    cycle: cycle.iter().copied().map(edge_name).collect(),
                },
                &mut paths,
            )?;
        }
    }

    // Depth-first over the acyclic region from every start vertex: emit a
    // finite path at each sink and a lasso at each edge into a cycle.
    for start in 0..n {
        if on_cycle[start] {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, vec![])];
        while let Some((v, trail)) = stack.pop() {
            if out[v].is_empty() {
                push(
                    BoundaryPath {
                        start: g.vertices[start].clone(),
                        edges: trail.iter().copied().map(edge_name).collect(),
                        cycle: vec![],
                    },
                    &mut paths,
                )?;
                continue;
            }
            for &(e, t) in out[v].iter().rev() {
                let mut next = trail.clone();
                next.push(e);
                if let Some(cycle) = &cycle_of[t] {
                    push(
                        BoundaryPath {
                            start: g.vertices[start].clone(),
                            edges: next.iter().copied().map(edge_name).collect(),
                            cycle: cycle.iter().copied().map(edge_name).collect(),
                        },
                        &mut paths,
                    )?;
                } else {
                    stack.push((t, next));
                }
            }
        }
    }

    paths.sort_by_cached_key(|p| (p.is_infinite(), p.edges.len(), p.render(), p.start.clone()));
    Ok(paths)
}

/// Atoms are the boundary paths; each edge acts by prepending itself to
/// paths starting at its range. Prepending a cycle's own closing edge to a
/// pure cycle rotates it in place, so the atom set is closed under all the
/// partial actions.
pub fn boundary_construction(g: &GraphSpec) -> Result<Bds, BdsError> {
    let paths = boundary_paths(g)?;
    let index: HashMap<&BoundaryPath, usize> =
        paths.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut ids: Vec<String> = paths.iter().map(BoundaryPath::render).collect();
    {
        let mut seen = std::collections::HashSet::new();
        if !ids.iter().all(|id| seen.insert(id.clone())) {
            ids = ids.iter().enumerate().map(|(i, id)| format!("{i}:{id}")).collect();
        }
    }

    let labels: Vec<String> = g.edges.iter().map(|e| e.name.clone()).collect();
    let mut maps = vec![vec![None; paths.len()]; g.edges.len()];
    for (l, e) in g.edges.iter().enumerate() {
        for (i, p) in paths.iter().enumerate() {
            if p.start != e.range {
                continue;
            }
            let image = if p.is_pure_cycle() && p.cycle.last() == Some(&e.name) {
                let mut cycle = vec![p.cycle[p.cycle.len() - 1].clone()];
                cycle.extend_from_slice(&p.cycle[..p.cycle.len() - 1]);
                BoundaryPath { start: e.source.clone(), edges: vec![], cycle }
            } else {
                let mut edges = vec![e.name.clone()];
                edges.extend_from_slice(&p.edges);
                BoundaryPath { start: e.source.clone(), edges, cycle: p.cycle.clone() }
            };
            let target = *index.get(&image).ok_or_else(|| {
                BdsError::Internal(format!(
                    "boundary space is not closed: {} missing",
                    image.render()
                ))
            })?;
            maps[l][i] = Some(target);
        }
    }
    Bds::new(ids, labels, maps)
}

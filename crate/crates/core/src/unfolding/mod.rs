//! Edge unfoldings of 3-polytopes: cut a spanning set of edges, develop the
//! faces into the plane over the remaining fold edges, and test the result
//! for interior overlaps.

mod builtin;
mod develop;
mod search;

pub use builtin::{builtin, builtin_names, BuiltinSolid};
pub use develop::{check_overlap, unfold, write_net_csv, Net, OverlapReport, PlacedFace};
pub use search::{
    enumerate_spanning_trees, sample_spanning_tree, search_nonoverlapping, SearchOutcome,
    SearchStatus, TreeStrategy,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::FloatVec;
use crate::linkage::Graph;

/// Face planarity tolerance.
const PLANARITY_TOL: f64 = 1e-7;

/// Closed polyhedral surface with planar convex faces, each face listed
/// counterclockwise as seen from outside.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Polytope3Wire", into = "Polytope3Wire")]
pub struct Polytope3 {
    vertices: Vec<FloatVec>,
    faces: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct Polytope3Wire {
    vertices: Vec<FloatVec>,
    faces: Vec<Vec<usize>>,
}

impl TryFrom<Polytope3Wire> for Polytope3 {
    type Error = Error;
    fn try_from(w: Polytope3Wire) -> Result<Self> {
        Polytope3::new(w.vertices, w.faces)
    }
}

impl From<Polytope3> for Polytope3Wire {
    fn from(p: Polytope3) -> Self {
        Polytope3Wire {
            vertices: p.vertices,
            faces: p.faces,
        }
    }
}

/// One dual-graph arc: the two faces and the polytope edge they share.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DualArc {
    pub faces: (usize, usize),
    pub edge: (usize, usize),
}

impl Polytope3 {
    pub fn new(vertices: Vec<FloatVec>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let p = Polytope3 { vertices, faces };
        p.validate()?;
        Ok(p)
    }

    pub fn vertices(&self) -> &[FloatVec] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Undirected edge set.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::BTreeSet::new();
        for face in &self.faces {
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.into_iter().collect()
    }

    fn validate(&self) -> Result<()> {
        if self.vertices.len() < 4 || self.faces.len() < 4 {
            return Err(Error::invalid(
                "a closed polyhedron needs at least 4 vertices and 4 faces",
            ));
        }
        for v in &self.vertices {
            if v.dim() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    got: v.dim(),
                });
            }
            if !v.is_finite() {
                return Err(Error::invalid("non-finite vertex"));
            }
        }
        for (fi, face) in self.faces.iter().enumerate() {
            if face.len() < 3 {
                return Err(Error::invalid(format!(
                    "face {fi} has fewer than 3 vertices"
                )));
            }
            let mut sorted = face.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != face.len() {
                return Err(Error::invalid(format!("face {fi} repeats a vertex")));
            }
            for &v in face {
                if v >= self.vertices.len() {
                    return Err(Error::invalid(format!(
                        "face {fi} references vertex {v} out of range"
                    )));
                }
            }
        }

        // Every undirected edge must be shared by exactly two faces, with
        // opposite directions (consistent winding).
        let mut edge_uses: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
        for (fi, face) in self.faces.iter().enumerate() {
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                let key = (a.min(b), a.max(b));
                edge_uses.entry(key).or_default().push((fi, a < b));
            }
        }
        for (edge, uses) in &edge_uses {
            if uses.len() != 2 {
                return Err(Error::invalid(format!(
                    "edge {edge:?} belongs to {} faces, expected exactly 2",
                    uses.len()
                )));
            }
            if uses[0].1 == uses[1].1 {
                return Err(Error::invalid(format!(
                    "edge {edge:?} is traversed in the same direction by both faces"
                )));
            }
        }

        // Euler relation for a sphere-like surface.
        let (v, e, f) = (self.vertices.len(), edge_uses.len(), self.faces.len());
        if v + f != e + 2 {
            return Err(Error::invalid(format!(
                "Euler relation violated: V={v}, E={e}, F={f}"
            )));
        }

        // Planarity and convexity of each face.
        for (fi, face) in self.faces.iter().enumerate() {
            let n = self.face_normal(fi);
            let norm = n.norm();
            if norm <= 0.0 {
                return Err(Error::invalid(format!("face {fi} has zero area")));
            }
            let unit = n.scale(1.0 / norm);
            let base = &self.vertices[face[0]];
            for &v in face {
                let off = self.vertices[v].sub(base).dot(&unit).abs();
                if off > PLANARITY_TOL {
                    return Err(Error::invalid(format!(
                        "face {fi} is not planar: vertex {v} is off-plane by {off:.3e}"
                    )));
                }
            }
            for i in 0..face.len() {
                let a = &self.vertices[face[i]];
                let b = &self.vertices[face[(i + 1) % face.len()]];
                let c = &self.vertices[face[(i + 2) % face.len()]];
                let e1 = b.sub(a);
                let e2 = c.sub(b);
                let turn = cross3(&e1, &e2).dot(&unit);
                if turn < -1e-9 {
                    return Err(Error::invalid(format!("face {fi} is not convex")));
                }
            }
        }

        // A face pair may share at most one edge, so fold edges and dual arcs
        // are in bijection.
        let mut pair_edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for uses in edge_uses.values() {
            let (f1, f2) = (uses[0].0, uses[1].0);
            let key = (f1.min(f2), f1.max(f2));
            *pair_edges.entry(key).or_insert(0) += 1;
        }
        if let Some((pair, _)) = pair_edges.iter().find(|(_, &c)| c > 1) {
            return Err(Error::invalid(format!(
                "faces {pair:?} share more than one edge"
            )));
        }
        Ok(())
    }

    /// Newell normal of a face; points outward when the face is listed
    /// counterclockwise from outside.
    pub(crate) fn face_normal(&self, face: usize) -> FloatVec {
        let cycle = &self.faces[face];
        let mut n = [0.0f64; 3];
        for i in 0..cycle.len() {
            let a = &self.vertices[cycle[i]];
            let b = &self.vertices[cycle[(i + 1) % cycle.len()]];
            n[0] += (a[1] - b[1]) * (a[2] + b[2]);
            n[1] += (a[2] - b[2]) * (a[0] + b[0]);
            n[2] += (a[0] - b[0]) * (a[1] + b[1]);
        }
        FloatVec::raw(n.to_vec())
    }

    /// Area of one face.
    pub(crate) fn face_area(&self, face: usize) -> f64 {
        self.face_normal(face).norm() / 2.0
    }

    /// Total surface area.
    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Dual adjacency: one arc per shared edge, sorted by face pair.
    pub fn dual_arcs(&self) -> Vec<DualArc> {
        let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (fi, face) in self.faces.iter().enumerate() {
            for i in 0..face.len() {
                let (a, b) = (face[i], face[(i + 1) % face.len()]);
                edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        let mut arcs: Vec<DualArc> = edge_faces
            .into_iter()
            .map(|(edge, fs)| DualArc {
                faces: (fs[0].min(fs[1]), fs[0].max(fs[1])),
                edge,
            })
            .collect();
        arcs.sort();
        arcs
    }
}

/// Faces as nodes, shared edges as arcs.
pub fn dual_graph(p: &Polytope3) -> Result<Graph> {
    let edges: Vec<(usize, usize)> = p.dual_arcs().iter().map(|a| a.faces).collect();
    Graph::new(p.face_count(), &edges)
}

/// The fold edges of an unfolding: a spanning tree of the dual graph,
/// identified by the polytope edges that stay uncut.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutTree {
    pub fold_edges: std::collections::BTreeSet<(usize, usize)>,
}

impl CutTree {
    pub fn new(fold_edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        CutTree {
            fold_edges: fold_edges
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }

    /// Check that the fold edges form a spanning tree of the dual graph and
    /// return the selected arcs.
    pub fn validate_for(&self, p: &Polytope3) -> Result<Vec<DualArc>> {
        let arcs = p.dual_arcs();
        let by_edge: BTreeMap<(usize, usize), DualArc> =
            arcs.iter().map(|a| (a.edge, *a)).collect();
        let mut chosen = Vec::with_capacity(self.fold_edges.len());
        for e in &self.fold_edges {
            match by_edge.get(e) {
                Some(arc) => chosen.push(*arc),
                None => {
                    return Err(Error::invalid(format!(
                        "fold edge {e:?} is not a polytope edge"
                    )))
                }
            }
        }
        let f = p.face_count();
        if chosen.len() != f - 1 {
            return Err(Error::invalid(format!(
                "spanning tree needs {} fold edges, got {}",
                f - 1,
                chosen.len()
            )));
        }
        // Connectivity over faces.
        let mut adj = vec![Vec::new(); f];
        for arc in &chosen {
            adj[arc.faces.0].push(arc.faces.1);
            adj[arc.faces.1].push(arc.faces.0);
        }
        let mut seen = vec![false; f];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != f {
            return Err(Error::invalid("fold edges do not connect all faces"));
        }
        Ok(chosen)
    }
}

pub(crate) fn cross3(a: &FloatVec, b: &FloatVec) -> FloatVec {
    FloatVec::raw(vec![
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])
}

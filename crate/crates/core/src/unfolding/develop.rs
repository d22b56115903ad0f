//! Isometric development of a polytope surface into the plane and the
//! interior-overlap check on the result.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{FloatVec, Tolerance};
use crate::polygon::convex_polygons_interior_overlap;

use super::{cross3, CutTree, DualArc, Polytope3};

/// One developed face: its index and its planar polygon, vertices in the same
/// cyclic order as the 3-D face.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlacedFace {
    pub face: usize,
    pub polygon: Vec<FloatVec>,
}

/// Planar development of the whole surface over a fold-edge tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Net {
    pub placed_faces: Vec<PlacedFace>,
    pub tree_used: CutTree,
}

impl Net {
    /// Planar coordinates of polytope vertex `v` as placed for `face`.
    pub fn placed_vertex(&self, p: &Polytope3, face: usize, v: usize) -> Option<&FloatVec> {
        let placed = self.placed_faces.iter().find(|pf| pf.face == face)?;
        let cycle = &p.faces()[face];
        let pos = cycle.iter().position(|&u| u == v)?;
        Some(&placed.polygon[pos])
    }
}

/// Pairs of faces whose developed interiors overlap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverlapReport {
    pub overlapping: bool,
    pub pairs: Vec<(usize, usize)>,
}

/// Isometric planar embedding of one face: local orthonormal coordinates in
/// the face plane, counterclockwise, first listed edge along +x.
fn local_face_coords(p: &Polytope3, face: usize) -> Result<Vec<FloatVec>> {
    let cycle = &p.faces()[face];
    let base = &p.vertices()[cycle[0]];
    let e1 = {
        let raw = p.vertices()[cycle[1]].sub(base);
        let len = raw.norm();
        if len == 0.0 {
            return Err(Error::invalid(format!(
                "face {face} has a zero-length edge"
            )));
        }
        raw.scale(1.0 / len)
    };
    let normal = {
        let raw = p.face_normal(face);
        raw.scale(1.0 / raw.norm())
    };
    let e2 = cross3(&normal, &e1);
    Ok(cycle
        .iter()
        .map(|&v| {
            let d = p.vertices()[v].sub(base);
            FloatVec::raw(vec![d.dot(&e1), d.dot(&e2)])
        })
        .collect())
}

/// Orientation-preserving planar isometry mapping `from` onto `to`,
/// represented as (rotation as a complex number, translation).
struct Rigid2 {
    c: f64,
    s: f64,
    t: (f64, f64),
}

impl Rigid2 {
    fn matching(from: (&FloatVec, &FloatVec), to: (&FloatVec, &FloatVec)) -> Self {
        let df = (from.1[0] - from.0[0], from.1[1] - from.0[1]);
        let dt = (to.1[0] - to.0[0], to.1[1] - to.0[1]);
        let n2 = df.0 * df.0 + df.1 * df.1;
        // Complex division dt / df.
        let c = (dt.0 * df.0 + dt.1 * df.1) / n2;
        let s = (dt.1 * df.0 - dt.0 * df.1) / n2;
        let rx = c * from.0[0] - s * from.0[1];
        let ry = s * from.0[0] + c * from.0[1];
        Rigid2 {
            c,
            s,
            t: (to.0[0] - rx, to.0[1] - ry),
        }
    }

    fn apply(&self, p: &FloatVec) -> FloatVec {
        FloatVec::raw(vec![
            self.c * p[0] - self.s * p[1] + self.t.0,
            self.s * p[0] + self.c * p[1] + self.t.1,
        ])
    }
}

/// Develop the surface over the fold tree. The root face (the lowest face
/// index) is placed with its first edge on the positive x-axis and interior
/// in the upper half-plane; every child face is attached across its shared
/// edge on the opposite side from its parent. Deterministic: the same
/// polytope and tree produce the identical net.
pub fn unfold(p: &Polytope3, tree: &CutTree) -> Result<Net> {
    let arcs = tree.validate_for(p)?;
    let f = p.face_count();

    let mut adj: Vec<Vec<&DualArc>> = vec![Vec::new(); f];
    for arc in &arcs {
        adj[arc.faces.0].push(arc);
        adj[arc.faces.1].push(arc);
    }

    // Planar placement per face, keyed by (face, vertex).
    let mut placed: Vec<Option<BTreeMap<usize, FloatVec>>> = vec![None; f];
    let root = 0usize;
    {
        let cycle = &p.faces()[root];
        let local = local_face_coords(p, root)?;
        placed[root] = Some(cycle.iter().copied().zip(local).collect());
    }

    // Breadth-first development, children in ascending face order.
    let mut order = vec![root];
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(cur) = queue.pop_front() {
        let mut kids: Vec<(usize, (usize, usize))> = adj[cur]
            .iter()
            .map(|arc| {
                let other = if arc.faces.0 == cur {
                    arc.faces.1
                } else {
                    arc.faces.0
                };
                (other, arc.edge)
            })
            .filter(|(other, _)| placed[*other].is_none())
            .collect();
        kids.sort_unstable();
        for (child, (u, w)) in kids {
            let cycle = &p.faces()[child];
            let local = local_face_coords(p, child)?;
            let local_map: BTreeMap<usize, FloatVec> =
                cycle.iter().copied().zip(local.iter().cloned()).collect();
            let parent_map = placed[cur].as_ref().expect("parent placed");
            let motion = Rigid2::matching(
                (&local_map[&u], &local_map[&w]),
                (&parent_map[&u], &parent_map[&w]),
            );
            let child_map: BTreeMap<usize, FloatVec> = cycle
                .iter()
                .map(|&v| (v, motion.apply(&local_map[&v])))
                .collect();
            placed[child] = Some(child_map);
            order.push(child);
            queue.push_back(child);
        }
    }

    let placed_faces = order
        .into_iter()
        .map(|face| {
            let map = placed[face].take().expect("all faces placed");
            PlacedFace {
                polygon: p.faces()[face].iter().map(|v| map[v].clone()).collect(),
                face,
            }
        })
        .collect();
    Ok(Net {
        placed_faces,
        tree_used: tree.clone(),
    })
}

/// Test every face pair of the net for interior overlap. Faces adjacent in
/// the fold tree are tested like any other pair: sharing their fold edge is
/// fine, overlapping beyond it is not.
pub fn check_overlap(net: &Net, tol: Tolerance) -> Result<OverlapReport> {
    let n = net.placed_faces.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let a = &net.placed_faces[i];
            let b = &net.placed_faces[j];
            if convex_polygons_interior_overlap(&a.polygon, &b.polygon, tol)? {
                let (fa, fb) = (a.face.min(b.face), a.face.max(b.face));
                pairs.push((fa, fb));
            }
        }
    }
    pairs.sort_unstable();
    Ok(OverlapReport {
        overlapping: !pairs.is_empty(),
        pairs,
    })
}

/// Header `face,vertex,x,y`: one row per placed polygon corner.
pub fn write_net_csv<W: Write>(net: &Net, w: &mut W) -> Result<()> {
    writeln!(w, "face,vertex,x,y")?;
    for pf in &net.placed_faces {
        for (i, v) in pf.polygon.iter().enumerate() {
            writeln!(w, "{},{},{},{}", pf.face, i, v[0], v[1])?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{builtin, dual_graph, BuiltinSolid};
    use super::*;

    fn star_tree(p: &Polytope3, center: usize) -> CutTree {
        // All edges of `center`'s face: valid when the center face touches
        // every other face (tetrahedron).
        CutTree::new(
            p.dual_arcs()
                .iter()
                .filter(|a| a.faces.0 == center || a.faces.1 == center)
                .map(|a| a.edge),
        )
    }

    #[test]
    fn tetrahedron_net_is_isometric() {
        let t = builtin(BuiltinSolid::Tetrahedron);
        let tree = star_tree(&t, 0);
        let net = unfold(&t, &tree).unwrap();
        assert_eq!(net.placed_faces.len(), 4);

        // Every placed edge has its source length.
        for pf in &net.placed_faces {
            let cycle = &t.faces()[pf.face];
            for i in 0..cycle.len() {
                let j = (i + 1) % cycle.len();
                let src = t.vertices()[cycle[i]].dist(&t.vertices()[cycle[j]]);
                let dst = pf.polygon[i].dist(&pf.polygon[j]);
                assert!((src - dst).abs() < 1e-6);
            }
        }

        // Total developed area equals the surface area.
        let developed: f64 = net
            .placed_faces
            .iter()
            .map(|pf| crate::polygon::signed_area(&pf.polygon))
            .sum();
        assert!((developed - t.surface_area()).abs() < 1e-5 * t.surface_area());
    }

    #[test]
    fn root_face_normalization() {
        let t = builtin(BuiltinSolid::Tetrahedron);
        let net = unfold(&t, &star_tree(&t, 0)).unwrap();
        let root = &net.placed_faces[0];
        assert_eq!(root.face, 0);
        assert!(root.polygon[0].norm() < 1e-12, "first vertex at origin");
        assert!(root.polygon[1][1].abs() < 1e-12, "first edge on the x-axis");
        assert!(root.polygon[1][0] > 0.0, "first edge along +x");
        assert!(
            root.polygon.iter().all(|v| v[1] > -1e-12),
            "interior in the upper half-plane"
        );
    }

    #[test]
    fn tree_adjacent_faces_share_their_fold_edge() {
        let c = builtin(BuiltinSolid::Cube);
        let arcs = c.dual_arcs();
        // Any spanning tree will do; grow greedily.
        let mut tree_edges = Vec::new();
        let mut comp: Vec<usize> = (0..c.face_count()).collect();
        for arc in &arcs {
            let (a, b) = arc.faces;
            let (ca, cb) = (comp[a], comp[b]);
            if ca != cb {
                tree_edges.push(arc.edge);
                for x in comp.iter_mut() {
                    if *x == cb {
                        *x = ca;
                    }
                }
            }
        }
        let tree = CutTree::new(tree_edges);
        let net = unfold(&c, &tree).unwrap();
        for arc in tree.validate_for(&c).unwrap() {
            let (fa, fb) = arc.faces;
            let (u, w) = arc.edge;
            for v in [u, w] {
                let pa = net.placed_vertex(&c, fa, v).unwrap();
                let pb = net.placed_vertex(&c, fb, v).unwrap();
                assert!(pa.dist(pb) < 1e-9, "fold edge vertex {v} split apart");
            }
        }
    }

    #[test]
    fn unfold_is_deterministic() {
        let t = builtin(BuiltinSolid::Octahedron);
        let arcs = t.dual_arcs();
        let mut tree_edges = Vec::new();
        let mut comp: Vec<usize> = (0..t.face_count()).collect();
        for arc in &arcs {
            let (a, b) = arc.faces;
            let (ca, cb) = (comp[a], comp[b]);
            if ca != cb {
                tree_edges.push(arc.edge);
                for x in comp.iter_mut() {
                    if *x == cb {
                        *x = ca;
                    }
                }
            }
        }
        let tree = CutTree::new(tree_edges);
        let n1 = unfold(&t, &tree).unwrap();
        let n2 = unfold(&t, &tree).unwrap();
        for (a, b) in n1.placed_faces.iter().zip(&n2.placed_faces) {
            assert_eq!(a.face, b.face);
            for (u, v) in a.polygon.iter().zip(&b.polygon) {
                assert_eq!(u.coords(), v.coords(), "net is not bit-identical");
            }
        }
    }

    #[test]
    fn total_area_is_independent_of_the_tree() {
        let c = builtin(BuiltinSolid::Cube);
        let surface = c.surface_area();
        let trees = super::super::enumerate_spanning_trees(&c, 10).unwrap();
        for tree in &trees {
            let net = unfold(&c, tree).unwrap();
            let developed: f64 = net
                .placed_faces
                .iter()
                .map(|pf| crate::polygon::signed_area(&pf.polygon))
                .sum();
            assert!((developed - surface).abs() < 1e-5 * surface);
        }
    }

    #[test]
    fn cube_cross_net_does_not_overlap() {
        let c = builtin(BuiltinSolid::Cube);
        // Cross tree: face 0 folded to its four neighbors, plus one neighbor
        // folded to the face opposite 0.
        let dual = dual_graph(&c).unwrap();
        let adj = dual.adjacency();
        let around: Vec<usize> = adj[0].clone();
        let opposite = (0..c.face_count())
            .find(|f| *f != 0 && !around.contains(f))
            .unwrap();
        let arcs = c.dual_arcs();
        let edge_of = |a: usize, b: usize| {
            arcs.iter()
                .find(|arc| arc.faces == (a.min(b), a.max(b)))
                .unwrap()
                .edge
        };
        let mut edges: Vec<(usize, usize)> = around.iter().map(|&f| edge_of(0, f)).collect();
        edges.push(edge_of(around[0], opposite));
        let net = unfold(&c, &CutTree::new(edges)).unwrap();
        let report = check_overlap(&net, Tolerance::default()).unwrap();
        assert!(
            !report.overlapping,
            "cross net overlaps: {:?}",
            report.pairs
        );
        assert_eq!(net.placed_faces.len(), 6);
    }

    #[test]
    fn overlap_check_is_rigid_motion_invariant() {
        let t = builtin(BuiltinSolid::Tetrahedron);
        let net = unfold(&t, &star_tree(&t, 0)).unwrap();
        let report = check_overlap(&net, Tolerance::default()).unwrap();

        let (c, s) = (0.6f64.cos(), 0.6f64.sin());
        let moved = Net {
            placed_faces: net
                .placed_faces
                .iter()
                .map(|pf| PlacedFace {
                    face: pf.face,
                    polygon: pf
                        .polygon
                        .iter()
                        .map(|v| {
                            FloatVec::raw(vec![
                                c * v[0] - s * v[1] + 10.0,
                                s * v[0] + c * v[1] - 3.0,
                            ])
                        })
                        .collect(),
                })
                .collect(),
            tree_used: net.tree_used.clone(),
        };
        let report2 = check_overlap(&moved, Tolerance::default()).unwrap();
        assert_eq!(report.overlapping, report2.overlapping);
        assert_eq!(report.pairs, report2.pairs);
    }

    #[test]
    fn net_csv_format() {
        let t = builtin(BuiltinSolid::Tetrahedron);
        let net = unfold(&t, &star_tree(&t, 0)).unwrap();
        let mut buf = Vec::new();
        write_net_csv(&net, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("face,vertex,x,y\n"));
        assert_eq!(text.lines().count(), 1 + 4 * 3);
    }
}

//! Reference solids with unit edge length.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::float::FloatVec;

use super::{cross3, Polytope3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinSolid {
    Tetrahedron,
    Cube,
    Octahedron,
    /// Irregular truncated tetrahedron whose edge unfoldings include
    /// overlapping ones (1044 of its 6000 fold trees overlap).
    TruncatedTetrahedron,
    /// The Archimedean (equal-edge) truncated tetrahedron. Exhaustive sweep
    /// of all 6000 fold trees shows none of its unfoldings overlap.
    TruncatedTetrahedronRegular,
}

impl std::str::FromStr for BuiltinSolid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tetrahedron" => Ok(BuiltinSolid::Tetrahedron),
            "cube" => Ok(BuiltinSolid::Cube),
            "octahedron" => Ok(BuiltinSolid::Octahedron),
            "truncated-tetrahedron" => Ok(BuiltinSolid::TruncatedTetrahedron),
            "truncated-tetrahedron-regular" => Ok(BuiltinSolid::TruncatedTetrahedronRegular),
            other => Err(Error::invalid(format!(
                "unknown builtin {other:?}; available: {}",
                builtin_names().join(", ")
            ))),
        }
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    vec![
        "tetrahedron",
        "cube",
        "octahedron",
        "truncated-tetrahedron",
        "truncated-tetrahedron-regular",
    ]
}

/// Construct one of the reference solids. The uniform solids are normalized
/// to unit edge length; the irregular truncated tetrahedron keeps its exact
/// dyadic coordinates.
pub fn builtin(which: BuiltinSolid) -> Polytope3 {
    let (raw, normalize): (Vec<[f64; 3]>, bool) = match which {
        BuiltinSolid::Tetrahedron => (
            vec![
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ],
            true,
        ),
        BuiltinSolid::Cube => (
            vec![
                [-1.0, -1.0, -1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
                [1.0, -1.0, 1.0],
                [-1.0, 1.0, 1.0],
                [1.0, 1.0, 1.0],
            ],
            true,
        ),
        BuiltinSolid::Octahedron => (
            vec![
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
            true,
        ),
        // Corners (0,0,0), (6,0,0), (3,2,0), (3,1,1) cut at 1/4 along each
        // incident edge. The elongated base is what makes overlapping
        // unfoldings possible; regular truncations never overlap.
        BuiltinSolid::TruncatedTetrahedron => (
            truncate_tetrahedron(
                [
                    [0.0, 0.0, 0.0],
                    [6.0, 0.0, 0.0],
                    [3.0, 2.0, 0.0],
                    [3.0, 1.0, 1.0],
                ],
                0.25,
            ),
            false,
        ),
        // All permutations of (3, 1, 1) with an even number of minus signs.
        BuiltinSolid::TruncatedTetrahedronRegular => {
            let mut pts = Vec::new();
            let signs = [
                [1.0, 1.0, 1.0],
                [1.0, -1.0, -1.0],
                [-1.0, 1.0, -1.0],
                [-1.0, -1.0, 1.0],
            ];
            let perms = [[3.0, 1.0, 1.0], [1.0, 3.0, 1.0], [1.0, 1.0, 3.0]];
            for s in signs {
                for p in perms {
                    pts.push([p[0] * s[0], p[1] * s[1], p[2] * s[2]]);
                }
            }
            (pts, true)
        }
    };
    let scale = if normalize {
        // Normalize to unit edge: the shortest pairwise distance is the edge.
        let mut min_d2 = f64::INFINITY;
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let d2 = (0..3).map(|k| (raw[i][k] - raw[j][k]).powi(2)).sum::<f64>();
                if d2 > 1e-12 {
                    min_d2 = min_d2.min(d2);
                }
            }
        }
        1.0 / min_d2.sqrt()
    } else {
        1.0
    };
    let vertices: Vec<FloatVec> = raw
        .into_iter()
        .map(|p| FloatVec::raw(vec![p[0] * scale, p[1] * scale, p[2] * scale]))
        .collect();
    let faces = faces_from_convex_hull(&vertices).expect("builtin solids are convex");
    Polytope3::new(vertices, faces).expect("builtin solids are valid")
}

/// Vertices of a corner-truncated tetrahedron: fraction `t` cut from every
/// corner along each incident edge.
fn truncate_tetrahedron(corners: [[f64; 3]; 4], t: f64) -> Vec<[f64; 3]> {
    let mut pts = Vec::with_capacity(12);
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let mut v = [0.0f64; 3];
            for (k, item) in v.iter_mut().enumerate() {
                *item = corners[i][k] + t * (corners[j][k] - corners[i][k]);
            }
            pts.push(v);
        }
    }
    pts
}

/// Enumerate the facets of a small convex point set in general position:
/// every supporting plane spanned by a vertex triple, with the coplanar
/// vertex set ordered counterclockwise around the outward normal.
fn faces_from_convex_hull(vertices: &[FloatVec]) -> Result<Vec<Vec<usize>>> {
    let n = vertices.len();
    if n < 4 {
        return Err(Error::invalid("hull needs at least 4 points"));
    }
    let scale: f64 = vertices.iter().map(FloatVec::norm).fold(0.0, f64::max);
    let tol = 1e-9 * scale.max(1.0);
    let centroid = {
        let mut c = FloatVec::zeros(3);
        for v in vertices {
            c = c.add(v);
        }
        c.scale(1.0 / n as f64)
    };

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross3(
                    &vertices[j].sub(&vertices[i]),
                    &vertices[k].sub(&vertices[i]),
                );
                let len = normal.norm();
                if len <= tol {
                    continue;
                }
                let unit = normal.scale(1.0 / len);
                let offsets: Vec<f64> = vertices
                    .iter()
                    .map(|v| v.sub(&vertices[i]).dot(&unit))
                    .collect();
                let all_below = offsets.iter().all(|&o| o <= tol);
                let all_above = offsets.iter().all(|&o| o >= -tol);
                if !all_below && !all_above {
                    continue;
                }
                let mut members: Vec<usize> = offsets
                    .iter()
                    .enumerate()
                    .filter(|(_, &o)| o.abs() <= tol)
                    .map(|(idx, _)| idx)
                    .collect();
                members.sort_unstable();
                if members.len() < 3 || !seen.insert(members.clone()) {
                    continue;
                }
                // Outward unit normal.
                let outward = if centroid.sub(&vertices[i]).dot(&unit) > 0.0 {
                    unit.scale(-1.0)
                } else {
                    unit
                };
                // Order counterclockwise around the outward normal.
                let fc = {
                    let mut c = FloatVec::zeros(3);
                    for &m in &members {
                        c = c.add(&vertices[m]);
                    }
                    c.scale(1.0 / members.len() as f64)
                };
                let u1 = {
                    let raw = vertices[members[0]].sub(&fc);
                    raw.scale(1.0 / raw.norm())
                };
                let u2 = cross3(&outward, &u1);
                members.sort_by(|&a, &b| {
                    let pa = vertices[a].sub(&fc);
                    let pb = vertices[b].sub(&fc);
                    let ta = pa.dot(&u2).atan2(pa.dot(&u1));
                    let tb = pb.dot(&u2).atan2(pb.dot(&u1));
                    ta.total_cmp(&tb)
                });
                faces.push(members);
            }
        }
    }
    Ok(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_builtin_edge_lengths_are_unit() {
        for solid in [
            BuiltinSolid::Tetrahedron,
            BuiltinSolid::Cube,
            BuiltinSolid::Octahedron,
            BuiltinSolid::TruncatedTetrahedronRegular,
        ] {
            let p = builtin(solid);
            for (a, b) in p.edges() {
                let len = p.vertices()[a].dist(&p.vertices()[b]);
                assert!((len - 1.0).abs() < 1e-12, "{solid:?} edge {a}-{b}: {len}");
            }
        }
    }

    #[test]
    fn builtin_face_counts() {
        assert_eq!(builtin(BuiltinSolid::Tetrahedron).face_count(), 4);
        assert_eq!(builtin(BuiltinSolid::Cube).face_count(), 6);
        assert_eq!(builtin(BuiltinSolid::Octahedron).face_count(), 8);
        assert_eq!(builtin(BuiltinSolid::TruncatedTetrahedron).face_count(), 8);
        assert_eq!(
            builtin(BuiltinSolid::TruncatedTetrahedronRegular).face_count(),
            8
        );
    }

    #[test]
    fn truncated_tetrahedron_combinatorics() {
        for solid in [
            BuiltinSolid::TruncatedTetrahedron,
            BuiltinSolid::TruncatedTetrahedronRegular,
        ] {
            let tt = builtin(solid);
            assert_eq!(tt.vertices().len(), 12);
            assert_eq!(tt.edges().len(), 18);
            let mut sizes: Vec<usize> = tt.faces().iter().map(Vec::len).collect();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![3, 3, 3, 3, 6, 6, 6, 6], "{solid:?}");
        }
    }

    #[test]
    fn builtin_name_parsing() {
        assert_eq!("cube".parse::<BuiltinSolid>().unwrap(), BuiltinSolid::Cube);
        assert!("dodecahedron".parse::<BuiltinSolid>().is_err());
    }
}

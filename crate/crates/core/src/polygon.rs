//! Planar convex-polygon predicates used by the net overlap checks.

use crate::error::{Error, Result};
use crate::float::{FloatVec, Tolerance};

/// Shoelace signed area; positive for counterclockwise orientation.
pub fn signed_area(poly: &[FloatVec]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
    }
    s / 2.0
}

fn validate(poly: &[FloatVec]) -> Result<()> {
    if poly.len() < 3 {
        return Err(Error::invalid(format!(
            "polygon needs at least 3 vertices, got {}",
            poly.len()
        )));
    }
    for p in poly {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(Error::invalid("non-finite polygon vertex"));
        }
    }
    if signed_area(poly) <= 0.0 {
        return Err(Error::invalid(
            "degenerate or clockwise polygon (nonpositive area)",
        ));
    }
    Ok(())
}

fn projection_interval(poly: &[FloatVec], axis: (f64, f64)) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in poly {
        let v = p[0] * axis.0 + p[1] * axis.1;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Whether the open interiors of two convex polygons overlap by more than
/// `tol.eps`, by the separating-axis criterion over all unit edge normals of
/// both polygons. Polygons that merely share an edge or a vertex do not
/// overlap under this test.
pub fn convex_polygons_interior_overlap(
    p: &[FloatVec],
    q: &[FloatVec],
    tol: Tolerance,
) -> Result<bool> {
    validate(p)?;
    validate(q)?;
    for poly in [p, q] {
        let n = poly.len();
        for i in 0..n {
            let a = &poly[i];
            let b = &poly[(i + 1) % n];
            let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
            let len = (ex * ex + ey * ey).sqrt();
            if len == 0.0 {
                continue; // repeated vertex contributes no axis
            }
            let axis = (-ey / len, ex / len);
            let (plo, phi) = projection_interval(p, axis);
            let (qlo, qhi) = projection_interval(q, axis);
            let penetration = phi.min(qhi) - plo.max(qlo);
            if penetration <= tol.eps {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

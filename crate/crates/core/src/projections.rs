//! Projection and reflection operators onto the constraint sets used by the
//! two-set feasibility dynamics.
//!
//! Projections onto the nonconvex sets (sphere, ellipse, p-sphere) can be
//! multivalued; every such case returns a fixed deterministic selection and
//! reports `unique = false` so callers can tell a convention from a theorem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{FloatVec, Tolerance};

/// Residual below which the scalar optimality equations of the ellipse and
/// p-sphere solvers are considered solved.
const SOLVER_RESIDUAL: f64 = 1e-12;

/// A constraint set that supports projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SetDescriptor {
    /// Affine line through `point` along `direction`.
    Line {
        point: FloatVec,
        direction: FloatVec,
    },
    /// `{x : <normal, x> = offset}`.
    Hyperplane { normal: FloatVec, offset: f64 },
    /// `{x : <normal, x> >= offset}`.
    #[serde(rename = "halfspace")]
    HalfSpace { normal: FloatVec, offset: f64 },
    /// Sphere boundary `{x : ||x - center|| = radius}`.
    Sphere { center: FloatVec, radius: f64 },
    /// Solid ball `{x : ||x - center|| <= radius}`.
    Ball { center: FloatVec, radius: f64 },
    /// Axis-aligned planar ellipse boundary x^2/a^2 + y^2/b^2 = 1, a >= b > 0.
    Ellipse { a: f64, b: f64 },
    /// Planar unit p-sphere |x|^p + |y|^p = 1, p >= 1.
    #[serde(rename = "psphere")]
    PSphere { p: f64 },
    /// Convex hull of a finite vertex list.
    #[serde(rename = "vpolytope")]
    VPolytope { vertices: Vec<FloatVec> },
}

impl SetDescriptor {
    pub fn dim(&self) -> usize {
        match self {
            SetDescriptor::Line { point, .. } => point.dim(),
            SetDescriptor::Hyperplane { normal, .. } | SetDescriptor::HalfSpace { normal, .. } => {
                normal.dim()
            }
            SetDescriptor::Sphere { center, .. } | SetDescriptor::Ball { center, .. } => {
                center.dim()
            }
            SetDescriptor::Ellipse { .. } | SetDescriptor::PSphere { .. } => 2,
            SetDescriptor::VPolytope { vertices } => {
                vertices.first().map(FloatVec::dim).unwrap_or(0)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetDescriptor::Line { point, direction } => {
                if point.dim() != direction.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: point.dim(),
                        got: direction.dim(),
                    });
                }
                if direction.norm() == 0.0 {
                    return Err(Error::invalid("line with zero direction"));
                }
            }
            SetDescriptor::Hyperplane { normal, .. } | SetDescriptor::HalfSpace { normal, .. } => {
                if normal.norm() == 0.0 {
                    return Err(Error::invalid("hyperplane with zero normal"));
                }
            }
            SetDescriptor::Sphere { radius, .. } | SetDescriptor::Ball { radius, .. } => {
                if radius.is_nan() || *radius <= 0.0 {
                    return Err(Error::invalid(format!("radius must be positive: {radius}")));
                }
            }
            SetDescriptor::Ellipse { a, b } => {
                if a.is_nan() || b.is_nan() || *a < *b || *b <= 0.0 {
                    return Err(Error::invalid(format!(
                        "ellipse semi-axes need a >= b > 0, got a={a}, b={b}"
                    )));
                }
            }
            SetDescriptor::PSphere { p } => {
                if p.is_nan() || *p < 1.0 {
                    return Err(Error::invalid(format!("p-sphere needs p >= 1, got {p}")));
                }
            }
            SetDescriptor::VPolytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::invalid("polytope with no vertices"));
                }
                let d = vertices[0].dim();
                for v in vertices {
                    if v.dim() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            got: v.dim(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a projection: the selected nearest point and whether that
/// nearest point was unique.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub point: FloatVec,
    pub unique: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ProjectionResult {
    fn unique(point: FloatVec) -> Self {
        ProjectionResult {
            point,
            unique: true,
            note: None,
        }
    }

    fn selected(point: FloatVec, note: &str) -> Self {
        ProjectionResult {
            point,
            unique: false,
            note: Some(note.to_string()),
        }
    }
}

fn check_input(s: &SetDescriptor, x: &FloatVec) -> Result<()> {
    s.validate()?;
    if !x.is_finite() {
        return Err(Error::invalid("non-finite query point"));
    }
    if s.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: x.dim(),
        });
    }
    Ok(())
}

/// Nearest point of `s` to `x`. Multivalued cases return the deterministic
/// selection documented on each branch and set `unique = false`.
pub fn project(s: &SetDescriptor, x: &FloatVec, tol: Tolerance) -> Result<ProjectionResult> {
    check_input(s, x)?;
    match s {
        SetDescriptor::Line { point, direction } => {
            let t = x.sub(point).dot(direction) / direction.dot(direction);
            Ok(ProjectionResult::unique(point.axpy(t, direction)))
        }
        SetDescriptor::Hyperplane { normal, offset } => {
            let t = (x.dot(normal) - offset) / normal.dot(normal);
            Ok(ProjectionResult::unique(x.axpy(-t, normal)))
        }
        SetDescriptor::HalfSpace { normal, offset } => {
            let shortfall = offset - x.dot(normal);
            if shortfall <= 0.0 {
                Ok(ProjectionResult::unique(x.clone()))
            } else {
                let t = shortfall / normal.dot(normal);
                Ok(ProjectionResult::unique(x.axpy(t, normal)))
            }
        }
        SetDescriptor::Sphere { center, radius } => {
            let v = x.sub(center);
            let d = v.norm();
            if d == 0.0 {
                // Every sphere point is nearest; select center + r*e1.
                let p = center.axpy(*radius, &FloatVec::unit(center.dim(), 0));
                Ok(ProjectionResult::selected(
                    p,
                    "center is equidistant to the whole sphere; selected +e1",
                ))
            } else {
                Ok(ProjectionResult::unique(center.axpy(radius / d, &v)))
            }
        }
        SetDescriptor::Ball { center, radius } => {
            let v = x.sub(center);
            let d = v.norm();
            if d <= *radius {
                Ok(ProjectionResult::unique(x.clone()))
            } else {
                Ok(ProjectionResult::unique(center.axpy(radius / d, &v)))
            }
        }
        SetDescriptor::Ellipse { a, b } => project_ellipse(*a, *b, x),
        SetDescriptor::PSphere { p } => project_psphere(*p, x),
        SetDescriptor::VPolytope { vertices } => {
            let point = project_vpolytope(vertices, x, tol.eps)?;
            Ok(ProjectionResult::unique(point))
        }
    }
}

/// Reflection of `x` through its projection: `2 P_S(x) - x`.
pub fn reflect(s: &SetDescriptor, x: &FloatVec, tol: Tolerance) -> Result<FloatVec> {
    let p = project(s, x, tol)?;
    Ok(p.point.scale(2.0).sub(x))
}

/// Residual that vanishes exactly on the set: the distance for the convex
/// kinds, and the defining-equation value for sphere, ellipse, and p-sphere.
pub fn membership_residual(s: &SetDescriptor, x: &FloatVec) -> Result<f64> {
    check_input(s, x)?;
    Ok(match s {
        SetDescriptor::Line { point, direction } => {
            let t = x.sub(point).dot(direction) / direction.dot(direction);
            x.dist(&point.axpy(t, direction))
        }
        SetDescriptor::Hyperplane { normal, offset } => {
            (x.dot(normal) - offset).abs() / normal.norm()
        }
        SetDescriptor::HalfSpace { normal, offset } => {
            ((offset - x.dot(normal)) / normal.norm()).max(0.0)
        }
        SetDescriptor::Sphere { center, radius } => (x.dist(center) - radius).abs(),
        SetDescriptor::Ball { center, radius } => (x.dist(center) - radius).max(0.0),
        SetDescriptor::Ellipse { a, b } => {
            let (u, v) = (x[0], x[1]);
            (u * u / (a * a) + v * v / (b * b) - 1.0).abs()
        }
        SetDescriptor::PSphere { p } => (x[0].abs().powf(*p) + x[1].abs().powf(*p) - 1.0).abs(),
        SetDescriptor::VPolytope { vertices } => {
            x.dist(&project_vpolytope(vertices, x, Tolerance::default().eps)?)
        }
    })
}

fn sign_or_positive(t: f64) -> f64 {
    if t < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Nearest point on the ellipse boundary x^2/a^2 + y^2/b^2 = 1.
///
/// Off-axis points are handled by a safeguarded Newton iteration on the
/// Lagrange multiplier equation; on-axis points have closed forms, including
/// the interval of the major axis where the nearest points come in symmetric
/// pairs (the selection takes the nonnegative last coordinate).
fn project_ellipse(a: f64, b: f64, x: &FloatVec) -> Result<ProjectionResult> {
    let (u, v) = (x[0], x[1]);

    if u == 0.0 && v == 0.0 {
        return Ok(ProjectionResult::selected(
            FloatVec::new(vec![0.0, b])?,
            "center; nearest points are the minor-axis endpoints (0, +-b)",
        ));
    }

    if v == 0.0 {
        // On the major axis. Inside the evolute the nearest points form a
        // symmetric pair (x*, +-y*); outside, the vertex is the projection.
        let threshold = (a * a - b * b) / a;
        if a > b && u.abs() < threshold {
            let px = a * a * u / (a * a - b * b);
            let py = b * (1.0 - (px / a) * (px / a)).max(0.0).sqrt();
            let point = FloatVec::new(vec![px, py])?;
            return Ok(if py > 0.0 {
                ProjectionResult::selected(
                    point,
                    "two symmetric nearest points; selected nonnegative last coordinate",
                )
            } else {
                ProjectionResult::unique(point)
            });
        }
        return Ok(ProjectionResult::unique(FloatVec::new(vec![
            sign_or_positive(u) * a,
            0.0,
        ])?));
    }

    if u == 0.0 {
        // On the minor axis (v != 0) the top/bottom vertex is the unique
        // nearest point for every a >= b.
        return Ok(ProjectionResult::unique(FloatVec::new(vec![
            0.0,
            sign_or_positive(v) * b,
        ])?));
    }

    // General case: solve g(mu) = (a u / (a^2+mu))^2 + (b v / (b^2+mu))^2 - 1
    // for the unique root in (-b^2, inf), then read off the nearest point.
    let g = |mu: f64| {
        let ta = a * u / (a * a + mu);
        let tb = b * v / (b * b + mu);
        ta * ta + tb * tb - 1.0
    };
    let gp = |mu: f64| {
        let na = a * u;
        let nb = b * v;
        -2.0 * na * na / (a * a + mu).powi(3) - 2.0 * nb * nb / (b * b + mu).powi(3)
    };

    let mut lo = -b * b;
    let mut hi = (a * u.abs()).max(b * v.abs()).max(1.0);
    let mut expand = 0;
    while g(hi) >= 0.0 {
        hi = 2.0 * hi + 1.0;
        expand += 1;
        if expand > 300 || !hi.is_finite() {
            return Err(Error::numerical("ellipse projection: no bracket found"));
        }
    }

    let mut mu = (a * u.abs() - a * a).max(b * v.abs() - b * b);
    if !(mu > lo && mu < hi) {
        mu = 0.5 * (lo + hi);
    }
    let mut converged = false;
    for _ in 0..200 {
        let gv = g(mu);
        if gv.abs() < SOLVER_RESIDUAL {
            converged = true;
            break;
        }
        if gv > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        let step = mu - gv / gp(mu);
        mu = if step.is_finite() && step > lo && step < hi {
            step
        } else {
            0.5 * (lo + hi)
        };
    }
    if !converged {
        return Err(Error::numerical(format!(
            "ellipse projection did not reach residual {SOLVER_RESIDUAL} (a={a}, b={b}, x={x:?})"
        )));
    }
    let px = a * a * u / (a * a + mu);
    let py = b * b * v / (b * b + mu);
    Ok(ProjectionResult::unique(FloatVec::new(vec![px, py])?))
}

/// One half-arc of the first-quadrant p-sphere boundary, parameterized by its
/// SMALL coordinate `s in [0, 2^(-1/p)]`; the large coordinate is
/// `(1 - s^p)^(1/p)`. On this chart the curve's slope is bounded by 1 for
/// every p >= 1, so a uniform scan cannot miss a minimum, unlike the
/// trigonometric parameterization whose resolution collapses near the axes
/// for large p. `swap = false` is the arc with y <= x, `swap = true` the arc
/// with x <= y.
struct PsphereChart {
    p: f64,
    swap: bool,
    target: (f64, f64),
}

impl PsphereChart {
    fn point(&self, s: f64) -> (f64, f64) {
        let big = (1.0 - s.powf(self.p)).max(0.0).powf(1.0 / self.p);
        if self.swap {
            (s, big)
        } else {
            (big, s)
        }
    }

    fn dist2(&self, s: f64) -> f64 {
        let (x, y) = self.point(s);
        (x - self.target.0).powi(2) + (y - self.target.1).powi(2)
    }

    /// Stationarity: d/ds dist2 / 2. The large coordinate's derivative is
    /// -(s/big)^(p-1), bounded on the chart.
    fn grad(&self, s: f64) -> f64 {
        let (x, y) = self.point(s);
        let big = if self.swap { y } else { x };
        let dbig = if big > 0.0 {
            -(s / big).powf(self.p - 1.0)
        } else {
            -1.0
        };
        if self.swap {
            (x - self.target.0) + (y - self.target.1) * dbig
        } else {
            (x - self.target.0) * dbig + (y - self.target.1)
        }
    }

    /// Coarse scan, golden-section refinement, and a guarded Newton polish
    /// of the stationarity equation. Returns (s, dist2, |grad|, bracket width).
    fn minimize(&self) -> (f64, f64, f64, f64) {
        let end = 2f64.powf(-1.0 / self.p);
        let n = 512usize;
        let mut best_k = 0usize;
        let mut best_val = f64::INFINITY;
        for k in 0..=n {
            let s = end * k as f64 / n as f64;
            let d = self.dist2(s);
            if d < best_val {
                best_val = d;
                best_k = k;
            }
        }
        let mut lo = end * best_k.saturating_sub(1) as f64 / n as f64;
        let mut hi = end * (best_k + 1).min(n) as f64 / n as f64;

        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = hi - phi * (hi - lo);
        let mut d = lo + phi * (hi - lo);
        let mut fc = self.dist2(c);
        let mut fd = self.dist2(d);
        for _ in 0..120 {
            if hi - lo < 1e-15 {
                break;
            }
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - phi * (hi - lo);
                fc = self.dist2(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + phi * (hi - lo);
                fd = self.dist2(d);
            }
        }
        let mut s = 0.5 * (lo + hi);

        // Near the minimum the distance is flat at rounding level, so the
        // polished parameter is kept whenever it does not measurably worsen
        // the distance; it sharpens the stationarity residual the golden
        // section cannot see.
        let mut polished = s;
        for _ in 0..12 {
            let g = self.grad(polished);
            if !g.is_finite() || g.abs() < SOLVER_RESIDUAL {
                break;
            }
            let delta = 1e-7 * (1.0 + end);
            let gp = (self.grad(polished + delta) - self.grad(polished - delta)) / (2.0 * delta);
            if !gp.is_finite() || gp == 0.0 {
                break;
            }
            let next = polished - g / gp;
            if !next.is_finite() || !(0.0..=end).contains(&next) {
                break;
            }
            polished = next;
        }
        if self.dist2(polished) <= self.dist2(s) + SOLVER_RESIDUAL * (1.0 + self.dist2(s)) {
            s = polished;
        }

        // Endpoints are on the sample grid, but snap explicitly so boundary
        // minima are exact.
        let mut d2 = self.dist2(s);
        for endpoint in [0.0, end] {
            if self.dist2(endpoint) <= d2 {
                s = endpoint;
                d2 = self.dist2(endpoint);
            }
        }
        (s, d2, self.grad(s).abs(), hi - lo)
    }
}

/// Nearest point on |x|^p + |y|^p = 1.
///
/// Reduced to the closed first quadrant by symmetry, then minimized over the
/// two small-coordinate charts of the quadrant arc.
fn project_psphere(p: f64, x: &FloatVec) -> Result<ProjectionResult> {
    let (u, v) = (x[0], x[1]);

    if u == 0.0 && v == 0.0 {
        // All four axis points (p >= 2) or all four diagonal points (p < 2)
        // are nearest; select the first-quadrant representative, with +e1
        // preferred when it is a true nearest point.
        return if p >= 2.0 {
            Ok(ProjectionResult::selected(
                FloatVec::new(vec![1.0, 0.0])?,
                "origin; selected +e1 among the equidistant axis points",
            ))
        } else {
            let c = 2f64.powf(-1.0 / p);
            Ok(ProjectionResult::selected(
                FloatVec::new(vec![c, c])?,
                "origin; selected the first-quadrant diagonal nearest point",
            ))
        };
    }

    let target = (u.abs(), v.abs());
    let lower = PsphereChart {
        p,
        swap: false,
        target,
    };
    let upper = PsphereChart {
        p,
        swap: true,
        target,
    };
    let (s_lo, d2_lo, g_lo, w_lo) = lower.minimize();
    let (s_hi, d2_hi, g_hi, w_hi) = upper.minimize();
    let (chart, s, d2, grad, width) = if d2_lo <= d2_hi {
        (&lower, s_lo, d2_lo, g_lo, w_lo)
    } else {
        (&upper, s_hi, d2_hi, g_hi, w_hi)
    };

    // A boundary minimum has no stationarity obligation. An interior minimum
    // is certified either by the optimality equation's residual or by the
    // bracket having collapsed around it (the gradient is ill-conditioned
    // exactly where the curve hugs a vertex).
    let end = 2f64.powf(-1.0 / p);
    let interior = s > 0.0 && s < end;
    let certified = width < 1e-12 || (grad.is_finite() && grad.abs() <= 1e-9 * (1.0 + d2));
    if interior && !certified {
        return Err(Error::numerical(format!(
            "p-sphere projection stalled (p={p}, x={x:?})"
        )));
    }

    let (qx, qy) = chart.point(s);
    let px = sign_or_positive(u) * qx;
    let py = sign_or_positive(v) * qy;
    let point = FloatVec::new(vec![px, py])?;

    // Inputs on an axis whose nearest point is off that axis have a mirror
    // candidate at equal distance.
    let mirrored = (u == 0.0 && qx > 1e-12) || (v == 0.0 && qy > 1e-12);
    Ok(if mirrored {
        ProjectionResult::selected(
            point,
            "axis point with a symmetric pair of nearest points; selected nonnegative branch",
        )
    } else {
        ProjectionResult::unique(point)
    })
}

/// Projection onto the convex hull of `verts` by enumerating candidate faces:
/// every affinely independent subset of at most d+1 vertices, projecting onto
/// its affine hull, and keeping feasible candidates. Intended for small vertex
/// counts; ties resolve toward the earliest subset in size-then-lex order.
fn project_vpolytope(verts: &[FloatVec], x: &FloatVec, eps: f64) -> Result<FloatVec> {
    let m = verts.len();
    let d = x.dim();
    if m == 1 {
        return Ok(verts[0].clone());
    }

    let mut best: Option<(f64, FloatVec)> = None;
    let mut consider = |dist2: f64, point: FloatVec| {
        if best.as_ref().is_none_or(|(bd, _)| dist2 < *bd) {
            best = Some((dist2, point));
        }
    };

    for v in verts {
        let diff = x.sub(v);
        consider(diff.dot(&diff), v.clone());
    }

    let max_size = (d + 1).min(m);
    for size in 2..=max_size {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if let Some((dist2, point)) = face_candidate(verts, &combo, x, eps) {
                consider(dist2, point);
            }
            // Next index combination in lexicographic order.
            let mut advanced = false;
            for i in (0..size).rev() {
                if combo[i] < i + m - size {
                    combo[i] += 1;
                    for j in i + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }

    Ok(best.expect("vertex candidates always exist").1)
}

/// Orthogonal projection of `x` onto the affine hull of the chosen vertices,
/// returned only when it is a convex combination of them (within `eps`).
#[allow(clippy::needless_range_loop)]
fn face_candidate(
    verts: &[FloatVec],
    combo: &[usize],
    x: &FloatVec,
    eps: f64,
) -> Option<(f64, FloatVec)> {
    let k = combo.len();
    let base = &verts[combo[0]];
    let diffs: Vec<FloatVec> = combo[1..].iter().map(|&i| verts[i].sub(base)).collect();
    let target = x.sub(base);

    // Solve the (k-1)x(k-1) Gram system by Gaussian elimination with partial
    // pivoting; skip affinely dependent subsets.
    let n = k - 1;
    let mut mat = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            mat[i][j] = diffs[i].dot(&diffs[j]);
            scale = scale.max(mat[i][j].abs());
        }
        rhs[i] = diffs[i].dot(&target);
    }
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let (piv, pv) = (col..n)
            .map(|r| (r, mat[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if pv <= 1e-12 * scale {
            return None;
        }
        mat.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = mat[r][col] / mat[col][col];
                for c in col..n {
                    mat[r][c] -= f * mat[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let t: Vec<f64> = (0..n).map(|i| rhs[i] / mat[i][i]).collect();

    let mut lambda0 = 1.0;
    for &ti in &t {
        if ti < -eps {
            return None;
        }
        lambda0 -= ti;
    }
    if lambda0 < -eps {
        return None;
    }

    let mut point = base.clone();
    for (ti, diff) in t.iter().zip(&diffs) {
        point = point.axpy(*ti, diff);
    }
    let delta = x.sub(&point);
    Some((delta.dot(&delta), point))
}

//! Minimal enclosing Euclidean ball: the unique minimizer of
//! `max_i ||a_i - x||` over finitely many points.
//!
//! `solve_meb` is a randomized move-to-front recursion over support sets of
//! at most d+1 points; `brute_force_meb` is the independent subset-enumeration
//! oracle used to check it.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::FloatVec;
use crate::hull::is_in_convex_hull;
use crate::projections::{project, SetDescriptor};
use crate::rat::{Rat, RatVec};
use crate::Tolerance;

/// Finite point set in a fixed dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSet {
    pub dimension: usize,
    pub points: Vec<FloatVec>,
}

impl PointSet {
    pub fn new(points: Vec<FloatVec>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("point set must be nonempty"));
        }
        let dimension = points[0].dim();
        let s = PointSet { dimension, points };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::invalid("point set must be nonempty"));
        }
        if self.dimension == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        for p in &self.points {
            if p.dim() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    got: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::invalid("non-finite point"));
            }
        }
        Ok(())
    }
}

/// Euclidean ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ball {
    pub center: FloatVec,
    pub radius: f64,
}

/// `max_i ||a_i - x||`.
pub fn minimax_objective(s: &PointSet, x: &FloatVec) -> Result<f64> {
    s.validate()?;
    if x.dim() != s.dimension {
        return Err(Error::DimensionMismatch {
            expected: s.dimension,
            got: x.dim(),
        });
    }
    Ok(s.points.iter().map(|p| p.dist(x)).fold(0.0, f64::max))
}

const DEFAULT_SEED: u64 = 0;

/// Minimal enclosing ball via the randomized support-set recursion with a
/// fixed default shuffle seed.
pub fn solve_meb(s: &PointSet) -> Result<Ball> {
    solve_meb_seeded(s, DEFAULT_SEED)
}

/// As `solve_meb`, with the shuffle seed exposed.
pub fn solve_meb_seeded(s: &PointSet, seed: u64) -> Result<Ball> {
    s.validate()?;
    let mut pts = s.points.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.shuffle(&mut rng);
    let d = s.dimension;
    let mut support: Vec<FloatVec> = Vec::with_capacity(d + 1);
    let ball = welzl(&pts, pts.len(), &mut support, d)
        .ok_or_else(|| Error::numerical("support-set recursion produced no ball"))?;
    Ok(Ball {
        center: ball.center,
        radius: ball.r2.max(0.0).sqrt(),
    })
}

struct BallData {
    center: FloatVec,
    r2: f64,
}

impl BallData {
    fn contains(&self, p: &FloatVec) -> bool {
        let d2 = {
            let diff = p.sub(&self.center);
            diff.dot(&diff)
        };
        d2 <= self.r2 + 1e-12 * (1.0 + self.r2)
    }
}

fn welzl(pts: &[FloatVec], n: usize, support: &mut Vec<FloatVec>, d: usize) -> Option<BallData> {
    if n == 0 || support.len() == d + 1 {
        return ball_with_support(support, d);
    }
    let p = &pts[n - 1];
    let candidate = welzl(pts, n - 1, support, d);
    if let Some(b) = candidate {
        if b.contains(p) {
            return Some(b);
        }
    }
    support.push(p.clone());
    let b = welzl(pts, n - 1, support, d);
    support.pop();
    b
}

/// Smallest ball with the support points on its boundary: the equidistant
/// point of the support set within its affine hull. Near-dependent support
/// directions are dropped, which can only shrink the boundary set.
#[allow(clippy::needless_range_loop)]
fn ball_with_support(support: &[FloatVec], d: usize) -> Option<BallData> {
    match support.len() {
        0 => None,
        1 => Some(BallData {
            center: support[0].clone(),
            r2: 0.0,
        }),
        _ => {
            let base = &support[0];
            let diffs: Vec<FloatVec> = support[1..].iter().map(|p| p.sub(base)).collect();
            let k = diffs.len();
            // Solve 2 G t = ||diff_i||^2 over the affine chart at `base`.
            let mut m = vec![vec![0.0f64; k]; k];
            let mut rhs = vec![0.0f64; k];
            let mut scale: f64 = 0.0;
            for i in 0..k {
                for j in 0..k {
                    m[i][j] = 2.0 * diffs[i].dot(&diffs[j]);
                    scale = scale.max(m[i][j].abs());
                }
                rhs[i] = diffs[i].dot(&diffs[i]);
            }
            if scale == 0.0 {
                // All support points coincide.
                return Some(BallData {
                    center: base.clone(),
                    r2: 0.0,
                });
            }
            let mut active = vec![true; k];
            for col in 0..k {
                let piv = (col..k)
                    .filter(|&r| active[r])
                    .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()));
                let Some(piv) = piv else { break };
                if m[piv][col].abs() <= 1e-12 * scale {
                    active[col] = false;
                    continue;
                }
                m.swap(col, piv);
                rhs.swap(col, piv);
                active.swap(col, piv);
                for r in 0..k {
                    if r != col && active[r] {
                        let f = m[r][col] / m[col][col];
                        for c in 0..k {
                            m[r][c] -= f * m[col][c];
                        }
                        rhs[r] -= f * rhs[col];
                    }
                }
            }
            let mut center = base.clone();
            for i in 0..k {
                if active[i] && m[i][i].abs() > 0.0 {
                    center = center.axpy(rhs[i] / m[i][i], &diffs[i]);
                }
            }
            let r2 = support
                .iter()
                .map(|p| {
                    let diff = p.sub(&center);
                    diff.dot(&diff)
                })
                .fold(0.0, f64::max);
            if !center.is_finite() || !r2.is_finite() {
                return None;
            }
            Some(BallData { center, r2 })
        }
    }
    .inspect(|_| debug_assert!(support.len() <= d + 1))
}

/// Independent oracle: enumerate every affinely independent subset of at
/// most d+1 points, circumscribe it by a standalone elimination, keep the
/// balls that contain all points, and return the smallest.
pub fn brute_force_meb(s: &PointSet) -> Result<Ball> {
    s.validate()?;
    let m = s.points.len();
    if m > 12 {
        return Err(Error::invalid(format!(
            "brute-force oracle is exponential; got {m} > 12 points"
        )));
    }
    let d = s.dimension;
    let mut best: Option<Ball> = None;

    let mut consider = |center: FloatVec, radius: f64| {
        let contains_all = s.points.iter().all(|p| p.dist(&center) <= radius + 1e-9);
        if contains_all && best.as_ref().is_none_or(|b| radius < b.radius) {
            best = Some(Ball { center, radius });
        }
    };

    for size in 1..=(d + 1).min(m) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            if let Some((center, radius)) = circumscribe(&s.points, &combo) {
                consider(center, radius);
            }
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
    best.ok_or_else(|| Error::numerical("no circumscribed ball contained the whole set"))
}

/// Circumscribed ball of an affinely independent subset: center equidistant
/// to all subset points within their affine hull. Dependent subsets yield
/// `None` (a smaller subset produces their minimal ball instead).
#[allow(clippy::needless_range_loop)]
fn circumscribe(points: &[FloatVec], combo: &[usize]) -> Option<(FloatVec, f64)> {
    let k = combo.len();
    let base = &points[combo[0]];
    if k == 1 {
        return Some((base.clone(), 0.0));
    }
    let diffs: Vec<FloatVec> = combo[1..].iter().map(|&i| points[i].sub(base)).collect();
    let n = k - 1;
    // Equidistance to base and each subset point: 2 <diff_i, c - base> = ||diff_i||^2,
    // with c - base restricted to span(diffs): c = base + sum t_j diff_j.
    let mut m = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            m[i][j] = 2.0 * diffs[i].dot(&diffs[j]);
            scale = scale.max(m[i][j].abs());
        }
        rhs[i] = diffs[i].dot(&diffs[i]);
    }
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let (piv, pv) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if pv <= 1e-10 * scale {
            return None; // affinely dependent
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= f * m[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    let mut center = base.clone();
    for i in 0..n {
        center = center.axpy(rhs[i] / m[i][i], &diffs[i]);
    }
    if !center.is_finite() {
        return None;
    }
    let radius = combo
        .iter()
        .map(|&i| points[i].dist(&center))
        .fold(0.0, f64::max);
    Some((center, radius))
}

/// Optimality certificate for a candidate minimal ball: the boundary contact
/// points must contain the center in their convex hull. Decided exactly on
/// the dyadic rationals of the doubles, with a numeric distance-to-hull
/// fallback of 1e-6 for centers that sit on the hull boundary up to rounding.
pub fn kkt_certificate(s: &PointSet, ball: &Ball) -> Result<bool> {
    s.validate()?;
    let contacts: Vec<&FloatVec> = s
        .points
        .iter()
        .filter(|p| (p.dist(&ball.center) - ball.radius).abs() <= 1e-7)
        .collect();
    if contacts.is_empty() {
        return Ok(false);
    }

    let to_rat = |v: &FloatVec| -> Result<RatVec> {
        RatVec::new(
            v.coords()
                .iter()
                .map(|&c| Rat::from_f64(c))
                .collect::<Result<_>>()?,
        )
    };
    let center_rat = to_rat(&ball.center)?;
    let gens: Vec<RatVec> = contacts.iter().map(|p| to_rat(p)).collect::<Result<_>>()?;
    if is_in_convex_hull(&center_rat, &gens)? {
        return Ok(true);
    }

    let hull = SetDescriptor::VPolytope {
        vertices: contacts.iter().map(|p| (*p).clone()).collect(),
    };
    let proj = project(&hull, &ball.center, Tolerance::default())?;
    Ok(proj.point.dist(&ball.center) <= 1e-6)
}

//! Exact convex-hull and extreme-point primitives over rational vectors.

use crate::error::{Error, Result};
use crate::lp;
use crate::rat::{check_same_dim, Rat, RatVec};

/// Sign of the cross product (a - o) x (b - o), exact.
fn cross(o: &RatVec, a: &RatVec, b: &RatVec) -> Rat {
    let ax = &a.coords()[0] - &o.coords()[0];
    let ay = &a.coords()[1] - &o.coords()[1];
    let bx = &b.coords()[0] - &o.coords()[0];
    let by = &b.coords()[1] - &o.coords()[1];
    &(&ax * &by) - &(&ay * &bx)
}

fn sorted_dedup(points: &[RatVec]) -> Vec<RatVec> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Convex hull of planar rational points by monotone chain.
///
/// Returns the extreme points in counterclockwise order starting from the
/// lexicographically smallest one; collinear interior points are dropped.
pub fn convex_hull_2d(points: &[RatVec]) -> Result<Vec<RatVec>> {
    if points.is_empty() {
        return Err(Error::invalid("convex hull of an empty point set"));
    }
    for p in points {
        check_same_dim(2, p.dim())?;
    }
    let pts = sorted_dedup(points);
    if pts.len() <= 2 {
        return Ok(pts);
    }

    // Strict turns only, so collinear points are removed from the chain.
    let mut lower: Vec<RatVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RatVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }

    lower.pop();
    upper.pop();
    if lower.is_empty() {
        // All points collinear: the chain degenerates to the two endpoints.
        return Ok(vec![pts[0].clone(), pts[pts.len() - 1].clone()]);
    }
    lower.extend(upper);
    Ok(lower)
}

/// Exact membership of `p` in the convex hull of `generators`, decided by
/// rational linear feasibility: p = sum l_i g_i, sum l_i = 1, l >= 0.
pub fn is_in_convex_hull(p: &RatVec, generators: &[RatVec]) -> Result<bool> {
    if generators.is_empty() {
        return Err(Error::invalid("membership test with no generators"));
    }
    let n = p.dim();
    for g in generators {
        check_same_dim(n, g.dim())?;
    }
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    for coord in 0..n {
        a.push(
            generators
                .iter()
                .map(|g| g.coords()[coord].clone())
                .collect(),
        );
    }
    a.push(vec![Rat::one(); generators.len()]);
    let mut b: Vec<Rat> = p.coords().to_vec();
    b.push(Rat::one());
    Ok(lp::feasible_eq_nonneg(&a, &b))
}

/// Extreme points of a finite set: the points not contained in the hull of
/// the remaining ones. Deduplicated and sorted lexicographically.
pub fn extreme_points(points: &[RatVec]) -> Result<Vec<RatVec>> {
    if points.is_empty() {
        return Err(Error::invalid("extreme points of an empty set"));
    }
    let n = points[0].dim();
    for p in points {
        check_same_dim(n, p.dim())?;
    }
    let pts = sorted_dedup(points);
    if pts.len() == 1 {
        return Ok(pts);
    }
    let mut out = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<RatVec> = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !is_in_convex_hull(p, &others)? {
            out.push(p.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pt(x: i64, y: i64) -> RatVec {
        RatVec::from_ints(&[x, y])
    }

    fn rpt(coords: &[(i64, i64)]) -> RatVec {
        RatVec(
            coords
                .iter()
                .map(|&(n, d)| Rat::new(n, d).unwrap())
                .collect(),
        )
    }

    #[test]
    fn single_point_hull() {
        let h = convex_hull_2d(&[pt(0, 0)]).unwrap();
        assert_eq!(h, vec![pt(0, 0)]);
    }

    #[test]
    fn square_with_interior_point() {
        let pts = vec![
            pt(0, 0),
            pt(1, 0),
            pt(0, 1),
            pt(1, 1),
            rpt(&[(1, 2), (1, 2)]),
        ];
        let h = convex_hull_2d(&pts).unwrap();
        assert_eq!(h, vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
    }

    #[test]
    fn collinear_input_keeps_endpoints() {
        let pts = vec![pt(0, 0), pt(1, 1), pt(2, 2), pt(3, 3)];
        let h = convex_hull_2d(&pts).unwrap();
        assert_eq!(h, vec![pt(0, 0), pt(3, 3)]);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let bad = RatVec::from_ints(&[1, 2, 3]);
        assert!(convex_hull_2d(&[bad]).is_err());
    }

    #[test]
    fn membership_square() {
        let square = vec![pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)];
        assert!(is_in_convex_hull(&rpt(&[(1, 2), (1, 2)]), &square).unwrap());
        assert!(!is_in_convex_hull(&pt(2, 0), &square).unwrap());
        assert!(is_in_convex_hull(&pt(1, 1), &square).unwrap());
        assert!(is_in_convex_hull(&rpt(&[(1, 1), (1, 2)]), &square).unwrap());
        assert!(is_in_convex_hull(&pt(0, 0), &[pt(0, 0)]).unwrap());
        assert!(is_in_convex_hull(&pt(0, 0), &[]).is_err());
    }

    #[test]
    fn extreme_points_square_and_duplicates() {
        let pts = vec![
            pt(0, 0),
            pt(1, 0),
            pt(0, 1),
            pt(1, 1),
            rpt(&[(1, 2), (1, 2)]),
        ];
        let e = extreme_points(&pts).unwrap();
        assert_eq!(e, vec![pt(0, 0), pt(0, 1), pt(1, 0), pt(1, 1)]);

        let rep = vec![pt(3, 4); 5];
        assert_eq!(extreme_points(&rep).unwrap(), vec![pt(3, 4)]);
    }

    fn random_rat(rng: &mut StdRng, span: i64, den: i64) -> Rat {
        Rat::new(rng.gen_range(-span..=span), rng.gen_range(1..=den)).unwrap()
    }

    /// Exact solver for a small square rational system; test-local oracle
    /// machinery independent of the simplex path.
    #[allow(clippy::needless_range_loop)]
    fn solve_exact(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
        let n = rhs.len();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            rhs.swap(col, piv);
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[col][col];
                    for c in col..n {
                        let d = &f * &m[col][c];
                        m[r][c] = &m[r][c] - &d;
                    }
                    let d = &f * &rhs[col];
                    rhs[r] = &rhs[r] - &d;
                }
            }
        }
        Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
    }

    /// Brute-force hull membership in dimension 3: Caratheodory over all
    /// subsets of size <= 4 via exact barycentric solves.
    fn barycentric_oracle_3d(p: &RatVec, gens: &[RatVec]) -> bool {
        let m = gens.len();
        let mut idx_sets: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            idx_sets.push(vec![i]);
            for j in i + 1..m {
                idx_sets.push(vec![i, j]);
                for k in j + 1..m {
                    idx_sets.push(vec![i, j, k]);
                    for l in k + 1..m {
                        idx_sets.push(vec![i, j, k, l]);
                    }
                }
            }
        }
        'subset: for set in idx_sets {
            // Solve sum l_i v_i = p, sum l_i = 1 on the subset. The system is
            // (dim+1) x |set|; square it by dropping rows only when |set| = 4.
            let k = set.len();
            if k == 1 {
                if gens[set[0]] == *p {
                    return true;
                }
                continue;
            }
            // Parameterize l_0 = 1 - sum_{i>0} t_i and solve the k-1 square
            // Gram system for t.
            let base = &gens[set[0]];
            let diffs: Vec<RatVec> = set[1..].iter().map(|&i| gens[i].sub(base)).collect();
            let target = p.sub(base);
            let mut gram = vec![vec![Rat::zero(); k - 1]; k - 1];
            let mut rhs = vec![Rat::zero(); k - 1];
            for i in 0..k - 1 {
                for j in 0..k - 1 {
                    gram[i][j] = diffs[i].dot(&diffs[j]);
                }
                rhs[i] = diffs[i].dot(&target);
            }
            let Some(t) = solve_exact(gram, rhs) else {
                continue;
            };
            // Check the solve really hit the target (it may be a least-squares
            // artifact when p is off the affine hull).
            let mut recon = base.clone();
            for (ti, d) in t.iter().zip(&diffs) {
                recon = recon.add(&d.scale(ti));
            }
            if recon != *p {
                continue;
            }
            let mut l0 = Rat::one();
            for ti in &t {
                if ti.is_negative() {
                    continue 'subset;
                }
                l0 = l0 - ti.clone();
            }
            if !l0.is_negative() {
                return true;
            }
        }
        false
    }

    #[test]
    fn membership_matches_brute_force_in_3d() {
        let mut rng = StdRng::seed_from_u64(7);
        for trial in 0..60 {
            let gens: Vec<RatVec> = (0..6)
                .map(|_| {
                    RatVec(vec![
                        random_rat(&mut rng, 3, 3),
                        random_rat(&mut rng, 3, 3),
                        random_rat(&mut rng, 3, 3),
                    ])
                })
                .collect();
            let p = RatVec(vec![
                random_rat(&mut rng, 3, 3),
                random_rat(&mut rng, 3, 3),
                random_rat(&mut rng, 3, 3),
            ]);
            let got = is_in_convex_hull(&p, &gens).unwrap();
            let want = barycentric_oracle_3d(&p, &gens);
            assert_eq!(got, want, "trial {trial}: p={p:?} gens={gens:?}");

            // Random separating directions can only certify "outside".
            for _ in 0..50 {
                let g = RatVec(vec![
                    random_rat(&mut rng, 5, 1),
                    random_rat(&mut rng, 5, 1),
                    random_rat(&mut rng, 5, 1),
                ]);
                let pg = p.dot(&g);
                let max = gens.iter().map(|v| v.dot(&g)).max().unwrap();
                if pg > max {
                    assert!(!got, "separated point reported inside");
                }
            }
        }
    }

    #[test]
    fn hull_matches_extremality_oracle_on_random_points() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let pts: Vec<RatVec> = (0..20)
                .map(|_| RatVec(vec![random_rat(&mut rng, 8, 4), random_rat(&mut rng, 8, 4)]))
                .collect();
            let hull = convex_hull_2d(&pts).unwrap();

            // Oracle: a point is extreme iff it is not in the hull of the others.
            let dedup: Vec<RatVec> = {
                let mut v = pts.clone();
                v.sort();
                v.dedup();
                v
            };
            let mut oracle: Vec<RatVec> = Vec::new();
            for (i, p) in dedup.iter().enumerate() {
                let others: Vec<RatVec> = dedup
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, q)| q.clone())
                    .collect();
                if !is_in_convex_hull(p, &others).unwrap() {
                    oracle.push(p.clone());
                }
            }

            let mut hull_sorted = hull.clone();
            hull_sorted.sort();
            assert_eq!(hull_sorted, oracle);

            // Counterclockwise, starting at the lexicographic minimum.
            assert_eq!(hull[0], *hull.iter().min().unwrap());
            if hull.len() >= 3 {
                for i in 0..hull.len() {
                    let a = &hull[i];
                    let b = &hull[(i + 1) % hull.len()];
                    let c = &hull[(i + 2) % hull.len()];
                    assert!(cross(a, b, c).is_positive(), "non-strict turn in hull");
                }
            }

            // Every input point lies in the hull of the output.
            for p in &pts {
                assert!(is_in_convex_hull(p, &hull).unwrap());
            }
        }
    }

    #[test]
    fn extreme_points_agree_with_hull_on_planar_input() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..8 {
            let pts: Vec<RatVec> = (0..12)
                .map(|_| RatVec(vec![random_rat(&mut rng, 6, 3), random_rat(&mut rng, 6, 3)]))
                .collect();
            let mut from_hull = convex_hull_2d(&pts).unwrap();
            from_hull.sort();
            let ext = extreme_points(&pts).unwrap();
            assert_eq!(ext, from_hull);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn hull_invariant_under_permutation_and_duplication(
            seed in 0u64..1000,
            rot in 0usize..12,
        ) {
            let mut rng = StdRng::seed_from_u64(seed);
            let pts: Vec<RatVec> = (0..12)
                .map(|_| RatVec(vec![random_rat(&mut rng, 5, 2), random_rat(&mut rng, 5, 2)]))
                .collect();
            let h1 = convex_hull_2d(&pts).unwrap();

            let mut permuted = pts.clone();
            permuted.rotate_left(rot % pts.len());
            permuted.extend(pts.iter().take(4).cloned()); // duplicates
            let h2 = convex_hull_2d(&permuted).unwrap();
            prop_assert_eq!(h1, h2);
        }
    }
}

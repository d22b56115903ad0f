//! Support-face transform on finite families of rational polytopes, with
//! exact cycle detection along the orbit.
//!
//! For a family `Omega` and a direction `g`, `C(g)` is the convex hull of the
//! union of the supporting vertex sets `Argmax_{x in P} <x, g>` over all
//! members `P`. Collecting `C(g)` over every direction yields the transformed
//! family `F(Omega)`. In the plane the direction sphere splits into finitely
//! many arcs on which all argmax sets are constant, so evaluating `C` on an
//! exact critical-direction list (all pair-difference normals plus one
//! representative per open arc) realizes every value `C` takes.
//!
//! Everything here is exact: equality of polytopes and families is decided
//! with zero tolerance, which is what makes orbit repeats detectable at all.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hull::extreme_points;
use crate::rat::{Rat, RatVec};

/// Convex polytope stored canonically: the lexicographically sorted list of
/// its extreme points. Equality and ordering are exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPolytope {
    vertices: Vec<RatVec>,
    dim: usize,
}

impl RationalPolytope {
    /// Canonicalize an arbitrary generating set: deduplicate, keep extreme
    /// points only, sort lexicographically. Dimensions 1 and 2 use closed
    /// forms (endpoints, exact hull) that compute the same vertex set as the
    /// general extreme-point filter, which transform orbits hammer hard.
    pub fn new(points: Vec<RatVec>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("polytope needs at least one point"));
        }
        let dim = points[0].dim();
        let vertices = match dim {
            1 => {
                for p in &points {
                    if p.dim() != 1 {
                        return Err(Error::DimensionMismatch {
                            expected: 1,
                            got: p.dim(),
                        });
                    }
                }
                let lo = points.iter().min().expect("nonempty").clone();
                let hi = points.iter().max().expect("nonempty").clone();
                if lo == hi {
                    vec![lo]
                } else {
                    vec![lo, hi]
                }
            }
            2 => {
                let mut hull = crate::hull::convex_hull_2d(&points)?;
                hull.sort();
                hull
            }
            _ => extreme_points(&points)?,
        };
        Ok(RationalPolytope { vertices, dim })
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn translate(&self, t: &RatVec) -> RationalPolytope {
        RationalPolytope {
            vertices: self.vertices.iter().map(|v| v.add(t)).collect(),
            dim: self.dim,
        }
    }
}

impl fmt::Debug for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

impl Serialize for RationalPolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let points = Vec::<RatVec>::deserialize(d)?;
        RationalPolytope::new(points).map_err(D::Error::custom)
    }
}

/// Finite family of polytopes in a common dimension, canonically sorted and
/// deduplicated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    members: Vec<RationalPolytope>,
    dim: usize,
}

impl Family {
    pub fn new(members: Vec<RationalPolytope>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("family needs at least one member"));
        }
        let dim = members[0].dim();
        for m in &members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
        }
        let mut members = members;
        members.sort();
        members.dedup();
        Ok(Family { members, dim })
    }

    pub fn members(&self) -> &[RationalPolytope] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Union of all member vertex sets.
    pub fn vertex_set(&self) -> BTreeSet<RatVec> {
        self.members
            .iter()
            .flat_map(|m| m.vertices().iter().cloned())
            .collect()
    }

    /// Canonical textual form; equal families have equal serials and, because
    /// the members are canonical, unequal families have unequal serials.
    pub fn serial(&self) -> String {
        serde_json::to_string(self).expect("family serialization cannot fail")
    }

    pub fn translate(&self, t: &RatVec) -> Family {
        Family::new(self.members.iter().map(|m| m.translate(t)).collect())
            .expect("translation preserves validity")
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family{:?}", self.members)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    dimension: usize,
    polytopes: Vec<RationalPolytope>,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyWire {
            dimension: self.dim,
            polytopes: self.members.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = FamilyWire::deserialize(d)?;
        let fam = Family::new(wire.polytopes).map_err(D::Error::custom)?;
        if fam.dim() != wire.dimension {
            return Err(D::Error::custom(format!(
                "family dimension field {} does not match vertex dimension {}",
                wire.dimension,
                fam.dim()
            )));
        }
        Ok(fam)
    }
}

/// Direction of support evaluation, stored in primitive integer form
/// (coprime integer coordinates); a direction is a ray, so positive scalings
/// are identified. `g` and `-g` are distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(RatVec);

impl Direction {
    pub fn new(v: RatVec) -> Result<Self> {
        Ok(Direction(v.primitive()?))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Direction::new(RatVec::from_ints(coords))
    }

    pub fn vector(&self) -> &RatVec {
        &self.0
    }

    pub fn negate(&self) -> Direction {
        Direction(RatVec(self.0.coords().iter().map(|c| -c).collect()))
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dir{:?}", self.0)
    }
}

/// All vertices of `p` attaining the exact maximum of `<v, g>`; these span
/// the supporting face for `g`.
pub fn support_vertices(p: &RationalPolytope, g: &Direction) -> Result<Vec<RatVec>> {
    if p.dim() != g.vector().dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: g.vector().dim(),
        });
    }
    if let Some(vals) = support_values_i128(p, g) {
        let max = *vals.iter().max().expect("nonempty");
        return Ok(p
            .vertices()
            .iter()
            .zip(&vals)
            .filter(|(_, v)| **v == max)
            .map(|(p, _)| p.clone())
            .collect());
    }
    let vals: Vec<Rat> = p.vertices().iter().map(|v| v.dot(g.vector())).collect();
    let max = vals.iter().max().expect("nonempty").clone();
    Ok(p.vertices()
        .iter()
        .zip(&vals)
        .filter(|(_, v)| **v == max)
        .map(|(p, _)| p.clone())
        .collect())
}

/// Fast path: exact i128 dot products when every coordinate is a small
/// integer, which is the common case along orbits of integer families.
fn support_values_i128(p: &RationalPolytope, g: &Direction) -> Option<Vec<i128>> {
    const BOUND: i128 = 1 << 40;
    let to_small = |r: &Rat| -> Option<i128> {
        if !r.is_integer() {
            return None;
        }
        let v = i128::try_from(r.numer().clone()).ok()?;
        (v.abs() < BOUND).then_some(v)
    };
    let gv: Option<Vec<i128>> = g.vector().coords().iter().map(to_small).collect();
    let gv = gv?;
    let mut out = Vec::with_capacity(p.vertices().len());
    for v in p.vertices() {
        let mut acc: i128 = 0;
        for (c, gc) in v.coords().iter().zip(&gv) {
            acc += to_small(c)? * gc;
        }
        out.push(acc);
    }
    Some(out)
}

/// The transformed member for one direction: convex hull of the union of all
/// supporting vertex sets.
pub fn build_c(family: &Family, g: &Direction) -> Result<RationalPolytope> {
    let mut points = Vec::new();
    for m in family.members() {
        points.extend(support_vertices(m, g)?);
    }
    RationalPolytope::new(points)
}

fn rat_neg(v: &RatVec) -> RatVec {
    RatVec(v.coords().iter().map(|c| -c).collect())
}

/// Exact counterclockwise angular comparison of nonzero planar vectors,
/// starting from the positive x-axis.
fn angular_cmp(a: &RatVec, b: &RatVec) -> Ordering {
    let half = |v: &RatVec| -> u8 {
        let (x, y) = (&v.coords()[0], &v.coords()[1]);
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = &(&a.coords()[0] * &b.coords()[1]) - &(&a.coords()[1] * &b.coords()[0]);
    if cross.is_positive() {
        Ordering::Less
    } else if cross.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Exhaustive direction list for the planar (and line) cases: every primitive
/// direction orthogonal to a vertex-pair difference within some member, both
/// orientations, sorted by angle, interleaved with one representative inside
/// each open arc. Evaluating `C` on this list realizes every value it takes
/// on the direction sphere.
pub fn critical_directions(family: &Family) -> Result<Vec<Direction>> {
    match family.dim() {
        1 => Ok(vec![
            Direction::from_ints(&[1])?,
            Direction::from_ints(&[-1])?,
        ]),
        2 => {
            let mut set: BTreeSet<RatVec> = BTreeSet::new();
            for m in family.members() {
                let vs = m.vertices();
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        let d = vs[i].sub(&vs[j]);
                        let normal = RatVec(vec![-&d.coords()[1], d.coords()[0].clone()]);
                        let n = normal.primitive()?;
                        set.insert(rat_neg(&n));
                        set.insert(n);
                    }
                }
            }
            if set.is_empty() {
                // Every member is a single point, so C is constant.
                return Ok(vec![Direction::from_ints(&[1, 0])?]);
            }
            let mut rays: Vec<RatVec> = set.into_iter().collect();
            rays.sort_by(angular_cmp);

            let mut out: Vec<RatVec> = Vec::with_capacity(rays.len() * 2);
            for i in 0..rays.len() {
                let cur = &rays[i];
                let next = &rays[(i + 1) % rays.len()];
                out.push(cur.clone());
                let mid = if rat_neg(cur).primitive()? == *next {
                    // Opposite rays: the open arc spans a half turn, so take
                    // the quarter-turn representative.
                    RatVec(vec![-&cur.coords()[1], cur.coords()[0].clone()])
                } else {
                    cur.add(next)
                };
                out.push(mid.primitive()?);
            }
            out.sort_by(angular_cmp);
            out.dedup();
            out.into_iter().map(Direction::new).collect()
        }
        d => Err(Error::UnsupportedMode(format!(
            "exact direction enumeration covers dimensions 1 and 2; \
             dimension {d} needs the sampled mode, which may miss boundary values"
        ))),
    }
}

/// One application of the transform, exact and complete in dimensions 1 and 2.
pub fn transform(family: &Family) -> Result<Family> {
    let dirs = critical_directions(family)?;
    let mut members = Vec::with_capacity(dirs.len());
    for g in &dirs {
        members.push(build_c(family, g)?);
    }
    Family::new(members)
}

/// Sampled variant for dimensions >= 3: evaluates `C` on `samples` random
/// integer directions. Incomplete by construction (it can miss values of `C`
/// attained only on lower-dimensional cones of directions).
pub fn transform_sampled(family: &Family, samples: usize, seed: u64) -> Result<Family> {
    if samples == 0 {
        return Err(Error::invalid(
            "sampled transform needs at least one sample",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = family.dim();
    let mut members = Vec::with_capacity(samples);
    while members.len() < samples {
        let coords: Vec<i64> = (0..n)
            .map(|_| rng.gen_range(-1_000_000..=1_000_000))
            .collect();
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        members.push(build_c(family, &Direction::from_ints(&coords)?)?);
    }
    Family::new(members)
}

/// First repeat along the orbit of `transform`, as (preperiod, minimal period).
#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub preperiod: usize,
    pub period: usize,
    /// Canonical serializations of the orbit up to and including the family
    /// that closed the cycle.
    pub family_sequence: Vec<String>,
    /// The two equal families closing the cycle (indices `preperiod` and
    /// `preperiod + period`).
    pub witness: (Family, Family),
}

/// Iterate the transform from `start` until a family repeats, or fail with
/// the partial orbit after `max_steps` applications.
pub fn detect_cycle(start: &Family, max_steps: usize) -> Result<CycleReport> {
    if max_steps == 0 {
        return Err(Error::invalid("cycle detection needs at least one step"));
    }
    let mut orbit: Vec<Family> = vec![start.clone()];
    let mut serials: Vec<String> = vec![start.serial()];
    let mut seen: HashMap<String, usize> = HashMap::new();
    seen.insert(serials[0].clone(), 0);

    for step in 1..=max_steps {
        let next = transform(orbit.last().unwrap())?;
        let serial = next.serial();
        serials.push(serial.clone());
        if let Some(&first) = seen.get(&serial) {
            orbit.push(next);
            return Ok(CycleReport {
                preperiod: first,
                period: step - first,
                family_sequence: serials,
                witness: (orbit[first].clone(), orbit[step].clone()),
            });
        }
        seen.insert(serial, step);
        orbit.push(next);
    }
    Err(Error::CycleBudgetExhausted {
        steps: max_steps,
        partial_orbit: serials,
    })
}

/// Parameters for random integer families.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RandomFamilyParams {
    pub dimension: usize,
    pub max_members: usize,
    pub max_vertices: usize,
    /// Vertex coordinates are integers in `[-coord_bound, coord_bound]`.
    pub coord_bound: i64,
}

impl Default for RandomFamilyParams {
    fn default() -> Self {
        RandomFamilyParams {
            dimension: 2,
            max_members: 4,
            max_vertices: 6,
            coord_bound: 5,
        }
    }
}

impl RandomFamilyParams {
    fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dimension) {
            return Err(Error::UnsupportedMode(
                "random search runs in the exact dimensions 1 and 2".into(),
            ));
        }
        if self.max_members == 0 || self.max_vertices == 0 || self.coord_bound <= 0 {
            return Err(Error::invalid("degenerate random-family parameters"));
        }
        Ok(())
    }
}

pub fn random_family(params: &RandomFamilyParams, rng: &mut ChaCha8Rng) -> Result<Family> {
    params.validate()?;
    let members = rng.gen_range(1..=params.max_members);
    let mut out = Vec::with_capacity(members);
    for _ in 0..members {
        let verts = rng.gen_range(1..=params.max_vertices);
        let points: Vec<RatVec> = (0..verts)
            .map(|_| {
                RatVec::from_ints(
                    &(0..params.dimension)
                        .map(|_| rng.gen_range(-params.coord_bound..=params.coord_bound))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        out.push(RationalPolytope::new(points)?);
    }
    Family::new(out)
}

/// Outcome of one random trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub start: Family,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
}

/// Aggregate statistics of a random cycle hunt.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub trials: usize,
    pub seed: u64,
    /// period -> number of trials reaching a cycle of that period.
    pub period_histogram: std::collections::BTreeMap<usize, usize>,
    pub budget_failures: usize,
    /// Full reports for every family whose minimal period exceeds two.
    pub long_cycles: Vec<(Family, CycleReport)>,
    pub outcomes: Vec<TrialOutcome>,
}

/// Generate `trials` random families, detect each orbit's cycle, and tally
/// the period histogram. Families with period > 2 are kept in full. Trials
/// are independent (one RNG stream per trial), so the result is identical no
/// matter how the work is scheduled.
pub fn random_family_search(
    params: &RandomFamilyParams,
    trials: usize,
    max_steps: usize,
    seed: u64,
) -> Result<SearchStats> {
    if trials == 0 {
        return Err(Error::invalid("search needs at least one trial"));
    }
    params.validate()?;

    let results: Vec<(Family, std::result::Result<CycleReport, ()>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let fam = random_family(params, &mut rng).expect("validated params");
            let report = detect_cycle(&fam, max_steps).map_err(|_| ());
            (fam, report)
        })
        .collect();

    let mut stats = SearchStats {
        trials,
        seed,
        period_histogram: Default::default(),
        budget_failures: 0,
        long_cycles: Vec::new(),
        outcomes: Vec::new(),
    };
    for (trial, (fam, res)) in results.into_iter().enumerate() {
        match res {
            Ok(report) => {
                *stats.period_histogram.entry(report.period).or_insert(0) += 1;
                stats.outcomes.push(TrialOutcome {
                    trial,
                    start: fam.clone(),
                    preperiod: Some(report.preperiod),
                    period: Some(report.period),
                });
                if report.period > 2 {
                    stats.long_cycles.push((fam, report));
                }
            }
            Err(()) => {
                stats.budget_failures += 1;
                stats.outcomes.push(TrialOutcome {
                    trial,
                    start: fam,
                    preperiod: None,
                    period: None,
                });
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt1(x: i64) -> RatVec {
        RatVec::from_ints(&[x])
    }

    fn pt(x: i64, y: i64) -> RatVec {
        RatVec::from_ints(&[x, y])
    }

    fn poly(points: &[RatVec]) -> RationalPolytope {
        RationalPolytope::new(points.to_vec()).unwrap()
    }

    fn segment01() -> Family {
        Family::new(vec![poly(&[pt1(0), pt1(1)])]).unwrap()
    }

    fn unit_square() -> RationalPolytope {
        poly(&[pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1)])
    }

    #[test]
    fn support_vertices_unit_square() {
        let sq = unit_square();
        let right = support_vertices(&sq, &Direction::from_ints(&[1, 0]).unwrap()).unwrap();
        assert_eq!(right, vec![pt(1, 0), pt(1, 1)]);
        let corner = support_vertices(&sq, &Direction::from_ints(&[1, 1]).unwrap()).unwrap();
        assert_eq!(corner, vec![pt(1, 1)]);
    }

    #[test]
    fn support_vertices_matches_big_rational_route() {
        // Exercise both the i128 fast path and the general path on the same data.
        let p = poly(&[pt(-3, 2), pt(4, 5), pt(0, -1), pt(2, 2)]);
        for g in [
            Direction::from_ints(&[3, -7]).unwrap(),
            Direction::new(RatVec(vec![
                Rat::new(1, 3).unwrap(),
                Rat::new(-2, 5).unwrap(),
            ]))
            .unwrap(),
        ] {
            let fast = support_vertices(&p, &g).unwrap();
            let slow: Vec<RatVec> = {
                let vals: Vec<Rat> = p.vertices().iter().map(|v| v.dot(g.vector())).collect();
                let max = vals.iter().max().unwrap().clone();
                p.vertices()
                    .iter()
                    .zip(&vals)
                    .filter(|(_, v)| **v == max)
                    .map(|(q, _)| q.clone())
                    .collect()
            };
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn support_vertices_random_polygon_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let pts: Vec<RatVec> = (0..6)
                .map(|_| pt(rng.gen_range(-5..=5), rng.gen_range(-5..=5)))
                .collect();
            let p = RationalPolytope::new(pts).unwrap();
            let g = loop {
                let (a, b) = (rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9));
                if a != 0 || b != 0 {
                    break Direction::from_ints(&[a, b]).unwrap();
                }
            };
            let sup = support_vertices(&p, &g).unwrap();
            let max = p
                .vertices()
                .iter()
                .map(|v| v.dot(g.vector()))
                .max()
                .unwrap();
            for v in p.vertices() {
                let is_sup = sup.contains(v);
                assert_eq!(is_sup, v.dot(g.vector()) == max);
            }
        }
    }

    #[test]
    fn build_c_examples() {
        // Single segment: argmax picks an endpoint.
        let fam = segment01();
        let c = build_c(&fam, &Direction::from_ints(&[1]).unwrap()).unwrap();
        assert_eq!(c.vertices(), &[pt1(1)]);

        // Two singletons: hull of both argmax sets is the segment.
        let fam = Family::new(vec![poly(&[pt1(0)]), poly(&[pt1(1)])]).unwrap();
        let c = build_c(&fam, &Direction::from_ints(&[1]).unwrap()).unwrap();
        assert_eq!(c.vertices(), &[pt1(0), pt1(1)]);

        // Single polytope, generic direction: the unique maximizing vertex.
        let fam = Family::new(vec![unit_square()]).unwrap();
        let c = build_c(&fam, &Direction::from_ints(&[2, 1]).unwrap()).unwrap();
        assert_eq!(c.vertices(), &[pt(1, 1)]);
    }

    #[test]
    fn critical_directions_dim1() {
        let dirs = critical_directions(&segment01()).unwrap();
        assert_eq!(
            dirs,
            vec![
                Direction::from_ints(&[1]).unwrap(),
                Direction::from_ints(&[-1]).unwrap()
            ]
        );
    }

    #[test]
    fn critical_directions_square_contains_edge_normals() {
        let fam = Family::new(vec![unit_square()]).unwrap();
        let dirs = critical_directions(&fam).unwrap();
        for expect in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
            let d = Direction::from_ints(&expect.map(i64::from)).unwrap();
            assert!(dirs.contains(&d), "missing edge normal {expect:?}");
        }
        // Arc representatives interleave, so there are strictly more
        // directions than critical rays.
        assert!(dirs.len() >= 8);
    }

    #[test]
    fn critical_directions_point_family() {
        let fam = Family::new(vec![poly(&[pt(2, 3)])]).unwrap();
        let dirs = critical_directions(&fam).unwrap();
        assert_eq!(dirs.len(), 1);
        let c = build_c(&fam, &dirs[0]).unwrap();
        assert_eq!(c.vertices(), &[pt(2, 3)]);
    }

    #[test]
    fn critical_directions_unsupported_in_3d() {
        let fam = Family::new(vec![poly(&[RatVec::from_ints(&[0, 0, 0])])]).unwrap();
        assert!(matches!(
            critical_directions(&fam),
            Err(Error::UnsupportedMode(_))
        ));
    }

    #[test]
    fn randomized_completeness_of_critical_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..4 {
            let fam = Family::new(
                (0..2)
                    .map(|_| {
                        RationalPolytope::new(
                            (0..3)
                                .map(|_| pt(rng.gen_range(-5..=5), rng.gen_range(-5..=5)))
                                .collect(),
                        )
                        .unwrap()
                    })
                    .collect(),
            )
            .unwrap();

            let enumerated: BTreeSet<RationalPolytope> = critical_directions(&fam)
                .unwrap()
                .iter()
                .map(|g| build_c(&fam, g).unwrap())
                .collect();

            // Sampled directions can only find a subset of the enumerated values.
            let mut sampled: BTreeSet<RationalPolytope> = BTreeSet::new();
            for _ in 0..20_000 {
                let (a, b) = (
                    rng.gen_range(-1000i64..=1000),
                    rng.gen_range(-1000i64..=1000),
                );
                if a == 0 && b == 0 {
                    continue;
                }
                sampled.insert(build_c(&fam, &Direction::from_ints(&[a, b]).unwrap()).unwrap());
            }
            assert!(
                sampled.is_subset(&enumerated),
                "sampled values escaped the enumerated set"
            );
        }
    }

    #[test]
    fn transform_segment_two_cycle() {
        let fam0 = segment01();
        let fam1 = transform(&fam0).unwrap();
        let expect1 = Family::new(vec![poly(&[pt1(0)]), poly(&[pt1(1)])]).unwrap();
        assert_eq!(fam1, expect1);
        let fam2 = transform(&fam1).unwrap();
        assert_eq!(fam2, fam0);
    }

    #[test]
    fn transform_fixed_point_singleton() {
        let fam = Family::new(vec![poly(&[pt(3, -2)])]).unwrap();
        assert_eq!(transform(&fam).unwrap(), fam);
    }

    #[test]
    fn transform_positive_scaling_invariance() {
        let fam =
            Family::new(vec![unit_square(), poly(&[pt(-2, 1), pt(0, 3), pt(1, -1)])]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (a, b) = (rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20));
            if a == 0 && b == 0 {
                continue;
            }
            let g = Direction::from_ints(&[a, b]).unwrap();
            let g2 = Direction::new(RatVec::from_ints(&[2 * a, 2 * b])).unwrap();
            assert_eq!(g, g2, "primitive form identifies positive scalings");
            assert_eq!(build_c(&fam, &g).unwrap(), build_c(&fam, &g2).unwrap());
        }
    }

    #[test]
    fn transform_commutes_with_translation() {
        let fam = Family::new(vec![unit_square(), poly(&[pt(-3, 0), pt(2, 2)])]).unwrap();
        let t = pt(7, -4);
        let lhs = transform(&fam.translate(&t)).unwrap();
        let rhs = transform(&fam).unwrap().translate(&t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transform_deterministic_under_member_order() {
        let a = unit_square();
        let b = poly(&[pt(-1, -1), pt(-1, 1), pt(1, 0)]);
        let f1 = Family::new(vec![a.clone(), b.clone()]).unwrap();
        let f2 = Family::new(vec![b, a]).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(transform(&f1).unwrap(), transform(&f2).unwrap());
        assert_eq!(f1.serial(), f2.serial());
    }

    #[test]
    fn detect_cycle_segment() {
        let report = detect_cycle(&segment01(), 100).unwrap();
        assert_eq!(report.preperiod, 0);
        assert_eq!(report.period, 2);
        assert_eq!(report.witness.0, report.witness.1);
        assert_eq!(report.family_sequence.len(), 3);
    }

    #[test]
    fn detect_cycle_fixed_point() {
        let fam = Family::new(vec![poly(&[pt(1, 1)])]).unwrap();
        let report = detect_cycle(&fam, 10).unwrap();
        assert_eq!((report.preperiod, report.period), (0, 1));
    }

    #[test]
    fn detect_cycle_budget_error_carries_partial_orbit() {
        let fam = segment01();
        match detect_cycle(&fam, 1) {
            Err(Error::CycleBudgetExhausted {
                steps,
                partial_orbit,
            }) => {
                assert_eq!(steps, 1);
                assert_eq!(partial_orbit.len(), 2);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn vertex_absorption_along_random_orbits() {
        let params = RandomFamilyParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let fam = random_family(&params, &mut rng).unwrap();
            let mut cur = fam;
            for _ in 0..6 {
                let next = transform(&cur).unwrap();
                let prev_vertices = cur.vertex_set();
                assert!(
                    next.vertex_set().is_subset(&prev_vertices),
                    "transform introduced a vertex"
                );
                cur = next;
            }
        }
    }

    #[test]
    fn search_singleton_families_are_fixed() {
        let params = RandomFamilyParams {
            dimension: 2,
            max_members: 1,
            max_vertices: 1,
            coord_bound: 5,
        };
        let stats = random_family_search(&params, 100, 10, 0).unwrap();
        assert_eq!(stats.period_histogram.get(&1), Some(&100));
        assert_eq!(stats.budget_failures, 0);
    }

    #[test]
    fn search_segments_in_dim1_period_at_most_two() {
        let params = RandomFamilyParams {
            dimension: 1,
            max_members: 1,
            max_vertices: 2,
            coord_bound: 9,
        };
        let stats = random_family_search(&params, 100, 50, 0).unwrap();
        assert_eq!(stats.budget_failures, 0);
        assert!(stats.period_histogram.keys().all(|&p| p <= 2));
    }

    #[test]
    fn search_two_polygon_families_with_replay() {
        let params = RandomFamilyParams {
            dimension: 2,
            max_members: 2,
            max_vertices: 6,
            coord_bound: 4,
        };
        let stats = random_family_search(&params, 50, 1000, 7).unwrap();
        assert_eq!(stats.budget_failures, 0);
        // Replay every reported cycle.
        for out in &stats.outcomes {
            let (pre, per) = (out.preperiod.unwrap(), out.period.unwrap());
            let mut cur = out.start.clone();
            for _ in 0..pre {
                cur = transform(&cur).unwrap();
            }
            let at_pre = cur.clone();
            for _ in 0..per {
                cur = transform(&cur).unwrap();
            }
            assert_eq!(cur, at_pre, "replayed period does not close");
        }
    }

    #[test]
    fn search_is_deterministic() {
        let params = RandomFamilyParams::default();
        let s1 = random_family_search(&params, 10, 200, 3).unwrap();
        let s2 = random_family_search(&params, 10, 200, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&s1).unwrap(),
            serde_json::to_string(&s2).unwrap()
        );
    }

    #[test]
    fn sampled_mode_covers_higher_dimensions() {
        // Two singleton members in 3-space: C(g) is their joining segment for
        // every direction, so even the incomplete sampled mode is exact here.
        let fam = Family::new(vec![
            poly(&[RatVec::from_ints(&[0, 0, 0])]),
            poly(&[RatVec::from_ints(&[1, 2, 3])]),
        ])
        .unwrap();
        let sampled = transform_sampled(&fam, 200, 0).unwrap();
        assert_eq!(sampled.members().len(), 1);
        assert_eq!(sampled.members()[0].vertices().len(), 2);
        // The exact route refuses dimension 3.
        assert!(transform(&fam).is_err());
    }

    #[test]
    fn canonical_form_matches_extreme_point_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..30 {
            let pts: Vec<RatVec> = (0..rng.gen_range(1..=8))
                .map(|_| pt(rng.gen_range(-4..=4), rng.gen_range(-4..=4)))
                .collect();
            let canonical = RationalPolytope::new(pts.clone()).unwrap();
            let filter = crate::hull::extreme_points(&pts).unwrap();
            assert_eq!(canonical.vertices(), &filter[..]);
        }
    }

    #[test]
    fn family_json_wire_format() {
        let fam = Family::new(vec![poly(&[pt(0, 0), pt(2, 0)])]).unwrap();
        let j = serde_json::to_string(&fam).unwrap();
        assert_eq!(j, r#"{"dimension":2,"polytopes":[[["0","0"],["2","0"]]]}"#);
        let back: Family = serde_json::from_str(&j).unwrap();
        assert_eq!(fam, back);

        // Non-canonical input is canonicalized on read.
        let raw = r#"{"dimension":1,"polytopes":[[["0"],["1"],["1/2"]]]}"#;
        let fam: Family = serde_json::from_str(raw).unwrap();
        assert_eq!(fam.members()[0].vertices(), &[pt1(0), pt1(1)]);
    }
}

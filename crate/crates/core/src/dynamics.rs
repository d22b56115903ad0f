//! Discrete two-set splitting iteration, its continuous-time flow, and grid
//! sweeps (flow fields and basins of attraction).
//!
//! One step of the discrete method applies
//! `T(x) = lambda * R_B(R_A(x)) + (1 - lambda) * x` with reflectors
//! `R_S = 2 P_S - Id`; the flow field is the rescaled small-relaxation limit
//! `V(x) = (T(x) - x) / lambda = R_B(R_A(x)) - x`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::float::{FloatVec, Tolerance};
use crate::projections::{membership_residual, project, reflect, SetDescriptor};

/// Norm beyond which a flow integration is declared divergent.
const DIVERGENCE_GUARD: f64 = 1e8;

/// A two-set feasibility problem with relaxation parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DRProblem {
    #[serde(rename = "A")]
    pub a: SetDescriptor,
    #[serde(rename = "B")]
    pub b: SetDescriptor,
    pub lambda: f64,
}

impl DRProblem {
    pub fn new(a: SetDescriptor, b: SetDescriptor, lambda: f64) -> Result<Self> {
        let p = DRProblem { a, b, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.a.validate()?;
        self.b.validate()?;
        if self.a.dim() != self.b.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.a.dim(),
                got: self.b.dim(),
            });
        }
        if self.lambda.is_nan() || self.lambda <= 0.0 || self.lambda > 1.0 {
            return Err(Error::invalid(format!(
                "relaxation parameter must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryStatus {
    Converged,
    BudgetExhausted,
    Diverged,
}

/// Feasibility certificate attached to converged runs: the shadow point
/// `P_A(x*)` and its residuals against both sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShadowCertificate {
    pub shadow: FloatVec,
    pub residual_a: f64,
    pub residual_b: f64,
}

/// Recorded iterate path (discrete) or flow path (continuous).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Trajectory {
    pub points: Vec<FloatVec>,
    /// Step sizes `||x_n - x_{n-1}||` for iterations, flow speeds for
    /// integrations; always one shorter than `points`.
    pub residuals: Vec<f64>,
    pub status: TrajectoryStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ShadowCertificate>,
}

impl Trajectory {
    pub fn final_point(&self) -> &FloatVec {
        self.points.last().expect("trajectory has at least x0")
    }
}

/// One step of the relaxed double-reflection iteration.
pub fn dr_step(problem: &DRProblem, x: &FloatVec, tol: Tolerance) -> Result<FloatVec> {
    problem.validate()?;
    let ra = reflect(&problem.a, x, tol)?;
    let rb = reflect(&problem.b, &ra, tol)?;
    Ok(rb.scale(problem.lambda).axpy(1.0 - problem.lambda, x))
}

/// The continuous-time field `V(x) = R_B(R_A(x)) - x`, the rescaled limit of
/// `(T(x) - x) / lambda` as the relaxation parameter tends to zero.
pub fn flow_vector(problem: &DRProblem, x: &FloatVec, tol: Tolerance) -> Result<FloatVec> {
    problem.validate()?;
    let ra = reflect(&problem.a, x, tol)?;
    let rb = reflect(&problem.b, &ra, tol)?;
    Ok(rb.sub(x))
}

fn certificate(problem: &DRProblem, x: &FloatVec, tol: Tolerance) -> Result<ShadowCertificate> {
    let shadow = project(&problem.a, x, tol)?.point;
    Ok(ShadowCertificate {
        residual_a: membership_residual(&problem.a, &shadow)?,
        residual_b: membership_residual(&problem.b, &shadow)?,
        shadow,
    })
}

/// Iterate the discrete method from `x0` until the step norm drops below
/// `stop_tol` or `max_iter` steps have been taken. A non-finite iterate ends
/// the run with `Diverged` status rather than an error.
pub fn dr_iterate(
    problem: &DRProblem,
    x0: &FloatVec,
    stop_tol: f64,
    max_iter: usize,
    tol: Tolerance,
) -> Result<Trajectory> {
    if stop_tol.is_nan() || stop_tol <= 0.0 {
        return Err(Error::invalid("stop tolerance must be positive"));
    }
    if max_iter == 0 {
        return Err(Error::invalid("iteration budget must be at least 1"));
    }
    problem.validate()?;

    let mut points = vec![x0.clone()];
    let mut residuals = Vec::new();
    let mut status = TrajectoryStatus::BudgetExhausted;

    let mut x = x0.clone();
    for _ in 0..max_iter {
        let next = dr_step(problem, &x, tol)?;
        if !next.is_finite() {
            points.push(next);
            residuals.push(f64::NAN);
            status = TrajectoryStatus::Diverged;
            break;
        }
        let step = next.dist(&x);
        points.push(next.clone());
        residuals.push(step);
        x = next;
        if step < stop_tol {
            status = TrajectoryStatus::Converged;
            break;
        }
    }

    let certificate = if status == TrajectoryStatus::Converged {
        Some(certificate(problem, &x, tol)?)
    } else {
        None
    };
    Ok(Trajectory {
        points,
        residuals,
        status,
        certificate,
    })
}

/// Classical fixed-step fourth-order Runge–Kutta integration of
/// `dx/dt = V(x)`. Stops early once the speed drops below `stop_tol`
/// (pass 0 to disable) and guards against divergence.
pub fn integrate_flow(
    problem: &DRProblem,
    x0: &FloatVec,
    step_size: f64,
    t_max: f64,
    stop_tol: f64,
    tol: Tolerance,
) -> Result<Trajectory> {
    if step_size.is_nan() || step_size <= 0.0 {
        return Err(Error::invalid("step size must be positive"));
    }
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::invalid("integration horizon must be positive"));
    }
    problem.validate()?;

    let steps = (t_max / step_size).round().max(1.0) as usize;
    let mut points = vec![x0.clone()];
    let mut residuals = Vec::new();
    let mut status = TrajectoryStatus::BudgetExhausted;
    let mut x = x0.clone();

    if stop_tol > 0.0 && flow_vector(problem, &x, tol)?.norm() < stop_tol {
        return Ok(Trajectory {
            points,
            residuals,
            status: TrajectoryStatus::Converged,
            certificate: Some(certificate(problem, &x, tol)?),
        });
    }

    let h = step_size;
    for _ in 0..steps {
        let k1 = flow_vector(problem, &x, tol)?;
        let k2 = flow_vector(problem, &x.axpy(h / 2.0, &k1), tol)?;
        let k3 = flow_vector(problem, &x.axpy(h / 2.0, &k2), tol)?;
        let k4 = flow_vector(problem, &x.axpy(h, &k3), tol)?;
        let mut next = x.axpy(h / 6.0, &k1);
        next = next.axpy(h / 3.0, &k2);
        next = next.axpy(h / 3.0, &k3);
        next = next.axpy(h / 6.0, &k4);

        if !next.is_finite() || next.norm() > DIVERGENCE_GUARD {
            points.push(next);
            residuals.push(f64::NAN);
            status = TrajectoryStatus::Diverged;
            x = points.last().unwrap().clone();
            break;
        }
        let speed = flow_vector(problem, &next, tol)?.norm();
        points.push(next.clone());
        residuals.push(speed);
        x = next;
        if stop_tol > 0.0 && speed < stop_tol {
            status = TrajectoryStatus::Converged;
            break;
        }
    }

    let certificate = if status == TrajectoryStatus::Converged {
        Some(certificate(problem, &x, tol)?)
    } else {
        None
    };
    Ok(Trajectory {
        points,
        residuals,
        status,
        certificate,
    })
}

/// Axis-aligned sampling window for grid sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridBox {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl GridBox {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::invalid("grid box must have positive extent"));
        }
        Ok(GridBox {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    /// Center of cell `(ix, iy)` on an `nx` by `ny` grid.
    pub fn cell_center(&self, ix: usize, iy: usize, nx: usize, ny: usize) -> FloatVec {
        let x = self.xmin + (ix as f64 + 0.5) * (self.xmax - self.xmin) / nx as f64;
        let y = self.ymin + (iy as f64 + 0.5) * (self.ymax - self.ymin) / ny as f64;
        FloatVec::raw(vec![x, y])
    }
}

/// Flow vectors sampled at the cell centers of a regular grid.
#[derive(Clone, Debug)]
pub struct FlowFieldGrid {
    pub bbox: GridBox,
    pub nx: usize,
    pub ny: usize,
    /// Row-major (`iy` outer, `ix` inner) flow vectors at cell centers.
    pub vectors: Vec<FloatVec>,
}

/// One emitted flow-field sample: position, raw vector, unit-normalized vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowSample {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub vnx: f64,
    pub vny: f64,
}

impl FlowFieldGrid {
    pub fn samples(&self) -> Vec<FlowSample> {
        let mut rows = Vec::with_capacity(self.vectors.len());
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let p = self.bbox.cell_center(ix, iy, self.nx, self.ny);
                let v = &self.vectors[iy * self.nx + ix];
                let n = v.norm();
                let (vnx, vny) = if n > 0.0 {
                    (v[0] / n, v[1] / n)
                } else {
                    (0.0, 0.0)
                };
                rows.push(FlowSample {
                    x: p[0],
                    y: p[1],
                    vx: v[0],
                    vy: v[1],
                    vnx,
                    vny,
                });
            }
        }
        rows
    }
}

/// Evaluate the flow field at every cell center of the grid.
pub fn export_flow_field(
    problem: &DRProblem,
    bbox: GridBox,
    nx: usize,
    ny: usize,
    tol: Tolerance,
) -> Result<FlowFieldGrid> {
    problem.validate()?;
    if problem.dim() != 2 {
        return Err(Error::UnsupportedMode(
            "flow-field grids are two-dimensional".into(),
        ));
    }
    if nx == 0 || ny == 0 {
        return Err(Error::invalid("grid resolution must be at least 1"));
    }
    let cells: Vec<(usize, usize)> = (0..ny)
        .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
        .collect();
    let vectors: Vec<FloatVec> = cells
        .par_iter()
        .map(|&(ix, iy)| {
            let p = bbox.cell_center(ix, iy, nx, ny);
            flow_vector(problem, &p, tol)
        })
        .collect::<Result<_>>()?;
    Ok(FlowFieldGrid {
        bbox,
        nx,
        ny,
        vectors,
    })
}

/// Basin label of one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellLabel {
    /// Index into `BasinGrid::attractors`.
    Attractor(usize),
    NonConvergent,
}

/// Attractor labels over a start-point grid.
#[derive(Clone, Debug)]
pub struct BasinGrid {
    pub bbox: GridBox,
    pub nx: usize,
    pub ny: usize,
    /// Row-major (`iy` outer, `ix` inner).
    pub labels: Vec<CellLabel>,
    /// Representative shadow point for each attractor, in order of first
    /// appearance in row-major scan order.
    pub attractors: Vec<FloatVec>,
}

/// Run the discrete iteration from every cell center and label each cell by
/// the attractor its shadow converges to. Shadows within `100 * stop_tol` of
/// an already-seen attractor share its label; cells whose run does not
/// converge (or whose projections fail) are labeled `NonConvergent`.
///
/// Cells are processed independently; labels are assigned in row-major order,
/// so the result does not depend on scheduling.
pub fn basin_grid(
    problem: &DRProblem,
    bbox: GridBox,
    nx: usize,
    ny: usize,
    stop_tol: f64,
    max_iter: usize,
    tol: Tolerance,
) -> Result<BasinGrid> {
    problem.validate()?;
    if problem.dim() != 2 {
        return Err(Error::UnsupportedMode(
            "basin grids are two-dimensional".into(),
        ));
    }
    if nx < 2 || ny < 2 {
        return Err(Error::invalid(
            "basin resolution must be at least 2 per axis",
        ));
    }
    if stop_tol.is_nan() || stop_tol <= 0.0 {
        return Err(Error::invalid("stop tolerance must be positive"));
    }

    let cells: Vec<(usize, usize)> = (0..ny)
        .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
        .collect();
    let shadows: Vec<Option<FloatVec>> = cells
        .par_iter()
        .map(|&(ix, iy)| {
            let start = bbox.cell_center(ix, iy, nx, ny);
            match dr_iterate(problem, &start, stop_tol, max_iter, tol) {
                Ok(t) if t.status == TrajectoryStatus::Converged => t.certificate.map(|c| c.shadow),
                _ => None,
            }
        })
        .collect();

    let cluster_radius = 100.0 * stop_tol;
    let mut attractors: Vec<FloatVec> = Vec::new();
    let mut labels = Vec::with_capacity(shadows.len());
    for shadow in &shadows {
        match shadow {
            None => labels.push(CellLabel::NonConvergent),
            Some(s) => {
                let found = attractors.iter().position(|a| a.dist(s) <= cluster_radius);
                match found {
                    Some(i) => labels.push(CellLabel::Attractor(i)),
                    None => {
                        attractors.push(s.clone());
                        labels.push(CellLabel::Attractor(attractors.len() - 1));
                    }
                }
            }
        }
    }
    Ok(BasinGrid {
        bbox,
        nx,
        ny,
        labels,
        attractors,
    })
}

// ---------------------------------------------------------------------------
// CSV formats

/// Header `iter,x1,...,xn,residual`; the first row has an empty residual.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, w: &mut W) -> Result<()> {
    let dim = traj.points.first().map(FloatVec::dim).unwrap_or(0);
    write!(w, "iter")?;
    for i in 1..=dim {
        write!(w, ",x{i}")?;
    }
    writeln!(w, ",residual")?;
    for (i, p) in traj.points.iter().enumerate() {
        write!(w, "{i}")?;
        for c in p.coords() {
            write!(w, ",{c}")?;
        }
        if i == 0 {
            writeln!(w, ",")?;
        } else {
            writeln!(w, ",{}", traj.residuals[i - 1])?;
        }
    }
    Ok(())
}

/// Parse the trajectory table back into points and residuals.
pub fn parse_trajectory_csv(text: &str) -> Result<(Vec<FloatVec>, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid("empty trajectory csv"))?;
    let cols = header.split(',').count();
    if cols < 3 {
        return Err(Error::invalid(
            "trajectory csv needs iter, coords, residual",
        ));
    }
    let dim = cols - 2;
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            return Err(Error::invalid(format!(
                "ragged row {row} in trajectory csv"
            )));
        }
        let coords: Vec<f64> = fields[1..=dim]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::invalid(format!("bad coordinate in row {row}: {e}")))?;
        points.push(FloatVec::raw(coords));
        let res = fields[cols - 1];
        if !res.is_empty() {
            residuals.push(
                res.parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad residual in row {row}: {e}")))?,
            );
        }
    }
    Ok((points, residuals))
}

/// Header `x,y,vx,vy,vnx,vny`.
pub fn write_flow_samples_csv<W: Write>(samples: &[FlowSample], w: &mut W) -> Result<()> {
    writeln!(w, "x,y,vx,vy,vnx,vny")?;
    for s in samples {
        writeln!(w, "{},{},{},{},{},{}", s.x, s.y, s.vx, s.vy, s.vnx, s.vny)?;
    }
    Ok(())
}

pub fn parse_flow_samples_csv(text: &str) -> Result<Vec<FlowSample>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::invalid("empty flow-field csv"))?;
    if header != "x,y,vx,vy,vnx,vny" {
        return Err(Error::invalid(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (row, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::invalid(format!("bad value in row {row}: {e}")))?;
        if vals.len() != 6 {
            return Err(Error::invalid(format!(
                "ragged row {row} in flow-field csv"
            )));
        }
        out.push(FlowSample {
            x: vals[0],
            y: vals[1],
            vx: vals[2],
            vy: vals[3],
            vnx: vals[4],
            vny: vals[5],
        });
    }
    Ok(out)
}

/// Header `x,y,label`; labels are attractor indices or `nonconvergent`.
pub fn write_basin_csv<W: Write>(grid: &BasinGrid, w: &mut W) -> Result<()> {
    writeln!(w, "x,y,label")?;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let p = grid.bbox.cell_center(ix, iy, grid.nx, grid.ny);
            match grid.labels[iy * grid.nx + ix] {
                CellLabel::Attractor(i) => writeln!(w, "{},{},{}", p[0], p[1], i)?,
                CellLabel::NonConvergent => writeln!(w, "{},{},nonconvergent", p[0], p[1])?,
            }
        }
    }
    Ok(())
}

//! The convex roof of a sampled function: exact lower-envelope values by
//! linear programming, flat simplices, supporting hyperplanes, and the
//! outer extension beyond the hull.

use std::sync::OnceLock;

use crate::error::Error;
use crate::geometry::{self, AffineFrame, ConvexCombination, Hull, Point, PointCloud};
use crate::linalg;
use crate::lp::{self, LPStatus};
use crate::scalar::Float;
use crate::Result;

/// Relaxed membership tolerance absorbing boundary roundoff of queries.
pub const MEMBERSHIP_TOL: f64 = 1e-7;
/// A boundary query may sit this far (relative) inside the hull.
const BOUNDARY_TOL: f64 = 1e-6;

/// A compact sample set together with its function values; the immutable
/// problem object every roof operation runs against.
#[derive(Debug)]
pub struct SampledConvexProblem<S> {
    cloud: PointCloud<S>,
    values: Vec<S>,
    frame: AffineFrame<S>,
    projected: Vec<Vec<S>>,
    hull: OnceLock<Hull<S>>,
    lower_bound: S,
    upper_bound: S,
}

impl<S: Float> SampledConvexProblem<S> {
    pub fn new(cloud: PointCloud<S>, values: Vec<S>) -> Result<Self> {
        if values.len() != cloud.len() {
            return Err(Error::DimensionMismatch {
                expected: cloud.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "sample values",
            });
        }
        let frame = AffineFrame::fit(&cloud);
        let projected = (0..cloud.len())
            .map(|i| frame.project(cloud.coords(i)))
            .collect();
        let lower_bound = values.iter().copied().fold(S::infinity(), S::min);
        let upper_bound = values.iter().copied().fold(S::neg_infinity(), S::max);
        Ok(Self {
            cloud,
            values,
            frame,
            projected,
            hull: OnceLock::new(),
            lower_bound,
            upper_bound,
        })
    }

    pub fn cloud(&self) -> &PointCloud<S> {
        &self.cloud
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    pub fn frame(&self) -> &AffineFrame<S> {
        &self.frame
    }

    pub fn lower_bound(&self) -> S {
        self.lower_bound
    }

    pub fn upper_bound(&self) -> S {
        self.upper_bound
    }

    /// The hull is expensive for large clouds and cached on first use.
    pub fn hull(&self) -> Result<&Hull<S>> {
        if self.hull.get().is_none() {
            let computed = geometry::convex_hull(&self.cloud)?;
            let _ = self.hull.set(computed);
        }
        Ok(self.hull.get().expect("hull just set"))
    }

    /// Membership of `x` in co(cloud) at the relaxed query tolerance.
    pub fn contains(&self, x: &[S]) -> Result<bool> {
        self.check_dim(x)?;
        let scale = self.cloud.scale().max(S::one());
        if self.frame.residual(x) > S::of(MEMBERSHIP_TOL) * scale {
            return Ok(false);
        }
        let zeros = vec![S::zero(); self.cloud.len()];
        let sol = geometry::envelope_solve(
            &self.projected,
            &zeros,
            &self.frame.project(x),
            S::of(MEMBERSHIP_TOL),
        )?;
        Ok(sol.is_optimal())
    }

    fn check_dim(&self, x: &[S]) -> Result<()> {
        if x.len() != self.cloud.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cloud.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Evaluate the roof at `x`: the exact minimum of Σ tᵢf(xᵢ) over all
    /// discrete convex decompositions of `x`.
    pub fn roof_eval(&self, x: &Point<S>) -> Result<RoofValue<S>> {
        self.check_dim(x.coords())?;
        let scale = self.cloud.scale().max(S::one());
        let residual = self.frame.residual(x.coords());
        if residual > S::of(MEMBERSHIP_TOL) * scale {
            return Err(Error::Membership {
                residual: residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        let sol = geometry::envelope_solve(
            &self.projected,
            &self.values,
            &self.frame.project(x.coords()),
            S::of(MEMBERSHIP_TOL),
        )?;
        match sol.status {
            LPStatus::Optimal => {
                let entries: Vec<(usize, S)> = sol
                    .t
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| w > S::of(1e-12))
                    .map(|(i, &w)| (i, w))
                    .collect();
                let decomposition = ConvexCombination::new(entries)?.cleaned();
                debug_assert!(decomposition.support_size() <= self.frame.dim() + 1);
                let value = decomposition.value(&self.values);
                Ok(RoofValue {
                    value,
                    decomposition,
                    query: x.clone(),
                })
            }
            LPStatus::Infeasible => Err(Error::Membership {
                residual: sol.objective.to_f64().unwrap_or(f64::NAN),
            }),
            LPStatus::Unbounded => {
                Err(Error::Numerical("envelope LP reported unbounded".into()))
            }
        }
    }

    /// Evaluate the roof on an axis-aligned lattice over the cloud's
    /// bounding box; cells outside the hull are absent.
    pub fn roof_grid(&self, resolution: usize) -> Result<RoofGrid<S>> {
        let d = self.cloud.dim();
        if d > 3 {
            return Err(Error::Unsupported("grid output is limited to d ≤ 3"));
        }
        if resolution < 2 {
            return Err(Error::Unsupported("grid resolution must be at least 2"));
        }
        let (lo, hi) = self.cloud.bbox();
        let cells = resolution.pow(d as u32);
        let mut values = Vec::with_capacity(cells);
        let mut coords = vec![S::zero(); d];
        for cell in 0..cells {
            let mut rem = cell;
            for axis in (0..d).rev() {
                let idx = rem % resolution;
                rem /= resolution;
                let frac = S::from_usize(idx).unwrap() / S::from_usize(resolution - 1).unwrap();
                coords[axis] = lo[axis] + (hi[axis] - lo[axis]) * frac;
            }
            let point = Point::new(coords.clone())?;
            match self.roof_eval(&point) {
                Ok(rv) => values.push(Some(rv.value)),
                Err(Error::Membership { .. }) => values.push(None),
                Err(e) => return Err(e),
            }
        }
        Ok(RoofGrid {
            bbox_lo: lo.to_vec(),
            bbox_hi: hi.to_vec(),
            resolution,
            dim: d,
            values,
        })
    }

    /// Same lattice as [`roof_grid`](Self::roof_grid), with the queries
    /// fanned out over `jobs` threads. Results are identical for every
    /// job count: cells are assigned by index and merged in place.
    pub fn roof_grid_parallel(&self, resolution: usize, jobs: usize) -> Result<RoofGrid<S>> {
        if jobs <= 1 {
            return self.roof_grid(resolution);
        }
        let d = self.cloud.dim();
        if d > 3 {
            return Err(Error::Unsupported("grid output is limited to d ≤ 3"));
        }
        if resolution < 2 {
            return Err(Error::Unsupported("grid resolution must be at least 2"));
        }
        let (lo, hi) = self.cloud.bbox();
        let template = RoofGrid {
            bbox_lo: lo.to_vec(),
            bbox_hi: hi.to_vec(),
            resolution,
            dim: d,
            values: Vec::new(),
        };
        let cells = resolution.pow(d as u32);
        let chunk = cells.div_ceil(jobs);
        let results: Vec<Result<Vec<Option<S>>>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..jobs {
                let start = w * chunk;
                let end = ((w + 1) * chunk).min(cells);
                let template = &template;
                handles.push(scope.spawn(move || {
                    let mut part = Vec::with_capacity(end.saturating_sub(start));
                    for cell in start..end {
                        let point = Point::new(template.cell_coords(cell))?;
                        match self.roof_eval(&point) {
                            Ok(rv) => part.push(Some(rv.value)),
                            Err(Error::Membership { .. }) => part.push(None),
                            Err(e) => return Err(e),
                        }
                    }
                    Ok(part)
                }));
            }
            handles
                .into_iter()
                .map(|h| h.join().expect("grid worker panicked"))
                .collect()
        });
        let mut values = Vec::with_capacity(cells);
        for part in results {
            values.extend(part?);
        }
        Ok(RoofGrid { values, ..template })
    }

    /// The support simplex of the optimal decomposition at `x` together
    /// with the affine functional the roof equals on it.
    pub fn flat_set(&self, x: &Point<S>) -> Result<FlatSet<S>> {
        let rv = self.roof_eval(x)?;
        let indices: Vec<usize> = rv.decomposition.entries().iter().map(|&(i, _)| i).collect();
        let support: Vec<Point<S>> = indices
            .iter()
            .map(|&i| self.cloud.point(i).clone())
            .collect();

        // interpolate (xʲ, f(xʲ)) on the affine span of the support
        let rows: Vec<Vec<S>> = indices
            .iter()
            .map(|&i| {
                let mut row = self.projected[i].clone();
                row.push(S::one());
                row
            })
            .collect();
        let targets: Vec<S> = indices.iter().map(|&i| self.values[i]).collect();
        let z = linalg::min_norm_solution(&rows, &targets, S::of(1e-14)).ok_or_else(|| {
            Error::DegenerateGeometry("support points are affinely dependent".into())
        })?;
        let k = self.frame.dim();
        let functional = self.frame_functional(&z[..k], z[k]);

        // the roof must agree with the functional at the simplex barycenter
        let inv = S::one() / S::from_usize(indices.len()).unwrap();
        let mut bary = vec![S::zero(); self.cloud.dim()];
        for &i in &indices {
            for (b, &c) in bary.iter_mut().zip(self.cloud.coords(i)) {
                *b += c * inv;
            }
        }
        let bary_roof = self.roof_eval(&Point::new(bary.clone())?)?.value;
        let bary_err = (bary_roof - functional.evaluate(&bary)).abs();
        let value_scale = self.upper_bound.abs().max(S::one());
        if bary_err > S::of(1e-7) * value_scale {
            return Err(Error::Numerical(format!(
                "flat-set functional misses the barycenter by {bary_err:e}"
            )));
        }

        Ok(FlatSet {
            support,
            support_indices: indices,
            functional,
            barycenter_error: bary_err,
        })
    }

    fn frame_functional(&self, gradient_frame: &[S], offset_frame: S) -> AffineFunctional<S> {
        let gradient = self.frame.lift_gradient(gradient_frame);
        let shift: S = gradient
            .iter()
            .zip(self.frame.origin())
            .map(|(&g, &o)| g * o)
            .sum();
        AffineFunctional {
            gradient,
            offset: offset_frame - shift,
        }
    }

    /// Outward direction at `p`: away from the sample centroid, in frame
    /// coordinates. Deterministic and adequate for the probes this
    /// library runs; it is not the exact boundary normal.
    fn outward_direction(&self, p_frame: &[S]) -> Result<Vec<S>> {
        let n = S::from_usize(self.cloud.len()).unwrap();
        let k = self.frame.dim();
        let mut centroid = vec![S::zero(); k];
        for proj in &self.projected {
            for (c, &u) in centroid.iter_mut().zip(proj) {
                *c += u / n;
            }
        }
        let dir: Vec<S> = p_frame
            .iter()
            .zip(&centroid)
            .map(|(&a, &b)| a - b)
            .collect();
        let norm = dir.iter().map(|&x| x * x).sum::<S>().sqrt();
        if norm <= S::of(1e-12) * self.cloud.scale().max(S::one()) {
            return Err(Error::NotOnBoundary(
                "query coincides with the sample centroid".into(),
            ));
        }
        Ok(dir.into_iter().map(|x| x / norm).collect())
    }

    /// Largest step from `p` along `dir` (frame coordinates) that stays in
    /// the hull; 0 for boundary points.
    fn outward_slack(&self, p_frame: &[S], dir: &[S]) -> Result<S> {
        let k = self.frame.dim();
        let n = self.cloud.len();
        // columns: sample points and −dir; maximize the step s
        let mut rows: Vec<Vec<S>> = (0..k)
            .map(|r| {
                let mut row: Vec<S> = self.projected.iter().map(|q| q[r]).collect();
                row.push(-dir[r]);
                row
            })
            .collect();
        let mut ones = vec![S::one(); n];
        ones.push(S::zero());
        rows.push(ones);
        let mut rhs = p_frame.to_vec();
        rhs.push(S::one());
        let mut objective = vec![S::zero(); n];
        objective.push(-S::one());
        let prog = lp::LinearProgram::new(objective, rows, rhs)?;
        let mut solver = lp::Simplex::new(&prog)?.with_feasibility_tol(S::of(MEMBERSHIP_TOL));
        let sol = solver.solve()?;
        match sol.status {
            LPStatus::Optimal => Ok(-sol.objective),
            LPStatus::Infeasible => Err(Error::Membership {
                residual: sol.objective.to_f64().unwrap_or(f64::NAN),
            }),
            LPStatus::Unbounded => Err(Error::Numerical(
                "outward slack LP reported unbounded".into(),
            )),
        }
    }

    /// Nonvertical supporting functional at a boundary point `p` under the
    /// gradient bound `M`, chosen to minimize the outward-normal
    /// derivative; `None` when no functional with ‖g‖∞ ≤ M exists.
    ///
    /// The search runs in the d-row dual of the constraint system
    /// `g·xᵢ + c ≤ fᵢ, g·p + c = f̂(p), ‖g‖∞ ≤ M`, so a vertical verdict
    /// is a certified unbounded dual ray rather than a timeout.
    pub fn supporting_hyperplane(
        &self,
        p: &Point<S>,
        gradient_bound: S,
    ) -> Result<Option<AffineFunctional<S>>> {
        if gradient_bound <= S::zero() {
            return Err(Error::Unsupported("gradient bound must be positive"));
        }
        let roof_p = self.roof_eval(p)?.value;
        let p_frame = self.frame.project(p.coords());
        let normal = self.outward_direction(&p_frame)?;
        let scale = self.cloud.scale().max(S::one());
        let slack = self.outward_slack(&p_frame, &normal)?;
        if slack > S::of(BOUNDARY_TOL) * scale {
            return Err(Error::NotOnBoundary(format!(
                "query can move {slack:e} outward and stay in the hull"
            )));
        }

        let k = self.frame.dim();
        let n = self.cloud.len();
        // dual columns: (xᵢ − p) per sample, then ±eⱼ box columns
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(k);
        for r in 0..k {
            let mut row: Vec<S> = self.projected.iter().map(|q| q[r] - p_frame[r]).collect();
            for j in 0..k {
                row.push(if j == r { S::one() } else { S::zero() });
            }
            for j in 0..k {
                row.push(if j == r { -S::one() } else { S::zero() });
            }
            rows.push(row);
        }
        let rhs: Vec<S> = normal.iter().map(|&x| -x).collect();
        let mut objective: Vec<S> = self.values.iter().map(|&f| f - roof_p).collect();
        objective.extend(std::iter::repeat(gradient_bound).take(2 * k));
        let prog = lp::LinearProgram::new(objective, rows, rhs)?;
        let mut solver = lp::Simplex::new(&prog)?;
        let sol = solver.solve()?;
        match sol.status {
            LPStatus::Unbounded => Ok(None),
            LPStatus::Infeasible => Err(Error::Numerical(
                "hyperplane dual is infeasible; the box rows should prevent this".into(),
            )),
            LPStatus::Optimal => {
                let g_frame = sol.dual.clone();
                let c_frame =
                    roof_p - g_frame.iter().zip(&p_frame).map(|(&g, &u)| g * u).sum::<S>();
                let functional = self.frame_functional(&g_frame, c_frame);
                // self-check: the functional must minorize f on the samples
                let value_scale = self.upper_bound.abs().max(S::one());
                let tol = S::of(1e-7) * value_scale.max(gradient_bound * scale);
                for i in 0..n {
                    let a = functional.evaluate(self.cloud.coords(i));
                    if a > self.values[i] + tol {
                        return Err(Error::Numerical(format!(
                            "recovered functional exceeds f at sample {i} by {:e}",
                            a - self.values[i]
                        )));
                    }
                }
                Ok(Some(functional))
            }
        }
    }

    /// Smallest convex extension beyond the hull: the max over boundary
    /// samples of their supporting functionals, and the roof inside.
    pub fn outer_extension(
        &self,
        x: &Point<S>,
        boundary_samples: &[Point<S>],
        gradient_bound: S,
    ) -> Result<S> {
        self.check_dim(x.coords())?;
        if self.contains(x.coords())? {
            return Ok(self.roof_eval(x)?.value);
        }
        if boundary_samples.is_empty() {
            return Err(Error::Unsupported(
                "outer extension needs at least one boundary sample",
            ));
        }
        let mut best = S::neg_infinity();
        for q in boundary_samples {
            let functional =
                self.supporting_hyperplane(q, gradient_bound)?
                    .ok_or_else(|| Error::VerticalHyperplane {
                        point: q
                            .coords()
                            .iter()
                            .map(|v| v.to_f64().unwrap_or(f64::NAN))
                            .collect(),
                    })?;
            best = best.max(functional.evaluate(x.coords()));
        }
        Ok(best)
    }
}

/// A roof value together with its optimal Carathéodory decomposition.
#[derive(Debug, Clone)]
pub struct RoofValue<S> {
    pub value: S,
    pub decomposition: ConvexCombination<S>,
    pub query: Point<S>,
}

/// g·x + c.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFunctional<S> {
    pub gradient: Vec<S>,
    pub offset: S,
}

impl<S: Float> AffineFunctional<S> {
    pub fn evaluate(&self, x: &[S]) -> S {
        self.gradient.iter().zip(x).map(|(&g, &v)| g * v).sum::<S>() + self.offset
    }
}

/// Row-major lattice of roof values over the bounding box; `None` marks
/// out-of-hull cells. The last axis varies fastest.
#[derive(Debug, Clone)]
pub struct RoofGrid<S> {
    pub bbox_lo: Vec<S>,
    pub bbox_hi: Vec<S>,
    pub resolution: usize,
    pub dim: usize,
    pub values: Vec<Option<S>>,
}

impl<S: Float> RoofGrid<S> {
    /// Coordinates of a cell by flat index.
    pub fn cell_coords(&self, cell: usize) -> Vec<S> {
        let mut coords = vec![S::zero(); self.dim];
        let mut rem = cell;
        for axis in (0..self.dim).rev() {
            let idx = rem % self.resolution;
            rem /= self.resolution;
            let frac = S::from_usize(idx).unwrap() / S::from_usize(self.resolution - 1).unwrap();
            coords[axis] =
                self.bbox_lo[axis] + (self.bbox_hi[axis] - self.bbox_lo[axis]) * frac;
        }
        coords
    }
}

/// Flat set at a query: the optimal support simplex and the affine
/// functional the roof coincides with there.
#[derive(Debug, Clone)]
pub struct FlatSet<S> {
    pub support: Vec<Point<S>>,
    pub support_indices: Vec<usize>,
    pub functional: AffineFunctional<S>,
    pub barycenter_error: S,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn problem(rows: Vec<Vec<f64>>, values: Vec<f64>) -> SampledConvexProblem<f64> {
        SampledConvexProblem::new(PointCloud::from_rows(rows).unwrap(), values).unwrap()
    }

    fn circle_cloud(n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * (k as f64) / (n as f64);
                vec![th.cos(), th.sin()]
            })
            .collect()
    }

    fn pt(coords: &[f64]) -> Point<f64> {
        Point::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn restriction_identity_on_convex_samples() {
        let rows = circle_cloud(32);
        let values: Vec<f64> = rows.iter().map(|r| r[0] * r[0] + r[1] * r[1]).collect();
        let prob = problem(rows.clone(), values.clone());
        for (i, row) in rows.iter().enumerate() {
            let rv = prob.roof_eval(&pt(row)).unwrap();
            assert!(
                (rv.value - values[i]).abs() <= 1e-8,
                "sample {i}: {} vs {}",
                rv.value,
                values[i]
            );
            assert!(rv.decomposition.support_size() <= 3);
        }
    }

    #[test]
    fn membership_error_outside_hull() {
        let rows = circle_cloud(16);
        let values = vec![1.0; 16];
        let prob = problem(rows, values);
        match prob.roof_eval(&pt(&[2.0, 0.0])) {
            Err(Error::Membership { .. }) => {}
            other => panic!("expected membership error, got {other:?}"),
        }
    }

    #[test]
    fn grid_interpolates_in_1d() {
        let prob = problem(vec![vec![0.0], vec![1.0]], vec![0.0, 1.0]);
        let grid = prob.roof_grid(5).unwrap();
        let got: Vec<f64> = grid.values.iter().map(|v| v.unwrap()).collect();
        for (g, want) in got.iter().zip([0.0, 0.25, 0.5, 0.75, 1.0]) {
            assert!((g - want).abs() < 1e-9);
        }
    }

    #[test]
    fn parallel_grid_matches_serial() {
        let rows = circle_cloud(24);
        let values: Vec<f64> = rows.iter().map(|r| r[0] * r[0]).collect();
        let prob = problem(rows, values);
        let serial = prob.roof_grid(9).unwrap();
        for jobs in [2, 3, 7] {
            let par = prob.roof_grid_parallel(9, jobs).unwrap();
            assert_eq!(serial.values, par.values, "jobs {jobs}");
        }
    }

    #[test]
    fn midpoint_convexity_and_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut rows = circle_cloud(24);
        rows.push(vec![0.0, 0.0]);
        let values: Vec<f64> = (0..rows.len()).map(|_| rng.gen_range(0.0..2.0)).collect();
        let prob = problem(rows.clone(), values);
        for _ in 0..25 {
            let a = rng.gen_range(0.0..0.9);
            let th1: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let b = rng.gen_range(0.0..0.9);
            let th2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = [a * th1.cos(), a * th1.sin()];
            let y = [b * th2.cos(), b * th2.sin()];
            let mid = [(x[0] + y[0]) / 2.0, (x[1] + y[1]) / 2.0];
            let fx = prob.roof_eval(&pt(&x)).unwrap().value;
            let fy = prob.roof_eval(&pt(&y)).unwrap().value;
            let fm = prob.roof_eval(&pt(&mid)).unwrap().value;
            assert!(fm <= (fx + fy) / 2.0 + 1e-8);
            assert!(fm >= prob.lower_bound() - 1e-10 && fm <= prob.upper_bound() + 1e-10);
        }
    }

    #[test]
    fn lower_functions_have_lower_roofs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows = circle_cloud(20);
        let values: Vec<f64> = rows.iter().map(|r| (r[0] + 1.2) * (r[0] + 1.2)).collect();
        let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
        // h = a·f + (1−a)·min f is convex on samples and h ≤ f
        let a = 0.6;
        let lower: Vec<f64> = values.iter().map(|v| a * v + (1.0 - a) * vmin).collect();
        let prob_f = problem(rows.clone(), values);
        let prob_h = problem(rows.clone(), lower);
        for _ in 0..20 {
            let r = rng.gen_range(0.0..0.95);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = pt(&[r * th.cos(), r * th.sin()]);
            let rf = prob_f.roof_eval(&x).unwrap().value;
            let rh = prob_h.roof_eval(&x).unwrap().value;
            assert!(rh <= rf + 1e-9);
        }
    }

    #[test]
    fn flat_set_matches_roof_on_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rows = circle_cloud(40);
        let values: Vec<f64> = rows
            .iter()
            .map(|r| 1.0 - (1.0 - r[1].powi(4)).sqrt())
            .collect();
        let prob = problem(rows, values);
        for _ in 0..10 {
            let r = rng.gen_range(0.0..0.8);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = pt(&[r * th.cos(), r * th.sin()]);
            let flat = prob.flat_set(&x).unwrap();
            assert!(flat.barycenter_error <= 1e-8);
            // random interior probes of the support simplex
            for _ in 0..10 {
                let mut w: Vec<f64> = (0..flat.support.len())
                    .map(|_| rng.gen_range(0.05..1.0))
                    .collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= s);
                let mut probe = vec![0.0; 2];
                for (wk, p) in w.iter().zip(&flat.support) {
                    for (pj, &cj) in probe.iter_mut().zip(p.coords()) {
                        *pj += wk * cj;
                    }
                }
                let roof = prob.roof_eval(&pt(&probe)).unwrap().value;
                let aff = flat.functional.evaluate(&probe);
                assert!(
                    (roof - aff).abs() <= 1e-8,
                    "roof {roof} vs functional {aff}"
                );
            }
        }
    }

    #[test]
    fn constant_function_has_flat_hyperplane() {
        let rows = circle_cloud(32);
        let prob = problem(rows.clone(), vec![1.0; 32]);
        let p = pt(&rows[0]);
        let functional = prob.supporting_hyperplane(&p, 10.0).unwrap().unwrap();
        assert!(functional.gradient.iter().all(|g| g.abs() < 1e-7));
        assert!((functional.offset - 1.0).abs() < 1e-7);
    }

    #[test]
    fn interior_point_is_not_boundary() {
        let rows = circle_cloud(32);
        let prob = problem(rows, vec![1.0; 32]);
        match prob.supporting_hyperplane(&pt(&[0.3, 0.0]), 10.0) {
            Err(Error::NotOnBoundary(_)) => {}
            other => panic!("expected boundary error, got {other:?}"),
        }
    }

    #[test]
    fn outer_extension_of_constant_and_linear() {
        let rows = circle_cloud(64);
        let ones = problem(rows.clone(), vec![1.0; 64]);
        let boundary: Vec<Point<f64>> = rows.iter().map(|r| pt(r)).collect();
        let v = ones
            .outer_extension(&pt(&[2.0, 0.0]), &boundary, 100.0)
            .unwrap();
        assert!((v - 1.0).abs() < 1e-7);

        let linear = problem(rows.clone(), rows.iter().map(|r| r[0]).collect());
        let v = linear
            .outer_extension(&pt(&[2.0, 0.0]), &boundary, 100.0)
            .unwrap();
        assert!((v - 2.0).abs() < 1e-6, "got {v}");
        // inside the hull the extension is the roof itself
        let v = linear
            .outer_extension(&pt(&[0.25, 0.0]), &boundary, 100.0)
            .unwrap();
        assert!((v - 0.25).abs() < 1e-8);
    }

    #[test]
    fn decomposition_reconstructs_query() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let values: Vec<f64> = (0..60).map(|_| rng.gen_range(0.0..1.0)).collect();
        let prob = problem(rows.clone(), values.clone());
        for _ in 0..15 {
            let mut w: Vec<f64> = (0..60).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= s);
            let q: Vec<f64> = (0..4)
                .map(|j| (0..60).map(|i| w[i] * rows[i][j]).sum())
                .collect();
            let rv = prob.roof_eval(&pt(&q)).unwrap();
            assert!(rv.decomposition.support_size() <= 5);
            let back = rv.decomposition.point(prob.cloud()).unwrap();
            let scale = prob.cloud().scale();
            for (a, b) in back.iter().zip(&q) {
                assert!((a - b).abs() <= 1e-8 * scale);
            }
            let recombined = rv.decomposition.value(&values);
            assert!((recombined - rv.value).abs() <= 1e-8);
        }
    }
}

//! Point-cloud primitives, convex/affine hull queries, and constructive
//! Carathéodory reduction.

mod facets;

pub use facets::Facet;

use crate::error::Error;
use crate::linalg;
use crate::lp::{self, LPStatus};
use crate::scalar::Float;
use crate::Result;

/// Tolerance on convex-combination weights and their sum.
pub const WEIGHT_TOL: f64 = 1e-9;
/// Relative tolerance of the rank-revealing factorization.
pub const RANK_TOL: f64 = 1e-10;
/// Weights below this are dropped from supports.
const SUPPORT_TOL: f64 = 1e-12;

/// A point of ℝᵈ with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    coords: Vec<S>,
}

impl<S: Float> Point<S> {
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "point coordinates",
            });
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }
}

impl<S: Float> TryFrom<Vec<S>> for Point<S> {
    type Error = Error;
    fn try_from(v: Vec<S>) -> Result<Self> {
        Point::new(v)
    }
}

/// An index-stable, immutable family of points sharing one dimension.
#[derive(Debug, Clone)]
pub struct PointCloud<S> {
    points: Vec<Point<S>>,
    dim: usize,
    bbox_lo: Vec<S>,
    bbox_hi: Vec<S>,
}

impl<S: Float> PointCloud<S> {
    pub fn new(points: Vec<Point<S>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyCloud);
        };
        let dim = first.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        let mut lo = points[0].coords.clone();
        let mut hi = points[0].coords.clone();
        for p in &points {
            for (j, &x) in p.coords.iter().enumerate() {
                lo[j] = lo[j].min(x);
                hi[j] = hi[j].max(x);
            }
        }
        Ok(Self {
            points,
            dim,
            bbox_lo: lo,
            bbox_hi: hi,
        })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        Self::new(rows.into_iter().map(Point::new).collect::<Result<_>>()?)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &Point<S> {
        &self.points[i]
    }

    pub fn coords(&self, i: usize) -> &[S] {
        self.points[i].coords()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point<S>> {
        self.points.iter()
    }

    pub fn bbox(&self) -> (&[S], &[S]) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    /// Bounding-box diagonal; the length scale all relative tolerances
    /// refer to.
    pub fn scale(&self) -> S {
        self.bbox_lo
            .iter()
            .zip(&self.bbox_hi)
            .map(|(&l, &h)| (h - l) * (h - l))
            .sum::<S>()
            .sqrt()
    }
}

/// Sparse convex weights over cloud indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCombination<S> {
    entries: Vec<(usize, S)>,
}

impl<S: Float> ConvexCombination<S> {
    pub fn new(mut entries: Vec<(usize, S)>) -> Result<Self> {
        entries.sort_by_key(|&(i, _)| i);
        let tol = S::of(WEIGHT_TOL);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidCombination(format!(
                    "duplicate index {}",
                    w[0].0
                )));
            }
        }
        let mut sum = S::zero();
        for &(i, w) in &entries {
            if !w.is_finite() || w < -tol {
                return Err(Error::InvalidCombination(format!(
                    "weight {w} at index {i} out of range"
                )));
            }
            sum += w;
        }
        if (sum - S::one()).abs() > tol {
            return Err(Error::InvalidCombination(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { entries })
    }

    /// The single-point combination `{index: 1}`.
    pub fn dirac(index: usize) -> Self {
        Self {
            entries: vec![(index, S::one())],
        }
    }

    pub fn entries(&self) -> &[(usize, S)] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries
            .iter()
            .filter(|&&(_, w)| w.abs() > S::of(SUPPORT_TOL))
            .count()
    }

    /// The represented point Σ tᵢ xᵢ.
    pub fn point(&self, cloud: &PointCloud<S>) -> Result<Vec<S>> {
        let mut acc = vec![S::zero(); cloud.dim()];
        for &(i, w) in &self.entries {
            if i >= cloud.len() {
                return Err(Error::InvalidCombination(format!(
                    "index {i} out of bounds for cloud of {}",
                    cloud.len()
                )));
            }
            for (a, &x) in acc.iter_mut().zip(cloud.coords(i)) {
                *a += w * x;
            }
        }
        Ok(acc)
    }

    /// The combined value Σ tᵢ vᵢ.
    pub fn value(&self, values: &[S]) -> S {
        self.entries.iter().map(|&(i, w)| w * values[i]).sum()
    }

    /// Clamp roundoff negatives to zero, drop dead entries, renormalize.
    pub fn cleaned(&self) -> Self {
        let mut entries: Vec<(usize, S)> = self
            .entries
            .iter()
            .filter(|&&(_, w)| w > S::of(SUPPORT_TOL))
            .map(|&(i, w)| (i, w.max(S::zero())))
            .collect();
        if entries.is_empty() {
            // all weight rounded away; keep the largest original entry
            let &(i, _) = self
                .entries
                .iter()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .expect("combinations are nonempty");
            entries.push((i, S::one()));
        }
        let sum: S = entries.iter().map(|&(_, w)| w).sum();
        for e in &mut entries {
            e.1 = e.1 / sum;
        }
        Self { entries }
    }
}

/// Orthonormal basis of the affine hull of a cloud; degenerate clouds are
/// handled by working in these coordinates.
#[derive(Debug, Clone)]
pub struct AffineFrame<S> {
    origin: Vec<S>,
    /// `dim` orthonormal rows of length `ambient_dim`.
    basis: Vec<Vec<S>>,
    ambient_dim: usize,
}

impl<S: Float> AffineFrame<S> {
    /// Rank-revealing fit by modified Gram–Schmidt with greedy pivoting.
    pub fn fit(cloud: &PointCloud<S>) -> Self {
        let d = cloud.dim();
        let origin = cloud.coords(0).to_vec();
        let n = cloud.len();
        let mut residuals: Vec<Vec<S>> = (0..n)
            .map(|i| {
                cloud
                    .coords(i)
                    .iter()
                    .zip(&origin)
                    .map(|(&x, &o)| x - o)
                    .collect()
            })
            .collect();
        let norm = |v: &[S]| v.iter().map(|&x| x * x).sum::<S>().sqrt();
        let scale = residuals
            .iter()
            .map(|r| norm(r))
            .fold(S::zero(), |a, b| a.max(b));
        let tol = S::of(RANK_TOL) * scale.max(S::one());
        let mut basis: Vec<Vec<S>> = Vec::new();
        while basis.len() < d {
            let (best, best_norm) = residuals
                .iter()
                .enumerate()
                .map(|(i, r)| (i, norm(r)))
                .fold((0, S::zero()), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
            if best_norm <= tol {
                break;
            }
            let b: Vec<S> = residuals[best].iter().map(|&x| x / best_norm).collect();
            for r in residuals.iter_mut() {
                let proj: S = r.iter().zip(&b).map(|(&x, &y)| x * y).sum();
                for (xr, &xb) in r.iter_mut().zip(&b) {
                    *xr -= proj * xb;
                }
            }
            basis.push(b);
        }
        Self {
            origin,
            basis,
            ambient_dim: d,
        }
    }

    /// Affine dimension of the fitted cloud.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn origin(&self) -> &[S] {
        &self.origin
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    /// Coordinates of `x` in the frame.
    pub fn project(&self, x: &[S]) -> Vec<S> {
        self.basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(x.iter().zip(&self.origin))
                    .map(|(&bj, (&xj, &oj))| bj * (xj - oj))
                    .sum()
            })
            .collect()
    }

    /// Ambient point of frame coordinates `u`.
    pub fn lift(&self, u: &[S]) -> Vec<S> {
        let mut x = self.origin.clone();
        for (b, &uj) in self.basis.iter().zip(u) {
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi += uj * bi;
            }
        }
        x
    }

    /// ∞-norm of the component of `x` off the affine hull.
    pub fn residual(&self, x: &[S]) -> S {
        let u = self.project(x);
        let back = self.lift(&u);
        x.iter()
            .zip(&back)
            .map(|(&a, &b)| (a - b).abs())
            .fold(S::zero(), |m, v| m.max(v))
    }

    /// Map a gradient expressed in frame coordinates back to ambient space.
    pub fn lift_gradient(&self, g: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.ambient_dim];
        for (b, &gj) in self.basis.iter().zip(g) {
            for (oi, &bi) in out.iter_mut().zip(b) {
                *oi += gj * bi;
            }
        }
        out
    }
}

/// Extreme points, affine dimension, and (for d ≤ 3) bounding facets of a
/// cloud's convex hull.
#[derive(Debug, Clone)]
pub struct Hull<S> {
    pub vertex_indices: Vec<usize>,
    pub affine_dim: usize,
    /// Populated iff the ambient dimension is at most 3.
    pub facets: Option<Vec<Facet<S>>>,
    frame: AffineFrame<S>,
}

impl<S: Float> Hull<S> {
    pub fn frame(&self) -> &AffineFrame<S> {
        &self.frame
    }

    /// Facet-based membership test; `None` when facets are unavailable.
    pub fn contains_by_facets(&self, x: &[S], tol: S) -> Option<bool> {
        let facets = self.facets.as_ref()?;
        if self.frame.residual(x) > tol {
            return Some(false);
        }
        Some(facets.iter().all(|f| {
            let v: S = f.normal.iter().zip(x).map(|(&n, &xj)| n * xj).sum();
            v <= f.offset + tol
        }))
    }
}

/// Rank of the difference set {xᵢ − x₀}.
pub fn affine_hull_dim<S: Float>(cloud: &PointCloud<S>) -> usize {
    AffineFrame::fit(cloud).dim()
}

/// Solve the envelope LP: minimize Σ tᵢvᵢ over decompositions of
/// `target` (frame coordinates) in the projected columns.
pub(crate) fn envelope_solve<S: Float>(
    projected: &[Vec<S>],
    values: &[S],
    target: &[S],
    feasibility_tol: S,
) -> Result<lp::LPSolution<S>> {
    let k = target.len();
    let n = projected.len();
    let mut rows: Vec<Vec<S>> = (0..k)
        .map(|r| projected.iter().map(|p| p[r]).collect())
        .collect();
    rows.push(vec![S::one(); n]);
    let mut rhs = target.to_vec();
    rhs.push(S::one());
    let prog = lp::LinearProgram::new(values.to_vec(), rows, rhs)?;
    let mut solver = lp::Simplex::new(&prog)?.with_feasibility_tol(feasibility_tol);
    solver.solve()
}

/// Membership of `target` (frame coordinates) in the convex hull of the
/// projected columns. Returns the witnessing combination when feasible;
/// `allowed` maps LP columns back to cloud indices.
fn membership<S: Float>(
    projected: &[Vec<S>],
    allowed: &[usize],
    target: &[S],
    feasibility_tol: S,
) -> Result<Option<ConvexCombination<S>>> {
    let zeros = vec![S::zero(); projected.len()];
    let sol = envelope_solve(projected, &zeros, target, feasibility_tol)?;
    match sol.status {
        LPStatus::Optimal => {
            let entries: Vec<(usize, S)> = sol
                .t
                .iter()
                .enumerate()
                .filter(|&(_, &w)| w > S::of(SUPPORT_TOL))
                .map(|(j, &w)| (allowed[j], w))
                .collect();
            Ok(Some(
                ConvexCombination::new(entries)
                    .unwrap_or_else(|_| ConvexCombination::dirac(allowed[0]))
                    .cleaned(),
            ))
        }
        LPStatus::Infeasible => Ok(None),
        LPStatus::Unbounded => Err(Error::Numerical(
            "feasibility problem reported unbounded".into(),
        )),
    }
}

/// Compute the convex hull: vertex set by per-point LP membership tests,
/// facet enumeration only for ambient dimension ≤ 3.
pub fn convex_hull<S: Float>(cloud: &PointCloud<S>) -> Result<Hull<S>> {
    let frame = AffineFrame::fit(cloud);
    let k = frame.dim();
    let scale = cloud.scale().max(S::one());
    let dup_tol = S::of(1e-9) * scale;

    // collapse duplicates so a twin point cannot mask an extreme point
    let mut reps: Vec<usize> = Vec::new();
    let mut rep_of: Vec<usize> = vec![0; cloud.len()];
    'points: for i in 0..cloud.len() {
        for &r in &reps {
            let close = cloud
                .coords(i)
                .iter()
                .zip(cloud.coords(r))
                .all(|(&a, &b)| (a - b).abs() <= dup_tol);
            if close {
                rep_of[i] = r;
                continue 'points;
            }
        }
        rep_of[i] = i;
        reps.push(i);
    }

    let projected: Vec<Vec<S>> = reps
        .iter()
        .map(|&i| frame.project(cloud.coords(i)))
        .collect();

    let mut vertex_indices: Vec<usize> = Vec::new();
    if reps.len() == 1 {
        vertex_indices.push(reps[0]);
    } else {
        for (pos, &i) in reps.iter().enumerate() {
            let others: Vec<Vec<S>> = projected
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, p)| p.clone())
                .collect();
            let other_idx: Vec<usize> = reps
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != pos)
                .map(|(_, &r)| r)
                .collect();
            if membership(&others, &other_idx, &projected[pos], S::of(lp::FEASIBILITY_TOL))?
                .is_none()
            {
                vertex_indices.push(i);
            }
        }
    }
    vertex_indices.sort_unstable();

    let facets = if cloud.dim() <= 3 {
        Some(facets::enumerate(cloud, &vertex_indices, &frame)?)
    } else {
        None
    };

    Ok(Hull {
        vertex_indices,
        affine_dim: k,
        facets,
        frame,
    })
}

/// Membership of an arbitrary point in co(cloud), by feasibility LP in
/// the cloud's affine frame.
pub fn hull_membership<S: Float>(
    cloud: &PointCloud<S>,
    frame: &AffineFrame<S>,
    x: &[S],
    feasibility_tol: S,
) -> Result<Option<ConvexCombination<S>>> {
    if x.len() != cloud.dim() {
        return Err(Error::DimensionMismatch {
            expected: cloud.dim(),
            got: x.len(),
        });
    }
    let scale = cloud.scale().max(S::one());
    if frame.residual(x) > feasibility_tol * scale {
        return Ok(None);
    }
    let projected: Vec<Vec<S>> = (0..cloud.len())
        .map(|i| frame.project(cloud.coords(i)))
        .collect();
    let allowed: Vec<usize> = (0..cloud.len()).collect();
    membership(&projected, &allowed, &frame.project(x), feasibility_tol)
}

/// Constructive Carathéodory reduction: shrink a combination's support to
/// at most k+1 points (k = affine dimension) while preserving the
/// represented point.
///
/// While the support is too large, a null vector μ of the lifted support
/// matrix satisfies Σμᵢxᵢ = 0 and Σμᵢ = 0; stepping t ← t − αμ with the
/// largest α keeping t ≥ 0 zeroes at least one weight.
pub fn caratheodory_reduce<S: Float>(
    cloud: &PointCloud<S>,
    comb: &ConvexCombination<S>,
) -> Result<ConvexCombination<S>> {
    let frame = AffineFrame::fit(cloud);
    let k = frame.dim();
    let target = comb.point(cloud)?;
    let scale = cloud.scale().max(S::one());

    let mut entries: Vec<(usize, S)> = comb.cleaned().entries().to_vec();
    while entries.len() > k + 1 {
        let lifted: Vec<Vec<S>> = {
            let mut rows: Vec<Vec<S>> = (0..k)
                .map(|r| {
                    entries
                        .iter()
                        .map(|&(i, _)| frame.project(cloud.coords(i))[r])
                        .collect()
                })
                .collect();
            rows.push(vec![S::one(); entries.len()]);
            rows
        };
        let mu = linalg::null_vector(lifted.clone(), S::of(1e-13) * scale).ok_or_else(|| {
            Error::DegenerateGeometry(
                "null-space solve for the support matrix fell below tolerance".into(),
            )
        })?;
        let mu_norm = mu.iter().fold(S::zero(), |m, &x| m.max(x.abs()));
        if mu_norm <= S::of(1e-13) {
            return Err(Error::DegenerateGeometry(
                "null vector of the support matrix is numerically zero".into(),
            ));
        }
        let mu: Vec<S> = mu.iter().map(|&x| x / mu_norm).collect();
        let res = lifted
            .iter()
            .map(|row| row.iter().zip(&mu).map(|(&a, &m)| a * m).sum::<S>().abs())
            .fold(S::zero(), |m, v| m.max(v));
        if res > S::of(1e-8) * scale {
            return Err(Error::DegenerateGeometry(format!(
                "null vector residual {res:e} too large"
            )));
        }
        // flip so at least one μᵢ is positive, then take the largest step
        let mu: Vec<S> = if mu.iter().all(|&m| m <= S::zero()) {
            mu.iter().map(|&m| -m).collect()
        } else {
            mu
        };
        let mut alpha = S::infinity();
        let mut kill = usize::MAX;
        for (j, (&(_, w), &m)) in entries.iter().zip(&mu).enumerate() {
            if m > S::of(1e-13) {
                let a = w / m;
                if a < alpha {
                    alpha = a;
                    kill = j;
                }
            }
        }
        if kill == usize::MAX {
            return Err(Error::DegenerateGeometry(
                "no positive component in null vector".into(),
            ));
        }
        for (e, &m) in entries.iter_mut().zip(&mu) {
            e.1 = e.1 - alpha * m;
        }
        entries[kill].1 = S::zero();
        entries.retain(|&(_, w)| w > S::of(SUPPORT_TOL));
    }

    let reduced = ConvexCombination::new(entries)?.cleaned();
    let back = reduced.point(cloud)?;
    let err = back
        .iter()
        .zip(&target)
        .map(|(&a, &b)| (a - b).abs())
        .fold(S::zero(), |m, v| m.max(v));
    if err > S::of(1e-9) * scale {
        return Err(Error::DegenerateGeometry(format!(
            "reduction drifted from the represented point by {err:e}"
        )));
    }
    Ok(reduced)
}

/// Witness of a convexity failure: a sample whose envelope value is
/// cheaper than its own.
#[derive(Debug, Clone)]
pub struct ConvexityWitness<S> {
    pub index: usize,
    pub cheaper_value: S,
    pub decomposition: ConvexCombination<S>,
}

#[derive(Debug, Clone)]
pub struct ConvexityReport<S> {
    pub convex: bool,
    pub witness: Option<ConvexityWitness<S>>,
}

/// A sampled function is convex on its samples iff the envelope over the
/// full cloud returns each sample's own value.
pub fn is_convex_on_samples<S: Float>(
    cloud: &PointCloud<S>,
    values: &[S],
) -> Result<ConvexityReport<S>> {
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
    let frame = AffineFrame::fit(cloud);
    let projected: Vec<Vec<S>> = (0..cloud.len())
        .map(|i| frame.project(cloud.coords(i)))
        .collect();
    let value_scale = values
        .iter()
        .fold(S::one(), |m, &v| m.max(v.abs()));
    let tol = S::of(1e-8) * value_scale;
    for i in 0..cloud.len() {
        let sol = envelope_solve(&projected, values, &projected[i], S::of(lp::FEASIBILITY_TOL))?;
        if !sol.is_optimal() {
            return Err(Error::Numerical(format!(
                "envelope LP at sample {i} did not reach optimality"
            )));
        }
        if sol.objective < values[i] - tol {
            let entries: Vec<(usize, S)> = sol
                .t
                .iter()
                .enumerate()
                .filter(|&(_, &w)| w > S::of(SUPPORT_TOL))
                .collect::<Vec<_>>()
                .into_iter()
                .map(|(j, &w)| (j, w))
                .collect();
            let witness = ConvexityWitness {
                index: i,
                cheaper_value: sol.objective,
                decomposition: ConvexCombination::new(entries)?.cleaned(),
            };
            return Ok(ConvexityReport {
                convex: false,
                witness: Some(witness),
            });
        }
    }
    Ok(ConvexityReport {
        convex: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn cloud(rows: &[&[f64]]) -> PointCloud<f64> {
        PointCloud::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn square_hull_excludes_center() {
        let c = cloud(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.5, 0.5],
        ]);
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.vertex_indices, vec![0, 1, 2, 3]);
        assert_eq!(hull.affine_dim, 2);
        let facets = hull.facets.as_ref().unwrap();
        assert_eq!(facets.len(), 4);
    }

    #[test]
    fn single_point_hull() {
        let c = cloud(&[&[2.0, -1.0, 0.5]]);
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.vertex_indices, vec![0]);
        assert_eq!(hull.affine_dim, 0);
        assert!(hull.facets.as_ref().unwrap().is_empty());
    }

    #[test]
    fn circle_points_are_the_vertices() {
        // 100 boundary points and 50 interior points: the construction
        // fixes the expected vertex set.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut rows: Vec<Vec<f64>> = (0..100)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64) / 100.0;
                vec![th.cos(), th.sin()]
            })
            .collect();
        for _ in 0..50 {
            let r: f64 = rng.gen_range(0.0..0.8);
            let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            rows.push(vec![r * th.cos(), r * th.sin()]);
        }
        let c = PointCloud::from_rows(rows).unwrap();
        let hull = convex_hull(&c).unwrap();
        assert_eq!(hull.vertex_indices, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn hull_is_idempotent_on_its_vertices() {
        let c = cloud(&[
            &[0.0, 0.0],
            &[2.0, 0.0],
            &[2.0, 2.0],
            &[0.0, 2.0],
            &[1.0, 1.0],
            &[0.5, 1.7],
        ]);
        let hull = convex_hull(&c).unwrap();
        let verts = PointCloud::new(
            hull.vertex_indices
                .iter()
                .map(|&i| c.point(i).clone())
                .collect(),
        )
        .unwrap();
        let again = convex_hull(&verts).unwrap();
        assert_eq!(again.vertex_indices.len(), hull.vertex_indices.len());
        assert_eq!(again.vertex_indices, (0..verts.len()).collect::<Vec<_>>());
    }

    #[test]
    fn affine_dims() {
        let collinear = cloud(&[&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0], &[2.0, 2.0, 2.0]]);
        assert_eq!(affine_hull_dim(&collinear), 1);
        let square = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        assert_eq!(affine_hull_dim(&square), 2);
    }

    #[test]
    fn caratheodory_square_center() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]);
        let comb = ConvexCombination::new(vec![(0, 0.25), (1, 0.25), (2, 0.25), (3, 0.25)]).unwrap();
        let red = caratheodory_reduce(&c, &comb).unwrap();
        assert!(red.support_size() <= 3);
        let p = red.point(&c).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-9 && (p[1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn caratheodory_small_support_unchanged() {
        let c = cloud(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let comb = ConvexCombination::new(vec![(0, 0.2), (1, 0.3), (2, 0.5)]).unwrap();
        let red = caratheodory_reduce(&c, &comb).unwrap();
        assert_eq!(red.entries(), comb.entries());
    }

    #[test]
    fn caratheodory_drops_random_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let d = 6;
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let c = PointCloud::from_rows(rows).unwrap();
        let mut w: Vec<f64> = (0..50).map(|_| rng.gen_range(0.01..1.0)).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let comb = ConvexCombination::new((0..50).map(|i| (i, w[i])).collect()).unwrap();
        let target = comb.point(&c).unwrap();
        let red = caratheodory_reduce(&c, &comb).unwrap();
        assert!(red.support_size() <= d + 1, "support {}", red.support_size());
        let p = red.point(&c).unwrap();
        for (a, b) in p.iter().zip(&target) {
            assert!((a - b).abs() <= 1e-9);
        }
        let sum: f64 = red.entries().iter().map(|&(_, w)| w).sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(red.entries().iter().all(|&(_, w)| w >= 0.0));
    }

    #[test]
    fn convexity_of_norm_squared() {
        let mut rows: Vec<Vec<f64>> = (0..24)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64) / 24.0;
                vec![th.cos(), th.sin()]
            })
            .collect();
        rows.push(vec![0.0, 0.0]);
        let c = PointCloud::from_rows(rows).unwrap();
        let values: Vec<f64> = (0..c.len())
            .map(|i| c.coords(i).iter().map(|x| x * x).sum())
            .collect();
        let report = is_convex_on_samples(&c, &values).unwrap();
        assert!(report.convex);
    }

    #[test]
    fn convexity_fails_at_cheap_center() {
        let c = cloud(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.5, 0.5],
        ]);
        let values = vec![1.0, 1.0, 1.0, 1.0, 0.0];
        // value 1 at corners, 0 at center: convex
        assert!(is_convex_on_samples(&c, &values).unwrap().convex);
        // value 1 at corners... and the reversed case: 0 corners, 1 center
        let values = vec![0.0, 0.0, 0.0, 0.0, 1.0];
        let report = is_convex_on_samples(&c, &values).unwrap();
        assert!(!report.convex);
        let w = report.witness.unwrap();
        assert_eq!(w.index, 4);
        assert!(w.cheaper_value < 1e-9);
    }

    #[test]
    fn membership_duality_in_low_dim() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &d in &[2usize, 3] {
            let rows: Vec<Vec<f64>> = (0..20)
                .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let c = PointCloud::from_rows(rows).unwrap();
            let hull = convex_hull(&c).unwrap();
            let frame = AffineFrame::fit(&c);
            for _ in 0..20 {
                // random convex combination: inside by construction
                let mut w: Vec<f64> = (0..c.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|x| *x /= s);
                let x: Vec<f64> = (0..d)
                    .map(|j| (0..c.len()).map(|i| w[i] * c.coords(i)[j]).sum())
                    .collect();
                let by_lp = hull_membership(&c, &frame, &x, 1e-9).unwrap().is_some();
                let by_facets = hull.contains_by_facets(&x, 1e-7).unwrap();
                assert!(by_lp && by_facets);
                // push far outside through a vertex
                let v = c.coords(hull.vertex_indices[0]);
                let out: Vec<f64> = v.iter().zip(&x).map(|(&a, &b)| a + 2.0 * (a - b)).collect();
                let by_lp = hull_membership(&c, &frame, &out, 1e-9).unwrap().is_some();
                let by_facets = hull.contains_by_facets(&out, 1e-7).unwrap();
                assert!(!by_lp && !by_facets);
            }
        }
    }
}

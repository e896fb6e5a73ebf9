//! Built-in example problems: cylinders with punctures, slanted-cut
//! cylinders, quartic discs, and random strictly convex bodies — each
//! with an analytic envelope oracle where one exists.
//!
//! The samplers force-include every analytically important point (segment
//! endpoints at probe heights, puncture points, axis crossings) at every
//! resolution, because the exact envelope values depend on those points
//! being available to the LP.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::geometry::{Point, PointCloud};
use crate::roof::SampledConvexProblem;
use crate::scalar::Float;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleName {
    /// Two parallel unit circles valued 1 plus one puncture point valued
    /// 0 on the cylinder shell; the roof jumps at the puncture.
    TomatoCan,
    /// Closure of a punctured circle valued 1 plus two outside points
    /// valued 0; the closure data fails to be convex.
    NonclosedExtreme,
    /// Two shifted circles valued 1 and a transverse circle valued 0 in
    /// ℝ⁴; restricting to the supporting hyperplane w = 0 reproduces the
    /// punctured-cylinder jump.
    Combined4d,
    /// Slanted-cut cylinder surface valued 1 plus a puncture point valued
    /// 0; no convex extension is continuous at the puncture.
    PuncturedNoExtension,
    /// Boundary of x⁴+y⁴ ≤ 1 with f = 1−√(1−y⁴); the envelope equals the
    /// same formula and its slope blows up at (0, ±1).
    PotatoChip,
    /// Unit circle with f = (x+1)x²; the envelope is C¹ but not C² along
    /// x = 0.
    NoC2,
    /// Random smooth strictly convex body; any boundary function is
    /// convex there.
    StrictlyConvexRandom,
}

pub const ALL_EXAMPLES: [ExampleName; 7] = [
    ExampleName::TomatoCan,
    ExampleName::NonclosedExtreme,
    ExampleName::Combined4d,
    ExampleName::PuncturedNoExtension,
    ExampleName::PotatoChip,
    ExampleName::NoC2,
    ExampleName::StrictlyConvexRandom,
];

impl ExampleName {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::TomatoCan => "tomato_can",
            Self::NonclosedExtreme => "nonclosed_extreme",
            Self::Combined4d => "combined_4d",
            Self::PuncturedNoExtension => "punctured_no_extension",
            Self::PotatoChip => "potato_chip",
            Self::NoC2 => "no_c2",
            Self::StrictlyConvexRandom => "strictly_convex_random",
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL_EXAMPLES
            .iter()
            .find(|n| n.as_str() == s)
            .copied()
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// Oracle signature: `Some(roof value)` where a closed form is known,
/// `None` elsewhere (outside the hull, or regions without a formula).
pub type Oracle<S> = Box<dyn Fn(&[S]) -> Option<S> + Send + Sync>;

/// Everything needed to regenerate and check an example.
pub struct ExampleSpec<S> {
    pub name: ExampleName,
    pub dimension: usize,
    pub min_resolution: usize,
    pub sampler: Box<dyn Fn(usize) -> Result<(PointCloud<S>, Vec<S>)> + Send + Sync>,
    pub oracle: Option<Oracle<S>>,
    pub singular_points: Vec<Point<S>>,
    pub notes: String,
}

impl<S: Float> ExampleSpec<S> {
    pub fn oracle_at(&self, x: &[S]) -> Option<S> {
        self.oracle.as_ref().and_then(|o| o(x))
    }
}

/// Build a registered example at resolution `n`. The seed only matters
/// for the random family.
pub fn make_example<S: Float>(
    name: ExampleName,
    n: usize,
    seed: u64,
) -> Result<(SampledConvexProblem<S>, ExampleSpec<S>)> {
    let spec = example_spec::<S>(name, seed);
    if n < spec.min_resolution {
        return Err(Error::ResolutionTooLow {
            name: name.to_string(),
            got: n,
            min: spec.min_resolution,
        });
    }
    let (cloud, values) = (spec.sampler)(n)?;
    let problem = SampledConvexProblem::new(cloud, values)?;
    Ok((problem, spec))
}

pub fn make_example_by_name<S: Float>(
    name: &str,
    n: usize,
    seed: u64,
) -> Result<(SampledConvexProblem<S>, ExampleSpec<S>)> {
    make_example(ExampleName::from_str(name)?, n, seed)
}

/// Metadata and sampler for `name` without building the problem.
pub fn example_spec<S: Float>(name: ExampleName, seed: u64) -> ExampleSpec<S> {
    match name {
        ExampleName::TomatoCan => ExampleSpec {
            name,
            dimension: 3,
            min_resolution: 16,
            sampler: Box::new(|n| tomato_can(n)),
            oracle: Some(Box::new(|x| punctured_cylinder_oracle(x, 0))),
            singular_points: vec![point(&[0.0, 0.0, 1.0])],
            notes: "two unit circles at x = ±1 valued 1 plus the shell point (0,0,1) \
                    valued 0; the envelope is 1 on every shell line with y ≠ 0 but 0 \
                    at the puncture"
                .into(),
        },
        ExampleName::NonclosedExtreme => ExampleSpec {
            name,
            dimension: 3,
            min_resolution: 16,
            sampler: Box::new(|n| nonclosed_extreme(n)),
            oracle: None,
            singular_points: vec![point(&[0.0, 0.0, 0.0])],
            notes: "circle (y−1)²+z² = 1 in the plane x = 0 valued 1 (its closure \
                    point (0,0,0) included) plus (±1,0,0) valued 0; the sampled data \
                    fails the convexity test at (0,0,0)"
                .into(),
        },
        ExampleName::Combined4d => ExampleSpec {
            name,
            dimension: 4,
            min_resolution: 8,
            sampler: Box::new(|n| combined_4d(n)),
            oracle: Some(Box::new(|x| combined_4d_oracle(x))),
            singular_points: vec![point(&[0.0, 0.0, 0.0, 0.0])],
            notes: "circles y²+(z−1)²=1 at x = ±1, w = 0 valued 1 and the transverse \
                    circle y²+(w−1)²=1 at x = 0, z = 0 valued 0; on the supporting \
                    hyperplane w = 0 the envelope reproduces the punctured-cylinder \
                    jump at the origin"
                .into(),
        },
        ExampleName::PuncturedNoExtension => ExampleSpec {
            name,
            dimension: 3,
            min_resolution: 16,
            sampler: Box::new(|n| punctured_no_extension(n)),
            oracle: Some(Box::new(|x| punctured_cylinder_oracle(x, 0))),
            singular_points: vec![point(&[0.0, 0.0, 1.0])],
            notes: "slanted cylinder cut {−1 ≤ x ≤ −z} plus the x = 1 circle, all \
                    valued 1, plus (0,0,1) valued 0; every convex extension jumps at \
                    (0,0,1), and the envelope agrees with the two-circle cylinder's"
                .into(),
        },
        ExampleName::PotatoChip => ExampleSpec {
            name,
            dimension: 2,
            min_resolution: 16,
            sampler: Box::new(|n| potato_chip(n)),
            oracle: Some(Box::new(|x| potato_chip_oracle(x))),
            singular_points: vec![point(&[0.0, 1.0]), point(&[0.0, -1.0])],
            notes: "boundary of x⁴+y⁴ ≤ 1 with f = 1−√(1−y⁴); the envelope keeps the \
                    same formula, so ∂f̂/∂y → ∞ at (0, ±1) and no Lipschitz convex \
                    extension exists"
                .into(),
        },
        ExampleName::NoC2 => ExampleSpec {
            name,
            dimension: 2,
            min_resolution: 16,
            sampler: Box::new(|n| no_c2(n)),
            oracle: Some(Box::new(|x| no_c2_oracle(x))),
            singular_points: vec![point(&[0.0, 0.0])],
            notes: "unit circle with f = (x+1)x²; the envelope vanishes on the \
                    triangle co{(0,1),(0,−1),(−1,0)} and equals (x+1)x² for x ≥ 0, \
                    so its second derivative jumps across x = 0"
                .into(),
        },
        ExampleName::StrictlyConvexRandom => ExampleSpec {
            name,
            dimension: 2,
            min_resolution: 16,
            sampler: Box::new(move |n| strictly_convex_random(n, seed)),
            oracle: None,
            singular_points: vec![],
            notes: format!(
                "random smooth strictly convex body r(θ) = 1 + trig polynomial \
                 (seed {seed}) with a random continuous boundary function; any \
                 function on a strictly convex boundary is convex"
            ),
        },
    }
}

fn point<S: Float>(coords: &[f64]) -> Point<S> {
    Point::new(coords.iter().map(|&c| S::of(c)).collect()).expect("static example point")
}

/// Equally spaced angles plus forced ones, deduplicated.
fn angle_grid(n: usize, forced: &[f64]) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..n).map(|k| TAU * (k as f64) / (n as f64)).collect();
    for &a in forced {
        let a = a.rem_euclid(TAU);
        if angles
            .iter()
            .all(|&b| (b - a).abs() > 1e-12 && (TAU - (b - a).abs()) > 1e-12)
        {
            angles.push(a);
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles
}

/// Angle of the distinguished shell point (y, z) = (0.6, 0.8).
fn probe_angle() -> f64 {
    0.8f64.atan2(0.6)
}

fn tomato_can<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[PI / 2.0, probe_angle()]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for &x in &[-1.0, 1.0] {
        for &th in &angles {
            rows.push(vec![S::of(x), S::of(th.cos()), S::of(th.sin())]);
            values.push(S::one());
        }
    }
    rows.push(vec![S::zero(), S::zero(), S::one()]);
    values.push(S::zero());
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

/// Shared continuum oracle for the punctured cylinders: mixing weight on
/// the puncture (0,0,1) is capped by the shell constraint
/// t ≤ (1 − y² − z²)/(2(1 − z)) and by the cap constraint t ≤ 1 − |x|;
/// the rest of the mass costs 1.
///
/// `w_axis = 0` means coordinates are (x, y, z); the 4d variant passes
/// slice-checked coordinates directly.
fn punctured_cylinder_oracle<S: Float>(x: &[S], _w_axis: usize) -> Option<S> {
    if x.len() != 3 {
        return None;
    }
    let (cx, y, z) = (x[0], x[1], x[2]);
    let tol = S::of(1e-9);
    if cx.abs() > S::one() + tol || y * y + z * z > S::one() + tol {
        return None;
    }
    let shell_cap = if z >= S::one() - S::of(1e-12) {
        // top line of the shell: only the puncture itself reaches t = 1
        if y.abs() <= S::of(1e-9) {
            S::one()
        } else {
            S::zero()
        }
    } else {
        (S::one() - y * y - z * z) / (S::two() * (S::one() - z))
    };
    let t = (S::one() - cx.abs()).min(shell_cap).max(S::zero()).min(S::one());
    Some(S::one() - t)
}

fn nonclosed_extreme<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[PI]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for &ph in &angles {
        // circle (y−1)² + z² = 1 in the plane x = 0; φ = π is the closure
        // point (0,0,0)
        rows.push(vec![
            S::zero(),
            S::of(1.0 + ph.cos()),
            S::of(ph.sin()),
        ]);
        values.push(S::one());
    }
    rows.push(vec![-S::one(), S::zero(), S::zero()]);
    values.push(S::zero());
    rows.push(vec![S::one(), S::zero(), S::zero()]);
    values.push(S::zero());
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

fn combined_4d<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[PI]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for &x in &[-1.0, 1.0] {
        for &ph in &angles {
            // y² + (z−1)² = 1, w = 0; φ = π gives (x, 0, 0, 0)
            rows.push(vec![
                S::of(x),
                S::of(ph.sin()),
                S::of(1.0 + ph.cos()),
                S::zero(),
            ]);
            values.push(S::one());
        }
    }
    for &ph in &angles {
        // y² + (w−1)² = 1, z = 0; φ = π gives the origin
        rows.push(vec![
            S::zero(),
            S::of(ph.sin()),
            S::zero(),
            S::of(1.0 + ph.cos()),
        ]);
        values.push(S::zero());
    }
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

/// Closed form only on the w = 0 slice, where the problem reduces to the
/// punctured cylinder shifted to circles y² + (z−1)² = 1 with puncture at
/// the origin.
fn combined_4d_oracle<S: Float>(x: &[S]) -> Option<S> {
    if x.len() != 4 || x[3].abs() > S::of(1e-9) {
        return None;
    }
    let (cx, y, z) = (x[0], x[1], x[2]);
    let tol = S::of(1e-9);
    if cx.abs() > S::one() + tol || y * y + (z - S::one()) * (z - S::one()) > S::one() + tol {
        return None;
    }
    let shell_cap = if z <= S::of(1e-12) {
        if y.abs() <= S::of(1e-9) {
            S::one()
        } else {
            S::zero()
        }
    } else {
        S::one() - (y * y + z * z) / (S::two() * z)
    };
    let t = (S::one() - cx.abs()).min(shell_cap).max(S::zero()).min(S::one());
    Some(S::one() - t)
}

fn punctured_no_extension<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[PI / 2.0, probe_angle()]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    // slanted cut: for each shell angle, x runs from −1 to −z
    let dx = 4.0 / (n as f64);
    for &th in &angles {
        let (y, z) = (th.cos(), th.sin());
        let hi = -z;
        let span = hi - (-1.0);
        let steps = if span <= 1e-12 {
            1
        } else {
            ((span / dx).ceil() as usize).max(1) + 1
        };
        for j in 0..steps {
            let x = if steps == 1 {
                -1.0
            } else {
                -1.0 + span * (j as f64) / ((steps - 1) as f64)
            };
            rows.push(vec![S::of(x), S::of(y), S::of(z)]);
            values.push(S::one());
        }
    }
    for &th in &angles {
        rows.push(vec![S::one(), S::of(th.cos()), S::of(th.sin())]);
        values.push(S::one());
    }
    rows.push(vec![S::zero(), S::zero(), S::one()]);
    values.push(S::zero());
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

fn potato_chip<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[0.0, PI / 2.0, PI, 1.5 * PI]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for &th in &angles {
        let (c, s) = (th.cos(), th.sin());
        let scale = (c.powi(4) + s.powi(4)).powf(-0.25);
        let (x, y) = (c * scale, s * scale);
        rows.push(vec![S::of(x), S::of(y)]);
        values.push(S::of(1.0 - (1.0 - y.powi(4)).max(0.0).sqrt()));
    }
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

fn potato_chip_oracle<S: Float>(x: &[S]) -> Option<S> {
    if x.len() != 2 {
        return None;
    }
    let (a, b) = (x[0], x[1]);
    if a * a * a * a + b * b * b * b > S::one() + S::of(1e-9) {
        return None;
    }
    let y4 = (b * b * b * b).min(S::one());
    Some(S::one() - (S::one() - y4).sqrt())
}

fn no_c2<S: Float>(n: usize) -> Result<(PointCloud<S>, Vec<S>)> {
    let angles = angle_grid(n, &[0.0, PI / 2.0, PI, 1.5 * PI]);
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for &th in &angles {
        let (x, y) = (th.cos(), th.sin());
        rows.push(vec![S::of(x), S::of(y)]);
        values.push(S::of((x + 1.0) * x * x));
    }
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

/// Zero on the triangle co{(0,1),(0,−1),(−1,0)}, (x+1)x² on the half-disc
/// x ≥ 0; no closed form in between.
fn no_c2_oracle<S: Float>(x: &[S]) -> Option<S> {
    if x.len() != 2 {
        return None;
    }
    let (a, b) = (x[0], x[1]);
    let tol = S::of(1e-9);
    if a * a + b * b > S::one() + tol {
        return None;
    }
    if a >= -tol {
        Some((a + S::one()) * a * a)
    } else if b.abs() <= S::one() + a + tol {
        Some(S::zero())
    } else {
        None
    }
}

fn strictly_convex_random<S: Float>(n: usize, seed: u64) -> Result<(PointCloud<S>, Vec<S>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // radial trig polynomial, rescaled so strict convexity is guaranteed:
    // Σ k²(|a_k|+|b_k|) ≤ 0.2 keeps r² + 2r'² − r·r'' > 0
    let mut radial: Vec<(f64, f64)> = (0..4)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let weight: f64 = radial
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| ((i + 1) * (i + 1)) as f64 * (a.abs() + b.abs()))
        .sum();
    let target = 0.2 * rng.gen_range(0.5..1.0);
    let rescale = if weight > 0.0 { target / weight } else { 0.0 };
    for c in radial.iter_mut() {
        c.0 *= rescale;
        c.1 *= rescale;
    }
    let value_coefs: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let offset: f64 = rng.gen_range(-1.0..1.0);

    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    for k in 0..n {
        let th = TAU * (k as f64) / (n as f64);
        let r: f64 = 1.0
            + radial
                .iter()
                .enumerate()
                .map(|(i, &(a, b))| {
                    let m = (i + 1) as f64;
                    a * (m * th).cos() + b * (m * th).sin()
                })
                .sum::<f64>();
        rows.push(vec![S::of(r * th.cos()), S::of(r * th.sin())]);
        let f: f64 = offset
            + value_coefs
                .iter()
                .enumerate()
                .map(|(i, &(c, d))| {
                    let m = (i + 1) as f64;
                    c * (m * th).cos() + d * (m * th).sin()
                })
                .sum::<f64>();
        values.push(S::of(f));
    }
    Ok((PointCloud::new(
        rows.into_iter().map(Point::new).collect::<Result<_>>()?,
    )?, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_convex_on_samples;

    fn find_point(cloud: &PointCloud<f64>, coords: &[f64]) -> Option<usize> {
        (0..cloud.len()).find(|&i| {
            cloud
                .coords(i)
                .iter()
                .zip(coords)
                .all(|(a, b)| (a - b).abs() < 1e-12)
        })
    }

    #[test]
    fn tomato_can_has_forced_points_and_values() {
        let (prob, spec) = make_example::<f64>(ExampleName::TomatoCan, 64, 0).unwrap();
        let cloud = prob.cloud();
        for p in [
            [-1.0, 0.6, 0.8],
            [1.0, 0.6, 0.8],
            [-1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0],
        ] {
            let i = find_point(cloud, &p).expect("forced point present");
            assert_eq!(prob.values()[i], 1.0);
        }
        let punct = find_point(cloud, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(prob.values()[punct], 0.0);
        assert_eq!(spec.oracle_at(&[0.0, 0.6, 0.8]), Some(1.0));
        assert_eq!(spec.oracle_at(&[0.0, 0.0, 1.0]), Some(0.0));
        // interior of the puncture line
        let v = spec.oracle_at(&[0.5, 0.0, 1.0]).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn potato_chip_matches_its_oracle_value() {
        let (prob, spec) = make_example::<f64>(ExampleName::PotatoChip, 512, 0).unwrap();
        let want = 1.0 - (1.0 - 0.5f64.powi(4)).sqrt();
        assert!((want - 0.031754).abs() < 1e-6);
        let o = spec.oracle_at(&[0.5, 0.5]).unwrap();
        assert!((o - want).abs() < 1e-12);
        let rv = prob
            .roof_eval(&Point::new(vec![0.5, 0.5]).unwrap())
            .unwrap();
        assert!((rv.value - want).abs() < 1e-2, "roof {}", rv.value);
    }

    #[test]
    fn no_c2_corner_values() {
        let (prob, _) = make_example::<f64>(ExampleName::NoC2, 128, 0).unwrap();
        let cloud = prob.cloud();
        for (p, want) in [
            ([-1.0, 0.0], 0.0),
            ([1.0, 0.0], 2.0),
            ([0.0, 1.0], 0.0),
            ([0.0, -1.0], 0.0),
        ] {
            let i = find_point(cloud, &p).unwrap();
            assert!((prob.values()[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn every_example_is_convex_on_samples_except_the_nonclosed_one() {
        for name in ALL_EXAMPLES {
            let n = 16;
            let (prob, _) = make_example::<f64>(name, n, 0).unwrap();
            let report = is_convex_on_samples(prob.cloud(), prob.values()).unwrap();
            if name == ExampleName::NonclosedExtreme {
                assert!(!report.convex, "{name} should fail the convexity test");
                let w = report.witness.unwrap();
                let coords = prob.cloud().coords(w.index);
                assert!(
                    coords.iter().all(|c| c.abs() < 1e-9),
                    "witness should be the closure point, got {coords:?}"
                );
                assert!(w.cheaper_value < 1e-9);
            } else {
                assert!(report.convex, "{name} should be convex on samples");
            }
        }
    }

    #[test]
    fn constant_function_on_random_body_has_constant_roof() {
        let (prob, _) = make_example::<f64>(ExampleName::StrictlyConvexRandom, 48, 3).unwrap();
        let cloud = prob.cloud().clone();
        let constant = SampledConvexProblem::new(cloud, vec![0.7; prob.cloud().len()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let r: f64 = rng.gen_range(0.0..0.5);
            let th: f64 = rng.gen_range(0.0..TAU);
            let rv = constant
                .roof_eval(&Point::new(vec![r * th.cos(), r * th.sin()]).unwrap())
                .unwrap();
            assert!((rv.value - 0.7).abs() < 1e-9);
        }
    }

    #[test]
    fn slice_of_combined_4d_reproduces_the_cylinder_jump() {
        let (prob, spec) = make_example::<f64>(ExampleName::Combined4d, 24, 0).unwrap();
        // a shell line point with y ≠ 0 on the w = 0 slice
        let ph = TAU * 5.0 / 24.0;
        let (y, z) = (ph.sin(), 1.0 + ph.cos());
        let q = Point::new(vec![0.0, y, z, 0.0]).unwrap();
        let rv = prob.roof_eval(&q).unwrap();
        assert!((rv.value - 1.0).abs() < 1e-9, "shell line value {}", rv.value);
        assert_eq!(spec.oracle_at(&[0.0, y, z, 0.0]), Some(1.0));
        let origin = Point::new(vec![0.0; 4]).unwrap();
        assert!(prob.roof_eval(&origin).unwrap().value.abs() < 1e-9);
        assert_eq!(spec.oracle_at(&[0.0; 4]), Some(0.0));
    }

    #[test]
    fn unknown_name_and_low_resolution_are_rejected() {
        assert!(matches!(
            make_example_by_name::<f64>("mystery", 64, 0),
            Err(Error::UnknownExample(_))
        ));
        assert!(matches!(
            make_example::<f64>(ExampleName::PotatoChip, 4, 0),
            Err(Error::ResolutionTooLow { .. })
        ));
    }
}

//! Numeric probes for continuity, differentiability, and refinement
//! convergence of the sampled envelope.
//!
//! These are sampling-based certificates, not proofs: each report carries
//! enough metadata (resolution, seed, sample counts) to distinguish
//! discretization artifacts from genuine discontinuities.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::examples::{self, ExampleName};
use crate::geometry::Point;
use crate::roof::SampledConvexProblem;
use crate::scalar::Float;
use crate::Result;

/// Oscillation of the envelope on shrinking balls around a center.
#[derive(Debug, Clone)]
pub struct OscillationReport<S> {
    pub center: Point<S>,
    pub center_value: S,
    pub seed: u64,
    pub entries: Vec<OscillationEntry<S>>,
}

#[derive(Debug, Clone)]
pub struct OscillationEntry<S> {
    pub radius: S,
    /// max |f̂(x) − f̂(center)| over the accepted samples; `None` when the
    /// ball missed the hull entirely.
    pub osc: Option<S>,
    pub samples: usize,
    pub note: Option<String>,
}

/// Sample the r-ball around `p` intersected with the hull (rejection
/// sampling, seed-derived stream per radius) and record the worst
/// deviation of the envelope from its center value.
pub fn oscillation<S: Float>(
    problem: &SampledConvexProblem<S>,
    p: &Point<S>,
    radii: &[S],
    samples_per_radius: usize,
    seed: u64,
) -> Result<OscillationReport<S>> {
    let center_value = problem.roof_eval(p)?.value;
    let d = problem.dim();
    let mut entries = Vec::with_capacity(radii.len());
    for (ri, &radius) in radii.iter().enumerate() {
        if radius <= S::zero() {
            return Err(Error::Unsupported("radii must be positive"));
        }
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed.wrapping_add((ri as u64).wrapping_mul(0x9E37_79B9)));
        let mut accepted = 0usize;
        let mut worst = S::zero();
        let max_attempts = samples_per_radius.saturating_mul(200);
        let mut attempts = 0usize;
        while accepted < samples_per_radius && attempts < max_attempts {
            attempts += 1;
            let x = sample_in_ball(&mut rng, p.coords(), radius, d);
            match problem.roof_eval(&Point::new(x)?) {
                Ok(rv) => {
                    accepted += 1;
                    worst = worst.max((rv.value - center_value).abs());
                }
                Err(Error::Membership { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let entry = if accepted == 0 {
            OscillationEntry {
                radius,
                osc: None,
                samples: 0,
                note: Some(format!(
                    "no in-hull samples after {max_attempts} attempts; radius skipped"
                )),
            }
        } else {
            let note = (accepted < samples_per_radius).then(|| {
                format!("only {accepted}/{samples_per_radius} samples landed in the hull")
            });
            OscillationEntry {
                radius,
                osc: Some(worst),
                samples: accepted,
                note,
            }
        };
        entries.push(entry);
    }
    Ok(OscillationReport {
        center: p.clone(),
        center_value,
        seed,
        entries,
    })
}

fn sample_in_ball<S: Float>(rng: &mut ChaCha8Rng, center: &[S], radius: S, d: usize) -> Vec<S> {
    // isotropic direction from Gaussian components, radius ∝ u^{1/d}
    let dir: Vec<f64> = (0..d)
        .map(|_| {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u1.ln()).sqrt() * u2.cos()
        })
        .collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let r = rng.gen_range(0.0f64..1.0).powf(1.0 / d as f64);
    center
        .iter()
        .zip(&dir)
        .map(|(&c, &g)| c + radius * S::of(r * g / norm))
        .collect()
}

/// Central finite differences of the envelope, with flagged one-sided
/// fallbacks where the stencil leaves the hull.
#[derive(Debug, Clone)]
pub struct GradientProbe<S> {
    pub point: Point<S>,
    pub step: S,
    pub grad: Vec<S>,
    pub hessian_diag: Vec<S>,
    /// Per axis: true when a one-sided stencil had to be used.
    pub one_sided: Vec<bool>,
}

pub fn gradient_probe<S: Float>(
    problem: &SampledConvexProblem<S>,
    x: &Point<S>,
    step: S,
) -> Result<GradientProbe<S>> {
    if step <= S::zero() {
        return Err(Error::Unsupported("finite-difference step must be positive"));
    }
    let d = problem.dim();
    let f0 = problem.roof_eval(x)?.value;
    let eval_offset = |axis: usize, mult: S| -> Result<Option<S>> {
        let mut c = x.coords().to_vec();
        c[axis] = c[axis] + mult * step;
        match problem.roof_eval(&Point::new(c)?) {
            Ok(rv) => Ok(Some(rv.value)),
            Err(Error::Membership { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let mut grad = Vec::with_capacity(d);
    let mut hessian_diag = Vec::with_capacity(d);
    let mut one_sided = Vec::with_capacity(d);
    for axis in 0..d {
        let plus = eval_offset(axis, S::one())?;
        let minus = eval_offset(axis, -S::one())?;
        match (plus, minus) {
            (Some(fp), Some(fm)) => {
                grad.push((fp - fm) / (S::two() * step));
                hessian_diag.push((fp - S::two() * f0 + fm) / (step * step));
                one_sided.push(false);
            }
            (Some(fp), None) => {
                let fpp = eval_offset(axis, S::two())?.ok_or(Error::Membership {
                    residual: f64::NAN,
                })?;
                grad.push((fp - f0) / step);
                hessian_diag.push((fpp - S::two() * fp + f0) / (step * step));
                one_sided.push(true);
            }
            (None, Some(fm)) => {
                let fmm = eval_offset(axis, -S::two())?.ok_or(Error::Membership {
                    residual: f64::NAN,
                })?;
                grad.push((f0 - fm) / step);
                hessian_diag.push((fmm - S::two() * fm + f0) / (step * step));
                one_sided.push(true);
            }
            (None, None) => {
                return Err(Error::Membership {
                    residual: f64::NAN,
                })
            }
        }
    }
    Ok(GradientProbe {
        point: x.clone(),
        step,
        grad,
        hessian_diag,
        one_sided,
    })
}

/// One probe at one resolution of a refinement study.
#[derive(Debug, Clone)]
pub struct ConvergenceRow<S> {
    pub resolution: usize,
    pub probe: Point<S>,
    pub roof: S,
    pub oracle: Option<S>,
    pub abs_error: Option<S>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceTable<S> {
    pub example: ExampleName,
    pub seed: u64,
    pub rows: Vec<ConvergenceRow<S>>,
}

/// Rebuild an example at each resolution and compare the envelope at the
/// probes against the example's analytic oracle where it has one.
pub fn refinement_convergence<S: Float>(
    name: ExampleName,
    resolutions: &[usize],
    probes: &[Point<S>],
    seed: u64,
) -> Result<ConvergenceTable<S>> {
    let mut rows = Vec::with_capacity(resolutions.len() * probes.len());
    for &n in resolutions {
        let (problem, spec) = examples::make_example::<S>(name, n, seed)?;
        for probe in probes {
            let roof = problem.roof_eval(probe)?.value;
            let oracle = spec.oracle_at(probe.coords());
            let abs_error = oracle.map(|o| (roof - o).abs());
            rows.push(ConvergenceRow {
                resolution: n,
                probe: probe.clone(),
                roof,
                oracle,
                abs_error,
            });
        }
    }
    Ok(ConvergenceTable {
        example: name,
        seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointCloud;

    fn pt(coords: &[f64]) -> Point<f64> {
        Point::new(coords.to_vec()).unwrap()
    }

    fn quadratic_disc(n: usize) -> SampledConvexProblem<f64> {
        let mut rows: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let th = std::f64::consts::TAU * (k as f64) / (n as f64);
                vec![th.cos(), th.sin()]
            })
            .collect();
        rows.push(vec![0.0, 0.0]);
        let values = rows.iter().map(|r| r[0] * r[0] + r[1] * r[1]).collect();
        SampledConvexProblem::new(PointCloud::from_rows(rows).unwrap(), values).unwrap()
    }

    #[test]
    fn oscillation_shrinks_for_smooth_envelopes() {
        let prob = quadratic_disc(48);
        let report = oscillation(&prob, &pt(&[0.1, 0.0]), &[0.2, 0.1, 0.05], 80, 0).unwrap();
        let osc: Vec<f64> = report.entries.iter().map(|e| e.osc.unwrap()).collect();
        // Lipschitz constant of the squared norm on the disc is 2
        for (o, r) in osc.iter().zip([0.2, 0.1, 0.05]) {
            assert!(*o <= 2.5 * r, "osc {o} at radius {r}");
        }
        assert!(osc[2] <= osc[0]);
    }

    #[test]
    fn oscillation_is_seed_deterministic() {
        let prob = quadratic_disc(32);
        let a = oscillation(&prob, &pt(&[0.0, 0.0]), &[0.3, 0.1], 40, 7).unwrap();
        let b = oscillation(&prob, &pt(&[0.0, 0.0]), &[0.3, 0.1], 40, 7).unwrap();
        for (ea, eb) in a.entries.iter().zip(&b.entries) {
            assert_eq!(ea.osc, eb.osc);
            assert_eq!(ea.samples, eb.samples);
        }
    }

    #[test]
    fn puncture_jump_is_certified() {
        let (prob, _) = examples::make_example::<f64>(ExampleName::TomatoCan, 96, 0).unwrap();
        let report =
            oscillation(&prob, &pt(&[0.0, 0.0, 1.0]), &[0.3, 0.2, 0.1], 250, 0).unwrap();
        for e in &report.entries {
            let osc = e.osc.expect("ball reaches the hull");
            assert!(
                osc >= 0.9,
                "osc {osc} at radius {} with {} samples",
                e.radius,
                e.samples
            );
        }
    }

    #[test]
    fn gradient_of_affine_envelope() {
        let rows: Vec<Vec<f64>> = (0..32)
            .map(|k| {
                let th = std::f64::consts::TAU * (k as f64) / 32.0;
                vec![th.cos(), th.sin()]
            })
            .collect();
        let values = rows.iter().map(|r| r[0]).collect();
        let prob = SampledConvexProblem::new(PointCloud::from_rows(rows).unwrap(), values).unwrap();
        let probe = gradient_probe(&prob, &pt(&[0.2, 0.1]), 1e-3).unwrap();
        assert!((probe.grad[0] - 1.0).abs() < 1e-6);
        assert!(probe.grad[1].abs() < 1e-6);
        assert!(probe.hessian_diag.iter().all(|h| h.abs() < 1e-4));
        assert!(probe.one_sided.iter().all(|&o| !o));
    }

    #[test]
    fn chip_slope_grows_toward_the_rim() {
        let (prob, _) = examples::make_example::<f64>(ExampleName::PotatoChip, 256, 0).unwrap();
        let mut slopes = Vec::new();
        for &delta in &[0.1, 0.05] {
            let h = delta / 4.0;
            let probe = gradient_probe(&prob, &pt(&[0.0, 1.0 - delta]), h).unwrap();
            slopes.push(probe.grad[1].abs());
        }
        assert!(
            slopes[1] / slopes[0] >= 1.2,
            "slopes {slopes:?} should grow by at least 1.2 per halving"
        );
    }

    #[test]
    fn kink_second_difference_jumps() {
        let (prob, _) = examples::make_example::<f64>(ExampleName::NoC2, 128, 0).unwrap();
        let h = 0.1;
        let left = gradient_probe(&prob, &pt(&[-h, 0.0]), h).unwrap();
        let right = gradient_probe(&prob, &pt(&[h, 0.0]), h).unwrap();
        let jump = right.hessian_diag[0] - left.hessian_diag[0];
        assert!(jump >= 1.5, "second-difference jump {jump}");
    }

    #[test]
    fn one_sided_stencils_are_flagged() {
        let prob = quadratic_disc(64);
        // center near the rim: the +x stencil exits the hull
        let probe = gradient_probe(&prob, &pt(&[0.96, 0.0]), 0.05).unwrap();
        assert!(probe.one_sided[0]);
        assert!(!probe.one_sided[1]);
    }

    #[test]
    fn refinement_errors_decrease_for_the_chip() {
        let table = refinement_convergence::<f64>(
            ExampleName::PotatoChip,
            &[32, 128],
            &[pt(&[0.3, 0.7])],
            0,
        )
        .unwrap();
        let errs: Vec<f64> = table.rows.iter().map(|r| r.abs_error.unwrap()).collect();
        assert!(errs[1] <= errs[0], "errors {errs:?}");
    }

    #[test]
    fn refinement_is_exact_where_the_segment_endpoints_are_sampled() {
        let table = refinement_convergence::<f64>(
            ExampleName::TomatoCan,
            &[16, 64],
            &[pt(&[0.0, 0.6, 0.8])],
            0,
        )
        .unwrap();
        for row in &table.rows {
            assert!(row.abs_error.unwrap() <= 1e-9);
        }
    }
}

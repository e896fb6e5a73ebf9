//! Numeric convex-roof minimization over pure-state ensembles.
//!
//! Ensembles of a fixed size m are parametrized by m×r isometries over
//! the eigenbasis of ρ; the optimizer runs projected gradient descent on
//! the raw real parameters with re-orthonormalization after every step,
//! restarted from Haar-random isometries. The reported value is an upper
//! bound on the true roof: it is the exact ensemble average of the best
//! decomposition found.

use num_complex::Complex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::scalar::Float;
use crate::Result;

use super::cmatrix::CMat;
use super::{
    decomposition_from_isometry, DensityMatrix, EntanglementMeasure, PureDecomposition, PureState,
};

#[derive(Debug, Clone)]
pub struct RoofOptions {
    /// Ensemble size m; defaults to min(2·rank, 8).
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Central-difference step on the raw isometry parameters.
    pub gradient_step: f64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 20,
            max_iters: 300,
            seed: 0,
            gradient_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoofOutcome<S> {
    /// Best ensemble average found. An upper bound on the true roof.
    pub upper_bound: S,
    pub decomposition: PureDecomposition<S>,
    pub ensemble_size: usize,
    pub restarts: usize,
    /// True when at least one restart reached the gradient tolerance
    /// rather than the iteration cap.
    pub converged: bool,
    pub best_restart: usize,
}

struct Objective<'a, S, M: ?Sized> {
    /// Eigenvectors scaled by √eigenvalue, one per kept rank direction.
    scaled: Vec<[Complex<S>; 4]>,
    measure: &'a M,
    m: usize,
    r: usize,
}

impl<'a, S: Float, M: EntanglementMeasure<S> + ?Sized> Objective<'a, S, M> {
    /// Raw parameter vector -> column-orthonormalized isometry (m×r).
    fn retract(&self, raw: &[S]) -> CMat<S> {
        let mut v: CMat<S> = (0..self.m)
            .map(|k| {
                (0..self.r)
                    .map(|j| {
                        let base = 2 * (k * self.r + j);
                        Complex::new(raw[base], raw[base + 1])
                    })
                    .collect()
            })
            .collect();
        for j in 0..self.r {
            for prev in 0..j {
                let dot: Complex<S> = (0..self.m).map(|i| v[i][prev].conj() * v[i][j]).sum();
                for i in 0..self.m {
                    let corr = dot * v[i][prev];
                    v[i][j] = v[i][j] - corr;
                }
            }
            let norm: S = (0..self.m).map(|i| v[i][j].norm_sqr()).sum::<S>().sqrt();
            if norm > S::of(1e-12) {
                let inv = Complex::new(S::one() / norm, S::zero());
                for i in 0..self.m {
                    v[i][j] = v[i][j] * inv;
                }
            } else {
                // degenerate column: deterministically pick the basis
                // vector with the largest residual off the current span
                let mut best = (0usize, S::neg_infinity());
                for cand in 0..self.m {
                    let mut e: Vec<Complex<S>> = (0..self.m)
                        .map(|i| {
                            Complex::new(
                                if i == cand { S::one() } else { S::zero() },
                                S::zero(),
                            )
                        })
                        .collect();
                    for prev in 0..j {
                        let dot: Complex<S> =
                            (0..self.m).map(|i| v[i][prev].conj() * e[i]).sum();
                        for i in 0..self.m {
                            let corr = dot * v[i][prev];
                            e[i] = e[i] - corr;
                        }
                    }
                    let res: S = e.iter().map(|z| z.norm_sqr()).sum();
                    if res > best.1 {
                        best = (cand, res);
                    }
                }
                let mut e: Vec<Complex<S>> = (0..self.m)
                    .map(|i| {
                        Complex::new(
                            if i == best.0 { S::one() } else { S::zero() },
                            S::zero(),
                        )
                    })
                    .collect();
                for prev in 0..j {
                    let dot: Complex<S> = (0..self.m).map(|i| v[i][prev].conj() * e[i]).sum();
                    for i in 0..self.m {
                        let corr = dot * v[i][prev];
                        e[i] = e[i] - corr;
                    }
                }
                let norm: S = e.iter().map(|z| z.norm_sqr()).sum::<S>().sqrt();
                for i in 0..self.m {
                    v[i][j] = e[i] / Complex::new(norm, S::zero());
                }
            }
        }
        v
    }

    /// Σ p_k · measure(ψ_k) for the ensemble generated by the isometry.
    fn ensemble_average(&self, v: &CMat<S>) -> S {
        let mut total = S::zero();
        for row in v {
            let z = Complex::new(S::zero(), S::zero());
            let mut tilde = [z; 4];
            for (vkj, w) in row.iter().zip(&self.scaled) {
                for (t, &wi) in tilde.iter_mut().zip(w) {
                    *t = *t + *vkj * wi;
                }
            }
            let p: S = tilde.iter().map(|a| a.norm_sqr()).sum();
            if p <= S::of(1e-14) {
                continue;
            }
            let inv = Complex::new(S::one() / p.sqrt(), S::zero());
            let psi = PureState::new([
                tilde[0] * inv,
                tilde[1] * inv,
                tilde[2] * inv,
                tilde[3] * inv,
            ]);
            match psi {
                Ok(psi) => total += p * self.measure.evaluate(&psi),
                Err(_) => continue,
            }
        }
        total
    }

    fn value(&self, raw: &[S]) -> S {
        self.ensemble_average(&self.retract(raw))
    }
}

/// Minimize the ensemble average of `measure` over decompositions of
/// `rho`. Local descent with restarts; never fatal on non-convergence —
/// the best ensemble found is always returned.
pub fn roof_entanglement<S: Float, M: EntanglementMeasure<S> + ?Sized>(
    rho: &DensityMatrix<S>,
    measure: &M,
    options: &RoofOptions,
) -> Result<RoofOutcome<S>> {
    if options.restarts == 0 {
        return Err(Error::Unsupported("at least one restart is required"));
    }
    let objective = build_objective(rho, measure, options)?;

    let mut best_value = S::infinity();
    let mut best_raw: Vec<S> = Vec::new();
    let mut best_restart = 0usize;
    let mut converged = false;

    for restart in 0..options.restarts {
        let (value, raw, hit_tolerance) = optimize_restart(&objective, restart, options);
        if value < best_value {
            best_value = value;
            best_raw = raw;
            best_restart = restart;
        }
        converged |= hit_tolerance;
    }

    finish(rho, measure, &objective, best_raw, best_restart, converged, options)
}

/// As [`roof_entanglement`], with restarts spread over `jobs` threads.
/// The merge is by (value, restart index), so results match the serial
/// path for every job count.
pub fn roof_entanglement_parallel<S: Float, M: EntanglementMeasure<S> + ?Sized>(
    rho: &DensityMatrix<S>,
    measure: &M,
    options: &RoofOptions,
    jobs: usize,
) -> Result<RoofOutcome<S>> {
    if jobs <= 1 {
        return roof_entanglement(rho, measure, options);
    }
    if options.restarts == 0 {
        return Err(Error::Unsupported("at least one restart is required"));
    }
    let objective = build_objective(rho, measure, options)?;
    let chunk = options.restarts.div_ceil(jobs);
    let candidates: Vec<(S, Vec<S>, usize, bool)> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..jobs {
            let start = w * chunk;
            let end = ((w + 1) * chunk).min(options.restarts);
            let objective = &objective;
            handles.push(scope.spawn(move || {
                let mut local: Vec<(S, Vec<S>, usize, bool)> = Vec::new();
                for restart in start..end {
                    let (value, raw, hit) = optimize_restart(objective, restart, options);
                    local.push((value, raw, restart, hit));
                }
                local
            }));
        }
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("restart worker panicked"))
            .collect()
    });
    let converged = candidates.iter().any(|c| c.3);
    let best = candidates
        .into_iter()
        .min_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.2.cmp(&b.2))
        })
        .expect("at least one restart ran");
    finish(rho, measure, &objective, best.1, best.2, converged, options)
}

fn build_objective<'a, S: Float, M: EntanglementMeasure<S> + ?Sized>(
    rho: &DensityMatrix<S>,
    measure: &'a M,
    options: &RoofOptions,
) -> Result<Objective<'a, S, M>> {
    let (eigs, vecs) = rho.eigen();
    let kept: Vec<usize> = (0..4).filter(|&j| eigs[j] > S::of(1e-12)).collect();
    let r = kept.len();
    let m = options.ensemble_size.unwrap_or((2 * r).min(8));
    if m < r {
        return Err(Error::Unsupported(
            "ensemble size must be at least the rank of the state",
        ));
    }
    let scaled: Vec<[Complex<S>; 4]> = kept
        .iter()
        .map(|&j| {
            let s = Complex::new(eigs[j].sqrt(), S::zero());
            [
                vecs[0][j] * s,
                vecs[1][j] * s,
                vecs[2][j] * s,
                vecs[3][j] * s,
            ]
        })
        .collect();
    Ok(Objective {
        scaled,
        measure,
        m,
        r,
    })
}

/// One descent run from the restart's starting isometry. Returns the
/// final value, the final raw parameters, and whether the gradient
/// tolerance was reached.
fn optimize_restart<S: Float, M: EntanglementMeasure<S> + ?Sized>(
    objective: &Objective<'_, S, M>,
    restart: usize,
    options: &RoofOptions,
) -> (S, Vec<S>, bool) {
    let (m, r) = (objective.m, objective.r);
    let nparams = 2 * m * r;
    let grad_step = S::of(options.gradient_step);
    let grad_tol = S::of(1e-8);
    let mut raw: Vec<S> = if restart == 0 {
        // identity embedding: the eigendecomposition itself
        let mut raw = vec![S::zero(); nparams];
        for j in 0..r {
            raw[2 * (j * r + j)] = S::one();
        }
        raw
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(
            options
                .seed
                .wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        (0..nparams)
            .map(|_| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                S::of((-2.0 * u1.ln()).sqrt() * u2.cos())
            })
            .collect()
    };
    // normalize the raw point onto the manifold so finite differences
    // probe a neighborhood of an isometry
    raw = flatten(&objective.retract(&raw), m, r);
    let mut value = objective.value(&raw);
    let mut step = S::of(0.25);
    let mut hit_tolerance = false;

    for _iter in 0..options.max_iters {
        // central-difference gradient on the raw parameters
        let mut grad = vec![S::zero(); nparams];
        let mut gnorm_sq = S::zero();
        for p in 0..nparams {
            let keep = raw[p];
            raw[p] = keep + grad_step;
            let fp = objective.value(&raw);
            raw[p] = keep - grad_step;
            let fm = objective.value(&raw);
            raw[p] = keep;
            let g = (fp - fm) / (S::two() * grad_step);
            grad[p] = g;
            gnorm_sq += g * g;
        }
        if gnorm_sq.sqrt() <= grad_tol {
            hit_tolerance = true;
            break;
        }
        // backtracking line search with orthonormality restoration
        let mut alpha = step;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<S> = raw
                .iter()
                .zip(&grad)
                .map(|(&x, &g)| x - alpha * g)
                .collect();
            let trial = flatten(&objective.retract(&trial), m, r);
            let trial_value = objective.ensemble_average(&objective.retract(&trial));
            if trial_value <= value - S::of(1e-4) * alpha * gnorm_sq {
                raw = trial;
                value = trial_value;
                step = (alpha * S::two()).min(S::of(1.0));
                improved = true;
                break;
            }
            alpha *= S::half();
        }
        if !improved {
            break;
        }
    }
    (value, raw, hit_tolerance)
}

fn finish<S: Float, M: EntanglementMeasure<S> + ?Sized>(
    rho: &DensityMatrix<S>,
    measure: &M,
    objective: &Objective<'_, S, M>,
    best_raw: Vec<S>,
    best_restart: usize,
    converged: bool,
    options: &RoofOptions,
) -> Result<RoofOutcome<S>> {
    let v = objective.retract(&best_raw);
    let decomposition = decomposition_from_isometry(rho, &v)?;
    let upper_bound = decomposition.average(measure);
    Ok(RoofOutcome {
        upper_bound,
        decomposition,
        ensemble_size: objective.m,
        restarts: options.restarts,
        converged,
        best_restart,
    })
}

fn flatten<S: Float>(v: &CMat<S>, m: usize, r: usize) -> Vec<S> {
    let mut raw = vec![S::zero(); 2 * m * r];
    for (k, row) in v.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let base = 2 * (k * r + j);
            raw[base] = z.re;
            raw[base + 1] = z.im;
        }
    }
    raw
}

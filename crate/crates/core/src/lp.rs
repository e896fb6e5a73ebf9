//! Dense two-phase primal simplex for equality-constrained LPs in
//! standard form:
//!
//! ```text
//! minimize    c·t
//! subject to  A t = b,   t ≥ 0
//! ```
//!
//! The envelope problems this engine serves are short and fat (m = d+1
//! rows, one column per sample point), so a dense tableau with Dantzig
//! pricing and a Bland fallback is the right tool; no sparse machinery.

use crate::error::Error;
use crate::linalg;
use crate::scalar::Float;
use crate::Result;

/// Phase-1 feasibility tolerance, absolute on the scaled problem.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Reduced cost must be below `-ENTER_TOL` for a column to enter.
const ENTER_TOL: f64 = 1e-10;
/// Smallest acceptable ratio-test denominator on scaled rows.
const RATIO_TOL: f64 = 1e-11;
/// A pivot step below this is counted as degenerate.
const DEGENERATE_STEP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Equality-form linear program, sense fixed to minimize.
#[derive(Debug, Clone)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    /// Row-major m×n constraint matrix.
    pub constraints: Vec<Vec<S>>,
    pub rhs: Vec<S>,
}

impl<S: Float> LinearProgram<S> {
    pub fn new(objective: Vec<S>, constraints: Vec<Vec<S>>, rhs: Vec<S>) -> Result<Self> {
        let n = objective.len();
        if constraints.len() != rhs.len() {
            return Err(Error::DimensionMismatch {
                expected: constraints.len(),
                got: rhs.len(),
            });
        }
        for row in &constraints {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let finite = objective.iter().all(|x| x.is_finite())
            && rhs.iter().all(|x| x.is_finite())
            && constraints.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite {
                context: "linear program data",
            });
        }
        Ok(Self {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }
}

/// Result of a solve. `t`, `objective`, `basis` and `dual` are only
/// meaningful when `status == Optimal`; on `Infeasible` the `objective`
/// field carries the phase-1 residual.
#[derive(Debug, Clone)]
pub struct LPSolution<S> {
    pub status: LPStatus,
    pub t: Vec<S>,
    pub objective: S,
    /// Column indices of the final basis, one per row. An index ≥ n marks
    /// an artificial variable parked on a numerically redundant row.
    pub basis: Vec<usize>,
    /// Dual multipliers of the equality rows, in original row units.
    pub dual: Vec<S>,
}

impl<S: Float> LPSolution<S> {
    pub fn is_optimal(&self) -> bool {
        self.status == LPStatus::Optimal
    }
}

/// Solve with a fresh solver instance.
pub fn solve<S: Float>(lp: &LinearProgram<S>) -> Result<LPSolution<S>> {
    Simplex::new(lp)?.solve()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    One,
    Two,
}

/// Tableau state for one solve; instances are single-use.
pub struct Simplex<'a, S> {
    lp: &'a LinearProgram<S>,
    m: usize,
    n: usize,
    /// m rows × (n + m) columns of the scaled, sign-flipped tableau.
    rows: Vec<Vec<S>>,
    /// Current right-hand side (basic values).
    rhs: Vec<S>,
    /// Reduced costs, length n + m.
    reduced: Vec<S>,
    basis: Vec<usize>,
    /// Per-row factor f_i / s_i mapping scaled duals back to original rows.
    row_unscale: Vec<S>,
    /// Scaled flipped copy for the final refinement solve.
    work_a: Vec<Vec<S>>,
    work_b: Vec<S>,
    bland: bool,
    degenerate_run: usize,
    pivots: usize,
    max_pivots: usize,
    feasibility_tol: S,
}

impl<'a, S: Float> Simplex<'a, S> {
    pub fn new(lp: &'a LinearProgram<S>) -> Result<Self> {
        let m = lp.num_rows();
        let n = lp.num_cols();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_unscale = Vec::with_capacity(m);
        for (i, row) in lp.constraints.iter().enumerate() {
            let mut scale = lp.rhs[i].abs();
            for x in row {
                scale = scale.max(x.abs());
            }
            if scale <= S::zero() {
                scale = S::one();
            }
            let flip = if lp.rhs[i] / scale < S::zero() {
                -S::one()
            } else {
                S::one()
            };
            let factor = flip / scale;
            let mut scaled: Vec<S> = row.iter().map(|&x| x * factor).collect();
            // artificial block
            scaled.extend((0..m).map(|j| if j == i { S::one() } else { S::zero() }));
            rows.push(scaled);
            rhs.push(lp.rhs[i] * factor);
            row_unscale.push(factor);
        }
        let work_a: Vec<Vec<S>> = rows.iter().map(|r| r[..n].to_vec()).collect();
        let work_b = rhs.clone();
        let basis: Vec<usize> = (0..m).map(|i| n + i).collect();
        let max_pivots = 50 * (m + n);
        Ok(Self {
            lp,
            m,
            n,
            rows,
            rhs,
            reduced: vec![S::zero(); n + m],
            basis,
            row_unscale,
            work_a,
            work_b,
            bland: false,
            degenerate_run: 0,
            pivots: 0,
            max_pivots,
            feasibility_tol: S::of(FEASIBILITY_TOL),
        })
    }

    /// Override the phase-1 feasibility tolerance (absolute, scaled rows).
    pub fn with_feasibility_tol(mut self, tol: S) -> Self {
        self.feasibility_tol = tol;
        self
    }

    pub fn solve(&mut self) -> Result<LPSolution<S>> {
        // Phase 1: minimize the sum of artificials.
        self.load_phase1_costs();
        self.run(Phase::One)?;
        let phase1_obj = self.current_objective(Phase::One);
        if phase1_obj > self.feasibility_tol {
            return Ok(LPSolution {
                status: LPStatus::Infeasible,
                t: Vec::new(),
                objective: phase1_obj,
                basis: Vec::new(),
                dual: Vec::new(),
            });
        }
        self.evict_artificials();

        // Phase 2: original objective over the feasible basis.
        self.load_phase2_costs();
        self.pivots = 0;
        self.bland = false;
        self.degenerate_run = 0;
        if !self.run(Phase::Two)? {
            return Ok(LPSolution {
                status: LPStatus::Unbounded,
                t: Vec::new(),
                objective: S::neg_infinity(),
                basis: Vec::new(),
                dual: Vec::new(),
            });
        }
        self.extract()
    }

    fn load_phase1_costs(&mut self) {
        // reduced cost of column j is c_j − Σ_i a_ij with c = (0…0,1…1)
        for j in 0..self.n {
            self.reduced[j] = -(0..self.m).map(|i| self.rows[i][j]).sum::<S>();
        }
        for j in self.n..self.n + self.m {
            self.reduced[j] = S::zero();
        }
    }

    fn load_phase2_costs(&mut self) {
        let cost = |j: usize| {
            if j < self.n {
                self.lp.objective[j]
            } else {
                S::zero()
            }
        };
        for j in 0..self.n + self.m {
            let z: S = (0..self.m)
                .map(|i| cost(self.basis[i]) * self.rows[i][j])
                .sum();
            self.reduced[j] = cost(j) - z;
        }
    }

    fn current_objective(&self, phase: Phase) -> S {
        (0..self.m)
            .map(|i| {
                let b = self.basis[i];
                let c = match phase {
                    Phase::One => {
                        if b >= self.n {
                            S::one()
                        } else {
                            S::zero()
                        }
                    }
                    Phase::Two => {
                        if b < self.n {
                            self.lp.objective[b]
                        } else {
                            S::zero()
                        }
                    }
                };
                c * self.rhs[i]
            })
            .sum()
    }

    /// Pivot until optimal. Returns false when the problem is unbounded
    /// in the current phase (phase 1 is never unbounded).
    fn run(&mut self, phase: Phase) -> Result<bool> {
        loop {
            let Some(entering) = self.choose_entering(phase) else {
                return Ok(true);
            };
            let Some(leaving) = self.choose_leaving(entering) else {
                return Ok(false);
            };
            self.pivot(leaving, entering);
            self.pivots += 1;
            if self.pivots > self.max_pivots {
                return Err(Error::NonTermination {
                    iterations: self.max_pivots,
                });
            }
            if !self.bland && self.degenerate_run > 3 * self.m {
                self.bland = true;
            }
        }
    }

    fn column_eligible(&self, j: usize, phase: Phase) -> bool {
        // artificials never re-enter; in phase 2 they are priced at zero
        // but locked out entirely.
        if j >= self.n {
            return false;
        }
        let _ = phase;
        true
    }

    fn choose_entering(&self, phase: Phase) -> Option<usize> {
        let tol = S::of(ENTER_TOL);
        if self.bland {
            (0..self.n + self.m)
                .find(|&j| self.column_eligible(j, phase) && self.reduced[j] < -tol)
        } else {
            let mut best: Option<(usize, S)> = None;
            for j in 0..self.n + self.m {
                if !self.column_eligible(j, phase) {
                    continue;
                }
                let rc = self.reduced[j];
                if rc < -tol && best.map_or(true, |(_, b)| rc < b) {
                    best = Some((j, rc));
                }
            }
            best.map(|(j, _)| j)
        }
    }

    fn choose_leaving(&mut self, entering: usize) -> Option<usize> {
        let den_tol = S::of(RATIO_TOL);
        let mut best: Option<(usize, S)> = None;
        for r in 0..self.m {
            let den = self.rows[r][entering];
            if den <= den_tol {
                continue;
            }
            let ratio = self.rhs[r] / den;
            match best {
                None => best = Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio < bratio {
                        best = Some((r, ratio));
                    } else if ratio == bratio {
                        let better = if self.bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            self.rows[r][entering] > self.rows[br][entering]
                        };
                        if better {
                            best = Some((r, ratio));
                        }
                    }
                }
            }
        }
        if let Some((_, ratio)) = best {
            if ratio.abs() <= S::of(DEGENERATE_STEP) {
                self.degenerate_run += 1;
            } else {
                self.degenerate_run = 0;
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = S::one() / self.rows[row][col];
        for x in self.rows[row].iter_mut() {
            *x *= inv;
        }
        self.rhs[row] *= inv;
        self.rows[row][col] = S::one();
        for r in 0..self.m {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col];
            if factor != S::zero() {
                for c in 0..self.n + self.m {
                    let v = self.rows[row][c];
                    self.rows[r][c] -= factor * v;
                }
                let v = self.rhs[row];
                self.rhs[r] -= factor * v;
                self.rows[r][col] = S::zero();
            }
        }
        let factor = self.reduced[col];
        if factor != S::zero() {
            for c in 0..self.n + self.m {
                let v = self.rows[row][c];
                self.reduced[c] -= factor * v;
            }
            self.reduced[col] = S::zero();
        }
        self.basis[row] = col;
    }

    /// Pivot basic artificials out where an original column is available;
    /// rows that stay artificial are numerically redundant and inert.
    fn evict_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let col = (0..self.n)
                .filter(|&j| self.rows[r][j].abs() > S::of(RATIO_TOL))
                .fold(None::<(usize, S)>, |best, j| {
                    let mag = self.rows[r][j].abs();
                    match best {
                        Some((_, bm)) if bm >= mag => best,
                        _ => Some((j, mag)),
                    }
                });
            if let Some((j, _)) = col {
                self.pivot(r, j);
            }
        }
    }

    fn extract(&self) -> Result<LPSolution<S>> {
        // Refine the basic solution by solving B t_B = b directly on the
        // scaled data; tableau entries accumulate pivot roundoff.
        let col_of = |j: usize, i: usize| {
            if j < self.n {
                self.work_a[i][j]
            } else if j - self.n == i {
                S::one()
            } else {
                S::zero()
            }
        };
        let bmat: Vec<Vec<S>> = (0..self.m)
            .map(|i| (0..self.m).map(|k| col_of(self.basis[k], i)).collect())
            .collect();
        let refined = linalg::solve_square(bmat.clone(), self.work_b.clone(), S::of(1e-14));
        let basic_values: Vec<S> = match refined {
            Some(v) => v,
            None => self.rhs.clone(),
        };
        let mut t = vec![S::zero(); self.n];
        for (k, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                t[j] = basic_values[k];
            }
        }
        let objective: S = self
            .lp
            .objective
            .iter()
            .zip(&t)
            .map(|(&c, &x)| c * x)
            .sum();

        // duals: solve Bᵀ y = c_B, then map back to original row units
        let cb: Vec<S> = self
            .basis
            .iter()
            .map(|&j| {
                if j < self.n {
                    self.lp.objective[j]
                } else {
                    S::zero()
                }
            })
            .collect();
        let bt: Vec<Vec<S>> = (0..self.m)
            .map(|i| (0..self.m).map(|k| bmat[k][i]).collect())
            .collect();
        let dual_scaled = linalg::solve_square(bt, cb, S::of(1e-14)).unwrap_or_default();
        let dual: Vec<S> = dual_scaled
            .iter()
            .zip(&self.row_unscale)
            .map(|(&y, &u)| y * u)
            .collect();

        // Hard sanity cap; the tight 1e-8 bound is asserted by tests.
        let mut residual = S::zero();
        let mut bnorm = S::zero();
        for (i, row) in self.lp.constraints.iter().enumerate() {
            let ax: S = row.iter().zip(&t).map(|(&a, &x)| a * x).sum();
            residual = residual.max((ax - self.lp.rhs[i]).abs());
            bnorm = bnorm.max(self.lp.rhs[i].abs());
        }
        if residual > S::of(1e-6) * (S::one() + bnorm) {
            return Err(Error::Numerical(format!(
                "basic solution residual {residual:e} exceeds sanity cap"
            )));
        }

        Ok(LPSolution {
            status: LPStatus::Optimal,
            t,
            objective,
            basis: self.basis.clone(),
            dual,
        })
    }

    /// Text rendering of the current tableau, for debugging.
    pub fn tableau_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "basis: {:?}", self.basis);
        for r in 0..self.m {
            for c in 0..self.n + self.m {
                let _ = write!(out, "{:>12.5e} ", self.rows[r][c]);
            }
            let _ = writeln!(out, "| {:>12.5e}", self.rhs[r]);
        }
        for c in 0..self.n + self.m {
            let _ = write!(out, "{:>12.5e} ", self.reduced[c]);
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn lp(c: &[f64], a: &[&[f64]], b: &[f64]) -> LinearProgram<f64> {
        LinearProgram::new(
            c.to_vec(),
            a.iter().map(|r| r.to_vec()).collect(),
            b.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn picks_cheapest_vertex() {
        // min t2  s.t.  t1 + t2 = 1
        let sol = solve(&lp(&[0.0, 1.0], &[&[1.0, 1.0]], &[1.0])).unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
        assert!((sol.objective - 0.0).abs() < 1e-12);
        assert!((sol.t[0] - 1.0).abs() < 1e-12);
        assert!(sol.t[1].abs() < 1e-12);
    }

    #[test]
    fn interpolates_1d_envelope() {
        // envelope of f on {0,1} queried at 0.5: columns are lifted points
        let sol = solve(&lp(
            &[0.0, 1.0],
            &[&[0.0, 1.0], &[1.0, 1.0]],
            &[0.5, 1.0],
        ))
        .unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
        assert!((sol.objective - 0.5).abs() < 1e-12);
        assert!((sol.t[0] - 0.5).abs() < 1e-10);
        assert!((sol.t[1] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn detects_infeasible() {
        // t1 = -1 is impossible with t ≥ 0
        let sol = solve(&lp(&[1.0], &[&[1.0]], &[-1.0])).unwrap();
        assert_eq!(sol.status, LPStatus::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        // min -t1 s.t. t1 - t2 = 1: push t2 up forever
        let sol = solve(&lp(&[-1.0, 0.0], &[&[1.0, -1.0]], &[1.0])).unwrap();
        assert_eq!(sol.status, LPStatus::Unbounded);
    }

    fn random_bounded_lp(rng: &mut ChaCha8Rng, m: usize, n: usize) -> LinearProgram<f64> {
        // last row Σt = 1 keeps the feasible set inside the simplex, so
        // the enumeration oracle below is exhaustive.
        let mut a: Vec<Vec<f64>> = (0..m - 1)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        a.push(vec![1.0; n]);
        let mut t0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s: f64 = t0.iter().sum();
        t0.iter_mut().for_each(|x| *x /= s);
        let b: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&t0).map(|(a, t)| a * t).sum())
            .collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        LinearProgram::new(c, a, b).unwrap()
    }

    /// Exhaustive minimum over basic feasible solutions.
    fn enumerate_optimum(lp: &LinearProgram<f64>) -> Option<f64> {
        let m = lp.num_rows();
        let n = lp.num_cols();
        let mut best: Option<f64> = None;
        let mut combo: Vec<usize> = (0..m).collect();
        loop {
            let bmat: Vec<Vec<f64>> = (0..m)
                .map(|i| combo.iter().map(|&j| lp.constraints[i][j]).collect())
                .collect();
            if let Some(x) = crate::linalg::solve_square(bmat, lp.rhs.clone(), 1e-12) {
                if x.iter().all(|&v| v >= -1e-9) {
                    let obj: f64 = combo.iter().zip(&x).map(|(&j, &v)| lp.objective[j] * v).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
            // next m-combination of {0..n}
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if combo[i] != i + n - m {
                    combo[i] += 1;
                    for k in i + 1..m {
                        combo[k] = combo[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn matches_exhaustive_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let prog = random_bounded_lp(&mut rng, 4, 10);
            let sol = solve(&prog).unwrap();
            assert_eq!(sol.status, LPStatus::Optimal);
            let oracle = enumerate_optimum(&prog).expect("feasible by construction");
            assert!(
                (sol.objective - oracle).abs() <= 1e-9,
                "simplex {} vs enumeration {}",
                sol.objective,
                oracle
            );
        }
    }

    #[test]
    fn basic_solution_support_and_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let prog = random_bounded_lp(&mut rng, 5, 12);
            let sol = solve(&prog).unwrap();
            assert!(sol.is_optimal());
            let nonzero = sol.t.iter().filter(|&&x| x.abs() > 1e-10).count();
            assert!(nonzero <= prog.num_rows());
            assert!(sol.t.iter().all(|&x| x >= -1e-10));
            let bnorm = prog.rhs.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
            for (row, &b) in prog.constraints.iter().zip(&prog.rhs) {
                let ax: f64 = row.iter().zip(&sol.t).map(|(a, t)| a * t).sum();
                assert!((ax - b).abs() <= 1e-8 * (1.0 + bnorm));
            }
        }
    }

    #[test]
    fn duality_gap_is_tiny() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let prog = random_bounded_lp(&mut rng, 4, 9);
            let sol = solve(&prog).unwrap();
            let by: f64 = prog.rhs.iter().zip(&sol.dual).map(|(b, y)| b * y).sum();
            assert!(
                (sol.objective - by).abs() <= 1e-7 * (1.0 + sol.objective.abs()),
                "gap {}",
                (sol.objective - by).abs()
            );
            // dual feasibility: Aᵀy ≤ c
            for j in 0..prog.num_cols() {
                let aty: f64 = (0..prog.num_rows())
                    .map(|i| prog.constraints[i][j] * sol.dual[i])
                    .sum();
                assert!(aty <= prog.objective[j] + 1e-7);
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let prog = random_bounded_lp(&mut rng, 4, 10);
        let a = solve(&prog).unwrap();
        let b = solve(&prog).unwrap();
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.t, b.t);
        assert!((a.objective - b.objective).abs() == 0.0);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // many ties in the ratio test
        let prog = lp(
            &[1.0, 1.0, 1.0, -1.0, 0.0],
            &[
                &[1.0, 0.0, 0.0, 1.0, 0.0],
                &[0.0, 1.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 1.0, 1.0, 1.0],
            ],
            &[0.0, 0.0, 1.0],
        );
        let sol = solve(&prog).unwrap();
        assert_eq!(sol.status, LPStatus::Optimal);
    }
}

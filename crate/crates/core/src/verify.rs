//! Named property checks runnable from the CLI: envelope identities,
//! Carathéodory bounds, LP cross-checks, example oracles, and the
//! quantum oracle match. Quick mode trims sizes for a fast smoke run.

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::analysis::oscillation;
use crate::examples::{self, ExampleName, ALL_EXAMPLES};
use crate::geometry::{
    caratheodory_reduce, is_convex_on_samples, ConvexCombination, Point, PointCloud,
};
use crate::linalg;
use crate::lp::{self, LPStatus, LinearProgram};
use crate::quantum::{
    self, concurrence_wootters, entanglement_of_formation, DensityMatrix, LinearEntropy,
    PureState, RoofOptions,
};
use crate::roof::SampledConvexProblem;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub quick: bool,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type CheckResult = Result<String, String>;

/// Run the whole suite; failures are collected, not fatal.
pub fn run(quick: bool, seed: u64) -> VerifyReport {
    let checks: Vec<(&'static str, Box<dyn Fn() -> CheckResult>)> = vec![
        ("lp_against_enumeration", Box::new(move || lp_against_enumeration(quick, seed))),
        ("lp_duality_gap", Box::new(move || lp_duality_gap(quick, seed))),
        ("caratheodory_reduction", Box::new(move || caratheodory_reduction(quick, seed))),
        ("restriction_identity", Box::new(move || restriction_identity(quick, seed))),
        ("midpoint_convexity", Box::new(move || midpoint_convexity(quick, seed))),
        ("extension_ordering", Box::new(move || extension_ordering(quick, seed))),
        ("roof_bounds_and_support", Box::new(move || roof_bounds_and_support(quick, seed))),
        ("flat_set_affineness", Box::new(move || flat_set_affineness(quick, seed))),
        ("chip_oracle_grid", Box::new(move || chip_oracle_grid(quick))),
        ("cylinder_puncture_values", Box::new(move || cylinder_puncture_values(quick, seed))),
        ("kink_profile", Box::new(move || kink_profile(quick))),
        ("nonconvex_witness", Box::new(nonconvex_witness),),
        ("vertex_continuity", Box::new(move || vertex_continuity(quick, seed))),
        ("schmidt_and_measures", Box::new(move || schmidt_and_measures(seed))),
        ("concurrence_pure_identity", Box::new(move || concurrence_pure_identity(seed))),
        ("formation_curve", Box::new(formation_curve)),
        ("quantum_roof_oracle", Box::new(move || quantum_roof_oracle(quick, seed))),
        ("zero_on_separable", Box::new(move || zero_on_separable(quick, seed))),
    ];
    let mut outcomes = Vec::with_capacity(checks.len());
    for (name, check) in checks {
        let start = Instant::now();
        let result = check();
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        outcomes.push(CheckOutcome {
            name,
            passed,
            detail,
            seconds,
        });
    }
    VerifyReport {
        quick,
        seed,
        checks: outcomes,
    }
}

pub fn render_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!(
            "{} {:<28} ({:.2}s) {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.seconds,
            c.detail
        ));
    }
    out.push_str(&format!(
        "{}: {} of {} checks passed\n",
        if report.passed() { "OK" } else { "FAILED" },
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len()
    ));
    out
}

fn random_bounded_lp(rng: &mut ChaCha8Rng, m: usize, n: usize) -> LinearProgram<f64> {
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
    LinearProgram::new(c, a, b).expect("generated data is finite")
}

/// Exhaustive minimum over basic feasible solutions.
fn enumerate_optimum(prog: &LinearProgram<f64>) -> Option<f64> {
    let m = prog.num_rows();
    let n = prog.num_cols();
    let mut best: Option<f64> = None;
    let mut combo: Vec<usize> = (0..m).collect();
    loop {
        let bmat: Vec<Vec<f64>> = (0..m)
            .map(|i| combo.iter().map(|&j| prog.constraints[i][j]).collect())
            .collect();
        if let Some(x) = linalg::solve_square(bmat, prog.rhs.clone(), 1e-12) {
            if x.iter().all(|&v| v >= -1e-9) {
                let obj: f64 = combo
                    .iter()
                    .zip(&x)
                    .map(|(&j, &v)| prog.objective[j] * v)
                    .sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
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

fn lp_against_enumeration(quick: bool, seed: u64) -> CheckResult {
    let cases = if quick { 30 } else { 200 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..cases {
        let prog = random_bounded_lp(&mut rng, 4, 10);
        let sol = lp::solve(&prog).map_err(|e| format!("case {k}: {e}"))?;
        if sol.status != LPStatus::Optimal {
            return Err(format!("case {k}: status {:?}", sol.status));
        }
        let oracle = enumerate_optimum(&prog).ok_or_else(|| format!("case {k}: no bfs"))?;
        let gap = (sol.objective - oracle).abs();
        worst = worst.max(gap);
        if gap > 1e-9 {
            return Err(format!("case {k}: simplex {} vs enumeration {oracle}", sol.objective));
        }
    }
    Ok(format!("{cases} LPs, worst gap {worst:.2e}"))
}

fn lp_duality_gap(quick: bool, seed: u64) -> CheckResult {
    let cases = if quick { 20 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1A1);
    let mut worst = 0.0f64;
    for k in 0..cases {
        let prog = random_bounded_lp(&mut rng, 5, 12);
        let sol = lp::solve(&prog).map_err(|e| format!("case {k}: {e}"))?;
        let by: f64 = prog.rhs.iter().zip(&sol.dual).map(|(b, y)| b * y).sum();
        let gap = (sol.objective - by).abs();
        worst = worst.max(gap);
        if gap > 1e-7 * (1.0 + sol.objective.abs()) {
            return Err(format!("case {k}: duality gap {gap:.2e}"));
        }
    }
    Ok(format!("{cases} LPs, worst duality gap {worst:.2e}"))
}

fn caratheodory_reduction(quick: bool, seed: u64) -> CheckResult {
    let cases = if quick { 100 } else { 1000 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xCA7A);
    for k in 0..cases {
        let d = rng.gen_range(2..=6usize);
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let cloud = PointCloud::from_rows(rows).map_err(|e| e.to_string())?;
        let mut w: Vec<f64> = (0..50).map(|_| rng.gen_range(0.001..1.0)).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let comb = ConvexCombination::new((0..50).map(|i| (i, w[i])).collect())
            .map_err(|e| e.to_string())?;
        let target = comb.point(&cloud).map_err(|e| e.to_string())?;
        let red = caratheodory_reduce(&cloud, &comb).map_err(|e| format!("case {k}: {e}"))?;
        if red.support_size() > d + 1 {
            return Err(format!(
                "case {k}: support {} exceeds {}",
                red.support_size(),
                d + 1
            ));
        }
        let back = red.point(&cloud).map_err(|e| e.to_string())?;
        let err = back
            .iter()
            .zip(&target)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if err > 1e-9 {
            return Err(format!("case {k}: reconstruction error {err:.2e}"));
        }
    }
    Ok(format!("{cases} reductions in d ∈ 2..=6, support ≤ d+1"))
}

fn convex_examples() -> Vec<ExampleName> {
    ALL_EXAMPLES
        .iter()
        .copied()
        .filter(|&n| n != ExampleName::NonclosedExtreme)
        .collect()
}

fn example_resolution(name: ExampleName, quick: bool) -> usize {
    match (name, quick) {
        (ExampleName::Combined4d, true) => 12,
        (ExampleName::Combined4d, false) => 24,
        (ExampleName::PuncturedNoExtension, true) => 16,
        (ExampleName::PuncturedNoExtension, false) => 32,
        (_, true) => 24,
        (_, false) => 64,
    }
}

fn restriction_identity(quick: bool, seed: u64) -> CheckResult {
    let per_example = if quick { 30 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0e57);
    let mut worst = 0.0f64;
    for name in convex_examples() {
        let (prob, _) = examples::make_example::<f64>(name, example_resolution(name, quick), seed)
            .map_err(|e| e.to_string())?;
        for _ in 0..per_example {
            let i = rng.gen_range(0..prob.cloud().len());
            let rv = prob
                .roof_eval(&prob.cloud().point(i).clone())
                .map_err(|e| format!("{name} sample {i}: {e}"))?;
            let err = (rv.value - prob.values()[i]).abs();
            worst = worst.max(err);
            if err > 1e-8 {
                return Err(format!("{name} sample {i}: |roof − f| = {err:.2e}"));
            }
        }
    }
    Ok(format!(
        "{} samples per example, worst |roof − f| = {worst:.2e}",
        per_example
    ))
}

fn random_hull_point(
    prob: &SampledConvexProblem<f64>,
    rng: &mut ChaCha8Rng,
    spread: usize,
) -> Point<f64> {
    let n = prob.cloud().len();
    let mut idx: Vec<usize> = (0..spread).map(|_| rng.gen_range(0..n)).collect();
    idx.sort_unstable();
    idx.dedup();
    let mut w: Vec<f64> = idx.iter().map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let mut coords = vec![0.0; prob.cloud().dim()];
    for (&i, &wi) in idx.iter().zip(&w) {
        for (c, &x) in coords.iter_mut().zip(prob.cloud().coords(i)) {
            *c += wi * x;
        }
    }
    Point::new(coords).expect("convex combination of cloud points")
}

fn midpoint_convexity(quick: bool, seed: u64) -> CheckResult {
    let pairs = if quick { 15 } else { 50 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x31d);
    for name in convex_examples() {
        let (prob, _) = examples::make_example::<f64>(name, example_resolution(name, true), seed)
            .map_err(|e| e.to_string())?;
        for k in 0..pairs {
            let x = random_hull_point(&prob, &mut rng, 4);
            let y = random_hull_point(&prob, &mut rng, 4);
            let mid = Point::new(
                x.coords()
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| (a + b) / 2.0)
                    .collect(),
            )
            .expect("midpoint");
            let fx = prob.roof_eval(&x).map_err(|e| e.to_string())?.value;
            let fy = prob.roof_eval(&y).map_err(|e| e.to_string())?.value;
            let fm = prob.roof_eval(&mid).map_err(|e| e.to_string())?.value;
            if fm > (fx + fy) / 2.0 + 1e-8 {
                return Err(format!(
                    "{name} pair {k}: midpoint {fm} above average {}",
                    (fx + fy) / 2.0
                ));
            }
        }
    }
    Ok(format!("{pairs} midpoint checks per example"))
}

fn extension_ordering(quick: bool, seed: u64) -> CheckResult {
    let queries = if quick { 10 } else { 40 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0d9);
    let (prob, _) = examples::make_example::<f64>(ExampleName::PotatoChip, 64, seed)
        .map_err(|e| e.to_string())?;
    let vmin = prob.lower_bound();
    // h = a·f + (1−a)·min f is convex on samples with h ≤ f
    let a = 0.35;
    let lowered: Vec<f64> = prob.values().iter().map(|v| a * v + (1.0 - a) * vmin).collect();
    let lower_prob = SampledConvexProblem::new(prob.cloud().clone(), lowered)
        .map_err(|e| e.to_string())?;
    for k in 0..queries {
        let x = random_hull_point(&prob, &mut rng, 5);
        let rf = prob.roof_eval(&x).map_err(|e| e.to_string())?.value;
        let rh = lower_prob.roof_eval(&x).map_err(|e| e.to_string())?.value;
        if rh > rf + 1e-9 {
            return Err(format!("query {k}: lowered roof {rh} above {rf}"));
        }
    }
    Ok(format!("{queries} ordering checks"))
}

fn roof_bounds_and_support(quick: bool, seed: u64) -> CheckResult {
    let queries = if quick { 10 } else { 30 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b);
    for name in convex_examples() {
        let (prob, _) = examples::make_example::<f64>(name, example_resolution(name, true), seed)
            .map_err(|e| e.to_string())?;
        let d = prob.cloud().dim();
        for _ in 0..queries {
            let x = random_hull_point(&prob, &mut rng, 6);
            let rv = prob.roof_eval(&x).map_err(|e| e.to_string())?;
            if rv.decomposition.support_size() > d + 1 {
                return Err(format!(
                    "{name}: support {} exceeds {}",
                    rv.decomposition.support_size(),
                    d + 1
                ));
            }
            if rv.value < prob.lower_bound() - 1e-10 || rv.value > prob.upper_bound() + 1e-10 {
                return Err(format!("{name}: value {} outside sample range", rv.value));
            }
        }
    }
    Ok("support ≤ d+1 and min f ≤ roof ≤ max f at random queries".into())
}

fn flat_set_affineness(quick: bool, seed: u64) -> CheckResult {
    let queries = if quick { 8 } else { 25 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf1a7);
    let mut worst = 0.0f64;
    for name in [ExampleName::PotatoChip, ExampleName::NoC2, ExampleName::StrictlyConvexRandom] {
        let (prob, _) = examples::make_example::<f64>(name, 48, seed).map_err(|e| e.to_string())?;
        for _ in 0..queries {
            let x = random_hull_point(&prob, &mut rng, 6);
            let flat = prob.flat_set(&x).map_err(|e| format!("{name}: {e}"))?;
            for _ in 0..10 {
                let mut w: Vec<f64> = (0..flat.support.len())
                    .map(|_| rng.gen_range(0.05..1.0))
                    .collect();
                let s: f64 = w.iter().sum();
                w.iter_mut().for_each(|v| *v /= s);
                let mut probe = vec![0.0; prob.cloud().dim()];
                for (wk, p) in w.iter().zip(&flat.support) {
                    for (pj, &cj) in probe.iter_mut().zip(p.coords()) {
                        *pj += wk * cj;
                    }
                }
                let roof = prob
                    .roof_eval(&Point::new(probe.clone()).expect("probe"))
                    .map_err(|e| e.to_string())?
                    .value;
                let aff = flat.functional.evaluate(&probe);
                let err = (roof - aff).abs();
                worst = worst.max(err);
                if err > 1e-8 {
                    return Err(format!("{name}: probe misses the functional by {err:.2e}"));
                }
            }
        }
    }
    Ok(format!("worst probe deviation {worst:.2e}"))
}

fn chip_oracle_grid(quick: bool) -> CheckResult {
    let (n, res) = if quick { (256, 24) } else { (1024, 64) };
    let (prob, spec) =
        examples::make_example::<f64>(ExampleName::PotatoChip, n, 0).map_err(|e| e.to_string())?;
    let grid = prob.roof_grid(res).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut cells = 0usize;
    for (cell, value) in grid.values.iter().enumerate() {
        let Some(v) = value else { continue };
        let coords = grid.cell_coords(cell);
        let Some(oracle) = spec.oracle_at(&coords) else {
            continue;
        };
        cells += 1;
        worst = worst.max((v - oracle).abs());
    }
    if worst > 1e-2 {
        return Err(format!("max grid error {worst:.2e} over {cells} cells"));
    }
    Ok(format!("max grid error {worst:.2e} over {cells} in-hull cells"))
}

fn cylinder_puncture_values(quick: bool, seed: u64) -> CheckResult {
    let n = if quick { 48 } else { 200 };
    for name in [ExampleName::TomatoCan, ExampleName::PuncturedNoExtension] {
        let (prob, _) = examples::make_example::<f64>(name, n, seed).map_err(|e| e.to_string())?;
        let line = prob
            .roof_eval(&Point::new(vec![0.0, 0.6, 0.8]).expect("probe"))
            .map_err(|e| e.to_string())?
            .value;
        if (line - 1.0).abs() > 1e-9 {
            return Err(format!("{name}: shell line value {line}, want 1"));
        }
        let punct = prob
            .roof_eval(&Point::new(vec![0.0, 0.0, 1.0]).expect("probe"))
            .map_err(|e| e.to_string())?
            .value;
        if punct.abs() > 1e-9 {
            return Err(format!("{name}: puncture value {punct}, want 0"));
        }
        let radii = if quick {
            vec![0.3, 0.2]
        } else {
            vec![0.2, 0.1, 0.05]
        };
        let samples = if quick { 200 } else { 400 };
        let report = oscillation(
            &prob,
            &Point::new(vec![0.0, 0.0, 1.0]).expect("probe"),
            &radii,
            samples,
            seed,
        )
        .map_err(|e| e.to_string())?;
        for e in &report.entries {
            let osc = e.osc.ok_or_else(|| format!("{name}: empty ball at r={}", e.radius))?;
            if osc < 0.9 {
                return Err(format!("{name}: osc {osc} at r={} below 0.9", e.radius));
            }
        }
    }
    Ok("shell lines exactly 1, punctures exactly 0, oscillation ≥ 0.9".into())
}

fn kink_profile(quick: bool) -> CheckResult {
    let n = if quick { 128 } else { 512 };
    let (prob, _) = examples::make_example::<f64>(ExampleName::NoC2, n, 0).map_err(|e| e.to_string())?;
    for x in [-0.75, -0.5, -0.25] {
        let v = prob
            .roof_eval(&Point::new(vec![x, 0.0]).expect("probe"))
            .map_err(|e| e.to_string())?
            .value;
        if v.abs() > 1e-6 {
            return Err(format!("roof({x}, 0) = {v:.2e}, want 0"));
        }
    }
    for x in [0.25, 0.5, 0.75] {
        let v = prob
            .roof_eval(&Point::new(vec![x, 0.0]).expect("probe"))
            .map_err(|e| e.to_string())?
            .value;
        let want = (x + 1.0) * x * x;
        if (v - want).abs() > 5e-3 {
            return Err(format!("roof({x}, 0) = {v}, want {want}"));
        }
    }
    Ok("cubic branch and flat branch both match".into())
}

fn nonconvex_witness() -> CheckResult {
    let (prob, _) = examples::make_example::<f64>(ExampleName::NonclosedExtreme, 32, 0)
        .map_err(|e| e.to_string())?;
    let report =
        is_convex_on_samples(prob.cloud(), prob.values()).map_err(|e| e.to_string())?;
    if report.convex {
        return Err("closure data unexpectedly passed the convexity test".into());
    }
    let witness = report.witness.ok_or("missing witness")?;
    let coords = prob.cloud().coords(witness.index);
    if coords.iter().any(|c| c.abs() > 1e-9) {
        return Err(format!("witness at {coords:?}, expected the closure point"));
    }
    Ok(format!(
        "witness at the closure point with cheaper value {:.2e}",
        witness.cheaper_value
    ))
}

fn vertex_continuity(quick: bool, seed: u64) -> CheckResult {
    // the envelope is continuous at extreme points: oscillation decays
    // with the radius at every sampled hull vertex
    let stride = if quick { 6 } else { 3 };
    let radii = [0.2, 0.1, 0.05, 0.025];
    for name in [
        ExampleName::TomatoCan,
        ExampleName::PotatoChip,
        ExampleName::NoC2,
        ExampleName::StrictlyConvexRandom,
    ] {
        let (prob, _) = examples::make_example::<f64>(name, 16, seed).map_err(|e| e.to_string())?;
        let hull = prob.hull().map_err(|e| e.to_string())?;
        let range = prob.upper_bound() - prob.lower_bound();
        for &v in hull.vertex_indices.iter().step_by(stride) {
            let p = prob.cloud().point(v).clone();
            let report = oscillation(&prob, &p, &radii.map(|r| r), 40, seed)
                .map_err(|e| e.to_string())?;
            let osc: Vec<f64> = report
                .entries
                .iter()
                .map(|e| e.osc.unwrap_or(0.0))
                .collect();
            for w in osc.windows(2) {
                if w[1] > 2.0 * w[0] + 1e-9 {
                    return Err(format!(
                        "{name} vertex {v}: osc grew from {} to {}",
                        w[0], w[1]
                    ));
                }
            }
            if osc[3] > 0.75 * osc[0] + 0.02 * range {
                return Err(format!(
                    "{name} vertex {v}: osc {osc:?} does not decay"
                ));
            }
        }
    }
    Ok("oscillation decays at sampled hull vertices".into())
}

fn schmidt_and_measures(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5c4d);
    let gauss = move |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    for k in 0..25 {
        let psi = PureState::normalized([
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
        ])
        .map_err(|e| e.to_string())?;
        let data = quantum::schmidt(&psi).map_err(|e| e.to_string())?;
        let rec = data.reconstruct();
        let err: f64 = rec
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if err > 1e-8 {
            return Err(format!("case {k}: reconstruction error {err:.2e}"));
        }
        let le = quantum::linear_entropy(&psi);
        let prod = if data.rank() == 2 {
            data.lambdas[0] * data.lambdas[1]
        } else {
            0.0
        };
        if (le - (2.0 * prod).sqrt()).abs() > 1e-9 {
            return Err(format!("case {k}: linear entropy identity broken"));
        }
    }
    Ok("25 random states reconstruct; measure identities hold".into())
}

fn concurrence_pure_identity(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0c0);
    let gauss = move |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    let mut worst = 0.0f64;
    for k in 0..25 {
        let psi = PureState::normalized([
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
            quantum::C::new(gauss(&mut rng), gauss(&mut rng)),
        ])
        .map_err(|e| e.to_string())?;
        let rho = DensityMatrix::from_pure(&psi);
        let c = concurrence_wootters(&rho);
        let a = psi.amplitudes();
        let det = a[0] * a[3] - a[1] * a[2];
        let err = (c - 2.0 * det.norm()).abs();
        worst = worst.max(err);
        if err > 1e-8 {
            return Err(format!("case {k}: |C − 2|det|| = {err:.2e}"));
        }
    }
    Ok(format!("25 pure states, worst identity error {worst:.2e}"))
}

fn formation_curve() -> CheckResult {
    // closed-form curve: continuous in p, zero below the threshold 1/3
    let mut prev: Option<f64> = None;
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let w = DensityMatrix::<f64>::werner(p).map_err(|e| e.to_string())?;
        let c = concurrence_wootters(&w);
        let want_c = ((3.0 * p - 1.0) / 2.0).max(0.0);
        if (c - want_c).abs() > 1e-9 {
            return Err(format!("C(W({p})) = {c}, want {want_c}"));
        }
        let e = entanglement_of_formation(&w);
        if let Some(prev) = prev {
            if (e - prev).abs() > 0.2 {
                return Err(format!("formation jumped by {} at p={p}", (e - prev).abs()));
            }
        }
        prev = Some(e);
    }
    Ok("Werner concurrence matches (3p−1)/2 and formation is continuous".into())
}

fn quantum_roof_oracle(quick: bool, seed: u64) -> CheckResult {
    let cases = if quick { 3 } else { 10 };
    let restarts = if quick { 8 } else { 20 };
    let mut hits = 0usize;
    let mut worst = 0.0f64;
    for k in 0..cases {
        let rho = DensityMatrix::<f64>::random(seed.wrapping_add(k as u64), 2)
            .map_err(|e| e.to_string())?;
        let oracle = concurrence_wootters(&rho) / 2.0f64.sqrt();
        let out = quantum::roof_entanglement(
            &rho,
            &LinearEntropy,
            &RoofOptions {
                ensemble_size: Some(4),
                restarts,
                seed: seed.wrapping_add(k as u64),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        if out.upper_bound < oracle - 1e-9 {
            return Err(format!(
                "case {k}: numeric roof {} below the oracle {oracle}",
                out.upper_bound
            ));
        }
        let gap = out.upper_bound - oracle;
        worst = worst.max(gap);
        if gap <= 5e-3 {
            hits += 1;
        }
    }
    if hits < cases - cases / 10 {
        return Err(format!("{hits}/{cases} within 5e-3 of the oracle; worst gap {worst:.2e}"));
    }
    Ok(format!("{hits}/{cases} within 5e-3; worst gap {worst:.2e}"))
}

fn zero_on_separable(quick: bool, seed: u64) -> CheckResult {
    let cases = if quick { 4 } else { 12 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5e9a);
    let mut worst = 0.0f64;
    for k in 0..cases {
        let rho = random_separable(&mut rng).map_err(|e| e.to_string())?;
        let out = quantum::roof_entanglement(
            &rho,
            &LinearEntropy,
            &RoofOptions {
                restarts: if quick { 10 } else { 20 },
                seed: seed.wrapping_add(k as u64),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(out.upper_bound);
        if out.upper_bound > 1e-6 {
            return Err(format!(
                "case {k}: separable state got roof {:.2e}",
                out.upper_bound
            ));
        }
    }
    Ok(format!("{cases} separable mixtures, worst roof {worst:.2e}"))
}

pub(crate) fn random_separable(rng: &mut ChaCha8Rng) -> crate::Result<DensityMatrix<f64>> {
    let members = rng.gen_range(2..=4usize);
    let gauss = |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    let mut weights: Vec<f64> = (0..members).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= s);
    let mut m = vec![vec![quantum::C::new(0.0, 0.0); 4]; 4];
    for &w in &weights {
        let a = [
            quantum::C::new(gauss(rng), gauss(rng)),
            quantum::C::new(gauss(rng), gauss(rng)),
        ];
        let b = [
            quantum::C::new(gauss(rng), gauss(rng)),
            quantum::C::new(gauss(rng), gauss(rng)),
        ];
        let psi = PureState::product(a, b)?;
        let amp = psi.amplitudes();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += amp[i] * amp[j].conj() * quantum::C::new(w, 0.0);
            }
        }
    }
    DensityMatrix::new(m)
}

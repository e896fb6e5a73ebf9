//! Small dense complex-Hermitian linear algebra (2×2 and 4×4).

use num_complex::Complex;

use crate::scalar::Float;

pub type C<S> = Complex<S>;
pub type CMat<S> = Vec<Vec<C<S>>>;

pub fn zeros<S: Float>(n: usize) -> CMat<S> {
    vec![vec![C::new(S::zero(), S::zero()); n]; n]
}

pub fn identity<S: Float>(n: usize) -> CMat<S> {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(S::one(), S::zero());
    }
    m
}

pub fn matmul<S: Float>(a: &CMat<S>, b: &CMat<S>) -> CMat<S> {
    let n = a.len();
    let p = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![C::new(S::zero(), S::zero()); p]; n];
    for i in 0..n {
        for k in 0..inner {
            let aik = a[i][k];
            if aik.norm_sqr() == S::zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] = out[i][j] + aik * b[k][j];
            }
        }
    }
    out
}

pub fn adjoint<S: Float>(a: &CMat<S>) -> CMat<S> {
    let n = a.len();
    let m = a[0].len();
    let mut out = vec![vec![C::new(S::zero(), S::zero()); n]; m];
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn conj_entrywise<S: Float>(a: &CMat<S>) -> CMat<S> {
    a.iter()
        .map(|row| row.iter().map(|z| z.conj()).collect())
        .collect()
}

pub fn max_abs_diff<S: Float>(a: &CMat<S>, b: &CMat<S>) -> S {
    let mut worst = S::zero();
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            worst = worst.max((x - y).norm());
        }
    }
    worst
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations: returns eigenvalues (descending) and the matching
/// orthonormal eigenvectors as columns.
pub fn eig_hermitian<S: Float>(a: &CMat<S>) -> (Vec<S>, CMat<S>) {
    let n = a.len();
    let mut m = a.clone();
    let mut v = identity::<S>(n);
    let norm: S = a
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<S>()
        .sqrt()
        .max(S::one());
    let tol = S::of(1e-12) * norm;
    for _sweep in 0..100 {
        let mut off = S::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(m[p][q].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                let r = apq.norm();
                if r <= tol {
                    continue;
                }
                let phase = apq / C::new(r, S::zero());
                let app = m[p][p].re;
                let aqq = m[q][q].re;
                let tau = (aqq - app) / (S::two() * r);
                let t = if tau >= S::zero() {
                    -S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                // columns p and q of both m and v transform by the
                // rotation [[c, -s·phase], [s·conj(phase), c]]
                let cc = C::new(c, S::zero());
                let sp = C::new(s, S::zero()) * phase;
                for i in 0..n {
                    let mip = m[i][p];
                    let miq = m[i][q];
                    m[i][p] = mip * cc + miq * C::new(s, S::zero()) * phase.conj();
                    m[i][q] = miq * cc - mip * sp;
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = vip * cc + viq * C::new(s, S::zero()) * phase.conj();
                    v[i][q] = viq * cc - vip * sp;
                }
                for j in 0..n {
                    let mpj = m[p][j];
                    let mqj = m[q][j];
                    m[p][j] = mpj * cc + mqj * C::new(s, S::zero()) * phase;
                    m[q][j] = mqj * cc - mpj * sp.conj();
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<S> = (0..n).map(|i| m[i][i].re).collect();
    order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap());
    let sorted_eigs: Vec<S> = order.iter().map(|&i| eigs[i]).collect();
    let mut vecs = zeros::<S>(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i][new_col] = v[i][old_col];
        }
    }
    (sorted_eigs, vecs)
}

/// Hermitian square root via the eigendecomposition. Eigenvalues below a
/// relative cutoff are treated as zero so that roundoff on a rank-deficient
/// input is not amplified by the square root.
pub fn sqrt_psd<S: Float>(a: &CMat<S>) -> CMat<S> {
    let n = a.len();
    let (eigs, v) = eig_hermitian(a);
    let cut = eigs[0].max(S::zero()) * S::of(1e-14);
    let mut out = zeros::<S>(n);
    for (k, &lam) in eigs.iter().enumerate() {
        if lam <= cut {
            continue;
        }
        let s = lam.sqrt();
        for i in 0..n {
            for j in 0..n {
                out[i][j] = out[i][j] + v[i][k] * v[j][k].conj() * C::new(s, S::zero());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn eig_of_known_hermitian() {
        // eigenvalues of [[2, i], [-i, 2]] are 1 and 3
        let a = vec![vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]];
        let (eigs, v) = eig_hermitian(&a);
        assert!((eigs[0] - 3.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
        // reconstruct
        let mut rec = zeros::<f64>(2);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    rec[i][j] += v[i][k] * v[j][k].conj() * c(eigs[k], 0.0);
                }
            }
        }
        assert!(max_abs_diff(&a, &rec) < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_4x4() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g: CMat<f64> = (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            // a = g + g† is Hermitian
            let gt = adjoint(&g);
            let a: CMat<f64> = (0..4)
                .map(|i| (0..4).map(|j| g[i][j] + gt[i][j]).collect())
                .collect();
            let (eigs, v) = eig_hermitian(&a);
            // trace matches eigenvalue sum
            let tr: f64 = (0..4).map(|i| a[i][i].re).sum();
            let es: f64 = eigs.iter().sum();
            assert!((tr - es).abs() < 1e-10);
            // columns orthonormal
            let vtv = matmul(&adjoint(&v), &v);
            assert!(max_abs_diff(&vtv, &identity(4)) < 1e-10);
            // reconstruction
            let mut rec = zeros::<f64>(4);
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        rec[i][j] += v[i][k] * v[j][k].conj() * c(eigs[k], 0.0);
                    }
                }
            }
            assert!(max_abs_diff(&a, &rec) < 1e-9);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g: CMat<f64> = (0..4)
            .map(|_| {
                (0..2)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        // psd = g g†
        let psd = matmul(&g, &adjoint(&g));
        let root = sqrt_psd(&psd);
        let back = matmul(&root, &root);
        assert!(max_abs_diff(&psd, &back) < 1e-10);
    }
}

//! Convex-roof entanglement measures for two qubits: Schmidt machinery,
//! the linear and von Neumann entropies on pure states, the closed-form
//! concurrence oracle, ensemble parametrization by isometries, and the
//! numeric roof minimization over ensembles.

mod cmatrix;
mod roof;

pub use roof::{roof_entanglement, roof_entanglement_parallel, RoofOptions, RoofOutcome};

use num_complex::Complex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::scalar::Float;
use crate::Result;

use cmatrix::{adjoint, conj_entrywise, eig_hermitian, matmul, max_abs_diff, sqrt_psd, CMat};

pub type C<S> = Complex<S>;

const NORM_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIGENVALUE_FLOOR: f64 = -1e-9;
const RANK_CUT: f64 = 1e-12;
const ISOMETRY_TOL: f64 = 1e-8;
const RECONSTRUCTION_TOL: f64 = 1e-7;

/// A normalized two-qubit state vector in the basis |00⟩,|01⟩,|10⟩,|11⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<S> {
    amplitudes: [C<S>; 4],
}

impl<S: Float> PureState<S> {
    pub fn new(amplitudes: [C<S>; 4]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<S>().sqrt();
        if (norm - S::one()).abs() > S::of(NORM_TOL) {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL:e}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(raw: [C<S>; 4]) -> Result<Self> {
        let norm = raw.iter().map(|z| z.norm_sqr()).sum::<S>().sqrt();
        if norm <= S::of(1e-14) {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        let inv = C::new(S::one() / norm, S::zero());
        Ok(Self {
            amplitudes: [raw[0] * inv, raw[1] * inv, raw[2] * inv, raw[3] * inv],
        })
    }

    pub fn amplitudes(&self) -> &[C<S>; 4] {
        &self.amplitudes
    }

    /// |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
    pub fn bell_phi_plus() -> Self {
        let h = C::new(S::half().sqrt(), S::zero());
        let z = C::new(S::zero(), S::zero());
        Self {
            amplitudes: [h, z, z, h],
        }
    }

    /// |a⟩ ⊗ |b⟩ from single-qubit amplitudes.
    pub fn product(a: [C<S>; 2], b: [C<S>; 2]) -> Result<Self> {
        Self::normalized([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
    }

    /// The 2×2 reshape M with M[i][j] = ⟨ij|ψ⟩.
    fn reshape(&self) -> CMat<S> {
        vec![
            vec![self.amplitudes[0], self.amplitudes[1]],
            vec![self.amplitudes[2], self.amplitudes[3]],
        ]
    }
}

/// Schmidt decomposition data: coefficients λ₁ ≥ … ≥ λ_r > 0 summing to
/// one, with the matching orthonormal factors.
#[derive(Debug, Clone)]
pub struct SchmidtData<S> {
    pub lambdas: Vec<S>,
    pub left: Vec<[C<S>; 2]>,
    pub right: Vec<[C<S>; 2]>,
}

impl<S: Float> SchmidtData<S> {
    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    /// Σ √λᵢ eᵢ⊗fᵢ, for checking the decomposition.
    pub fn reconstruct(&self) -> [C<S>; 4] {
        let z = C::new(S::zero(), S::zero());
        let mut amp = [z; 4];
        for ((&lam, e), f) in self.lambdas.iter().zip(&self.left).zip(&self.right) {
            let s = C::new(lam.sqrt(), S::zero());
            for a in 0..2 {
                for b in 0..2 {
                    amp[2 * a + b] = amp[2 * a + b] + s * e[a] * f[b];
                }
            }
        }
        amp
    }
}

/// Schmidt decomposition via the 2×2 reshape: λᵢ are the squared singular
/// values, sorted descending.
pub fn schmidt<S: Float>(psi: &PureState<S>) -> Result<SchmidtData<S>> {
    let m = psi.reshape();
    let h = matmul(&adjoint(&m), &m);
    let (eigs, v) = eig_hermitian(&h);
    let mut lambdas = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (k, &lam) in eigs.iter().enumerate() {
        if lam <= S::of(RANK_CUT) {
            continue;
        }
        let sigma = lam.sqrt();
        let vk = [v[0][k], v[1][k]];
        let mv = [
            m[0][0] * vk[0] + m[0][1] * vk[1],
            m[1][0] * vk[0] + m[1][1] * vk[1],
        ];
        let inv = C::new(S::one() / sigma, S::zero());
        left.push([mv[0] * inv, mv[1] * inv]);
        right.push([vk[0].conj(), vk[1].conj()]);
        lambdas.push(lam);
    }
    if lambdas.is_empty() {
        return Err(Error::InvalidState("state has no Schmidt weight".into()));
    }
    Ok(SchmidtData {
        lambdas,
        left,
        right,
    })
}

/// √(1 − Σλᵢ²): zero exactly on product states.
pub fn linear_entropy<S: Float>(psi: &PureState<S>) -> S {
    let data = schmidt(psi).expect("normalized states always decompose");
    let sum_sq: S = data.lambdas.iter().map(|&l| l * l).sum();
    (S::one() - sum_sq).max(S::zero()).sqrt()
}

/// −Σ λᵢ log₂ λᵢ with 0·log 0 = 0.
pub fn von_neumann_entanglement<S: Float>(psi: &PureState<S>) -> S {
    let data = schmidt(psi).expect("normalized states always decompose");
    -data
        .lambdas
        .iter()
        .filter(|&&l| l > S::zero())
        .map(|&l| l * l.log2())
        .sum::<S>()
}

/// A pure-state entanglement measure, pluggable into the roof optimizer.
pub trait EntanglementMeasure<S>: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, psi: &PureState<S>) -> S;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LinearEntropy;

impl<S: Float> EntanglementMeasure<S> for LinearEntropy {
    fn name(&self) -> &'static str {
        "linear_entropy"
    }
    fn evaluate(&self, psi: &PureState<S>) -> S {
        linear_entropy(psi)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VonNeumannEntropy;

impl<S: Float> EntanglementMeasure<S> for VonNeumannEntropy {
    fn name(&self) -> &'static str {
        "von_neumann"
    }
    fn evaluate(&self, psi: &PureState<S>) -> S {
        von_neumann_entanglement(psi)
    }
}

/// A 4×4 density matrix: Hermitian, trace one, positive semidefinite.
#[derive(Debug, Clone)]
pub struct DensityMatrix<S> {
    m: CMat<S>,
}

impl<S: Float> DensityMatrix<S> {
    pub fn new(m: CMat<S>) -> Result<Self> {
        if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
            return Err(Error::InvalidState("density matrix must be 4×4".into()));
        }
        let herm = max_abs_diff(&m, &adjoint(&m));
        if herm > S::of(HERMITICITY_TOL) {
            return Err(Error::InvalidState(format!(
                "matrix deviates from Hermitian by {herm:e}"
            )));
        }
        let trace: S = (0..4).map(|i| m[i][i].re).sum();
        if (trace - S::one()).abs() > S::of(TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "trace {trace} deviates from 1"
            )));
        }
        let (eigs, _) = eig_hermitian(&m);
        if eigs.iter().any(|&e| e < S::of(EIGENVALUE_FLOOR)) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:e}",
                eigs[eigs.len() - 1]
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMat<S> {
        &self.m
    }

    pub fn from_pure(psi: &PureState<S>) -> Self {
        let a = psi.amplitudes();
        let m = (0..4)
            .map(|i| (0..4).map(|j| a[i] * a[j].conj()).collect())
            .collect();
        Self { m }
    }

    pub fn maximally_mixed() -> Self {
        let mut m = cmatrix::zeros::<S>(4);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C::new(S::of(0.25), S::zero());
        }
        Self { m }
    }

    /// p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4.
    pub fn werner(p: S) -> Result<Self> {
        if !(S::zero()..=S::one()).contains(&p) {
            return Err(Error::InvalidState(format!(
                "mixing parameter {p} outside [0, 1]"
            )));
        }
        let bell = Self::from_pure(&PureState::bell_phi_plus());
        let mut m = cmatrix::zeros::<S>(4);
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { S::of(0.25) } else { S::zero() };
                m[i][j] = bell.m[i][j] * C::new(p, S::zero()) + C::new((S::one() - p) * id, S::zero());
            }
        }
        Ok(Self { m })
    }

    /// Random state of the given rank: ρ = GG†/tr(GG†) with complex
    /// Gaussian G of shape 4×rank.
    pub fn random(seed: u64, rank: usize) -> Result<Self> {
        if !(1..=4).contains(&rank) {
            return Err(Error::InvalidState(format!("rank {rank} outside 1..=4")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gauss = || {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            S::of((-2.0 * u1.ln()).sqrt() * u2.cos())
        };
        let g: CMat<S> = (0..4)
            .map(|_| (0..rank).map(|_| C::new(gauss(), gauss())).collect())
            .collect();
        let gg = matmul(&g, &adjoint(&g));
        let tr: S = (0..4).map(|i| gg[i][i].re).sum();
        let m = gg
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|z| z / C::new(tr, S::zero()))
                    .collect()
            })
            .collect();
        Ok(Self { m })
    }

    /// Eigenvalues (descending) and eigenvectors (columns).
    pub fn eigen(&self) -> (Vec<S>, CMat<S>) {
        eig_hermitian(&self.m)
    }

    pub fn rank(&self) -> usize {
        let (eigs, _) = self.eigen();
        eigs.iter().filter(|&&e| e > S::of(RANK_CUT)).count()
    }

    /// Conjugate by a product unitary U₁⊗U₂ (each 2×2).
    pub fn conjugate_local(&self, u1: &CMat<S>, u2: &CMat<S>) -> Result<Self> {
        let mut u = cmatrix::zeros::<S>(4);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        u[2 * a + c][2 * b + d] = u1[a][b] * u2[c][d];
                    }
                }
            }
        }
        let m = matmul(&matmul(&u, &self.m), &adjoint(&u));
        Self::new(m)
    }
}

/// σy⊗σy in the computational basis (a real matrix).
fn spin_flip_matrix<S: Float>() -> CMat<S> {
    let z = C::new(S::zero(), S::zero());
    let p = C::new(S::one(), S::zero());
    let n = C::new(-S::one(), S::zero());
    vec![
        vec![z, z, z, n],
        vec![z, z, p, z],
        vec![z, p, z, z],
        vec![n, z, z, z],
    ]
}

/// Wootters concurrence: C(ρ) = max(0, μ₁−μ₂−μ₃−μ₄) where the μᵢ are the
/// descending square roots of the eigenvalues of ρ·ρ̃ with
/// ρ̃ = (σy⊗σy) ρ* (σy⊗σy). The eigenvalues are computed from the
/// Hermitian form √ρ·ρ̃·√ρ, which shares them.
pub fn concurrence_wootters<S: Float>(rho: &DensityMatrix<S>) -> S {
    let y = spin_flip_matrix::<S>();
    let rho_tilde = matmul(&matmul(&y, &conj_entrywise(rho.matrix())), &y);
    let root = sqrt_psd(rho.matrix());
    let inner = matmul(&matmul(&root, &rho_tilde), &root);
    // symmetrize away roundoff before the eigensolve
    let herm: CMat<S> = {
        let it = adjoint(&inner);
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| (inner[i][j] + it[i][j]) * C::new(S::half(), S::zero()))
                    .collect()
            })
            .collect()
    };
    let (eigs, _) = eig_hermitian(&herm);
    // relative spectral cutoff: eigensolver noise on the zero cluster
    // would otherwise be amplified by the square root
    let cut = eigs[0].max(S::zero()) * S::of(1e-13);
    let mu: Vec<S> = eigs
        .iter()
        .map(|&e| if e > cut { e.sqrt() } else { S::zero() })
        .collect();
    (mu[0] - mu[1] - mu[2] - mu[3]).max(S::zero())
}

/// Binary entropy h(x) = −x log₂x − (1−x) log₂(1−x).
pub fn binary_entropy<S: Float>(x: S) -> S {
    let mut acc = S::zero();
    for v in [x, S::one() - x] {
        if v > S::zero() {
            acc -= v * v.log2();
        }
    }
    acc
}

/// Closed-form roof of the von Neumann measure for two qubits:
/// E = h((1 + √(1−C²))/2).
pub fn entanglement_of_formation<S: Float>(rho: &DensityMatrix<S>) -> S {
    let c = concurrence_wootters(rho);
    let arg = (S::one() + (S::one() - c * c).max(S::zero()).sqrt()) * S::half();
    binary_entropy(arg)
}

/// A pure-state ensemble realizing a density matrix.
#[derive(Debug, Clone)]
pub struct PureDecomposition<S> {
    pub members: Vec<(S, PureState<S>)>,
}

impl<S: Float> PureDecomposition<S> {
    /// Σ p_k |ψ_k⟩⟨ψ_k| as a raw matrix.
    pub fn reconstruct(&self) -> CMat<S> {
        let mut m = cmatrix::zeros::<S>(4);
        for (p, psi) in &self.members {
            let a = psi.amplitudes();
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = m[i][j] + a[i] * a[j].conj() * C::new(*p, S::zero());
                }
            }
        }
        m
    }

    /// Largest entrywise deviation of the reconstruction from `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix<S>) -> S {
        max_abs_diff(&self.reconstruct(), rho.matrix())
    }

    pub fn average<M: EntanglementMeasure<S> + ?Sized>(&self, measure: &M) -> S {
        self.members
            .iter()
            .map(|(p, psi)| *p * measure.evaluate(psi))
            .sum()
    }
}

/// Ensemble from an isometry: |ψ̃_k⟩ = Σⱼ V_kj √μⱼ |eⱼ⟩ over the
/// eigendecomposition of ρ, with p_k = ⟨ψ̃_k|ψ̃_k⟩.
pub fn decomposition_from_isometry<S: Float>(
    rho: &DensityMatrix<S>,
    v: &CMat<S>,
) -> Result<PureDecomposition<S>> {
    let (eigs, vecs) = rho.eigen();
    let kept: Vec<usize> = (0..4).filter(|&j| eigs[j] > S::of(RANK_CUT)).collect();
    let r = kept.len();
    let m = v.len();
    if m < r || v.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: v.first().map_or(0, |row| row.len()),
        });
    }
    // V†V = I_r within tolerance
    let vtv = matmul(&adjoint(v), v);
    let dev = max_abs_diff(&vtv, &cmatrix::identity(r));
    if dev > S::of(ISOMETRY_TOL) {
        return Err(Error::InvalidIsometry {
            deviation: num_traits::ToPrimitive::to_f64(&dev).unwrap_or(f64::NAN),
        });
    }
    let scaled: Vec<[C<S>; 4]> = kept
        .iter()
        .map(|&j| {
            let s = C::new(eigs[j].sqrt(), S::zero());
            [
                vecs[0][j] * s,
                vecs[1][j] * s,
                vecs[2][j] * s,
                vecs[3][j] * s,
            ]
        })
        .collect();
    let mut members = Vec::with_capacity(m);
    for row in v.iter() {
        let z = C::new(S::zero(), S::zero());
        let mut tilde = [z; 4];
        for (vkj, w) in row.iter().zip(&scaled) {
            for (t, &wi) in tilde.iter_mut().zip(w) {
                *t = *t + *vkj * wi;
            }
        }
        let p: S = tilde.iter().map(|a| a.norm_sqr()).sum();
        if p <= S::of(1e-14) {
            continue;
        }
        members.push((p, PureState::normalized(tilde)?));
    }
    let decomposition = PureDecomposition { members };
    let err = decomposition.reconstruction_error(rho);
    if err > S::of(RECONSTRUCTION_TOL) {
        return Err(Error::Numerical(format!(
            "isometry ensemble misses the state by {err:e}"
        )));
    }
    Ok(decomposition)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Cf = C<f64>;

    fn cz(re: f64, im: f64) -> Cf {
        Cf::new(re, im)
    }

    fn random_state(rng: &mut ChaCha8Rng) -> PureState<f64> {
        let mut gauss = || {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u1.ln()).sqrt() * u2.cos()
        };
        PureState::normalized([
            cz(gauss(), gauss()),
            cz(gauss(), gauss()),
            cz(gauss(), gauss()),
            cz(gauss(), gauss()),
        ])
        .unwrap()
    }

    #[test]
    fn schmidt_of_basis_and_bell() {
        let zero = PureState::new([cz(1.0, 0.0), cz(0.0, 0.0), cz(0.0, 0.0), cz(0.0, 0.0)])
            .unwrap();
        let data = schmidt(&zero).unwrap();
        assert_eq!(data.rank(), 1);
        assert!((data.lambdas[0] - 1.0).abs() < 1e-12);

        let bell = PureState::<f64>::bell_phi_plus();
        let data = schmidt(&bell).unwrap();
        assert_eq!(data.rank(), 2);
        assert!((data.lambdas[0] - 0.5).abs() < 1e-12);
        assert!((data.lambdas[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn schmidt_reconstructs_and_matches_partial_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let psi = random_state(&mut rng);
            let data = schmidt(&psi).unwrap();
            let rec = data.reconstruct();
            let err: f64 = rec
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-8, "reconstruction error {err}");

            // independent oracle: eigenvalues of the reduced matrix
            // ρ_A[a][a'] = Σ_b ψ[2a+b] ψ*[2a'+b], by the closed-form
            // quadratic for 2×2 Hermitian spectra
            let amps = psi.amplitudes();
            let mut red = [[cz(0.0, 0.0); 2]; 2];
            for a in 0..2 {
                for ap in 0..2 {
                    for b in 0..2 {
                        red[a][ap] += amps[2 * a + b] * amps[2 * ap + b].conj();
                    }
                }
            }
            let tr = red[0][0].re + red[1][1].re;
            let det = (red[0][0] * red[1][1] - red[0][1] * red[1][0]).re;
            let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
            let oracle = [(tr + disc) / 2.0, (tr - disc) / 2.0];
            for (l, o) in data.lambdas.iter().zip(oracle) {
                assert!((l - o).abs() < 1e-10, "lambda {l} vs oracle {o}");
            }
            // orthonormality of the factors
            for vs in [&data.left, &data.right] {
                for i in 0..vs.len() {
                    for j in 0..vs.len() {
                        let dot = vs[i][0].conj() * vs[j][0] + vs[i][1].conj() * vs[j][1];
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((dot.norm() - want).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn linear_entropy_values() {
        let product = PureState::product([cz(1.0, 0.0), cz(0.0, 0.0)], [cz(0.6, 0.0), cz(0.0, 0.8)])
            .unwrap();
        assert!(linear_entropy(&product) < 1e-7);
        let bell = PureState::<f64>::bell_phi_plus();
        assert!((linear_entropy(&bell) - 0.5f64.sqrt()).abs() < 1e-12);
        // algebraic identity √(2λ₁λ₂)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let psi = random_state(&mut rng);
            let data = schmidt(&psi).unwrap();
            let prod = if data.rank() == 2 {
                data.lambdas[0] * data.lambdas[1]
            } else {
                0.0
            };
            assert!((linear_entropy(&psi) - (2.0 * prod).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn von_neumann_values() {
        let product = PureState::product([cz(0.8, 0.0), cz(0.6, 0.0)], [cz(1.0, 0.0), cz(0.0, 0.0)])
            .unwrap();
        assert!(von_neumann_entanglement(&product) < 1e-7);
        let bell = PureState::<f64>::bell_phi_plus();
        assert!((von_neumann_entanglement(&bell) - 1.0).abs() < 1e-12);
        // λ = (0.9, 0.1) against the binary entropy
        let psi = PureState::new([
            cz(0.9f64.sqrt(), 0.0),
            cz(0.0, 0.0),
            cz(0.0, 0.0),
            cz(0.1f64.sqrt(), 0.0),
        ])
        .unwrap();
        let want = binary_entropy(0.9f64);
        assert!((want - 0.46900).abs() < 1e-5);
        assert!((von_neumann_entanglement(&psi) - want).abs() < 1e-10);
    }

    #[test]
    fn concurrence_oracle_values() {
        let bell = DensityMatrix::from_pure(&PureState::<f64>::bell_phi_plus());
        let c = concurrence_wootters(&bell);
        assert!((c - 1.0).abs() < 1e-9, "bell concurrence {c}");
        let mixed = DensityMatrix::<f64>::maximally_mixed();
        assert!(concurrence_wootters(&mixed) < 1e-9);
        // pure states: C = 2√(λ₁λ₂) and also 2|a₀₀a₁₁ − a₀₁a₁₀|
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let psi = random_state(&mut rng);
            let rho = DensityMatrix::from_pure(&psi);
            let c = concurrence_wootters(&rho);
            let data = schmidt(&psi).unwrap();
            let prod = if data.rank() == 2 {
                data.lambdas[0] * data.lambdas[1]
            } else {
                0.0
            };
            assert!((c - 2.0 * prod.sqrt()).abs() < 1e-8);
            let a = psi.amplitudes();
            let det = a[0] * a[3] - a[1] * a[2];
            assert!((c - 2.0 * det.norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn concurrence_is_locally_unitary_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let haar2 = |rng: &mut ChaCha8Rng| -> CMat<f64> {
            let gauss = |rng: &mut ChaCha8Rng| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                (-2.0 * u1.ln()).sqrt() * u2.cos()
            };
            let mut a = [
                cz(gauss(rng), gauss(rng)),
                cz(gauss(rng), gauss(rng)),
            ];
            let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
            a[0] /= na;
            a[1] /= na;
            let mut b = [
                cz(gauss(rng), gauss(rng)),
                cz(gauss(rng), gauss(rng)),
            ];
            let proj = a[0].conj() * b[0] + a[1].conj() * b[1];
            b[0] -= proj * a[0];
            b[1] -= proj * a[1];
            let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
            b[0] /= nb;
            b[1] /= nb;
            vec![vec![a[0], b[0]], vec![a[1], b[1]]]
        };
        for seed in 0..10 {
            let rho = DensityMatrix::<f64>::random(seed, 3).unwrap();
            let u1 = haar2(&mut rng);
            let u2 = haar2(&mut rng);
            let rotated = rho.conjugate_local(&u1, &u2).unwrap();
            let diff = (concurrence_wootters(&rho) - concurrence_wootters(&rotated)).abs();
            assert!(diff <= 1e-8, "concurrence shifted by {diff}");
        }
    }

    #[test]
    fn werner_concurrence_and_formation() {
        // C(W(p)) = max(0, (3p−1)/2); eigenvalues of ρρ̃ are those of ρ²
        for (p, want) in [(0.0f64, 0.0f64), (0.2, 0.0), (1.0 / 3.0, 0.0), (0.8, 0.7), (1.0, 1.0)] {
            let w = DensityMatrix::werner(p).unwrap();
            let c = concurrence_wootters(&w);
            assert!((c - want).abs() < 1e-9, "C(W({p})) = {c}, want {want}");
        }
        let w = DensityMatrix::werner(0.8).unwrap();
        let e = entanglement_of_formation(&w);
        let want = binary_entropy((1.0 + 0.51f64.sqrt()) / 2.0);
        assert!((e - want).abs() < 1e-12);
        assert!((e - 0.5918574).abs() < 1e-7, "EoF(W(0.8)) = {e}");
        let bell = DensityMatrix::from_pure(&PureState::<f64>::bell_phi_plus());
        assert!((entanglement_of_formation(&bell) - 1.0).abs() < 1e-9);
        let sep = DensityMatrix::<f64>::maximally_mixed();
        assert!(entanglement_of_formation(&sep) < 1e-9);
    }

    #[test]
    fn isometry_ensembles() {
        // V = I_r reproduces the eigendecomposition
        let rho = DensityMatrix::<f64>::random(5, 2).unwrap();
        let v = cmatrix::identity::<f64>(2);
        let dec = decomposition_from_isometry(&rho, &v).unwrap();
        assert_eq!(dec.members.len(), 2);
        let (eigs, _) = rho.eigen();
        for ((p, _), e) in dec.members.iter().zip(eigs) {
            assert!((p - e).abs() < 1e-10);
        }
        assert!(dec.reconstruction_error(&rho) < 1e-10);

        // rank-1 state: every member equals the state up to phase
        let psi = PureState::bell_phi_plus();
        let rho = DensityMatrix::from_pure(&psi);
        let s = 0.5f64.sqrt();
        let v = vec![vec![cz(s, 0.0)], vec![cz(0.0, s)]];
        let dec = decomposition_from_isometry(&rho, &v).unwrap();
        assert_eq!(dec.members.len(), 2);
        for (_, member) in &dec.members {
            let overlap: Cf = member
                .amplitudes()
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-9);
        }

        // random Haar-ish isometry still reconstructs
        let rho = DensityMatrix::<f64>::random(9, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut gauss = || {
            let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            let u2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            (-2.0 * u1.ln()).sqrt() * u2.cos()
        };
        let mut v: CMat<f64> = (0..5)
            .map(|_| (0..3).map(|_| cz(gauss(), gauss())).collect())
            .collect();
        // Gram-Schmidt the columns
        for j in 0..3 {
            for prev in 0..j {
                let dot: Cf = (0..5).map(|i| v[i][prev].conj() * v[i][j]).sum();
                for i in 0..5 {
                    let correction = dot * v[i][prev];
                    v[i][j] -= correction;
                }
            }
            let norm: f64 = (0..5).map(|i| v[i][j].norm_sqr()).sum::<f64>().sqrt();
            for i in 0..5 {
                v[i][j] /= norm;
            }
        }
        let dec = decomposition_from_isometry(&rho, &v).unwrap();
        assert!(dec.reconstruction_error(&rho) < 1e-7);

        // a non-isometry is rejected
        let bad = vec![vec![cz(1.0, 0.0)], vec![cz(1.0, 0.0)]];
        assert!(matches!(
            decomposition_from_isometry(&rho, &bad),
            Err(Error::DimensionMismatch { .. })
        ));
        let rho1 = DensityMatrix::<f64>::random(5, 1).unwrap();
        assert!(matches!(
            decomposition_from_isometry(&rho1, &bad),
            Err(Error::InvalidIsometry { .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        // non-hermitian rejected
        let mut m = cmatrix::identity::<f64>(4);
        for row in m.iter_mut() {
            for z in row.iter_mut() {
                *z = *z * cz(0.25, 0.0);
            }
        }
        m[0][1] = cz(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        // wrong trace rejected
        let m = cmatrix::identity::<f64>(4);
        assert!(DensityMatrix::new(m).is_err());
    }
}

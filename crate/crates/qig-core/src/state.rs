//! Validated quantum-state types and the randomness used by tests and case
//! sweeps.
//!
//! Everything downstream assumes a *faithful* density matrix: Hermitian,
//! unit trace, and all eigenvalues at or above an explicit floor. The
//! constructor checks all of that once, caches the eigendecomposition, and
//! verifies the decomposition actually reproduces the input, so later code
//! can lean on `eigenvalues()` without re-validating.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // float intrinsics under no_std
use num_traits::Float as _;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{hermitian_eigen, ComplexMatrix};
use crate::{tol, Error, Result};

/// A matrix checked to be Hermitian and stored in exactly Hermitian form
/// (triangles averaged, diagonal imaginary parts dropped).
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        // Scale-aware: a matrix of norm 1e6 is allowed proportionally more
        // rounding asymmetry than one of norm 1.
        let defect = mat.hermiticity_defect();
        if defect > tol::HERMITICITY * (1.0 + mat.max_abs()) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { mat: symmetrize(&mat) })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        hermitian_eigen(&self.mat)
    }
}

/// Replaces a numerically Hermitian matrix by its exact Hermitian part.
pub fn symmetrize(mat: &ComplexMatrix) -> ComplexMatrix {
    let n = mat.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(mat[(i, i)].re, 0.0)
        } else {
            0.5 * (mat[(i, j)] + mat[(j, i)].conj())
        }
    })
}

/// Rebuilds `sum_k vals[k] |u_k><u_k|` from eigenpairs.
pub fn from_spectrum(vals: &[f64], vecs: &ComplexMatrix) -> ComplexMatrix {
    let n = vecs.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..vals.len() {
        for i in 0..n {
            let uik = vecs[(i, k)];
            if uik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += uik * vals[k] * vecs[(j, k)].conj();
            }
        }
    }
    symmetrize(&out)
}

/// Eigendecomposition with an upfront hermiticity check.
pub fn spectral_decompose(mat: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let defect = mat.hermiticity_defect();
    if defect > tol::HERMITICITY {
        return Err(Error::NotHermitian { defect });
    }
    hermitian_eigen(mat)
}

/// Applies a scalar function to a Hermitian matrix through its spectrum.
pub fn matrix_function(mat: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (vals, vecs) = spectral_decompose(mat)?;
    let mapped: Vec<f64> = vals.iter().map(|&x| f(x)).collect();
    Ok(from_spectrum(&mapped, &vecs))
}

/// A faithful density matrix with its eigendecomposition cached.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
    floor: f64,
}

impl DensityMatrix {
    /// Validates and decomposes `mat`. The checks, in order: squareness,
    /// hermiticity, real unit trace, eigenvalues at or above `floor`,
    /// unitarity of the computed eigenvector matrix, and reconstruction of
    /// the input from the computed eigenpairs.
    pub fn new(mat: ComplexMatrix, floor: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        let defect = mat.hermiticity_defect();
        if defect > tol::HERMITICITY {
            return Err(Error::NotHermitian { defect });
        }
        let tr = mat.trace();
        if tr.im.abs() > tol::REAL_TRACE {
            return Err(Error::TraceNotReal { defect: tr.im.abs() });
        }
        if (tr.re - 1.0).abs() > tol::UNIT_TRACE {
            return Err(Error::TraceNotOne { trace: tr.re });
        }
        let mat = symmetrize(&mat);
        let (eigenvalues, eigenvectors) = hermitian_eigen(&mat)?;
        if eigenvalues[0] < floor {
            return Err(Error::BelowFloor { eigenvalue: eigenvalues[0], floor });
        }
        let n = mat.rows();
        let unit_defect = eigenvectors
            .adjoint()
            .mul(&eigenvectors)
            .sub(&ComplexMatrix::identity(n))
            .max_abs();
        if unit_defect > tol::UNITARITY {
            return Err(Error::NotUnitary { defect: unit_defect });
        }
        let residual = from_spectrum(&eigenvalues, &eigenvectors).sub(&mat).max_abs();
        if residual > tol::RECONSTRUCTION {
            return Err(Error::ReconstructionFailed { residual });
        }
        Ok(Self { mat, eigenvalues, eigenvectors, floor })
    }

    /// Same validation with the library default floor.
    pub fn new_default_floor(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat, tol::PD_FLOOR)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are eigenvectors, matching `eigenvalues()`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// `Tr(D a)` for Hermitian `a`; the imaginary part is discarded.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        self.mat.mul(a).trace().re
    }

    /// Conjugates `a` into the eigenbasis: `U^dag a U`.
    pub fn to_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.adjoint().mul(a).mul(&self.eigenvectors)
    }

    /// Conjugates back out of the eigenbasis: `U a U^dag`.
    pub fn from_eigenbasis(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.eigenvectors.mul(a).mul(&self.eigenvectors.adjoint())
    }

    /// `D^p` through the cached spectrum.
    pub fn power(&self, p: f64) -> ComplexMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&x| x.powf(p)).collect();
        from_spectrum(&vals, &self.eigenvectors)
    }

    /// `log D` through the cached spectrum.
    pub fn log(&self) -> ComplexMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&x| x.ln()).collect();
        from_spectrum(&vals, &self.eigenvectors)
    }
}

/// A traceless Hermitian matrix: a tangent direction on the manifold of
/// density matrices.
#[derive(Clone, Debug)]
pub struct TangentVector {
    mat: ComplexMatrix,
}

impl TangentVector {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare { rows: mat.rows(), cols: mat.cols() });
        }
        let defect = mat.hermiticity_defect();
        if defect > tol::HERMITICITY * (1.0 + mat.max_abs()) {
            return Err(Error::NotHermitian { defect });
        }
        let tr = mat.trace().norm();
        if tr > tol::TRACELESS * (1.0 + mat.max_abs()) {
            return Err(Error::NotTraceless { trace: tr });
        }
        Ok(Self { mat: symmetrize(&mat) })
    }

    /// Projects out the trace component before validating, so any Hermitian
    /// input becomes a tangent.
    pub fn from_hermitian_centered(mat: &ComplexMatrix) -> Result<Self> {
        let n = mat.rows();
        let tr = mat.trace();
        let shift = tr / n as f64;
        let centered = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                mat[(i, j)] - shift
            } else {
                mat[(i, j)]
            }
        });
        Self::new(centered)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Orthogonal traceless Hermitian basis with `Tr E_i E_j = delta_ij / 2`.
#[derive(Clone, Debug)]
pub struct TracelessBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl TracelessBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &ComplexMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Worst deviation of `Tr E_i E_j` from `delta_ij / 2`.
    pub fn gram_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.elements.len() {
            for j in 0..self.elements.len() {
                let g = self.elements[i].mul(&self.elements[j]).trace();
                let want = if i == j { 0.5 } else { 0.0 };
                worst = worst.max((g.re - want).abs()).max(g.im.abs());
            }
        }
        worst
    }
}

/// Generalized Pauli basis for dimension `n`, scaled to `Tr E_i E_j =
/// delta_ij / 2`; for `n = 2` these are exactly the Pauli matrices over 2.
///
/// Ordering: for each column `k` from 1 up, first the symmetric and
/// antisymmetric off-diagonal pair with every `j < k`, then the diagonal
/// element that flattens the first `k + 1` entries.
pub fn gell_mann(n: usize) -> Result<TracelessBasis> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    let mut elements = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            let mut sym = ComplexMatrix::zeros(n, n);
            sym[(j, k)] = Complex64::new(0.5, 0.0);
            sym[(k, j)] = Complex64::new(0.5, 0.0);
            elements.push(sym);
            let mut asym = ComplexMatrix::zeros(n, n);
            asym[(j, k)] = Complex64::new(0.0, -0.5);
            asym[(k, j)] = Complex64::new(0.0, 0.5);
            elements.push(asym);
        }
        let norm = (2.0 / (k as f64 * (k + 1) as f64)).sqrt();
        let mut diag = ComplexMatrix::zeros(n, n);
        for j in 0..k {
            diag[(j, j)] = Complex64::new(0.5 * norm, 0.0);
        }
        diag[(k, k)] = Complex64::new(-0.5 * norm * k as f64, 0.0);
        elements.push(diag);
    }
    let basis = TracelessBasis { dim: n, elements };
    let defect = basis.gram_defect();
    if defect > tol::BASIS_GRAM {
        return Err(Error::ReconstructionFailed { residual: defect });
    }
    Ok(basis)
}

/// Thermal state `exp(-beta h) / Tr exp(-beta h)`, computed spectrally with
/// the exponent shifted so the largest weight is `exp(0)`.
pub fn gibbs_state(h: &HermitianMatrix, beta: f64) -> Result<DensityMatrix> {
    let (vals, vecs) = h.eigen()?;
    let top = vals.iter().map(|&x| -beta * x).fold(f64::NEG_INFINITY, f64::max);
    let mut w: Vec<f64> = vals.iter().map(|&x| (-beta * x - top).exp()).collect();
    let z: f64 = w.iter().sum();
    for x in w.iter_mut() {
        *x /= z;
    }
    let wmin = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let mat = from_spectrum(&w, &vecs);
    DensityMatrix::new(mat, 0.5 * wmin)
}

/// The deterministic generator used across the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent per-case seed from a master seed and case index,
/// using a SplitMix64 finalizer so nearby indices decorrelate.
pub fn case_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random Hermitian matrix with Gaussian entries (GUE-style, unnormalized).
pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let mat = g.add(&g.adjoint()).scale(0.5);
    HermitianMatrix::new(mat).expect("symmetrized Gaussian matrix is Hermitian")
}

/// Random traceless Hermitian matrix (a tangent direction).
pub fn random_tangent(n: usize, rng: &mut ChaCha8Rng) -> TangentVector {
    let h = random_hermitian(n, rng);
    TangentVector::from_hermitian_centered(h.matrix())
        .expect("centered Hermitian matrix is a tangent")
}

/// Random faithful density matrix with all eigenvalues at or above `floor`.
///
/// Draws a Gaussian Hermitian matrix, squares its spectrum into a
/// probability vector sharing the same eigenvectors, and, if the smallest
/// weight undershoots the floor, mixes linearly toward the maximally mixed
/// state by exactly enough to clear it (with a little padding so the
/// constructor's check is not on a knife edge).
pub fn random_density(n: usize, floor: f64, rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    let uniform = 1.0 / n as f64;
    if floor >= uniform {
        return Err(Error::InfeasibleFloor { floor, dim: n });
    }
    let h = random_hermitian(n, rng);
    let (vals, vecs) = h.eigen()?;
    let mut w: Vec<f64> = vals.iter().map(|&x| x * x).collect();
    let total: f64 = w.iter().sum();
    if total < 1e-300 {
        w = vec![uniform; n];
    } else {
        for x in w.iter_mut() {
            *x /= total;
        }
    }
    let wmin = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let padded = floor * 1.0625 + 1e-300;
    if wmin < padded {
        let t = (padded - wmin) / (uniform - wmin);
        for x in w.iter_mut() {
            *x = (1.0 - t) * *x + t * uniform;
        }
    }
    let mat = from_spectrum(&w, &vecs);
    DensityMatrix::new(mat, floor)
}

/// Haar-distributed random unitary via modified Gram-Schmidt on a complex
/// Gaussian matrix. MGS leaves the R diagonal real and positive, which is
/// the normalization that makes the Q factor Haar.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Result<ComplexMatrix> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(rng), gaussian(rng)));
    let mut q = g;
    for j in 0..n {
        for i in 0..j {
            // <q_i, q_j> with the conjugate on the first slot.
            let mut dot = Complex64::new(0.0, 0.0);
            for r in 0..n {
                dot += q[(r, i)].conj() * q[(r, j)];
            }
            for r in 0..n {
                let qri = q[(r, i)];
                q[(r, j)] -= dot * qri;
            }
        }
        let norm = (0..n).map(|r| q[(r, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-150 {
            return Err(Error::RankDeficient { min_eigenvalue: norm });
        }
        for r in 0..n {
            q[(r, j)] /= norm;
        }
    }
    let defect = q.adjoint().mul(&q).sub(&ComplexMatrix::identity(n)).max_abs();
    if defect > tol::UNITARITY {
        return Err(Error::NotUnitary { defect });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_x_spectrum() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let (vals, _) = spectral_decompose(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gell_mann_dim_two_is_half_pauli() {
        let basis = gell_mann(2).unwrap();
        assert_eq!(basis.len(), 3);
        // sigma_x / 2
        assert_eq!(basis.element(0)[(0, 1)], Complex64::new(0.5, 0.0));
        // sigma_y / 2
        assert_eq!(basis.element(1)[(0, 1)], Complex64::new(0.0, -0.5));
        // sigma_z / 2
        assert_eq!(basis.element(2)[(0, 0)], Complex64::new(0.5, 0.0));
        assert_eq!(basis.element(2)[(1, 1)], Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn gell_mann_gram_and_tracelessness() {
        for n in 2..=5 {
            let basis = gell_mann(n).unwrap();
            assert_eq!(basis.len(), n * n - 1);
            assert!(basis.gram_defect() <= tol::BASIS_GRAM);
            for e in basis.elements() {
                assert!(e.trace().norm() < 1e-15);
                assert!(e.hermiticity_defect() < 1e-15);
            }
        }
    }

    #[test]
    fn random_density_is_faithful_across_dims() {
        let mut rng = seeded_rng(11);
        for n in 2..=8 {
            for _ in 0..(1000 / n) {
                let d = random_density(n, tol::PD_FLOOR, &mut rng).unwrap();
                assert!((d.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(d.min_eigenvalue() >= tol::PD_FLOOR);
                let rec = from_spectrum(d.eigenvalues(), d.eigenvectors());
                assert!(rec.sub(d.matrix()).max_abs() < tol::RECONSTRUCTION);
            }
        }
    }

    #[test]
    fn random_density_respects_a_tight_floor() {
        let mut rng = seeded_rng(12);
        for _ in 0..100 {
            let d = random_density(3, 0.05, &mut rng).unwrap();
            assert!(d.min_eigenvalue() >= 0.05);
        }
    }

    #[test]
    fn random_density_rejects_infeasible_floor() {
        let mut rng = seeded_rng(13);
        assert!(matches!(
            random_density(4, 0.3, &mut rng),
            Err(Error::InfeasibleFloor { .. })
        ));
    }

    #[test]
    fn gibbs_of_pauli_z() {
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 0)] = Complex64::new(1.0, 0.0);
        h[(1, 1)] = Complex64::new(-1.0, 0.0);
        let d = gibbs_state(&HermitianMatrix::new(h).unwrap(), 1.0).unwrap();
        let e = core::f64::consts::E;
        let z = e + 1.0 / e;
        assert!((d.matrix()[(0, 0)].re - (1.0 / e) / z).abs() < 1e-14);
        assert!((d.matrix()[(1, 1)].re - e / z).abs() < 1e-14);
        assert!(d.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn gibbs_survives_large_spread() {
        // Spread 400 in the exponent would overflow without the shift.
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 0)] = Complex64::new(200.0, 0.0);
        h[(1, 1)] = Complex64::new(-200.0, 0.0);
        let d = gibbs_state(&HermitianMatrix::new(h).unwrap(), 1.0).unwrap();
        assert!((d.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(d.matrix()[(1, 1)].re > 0.99);
    }

    #[test]
    fn tangent_is_traceless_and_centering_works() {
        let mut rng = seeded_rng(14);
        for n in 2..=6 {
            let t = random_tangent(n, &mut rng);
            assert!(t.matrix().trace().norm() <= tol::TRACELESS);
        }
        let not_traceless = ComplexMatrix::identity(2);
        assert!(matches!(
            TangentVector::new(not_traceless),
            Err(Error::NotTraceless { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = seeded_rng(15);
        for n in 2..=7 {
            let u = random_unitary(n, &mut rng).unwrap();
            let defect = u.adjoint().mul(&u).sub(&ComplexMatrix::identity(n)).max_abs();
            assert!(defect < 1e-13, "n={n} defect {defect}");
        }
    }

    #[test]
    fn case_seeds_are_deterministic_and_distinct() {
        let a = case_seed(1234, 0);
        let b = case_seed(1234, 1);
        assert_eq!(a, case_seed(1234, 0));
        assert_ne!(a, b);
        assert_ne!(case_seed(1234, 2), case_seed(1235, 2));
    }

    #[test]
    fn density_constructor_rejects_bad_inputs() {
        let not_unit = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new_default_floor(not_unit),
            Err(Error::TraceNotOne { .. })
        ));
        let mut not_herm = ComplexMatrix::zeros(2, 2);
        not_herm[(0, 0)] = Complex64::new(0.5, 0.0);
        not_herm[(1, 1)] = Complex64::new(0.5, 0.0);
        not_herm[(0, 1)] = Complex64::new(0.3, 0.0);
        assert!(matches!(
            DensityMatrix::new_default_floor(not_herm),
            Err(Error::NotHermitian { .. })
        ));
        let mut pure = ComplexMatrix::zeros(2, 2);
        pure[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            DensityMatrix::new_default_floor(pure),
            Err(Error::BelowFloor { .. })
        ));
    }

    #[test]
    fn matrix_function_square_root() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(4.0, 0.0);
        m[(1, 1)] = Complex64::new(9.0, 0.0);
        let r = matrix_function(&m, |x| x.sqrt()).unwrap();
        assert!((r[(0, 0)].re - 2.0).abs() < 1e-14);
        assert!((r[(1, 1)].re - 3.0).abs() < 1e-14);
    }
}

//! Dense complex vectors and matrices for small dimensions.
//!
//! The toolkit only ever handles objects of dimension a few dozen, so storage
//! is a plain `Vec<Complex64>` and every operation is a direct loop. The one
//! nontrivial algorithm is [`top_eigenpair`], a power iteration tuned for the
//! matrices this crate actually feeds it: Hermitian matrices that are exactly
//! or nearly rank-1 projectors.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Column vector over `Complex64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    components: Vec<Complex64>,
}

impl CVector {
    /// Wraps a nonempty list of components.
    ///
    /// Panics if `components` is empty; a zero-dimensional vector is never
    /// meaningful here.
    pub fn new(components: Vec<Complex64>) -> Self {
        assert!(!components.is_empty(), "CVector requires at least one component");
        CVector { components }
    }

    /// Zero vector of dimension `dim`.
    pub fn zeros(dim: usize) -> Self {
        CVector::new(vec![Complex64::ZERO; dim])
    }

    /// Computational basis state `e_index` of dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = CVector::zeros(dim);
        v.components[index] = Complex64::ONE;
        v
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        CVector::new(pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// Squared Euclidean norm.
    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the vector scaled to unit norm.
    ///
    /// Panics on the zero vector.
    pub fn normalized(&self) -> CVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Componentwise scaling by a complex factor.
    pub fn scaled(&self, factor: Complex64) -> CVector {
        CVector::new(self.components.iter().map(|c| c * factor).collect())
    }

    /// Componentwise difference `self - rhs`.
    ///
    /// Panics on dimension mismatch; used internally where dimensions are
    /// known to agree.
    pub fn sub(&self, rhs: &CVector) -> CVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        CVector::new(
            self.components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// In-place update `self += factor * rhs`.
    pub fn add_scaled(&mut self, rhs: &CVector, factor: Complex64) {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        for (a, b) in self.components.iter_mut().zip(&rhs.components) {
            *a += factor * b;
        }
    }
}

impl std::ops::Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.components[index]
    }
}

/// Inner product `<u, v>`, conjugate-linear in the first argument.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
    }
    Ok(u.components
        .iter()
        .zip(&v.components)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Square matrix over `Complex64`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of side `dim`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "CMatrix requires positive dimension");
        CMatrix { dim, entries: vec![Complex64::ZERO; dim * dim] }
    }

    /// Identity matrix of side `dim`.
    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for p in 0..dim {
            m.set(p, p, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix of side `dim` from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::MalformedInput(format!(
                "matrix of side {dim} requires {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(CMatrix { dim, entries })
    }

    /// Elementary matrix `E_pq` with a single 1 at row `p`, column `q`.
    pub fn elementary(dim: usize, p: usize, q: usize) -> Self {
        assert!(p < dim && q < dim, "elementary index ({p},{q}) out of range for side {dim}");
        let mut m = CMatrix::zeros(dim);
        m.set(p, q, Complex64::ONE);
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &CVector, v: &CVector) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
        }
        let d = u.dim();
        let mut m = CMatrix::zeros(d);
        for p in 0..d {
            for q in 0..d {
                m.set(p, q, u[p] * v[q].conj());
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> Complex64 {
        self.entries[p * self.dim + q]
    }

    #[inline]
    pub fn set(&mut self, p: usize, q: usize, value: Complex64) {
        self.entries[p * self.dim + q] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|p| self.get(p, p)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim);
        for p in 0..self.dim {
            for q in 0..self.dim {
                m.set(q, p, self.get(p, q).conj());
            }
        }
        m
    }

    /// Matrix product `self * rhs`.
    ///
    /// Panics on dimension mismatch.
    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut m = CMatrix::zeros(d);
        for p in 0..d {
            for k in 0..d {
                let a = self.get(p, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for q in 0..d {
                    m.entries[p * d + q] += a * rhs.entries[k * d + q];
                }
            }
        }
        m
    }

    /// Matrix-vector product `self * v`.
    ///
    /// Panics on dimension mismatch.
    pub fn mul_vec(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim(), "matrix and vector dimensions differ");
        let d = self.dim;
        let mut out = CVector::zeros(d);
        for p in 0..d {
            let mut acc = Complex64::ZERO;
            for q in 0..d {
                acc += self.entries[p * d + q] * v[q];
            }
            out.components[p] = acc;
        }
        out
    }

    /// Entrywise difference `self - rhs`.
    ///
    /// Panics on dimension mismatch.
    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        CMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// In-place update `self += factor * rhs`.
    pub fn add_scaled(&mut self, rhs: &CMatrix, factor: f64) {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += factor * b;
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of `M[p][q] - conj(M[q][p])` over all entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in 0..self.dim {
            for q in 0..self.dim {
                let r = (self.get(p, q) - self.get(q, p).conj()).norm();
                worst = worst.max(r);
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (p, q): (usize, usize)) -> &Complex64 {
        &self.entries[p * self.dim + q]
    }
}

/// Frobenius inner product `tr(A^dagger B)`, conjugate-linear in the first
/// argument.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
    }
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Parameters of the power iteration behind [`top_eigenpair`].
#[derive(Debug, Clone)]
pub struct PowerIterationConfig {
    /// Reject the input if its Hermiticity residual exceeds this.
    pub hermiticity_tol: f64,
    /// Accept an eigenpair only once `norm(M v - lambda v)` is at most this.
    pub residual_tol: f64,
    /// Accept only once successive eigenvalue estimates differ by less than
    /// this.
    pub convergence_tol: f64,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Seed for the random starting vector; fixed by default so results are
    /// reproducible.
    pub seed: u64,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        PowerIterationConfig {
            hermiticity_tol: 1e-10,
            residual_tol: 1e-10,
            convergence_tol: 1e-14,
            max_iterations: 10_000,
            seed: 0x706f77_69746572,
        }
    }
}

/// Largest-magnitude eigenvalue and a unit eigenvector of a Hermitian matrix,
/// computed by power iteration with the default [`PowerIterationConfig`].
///
/// Intended for matrices whose dominant eigenvalue is well separated, which
/// covers every use in this crate (rank-1 projectors and small perturbations
/// of them). A spectrum with two eigenvalues of equal largest magnitude and
/// opposite sign makes the iteration oscillate; it then fails with
/// [`Error::NoConvergence`] rather than returning a bad pair.
pub fn top_eigenpair(m: &CMatrix) -> Result<(f64, CVector)> {
    top_eigenpair_with(m, &PowerIterationConfig::default())
}

/// [`top_eigenpair`] with explicit parameters.
pub fn top_eigenpair_with(m: &CMatrix, config: &PowerIterationConfig) -> Result<(f64, CVector)> {
    let herm = m.hermiticity_residual();
    if herm > config.hermiticity_tol {
        return Err(Error::NotHermitian { residual: herm, tol: config.hermiticity_tol });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut v = random_unit_vector(m.dim(), &mut rng);
    let mut prev_lambda = f64::INFINITY;
    let mut best_residual = f64::INFINITY;
    for _ in 0..config.max_iterations {
        let w = m.mul_vec(&v);
        // v is unit, so the Rayleigh quotient is just Re(<v, w>); the
        // imaginary part vanishes for Hermitian m.
        let lambda = inner(&v, &w).expect("dimensions agree").re;
        let residual = w.sub(&v.scaled(Complex64::new(lambda, 0.0))).norm();
        best_residual = best_residual.min(residual);
        if residual <= config.residual_tol && (lambda - prev_lambda).abs() < config.convergence_tol
        {
            return Ok((lambda, v));
        }
        prev_lambda = lambda;
        let wnorm = w.norm();
        if wnorm == 0.0 {
            // v is annihilated exactly, so (0, v) is an exact eigenpair.
            return Ok((0.0, v));
        }
        v = w.scaled(Complex64::new(1.0 / wnorm, 0.0));
    }
    Err(Error::NoConvergence { max_iterations: config.max_iterations, residual: best_residual })
}

/// Random vector with independent standard complex Gaussian components,
/// scaled to unit norm.
pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v = CVector::new(
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect(),
        );
        // A draw this close to zero has probability ~1e-300 but would poison
        // the normalization, so redraw.
        if v.norm() > 1e-6 {
            return v.normalized();
        }
    }
}

/// Haar-like random unitary built by Gram-Schmidt orthonormalization of a
/// matrix with independent complex Gaussian entries; the columns are the
/// orthonormal frame.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        let mut columns: Vec<CVector> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v = random_unit_vector(dim, rng).scaled(Complex64::new(2.0, 0.0));
            // Two orthogonalization passes keep the result orthonormal to
            // machine precision even for nearly dependent draws.
            for _ in 0..2 {
                for c in &columns {
                    let overlap = inner(c, &v).expect("dimensions agree");
                    v.add_scaled(c, -overlap);
                }
            }
            if v.norm() < 1e-8 {
                ok = false;
                break;
            }
            columns.push(v.normalized());
        }
        if !ok {
            continue;
        }
        let mut m = CMatrix::zeros(dim);
        for (q, col) in columns.iter().enumerate() {
            for p in 0..dim {
                m.set(p, q, col[p]);
            }
        }
        return m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_matches_componentwise_conjugate_sum() {
        let u = CVector::from_pairs(&[(1.0, 2.0), (0.5, -1.0), (-0.25, 0.75)]);
        let v = CVector::from_pairs(&[(-0.5, 0.5), (2.0, 1.0), (1.5, -0.5)]);
        let mut expected = Complex64::ZERO;
        for k in 0..3 {
            expected += u[k].conj() * v[k];
        }
        let got = inner(&u, &v).unwrap();
        assert!((got - expected).norm() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let u = CVector::from_pairs(&[(1.0, 1.0), (0.0, -2.0)]);
        let v = CVector::from_pairs(&[(0.5, 0.0), (1.0, 3.0)]);
        let factor = c(0.3, -0.7);
        let lhs = inner(&u.scaled(factor), &v).unwrap();
        let rhs = factor.conj() * inner(&u, &v).unwrap();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn inner_of_vector_with_itself_is_norm_squared() {
        let u = CVector::from_pairs(&[(3.0, -4.0), (0.0, 2.0)]);
        let s = inner(&u, &u).unwrap();
        assert!((s.re - u.norm_sqr()).abs() < 1e-12);
        assert!(s.im.abs() < 1e-15);
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let u = CVector::zeros(2);
        let v = CVector::zeros(3);
        assert!(matches!(
            inner(&u, &v),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn frobenius_inner_of_elementary_matrices_is_kronecker_delta() {
        let d = 3;
        for p in 0..d {
            for q in 0..d {
                for r in 0..d {
                    for s in 0..d {
                        let e1 = CMatrix::elementary(d, p, q);
                        let e2 = CMatrix::elementary(d, r, s);
                        let got = frobenius_inner(&e1, &e2).unwrap();
                        let expected = if (p, q) == (r, s) { 1.0 } else { 0.0 };
                        assert!((got - c(expected, 0.0)).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_inner_matches_trace_of_adjoint_product() {
        let a = CMatrix::from_entries(
            2,
            vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, -1.0), c(2.0, 0.5)],
        )
        .unwrap();
        let b = CMatrix::from_entries(
            2,
            vec![c(0.5, -0.5), c(1.0, 1.0), c(-2.0, 0.0), c(0.25, 0.75)],
        )
        .unwrap();
        let got = frobenius_inner(&a, &b).unwrap();
        let expected = a.adjoint().matmul(&b).trace();
        assert!((got - expected).norm() < 1e-12);
    }

    #[test]
    fn frobenius_inner_rejects_dimension_mismatch() {
        let a = CMatrix::zeros(2);
        let b = CMatrix::zeros(3);
        assert!(matches!(
            frobenius_inner(&a, &b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn outer_product_entries() {
        let u = CVector::from_pairs(&[(1.0, 1.0), (2.0, 0.0)]);
        let v = CVector::from_pairs(&[(0.0, 1.0), (1.0, -1.0)]);
        let m = CMatrix::outer(&u, &v).unwrap();
        for p in 0..2 {
            for q in 0..2 {
                assert!((m.get(p, q) - u[p] * v[q].conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn top_eigenpair_of_diagonal_projector() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, Complex64::ONE);
        let (lambda, v) = top_eigenpair(&m).unwrap();
        assert!((lambda - 1.0).abs() < 1e-12);
        assert!((v[0].norm() - 1.0).abs() < 1e-10);
        assert!(v[1].norm() < 1e-10);
    }

    #[test]
    fn top_eigenpair_of_scaled_identity_reports_degenerate_eigenvalue() {
        let mut m = CMatrix::identity(2);
        m.add_scaled(&CMatrix::identity(2), -0.5);
        let (lambda, v) = top_eigenpair(&m).unwrap();
        assert!((lambda - 0.5).abs() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn top_eigenpair_of_rank_one_projector_recovers_the_state() {
        let u = CVector::from_pairs(&[(0.6, 0.0), (0.0, 0.8)]);
        let m = CMatrix::outer(&u, &u).unwrap();
        let (lambda, v) = top_eigenpair(&m).unwrap();
        assert!((lambda - 1.0).abs() < 1e-10);
        let overlap = inner(&u, &v).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-10);
    }

    #[test]
    fn top_eigenpair_converges_for_negative_dominant_eigenvalue() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, c(-1.0, 0.0));
        m.set(1, 1, c(0.5, 0.0));
        let (lambda, _) = top_eigenpair(&m).unwrap();
        assert!((lambda + 1.0).abs() < 1e-10);
    }

    #[test]
    fn top_eigenpair_rejects_non_hermitian_input() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, Complex64::ONE);
        assert!(matches!(top_eigenpair(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn top_eigenpair_fails_on_opposite_sign_tie() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, Complex64::ONE);
        m.set(1, 1, -Complex64::ONE);
        assert!(matches!(top_eigenpair(&m), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn top_eigenpair_of_zero_matrix_is_zero() {
        let m = CMatrix::zeros(3);
        let (lambda, v) = top_eigenpair(&m).unwrap();
        assert_eq!(lambda, 0.0);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_unitary_columns_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2usize, 3, 5, 8] {
            let u = random_unitary(dim, &mut rng);
            let gram = u.adjoint().matmul(&u);
            let defect = gram.sub(&CMatrix::identity(dim)).max_abs();
            assert!(defect < 1e-12, "dim {dim}: defect {defect}");
        }
    }

    #[test]
    fn random_unit_vector_is_normalized_and_seeded() {
        let mut rng1 = ChaCha8Rng::seed_from_u64(11);
        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        let a = random_unit_vector(4, &mut rng1);
        let b = random_unit_vector(4, &mut rng2);
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_eq!(a, b);
    }
}

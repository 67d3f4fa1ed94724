//! The lifted `C^{d^2}` picture: each unit state `ω` in `C^d` becomes the
//! vector of entries of its rank-1 projector, `w_pq = ω_p·conj(ω_q)`.
//!
//! Under this lift the modulus-squared of a state overlap becomes an honest
//! inner product: `bloch_inner(lift(u), lift(v)) = |inner(u, v)|^2`, real and
//! nonnegative. Orthonormality and unbiasedness conditions on states turn
//! into a Gram condition on lifted vectors, which is what
//! [`verify_bloch_set`] checks. The lift is inverted by [`matrix_from_bloch`]
//! (reshape to a `d x d` matrix) followed by [`reconstruct_state`] (top
//! eigenvector, with a phase convention).
//!
//! A [`BlochVector`] holds arbitrary components: inputs that fail hermiticity
//! or factorization must be representable so verifiers can report on them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_inner, top_eigenpair_with, CMatrix, CVector, PowerIterationConfig};
use crate::mub::MubSet;
use crate::report::{VerificationReport, WorstCase};

/// Normalization tolerance required of states fed to [`lift_state`].
pub const LIFT_NORM_TOL: f64 = 1e-10;
/// Hermiticity/unit-trace tolerance required by [`matrix_from_bloch`], and
/// the idempotence tolerance required by [`reconstruct_state`].
pub const MATRIX_CONSTRAINT_TOL: f64 = 1e-8;
/// How close to 1 the top eigenvalue must be for [`reconstruct_state`].
pub const EIGENVALUE_WINDOW: f64 = 1e-6;
/// Components at least this large in modulus anchor the reconstruction phase
/// convention.
pub const PHASE_CUTOFF: f64 = 1e-8;

/// A vector in `C^{d^2}` with components `w_pq` indexed by `(p, q)`, stored
/// row-major with `q` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    d: usize,
    components: Vec<Complex64>,
}

impl BlochVector {
    /// Wraps `d*d` components.
    pub fn from_components(d: usize, components: Vec<Complex64>) -> Result<Self> {
        if d == 0 || components.len() != d * d {
            return Err(Error::MalformedInput(format!(
                "lifted vector for dimension {d} requires {} components, got {}",
                d * d,
                components.len()
            )));
        }
        Ok(BlochVector { d, components })
    }

    /// The state dimension `d` (the component count is `d*d`).
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Row-major components, `q` fastest.
    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    /// Component `w_pq`.
    pub fn component(&self, p: usize, q: usize) -> Complex64 {
        self.components[p * self.d + q]
    }

    /// `Σ_p w_pp`.
    pub fn trace(&self) -> Complex64 {
        (0..self.d).map(|p| self.component(p, p)).sum()
    }

    /// Largest modulus of `w_pq - conj(w_qp)`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for p in 0..self.d {
            for q in 0..self.d {
                worst = worst.max((self.component(p, q) - self.component(q, p).conj()).norm());
            }
        }
        worst
    }

    /// `|trace - 1|`.
    pub fn trace_residual(&self) -> f64 {
        (self.trace() - Complex64::ONE).norm()
    }

    /// Reshapes the components into the `d x d` matrix with entry `(p, q)`
    /// equal to `w_pq`, without any validity checks.
    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_entries(self.d, self.components.clone())
            .expect("component count is d*d by construction")
    }
}

pub(crate) fn lift_unchecked(state: &CVector) -> BlochVector {
    let d = state.dim();
    let mut components = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            components.push(state[p] * state[q].conj());
        }
    }
    BlochVector { d, components }
}

/// Lifts a unit state `ω` to `w_pq = ω_p·conj(ω_q)`.
///
/// The output is Hermitian (`w_pq = conj(w_qp)`) and has unit trace up to
/// roundoff, with no correction step; both follow from the factorized form.
pub fn lift_state(state: &CVector) -> Result<BlochVector> {
    let residual = (state.norm() - 1.0).abs();
    if !(residual <= LIFT_NORM_TOL) {
        return Err(Error::NotNormalized { residual, tol: LIFT_NORM_TOL });
    }
    Ok(lift_unchecked(state))
}

/// Lifts every vector of every basis, preserving the grouping.
pub fn lift_mub_set(set: &MubSet) -> Result<Vec<Vec<BlochVector>>> {
    set.bases()
        .iter()
        .map(|basis| basis.vectors().iter().map(lift_state).collect())
        .collect()
}

/// Inner product `Σ_pq conj(w1_pq)·w2_pq` on lifted vectors.
///
/// For `w1 = lift(u)`, `w2 = lift(v)` this equals `|inner(u, v)|^2`: real,
/// nonnegative, and exactly the squared overlap modulus.
pub fn bloch_inner(w1: &BlochVector, w2: &BlochVector) -> Result<Complex64> {
    if w1.d != w2.d {
        return Err(Error::DimensionMismatch { left: w1.d, right: w2.d });
    }
    Ok(w1
        .components
        .iter()
        .zip(&w2.components)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// A `d x d` matrix validated as Hermitian with unit trace, carrying its
/// measured idempotence defect.
///
/// Produced by [`matrix_from_bloch`]. Idempotence is deliberately a flag
/// rather than a construction gate: a Hermitian unit-trace matrix that is
/// not a rank-1 projector (for example `I/d`) is a legitimate diagnostic
/// input, and [`reconstruct_state`] is the operation that insists on rank 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorMatrix {
    d: usize,
    matrix: CMatrix,
    idempotence_residual: f64,
}

impl ProjectorMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `max_abs(M^2 - M)`, measured at construction.
    pub fn idempotence_residual(&self) -> f64 {
        self.idempotence_residual
    }

    /// Whether the matrix is a rank-1 projector within `tol`, i.e. whether
    /// the factorized form `w_pq = ω_p·conj(ω_q)` can hold.
    pub fn is_rank_one(&self, tol: f64) -> bool {
        self.idempotence_residual <= tol
    }
}

/// Reshapes a lifted vector into its matrix, gating on hermiticity and unit
/// trace (both within [`MATRIX_CONSTRAINT_TOL`]) and measuring idempotence.
///
/// The error identifies which constraint failed. Idempotence does not gate;
/// see [`ProjectorMatrix`].
pub fn matrix_from_bloch(w: &BlochVector) -> Result<ProjectorMatrix> {
    let herm = w.hermiticity_residual();
    if !(herm <= MATRIX_CONSTRAINT_TOL) {
        return Err(Error::NotHermitian { residual: herm, tol: MATRIX_CONSTRAINT_TOL });
    }
    let tr = w.trace_residual();
    if !(tr <= MATRIX_CONSTRAINT_TOL) {
        return Err(Error::NotUnitTrace { residual: tr, tol: MATRIX_CONSTRAINT_TOL });
    }
    let matrix = w.to_matrix();
    let idempotence_residual = matrix.matmul(&matrix).sub(&matrix).max_abs();
    Ok(ProjectorMatrix { d: w.d, matrix, idempotence_residual })
}

/// Recovers the unit state whose projector a rank-1 [`ProjectorMatrix`] is:
/// the eigenvector for the top eigenvalue, which must lie within
/// [`EIGENVALUE_WINDOW`] of 1.
///
/// The global phase is fixed by rotating the first component of modulus
/// greater than [`PHASE_CUTOFF`] to the positive real axis.
pub fn reconstruct_state(m: &ProjectorMatrix) -> Result<CVector> {
    if !(m.idempotence_residual <= MATRIX_CONSTRAINT_TOL) {
        return Err(Error::NotRankOne {
            residual: m.idempotence_residual,
            tol: MATRIX_CONSTRAINT_TOL,
        });
    }
    // The matrix was gated at MATRIX_CONSTRAINT_TOL, which is looser than
    // the eigensolver's default hermiticity gate; align them.
    let config = PowerIterationConfig {
        hermiticity_tol: MATRIX_CONSTRAINT_TOL,
        ..PowerIterationConfig::default()
    };
    let (eigenvalue, v) = top_eigenpair_with(&m.matrix, &config)?;
    if (eigenvalue - 1.0).abs() > EIGENVALUE_WINDOW {
        return Err(Error::EigenvalueOutsideWindow { eigenvalue, tol: EIGENVALUE_WINDOW });
    }
    Ok(fix_phase(&v))
}

/// Rotates the first component of modulus above [`PHASE_CUTOFF`] to the
/// positive real axis.
fn fix_phase(v: &CVector) -> CVector {
    for p in 0..v.dim() {
        let c = v[p];
        let modulus = c.norm();
        if modulus > PHASE_CUTOFF {
            return v.scaled(c.conj() / modulus);
        }
    }
    // A unit vector always has a component of modulus >= 1/sqrt(d), far
    // above the cutoff; reaching here means v was (numerically) zero.
    v.clone()
}

/// Verifies a grouped family of lifted vectors (`m` groups of `d`, the lift
/// of an [`MubSet`] layout) at tolerance `tol`.
///
/// Checks, each a report line with its worst offender:
/// * `"hermiticity"`: `w_pq = conj(w_qp)` per vector;
/// * `"unit trace"`: `Σ_p w_pp = 1` per vector;
/// * `"gram matrix"`: `bloch_inner` equals 1 (same vector), 0 (same group),
///   `1/d` (different groups), over all pairs;
/// * `"factorization"`: idempotence of the reshaped matrix per vector, the
///   condition for `w` to be a lifted rank-1 state;
/// * `"trace relations"`: the same Gram targets evaluated through
///   `frobenius_inner` on the reshaped matrices; numerically identical to
///   `"gram matrix"`, reported separately because the matrix picture is a
///   distinct formulation;
/// * `"equiangularity"`: `bloch_inner = 1/d` over cross-group pairs only.
pub fn verify_bloch_set(groups: &[Vec<BlochVector>], tol: f64) -> Result<VerificationReport> {
    if groups.is_empty() {
        return Err(Error::MalformedInput("no groups supplied".to_string()));
    }
    let d = match groups[0].first() {
        Some(w) => w.dim(),
        None => return Err(Error::MalformedInput("group 0 is empty".to_string())),
    };
    for (a, group) in groups.iter().enumerate() {
        if group.len() != d {
            return Err(Error::MalformedInput(format!(
                "group {a} has {} vectors, expected {d}",
                group.len()
            )));
        }
        for (alpha, w) in group.iter().enumerate() {
            if w.dim() != d {
                return Err(Error::MalformedInput(format!(
                    "vector {alpha} of group {a} has dimension {}, expected {d}",
                    w.dim()
                )));
            }
        }
    }

    let labeled: Vec<(usize, usize, &BlochVector)> = groups
        .iter()
        .enumerate()
        .flat_map(|(a, group)| group.iter().enumerate().map(move |(alpha, w)| (a, alpha, w)))
        .collect();
    let matrices: Vec<CMatrix> = labeled.iter().map(|(_, _, w)| w.to_matrix()).collect();

    let mut hermiticity = WorstCase::new();
    let mut trace = WorstCase::new();
    let mut factorization = WorstCase::new();
    for (idx, &(a, alpha, w)) in labeled.iter().enumerate() {
        let offender = || format!("(group {a}, vector {alpha})");
        hermiticity.observe(w.hermiticity_residual(), offender);
        trace.observe(w.trace_residual(), offender);
        let m = &matrices[idx];
        factorization.observe(m.matmul(m).sub(m).max_abs(), offender);
    }

    let cross_target = 1.0 / d as f64;
    let mut gram = WorstCase::new();
    let mut trace_relations = WorstCase::new();
    let mut equiangularity = WorstCase::new();
    for i in 0..labeled.len() {
        for j in i..labeled.len() {
            let (a, alpha, wi) = labeled[i];
            let (b, beta, wj) = labeled[j];
            let target = if i == j {
                1.0
            } else if a == b {
                0.0
            } else {
                cross_target
            };
            let offender =
                || format!("(group {a}, vector {alpha}) vs (group {b}, vector {beta})");
            let g = bloch_inner(wi, wj).expect("dimensions agree");
            gram.observe((g - Complex64::from(target)).norm(), offender);
            let t = frobenius_inner(&matrices[i], &matrices[j]).expect("dimensions agree");
            trace_relations.observe((t - Complex64::from(target)).norm(), offender);
            if a != b {
                equiangularity.observe((g - Complex64::from(cross_target)).norm(), offender);
            }
        }
    }

    Ok(VerificationReport::from_checks(vec![
        hermiticity.into_check("hermiticity", tol),
        trace.into_check("unit trace", tol),
        gram.into_check("gram matrix", tol),
        factorization.into_check("factorization", tol),
        trace_relations.into_check("trace relations", tol),
        equiangularity.into_check("equiangularity", tol),
    ]))
}

//! SIC POVM candidates: Weyl-Heisenberg orbits of a fiducial state, the
//! state-picture verifier, and the lifted-vector verifier.
//!
//! A SIC POVM in `C^d` is a family of `d^2` unit states whose projectors
//! resolve the identity and whose distinct pairwise overlaps all have
//! modulus `1/sqrt(d+1)`. In the lifted picture the same structure becomes
//! `d^2` vectors in `C^{d^2}` with constant Gram entry `1/(d+1)` off the
//! diagonal, mean `(1/d) Σ_x v_pq(x) = δ_pq`, and the rank-1 factorization.
//!
//! Known solutions arise as orbits of a single fiducial state under the
//! displacement operators `D_jk = X^j Z^k`; [`wh_orbit`] builds the orbit and
//! [`fixture_fiducial`] supplies analytic fiducials for `d = 2` and `d = 3`,
//! both validated by the verifiers in this crate's tests rather than trusted.

use num_complex::Complex64;

use crate::bloch::{bloch_inner, lift_state, BlochVector};
use crate::error::{Error, Result};
use crate::linalg::{inner, CMatrix, CVector};
use crate::report::{VerificationReport, WorstCase};

/// Normalization tolerance required of fiducial states.
pub const FIDUCIAL_NORM_TOL: f64 = 1e-10;

/// A family of `d^2` states in `C^d`, the candidate for a SIC POVM.
///
/// Only the shape is validated at construction; normalization and the SIC
/// conditions are [`verify_sic_set`]'s concern, so that search candidates and
/// corrupted test inputs remain representable.
#[derive(Debug, Clone, PartialEq)]
pub struct SicSet {
    d: usize,
    states: Vec<CVector>,
}

impl SicSet {
    /// Wraps `d^2` states of dimension `d`.
    pub fn new(states: Vec<CVector>) -> Result<Self> {
        let d = match states.first() {
            Some(s) => s.dim(),
            None => return Err(Error::MalformedInput("SIC set has no states".to_string())),
        };
        if states.len() != d * d {
            return Err(Error::MalformedInput(format!(
                "SIC set in dimension {d} must have exactly {} states, got {}",
                d * d,
                states.len()
            )));
        }
        for (x, s) in states.iter().enumerate() {
            if s.dim() != d {
                return Err(Error::MalformedInput(format!(
                    "state {x} has dimension {}, expected {d}",
                    s.dim()
                )));
            }
        }
        Ok(SicSet { d, states })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    pub fn state(&self, x: usize) -> &CVector {
        &self.states[x]
    }
}

/// The analytic fiducial states shipped with the crate: `d = 2` gives
/// `(cos θ, e^{iπ/4} sin θ)` with `cos 2θ = 1/sqrt(3)`, and `d = 3` gives
/// `(0, 1, -1)/sqrt(2)`.
pub fn fixture_fiducial(d: usize) -> Result<CVector> {
    match d {
        2 => {
            let cos2theta = 1.0 / 3f64.sqrt();
            let cos_theta = ((1.0 + cos2theta) / 2.0).sqrt();
            let sin_theta = ((1.0 - cos2theta) / 2.0).sqrt();
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            Ok(CVector::new(vec![Complex64::from(cos_theta), phase * sin_theta]))
        }
        3 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            Ok(CVector::from_pairs(&[(0.0, 0.0), (s, 0.0), (-s, 0.0)]))
        }
        _ => Err(Error::UnsupportedDimension { d, min: 2, max: 3 }),
    }
}

/// Applies the displacement `D_jk = X^j Z^k` to a state, where
/// `(X ω)_p = ω_{p-1 mod d}` and `(Z ω)_p = exp(2πi p/d)·ω_p`.
fn displace(state: &CVector, j: usize, k: usize) -> CVector {
    let d = state.dim();
    let mut components = Vec::with_capacity(d);
    for p in 0..d {
        let source = (p + d - j % d) % d;
        let angle = 2.0 * std::f64::consts::PI * ((k * source) % d) as f64 / d as f64;
        components.push(Complex64::from_polar(1.0, angle) * state[source]);
    }
    CVector::new(components)
}

/// Builds the Weyl-Heisenberg orbit `{D_jk |fiducial> : j,k in 0..d}`,
/// ordered with `j` major and `k` minor so index `x = j*d + k`; element
/// `(0,0)` is the fiducial itself.
pub fn wh_orbit(fiducial: &CVector) -> Result<SicSet> {
    let residual = (fiducial.norm() - 1.0).abs();
    if !(residual <= FIDUCIAL_NORM_TOL) {
        return Err(Error::NotNormalized { residual, tol: FIDUCIAL_NORM_TOL });
    }
    let d = fiducial.dim();
    let mut states = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            states.push(displace(fiducial, j, k));
        }
    }
    SicSet::new(states)
}

/// Lifts every state of the set in order.
pub fn lift_sic_set(set: &SicSet) -> Result<Vec<BlochVector>> {
    set.states().iter().map(lift_state).collect()
}

/// Verifies a SIC candidate in the state picture at tolerance `tol`.
///
/// Checks, each a report line with its worst offender:
/// * `"normalization"`: `| norm(Φ_x) - 1 |` per state;
/// * `"resolution of identity"`: entrywise residual of
///   `(1/d) Σ_x |Φ_x><Φ_x| = I`;
/// * `"pairwise overlap"`: `| |<Φ_x|Φ_y>| - 1/sqrt(d+1) |` over distinct
///   pairs;
/// * `"equiangular lines"`: the same distinct-pair defect, reported as its
///   own line because constant overlap modulus is exactly the equiangular
///   lines property.
pub fn verify_sic_set(set: &SicSet, tol: f64) -> VerificationReport {
    let d = set.dim();
    let overlap_target = 1.0 / ((d as f64) + 1.0).sqrt();

    let mut normalization = WorstCase::new();
    for (x, state) in set.states().iter().enumerate() {
        normalization.observe((state.norm() - 1.0).abs(), || format!("state {x}"));
    }

    let mut sum = CMatrix::zeros(d);
    for state in set.states() {
        let projector = CMatrix::outer(state, state).expect("dimensions agree");
        sum.add_scaled(&projector, 1.0 / d as f64);
    }
    let mut resolution = WorstCase::new();
    for p in 0..d {
        for q in 0..d {
            let target = if p == q { Complex64::ONE } else { Complex64::ZERO };
            resolution.observe((sum.get(p, q) - target).norm(), || format!("entry ({p}, {q})"));
        }
    }

    let mut overlap = WorstCase::new();
    let mut equiangular = WorstCase::new();
    for x in 0..set.states().len() {
        for y in (x + 1)..set.states().len() {
            let modulus = inner(set.state(x), set.state(y))
                .expect("dimensions agree by construction")
                .norm();
            let residual = (modulus - overlap_target).abs();
            overlap.observe(residual, || format!("state {x} vs state {y}"));
            equiangular.observe(residual, || format!("state {x} vs state {y}"));
        }
    }

    VerificationReport::from_checks(vec![
        normalization.into_check("normalization", tol),
        resolution.into_check("resolution of identity", tol),
        overlap.into_check("pairwise overlap", tol),
        equiangular.into_check("equiangular lines", tol),
    ])
}

/// Verifies `d^2` lifted vectors as a SIC candidate at tolerance `tol`.
///
/// Checks, each a report line with its worst offender:
/// * `"mean condition"`: `(1/d) Σ_x v_pq(x) = δ_pq`, entrywise;
/// * `"gram matrix"`: `bloch_inner(v(x), v(y)) = (d·δ_xy + 1)/(d+1)` over all
///   pairs (1 on the diagonal, `1/(d+1)` off it);
/// * `"factorization"`: idempotence of each reshaped matrix, the rank-1
///   condition;
/// * `"equiangular vectors"`: `bloch_inner = 1/(d+1)` over distinct pairs
///   only.
pub fn verify_sic_bloch(vs: &[BlochVector], tol: f64) -> Result<VerificationReport> {
    let d = match vs.first() {
        Some(v) => v.dim(),
        None => return Err(Error::MalformedInput("no lifted vectors supplied".to_string())),
    };
    if vs.len() != d * d {
        return Err(Error::MalformedInput(format!(
            "SIC candidate in dimension {d} requires {} lifted vectors, got {}",
            d * d,
            vs.len()
        )));
    }
    for (x, v) in vs.iter().enumerate() {
        if v.dim() != d {
            return Err(Error::MalformedInput(format!(
                "lifted vector {x} has dimension {}, expected {d}",
                v.dim()
            )));
        }
    }

    let mut mean = WorstCase::new();
    for p in 0..d {
        for q in 0..d {
            let sum: Complex64 = vs.iter().map(|v| v.component(p, q)).sum();
            let target = if p == q { Complex64::ONE } else { Complex64::ZERO };
            mean.observe(
                (sum / d as f64 - target).norm(),
                || format!("entry ({p}, {q})"),
            );
        }
    }

    let cross_target = 1.0 / ((d as f64) + 1.0);
    let mut gram = WorstCase::new();
    let mut equiangular = WorstCase::new();
    for x in 0..vs.len() {
        for y in x..vs.len() {
            let g = bloch_inner(&vs[x], &vs[y]).expect("dimensions agree");
            let target = if x == y { 1.0 } else { cross_target };
            let offender = || format!("vector {x} vs vector {y}");
            gram.observe((g - Complex64::from(target)).norm(), offender);
            if x != y {
                equiangular.observe((g - Complex64::from(cross_target)).norm(), offender);
            }
        }
    }

    let mut factorization = WorstCase::new();
    for (x, v) in vs.iter().enumerate() {
        let m = v.to_matrix();
        factorization.observe(m.matmul(&m).sub(&m).max_abs(), || format!("vector {x}"));
    }

    Ok(VerificationReport::from_checks(vec![
        mean.into_check("mean condition", tol),
        gram.into_check("gram matrix", tol),
        factorization.into_check("factorization", tol),
        equiangular.into_check("equiangular vectors", tol),
    ]))
}

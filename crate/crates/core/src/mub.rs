//! Mutually unbiased bases: containers, the standard prime-dimension
//! construction, and the state-picture verifier.
//!
//! Two orthonormal bases of `C^d` are mutually unbiased when every overlap
//! between a vector of one and a vector of the other has modulus `1/sqrt(d)`.
//! [`verify_mub_set`] checks a family of bases against the full overlap
//! table: modulus 1 on the diagonal, 0 within a basis, `1/sqrt(d)` across
//! bases.
//!
//! [`Basis`] and [`MubSet`] enforce only structure (vector counts and
//! dimensions). Orthonormality and unbiasedness are deliberately left to the
//! verifier: search candidates, partially converged results, and corrupted
//! test inputs must all be representable.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{inner, CVector};
use crate::report::{VerificationReport, WorstCase};

/// Smallest dimension [`construct_standard_mubs`] supports.
pub const MIN_CONSTRUCTION_DIMENSION: usize = 2;
/// Largest dimension [`construct_standard_mubs`] supports.
pub const MAX_CONSTRUCTION_DIMENSION: usize = 31;

/// Default tolerance for verification residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// An indexed family of `d` vectors in `C^d`, nominally an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    d: usize,
    vectors: Vec<CVector>,
}

impl Basis {
    /// Wraps `d` vectors of dimension `d`.
    ///
    /// Only the shape is validated here; orthonormality is a matter for
    /// [`verify_mub_set`].
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let d = match vectors.first() {
            Some(v) => v.dim(),
            None => return Err(Error::MalformedInput("basis has no vectors".to_string())),
        };
        if vectors.len() != d {
            return Err(Error::MalformedInput(format!(
                "basis of dimension {d} must have exactly {d} vectors, got {}",
                vectors.len()
            )));
        }
        for (idx, v) in vectors.iter().enumerate() {
            if v.dim() != d {
                return Err(Error::MalformedInput(format!(
                    "vector {idx} has dimension {}, expected {d}",
                    v.dim()
                )));
            }
        }
        Ok(Basis { d, vectors })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, alpha: usize) -> &CVector {
        &self.vectors[alpha]
    }
}

/// A family of up to `d+1` bases of `C^d`, the candidate for mutual
/// unbiasedness.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    d: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    /// Wraps a nonempty list of same-dimension bases; at most `d+1` of them,
    /// since larger families cannot be mutually unbiased.
    pub fn new(bases: Vec<Basis>) -> Result<Self> {
        let d = match bases.first() {
            Some(b) => b.dim(),
            None => return Err(Error::MalformedInput("MUB set has no bases".to_string())),
        };
        for (idx, b) in bases.iter().enumerate() {
            if b.dim() != d {
                return Err(Error::MalformedInput(format!(
                    "basis {idx} has dimension {}, expected {d}",
                    b.dim()
                )));
            }
        }
        if bases.len() > d + 1 {
            return Err(Error::MalformedInput(format!(
                "{} bases exceed the maximum of {} for dimension {d}",
                bases.len(),
                d + 1
            )));
        }
        Ok(MubSet { d, bases })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, a: usize) -> &Basis {
        &self.bases[a]
    }

    /// All vectors flattened in basis-major order.
    pub fn flattened(&self) -> Vec<CVector> {
        self.bases.iter().flat_map(|b| b.vectors().iter().cloned()).collect()
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// `exp(2*pi*i * numerator / d)`.
fn root_of_unity(numerator: u64, d: usize) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (numerator % d as u64) as f64 / d as f64;
    let (sin, cos) = angle.sin_cos();
    Complex64::new(cos, sin)
}

/// Builds the complete set of `d+1` mutually unbiased bases for a prime
/// dimension `d` in `2..=31`.
///
/// For odd primes the set is the computational basis plus the `d` bases with
/// components `(1/sqrt(d)) * exp(2*pi*i*(a*p^2 + alpha*p)/d)` for
/// `a in 1..=d`; for `d = 2` it is the computational, Hadamard, and circular
/// bases.
pub fn construct_standard_mubs(d: usize) -> Result<MubSet> {
    if !(MIN_CONSTRUCTION_DIMENSION..=MAX_CONSTRUCTION_DIMENSION).contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            min: MIN_CONSTRUCTION_DIMENSION,
            max: MAX_CONSTRUCTION_DIMENSION,
        });
    }
    if !is_prime(d) {
        return Err(Error::NotPrime { d });
    }

    let computational =
        Basis::new((0..d).map(|index| CVector::basis_state(d, index)).collect())?;

    if d == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = Basis::new(vec![
            CVector::from_pairs(&[(s, 0.0), (s, 0.0)]),
            CVector::from_pairs(&[(s, 0.0), (-s, 0.0)]),
        ])?;
        let circular = Basis::new(vec![
            CVector::from_pairs(&[(s, 0.0), (0.0, s)]),
            CVector::from_pairs(&[(s, 0.0), (0.0, -s)]),
        ])?;
        return MubSet::new(vec![computational, hadamard, circular]);
    }

    let scale = 1.0 / (d as f64).sqrt();
    let mut bases = vec![computational];
    for a in 1..=d as u64 {
        let mut vectors = Vec::with_capacity(d);
        for alpha in 0..d as u64 {
            let components = (0..d as u64)
                .map(|p| root_of_unity(a * p * p + alpha * p, d) * scale)
                .collect();
            vectors.push(CVector::new(components));
        }
        bases.push(Basis::new(vectors)?);
    }
    MubSet::new(bases)
}

/// Checks a family of bases against the full mutual-unbiasedness overlap
/// table at tolerance `tol`.
///
/// The report carries three checks:
/// * `"normalization"`: `| norm(|a,alpha>) - 1 |` over all vectors;
/// * `"within-basis orthogonality"`: `|<a,alpha | a,beta>|` over distinct
///   vectors of the same basis;
/// * `"cross-basis unbiasedness"`: `| |<a,alpha | b,beta>| - 1/sqrt(d) |`
///   over vectors of distinct bases.
pub fn verify_mub_set(set: &MubSet, tol: f64) -> VerificationReport {
    let d = set.dim();
    let unbiased_target = 1.0 / (d as f64).sqrt();

    let mut normalization = WorstCase::new();
    let mut orthogonality = WorstCase::new();
    let mut unbiasedness = WorstCase::new();

    for (a, basis) in set.bases().iter().enumerate() {
        for (alpha, v) in basis.vectors().iter().enumerate() {
            normalization
                .observe((v.norm() - 1.0).abs(), || format!("(basis {a}, vector {alpha})"));
        }
    }

    for a in 0..set.bases().len() {
        for b in a..set.bases().len() {
            for alpha in 0..d {
                for beta in 0..d {
                    if a == b && beta <= alpha {
                        continue;
                    }
                    let overlap = inner(set.basis(a).vector(alpha), set.basis(b).vector(beta))
                        .expect("dimensions agree by construction")
                        .norm();
                    let offender = || {
                        format!("(basis {a}, vector {alpha}) vs (basis {b}, vector {beta})")
                    };
                    if a == b {
                        orthogonality.observe(overlap, offender);
                    } else {
                        unbiasedness.observe((overlap - unbiased_target).abs(), offender);
                    }
                }
            }
        }
    }

    VerificationReport::from_checks(vec![
        normalization.into_check("normalization", tol),
        orthogonality.into_check("within-basis orthogonality", tol),
        unbiasedness.into_check("cross-basis unbiasedness", tol),
    ])
}

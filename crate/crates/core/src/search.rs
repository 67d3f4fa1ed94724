//! Multi-restart penalty-minimization search for MUB sets and SIC POVMs.
//!
//! A candidate is a flat family of vectors in `C^d` (`m*d` of them for a MUB
//! search, `d^2` for a SIC search). The objective is the sum over vector
//! pairs of `(|<u_i, u_j>|^2 - target)^2`, where the target is the Gram value
//! a solution must attain: 0 within a basis and `1/d` across bases for MUBs,
//! `1/(d+1)` for all distinct SIC pairs. The objective is evaluated either
//! directly on state overlaps or through lifted vectors; the two routes agree
//! to roundoff, and both are exposed so their optimization behavior can be
//! compared.
//!
//! Optimization is plain gradient descent over the unnormalized parameter
//! vectors composed with an explicit normalization map (so iterates stay
//! exactly feasible and no constraint terms are needed), with a backtracking
//! line search that warm-starts each iteration at twice the previously
//! accepted step. Restarts are independent, deterministically seeded, and
//! may run in parallel without affecting the result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use num_complex::Complex64;

use crate::bloch::lift_unchecked;
use crate::error::{Error, Result};
use crate::linalg::{inner, random_unit_vector, CVector};
use crate::mub::{Basis, MubSet};
use crate::sic::SicSet;

/// Default number of restarts.
pub const DEFAULT_RESTARTS: usize = 10;
/// Default iteration cap per restart.
pub const DEFAULT_MAX_ITERATIONS: usize = 50_000;
/// Default initial line-search step.
pub const DEFAULT_STEP_SIZE: f64 = 1.0;
/// Default objective value below which a restart counts as a success.
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-8;
/// Default number of iterations over which relative improvement below
/// [`STAGNATION_RELATIVE`] stops a restart.
pub const DEFAULT_STAGNATION_WINDOW: usize = 500;

/// Armijo sufficient-decrease constant of the backtracking line search.
const ARMIJO_SLOPE: f64 = 1e-4;
/// Relative improvement over the stagnation window below which a restart
/// stops.
const STAGNATION_RELATIVE: f64 = 1e-12;
/// Line-search steps below this abort the restart.
const MIN_STEP: f64 = 1e-20;

/// What structure to search for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    /// `bases` mutually unbiased bases (so `bases * d` vectors).
    Mub { bases: usize },
    /// A SIC POVM (`d^2` vectors).
    Sic,
}

/// Which route evaluates the objective and its gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Squared overlap moduli of the states directly.
    StateSpace,
    /// Inner products of the lifted vectors in `C^{d^2}`.
    BlochSpace,
}

/// Full description of a search run.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub d: usize,
    pub problem: Problem,
    pub formulation: Formulation,
    pub restarts: usize,
    pub max_iterations: usize,
    pub seed: u64,
    pub step_size: f64,
    pub success_threshold: f64,
    pub stagnation_window: usize,
}

impl SearchConfig {
    /// A config with the module defaults for everything but the problem
    /// itself.
    pub fn new(d: usize, problem: Problem, formulation: Formulation) -> Self {
        SearchConfig {
            d,
            problem,
            formulation,
            restarts: DEFAULT_RESTARTS,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            seed: 0,
            step_size: DEFAULT_STEP_SIZE,
            success_threshold: DEFAULT_SUCCESS_THRESHOLD,
            stagnation_window: DEFAULT_STAGNATION_WINDOW,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidConfig(format!(
                "dimension must be at least 2, got {}",
                self.d
            )));
        }
        if let Problem::Mub { bases } = self.problem {
            if bases < 2 || bases > self.d + 1 {
                return Err(Error::InvalidConfig(format!(
                    "number of bases must lie in 2..={} for dimension {}, got {bases}",
                    self.d + 1,
                    self.d
                )));
            }
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive".to_string()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".to_string()));
        }
        if self.stagnation_window == 0 {
            return Err(Error::InvalidConfig("stagnation_window must be positive".to_string()));
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "step_size must be positive and finite, got {}",
                self.step_size
            )));
        }
        if !(self.success_threshold.is_finite() && self.success_threshold >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "success_threshold must be nonnegative and finite, got {}",
                self.success_threshold
            )));
        }
        Ok(())
    }
}

/// Why a restart stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Objective reached the success threshold.
    Converged,
    /// Relative improvement over the stagnation window fell below 1e-12, or
    /// the gradient vanished exactly.
    Stagnated,
    /// The backtracking line search could not find a descent step above the
    /// floor.
    LineSearchFloor,
    /// The iteration cap was reached.
    MaxIterations,
}

/// Summary of one restart's trajectory.
#[derive(Debug, Clone)]
pub struct RestartSummary {
    pub restart: usize,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub iterations: usize,
    pub stop: StopReason,
}

/// The best candidate a search produced, in its domain type.
#[derive(Debug, Clone)]
pub enum Candidate {
    Mub(MubSet),
    Sic(SicSet),
}

impl Candidate {
    pub fn as_mub(&self) -> Option<&MubSet> {
        match self {
            Candidate::Mub(set) => Some(set),
            Candidate::Sic(_) => None,
        }
    }

    pub fn as_sic(&self) -> Option<&SicSet> {
        match self {
            Candidate::Sic(set) => Some(set),
            Candidate::Mub(_) => None,
        }
    }
}

/// Outcome of [`run_search`].
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_objective: f64,
    pub best_candidate: Candidate,
    /// Index of the restart that produced the best candidate.
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
    /// Whether `best_objective <= config.success_threshold`.
    pub success: bool,
    pub config: SearchConfig,
}

/// The penalty objective for a given problem, dimension, and formulation,
/// with its analytic gradient.
///
/// Both `value` and `gradient` accept arbitrary (nonzero) vectors and apply
/// the normalization map internally, so they are exactly the functions the
/// optimizer sees.
#[derive(Debug, Clone)]
pub struct PenaltyObjective {
    d: usize,
    problem: Problem,
    formulation: Formulation,
}

impl PenaltyObjective {
    pub fn mub(d: usize, bases: usize, formulation: Formulation) -> Self {
        PenaltyObjective { d, problem: Problem::Mub { bases }, formulation }
    }

    pub fn sic(d: usize, formulation: Formulation) -> Self {
        PenaltyObjective { d, problem: Problem::Sic, formulation }
    }

    pub fn from_config(config: &SearchConfig) -> Self {
        PenaltyObjective {
            d: config.d,
            problem: config.problem,
            formulation: config.formulation,
        }
    }

    /// How many vectors a candidate carries.
    pub fn vector_count(&self) -> usize {
        match self.problem {
            Problem::Mub { bases } => bases * self.d,
            Problem::Sic => self.d * self.d,
        }
    }

    /// The Gram target for the squared overlap of vectors `i` and `j`.
    fn target(&self, i: usize, j: usize) -> f64 {
        match self.problem {
            Problem::Mub { .. } => {
                if i / self.d == j / self.d {
                    0.0
                } else {
                    1.0 / self.d as f64
                }
            }
            Problem::Sic => 1.0 / (self.d as f64 + 1.0),
        }
    }

    fn check_arity(&self, xs: &[CVector]) {
        assert_eq!(
            xs.len(),
            self.vector_count(),
            "candidate has wrong vector count for the configured problem"
        );
        for x in xs {
            assert_eq!(x.dim(), self.d, "candidate vector has wrong dimension");
        }
    }

    /// Squared-overlap table `|<u_i, u_j>|^2` of the normalized candidate,
    /// evaluated through the configured formulation. Returned as a full
    /// symmetric matrix in flat row-major form, diagonal untouched (zero).
    fn gram(&self, units: &[CVector]) -> Vec<f64> {
        let n = units.len();
        let mut gram = vec![0.0; n * n];
        match self.formulation {
            Formulation::StateSpace => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let g = inner(&units[i], &units[j])
                            .expect("dimensions agree")
                            .norm_sqr();
                        gram[i * n + j] = g;
                        gram[j * n + i] = g;
                    }
                }
            }
            Formulation::BlochSpace => {
                let lifts: Vec<_> = units.iter().map(lift_unchecked).collect();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let b: Complex64 = lifts[i]
                            .components()
                            .iter()
                            .zip(lifts[j].components())
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        gram[i * n + j] = b.re;
                        gram[j * n + i] = b.re;
                    }
                }
            }
        }
        gram
    }

    /// Objective value at `xs` (normalization applied internally).
    pub fn value(&self, xs: &[CVector]) -> f64 {
        self.check_arity(xs);
        let units: Vec<CVector> = xs.iter().map(|x| x.normalized()).collect();
        let n = units.len();
        let gram = self.gram(&units);
        let mut f = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let r = gram[i * n + j] - self.target(i, j);
                f += r * r;
            }
        }
        f
    }

    /// Analytic gradient of [`Self::value`] with respect to the real and
    /// imaginary parts of `xs`, packed as complex vectors (each returned
    /// component holds `dF/dRe + i dF/dIm`).
    ///
    /// Like the value, the gradient is computed through the configured
    /// formulation: the state route contracts overlaps `s_ij` directly,
    /// while the lifted route applies the reshaped projector of each lifted
    /// vector. The two are the same function of `xs` up to roundoff.
    pub fn gradient(&self, xs: &[CVector]) -> Vec<CVector> {
        self.check_arity(xs);
        let norms: Vec<f64> = xs.iter().map(CVector::norm).collect();
        let units: Vec<CVector> =
            xs.iter().zip(&norms).map(|(x, &r)| x.scaled(Complex64::from(1.0 / r))).collect();
        let descents = match self.formulation {
            Formulation::StateSpace => self.descents_via_overlaps(&units),
            Formulation::BlochSpace => self.descents_via_lifts(&units),
        };
        descents
            .into_iter()
            .zip(&units)
            .zip(&norms)
            .map(|((descent, unit), &norm)| {
                // Chain rule through u = x / |x|: remove the radial component
                // of dF/d(conj u) and rescale; the packed real gradient is
                // twice the conjugate derivative.
                let radial = inner(&descent, unit).expect("dimensions agree").re;
                let mut grad = descent;
                grad.add_scaled(unit, Complex64::from(-radial));
                grad.scaled(Complex64::from(2.0 / norm))
            })
            .collect()
    }

    /// `D_i = Σ_{j≠i} 2 (|s_ij|^2 - t_ij) conj(s_ij) u_j` from the state
    /// overlaps `s_ij = <u_i, u_j>`.
    fn descents_via_overlaps(&self, units: &[CVector]) -> Vec<CVector> {
        let n = units.len();
        let mut overlaps = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let s = inner(&units[i], &units[j]).expect("dimensions agree");
                overlaps[i * n + j] = s;
                overlaps[j * n + i] = s.conj();
            }
        }
        (0..n)
            .map(|i| {
                let mut descent = CVector::zeros(self.d);
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let s_ij = overlaps[i * n + j];
                    let coeff = 2.0 * (s_ij.norm_sqr() - self.target(i, j));
                    // conj(s_ij) is stored at the transposed position.
                    descent.add_scaled(&units[j], Complex64::from(coeff) * overlaps[j * n + i]);
                }
                descent
            })
            .collect()
    }

    /// The same `D_i`, evaluated in the lifted picture: the pair coefficient
    /// comes from the lifted Gram entry `B_ij`, and the direction from
    /// applying the reshaped projector of `w_j` to `u_i`
    /// (`(M_j u_i)_p = Σ_q w_j[p,q] u_i[q] = u_j[p]·conj(s_ij)`).
    fn descents_via_lifts(&self, units: &[CVector]) -> Vec<CVector> {
        let n = units.len();
        let d = self.d;
        let lifts: Vec<_> = units.iter().map(lift_unchecked).collect();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let b: Complex64 = lifts[i]
                    .components()
                    .iter()
                    .zip(lifts[j].components())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                gram[i * n + j] = b.re;
                gram[j * n + i] = b.re;
            }
        }
        (0..n)
            .map(|i| {
                let mut descent = vec![Complex64::ZERO; d];
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let coeff = Complex64::from(2.0 * (gram[i * n + j] - self.target(i, j)));
                    let w_j = lifts[j].components();
                    for (p, slot) in descent.iter_mut().enumerate() {
                        let mut applied = Complex64::ZERO;
                        for q in 0..d {
                            applied += w_j[p * d + q] * units[i][q];
                        }
                        *slot += coeff * applied;
                    }
                }
                CVector::new(descent)
            })
            .collect()
    }
}

/// Objective of a MUB candidate through state overlaps: sum over pairs of
/// `(|<u,v>|^2 - target)^2` with target 0 within a basis, `1/d` across.
pub fn mub_objective(set: &MubSet) -> f64 {
    PenaltyObjective::mub(set.dim(), set.bases().len(), Formulation::StateSpace)
        .value(&set.flattened())
}

/// The same objective as [`mub_objective`] evaluated through lifted vectors:
/// sum over pairs of `(bloch_inner - target)^2`. Agrees with the state route
/// to roundoff.
pub fn bloch_objective(set: &MubSet) -> f64 {
    PenaltyObjective::mub(set.dim(), set.bases().len(), Formulation::BlochSpace)
        .value(&set.flattened())
}

/// Objective of a SIC candidate: sum over distinct pairs of
/// `(|<u,v>|^2 - 1/(d+1))^2`.
pub fn sic_objective(set: &SicSet) -> f64 {
    PenaltyObjective::sic(set.dim(), Formulation::StateSpace).value(set.states())
}

struct RestartOutcome {
    xs: Vec<CVector>,
    #[cfg_attr(not(test), allow(dead_code))]
    history: Vec<f64>,
    summary: RestartSummary,
}

/// Gradient descent with warm-started backtracking from one starting point.
fn minimize(
    objective: &PenaltyObjective,
    config: &SearchConfig,
    mut xs: Vec<CVector>,
    restart: usize,
) -> RestartOutcome {
    let mut f = objective.value(&xs);
    let initial_objective = f;
    let mut history = vec![f];
    let mut trial_step = config.step_size;
    let mut iterations = 0;
    let mut stop = StopReason::MaxIterations;

    if f <= config.success_threshold {
        stop = StopReason::Converged;
    } else {
        for iteration in 1..=config.max_iterations {
            let grad = objective.gradient(&xs);
            let grad_norm_sqr: f64 = grad.iter().map(CVector::norm_sqr).sum();
            if grad_norm_sqr == 0.0 {
                stop = StopReason::Stagnated;
                break;
            }

            let mut eta = trial_step;
            let mut accepted = None;
            while eta >= MIN_STEP {
                let candidate: Vec<CVector> = xs
                    .iter()
                    .zip(&grad)
                    .map(|(x, g)| {
                        let mut moved = x.clone();
                        moved.add_scaled(g, Complex64::from(-eta));
                        moved
                    })
                    .collect();
                let f_candidate = objective.value(&candidate);
                if f_candidate <= f - ARMIJO_SLOPE * eta * grad_norm_sqr {
                    accepted = Some((candidate, f_candidate, eta));
                    break;
                }
                eta *= 0.5;
            }

            let (candidate, f_candidate, step) = match accepted {
                Some(found) => found,
                None => {
                    stop = StopReason::LineSearchFloor;
                    break;
                }
            };
            xs = candidate;
            f = f_candidate;
            trial_step = 2.0 * step;
            iterations = iteration;
            history.push(f);

            if f <= config.success_threshold {
                stop = StopReason::Converged;
                break;
            }
            if history.len() > config.stagnation_window {
                let before = history[history.len() - 1 - config.stagnation_window];
                if before - f <= STAGNATION_RELATIVE * before {
                    stop = StopReason::Stagnated;
                    break;
                }
            }
        }
    }

    RestartOutcome {
        xs,
        history,
        summary: RestartSummary {
            restart,
            initial_objective,
            final_objective: f,
            iterations,
            stop,
        },
    }
}

fn assemble_candidate(problem: Problem, d: usize, xs: &[CVector]) -> Candidate {
    let units: Vec<CVector> = xs.iter().map(|x| x.normalized()).collect();
    match problem {
        Problem::Mub { .. } => {
            let bases: Vec<Basis> = units
                .chunks(d)
                .map(|chunk| Basis::new(chunk.to_vec()).expect("chunk shape is d vectors of dim d"))
                .collect();
            Candidate::Mub(MubSet::new(bases).expect("grouping is m <= d+1 bases of dimension d"))
        }
        Problem::Sic => {
            Candidate::Sic(SicSet::new(units).expect("candidate has d^2 states of dimension d"))
        }
    }
}

/// Runs the configured multi-restart search.
///
/// Restart `r` draws its starting candidate from a fresh
/// `ChaCha8` stream seeded with `seed + r` (each vector: independent standard
/// Gaussian real and imaginary parts, normalized), so the run is
/// deterministic for a fixed config regardless of how restarts are scheduled
/// across threads. All restarts always run to their own stopping rule; the
/// result keeps the best final objective, ties resolved toward the lower
/// restart index.
pub fn run_search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let objective = PenaltyObjective::from_config(config);
    let n = objective.vector_count();

    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
            let xs: Vec<CVector> =
                (0..n).map(|_| random_unit_vector(config.d, &mut rng)).collect();
            minimize(&objective, config, xs, restart)
        })
        .collect();

    let best_restart = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.summary.final_objective.total_cmp(&b.1.summary.final_objective))
        .map(|(idx, _)| idx)
        .expect("restarts is validated positive");

    let best_objective = outcomes[best_restart].summary.final_objective;
    let best_candidate = assemble_candidate(config.problem, config.d, &outcomes[best_restart].xs);
    let restarts: Vec<RestartSummary> = outcomes.into_iter().map(|o| o.summary).collect();

    Ok(SearchResult {
        best_objective,
        best_candidate,
        best_restart,
        success: best_objective <= config.success_threshold,
        restarts,
        config: config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;
    use crate::mub::construct_standard_mubs;
    use crate::sic::{fixture_fiducial, wh_orbit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Objective recomputed by an independent loop: explicit normalization,
    /// explicit conjugate-sum overlaps, explicit pair targets.
    fn oracle_mub_objective(d: usize, vectors: &[CVector]) -> f64 {
        let unit: Vec<Vec<Complex64>> = vectors
            .iter()
            .map(|v| {
                let norm = v.components().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                v.components().iter().map(|c| c / norm).collect()
            })
            .collect();
        let mut total = 0.0;
        for i in 0..unit.len() {
            for j in (i + 1)..unit.len() {
                let mut s = Complex64::ZERO;
                for p in 0..d {
                    s += unit[i][p].conj() * unit[j][p];
                }
                let target = if i / d == j / d { 0.0 } else { 1.0 / d as f64 };
                total += (s.norm_sqr() - target).powi(2);
            }
        }
        total
    }

    fn random_candidate(d: usize, count: usize, seed: u64) -> Vec<CVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| random_unit_vector(d, &mut rng)).collect()
    }

    #[test]
    fn fixture_objectives_vanish() {
        let set = construct_standard_mubs(3).unwrap();
        assert!(mub_objective(&set) < 1e-14);
        let set2 = construct_standard_mubs(2).unwrap();
        assert!(bloch_objective(&set2) < 1e-14);
        let orbit = wh_orbit(&fixture_fiducial(2).unwrap()).unwrap();
        assert!(sic_objective(&orbit) < 1e-12);
    }

    #[test]
    fn two_copies_of_computational_basis_give_objective_one() {
        let basis = Basis::new(vec![CVector::basis_state(2, 0), CVector::basis_state(2, 1)])
            .unwrap();
        let set = MubSet::new(vec![basis.clone(), basis]).unwrap();
        // Four cross pairs: two with overlap 1 vs target 1/2, two with
        // overlap 0 vs target 1/2; each contributes 1/4.
        assert!((mub_objective(&set) - 1.0).abs() < 1e-14);
        assert!((bloch_objective(&set) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn objective_matches_independent_pair_loop() {
        let candidate = random_candidate(3, 9, 101);
        let expected = oracle_mub_objective(3, &candidate);
        let state = PenaltyObjective::mub(3, 3, Formulation::StateSpace).value(&candidate);
        let lifted = PenaltyObjective::mub(3, 3, Formulation::BlochSpace).value(&candidate);
        assert!((state - expected).abs() < 1e-13);
        assert!((lifted - expected).abs() <= 1e-12 * (1.0 + expected));
    }

    #[test]
    fn sic_objective_of_replicated_state_matches_hand_count() {
        let set = SicSet::new(vec![CVector::basis_state(2, 0); 4]).unwrap();
        // Six distinct pairs, each (1 - 1/3)^2 = 4/9.
        assert!((sic_objective(&set) - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn sic_objective_is_nonnegative_on_random_candidates() {
        for seed in 0..5 {
            let states = random_candidate(2, 4, seed);
            let set = SicSet::new(states).unwrap();
            assert!(sic_objective(&set) >= 0.0);
        }
    }

    #[test]
    fn corrupted_fixture_gives_equal_positive_objectives_in_both_formulations() {
        let set = construct_standard_mubs(3).unwrap();
        let mut vectors = set.flattened();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        vectors[5] = random_unit_vector(3, &mut rng);
        let state = PenaltyObjective::mub(3, 4, Formulation::StateSpace).value(&vectors);
        let lifted = PenaltyObjective::mub(3, 4, Formulation::BlochSpace).value(&vectors);
        assert!(state > 1e-3);
        assert!((state - lifted).abs() <= 1e-12 * (1.0 + state));
    }

    #[test]
    fn objective_is_invariant_under_phases_and_common_unitary() {
        let candidate = random_candidate(3, 9, 23);
        let objective = PenaltyObjective::mub(3, 3, Formulation::StateSpace);
        let base = objective.value(&candidate);

        let mut phased = candidate.clone();
        phased[4] = phased[4].scaled(Complex64::from_polar(1.0, 0.77));
        assert!((objective.value(&phased) - base).abs() <= 1e-12 * (1.0 + base));

        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let u = random_unitary(3, &mut rng);
        let rotated: Vec<CVector> = candidate.iter().map(|v| u.mul_vec(v)).collect();
        assert!((objective.value(&rotated) - base).abs() <= 1e-12 * (1.0 + base));
    }

    /// Central finite difference of the objective along every coordinate.
    fn finite_difference_gradient(
        objective: &PenaltyObjective,
        xs: &[CVector],
        step: f64,
    ) -> Vec<CVector> {
        let mut out = Vec::with_capacity(xs.len());
        for i in 0..xs.len() {
            let mut components = Vec::with_capacity(xs[i].dim());
            for p in 0..xs[i].dim() {
                let mut bump = |delta: Complex64| {
                    let mut moved: Vec<CVector> = xs.to_vec();
                    let mut comps = moved[i].components().to_vec();
                    comps[p] += delta;
                    moved[i] = CVector::new(comps);
                    objective.value(&moved)
                };
                let re = (bump(Complex64::from(step)) - bump(Complex64::from(-step)))
                    / (2.0 * step);
                let im = (bump(Complex64::new(0.0, step)) - bump(Complex64::new(0.0, -step)))
                    / (2.0 * step);
                components.push(Complex64::new(re, im));
            }
            out.push(CVector::new(components));
        }
        out
    }

    fn relative_gradient_error(analytic: &[CVector], numeric: &[CVector]) -> f64 {
        let mut diff = 0.0;
        let mut scale = 0.0;
        for (a, n) in analytic.iter().zip(numeric) {
            diff += a.sub(n).norm_sqr();
            scale += a.norm_sqr();
        }
        (diff / scale.max(1e-24)).sqrt()
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let cases: Vec<(PenaltyObjective, usize, usize)> = vec![
            (PenaltyObjective::mub(2, 3, Formulation::StateSpace), 2, 6),
            (PenaltyObjective::mub(2, 3, Formulation::BlochSpace), 2, 6),
            (PenaltyObjective::sic(2, Formulation::StateSpace), 2, 4),
            (PenaltyObjective::sic(2, Formulation::BlochSpace), 2, 4),
        ];
        for (idx, (objective, d, count)) in cases.iter().enumerate() {
            let xs = random_candidate(*d, *count, 300 + idx as u64);
            let analytic = objective.gradient(&xs);
            let numeric = finite_difference_gradient(objective, &xs, 1e-6);
            let err = relative_gradient_error(&analytic, &numeric);
            assert!(err <= 1e-5, "case {idx}: relative error {err}");
        }
    }

    #[test]
    fn descent_trajectory_is_monotone() {
        let config = SearchConfig {
            restarts: 1,
            max_iterations: 2_000,
            ..SearchConfig::new(2, Problem::Mub { bases: 3 }, Formulation::StateSpace)
        };
        let objective = PenaltyObjective::from_config(&config);
        let xs = random_candidate(2, 6, 5);
        let outcome = minimize(&objective, &config, xs, 0);
        for pair in outcome.history.windows(2) {
            assert!(pair[1] <= pair[0], "objective increased: {} -> {}", pair[0], pair[1]);
        }
        assert_eq!(outcome.summary.stop, StopReason::Converged);
    }

    #[test]
    fn search_recovers_full_mub_set_for_d2() {
        let config = SearchConfig {
            seed: 11,
            ..SearchConfig::new(2, Problem::Mub { bases: 3 }, Formulation::StateSpace)
        };
        let result = run_search(&config).unwrap();
        assert!(result.success, "best objective {}", result.best_objective);
        assert!(result.best_objective < 1e-8);
        let set = result.best_candidate.as_mub().unwrap();
        let report = crate::mub::verify_mub_set(set, 1e-3);
        assert!(report.overall_pass, "{report}");
    }

    #[test]
    fn search_recovers_sic_for_d2() {
        let config = SearchConfig {
            seed: 3,
            ..SearchConfig::new(2, Problem::Sic, Formulation::StateSpace)
        };
        let result = run_search(&config).unwrap();
        assert!(result.success, "best objective {}", result.best_objective);
        let set = result.best_candidate.as_sic().unwrap();
        let report = crate::sic::verify_sic_set(set, 1e-3);
        assert!(report.overall_pass, "{report}");
    }

    #[test]
    fn best_objective_matches_recomputation_on_best_candidate() {
        let config = SearchConfig {
            seed: 8,
            restarts: 3,
            ..SearchConfig::new(2, Problem::Mub { bases: 2 }, Formulation::StateSpace)
        };
        let result = run_search(&config).unwrap();
        let recomputed = mub_objective(result.best_candidate.as_mub().unwrap());
        assert!((result.best_objective - recomputed).abs() <= 1e-12 * (1.0 + recomputed));

        let sic_config = SearchConfig {
            seed: 9,
            restarts: 3,
            max_iterations: 3_000,
            ..SearchConfig::new(2, Problem::Sic, Formulation::BlochSpace)
        };
        let sic_result = run_search(&sic_config).unwrap();
        let recomputed = sic_objective(sic_result.best_candidate.as_sic().unwrap());
        assert!(
            (sic_result.best_objective - recomputed).abs() <= 1e-12 * (1.0 + recomputed),
            "formulations agree to roundoff, so the state-route recomputation must match"
        );
    }

    #[test]
    fn identical_configs_produce_bitwise_identical_results() {
        let config = SearchConfig {
            seed: 77,
            restarts: 4,
            max_iterations: 500,
            ..SearchConfig::new(2, Problem::Mub { bases: 3 }, Formulation::StateSpace)
        };
        let first = run_search(&config).unwrap();
        let second = run_search(&config).unwrap();
        assert_eq!(first.best_objective.to_bits(), second.best_objective.to_bits());
        assert_eq!(first.best_restart, second.best_restart);

        let single_threaded = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_search(&config).unwrap());
        assert_eq!(
            first.best_objective.to_bits(),
            single_threaded.best_objective.to_bits()
        );

        let four_threaded = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_search(&config).unwrap());
        assert_eq!(
            first.best_objective.to_bits(),
            four_threaded.best_objective.to_bits()
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let too_many_bases =
            SearchConfig::new(2, Problem::Mub { bases: 4 }, Formulation::StateSpace);
        assert!(matches!(run_search(&too_many_bases), Err(Error::InvalidConfig(_))));

        let mut bad_step = SearchConfig::new(2, Problem::Sic, Formulation::StateSpace);
        bad_step.step_size = 0.0;
        assert!(matches!(bad_step.validate(), Err(Error::InvalidConfig(_))));

        let mut tiny = SearchConfig::new(1, Problem::Sic, Formulation::StateSpace);
        assert!(tiny.validate().is_err());
        tiny.d = 2;
        tiny.restarts = 0;
        assert!(tiny.validate().is_err());
    }

    #[test]
    fn restart_summaries_cover_every_restart() {
        let config = SearchConfig {
            seed: 5,
            restarts: 6,
            max_iterations: 200,
            ..SearchConfig::new(2, Problem::Mub { bases: 2 }, Formulation::StateSpace)
        };
        let result = run_search(&config).unwrap();
        assert_eq!(result.restarts.len(), 6);
        for (idx, summary) in result.restarts.iter().enumerate() {
            assert_eq!(summary.restart, idx);
            assert!(summary.final_objective <= summary.initial_objective);
        }
        assert!(result.best_objective <= result.restarts[0].final_objective);
    }
}

//! Subcommand implementations. Each returns the process exit code on its
//! success path; `Err` strings become exit code 2 in `main`.

use std::path::Path;

use mubkit::bloch::{lift_state, matrix_from_bloch, reconstruct_state, verify_bloch_set, BlochVector};
use mubkit::linalg::CVector;
use mubkit::mub::{construct_standard_mubs, verify_mub_set, Basis, MubSet};
use mubkit::report::{CheckResult, VerificationReport};
use mubkit::search::{run_search, Candidate as BestCandidate, SearchConfig, StopReason};
use mubkit::sic::{fixture_fiducial, verify_sic_bloch, verify_sic_set, wh_orbit, SicSet};

use crate::format::{
    self, CandidateData, Kind, Metadata, ReportFile, RestartRecord, SearchRecord, Space,
};

pub fn gen_mub(d: usize, out: &Path) -> Result<i32, String> {
    let set = construct_standard_mubs(d).map_err(|e| e.to_string())?;
    let data = CandidateData::MubStates(
        set.bases().iter().map(|basis| basis.vectors().to_vec()).collect(),
    );
    let metadata = Metadata {
        provenance: Some(format!("standard construction for prime d = {d}")),
        ..Metadata::default()
    };
    format::write_candidate(out, Kind::Mub, d, &data, Some(metadata))?;
    println!("wrote {} bases of dimension {d} to {}", d + 1, out.display());
    Ok(0)
}

pub fn gen_sic(d: usize, out: &Path) -> Result<i32, String> {
    let fiducial = fixture_fiducial(d).map_err(|e| e.to_string())?;
    let orbit = wh_orbit(&fiducial).map_err(|e| e.to_string())?;
    let data = CandidateData::SicStates(orbit.states().to_vec());
    let metadata = Metadata {
        provenance: Some(format!("fiducial orbit for d = {d}")),
        ..Metadata::default()
    };
    format::write_candidate(out, Kind::Sic, d, &data, Some(metadata))?;
    println!("wrote {} states of dimension {d} to {}", d * d, out.display());
    Ok(0)
}

pub fn verify(input: &Path, tol: f64, bloch: bool, out: Option<&Path>) -> Result<i32, String> {
    let candidate = format::read_candidate(input)?;
    let in_file = |message: String| format!("{}: {message}", input.display());

    let report = match (&candidate.data, bloch) {
        (CandidateData::MubStates(bases), false) => {
            verify_mub_set(&assemble_mub(bases).map_err(&in_file)?, tol)
        }
        (CandidateData::MubStates(bases), true) => {
            let groups = lift_grouped(bases).map_err(&in_file)?;
            verify_bloch_set(&groups, tol).map_err(|e| in_file(e.to_string()))?
        }
        (CandidateData::MubLifted(groups), true) => {
            verify_bloch_set(groups, tol).map_err(|e| in_file(e.to_string()))?
        }
        (CandidateData::SicStates(states), false) => {
            verify_sic_set(&assemble_sic(states).map_err(&in_file)?, tol)
        }
        (CandidateData::SicStates(states), true) => {
            let lifted = lift_flat(states).map_err(&in_file)?;
            verify_sic_bloch(&lifted, tol).map_err(|e| in_file(e.to_string()))?
        }
        (CandidateData::SicLifted(lifted), true) => {
            verify_sic_bloch(lifted, tol).map_err(|e| in_file(e.to_string()))?
        }
        (CandidateData::MubLifted(_) | CandidateData::SicLifted(_), false) => {
            return Err(in_file(
                "holds lifted vectors; pass --bloch to verify them".to_string(),
            ));
        }
    };

    let space = if bloch { Space::Bloch } else { Space::State };
    let file = ReportFile::from_report(input, candidate.kind, candidate.d, space, tol, &report);
    match out {
        Some(path) => {
            format::write_report(path, &file)?;
            println!("wrote {}", path.display());
        }
        None => {
            let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
            println!("{text}");
        }
    }
    Ok(if report.overall_pass { 0 } else { 1 })
}

pub fn lift(input: &Path, out: &Path) -> Result<i32, String> {
    let candidate = format::read_candidate(input)?;
    let in_file = |message: String| format!("{}: {message}", input.display());
    let data = match &candidate.data {
        CandidateData::MubStates(bases) => {
            CandidateData::MubLifted(lift_grouped(bases).map_err(&in_file)?)
        }
        CandidateData::SicStates(states) => {
            CandidateData::SicLifted(lift_flat(states).map_err(&in_file)?)
        }
        CandidateData::MubLifted(_) | CandidateData::SicLifted(_) => {
            return Err(in_file(
                "already lifted (vectors have d*d components)".to_string(),
            ));
        }
    };
    format::write_candidate(out, candidate.kind, candidate.d, &data, candidate.metadata)?;
    println!("wrote {}", out.display());
    Ok(0)
}

pub fn reconstruct(input: &Path, out: &Path) -> Result<i32, String> {
    let candidate = format::read_candidate(input)?;
    let in_file = |message: String| format!("{}: {message}", input.display());
    let data = match &candidate.data {
        CandidateData::MubLifted(groups) => {
            let mut bases = Vec::with_capacity(groups.len());
            for (a, group) in groups.iter().enumerate() {
                let mut vectors = Vec::with_capacity(group.len());
                for (alpha, w) in group.iter().enumerate() {
                    vectors.push(
                        reconstruct_one(w, &format!("data[{a}][{alpha}]")).map_err(&in_file)?,
                    );
                }
                bases.push(vectors);
            }
            CandidateData::MubStates(bases)
        }
        CandidateData::SicLifted(lifted) => {
            let mut states = Vec::with_capacity(lifted.len());
            for (x, w) in lifted.iter().enumerate() {
                states.push(reconstruct_one(w, &format!("data[{x}]")).map_err(&in_file)?);
            }
            CandidateData::SicStates(states)
        }
        CandidateData::MubStates(_) | CandidateData::SicStates(_) => {
            return Err(in_file(
                "holds state vectors; reconstruct expects a lifted file".to_string(),
            ));
        }
    };
    format::write_candidate(out, candidate.kind, candidate.d, &data, candidate.metadata)?;
    println!("wrote {}", out.display());
    Ok(0)
}

pub fn search(
    config: SearchConfig,
    problem_echo: &str,
    formulation_echo: &str,
    out: &Path,
) -> Result<i32, String> {
    let result = run_search(&config).map_err(|e| e.to_string())?;

    let (kind, data) = match &result.best_candidate {
        BestCandidate::Mub(set) => (
            Kind::Mub,
            CandidateData::MubStates(
                set.bases().iter().map(|basis| basis.vectors().to_vec()).collect(),
            ),
        ),
        BestCandidate::Sic(set) => (Kind::Sic, CandidateData::SicStates(set.states().to_vec())),
    };
    let metadata = Metadata {
        seed: Some(config.seed),
        provenance: Some("numerical search".to_string()),
        notes: None,
        search: Some(SearchRecord {
            problem: problem_echo.to_string(),
            formulation: formulation_echo.to_string(),
            restarts: config.restarts,
            max_iterations: config.max_iterations,
            step_size: config.step_size,
            success_threshold: config.success_threshold,
            stagnation_window: config.stagnation_window,
            best_restart: result.best_restart,
            best_objective: result.best_objective,
            success: result.success,
            restart_log: result
                .restarts
                .iter()
                .map(|summary| RestartRecord {
                    restart: summary.restart,
                    initial_objective: summary.initial_objective,
                    final_objective: summary.final_objective,
                    iterations: summary.iterations,
                    stop: stop_name(summary.stop).to_string(),
                })
                .collect(),
        }),
    };
    format::write_candidate(out, kind, config.d, &data, Some(metadata))?;

    let best = &result.restarts[result.best_restart];
    println!(
        "best objective {:.3e} from restart {} after {} iterations ({})",
        result.best_objective,
        result.best_restart,
        best.iterations,
        stop_name(best.stop)
    );
    println!("success: {}", result.success);
    println!("wrote {}", out.display());
    Ok(0)
}

pub fn report(input: &Path) -> Result<i32, String> {
    let file = format::read_report(input)?;
    let rendered = VerificationReport {
        checks: file
            .checks
            .iter()
            .map(|check| CheckResult {
                label: check.label.clone(),
                worst_residual: check.worst_residual,
                threshold: check.threshold,
                pass: check.pass,
                worst_offender: check.worst_offender.clone(),
            })
            .collect(),
        overall_pass: file.overall_pass,
    };
    println!("input: {}", file.input);
    println!(
        "kind: {}, d = {}, space: {}, tolerance: {:e}",
        file.kind, file.d, file.space, file.tolerance
    );
    println!("{rendered}");
    Ok(0)
}

fn assemble_mub(bases: &[Vec<CVector>]) -> Result<MubSet, String> {
    let bases = bases
        .iter()
        .enumerate()
        .map(|(a, vectors)| {
            Basis::new(vectors.clone()).map_err(|e| format!("data[{a}]: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    MubSet::new(bases).map_err(|e| format!("data: {e}"))
}

fn assemble_sic(states: &[CVector]) -> Result<SicSet, String> {
    SicSet::new(states.to_vec()).map_err(|e| format!("data: {e}"))
}

fn lift_grouped(bases: &[Vec<CVector>]) -> Result<Vec<Vec<BlochVector>>, String> {
    bases
        .iter()
        .enumerate()
        .map(|(a, basis)| {
            basis
                .iter()
                .enumerate()
                .map(|(alpha, v)| {
                    lift_state(v).map_err(|e| format!("data[{a}][{alpha}]: {e}"))
                })
                .collect()
        })
        .collect()
}

fn lift_flat(states: &[CVector]) -> Result<Vec<BlochVector>, String> {
    states
        .iter()
        .enumerate()
        .map(|(x, v)| lift_state(v).map_err(|e| format!("data[{x}]: {e}")))
        .collect()
}

fn reconstruct_one(w: &BlochVector, path: &str) -> Result<CVector, String> {
    let matrix = matrix_from_bloch(w).map_err(|e| format!("{path}: {e}"))?;
    reconstruct_state(&matrix).map_err(|e| format!("{path}: {e}"))
}

fn stop_name(stop: StopReason) -> &'static str {
    match stop {
        StopReason::Converged => "converged",
        StopReason::Stagnated => "stagnated",
        StopReason::LineSearchFloor => "line search floor",
        StopReason::MaxIterations => "max iterations",
    }
}

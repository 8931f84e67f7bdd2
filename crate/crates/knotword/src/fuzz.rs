//! Randomized invariance checking: seeded, replayable trial runners shared
//! by the command line and the test suite.
//!
//! Every trial derives its own generator seeds from a base seed and the
//! trial number, so a run is reproducible from the base seed alone and any
//! failing trial can be replayed in isolation. Failures carry the diagram
//! and move that broke the property, ready to paste back into the tools.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{letter_value, phi, psi, GroupElement};
use crate::gauss::{GaussDiagram, Kind};
use crate::invariant::{compact_invariant, w, w_after};
use crate::moves::{
    apply_move, random_diagram, random_isotopy_move, random_move_sequence, rotate_basepoint, Move,
    RotationEffect,
};

/// One broken property, with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// Trial number within the run.
    pub trial: usize,
    /// The derived seed that generated the starting diagram.
    pub seed: u64,
    /// The diagram the offending step started from.
    pub diagram: String,
    /// The move that was applied, when the failure concerns a step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
    /// What went wrong, with the observed and expected values.
    pub detail: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "trial {} (diagram seed {}): {}; diagram `{}`",
            self.trial, self.seed, self.detail, self.diagram
        )?;
        if let Some(step) = &self.step {
            write!(f, "; move `{step}`")?;
        }
        Ok(())
    }
}

/// Outcome of a fuzz run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    /// The base seed of the run.
    pub seed: u64,
    pub trials: usize,
    pub failures: Vec<Failure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parameters of a fuzz run.
#[derive(Clone, Copy, Debug)]
pub struct FuzzOptions {
    pub max_chords: usize,
    pub sequence_length: usize,
    pub kind: Kind,
    pub c_even_only: bool,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        FuzzOptions {
            max_chords: 12,
            sequence_length: 8,
            kind: Kind::Long,
            c_even_only: false,
        }
    }
}

/// Splitmix-style mixer giving each (trial, stream) pair an independent seed.
fn derived_seed(base: u64, trial: u64, stream: u64) -> u64 {
    let mut z = base
        ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ stream.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs trials in parallel, collecting failures in trial order.
pub fn run_trials<F>(trials: usize, trial: F) -> Vec<Failure>
where
    F: Fn(usize) -> Result<(), Failure> + Sync,
{
    (0..trials)
        .into_par_iter()
        .filter_map(|i| trial(i).err())
        .collect()
}

/// The full per-diagram check suite: move-sequence invariance, the twin
/// equality on even index-`c` counts, and — on closed diagrams — rotation
/// laws and constancy of the orbit class.
pub fn fuzz_trial(trial: usize, base_seed: u64, options: FuzzOptions) -> Result<(), Failure> {
    sequence_trial(
        trial,
        base_seed,
        options.max_chords,
        options.sequence_length,
        options.kind,
        options.c_even_only,
    )?;
    if options.c_even_only {
        twin_trial(trial, base_seed, options.max_chords, options.kind)?;
    }
    if options.kind == Kind::Closed && options.c_even_only {
        rotation_trial(trial, base_seed, options.max_chords)?;
        mixed_closed_trial(
            trial,
            base_seed,
            options.max_chords,
            options.sequence_length,
        )?;
    }
    Ok(())
}

/// Runs [`fuzz_trial`] over `trials` trials in parallel.
pub fn run_fuzz(base_seed: u64, trials: usize, options: FuzzOptions) -> FuzzReport {
    let failures = run_trials(trials, |i| fuzz_trial(i, base_seed, options));
    FuzzReport {
        seed: base_seed,
        trials,
        failures,
    }
}

/// One random diagram, one random move: the word value must not change and
/// the result must stay valid.
pub fn single_move_trial(
    trial: usize,
    base_seed: u64,
    max_chords: usize,
    kind: Kind,
) -> Result<(), Failure> {
    sequence_trial(trial, base_seed, max_chords, 1, kind, false)
}

/// One random diagram, a sequence of random moves: the word value must stay
/// fixed along the whole sequence.
pub fn sequence_trial(
    trial: usize,
    base_seed: u64,
    max_chords: usize,
    length: usize,
    kind: Kind,
    c_even_only: bool,
) -> Result<(), Failure> {
    let diagram_seed = derived_seed(base_seed, trial as u64, 0);
    let moves_seed = derived_seed(base_seed, trial as u64, 1);
    let d = random_diagram(diagram_seed, max_chords, kind, c_even_only);
    let w0 = w(&d);
    let mut before = d;
    for (m, after) in random_move_sequence(&before.clone(), moves_seed, length) {
        let violations = after.validate();
        if !violations.is_empty() {
            return Err(step_failure(
                trial,
                diagram_seed,
                &before,
                &m,
                format!("move produced an invalid diagram: {violations:?}"),
            ));
        }
        let w1 = w(&after);
        if w1 != w0 {
            return Err(step_failure(
                trial,
                diagram_seed,
                &before,
                &m,
                format!("word value changed from {w0} to {w1}"),
            ));
        }
        before = after;
    }
    Ok(())
}

/// One random diagram with an even number of index-`c` chords: the two twin
/// values must agree exactly.
pub fn twin_trial(
    trial: usize,
    base_seed: u64,
    max_chords: usize,
    kind: Kind,
) -> Result<(), Failure> {
    let diagram_seed = derived_seed(base_seed, trial as u64, 2);
    let d = random_diagram(diagram_seed, max_chords, kind, true);
    let before = w(&d);
    let after = w_after(&d);
    if before != after {
        return Err(Failure {
            trial,
            seed: diagram_seed,
            diagram: d.to_text(),
            step: None,
            detail: format!("twin values disagree: before-count {before}, after-count {after}"),
        });
    }
    Ok(())
}

/// The exact value a single basepoint rotation must produce on a closed
/// diagram with an even number of index-`c` chords.
pub fn rotation_expectation(w_before: GroupElement, effect: RotationEffect) -> GroupElement {
    match effect {
        RotationEffect::Unchanged => w_before,
        RotationEffect::ApplyPhi => phi(w_before),
        RotationEffect::ApplyPsi => psi(w_before),
        RotationEffect::ConjugateBy(l) => w_before.conjugate_by(letter_value(l)),
    }
}

/// One random closed diagram with an even index-`c` count: a single
/// basepoint rotation must transform the word value exactly as its reported
/// effect predicts.
pub fn rotation_trial(trial: usize, base_seed: u64, max_chords: usize) -> Result<(), Failure> {
    let diagram_seed = derived_seed(base_seed, trial as u64, 3);
    let d = random_diagram(diagram_seed, max_chords, Kind::Closed, true);
    if d.is_empty() {
        return Ok(());
    }
    let w0 = w(&d);
    let (rotated, effect) = rotate_basepoint(&d).expect("nonempty closed diagrams always rotate");
    let expected = rotation_expectation(w0, effect);
    let got = w(&rotated);
    if got != expected {
        return Err(step_failure(
            trial,
            diagram_seed,
            &d,
            &Move::RotateBasepoint,
            format!("rotation effect `{effect}` predicts {expected}, diagram gives {got}"),
        ));
    }
    Ok(())
}

/// One random closed diagram with an even index-`c` count, walked through a
/// mixed sequence of moves and rotations: every rotation must obey its exact
/// law, every move must keep the word value, and the orbit class must never
/// change.
pub fn mixed_closed_trial(
    trial: usize,
    base_seed: u64,
    max_chords: usize,
    length: usize,
) -> Result<(), Failure> {
    let diagram_seed = derived_seed(base_seed, trial as u64, 4);
    let walk_seed = derived_seed(base_seed, trial as u64, 5);
    let d = random_diagram(diagram_seed, max_chords, Kind::Closed, true);
    let class0 = compact_invariant(&d).expect("generated diagram is closed and c-even");
    let mut rng = ChaCha8Rng::seed_from_u64(walk_seed);
    let mut current = d;
    for _ in 0..length {
        let rotate = !current.is_empty() && rng.gen_bool(0.3);
        let (m, next) = if rotate {
            let w0 = w(&current);
            let (next, effect) =
                rotate_basepoint(&current).expect("nonempty closed diagrams always rotate");
            let expected = rotation_expectation(w0, effect);
            let got = w(&next);
            if got != expected {
                return Err(step_failure(
                    trial,
                    diagram_seed,
                    &current,
                    &Move::RotateBasepoint,
                    format!("rotation effect `{effect}` predicts {expected}, diagram gives {got}"),
                ));
            }
            (Move::RotateBasepoint, next)
        } else {
            let m = random_isotopy_move(&current, &mut rng);
            let next = apply_move(&current, &m).expect("generated move is valid");
            let (w0, w1) = (w(&current), w(&next));
            if w0 != w1 {
                return Err(step_failure(
                    trial,
                    diagram_seed,
                    &current,
                    &m,
                    format!("word value changed from {w0} to {w1}"),
                ));
            }
            (m, next)
        };
        let class = match compact_invariant(&next) {
            Ok(class) => class,
            Err(e) => {
                return Err(step_failure(
                    trial,
                    diagram_seed,
                    &current,
                    &m,
                    format!("orbit class became undefined: {e}"),
                ));
            }
        };
        if class != class0 {
            return Err(step_failure(
                trial,
                diagram_seed,
                &current,
                &m,
                format!("orbit class changed from {class0} to {class}"),
            ));
        }
        current = next;
    }
    Ok(())
}

fn step_failure(
    trial: usize,
    seed: u64,
    before: &GaussDiagram,
    m: &Move,
    detail: String,
) -> Failure {
    Failure {
        trial,
        seed,
        diagram: before.to_text(),
        step: Some(m.to_string()),
        detail,
    }
}

//! Gauss-code diagrams of virtual knots, a two-component crossing index,
//! and a group-valued invariant built from it.
//!
//! The pipeline, bottom to top:
//!
//! * [`gauss`] — the diagrams themselves: a text codec and validated data
//!   model for long and closed Gauss codes with optional signs.
//! * [`indexing`] — the Klein four-group of chord indices (`0`, `a`, `b`,
//!   `c`) and their derivation from arc winding data.
//! * [`coxeter`] — the value group: a 64-element product of two dihedral
//!   groups, the eight letters that generate it, its prime-swapping
//!   automorphisms, and orbit classes under conjugation and those
//!   automorphisms.
//! * [`invariant`] — reading a letter word off a diagram and evaluating it:
//!   the word value `w`, its twin, and the basepoint-free orbit-class
//!   invariant of closed diagrams.
//! * [`moves`] — Reidemeister moves, the forbidden transposition, basepoint
//!   rotation, and seeded random generators for diagrams and move
//!   sequences.
//! * [`fuzz`] — replayable randomized checking that the invariant actually
//!   is one.
//! * [`cli`] — the `knotword` command-line front end.

pub mod cli;
pub mod coxeter;
pub mod fuzz;
pub mod gauss;
pub mod indexing;
pub mod invariant;
pub mod moves;

pub use coxeter::{GroupElement, Letter, OrbitClass};
pub use gauss::{ChordId, GaussDiagram, Kind, Role, Sign};
pub use indexing::{derive_indices, ChordIndex, WindingDecoratedDiagram};
pub use invariant::{compact_invariant, parity_profile, w, w_after};
pub use moves::{apply_move, check_move, rotate_basepoint, Move};

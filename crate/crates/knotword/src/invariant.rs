//! The word invariant: letters read off a diagram and their group value.
//!
//! Every endpoint of an index-`a` or index-`b` chord yields one letter:
//! small (`a`, `b`) at the under endpoint, capital (`A`, `B`) at the over
//! endpoint. Endpoints of index-`c` chords yield no letter but steer the
//! primes: a letter is primed exactly when an odd number of index-`c`
//! endpoints *of the letter's own role* lie strictly before the position of
//! the letter's opposite endpoint. Trivial chords contribute nothing at all.
//! Reading the letters in position order and multiplying their values gives
//! `w`.
//!
//! Counting index-`c` endpoints strictly *after* the opposite endpoint
//! instead gives the twin value `w_after`; on diagrams with an even number
//! of index-`c` chords the two counts have equal parity at every letter, so
//! the twins agree.
//!
//! For long diagrams `w` itself is unchanged by admissible Reidemeister
//! moves. For closed diagrams it depends on the basepoint, but moving the
//! basepoint only conjugates it or applies the prime-swapping automorphisms,
//! so the orbit class survives: that is [`compact_invariant`], defined for
//! closed diagrams with an even number of index-`c` chords.

use thiserror::Error;

use crate::coxeter::{self, evaluate_word, GroupElement, Letter, LetterBase, OrbitClass};
use crate::gauss::{GaussDiagram, Kind, Role};
use crate::indexing::ChordIndex;

/// Which side of the opposite endpoint the prime rule counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    Before,
    After,
}

/// The letters of a diagram in position order, with the position that
/// produced each letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterWord {
    pub letters: Vec<Letter>,
    /// 0-based endpoint positions, strictly increasing, one per letter.
    pub positions: Vec<usize>,
}

impl LetterWord {
    pub fn value(&self) -> GroupElement {
        evaluate_word(&self.letters)
    }
}

impl std::fmt::Display for LetterWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("(empty word)");
        }
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            letter.fmt(f)?;
        }
        Ok(())
    }
}

/// Chord counts per nontrivial index, with their parities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityProfile {
    pub count_a: usize,
    pub count_b: usize,
    pub count_c: usize,
}

impl ParityProfile {
    pub fn a_even(&self) -> bool {
        self.count_a.is_multiple_of(2)
    }

    pub fn b_even(&self) -> bool {
        self.count_b.is_multiple_of(2)
    }

    pub fn c_even(&self) -> bool {
        self.count_c.is_multiple_of(2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("the orbit-class invariant is defined for closed diagrams only")]
    NotClosed,
    #[error(
        "the orbit-class invariant needs an even number of index-c chords; \
         this diagram has {count}"
    )]
    OddIndexC { count: usize },
}

/// Reads the letters off a diagram. See the module docs for the prime rule;
/// `mode` selects whether index-`c` endpoints are counted before or after
/// the opposite endpoint.
pub fn assign_letters(d: &GaussDiagram, mode: CountMode) -> LetterWord {
    let mut letters = Vec::new();
    let mut positions = Vec::new();
    for (pos, e) in d.endpoints().iter().enumerate() {
        let base = match (d.index_of(e.chord), e.role) {
            (Some(ChordIndex::IdxA), Role::Under) => LetterBase::SmallA,
            (Some(ChordIndex::IdxA), Role::Over) => LetterBase::CapitalA,
            (Some(ChordIndex::IdxB), Role::Under) => LetterBase::SmallB,
            (Some(ChordIndex::IdxB), Role::Over) => LetterBase::CapitalB,
            _ => continue,
        };
        let opposite = d.opposite_position(pos);
        let count = d
            .endpoints()
            .iter()
            .enumerate()
            .filter(|(q, f)| {
                let counted_side = match mode {
                    CountMode::Before => *q < opposite,
                    CountMode::After => *q > opposite,
                };
                counted_side && f.role == e.role && d.index_of(f.chord) == Some(ChordIndex::IdxC)
            })
            .count();
        letters.push(Letter {
            base,
            prime: count % 2 == 1,
        });
        positions.push(pos);
    }
    LetterWord { letters, positions }
}

/// The group value of the diagram's letter word (prime rule counting
/// before). Exactly invariant under admissible moves on long diagrams;
/// basepoint-dependent on closed ones.
pub fn w(d: &GaussDiagram) -> GroupElement {
    assign_letters(d, CountMode::Before).value()
}

/// The twin value with the prime rule counting after. Agrees with [`w`]
/// whenever the diagram has an even number of index-`c` chords.
pub fn w_after(d: &GaussDiagram) -> GroupElement {
    assign_letters(d, CountMode::After).value()
}

/// Chord counts for the three nontrivial indices.
pub fn parity_profile(d: &GaussDiagram) -> ParityProfile {
    ParityProfile {
        count_a: d.count_index(ChordIndex::IdxA),
        count_b: d.count_index(ChordIndex::IdxB),
        count_c: d.count_index(ChordIndex::IdxC),
    }
}

/// The basepoint-free invariant of a closed diagram: the orbit class of
/// [`w`]. Requires an even number of index-`c` chords.
pub fn compact_invariant(d: &GaussDiagram) -> Result<OrbitClass, InvariantError> {
    if d.kind() != Kind::Closed {
        return Err(InvariantError::NotClosed);
    }
    let profile = parity_profile(d);
    if !profile.c_even() {
        return Err(InvariantError::OddIndexC {
            count: profile.count_c,
        });
    }
    Ok(coxeter::orbit(w(d)))
}

/// Whether the invariant certifies the diagram as knotted: a non-identity
/// `w` for long diagrams, a non-identity orbit class for closed ones.
pub fn is_nontrivial(d: &GaussDiagram) -> Result<bool, InvariantError> {
    match d.kind() {
        Kind::Long => Ok(w(d) != GroupElement::IDENTITY),
        Kind::Closed => {
            let class = compact_invariant(d)?;
            Ok(class != coxeter::orbit(GroupElement::IDENTITY))
        }
    }
}

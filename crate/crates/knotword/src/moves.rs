//! Diagram moves: validity checking, application, enumeration, basepoint
//! rotation, and seeded random generation of diagrams and move sequences.
//!
//! The three Reidemeister moves act on the endpoint sequence:
//!
//! * R1 inserts or removes a chord whose two endpoints are adjacent; such a
//!   chord must carry the trivial index.
//! * R2 inserts or removes two chords whose endpoints form two adjacent
//!   pairs in mutually reversed order, one pair over-over and the other
//!   under-under. The two chords must carry equal indices, and opposite
//!   signs when signs are present.
//! * R3 picks three pairwise interleaved chords whose six endpoints form
//!   three adjacent pairs — exactly one over-over, one under-under, one
//!   mixed — with indices summing to the trivial index, and transposes the
//!   two endpoints inside each pair.
//!
//! `Delta` is the forbidden transposition: the same configuration but with
//! all three pairs mixed. It genuinely changes the invariant, so it is never
//! offered by the random move generator; it exists to demonstrate
//! sensitivity.
//!
//! Adjacency is linear even on closed diagrams — a pair never wraps around
//! the basepoint. Wrapping configurations are reachable by composing with
//! [`rotate_basepoint`], which is its own move and reports how it transforms
//! the word value.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coxeter::Letter;
use crate::gauss::{ChordId, Endpoint, GaussDiagram, Kind, Role, Sign};
use crate::indexing::{r3_index_admissible, ChordIndex};
use crate::invariant::{assign_letters, CountMode};

/// Which role the first inserted endpoint of an R1 kink takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleOrder {
    UnderOver,
    OverUnder,
}

/// A move instance, addressed against a specific diagram.
///
/// Insertion gaps are 0-based: gap `g` lies before the endpoint currently at
/// position `g`, so gap 0 is the front and gap `len` the back. Transposition
/// pairs are addressed by the 0-based position of each pair's first
/// endpoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    R1Add {
        gap: usize,
        order: RoleOrder,
        index: ChordIndex,
    },
    R1Remove {
        chord: ChordId,
    },
    R2Add {
        gaps: (usize, usize),
        over_first: bool,
        indices: (ChordIndex, ChordIndex),
    },
    R2Remove {
        chords: (ChordId, ChordId),
    },
    R3 {
        pairs: [usize; 3],
    },
    Delta {
        pairs: [usize; 3],
    },
    RotateBasepoint,
}

/// How one basepoint rotation transforms the word value of a closed diagram
/// with an even number of index-`c` chords.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationEffect {
    /// The moved endpoint belongs to a trivial chord: the value is unchanged.
    Unchanged,
    /// The under endpoint of an index-`c` chord moved: apply `phi`.
    ApplyPhi,
    /// The over endpoint of an index-`c` chord moved: apply `psi`.
    ApplyPsi,
    /// A letter endpoint moved: conjugate by that letter (as read off the
    /// diagram before the rotation).
    ConjugateBy(Letter),
}

impl fmt::Display for RotationEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationEffect::Unchanged => f.write_str("unchanged"),
            RotationEffect::ApplyPhi => f.write_str("phi"),
            RotationEffect::ApplyPsi => f.write_str("psi"),
            RotationEffect::ConjugateBy(l) => write!(f, "conjugate-by {l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveViolation {
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("unknown chord {0}")]
    UnknownChord(ChordId),
    #[error("a first Reidemeister chord must carry the trivial index")]
    R1IndexNotTrivial,
    #[error("the endpoints of chord {0} are not adjacent")]
    R1NotAdjacent(ChordId),
    #[error("the two chords of a second Reidemeister move must be distinct")]
    ChordsNotDistinct,
    #[error("a second Reidemeister pair must carry equal indices, got {0} and {1}")]
    R2IndexMismatch(ChordIndex, ChordIndex),
    #[error("a second Reidemeister pair must carry opposite signs")]
    R2SignsNotOpposite,
    #[error("the four endpoints do not form two adjacent pairs in mutually reversed order")]
    R2PatternMismatch,
    #[error("a second Reidemeister move needs one over-over and one under-under pair")]
    R2RolesMismatch,
    #[error("the three transposition pairs must be disjoint, each of two adjacent positions")]
    PairsNotDisjoint,
    #[error("the six endpoints must cover exactly three chords, two pairs per chord")]
    TriangleStructure,
    #[error("the three chords must be pairwise interleaved")]
    NotInterleaved,
    #[error("a third Reidemeister move needs one over-over, one under-under and one mixed pair")]
    R3RolePattern,
    #[error("the forbidden transposition needs all three pairs mixed")]
    DeltaRolePattern,
    #[error("the three chord indices must sum to the trivial index")]
    IndexSumNotTrivial,
    #[error("basepoint rotation applies to closed diagrams only")]
    NotClosed,
    #[error("the diagram is empty")]
    EmptyDiagram,
    #[error("strict sign checking requires a signed diagram")]
    StrictNeedsSigns,
}

/// Optional stricter checking. `strict_signs` insists that diagrams touched
/// by a second Reidemeister move actually carry sign data (the opposite-sign
/// condition is always enforced when signs are present).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MoveOptions {
    pub strict_signs: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PairKind {
    OverOver,
    UnderUnder,
    Mixed,
}

struct TripleInfo {
    kinds: [PairKind; 3],
}

/// Checks a move against a diagram with default options.
pub fn check_move(d: &GaussDiagram, m: &Move) -> Result<(), MoveViolation> {
    check_move_with(d, m, MoveOptions::default())
}

/// Checks a move against a diagram, reporting the first violated condition.
pub fn check_move_with(
    d: &GaussDiagram,
    m: &Move,
    options: MoveOptions,
) -> Result<(), MoveViolation> {
    match m {
        Move::R1Add { gap, index, .. } => {
            if *gap > d.len() {
                return Err(MoveViolation::OutOfRange(*gap));
            }
            if !index.is_trivial() {
                return Err(MoveViolation::R1IndexNotTrivial);
            }
            Ok(())
        }
        Move::R1Remove { chord } => {
            let (p, q) = d
                .positions_of(*chord)
                .ok_or(MoveViolation::UnknownChord(*chord))?;
            if d.index_of(*chord) != Some(ChordIndex::Trivial) {
                return Err(MoveViolation::R1IndexNotTrivial);
            }
            if q != p + 1 {
                return Err(MoveViolation::R1NotAdjacent(*chord));
            }
            Ok(())
        }
        Move::R2Add {
            gaps: (i, j),
            indices: (x, y),
            ..
        } => {
            if *i > d.len() {
                return Err(MoveViolation::OutOfRange(*i));
            }
            if *j > d.len() || j < i {
                return Err(MoveViolation::OutOfRange(*j));
            }
            if x != y {
                return Err(MoveViolation::R2IndexMismatch(*x, *y));
            }
            if options.strict_signs && !d.has_signs() && !d.is_empty() {
                return Err(MoveViolation::StrictNeedsSigns);
            }
            Ok(())
        }
        Move::R2Remove { chords: (c1, c2) } => {
            if c1 == c2 {
                return Err(MoveViolation::ChordsNotDistinct);
            }
            let p1 = d
                .positions_of(*c1)
                .ok_or(MoveViolation::UnknownChord(*c1))?;
            let p2 = d
                .positions_of(*c2)
                .ok_or(MoveViolation::UnknownChord(*c2))?;
            let (x, y) = (
                d.index_of(*c1).expect("validated diagram"),
                d.index_of(*c2).expect("validated diagram"),
            );
            if x != y {
                return Err(MoveViolation::R2IndexMismatch(x, y));
            }
            let mut q = [p1.0, p1.1, p2.0, p2.1];
            q.sort_unstable();
            // Two adjacent pairs, each holding one endpoint of both chords,
            // with the chord order reversed between the pairs.
            if q[1] != q[0] + 1 || q[3] != q[2] + 1 {
                return Err(MoveViolation::R2PatternMismatch);
            }
            let chord_at = |p: usize| d.endpoint(p).chord;
            if chord_at(q[0]) == chord_at(q[1]) || chord_at(q[0]) != chord_at(q[3]) {
                return Err(MoveViolation::R2PatternMismatch);
            }
            let role_at = |p: usize| d.endpoint(p).role;
            if role_at(q[0]) != role_at(q[1])
                || role_at(q[2]) != role_at(q[3])
                || role_at(q[0]) == role_at(q[2])
            {
                return Err(MoveViolation::R2RolesMismatch);
            }
            if options.strict_signs && !d.has_signs() {
                return Err(MoveViolation::StrictNeedsSigns);
            }
            if let (Some(s1), Some(s2)) = (d.sign_of(*c1), d.sign_of(*c2)) {
                if s1 != s2.opposite() {
                    return Err(MoveViolation::R2SignsNotOpposite);
                }
            }
            Ok(())
        }
        Move::R3 { pairs } => {
            let info = analyze_triple(d, pairs)?;
            let over = info
                .kinds
                .iter()
                .filter(|k| **k == PairKind::OverOver)
                .count();
            let under = info
                .kinds
                .iter()
                .filter(|k| **k == PairKind::UnderUnder)
                .count();
            if over != 1 || under != 1 {
                return Err(MoveViolation::R3RolePattern);
            }
            Ok(())
        }
        Move::Delta { pairs } => {
            let info = analyze_triple(d, pairs)?;
            if info.kinds.iter().any(|k| *k != PairKind::Mixed) {
                return Err(MoveViolation::DeltaRolePattern);
            }
            Ok(())
        }
        Move::RotateBasepoint => {
            if d.kind() != Kind::Closed {
                return Err(MoveViolation::NotClosed);
            }
            if d.is_empty() {
                return Err(MoveViolation::EmptyDiagram);
            }
            Ok(())
        }
    }
}

/// Shared structural analysis for `R3` and `Delta`: disjoint adjacent pairs,
/// triangle chord structure, pairwise interleaving, zero index sum.
fn analyze_triple(d: &GaussDiagram, pairs: &[usize; 3]) -> Result<TripleInfo, MoveViolation> {
    let mut ps = *pairs;
    ps.sort_unstable();
    for &p in &ps {
        if p + 1 >= d.len() {
            return Err(MoveViolation::OutOfRange(p));
        }
    }
    if ps[1] <= ps[0] + 1 || ps[2] <= ps[1] + 1 {
        return Err(MoveViolation::PairsNotDisjoint);
    }

    let mut chords: Vec<ChordId> = Vec::with_capacity(3);
    for &p in &ps {
        let (c1, c2) = (d.endpoint(p).chord, d.endpoint(p + 1).chord);
        if c1 == c2 {
            return Err(MoveViolation::TriangleStructure);
        }
        for c in [c1, c2] {
            if !chords.contains(&c) {
                chords.push(c);
            }
        }
    }
    if chords.len() != 3 {
        return Err(MoveViolation::TriangleStructure);
    }
    let in_pairs = |c: ChordId| {
        ps.iter()
            .filter(|&&p| d.endpoint(p).chord == c || d.endpoint(p + 1).chord == c)
            .count()
    };
    if chords.iter().any(|&c| in_pairs(c) != 2) {
        return Err(MoveViolation::TriangleStructure);
    }

    for i in 0..3 {
        for j in i + 1..3 {
            if !interleaved(d, chords[i], chords[j]) {
                return Err(MoveViolation::NotInterleaved);
            }
        }
    }

    let indices: Vec<ChordIndex> = chords
        .iter()
        .map(|&c| d.index_of(c).expect("validated diagram"))
        .collect();
    if !r3_index_admissible(indices[0], indices[1], indices[2]) {
        return Err(MoveViolation::IndexSumNotTrivial);
    }

    let kind_of = |p: usize| match (d.endpoint(p).role, d.endpoint(p + 1).role) {
        (Role::Over, Role::Over) => PairKind::OverOver,
        (Role::Under, Role::Under) => PairKind::UnderUnder,
        _ => PairKind::Mixed,
    };
    Ok(TripleInfo {
        kinds: [kind_of(ps[0]), kind_of(ps[1]), kind_of(ps[2])],
    })
}

/// Whether the two chords' endpoints alternate along the diagram.
fn interleaved(d: &GaussDiagram, x: ChordId, y: ChordId) -> bool {
    let (x0, x1) = d.positions_of(x).expect("chord present");
    let (y0, y1) = d.positions_of(y).expect("chord present");
    let inside0 = x0 < y0 && y0 < x1;
    let inside1 = x0 < y1 && y1 < x1;
    inside0 != inside1
}

/// Applies a move with default options; the diagram is left untouched and a
/// new normalized diagram is returned.
pub fn apply_move(d: &GaussDiagram, m: &Move) -> Result<GaussDiagram, MoveViolation> {
    apply_move_with(d, m, MoveOptions::default())
}

pub fn apply_move_with(
    d: &GaussDiagram,
    m: &Move,
    options: MoveOptions,
) -> Result<GaussDiagram, MoveViolation> {
    check_move_with(d, m, options)?;
    let fresh = d.chords().map(|c| c.0).max().unwrap_or(0) + 1;
    let mut endpoints = d.endpoints().to_vec();
    let mut indices = d.indices().clone();
    let mut signs = d.signs().cloned();

    match m {
        Move::R1Add { gap, order, index } => {
            let chord = ChordId(fresh);
            let (first, second) = match order {
                RoleOrder::UnderOver => (Role::Under, Role::Over),
                RoleOrder::OverUnder => (Role::Over, Role::Under),
            };
            endpoints.insert(
                *gap,
                Endpoint {
                    chord,
                    role: second,
                },
            );
            endpoints.insert(*gap, Endpoint { chord, role: first });
            indices.insert(chord, *index);
            if let Some(signs) = signs.as_mut() {
                signs.insert(chord, Sign::Plus);
            }
        }
        Move::R1Remove { chord } => {
            endpoints.retain(|e| e.chord != *chord);
            indices.remove(chord);
            if let Some(signs) = signs.as_mut() {
                signs.remove(chord);
            }
        }
        Move::R2Add {
            gaps: (i, j),
            over_first,
            indices: (index, _),
        } => {
            let c1 = ChordId(fresh);
            let c2 = ChordId(fresh + 1);
            let (first_role, second_role) = if *over_first {
                (Role::Over, Role::Under)
            } else {
                (Role::Under, Role::Over)
            };
            // Insert the rear pair first so the front gap stays valid. The
            // rear pair lists the chords in reversed order.
            endpoints.insert(
                *j,
                Endpoint {
                    chord: c1,
                    role: second_role,
                },
            );
            endpoints.insert(
                *j,
                Endpoint {
                    chord: c2,
                    role: second_role,
                },
            );
            endpoints.insert(
                *i,
                Endpoint {
                    chord: c2,
                    role: first_role,
                },
            );
            endpoints.insert(
                *i,
                Endpoint {
                    chord: c1,
                    role: first_role,
                },
            );
            indices.insert(c1, *index);
            indices.insert(c2, *index);
            if let Some(signs) = signs.as_mut() {
                signs.insert(c1, Sign::Plus);
                signs.insert(c2, Sign::Minus);
            }
        }
        Move::R2Remove { chords: (c1, c2) } => {
            endpoints.retain(|e| e.chord != *c1 && e.chord != *c2);
            for c in [c1, c2] {
                indices.remove(c);
                if let Some(signs) = signs.as_mut() {
                    signs.remove(c);
                }
            }
        }
        Move::R3 { pairs } | Move::Delta { pairs } => {
            for &p in pairs {
                endpoints.swap(p, p + 1);
            }
        }
        Move::RotateBasepoint => {
            let first = endpoints.remove(0);
            endpoints.push(first);
        }
    }

    Ok(GaussDiagram::new(d.kind(), endpoints, indices, signs)
        .expect("moves preserve diagram validity"))
}

/// Rotates the basepoint of a closed diagram: the first endpoint becomes the
/// last. Also reports how the rotation transforms the word value; the
/// conjugating letter is read off the diagram *before* the rotation.
pub fn rotate_basepoint(d: &GaussDiagram) -> Result<(GaussDiagram, RotationEffect), MoveViolation> {
    check_move(d, &Move::RotateBasepoint)?;
    let first = d.endpoint(0);
    let effect = match d.index_of(first.chord).expect("validated diagram") {
        ChordIndex::Trivial => RotationEffect::Unchanged,
        ChordIndex::IdxC => match first.role {
            Role::Under => RotationEffect::ApplyPhi,
            Role::Over => RotationEffect::ApplyPsi,
        },
        ChordIndex::IdxA | ChordIndex::IdxB => {
            let word = assign_letters(d, CountMode::Before);
            let at_front = word
                .positions
                .first()
                .zip(word.letters.first())
                .filter(|(&p, _)| p == 0)
                .map(|(_, &l)| l)
                .expect("letter chords yield a letter at their endpoint");
            RotationEffect::ConjugateBy(at_front)
        }
    };
    let rotated = apply_move(d, &Move::RotateBasepoint)?;
    Ok((rotated, effect))
}

/// All removal and transposition instances valid on `d`, a bounded sample of
/// insertion moves, and — on nonempty closed diagrams — the basepoint
/// rotation. Every returned move passes [`check_move`].
pub fn applicable_moves(d: &GaussDiagram) -> Vec<Move> {
    let mut moves = structural_moves(d, true);

    let gaps = sample_gaps(d.len());
    for &gap in &gaps {
        for order in [RoleOrder::UnderOver, RoleOrder::OverUnder] {
            moves.push(Move::R1Add {
                gap,
                order,
                index: ChordIndex::Trivial,
            });
        }
    }
    if !d.is_empty() {
        for (gi, &i) in gaps.iter().enumerate() {
            for &j in &gaps[gi..] {
                for over_first in [true, false] {
                    for index in ChordIndex::ALL {
                        moves.push(Move::R2Add {
                            gaps: (i, j),
                            over_first,
                            indices: (index, index),
                        });
                    }
                }
            }
        }
    }
    if d.kind() == Kind::Closed && !d.is_empty() {
        moves.push(Move::RotateBasepoint);
    }

    debug_assert!(moves.iter().all(|m| check_move(d, m).is_ok()));
    moves
}

/// Every valid `R1Remove`, `R2Remove` and `R3` instance, plus the `Delta`
/// instances when `include_delta` is set.
fn structural_moves(d: &GaussDiagram, include_delta: bool) -> Vec<Move> {
    let mut moves = Vec::new();
    let chords: Vec<ChordId> = d.chords().collect();
    for &c in &chords {
        let m = Move::R1Remove { chord: c };
        if check_move(d, &m).is_ok() {
            moves.push(m);
        }
    }
    for (i, &c1) in chords.iter().enumerate() {
        for &c2 in &chords[i + 1..] {
            let m = Move::R2Remove { chords: (c1, c2) };
            if check_move(d, &m).is_ok() {
                moves.push(m);
            }
        }
    }
    // Triples are addressed by pair positions: collect the six endpoint
    // positions of each chord triple and see whether they group into three
    // adjacent pairs.
    for i in 0..chords.len() {
        for j in i + 1..chords.len() {
            for k in j + 1..chords.len() {
                let mut positions: Vec<usize> = Vec::with_capacity(6);
                for &c in [chords[i], chords[j], chords[k]].iter() {
                    let (p, q) = d.positions_of(c).expect("chord present");
                    positions.push(p);
                    positions.push(q);
                }
                positions.sort_unstable();
                if positions[1] != positions[0] + 1
                    || positions[3] != positions[2] + 1
                    || positions[5] != positions[4] + 1
                {
                    continue;
                }
                let pairs = [positions[0], positions[2], positions[4]];
                let r3 = Move::R3 { pairs };
                if check_move(d, &r3).is_ok() {
                    moves.push(r3);
                }
                if include_delta {
                    let delta = Move::Delta { pairs };
                    if check_move(d, &delta).is_ok() {
                        moves.push(delta);
                    }
                }
            }
        }
    }
    moves
}

/// A deterministic bounded selection of insertion gaps.
fn sample_gaps(len: usize) -> Vec<usize> {
    const MAX: usize = 12;
    if len < MAX {
        (0..=len).collect()
    } else {
        let mut gaps: Vec<usize> = (0..MAX).map(|k| k * len / (MAX - 1)).collect();
        gaps.dedup();
        gaps
    }
}

/// A random valid diagram, deterministic in the seed: up to `max_chords`
/// chords with shuffled endpoints, random roles and random indices. With
/// `c_even_only` the number of index-`c` chords is made even.
pub fn random_diagram(seed: u64, max_chords: usize, kind: Kind, c_even_only: bool) -> GaussDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=max_chords as u32);
    let mut slots: Vec<u32> = (1..=n).flat_map(|i| [i, i]).collect();
    slots.shuffle(&mut rng);

    let mut first_role: BTreeMap<u32, Role> = BTreeMap::new();
    let mut endpoints = Vec::with_capacity(slots.len());
    for id in slots {
        let role = match first_role.get(&id) {
            None => {
                let role = if rng.gen::<bool>() {
                    Role::Over
                } else {
                    Role::Under
                };
                first_role.insert(id, role);
                role
            }
            Some(&r) => r.opposite(),
        };
        endpoints.push(Endpoint {
            chord: ChordId(id),
            role,
        });
    }

    let mut indices: BTreeMap<ChordId, ChordIndex> = (1..=n)
        .map(|i| {
            (
                ChordId(i),
                ChordIndex::ALL[rng.gen_range(0..ChordIndex::ALL.len())],
            )
        })
        .collect();
    if c_even_only {
        let c_chords: Vec<ChordId> = indices
            .iter()
            .filter(|(_, &ix)| ix == ChordIndex::IdxC)
            .map(|(&c, _)| c)
            .collect();
        if c_chords.len() % 2 == 1 {
            let demoted = c_chords[rng.gen_range(0..c_chords.len())];
            let replacement =
                [ChordIndex::Trivial, ChordIndex::IdxA, ChordIndex::IdxB][rng.gen_range(0..3)];
            indices.insert(demoted, replacement);
        }
    }

    GaussDiagram::new(kind, endpoints, indices, None).expect("generated diagram is valid")
}

/// One random valid isotopy move: a removal or R3 when available (and the
/// coin favors it), otherwise a random insertion. Never `Delta`, never a
/// rotation.
pub(crate) fn random_isotopy_move(d: &GaussDiagram, rng: &mut ChaCha8Rng) -> Move {
    let structural = structural_moves(d, false);
    if !structural.is_empty() && rng.gen_bool(0.6) {
        return structural[rng.gen_range(0..structural.len())].clone();
    }
    if rng.gen_bool(0.4) {
        Move::R1Add {
            gap: rng.gen_range(0..=d.len()),
            order: if rng.gen::<bool>() {
                RoleOrder::UnderOver
            } else {
                RoleOrder::OverUnder
            },
            index: ChordIndex::Trivial,
        }
    } else {
        let i = rng.gen_range(0..=d.len());
        let j = rng.gen_range(i..=d.len());
        let index = ChordIndex::ALL[rng.gen_range(0..ChordIndex::ALL.len())];
        Move::R2Add {
            gaps: (i, j),
            over_first: rng.gen(),
            indices: (index, index),
        }
    }
}

/// A sequence of `length` random valid isotopy moves starting from `d`,
/// deterministic in the seed. Returns each move with the diagram it
/// produced. Rotations and `Delta` are never generated.
pub fn random_move_sequence(
    d: &GaussDiagram,
    seed: u64,
    length: usize,
) -> Vec<(Move, GaussDiagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = d.clone();
    let mut out = Vec::with_capacity(length);
    for _ in 0..length {
        let m = random_isotopy_move(&current, &mut rng);
        let next = apply_move(&current, &m).expect("generated move is valid");
        out.push((m, next.clone()));
        current = next;
    }
    out
}

impl fmt::Display for RoleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoleOrder::UnderOver => "UO",
            RoleOrder::OverUnder => "OU",
        })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R1Add { gap, order, index } => {
                write!(f, "R1Add @{gap} {order}")?;
                if !index.is_trivial() {
                    write!(f, " :{index}")?;
                }
                Ok(())
            }
            Move::R1Remove { chord } => write!(f, "R1Remove {chord}"),
            Move::R2Add {
                gaps: (i, j),
                over_first,
                indices: (x, y),
            } => {
                let lead = if *over_first { 'O' } else { 'U' };
                write!(f, "R2Add @({i},{j}) {lead} :{x}")?;
                if y != x {
                    write!(f, " :{y}")?;
                }
                Ok(())
            }
            Move::R2Remove { chords: (c1, c2) } => write!(f, "R2Remove ({c1},{c2})"),
            Move::R3 { pairs } => write!(f, "R3 {}", pairs_text(pairs)),
            Move::Delta { pairs } => write!(f, "Delta {}", pairs_text(pairs)),
            Move::RotateBasepoint => f.write_str("Rotate"),
        }
    }
}

/// Pairs in the text form use 1-based endpoint positions.
fn pairs_text(pairs: &[usize; 3]) -> String {
    let mut ps = *pairs;
    ps.sort_unstable();
    format!(
        "@({},{})({},{})({},{})",
        ps[0] + 1,
        ps[0] + 2,
        ps[1] + 1,
        ps[1] + 2,
        ps[2] + 1,
        ps[2] + 2
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad move syntax: {0}")]
pub struct MoveParseError(String);

impl FromStr for Move {
    type Err = MoveParseError;

    fn from_str(s: &str) -> Result<Move, MoveParseError> {
        let err = |msg: &str| MoveParseError(msg.to_string());
        let tokens: Vec<&str> = s.split_whitespace().collect();
        match tokens.as_slice() {
            ["Rotate"] => Ok(Move::RotateBasepoint),
            ["R1Add", at, order, rest @ ..] => {
                let gap = at
                    .strip_prefix('@')
                    .and_then(|g| g.parse().ok())
                    .ok_or_else(|| err("R1Add expects `@gap`"))?;
                let order = match *order {
                    "UO" => RoleOrder::UnderOver,
                    "OU" => RoleOrder::OverUnder,
                    _ => return Err(err("R1Add expects order `UO` or `OU`")),
                };
                let index = match rest {
                    [] => ChordIndex::Trivial,
                    [ix] => parse_index(ix).ok_or_else(|| err("bad index"))?,
                    _ => return Err(err("trailing tokens after R1Add")),
                };
                Ok(Move::R1Add { gap, order, index })
            }
            ["R1Remove", chord] => {
                let chord = chord
                    .parse()
                    .map_err(|_| err("R1Remove expects a chord id"))?;
                Ok(Move::R1Remove {
                    chord: ChordId(chord),
                })
            }
            ["R2Add", at, lead, first, rest @ ..] => {
                let gaps = at
                    .strip_prefix('@')
                    .and_then(parse_usize_pair)
                    .ok_or_else(|| err("R2Add expects `@(i,j)`"))?;
                let over_first = match *lead {
                    "O" => true,
                    "U" => false,
                    _ => return Err(err("R2Add expects leading pair role `O` or `U`")),
                };
                let x = parse_index(first).ok_or_else(|| err("bad index"))?;
                let y = match rest {
                    [] => x,
                    [ix] => parse_index(ix).ok_or_else(|| err("bad index"))?,
                    _ => return Err(err("trailing tokens after R2Add")),
                };
                Ok(Move::R2Add {
                    gaps,
                    over_first,
                    indices: (x, y),
                })
            }
            ["R2Remove", pair] => {
                let (c1, c2) =
                    parse_usize_pair(pair).ok_or_else(|| err("R2Remove expects `(c1,c2)`"))?;
                let narrow = |v: usize| u32::try_from(v).map_err(|_| err("chord id out of range"));
                Ok(Move::R2Remove {
                    chords: (ChordId(narrow(c1)?), ChordId(narrow(c2)?)),
                })
            }
            ["R3", at] => Ok(Move::R3 {
                pairs: parse_pairs(at).ok_or_else(|| {
                    err("R3 expects `@(p1,p2)(p3,p4)(p5,p6)` with adjacent 1-based pairs")
                })?,
            }),
            ["Delta", at] => Ok(Move::Delta {
                pairs: parse_pairs(at).ok_or_else(|| {
                    err("Delta expects `@(p1,p2)(p3,p4)(p5,p6)` with adjacent 1-based pairs")
                })?,
            }),
            _ => Err(err(
                "expected R1Add, R1Remove, R2Add, R2Remove, R3, Delta or Rotate",
            )),
        }
    }
}

fn parse_index(tok: &str) -> Option<ChordIndex> {
    match tok {
        ":0" => Some(ChordIndex::Trivial),
        ":a" => Some(ChordIndex::IdxA),
        ":b" => Some(ChordIndex::IdxB),
        ":c" => Some(ChordIndex::IdxC),
        _ => None,
    }
}

fn parse_usize_pair(tok: &str) -> Option<(usize, usize)> {
    let inner = tok.strip_prefix('(')?.strip_suffix(')')?;
    let (left, right) = inner.split_once(',')?;
    Some((left.parse().ok()?, right.parse().ok()?))
}

/// Parses `@(p1,p2)(p3,p4)(p5,p6)` with 1-based positions, each pair
/// adjacent, into the three 0-based first positions.
fn parse_pairs(tok: &str) -> Option<[usize; 3]> {
    let mut rest = tok.strip_prefix('@')?;
    let mut pairs = [0usize; 3];
    for slot in pairs.iter_mut() {
        let end = rest.find(')')?;
        let (p, q) = parse_usize_pair(&rest[..=end])?;
        if p == 0 || q != p + 1 {
            return None;
        }
        *slot = p - 1;
        rest = &rest[end + 1..];
    }
    if !rest.is_empty() {
        return None;
    }
    Some(pairs)
}

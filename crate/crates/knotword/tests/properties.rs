//! Property-based tests: codec laws, move soundness, and derivation laws
//! over randomly generated diagrams.

use std::collections::BTreeMap;

use proptest::prelude::*;

use knotword::gauss::{ChordId, GaussDiagram, Kind, Sign};
use knotword::indexing::{derive_indices, ChordIndex, WindingDecoratedDiagram};
use knotword::invariant::{assign_letters, parity_profile, w, CountMode};
use knotword::moves::{
    applicable_moves, apply_move, check_move, random_diagram, rotate_basepoint, Move, RoleOrder,
};

/// A random valid diagram: the structure comes from the library's seeded
/// generator, signs are optionally attached on top.
fn arb_diagram() -> impl Strategy<Value = GaussDiagram> {
    (any::<u64>(), 0usize..=10, any::<bool>(), any::<bool>()).prop_map(
        |(seed, max_chords, closed, signed)| {
            let kind = if closed { Kind::Closed } else { Kind::Long };
            let d = random_diagram(seed, max_chords, kind, false);
            if !signed {
                return d;
            }
            let signs: BTreeMap<ChordId, Sign> = d
                .chords()
                .map(|c| {
                    let sign = if (seed >> (c.0 % 64)) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    };
                    (c, sign)
                })
                .collect();
            GaussDiagram::new(
                d.kind(),
                d.endpoints().to_vec(),
                d.indices().clone(),
                Some(signs),
            )
            .expect("signing a valid diagram keeps it valid")
        },
    )
}

fn arb_pairs() -> impl Strategy<Value = [usize; 3]> {
    (0usize..8, 0usize..5, 0usize..5).prop_map(|(a, b, c)| [a, a + 2 + b, a + 4 + b + c])
}

fn arb_move() -> impl Strategy<Value = Move> {
    prop_oneof![
        (0usize..40, any::<bool>(), 0usize..4).prop_map(|(gap, uo, ix)| Move::R1Add {
            gap,
            order: if uo {
                RoleOrder::UnderOver
            } else {
                RoleOrder::OverUnder
            },
            index: ChordIndex::ALL[ix],
        }),
        (1u32..40).prop_map(|c| Move::R1Remove { chord: ChordId(c) }),
        (0usize..40, 0usize..40, any::<bool>(), 0usize..4, 0usize..4).prop_map(
            |(i, j, over_first, x, y)| Move::R2Add {
                gaps: (i.min(j), i.max(j)),
                over_first,
                indices: (ChordIndex::ALL[x], ChordIndex::ALL[y]),
            }
        ),
        (1u32..40, 1u32..40).prop_map(|(c1, c2)| Move::R2Remove {
            chords: (ChordId(c1), ChordId(c2)),
        }),
        arb_pairs().prop_map(|pairs| Move::R3 { pairs }),
        arb_pairs().prop_map(|pairs| Move::Delta { pairs }),
        Just(Move::RotateBasepoint),
    ]
}

proptest! {
    /// Serialization followed by parsing is the identity on normalized
    /// diagrams, signed or not.
    #[test]
    fn codec_round_trips(d in arb_diagram()) {
        let text = d.to_text();
        let back = GaussDiagram::parse(&text).expect("serialized diagrams parse");
        prop_assert_eq!(back, d);
    }

    /// Two diagrams serialize to the same text only when they are equal.
    #[test]
    fn serialization_is_injective(d1 in arb_diagram(), d2 in arb_diagram()) {
        if d1.to_text() == d2.to_text() {
            prop_assert_eq!(d1, d2);
        } else {
            prop_assert_ne!(d1, d2);
        }
    }

    /// Every index-a or index-b chord yields exactly two letters; nothing
    /// else yields any.
    #[test]
    fn letter_count_law(d in arb_diagram()) {
        let profile = parity_profile(&d);
        for mode in [CountMode::Before, CountMode::After] {
            let word = assign_letters(&d, mode);
            prop_assert_eq!(word.letters.len(), 2 * (profile.count_a + profile.count_b));
            // Positions are strictly increasing.
            prop_assert!(word.positions.windows(2).all(|p| p[0] < p[1]));
        }
    }

    /// Everything the enumerator offers is valid, applies cleanly, and —
    /// except for the forbidden transposition and basepoint rotation —
    /// preserves the word value.
    #[test]
    fn applicable_moves_are_sound(d in arb_diagram()) {
        let w0 = w(&d);
        for m in applicable_moves(&d) {
            prop_assert!(check_move(&d, &m).is_ok(), "offered move fails its check: {}", m);
            let next = apply_move(&d, &m).expect("offered move applies");
            prop_assert!(next.validate().is_empty());
            if !matches!(m, Move::Delta { .. } | Move::RotateBasepoint) {
                prop_assert_eq!(w(&next), w0, "move {} changed the word value", m);
            }
        }
    }

    /// A kink insertion is undone by removing the inserted chord.
    #[test]
    fn r1_add_remove_round_trips(d in arb_diagram(), gap_pick in any::<u64>(), uo in any::<bool>()) {
        let gap = (gap_pick % (d.len() as u64 + 1)) as usize;
        let order = if uo { RoleOrder::UnderOver } else { RoleOrder::OverUnder };
        let grown = apply_move(&d, &Move::R1Add { gap, order, index: ChordIndex::Trivial })
            .expect("kink insertion is always valid");
        let inserted = grown.endpoint(gap).chord;
        let back = apply_move(&grown, &Move::R1Remove { chord: inserted })
            .expect("the inserted kink is removable");
        prop_assert_eq!(back, d);
    }

    /// A parallel-pair insertion is undone by removing the two inserted
    /// chords.
    #[test]
    fn r2_add_remove_round_trips(
        d in arb_diagram(),
        picks in (any::<u64>(), any::<u64>()),
        over_first in any::<bool>(),
        ix in 0usize..4,
    ) {
        let i = (picks.0 % (d.len() as u64 + 1)) as usize;
        let j = i + (picks.1 % ((d.len() - i.min(d.len())) as u64 + 1)) as usize;
        let index = ChordIndex::ALL[ix];
        let grown = apply_move(&d, &Move::R2Add {
            gaps: (i, j),
            over_first,
            indices: (index, index),
        })
        .expect("pair insertion inside bounds is valid");
        let pair = (grown.endpoint(i).chord, grown.endpoint(i + 1).chord);
        let back = apply_move(&grown, &Move::R2Remove { chords: pair })
            .expect("the inserted pair is removable");
        prop_assert_eq!(back, d);
    }

    /// Rotating a closed diagram once per endpoint returns to the start.
    #[test]
    fn full_rotation_cycle_is_identity(seed in any::<u64>(), n in 1usize..=8) {
        let d = random_diagram(seed, n, Kind::Closed, false);
        prop_assume!(!d.is_empty());
        let mut current = d.clone();
        for _ in 0..d.len() {
            current = rotate_basepoint(&current).expect("closed nonempty").0;
        }
        prop_assert_eq!(current, d);
    }

    /// Move syntax round-trips for every move shape.
    #[test]
    fn move_text_round_trips(m in arb_move()) {
        let text = m.to_string();
        let back: Move = text.parse().expect("rendered moves parse");
        prop_assert_eq!(back, m);
    }

    /// Winding derivation ignores even shifts: adding any multiple of 2 to
    /// any winding component leaves every derived index unchanged.
    #[test]
    fn winding_derivation_is_mod_two(
        seed in any::<u64>(),
        n in 0usize..=6,
        closed in any::<bool>(),
        shift_slot in any::<u64>(),
        shift in (-3i64..=3, -3i64..=3),
    ) {
        let kind = if closed { Kind::Closed } else { Kind::Long };
        let d = random_diagram(seed, n, kind, false);
        let winding_count = d.len() + usize::from(kind == Kind::Long);
        let windings: Vec<(i64, i64)> = (0..winding_count)
            .map(|k| {
                let h = seed.wrapping_mul(k as u64 * 2 + 1);
                ((h % 5) as i64 - 2, ((h >> 8) % 5) as i64 - 2)
            })
            .collect();

        let base = parse_windings(&winding_text(&d, &windings));
        let derived = derive_indices(&base).expect("derivation succeeds");
        prop_assert_eq!(derived.endpoints(), d.endpoints());

        if winding_count > 0 {
            let slot = (shift_slot % winding_count as u64) as usize;
            let mut shifted = windings;
            shifted[slot].0 += 2 * shift.0;
            shifted[slot].1 += 2 * shift.1;
            let again = derive_indices(&parse_windings(&winding_text(&d, &shifted)))
                .expect("derivation succeeds");
            prop_assert_eq!(again, derived);
        }
    }
}

fn winding_text(d: &GaussDiagram, windings: &[(i64, i64)]) -> String {
    let mut parts = vec![d.kind().to_string()];
    let mut next = 0usize;
    if d.kind() == Kind::Long {
        parts.push(format!("[{},{}]", windings[0].0, windings[0].1));
        next = 1;
    }
    for e in d.endpoints() {
        parts.push(format!("{}{}", e.role.letter(), e.chord.0));
        parts.push(format!("[{},{}]", windings[next].0, windings[next].1));
        next += 1;
    }
    parts.join(" ")
}

fn parse_windings(text: &str) -> WindingDecoratedDiagram {
    WindingDecoratedDiagram::parse(text).expect("constructed winding text parses")
}

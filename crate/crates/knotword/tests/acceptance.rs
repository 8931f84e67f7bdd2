//! Acceptance suite: one criterion per test, each printing a single
//! `A<n> pass`/`A<n> fail` line (visible with `cargo test --test acceptance
//! -- --show-output`). Criteria with a stated time bound assert it.

use std::collections::{BTreeMap, HashMap};
use std::panic;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use knotword::coxeter::{
    closure, defining_relations, enumerate_group, evaluate_word, letter_value, Dih4, GroupElement,
    Letter,
};
use knotword::fuzz::{
    mixed_closed_trial, rotation_expectation, rotation_trial, run_trials, sequence_trial,
    single_move_trial, twin_trial,
};
use knotword::gauss::{ChordId, Endpoint, GaussDiagram, Kind, Role};
use knotword::indexing::ChordIndex;
use knotword::invariant::{assign_letters, w, w_after, CountMode};
use knotword::moves::{
    apply_move, check_move, rotate_basepoint, Move, MoveViolation, RotationEffect,
};

/// Runs one criterion, prints its pass/fail line, and enforces the time
/// bound when one is given.
fn criterion<F>(label: &str, bound: Option<Duration>, run: F)
where
    F: FnOnce() -> String + panic::UnwindSafe,
{
    let start = Instant::now();
    let result = panic::catch_unwind(run);
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            let within = bound.is_none_or(|b| elapsed <= b.as_secs_f64());
            if within {
                println!("{label} pass ({elapsed:.2}s): {detail}");
            } else {
                let limit = bound.expect("bound present when exceeded").as_secs_f64();
                println!("{label} fail ({elapsed:.2}s): exceeded the {limit:.0}s time bound");
                panic!("{label} exceeded its time bound: {elapsed:.2}s > {limit:.0}s");
            }
        }
        Err(cause) => {
            println!("{label} fail ({elapsed:.2}s)");
            panic::resume_unwind(cause);
        }
    }
}

fn parse(text: &str) -> GaussDiagram {
    GaussDiagram::parse(text).unwrap()
}

#[test]
fn a1_group_structure() {
    criterion("A1", Some(Duration::from_secs(1)), || {
        let a = letter_value(Letter::SMALL_A);
        let b = letter_value(Letter::SMALL_B);
        let ca = letter_value(Letter::CAP_A);
        let cb = letter_value(Letter::CAP_B);
        let e = GroupElement::IDENTITY;

        assert_eq!(closure(&[a, b]).len(), 8);
        assert_eq!(closure(&[a, b, ca, cb]).len(), 64);
        assert_eq!(enumerate_group().len(), 64);

        assert_eq!(a * a, e);
        assert_eq!(b * b, e);
        let ab = a * b;
        assert_eq!(ab * ab * ab * ab, e);
        assert_ne!(ab * ab, e);
        assert_eq!(ca * ca, e);
        assert_eq!(cb * cb, e);
        let cab = ca * cb;
        assert_eq!(cab * cab * cab * cab, e);

        let a_prime = letter_value(Letter::SMALL_A.primed());
        assert_eq!(a_prime, b * a * b);
        assert_ne!(a_prime, a);

        "closures of sizes 8 and 64; order-2 generators, order-4 products, a' = bab ≠ a".to_string()
    });
}

#[test]
fn a2_relation_suite() {
    criterion("A2", Some(Duration::from_secs(1)), || {
        let relations = defining_relations();
        assert!(relations.len() >= 40, "only {} relations", relations.len());
        for (lhs, rhs) in &relations {
            assert_eq!(
                evaluate_word(lhs),
                evaluate_word(rhs),
                "relation failed: {lhs:?} = {rhs:?}"
            );
        }
        format!(
            "{} relations hold: cancellations, commutators, prime-exchange chains",
            relations.len()
        )
    });
}

#[test]
fn a3_move_invariance_fuzz() {
    criterion("A3", Some(Duration::from_secs(30)), || {
        let singles = run_trials(10_000, |i| single_move_trial(i, 0xA3, 12, Kind::Long));
        assert!(singles.is_empty(), "single-move failures: {singles:?}");
        let sequences = run_trials(1_000, |i| {
            sequence_trial(i, 0xA3 + 1, 12, 20, Kind::Long, false)
        });
        assert!(sequences.is_empty(), "sequence failures: {sequences:?}");
        "w unchanged over 10000 single-move and 1000 length-20 sequence trials".to_string()
    });
}

#[test]
fn a4_twin_property() {
    criterion("A4", None, || {
        let long_trials = run_trials(1_000, |i| twin_trial(i, 0xA40, 12, Kind::Long));
        assert!(long_trials.is_empty(), "{long_trials:?}");
        let closed_trials = run_trials(1_000, |i| twin_trial(i, 0xA41, 12, Kind::Closed));
        assert!(closed_trials.is_empty(), "{closed_trials:?}");

        // With an odd number of index-c chords the two counting sides split
        // the primes differently: before-counting primes the small letter,
        // after-counting primes the capital.
        let witness = parse("long U1:a U2:c O1:a O2:c");
        let before = w(&witness);
        let after = w_after(&witness);
        assert_eq!(
            before,
            evaluate_word(&[Letter::SMALL_A.primed(), Letter::CAP_A])
        );
        assert_eq!(
            after,
            evaluate_word(&[Letter::SMALL_A, Letter::CAP_A.primed()])
        );
        assert_ne!(before, after);
        "2000 c-even diagrams give w = w_after; c-odd witness separates the twins".to_string()
    });
}

#[test]
fn a5_rotation_laws() {
    criterion("A5", Some(Duration::from_secs(10)), || {
        let failures = run_trials(1_000, |i| rotation_trial(i, 0xA5, 10));
        assert!(failures.is_empty(), "{failures:?}");

        // Spot-check the conjugation case on the smallest letter diagram.
        let d = parse("closed U1:a O1:a");
        let (rotated, effect) = rotate_basepoint(&d).unwrap();
        assert_eq!(effect, RotationEffect::ConjugateBy(Letter::SMALL_A));
        assert_eq!(w(&rotated), rotation_expectation(w(&d), effect));
        "1000 closed-diagram rotations follow the unchanged/phi/psi/conjugation laws exactly"
            .to_string()
    });
}

#[test]
fn a6_orbit_class_invariance() {
    criterion("A6", Some(Duration::from_secs(30)), || {
        let failures = run_trials(1_000, |i| mixed_closed_trial(i, 0xA6, 10, 20));
        assert!(failures.is_empty(), "{failures:?}");
        "orbit class constant over 1000 mixed move/rotation walks of length 20".to_string()
    });
}

#[test]
fn a7_delta_sensitivity() {
    criterion("A7", None, || {
        let d = parse("long U1:a O2:b U3:c O1:a U2:b O3:c");
        let pairs = [0, 2, 4];
        assert_eq!(
            check_move(&d, &Move::R3 { pairs }),
            Err(MoveViolation::R3RolePattern)
        );
        assert!(check_move(&d, &Move::Delta { pairs }).is_ok());

        let before = w(&d);
        let after = w(&apply_move(&d, &Move::Delta { pairs }).unwrap());
        assert_eq!(before.to_string(), "(r^3 s^0 | R^3 S^0)");
        assert_eq!(after.to_string(), "(r^1 s^0 | R^1 S^0)");
        assert_ne!(before, after);
        "all-mixed triple rejected as R3, applied as Delta, w moves (r^3|R^3) → (r^1|R^1)"
            .to_string()
    });
}

#[test]
fn a8_nontriviality_certificate() {
    criterion("A8", None, || {
        let d = parse("long U1:a U2:b O1:a O2:b");
        let expected = evaluate_word(&[
            Letter::SMALL_A,
            Letter::SMALL_B,
            Letter::CAP_A,
            Letter::CAP_B,
        ]);
        assert_eq!(w(&d), expected);
        assert_ne!(w(&d), GroupElement::IDENTITY);

        let status = Command::new(env!("CARGO_BIN_EXE_knotword"))
            .args(["equal", "long U1:a U2:b O1:a O2:b", "long"])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .status()
            .expect("run the equal subcommand");
        assert_eq!(status.code(), Some(1));
        "w = value(abAB) ≠ identity; `equal` against the empty diagram exits 1".to_string()
    });
}

// ---------------------------------------------------------------------------
// A9: an independent word evaluator. Each factor of the value group is
// modelled as a permutation of the 4 corners of a square (rotations shift,
// reflections reverse), so composition is function composition with no
// shared arithmetic. A fresh 64×64 Cayley table is enumerated in that model
// and words are evaluated by table lookups only.
// ---------------------------------------------------------------------------

type Perm = [u8; 4];
type PermPair = (Perm, Perm);

const PERM_ID: Perm = [0, 1, 2, 3];
/// i → -i (mod 4): the reflection written `s`.
const PERM_S: Perm = [0, 3, 2, 1];
/// i → 3 - i (mod 4): the reflection written `r³s`.
const PERM_R3S: Perm = [3, 2, 1, 0];

fn compose(f: Perm, g: Perm) -> Perm {
    let mut out = [0u8; 4];
    for i in 0..4 {
        out[i] = f[g[i] as usize];
    }
    out
}

fn compose_pair(f: PermPair, g: PermPair) -> PermPair {
    (compose(f.0, g.0), compose(f.1, g.1))
}

/// The eight letters as permutation pairs, built from first principles:
/// small letters act on the lower square, capitals on the upper, and a prime
/// conjugates by the partner letter.
fn letter_perms() -> [(Letter, PermPair); 8] {
    let a = (PERM_S, PERM_ID);
    let b = (PERM_R3S, PERM_ID);
    let ca = (PERM_ID, PERM_S);
    let cb = (PERM_ID, PERM_R3S);
    let primed = |x: PermPair, partner: PermPair| compose_pair(compose_pair(partner, x), partner);
    [
        (Letter::SMALL_A, a),
        (Letter::SMALL_B, b),
        (Letter::CAP_A, ca),
        (Letter::CAP_B, cb),
        (Letter::SMALL_A.primed(), primed(a, b)),
        (Letter::SMALL_B.primed(), primed(b, a)),
        (Letter::CAP_A.primed(), primed(ca, cb)),
        (Letter::CAP_B.primed(), primed(cb, ca)),
    ]
}

/// The permutation realizing one dihedral element: rotate by `rot` after
/// optionally reversing.
fn perm_of_dih(d: Dih4) -> Perm {
    let mut p = [0u8; 4];
    for (i, slot) in p.iter_mut().enumerate() {
        let v = if d.refl { (4 - i) % 4 } else { i };
        *slot = ((v + d.rot as usize) % 4) as u8;
    }
    p
}

fn pair_of_element(g: GroupElement) -> PermPair {
    (perm_of_dih(g.lower), perm_of_dih(g.upper))
}

#[test]
fn a9_independent_evaluator_cross_check() {
    criterion("A9", Some(Duration::from_secs(60)), || {
        // The permutation model must itself be a faithful copy of the
        // group's multiplication.
        for &x in &Dih4::ALL {
            for &y in &Dih4::ALL {
                assert_eq!(
                    perm_of_dih(x * y),
                    compose(perm_of_dih(x), perm_of_dih(y)),
                    "permutation model disagrees at {x:?} * {y:?}"
                );
            }
        }

        // Freshly enumerate the 64 elements in the permutation model and
        // tabulate their products.
        let letters = letter_perms();
        let mut elements: Vec<PermPair> = vec![(PERM_ID, PERM_ID)];
        let mut index: HashMap<PermPair, usize> = HashMap::new();
        index.insert(elements[0], 0);
        let mut frontier = elements.clone();
        while let Some(g) = frontier.pop() {
            for &(_, l) in &letters[..4] {
                let next = compose_pair(g, l);
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(next) {
                    slot.insert(elements.len());
                    elements.push(next);
                    frontier.push(next);
                }
            }
        }
        assert_eq!(elements.len(), 64);
        let table: Vec<Vec<usize>> = elements
            .iter()
            .map(|&g| {
                elements
                    .iter()
                    .map(|&h| index[&compose_pair(g, h)])
                    .collect()
            })
            .collect();
        let letter_index: HashMap<Letter, usize> =
            letters.iter().map(|&(l, p)| (l, index[&p])).collect();
        // Both enumerations cover the same 64 elements.
        for &g in enumerate_group() {
            assert!(index.contains_key(&pair_of_element(g)));
        }

        let identity_index = index[&(PERM_ID, PERM_ID)];
        let naive_eval = |word: &[Letter]| -> usize {
            word.iter()
                .fold(identity_index, |acc, l| table[acc][letter_index[l]])
        };

        // Every diagram with up to 4 chords: all pairings of the endpoint
        // positions, all role orders, all index assignments.
        let mut checked = 0usize;
        for n in 0..=4usize {
            for matching in matchings(2 * n) {
                for role_mask in 0..(1u32 << n) {
                    let mut endpoints = vec![
                        Endpoint {
                            chord: ChordId(1),
                            role: Role::Over,
                        };
                        2 * n
                    ];
                    for (k, &(p, q)) in matching.iter().enumerate() {
                        let (first, second) = if role_mask >> k & 1 == 0 {
                            (Role::Under, Role::Over)
                        } else {
                            (Role::Over, Role::Under)
                        };
                        let chord = ChordId(k as u32 + 1);
                        endpoints[p] = Endpoint { chord, role: first };
                        endpoints[q] = Endpoint {
                            chord,
                            role: second,
                        };
                    }
                    for assignment in 0..4u32.pow(n as u32) {
                        let mut code = assignment;
                        let indices: BTreeMap<ChordId, ChordIndex> = (0..n)
                            .map(|k| {
                                let ix = ChordIndex::ALL[(code % 4) as usize];
                                code /= 4;
                                (ChordId(k as u32 + 1), ix)
                            })
                            .collect();
                        let d = GaussDiagram::new(Kind::Long, endpoints.clone(), indices, None)
                            .expect("enumerated diagram is valid");
                        let word = assign_letters(&d, CountMode::Before);
                        let via_group = evaluate_word(&word.letters);
                        let via_table = naive_eval(&word.letters);
                        assert_eq!(
                            pair_of_element(via_group),
                            elements[via_table],
                            "evaluators disagree on {d}"
                        );
                        checked += 1;
                    }
                }
            }
        }
        assert_eq!(checked, 437_961);
        format!("{checked} diagrams: table-driven evaluator matches evaluate_word")
    });
}

/// All partitions of `0..positions` into pairs, each pair ordered and the
/// list ordered by first element.
fn matchings(positions: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = free[0];
        for i in 1..free.len() {
            let second = free[i];
            let rest: Vec<usize> = free[1..].iter().copied().filter(|&p| p != second).collect();
            acc.push((first, second));
            go(&rest, acc, out);
            acc.pop();
        }
    }
    let positions: Vec<usize> = (0..positions).collect();
    let mut out = Vec::new();
    go(&positions, &mut Vec::new(), &mut out);
    out
}

//! The finite group receiving the word invariant, its letter alphabet, and
//! orbit classes.
//!
//! The target group `D` is a direct product of two dihedral factors of order
//! 8 (symmetries of a square), so `|D| = 64`. The lower factor is generated
//! by the values of the small letters `a`, `b`, the upper factor by the
//! capital letters `A`, `B`. Each factor element is stored in the normal
//! form `r^rot * s^refl` with `rot` mod 4, and multiplication follows from
//! `s r = r^-1 s`.
//!
//! The concrete embedding fixes `a = s`, `b = r^3 s` (so `ab = r`), and the
//! primed letters are the conjugates `a' = bab`, `b' = aba` (likewise for
//! capitals in the upper factor). All letters are involutions. The letter
//! relations the invariant relies on — cancellation, commutation between the
//! factors, and the four braid chains like `ab = b'a = ba' = a'b'` — hold in
//! this embedding and are checked exhaustively in the tests.
//!
//! `phi` is the automorphism swapping primed and unprimed small letters
//! while fixing capitals; `psi` does the same for capitals; `chi` is their
//! composition. Orbit classes close a value under conjugation and under
//! these automorphisms; they are what closed diagrams can carry, since
//! moving the basepoint changes the raw value by exactly such maps.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// One dihedral factor of order 8: `r^rot * s^refl`, `rot` taken mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dih4 {
    pub rot: u8,
    pub refl: bool,
}

impl Dih4 {
    pub const IDENTITY: Dih4 = Dih4 {
        rot: 0,
        refl: false,
    };

    pub fn new(rot: i64, refl: bool) -> Dih4 {
        Dih4 {
            rot: rot.rem_euclid(4) as u8,
            refl,
        }
    }

    pub fn inverse(self) -> Dih4 {
        if self.refl {
            self
        } else {
            Dih4::new(-(self.rot as i64), false)
        }
    }

    pub fn pow(self, n: u32) -> Dih4 {
        let mut acc = Dih4::IDENTITY;
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    pub const ALL: [Dih4; 8] = [
        Dih4 {
            rot: 0,
            refl: false,
        },
        Dih4 {
            rot: 1,
            refl: false,
        },
        Dih4 {
            rot: 2,
            refl: false,
        },
        Dih4 {
            rot: 3,
            refl: false,
        },
        Dih4 { rot: 0, refl: true },
        Dih4 { rot: 1, refl: true },
        Dih4 { rot: 2, refl: true },
        Dih4 { rot: 3, refl: true },
    ];
}

impl std::ops::Mul for Dih4 {
    type Output = Dih4;

    fn mul(self, rhs: Dih4) -> Dih4 {
        // s r = r^-1 s: a reflection on the left negates the rotation.
        let k = if self.refl {
            self.rot as i64 - rhs.rot as i64
        } else {
            self.rot as i64 + rhs.rot as i64
        };
        Dih4::new(k, self.refl ^ rhs.refl)
    }
}

/// An element of the full group: one component per dihedral factor.
///
/// Ordered lexicographically by `(lower.rot, lower.refl, upper.rot,
/// upper.refl)`; orbit canonical forms are minima in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub lower: Dih4,
    pub upper: Dih4,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        lower: Dih4::IDENTITY,
        upper: Dih4::IDENTITY,
    };

    pub fn inverse(self) -> GroupElement {
        GroupElement {
            lower: self.lower.inverse(),
            upper: self.upper.inverse(),
        }
    }

    pub fn conjugate_by(self, h: GroupElement) -> GroupElement {
        h * self * h.inverse()
    }
}

impl std::ops::Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        GroupElement {
            lower: self.lower * rhs.lower,
            upper: self.upper * rhs.upper,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r^{} s^{} | R^{} S^{})",
            self.lower.rot, self.lower.refl as u8, self.upper.rot, self.upper.refl as u8
        )
    }
}

/// The four unprimed letter names. Small letters live in the lower factor,
/// capitals in the upper.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterBase {
    SmallA,
    SmallB,
    CapitalA,
    CapitalB,
}

impl LetterBase {
    /// The other base of the same case; conjugating by it produces the
    /// primed letter.
    pub fn partner(self) -> LetterBase {
        match self {
            LetterBase::SmallA => LetterBase::SmallB,
            LetterBase::SmallB => LetterBase::SmallA,
            LetterBase::CapitalA => LetterBase::CapitalB,
            LetterBase::CapitalB => LetterBase::CapitalA,
        }
    }

    pub fn is_capital(self) -> bool {
        matches!(self, LetterBase::CapitalA | LetterBase::CapitalB)
    }
}

/// A letter of the invariant's alphabet: a base name plus an optional prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub base: LetterBase,
    pub prime: bool,
}

impl Letter {
    pub const SMALL_A: Letter = Letter {
        base: LetterBase::SmallA,
        prime: false,
    };
    pub const SMALL_B: Letter = Letter {
        base: LetterBase::SmallB,
        prime: false,
    };
    pub const CAP_A: Letter = Letter {
        base: LetterBase::CapitalA,
        prime: false,
    };
    pub const CAP_B: Letter = Letter {
        base: LetterBase::CapitalB,
        prime: false,
    };

    pub const ALL: [Letter; 8] = [
        Letter::SMALL_A,
        Letter::SMALL_A.primed(),
        Letter::SMALL_B,
        Letter::SMALL_B.primed(),
        Letter::CAP_A,
        Letter::CAP_A.primed(),
        Letter::CAP_B,
        Letter::CAP_B.primed(),
    ];

    pub const fn primed(self) -> Letter {
        Letter {
            base: self.base,
            prime: true,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.base {
            LetterBase::SmallA => "a",
            LetterBase::SmallB => "b",
            LetterBase::CapitalA => "A",
            LetterBase::CapitalB => "B",
        };
        f.write_str(name)?;
        if self.prime {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// Value of a letter under the fixed embedding. Unprimed values are the
/// generators; a primed letter is its base conjugated by the unprimed
/// partner, e.g. `a' = b a b`.
pub fn letter_value(letter: Letter) -> GroupElement {
    let s = Dih4 { rot: 0, refl: true };
    let r3s = Dih4 { rot: 3, refl: true };
    let base = match letter.base {
        LetterBase::SmallA => GroupElement {
            lower: s,
            upper: Dih4::IDENTITY,
        },
        LetterBase::SmallB => GroupElement {
            lower: r3s,
            upper: Dih4::IDENTITY,
        },
        LetterBase::CapitalA => GroupElement {
            lower: Dih4::IDENTITY,
            upper: s,
        },
        LetterBase::CapitalB => GroupElement {
            lower: Dih4::IDENTITY,
            upper: r3s,
        },
    };
    if letter.prime {
        let partner = letter_value(Letter {
            base: letter.base.partner(),
            prime: false,
        });
        partner * base * partner
    } else {
        base
    }
}

/// Left-to-right product of letter values; the empty word is the identity.
pub fn evaluate_word(word: &[Letter]) -> GroupElement {
    word.iter()
        .fold(GroupElement::IDENTITY, |acc, &l| acc * letter_value(l))
}

/// Applies to one factor the automorphism determined by images of that
/// factor's two generators `x`, `y` (with `xy = r` in the source): an
/// element `r^k s^f = (xy)^k x^f` maps to `(img_x img_y)^k img_x^f`.
fn generated_automorphism(g: Dih4, img_x: Dih4, img_y: Dih4) -> Dih4 {
    let rot_image = (img_x * img_y).pow(g.rot as u32);
    if g.refl {
        rot_image * img_x
    } else {
        rot_image
    }
}

/// Automorphism swapping primed and unprimed small letters (`a <-> a'`,
/// `b <-> b'`) and fixing the capitals.
pub fn phi(g: GroupElement) -> GroupElement {
    GroupElement {
        lower: generated_automorphism(
            g.lower,
            letter_value(Letter::SMALL_A.primed()).lower,
            letter_value(Letter::SMALL_B.primed()).lower,
        ),
        upper: g.upper,
    }
}

/// Automorphism swapping primed and unprimed capital letters and fixing the
/// small ones.
pub fn psi(g: GroupElement) -> GroupElement {
    GroupElement {
        lower: g.lower,
        upper: generated_automorphism(
            g.upper,
            letter_value(Letter::CAP_A.primed()).upper,
            letter_value(Letter::CAP_B.primed()).upper,
        ),
    }
}

/// `phi` and `psi` composed; they act on different factors, so the order
/// does not matter.
pub fn chi(g: GroupElement) -> GroupElement {
    phi(psi(g))
}

/// The subgroup generated by the given elements.
pub fn closure(generators: &[GroupElement]) -> BTreeSet<GroupElement> {
    let mut members = BTreeSet::from([GroupElement::IDENTITY]);
    let mut queue = vec![GroupElement::IDENTITY];
    while let Some(x) = queue.pop() {
        for &g in generators {
            let y = x * g;
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    members
}

/// All 64 elements of the group, in canonical order.
pub fn enumerate_group() -> &'static [GroupElement] {
    static CACHE: OnceLock<Vec<GroupElement>> = OnceLock::new();
    CACHE.get_or_init(|| {
        closure(&[
            letter_value(Letter::SMALL_A),
            letter_value(Letter::SMALL_B),
            letter_value(Letter::CAP_A),
            letter_value(Letter::CAP_B),
        ])
        .into_iter()
        .collect()
    })
}

/// The closure of one group value under conjugation and under `phi`, `psi`.
///
/// Two orbit classes are equal exactly when their canonical members (the
/// least member in the derived element order) are equal.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    canonical: GroupElement,
    members: BTreeSet<GroupElement>,
}

impl OrbitClass {
    pub fn canonical(&self) -> GroupElement {
        self.canonical
    }

    pub fn members(&self) -> &BTreeSet<GroupElement> {
        &self.members
    }

    pub fn contains(&self, g: GroupElement) -> bool {
        self.members.contains(&g)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl PartialEq for OrbitClass {
    fn eq(&self, other: &OrbitClass) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for OrbitClass {}

impl std::hash::Hash for OrbitClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

/// Computes the orbit class of `x` by breadth-first closure. Conjugation by
/// the four letter generators suffices for conjugation by the whole group,
/// since the letters generate it.
pub fn orbit(x: GroupElement) -> OrbitClass {
    let conjugators = [
        letter_value(Letter::SMALL_A),
        letter_value(Letter::SMALL_B),
        letter_value(Letter::CAP_A),
        letter_value(Letter::CAP_B),
    ];
    let mut members = BTreeSet::from([x]);
    let mut queue = vec![x];
    while let Some(g) = queue.pop() {
        let mut neighbors: Vec<GroupElement> =
            conjugators.iter().map(|&h| g.conjugate_by(h)).collect();
        neighbors.push(phi(g));
        neighbors.push(psi(g));
        for y in neighbors {
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    let canonical = *members.first().expect("orbit contains its seed");
    OrbitClass { canonical, members }
}

/// Every defining relation of the letter alphabet, as pairs of words with
/// equal value: cancellations `xx = 1`, the commutations between primes and
/// between the two cases, and the four braid chains.
pub fn defining_relations() -> Vec<(Vec<Letter>, Vec<Letter>)> {
    let a = Letter::SMALL_A;
    let b = Letter::SMALL_B;
    let ca = Letter::CAP_A;
    let cb = Letter::CAP_B;
    let (ap, bp, cap, cbp) = (a.primed(), b.primed(), ca.primed(), cb.primed());

    let mut relations: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
    for l in Letter::ALL {
        relations.push((vec![l, l], vec![]));
    }
    let commuting_pairs = [
        // Same index, small against capital.
        (a, ca),
        (a, cap),
        (ap, ca),
        (ap, cap),
        (b, cb),
        (b, cbp),
        (bp, cb),
        (bp, cbp),
        // A letter against its own primed version.
        (a, ap),
        (b, bp),
        (ca, cap),
        (cb, cbp),
        // Different index, small against capital.
        (a, cb),
        (a, cbp),
        (ap, cb),
        (ap, cbp),
        (b, ca),
        (b, cap),
        (bp, ca),
        (bp, cap),
    ];
    for (x, y) in commuting_pairs {
        relations.push((vec![x, y], vec![y, x]));
    }
    // Braid chains: ab = b'a = ba' = a'b' and ba = a'b = ab' = b'a'
    // (primes on both), plus the same chains in capitals.
    for (x, y) in [(a, b), (ca, cb)] {
        let (xp, yp) = (x.primed(), y.primed());
        relations.push((vec![x, y], vec![yp, x]));
        relations.push((vec![x, y], vec![y, xp]));
        relations.push((vec![x, y], vec![xp, yp]));
        relations.push((vec![y, x], vec![xp, y]));
        relations.push((vec![y, x], vec![x, yp]));
        relations.push((vec![y, x], vec![yp, xp]));
    }
    relations
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_factor_is_a_group_of_order_eight() {
        for x in Dih4::ALL {
            assert_eq!(x * Dih4::IDENTITY, x);
            assert_eq!(Dih4::IDENTITY * x, x);
            assert_eq!(x * x.inverse(), Dih4::IDENTITY);
            assert_eq!(x.inverse() * x, Dih4::IDENTITY);
            for y in Dih4::ALL {
                for z in Dih4::ALL {
                    assert_eq!((x * y) * z, x * (y * z));
                }
            }
        }
        let r = Dih4 {
            rot: 1,
            refl: false,
        };
        let s = Dih4 { rot: 0, refl: true };
        assert_eq!(r.pow(4), Dih4::IDENTITY);
        assert_ne!(r.pow(2), Dih4::IDENTITY);
        assert_eq!(s * s, Dih4::IDENTITY);
        // s r = r^3 s
        assert_eq!(s * r, Dih4 { rot: 3, refl: true });
    }

    #[test]
    fn letter_values_match_the_fixed_embedding() {
        let val = |l: Letter| letter_value(l);
        let lower = |rot, refl| GroupElement {
            lower: Dih4::new(rot, refl),
            upper: Dih4::IDENTITY,
        };
        let upper = |rot, refl| GroupElement {
            lower: Dih4::IDENTITY,
            upper: Dih4::new(rot, refl),
        };
        assert_eq!(val(Letter::SMALL_A), lower(0, true));
        assert_eq!(val(Letter::SMALL_B), lower(3, true));
        assert_eq!(val(Letter::SMALL_A.primed()), lower(2, true));
        assert_eq!(val(Letter::SMALL_B.primed()), lower(1, true));
        assert_eq!(val(Letter::CAP_A), upper(0, true));
        assert_eq!(val(Letter::CAP_B), upper(3, true));
        assert_eq!(val(Letter::CAP_A.primed()), upper(2, true));
        assert_eq!(val(Letter::CAP_B.primed()), upper(1, true));

        // ab = r, and the primed letters really are the stated conjugates.
        assert_eq!(val(Letter::SMALL_A) * val(Letter::SMALL_B), lower(1, false));
        assert_eq!(
            val(Letter::SMALL_A.primed()),
            val(Letter::SMALL_B) * val(Letter::SMALL_A) * val(Letter::SMALL_B)
        );
        assert_ne!(val(Letter::SMALL_A.primed()), val(Letter::SMALL_A));
    }

    #[test]
    fn all_defining_relations_hold() {
        for (lhs, rhs) in defining_relations() {
            assert_eq!(
                evaluate_word(&lhs),
                evaluate_word(&rhs),
                "relation {} = {} fails",
                lhs.iter().map(|l| l.to_string()).collect::<String>(),
                rhs.iter().map(|l| l.to_string()).collect::<String>(),
            );
        }
    }

    #[test]
    fn evaluate_word_is_ordered_and_unital() {
        let (a, b) = (Letter::SMALL_A, Letter::SMALL_B);
        let (ca, cb) = (Letter::CAP_A, Letter::CAP_B);
        assert_eq!(evaluate_word(&[]), GroupElement::IDENTITY);
        assert_ne!(evaluate_word(&[a, b]), evaluate_word(&[b, a]));
        // Small and capital letters commute past each other.
        assert_eq!(
            evaluate_word(&[a, cb, ca, b]),
            evaluate_word(&[a, b, cb, ca])
        );
        assert_ne!(evaluate_word(&[a, b, ca, cb]), GroupElement::IDENTITY);
    }

    #[test]
    fn group_element_display_is_the_documented_form() {
        let aa = evaluate_word(&[Letter::SMALL_A, Letter::CAP_A]);
        assert_eq!(aa.to_string(), "(r^0 s^1 | R^0 S^1)");
        assert_eq!(GroupElement::IDENTITY.to_string(), "(r^0 s^0 | R^0 S^0)");
    }

    #[test]
    fn closure_sizes_are_eight_and_sixty_four() {
        let a = letter_value(Letter::SMALL_A);
        let b = letter_value(Letter::SMALL_B);
        assert_eq!(closure(&[a, b]).len(), 8);
        assert_eq!(enumerate_group().len(), 64);
    }

    #[test]
    fn automorphisms_swap_primes_and_preserve_the_product() {
        let val = |l: Letter| letter_value(l);
        assert_eq!(phi(val(Letter::SMALL_A)), val(Letter::SMALL_A.primed()));
        assert_eq!(phi(val(Letter::SMALL_A.primed())), val(Letter::SMALL_A));
        assert_eq!(phi(val(Letter::SMALL_B)), val(Letter::SMALL_B.primed()));
        assert_eq!(phi(val(Letter::CAP_A)), val(Letter::CAP_A));
        assert_eq!(psi(val(Letter::CAP_B)), val(Letter::CAP_B.primed()));
        assert_eq!(psi(val(Letter::SMALL_A)), val(Letter::SMALL_A));

        let all = enumerate_group();
        for &g in all {
            assert_eq!(phi(phi(g)), g);
            assert_eq!(psi(psi(g)), g);
            assert_eq!(chi(g), psi(phi(g)));
            for &h in all {
                assert_eq!(phi(g * h), phi(g) * phi(h));
                assert_eq!(psi(g * h), psi(g) * psi(h));
            }
        }
        // Bijectivity on the 64 elements.
        let image: BTreeSet<GroupElement> = all.iter().map(|&g| phi(g)).collect();
        assert_eq!(image.len(), 64);
    }

    #[test]
    fn orbit_of_identity_is_a_singleton() {
        let o = orbit(GroupElement::IDENTITY);
        assert_eq!(o.len(), 1);
        assert_eq!(o.canonical(), GroupElement::IDENTITY);
    }

    #[test]
    fn orbits_partition_and_match_brute_force() {
        let all = enumerate_group();
        for &x in all {
            let fast = orbit(x);
            // Brute force: conjugate by all 64 elements under all four
            // automorphism combinations, iterated to a fixed point.
            let mut brute = BTreeSet::from([x]);
            loop {
                let mut next = brute.clone();
                for &g in &brute {
                    for &h in all {
                        next.insert(g.conjugate_by(h));
                    }
                    next.insert(phi(g));
                    next.insert(psi(g));
                    next.insert(chi(g));
                }
                if next == brute {
                    break;
                }
                brute = next;
            }
            assert_eq!(fast.members(), &brute, "orbit of {x}");
            assert!(fast.len() <= 64);
            // Every member generates the same class.
            for &y in fast.members() {
                assert_eq!(orbit(y), fast);
            }
        }
    }
}

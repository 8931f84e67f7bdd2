//! Gauss diagrams of long and closed knot diagrams, and their text codec.
//!
//! A diagram is an ordered sequence of chord endpoints; each chord appears
//! exactly twice, once with role `Over` and once with role `Under`, and
//! carries a [`ChordIndex`]. Closed diagrams read the sequence cyclically
//! from a basepoint sitting before the first endpoint; long diagrams read it
//! along a line. Optional crossing signs are carried as metadata only —
//! nothing in the invariant pipeline reads them, though the move engine
//! checks them when present.
//!
//! The text form is `kind token*` where `kind` is `long` or `closed` and a
//! token is role letter, chord id, optional sign, colon, index, e.g.
//! `long U1:a U2+:c O1:a O2+:c`. Parsing normalizes chord ids to `1..n` in
//! first-occurrence order, so structural equality of parsed diagrams is
//! canonical and [`GaussDiagram::to_text`] inverts [`GaussDiagram::parse`]
//! exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::indexing::ChordIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Long,
    Closed,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Long => "long",
            Kind::Closed => "closed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn opposite(self) -> Role {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }

    /// The single-character form used in diagram text: `O` or `U`.
    pub fn letter(self) -> char {
        match self {
            Role::Over => 'O',
            Role::Under => 'U',
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Over => "over",
            Role::Under => "under",
        })
    }
}

/// Identifier of a chord within one diagram. Normalized diagrams use
/// `1..=n` in order of first occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChordId(pub u32);

impl fmt::Display for ChordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn letter(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub chord: ChordId,
    pub role: Role,
}

/// A structural defect found by [`GaussDiagram::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("chord {chord} occurs {count} times, expected exactly 2")]
    OccurrenceCount { chord: ChordId, count: usize },
    #[error("chord {chord} has two {role} endpoints")]
    DuplicateRole { chord: ChordId, role: Role },
    #[error("chord {chord} has no index")]
    MissingIndex { chord: ChordId },
    #[error("index table mentions unknown chord {chord}")]
    DanglingIndex { chord: ChordId },
    #[error("signs are present but chord {chord} has none")]
    MissingSign { chord: ChordId },
    #[error("sign table mentions unknown chord {chord}")]
    DanglingSign { chord: ChordId },
}

/// Rejection of [`GaussDiagram::new`]: the collected violations.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct InvalidDiagram(pub Vec<Violation>);

impl fmt::Display for InvalidDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("token {token_index} (`{token}`): {kind}")]
pub struct ParseError {
    /// Whitespace-token position in the input, 0-based; the kind keyword is
    /// token 0.
    pub token_index: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input, expected `long` or `closed`")]
    Empty,
    #[error("expected `long` or `closed`")]
    BadKind,
    #[error("{0}")]
    BadToken(String),
    #[error("chord appears twice with role {0}")]
    DuplicateRole(Role),
    #[error("chord appears more than twice")]
    TooManyOccurrences,
    #[error("chord has only one endpoint")]
    MissingPartner,
    #[error("the two endpoints of a chord must carry the same index")]
    IndexMismatch,
    #[error("the two endpoints of a chord must carry the same sign")]
    SignMismatch,
    #[error("either every chord carries a sign or none does")]
    MixedSigns,
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

/// An immutable, validated, id-normalized Gauss diagram.
///
/// All constructors except [`GaussDiagram::from_raw_parts`] guarantee a valid
/// diagram; operations elsewhere in the crate rely on that and never
/// re-validate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussDiagram {
    kind: Kind,
    endpoints: Vec<Endpoint>,
    indices: BTreeMap<ChordId, ChordIndex>,
    signs: Option<BTreeMap<ChordId, Sign>>,
}

impl GaussDiagram {
    /// Validates and normalizes. Returns every violation on failure.
    pub fn new(
        kind: Kind,
        endpoints: Vec<Endpoint>,
        indices: BTreeMap<ChordId, ChordIndex>,
        signs: Option<BTreeMap<ChordId, Sign>>,
    ) -> Result<GaussDiagram, InvalidDiagram> {
        let d = GaussDiagram::from_raw_parts(kind, endpoints, indices, signs);
        let violations = d.validate();
        if violations.is_empty() {
            Ok(d.normalized())
        } else {
            Err(InvalidDiagram(violations))
        }
    }

    /// Builds a diagram without validation or normalization, for feeding
    /// candidates to [`GaussDiagram::validate`]. Everything else in the crate
    /// assumes diagrams came from a validating constructor.
    pub fn from_raw_parts(
        kind: Kind,
        endpoints: Vec<Endpoint>,
        indices: BTreeMap<ChordId, ChordIndex>,
        signs: Option<BTreeMap<ChordId, Sign>>,
    ) -> GaussDiagram {
        GaussDiagram {
            kind,
            endpoints,
            indices,
            signs,
        }
    }

    pub fn empty(kind: Kind) -> GaussDiagram {
        GaussDiagram {
            kind,
            endpoints: Vec::new(),
            indices: BTreeMap::new(),
            signs: None,
        }
    }

    /// Collects structural defects; an empty result means the diagram is
    /// valid. Violations are data, not errors: callers decide what to do.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let mut occurrences: BTreeMap<ChordId, Vec<Role>> = BTreeMap::new();
        for e in &self.endpoints {
            occurrences.entry(e.chord).or_default().push(e.role);
        }
        for (&chord, roles) in &occurrences {
            if roles.len() != 2 {
                violations.push(Violation::OccurrenceCount {
                    chord,
                    count: roles.len(),
                });
            } else if roles[0] == roles[1] {
                violations.push(Violation::DuplicateRole {
                    chord,
                    role: roles[0],
                });
            }
            if !self.indices.contains_key(&chord) {
                violations.push(Violation::MissingIndex { chord });
            }
        }
        for &chord in self.indices.keys() {
            if !occurrences.contains_key(&chord) {
                violations.push(Violation::DanglingIndex { chord });
            }
        }
        if let Some(signs) = &self.signs {
            for &chord in occurrences.keys() {
                if !signs.contains_key(&chord) {
                    violations.push(Violation::MissingSign { chord });
                }
            }
            for &chord in signs.keys() {
                if !occurrences.contains_key(&chord) {
                    violations.push(Violation::DanglingSign { chord });
                }
            }
        }
        violations
    }

    /// Renumbers chord ids to `1..=n` in order of first occurrence. Index or
    /// sign entries for chords absent from the endpoint sequence are dropped.
    pub fn normalized(&self) -> GaussDiagram {
        let mut remap: BTreeMap<ChordId, ChordId> = BTreeMap::new();
        let mut next = 1u32;
        for e in &self.endpoints {
            remap.entry(e.chord).or_insert_with(|| {
                let id = ChordId(next);
                next += 1;
                id
            });
        }
        GaussDiagram {
            kind: self.kind,
            endpoints: self
                .endpoints
                .iter()
                .map(|e| Endpoint {
                    chord: remap[&e.chord],
                    role: e.role,
                })
                .collect(),
            indices: self
                .indices
                .iter()
                .filter_map(|(c, &ix)| remap.get(c).map(|&nc| (nc, ix)))
                .collect(),
            // An empty sign table carries no information and would be
            // indistinguishable from an unsigned diagram in text form, so
            // the canonical form drops it.
            signs: self
                .signs
                .as_ref()
                .map(|signs| {
                    signs
                        .iter()
                        .filter_map(|(c, &s)| remap.get(c).map(|&nc| (nc, s)))
                        .collect::<BTreeMap<ChordId, Sign>>()
                })
                .filter(|signs| !signs.is_empty()),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn endpoints(&self) -> &[Endpoint] {
        &self.endpoints
    }

    pub fn endpoint(&self, pos: usize) -> Endpoint {
        self.endpoints[pos]
    }

    /// Number of endpoints (twice the number of chords).
    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    pub fn chord_count(&self) -> usize {
        self.indices.len()
    }

    pub fn chords(&self) -> impl Iterator<Item = ChordId> + '_ {
        self.indices.keys().copied()
    }

    pub fn indices(&self) -> &BTreeMap<ChordId, ChordIndex> {
        &self.indices
    }

    pub fn signs(&self) -> Option<&BTreeMap<ChordId, Sign>> {
        self.signs.as_ref()
    }

    pub fn has_signs(&self) -> bool {
        self.signs.is_some()
    }

    pub fn index_of(&self, chord: ChordId) -> Option<ChordIndex> {
        self.indices.get(&chord).copied()
    }

    pub fn sign_of(&self, chord: ChordId) -> Option<Sign> {
        self.signs.as_ref().and_then(|m| m.get(&chord)).copied()
    }

    /// Positions of the chord's two endpoints in ascending order.
    pub fn positions_of(&self, chord: ChordId) -> Option<(usize, usize)> {
        let mut found = None;
        for (pos, e) in self.endpoints.iter().enumerate() {
            if e.chord == chord {
                match found {
                    None => found = Some((pos, pos)),
                    Some((first, _)) => return Some((first, pos)),
                }
            }
        }
        None
    }

    /// Position of the other endpoint of the chord at `pos`.
    pub fn opposite_position(&self, pos: usize) -> usize {
        let chord = self.endpoints[pos].chord;
        self.endpoints
            .iter()
            .enumerate()
            .find(|(i, e)| *i != pos && e.chord == chord)
            .map(|(i, _)| i)
            .expect("valid diagrams have two endpoints per chord")
    }

    /// Number of chords carrying the given index.
    pub fn count_index(&self, index: ChordIndex) -> usize {
        self.indices.values().filter(|&&ix| ix == index).count()
    }

    /// Parses the text form. The resulting diagram is validated and
    /// id-normalized.
    pub fn parse(text: &str) -> Result<GaussDiagram, ParseError> {
        struct Seen {
            role: Role,
            index: ChordIndex,
            sign: Option<Sign>,
            token_index: usize,
            token: String,
            count: usize,
        }

        let mut tokens = text.split_whitespace().enumerate();
        let (_, kind_tok) = tokens.next().ok_or(ParseError {
            token_index: 0,
            token: String::new(),
            kind: ParseErrorKind::Empty,
        })?;
        let kind = match kind_tok {
            "long" => Kind::Long,
            "closed" => Kind::Closed,
            other => {
                return Err(ParseError {
                    token_index: 0,
                    token: other.to_string(),
                    kind: ParseErrorKind::BadKind,
                })
            }
        };

        let mut endpoints = Vec::new();
        let mut seen: BTreeMap<ChordId, Seen> = BTreeMap::new();
        for (i, tok) in tokens {
            let at = |kind| ParseError {
                token_index: i,
                token: tok.to_string(),
                kind,
            };
            let (endpoint, sign, index) =
                parse_full_token(tok).map_err(|msg| at(ParseErrorKind::BadToken(msg)))?;
            match seen.get_mut(&endpoint.chord) {
                None => {
                    seen.insert(
                        endpoint.chord,
                        Seen {
                            role: endpoint.role,
                            index,
                            sign,
                            token_index: i,
                            token: tok.to_string(),
                            count: 1,
                        },
                    );
                }
                Some(s) => {
                    s.count += 1;
                    if s.count > 2 {
                        return Err(at(ParseErrorKind::TooManyOccurrences));
                    }
                    if s.role == endpoint.role {
                        return Err(at(ParseErrorKind::DuplicateRole(endpoint.role)));
                    }
                    if s.index != index {
                        return Err(at(ParseErrorKind::IndexMismatch));
                    }
                    if s.sign != sign {
                        return Err(at(ParseErrorKind::SignMismatch));
                    }
                }
            }
            endpoints.push(endpoint);
        }

        for s in seen.values() {
            if s.count != 2 {
                return Err(ParseError {
                    token_index: s.token_index,
                    token: s.token.clone(),
                    kind: ParseErrorKind::MissingPartner,
                });
            }
        }
        let signed = seen.values().filter(|s| s.sign.is_some()).count();
        if signed != 0 && signed != seen.len() {
            let unsigned = seen.values().find(|s| s.sign.is_none()).unwrap();
            return Err(ParseError {
                token_index: unsigned.token_index,
                token: unsigned.token.clone(),
                kind: ParseErrorKind::MixedSigns,
            });
        }

        let indices = seen.iter().map(|(&c, s)| (c, s.index)).collect();
        let signs = if signed == 0 {
            None
        } else {
            Some(seen.iter().map(|(&c, s)| (c, s.sign.unwrap())).collect())
        };
        GaussDiagram::new(kind, endpoints, indices, signs).map_err(|e| ParseError {
            token_index: 0,
            token: text.trim().to_string(),
            kind: ParseErrorKind::Invalid(e.to_string()),
        })
    }

    /// The canonical text form; inverse of [`GaussDiagram::parse`] on valid
    /// diagrams, and injective on them.
    pub fn to_text(&self) -> String {
        let mut out = self.kind.to_string();
        for e in &self.endpoints {
            out.push(' ');
            out.push(e.role.letter());
            out.push_str(&e.chord.to_string());
            if let Some(sign) = self.sign_of(e.chord) {
                out.push(sign.letter());
            }
            out.push(':');
            match self.index_of(e.chord) {
                Some(ix) => out.push_str(&ix.to_string()),
                None => out.push('?'),
            }
        }
        out
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for GaussDiagram {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<GaussDiagram, ParseError> {
        GaussDiagram::parse(s)
    }
}

/// Splits `role id sign?` off a token, returning the unconsumed tail.
fn split_token(tok: &str) -> Result<(Endpoint, Option<Sign>, &str), String> {
    let role = match tok.chars().next() {
        Some('O') => Role::Over,
        Some('U') => Role::Under,
        _ => return Err("expected role `O` or `U`".to_string()),
    };
    let rest = &tok[1..];
    let digits_end = rest
        .find(|c: char| !c.is_ascii_digit())
        .unwrap_or(rest.len());
    let digits = &rest[..digits_end];
    if digits.is_empty() {
        return Err("expected a chord id after the role".to_string());
    }
    if digits.starts_with('0') {
        return Err("chord ids are positive without leading zeros".to_string());
    }
    let id: u32 = digits
        .parse()
        .map_err(|_| "chord id out of range".to_string())?;
    let mut tail = &rest[digits_end..];
    let sign = match tail.chars().next() {
        Some('+') => {
            tail = &tail[1..];
            Some(Sign::Plus)
        }
        Some('-') => {
            tail = &tail[1..];
            Some(Sign::Minus)
        }
        _ => None,
    };
    Ok((
        Endpoint {
            chord: ChordId(id),
            role,
        },
        sign,
        tail,
    ))
}

/// Parses a full `role id sign? : index` token.
fn parse_full_token(tok: &str) -> Result<(Endpoint, Option<Sign>, ChordIndex), String> {
    let (endpoint, sign, tail) = split_token(tok)?;
    let index = match tail {
        ":0" => ChordIndex::Trivial,
        ":a" => ChordIndex::IdxA,
        ":b" => ChordIndex::IdxB,
        ":c" => ChordIndex::IdxC,
        _ => return Err("expected `:0`, `:a`, `:b` or `:c` after the chord id".to_string()),
    };
    Ok((endpoint, sign, index))
}

/// Parses a bare `role id sign?` token (no index part); used by the
/// winding-decorated format.
pub(crate) fn parse_endpoint_token(tok: &str) -> Result<(Endpoint, Option<Sign>), String> {
    let (endpoint, sign, tail) = split_token(tok)?;
    if !tail.is_empty() {
        return Err("unexpected trailing characters after the chord id".to_string());
    }
    Ok((endpoint, sign))
}

/// Folds per-token sign observations into a sign table: `None` when no token
/// carried a sign, the full table when all did. Mixed or contradictory signs
/// are an error.
pub(crate) fn collect_signs(
    observations: &[(ChordId, Option<Sign>)],
) -> Result<Option<BTreeMap<ChordId, Sign>>, String> {
    let mut table: BTreeMap<ChordId, Option<Sign>> = BTreeMap::new();
    for &(chord, sign) in observations {
        match table.entry(chord) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(sign);
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                if *e.get() != sign {
                    return Err(format!(
                        "the two endpoints of chord {chord} must carry the same sign"
                    ));
                }
            }
        }
    }
    let signed = table.values().filter(|s| s.is_some()).count();
    if signed == 0 {
        Ok(None)
    } else if signed == table.len() {
        Ok(Some(
            table.into_iter().map(|(c, s)| (c, s.unwrap())).collect(),
        ))
    } else {
        Err("either every chord carries a sign or none does".to_string())
    }
}

//! Chord indices valued in Z2 ⊕ Z2, and derivation of indices from
//! winding-decorated diagrams.
//!
//! Every chord of a diagram carries one of four indices: the trivial index
//! `0`, or one of `a`, `b`, `c`. Under componentwise addition mod 2 these
//! form the Klein four-group with `a + b = c`. Two crossings may cancel in a
//! second Reidemeister move only when their indices agree, and a third
//! Reidemeister move is admissible only when the three indices sum to zero;
//! those checks live in [`crate::moves`], the algebra lives here.
//!
//! For diagrams drawn on a torus the index of a crossing can be computed
//! from homology data: label every arc of the diagram with its winding pair
//! and reduce the half-loop sum mod 2. [`WindingDecoratedDiagram`] holds
//! that presentation and [`derive_indices`] performs the reduction.

use std::fmt;

use thiserror::Error;

use crate::gauss::{self, ChordId, Endpoint, GaussDiagram, Kind, Role, Sign};

/// A chord index: an element of Z2 ⊕ Z2.
///
/// `Trivial` is the identity; `IdxA = (1,0)`, `IdxB = (0,1)`, `IdxC = (1,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChordIndex {
    Trivial,
    IdxA,
    IdxB,
    IdxC,
}

impl ChordIndex {
    pub const ALL: [ChordIndex; 4] = [
        ChordIndex::Trivial,
        ChordIndex::IdxA,
        ChordIndex::IdxB,
        ChordIndex::IdxC,
    ];

    /// The two Z2 components.
    pub fn bits(self) -> (u8, u8) {
        match self {
            ChordIndex::Trivial => (0, 0),
            ChordIndex::IdxA => (1, 0),
            ChordIndex::IdxB => (0, 1),
            ChordIndex::IdxC => (1, 1),
        }
    }

    /// Builds an index from arbitrary integers, reducing both mod 2.
    pub fn from_parities(p: i64, q: i64) -> ChordIndex {
        match (p.rem_euclid(2), q.rem_euclid(2)) {
            (0, 0) => ChordIndex::Trivial,
            (1, 0) => ChordIndex::IdxA,
            (0, 1) => ChordIndex::IdxB,
            _ => ChordIndex::IdxC,
        }
    }

    pub fn is_trivial(self) -> bool {
        self == ChordIndex::Trivial
    }
}

impl std::ops::Add for ChordIndex {
    type Output = ChordIndex;

    fn add(self, rhs: ChordIndex) -> ChordIndex {
        let (p1, q1) = self.bits();
        let (p2, q2) = rhs.bits();
        ChordIndex::from_parities((p1 + p2) as i64, (q1 + q2) as i64)
    }
}

impl fmt::Display for ChordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChordIndex::Trivial => "0",
            ChordIndex::IdxA => "a",
            ChordIndex::IdxB => "b",
            ChordIndex::IdxC => "c",
        };
        f.write_str(s)
    }
}

/// Sum of indices in Z2 ⊕ Z2; the empty sum is `Trivial`.
pub fn index_sum<I: IntoIterator<Item = ChordIndex>>(indices: I) -> ChordIndex {
    indices
        .into_iter()
        .fold(ChordIndex::Trivial, |acc, x| acc + x)
}

/// Admissibility of an index triple for a third Reidemeister move:
/// the three indices must sum to zero.
pub fn r3_index_admissible(x: ChordIndex, y: ChordIndex, z: ChordIndex) -> bool {
    index_sum([x, y, z]).is_trivial()
}

/// A diagram whose arcs carry integer winding pairs instead of chord indices.
///
/// The endpoint sequence is as in [`GaussDiagram`]; `arc_windings[k]` is the
/// winding pair of the arc *following* endpoint `k`. Closed diagrams have one
/// arc per endpoint. Long diagrams additionally have a leading arc before the
/// first endpoint, stored at `arc_windings[0]` with the arc after endpoint
/// `k` shifted to `arc_windings[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingDecoratedDiagram {
    pub kind: Kind,
    pub endpoints: Vec<Endpoint>,
    pub signs: Option<std::collections::BTreeMap<ChordId, Sign>>,
    pub arc_windings: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WindingError {
    #[error("expected {expected} arc windings for this diagram, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("underlying endpoint sequence is invalid: {0}")]
    BadEndpoints(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("token {token_index} (`{token}`): {message}")]
pub struct WindingParseError {
    pub token_index: usize,
    pub token: String,
    pub message: String,
}

impl WindingDecoratedDiagram {
    fn expected_windings(&self) -> usize {
        match self.kind {
            Kind::Closed => self.endpoints.len(),
            Kind::Long => self.endpoints.len() + 1,
        }
    }

    /// Parses the winding-decorated text form: the usual Gauss-code tokens
    /// with the `:index` part omitted, each followed by a `[p,q]` winding for
    /// the arc after that endpoint. Long diagrams start with the leading
    /// arc's winding right after the kind, e.g.
    /// `long [0,0] U1 [1,0] O1 [0,1]`.
    pub fn parse(text: &str) -> Result<WindingDecoratedDiagram, WindingParseError> {
        let mut tokens = text.split_whitespace().enumerate();
        let err = |i: usize, tok: &str, msg: &str| WindingParseError {
            token_index: i,
            token: tok.to_string(),
            message: msg.to_string(),
        };
        let (_, kind_tok) = tokens
            .next()
            .ok_or_else(|| err(0, "", "empty input, expected `long` or `closed`"))?;
        let kind = match kind_tok {
            "long" => Kind::Long,
            "closed" => Kind::Closed,
            other => return Err(err(0, other, "expected `long` or `closed`")),
        };

        let mut endpoints = Vec::new();
        let mut signs: Vec<(ChordId, Option<Sign>)> = Vec::new();
        let mut windings = Vec::new();
        // Tokens strictly alternate endpoint/winding; long diagrams lead with
        // the winding of the arc before the first endpoint.
        let mut want_winding = kind == Kind::Long;
        for (i, tok) in tokens {
            if tok.starts_with('[') {
                if !want_winding {
                    return Err(err(i, tok, "expected an endpoint token, found a winding"));
                }
                let inner = tok
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or_else(|| err(i, tok, "winding must look like `[p,q]`"))?;
                let mut parts = inner.splitn(2, ',');
                let p = parts
                    .next()
                    .and_then(|s| s.parse::<i64>().ok())
                    .ok_or_else(|| err(i, tok, "winding must look like `[p,q]`"))?;
                let q = parts
                    .next()
                    .and_then(|s| s.parse::<i64>().ok())
                    .ok_or_else(|| err(i, tok, "winding must look like `[p,q]`"))?;
                windings.push((p, q));
                want_winding = false;
            } else {
                if want_winding {
                    return Err(err(i, tok, "expected a `[p,q]` winding, found an endpoint"));
                }
                let (endpoint, sign) =
                    gauss::parse_endpoint_token(tok).map_err(|msg| err(i, tok, &msg))?;
                signs.push((endpoint.chord, sign));
                endpoints.push(endpoint);
                want_winding = true;
            }
        }

        let signs = gauss::collect_signs(&signs).map_err(|msg| WindingParseError {
            token_index: 0,
            token: text.trim().to_string(),
            message: msg,
        })?;

        let d = WindingDecoratedDiagram {
            kind,
            endpoints,
            signs,
            arc_windings: windings,
        };
        let expected = d.expected_windings();
        if d.arc_windings.len() != expected {
            return Err(WindingParseError {
                token_index: 0,
                token: text.trim().to_string(),
                message: format!(
                    "expected {} arc windings, found {}",
                    expected,
                    d.arc_windings.len()
                ),
            });
        }
        Ok(d)
    }
}

/// Computes the chord index of every chord as the mod-2 reduction of the
/// half-loop winding sum: walk forward from the chord's under endpoint to its
/// over endpoint, adding the winding of every arc traversed; the arc after
/// the over endpoint is not included. On long diagrams the walk may pass
/// through infinity, picking up the trailing and leading arcs.
///
/// The result is a full [`GaussDiagram`] with the same endpoints and signs.
pub fn derive_indices(d: &WindingDecoratedDiagram) -> Result<GaussDiagram, WindingError> {
    let expected = d.expected_windings();
    if d.arc_windings.len() != expected {
        return Err(WindingError::CountMismatch {
            expected,
            found: d.arc_windings.len(),
        });
    }
    let arcs = d.arc_windings.len();
    // Position of the arc following endpoint `pos` in `arc_windings`.
    let arc_after = |pos: usize| match d.kind {
        Kind::Closed => pos,
        Kind::Long => pos + 1,
    };

    let mut indices = std::collections::BTreeMap::new();
    for (pos, e) in d.endpoints.iter().enumerate() {
        if e.role != Role::Under {
            continue;
        }
        let over_pos = d
            .endpoints
            .iter()
            .position(|f| f.chord == e.chord && f.role == Role::Over)
            .ok_or_else(|| {
                WindingError::BadEndpoints(format!("chord {} has no over endpoint", e.chord))
            })?;
        let (mut p, mut q) = (0i64, 0i64);
        let mut arc = arc_after(pos);
        let stop = arc_after(over_pos);
        while arc != stop {
            let (wp, wq) = d.arc_windings[arc];
            p += wp;
            q += wq;
            arc = (arc + 1) % arcs;
        }
        indices.insert(e.chord, ChordIndex::from_parities(p, q));
    }

    GaussDiagram::new(d.kind, d.endpoints.clone(), indices, d.signs.clone())
        .map_err(|e| WindingError::BadEndpoints(e.to_string()))
}

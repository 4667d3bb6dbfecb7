//! Words, reduction, normal forms and gauge orbits for an amalgamated free
//! product `G = A *_C B` over the generating set `(A u B) \ {1}`.
//!
//! A word is reduced when its letters strictly alternate sides and (for
//! length >= 2) no letter lies in the embedded copy of `C`; reduced words are
//! exactly the geodesics. Two reduced words spell the same element iff they
//! differ by a gauge: inserting `c^-1 c` at a junction and absorbing the two
//! halves into the neighbouring letters through the identification
//! `iota_A(c) = iota_B(c)`. Normal forms fix the gauge by a left-to-right
//! least-representative scan, so element equality is structural equality.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::group::{Embedding, FiniteGroup};
use crate::snf::{smith_normal_form, AbelianInvariants, SmithForm};
use num_bigint::BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmalgamError {
    #[error("embedding source must be C (order {c_order}), got order {got}")]
    EmbeddingSourceMismatch { c_order: usize, got: usize },
    #[error("letter value {value} is out of range for side {side} (order {order})")]
    LetterOutOfRange { side: Side, value: u32, order: usize },
    #[error("letter value 0 is the identity and not a generator")]
    IdentityLetter,
    #[error("cannot parse word token {token:?}: expected `A:<index>` or `B:<index>`")]
    ParseWord { token: String },
    #[error(
        "gauge orbit has {size} members, above the cap {cap}; \
         use the dynamic-programming path instead of enumeration"
    )]
    OrbitTooLarge { size: u128, cap: u128 },
}

/// Which factor a letter lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// One generator: a nonidentity element of `A` or of `B`.
///
/// Letters in the embedded image of `C` have two spellings (one per side);
/// presentation-aware constructors canonicalize those to the `A` side so
/// that structural letter equality is generator equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ALetter {
    pub side: Side,
    pub value: u32,
}

impl fmt::Display for ALetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.value)
    }
}

/// A free word over the generators; `|w|` is the letter count.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AWord {
    letters: Vec<ALetter>,
}

impl AWord {
    pub fn empty() -> Self {
        AWord::default()
    }

    pub fn letters(&self) -> &[ALetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &AWord) -> AWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        AWord { letters }
    }

    pub fn pow(&self, n: usize) -> AWord {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        AWord { letters }
    }

    /// Builds a word from already-validated letters.
    pub fn from_letters(letters: Vec<ALetter>) -> AWord {
        AWord { letters }
    }
}

impl fmt::Display for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// A group element, held as its gauge-canonical reduced word. Equal elements
/// have identical stored forms, so `Eq`/`Hash` are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AElement {
    word: AWord,
}

impl AElement {
    pub fn word(&self) -> &AWord {
        &self.word
    }

    /// Geodesic length `|g|` (0 for the identity).
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.word)
        }
    }
}

/// The presentation data `A *_C B`: finite factors plus the two embeddings.
#[derive(Debug, Clone)]
pub struct AmalgamPresentation {
    a: FiniteGroup,
    b: FiniteGroup,
    c: FiniteGroup,
    iota_a: Embedding,
    iota_b: Embedding,
    a_to_c: Vec<Option<u32>>,
    b_to_c: Vec<Option<u32>>,
}

impl AmalgamPresentation {
    pub fn new(
        a: FiniteGroup,
        b: FiniteGroup,
        c: FiniteGroup,
        iota_a: Embedding,
        iota_b: Embedding,
    ) -> Result<Self, AmalgamError> {
        for e in [&iota_a, &iota_b] {
            if e.source_order() != c.order() {
                return Err(AmalgamError::EmbeddingSourceMismatch {
                    c_order: c.order(),
                    got: e.source_order(),
                });
            }
        }
        let a_to_c = (0..a.order() as u32).map(|x| iota_a.preimage(x)).collect();
        let b_to_c = (0..b.order() as u32).map(|x| iota_b.preimage(x)).collect();
        Ok(AmalgamPresentation {
            a,
            b,
            c,
            iota_a,
            iota_b,
            a_to_c,
            b_to_c,
        })
    }

    pub fn factor(&self, side: Side) -> &FiniteGroup {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn c_group(&self) -> &FiniteGroup {
        &self.c
    }

    pub fn embedding(&self, side: Side) -> &Embedding {
        match side {
            Side::A => &self.iota_a,
            Side::B => &self.iota_b,
        }
    }

    /// Whether the A-element `a` lies in `iota_A(C)`.
    pub fn in_ca(&self, a: u32) -> bool {
        self.iota_a.in_image(a)
    }

    /// Whether the B-element `b` lies in `iota_B(C)`.
    pub fn in_cb(&self, b: u32) -> bool {
        self.iota_b.in_image(b)
    }

    /// The abstract `C`-index of a letter lying in the embedded image.
    fn c_index_of(&self, l: ALetter) -> Option<u32> {
        match l.side {
            Side::A => self.a_to_c[l.value as usize],
            Side::B => self.b_to_c[l.value as usize],
        }
    }

    /// Validates and canonicalizes a letter (embedded-C spellings go to A).
    pub fn letter(&self, side: Side, value: u32) -> Result<ALetter, AmalgamError> {
        let order = self.factor(side).order();
        if value as usize >= order {
            return Err(AmalgamError::LetterOutOfRange { side, value, order });
        }
        if value == 0 {
            return Err(AmalgamError::IdentityLetter);
        }
        Ok(self.canon_letter(ALetter { side, value }))
    }

    fn canon_letter(&self, l: ALetter) -> ALetter {
        if l.side == Side::B {
            if let Some(c) = self.b_to_c[l.value as usize] {
                return ALetter {
                    side: Side::A,
                    value: self.iota_a.apply(c),
                };
            }
        }
        l
    }

    pub fn word(&self, pairs: &[(Side, u32)]) -> Result<AWord, AmalgamError> {
        let letters = pairs
            .iter()
            .map(|&(s, v)| self.letter(s, v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AWord { letters })
    }

    /// Parses the word literal syntax `A:3 B:1 A:2`; empty input is the
    /// identity.
    pub fn parse_word(&self, text: &str) -> Result<AWord, AmalgamError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (side, rest) = if let Some(r) = token.strip_prefix("A:") {
                (Side::A, r)
            } else if let Some(r) = token.strip_prefix("B:") {
                (Side::B, r)
            } else {
                return Err(AmalgamError::ParseWord {
                    token: token.to_string(),
                });
            };
            let value: u32 = rest.parse().map_err(|_| AmalgamError::ParseWord {
                token: token.to_string(),
            })?;
            letters.push(self.letter(side, value)?);
        }
        Ok(AWord { letters })
    }

    /// `w^-1 = x_n^-1 ... x_1^-1`.
    pub fn inverse_word(&self, w: &AWord) -> AWord {
        let letters = w
            .letters
            .iter()
            .rev()
            .map(|l| {
                self.canon_letter(ALetter {
                    side: l.side,
                    value: self.factor(l.side).inv(l.value),
                })
            })
            .collect();
        AWord { letters }
    }

    /// True iff `|w| <= 1`, or the letters strictly alternate sides and none
    /// lies in the embedded copy of `C`.
    pub fn is_reduced(&self, w: &AWord) -> bool {
        if w.len() <= 1 {
            return true;
        }
        for (i, l) in w.letters.iter().enumerate() {
            if self.c_index_of(*l).is_some() {
                return false;
            }
            if i > 0 && w.letters[i - 1].side == l.side {
                return false;
            }
        }
        true
    }

    /// Rewrites `w` to a reduced word for the same element: adjacent
    /// same-side letters are multiplied out and embedded-C letters absorbed
    /// into an opposite-side neighbour, leftmost-innermost until fixpoint.
    pub fn reduce(&self, w: &AWord) -> AWord {
        let mut stack: Vec<ALetter> = Vec::with_capacity(w.len());
        for &letter in &w.letters {
            stack.push(letter);
            loop {
                let n = stack.len();
                if n < 2 {
                    break;
                }
                let x = stack[n - 2];
                let y = stack[n - 1];
                if x.side == y.side {
                    let g = self.factor(x.side);
                    let v = g.mul(x.value, y.value);
                    stack.truncate(n - 2);
                    if v != 0 {
                        stack.push(ALetter { side: x.side, value: v });
                    }
                    continue;
                }
                if let Some(c) = self.c_index_of(y) {
                    // Respell y on x's side and merge leftward.
                    let g = self.factor(x.side);
                    let v = g.mul(x.value, self.embedding(x.side).apply(c));
                    stack.truncate(n - 2);
                    if v != 0 {
                        stack.push(ALetter { side: x.side, value: v });
                    }
                    continue;
                }
                if let Some(c) = self.c_index_of(x) {
                    // Respell x on y's side and merge rightward.
                    let g = self.factor(y.side);
                    let v = g.mul(self.embedding(y.side).apply(c), y.value);
                    stack.truncate(n - 2);
                    if v != 0 {
                        stack.push(ALetter { side: y.side, value: v });
                    }
                    continue;
                }
                break;
            }
        }
        if stack.len() == 1 {
            stack[0] = self.canon_letter(stack[0]);
        }
        debug_assert!(self.is_reduced(&AWord {
            letters: stack.clone()
        }));
        AWord { letters: stack }
    }

    /// Letter `i` of the orbit member with gauges `c_left`, `c_right` at the
    /// surrounding junctions: `iota(c_left) * x_i * iota(c_right)^-1` in the
    /// letter's own factor.
    pub(crate) fn gauged_letter(&self, x: ALetter, c_left: u32, c_right: u32) -> ALetter {
        let g = self.factor(x.side);
        let e = self.embedding(x.side);
        let v = g.mul(g.mul(e.apply(c_left), x.value), g.inv(e.apply(c_right)));
        ALetter {
            side: x.side,
            value: v,
        }
    }

    /// Gauge-canonical form of a reduced word: scanning junctions left to
    /// right, pick the gauge that minimizes the letter just written; the
    /// result is the lexicographically least member of the gauge orbit.
    fn canonical_gauge(&self, reduced: &AWord) -> AWord {
        let n = reduced.len();
        if n == 0 {
            return AWord::empty();
        }
        if n == 1 {
            return AWord {
                letters: vec![self.canon_letter(reduced.letters[0])],
            };
        }
        let c_order = self.c.order() as u32;
        let mut out = Vec::with_capacity(n);
        let mut c_prev = 0u32;
        for i in 0..n - 1 {
            let x = reduced.letters[i];
            let mut best_letter = self.gauged_letter(x, c_prev, 0);
            let mut best_gauge = 0u32;
            for c_next in 1..c_order {
                let y = self.gauged_letter(x, c_prev, c_next);
                if y.value < best_letter.value {
                    best_letter = y;
                    best_gauge = c_next;
                }
            }
            out.push(best_letter);
            c_prev = best_gauge;
        }
        out.push(self.gauged_letter(reduced.letters[n - 1], c_prev, 0));
        AWord { letters: out }
    }

    /// Canonical representative of the element spelled by `w`.
    pub fn element(&self, w: &AWord) -> AElement {
        let reduced = self.reduce(w);
        AElement {
            word: self.canonical_gauge(&reduced),
        }
    }

    pub fn identity(&self) -> AElement {
        AElement {
            word: AWord::empty(),
        }
    }

    pub fn equals(&self, u: &AWord, v: &AWord) -> bool {
        self.element(u) == self.element(v)
    }

    /// Independent equality route: `u v^-1` reduces to the empty word.
    pub fn equals_by_reduction(&self, u: &AWord, v: &AWord) -> bool {
        self.reduce(&u.concat(&self.inverse_word(v))).is_empty()
    }

    /// Geodesic length `|g|`: reduced words are geodesics, so this is the
    /// stored length.
    pub fn geodesic_length(&self, g: &AElement) -> usize {
        g.word.len()
    }

    pub fn mul_elements(&self, x: &AElement, y: &AElement) -> AElement {
        self.element(&x.word.concat(&y.word))
    }

    pub fn inverse_element(&self, g: &AElement) -> AElement {
        self.element(&self.inverse_word(&g.word))
    }

    /// The gauge orbit of `g`: all reduced words spelling `g`, one per
    /// choice of interior junction gauges.
    pub fn gauge_orbit<'a>(&'a self, g: &AElement) -> AGaugeOrbit<'a> {
        AGaugeOrbit {
            pres: self,
            base: g.word.clone(),
        }
    }

    /// All reduced words representing `g`, without duplicates. Errors when
    /// `|C|^(|g|-1)` exceeds `cap`.
    pub fn enumerate_geodesics(&self, g: &AElement, cap: u128) -> Result<Vec<AWord>, AmalgamError> {
        self.gauge_orbit(g).members(cap)
    }

    /// A uniformly random reduced word of the requested length (letters
    /// alternate sides; values drawn outside the embedded `C`).
    pub fn random_reduced_word(&self, rng: &mut impl Rng, len: usize) -> AWord {
        let a_pool: Vec<u32> = (1..self.a.order() as u32).filter(|&v| !self.in_ca(v)).collect();
        let b_pool: Vec<u32> = (1..self.b.order() as u32).filter(|&v| !self.in_cb(v)).collect();
        assert!(
            !a_pool.is_empty() && !b_pool.is_empty(),
            "factors must properly contain C"
        );
        let mut side = if rng.gen::<bool>() { Side::A } else { Side::B };
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let pool = match side {
                Side::A => &a_pool,
                Side::B => &b_pool,
            };
            let value = pool[rng.gen_range(0..pool.len())];
            letters.push(ALetter { side, value });
            side = side.other();
        }
        AWord { letters }
    }

    /// A uniformly random free word (letters need not alternate).
    pub fn random_word(&self, rng: &mut impl Rng, len: usize) -> AWord {
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let side = if rng.gen::<bool>() { Side::A } else { Side::B };
            let order = self.factor(side).order() as u32;
            let value = rng.gen_range(1..order);
            letters.push(self.canon_letter(ALetter { side, value }));
        }
        AWord { letters }
    }

    /// Generating set `(A u B) \ {1}`, embedded-C spellings canonicalized.
    pub fn generators(&self) -> Vec<ALetter> {
        let mut out = Vec::new();
        for v in 1..self.a.order() as u32 {
            out.push(ALetter {
                side: Side::A,
                value: v,
            });
        }
        for v in 1..self.b.order() as u32 {
            if !self.in_cb(v) {
                out.push(ALetter {
                    side: Side::B,
                    value: v,
                });
            }
        }
        out
    }

    /// `G^ab` as the integer quotient on one generator per nonidentity
    /// element of `A` and `B`, with the factor multiplication tables and the
    /// identifications `iota_A(c) = iota_B(c)` as relations.
    pub fn abelianization(&self) -> AmalgamAbelianization {
        let a_ord = self.a.order();
        let b_ord = self.b.order();
        let cols = (a_ord - 1) + (b_ord - 1);
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let push_pair_rows = |g: &FiniteGroup, offset: usize, rows: &mut Vec<Vec<i64>>| {
            for x in 1..g.order() as u32 {
                for y in 1..g.order() as u32 {
                    let mut row = vec![0i64; cols];
                    row[offset + x as usize - 1] += 1;
                    row[offset + y as usize - 1] += 1;
                    let p = g.mul(x, y);
                    if p != 0 {
                        row[offset + p as usize - 1] -= 1;
                    }
                    rows.push(row);
                }
            }
        };
        push_pair_rows(&self.a, 0, &mut rows);
        push_pair_rows(&self.b, a_ord - 1, &mut rows);
        for c in 1..self.c.order() as u32 {
            let mut row = vec![0i64; cols];
            row[self.iota_a.apply(c) as usize - 1] += 1;
            row[(a_ord - 1) + self.iota_b.apply(c) as usize - 1] -= 1;
            rows.push(row);
        }
        let form = smith_normal_form(&rows, cols);
        AmalgamAbelianization {
            form,
            rows,
            a_order: a_ord,
            cols,
        }
    }
}

/// The family of reduced words representing one element: junction `i` ranges
/// over `C`, with the boundary gauges pinned to the identity.
pub struct AGaugeOrbit<'a> {
    pres: &'a AmalgamPresentation,
    base: AWord,
}

impl<'a> AGaugeOrbit<'a> {
    pub fn base(&self) -> &AWord {
        &self.base
    }

    /// Number of interior junctions (`|g| - 1`, or 0 for `|g| <= 1`).
    pub fn junctions(&self) -> usize {
        self.base.len().saturating_sub(1)
    }

    pub fn gauge_order(&self) -> usize {
        self.pres.c_group().order()
    }

    pub fn size(&self) -> u128 {
        (self.gauge_order() as u128)
            .checked_pow(self.junctions() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Letter `i` of the member with gauges `c_left` at junction `i` and
    /// `c_right` at junction `i+1` (junction 0 and junction `n` are pinned).
    pub fn letter_at(&self, i: usize, c_left: u32, c_right: u32) -> ALetter {
        self.pres.gauged_letter(self.base.letters[i], c_left, c_right)
    }

    /// The member word for a full interior gauge assignment.
    pub fn member(&self, gauges: &[u32]) -> AWord {
        assert_eq!(gauges.len(), self.junctions());
        let n = self.base.len();
        let mut letters = Vec::with_capacity(n);
        for i in 0..n {
            let c_left = if i == 0 { 0 } else { gauges[i - 1] };
            let c_right = if i + 1 == n { 0 } else { gauges[i] };
            letters.push(self.letter_at(i, c_left, c_right));
        }
        AWord { letters }
    }

    /// All members, deduplicated and sorted; errors above `cap`.
    pub fn members(&self, cap: u128) -> Result<Vec<AWord>, AmalgamError> {
        let size = self.size();
        if size > cap {
            return Err(AmalgamError::OrbitTooLarge { size, cap });
        }
        let j = self.junctions();
        let c_ord = self.gauge_order() as u32;
        let mut out = std::collections::BTreeSet::new();
        let mut gauges = vec![0u32; j];
        loop {
            out.insert(self.member(&gauges));
            // Odometer step.
            let mut pos = 0;
            while pos < j {
                gauges[pos] += 1;
                if gauges[pos] < c_ord {
                    break;
                }
                gauges[pos] = 0;
                pos += 1;
            }
            if pos == j {
                break;
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// `G^ab` with its quotient map; an element lies in `[G, G]` iff its image
/// vanishes.
pub struct AmalgamAbelianization {
    form: SmithForm,
    rows: Vec<Vec<i64>>,
    a_order: usize,
    cols: usize,
}

impl AmalgamAbelianization {
    pub fn invariants(&self) -> AbelianInvariants {
        self.form.invariants()
    }

    /// The relation matrix the quotient was computed from (for cross-checks).
    pub fn relation_rows(&self) -> (&[Vec<i64>], usize) {
        (&self.rows, self.cols)
    }

    fn letter_counts(&self, w: &AWord) -> Vec<i64> {
        let mut x = vec![0i64; self.cols];
        for l in w.letters() {
            let col = match l.side {
                Side::A => l.value as usize - 1,
                Side::B => (self.a_order - 1) + l.value as usize - 1,
            };
            x[col] += 1;
        }
        x
    }

    /// Image of the word in invariant-factor coordinates.
    pub fn image(&self, w: &AWord) -> Vec<BigInt> {
        self.form.image(&self.letter_counts(w))
    }

    /// Whether the element spelled by `w` lies in the commutator subgroup.
    pub fn in_commutator(&self, w: &AWord) -> bool {
        self.form.is_zero_image(&self.letter_counts(w))
    }
}

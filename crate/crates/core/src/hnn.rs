//! Britton reduction, normal forms, t-patterns and gauge orbits for an HNN
//! extension `G = A *_C phi = <A, t ; c = t^-1 phi(c) t>` over the generating
//! set `{t} u A \ {1}`.
//!
//! Words are letter sequences (t-powers stored as unit letters). A word is
//! reduced when no two A-letters are adjacent and no pinch `t a t^-1` with
//! `a` in `C` (or `t^-1 a t` with `a` in `phi(C)`) occurs, the trivial-middle
//! cancellations `t t^-1` and `t^-1 t` included. Reduced words spelling the
//! same element share their t-pattern and differ only by junction gauges
//! `a_{i-1} t a_i = a_{i-1} phi(v) t v^-1 a_i` (and the mirror rule for
//! `t^-1`), which is what the orbit type enumerates. Unlike the amalgam case
//! a reduced word need not be a geodesic, so geodesic length is a minimum
//! over the orbit, computed by dynamic programming over junction gauges.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::group::{check_embedding, Embedding, FiniteGroup, GroupError, Subgroup};
use crate::snf::{smith_normal_form, AbelianInvariants, SmithForm};
use num_bigint::BigInt;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HnnError {
    #[error("invalid subgroup or phi data: {0}")]
    Group(#[from] GroupError),
    #[error("phi must be defined exactly on C: missing image for subgroup element {element}")]
    PhiNotTotal { element: u32 },
    #[error("A-letter value {value} is out of range (order {order})")]
    LetterOutOfRange { value: u32, order: usize },
    #[error("letter value 0 is the identity and not a generator")]
    IdentityLetter,
    #[error("cannot parse word token {token:?}: expected `t`, `T` or `a:<index>`")]
    ParseWord { token: String },
    #[error("word is not in syllable form t^n1 a_1 ... t^nI a_I: {reason} at letter {position}")]
    MalformedSyllables { position: usize, reason: String },
    #[error(
        "gauge orbit has {size} members, above the cap {cap}; \
         use the dynamic-programming path instead of enumeration"
    )]
    OrbitTooLarge { size: u128, cap: u128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// One generator letter: the stable letter (either direction) or a
/// nonidentity element of `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HLetter {
    T,
    TInv,
    A(u32),
}

impl fmt::Display for HLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HLetter::T => write!(f, "t"),
            HLetter::TInv => write!(f, "T"),
            HLetter::A(v) => write!(f, "a:{v}"),
        }
    }
}

/// A free word over `{t, t^-1} u A \ {1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HWord {
    letters: Vec<HLetter>,
}

impl HWord {
    pub fn empty() -> Self {
        HWord::default()
    }

    pub fn letters(&self) -> &[HLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &HWord) -> HWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        HWord { letters }
    }

    pub fn pow(&self, n: usize) -> HWord {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        HWord { letters }
    }

    /// Builds a word from already-validated letters.
    pub fn from_letters(letters: Vec<HLetter>) -> HWord {
        HWord { letters }
    }

    pub fn t_count(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, HLetter::T | HLetter::TInv))
            .count()
    }
}

impl fmt::Display for HWord {
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

/// The signs of the t-letters of a word, in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TPattern {
    signs: Vec<Sign>,
}

impl TPattern {
    pub fn new(signs: Vec<Sign>) -> Self {
        TPattern { signs }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn pow(&self, n: usize) -> TPattern {
        let mut signs = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            signs.extend_from_slice(&self.signs);
        }
        TPattern { signs }
    }

    pub fn inverse(&self) -> TPattern {
        TPattern {
            signs: self.signs.iter().rev().map(|s| s.flip()).collect(),
        }
    }

    /// Longest run of identical signs.
    pub fn max_run(&self) -> usize {
        let mut best = 0usize;
        let mut run = 0usize;
        let mut prev: Option<Sign> = None;
        for &s in &self.signs {
            if Some(s) == prev {
                run += 1;
            } else {
                run = 1;
                prev = Some(s);
            }
            best = best.max(run);
        }
        best
    }

    /// Whether `needle` occurs as a contiguous subword.
    pub fn contains(&self, needle: &TPattern) -> bool {
        if needle.signs.is_empty() {
            return true;
        }
        self.signs
            .windows(needle.signs.len())
            .any(|w| w == needle.signs.as_slice())
    }

    pub fn render(&self) -> String {
        self.signs.iter().map(|s| s.to_string()).collect()
    }

    pub fn parse(text: &str) -> Option<TPattern> {
        let mut signs = Vec::new();
        for ch in text.chars() {
            match ch {
                '+' => signs.push(Sign::Plus),
                '-' => signs.push(Sign::Minus),
                c if c.is_whitespace() => {}
                _ => return None,
            }
        }
        Some(TPattern { signs })
    }
}

impl fmt::Display for TPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A group element in gauge-canonical Britton-reduced syllable form:
/// `slots[0] t^signs[0] slots[1] ... t^signs[k-1] slots[k]` with slot values
/// in `A` (0 meaning an absent letter). Equal elements share the stored
/// form, so `Eq`/`Hash` are structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HElement {
    slots: Vec<u32>,
    signs: Vec<Sign>,
}

impl HElement {
    pub fn slots(&self) -> &[u32] {
        &self.slots
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn t_count(&self) -> usize {
        self.signs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.signs.is_empty() && self.slots[0] == 0
    }

    /// The stored form as a letter word (trivial slots omitted).
    pub fn word(&self) -> HWord {
        let mut letters = Vec::new();
        for (i, &slot) in self.slots.iter().enumerate() {
            if slot != 0 {
                letters.push(HLetter::A(slot));
            }
            if i < self.signs.len() {
                letters.push(match self.signs[i] {
                    Sign::Plus => HLetter::T,
                    Sign::Minus => HLetter::TInv,
                });
            }
        }
        HWord { letters }
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.word();
        if w.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{w}")
        }
    }
}

/// Whether a word sits under condition I, condition II, or neither; see
/// [`HnnPresentation::check_condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionClass {
    I,
    II,
    Neither,
}

/// The presentation data: base group `A`, subgroup `C`, and the injection
/// `phi : C -> A` defining `c = t^-1 phi(c) t`.
#[derive(Debug, Clone)]
pub struct HnnPresentation {
    a: FiniteGroup,
    c: Subgroup,
    c_group: FiniteGroup,
    c_to_a: Vec<u32>,
    a_to_c: Vec<Option<u32>>,
    phi: Embedding,
}

impl HnnPresentation {
    /// Builds the presentation from `A`, the elements of `C`, and `phi`
    /// given as pairs `(c_element_in_A, image_in_A)`.
    pub fn new(a: FiniteGroup, c_elements: &[u32], phi_pairs: &[(u32, u32)]) -> Result<Self, HnnError> {
        let c = Subgroup::from_elements(&a, c_elements)?;
        let (c_group, c_to_a) = c.as_group(&a);
        let mut a_to_c = vec![None; a.order()];
        for (i, &p) in c_to_a.iter().enumerate() {
            a_to_c[p as usize] = Some(i as u32);
        }
        let mut map = vec![None; c_group.order()];
        for &(src, img) in phi_pairs {
            a.check_index(src).map_err(HnnError::Group)?;
            a.check_index(img).map_err(HnnError::Group)?;
            if let Some(ci) = a_to_c[src as usize] {
                map[ci as usize] = Some(img);
            } else {
                return Err(HnnError::Group(GroupError::IndexOutOfRange {
                    index: src,
                    order: c.order(),
                }));
            }
        }
        map[0] = Some(0);
        let map: Vec<u32> = map
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(HnnError::PhiNotTotal {
                element: c_to_a[i],
            }))
            .collect::<Result<_, _>>()?;
        let phi = check_embedding(&c_group, &a, &map)?;
        Ok(HnnPresentation {
            a,
            c,
            c_group,
            c_to_a,
            a_to_c,
            phi,
        })
    }

    pub fn base_group(&self) -> &FiniteGroup {
        &self.a
    }

    pub fn c_subgroup(&self) -> &Subgroup {
        &self.c
    }

    pub fn c_group(&self) -> &FiniteGroup {
        &self.c_group
    }

    pub fn phi(&self) -> &Embedding {
        &self.phi
    }

    pub fn in_c(&self, a: u32) -> bool {
        self.c.contains(a)
    }

    pub fn in_phi_c(&self, a: u32) -> bool {
        self.phi.in_image(a)
    }

    /// `phi(c)` for an A-element of `C`.
    pub fn phi_of(&self, a_elem: u32) -> Option<u32> {
        self.a_to_c[a_elem as usize].map(|ci| self.phi.apply(ci))
    }

    /// `phi^-1(a)` for an A-element of `phi(C)`.
    pub fn phi_inv_of(&self, a_elem: u32) -> Option<u32> {
        self.phi.preimage(a_elem).map(|ci| self.c_to_a[ci as usize])
    }

    /// Embedding of an abstract C-index into `A`.
    pub fn c_index_to_a(&self, c_idx: u32) -> u32 {
        self.c_to_a[c_idx as usize]
    }

    pub fn letter_a(&self, value: u32) -> Result<HLetter, HnnError> {
        if value as usize >= self.a.order() {
            return Err(HnnError::LetterOutOfRange {
                value,
                order: self.a.order(),
            });
        }
        if value == 0 {
            return Err(HnnError::IdentityLetter);
        }
        Ok(HLetter::A(value))
    }

    pub fn word(&self, letters: &[HLetter]) -> Result<HWord, HnnError> {
        for l in letters {
            if let HLetter::A(v) = l {
                self.letter_a(*v)?;
            }
        }
        Ok(HWord {
            letters: letters.to_vec(),
        })
    }

    /// Parses the word literal syntax `t a:2 T a:1`; empty input is the
    /// identity.
    pub fn parse_word(&self, text: &str) -> Result<HWord, HnnError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let letter = match token {
                "t" => HLetter::T,
                "T" => HLetter::TInv,
                _ => {
                    let rest = token.strip_prefix("a:").ok_or_else(|| HnnError::ParseWord {
                        token: token.to_string(),
                    })?;
                    let value: u32 = rest.parse().map_err(|_| HnnError::ParseWord {
                        token: token.to_string(),
                    })?;
                    self.letter_a(value)?
                }
            };
            letters.push(letter);
        }
        Ok(HWord { letters })
    }

    pub fn inverse_word(&self, w: &HWord) -> HWord {
        let letters = w
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                HLetter::T => HLetter::TInv,
                HLetter::TInv => HLetter::T,
                HLetter::A(v) => HLetter::A(self.a.inv(*v)),
            })
            .collect();
        HWord { letters }
    }

    /// Britton reduction: merge adjacent A-letters and collapse pinches
    /// `t a t^-1` (`a` in `C`, to `phi(a)`) and `t^-1 a t` (`a` in `phi(C)`,
    /// to `phi^-1(a)`), trivial middles included, until none remain.
    pub fn britton_reduce(&self, w: &HWord) -> HWord {
        let mut stack: Vec<HLetter> = Vec::with_capacity(w.len());
        for &letter in &w.letters {
            stack.push(letter);
            self.simplify_tail(&mut stack);
        }
        debug_assert!(self.is_reduced(&HWord {
            letters: stack.clone()
        }));
        HWord { letters: stack }
    }

    fn simplify_tail(&self, stack: &mut Vec<HLetter>) {
        loop {
            let n = stack.len();
            if n >= 2 {
                match (stack[n - 2], stack[n - 1]) {
                    (HLetter::A(x), HLetter::A(y)) => {
                        let v = self.a.mul(x, y);
                        stack.truncate(n - 2);
                        if v != 0 {
                            stack.push(HLetter::A(v));
                        }
                        continue;
                    }
                    (HLetter::T, HLetter::TInv) | (HLetter::TInv, HLetter::T) => {
                        stack.truncate(n - 2);
                        continue;
                    }
                    _ => {}
                }
            }
            if n >= 3 {
                if let (HLetter::T, HLetter::A(x), HLetter::TInv) =
                    (stack[n - 3], stack[n - 2], stack[n - 1])
                {
                    if self.in_c(x) {
                        let img = self.phi_of(x).expect("member of C has a phi image");
                        stack.truncate(n - 3);
                        if img != 0 {
                            stack.push(HLetter::A(img));
                        }
                        continue;
                    }
                }
                if let (HLetter::TInv, HLetter::A(x), HLetter::T) =
                    (stack[n - 3], stack[n - 2], stack[n - 1])
                {
                    if self.in_phi_c(x) {
                        let pre = self.phi_inv_of(x).expect("member of phi(C) has a preimage");
                        stack.truncate(n - 3);
                        if pre != 0 {
                            stack.push(HLetter::A(pre));
                        }
                        continue;
                    }
                }
            }
            break;
        }
    }

    /// Reduced in Britton's sense, on letter sequences: no adjacent
    /// A-letters and no pinch (trivial-middle cancellations included).
    pub fn is_reduced(&self, w: &HWord) -> bool {
        let ls = &w.letters;
        for i in 0..ls.len() {
            if i + 1 < ls.len() {
                match (ls[i], ls[i + 1]) {
                    (HLetter::A(_), HLetter::A(_)) => return false,
                    (HLetter::T, HLetter::TInv) | (HLetter::TInv, HLetter::T) => return false,
                    _ => {}
                }
            }
            if i + 2 < ls.len() {
                match (ls[i], ls[i + 1], ls[i + 2]) {
                    (HLetter::T, HLetter::A(x), HLetter::TInv) if self.in_c(x) => return false,
                    (HLetter::TInv, HLetter::A(x), HLetter::T) if self.in_phi_c(x) => {
                        return false
                    }
                    _ => {}
                }
            }
        }
        true
    }

    /// Syllable view of a reduced word: slot values (0 = absent) around the
    /// t-letters.
    fn syllables(&self, reduced: &HWord) -> (Vec<u32>, Vec<Sign>) {
        let mut slots = Vec::new();
        let mut signs = Vec::new();
        let mut pending: u32 = 0;
        for l in &reduced.letters {
            match l {
                HLetter::A(v) => {
                    debug_assert_eq!(pending, 0, "input must be reduced");
                    pending = *v;
                }
                HLetter::T | HLetter::TInv => {
                    slots.push(pending);
                    pending = 0;
                    signs.push(if matches!(l, HLetter::T) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    });
                }
            }
        }
        slots.push(pending);
        (slots, signs)
    }

    /// Gauge factor multiplied on the right of slot `i-1` by junction `i`.
    fn pre_factor(&self, sign: Sign, v: u32) -> u32 {
        match sign {
            Sign::Plus => self.phi.apply(v),
            Sign::Minus => self.c_to_a[v as usize],
        }
    }

    /// Gauge factor multiplied on the left of slot `i` by junction `i`.
    fn post_factor(&self, sign: Sign, v: u32) -> u32 {
        match sign {
            Sign::Plus => self.a.inv(self.c_to_a[v as usize]),
            Sign::Minus => self.a.inv(self.phi.apply(v)),
        }
    }

    /// Canonical gauge: junctions scanned left to right, each gauge chosen
    /// to minimize the slot value just written; lexicographically least
    /// member of the orbit.
    fn canonical_gauge(&self, slots: &[u32], signs: &[Sign]) -> (Vec<u32>, Vec<Sign>) {
        let k = signs.len();
        if k == 0 {
            return (slots.to_vec(), Vec::new());
        }
        let c_ord = self.c_group.order() as u32;
        let mut out = Vec::with_capacity(k + 1);
        let mut v_prev = 0u32;
        for i in 0..k {
            // Slot i-1 is finalized by the choice of gauge at junction i.
            let left = if i == 0 {
                slots[0]
            } else {
                self.a.mul(self.post_factor(signs[i - 1], v_prev), slots[i])
            };
            let mut best_val = self.a.mul(left, self.pre_factor(signs[i], 0));
            let mut best_gauge = 0u32;
            for v in 1..c_ord {
                let val = self.a.mul(left, self.pre_factor(signs[i], v));
                if val < best_val {
                    best_val = val;
                    best_gauge = v;
                }
            }
            out.push(best_val);
            v_prev = best_gauge;
        }
        out.push(self.a.mul(self.post_factor(signs[k - 1], v_prev), slots[k]));
        (out, signs.to_vec())
    }

    /// Canonical representative of the element spelled by `w`.
    pub fn element(&self, w: &HWord) -> HElement {
        let reduced = self.britton_reduce(w);
        let (slots, signs) = self.syllables(&reduced);
        let (slots, signs) = self.canonical_gauge(&slots, &signs);
        HElement { slots, signs }
    }

    pub fn identity(&self) -> HElement {
        HElement {
            slots: vec![0],
            signs: Vec::new(),
        }
    }

    /// Equality via Britton's lemma: `u v^-1` reduces to a word with no
    /// t-letters and trivial A-part iff `u = v` in `G`.
    pub fn equals(&self, u: &HWord, v: &HWord) -> bool {
        self.britton_reduce(&u.concat(&self.inverse_word(v))).is_empty()
    }

    /// Equality via canonical forms; agrees with [`Self::equals`].
    pub fn equals_by_element(&self, u: &HWord, v: &HWord) -> bool {
        self.element(u) == self.element(v)
    }

    pub fn mul_elements(&self, x: &HElement, y: &HElement) -> HElement {
        self.element(&x.word().concat(&y.word()))
    }

    pub fn inverse_element(&self, g: &HElement) -> HElement {
        self.element(&self.inverse_word(&g.word()))
    }

    /// Signs of the t-letters of `w`, in order.
    pub fn t_pattern(w: &HWord) -> TPattern {
        TPattern {
            signs: w
                .letters
                .iter()
                .filter_map(|l| match l {
                    HLetter::T => Some(Sign::Plus),
                    HLetter::TInv => Some(Sign::Minus),
                    HLetter::A(_) => None,
                })
                .collect(),
        }
    }

    /// The gauge orbit of `g`: words equal to `g` with the same t-pattern,
    /// one per junction gauge assignment. Members may be non-reduced; every
    /// reduced word equal to `g` occurs among them.
    pub fn gauge_orbit<'a>(&'a self, g: &HElement) -> HGaugeOrbit<'a> {
        HGaugeOrbit {
            pres: self,
            slots: g.slots.clone(),
            signs: g.signs.clone(),
        }
    }

    /// Geodesic length `|g|`: minimum over the gauge orbit of the member
    /// length (one letter per t, one per nontrivial slot), by dynamic
    /// programming over junction gauges.
    pub fn geodesic_length(&self, g: &HElement) -> usize {
        let k = g.signs.len();
        if k == 0 {
            return usize::from(g.slots[0] != 0);
        }
        let orbit = self.gauge_orbit(g);
        let c_ord = self.c_group.order();
        const INF: usize = usize::MAX / 2;
        // dp[v] = cost of slots 0..i-1 and t-letters 1..i with gauge v at
        // junction i.
        let mut dp = vec![INF; c_ord];
        #[allow(clippy::needless_range_loop)]
        for v in 0..c_ord {
            let slot0 = orbit.slot_value(0, 0, v as u32);
            dp[v] = usize::from(slot0 != 0) + 1;
        }
        for i in 1..k {
            let mut next = vec![INF; c_ord];
            #[allow(clippy::needless_range_loop)]
            for vl in 0..c_ord {
                if dp[vl] >= INF {
                    continue;
                }
                for vr in 0..c_ord {
                    let slot = orbit.slot_value(i, vl as u32, vr as u32);
                    let cost = dp[vl] + usize::from(slot != 0) + 1;
                    if cost < next[vr] {
                        next[vr] = cost;
                    }
                }
            }
            dp = next;
        }
        (0..c_ord)
            .map(|v| dp[v] + usize::from(orbit.slot_value(k, v as u32, 0) != 0))
            .min()
            .expect("C is nonempty")
    }

    /// Classifies a syllable-form word `t^n1 a_1 ... t^nI a_I` against the
    /// two sign/membership condition sets; either one certifies that the
    /// word is a geodesic. The final A-letter may be absent, in which case
    /// only the stated membership conditions are checked. A word in the
    /// mirrored shape `a_0 t^n1 a_1 ... t^nI` is classified through its
    /// inverse (a geodesic iff the word is) and reported with the classes
    /// swapped.
    pub fn check_condition(&self, w: &HWord) -> Result<ConditionClass, HnnError> {
        match self.check_condition_strict(w) {
            Ok(class) => Ok(class),
            Err(err) => match self.check_condition_strict(&self.inverse_word(w)) {
                Ok(ConditionClass::I) => Ok(ConditionClass::II),
                Ok(ConditionClass::II) => Ok(ConditionClass::I),
                Ok(ConditionClass::Neither) => Ok(ConditionClass::Neither),
                Err(_) => Err(err),
            },
        }
    }

    fn check_condition_strict(&self, w: &HWord) -> Result<ConditionClass, HnnError> {
        let mut exponents: Vec<i64> = Vec::new();
        let mut a_letters: Vec<Option<u32>> = Vec::new();
        let mut pos = 0usize;
        let ls = &w.letters;
        if ls.is_empty() {
            return Err(HnnError::MalformedSyllables {
                position: 0,
                reason: "empty word".to_string(),
            });
        }
        while pos < ls.len() {
            let sign = match ls[pos] {
                HLetter::T => 1i64,
                HLetter::TInv => -1i64,
                HLetter::A(_) => {
                    return Err(HnnError::MalformedSyllables {
                        position: pos,
                        reason: "expected a t-letter run".to_string(),
                    })
                }
            };
            let mut count = 0i64;
            while pos < ls.len()
                && matches!(
                    (ls[pos], sign),
                    (HLetter::T, 1) | (HLetter::TInv, -1)
                )
            {
                count += 1;
                pos += 1;
            }
            exponents.push(sign * count);
            if pos < ls.len() {
                match ls[pos] {
                    HLetter::A(v) => {
                        a_letters.push(Some(v));
                        pos += 1;
                    }
                    _ => {
                        return Err(HnnError::MalformedSyllables {
                            position: pos,
                            reason: "opposite-sign t-letters with no A-letter between"
                                .to_string(),
                        })
                    }
                }
            } else {
                a_letters.push(None);
            }
        }
        let holds = |odd_positive: bool| -> bool {
            for (i, &n) in exponents.iter().enumerate() {
                let want_positive = (i % 2 == 0) == odd_positive;
                if (n > 0) != want_positive {
                    return false;
                }
            }
            for (i, a) in a_letters.iter().enumerate() {
                let Some(a) = a else { continue };
                // Odd syllables (1-indexed) avoid C under condition I and
                // phi(C) under condition II; even syllables the other way.
                let odd = i % 2 == 0;
                let banned_in_c = odd == odd_positive;
                if banned_in_c && self.in_c(*a) {
                    return false;
                }
                if !banned_in_c && self.in_phi_c(*a) {
                    return false;
                }
            }
            true
        };
        if holds(true) {
            Ok(ConditionClass::I)
        } else if holds(false) {
            Ok(ConditionClass::II)
        } else {
            Ok(ConditionClass::Neither)
        }
    }

    /// Generating set `{t, t^-1} u A \ {1}` as letters.
    pub fn generators(&self) -> Vec<HLetter> {
        let mut out = vec![HLetter::T, HLetter::TInv];
        for v in 1..self.a.order() as u32 {
            out.push(HLetter::A(v));
        }
        out
    }

    pub fn random_word(&self, rng: &mut impl Rng, len: usize) -> HWord {
        let gens = self.generators();
        let letters = (0..len)
            .map(|_| gens[rng.gen_range(0..gens.len())])
            .collect();
        HWord { letters }
    }

    /// A random reduced word of the requested length containing at least
    /// `min_t` t-letters; built letter by letter, rejecting extensions that
    /// break reducedness.
    pub fn random_reduced_word(&self, rng: &mut impl Rng, len: usize, min_t: usize) -> HWord {
        assert!(min_t <= len);
        loop {
            let mut letters: Vec<HLetter> = Vec::with_capacity(len);
            let gens = self.generators();
            for _ in 0..len {
                let mut candidates: Vec<HLetter> = gens
                    .iter()
                    .copied()
                    .filter(|&cand| {
                        letters.push(cand);
                        let tail_start = letters.len().saturating_sub(3);
                        let ok = self.is_reduced(&HWord {
                            letters: letters[tail_start..].to_vec(),
                        });
                        letters.pop();
                        ok
                    })
                    .collect();
                if candidates.is_empty() {
                    break;
                }
                // Nudge toward words that can still meet the t quota.
                let t_so_far = letters.iter().filter(|l| !matches!(l, HLetter::A(_))).count();
                let remaining = len - letters.len();
                if t_so_far + remaining <= min_t + 1 {
                    candidates.retain(|l| !matches!(l, HLetter::A(_)));
                }
                if candidates.is_empty() {
                    break;
                }
                letters.push(candidates[rng.gen_range(0..candidates.len())]);
            }
            let word = HWord { letters };
            if word.len() == len && word.t_count() >= min_t && self.is_reduced(&word) {
                return word;
            }
        }
    }

    /// `G^ab` on one generator per nonidentity element of `A` plus `t`, with
    /// the multiplication table of `A` and `c = phi(c)` as relations; `t`
    /// contributes a free factor.
    pub fn abelianization(&self) -> HnnAbelianization {
        let a_ord = self.a.order();
        let cols = (a_ord - 1) + 1;
        let t_col = cols - 1;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for x in 1..a_ord as u32 {
            for y in 1..a_ord as u32 {
                let mut row = vec![0i64; cols];
                row[x as usize - 1] += 1;
                row[y as usize - 1] += 1;
                let p = self.a.mul(x, y);
                if p != 0 {
                    row[p as usize - 1] -= 1;
                }
                rows.push(row);
            }
        }
        for ci in 1..self.c_group.order() as u32 {
            let c_elem = self.c_to_a[ci as usize];
            let img = self.phi.apply(ci);
            if c_elem == img {
                continue;
            }
            let mut row = vec![0i64; cols];
            row[c_elem as usize - 1] += 1;
            row[img as usize - 1] -= 1;
            rows.push(row);
        }
        let form = smith_normal_form(&rows, cols);
        HnnAbelianization {
            form,
            rows,
            cols,
            t_col,
        }
    }
}

/// Gauge orbit of an element: one member per assignment of a `C`-value to
/// each t-junction. Members are words equal to the base element with the
/// same t-pattern; non-reduced members are allowed (harmless for minima).
pub struct HGaugeOrbit<'a> {
    pres: &'a HnnPresentation,
    slots: Vec<u32>,
    signs: Vec<Sign>,
}

impl<'a> HGaugeOrbit<'a> {
    pub fn t_count(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn gauge_order(&self) -> usize {
        self.pres.c_group().order()
    }

    pub fn size(&self) -> u128 {
        (self.gauge_order() as u128)
            .checked_pow(self.t_count() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Slot `i` of the member with gauge `v_left` at junction `i` and
    /// `v_right` at junction `i+1` (ignored at the boundaries).
    pub fn slot_value(&self, i: usize, v_left: u32, v_right: u32) -> u32 {
        let k = self.signs.len();
        let mut v = self.slots[i];
        if i > 0 {
            v = self.pres.a.mul(self.pres.post_factor(self.signs[i - 1], v_left), v);
        }
        if i < k {
            v = self.pres.a.mul(v, self.pres.pre_factor(self.signs[i], v_right));
        }
        v
    }

    /// The member word for a full gauge assignment (one value per t-letter).
    pub fn member(&self, gauges: &[u32]) -> HWord {
        let k = self.signs.len();
        assert_eq!(gauges.len(), k);
        let mut letters = Vec::new();
        for i in 0..=k {
            let v_left = if i > 0 { gauges[i - 1] } else { 0 };
            let v_right = if i < k { gauges[i] } else { 0 };
            let slot = self.slot_value(i, v_left, v_right);
            if slot != 0 {
                letters.push(HLetter::A(slot));
            }
            if i < k {
                letters.push(match self.signs[i] {
                    Sign::Plus => HLetter::T,
                    Sign::Minus => HLetter::TInv,
                });
            }
        }
        HWord { letters }
    }

    /// All members, deduplicated and sorted; errors above `cap`.
    pub fn members(&self, cap: u128) -> Result<Vec<HWord>, HnnError> {
        let size = self.size();
        if size > cap {
            return Err(HnnError::OrbitTooLarge { size, cap });
        }
        let k = self.signs.len();
        let c_ord = self.gauge_order() as u32;
        let mut out = std::collections::BTreeSet::new();
        let mut gauges = vec![0u32; k];
        loop {
            out.insert(self.member(&gauges));
            let mut pos = 0;
            while pos < k {
                gauges[pos] += 1;
                if gauges[pos] < c_ord {
                    break;
                }
                gauges[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        Ok(out.into_iter().collect())
    }
}

/// `G^ab` with its quotient map; `t` maps to the distinguished free
/// coordinate.
pub struct HnnAbelianization {
    form: SmithForm,
    rows: Vec<Vec<i64>>,
    cols: usize,
    t_col: usize,
}

impl HnnAbelianization {
    pub fn invariants(&self) -> AbelianInvariants {
        self.form.invariants()
    }

    pub fn relation_rows(&self) -> (&[Vec<i64>], usize) {
        (&self.rows, self.cols)
    }

    fn letter_counts(&self, w: &HWord) -> Vec<i64> {
        let mut x = vec![0i64; self.cols];
        for l in w.letters() {
            match l {
                HLetter::A(v) => x[*v as usize - 1] += 1,
                HLetter::T => x[self.t_col] += 1,
                HLetter::TInv => x[self.t_col] -= 1,
            }
        }
        x
    }

    pub fn image(&self, w: &HWord) -> Vec<BigInt> {
        self.form.image(&self.letter_counts(w))
    }

    pub fn in_commutator(&self, w: &HWord) -> bool {
        self.form.is_zero_image(&self.letter_counts(w))
    }
}

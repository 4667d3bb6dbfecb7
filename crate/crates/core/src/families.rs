//! The standard word families and their symbolic calculus.
//!
//! For an amalgam with `|C \ A / C| >= 3` and `|B / C| >= 2`, the family
//! `w_i` alternates blocks `(a1 b)^p (a1^-1 b^-1)^p (a2 b)^p (a2^-1 b^-1)^p`
//! of sizes `p = 10^i` and `4 * 10^i`, giving `|w_i| = 40 * 10^i`. Ignoring
//! the `b` letters yields a symbol string over `{1, 1-bar, 2, 2-bar}`; since
//! `a2` is chosen outside `C a1 C`, a `1` can never face a `2` (nor a
//! `1-bar` a `2-bar`) in two reduced words with common endpoints, and the
//! covering checker refutes alignments using exactly that pair set.
//!
//! For an HNN extension the family is built from t-blocks with exponents
//! `p, p, 2p, 3p` and `g` outside `C`, `h` outside `phi(C)`; the analogous
//! symbol string is the t-pattern, and separation between indices comes
//! from maximal runs of equal signs.

use std::fmt;

use thiserror::Error;

use crate::amalgam::{ALetter, AWord, AmalgamError, AmalgamPresentation, Side};
use crate::group::{double_cosets, Subgroup};
use crate::hnn::{HLetter, HWord, HnnError, HnnPresentation, Sign, TPattern};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("need |C\\A/C| >= 3, got {count} double cosets")]
    DoubleCosetTooFew { count: usize },
    #[error("need |B/C| >= 2, got {count} cosets")]
    QuotientTooSmall { count: usize },
    #[error("need |A/C| >= 2, got {count} cosets")]
    BaseQuotientTooSmall { count: usize },
    #[error("need |A/phi(C)| >= 2, got {count} cosets")]
    PhiQuotientTooSmall { count: usize },
    #[error("a1 = {a1} lies in the embedded copy of C")]
    A1InEmbeddedC { a1: u32 },
    #[error("a2 = {a2} lies in the embedded copy of C")]
    A2InEmbeddedC { a2: u32 },
    #[error("b = {b} lies in the embedded copy of C")]
    BInEmbeddedC { b: u32 },
    #[error("a2 lies in C a1 C: iota_A({c1}) * a1 * iota_A({c2}) = a2")]
    A2InDoubleCosetOfA1 { c1: u32, c2: u32 },
    #[error("g = {g} lies in C")]
    GInC { g: u32 },
    #[error("h = {h} lies in phi(C)")]
    HInPhiC { h: u32 },
    #[error("family index {i} exceeds the configured maximum {max}")]
    IndexTooLarge { i: u32, max: u32 },
    #[error("family word would have {len} letters, above the cap {cap}")]
    WordTooLong { len: u64, cap: u64 },
    #[error("probe pattern ({probe} symbols) is longer than the text ({text})")]
    ProbeLongerThanText { text: usize, probe: usize },
    #[error(
        "letter classes a1, a1^-1, a2, a2^-1 are not pairwise distinct in this \
         instance; classify family words by construction instead"
    )]
    AmbiguousAlphabet,
    #[error("letter at position {position} is outside the family alphabet")]
    LetterOutsideAlphabet { position: usize },
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Hnn(#[from] HnnError),
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// Absolute guard on generated family word lengths.
pub const MAX_FAMILY_WORD_LEN: u64 = 2_000_000;

/// Symbol classes of the amalgam family's `a`-letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilySymbol {
    One,
    OneBar,
    Two,
    TwoBar,
}

impl FamilySymbol {
    pub fn bar(self) -> FamilySymbol {
        match self {
            FamilySymbol::One => FamilySymbol::OneBar,
            FamilySymbol::OneBar => FamilySymbol::One,
            FamilySymbol::Two => FamilySymbol::TwoBar,
            FamilySymbol::TwoBar => FamilySymbol::Two,
        }
    }

    /// CLI rendering: `1 ! 2 @` for `1, 1-bar, 2, 2-bar`.
    pub fn render(self) -> char {
        match self {
            FamilySymbol::One => '1',
            FamilySymbol::OneBar => '!',
            FamilySymbol::Two => '2',
            FamilySymbol::TwoBar => '@',
        }
    }

    pub fn parse(ch: char) -> Option<FamilySymbol> {
        match ch {
            '1' => Some(FamilySymbol::One),
            '!' => Some(FamilySymbol::OneBar),
            '2' => Some(FamilySymbol::Two),
            '@' => Some(FamilySymbol::TwoBar),
            _ => None,
        }
    }
}

/// The pairs excluded by `a2` not lying in `C a1 C` (and the inverse form);
/// only these refute an alignment.
pub fn illegal_pair(text: FamilySymbol, probe: FamilySymbol) -> bool {
    use FamilySymbol::*;
    matches!(
        (text, probe),
        (One, Two) | (Two, One) | (OneBar, TwoBar) | (TwoBar, OneBar)
    )
}

/// A string over the amalgam symbol alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolPattern {
    syms: Vec<FamilySymbol>,
}

impl SymbolPattern {
    pub fn new(syms: Vec<FamilySymbol>) -> Self {
        SymbolPattern { syms }
    }

    pub fn symbols(&self) -> &[FamilySymbol] {
        &self.syms
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn pow(&self, n: usize) -> SymbolPattern {
        let mut syms = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            syms.extend_from_slice(&self.syms);
        }
        SymbolPattern { syms }
    }

    /// Pattern of the inverse word: reversed with bars swapped.
    pub fn inverse(&self) -> SymbolPattern {
        SymbolPattern {
            syms: self.syms.iter().rev().map(|s| s.bar()).collect(),
        }
    }

    pub fn render(&self) -> String {
        self.syms.iter().map(|s| s.render()).collect()
    }

    pub fn parse(text: &str) -> Option<SymbolPattern> {
        let mut syms = Vec::new();
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            syms.push(FamilySymbol::parse(ch)?);
        }
        Some(SymbolPattern { syms })
    }

    /// The symbol string `W_i` of the family word of index `i`, by
    /// construction: blocks `1^p 1b^p 2^p 2b^p 1^{4p} 1b^{4p} 2^{4p} 2b^{4p}`
    /// with `p = 10^i`.
    pub fn family(i: u32) -> SymbolPattern {
        let p = 10usize.pow(i);
        let mut syms = Vec::with_capacity(20 * p);
        use FamilySymbol::*;
        for (sym, reps) in [
            (One, p),
            (OneBar, p),
            (Two, p),
            (TwoBar, p),
            (One, 4 * p),
            (OneBar, 4 * p),
            (Two, 4 * p),
            (TwoBar, 4 * p),
        ] {
            syms.extend(std::iter::repeat_n(sym, reps));
        }
        SymbolPattern { syms }
    }
}

impl fmt::Display for SymbolPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A single refuted alignment: the first aligned position holding an
/// illegal facing pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refutation {
    pub position: usize,
    pub text_sym: FamilySymbol,
    pub probe_sym: FamilySymbol,
}

/// Per-offset verdicts for sliding `probe` along `text`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub text_len: usize,
    pub probe_len: usize,
    pub verdicts: Vec<(usize, Option<Refutation>)>,
}

impl CoverReport {
    /// True when every offset is refuted, i.e. the probe cannot be covered.
    pub fn cannot_cover(&self) -> bool {
        self.verdicts.iter().all(|(_, r)| r.is_some())
    }

    pub fn offsets(&self) -> usize {
        self.verdicts.len()
    }

    pub fn refuted_count(&self) -> usize {
        self.verdicts.iter().filter(|(_, r)| r.is_some()).count()
    }

    /// CSV rows `offset,refuting_index,text_sym,probe_sym` (empty fields for
    /// offsets that were not refuted).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("offset,refuting_index,text_sym,probe_sym\n");
        for (offset, refutation) in &self.verdicts {
            match refutation {
                Some(r) => out.push_str(&format!(
                    "{offset},{},{},{}\n",
                    r.position,
                    r.text_sym.render(),
                    r.probe_sym.render()
                )),
                None => out.push_str(&format!("{offset},,,\n")),
            }
        }
        out
    }
}

/// Slides `probe` over `text` and, at every offset, looks for an aligned
/// illegal pair; the overall verdict is "cannot cover" iff all offsets are
/// refuted.
pub fn cover_refute(text: &SymbolPattern, probe: &SymbolPattern) -> Result<CoverReport, FamilyError> {
    if probe.len() > text.len() {
        return Err(FamilyError::ProbeLongerThanText {
            text: text.len(),
            probe: probe.len(),
        });
    }
    let mut verdicts = Vec::with_capacity(text.len() - probe.len() + 1);
    for offset in 0..=text.len() - probe.len() {
        let mut refutation = None;
        for (j, &ps) in probe.symbols().iter().enumerate() {
            let ts = text.symbols()[offset + j];
            if illegal_pair(ts, ps) {
                refutation = Some(Refutation {
                    position: j,
                    text_sym: ts,
                    probe_sym: ps,
                });
                break;
            }
        }
        verdicts.push((offset, refutation));
    }
    Ok(CoverReport {
        text_len: text.len(),
        probe_len: probe.len(),
        verdicts,
    })
}

/// Longest run of identical symbols in a t-pattern.
pub fn consecutive_run_bound(pattern: &TPattern) -> usize {
    pattern.max_run()
}

/// Validated parameters for the amalgam family: `a1, a2` in distinct
/// nontrivial `C`-double-cosets of `A`, `b` outside the embedded `C` in `B`.
pub struct AmalgamFamily<'a> {
    pres: &'a AmalgamPresentation,
    a1: u32,
    a2: u32,
    b: u32,
    max_index: u32,
}

impl<'a> AmalgamFamily<'a> {
    pub fn new(
        pres: &'a AmalgamPresentation,
        a1: u32,
        a2: u32,
        b: u32,
        max_index: u32,
    ) -> Result<Self, FamilyError> {
        let a = pres.factor(Side::A);
        let bg = pres.factor(Side::B);
        a.check_index(a1)?;
        a.check_index(a2)?;
        bg.check_index(b)?;
        let ca = Subgroup::from_elements(a, &pres.embedding(Side::A).image_elements())
            .expect("embedded image is a subgroup");
        let cb_count = bg.order() / pres.c_group().order();
        if cb_count < 2 {
            return Err(FamilyError::QuotientTooSmall { count: cb_count });
        }
        let dc = double_cosets(a, &ca, &ca);
        if dc.count() < 3 {
            return Err(FamilyError::DoubleCosetTooFew { count: dc.count() });
        }
        if pres.in_ca(a1) {
            return Err(FamilyError::A1InEmbeddedC { a1 });
        }
        if pres.in_ca(a2) {
            return Err(FamilyError::A2InEmbeddedC { a2 });
        }
        if pres.in_cb(b) {
            return Err(FamilyError::BInEmbeddedC { b });
        }
        for c1 in 0..pres.c_group().order() as u32 {
            for c2 in 0..pres.c_group().order() as u32 {
                let e = pres.embedding(Side::A);
                if a.mul(a.mul(e.apply(c1), a1), e.apply(c2)) == a2 {
                    return Err(FamilyError::A2InDoubleCosetOfA1 { c1, c2 });
                }
            }
        }
        Ok(AmalgamFamily {
            pres,
            a1,
            a2,
            b,
            max_index,
        })
    }

    pub fn presentation(&self) -> &AmalgamPresentation {
        self.pres
    }

    pub fn params(&self) -> (u32, u32, u32) {
        (self.a1, self.a2, self.b)
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    fn check_index_cap(&self, i: u32) -> Result<usize, FamilyError> {
        if i > self.max_index {
            return Err(FamilyError::IndexTooLarge {
                i,
                max: self.max_index,
            });
        }
        let p = 10u64.pow(i);
        let len = 40 * p;
        if len > MAX_FAMILY_WORD_LEN {
            return Err(FamilyError::WordTooLong {
                len,
                cap: MAX_FAMILY_WORD_LEN,
            });
        }
        Ok(p as usize)
    }

    fn a_value(&self, which: u8, inverse: bool) -> u32 {
        let a = self.pres.factor(Side::A);
        let base = if which == 1 { self.a1 } else { self.a2 };
        if inverse {
            a.inv(base)
        } else {
            base
        }
    }

    /// `(a_which^{sign} b^{sign})^reps` as letters.
    fn block(&self, which: u8, inverse: bool, reps: usize) -> Vec<ALetter> {
        let bg = self.pres.factor(Side::B);
        let a_val = self.a_value(which, inverse);
        let b_val = if inverse { bg.inv(self.b) } else { self.b };
        let mut out = Vec::with_capacity(2 * reps);
        for _ in 0..reps {
            out.push(ALetter {
                side: Side::A,
                value: a_val,
            });
            out.push(ALetter {
                side: Side::B,
                value: b_val,
            });
        }
        out
    }

    /// The family word `w_i`, of length `40 * 10^i`.
    pub fn word(&self, i: u32) -> Result<AWord, FamilyError> {
        let p = self.check_index_cap(i)?;
        let mut letters = Vec::with_capacity(40 * p);
        for (which, inverse, reps) in [
            (1u8, false, p),
            (1, true, p),
            (2, false, p),
            (2, true, p),
            (1, false, 4 * p),
            (1, true, 4 * p),
            (2, false, 4 * p),
            (2, true, 4 * p),
        ] {
            letters.extend(self.block(which, inverse, reps));
        }
        Ok(AWord::from_letters(letters))
    }

    /// The subword `w_i(which, +) = (a_which b)^{4 * 10^i}` (or its inverse
    /// block for `-`), of length `8 * 10^i`.
    pub fn sub_word(&self, i: u32, which: u8, plus: bool) -> Result<AWord, FamilyError> {
        let p = self.check_index_cap(i)?;
        Ok(AWord::from_letters(self.block(which, !plus, 4 * p)))
    }

    /// Classifies the `a`-letters of a word built from the family alphabet,
    /// ignoring the `b`-letters. Errors when the four `a`-classes are not
    /// pairwise distinct values in this instance (then only the
    /// constructional [`SymbolPattern::family`] is meaningful).
    pub fn classify(&self, w: &AWord) -> Result<SymbolPattern, FamilyError> {
        let a = self.pres.factor(Side::A);
        let bg = self.pres.factor(Side::B);
        let classes = [
            (self.a1, FamilySymbol::One),
            (a.inv(self.a1), FamilySymbol::OneBar),
            (self.a2, FamilySymbol::Two),
            (a.inv(self.a2), FamilySymbol::TwoBar),
        ];
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                if classes[i].0 == classes[j].0 {
                    return Err(FamilyError::AmbiguousAlphabet);
                }
            }
        }
        let b_vals = [self.b, bg.inv(self.b)];
        let mut syms = Vec::new();
        for (position, l) in w.letters().iter().enumerate() {
            match l.side {
                Side::A => {
                    match classes.iter().find(|(v, _)| *v == l.value) {
                        Some((_, sym)) => syms.push(*sym),
                        None => return Err(FamilyError::LetterOutsideAlphabet { position }),
                    }
                }
                Side::B => {
                    if !b_vals.contains(&l.value) {
                        return Err(FamilyError::LetterOutsideAlphabet { position });
                    }
                }
            }
        }
        Ok(SymbolPattern { syms })
    }

    /// The commutator identity for `w_i`: each block pair satisfies
    /// `(x b)^p (x^-1 b^-1)^p = [(x b)^p, x^-1]`, so `w_i` is the product of
    /// four such commutators. Checks the identity with exact equality and
    /// that the abelianized image vanishes.
    pub fn commutator_certificate(&self, i: u32) -> Result<bool, FamilyError> {
        let p = self.check_index_cap(i)?;
        let wi = self.word(i)?;
        let mut cert = AWord::empty();
        for (which, reps) in [(1u8, p), (2, p), (1, 4 * p), (2, 4 * p)] {
            let xb = AWord::from_letters(self.block(which, false, reps));
            let x_inv = AWord::from_letters(vec![ALetter {
                side: Side::A,
                value: self.a_value(which, true),
            }]);
            cert = cert.concat(&commutator(self.pres, &xb, &x_inv));
        }
        let ab = self.pres.abelianization();
        Ok(self.pres.equals(&wi, &cert) && ab.in_commutator(&wi))
    }
}

fn commutator(p: &AmalgamPresentation, x: &AWord, y: &AWord) -> AWord {
    x.concat(y)
        .concat(&p.inverse_word(x))
        .concat(&p.inverse_word(y))
}

/// Validated parameters for the HNN family: `g` outside `C`, `h` outside
/// `phi(C)`, with both quotients of size at least 2.
pub struct HnnFamily<'a> {
    pres: &'a HnnPresentation,
    g: u32,
    h: u32,
    max_index: u32,
}

impl<'a> HnnFamily<'a> {
    pub fn new(
        pres: &'a HnnPresentation,
        g: u32,
        h: u32,
        max_index: u32,
    ) -> Result<Self, FamilyError> {
        let a = pres.base_group();
        a.check_index(g)?;
        a.check_index(h)?;
        let c_count = a.order() / pres.c_group().order();
        if c_count < 2 {
            return Err(FamilyError::BaseQuotientTooSmall { count: c_count });
        }
        // |phi(C)| = |C|, so the same coset count applies.
        if c_count < 2 {
            return Err(FamilyError::PhiQuotientTooSmall { count: c_count });
        }
        if pres.in_c(g) {
            return Err(FamilyError::GInC { g });
        }
        if pres.in_phi_c(h) {
            return Err(FamilyError::HInPhiC { h });
        }
        Ok(HnnFamily {
            pres,
            g,
            h,
            max_index,
        })
    }

    pub fn presentation(&self) -> &HnnPresentation {
        self.pres
    }

    pub fn params(&self) -> (u32, u32) {
        (self.g, self.h)
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    fn check_index_cap(&self, i: u32) -> Result<usize, FamilyError> {
        if i > self.max_index {
            return Err(FamilyError::IndexTooLarge {
                i,
                max: self.max_index,
            });
        }
        let p = 10u64.pow(i);
        let len = 14 * p + 8;
        if len > MAX_FAMILY_WORD_LEN {
            return Err(FamilyError::WordTooLong {
                len,
                cap: MAX_FAMILY_WORD_LEN,
            });
        }
        Ok(p as usize)
    }

    /// The family word
    /// `w_i = t^p g t^-p h t^p g^-1 t^-p h^-1 t^2p g t^-2p h t^3p g^-1 t^-3p h^-1`
    /// with `p = 10^i`; `14 * 10^i` t-letters plus 8 A-letters.
    pub fn word(&self, i: u32) -> Result<HWord, FamilyError> {
        let p = self.check_index_cap(i)?;
        let a = self.pres.base_group();
        let g = self.g;
        let gi = a.inv(self.g);
        let h = self.h;
        let hi = a.inv(self.h);
        let mut letters = Vec::with_capacity(14 * p + 8);
        let t_run = |letters: &mut Vec<HLetter>, sign: Sign, count: usize| {
            let l = match sign {
                Sign::Plus => HLetter::T,
                Sign::Minus => HLetter::TInv,
            };
            letters.extend(std::iter::repeat_n(l, count));
        };
        for (sign, count, a_val) in [
            (Sign::Plus, p, g),
            (Sign::Minus, p, h),
            (Sign::Plus, p, gi),
            (Sign::Minus, p, hi),
            (Sign::Plus, 2 * p, g),
            (Sign::Minus, 2 * p, h),
            (Sign::Plus, 3 * p, gi),
            (Sign::Minus, 3 * p, hi),
        ] {
            t_run(&mut letters, sign, count);
            letters.push(HLetter::A(a_val));
        }
        Ok(HWord::from_letters(letters))
    }

    /// The t-pattern `W_i`, by construction.
    pub fn t_pattern_of_index(i: u32) -> TPattern {
        let p = 10usize.pow(i);
        let mut signs = Vec::with_capacity(14 * p);
        for (sign, count) in [
            (Sign::Plus, p),
            (Sign::Minus, p),
            (Sign::Plus, p),
            (Sign::Minus, p),
            (Sign::Plus, 2 * p),
            (Sign::Minus, 2 * p),
            (Sign::Plus, 3 * p),
            (Sign::Minus, 3 * p),
        ] {
            signs.extend(std::iter::repeat_n(sign, count));
        }
        TPattern::new(signs)
    }

    /// Separation between family indices: `W_j` has a run of `3 * 10^j`
    /// equal signs while `W_i^n` never exceeds `3 * 10^i` (runs do not merge
    /// across the seam), so `W_j` cannot occur inside `W_i^n`.
    pub fn separation_check(i: u32, j: u32, max_n: usize) -> bool {
        assert!(i < j);
        let wj_run = HnnFamily::t_pattern_of_index(j).max_run();
        if wj_run != 3 * 10usize.pow(j) {
            return false;
        }
        let wi = HnnFamily::t_pattern_of_index(i);
        for n in 1..=max_n {
            let run = wi.pow(n).max_run();
            if run != 3 * 10usize.pow(i) || run >= wj_run {
                return false;
            }
        }
        true
    }

    /// The commutator identity
    /// `w_i = [T,g][gh,[T,g^-1]][T,g^-1][g,h][T^2,g][gh,[T^3,g^-1]][T^3,g^-1][g,h]`
    /// with `T = t^{10^i}`, checked by exact equality plus a vanishing
    /// abelianized image.
    pub fn commutator_certificate(&self, i: u32) -> Result<bool, FamilyError> {
        let p = self.check_index_cap(i)?;
        let wi = self.word(i)?;
        let a = self.pres.base_group();
        let t1 = HWord::from_letters(vec![HLetter::T]).pow(p);
        let t2 = t1.pow(2);
        let t3 = t1.pow(3);
        let g = HWord::from_letters(vec![HLetter::A(self.g)]);
        let gi = HWord::from_letters(vec![HLetter::A(a.inv(self.g))]);
        let h = HWord::from_letters(vec![HLetter::A(self.h)]);
        let gh = g.concat(&h);
        let com = |x: &HWord, y: &HWord| -> HWord {
            x.concat(y)
                .concat(&self.pres.inverse_word(x))
                .concat(&self.pres.inverse_word(y))
        };
        let cert = com(&t1, &g)
            .concat(&com(&gh, &com(&t1, &gi)))
            .concat(&com(&t1, &gi))
            .concat(&com(&g, &h))
            .concat(&com(&t2, &g))
            .concat(&com(&gh, &com(&t3, &gi)))
            .concat(&com(&t3, &gi))
            .concat(&com(&g, &h));
        let ab = self.pres.abelianization();
        Ok(self.pres.equals(&wi, &cert) && ab.in_commutator(&wi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, check_embedding, GroupSpec};

    fn psl2z() -> AmalgamPresentation {
        let a = build_group(&GroupSpec::Cyclic(3)).unwrap();
        let b = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let c = build_group(&GroupSpec::Cyclic(1)).unwrap();
        let ia = check_embedding(&c, &a, &[0]).unwrap();
        let ib = check_embedding(&c, &b, &[0]).unwrap();
        AmalgamPresentation::new(a, b, c, ia, ib).unwrap()
    }

    fn sl2z() -> AmalgamPresentation {
        let a = build_group(&GroupSpec::Cyclic(6)).unwrap();
        let b = build_group(&GroupSpec::Cyclic(4)).unwrap();
        let c = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let ia = check_embedding(&c, &a, &[0, 3]).unwrap();
        let ib = check_embedding(&c, &b, &[0, 2]).unwrap();
        AmalgamPresentation::new(a, b, c, ia, ib).unwrap()
    }

    fn z4_amalg_z6() -> AmalgamPresentation {
        // A = Z4 fails |C\A/C| >= 3.
        let a = build_group(&GroupSpec::Cyclic(4)).unwrap();
        let b = build_group(&GroupSpec::Cyclic(6)).unwrap();
        let c = build_group(&GroupSpec::Cyclic(2)).unwrap();
        let ia = check_embedding(&c, &a, &[0, 2]).unwrap();
        let ib = check_embedding(&c, &b, &[0, 3]).unwrap();
        AmalgamPresentation::new(a, b, c, ia, ib).unwrap()
    }

    fn klein_hnn() -> HnnPresentation {
        let a = build_group(&GroupSpec::Product(vec![
            GroupSpec::Cyclic(2),
            GroupSpec::Cyclic(2),
        ]))
        .unwrap();
        HnnPresentation::new(a, &[0, 1], &[(1, 2)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p = sl2z();
        assert!(AmalgamFamily::new(&p, 1, 2, 1, 2).is_ok());
        let p = z4_amalg_z6();
        assert!(matches!(
            AmalgamFamily::new(&p, 1, 3, 1, 2),
            Err(FamilyError::DoubleCosetTooFew { count: 2 })
        ));
        let p = psl2z();
        assert!(AmalgamFamily::new(&p, 1, 2, 1, 2).is_ok());
        // a2 in C a1 C reports a witness pair.
        let p = sl2z();
        assert!(matches!(
            AmalgamFamily::new(&p, 1, 4, 1, 2),
            Err(FamilyError::A2InDoubleCosetOfA1 { .. })
        ));
    }

    #[test]
    fn family_word_lengths() {
        let p = sl2z();
        let fam = AmalgamFamily::new(&p, 1, 2, 1, 2).unwrap();
        assert_eq!(fam.word(0).unwrap().len(), 40);
        assert_eq!(fam.word(1).unwrap().len(), 400);
        assert_eq!(fam.sub_word(1, 1, true).unwrap().len(), 80);
        assert_eq!(fam.sub_word(0, 1, false).unwrap().len(), 8);
        assert!(matches!(
            fam.word(3),
            Err(FamilyError::IndexTooLarge { i: 3, max: 2 })
        ));
    }

    #[test]
    fn family_words_have_reduced_powers() {
        for pres in [psl2z(), sl2z()] {
            let fam = AmalgamFamily::new(&pres, 1, 2, 1, 1).unwrap();
            for i in 0..=1u32 {
                let w = fam.word(i).unwrap();
                for n in 1..=3usize {
                    assert!(pres.is_reduced(&w.pow(n)), "w_{i}^{n} must be reduced");
                }
                assert_eq!(pres.geodesic_length(&pres.element(&w)), w.len());
            }
        }
    }

    #[test]
    fn symbol_patterns_match_construction() {
        let p = sl2z();
        let fam = AmalgamFamily::new(&p, 1, 2, 1, 2).unwrap();
        let w0 = fam.word(0).unwrap();
        let classified = fam.classify(&w0).unwrap();
        assert_eq!(classified, SymbolPattern::family(0));
        assert_eq!(classified.len(), 20);
        assert_eq!(classified.render(), "1!2@1111!!!!2222@@@@");
        // Inverse pattern: reversed with bars swapped.
        let w0_inv = p.inverse_word(&w0);
        assert_eq!(fam.classify(&w0_inv).unwrap(), classified.inverse());
        assert_eq!(classified.inverse().render(), "2222@@@@1111!!!!2@1!");
        // Powers concatenate.
        assert_eq!(fam.classify(&w0.pow(3)).unwrap(), classified.pow(3));
        // Empty word, empty pattern.
        assert!(fam.classify(&AWord::empty()).unwrap().is_empty());
        // Outside the alphabet.
        let stray = p.parse_word("A:3").unwrap();
        assert!(matches!(
            fam.classify(&stray),
            Err(FamilyError::LetterOutsideAlphabet { position: 0 })
        ));
    }

    #[test]
    fn classification_is_ambiguous_when_classes_collide() {
        // In Z3, a1 = 1 has a1^-1 = 2 = a2; classification must refuse.
        let p = psl2z();
        let fam = AmalgamFamily::new(&p, 1, 2, 1, 1).unwrap();
        let w0 = fam.word(0).unwrap();
        assert!(matches!(
            fam.classify(&w0),
            Err(FamilyError::AmbiguousAlphabet)
        ));
    }

    #[test]
    fn cover_refutation_family_checks() {
        let w0 = SymbolPattern::family(0);
        let report = cover_refute(&w0.pow(2), &w0.inverse()).unwrap();
        assert_eq!(report.offsets(), 21);
        assert!(report.cannot_cover());
        // Identical strings: offset 0 cannot be refuted.
        let report = cover_refute(&w0, &w0).unwrap();
        assert!(report.verdicts[0].1.is_none());
        assert!(!report.cannot_cover());
        // Probe longer than text errors.
        assert!(matches!(
            cover_refute(&w0, &w0.pow(2)),
            Err(FamilyError::ProbeLongerThanText { .. })
        ));
    }

    #[test]
    fn hnn_family_examples() {
        let p = klein_hnn();
        let fam = HnnFamily::new(&p, 2, 1, 2).unwrap();
        let w0 = fam.word(0).unwrap();
        assert_eq!(w0.len(), 22);
        assert_eq!(w0.t_count(), 14);
        // Condition I holds for the powers, so they are geodesics.
        for n in 1..=3usize {
            let wn = w0.pow(n);
            assert_eq!(
                p.check_condition(&wn).unwrap(),
                crate::hnn::ConditionClass::I
            );
            assert_eq!(p.geodesic_length(&p.element(&wn)), wn.len());
        }
        assert_eq!(
            HnnPresentation::t_pattern(&w0).render(),
            "+-+-++--+++---"
        );
        assert_eq!(
            HnnFamily::t_pattern_of_index(0),
            HnnPresentation::t_pattern(&w0)
        );
        // Bad parameters.
        assert!(matches!(
            HnnFamily::new(&p, 1, 1, 2),
            Err(FamilyError::GInC { g: 1 })
        ));
        assert!(matches!(
            HnnFamily::new(&p, 2, 2, 2),
            Err(FamilyError::HInPhiC { h: 2 })
        ));
    }

    #[test]
    fn hnn_run_bounds() {
        assert_eq!(HnnFamily::t_pattern_of_index(0).max_run(), 3);
        assert_eq!(HnnFamily::t_pattern_of_index(1).max_run(), 30);
        assert_eq!(HnnFamily::t_pattern_of_index(0).pow(3).max_run(), 3);
        assert!(HnnFamily::separation_check(0, 1, 4));
        assert!(HnnFamily::separation_check(0, 2, 2));
        assert!(HnnFamily::separation_check(1, 2, 2));
    }

    #[test]
    fn commutator_certificates() {
        let p = klein_hnn();
        let fam = HnnFamily::new(&p, 2, 1, 1).unwrap();
        assert!(fam.commutator_certificate(0).unwrap());
        assert!(fam.commutator_certificate(1).unwrap());
        let q = psl2z();
        let fam = AmalgamFamily::new(&q, 1, 2, 1, 1).unwrap();
        assert!(fam.commutator_certificate(0).unwrap());
        let r = sl2z();
        let fam = AmalgamFamily::new(&r, 1, 2, 1, 1).unwrap();
        assert!(fam.commutator_certificate(0).unwrap());
        // A single letter is not in [G, G].
        let ab = r.abelianization();
        assert!(!ab.in_commutator(&r.parse_word("A:1").unwrap()));
    }
}

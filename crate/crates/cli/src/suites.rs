//! The verification suites: one strategy per lemma or proposition,
//! registered by name and selected at runtime via `--suite`.
//!
//! Each suite turns the corresponding statement into finitely many checks at
//! the instance's configured caps and reports per-check records with
//! witnesses on failure. Sampled suites derive their RNG stream from the
//! instance seed and the suite name, so reports are reproducible.

use cqm_core::qm::{ball, GroupModel, OracleIndex, Pattern};
use cqm_core::{
    c_w, c_w_inv, cover_refute, defect_scan, h_w, AWord, AmalgamPresentation, ConditionClass,
    HLetter, HWord, HnnFamily, HnnPresentation, ScanStrategy, SymbolPattern, DEFECT_BOUND,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Kind;
use crate::instance::{AmalgamInstance, HnnInstance, Instance};
use crate::report::CheckRecord;

pub trait Suite {
    fn name(&self) -> &'static str;
    fn anchor(&self) -> &'static str;
    fn supports(&self, kind: Kind) -> bool;
    fn run(&self, inst: &Instance) -> Vec<CheckRecord>;
}

pub fn registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(Lemma31),
        Box::new(Lemma33),
        Box::new(Lemma34),
        Box::new(Lemma35),
        Box::new(Lemma36),
        Box::new(Lemma37),
        Box::new(Prop1),
        Box::new(Lemma41),
        Box::new(Lemma42),
        Box::new(Lemma43),
        Box::new(Prop2),
        Box::new(Lemma61),
        Box::new(Lemma62),
        Box::new(Lemma63),
        Box::new(Lemma65),
        Box::new(Lemma66),
        Box::new(Prop3),
        Box::new(Lemma71),
        Box::new(Lemma72),
        Box::new(Prop4),
        Box::new(OrbitsSuite),
        Box::new(OracleSuite),
        Box::new(AbelianSuite),
    ]
}

fn derive_seed(base: u64, name: &str) -> u64 {
    // FNV-1a over the suite name, mixed with the base seed.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^ base
}

fn all_words<M: GroupModel>(model: &M, max_len: usize) -> Vec<Vec<M::Letter>> {
    let gens = model.generators();
    let mut out: Vec<Vec<M::Letter>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<M::Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * gens.len());
        for w in &frontier {
            for &g in &gens {
                let mut w2 = w.clone();
                w2.push(g);
                out.push(w2.clone());
                next.push(w2);
            }
        }
        frontier = next;
    }
    out
}

fn admissible_patterns<M: GroupModel>(model: &M, lengths: &[usize]) -> Vec<Vec<M::Letter>> {
    let gens = model.generators();
    let max = lengths.iter().copied().max().unwrap_or(0);
    let mut frontier: Vec<Vec<M::Letter>> = vec![Vec::new()];
    let mut out = Vec::new();
    for len in 1..=max {
        let mut next = Vec::new();
        for w in &frontier {
            for &g in &gens {
                let mut w2 = w.clone();
                w2.push(g);
                next.push(w2);
            }
        }
        if lengths.contains(&len) {
            for w in &next {
                let mut square = w.clone();
                square.extend_from_slice(w);
                if model.is_reduced_word(&square) {
                    out.push(w.clone());
                }
            }
        }
        frontier = next;
    }
    out
}

fn fail_record(id: &str, anchor: &str, instance: &str, err: impl std::fmt::Display) -> CheckRecord {
    CheckRecord::new(id, anchor, instance, "", "suite runs", "error", false)
        .with_witness(err.to_string())
}

/// Integer-valued check; failures carry the word that witnessed them.
#[allow(clippy::too_many_arguments)]
fn value_record(
    id: &str,
    anchor: &str,
    instance: &str,
    params: String,
    expected: i64,
    actual: i64,
    witness: String,
) -> CheckRecord {
    let rec = CheckRecord::new(
        id,
        anchor,
        instance,
        params,
        format!("{expected}"),
        format!("{actual}"),
        expected == actual,
    );
    if expected != actual {
        rec.with_witness(witness)
    } else {
        rec
    }
}

fn family_pattern(
    inst: &AmalgamInstance,
    i: u32,
) -> Result<(AWord, Pattern<AmalgamPresentation>), String> {
    let fam = inst.family().map_err(|e| e.to_string())?;
    let w = fam.word(i).map_err(|e| e.to_string())?;
    let pat = Pattern::new(&inst.pres, w.letters().to_vec()).map_err(|e| e.to_string())?;
    Ok((w, pat))
}

fn hnn_family_pattern(
    inst: &HnnInstance,
    i: u32,
) -> Result<(HWord, Pattern<HnnPresentation>), String> {
    let fam = inst.family().map_err(|e| e.to_string())?;
    let w = fam.word(i).map_err(|e| e.to_string())?;
    let pat = Pattern::new(&inst.pres, w.letters().to_vec()).map_err(|e| e.to_string())?;
    Ok((w, pat))
}

/// Sampled Lipschitz checks `|c_w(x) - c_w(y)| <= 2 d(x,y)` and the `4 d`
/// version for `h_w`.
#[allow(clippy::too_many_arguments)]
fn lipschitz_records<M: GroupModel>(
    model: &M,
    pat: &Pattern<M>,
    suite: &str,
    anchor: &str,
    instance: &str,
    check_h: bool,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, suite));
    let mut worst: i64 = i64::MIN;
    let mut witness = None;
    for _ in 0..samples {
        let lx = rng.gen_range(0..=max_len);
        let x = model.element_of(&model.random_word(&mut rng, lx));
        let ly = rng.gen_range(0..=max_len);
        let y = model.element_of(&model.random_word(&mut rng, ly));
        let d = model.elem_len(&model.mul(&model.inverse(&x), &y)) as i64;
        let (gap, bound) = if check_h {
            ((h_w(model, &x, pat) - h_w(model, &y, pat)).abs(), 4 * d)
        } else {
            ((c_w(model, &x, pat) - c_w(model, &y, pat)).abs(), 2 * d)
        };
        if gap - bound > worst {
            worst = gap - bound;
            if gap > bound {
                witness = Some(format!("x={x:?} y={y:?} gap={gap} bound={bound}"));
            }
        }
    }
    let factor = if check_h { 4 } else { 2 };
    let func = if check_h { "h_w" } else { "c_w" };
    let mut rec = CheckRecord::new(
        format!("{suite}.lipschitz"),
        anchor,
        instance,
        format!("samples={samples},max_len={max_len}"),
        format!("|{func}(x)-{func}(y)| <= {factor}*d(x,y)"),
        format!("max slack {worst}"),
        worst <= 0,
    );
    if let Some(w) = witness {
        rec = rec.with_witness(w);
    }
    rec
}

/// Sampled inversion symmetry `c_w(g) = c_{w^-1}(g^-1)` or antisymmetry of
/// `h_w`.
#[allow(clippy::too_many_arguments)]
fn inversion_records<M: GroupModel>(
    model: &M,
    pat: &Pattern<M>,
    suite: &str,
    anchor: &str,
    instance: &str,
    check_h: bool,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, suite));
    let mut ok = 0usize;
    let mut witness = None;
    for _ in 0..samples {
        let len = rng.gen_range(0..=max_len);
        let g = model.element_of(&model.random_word(&mut rng, len));
        let gi = model.inverse(&g);
        let holds = if check_h {
            h_w(model, &g, pat) == -h_w(model, &gi, pat)
        } else {
            c_w(model, &g, pat) == c_w_inv(model, &gi, pat)
        };
        if holds {
            ok += 1;
        } else if witness.is_none() {
            witness = Some(format!("g={g:?}"));
        }
    }
    let expected = if check_h {
        "h_w(g) = -h_w(g^-1)"
    } else {
        "c_w(g) = c_{w^-1}(g^-1)"
    };
    let mut rec = CheckRecord::new(
        format!("{suite}.inversion"),
        anchor,
        instance,
        format!("samples={samples},max_len={max_len}"),
        expected,
        format!("{ok}/{samples} hold"),
        ok == samples,
    );
    if let Some(w) = witness {
        rec = rec.with_witness(w);
    }
    rec
}

#[allow(clippy::too_many_arguments)]
fn defect_records<M: GroupModel>(
    model: &M,
    pat: &Pattern<M>,
    suite: &str,
    anchor: &str,
    instance: &str,
    radius: usize,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let ex = defect_scan(model, pat, ScanStrategy::Exhaustive { radius }, "w0");
    out.push(CheckRecord::new(
        format!("{suite}.exhaustive"),
        anchor,
        instance,
        format!("radius={radius},pairs={}", ex.samples()),
        format!("max |delta h_w| <= {DEFECT_BOUND}"),
        format!("observed_max={}", ex.observed_max),
        ex.passed(),
    ));
    let rnd = defect_scan(
        model,
        pat,
        ScanStrategy::Random {
            samples,
            max_len,
            seed,
        },
        "w0",
    );
    out.push(CheckRecord::new(
        format!("{suite}.random"),
        anchor,
        instance,
        format!("samples={samples},max_len={max_len},seed={seed}"),
        format!("max |delta h_w| <= {DEFECT_BOUND}"),
        format!("observed_max={}", rnd.observed_max),
        rnd.passed(),
    ));
    out
}

// ---------------------------------------------------------------------------

struct Lemma31;

impl Suite for Lemma31 {
    fn name(&self) -> &'static str {
        "lemma31"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.1"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let radius = a.caps.exhaustive_radius;
        let mut checked = 0usize;
        let mut witness = None;
        for letters in all_words(&a.pres, radius) {
            let word = AWord::from_letters(letters);
            let g = a.pres.element(&word);
            let reduced = a.pres.is_reduced(&word);
            let geodesic = word.len() == a.pres.geodesic_length(&g);
            checked += 1;
            if reduced != geodesic && witness.is_none() {
                witness = Some(format!("word {word}: reduced={reduced} geodesic={geodesic}"));
            }
        }
        let mut rec = CheckRecord::new(
            "lemma31.equivalence",
            self.anchor(),
            a.name.clone(),
            format!("radius={radius},words={checked}"),
            "reduced <=> |w| = |element(w)|",
            if witness.is_none() { "all agree" } else { "counterexample" }.to_string(),
            witness.is_none(),
        );
        if let Some(w) = witness.clone() {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Lemma33;

impl Suite for Lemma33 {
    fn name(&self) -> &'static str {
        "lemma33"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.3"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        match family_pattern(a, 0) {
            Ok((_, pat)) => vec![lipschitz_records(
                &a.pres,
                &pat,
                self.name(),
                self.anchor(),
                &a.name,
                false,
                a.caps.lipschitz_samples,
                a.caps.lipschitz_max_len,
                a.caps.seed,
            )],
            Err(e) => vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        }
    }
}

struct Lemma34;

impl Suite for Lemma34 {
    fn name(&self) -> &'static str {
        "lemma34"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.4"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        match family_pattern(a, 0) {
            Ok((_, pat)) => vec![lipschitz_records(
                &a.pres,
                &pat,
                self.name(),
                self.anchor(),
                &a.name,
                true,
                a.caps.lipschitz_samples,
                a.caps.lipschitz_max_len,
                a.caps.seed,
            )],
            Err(e) => vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        }
    }
}

struct Lemma35;

impl Suite for Lemma35 {
    fn name(&self) -> &'static str {
        "lemma35"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.5"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        match family_pattern(a, 0) {
            Ok((_, pat)) => vec![inversion_records(
                &a.pres,
                &pat,
                self.name(),
                self.anchor(),
                &a.name,
                false,
                a.caps.lipschitz_samples,
                a.caps.lipschitz_max_len,
                a.caps.seed,
            )],
            Err(e) => vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        }
    }
}

struct Lemma36;

impl Suite for Lemma36 {
    fn name(&self) -> &'static str {
        "lemma36"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.6"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        match family_pattern(a, 0) {
            Ok((_, pat)) => vec![inversion_records(
                &a.pres,
                &pat,
                self.name(),
                self.anchor(),
                &a.name,
                true,
                a.caps.lipschitz_samples,
                a.caps.lipschitz_max_len,
                a.caps.seed,
            )],
            Err(e) => vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        }
    }
}

struct Lemma37;

impl Suite for Lemma37 {
    fn name(&self) -> &'static str {
        "lemma37"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.7"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let (_, pat) = match family_pattern(a, 0) {
            Ok(v) => v,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(a.caps.seed, self.name()));
        let samples = a.caps.split_samples;
        let mut worst: i64 = i64::MIN;
        let mut witness = None;
        for _ in 0..samples {
            let len = rng.gen_range(2..=a.caps.split_max_len.max(2));
            let alpha = a.pres.random_reduced_word(&mut rng, len);
            let cut = rng.gen_range(1..len);
            let left = AWord::from_letters(alpha.letters()[..cut].to_vec());
            let right = AWord::from_letters(alpha.letters()[cut..].to_vec());
            let g = a.pres.element(&alpha);
            let g1 = a.pres.element(&left);
            let g2 = a.pres.element(&right);
            let gap = (h_w(&a.pres, &g, &pat)
                - h_w(&a.pres, &g1, &pat)
                - h_w(&a.pres, &g2, &pat))
            .abs();
            if gap - 10 > worst {
                worst = gap - 10;
                if gap > 10 {
                    witness = Some(format!("alpha={alpha} cut={cut} gap={gap}"));
                }
            }
        }
        let mut rec = CheckRecord::new(
            "lemma37.splitting",
            self.anchor(),
            a.name.clone(),
            format!("samples={samples},max_len={}", a.caps.split_max_len),
            "|h_w(a) - h_w(a1) - h_w(a2)| <= 10",
            format!("max slack {worst}"),
            worst <= 0,
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Prop1;

impl Suite for Prop1 {
    fn name(&self) -> &'static str {
        "prop1"
    }
    fn anchor(&self) -> &'static str {
        "Prop 1"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        match family_pattern(a, 0) {
            Ok((_, pat)) => defect_records(
                &a.pres,
                &pat,
                self.name(),
                self.anchor(),
                &a.name,
                a.caps.defect_radius,
                a.caps.defect_samples,
                a.caps.defect_max_len,
                a.caps.seed,
            ),
            Err(e) => vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        }
    }
}

struct Lemma41;

impl Suite for Lemma41 {
    fn name(&self) -> &'static str {
        "lemma41"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 4.1"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let fam = match a.family() {
            Ok(f) => f,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        };
        let ab = a.pres.abelianization();
        let mut out = Vec::new();
        for i in 0..=a.caps.max_index.min(2) {
            let w = match fam.word(i) {
                Ok(w) => w,
                Err(e) => {
                    out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                    continue;
                }
            };
            let expect_len = 40 * 10u64.pow(i);
            out.push(CheckRecord::new(
                "lemma41.length",
                "Lemma 4.1(2)",
                a.name.clone(),
                format!("i={i}"),
                format!("{expect_len}"),
                format!("{}", w.len()),
                w.len() as u64 == expect_len,
            ));
            let sub = fam.sub_word(i, 1, true).expect("index already validated");
            out.push(CheckRecord::new(
                "lemma41.sub_length",
                "Lemma 4.1(2)",
                a.name.clone(),
                format!("i={i},block=(1,+)"),
                format!("{}", 8 * 10u64.pow(i)),
                format!("{}", sub.len()),
                sub.len() as u64 == 8 * 10u64.pow(i),
            ));
            let mut reduced_ok = true;
            for n in 1..=a.caps.max_n {
                if !a.pres.is_reduced(&w.pow(n)) {
                    reduced_ok = false;
                }
            }
            out.push(CheckRecord::new(
                "lemma41.powers_reduced",
                "Lemma 4.1(1)",
                a.name.clone(),
                format!("i={i},n<= {}", a.caps.max_n),
                "w_i^n reduced",
                if reduced_ok { "reduced" } else { "not reduced" }.to_string(),
                reduced_ok,
            ));
            let in_comm = ab.in_commutator(&w);
            out.push(CheckRecord::new(
                "lemma41.commutator",
                "Lemma 4.1(3)",
                a.name.clone(),
                format!("i={i}"),
                "abelianized image = 0",
                if in_comm { "0" } else { "nonzero" }.to_string(),
                in_comm,
            ));
        }
        out
    }
}

struct Lemma42;

impl Suite for Lemma42 {
    fn name(&self) -> &'static str {
        "lemma42"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 4.2"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let mut out = Vec::new();
        // (1): a1 cannot face a2, i.e. a2 is outside C a1 C; the family
        // validation checks exactly that and reports the witness pair.
        let face = a.family();
        out.push(match &face {
            Ok(_) => CheckRecord::new(
                "lemma42.face",
                "Lemma 4.2(1)",
                a.name.clone(),
                format!("a1={},a2={}", a.a1, a.a2),
                "a2 not in C a1 C",
                "holds",
                true,
            ),
            Err(e) => CheckRecord::new(
                "lemma42.face",
                "Lemma 4.2(1)",
                a.name.clone(),
                format!("a1={},a2={}", a.a1, a.a2),
                "a2 not in C a1 C",
                "violated",
                false,
            )
            .with_witness(e.to_string()),
        });
        // The checker is not vacuous: a pattern never refutes itself at
        // offset 0.
        let w0 = SymbolPattern::family(0);
        let self_report = cover_refute(&w0, &w0).expect("equal lengths");
        out.push(CheckRecord::new(
            "lemma42.nonvacuous",
            "Lemma 4.2",
            a.name.clone(),
            "text=W_0,probe=W_0",
            "offset 0 not refuted",
            if self_report.verdicts[0].1.is_none() {
                "not refuted"
            } else {
                "refuted"
            }
            .to_string(),
            self_report.verdicts[0].1.is_none(),
        ));
        // (2): W_i^2 cannot cover W_i^-1.
        for i in 0..=a.caps.max_index.min(2) {
            let wi = SymbolPattern::family(i);
            let report = cover_refute(&wi.pow(2), &wi.inverse()).expect("probe shorter");
            out.push(CheckRecord::new(
                "lemma42.cover",
                "Lemma 4.2(2)",
                a.name.clone(),
                format!("i={i},offsets={}", report.offsets()),
                "all offsets refuted",
                format!("{}/{} refuted", report.refuted_count(), report.offsets()),
                report.cannot_cover(),
            ));
        }
        out
    }
}

struct Lemma43;

impl Suite for Lemma43 {
    fn name(&self) -> &'static str {
        "lemma43"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 4.3"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let fam = match a.family() {
            Ok(f) => f,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        };
        let mut out = Vec::new();
        for i in 0..=a.caps.max_index.min(1) {
            let (wi, pat) = match family_pattern(a, i) {
                Ok(v) => v,
                Err(e) => {
                    out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                    continue;
                }
            };
            for n in 1..=a.caps.max_n {
                let g = a.pres.element(&wi.pow(n));
                let c_plus = c_w(&a.pres, &g, &pat);
                out.push(value_record(
                    "lemma43.diag",
                    "Lemma 4.3(1)",
                    &a.name,
                    format!("i={i},n={n}"),
                    n as i64,
                    c_plus,
                    format!("g = w{i}^{n}"),
                ));
                let c_minus = c_w_inv(&a.pres, &g, &pat);
                out.push(value_record(
                    "lemma43.inverse",
                    "Lemma 4.3(2)",
                    &a.name,
                    format!("i={i},n={n}"),
                    0,
                    c_minus,
                    format!("g = w{i}^{n}"),
                ));
            }
        }
        for i in 0..a.caps.max_index.min(2) {
            for j in i + 1..=a.caps.max_index.min(2) {
                let wi = match fam.word(i) {
                    Ok(w) => w,
                    Err(e) => {
                        out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                        continue;
                    }
                };
                let (_, pat_j) = match family_pattern(a, j) {
                    Ok(v) => v,
                    Err(e) => {
                        out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                        continue;
                    }
                };
                for n in 1..=a.caps.max_n.min(2) {
                    let g = a.pres.element(&wi.pow(n));
                    let cp = c_w(&a.pres, &g, &pat_j);
                    out.push(value_record(
                        "lemma43.cross",
                        "Lemma 4.3(3)",
                        &a.name,
                        format!("i={i},j={j},n={n}"),
                        0,
                        cp,
                        format!("g = w{i}^{n}, w = w{j}"),
                    ));
                    let cm = c_w_inv(&a.pres, &g, &pat_j);
                    out.push(value_record(
                        "lemma43.cross_inverse",
                        "Lemma 4.3(4)",
                        &a.name,
                        format!("i={i},j={j},n={n}"),
                        0,
                        cm,
                        format!("g = w{i}^{n}, w = w{j}^-1"),
                    ));
                }
            }
        }
        out
    }
}

struct Prop2;

impl Suite for Prop2 {
    fn name(&self) -> &'static str {
        "prop2"
    }
    fn anchor(&self) -> &'static str {
        "Prop 2"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Amalgam
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Amalgam(a) = inst else { return vec![] };
        let fam = match a.family() {
            Ok(f) => f,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &a.name, e)],
        };
        let ab = a.pres.abelianization();
        let mut out = Vec::new();
        for i in 0..=a.caps.max_index.min(1) {
            let (wi, pat) = match family_pattern(a, i) {
                Ok(v) => v,
                Err(e) => {
                    out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                    continue;
                }
            };
            for n in 1..=a.caps.max_n {
                let g = a.pres.element(&wi.pow(n));
                let h = h_w(&a.pres, &g, &pat);
                out.push(value_record(
                    "prop2.diag",
                    "Prop 2(1)",
                    &a.name,
                    format!("i={i},n={n}"),
                    n as i64,
                    h,
                    format!("g = w{i}^{n}"),
                ));
            }
        }
        for i in 0..a.caps.max_index.min(2) {
            for j in i + 1..=a.caps.max_index.min(2) {
                let wi = fam.word(i).expect("index validated");
                let (_, pat_j) = match family_pattern(a, j) {
                    Ok(v) => v,
                    Err(e) => {
                        out.push(fail_record(self.name(), self.anchor(), &a.name, e));
                        continue;
                    }
                };
                for n in 1..=a.caps.max_n.min(2) {
                    let g = a.pres.element(&wi.pow(n));
                    let h = h_w(&a.pres, &g, &pat_j);
                    out.push(value_record(
                        "prop2.cross",
                        "Prop 2(2)",
                        &a.name,
                        format!("i={i},j={j},n={n}"),
                        0,
                        h,
                        format!("g = w{i}^{n}, w = w{j}"),
                    ));
                }
            }
        }
        for i in 0..=a.caps.max_index.min(2) {
            let wi = fam.word(i).expect("index validated");
            let in_comm = ab.in_commutator(&wi);
            out.push(CheckRecord::new(
                "prop2.commutator",
                "Prop 2(3)",
                a.name.clone(),
                format!("i={i}"),
                "abelianized image = 0",
                if in_comm { "0" } else { "nonzero" }.to_string(),
                in_comm,
            ));
        }
        out
    }
}

struct Lemma61;

impl Suite for Lemma61 {
    fn name(&self) -> &'static str {
        "lemma61"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 6.1 (Britton)"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(h.caps.seed, self.name()));
        let empty = HWord::empty();
        let samples = h.caps.britton_samples;
        let mut ok = 0usize;
        let mut witness = None;
        for _ in 0..samples {
            let len = rng.gen_range(1..=8);
            let word = h.pres.random_reduced_word(&mut rng, len, 1);
            if h.pres.equals(&word, &empty) {
                if witness.is_none() {
                    witness = Some(format!("{word}"));
                }
            } else {
                ok += 1;
            }
        }
        let mut rec = CheckRecord::new(
            "lemma61.soundness",
            self.anchor(),
            h.name.clone(),
            format!("samples={samples}"),
            "reduced word with a t-letter is nontrivial",
            format!("{ok}/{samples} nontrivial"),
            ok == samples,
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Lemma62;

impl Suite for Lemma62 {
    fn name(&self) -> &'static str {
        "lemma62"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 6.2"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let mut by_element: std::collections::HashMap<_, Vec<HWord>> =
            std::collections::HashMap::new();
        for letters in all_words(&h.pres, 5) {
            let word = HWord::from_letters(letters);
            if h.pres.is_reduced(&word) {
                by_element
                    .entry(h.pres.element(&word))
                    .or_default()
                    .push(word);
            }
        }
        let mut pairs = 0usize;
        let mut witness = None;
        for words in by_element.values() {
            let pattern = HnnPresentation::t_pattern(&words[0]);
            for w in words.iter().skip(1) {
                pairs += 1;
                if HnnPresentation::t_pattern(w) != pattern && witness.is_none() {
                    witness = Some(format!("{} vs {}", words[0], w));
                }
            }
        }
        let mut rec = CheckRecord::new(
            "lemma62.alignment",
            self.anchor(),
            h.name.clone(),
            format!("word_len<=5,equal_pairs={pairs}"),
            "equal reduced words share the t-pattern",
            if witness.is_none() { "all agree" } else { "counterexample" }.to_string(),
            witness.is_none(),
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Lemma63;

impl Suite for Lemma63 {
    fn name(&self) -> &'static str {
        "lemma63"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 6.3"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let radius = h.caps.exhaustive_radius;
        let mut geodesics = 0usize;
        let mut witness = None;
        for letters in all_words(&h.pres, radius) {
            let word = HWord::from_letters(letters);
            let g = h.pres.element(&word);
            if word.len() == h.pres.geodesic_length(&g) {
                geodesics += 1;
                if !h.pres.is_reduced(&word) && witness.is_none() {
                    witness = Some(format!("{word}"));
                }
            }
        }
        let mut rec = CheckRecord::new(
            "lemma63.geodesic_reduced",
            self.anchor(),
            h.name.clone(),
            format!("radius={radius},geodesic_words={geodesics}"),
            "every geodesic word is reduced",
            if witness.is_none() { "all reduced" } else { "counterexample" }.to_string(),
            witness.is_none(),
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Lemma65;

impl Suite for Lemma65 {
    fn name(&self) -> &'static str {
        "lemma65"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 6.5"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        match hnn_family_pattern(h, 0) {
            Ok((_, pat)) => vec![
                lipschitz_records(
                    &h.pres,
                    &pat,
                    "lemma65c",
                    self.anchor(),
                    &h.name,
                    false,
                    h.caps.lipschitz_samples,
                    h.caps.lipschitz_max_len,
                    h.caps.seed,
                ),
                lipschitz_records(
                    &h.pres,
                    &pat,
                    "lemma65h",
                    self.anchor(),
                    &h.name,
                    true,
                    h.caps.lipschitz_samples,
                    h.caps.lipschitz_max_len,
                    h.caps.seed,
                ),
            ],
            Err(e) => vec![fail_record(self.name(), self.anchor(), &h.name, e)],
        }
    }
}

struct Lemma66;

impl Suite for Lemma66 {
    fn name(&self) -> &'static str {
        "lemma66"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 6.6"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let (_, pat) = match hnn_family_pattern(h, 0) {
            Ok(v) => v,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &h.name, e)],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(h.caps.seed, self.name()));
        let samples = h.caps.split_samples;
        let mut worst: i64 = i64::MIN;
        let mut witness = None;
        for _ in 0..samples {
            let len = rng.gen_range(2..=h.caps.split_max_len.max(2));
            let alpha = h.pres.random_reduced_word(&mut rng, len, 0);
            let cut = rng.gen_range(1..len);
            let left = HWord::from_letters(alpha.letters()[..cut].to_vec());
            let right = HWord::from_letters(alpha.letters()[cut..].to_vec());
            let g = h.pres.element(&alpha);
            let g1 = h.pres.element(&left);
            let g2 = h.pres.element(&right);
            let gap = (h_w(&h.pres, &g, &pat)
                - h_w(&h.pres, &g1, &pat)
                - h_w(&h.pres, &g2, &pat))
            .abs();
            if gap - 10 > worst {
                worst = gap - 10;
                if gap > 10 {
                    witness = Some(format!("alpha={alpha} cut={cut} gap={gap}"));
                }
            }
        }
        let mut rec = CheckRecord::new(
            "lemma66.splitting",
            self.anchor(),
            h.name.clone(),
            format!("samples={samples},max_len={}", h.caps.split_max_len),
            "|h_w(a) - h_w(a1) - h_w(a2)| <= 10",
            format!("max slack {worst}"),
            worst <= 0,
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Prop3;

impl Suite for Prop3 {
    fn name(&self) -> &'static str {
        "prop3"
    }
    fn anchor(&self) -> &'static str {
        "Prop 3"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        match hnn_family_pattern(h, 0) {
            Ok((_, pat)) => defect_records(
                &h.pres,
                &pat,
                self.name(),
                self.anchor(),
                &h.name,
                h.caps.defect_radius,
                h.caps.defect_samples,
                h.caps.defect_max_len,
                h.caps.seed,
            ),
            Err(e) => vec![fail_record(self.name(), self.anchor(), &h.name, e)],
        }
    }
}

struct Lemma71;

impl Suite for Lemma71 {
    fn name(&self) -> &'static str {
        "lemma71"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 7.1"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let a = h.pres.base_group();
        let odd_pool_i: Vec<u32> = a.elements().skip(1).filter(|&x| !h.pres.in_c(x)).collect();
        let even_pool_i: Vec<u32> = a
            .elements()
            .skip(1)
            .filter(|&x| !h.pres.in_phi_c(x))
            .collect();
        let mut checked = 0usize;
        let mut witness = None;
        for condition in [ConditionClass::I, ConditionClass::II] {
            for syllables in 1..=4usize {
                let mut stack: Vec<(Vec<HLetter>, usize)> = vec![(Vec::new(), 0)];
                while let Some((prefix, depth)) = stack.pop() {
                    if depth == syllables {
                        let word = HWord::from_letters(prefix);
                        let class = h.pres.check_condition(&word);
                        let g = h.pres.element(&word);
                        let geodesic = h.pres.geodesic_length(&g) == word.len();
                        checked += 1;
                        if (class != Ok(condition) || !geodesic) && witness.is_none() {
                            witness = Some(format!(
                                "{word}: class={class:?} |g|={}",
                                h.pres.geodesic_length(&g)
                            ));
                        }
                        continue;
                    }
                    let positive = match condition {
                        ConditionClass::I => depth % 2 == 0,
                        ConditionClass::II => depth % 2 == 1,
                        ConditionClass::Neither => unreachable!(),
                    };
                    let pool = match (condition, depth % 2 == 0) {
                        (ConditionClass::I, true) => &odd_pool_i,
                        (ConditionClass::I, false) => &even_pool_i,
                        (ConditionClass::II, true) => &even_pool_i,
                        (ConditionClass::II, false) => &odd_pool_i,
                        (ConditionClass::Neither, _) => unreachable!(),
                    };
                    for magnitude in 1..=2usize {
                        for &av in pool {
                            let mut next = prefix.clone();
                            let t = if positive { HLetter::T } else { HLetter::TInv };
                            next.extend(std::iter::repeat_n(t, magnitude));
                            next.push(HLetter::A(av));
                            stack.push((next, depth + 1));
                        }
                    }
                }
            }
        }
        let mut rec = CheckRecord::new(
            "lemma71.geodesic",
            self.anchor(),
            h.name.clone(),
            format!("syllables<=4,|n|<=2,words={checked}"),
            "condition I/II words are geodesics",
            if witness.is_none() { "all geodesic" } else { "counterexample" }.to_string(),
            witness.is_none(),
        );
        if let Some(w) = witness {
            rec = rec.with_witness(w);
        }
        vec![rec]
    }
}

struct Lemma72;

impl Suite for Lemma72 {
    fn name(&self) -> &'static str {
        "lemma72"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 7.2"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let fam = match h.family() {
            Ok(f) => f,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &h.name, e)],
        };
        let mut out = Vec::new();
        // t-pattern of w_0, literally.
        if let Ok(w0) = fam.word(0) {
            let pattern = HnnPresentation::t_pattern(&w0).render();
            out.push(CheckRecord::new(
                "lemma72.t_pattern",
                "Lemma 7.2",
                h.name.clone(),
                "i=0",
                "+-+-++--+++---",
                pattern.clone(),
                pattern == "+-+-++--+++---",
            ));
        }
        // Conditions (1)-(3): counting values.
        for i in 0..=h.caps.max_index.min(1) {
            let (wi, pat) = match hnn_family_pattern(h, i) {
                Ok(v) => v,
                Err(e) => {
                    out.push(fail_record(self.name(), self.anchor(), &h.name, e));
                    continue;
                }
            };
            for n in 1..=h.caps.max_n {
                let g = h.pres.element(&wi.pow(n));
                let cp = c_w(&h.pres, &g, &pat);
                out.push(value_record(
                    "lemma72.diag",
                    "Lemma 7.2(1)",
                    &h.name,
                    format!("i={i},n={n}"),
                    n as i64,
                    cp,
                    format!("g = w{i}^{n}"),
                ));
                let cm = c_w_inv(&h.pres, &g, &pat);
                out.push(value_record(
                    "lemma72.inverse",
                    "Lemma 7.2(2)",
                    &h.name,
                    format!("i={i},n={n}"),
                    0,
                    cm,
                    format!("g = w{i}^{n}"),
                ));
            }
        }
        for i in 0..h.caps.max_index.min(1) {
            for j in i + 1..=h.caps.max_index.min(1) {
                let wi = fam.word(i).expect("index validated");
                let (_, pat_j) = match hnn_family_pattern(h, j) {
                    Ok(v) => v,
                    Err(e) => {
                        out.push(fail_record(self.name(), self.anchor(), &h.name, e));
                        continue;
                    }
                };
                for n in 1..=h.caps.max_n.min(2) {
                    let g = h.pres.element(&wi.pow(n));
                    let cp = c_w(&h.pres, &g, &pat_j);
                    let cm = c_w_inv(&h.pres, &g, &pat_j);
                    out.push(CheckRecord::new(
                        "lemma72.cross",
                        "Lemma 7.2(3)",
                        h.name.clone(),
                        format!("i={i},j={j},n={n}"),
                        "0,0".to_string(),
                        format!("{cp},{cm}"),
                        cp == 0 && cm == 0,
                    ));
                }
            }
        }
        // Run-length separation between indices.
        for i in 0..=h.caps.max_index.min(2) {
            let run = HnnFamily::t_pattern_of_index(i).max_run();
            out.push(CheckRecord::new(
                "lemma72.max_run",
                "Lemma 7.2(3)",
                h.name.clone(),
                format!("i={i}"),
                format!("{}", 3 * 10u64.pow(i)),
                format!("{run}"),
                run as u64 == 3 * 10u64.pow(i),
            ));
        }
        for i in 0..h.caps.max_index.min(2) {
            for j in i + 1..=h.caps.max_index.min(2) {
                let ok = HnnFamily::separation_check(i, j, h.caps.max_n);
                out.push(CheckRecord::new(
                    "lemma72.separation",
                    "Lemma 7.2(3)",
                    h.name.clone(),
                    format!("i={i},j={j},n<={}", h.caps.max_n),
                    "run(W_i^n) < run(W_j)",
                    if ok { "holds" } else { "violated" }.to_string(),
                    ok,
                ));
            }
        }
        // (4): commutator identity.
        for i in 0..=h.caps.max_index.min(1) {
            match fam.commutator_certificate(i) {
                Ok(ok) => out.push(CheckRecord::new(
                    "lemma72.commutator",
                    "Lemma 7.2(4)",
                    h.name.clone(),
                    format!("i={i}"),
                    "w_i equals the commutator product and maps to 0",
                    if ok { "holds" } else { "violated" }.to_string(),
                    ok,
                )),
                Err(e) => out.push(fail_record("lemma72.commutator", "Lemma 7.2(4)", &h.name, e)),
            }
        }
        out
    }
}

struct Prop4;

impl Suite for Prop4 {
    fn name(&self) -> &'static str {
        "prop4"
    }
    fn anchor(&self) -> &'static str {
        "Prop 4"
    }
    fn supports(&self, kind: Kind) -> bool {
        kind == Kind::Hnn
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let Instance::Hnn(h) = inst else { return vec![] };
        let fam = match h.family() {
            Ok(f) => f,
            Err(e) => return vec![fail_record(self.name(), self.anchor(), &h.name, e)],
        };
        let ab = h.pres.abelianization();
        let mut out = Vec::new();
        for i in 0..=h.caps.max_index.min(1) {
            let (wi, pat) = match hnn_family_pattern(h, i) {
                Ok(v) => v,
                Err(e) => {
                    out.push(fail_record(self.name(), self.anchor(), &h.name, e));
                    continue;
                }
            };
            for n in 1..=h.caps.max_n {
                let g = h.pres.element(&wi.pow(n));
                let hv = h_w(&h.pres, &g, &pat);
                out.push(value_record(
                    "prop4.diag",
                    "Prop 4(1)",
                    &h.name,
                    format!("i={i},n={n}"),
                    n as i64,
                    hv,
                    format!("g = w{i}^{n}"),
                ));
            }
        }
        for i in 0..h.caps.max_index.min(1) {
            for j in i + 1..=h.caps.max_index.min(1) {
                let wi = fam.word(i).expect("index validated");
                let (_, pat_j) = match hnn_family_pattern(h, j) {
                    Ok(v) => v,
                    Err(e) => {
                        out.push(fail_record(self.name(), self.anchor(), &h.name, e));
                        continue;
                    }
                };
                for n in 1..=h.caps.max_n {
                    let g = h.pres.element(&wi.pow(n));
                    let hv = h_w(&h.pres, &g, &pat_j);
                    out.push(value_record(
                        "prop4.cross",
                        "Prop 4(2)",
                        &h.name,
                        format!("i={i},j={j},n={n}"),
                        0,
                        hv,
                        format!("g = w{i}^{n}, w = w{j}"),
                    ));
                }
            }
        }
        for i in 0..=h.caps.max_index.min(2) {
            let wi = fam.word(i).expect("index validated");
            let in_comm = ab.in_commutator(&wi);
            out.push(CheckRecord::new(
                "prop4.commutator",
                "Prop 4(3)",
                h.name.clone(),
                format!("i={i}"),
                "abelianized image = 0",
                if in_comm { "0" } else { "nonzero" }.to_string(),
                in_comm,
            ));
        }
        out
    }
}

struct OrbitsSuite;

impl Suite for OrbitsSuite {
    fn name(&self) -> &'static str {
        "orbits"
    }
    fn anchor(&self) -> &'static str {
        "Figure 4 / Lemma 6.2"
    }
    fn supports(&self, _kind: Kind) -> bool {
        true
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        match inst {
            Instance::Amalgam(a) => {
                let radius = a.caps.exhaustive_radius.min(3);
                // Brute force: geodesic spellings per element.
                let mut spellings: std::collections::HashMap<_, std::collections::BTreeSet<AWord>> =
                    std::collections::HashMap::new();
                for letters in all_words(&a.pres, radius) {
                    let word = AWord::from_letters(letters);
                    let g = a.pres.element(&word);
                    if word.len() == a.pres.geodesic_length(&g) {
                        spellings.entry(g).or_default().insert(word);
                    }
                }
                let mut elements = 0usize;
                let mut witness = None;
                for (g, expected) in &spellings {
                    elements += 1;
                    match a.pres.enumerate_geodesics(g, a.caps.orbit_cap as u128) {
                        Ok(members) => {
                            let members: std::collections::BTreeSet<AWord> =
                                members.into_iter().collect();
                            if &members != expected && witness.is_none() {
                                witness = Some(format!(
                                    "orbit of {g} has {} members, brute force found {}",
                                    members.len(),
                                    expected.len()
                                ));
                            }
                        }
                        Err(e) => {
                            if witness.is_none() {
                                witness = Some(format!("{e}"));
                            }
                        }
                    }
                }
                let mut rec = CheckRecord::new(
                    "orbits.amalgam",
                    "Figure 4",
                    a.name.clone(),
                    format!("radius={radius},elements={elements},orbit_cap={}", a.caps.orbit_cap),
                    "gauge orbit = all geodesic spellings",
                    if witness.is_none() { "all match" } else { "mismatch" }.to_string(),
                    witness.is_none(),
                );
                if let Some(w) = witness {
                    rec = rec.with_witness(w);
                }
                vec![rec]
            }
            Instance::Hnn(h) => {
                // Reduced spellings of length <= radius, per element.
                let radius = h.caps.exhaustive_radius.min(3);
                let mut reduced: std::collections::HashMap<_, Vec<HWord>> =
                    std::collections::HashMap::new();
                for letters in all_words(&h.pres, radius) {
                    let word = HWord::from_letters(letters);
                    if h.pres.is_reduced(&word) {
                        reduced
                            .entry(h.pres.element(&word))
                            .or_default()
                            .push(word);
                    }
                }
                let mut elements = 0usize;
                let mut witness = None;
                for (g, words) in &reduced {
                    elements += 1;
                    match h.pres.gauge_orbit(g).members(h.caps.orbit_cap as u128) {
                        Ok(members) => {
                            let members: std::collections::BTreeSet<HWord> =
                                members.into_iter().collect();
                            for m in &members {
                                if !h.pres.equals(m, &g.word()) && witness.is_none() {
                                    witness =
                                        Some(format!("member {m} is not equal to {g}"));
                                }
                            }
                            for w in words {
                                if !members.contains(w) && witness.is_none() {
                                    witness = Some(format!(
                                        "reduced spelling {w} missing from the orbit of {g}"
                                    ));
                                }
                            }
                        }
                        Err(e) => {
                            if witness.is_none() {
                                witness = Some(format!("{e}"));
                            }
                        }
                    }
                }
                let mut rec = CheckRecord::new(
                    "orbits.hnn",
                    "Lemma 6.2",
                    h.name.clone(),
                    format!("radius={radius},elements={elements},orbit_cap={}", h.caps.orbit_cap),
                    "orbit members equal the element; reduced spellings lie in the orbit",
                    if witness.is_none() { "all match" } else { "mismatch" }.to_string(),
                    witness.is_none(),
                );
                if let Some(w) = witness {
                    rec = rec.with_witness(w);
                }
                vec![rec]
            }
        }
    }
}

struct OracleSuite;

impl Suite for OracleSuite {
    fn name(&self) -> &'static str {
        "oracle"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 3.2 / Lemma 6.4"
    }
    fn supports(&self, _kind: Kind) -> bool {
        true
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        match inst {
            Instance::Amalgam(a) => oracle_records(
                &a.pres,
                &a.name,
                a.caps.oracle_max_g,
                &a.caps.oracle_pattern_lens,
                a.caps.oracle_node_cap,
                self.anchor(),
            ),
            Instance::Hnn(h) => oracle_records(
                &h.pres,
                &h.name,
                h.caps.oracle_max_g,
                &h.caps.oracle_pattern_lens,
                h.caps.oracle_node_cap,
                self.anchor(),
            ),
        }
    }
}

fn oracle_records<M: GroupModel>(
    model: &M,
    instance: &str,
    max_g: usize,
    pattern_lens: &[usize],
    node_cap: u64,
    anchor: &str,
) -> Vec<CheckRecord> {
    let patterns = admissible_patterns(model, pattern_lens);
    let max_bound = pattern_lens
        .iter()
        .filter(|&&l| l >= 2)
        .map(|&l| OracleIndex::<M>::length_bound(max_g, l))
        .max()
        .unwrap_or(0);
    let index = match OracleIndex::build(model, max_bound, node_cap) {
        Ok(i) => i,
        Err(e) => return vec![fail_record("oracle.index", anchor, instance, e)],
    };
    let mut checked = 0usize;
    let mut witness = None;
    for g in ball(model, max_g) {
        for pw in &patterns {
            let pat = match Pattern::new(model, pw.clone()) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let dp = c_w(model, &g, &pat);
            match index.c_w(model, &g, pw) {
                Ok(oracle) => {
                    checked += 1;
                    if dp != oracle && witness.is_none() {
                        witness = Some(format!("g={g:?} w={pw:?} dp={dp} oracle={oracle}"));
                    }
                }
                Err(e) => {
                    if witness.is_none() {
                        witness = Some(format!("oracle error at g={g:?}: {e}"));
                    }
                }
            }
        }
    }
    let mut rec = CheckRecord::new(
        "oracle.equivalence",
        anchor,
        instance,
        format!(
            "|g|<={max_g},|w| in {pattern_lens:?},patterns={},checks={checked}",
            patterns.len()
        ),
        "orbit DP equals exhaustive search",
        if witness.is_none() { "all agree" } else { "mismatch" }.to_string(),
        witness.is_none() && checked > 0,
    );
    if let Some(w) = witness {
        rec = rec.with_witness(w);
    }
    vec![rec]
}

struct AbelianSuite;

impl Suite for AbelianSuite {
    fn name(&self) -> &'static str {
        "abelian"
    }
    fn anchor(&self) -> &'static str {
        "Lemma 4.1(3) / Lemma 7.2(4)"
    }
    fn supports(&self, _kind: Kind) -> bool {
        true
    }
    fn run(&self, inst: &Instance) -> Vec<CheckRecord> {
        let mut out = Vec::new();
        let (name, computed, expected): (String, Vec<num_bigint::BigInt>, _) = match inst {
            Instance::Amalgam(a) => (
                a.name.clone(),
                a.pres.abelianization().invariants().normalized(),
                a.expected_ab.clone(),
            ),
            Instance::Hnn(h) => (
                h.name.clone(),
                h.pres.abelianization().invariants().normalized(),
                h.expected_ab.clone(),
            ),
        };
        let computed_str = format!(
            "[{}]",
            computed
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        if let Some(exp) = expected {
            let expect: Vec<num_bigint::BigInt> =
                exp.iter().map(|&d| num_bigint::BigInt::from(d)).collect();
            out.push(CheckRecord::new(
                "abelian.invariants",
                "G^ab",
                name.clone(),
                "",
                format!(
                    "[{}]",
                    exp.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                ),
                computed_str,
                computed == expect,
            ));
        } else {
            out.push(CheckRecord::new(
                "abelian.invariants",
                "G^ab",
                name.clone(),
                "",
                "(computed)",
                computed_str,
                true,
            ));
        }
        // Family words abelianize to zero.
        match inst {
            Instance::Amalgam(a) => {
                if let Ok(fam) = a.family() {
                    let ab = a.pres.abelianization();
                    for i in 0..=a.caps.max_index.min(2) {
                        if let Ok(w) = fam.word(i) {
                            let ok = ab.in_commutator(&w);
                            out.push(CheckRecord::new(
                                "abelian.family_image",
                                "Lemma 4.1(3)",
                                name.clone(),
                                format!("i={i}"),
                                "0",
                                if ok { "0" } else { "nonzero" }.to_string(),
                                ok,
                            ));
                        }
                    }
                }
            }
            Instance::Hnn(h) => {
                if let Ok(fam) = h.family() {
                    let ab = h.pres.abelianization();
                    for i in 0..=h.caps.max_index.min(2) {
                        if let Ok(w) = fam.word(i) {
                            let ok = ab.in_commutator(&w);
                            out.push(CheckRecord::new(
                                "abelian.family_image",
                                "Lemma 7.2(4)",
                                name.clone(),
                                format!("i={i}"),
                                "0",
                                if ok { "0" } else { "nonzero" }.to_string(),
                                ok,
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

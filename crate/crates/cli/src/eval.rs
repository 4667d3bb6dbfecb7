//! The `eval` expression surface: small exact queries against an instance.
//!
//! Grammar (tokens are whitespace separated):
//!   reduce W      rewrite a word to reduced form
//!   eq W , W      element equality (the comma splits multi-token words)
//!   len W         geodesic length of the element of W
//!   cw P G        counting function c_P(G)
//!   hw P G        quasimorphism h_P(G)
//!   pattern W     symbol string (amalgam) or t-pattern (HNN)
//!   cover T P     covering refutation on symbol patterns
//!   abelian       abelian invariants of the instance
//!
//! A word token is either a family reference `w<i>`, `w<i>^<n>` (negative
//! `n` inverts) or a word literal in the instance's letter syntax.

use cqm_core::qm::Pattern;
use cqm_core::{
    c_w, cover_refute, h_w, AWord, AmalgamFamily, HWord, HnnPresentation, SymbolPattern,
};
use thiserror::Error;

use crate::instance::Instance;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("empty expression")]
    Empty,
    #[error("unknown operation {0:?}; expected reduce, eq, len, cw, hw, pattern, cover or abelian")]
    UnknownOp(String),
    #[error("operation {op} expects {expected}, got {got} (at token {position})")]
    Arity {
        op: &'static str,
        expected: &'static str,
        got: usize,
        position: usize,
    },
    #[error("cannot parse token {token:?} at position {position}: {reason}")]
    Token {
        token: String,
        position: usize,
        reason: String,
    },
    #[error("{0}")]
    Domain(String),
}

enum WordRef {
    Family { index: u32, power: i64 },
    Literal(Vec<String>),
}

fn split_words(tokens: &[String]) -> Vec<Vec<String>> {
    let mut groups = vec![Vec::new()];
    for t in tokens {
        if t == "," {
            groups.push(Vec::new());
        } else {
            groups.last_mut().unwrap().push(t.clone());
        }
    }
    groups
}

fn parse_ref(tokens: &[String], position: usize) -> Result<WordRef, EvalError> {
    if tokens.len() == 1 {
        let t = &tokens[0];
        if let Some(rest) = t.strip_prefix('w') {
            let (idx_part, pow_part) = match rest.split_once('^') {
                Some((i, p)) => (i, Some(p)),
                None => (rest, None),
            };
            if let Ok(index) = idx_part.parse::<u32>() {
                let power = match pow_part {
                    Some(p) => p.parse::<i64>().map_err(|_| EvalError::Token {
                        token: t.clone(),
                        position,
                        reason: "bad exponent".to_string(),
                    })?,
                    None => 1,
                };
                if power == 0 {
                    return Err(EvalError::Token {
                        token: t.clone(),
                        position,
                        reason: "exponent must be nonzero".to_string(),
                    });
                }
                return Ok(WordRef::Family { index, power });
            }
        }
    }
    Ok(WordRef::Literal(tokens.to_vec()))
}

fn amalgam_word(
    inst: &crate::instance::AmalgamInstance,
    r: &WordRef,
    position: usize,
) -> Result<AWord, EvalError> {
    match r {
        WordRef::Family { index, power } => {
            let fam = AmalgamFamily::new(&inst.pres, inst.a1, inst.a2, inst.b, inst.caps.max_index)
                .map_err(|e| EvalError::Domain(e.to_string()))?;
            let w = fam
                .word(*index)
                .map_err(|e| EvalError::Domain(e.to_string()))?;
            let powered = w.pow(power.unsigned_abs() as usize);
            Ok(if *power < 0 {
                inst.pres.inverse_word(&powered)
            } else {
                powered
            })
        }
        WordRef::Literal(tokens) => inst
            .pres
            .parse_word(&tokens.join(" "))
            .map_err(|e| EvalError::Token {
                token: tokens.join(" "),
                position,
                reason: e.to_string(),
            }),
    }
}

fn hnn_word(
    inst: &crate::instance::HnnInstance,
    r: &WordRef,
    position: usize,
) -> Result<HWord, EvalError> {
    match r {
        WordRef::Family { index, power } => {
            let fam = inst.family().map_err(|e| EvalError::Domain(e.to_string()))?;
            let w = fam
                .word(*index)
                .map_err(|e| EvalError::Domain(e.to_string()))?;
            let powered = w.pow(power.unsigned_abs() as usize);
            Ok(if *power < 0 {
                inst.pres.inverse_word(&powered)
            } else {
                powered
            })
        }
        WordRef::Literal(tokens) => inst
            .pres
            .parse_word(&tokens.join(" "))
            .map_err(|e| EvalError::Token {
                token: tokens.join(" "),
                position,
                reason: e.to_string(),
            }),
    }
}

/// Symbol pattern for `cover` arguments: a family reference or a raw string
/// over the alphabet `1 ! 2 @`.
fn symbol_arg(tokens: &[String], position: usize) -> Result<SymbolPattern, EvalError> {
    match parse_ref(tokens, position)? {
        WordRef::Family { index, power } => {
            let base = SymbolPattern::family(index);
            let powered = base.pow(power.unsigned_abs() as usize);
            Ok(if power < 0 { powered.inverse() } else { powered })
        }
        WordRef::Literal(ts) => {
            let joined = ts.join("");
            SymbolPattern::parse(&joined).ok_or_else(|| EvalError::Token {
                token: joined,
                position,
                reason: "expected symbols over `1 ! 2 @`".to_string(),
            })
        }
    }
}

fn display_amalgam_word(w: &AWord) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.to_string()
    }
}

fn display_hnn_word(w: &HWord) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.to_string()
    }
}

/// Evaluates one expression and returns the printed result.
pub fn eval(inst: &Instance, expr: &str) -> Result<String, EvalError> {
    let tokens: Vec<String> = expr.split_whitespace().map(str::to_string).collect();
    let Some(op) = tokens.first() else {
        return Err(EvalError::Empty);
    };
    let rest = &tokens[1..];
    let two_words = |op: &'static str| -> Result<(Vec<String>, Vec<String>), EvalError> {
        let groups = split_words(rest);
        match groups.len() {
            2 => Ok((groups[0].clone(), groups[1].clone())),
            1 if groups[0].len() == 2 => {
                Ok((vec![groups[0][0].clone()], vec![groups[0][1].clone()]))
            }
            _ => Err(EvalError::Arity {
                op,
                expected: "two words (separate multi-token words with `,`)",
                got: groups.len(),
                position: 1,
            }),
        }
    };
    match op.as_str() {
        "reduce" => match inst {
            Instance::Amalgam(a) => {
                let w = amalgam_word(a, &parse_ref(rest, 1)?, 1)?;
                Ok(display_amalgam_word(&a.pres.reduce(&w)))
            }
            Instance::Hnn(h) => {
                let w = hnn_word(h, &parse_ref(rest, 1)?, 1)?;
                Ok(display_hnn_word(&h.pres.britton_reduce(&w)))
            }
        },
        "eq" => {
            let (lt, rt) = two_words("eq")?;
            match inst {
                Instance::Amalgam(a) => {
                    let u = amalgam_word(a, &parse_ref(&lt, 1)?, 1)?;
                    let v = amalgam_word(a, &parse_ref(&rt, 2)?, 2)?;
                    Ok(format!("{}", a.pres.equals(&u, &v)))
                }
                Instance::Hnn(h) => {
                    let u = hnn_word(h, &parse_ref(&lt, 1)?, 1)?;
                    let v = hnn_word(h, &parse_ref(&rt, 2)?, 2)?;
                    Ok(format!("{}", h.pres.equals(&u, &v)))
                }
            }
        }
        "len" => match inst {
            Instance::Amalgam(a) => {
                let w = amalgam_word(a, &parse_ref(rest, 1)?, 1)?;
                Ok(format!("{}", a.pres.geodesic_length(&a.pres.element(&w))))
            }
            Instance::Hnn(h) => {
                let w = hnn_word(h, &parse_ref(rest, 1)?, 1)?;
                Ok(format!("{}", h.pres.geodesic_length(&h.pres.element(&w))))
            }
        },
        "cw" | "hw" => {
            let (pt, gt) = two_words(if op == "cw" { "cw" } else { "hw" })?;
            match inst {
                Instance::Amalgam(a) => {
                    let pw = amalgam_word(a, &parse_ref(&pt, 1)?, 1)?;
                    let gw = amalgam_word(a, &parse_ref(&gt, 2)?, 2)?;
                    let pat = Pattern::new(&a.pres, pw.letters().to_vec())
                        .map_err(|e| EvalError::Domain(e.to_string()))?;
                    let g = a.pres.element(&gw);
                    Ok(format!(
                        "{}",
                        if op == "cw" {
                            c_w(&a.pres, &g, &pat)
                        } else {
                            h_w(&a.pres, &g, &pat)
                        }
                    ))
                }
                Instance::Hnn(h) => {
                    let pw = hnn_word(h, &parse_ref(&pt, 1)?, 1)?;
                    let gw = hnn_word(h, &parse_ref(&gt, 2)?, 2)?;
                    let pat = Pattern::new(&h.pres, pw.letters().to_vec())
                        .map_err(|e| EvalError::Domain(e.to_string()))?;
                    let g = h.pres.element(&gw);
                    Ok(format!(
                        "{}",
                        if op == "cw" {
                            c_w(&h.pres, &g, &pat)
                        } else {
                            h_w(&h.pres, &g, &pat)
                        }
                    ))
                }
            }
        }
        "pattern" => match inst {
            Instance::Amalgam(a) => {
                let r = parse_ref(rest, 1)?;
                match &r {
                    // Family references render by construction, valid in
                    // every instance.
                    WordRef::Family { index, power } => {
                        let base = SymbolPattern::family(*index);
                        let powered = base.pow(power.unsigned_abs() as usize);
                        let p = if *power < 0 { powered.inverse() } else { powered };
                        Ok(p.render())
                    }
                    WordRef::Literal(_) => {
                        let w = amalgam_word(a, &r, 1)?;
                        let fam = a.family().map_err(|e| EvalError::Domain(e.to_string()))?;
                        fam.classify(&w)
                            .map(|p| p.render())
                            .map_err(|e| EvalError::Domain(e.to_string()))
                    }
                }
            }
            Instance::Hnn(h) => {
                let w = hnn_word(h, &parse_ref(rest, 1)?, 1)?;
                Ok(HnnPresentation::t_pattern(&w).render())
            }
        },
        "cover" => {
            let (tt, pt) = two_words("cover")?;
            let text = symbol_arg(&tt, 1)?;
            let probe = symbol_arg(&pt, 2)?;
            let report = cover_refute(&text, &probe).map_err(|e| EvalError::Domain(e.to_string()))?;
            Ok(format!(
                "{} ({}/{} offsets refuted)",
                if report.cannot_cover() {
                    "cannot cover"
                } else {
                    "not refuted"
                },
                report.refuted_count(),
                report.offsets()
            ))
        }
        "abelian" => match inst {
            Instance::Amalgam(a) => Ok(a.pres.abelianization().invariants().to_string()),
            Instance::Hnn(h) => Ok(h.pres.abelianization().invariants().to_string()),
        },
        other => Err(EvalError::UnknownOp(other.to_string())),
    }
}

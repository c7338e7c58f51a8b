use std::fmt;

use super::letter::Letter;
use super::rule::SignedRule;
use super::word::{push_reduced, sector_after, sector_before, Word};
use super::EngineError;
use crate::machines::MachineSpec;

/// Why a rule cannot be applied to a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inapplicable {
    NoBase,
    StateMismatch { position: usize, found: String, expected: String },
    SectorForbidden { sector: usize, position: usize, letter: String },
}

impl fmt::Display for Inapplicable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inapplicable::NoBase => write!(f, "word has no q-letters"),
            Inapplicable::StateMismatch { position, found, expected } => {
                write!(f, "q-letter {found} at position {position} does not match domain {expected}")
            }
            Inapplicable::SectorForbidden { sector, position, letter } => {
                write!(f, "letter {letter} at position {position} is not permitted in sector {sector}")
            }
        }
    }
}

/// Checks q-letter domains and sector permits of `rule` against `w`.
pub fn check_applicable(m: &MachineSpec, w: &Word, rule: SignedRule) -> Result<(), Inapplicable> {
    let alpha = &m.alphabet;
    let r = m.rule(rule);
    let letters = w.letters();
    let Some(first_q) = letters.iter().position(|l| alpha.is_state(l.id())) else {
        return Err(Inapplicable::NoBase);
    };
    let first = letters[first_q];
    let mut sector = sector_before(alpha.part(first.id()).unwrap(), first.is_inverse());
    for (pos, &l) in letters.iter().enumerate() {
        match alpha.part(l.id()) {
            Some(part) => {
                let domain = r.part(part).domain;
                if l.id() != domain {
                    return Err(Inapplicable::StateMismatch {
                        position: pos,
                        found: alpha.format_letter(l),
                        expected: alpha.name(domain).to_string(),
                    });
                }
                sector = sector_after(part, l.is_inverse());
            }
            None => {
                if !r.permits[sector].contains(l.id()) {
                    return Err(Inapplicable::SectorForbidden {
                        sector,
                        position: pos,
                        letter: alpha.format_letter(l),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn applicable(m: &MachineSpec, w: &Word, rule: SignedRule) -> bool {
    check_applicable(m, w, rule).is_ok()
}

/// Applies `rule`, substituting every q-letter (inverted image for negative letters) and freely reducing.
pub fn apply_rule(m: &MachineSpec, w: &Word, rule: SignedRule) -> Result<Word, EngineError> {
    check_applicable(m, w, rule).map_err(EngineError::NotApplicable)?;
    Ok(substitute(m, w, rule))
}

/// Substitution without the applicability check.
pub(crate) fn substitute(m: &MachineSpec, w: &Word, rule: SignedRule) -> Word {
    let alpha = &m.alphabet;
    let r = m.rule(rule);
    let mut out = Vec::with_capacity(w.len() + 4);
    for &l in w.letters() {
        match alpha.part(l.id()) {
            Some(part) => {
                let p = r.part(part);
                if l.is_inverse() {
                    for &x in p.right.iter().rev() {
                        push_reduced(&mut out, x.inverse());
                    }
                    push_reduced(&mut out, Letter::new(p.target, true));
                    for &x in p.left.iter().rev() {
                        push_reduced(&mut out, x.inverse());
                    }
                } else {
                    for &x in &p.left {
                        push_reduced(&mut out, x);
                    }
                    push_reduced(&mut out, Letter::positive(p.target));
                    for &x in &p.right {
                        push_reduced(&mut out, x);
                    }
                }
            }
            None => push_reduced(&mut out, l),
        }
    }
    Word::from_reduced(out)
}

/// Result of applying a rule while tracking which a-letters of the source survive reduction.
#[derive(Clone, Debug)]
pub struct Census {
    pub word: Word,
    /// a-letters of the source word left after cancellation against inserted letters.
    pub surviving_a: usize,
    /// q-letters of the source word (one q-cell each).
    pub q_letters: usize,
}

/// Applies `rule` and counts surviving original a-letters (the a-cells of the θ-band).
pub fn apply_with_census(m: &MachineSpec, w: &Word, rule: SignedRule) -> Result<Census, EngineError> {
    check_applicable(m, w, rule).map_err(EngineError::NotApplicable)?;
    let alpha = &m.alphabet;
    let r = m.rule(rule);
    // (letter, is original a-letter)
    let mut stack: Vec<(Letter, bool)> = Vec::with_capacity(w.len() + 4);
    let push = |stack: &mut Vec<(Letter, bool)>, l: Letter, original: bool| {
        if stack.last().is_some_and(|&(top, _)| top == l.inverse()) {
            stack.pop();
        } else {
            stack.push((l, original));
        }
    };
    let mut q_letters = 0;
    for &l in w.letters() {
        match alpha.part(l.id()) {
            Some(part) => {
                q_letters += 1;
                let p = r.part(part);
                if l.is_inverse() {
                    for &x in p.right.iter().rev() {
                        push(&mut stack, x.inverse(), false);
                    }
                    push(&mut stack, Letter::new(p.target, true), false);
                    for &x in p.left.iter().rev() {
                        push(&mut stack, x.inverse(), false);
                    }
                } else {
                    for &x in &p.left {
                        push(&mut stack, x, false);
                    }
                    push(&mut stack, Letter::positive(p.target), false);
                    for &x in &p.right {
                        push(&mut stack, x, false);
                    }
                }
            }
            None => push(&mut stack, l, true),
        }
    }
    let surviving_a = stack.iter().filter(|&&(_, orig)| orig).count();
    let word = Word::from_reduced(stack.into_iter().map(|(l, _)| l).collect());
    Ok(Census { word, surviving_a, q_letters })
}

/// All signed rules applicable to `w`; empty for words without q-letters.
pub fn enumerate_applicable(m: &MachineSpec, w: &Word) -> Vec<SignedRule> {
    let Some(first) = w.letters().iter().find(|l| m.alphabet.is_state(l.id())) else {
        return Vec::new();
    };
    m.candidates(first.id())
        .iter()
        .copied()
        .filter(|&r| applicable(m, w, r))
        .collect()
}

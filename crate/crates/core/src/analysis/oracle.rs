use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::{pow2, AnalysisError};
use crate::config::Budget;
use crate::engine::{apply_rule, base, enumerate_applicable, run_with, Letter, LetterKind, SignedRule, Word};
use crate::machines::{build, MachineKind, MachineSpec};

/// One way of starting a length-preserving computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub first: String,
    pub steps: usize,
    pub reached: bool,
}

#[derive(Clone, Debug)]
pub struct ConstantRun {
    pub history: Vec<SignedRule>,
    pub branches: Vec<Branch>,
    /// Length shared by every word of the computation.
    pub width: usize,
}

/// Follows every length-preserving computation from `start` until `target` holds.
///
/// After the first rule each step must have at most one length-preserving continuation
/// (other than undoing the previous rule); more than one is reported as [`AnalysisError::NotUnique`].
/// Exactly one branch must reach the target.
pub fn constant_length_run<A, T>(
    m: &MachineSpec,
    start: &Word,
    allow: A,
    target: T,
    cap: u64,
) -> Result<ConstantRun, AnalysisError>
where
    A: Fn(SignedRule) -> bool,
    T: Fn(&Word) -> bool,
{
    let width = start.len();
    let continuations = |w: &Word, prev: Option<SignedRule>| -> Vec<(SignedRule, Word)> {
        enumerate_applicable(m, w)
            .into_iter()
            .filter(|&r| Some(r.inverse()) != prev && allow(r))
            .filter_map(|r| {
                let next = apply_rule(m, w, r).ok()?;
                (next.len() == width).then_some((r, next))
            })
            .collect()
    };
    let mut branches = Vec::new();
    let mut found = None;
    for (first, w1) in continuations(start, None) {
        let mut history = vec![first];
        let mut w = w1;
        let mut reached = target(&w);
        while !reached {
            if history.len() as u64 >= cap {
                return Err(AnalysisError::BudgetExceeded {
                    what: "length-preserving computation".into(),
                    needed: history.len() as u64 + 1,
                    cap,
                });
            }
            let mut next = continuations(&w, history.last().copied());
            match next.len() {
                0 => break,
                1 => {
                    let (r, nw) = next.pop().unwrap();
                    history.push(r);
                    w = nw;
                    reached = target(&w);
                }
                count => return Err(AnalysisError::NotUnique { step: history.len(), count }),
            }
        }
        branches.push(Branch { first: m.rule_name(first), steps: history.len(), reached });
        if reached {
            if found.is_some() {
                return Err(AnalysisError::NotUnique { step: 0, count: 2 });
            }
            found = Some(history);
        }
    }
    let history = found.ok_or(AnalysisError::NoPath)?;
    Ok(ConstantRun { history, branches, width })
}

fn is_mirror(m: &MachineSpec) -> bool {
    m.name.ends_with("mir")
}

/// `L u p(s) R` for Z-machines, `L p(s) u R` for mirror machines.
pub(crate) fn lpr_word(m: &MachineSpec, tape: &[Letter], state: u8) -> Word {
    let l = Letter::positive(m.letter("L"));
    let p = Letter::positive(m.letter(&format!("p({state})")));
    let r = Letter::positive(m.letter("R"));
    let mut letters = vec![l];
    if is_mirror(m) {
        letters.push(p);
        letters.extend_from_slice(tape);
    } else {
        letters.extend_from_slice(tape);
        letters.push(p);
    }
    letters.push(r);
    Word::new(letters)
}

/// The length-preserving computation `p(1) -> p(3)` over a positive tape of an adding machine or its mirror.
pub fn adding_run(m: &MachineSpec, tape: &[Letter], cap: u64) -> Result<ConstantRun, AnalysisError> {
    if m.hardware.parts != 3 || m.has_ages() {
        return Err(AnalysisError::WrongBase(format!("{} is not an adding machine", m.name)));
    }
    let needed = pow2(tape.len() as u64);
    if needed > cap {
        return Err(AnalysisError::BudgetExceeded { what: format!("g({})", tape.len()), needed, cap });
    }
    let start = lpr_word(m, tape, 1);
    let target = lpr_word(m, tape, 3);
    constant_length_run(m, &start, |_| true, |w| *w == target, cap)
}

#[derive(Clone, Debug)]
pub struct GRun {
    pub n: u32,
    pub g: u64,
    /// History over `build(MachineKind::Z)`.
    pub history: Vec<SignedRule>,
    pub branches: Vec<Branch>,
}

/// g(n): the length of the length-preserving computation `L a0^n p(1) R -> L a0^n p(3) R` of Z({a}).
pub fn g_oracle(n: u32, budget: &Budget) -> Result<GRun, AnalysisError> {
    let z = build(MachineKind::Z);
    let a0 = Letter::positive(z.letter("a0"));
    let run = adding_run(&z, &vec![a0; n as usize], budget.max_steps)?;
    debug_assert_eq!(run.width, n as usize + 3);
    Ok(GRun { n, g: run.history.len() as u64, history: run.history, branches: run.branches })
}

fn g_cache() -> &'static Mutex<HashMap<u32, u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached g(n) under the default budget.
pub fn g_value(n: u32) -> Result<u64, AnalysisError> {
    if let Some(&g) = g_cache().lock().unwrap().get(&n) {
        return Ok(g);
    }
    let g = g_oracle(n, &Budget::default())?.g;
    g_cache().lock().unwrap().insert(n, g);
    Ok(g)
}

/// b(u) for a word `L u p v R` of an adding machine: the digits are the copy indices of the
/// tape letters read left to right, most significant first.
pub fn counter_value(m: &MachineSpec, w: &Word) -> Result<u64, AnalysisError> {
    let b = base(m, w);
    let parts: Vec<Option<usize>> = b.iter().map(|l| m.alphabet.part(l.id())).collect();
    if parts != [Some(1), Some(2), Some(3)] || b.iter().any(|l| l.is_inverse()) || m.hardware.parts != 3 {
        return Err(AnalysisError::WrongBase("counter needs base L p R".into()));
    }
    let mut value: u64 = 0;
    let mut digits = 0;
    for &l in w.letters() {
        if m.alphabet.kind(l.id()) != LetterKind::Tape {
            continue;
        }
        if l.is_inverse() {
            return Err(AnalysisError::MixedSigns);
        }
        digits += 1;
        if digits > 63 {
            return Err(AnalysisError::WrongBase("tape longer than 63 digits".into()));
        }
        let digit = m.alphabet.info(l.id()).copy.unwrap_or(0) as u64;
        value = (value << 1) | digit;
    }
    Ok(value)
}

/// Counter values at the start, at every return of `p(1)` next to `R`, and at the final `p(3)` word
/// of the g(n) computation.
pub fn counter_returns(n: u32, budget: &Budget) -> Result<Vec<u64>, AnalysisError> {
    let z = build(MachineKind::Z);
    let run = g_oracle(n, budget)?;
    let start = lpr_word(&z, &vec![Letter::positive(z.letter("a0")); n as usize], 1);
    let p1 = z.letter("p(1)");
    let mut values = vec![counter_value(&z, &start)?];
    let mut failure = None;
    let end = run_with(&z, &start, &run.history, |_, _, _, after| {
        let ls = after.letters();
        if ls.len() >= 2 && ls[ls.len() - 2].id() == p1 {
            match counter_value(&z, after) {
                Ok(v) => values.push(v),
                Err(e) => failure = failure.clone().or(Some(e)),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    values.push(counter_value(&z, &end)?);
    Ok(values)
}

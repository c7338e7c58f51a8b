use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::canonical::restriction_widths;
use super::{brief_history, g_value, is_long, AnalysisError};
use crate::engine::{base, inverse_history, sectors, widths, Computation, LetterKind, SignedRule, Word};
use crate::machines::{AgeTag, MachineSpec};

/// Statements checked instance by instance on materialized computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CheckerKey {
    /// Widths along a computation with base `k1 q2 k2` of ages (1)/(6) or (2)/(5) first fall, then rise.
    MonotoneSplit,
    /// Once the first step of an `L p R` computation lengthens the word, no later word is as short as the start.
    LengthGrowth,
    /// One step of Z(A) preserves the projection of the tape onto A.
    Projection,
    /// `|W_i| <= max(|W_0|, |W_t|)` for `L p R` computations.
    LprLengthBound,
    /// a-width bound and middle-segment identities for long computations.
    LongAWidth,
    /// a-width bound for long computations with base `k ... k`.
    CoveredWidth,
}

impl CheckerKey {
    pub const ALL: [CheckerKey; 6] = [
        CheckerKey::MonotoneSplit,
        CheckerKey::LengthGrowth,
        CheckerKey::Projection,
        CheckerKey::LprLengthBound,
        CheckerKey::LongAWidth,
        CheckerKey::CoveredWidth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckerKey::MonotoneSplit => "monotone-split",
            CheckerKey::LengthGrowth => "length-growth",
            CheckerKey::Projection => "projection",
            CheckerKey::LprLengthBound => "lpr-length-bound",
            CheckerKey::LongAWidth => "long-a-width",
            CheckerKey::CoveredWidth => "covered-width",
        }
    }
}

impl fmt::Display for CheckerKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckerKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckerKey::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown checker `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass { split: Option<usize> },
    Fail { step: usize, detail: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

fn inapplicable(reason: impl Into<String>) -> AnalysisError {
    AnalysisError::Inapplicable(reason.into())
}

fn fail(step: usize, detail: impl Into<String>) -> Result<Verdict, AnalysisError> {
    Ok(Verdict::Fail { step, detail: detail.into() })
}

/// Signed parts of the base of `w`.
fn base_parts(m: &MachineSpec, w: &Word) -> Vec<(usize, bool)> {
    base(m, w).iter().map(|l| (m.alphabet.part(l.id()).unwrap(), l.is_inverse())).collect()
}

fn is_adding(m: &MachineSpec) -> bool {
    m.hardware.parts == 3 && !m.has_ages()
}

const LPR: [(usize, bool); 3] = [(1, false), (2, false), (3, false)];

/// Checks one statement on one materialized computation.
pub fn check_lemma(key: CheckerKey, m: &MachineSpec, c: &Computation) -> Result<Verdict, AnalysisError> {
    let trace = c.trace.as_deref().ok_or_else(|| inapplicable("trace not materialized"))?;
    match key {
        CheckerKey::MonotoneSplit => monotone_split(m, trace, &c.history),
        CheckerKey::LengthGrowth => length_growth(m, trace),
        CheckerKey::Projection => projection(m, trace),
        CheckerKey::LprLengthBound => lpr_length_bound(m, trace),
        CheckerKey::LongAWidth => long_a_width(m, trace, &c.history),
        CheckerKey::CoveredWidth => covered_width(m, trace, &c.history),
    }
}

fn monotone_split(m: &MachineSpec, trace: &[Word], history: &[SignedRule]) -> Result<Verdict, AnalysisError> {
    if !m.has_ages() {
        return Err(inapplicable("machine has no ages"));
    }
    if base_parts(m, &trace[0]) != [(3, false), (4, false), (5, false)] {
        return Err(inapplicable("base is not k1 q2 k2"));
    }
    let ages: Vec<AgeTag> = history.iter().filter_map(|&r| m.age(r)).collect();
    let strict = if ages.iter().all(|a| matches!(a, AgeTag::A1 | AgeTag::A6)) {
        true
    } else if ages.iter().all(|a| matches!(a, AgeTag::A2 | AgeTag::A5)) {
        false
    } else {
        return Err(inapplicable("rules are not all of ages (1)/(6) or all of ages (2)/(5)"));
    };
    let norms: Vec<i64> = trace.iter().map(|w| widths(m, w).norm as i64).collect();
    let deltas: Vec<i64> = norms.windows(2).map(|p| p[1] - p[0]).collect();
    let falling = |d: i64| if strict { d < 0 } else { d <= 0 };
    let rising = |d: i64| if strict { d > 0 } else { d >= 0 };
    let split = deltas.iter().take_while(|&&d| falling(d)).count();
    if let Some(k) = deltas[split..].iter().position(|&d| !rising(d)) {
        return fail(split + k + 1, format!("width change {} after split {split}", deltas[split + k]));
    }
    Ok(Verdict::Pass { split: Some(split) })
}

fn length_growth(m: &MachineSpec, trace: &[Word]) -> Result<Verdict, AnalysisError> {
    if !is_adding(m) || base_parts(m, &trace[0]) != LPR {
        return Err(inapplicable("base is not L p R"));
    }
    if trace.len() < 2 || trace[1].len() <= trace[0].len() {
        return Err(inapplicable("first step does not lengthen the word"));
    }
    let len0 = trace[0].len();
    match trace.iter().skip(1).position(|w| w.len() <= len0) {
        Some(k) => fail(k + 1, format!("|W_{}| = {} <= |W_0| = {len0}", k + 1, trace[k + 1].len())),
        None => Ok(Verdict::Pass { split: None }),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum TapeForm {
    /// L u p v R, invariant uv
    Lpr,
    /// p^-1 u p v R, invariant v^-1 u v
    Left,
    /// L v p u p^-1, invariant v u v^-1
    Right,
}

/// Projection onto the root alphabet of a sequence of a-letters, freely reduced.
fn project(m: &MachineSpec, letters: &[crate::engine::Letter]) -> Vec<(String, bool)> {
    let mut out: Vec<(String, bool)> = Vec::with_capacity(letters.len());
    for &l in letters {
        let root = m.alphabet.info(l.id()).root.clone().unwrap_or_else(|| m.alphabet.name(l.id()).to_string());
        if out.last().is_some_and(|(r, inv)| *r == root && *inv != l.is_inverse()) {
            out.pop();
        } else {
            out.push((root, l.is_inverse()));
        }
    }
    out
}

fn inverse_letters(ls: &[crate::engine::Letter]) -> Vec<crate::engine::Letter> {
    ls.iter().rev().map(|l| l.inverse()).collect()
}

pub(crate) fn tape_form(m: &MachineSpec, w: &Word) -> Option<(TapeForm, Vec<(String, bool)>)> {
    let parts = base_parts(m, w);
    let letters = w.letters();
    let secs = sectors(m, w);
    let seg = |i: usize| &letters[secs[i].range.clone()];
    if parts == LPR {
        let tape: Vec<_> = letters.iter().copied().filter(|l| m.alphabet.kind(l.id()) == LetterKind::Tape).collect();
        return Some((TapeForm::Lpr, project(m, &tape)));
    }
    if parts == [(2, true), (2, false), (3, false)] && seg(0).is_empty() {
        let (u, v) = (seg(1), seg(2));
        let mut x = inverse_letters(v);
        x.extend_from_slice(u);
        x.extend_from_slice(v);
        return Some((TapeForm::Left, project(m, &x)));
    }
    if parts == [(1, false), (2, false), (2, true)] && seg(3).is_empty() {
        let (v, u) = (seg(1), seg(2));
        let mut x = v.to_vec();
        x.extend_from_slice(u);
        x.extend(inverse_letters(v));
        return Some((TapeForm::Right, project(m, &x)));
    }
    None
}

fn projection(m: &MachineSpec, trace: &[Word]) -> Result<Verdict, AnalysisError> {
    if !is_adding(m) {
        return Err(inapplicable("not an adding machine"));
    }
    let mirror = m.name.ends_with("mir");
    let forms: Vec<_> = trace.iter().map(|w| tape_form(m, w)).collect();
    let Some(Some((kind, first))) = forms.first() else {
        return Err(inapplicable("start word has none of the bases L p R, p^-1 p R, L p p^-1"));
    };
    if mirror && *kind != TapeForm::Lpr {
        return Err(inapplicable("mirror machine: only base L p R"));
    }
    for (i, f) in forms.iter().enumerate() {
        match f {
            Some((k, proj)) if k == kind => {
                if proj != first {
                    return fail(i, "projection onto A changed");
                }
            }
            _ => return Err(inapplicable(format!("word {i} leaves the form of the start word"))),
        }
    }
    Ok(Verdict::Pass { split: None })
}

fn lpr_length_bound(m: &MachineSpec, trace: &[Word]) -> Result<Verdict, AnalysisError> {
    if !is_adding(m) || base_parts(m, &trace[0]) != LPR {
        return Err(inapplicable("base is not L p R"));
    }
    let bound = trace[0].len().max(trace[trace.len() - 1].len());
    match trace.iter().position(|w| w.len() > bound) {
        Some(i) => fail(i, format!("|W_{i}| = {} exceeds {bound}", trace[i].len())),
        None => Ok(Verdict::Pass { split: None }),
    }
}

/// Trace and history of a long computation, inverted if needed so the chain reads forward.
fn oriented(m: &MachineSpec, trace: &[Word], history: &[SignedRule]) -> Result<(Vec<Word>, Vec<SignedRule>), AnalysisError> {
    if !m.has_ages() || !is_long(m, history) {
        return Err(inapplicable("computation is not long"));
    }
    if brief_history(m, history)?.contains(&AgeTag::CHAIN) {
        Ok((trace.to_vec(), history.to_vec()))
    } else {
        Ok((trace.iter().rev().cloned().collect(), inverse_history(history)))
    }
}

const LONG_BASES: [&[usize]; 3] = [&[1, 2, 3, 4, 5], &[3, 4, 5, 1, 2, 3], &[5, 1, 2, 3, 4, 5]];

fn long_a_width(m: &MachineSpec, trace: &[Word], history: &[SignedRule]) -> Result<Verdict, AnalysisError> {
    let parts = base_parts(m, &trace[0]);
    if parts.iter().any(|p| p.1) || !LONG_BASES.iter().any(|b| parts.iter().map(|p| p.0).eq(b.iter().copied())) {
        return Err(inapplicable("base is not k0 q1 k1 q2 k2 or a rotation"));
    }
    let (trace, history) = oriented(m, trace, history)?;
    let t = history.len();
    let a: Vec<usize> = trace.iter().map(|w| widths(m, w).a_width).collect();
    let bound = (a[1].max(a[t]) as f64).max(2.0 * (t as f64).log2());
    if let Some(i) = (1..=t).find(|&i| a[i] as f64 > bound) {
        return fail(i, format!("|W_{i}|_a = {} exceeds {bound:.3}", a[i]));
    }

    let brief = brief_history(m, &history)?;
    let k = brief.find(&AgeTag::CHAIN).expect("oriented");
    let offset = |run: usize| brief.runs[..run].iter().map(|r| r.1).sum::<usize>();
    let l = offset(k + 1);
    let last = offset(k + 9);
    let count = last - l + 1;
    let n = restriction_widths(m, &trace[l]).0 as u32;
    let g = g_value(n)?;
    let gg = g_value(u32::try_from(g).map_err(|_| inapplicable("g(n) too large"))?)?;
    if count as u64 != 5 + 2 * g + 2 * gg {
        return fail(l, format!("(12)..(56) spans {count} rules, expected {}", 5 + 2 * g + 2 * gg));
    }
    let window = &trace[l..=last + 1];
    let mid = window.iter().map(|w| widths(m, w).a_width).max().unwrap_or(0);
    let left = window.iter().map(|w| restriction_widths(m, w).0).max().unwrap_or(0);
    let right = window.iter().map(|w| restriction_widths(m, w).1).max().unwrap_or(0);
    if mid as u64 != n as u64 + g || left as u64 != n as u64 || right as u64 != g {
        return fail(l, format!("middle a-width {mid} (restrictions {left}, {right}) with n = {n}, g(n) = {g}"));
    }
    Ok(Verdict::Pass { split: Some(l) })
}

fn covered_width(m: &MachineSpec, trace: &[Word], history: &[SignedRule]) -> Result<Verdict, AnalysisError> {
    let b = base(m, &trace[0]);
    let stationary = |l: &crate::engine::Letter| m.hardware.is_stationary(m.alphabet.part(l.id()).unwrap());
    let same_sign = b.iter().all(|l| l.is_inverse() == b[0].is_inverse());
    if b.len() < 2 || !stationary(&b[0]) || b.first() != b.last() || !same_sign {
        return Err(inapplicable("base is not k ... k with equal end letters"));
    }
    let (trace, _) = oriented(m, trace, history)?;
    let t = trace.len() - 1;
    let a: Vec<usize> = trace.iter().map(|w| widths(m, w).a_width).collect();
    let bound = (a[1] + a[t]) as f64 + b.len() as f64 * (t as f64).log2();
    match (1..=t).find(|&i| a[i] as f64 > bound) {
        Some(i) => fail(i, format!("|W_{i}|_a = {} exceeds {bound:.3}", a[i])),
        None => Ok(Verdict::Pass { split: None }),
    }
}

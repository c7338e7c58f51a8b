use std::ops::Range;

use serde::Serialize;

use super::oracle::adding_run;
use super::{brief_history, g_oracle, pow2, AnalysisError};
use crate::config::Budget;
use crate::engine::{inverse_history, run_with, sectors, widths, Letter, RunStats, SignedRule, Word};
use crate::machines::{build, AgeTag, MachineKind, MachineSpec, ZM_PREFIX, Z_PREFIX};

/// The long computation of M from `k0 a0^n q1(1)@1 k1 q2@1 k2` to `k0 a0^n q1(1)@6 k1 q2@6 k2`.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub n: u32,
    pub g: u64,
    /// g(g(n))
    pub gg: u64,
    pub history: Vec<SignedRule>,
    /// Lengths of the eleven age segments, in chain order.
    pub segments: Vec<usize>,
}

impl Canonical {
    /// 5 + 4g(n) + 2g(g(n))
    pub fn expected_len(&self) -> u64 {
        5 + 4 * self.g + 2 * self.gg
    }

    /// History indices from the (12) rule through the (56) rule.
    pub fn middle(&self) -> Range<usize> {
        let start = self.segments[0];
        let end = self.segments[..10].iter().sum::<usize>();
        start..end
    }
}

fn tape_word(m: &MachineSpec, n: u32, q1: &str, q2: &str) -> Word {
    let mut letters = vec![Letter::positive(m.letter("k0"))];
    letters.extend(std::iter::repeat_n(Letter::positive(m.letter("a0")), n as usize));
    for name in [q1, "k1", q2, "k2"] {
        letters.push(Letter::positive(m.letter(name)));
    }
    Word::new(letters)
}

pub fn canonical_start(m: &MachineSpec, n: u32) -> Word {
    tape_word(m, n, "q1(1)@1", "q2@1")
}

pub fn canonical_end(m: &MachineSpec, n: u32) -> Word {
    tape_word(m, n, "q1(1)@6", "q2@6")
}

/// Renames a rule of an adding machine to its aged copy in M.
fn aged(m: &MachineSpec, src: &MachineSpec, prefix: &str, r: SignedRule, age: u8) -> SignedRule {
    let name = src.rules()[r.index()].name.strip_prefix(prefix).expect("adding machine rule id");
    let id = m.rule_id(&format!("{name}@{age}")).expect("aged copy exists");
    SignedRule::new(id, r.inverse)
}

fn aged_all(m: &MachineSpec, src: &MachineSpec, prefix: &str, h: &[SignedRule], age: u8) -> Vec<SignedRule> {
    h.iter().map(|&r| aged(m, src, prefix, r, age)).collect()
}

/// Builds the canonical history for `n`, refusing when its length provably exceeds `cap`.
///
/// Ages (1), (5) replay the g(n) computation f of Z({a}), ages (2), (6) its inverse; age (3) runs the
/// length-preserving computation F of the mirror machine on the recorded history word, age (4) its inverse.
pub fn canonical_history(m: &MachineSpec, n: u32, cap: u64) -> Result<Canonical, AnalysisError> {
    let z = build(MachineKind::Z);
    let zm = build(MachineKind::Zmir);
    let f = g_oracle(n, &Budget { max_steps: cap, ..Budget::default() })?.history;
    let g = f.len() as u64;
    let needed = pow2(g).saturating_mul(2).saturating_add(5 + 4 * g);
    if needed > cap {
        return Err(AnalysisError::BudgetExceeded { what: format!("canonical history for n={n}"), needed, cap });
    }
    let conn = |name: &str| SignedRule::positive(m.rule_id(name).expect("connecting rule"));
    let f_inv = inverse_history(&f);

    let mut history = aged_all(m, &z, Z_PREFIX, &f, 1);
    history.push(conn("c@12"));
    history.extend(aged_all(m, &z, Z_PREFIX, &f_inv, 2));
    history.push(conn("c@23"));

    // the history word now sits to the right of q2
    let w = run_with(m, &canonical_start(m, n), &history, |_, _, _, _| {})?;
    let q2 = w.letters().iter().position(|l| m.alphabet.name(l.id()) == "q2(1)@3").expect("q2 after (23)");
    let tape: Vec<Letter> = w.letters()[q2 + 1..w.len() - 1]
        .iter()
        .map(|&l| Letter::new(zm.letter(m.alphabet.name(l.id())), l.is_inverse()))
        .collect();
    let big_f = adding_run(&zm, &tape, cap)?.history;
    let big_f_inv = inverse_history(&big_f);
    let gg = big_f.len() as u64;

    history.extend(aged_all(m, &zm, ZM_PREFIX, &big_f, 3));
    history.push(conn("c@34"));
    history.extend(aged_all(m, &zm, ZM_PREFIX, &big_f_inv, 4));
    history.push(conn("c@45"));
    history.extend(aged_all(m, &z, Z_PREFIX, &f, 5));
    history.push(conn("c@56"));
    history.extend(aged_all(m, &z, Z_PREFIX, &f_inv, 6));

    let (g_len, gg_len) = (f.len(), big_f.len());
    let segments = vec![g_len, 1, g_len, 1, gg_len, 1, gg_len, 1, g_len, 1, g_len];
    Ok(Canonical { n, g, gg, history, segments })
}

/// a-widths of the restrictions to the subbases `k0 q1 k1` and `k1 q2 k2`.
pub fn restriction_widths(m: &MachineSpec, w: &Word) -> (usize, usize) {
    let mut left = 0;
    let mut right = 0;
    for s in sectors(m, w) {
        match s.index {
            Some(1) | Some(2) => left += s.range.len(),
            Some(3) | Some(4) => right += s.range.len(),
            _ => {}
        }
    }
    (left, right)
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalReport {
    pub n: u32,
    pub g: u64,
    pub gg: u64,
    pub len: u64,
    pub expected_len: u64,
    pub brief: String,
    pub brief_is_chain: bool,
    pub end: String,
    pub end_ok: bool,
    pub middle_len: usize,
    pub middle_a_width: usize,
    pub left_width: usize,
    pub right_width: usize,
    pub stats: RunStats,
}

impl CanonicalReport {
    /// All identities the canonical computation is expected to satisfy.
    pub fn holds(&self) -> bool {
        let n = self.n as u64;
        self.len == self.expected_len
            && self.brief_is_chain
            && self.end_ok
            && self.middle_a_width as u64 == n + self.g
            && self.left_width as u64 == n
            && self.right_width as u64 == self.g
    }
}

/// Runs the canonical history without keeping a trace and measures the middle segment.
pub fn replay_canonical(m: &MachineSpec, c: &Canonical) -> Result<CanonicalReport, AnalysisError> {
    let start = canonical_start(m, c.n);
    let middle = c.middle();
    let (mut a_width, mut left, mut right) = (0, 0, 0);
    let mut note = |w: &Word| {
        a_width = a_width.max(widths(m, w).a_width);
        let (l, r) = restriction_widths(m, w);
        left = left.max(l);
        right = right.max(r);
    };
    let w0 = widths(m, &start);
    let (mut max_len, mut argmax, mut max_a, mut max_norm, mut min_len) = (w0.len, 0, w0.a_width, w0.norm, w0.len);
    let end = run_with(m, &start, &c.history, |step, _, before, after| {
        let i = step - 1;
        if i == middle.start {
            note(before);
        }
        if middle.contains(&i) {
            note(after);
        }
        let wd = widths(m, after);
        if wd.len > max_len {
            max_len = wd.len;
            argmax = step;
        }
        min_len = min_len.min(wd.len);
        max_a = max_a.max(wd.a_width);
        max_norm = max_norm.max(wd.norm);
    })?;
    let stats = RunStats { steps: c.history.len(), max_len, argmax_len: argmax, max_a_width: max_a, max_norm, min_len };
    let brief = brief_history(m, &c.history)?;
    Ok(CanonicalReport {
        n: c.n,
        g: c.g,
        gg: c.gg,
        len: c.history.len() as u64,
        expected_len: c.expected_len(),
        brief_is_chain: brief.tags() == AgeTag::CHAIN,
        brief: brief.to_string(),
        end: m.format_word(&end),
        end_ok: end == canonical_end(m, c.n),
        middle_len: middle.len(),
        middle_a_width: a_width,
        left_width: left,
        right_width: right,
        stats,
    })
}

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::canonical::{canonical_history, canonical_start, Canonical};
use super::lemmas::tape_form;
use super::{brief_history, check_lemma, is_long, AnalysisError, CheckerKey, Verdict};
use crate::diagram::log_prime;
use crate::engine::{
    applicable, apply_rule, enumerate_applicable, inverse_history, run_history, widths, Computation, Letter, SignedRule,
    TraceMode, Word,
};
use crate::machines::{build, AgeTag, MachineKind, MachineSpec};
use crate::sampling::{self, fill_base, random_a_word, random_walk_after, sector_letters};

/// Bound asserted on max |W_i| / max(|W_0|, |W_t|) over short computations.
pub const SHORT_RATIO_BOUND: f64 = 20.0;
/// Constant used for `|W_0|_a + |W_t|_a + 1 >= c0 log′log′t`.
pub const LOGLOG_C0: f64 = 0.25;

/// Searches for violations of the impossibility-style statements about M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKey {
    /// A connecting rule undone after rules of one age only.
    Return,
    /// Computations framed by connecting rules are regular.
    #[value(name = "two-connecting-1")]
    #[serde(rename = "two-connecting-1")]
    TwoConnecting1,
    /// The word right after a connecting rule has minimal width.
    #[value(name = "two-connecting-2")]
    #[serde(rename = "two-connecting-2")]
    TwoConnecting2,
    /// Both (12) and (23) occur only over bases `k q k`.
    ConnectingPair,
    /// Short computations stay within a constant factor of their end words.
    ShortBound,
    /// End words of long computations are at least log log of the length.
    Loglog,
}

impl SearchKey {
    pub const ALL: [SearchKey; 6] = [
        SearchKey::Return,
        SearchKey::TwoConnecting1,
        SearchKey::TwoConnecting2,
        SearchKey::ConnectingPair,
        SearchKey::ShortBound,
        SearchKey::Loglog,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SearchKey::Return => "return",
            SearchKey::TwoConnecting1 => "two-connecting-1",
            SearchKey::TwoConnecting2 => "two-connecting-2",
            SearchKey::ConnectingPair => "connecting-pair",
            SearchKey::ShortBound => "short-bound",
            SearchKey::Loglog => "loglog",
        }
    }
}

impl fmt::Display for SearchKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SearchKey::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown search `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Longest a-word placed in a sector of a start word.
    pub width: usize,
    /// Longest history.
    pub length: usize,
    pub samples: u64,
    pub seed: u64,
    /// Samples per batch; every batch draws from its own stream.
    pub batch: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { width: 4, length: 30, samples: 100_000, seed: 0, batch: 2_000 }
    }
}

/// One JSON Lines record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub lemma: String,
    pub batch: u64,
    pub samples: u64,
    /// Samples (or windows of samples) meeting the hypothesis.
    pub instances: u64,
    pub violations: u64,
    pub extremal: BTreeMap<String, f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

impl BatchReport {
    fn new(lemma: &str, batch: u64, seed: u64) -> Self {
        BatchReport {
            lemma: lemma.to_string(),
            batch,
            samples: 0,
            instances: 0,
            violations: 0,
            extremal: BTreeMap::new(),
            seed,
            first_violation: None,
        }
    }

    /// Keys ending in `_min` keep the minimum, all others the maximum.
    fn note(&mut self, key: &str, value: f64) {
        let keep_min = key.ends_with("_min");
        self.extremal
            .entry(key.to_string())
            .and_modify(|v| *v = if keep_min { v.min(value) } else { v.max(value) })
            .or_insert(value);
    }

    fn violation(&mut self, detail: impl FnOnce() -> String) {
        self.violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(detail());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub lemma: String,
    pub samples: u64,
    pub instances: u64,
    pub violations: u64,
    pub extremal: BTreeMap<String, f64>,
    pub seed: u64,
    pub first_violation: Option<String>,
}

/// Associative merge of batch reports, in batch order.
pub fn merge_reports(reports: &[BatchReport]) -> Option<SuiteSummary> {
    let first = reports.first()?;
    let mut acc = BatchReport::new(&first.lemma, 0, first.seed);
    let mut sorted: Vec<&BatchReport> = reports.iter().collect();
    sorted.sort_by_key(|r| r.batch);
    for r in sorted {
        acc.samples += r.samples;
        acc.instances += r.instances;
        acc.violations += r.violations;
        for (k, &v) in &r.extremal {
            acc.note(k, v);
        }
        if acc.first_violation.is_none() {
            acc.first_violation = r.first_violation.clone();
        }
    }
    Some(SuiteSummary {
        lemma: acc.lemma,
        samples: acc.samples,
        instances: acc.instances,
        violations: acc.violations,
        extremal: acc.extremal,
        seed: acc.seed,
        first_violation: acc.first_violation,
    })
}

/// Machines and canonical computations shared by all batches.
struct Context {
    z: MachineSpec,
    zm: MachineSpec,
    m: MachineSpec,
    canonical: Vec<Canonical>,
}

impl Context {
    fn machine(&self, kind: MachineKind) -> &MachineSpec {
        match kind {
            MachineKind::Z => &self.z,
            MachineKind::Zmir => &self.zm,
            MachineKind::Main => &self.m,
        }
    }

    fn new(long_n: &[u32]) -> Result<Self, AnalysisError> {
        let m = build(MachineKind::Main);
        let canonical = long_n.iter().map(|&n| canonical_history(&m, n, 1_000_000)).collect::<Result<_, _>>()?;
        Ok(Context { z: build(MachineKind::Z), zm: build(MachineKind::Zmir), m, canonical })
    }
}

fn batches(samples: u64, batch: u64) -> Vec<(u64, u64)> {
    let batch = batch.max(1);
    (0..samples.div_ceil(batch)).map(|b| (b, batch.min(samples - b * batch))).collect()
}

fn walk(
    m: &MachineSpec,
    rng: &mut ChaCha8Rng,
    start: Word,
    prev: Option<SignedRule>,
    len: usize,
    allow: impl Fn(SignedRule) -> bool,
) -> (Vec<SignedRule>, Vec<Word>) {
    random_walk_after(m, rng, &start, prev, len, allow)
}

fn materialize(m: &MachineSpec, start: &Word, history: &[SignedRule]) -> Computation {
    run_history(m, start, history, TraceMode::Full).expect("sampled history replays")
}

// ---------------------------------------------------------------------------------------------
// samplers for the checkers

fn lpr_start(m: &MachineSpec, rng: &mut ChaCha8Rng, width: usize) -> Word {
    loop {
        let state = rng.gen_range(1..=3);
        let b = [
            Letter::positive(m.letter("L")),
            Letter::positive(m.letter(&format!("p({state})"))),
            Letter::positive(m.letter("R")),
        ];
        if let Some(w) = fill_base(m, &b, |s| random_a_word(rng, &sector_letters(m, s, None), width, false)) {
            return w;
        }
    }
}

fn monotone_sample(ctx: &Context, rng: &mut ChaCha8Rng, width: usize, length: usize) -> Computation {
    let m = &ctx.m;
    let age = *[1u8, 2, 5, 6].choose(rng).unwrap();
    let tag = AgeTag::CHAIN[[0, 2, 8, 10][[1u8, 2, 5, 6].iter().position(|&a| a == age).unwrap()]];
    let q2 = m.letter(&crate::machines::q2_name(None, age));
    let b = [Letter::positive(m.letter("k1")), Letter::positive(q2), Letter::positive(m.letter("k2"))];
    let w = loop {
        let filled = fill_base(m, &b, |s| {
            if s == 4 && matches!(age, 1 | 6) {
                return Vec::new();
            }
            random_a_word(rng, &sector_letters(m, s, None), width, false)
        });
        if let Some(w) = filled {
            break w;
        }
    };
    let len = rng.gen_range(0..=length);
    let (history, _) = walk(m, rng, w.clone(), None, len, |r| m.age(r) == Some(tag));
    materialize(m, &w, &history)
}

fn lpr_sample(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
    width: usize,
    length: usize,
    grow_first: bool,
) -> Option<(Computation, MachineKind)> {
    let kind = if rng.gen_bool(0.5) { MachineKind::Z } else { MachineKind::Zmir };
    let m = ctx.machine(kind);
    let w = lpr_start(m, rng, width);
    let len = rng.gen_range(1..=length);
    let first = if grow_first {
        let growing: Vec<SignedRule> = enumerate_applicable(m, &w)
            .into_iter()
            .filter(|&r| apply_rule(m, &w, r).map(|x| x.len() > w.len()).unwrap_or(false))
            .collect();
        Some(*growing.choose(rng)?)
    } else {
        None
    };
    let (history, _) = match first {
        Some(r) => {
            let w1 = apply_rule(m, &w, r).ok()?;
            let (mut h, _) = walk(m, rng, w1, Some(r), len - 1, |_| true);
            h.insert(0, r);
            (h, ())
        }
        None => (walk(m, rng, w.clone(), None, len, |_| true).0, ()),
    };
    Some((materialize(m, &w, &history), kind))
}

fn projection_sample(ctx: &Context, rng: &mut ChaCha8Rng, width: usize, length: usize) -> Option<Computation> {
    let m = &ctx.z;
    let state = m.letter(&format!("p({})", rng.gen_range(1..=3)));
    let (l, p, r) = (Letter::positive(m.letter("L")), Letter::positive(state), Letter::positive(m.letter("R")));
    let b = match rng.gen_range(0..3) {
        0 => vec![l, p, r],
        1 => vec![p.inverse(), p, r],
        _ => vec![l, p, p.inverse()],
    };
    let last = b.len();
    let w = fill_base(m, &b, |s| {
        let _ = last;
        random_a_word(rng, &sector_letters(m, s, None), width, false)
    })?;
    // outer a-words must be empty for the two-head forms
    let form = tape_form(m, &w)?.0;
    let len = rng.gen_range(1..=length);
    let mut history = Vec::new();
    let mut current = w.clone();
    for _ in 0..len {
        let prev = history.last().copied();
        let options: Vec<(SignedRule, Word)> = enumerate_applicable(m, &current)
            .into_iter()
            .filter(|&x: &SignedRule| Some(x.inverse()) != prev)
            .filter_map(|x| {
                let next = apply_rule(m, &current, x).ok()?;
                (tape_form(m, &next)?.0 == form).then_some((x, next))
            })
            .collect();
        let Some((x, next)) = options.choose(rng).cloned() else { break };
        history.push(x);
        current = next;
    }
    if history.is_empty() {
        return None;
    }
    Some(materialize(m, &w, &history))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LongBase {
    Standard,
    /// k1 q2 k2 k0 q1 k1
    Rotated,
    /// k2 k0 q1 k1 q2 k2
    Shifted,
    /// k0 q1 k1 q2 k2 k0
    Cyclic,
    /// k0 q1 k1 q2 k2 k0 q1 k1 q2 k2 k0
    Double,
}

fn long_start(m: &MachineSpec, n: u32, shape: LongBase) -> Word {
    let std = canonical_start(m, n).into_letters();
    // std = k0 a0^n q1 k1 q2 k2
    let head = &std[..std.len() - 3];
    let tail = &std[std.len() - 3..];
    let k = |name: &str| Letter::positive(m.letter(name));
    let letters: Vec<Letter> = match shape {
        LongBase::Standard => std.clone(),
        LongBase::Rotated => tail.iter().chain(head).copied().chain([k("k1")]).collect(),
        LongBase::Shifted => [k("k2")].into_iter().chain(std.iter().copied()).collect(),
        LongBase::Cyclic => std.iter().copied().chain([k("k0")]).collect(),
        LongBase::Double => std.iter().chain(&std).copied().chain([k("k0")]).collect(),
    };
    Word::new(letters)
}

/// A long computation: the canonical history for some n on one of the bases, extended by
/// random reduced walks at both ends and possibly inverted.
fn long_sample(ctx: &Context, rng: &mut ChaCha8Rng, shapes: &[LongBase], extension: usize) -> Computation {
    let m = &ctx.m;
    let canon = ctx.canonical.choose(rng).unwrap();
    let shape = *shapes.choose(rng).unwrap();
    let w0 = long_start(m, canon.n, shape);
    let core = &canon.history;
    let end = materialize(m, &w0, core).end;

    let pre_len = rng.gen_range(0..=extension);
    let (pre, pre_words) = walk(m, rng, w0.clone(), None, pre_len, |_| true);
    let (pre, start) = if pre.first() == core.first() { (Vec::new(), w0) } else { (pre, pre_words.last().unwrap().clone()) };
    let post_len = rng.gen_range(0..=extension);
    let (post, _) = walk(m, rng, end, core.last().copied(), post_len, |_| true);

    let mut history = inverse_history(&pre);
    history.extend_from_slice(core);
    history.extend(post);
    let c = materialize(m, &start, &history);
    if rng.gen_bool(0.5) {
        let h = inverse_history(&c.history);
        materialize(m, &c.end, &h)
    } else {
        c
    }
}

fn checker_sample(key: CheckerKey, ctx: &Context, rng: &mut ChaCha8Rng) -> Option<(Computation, MachineKind)> {
    let main = |c| Some((c, MachineKind::Main));
    match key {
        CheckerKey::MonotoneSplit => main(monotone_sample(ctx, rng, 4, 30)),
        CheckerKey::LengthGrowth => lpr_sample(ctx, rng, 4, 30, true),
        CheckerKey::LprLengthBound => lpr_sample(ctx, rng, 4, 30, false),
        CheckerKey::Projection => Some((projection_sample(ctx, rng, 4, 30)?, MachineKind::Z)),
        CheckerKey::LongAWidth => {
            main(long_sample(ctx, rng, &[LongBase::Standard, LongBase::Rotated, LongBase::Shifted], 10))
        }
        CheckerKey::CoveredWidth => main(long_sample(ctx, rng, &[LongBase::Cyclic, LongBase::Double], 10)),
    }
}

/// Runs a checker on `samples` seeded hypothesis-satisfying computations.
pub fn run_checker_suite(key: CheckerKey, samples: u64, seed: u64, batch: u64) -> Result<Vec<BatchReport>, AnalysisError> {
    let ctx = Context::new(&[0, 1])?;
    let out: Vec<BatchReport> = batches(samples, batch)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = sampling::rng(seed, b);
            let mut report = BatchReport::new(key.as_str(), b, seed);
            let mut rejected = 0u64;
            while report.samples < count {
                let Some((c, kind)) = checker_sample(key, &ctx, &mut rng) else {
                    rejected += 1;
                    continue;
                };
                let m = ctx.machine(kind);
                match check_lemma(key, m, &c) {
                    Ok(verdict) => {
                        report.samples += 1;
                        report.instances += 1;
                        report.note("steps_max", c.len() as f64);
                        if let Verdict::Fail { step, detail } = verdict {
                            report.violation(|| format!("step {step}: {detail}; start {}", m.format_word(&c.start)));
                        }
                    }
                    Err(AnalysisError::Inapplicable(_)) => rejected += 1,
                    Err(e) => {
                        report.samples += 1;
                        report.violation(|| e.to_string());
                    }
                }
            }
            report.note("rejected", rejected as f64);
            report
        })
        .collect();
    Ok(out)
}

// ---------------------------------------------------------------------------------------------
// bounded searches over short computations of M

/// Signed parts of a base shape.
type Shape = &'static [(usize, bool)];

const KQQ: [Shape; 2] = [&[(1, false), (2, false), (2, true)], &[(3, false), (4, false), (4, true)]];
const QQQ: [Shape; 2] = [&[(2, false), (2, true), (2, false)], &[(4, false), (4, true), (4, false)]];
const KQK: [Shape; 2] = [&[(1, false), (2, false), (3, false)], &[(3, false), (4, false), (5, false)]];
const QQK: [Shape; 2] = [&[(2, true), (2, false), (3, false)], &[(4, true), (4, false), (5, false)]];
const KINV_K: [Shape; 3] = [&[(1, true), (1, false)], &[(3, true), (3, false)], &[(5, true), (5, false)]];
const K_KINV: [Shape; 3] = [&[(1, false), (1, true)], &[(3, false), (3, true)], &[(5, false), (5, true)]];
const K2K0: [Shape; 1] = [&[(5, false), (1, false)]];

fn shapes_for(key: SearchKey) -> Vec<Shape> {
    let mut v: Vec<Shape> = Vec::new();
    match key {
        SearchKey::Return => {
            for s in [&KQQ[..], &QQQ, &KQK, &QQK] {
                v.extend_from_slice(s);
            }
        }
        SearchKey::TwoConnecting1 | SearchKey::TwoConnecting2 => {
            for s in [&KQQ[..], &QQQ, &KQK, &QQK, &KINV_K, &K_KINV, &K2K0] {
                v.extend_from_slice(s);
            }
        }
        // without a q-letter every word is fixed by every applicable rule, so `k0 a0^-2 k0^-1` admits
        // c@12 c@23 trivially; only bases carrying a head are searched
        SearchKey::ConnectingPair => {
            for s in [&KQQ[..], &QQQ, &KQK, &QQK] {
                v.extend_from_slice(s);
            }
        }
        SearchKey::ShortBound => {
            for s in [&KQQ[..], &QQQ, &KQK, &QQK, &KINV_K, &K_KINV] {
                v.extend_from_slice(s);
            }
        }
        SearchKey::Loglog => {}
    }
    v
}

fn is_kqk(shape: Shape) -> bool {
    KQK.contains(&shape)
}

fn is_qqk(shape: Shape) -> bool {
    QQK.contains(&shape)
}

fn head_part(shape: Shape) -> Option<usize> {
    shape.iter().map(|p| p.0).find(|&p| p == 2 || p == 4)
}

/// A start word on `shape`: states and sectors drawn to fit `first` when given, at random otherwise.
fn shape_word(m: &MachineSpec, rng: &mut ChaCha8Rng, shape: Shape, first: Option<SignedRule>, width: usize) -> Option<Word> {
    let mut chosen: [Option<crate::engine::LetterId>; 6] = [None; 6];
    for &(part, _) in shape {
        if chosen[part].is_none() {
            chosen[part] = Some(match first {
                Some(r) => m.rule(r).part(part).domain,
                None => *m.hardware.states[part - 1].choose(rng).unwrap(),
            });
        }
    }
    let b: Vec<Letter> = shape.iter().map(|&(part, inv)| Letter::new(chosen[part].unwrap(), inv)).collect();
    let permits = first.map(|r| m.rule(r).permits.clone());
    let w = fill_base(m, &b, |s| {
        let letters = sector_letters(m, s, permits.as_ref().map(|p| &p[s]));
        random_a_word(rng, &letters, width, false)
    })?;
    match first {
        Some(r) if !applicable(m, &w, r) => None,
        _ => Some(w),
    }
}

struct Walk {
    shape: Shape,
    history: Vec<SignedRule>,
    words: Vec<Word>,
}

fn connecting(m: &MachineSpec) -> Vec<SignedRule> {
    m.signed_rules().filter(|&r| m.age(r).is_some_and(AgeTag::is_connecting)).collect()
}

fn short_walk(m: &MachineSpec, conn: &[SignedRule], shapes: &[Shape], rng: &mut ChaCha8Rng, budget: &SearchBudget, lead: bool) -> Walk {
    loop {
        let shape = *shapes.choose(rng).unwrap();
        let first = if lead || rng.gen_bool(0.5) { Some(*conn.choose(rng).unwrap()) } else { None };
        let Some(w) = shape_word(m, rng, shape, first, budget.width) else { continue };
        let len = rng.gen_range(1..=budget.length);
        let (history, words) = match first {
            Some(r) => {
                let w1 = apply_rule(m, &w, r).expect("checked applicable");
                let (mut h, mut ws) = walk(m, rng, w1, Some(r), len - 1, |_| true);
                h.insert(0, r);
                ws.insert(0, w);
                (h, ws)
            }
            None => walk(m, rng, w, None, len, |_| true),
        };
        return Walk { shape, history, words };
    }
}

fn is_conn(m: &MachineSpec, r: SignedRule) -> bool {
    m.age(r).is_some_and(AgeTag::is_connecting)
}

fn describe(m: &MachineSpec, w: &Walk, a: usize, b: usize) -> String {
    format!("start {} history {}", m.format_word(&w.words[a]), m.format_history(&w.history[a..b]))
}

fn search_return(m: &MachineSpec, w: &Walk, report: &mut BatchReport) {
    let h = &w.history;
    for a in 0..h.len() {
        if !is_conn(m, h[a]) {
            continue;
        }
        let eta_inv = h[a].inverse();
        // h[a+1..b] has no connecting rules; test η^-1 after each prefix of it
        let mut b = a + 1;
        while b < h.len() && !is_conn(m, h[b]) {
            b += 1;
            if applicable(m, &w.words[b], eta_inv) {
                report.instances += 1;
                let inner = &h[a + 1..b];
                let ages: Vec<AgeTag> = inner.iter().filter_map(|&r| m.age(r)).collect();
                let ok_base = is_kqk(w.shape) || is_qqk(w.shape);
                let ok_ages = match head_part(w.shape) {
                    Some(2) => ages.iter().all(|t| matches!(t, AgeTag::A3 | AgeTag::A4)),
                    Some(4) => ages.iter().all(|t| matches!(t, AgeTag::A1 | AgeTag::A6)),
                    _ => true,
                };
                if !(ok_base && ok_ages) {
                    report.violation(|| format!("{} then {}", describe(m, w, a, b), m.rule_name(eta_inv)));
                }
            }
        }
    }
}

fn has_pattern(m: &MachineSpec, h: &[SignedRule], pattern: &[AgeTag]) -> bool {
    brief_history(m, h).map(|b| b.contains(pattern)).unwrap_or(false)
}

const P12: [AgeTag; 3] = [AgeTag::A12, AgeTag::A1, AgeTag::A12];
const P56: [AgeTag; 3] = [AgeTag::A56, AgeTag::A6, AgeTag::A56];

fn search_two_connecting_1(m: &MachineSpec, w: &Walk, report: &mut BatchReport) {
    let h = &w.history;
    let norms: Vec<usize> = w.words.iter().map(|x| widths(m, x).norm).collect();
    let has_q1 = w.shape.iter().any(|p| p.0 == 2);
    if has_q1 && (has_pattern(m, h, &P12) || has_pattern(m, h, &P56)) {
        report.violation(|| format!("pattern (12)(1)(12) or (56)(6)(56) over q1: {}", describe(m, w, 0, h.len())));
    }
    for a in 0..h.len() {
        if !is_conn(m, h[a]) {
            continue;
        }
        for b in a + 1..h.len() {
            if !is_conn(m, h[b]) {
                continue;
            }
            let window = &h[a..=b];
            if has_pattern(m, window, &P12) || has_pattern(m, window, &P56) {
                continue;
            }
            report.instances += 1;
            let ns = &norms[a..=b + 1];
            if ns.iter().any(|&x| x != ns[0]) {
                report.violation(|| format!("irregular: {} widths {ns:?}", describe(m, w, a, b + 1)));
            }
        }
    }
}

fn search_two_connecting_2(m: &MachineSpec, w: &Walk, report: &mut BatchReport) {
    let h = &w.history;
    let norms: Vec<usize> = w.words.iter().map(|x| widths(m, x).norm).collect();
    let has_q2 = w.shape.iter().any(|p| p.0 == 4);
    for a in 0..h.len() {
        // window h[a..b], words a..=b
        let mut min_norm = norms[a];
        let mut max_conn: Option<usize> = None;
        let mut aged_16 = false;
        for b in a + 1..=h.len() {
            let r = h[b - 1];
            aged_16 |= matches!(m.age(r), Some(AgeTag::A1 | AgeTag::A6));
            if has_q2 && aged_16 {
                break;
            }
            min_norm = min_norm.min(norms[b]);
            if is_conn(m, r) {
                max_conn = max_conn.max(Some(norms[b]));
            }
            if let Some(c) = max_conn {
                report.instances += 1;
                if c > min_norm {
                    report.violation(|| format!("{} after-connecting width {c} > {min_norm}", describe(m, w, a, b)));
                }
            }
        }
    }
}

fn search_connecting_pair(m: &MachineSpec, w: &Walk, report: &mut BatchReport) {
    let name = |r: SignedRule| m.rules()[r.index()].name.as_str();
    let has = |n: &str| w.history.iter().any(|&r| name(r) == n);
    if has("c@12") && has("c@23") {
        report.instances += 1;
        if !is_kqk(w.shape) {
            report.violation(|| describe(m, w, 0, w.history.len()));
        }
    }
}

fn search_short_bound(m: &MachineSpec, w: &Walk, report: &mut BatchReport) {
    let lens: Vec<usize> = w.words.iter().map(Word::len).collect();
    let has_q1 = w.shape.iter().any(|p| p.0 == 2);
    for a in 0..w.history.len() {
        let mut max_len = lens[a];
        for b in a + 1..=w.history.len() {
            max_len = max_len.max(lens[b]);
            if !has_q1 && is_long(m, &w.history[a..b]) {
                continue;
            }
            report.instances += 1;
            let ratio = max_len as f64 / lens[a].max(lens[b]) as f64;
            report.note("ratio_max", ratio);
            if ratio > SHORT_RATIO_BOUND {
                report.violation(|| format!("{} ratio {ratio:.3}", describe(m, w, a, b)));
            }
        }
    }
}

fn search_loglog(ctx: &Context, rng: &mut ChaCha8Rng, budget: &SearchBudget, report: &mut BatchReport) {
    let core = ctx.canonical[0].history.len();
    let extension = budget.length.saturating_sub(core) / 2;
    let c = long_sample(ctx, rng, &[LongBase::Standard, LongBase::Rotated, LongBase::Shifted], extension);
    let m = &ctx.m;
    if !is_long(m, &c.history) {
        return;
    }
    report.instances += 1;
    let t = c.len() as f64;
    let lhs = (widths(m, &c.start).a_width + widths(m, &c.end).a_width + 1) as f64;
    let loglog = log_prime(log_prime(t));
    report.note("ratio_min", lhs / loglog);
    if lhs < LOGLOG_C0 * loglog {
        report.violation(|| format!("start {} t = {t}", m.format_word(&c.start)));
    }
}

/// Seeded search for counterexamples; batches run in parallel and are returned in batch order.
pub fn bounded_counterexample_search(key: SearchKey, budget: &SearchBudget) -> Result<Vec<BatchReport>, AnalysisError> {
    let ctx = Context::new(if key == SearchKey::Loglog { &[0] } else { &[] })?;
    let conn = connecting(&ctx.m);
    let shapes = shapes_for(key);
    let out = batches(budget.samples, budget.batch)
        .into_par_iter()
        .map(|(b, count)| {
            let mut rng = sampling::rng(budget.seed, b);
            let mut report = BatchReport::new(key.as_str(), b, budget.seed);
            for _ in 0..count {
                report.samples += 1;
                if key == SearchKey::Loglog {
                    search_loglog(&ctx, &mut rng, budget, &mut report);
                    continue;
                }
                let w = short_walk(&ctx.m, &conn, &shapes, &mut rng, budget, key == SearchKey::Return);
                match key {
                    SearchKey::Return => search_return(&ctx.m, &w, &mut report),
                    SearchKey::TwoConnecting1 => search_two_connecting_1(&ctx.m, &w, &mut report),
                    SearchKey::TwoConnecting2 => search_two_connecting_2(&ctx.m, &w, &mut report),
                    SearchKey::ConnectingPair => search_connecting_pair(&ctx.m, &w, &mut report),
                    SearchKey::ShortBound => search_short_bound(&ctx.m, &w, &mut report),
                    SearchKey::Loglog => unreachable!(),
                }
            }
            report
        })
        .collect();
    Ok(out)
}

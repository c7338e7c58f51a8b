//! Seeded generators of admissible words, applicable (word, rule) pairs and reduced random walks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{
    applicable, sector_after, sector_before, validate, Letter, LetterId, LetterSet, SignedRule, Word,
};
use crate::machines::MachineSpec;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A reduced word of length at most `max_len` over `alphabet`^{±1}.
pub fn random_a_word<R: Rng>(rng: &mut R, alphabet: &[LetterId], max_len: usize, positive_only: bool) -> Vec<Letter> {
    if alphabet.is_empty() || max_len == 0 {
        return Vec::new();
    }
    let len = rng.gen_range(0..=max_len);
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let id = *alphabet.choose(rng).unwrap();
        let l = Letter::new(id, !positive_only && rng.gen_bool(0.5));
        if out.last() != Some(&l.inverse()) {
            out.push(l);
        }
    }
    out
}

/// Builds a word from a base and a sector-filling callback; `None` if the result is not admissible.
pub fn fill_base<F>(m: &MachineSpec, base: &[Letter], mut fill: F) -> Option<Word>
where
    F: FnMut(usize) -> Vec<Letter>,
{
    let alpha = &m.alphabet;
    let mut letters = Vec::new();
    for (i, &q) in base.iter().enumerate() {
        let part = alpha.part(q.id())?;
        let sector = if i == 0 { sector_before(part, q.is_inverse()) } else { sector_after(alpha.part(base[i - 1].id())?, base[i - 1].is_inverse()) };
        letters.extend(fill(sector));
        letters.push(q);
    }
    if let Some(&last) = base.last() {
        letters.extend(fill(sector_after(alpha.part(last.id())?, last.is_inverse())));
    }
    let reduced = crate::engine::free_reduce(&letters);
    if reduced.len() != letters.len() {
        return None;
    }
    let w = Word::new(reduced);
    validate(m, &w).ok().map(|_| w)
}

pub fn sector_letters(m: &MachineSpec, sector: usize, permits: Option<&LetterSet>) -> Vec<LetterId> {
    let set = &m.hardware.sectors[sector];
    match permits {
        Some(p) => set.intersection(p).iter().collect(),
        None => set.iter().collect(),
    }
}

/// A random base of `len` signed q-letters that respects sector adjacency.
pub fn random_base<R: Rng>(m: &MachineSpec, rng: &mut R, len: usize) -> Vec<(usize, bool)> {
    let n = m.hardware.parts;
    let mut out = Vec::with_capacity(len);
    let mut cur = (rng.gen_range(1..=n), rng.gen_bool(0.5));
    out.push(cur);
    while out.len() < len {
        let (part, inv) = cur;
        // positive part i continues with positive part i+1 or negative part i; dually for negative
        let next = if !inv {
            if part < n && rng.gen_bool(0.5) { (part + 1, false) } else { (part, true) }
        } else if part > 1 && rng.gen_bool(0.5) {
            (part - 1, true)
        } else {
            (part, false)
        };
        out.push(next);
        cur = next;
    }
    out
}

/// A random (W, θ) with θ applicable to W: q-letters are taken from θ's domains and sectors from its permits.
pub fn random_applicable_pair<R: Rng>(m: &MachineSpec, rng: &mut R, max_base: usize, max_sector: usize) -> (Word, SignedRule) {
    let rules: Vec<SignedRule> = m.signed_rules().collect();
    loop {
        let rule = *rules.choose(rng).unwrap();
        let r = m.rule(rule);
        let len = rng.gen_range(1..=max_base);
        let shape = random_base(m, rng, len);
        let base: Vec<Letter> = shape.iter().map(|&(part, inv)| Letter::new(r.part(part).domain, inv)).collect();
        let w = fill_base(m, &base, |sector| {
            let letters = sector_letters(m, sector, Some(&r.permits[sector]));
            random_a_word(rng, &letters, max_sector, false)
        });
        if let Some(w) = w {
            if applicable(m, &w, rule) {
                return (w, rule);
            }
        }
    }
}

/// A random admissible word with the given base; sectors drawn from the full sector alphabets.
pub fn random_word_on_base<R: Rng>(m: &MachineSpec, rng: &mut R, base: &[Letter], max_sector: usize) -> Option<Word> {
    fill_base(m, base, |sector| {
        let letters = sector_letters(m, sector, None);
        random_a_word(rng, &letters, max_sector, false)
    })
}

/// Random reduced walk of at most `len` steps using rules accepted by `allow`.
///
/// Each step picks uniformly among applicable rules other than the inverse of the previous one.
/// Stops early when no rule applies.
pub fn random_walk<R, F>(m: &MachineSpec, rng: &mut R, start: &Word, len: usize, allow: F) -> (Vec<SignedRule>, Vec<Word>)
where
    R: Rng,
    F: FnMut(SignedRule) -> bool,
{
    random_walk_after(m, rng, start, None, len, allow)
}

/// [`random_walk`] continuing a computation whose last rule was `prev`.
pub fn random_walk_after<R, F>(
    m: &MachineSpec,
    rng: &mut R,
    start: &Word,
    prev: Option<SignedRule>,
    len: usize,
    mut allow: F,
) -> (Vec<SignedRule>, Vec<Word>)
where
    R: Rng,
    F: FnMut(SignedRule) -> bool,
{
    let mut history = Vec::with_capacity(len);
    let mut words = vec![start.clone()];
    let mut options = Vec::new();
    for _ in 0..len {
        let current = words.last().unwrap();
        let prev = history.last().copied().or(prev);
        options.clear();
        options.extend(
            crate::engine::enumerate_applicable(m, current)
                .into_iter()
                .filter(|&r| Some(r.inverse()) != prev && allow(r)),
        );
        let Some(&rule) = options.choose(rng) else { break };
        let next = crate::engine::apply_rule(m, current, rule).expect("enumerated rule applies");
        history.push(rule);
        words.push(next);
    }
    (history, words)
}

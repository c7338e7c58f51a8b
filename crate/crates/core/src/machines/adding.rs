use super::{MachineError, MachineSpec};
use crate::engine::{Alphabet, Hardware, Letter, LetterId, LetterSet, Part, Rule};

/// Rule prefix of the adding machine Z(A).
pub const Z_PREFIX: &str = "Z.";
/// Rule prefix of the mirror machine Z(A, mir).
pub const ZM_PREFIX: &str = "Zm.";

/// Tape-letter copies of one root letter `x`: `x0` in A_0 and `x1` in A_1.
#[derive(Clone, Copy, Debug)]
struct Copies {
    zero: LetterId,
    one: LetterId,
}

/// The adding machine Z(A): parts `L`, `p(1..3)`, `R`; Y_1 = A_0 ∪ A_1, Y_2 = A_0.
///
/// Started at `L u p(1) R` with `u` positive in A_0 it counts through every binary number of
/// length `|u|` (digit = copy index, most significant next to `L`) and stops at `L u p(3) R`.
pub fn build_adding_machine(letters: &[&str]) -> Result<MachineSpec, MachineError> {
    if letters.is_empty() {
        return Err(MachineError::EmptyAlphabet);
    }
    let mut alpha = Alphabet::new();
    let l = alpha.add_state("L", 1);
    let p = [alpha.add_state("p(1)", 2), alpha.add_state("p(2)", 2), alpha.add_state("p(3)", 2)];
    let r = alpha.add_state("R", 3);
    let copies: Vec<(String, Copies)> = letters
        .iter()
        .map(|&x| (x.to_string(), Copies { zero: alpha.add_tape_copy(x, 0), one: alpha.add_tape_copy(x, 1) }))
        .collect();

    let a0: LetterSet = copies.iter().map(|(_, c)| c.zero).collect();
    let a1: LetterSet = copies.iter().map(|(_, c)| c.one).collect();
    let y1 = a0.union(&a1);
    let y2 = a0.clone();
    let hardware = Hardware {
        parts: 3,
        states: vec![vec![l], p.to_vec(), vec![r]],
        sectors: vec![LetterSet::new(), y1.clone(), y2.clone(), LetterSet::new()],
        stationary: vec![true, false, true],
    };

    let pos = Letter::positive;
    let neg = |id| Letter::new(id, true);
    let rule = |name: String, from: LetterId, left: Vec<Letter>, to: LetterId, right: Vec<Letter>, y1: &LetterSet, y2: &LetterSet| Rule {
        name: format!("{Z_PREFIX}{name}"),
        parts: vec![Part::fixed(l), Part { domain: from, left, target: to, right }, Part::fixed(r)],
        permits: vec![LetterSet::new(), y1.clone(), y2.clone(), LetterSet::new()],
        inverse: false,
    };

    let empty = LetterSet::new();
    let mut rules = Vec::with_capacity(4 * letters.len() + 2);
    for (x, c) in &copies {
        // p(1) walks left over A_1 digits, leaving A_0 copies behind it
        rules.push(rule(format!("r1({x})"), p[0], vec![neg(c.one)], p[0], vec![pos(c.zero)], &y1, &y2));
    }
    for (x, c) in &copies {
        rules.push(rule(format!("r12({x})"), p[0], vec![neg(c.zero), pos(c.one)], p[1], vec![], &y1, &y2));
    }
    for (x, c) in &copies {
        rules.push(rule(format!("r2({x})"), p[1], vec![pos(c.zero)], p[1], vec![neg(c.zero)], &y1, &y2));
    }
    rules.push(rule("r21".into(), p[1], vec![], p[0], vec![], &y1, &empty));
    rules.push(rule("r13".into(), p[0], vec![], p[2], vec![], &empty, &a0));
    for (x, c) in &copies {
        rules.push(rule(format!("r3({x})"), p[2], vec![pos(c.zero)], p[2], vec![neg(c.zero)], &a0, &a0));
    }
    MachineSpec::new("Z", alpha, hardware, rules, None)
}

/// The mirror machine Z(A, mir): the tape sits to the right of `p`.
pub fn build_mirror_machine(letters: &[&str]) -> Result<MachineSpec, MachineError> {
    mirror(&build_adding_machine(letters)?)
}

/// Mirror of a three-part machine with stationary ends: inserted words of the middle part are
/// reversed and swapped between sides, and sector alphabets and permits Y_1, Y_2 are exchanged.
pub fn mirror(m: &MachineSpec) -> Result<MachineSpec, MachineError> {
    let hw = &m.hardware;
    if hw.parts != 3 || !hw.stationary[0] || !hw.stationary[2] {
        return Err(MachineError::Malformed("mirror needs a machine of shape L p R".into()));
    }
    let swap = |sets: &[LetterSet]| vec![sets[0].clone(), sets[2].clone(), sets[1].clone(), sets[3].clone()];
    let hardware = Hardware { sectors: swap(&hw.sectors), ..hw.clone() };
    let rules = m
        .rules()
        .iter()
        .map(|rule| {
            let mid = &rule.parts[1];
            let name = match rule.name.strip_prefix(ZM_PREFIX) {
                Some(rest) => format!("{Z_PREFIX}{rest}"),
                None => format!("{ZM_PREFIX}{}", rule.name.strip_prefix(Z_PREFIX).unwrap_or(&rule.name)),
            };
            Rule {
                name,
                parts: vec![
                    rule.parts[0].clone(),
                    Part {
                        domain: mid.domain,
                        left: mid.right.iter().rev().copied().collect(),
                        target: mid.target,
                        right: mid.left.iter().rev().copied().collect(),
                    },
                    rule.parts[2].clone(),
                ],
                permits: swap(&rule.permits),
                inverse: rule.inverse,
            }
        })
        .collect();
    let name = if m.name.ends_with("mir") { m.name.trim_end_matches("mir").trim_end_matches('-').to_string() } else { format!("{}-mir", m.name) };
    MachineSpec::new(name, m.alphabet.clone(), hardware, rules, None)
}

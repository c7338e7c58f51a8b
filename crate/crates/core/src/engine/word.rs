use std::ops::Range;

use serde::Serialize;

use super::letter::Letter;
use super::EngineError;
use crate::machines::MachineSpec;

/// A freely reduced word over the q- and a-letters of a machine.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(Vec<Letter>);

impl Word {
    /// Builds a word, freely reducing the input.
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(free_reduce(&letters))
    }

    /// Wraps letters already known to be reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(is_reduced(&letters));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }
}

/// Pushes `letter` onto a reduced stack, cancelling against the top.
#[inline]
pub(crate) fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if stack.last() == Some(&letter.inverse()) {
        stack.pop();
    } else {
        stack.push(letter);
    }
}

/// The freely reduced form of a letter sequence.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        push_reduced(&mut out, l);
    }
    out
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inverse())
}

pub fn inverse_word(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Sector index Y_j to the right of a signed q-letter of part `part`.
#[inline]
pub fn sector_after(part: usize, inverse: bool) -> usize {
    if inverse {
        part - 1
    } else {
        part
    }
}

/// Sector index Y_j to the left of a signed q-letter of part `part`.
#[inline]
pub fn sector_before(part: usize, inverse: bool) -> usize {
    if inverse {
        part
    } else {
        part - 1
    }
}

/// A maximal a-word of an admissible word together with its sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sector {
    pub range: Range<usize>,
    /// Sector index used for permit checks (`None` only for words without q-letters).
    pub index: Option<usize>,
    /// Index implied by the right neighbour, when it differs from `index`.
    pub right_index: Option<usize>,
}

/// Splits a word into its a-words, leading and trailing ones included (possibly empty).
pub fn sectors(m: &MachineSpec, w: &Word) -> Vec<Sector> {
    let alpha = &m.alphabet;
    let letters = w.letters();
    let mut out = Vec::new();
    let mut start = 0;
    let mut left: Option<usize> = None;
    for (pos, &l) in letters.iter().enumerate() {
        if let Some(part) = alpha.part(l.id()) {
            let before = sector_before(part, l.is_inverse());
            let index = left.or(Some(before));
            out.push(Sector {
                range: start..pos,
                index,
                right_index: (index != Some(before)).then_some(before),
            });
            left = Some(sector_after(part, l.is_inverse()));
            start = pos + 1;
        }
    }
    out.push(Sector { range: start..letters.len(), index: left, right_index: None });
    out
}

/// Checks that every a-word lies in its sector alphabet (both neighbours' alphabets when they disagree).
pub fn validate(m: &MachineSpec, w: &Word) -> Result<(), EngineError> {
    let letters = w.letters();
    if !is_reduced(letters) {
        return Err(EngineError::InvalidWord("not freely reduced".into()));
    }
    let hw = &m.hardware;
    for sector in sectors(m, w) {
        // a pure a-word has no sector to check against
        let Some(index) = sector.index else { continue };
        for pos in sector.range.clone() {
            let id = letters[pos].id();
            let ok = hw.sector(index).contains(id)
                && sector.right_index.is_none_or(|j| hw.sector(j).contains(id));
            if !ok {
                return Err(EngineError::InvalidWord(format!(
                    "letter {} at position {pos} is outside sector Y_{index}",
                    m.alphabet.format_letter(letters[pos])
                )));
            }
        }
    }
    Ok(())
}

/// The signed q-letters of a word, in order.
pub fn base(m: &MachineSpec, w: &Word) -> Vec<Letter> {
    w.letters().iter().copied().filter(|l| m.alphabet.is_state(l.id())).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Widths {
    /// |W|
    pub len: usize,
    /// |W|_a
    pub a_width: usize,
    /// ‖W‖
    pub norm: usize,
}

/// Length, a-width and the width ‖W‖, which is `3 + |u| + 2|v|` for words
/// `q^-1 u q v k` and `k v q u q^-1`, and `|W|` otherwise.
pub fn widths(m: &MachineSpec, w: &Word) -> Widths {
    let alpha = &m.alphabet;
    let letters = w.letters();
    let qpos: Vec<usize> = (0..letters.len()).filter(|&i| alpha.is_state(letters[i].id())).collect();
    let len = letters.len();
    let a_width = len - qpos.len();
    let mut norm = len;
    if qpos.len() == 3 && qpos[0] == 0 && qpos[2] == len - 1 {
        let [x, y, z] = [letters[qpos[0]], letters[qpos[1]], letters[qpos[2]]];
        let part = |l: Letter| alpha.part(l.id()).unwrap();
        let stationary = |l: Letter| m.hardware.is_stationary(part(l));
        let head = |l: Letter| !stationary(l);
        // q^-1 u q v k
        if head(x) && x.is_inverse() && !y.is_inverse() && part(x) == part(y) && stationary(z) && !z.is_inverse() {
            let u = qpos[1] - qpos[0] - 1;
            let v = qpos[2] - qpos[1] - 1;
            norm = 3 + u + 2 * v;
        }
        // k v q u q^-1
        if stationary(x) && !x.is_inverse() && head(y) && !y.is_inverse() && z.is_inverse() && part(y) == part(z) {
            let v = qpos[1] - qpos[0] - 1;
            let u = qpos[2] - qpos[1] - 1;
            norm = 3 + u + 2 * v;
        }
    }
    Widths { len, a_width, norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::letter::LetterId;

    fn l(id: u32, inv: bool) -> Letter {
        Letter::new(LetterId(id), inv)
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&[l(0, false), l(0, true)]), vec![]);
        assert_eq!(
            free_reduce(&[l(0, false), l(1, false), l(1, true), l(0, false)]),
            vec![l(0, false), l(0, false)]
        );
        let reduced = vec![l(0, false), l(1, true), l(0, false)];
        assert_eq!(free_reduce(&reduced), reduced);
    }

    #[test]
    fn nested_cancellation() {
        let w = [l(0, false), l(1, false), l(2, false), l(2, true), l(1, true), l(3, false)];
        assert_eq!(free_reduce(&w), vec![l(0, false), l(3, false)]);
    }

    #[test]
    fn sector_sides() {
        assert_eq!(sector_after(2, false), 2);
        assert_eq!(sector_after(2, true), 1);
        assert_eq!(sector_before(2, false), 1);
        assert_eq!(sector_before(2, true), 2);
    }
}

use std::fmt;

use super::letter::{Letter, LetterId, LetterSet};
use super::word::inverse_word;

/// Hardware of an S-machine: `parts` q-letter sets and the sector alphabets between them.
#[derive(Clone, Debug)]
pub struct Hardware {
    /// N, the number of parts.
    pub parts: usize,
    /// `states[i - 1]` is Q_i.
    pub states: Vec<Vec<LetterId>>,
    /// `sectors[j]` is Y_j for `j` in `0..=N`; Y_0 and Y_N are empty.
    pub sectors: Vec<LetterSet>,
    /// Parts whose q-letter never changes (the `k`/`L`/`R` heads).
    pub stationary: Vec<bool>,
}

impl Hardware {
    pub fn sector(&self, j: usize) -> &LetterSet {
        &self.sectors[j]
    }

    pub fn is_stationary(&self, part: usize) -> bool {
        self.stationary[part - 1]
    }
}

/// One component `domain -> left · target · right` of a rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Part {
    pub domain: LetterId,
    pub left: Vec<Letter>,
    pub target: LetterId,
    pub right: Vec<Letter>,
}

impl Part {
    pub fn fixed(letter: LetterId) -> Self {
        Part { domain: letter, left: Vec::new(), target: letter, right: Vec::new() }
    }

    /// `t -> left^-1 · d · right^-1`, the component of the inverse rule.
    pub fn inverted(&self) -> Part {
        Part {
            domain: self.target,
            left: inverse_word(&self.left),
            target: self.domain,
            right: inverse_word(&self.right),
        }
    }

    /// The image word `left · target · right`.
    pub fn image(&self) -> Vec<Letter> {
        let mut out = self.left.clone();
        out.push(Letter::positive(self.target));
        out.extend_from_slice(&self.right);
        out
    }
}

/// A rule: N substitutions plus the permitted letters for each sector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub name: String,
    pub parts: Vec<Part>,
    /// `permits[j]` is Y_j(θ) for `j` in `0..=N`.
    pub permits: Vec<LetterSet>,
    pub inverse: bool,
}

impl Rule {
    pub fn part(&self, part: usize) -> &Part {
        &self.parts[part - 1]
    }

    /// Formal inverse: swaps domain and target, inverts inserted words, keeps permits.
    pub fn inverted(&self) -> Rule {
        let name = match self.name.strip_suffix("^-1") {
            Some(stem) => stem.to_string(),
            None => format!("{}^-1", self.name),
        };
        Rule {
            name,
            parts: self.parts.iter().map(Part::inverted).collect(),
            permits: self.permits.clone(),
            inverse: !self.inverse,
        }
    }
}

/// A rule of the machine's table, possibly inverted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedRule {
    pub index: u32,
    pub inverse: bool,
}

impl SignedRule {
    pub fn new(index: usize, inverse: bool) -> Self {
        SignedRule { index: index as u32, inverse }
    }

    pub fn positive(index: usize) -> Self {
        SignedRule::new(index, false)
    }

    pub fn inverse(self) -> Self {
        SignedRule { index: self.index, inverse: !self.inverse }
    }

    pub fn index(self) -> usize {
        self.index as usize
    }
}

impl fmt::Display for SignedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.index, if self.inverse { "^-1" } else { "" })
    }
}

/// True iff no two consecutive entries are mutually inverse.
pub fn is_reduced_history(history: &[SignedRule]) -> bool {
    first_cancellation(history).is_none()
}

pub fn first_cancellation(history: &[SignedRule]) -> Option<usize> {
    history.windows(2).position(|w| w[1] == w[0].inverse())
}

/// Reverses and inverts a history.
pub fn inverse_history(history: &[SignedRule]) -> Vec<SignedRule> {
    history.iter().rev().map(|r| r.inverse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(id: u32, inv: bool) -> Letter {
        Letter::new(LetterId(id), inv)
    }

    #[test]
    fn double_inverse_is_identity() {
        let rule = Rule {
            name: "x".into(),
            parts: vec![
                Part::fixed(LetterId(0)),
                Part { domain: LetterId(1), left: vec![l(5, true)], target: LetterId(1), right: vec![l(4, false)] },
            ],
            permits: vec![LetterSet::new(), LetterSet::new(), LetterSet::new()],
            inverse: false,
        };
        let inv = rule.inverted();
        assert_eq!(inv.name, "x^-1");
        assert_eq!(inv.parts[1].left, vec![l(5, false)]);
        assert_eq!(inv.parts[1].right, vec![l(4, true)]);
        assert_eq!(inv.inverted(), rule);
    }

    #[test]
    fn history_reducedness() {
        let a = SignedRule::positive(0);
        let b = SignedRule::positive(1);
        assert!(is_reduced_history(&[a, b, a]));
        assert!(is_reduced_history(&[a, a]));
        assert_eq!(first_cancellation(&[a, b, b.inverse()]), Some(1));
        assert_eq!(inverse_history(&[a, b]), vec![b.inverse(), a.inverse()]);
    }
}

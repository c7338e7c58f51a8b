use std::collections::HashMap;
use std::fmt;

use super::EngineError;

/// Index of a letter in a machine's [`Alphabet`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LetterId(pub u32);

/// A signed letter: an alphabet entry or its formal inverse.
///
/// Packed as `id << 1 | inverse` so words stay compact and comparisons are cheap.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(id: LetterId, inverse: bool) -> Self {
        Letter((id.0 << 1) | inverse as u32)
    }

    pub fn positive(id: LetterId) -> Self {
        Letter::new(id, false)
    }

    pub fn id(self) -> LetterId {
        LetterId(self.0 >> 1)
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.id().0, if self.is_inverse() { "^-1" } else { "" })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LetterKind {
    /// q-letter of part `part` (1-based).
    State { part: usize },
    /// a-letter.
    Tape,
}

#[derive(Clone, Debug)]
pub struct LetterInfo {
    pub name: String,
    pub kind: LetterKind,
    /// For tape letters built as copies `x_0`, `x_1` of a root letter `x`.
    pub root: Option<String>,
    pub copy: Option<u8>,
}

#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    letters: Vec<LetterInfo>,
    by_name: HashMap<String, LetterId>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, info: LetterInfo) -> LetterId {
        if let Some(&id) = self.by_name.get(&info.name) {
            return id;
        }
        let id = LetterId(self.letters.len() as u32);
        self.by_name.insert(info.name.clone(), id);
        self.letters.push(info);
        id
    }

    pub fn add_state(&mut self, name: &str, part: usize) -> LetterId {
        self.push(LetterInfo {
            name: name.to_string(),
            kind: LetterKind::State { part },
            root: None,
            copy: None,
        })
    }

    /// Adds the copy `root_{copy}` of a tape letter, e.g. `a` -> `a0`, `h[r1]` -> `h1[r1]`.
    pub fn add_tape_copy(&mut self, root: &str, copy: u8) -> LetterId {
        self.push(LetterInfo {
            name: copy_name(root, copy),
            kind: LetterKind::Tape,
            root: Some(root.to_string()),
            copy: Some(copy),
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<LetterId> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, id: LetterId) -> &LetterInfo {
        &self.letters[id.0 as usize]
    }

    pub fn name(&self, id: LetterId) -> &str {
        &self.letters[id.0 as usize].name
    }

    pub fn kind(&self, id: LetterId) -> LetterKind {
        self.letters[id.0 as usize].kind
    }

    /// Part index of a q-letter, `None` for a-letters.
    #[inline]
    pub fn part(&self, id: LetterId) -> Option<usize> {
        match self.letters[id.0 as usize].kind {
            LetterKind::State { part } => Some(part),
            LetterKind::Tape => None,
        }
    }

    #[inline]
    pub fn is_state(&self, id: LetterId) -> bool {
        matches!(self.letters[id.0 as usize].kind, LetterKind::State { .. })
    }

    pub fn ids(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.letters.len() as u32).map(LetterId)
    }

    pub fn parse_letter(&self, token: &str) -> Result<Letter, EngineError> {
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(stem) => (stem, true),
            None => (token, false),
        };
        let id = self
            .get(name)
            .ok_or_else(|| EngineError::UnknownLetter(token.to_string()))?;
        Ok(Letter::new(id, inverse))
    }

    pub fn format_letter(&self, letter: Letter) -> String {
        let name = self.name(letter.id());
        if letter.is_inverse() {
            format!("{name}^-1")
        } else {
            name.to_string()
        }
    }
}

/// Name of the `copy`-th copy of a root letter: the digit goes before any `[...]` suffix.
pub fn copy_name(root: &str, copy: u8) -> String {
    match root.find('[') {
        Some(pos) => format!("{}{}{}", &root[..pos], copy, &root[pos..]),
        None => format!("{root}{copy}"),
    }
}

/// Small bitset over letter ids.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LetterSet {
    bits: Vec<u64>,
}

impl LetterSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: LetterId) {
        let (word, bit) = (id.0 as usize / 64, id.0 % 64);
        if self.bits.len() <= word {
            self.bits.resize(word + 1, 0);
        }
        self.bits[word] |= 1 << bit;
    }

    #[inline]
    pub fn contains(&self, id: LetterId) -> bool {
        let (word, bit) = (id.0 as usize / 64, id.0 % 64);
        self.bits.get(word).is_some_and(|w| w & (1 << bit) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = LetterId> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            (0..64u32)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| LetterId(i as u32 * 64 + b))
        })
    }

    pub fn union(&self, other: &LetterSet) -> LetterSet {
        let n = self.bits.len().max(other.bits.len());
        let bits = (0..n)
            .map(|i| self.bits.get(i).copied().unwrap_or(0) | other.bits.get(i).copied().unwrap_or(0))
            .collect();
        LetterSet { bits }
    }

    pub fn intersection(&self, other: &LetterSet) -> LetterSet {
        let n = self.bits.len().min(other.bits.len());
        let bits = (0..n).map(|i| self.bits[i] & other.bits[i]).collect();
        LetterSet { bits }
    }
}

impl FromIterator<LetterId> for LetterSet {
    fn from_iter<I: IntoIterator<Item = LetterId>>(iter: I) -> Self {
        let mut set = LetterSet::new();
        for id in iter {
            set.insert(id);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copy_names() {
        assert_eq!(copy_name("a", 0), "a0");
        assert_eq!(copy_name("h[r12]", 1), "h1[r12]");
    }

    #[test]
    fn letter_packing() {
        let l = Letter::new(LetterId(7), true);
        assert_eq!(l.id(), LetterId(7));
        assert!(l.is_inverse());
        assert_eq!(l.inverse().inverse(), l);
        assert!(!l.inverse().is_inverse());
    }

    #[test]
    fn letter_set_ops() {
        let a: LetterSet = [LetterId(1), LetterId(70)].into_iter().collect();
        let b: LetterSet = [LetterId(70), LetterId(3)].into_iter().collect();
        assert!(a.contains(LetterId(70)));
        assert!(!a.contains(LetterId(3)));
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![LetterId(70)]);
        assert!(LetterSet::new().is_empty());
    }

    #[test]
    fn parse_and_format() {
        let mut alpha = Alphabet::new();
        alpha.add_state("p(1)", 2);
        alpha.add_tape_copy("a", 0);
        let l = alpha.parse_letter("a0^-1").unwrap();
        assert_eq!(alpha.format_letter(l), "a0^-1");
        assert!(alpha.parse_letter("zz").is_err());
    }
}

//! The group presentation induced by an S-machine: q-letters, a-letters and one θ-letter per
//! rule component, with relations `U_i θ_{i+1} = θ_i V_i` and `θ_j a = a θ_j` for `a ∈ Y_j(θ)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{apply_rule, free_reduce, Letter, SignedRule, Word};
use crate::machines::MachineSpec;

/// A generator name with an exponent sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub name: String,
    pub inverse: bool,
}

impl Sym {
    fn new(name: impl Into<String>, inverse: bool) -> Self {
        Sym { name: name.into(), inverse }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelatorKind {
    QRelation,
    Commutation,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relator {
    pub kind: RelatorKind,
    pub lhs: Vec<Sym>,
    pub rhs: Vec<Sym>,
}

impl Relator {
    /// Length of `lhs rhs^-1`.
    pub fn len(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn classify(lhs: &[Sym], rhs: &[Sym]) -> RelatorKind {
        let reversed: Vec<&Sym> = lhs.iter().rev().collect();
        if lhs.len() == 2 && rhs.iter().collect::<Vec<_>>() == reversed {
            RelatorKind::Commutation
        } else {
            RelatorKind::QRelation
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub machine: String,
    /// Sorted.
    pub generators: Vec<String>,
    /// Sorted by `(lhs, rhs)` text.
    pub relators: Vec<Relator>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelatorStats {
    pub generators: usize,
    pub q_relations: usize,
    pub commutations: usize,
    pub max_relator_len: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("rule {rule}, part {part}: relation gives {expected}, engine gives {found}")]
    CrossCheck { rule: String, part: usize, expected: String, found: String },
}

/// Name of the i-th brother of a rule.
pub fn theta_name(rule: &str, i: usize) -> String {
    format!("{rule}/{i}")
}

fn sym(m: &MachineSpec, l: Letter) -> Sym {
    Sym::new(m.alphabet.name(l.id()), l.is_inverse())
}

pub fn emit(m: &MachineSpec) -> Presentation {
    let n = m.hardware.parts;
    let mut generators: BTreeSet<String> = m.alphabet.ids().map(|id| m.alphabet.name(id).to_string()).collect();
    let mut relators = Vec::new();
    for rule in m.rules() {
        let theta = |i: usize| theta_name(&rule.name, if i > n { 1 } else { i });
        generators.extend((1..=n).map(theta));
        for i in 1..=n {
            let p = rule.part(i);
            let lhs = vec![Sym::new(m.alphabet.name(p.domain), false), Sym::new(theta(i + 1), false)];
            let mut rhs = vec![Sym::new(theta(i), false)];
            rhs.extend(p.left.iter().map(|&l| sym(m, l)));
            rhs.push(Sym::new(m.alphabet.name(p.target), false));
            rhs.extend(p.right.iter().map(|&l| sym(m, l)));
            relators.push(Relator { kind: RelatorKind::QRelation, lhs, rhs });
        }
        for j in 1..=n {
            for a in rule.permits[j].iter() {
                let t = Sym::new(theta(j), false);
                let a = Sym::new(m.alphabet.name(a), false);
                relators.push(Relator { kind: RelatorKind::Commutation, lhs: vec![t.clone(), a.clone()], rhs: vec![a, t] });
            }
        }
    }
    sort_relators(&mut relators);
    Presentation { machine: m.name.clone(), generators: generators.into_iter().collect(), relators }
}

fn words(r: &Relator) -> (String, String) {
    (join(&r.lhs), join(&r.rhs))
}

fn sort_relators(relators: &mut [Relator]) {
    relators.sort_by_cached_key(words);
}

fn join(w: &[Sym]) -> String {
    w.iter().map(Sym::to_string).collect::<Vec<_>>().join(" ")
}

pub fn relator_stats(p: &Presentation) -> RelatorStats {
    RelatorStats {
        generators: p.generators.len(),
        q_relations: p.relators.iter().filter(|r| r.kind == RelatorKind::QRelation).count(),
        commutations: p.relators.iter().filter(|r| r.kind == RelatorKind::Commutation).count(),
        max_relator_len: p.relators.iter().map(Relator::len).max().unwrap_or(0),
    }
}

impl RelatorStats {
    pub fn tsv(&self) -> String {
        format!(
            "generators\tq_relations\tcommutations\tmax_relator_len\n{}\t{}\t{}\t{}\n",
            self.generators, self.q_relations, self.commutations, self.max_relator_len
        )
    }
}

/// The `.pres` text: a comment header, `gen` lines, then `rel` lines.
pub fn to_text(p: &Presentation) -> String {
    let stats = relator_stats(p);
    let mut s = String::new();
    writeln!(s, "# machine {}", p.machine).unwrap();
    writeln!(
        s,
        "# {} generators, {} q-relations, {} commutations",
        stats.generators, stats.q_relations, stats.commutations
    )
    .unwrap();
    for g in &p.generators {
        writeln!(s, "gen {g}").unwrap();
    }
    for r in &p.relators {
        let (l, rh) = words(r);
        writeln!(s, "rel {l} = {rh}").unwrap();
    }
    s
}

fn parse_sym(token: &str) -> Sym {
    match token.strip_suffix("^-1") {
        Some(name) => Sym::new(name, true),
        None => Sym::new(token, false),
    }
}

pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
    let mut machine = String::new();
    let mut generators = Vec::new();
    let mut known = HashSet::new();
    let mut relators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(name) = comment.trim().strip_prefix("machine ") {
                machine = name.trim().to_string();
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        match keyword {
            "gen" => {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) || name.ends_with("^-1") {
                    return Err(PresentationError::Parse { line, message: format!("bad generator `{name}`") });
                }
                if known.insert(name.to_string()) {
                    generators.push(name.to_string());
                }
            }
            "rel" => {
                let (l, r) = rest
                    .split_once('=')
                    .ok_or_else(|| PresentationError::Parse { line, message: "relation needs `=`".into() })?;
                let lhs: Vec<Sym> = l.split_whitespace().map(parse_sym).collect();
                let rhs: Vec<Sym> = r.split_whitespace().map(parse_sym).collect();
                if let Some(s) = lhs.iter().chain(&rhs).find(|s| !known.contains(&s.name)) {
                    return Err(PresentationError::UnknownGenerator { line, name: s.name.clone() });
                }
                relators.push(Relator { kind: Relator::classify(&lhs, &rhs), lhs, rhs });
            }
            other => return Err(PresentationError::Parse { line, message: format!("unknown keyword `{other}`") }),
        }
    }
    generators.sort();
    sort_relators(&mut relators);
    Ok(Presentation { machine, generators, relators })
}

/// For every positive rule θ and part i, `θ_i^-1 U_i θ_{i+1}` read off the relation must equal
/// the result of applying θ to the one-letter word `U_i`.
pub fn cross_validate(m: &MachineSpec, p: &Presentation) -> Result<usize, PresentationError> {
    let n = m.hardware.parts;
    let mut checked = 0;
    for (index, rule) in m.rules().iter().enumerate() {
        for i in 1..=n {
            let domain = m.alphabet.name(rule.part(i).domain);
            let theta_next = theta_name(&rule.name, if i == n { 1 } else { i + 1 });
            let theta_i = theta_name(&rule.name, i);
            let relation = p.relators.iter().find(|r| {
                r.kind == RelatorKind::QRelation
                    && r.lhs == [Sym::new(domain, false), Sym::new(theta_next.clone(), false)]
                    && r.rhs.first() == Some(&Sym::new(theta_i.clone(), false))
            });
            let expected = relation.map(|r| join(&r.rhs[1..])).unwrap_or_default();
            let single = Word::new(vec![Letter::positive(rule.part(i).domain)]);
            let found = apply_rule(m, &single, SignedRule::positive(index))
                .map(|w| m.format_word(&w))
                .unwrap_or_else(|e| e.to_string());
            let expected_word = relation
                .map(|r| {
                    let letters: Vec<Letter> = r.rhs[1..]
                        .iter()
                        .map(|s| Letter::new(m.letter(&s.name), s.inverse))
                        .collect();
                    m.format_word(&Word::new(free_reduce(&letters)))
                })
                .unwrap_or_default();
            if relation.is_none() || expected_word != found {
                return Err(PresentationError::CrossCheck { rule: rule.name.clone(), part: i, expected, found });
            }
            checked += 1;
        }
    }
    Ok(checked)
}

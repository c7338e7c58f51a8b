use std::collections::HashMap;
use std::fmt::Write as _;

use super::{AgeTag, MachineError};
use crate::engine::{
    validate, Alphabet, EngineError, Hardware, LetterId, LetterSet, Rule, SignedRule, Word,
};

/// Hardware plus rule table. Immutable once built.
#[derive(Clone, Debug)]
pub struct MachineSpec {
    pub name: String,
    pub alphabet: Alphabet,
    pub hardware: Hardware,
    rules: Vec<Rule>,
    // formal inverses, derived from `rules` at construction
    inverses: Vec<Rule>,
    rule_index: HashMap<String, usize>,
    ages: Option<Vec<AgeTag>>,
    // signed rules whose domain contains a given q-letter, indexed by letter id
    by_state: Vec<Vec<SignedRule>>,
}

impl MachineSpec {
    pub fn new(
        name: impl Into<String>,
        alphabet: Alphabet,
        hardware: Hardware,
        rules: Vec<Rule>,
        ages: Option<Vec<AgeTag>>,
    ) -> Result<Self, MachineError> {
        let n = hardware.parts;
        let mut rule_index = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            if rule.parts.len() != n || rule.permits.len() != n + 1 {
                return Err(MachineError::Malformed(format!("rule {} has wrong arity", rule.name)));
            }
            for (k, part) in rule.parts.iter().enumerate() {
                let states = &hardware.states[k];
                if !states.contains(&part.domain) || !states.contains(&part.target) {
                    return Err(MachineError::Malformed(format!("rule {} part {} leaves Q_{}", rule.name, k + 1, k + 1)));
                }
                let left_ok = part.left.iter().all(|l| hardware.sectors[k].contains(l.id()));
                let right_ok = part.right.iter().all(|l| hardware.sectors[k + 1].contains(l.id()));
                if !left_ok || !right_ok {
                    return Err(MachineError::Malformed(format!(
                        "rule {} part {} inserts letters outside its sectors",
                        rule.name,
                        k + 1
                    )));
                }
            }
            for (j, permit) in rule.permits.iter().enumerate() {
                if permit.iter().any(|id| !hardware.sectors[j].contains(id)) {
                    return Err(MachineError::Malformed(format!("rule {} permits letters outside Y_{j}", rule.name)));
                }
            }
            if rule_index.insert(rule.name.clone(), i).is_some() {
                return Err(MachineError::Malformed(format!("duplicate rule id {}", rule.name)));
            }
        }
        if let Some(ages) = &ages {
            if ages.len() != rules.len() {
                return Err(MachineError::Malformed("age table length mismatch".into()));
            }
        }
        let inverses: Vec<Rule> = rules.iter().map(Rule::inverted).collect();
        let mut by_state = vec![Vec::new(); alphabet.len()];
        for (i, rule) in rules.iter().enumerate() {
            for part in &rule.parts {
                by_state[part.domain.0 as usize].push(SignedRule::new(i, false));
                by_state[part.target.0 as usize].push(SignedRule::new(i, true));
            }
        }
        for list in &mut by_state {
            list.sort();
            list.dedup();
        }
        Ok(MachineSpec { name: name.into(), alphabet, hardware, rules, inverses, rule_index, ages, by_state })
    }

    /// Positive rules, in table order.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    #[inline]
    pub fn rule(&self, r: SignedRule) -> &Rule {
        if r.inverse {
            &self.inverses[r.index()]
        } else {
            &self.rules[r.index()]
        }
    }

    /// Every rule and its inverse.
    pub fn signed_rules(&self) -> impl Iterator<Item = SignedRule> + '_ {
        (0..self.rules.len()).flat_map(|i| [SignedRule::new(i, false), SignedRule::new(i, true)])
    }

    /// Signed rules whose domain includes the q-letter `state`.
    pub fn candidates(&self, state: LetterId) -> &[SignedRule] {
        &self.by_state[state.0 as usize]
    }

    pub fn rule_id(&self, name: &str) -> Option<usize> {
        self.rule_index.get(name).copied()
    }

    pub fn rule_name(&self, r: SignedRule) -> String {
        let name = &self.rules[r.index()].name;
        if r.inverse {
            format!("{name}^-1")
        } else {
            name.clone()
        }
    }

    pub fn parse_rule(&self, token: &str) -> Result<SignedRule, EngineError> {
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(stem) => (stem, true),
            None => (token, false),
        };
        self.rule_id(name)
            .map(|i| SignedRule::new(i, inverse))
            .ok_or_else(|| EngineError::UnknownRule(token.to_string()))
    }

    pub fn parse_history(&self, text: &str) -> Result<Vec<SignedRule>, EngineError> {
        text.split_whitespace().map(|t| self.parse_rule(t)).collect()
    }

    pub fn format_history(&self, history: &[SignedRule]) -> String {
        history.iter().map(|&r| self.rule_name(r)).collect::<Vec<_>>().join(" ")
    }

    /// Parses whitespace-separated letter names, reduces, and checks sector membership.
    pub fn parse_word(&self, text: &str) -> Result<Word, EngineError> {
        let letters = text
            .split_whitespace()
            .map(|t| self.alphabet.parse_letter(t))
            .collect::<Result<Vec<_>, _>>()?;
        let w = Word::new(letters);
        validate(self, &w)?;
        Ok(w)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.letters().iter().map(|&l| self.alphabet.format_letter(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn letter(&self, name: &str) -> LetterId {
        self.alphabet.get(name).unwrap_or_else(|| panic!("machine {} has no letter {name}", self.name))
    }

    pub fn age(&self, r: SignedRule) -> Option<AgeTag> {
        self.ages.as_ref().map(|a| a[r.index()])
    }

    pub fn has_ages(&self) -> bool {
        self.ages.is_some()
    }

    /// Deterministic listing of hardware and rules, one rule per line, sorted by id.
    pub fn describe(&self) -> String {
        let alpha = &self.alphabet;
        let hw = &self.hardware;
        let set = |s: &LetterSet| {
            let mut names: Vec<&str> = s.iter().map(|id| alpha.name(id)).collect();
            names.sort();
            format!("{{{}}}", names.join(","))
        };
        let word = |ls: &[crate::engine::Letter]| ls.iter().map(|&l| alpha.format_letter(l)).collect::<Vec<_>>();
        let mut out = String::new();
        let _ = writeln!(out, "machine {}", self.name);
        let _ = writeln!(out, "parts {}", hw.parts);
        for (i, states) in hw.states.iter().enumerate() {
            let mut names: Vec<&str> = states.iter().map(|&id| alpha.name(id)).collect();
            names.sort();
            let _ = writeln!(out, "Q{} {}", i + 1, names.join(" "));
        }
        for j in 1..hw.parts {
            let _ = writeln!(out, "Y{} {}", j, set(&hw.sectors[j]));
        }
        let mut order: Vec<usize> = (0..self.rules.len()).collect();
        order.sort_by(|&a, &b| self.rules[a].name.cmp(&self.rules[b].name));
        for i in order {
            let rule = &self.rules[i];
            let parts: Vec<String> = rule
                .parts
                .iter()
                .map(|p| {
                    let mut image = word(&p.left);
                    image.push(alpha.name(p.target).to_string());
                    image.extend(word(&p.right));
                    format!("{}->{}", alpha.name(p.domain), image.join(" "))
                })
                .collect();
            let permits: Vec<String> = (1..hw.parts).map(|j| format!("Y{}={}", j, set(&rule.permits[j]))).collect();
            let age = self.ages.as_ref().map(|a| format!(" age={}", a[i])).unwrap_or_default();
            let _ = writeln!(out, "rule {} [{}] {}{}", rule.name, parts.join(", "), permits.join(" "), age);
        }
        out
    }
}

//! The concrete machines: the adding machine Z(A), its mirror Z(A, mir), and the main machine M.

mod adding;
mod main_machine;
mod spec;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use adding::{build_adding_machine, build_mirror_machine, mirror, ZM_PREFIX, Z_PREFIX};
pub use main_machine::{build_main_machine, q1_name, q2_name, upsilon_roots, UPSILON};
pub use spec::MachineSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("malformed machine: {0}")]
    Malformed(String),
}

/// Phase of a rule of M. Connecting ages are the two-digit ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum AgeTag {
    A1,
    A12,
    A2,
    A23,
    A3,
    A34,
    A4,
    A45,
    A5,
    A56,
    A6,
}

impl AgeTag {
    /// The chain (1)(12)(2)(23)(3)(34)(4)(45)(5)(56)(6).
    pub const CHAIN: [AgeTag; 11] = [
        AgeTag::A1,
        AgeTag::A12,
        AgeTag::A2,
        AgeTag::A23,
        AgeTag::A3,
        AgeTag::A34,
        AgeTag::A4,
        AgeTag::A45,
        AgeTag::A5,
        AgeTag::A56,
        AgeTag::A6,
    ];

    pub fn is_connecting(self) -> bool {
        matches!(self, AgeTag::A12 | AgeTag::A23 | AgeTag::A34 | AgeTag::A45 | AgeTag::A56)
    }

    pub fn label(self) -> &'static str {
        match self {
            AgeTag::A1 => "1",
            AgeTag::A12 => "12",
            AgeTag::A2 => "2",
            AgeTag::A23 => "23",
            AgeTag::A3 => "3",
            AgeTag::A34 => "34",
            AgeTag::A4 => "4",
            AgeTag::A45 => "45",
            AgeTag::A5 => "5",
            AgeTag::A56 => "56",
            AgeTag::A6 => "6",
        }
    }
}

impl fmt::Display for AgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.label())
    }
}

impl FromStr for AgeTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim_start_matches('(').trim_end_matches(')');
        AgeTag::CHAIN.into_iter().find(|t| t.label() == s).ok_or_else(|| format!("unknown age `{s}`"))
    }
}

/// Age of a rule id of M (inverses allowed).
pub fn age_of(m: &MachineSpec, rule: &str) -> Result<AgeTag, MachineError> {
    let r = m.parse_rule(rule).map_err(|_| MachineError::UnknownRule(rule.to_string()))?;
    m.age(r).ok_or_else(|| MachineError::UnknownRule(rule.to_string()))
}

pub fn is_connecting(m: &MachineSpec, rule: &str) -> Result<bool, MachineError> {
    age_of(m, rule).map(AgeTag::is_connecting)
}

/// Selector used by the command line.
#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum MachineKind {
    /// Z({a})
    Z,
    /// Z(A(Υ), mir)
    Zmir,
    /// The main machine M
    Main,
}

pub fn build(kind: MachineKind) -> MachineSpec {
    match kind {
        MachineKind::Z => build_adding_machine(&["a"]).expect("Z({a}) is well formed"),
        MachineKind::Zmir => {
            let roots = upsilon_roots();
            let refs: Vec<&str> = roots.iter().map(String::as_str).collect();
            build_mirror_machine(&refs).expect("Z(A(Υ), mir) is well formed")
        }
        MachineKind::Main => build_main_machine().expect("M is well formed"),
    }
}

#[cfg(test)]
mod tests;

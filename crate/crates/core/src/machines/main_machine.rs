use super::adding::{build_adding_machine, build_mirror_machine, ZM_PREFIX, Z_PREFIX};
use super::{AgeTag, MachineError, MachineSpec};
use crate::engine::{Alphabet, Hardware, Letter, LetterId, LetterSet, Part, Rule};

/// Positive rules of Z({a}), short names used for the history letters `h0[τ]`.
pub const UPSILON: [&str; 6] = ["r1", "r12", "r2", "r21", "r13", "r3"];

/// Root names of the alphabet A(Υ), one letter per positive rule of Z({a}).
pub fn upsilon_roots() -> Vec<String> {
    UPSILON.iter().map(|t| format!("h[{t}]")).collect()
}

/// `Z.r1(a)` -> `r1`.
fn upsilon_key(z_rule: &str) -> &str {
    let s = z_rule.strip_prefix(Z_PREFIX).unwrap_or(z_rule);
    s.split('(').next().unwrap_or(s)
}

pub fn q1_name(state: Option<u8>, age: u8) -> String {
    match state {
        Some(s) => format!("q1({s})@{age}"),
        None => format!("q1@{age}"),
    }
}

pub fn q2_name(state: Option<u8>, age: u8) -> String {
    match state {
        Some(s) => format!("q2({s})@{age}"),
        None => format!("q2@{age}"),
    }
}

/// The main machine M with N = 5 parts `k0 | q1 | k1 | q2 | k2`.
///
/// Ages (1), (2), (5), (6) run copies of Z({a}) on `k0 q1 k1` while `q2` records (ages 1, 6)
/// or transports (ages 2, 5) the history in A(Υ)_0; ages (3), (4) run Z(A(Υ), mir) on `k1 q2 k2`.
pub fn build_main_machine() -> Result<MachineSpec, MachineError> {
    let z = build_adding_machine(&["a"])?;
    let roots = upsilon_roots();
    let root_refs: Vec<&str> = roots.iter().map(String::as_str).collect();
    let zm = build_mirror_machine(&root_refs)?;

    let mut alpha = Alphabet::new();
    let k0 = alpha.add_state("k0", 1);
    let mut q1_states = Vec::new();
    for age in 1..=6u8 {
        if matches!(age, 3 | 4) {
            q1_states.push(alpha.add_state(&q1_name(None, age), 2));
        } else {
            for s in 1..=3 {
                q1_states.push(alpha.add_state(&q1_name(Some(s), age), 2));
            }
        }
    }
    let k1 = alpha.add_state("k1", 3);
    let mut q2_states = Vec::new();
    for age in 1..=6u8 {
        if matches!(age, 3 | 4) {
            for s in 1..=3 {
                q2_states.push(alpha.add_state(&q2_name(Some(s), age), 4));
            }
        } else {
            q2_states.push(alpha.add_state(&q2_name(None, age), 4));
        }
    }
    let k2 = alpha.add_state("k2", 5);
    let a0 = alpha.add_tape_copy("a", 0);
    let a1 = alpha.add_tape_copy("a", 1);
    let h0: Vec<LetterId> = roots.iter().map(|r| alpha.add_tape_copy(r, 0)).collect();
    let h1: Vec<LetterId> = roots.iter().map(|r| alpha.add_tape_copy(r, 1)).collect();

    let y_a0: LetterSet = [a0].into_iter().collect();
    let y_a: LetterSet = [a0, a1].into_iter().collect();
    let y_h0: LetterSet = h0.iter().copied().collect();
    let y_h: LetterSet = h0.iter().chain(&h1).copied().collect();
    let empty = LetterSet::new();
    let hardware = Hardware {
        parts: 5,
        states: vec![vec![k0], q1_states, vec![k1], q2_states, vec![k2]],
        sectors: vec![empty.clone(), y_a.clone(), y_a0.clone(), y_h0.clone(), y_h.clone(), empty.clone()],
        stationary: vec![true, false, true, false, true],
    };

    // Letters shared by name between a Z-machine and M.
    let carry = |src: &MachineSpec, l: Letter| Letter::new(alpha.get(src.alphabet.name(l.id())).unwrap(), l.is_inverse());
    let carry_set = |src: &MachineSpec, s: &LetterSet| s.iter().map(|id| alpha.get(src.alphabet.name(id)).unwrap()).collect::<LetterSet>();
    let p_state = |src: &MachineSpec, id: LetterId| -> u8 {
        let name = src.alphabet.name(id);
        name[2..3].parse().unwrap()
    };
    let st = |name: String| alpha.get(&name).unwrap();

    let mut rules = Vec::new();
    let mut ages = Vec::new();

    let z_age = |age: u8, tag: AgeTag, rules: &mut Vec<Rule>, ages: &mut Vec<AgeTag>| {
        for zr in z.rules() {
            let mid = &zr.parts[1];
            let key = upsilon_key(&zr.name);
            let h = Letter::positive(h0[UPSILON.iter().position(|t| *t == key).unwrap()]);
            let q1_part = Part {
                domain: st(q1_name(Some(p_state(&z, mid.domain)), age)),
                left: mid.left.iter().map(|&l| carry(&z, l)).collect(),
                target: st(q1_name(Some(p_state(&z, mid.target)), age)),
                right: mid.right.iter().map(|&l| carry(&z, l)).collect(),
            };
            let q2 = st(q2_name(None, age));
            let (q2_right, y4) = match age {
                1 | 6 => (vec![], empty.clone()),
                _ => (vec![h.inverse()], y_h0.clone()),
            };
            rules.push(Rule {
                name: format!("{}@{age}", zr.name.strip_prefix(Z_PREFIX).unwrap()),
                parts: vec![
                    Part::fixed(k0),
                    q1_part,
                    Part::fixed(k1),
                    Part { domain: q2, left: vec![h], target: q2, right: q2_right },
                    Part::fixed(k2),
                ],
                permits: vec![
                    empty.clone(),
                    carry_set(&z, &zr.permits[1]),
                    carry_set(&z, &zr.permits[2]),
                    y_h0.clone(),
                    y4,
                    empty.clone(),
                ],
                inverse: false,
            });
            ages.push(tag);
        }
    };
    let zm_age = |age: u8, tag: AgeTag, rules: &mut Vec<Rule>, ages: &mut Vec<AgeTag>| {
        for zr in zm.rules() {
            let mid = &zr.parts[1];
            let q1 = st(q1_name(None, age));
            rules.push(Rule {
                name: format!("{}@{age}", zr.name.strip_prefix(ZM_PREFIX).unwrap()),
                parts: vec![
                    Part::fixed(k0),
                    Part::fixed(q1),
                    Part::fixed(k1),
                    Part {
                        domain: st(q2_name(Some(p_state(&zm, mid.domain)), age)),
                        left: mid.left.iter().map(|&l| carry(&zm, l)).collect(),
                        target: st(q2_name(Some(p_state(&zm, mid.target)), age)),
                        right: mid.right.iter().map(|&l| carry(&zm, l)).collect(),
                    },
                    Part::fixed(k2),
                ],
                permits: vec![
                    empty.clone(),
                    y_a0.clone(),
                    empty.clone(),
                    carry_set(&zm, &zr.permits[1]),
                    carry_set(&zm, &zr.permits[2]),
                    empty.clone(),
                ],
                inverse: false,
            });
            ages.push(tag);
        }
    };
    let connecting = |name: &str, q1: (String, String), q2: (String, String), y3: &LetterSet, y4: &LetterSet| Rule {
        name: name.to_string(),
        parts: vec![
            Part::fixed(k0),
            Part { domain: st(q1.0), left: vec![], target: st(q1.1), right: vec![] },
            Part::fixed(k1),
            Part { domain: st(q2.0), left: vec![], target: st(q2.1), right: vec![] },
            Part::fixed(k2),
        ],
        permits: vec![empty.clone(), y_a0.clone(), empty.clone(), y3.clone(), y4.clone(), empty.clone()],
        inverse: false,
    };

    z_age(1, AgeTag::A1, &mut rules, &mut ages);
    rules.push(connecting("c@12", (q1_name(Some(3), 1), q1_name(Some(3), 2)), (q2_name(None, 1), q2_name(None, 2)), &y_h0, &empty));
    ages.push(AgeTag::A12);
    z_age(2, AgeTag::A2, &mut rules, &mut ages);
    rules.push(connecting("c@23", (q1_name(Some(1), 2), q1_name(None, 3)), (q2_name(None, 2), q2_name(Some(1), 3)), &empty, &y_h0));
    ages.push(AgeTag::A23);
    zm_age(3, AgeTag::A3, &mut rules, &mut ages);
    rules.push(connecting("c@34", (q1_name(None, 3), q1_name(None, 4)), (q2_name(Some(3), 3), q2_name(Some(3), 4)), &empty, &y_h0));
    ages.push(AgeTag::A34);
    zm_age(4, AgeTag::A4, &mut rules, &mut ages);
    rules.push(connecting("c@45", (q1_name(None, 4), q1_name(Some(1), 5)), (q2_name(Some(1), 4), q2_name(None, 5)), &empty, &y_h0));
    ages.push(AgeTag::A45);
    z_age(5, AgeTag::A5, &mut rules, &mut ages);
    rules.push(connecting("c@56", (q1_name(Some(3), 5), q1_name(Some(3), 6)), (q2_name(None, 5), q2_name(None, 6)), &y_h0, &empty));
    ages.push(AgeTag::A56);
    z_age(6, AgeTag::A6, &mut rules, &mut ages);

    MachineSpec::new("M", alpha, hardware, rules, Some(ages))
}

use super::*;
use crate::engine::{Letter, LetterKind, LetterSet, Rule};

fn names(m: &MachineSpec, s: &LetterSet) -> Vec<String> {
    let mut v: Vec<String> = s.iter().map(|id| m.alphabet.name(id).to_string()).collect();
    v.sort();
    v
}

fn word(m: &MachineSpec, ls: &[Letter]) -> String {
    ls.iter().map(|&l| m.alphabet.format_letter(l)).collect::<Vec<_>>().join(" ")
}

fn rule<'a>(m: &'a MachineSpec, name: &str) -> &'a Rule {
    &m.rules()[m.rule_id(name).unwrap_or_else(|| panic!("no rule {name}"))]
}

#[test]
fn adding_machine_census() {
    let z = build_adding_machine(&["a"]).unwrap();
    let ids: Vec<&str> = z.rules().iter().map(|r| r.name.as_str()).collect();
    assert_eq!(ids, ["Z.r1(a)", "Z.r12(a)", "Z.r2(a)", "Z.r21", "Z.r13", "Z.r3(a)"]);

    let big = build_adding_machine(&["a", "b", "c", "d", "e", "f"]).unwrap();
    // every rule except r21 and r13 is parameterized by a letter
    let parameterized = big.rules().iter().filter(|r| r.name.contains('(')).count();
    assert_eq!(parameterized, 4 * 6);
    assert_eq!(big.rule_count(), 26);
    assert!(matches!(build_adding_machine(&[]), Err(MachineError::EmptyAlphabet)));
}

#[test]
fn adding_machine_permits() {
    let z = build_adding_machine(&["a"]).unwrap();
    assert_eq!(names(&z, &z.hardware.sectors[1]), ["a0", "a1"]);
    assert_eq!(names(&z, &z.hardware.sectors[2]), ["a0"]);
    assert!(rule(&z, "Z.r21").permits[2].is_empty());
    assert_eq!(names(&z, &rule(&z, "Z.r21").permits[1]), ["a0", "a1"]);
    assert!(rule(&z, "Z.r13").permits[1].is_empty());
    assert_eq!(names(&z, &rule(&z, "Z.r13").permits[2]), ["a0"]);
    assert_eq!(names(&z, &rule(&z, "Z.r3(a)").permits[1]), ["a0"]);
    // defaults elsewhere
    assert_eq!(names(&z, &rule(&z, "Z.r1(a)").permits[1]), ["a0", "a1"]);
    let r1 = rule(&z, "Z.r1(a)").part(2);
    assert_eq!(word(&z, &r1.image()), "a1^-1 p(1) a0");
    assert_eq!(word(&z, &rule(&z, "Z.r12(a)").part(2).image()), "a0^-1 a1 p(2)");
    assert_eq!(word(&z, &rule(&z, "Z.r2(a)").part(2).image()), "a0 p(2) a0^-1");
    assert_eq!(word(&z, &rule(&z, "Z.r3(a)").part(2).image()), "a0 p(3) a0^-1");
}

#[test]
fn mirror_machine_shape() {
    let zm = build_mirror_machine(&["a"]).unwrap();
    assert_eq!(zm.rule_count(), 6);
    let r1 = rule(&zm, "Zm.r1(a)").part(2);
    assert_eq!(word(&zm, &r1.left), "a0");
    assert_eq!(word(&zm, &r1.right), "a1^-1");
    assert_eq!(names(&zm, &zm.hardware.sectors[1]), ["a0"]);
    assert_eq!(names(&zm, &zm.hardware.sectors[2]), ["a0", "a1"]);
    assert!(rule(&zm, "Zm.r13").permits[2].is_empty());
}

#[test]
fn mirror_of_mirror_is_original() {
    let z = build_adding_machine(&["a", "b"]).unwrap();
    let back = mirror(&mirror(&z).unwrap()).unwrap();
    assert_eq!(back.rules(), z.rules());
    assert_eq!(back.hardware.sectors, z.hardware.sectors);
    assert_eq!(back.describe().lines().skip(1).collect::<Vec<_>>(), z.describe().lines().skip(1).collect::<Vec<_>>());
}

#[test]
fn main_machine_census() {
    let m = build_main_machine().unwrap();
    let per_age = |tag: AgeTag| m.rules().iter().enumerate().filter(|(i, _)| m.age(crate::engine::SignedRule::positive(*i)) == Some(tag)).count();
    let counts: Vec<usize> = AgeTag::CHAIN.iter().map(|&t| per_age(t)).collect();
    assert_eq!(counts, [6, 1, 6, 1, 26, 1, 26, 1, 6, 1, 6]);
    assert_eq!(m.rule_count(), counts.iter().sum::<usize>());
    assert_eq!(m.rule_count(), 81);

    let q = m.alphabet.ids().filter(|&id| matches!(m.alphabet.kind(id), LetterKind::State { .. })).count();
    let a = m.alphabet.ids().filter(|&id| m.alphabet.kind(id) == LetterKind::Tape).count();
    assert_eq!(q, 27);
    assert_eq!(a, 14);
    assert_eq!(m.hardware.parts * m.rule_count(), 405);
}

#[test]
fn main_machine_displayed_rules() {
    let m = build_main_machine().unwrap();
    let r = rule(&m, "r1(a)@1");
    assert_eq!(word(&m, &r.part(2).image()), "a1^-1 q1(1)@1 a0");
    assert_eq!(word(&m, &r.part(4).image()), "h0[r1] q2@1");
    assert!(r.permits[4].is_empty());
    assert_eq!(names(&m, &r.permits[3]).len(), 6);

    let r2 = rule(&m, "r1(a)@2");
    assert_eq!(word(&m, &r2.part(4).image()), "h0[r1] q2@2 h0[r1]^-1");
    assert_eq!(r2.permits[3], r2.permits[4]);

    let r3 = rule(&m, "r1(h[r12])@3");
    assert_eq!(word(&m, &r3.part(4).image()), "h0[r12] q2(1)@3 h1[r12]^-1");
    assert_eq!(word(&m, &r3.part(2).image()), "q1@3");
    assert_eq!(names(&m, &r3.permits[1]), ["a0"]);
    assert!(r3.permits[2].is_empty());

    let c = rule(&m, "c@12");
    assert_eq!(m.alphabet.name(c.part(2).domain), "q1(3)@1");
    assert_eq!(m.alphabet.name(c.part(2).target), "q1(3)@2");
    assert_eq!(m.alphabet.name(c.part(4).domain), "q2@1");
    assert_eq!(m.alphabet.name(c.part(4).target), "q2@2");
}

#[test]
fn connecting_rule_permit_table() {
    let m = build_main_machine().unwrap();
    let h0: Vec<String> = {
        let mut v: Vec<String> = UPSILON.iter().map(|t| format!("h0[{t}]")).collect();
        v.sort();
        v
    };
    let expect = |name: &str, y3_h0: bool, y4_h0: bool| {
        let r = rule(&m, name);
        assert_eq!(names(&m, &r.permits[1]), ["a0"], "{name} Y1");
        assert!(r.permits[2].is_empty(), "{name} Y2");
        assert_eq!(names(&m, &r.permits[3]), if y3_h0 { h0.clone() } else { vec![] }, "{name} Y3");
        assert_eq!(names(&m, &r.permits[4]), if y4_h0 { h0.clone() } else { vec![] }, "{name} Y4");
    };
    expect("c@12", true, false);
    expect("c@23", false, true);
    expect("c@34", false, true);
    expect("c@45", false, true);
    expect("c@56", true, false);
}

#[test]
fn connecting_rules_change_both_heads() {
    let m = build_main_machine().unwrap();
    for r in m.rules().iter().filter(|r| r.name.starts_with("c@")) {
        assert_ne!(r.part(2).domain, r.part(2).target, "{}", r.name);
        assert_ne!(r.part(4).domain, r.part(4).target, "{}", r.name);
    }
}

#[test]
fn aged_rules_are_renamed_z_rules() {
    let m = build_main_machine().unwrap();
    let z = build_adding_machine(&["a"]).unwrap();
    let zm = build(MachineKind::Zmir);
    let rename = |s: String| -> String {
        // q1(s)@g / q2(s)@g -> p(s)
        if let Some(rest) = s.strip_prefix("q1").or_else(|| s.strip_prefix("q2")) {
            let state = rest.split('@').next().unwrap();
            return format!("p{state}").replace("^-1", "");
        }
        s
    };
    for age in [1u8, 2, 5, 6] {
        for zr in z.rules() {
            let name = format!("{}@{age}", zr.name.strip_prefix(Z_PREFIX).unwrap());
            let mr = rule(&m, &name);
            let zimg: Vec<String> = zr.part(2).image().iter().map(|&l| z.alphabet.format_letter(l)).collect();
            let mimg: Vec<String> = mr.part(2).image().iter().map(|&l| rename(m.alphabet.format_letter(l))).collect();
            assert_eq!(zimg, mimg, "{name}");
            assert_eq!(names(&z, &zr.permits[1]), names(&m, &mr.permits[1]));
            assert_eq!(names(&z, &zr.permits[2]), names(&m, &mr.permits[2]));
        }
    }
    for age in [3u8, 4] {
        for zr in zm.rules() {
            let name = format!("{}@{age}", zr.name.strip_prefix(ZM_PREFIX).unwrap());
            let mr = rule(&m, &name);
            let zimg: Vec<String> = zr.part(2).image().iter().map(|&l| zm.alphabet.format_letter(l)).collect();
            let mimg: Vec<String> = mr.part(4).image().iter().map(|&l| rename(m.alphabet.format_letter(l))).collect();
            assert_eq!(zimg, mimg, "{name}");
            assert_eq!(names(&zm, &zr.permits[1]), names(&m, &mr.permits[3]));
            assert_eq!(names(&zm, &zr.permits[2]), names(&m, &mr.permits[4]));
        }
    }
}

#[test]
fn ages_of_rules() {
    let m = build_main_machine().unwrap();
    assert_eq!(age_of(&m, "r1(a)@1").unwrap(), AgeTag::A1);
    assert_eq!(age_of(&m, "c@34").unwrap(), AgeTag::A34);
    assert!(is_connecting(&m, "c@34").unwrap());
    assert_eq!(age_of(&m, "c@12^-1").unwrap(), AgeTag::A12);
    assert!(is_connecting(&m, "c@12^-1").unwrap());
    assert!(!is_connecting(&m, "r3(h[r2])@4").unwrap());
    assert!(matches!(age_of(&m, "nope"), Err(MachineError::UnknownRule(_))));
    assert_eq!("(45)".parse::<AgeTag>().unwrap(), AgeTag::A45);
    assert_eq!(AgeTag::A56.to_string(), "(56)");
}

#[test]
fn describe_is_deterministic() {
    let a = build_main_machine().unwrap().describe();
    let b = build_main_machine().unwrap().describe();
    assert_eq!(a, b);
    assert_eq!(a.lines().filter(|l| l.starts_with("rule ")).count(), 81);
}

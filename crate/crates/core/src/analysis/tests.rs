use super::*;
use crate::config::Budget;
use crate::engine::{run_history, TraceMode};
use crate::machines::{build, AgeTag, MachineKind};

fn g_formula(n: u32) -> u64 {
    4 * (1u64 << n) - 3
}

#[test]
fn g_of_one_by_hand() {
    let z = build(MachineKind::Z);
    let run = g_oracle(1, &Budget::default()).unwrap();
    assert_eq!(run.g, 5);
    assert_eq!(z.format_history(&run.history), "Z.r12(a) Z.r21 Z.r1(a) Z.r13 Z.r3(a)");
}

#[test]
fn g_bounds_and_closed_form() {
    for n in 0..=12 {
        let g = g_value(n).unwrap();
        assert!(1u64 << n <= g && g <= 6 << n, "n = {n}, g = {g}");
        assert_eq!(g, g_formula(n));
    }
    assert_eq!(g_value(0).unwrap(), 1);
}

#[test]
fn g_words_have_constant_length() {
    let z = build(MachineKind::Z);
    let run = g_oracle(4, &Budget::default()).unwrap();
    let start = z.parse_word("L a0 a0 a0 a0 p(1) R").unwrap();
    let c = run_history(&z, &start, &run.history, TraceMode::Full).unwrap();
    assert!(c.trace.unwrap().iter().all(|w| w.len() == 7));
    assert_eq!(z.format_word(&c.end), "L a0 a0 a0 a0 p(3) R");
}

#[test]
fn g_budget_is_enforced() {
    let budget = Budget { max_steps: 100, ..Budget::default() };
    assert!(matches!(g_oracle(10, &budget), Err(AnalysisError::BudgetExceeded { .. })));
}

#[test]
fn unique_branch_reaches_target() {
    for n in 0..=6 {
        let run = g_oracle(n, &Budget::default()).unwrap();
        assert_eq!(run.branches.iter().filter(|b| b.reached).count(), 1);
    }
}

#[test]
fn counter_cases() {
    let z = build(MachineKind::Z);
    assert_eq!(counter_value(&z, &z.parse_word("L a0 a0 p(1) R").unwrap()).unwrap(), 0);
    assert_eq!(counter_value(&z, &z.parse_word("L a1 a0 p(1) R").unwrap()).unwrap(), 2);
    assert_eq!(counter_value(&z, &z.parse_word("L a0^-1 p(1) R").unwrap()), Err(AnalysisError::MixedSigns));
    assert!(matches!(counter_value(&z, &z.parse_word("p(1) R").unwrap()), Err(AnalysisError::WrongBase(_))));
}

#[test]
fn counter_counts_modulo() {
    for n in 1..=5u32 {
        let values = counter_returns(n, &Budget::default()).unwrap();
        let expected: Vec<u64> = (0..=(1u64 << n)).map(|j| j % (1 << n)).collect();
        assert_eq!(values, expected, "n = {n}");
    }
}

#[test]
fn canonical_identities() {
    let m = build(MachineKind::Main);
    for n in [0, 1, 2] {
        let c = canonical_history(&m, n, 1_000_000).unwrap();
        assert_eq!(c.g, g_formula(n));
        assert_eq!(c.gg, g_formula(c.g as u32));
        assert_eq!(c.history.len() as u64, c.expected_len());
        assert_eq!(c.middle().len() as u64, 5 + 2 * c.g + 2 * c.gg);
        let r = replay_canonical(&m, &c).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.brief, "(1)(12)(2)(23)(3)(34)(4)(45)(5)(56)(6)");
    }
    let c = canonical_history(&m, 2, 1_000_000).unwrap();
    assert_eq!(c.history.len(), 65587);
}

#[test]
fn canonical_over_budget() {
    let m = build(MachineKind::Main);
    assert!(matches!(canonical_history(&m, 3, 1_000_000_000), Err(AnalysisError::BudgetExceeded { .. })));
}

#[test]
fn brief_and_long() {
    let m = build(MachineKind::Main);
    let c = canonical_history(&m, 1, 1_000_000).unwrap();
    assert!(is_long(&m, &c.history));
    let inv = crate::engine::inverse_history(&c.history);
    assert!(is_long(&m, &inv));
    assert_eq!(brief_history(&m, &inv).unwrap(), brief_history(&m, &c.history).unwrap().reversed());
    let short = &c.history[..c.segments[0] + 1 + c.segments[2]];
    assert!(!is_long(&m, short));
    assert_eq!(brief_history(&m, short).unwrap().tags(), [AgeTag::A1, AgeTag::A12, AgeTag::A2]);
}

#[test]
fn checkers_pass_on_canonical_and_reject_foreign_bases() {
    let m = build(MachineKind::Main);
    let c = canonical_history(&m, 1, 1_000_000).unwrap();
    let comp = run_history(&m, &canonical_start(&m, 1), &c.history, TraceMode::Full).unwrap();
    assert!(check_lemma(CheckerKey::LongAWidth, &m, &comp).unwrap().passed());
    assert!(matches!(check_lemma(CheckerKey::MonotoneSplit, &m, &comp), Err(AnalysisError::Inapplicable(_))));
    assert!(matches!(check_lemma(CheckerKey::LengthGrowth, &m, &comp), Err(AnalysisError::Inapplicable(_))));
    assert!(matches!(check_lemma(CheckerKey::CoveredWidth, &m, &comp), Err(AnalysisError::Inapplicable(_))));
}

#[test]
fn projection_on_single_steps() {
    let z = build(MachineKind::Z);
    let start = z.parse_word("L a0 a1 p(1) R").unwrap();
    for r in crate::engine::enumerate_applicable(&z, &start) {
        let c = run_history(&z, &start, &[r], TraceMode::Full).unwrap();
        assert!(check_lemma(CheckerKey::Projection, &z, &c).unwrap().passed());
    }
}

#[test]
fn checker_suites_small() {
    for key in CheckerKey::ALL {
        let reports = run_checker_suite(key, 200, 7, 50).unwrap();
        let s = merge_reports(&reports).unwrap();
        assert_eq!(s.samples, 200);
        assert_eq!(s.violations, 0, "{key}: {:?}", s.first_violation);
    }
}

#[test]
fn searches_small_and_deterministic() {
    let budget = SearchBudget { samples: 300, batch: 100, seed: 3, ..SearchBudget::default() };
    for key in SearchKey::ALL {
        let a = bounded_counterexample_search(key, &budget).unwrap();
        let s = merge_reports(&a).unwrap();
        assert_eq!(s.violations, 0, "{key}: {:?}", s.first_violation);
        let b = bounded_counterexample_search(key, &budget).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn merge_is_order_independent() {
    let budget = SearchBudget { samples: 200, batch: 50, seed: 1, ..SearchBudget::default() };
    let mut r = bounded_counterexample_search(SearchKey::ShortBound, &budget).unwrap();
    let a = merge_reports(&r).unwrap();
    r.reverse();
    assert_eq!(merge_reports(&r).unwrap(), a);
}

#[test]
fn keys_round_trip() {
    for k in CheckerKey::ALL {
        assert_eq!(k.as_str().parse::<CheckerKey>().unwrap(), k);
    }
    for k in SearchKey::ALL {
        assert_eq!(k.as_str().parse::<SearchKey>().unwrap(), k);
    }
}

#[test]
fn headless_base_admits_both_connecting_rules() {
    let m = build(MachineKind::Main);
    let w = m.parse_word("k0 a0^-1 a0^-1 k0^-1").unwrap();
    let h = m.parse_history("c@12 c@23").unwrap();
    let c = run_history(&m, &w, &h, TraceMode::Full).unwrap();
    assert_eq!(c.end, w);
}

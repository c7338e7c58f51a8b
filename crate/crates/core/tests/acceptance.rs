//! One line per acceptance criterion; the process fails if any criterion fails.

use std::time::{Duration, Instant};

use rand::Rng;
use smlab::analysis::{
    bounded_counterexample_search, canonical_end, canonical_history, counter_returns, g_oracle, merge_reports,
    replay_canonical, run_checker_suite, CheckerKey, SearchBudget, SearchKey,
};
use smlab::config::Budget;
use smlab::diagram::{band_bound_violations, build_trapezium, copies_for, glue, lower_bound_witness};
use smlab::engine::{apply_rule, run_history, TraceMode};
use smlab::machines::{build, MachineKind};
use smlab::presentation::{cross_validate, emit, parse, relator_stats, to_text};
use smlab::sampling::{self, random_applicable_pair, random_base, random_walk, random_word_on_base};

const WITNESS_GOLDEN: &str = include_str!("golden/witness_i1.jsonl");

type Criterion = (u32, &'static str, Box<dyn FnOnce() -> Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let elapsed = t.elapsed();
    if elapsed > limit {
        o.ok = false;
    }
    o.detail = format!("{}; {:.2}s of {}s", o.detail, elapsed.as_secs_f64(), limit.as_secs());
    o
}

fn g_bounds() -> Outcome {
    let budget = Budget::default();
    for n in 0..=12u32 {
        let g = match g_oracle(n, &budget) {
            Ok(run) => run.g,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        if !(1u64 << n <= g && g <= 6u64 << n) {
            return outcome(false, format!("g({n}) = {g} outside [{}, {}]", 1u64 << n, 6u64 << n));
        }
    }
    outcome(true, "2^n <= g(n) <= 6*2^n for n in 0..=12")
}

fn uniqueness() -> Outcome {
    for n in 0..=6u32 {
        match g_oracle(n, &Budget::default()) {
            Ok(run) => {
                let reached = run.branches.iter().filter(|b| b.reached).count();
                if reached != 1 {
                    return outcome(false, format!("n={n}: {reached} branches reach the target"));
                }
            }
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
    }
    outcome(true, "one continuation per step for n <= 6")
}

fn counter() -> Outcome {
    for n in 1..=8u32 {
        let values = match counter_returns(n, &Budget::default()) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        };
        let expected: Vec<u64> = (0..=(1u64 << n)).map(|j| j % (1 << n)).collect();
        if values != expected {
            return outcome(false, format!("n={n}: counter values {values:?}"));
        }
    }
    outcome(true, "j-th cycle gives j mod 2^n for n <= 8")
}

fn canonical(n: u32) -> Outcome {
    let m = build(MachineKind::Main);
    let c = match canonical_history(&m, n, Budget::default().max_streamed) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("n={n}: {e}")),
    };
    let r = match replay_canonical(&m, &c) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("n={n}: {e}")),
    };
    let end_ok = r.end == m.format_word(&canonical_end(&m, n));
    let ok = r.len == 5 + 4 * r.g + 2 * r.gg
        && r.brief == "(1)(12)(2)(23)(3)(34)(4)(45)(5)(56)(6)"
        && r.middle_a_width as u64 == n as u64 + r.g
        && end_ok;
    outcome(ok, format!("n={n}: len {} = 5+4*{}+2*{}, brief {}, middle a-width {}, end {}", r.len, r.g, r.gg, r.brief, r.middle_a_width, r.end))
}

fn band_bound() -> Outcome {
    let m = build(MachineKind::Main);
    let c = canonical_history(&m, 1, Budget::default().max_steps).unwrap();
    let comp = run_history(&m, &smlab::analysis::canonical_start(&m, 1), &c.history, TraceMode::Full).unwrap();
    let t = build_trapezium(&m, &comp).unwrap();
    let mut bands = t.height();
    if let Some(v) = band_bound_violations(&t).first() {
        return outcome(false, format!("canonical band {v:?}"));
    }
    let mut rng = sampling::rng(5, 0);
    let mut built = 0;
    while built < 10_000 {
        let len = rng.gen_range(1..=6);
        let base: Vec<_> = random_base(&m, &mut rng, len)
            .into_iter()
            .map(|(part, inv)| {
                let states = &m.hardware.states[part - 1];
                smlab::engine::Letter::new(states[rng.gen_range(0..states.len())], inv)
            })
            .collect();
        let Some(w) = random_word_on_base(&m, &mut rng, &base, 4) else { continue };
        let steps = rng.gen_range(1..=30);
        let (history, _) = random_walk(&m, &mut rng, &w, steps, |_| true);
        let comp = run_history(&m, &w, &history, TraceMode::Full).unwrap();
        let t = build_trapezium(&m, &comp).unwrap();
        if let Some(v) = band_bound_violations(&t).first() {
            return outcome(false, format!("band {v:?} from {}", m.format_word(&w)));
        }
        if t.top != comp.end {
            return outcome(false, "trapezium top differs from the final word");
        }
        bands += t.height();
        built += 1;
    }
    outcome(true, format!("cells <= 10 + |W_i| on {bands} bands (canonical n=1 and 10^4 random)"))
}

fn witness() -> Outcome {
    let m = build(MachineKind::Main);
    let w = match lower_bound_witness(&m, 1, &Budget::default()) {
        Ok(w) => w,
        Err(e) => return outcome(false, e.to_string()),
    };
    let n1 = w.n_i;
    let k = copies_for(n1);
    let ledger = w.k == k
        && w.area == k * w.area_delta
        && w.perimeter == k * (w.top_len + w.bottom_len) as u64 + 2 * n1;
    let tolerance = 0.25;
    let bound = 4.0 * n1 as f64 * (1.0 + tolerance);
    let perimeter_ok = (w.perimeter as f64) <= bound;
    let ratio_ok = w.psi_ratio.is_finite() && w.psi_ratio > 0.0;
    let golden = serde_json::to_string(&w).unwrap() + "\n" == WITNESS_GOLDEN;
    // the glue ledger itself must agree with the witness record
    let c = canonical_history(&m, 1, Budget::default().max_steps).unwrap();
    let comp = run_history(&m, &smlab::analysis::canonical_start(&m, 1), &c.history, TraceMode::Full).unwrap();
    let g = glue(&build_trapezium(&m, &comp).unwrap(), k);
    let consistent = g.area == w.area && g.perimeter == w.perimeter;
    outcome(
        ledger && perimeter_ok && ratio_ok && golden && consistent,
        format!(
            "n_1 {n1}, k {k}, area {} = k*{}, perimeter {} vs 4*n_1*1.25 = {bound} ({}), area/Psi(perimeter) {:.6}, golden {}",
            w.area,
            w.area_delta,
            w.perimeter,
            if perimeter_ok { "within" } else { "exceeds" },
            w.psi_ratio,
            if golden { "matches" } else { "differs" }
        ),
    )
}

fn lemma_suites() -> Outcome {
    let mut total = 0;
    let mut parts = Vec::new();
    for key in CheckerKey::ALL {
        let s = merge_reports(&run_checker_suite(key, 10_000, 0, 1_000).unwrap()).unwrap();
        total += s.violations;
        parts.push(format!("{key} {}", s.violations));
    }
    for key in SearchKey::ALL {
        let budget = SearchBudget { width: 4, length: 30, samples: 100_000, seed: 0, ..SearchBudget::default() };
        let s = merge_reports(&bounded_counterexample_search(key, &budget).unwrap()).unwrap();
        total += s.violations;
        parts.push(format!("{key} {}", s.violations));
    }
    outcome(total == 0, format!("violations: {}", parts.join(", ")))
}

fn presentation() -> Outcome {
    let m = build(MachineKind::Main);
    let p = emit(&m);
    let s = relator_stats(&p);
    let checked = cross_validate(&m, &p);
    let ok = s.max_relator_len <= 6 && s.q_relations == 5 * m.rule_count() && checked.is_ok();
    outcome(
        ok,
        format!(
            "max relator length {}, q-relations {} = 5*{}, cross-validated {:?}",
            s.max_relator_len,
            s.q_relations,
            m.rule_count(),
            checked.map_err(|e| e.to_string())
        ),
    )
}

fn round_trips() -> Outcome {
    let mut rng = sampling::rng(9, 0);
    let machines = [build(MachineKind::Z), build(MachineKind::Zmir), build(MachineKind::Main)];
    for i in 0..100_000 {
        let m = &machines[i % 3];
        let (w, rule) = random_applicable_pair(m, &mut rng, 6, 4);
        let there = apply_rule(m, &w, rule).unwrap();
        match apply_rule(m, &there, rule.inverse()) {
            Ok(back) if back == w => {}
            _ => return outcome(false, format!("{} then inverse does not return to {}", m.rule_name(rule), m.format_word(&w))),
        }
    }
    for m in &machines {
        let p = emit(m);
        if parse(&to_text(&p)).as_ref() != Ok(&p) {
            return outcome(false, format!(".pres round trip fails for {}", m.name));
        }
    }
    for i in 0..2_000 {
        let m = &machines[i % 3];
        let (w, _) = random_applicable_pair(m, &mut rng, 6, 4);
        let (history, words) = random_walk(m, &mut rng, &w, 30, |_| true);
        let full = run_history(m, &w, &history, TraceMode::Full).unwrap();
        let streamed = run_history(m, &w, &history, TraceMode::Streamed { checkpoint_stride: 7 }).unwrap();
        if full.trace.as_ref() != Some(&words) || streamed.end != *words.last().unwrap() || full.stats != streamed.stats {
            return outcome(false, format!("replay differs from {}", m.format_word(&w)));
        }
    }
    outcome(true, "10^5 inversions, 3 presentation files, 2000 trace replays")
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "g-bounds", Box::new(|| timed(Duration::from_secs(10), g_bounds))),
        (2, "constant-length uniqueness", Box::new(|| timed(Duration::from_secs(10), uniqueness))),
        (3, "counter semantics", Box::new(|| timed(Duration::from_secs(30), counter))),
        (
            4,
            "canonical-history identity",
            Box::new(|| {
                let a = timed(Duration::from_secs(1), || canonical(1));
                let b = timed(Duration::from_secs(600), || canonical(2));
                outcome(a.ok && b.ok, format!("{} | {}", a.detail, b.detail))
            }),
        ),
        (5, "band bound", Box::new(|| timed(Duration::from_secs(60), band_bound))),
        (6, "witness ledger", Box::new(|| timed(Duration::from_secs(60), witness))),
        (7, "lemma suites", Box::new(|| timed(Duration::from_secs(600), lemma_suites))),
        (8, "presentation integrity", Box::new(|| timed(Duration::from_secs(10), presentation))),
        (9, "round-trips", Box::new(|| timed(Duration::from_secs(60), round_trips))),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        println!("criterion {id} ({name}): {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        if !o.ok {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

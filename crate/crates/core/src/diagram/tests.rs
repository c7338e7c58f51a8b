use super::*;
use crate::analysis::{canonical_history, canonical_start};
use crate::config::Budget;
use crate::engine::{run_history, TraceMode};
use crate::machines::{build, MachineKind, MachineSpec};

fn trapezium(m: &MachineSpec, word: &str, history: &str) -> (crate::engine::Computation, Trapezium) {
    let w = m.parse_word(word).unwrap();
    let h = m.parse_history(history).unwrap();
    let c = run_history(m, &w, &h, TraceMode::Full).unwrap();
    let t = build_trapezium(m, &c).unwrap();
    (c, t)
}

#[test]
fn single_band_census() {
    let z = build(MachineKind::Z);
    let (_, t) = trapezium(&z, "L a0 p(1) R", "Z.r12(a)");
    assert_eq!((t.bands[0].q_cells, t.bands[0].a_cells), (3, 0));
    assert_eq!(z.format_word(&t.top), "L a1 p(2) R");
    let (_, t) = trapezium(&z, "L a0 a0 p(1) R", "Z.r12(a)");
    assert_eq!((t.bands[0].q_cells, t.bands[0].a_cells), (3, 1));
    assert_eq!(z.format_word(&t.top), "L a0 a1 p(2) R");
}

#[test]
fn empty_history() {
    let z = build(MachineKind::Z);
    let (_, t) = trapezium(&z, "L a0 p(1) R", "");
    assert_eq!((t.height(), t.area(), t.perimeter()), (0, 0, 8));
}

#[test]
fn streamed_computation_is_rejected() {
    let z = build(MachineKind::Z);
    let w = z.parse_word("L a0 p(1) R").unwrap();
    let h = z.parse_history("Z.r12(a)").unwrap();
    let c = run_history(&z, &w, &h, TraceMode::Streamed { checkpoint_stride: 0 }).unwrap();
    assert_eq!(build_trapezium(&z, &c).unwrap_err(), DiagramError::StreamedTraceUnsupported);
}

#[test]
fn canonical_trapezium() {
    let m = build(MachineKind::Main);
    let canon = canonical_history(&m, 1, 1_000_000).unwrap();
    let c = run_history(&m, &canonical_start(&m, 1), &canon.history, TraceMode::Full).unwrap();
    let t = build_trapezium(&m, &c).unwrap();
    assert_eq!(t.height(), 275);
    assert_eq!(t.top, c.end);
    assert!(band_bound_violations(&t).is_empty());
    let streamed = build_trapezium_streamed(&m, &c.start, &c.history).unwrap();
    assert_eq!(streamed.bands, t.bands);
    assert!(area_constant(&m, &t) > 0.0);
}

#[test]
fn glue_ledger() {
    let z = build(MachineKind::Z);
    let (c, t) = trapezium(&z, "L a0 a0 p(1) R", "Z.r12(a) Z.r21 Z.r1(a)");
    let one = glue(&t, 1);
    assert_eq!((one.area, one.perimeter), (t.area(), t.perimeter()));
    let two = glue(&t, 2);
    assert_eq!(two.area, 2 * t.area());
    assert_eq!(two.perimeter, 2 * (t.top.len() + t.bottom.len()) as u64 + 2 * t.height() as u64);
    for k in 1..=6 {
        let e = explicit_glue(&z, &c, &t, k).unwrap();
        let g = glue(&t, k as u64);
        assert_eq!((e.boundary, e.area), (g.perimeter, g.area), "k = {k}");
        assert_eq!(e.faces, k * t.height());
    }
}

#[test]
fn explicit_glue_flat() {
    let z = build(MachineKind::Z);
    let (c, t) = trapezium(&z, "L a0 p(1) R", "");
    assert_eq!(explicit_glue(&z, &c, &t, 3).unwrap().boundary, glue(&t, 3).perimeter);
}

#[test]
fn witness_one() {
    let m = build(MachineKind::Main);
    let w = lower_bound_witness(&m, 1, &Budget::default()).unwrap();
    assert_eq!(w.n_i, 275);
    assert_eq!((w.bottom_len, w.top_len), (6, 6));
    assert_eq!(w.k, copies_for(275));
    assert_eq!(w.area, w.k * w.area_delta);
    assert_eq!(w.perimeter, w.k * 12 + 2 * 275);
    assert!(w.psi_ratio.is_finite() && w.psi_ratio > 0.0);
}

#[test]
fn bound_functions() {
    assert_eq!(log_prime(1.0), 1.0);
    assert_eq!(log_prime(16.0), 4.0);
    for n in [1.0, 10.0, 275.0, 65587.0] {
        assert!((big_psi(n) - n * n * small_psi(n)).abs() <= 1e-9 * big_psi(n));
    }
    let rows = bounds_table(3, 0.125);
    assert_eq!((rows[0].n_i, rows[0].n_prime_i), (Some(275), Some(125)));
    assert_eq!((rows[1].n_i, rows[1].n_prime_i), (Some(65587), Some(32765)));
    assert_eq!(rows[0].third_below, Some(true));
    assert!(rows[2].note.as_deref().unwrap().starts_with("out of budget"));
}

#[test]
fn svg_has_a_polygon_per_cell() {
    let z = build(MachineKind::Z);
    let (_, t) = trapezium(&z, "L a0 a0 p(1) R", "Z.r12(a) Z.r21");
    let svg = trapezium_svg(&t, 2);
    assert_eq!(svg.matches("<polygon").count() as u64, 2 * t.area());
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

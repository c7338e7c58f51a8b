use std::fmt::Write;

use super::Trapezium;

const CELL: f64 = 14.0;
const ROW: f64 = 18.0;

/// Bands as horizontal strips (bottom band lowest), one quadrilateral per cell.
/// The q-cells are shaded; each strip is labelled by its rule.
pub fn trapezium_svg(t: &Trapezium, copies: usize) -> String {
    let widest = t.bands.iter().map(|b| b.cells()).max().unwrap_or(0).max(1) as f64;
    let copy_w = widest * CELL + 4.0 * CELL;
    let width = copy_w * copies.max(1) as f64 + 160.0;
    let height = ROW * t.height().max(1) as f64 + 20.0;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="10">"#
    )
    .unwrap();
    for copy in 0..copies.max(1) {
        let x0 = 10.0 + copy as f64 * copy_w;
        for (i, band) in t.bands.iter().enumerate() {
            let y = height - 10.0 - ROW * (i + 1) as f64;
            let cells = band.cells() as f64;
            let offset = x0 + (widest - cells) * CELL / 2.0;
            for j in 0..band.cells() {
                let x = offset + j as f64 * CELL;
                // q-cells are spread evenly through the strip
                let is_q = band.q_cells > 0 && j * band.q_cells / band.cells().max(1) != (j + 1) * band.q_cells / band.cells().max(1);
                let fill = if is_q { "#c9d8f0" } else { "#ffffff" };
                writeln!(
                    s,
                    r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{fill}" stroke="black" stroke-width="0.5"/>"#,
                    x, y + ROW, x + CELL, y + ROW, x + CELL, y, x, y
                )
                .unwrap();
            }
            if copy + 1 == copies.max(1) {
                let lx = x0 + copy_w;
                writeln!(s, r#"<text x="{lx:.1}" y="{:.1}">{}</text>"#, y + ROW - 5.0, escape(&band.rule_name)).unwrap();
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

//! Static SVG of a diagram: the grid, its vertices, and the planar link with
//! vertical segments drawn over horizontal ones.

use std::fmt::Write;

use gridcal::Diagram;

const CELL: usize = 36;
const MARGIN: usize = 24;
const PALETTE: [&str; 6] = ["#1f5fa8", "#b8402a", "#2e7d32", "#7b3fa0", "#c77c00", "#00838f"];

pub fn svg(d: &Diagram) -> String {
    let n = d.n();
    let size = 2 * MARGIN + n * CELL;
    let x = |c: usize| MARGIN + c * CELL + CELL / 2;
    // Row 0 at the bottom.
    let y = |r: usize| MARGIN + (n - 1 - r) * CELL + CELL / 2;
    let color = |k: usize| PALETTE[k % PALETTE.len()];
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#).unwrap();
    writeln!(s, r##"<g stroke="#d0d0d0" stroke-width="1">"##).unwrap();
    for i in 0..=n {
        let p = MARGIN + i * CELL;
        writeln!(s, r#"<line x1="{p}" y1="{MARGIN}" x2="{p}" y2="{}"/>"#, MARGIN + n * CELL).unwrap();
        writeln!(s, r#"<line x1="{MARGIN}" y1="{p}" x2="{}" y2="{p}"/>"#, MARGIN + n * CELL).unwrap();
    }
    s.push_str("</g>\n<g stroke-width=\"3\" stroke-linecap=\"round\">\n");
    for r in 0..n {
        let (a, b) = (d.minus_col()[r], d.plus_col()[r]);
        let k = d.component_of()[a];
        writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}"/>"#,
            x(a),
            y(r),
            x(b),
            y(r),
            color(k)
        )
        .unwrap();
    }
    for c in 0..n {
        let (p, m) = (d.plus_row()[c], d.minus_row()[c]);
        let k = d.component_of()[c];
        let (x0, y0, y1) = (x(c), y(p), y(m));
        writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="white" stroke-width="9"/>"#).unwrap();
        writeln!(s, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="{}"/>"#, color(k)).unwrap();
    }
    s.push_str("</g>\n<g stroke=\"black\" stroke-width=\"1.5\">\n");
    for c in 0..n {
        let k = d.component_of()[c];
        writeln!(s, r#"<circle cx="{}" cy="{}" r="6" fill="{}"/>"#, x(c), y(d.plus_row()[c]), color(k)).unwrap();
        writeln!(s, r#"<circle cx="{}" cy="{}" r="6" fill="white"/>"#, x(c), y(d.minus_row()[c])).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

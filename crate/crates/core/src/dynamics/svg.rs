use std::fmt::Write;

use super::{FieldSample, Trajectory};

const MARGIN: f64 = 40.0;

/// Phase portrait: normalised field arrows plus trajectory polylines.
/// `p1` runs left to right, `p2` bottom to top.
pub fn render_phase_portrait(field: &[FieldSample], trajectories: &[Trajectory], size: u32) -> String {
    let size = f64::from(size.max(100));
    let inner = size - 2.0 * MARGIN;
    let px = |p1: f64| MARGIN + p1 * inner;
    let py = |p2: f64| MARGIN + (1.0 - p2) * inner;
    let per_side = (field.len() as f64).sqrt().max(2.0);
    let arrow = 0.4 * inner / (per_side - 1.0);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        svg,
        r##"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="#555"/></marker></defs>"##
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{inner}" height="{inner}" fill="none" stroke="#000"/>"##
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">p1</text>"#,
        size / 2.0,
        size - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{}" text-anchor="middle" font-size="14">p2</text>"#,
        size / 2.0
    );
    for s in field {
        let norm = s.dp1.hypot(s.dp2);
        let (x, y) = (px(s.p1), py(s.p2));
        if norm < 1e-12 {
            let _ = writeln!(svg, r##"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="#555"/>"##);
            continue;
        }
        let (ux, uy) = (s.dp1 / norm * arrow, -s.dp2 / norm * arrow);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{:.2}" stroke="#555" marker-end="url(#head)"/>"##,
            x + ux,
            y + uy
        );
    }
    let palette = ["#c0392b", "#2471a3", "#1e8449", "#b9770e", "#7d3c98"];
    for (i, traj) in trajectories.iter().enumerate() {
        let points: Vec<String> = traj
            .states
            .iter()
            .map(|s| format!("{:.2},{:.2}", px(s.p1), py(s.p2)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            points.join(" "),
            palette[i % palette.len()]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

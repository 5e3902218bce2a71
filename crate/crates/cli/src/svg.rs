//! Region diagrams in the `(1/p, 1/q)` unit square.

use std::fmt::Write;

use laplace_lp::{DomainSpec, RegionPoint};

const SIDE: f64 = 400.0;
const MARGIN: f64 = 60.0;
const SHADE: &str = "#9ecae1";
const LINE: &str = "#08519c";
const YES: &str = "#08519c";
const NO: &str = "#cb181d";

fn px(u: f64) -> f64 {
    MARGIN + u * SIDE
}

fn py(v: f64) -> f64 {
    MARGIN + (1.0 - v) * SIDE
}

fn pt(u: f64, v: f64) -> String {
    format!("{:.1},{:.1}", px(u), py(v))
}

/// Renders the continuity region for `domain` with the lattice verdicts `points`.
pub fn region_svg(domain: &DomainSpec, points: &[RegionPoint]) -> String {
    let size = SIDE + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<title>Continuity region, domain {domain}</title>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{SIDE}" height="{SIDE}" fill="white" stroke="black" stroke-width="1"/>"#,
        m = MARGIN
    );

    // Shaded region and its solid boundary.
    let region: &[(f64, f64)] = match domain {
        DomainSpec::Bounded { .. } => &[(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        DomainSpec::Tail { .. } => &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
        DomainSpec::FullHalfLine => &[],
    };
    if !region.is_empty() {
        let poly: Vec<String> = region.iter().map(|&(u, v)| pt(u, v)).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{SHADE}" fill-opacity="0.6" stroke="{LINE}" stroke-width="2"/>"#,
            poly.join(" ")
        );
    }

    // Dotted guides at 1/p = 1/2 and 1/q = 1/2, and the excluded half of the duality line.
    let _ = writeln!(
        s,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="gray" stroke-width="1" stroke-dasharray="2,4"/>"#,
        px(0.5),
        py(0.0),
        px(0.5),
        py(1.0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="gray" stroke-width="1" stroke-dasharray="2,4"/>"#,
        px(0.0),
        py(0.5),
        px(1.0),
        py(0.5)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{NO}" stroke-width="2" stroke-dasharray="6,4"/>"#,
        px(0.0),
        py(1.0),
        px(0.5),
        py(0.5)
    );
    // Included half of the duality line.
    let _ = writeln!(
        s,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{LINE}" stroke-width="2"/>"#,
        px(0.5),
        py(0.5),
        px(1.0),
        py(0.0)
    );

    for p in points {
        let color = if p.verdict.continuous { YES } else { NO };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="2" fill="{color}"><title>1/p={} 1/q={} {}</title></circle>"#,
            px(p.inv_p),
            py(p.inv_q),
            p.inv_p,
            p.inv_q,
            p.verdict.reason.as_str()
        );
    }

    // Endpoint markers: closed at (1/2, 1/2) and (1, 0), open at (0, 1).
    for (u, v) in [(0.5, 0.5), (1.0, 0.0)] {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.1}" cy="{:.1}" r="5" fill="{LINE}" stroke="{LINE}" stroke-width="2"/>"#,
            px(u),
            py(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<circle cx="{:.1}" cy="{:.1}" r="5" fill="white" stroke="{LINE}" stroke-width="2"/>"#,
        px(0.0),
        py(1.0)
    );

    let label = |s: &mut String, x: f64, y: f64, anchor: &str, text: &str| {
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="14" text-anchor="{anchor}">{text}</text>"#
        );
    };
    label(&mut s, px(0.5), py(0.0) + 40.0, "middle", "1/p");
    label(&mut s, px(0.0) - 35.0, py(0.5), "middle", "1/q");
    for (t, text) in [(0.0, "0"), (0.5, "1/2"), (1.0, "1")] {
        label(&mut s, px(t), py(0.0) + 20.0, "middle", text);
        label(&mut s, px(0.0) - 10.0, py(t) + 5.0, "end", text);
    }
    s.push_str("</svg>\n");
    s
}

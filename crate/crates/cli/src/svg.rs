//! Newton polygon drawings.

use std::fmt::Write;

use planevec_core::vecfield::{is_demazure, NewtonPolygon};
use planevec_core::Weight;

const CELL: i32 = 40;
const MARGIN: i32 = 30;

/// Grid, support dots, hull, Demazure points and (when `euler`) the origin.
pub fn newton_svg(poly: &NewtonPolygon, euler: bool) -> String {
    let mut pts: Vec<Weight> = poly.support.clone();
    pts.extend([(-1, 0), (0, -1), (1, 1)]);
    if euler {
        pts.push((0, 0));
    }
    let (amin, amax) = (pts.iter().map(|p| p.0).min().unwrap() - 1, pts.iter().map(|p| p.0).max().unwrap() + 1);
    let (bmin, bmax) = (pts.iter().map(|p| p.1).min().unwrap() - 1, pts.iter().map(|p| p.1).max().unwrap() + 1);
    let width = (amax - amin) * CELL + 2 * MARGIN;
    let height = (bmax - bmin) * CELL + 2 * MARGIN;
    let px = |w: Weight| (MARGIN + (w.0 - amin) * CELL, MARGIN + (bmax - w.1) * CELL);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for a in amin..=amax {
        let (x, _) = px((a, 0));
        let stroke = if a == 0 { "#888" } else { "#ddd" };
        let _ = writeln!(s, r#"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}" stroke="{stroke}"/>"#, height - MARGIN);
    }
    for b in bmin..=bmax {
        let (_, y) = px((0, b));
        let stroke = if b == 0 { "#888" } else { "#ddd" };
        let _ = writeln!(s, r#"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}" stroke="{stroke}"/>"#, width - MARGIN);
    }
    for a in amin..=amax {
        for b in bmin..=bmax {
            if is_demazure((a, b)) {
                let (x, y) = px((a, b));
                let _ =
                    writeln!(s, r##"<circle class="demazure" cx="{x}" cy="{y}" r="7" fill="none" stroke="#2a7"/>"##);
            }
        }
    }
    if poly.vertices.len() > 1 {
        let path: Vec<String> = poly.vertices.iter().map(|&v| px(v)).map(|(x, y)| format!("{x},{y}")).collect();
        let tag = if poly.vertices.len() == 2 { "polyline" } else { "polygon" };
        let _ = writeln!(
            s,
            r##"<{tag} class="hull" points="{}" fill="none" stroke="#c33" stroke-width="2"/>"##,
            path.join(" ")
        );
    }
    for &w in &poly.support {
        let (x, y) = px(w);
        let _ = writeln!(s, r##"<circle class="support" cx="{x}" cy="{y}" r="4" fill="#225"/>"##);
    }
    if euler {
        let (x, y) = px((0, 0));
        let _ =
            writeln!(s, r##"<rect class="origin" x="{}" y="{}" width="10" height="10" fill="#e90"/>"##, x - 5, y - 5);
    }
    for &v in &poly.vertices {
        let (x, y) = px(v);
        let _ =
            writeln!(s, r#"<text class="vertex" x="{}" y="{}" font-size="12">({},{})</text>"#, x + 8, y - 8, v.0, v.1);
    }
    s.push_str("</svg>\n");
    s
}

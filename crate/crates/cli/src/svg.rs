//! Minimal line plot: fixed 800×600 viewport, Z on a linear x axis, each
//! series on its own linear y range (left axis for the first, right axis
//! for the second).

use std::fmt::Write as _;

use atomkit::SeriesTable;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 70.0;
const COLORS: [&str; 2] = ["#1f4e9c", "#c0392b"];

fn span(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return None;
    }
    // a flat series still needs a non-zero range
    Some(if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) })
}

fn label(v: f64) -> String {
    format!("{v:.4e}")
}

pub fn render(title: &str, t: &SeriesTable, columns: &[&str]) -> String {
    let zs = t.z_values();
    let (z_lo, z_hi) = span(zs.iter().map(|&z| z as f64)).unwrap_or((0.0, 1.0));
    let x_of = |z: f64| MARGIN + (z - z_lo) / (z_hi - z_lo) * (WIDTH - 2.0 * MARGIN);
    let bottom = HEIGHT - MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{MARGIN} {MARGIN} V{bottom} H{} V{MARGIN}" fill="none" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    for z in zs {
        let x = x_of(*z as f64);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{bottom}" x2="{x:.2}" y2="{}" stroke="black"/>"#, bottom + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{z}</text>"#, bottom + 20.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">Z</text>"#, WIDTH / 2.0, HEIGHT - 20.0);

    for (i, name) in columns.iter().take(2).enumerate() {
        let Some(col) = t.column(name) else { continue };
        let Some((lo, hi)) = span(col.iter().flatten().copied()) else { continue };
        let y_of = |v: f64| bottom - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);
        let color = COLORS[i];
        // missing values break the line into separate segments
        let mut path = String::new();
        let mut pen_down = false;
        for (z, v) in zs.iter().zip(col) {
            match v {
                Some(v) => {
                    let _ = write!(path, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, x_of(*z as f64), y_of(*v));
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, path.trim_end());
        let (x, anchor) = if i == 0 { (MARGIN - 5.0, "end") } else { (WIDTH - MARGIN + 5.0, "start") };
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="{anchor}" fill="{color}">{}</text>"#, MARGIN, label(hi));
        let _ = writeln!(s, r#"<text x="{x}" y="{bottom}" text-anchor="{anchor}" fill="{color}">{}</text>"#, label(lo));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name}</text>"#,
            MARGIN + 10.0 + 150.0 * i as f64,
            MARGIN - 15.0
        );
    }
    s.push_str("</svg>\n");
    s
}

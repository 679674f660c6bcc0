//! Deterministic text emitters: CSV numbers and a log-log SVG polyline.

use std::fmt::Write;

/// 17 significant digits, `.` decimal separator; exact round trip for `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

/// Log-log plot of `(c, MN(c))` with an optional marked minimizer.
///
/// Points with non-finite or non-positive coordinates are skipped.
pub fn svg_loglog(curve: &[(f64, f64)], marker: Option<(f64, f64)>, title: &str) -> String {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"  <text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    if pts.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }

    let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
        (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    writeln!(
        out,
        r#"  <rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )
    .unwrap();
    // decade ticks
    for d in (x0.ceil() as i64)..=(x1.floor() as i64) {
        let x = sx(d as f64);
        writeln!(
            out,
            r#"  <text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">1e{d}</text>"#,
            HEIGHT - MARGIN + 16.0
        )
        .unwrap();
    }
    for d in (y0.ceil() as i64)..=(y1.floor() as i64) {
        let y = sy(d as f64);
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{y:.2}" font-family="sans-serif" font-size="11" text-anchor="end">1e{d}</text>"#,
            MARGIN - 6.0
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">c</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0
    )
    .unwrap();

    let mut poly = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i > 0 {
            poly.push(' ');
        }
        write!(poly, "{:.2},{:.2}", sx(x), sy(y)).unwrap();
    }
    writeln!(
        out,
        r#"  <polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{poly}"/>"#
    )
    .unwrap();

    if let Some((mx, my)) = marker.filter(|(x, y)| *x > 0.0 && *y > 0.0) {
        let (px, py) = (sx(mx.log10()), sy(my.log10()));
        writeln!(
            out,
            r#"  <circle cx="{px:.2}" cy="{py:.2}" r="4" fill="crimson"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="crimson">c = {mx:.6}</text>"#,
            px + 6.0,
            py - 6.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 5.0, -2.5e-300, 1.7976931348623157e308] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_num(5.0), "5.0000000000000000e0");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn svg_contains_polyline_and_marker() {
        let curve: Vec<(f64, f64)> = (1..20)
            .map(|i| (i as f64, (i as f64 - 5.0).powi(2) + 1.0))
            .collect();
        let svg = svg_loglog(&curve, Some((5.0, 1.0)), "MN <curve>");
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<circle"));
        assert!(svg.contains("MN &lt;curve&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn svg_skips_nonpositive() {
        let svg = svg_loglog(&[(0.0, 1.0), (1.0, -1.0)], None, "empty");
        assert!(!svg.contains("<polyline"));
    }
}

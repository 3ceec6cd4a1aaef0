//! Minimal SVG 1.1 line plots.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;
const TICKS: usize = 5;

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, color: &'static str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color,
            points,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Use the same scale on both axes (for level sets).
    pub equal_aspect: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn extent(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.5 * (1.0 + lo.abs()) * 1e-3;
        return (lo - pad, hi + pad);
    }
    (lo, hi)
}

impl Plot {
    pub fn render(&self) -> String {
        let pts = || self.series.iter().flat_map(|s| s.points.iter().copied());
        let (mut x0, mut x1) = extent(pts().map(|p| p.0));
        let (mut y0, mut y1) = extent(pts().map(|p| p.1));
        let (pw, ph) = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
        if self.equal_aspect {
            let scale = ((x1 - x0) / pw).max((y1 - y0) / ph);
            let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            x0 = cx - 0.5 * scale * pw;
            x1 = cx + 0.5 * scale * pw;
            y0 = cy - 0.5 * scale * ph;
            y1 = cy + 0.5 * scale * ph;
        }
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph;

        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(&self.title)
        );
        let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
        );
        for i in 0..TICKS {
            let f = i as f64 / (TICKS - 1) as f64;
            let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{bottom}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
                bottom + 5.0,
                bottom + 18.0,
                tick_label(xv)
            );
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{left}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
                left - 5.0,
                left - 8.0,
                py + 4.0,
                tick_label(yv)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 16.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 16 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
        for (i, s) in self.series.iter().enumerate() {
            let coords: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                coords.join(" "),
                s.color
            );
            let ly = top + 14.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
                right - 150.0,
                right - 130.0,
                s.color,
                right - 125.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_polylines() {
        let plot = Plot {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            series: vec![
                Series::new("s", "blue", vec![(0.0, 0.0), (1.0, 2.0)]),
                Series::new("flat", "red", vec![(0.0, 1.0), (1.0, 1.0)]),
            ],
            equal_aspect: false,
        };
        let svg = plot.render();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn degenerate_extent() {
        assert!(extent([3.0, 3.0].into_iter()).1 > 3.0);
        assert_eq!(extent(std::iter::empty()), (0.0, 1.0));
    }
}

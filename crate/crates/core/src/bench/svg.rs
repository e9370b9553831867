//! Minimal step-plot writer for data-profile curves. CSV is the canonical
//! output; this exists so a run leaves something directly viewable.

use std::fmt::Write as _;

use crate::bench::profile::DataProfile;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 48.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn x_px(alpha: f64, alpha_max: f64) -> f64 {
    MARGIN_LEFT + alpha / alpha_max * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_px(fraction: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - fraction * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Renders the curves as stepwise-constant polylines over `[0, alpha_max]`.
pub fn render_profiles(curves: &[DataProfile], alpha_max: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Axes.
    let x0 = x_px(0.0, alpha_max as f64);
    let x1 = x_px(alpha_max as f64, alpha_max as f64);
    let y0 = y_px(0.0);
    let y1 = y_px(1.0);
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let y = y_px(frac);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#,
            x0 - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{frac}</text>"#,
            x0 - 7.0,
            y + 4.0
        );
    }
    let ticks = 5usize;
    for t in 0..=ticks {
        let alpha = alpha_max as f64 * t as f64 / ticks as f64;
        let x = x_px(alpha, alpha_max as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#,
            y0 + 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{}" font-size="11" text-anchor="middle">{alpha}</text>"#,
            y0 + 18.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">simplex gradients</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">fraction of problems solved</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    );

    for (idx, curve) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        let mut last_y = y_px(curve.fraction_at(0.0));
        let _ = write!(path, "M{} {last_y}", x_px(0.0, alpha_max as f64));
        for alpha in 1..=alpha_max {
            let x = x_px(alpha as f64, alpha_max as f64);
            let y = y_px(curve.fraction_at(alpha as f64));
            // Horizontal segment to the new alpha, then the vertical jump.
            let _ = write!(path, " L{x} {last_y}");
            if y != last_y {
                let _ = write!(path, " L{x} {y}");
                last_y = y;
            }
        }
        let _ = writeln!(
            out,
            r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.8"/>"#
        );
        let ly = MARGIN_TOP + 16.0 * idx as f64 + 8.0;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.8"/>"#,
            MARGIN_LEFT + 10.0,
            MARGIN_LEFT + 34.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
            MARGIN_LEFT + 40.0,
            ly + 4.0,
            curve.solver
        );
    }
    out.push_str("</svg>\n");
    out
}

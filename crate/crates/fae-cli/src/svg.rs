//! Static SVG rendering of the benchmark sweep: one log-log panel per
//! amplitude, scatter of (error quantile, median exact query count), the
//! slope-constrained fit line, j0 annotations, and a marker distinguishing
//! runs that never left the first stage. Plain markup, no scripting.

use std::fmt::Write as _;

use crate::bench::{AmplitudeFit, CellStats};

const PANEL_W: f64 = 430.0;
const PANEL_H: f64 = 340.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 18.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 54.0;
const LEGEND_H: f64 = 34.0;

struct Panel {
    amplitude: f64,
    rows: Vec<CellStats>,
    fit: Option<AmplitudeFit>,
}

/// Log-decade range [lo, hi] padded to whole powers of ten.
fn decade_range(values: impl Iterator<Item = f64>) -> (i32, i32) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v > 0.0 {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
    }
    if !lo.is_finite() {
        return (0, 1);
    }
    let (flo, mut fhi) = (lo.floor() as i32, hi.ceil() as i32);
    if flo == fhi {
        fhi += 1;
    }
    (flo, fhi)
}

/// Renders the full figure. Panels follow the order amplitudes first appear
/// in `stats`; `fits` are matched by amplitude.
pub fn render_svg(stats: &[CellStats], fits: &[AmplitudeFit]) -> String {
    let mut panels: Vec<Panel> = Vec::new();
    for s in stats {
        match panels.iter_mut().find(|p| p.amplitude == s.amplitude) {
            Some(p) => p.rows.push(*s),
            None => panels.push(Panel {
                amplitude: s.amplitude,
                rows: vec![*s],
                fit: fits.iter().find(|f| f.amplitude == s.amplitude).copied(),
            }),
        }
    }

    let cols = if panels.len() > 1 { 2 } else { 1 };
    let rows = panels.len().div_ceil(cols.max(1)).max(1);
    let width = cols as f64 * PANEL_W;
    let height = LEGEND_H + rows as f64 * PANEL_H;

    // Shared axes across panels make the panels comparable at a glance.
    let (x_lo, x_hi) = decade_range(stats.iter().map(|s| s.err_q));
    let (y_lo, y_hi) = decade_range(stats.iter().map(|s| s.n_exact_median as f64));

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    legend(&mut out);
    for (i, panel) in panels.iter().enumerate() {
        let ox = (i % cols) as f64 * PANEL_W;
        let oy = LEGEND_H + (i / cols) as f64 * PANEL_H;
        render_panel(&mut out, panel, ox, oy, x_lo, x_hi, y_lo, y_hi, i);
    }
    out.push_str("</svg>\n");
    out
}

fn legend(out: &mut String) {
    let _ = writeln!(
        out,
        "<g class=\"legend\" transform=\"translate(12,22)\">\
         <circle cx=\"0\" cy=\"-4\" r=\"4\" fill=\"#1f77b4\"/>\
         <text x=\"10\" y=\"0\">two-stage run</text>\
         <rect x=\"120\" y=\"-8\" width=\"8\" height=\"8\" fill=\"#d62728\" \
         transform=\"rotate(45 124 -4)\"/>\
         <text x=\"134\" y=\"0\">First Stage Only (j0 = ell)</text>\
         <line x1=\"310\" y1=\"-4\" x2=\"334\" y2=\"-4\" stroke=\"#1f77b4\" \
         stroke-dasharray=\"6 3\"/>\
         <text x=\"340\" y=\"0\">fit log10 N = -log10 err + b</text>\
         </g>"
    );
}

#[allow(clippy::too_many_arguments)]
fn render_panel(
    out: &mut String,
    panel: &Panel,
    ox: f64,
    oy: f64,
    x_lo: i32,
    x_hi: i32,
    y_lo: i32,
    y_hi: i32,
    idx: usize,
) {
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let x_of = |log_e: f64| {
        ox + MARGIN_L + (log_e - x_lo as f64) / (x_hi - x_lo) as f64 * plot_w
    };
    let y_of = |log_n: f64| {
        oy + MARGIN_T + plot_h - (log_n - y_lo as f64) / (y_hi - y_lo) as f64 * plot_h
    };

    let _ = writeln!(out, "<g class=\"panel\">");
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-weight=\"bold\">amplitude = {}</text>",
        ox + MARGIN_L,
        oy + MARGIN_T - 18.0,
        panel.amplitude
    );
    if let Some(f) = &panel.fit {
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#555\">b = {:.3}, free slope = {:.3}</text>",
            ox + MARGIN_L,
            oy + MARGIN_T - 5.0,
            f.fit.intercept_b,
            f.fit.free_slope
        );
    }

    // Frame.
    let _ = writeln!(
        out,
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{plot_w:.1}\" height=\"{plot_h:.1}\" \
         fill=\"none\" stroke=\"#333\"/>",
        ox + MARGIN_L,
        oy + MARGIN_T
    );

    // Decade gridlines and tick labels.
    for d in x_lo..=x_hi {
        let x = x_of(d as f64);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#ddd\"/>\
             <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">1e{d}</text>",
            oy + MARGIN_T,
            oy + MARGIN_T + plot_h,
            oy + MARGIN_T + plot_h + 16.0
        );
    }
    for d in y_lo..=y_hi {
        let y = y_of(d as f64);
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{d}</text>",
            ox + MARGIN_L,
            ox + MARGIN_L + plot_w,
            ox + MARGIN_L - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">estimation error (q95)</text>",
        ox + MARGIN_L + plot_w / 2.0,
        oy + PANEL_H - 14.0
    );
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 {:.1} {:.1})\">median exact queries</text>",
        ox + 16.0,
        oy + MARGIN_T + plot_h / 2.0,
        ox + 16.0,
        oy + MARGIN_T + plot_h / 2.0
    );

    // Fit line, clipped to the frame.
    if let Some(f) = &panel.fit {
        let clip = format!("clip{idx}");
        let _ = writeln!(
            out,
            "<clipPath id=\"{clip}\"><rect x=\"{:.1}\" y=\"{:.1}\" width=\"{plot_w:.1}\" \
             height=\"{plot_h:.1}\"/></clipPath>",
            ox + MARGIN_L,
            oy + MARGIN_T
        );
        let b = f.fit.intercept_b;
        let _ = writeln!(
            out,
            "<line class=\"fit\" x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" \
             stroke=\"#1f77b4\" stroke-dasharray=\"6 3\" clip-path=\"url(#{clip})\"/>",
            x_of(x_lo as f64),
            y_of(b - x_lo as f64),
            x_of(x_hi as f64),
            y_of(b - x_hi as f64)
        );
    }

    // Data points with j0 annotations.
    for row in &panel.rows {
        let x = x_of(row.err_q.log10());
        let y = y_of((row.n_exact_median as f64).log10());
        if row.j0_mode == row.ell {
            let _ = writeln!(
                out,
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"8\" height=\"8\" fill=\"#d62728\" \
                 transform=\"rotate(45 {x:.1} {y:.1})\"><title>First Stage Only</title></rect>",
                x - 4.0,
                y - 4.0
            );
        } else {
            let _ = writeln!(out, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"4\" fill=\"#1f77b4\"/>");
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#777\" font-size=\"9\">j0={}</text>",
            x + 6.0,
            y - 6.0,
            row.j0_mode
        );
    }
    let _ = writeln!(out, "</g>");
}

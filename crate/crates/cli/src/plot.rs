//! Self-contained SVG line and bar charts. No plotting dependency; output
//! is deterministic (fixed float formatting, stable element order).

use std::fmt::Write;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 80.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn svg_open(title: &str) -> String {
    let mut out = String::new();
    write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        esc(title)
    )
    .unwrap();
    out
}

/// Time-series line chart. `points` pairs an x label with an optional value;
/// gaps (None) break the line.
pub fn line_chart(title: &str, points: &[(String, Option<f64>)]) -> String {
    let mut out = svg_open(title);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let max_y = points
        .iter()
        .filter_map(|(_, v)| *v)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let n = points.len().max(2);
    let x_of = |i: usize| MARGIN_LEFT + plot_w * i as f64 / (n - 1) as f64;
    let y_of = |v: f64| MARGIN_TOP + plot_h * (1.0 - v / max_y);

    // axes
    write!(
        out,
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h,
        MARGIN_TOP + plot_h
    )
    .unwrap();
    // y scale labels
    for tick in 0..=4 {
        let v = max_y * tick as f64 / 4.0;
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{:.3}</text>",
            MARGIN_LEFT - 6.0,
            y_of(v) + 4.0,
            v
        )
        .unwrap();
    }

    // polyline segments between consecutive present points
    let mut segment: Vec<String> = Vec::new();
    let flush = |seg: &mut Vec<String>, out: &mut String| {
        if seg.len() >= 2 {
            writeln!(
                out,
                "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>",
                seg.join(" ")
            )
            .unwrap();
        }
        seg.clear();
    };
    for (i, (_, v)) in points.iter().enumerate() {
        match v {
            Some(v) => segment.push(format!("{:.2},{:.2}", x_of(i), y_of(*v))),
            None => flush(&mut segment, &mut out),
        }
    }
    flush(&mut segment, &mut out);

    // sparse x labels
    let step = (n / 8).max(1);
    for (i, (label, _)) in points.iter().enumerate() {
        if i % step != 0 {
            continue;
        }
        writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"end\" transform=\"rotate(-45 {:.1} {:.1})\">{}</text>",
            x_of(i),
            MARGIN_TOP + plot_h + 14.0,
            x_of(i),
            MARGIN_TOP + plot_h + 14.0,
            esc(label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Descending bar chart with one labelled bar per entry.
pub fn bar_chart(title: &str, entries: &[(String, f64)]) -> String {
    let mut out = svg_open(title);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let max_y = entries.iter().map(|(_, v)| *v).fold(0.0f64, f64::max).max(1e-9);
    let n = entries.len().max(1);
    let slot = plot_w / n as f64;
    let bar_w = slot * 0.8;

    writeln!(
        out,
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>",
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    )
    .unwrap();
    for (i, (label, v)) in entries.iter().enumerate() {
        let h = plot_h * v / max_y;
        let x = MARGIN_LEFT + slot * i as f64 + slot * 0.1;
        let y = MARGIN_TOP + plot_h - h;
        write!(
            out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bar_w:.2}\" height=\"{h:.2}\" fill=\"steelblue\"/>\n\
             <text x=\"{:.2}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"end\" transform=\"rotate(-45 {:.2} {:.1})\">{}</text>\n",
            x + bar_w / 2.0,
            MARGIN_TOP + plot_h + 14.0,
            x + bar_w / 2.0,
            MARGIN_TOP + plot_h + 14.0,
            esc(label)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

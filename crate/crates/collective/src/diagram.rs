//! 1-D spacetime diagrams as SVG.
//!
//! Position runs horizontally, absolute time vertically (upwards); one
//! polyline per elementary body, coloured by colour id. Output is
//! deterministic; a generation timestamp comment can be suppressed for
//! byte-comparable files.

use num_bigint::BigInt;

use crate::engine::Trace;
use crate::ratio::Rat;
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders the unwrapped worldlines of a 1-D trace.
pub fn spacetime_svg(trace: &Trace, timestamp: Option<&str>) -> Result<String> {
    if trace.model.env.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "spacetime diagrams are drawn for 1-dimensional environments".into(),
        ));
    }
    let positions: Vec<Vec<f64>> = trace
        .elems
        .iter()
        .enumerate()
        .map(|(idx, _)| {
            (0..=trace.horizon)
                .map(|t| {
                    let counts: Vec<Rat> = trace
                        .tail_counts(idx, t)
                        .iter()
                        .map(|&c| Rat::from_integer(BigInt::from(c)))
                        .collect();
                    trace.model.env.embed_counts(&counts)[0]
                })
                .collect()
        })
        .collect();
    let (mut x_min, mut x_max) = (0.0f64, 1.0f64);
    for row in &positions {
        for &x in row {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
    }
    if x_max - x_min < 1.0 {
        x_max = x_min + 1.0;
    }
    let t_max = trace.horizon.max(1) as f64;
    let sx = (WIDTH - 2.0 * MARGIN) / (x_max - x_min);
    let sy = (HEIGHT - 2.0 * MARGIN) / t_max;
    let map_x = |x: f64| MARGIN + (x - x_min) * sx;
    let map_y = |t: f64| HEIGHT - MARGIN - t * sy;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    if let Some(ts) = timestamp {
        svg.push_str(&format!("<!-- generated {ts} -->\n"));
    }
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        m = MARGIN,
        y0 = HEIGHT - MARGIN,
        x1 = WIDTH - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{y1}\" x2=\"{m}\" y2=\"{y0}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
        m = MARGIN,
        y1 = MARGIN,
        y0 = HEIGHT - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" fill=\"#333\">x</text>\n",
        WIDTH - MARGIN + 10.0,
        HEIGHT - MARGIN + 5.0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" fill=\"#333\">t</text>\n",
        MARGIN - 20.0,
        MARGIN - 10.0
    ));
    // Tick labels at the extremes.
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#666\">{}</text>\n",
        MARGIN,
        HEIGHT - MARGIN + 20.0,
        fmt_tick(x_min)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#666\" text-anchor=\"end\">{}</text>\n",
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 20.0,
        fmt_tick(x_max)
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#666\">t={}</text>\n",
        MARGIN - 40.0,
        MARGIN + 5.0,
        trace.horizon
    ));
    // Worldlines.
    for (idx, e) in trace.elems.iter().enumerate() {
        let colour = PALETTE[e.colour % PALETTE.len()];
        let points: Vec<String> = positions[idx]
            .iter()
            .enumerate()
            .map(|(t, &x)| format!("{:.3},{:.3}", map_x(x), map_y(t as f64)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"><title>elem {} ({})</title></polyline>\n",
            points.join(" "),
            e.elem,
            trace.model.colours[e.colour].name
        ));
    }
    // Legend: one swatch per colour present.
    let mut seen: Vec<usize> = trace.elems.iter().map(|e| e.colour).collect();
    seen.sort_unstable();
    seen.dedup();
    for (i, c) in seen.iter().enumerate() {
        let y = MARGIN + 20.0 * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
            WIDTH - MARGIN - 90.0,
            y,
            PALETTE[c % PALETTE.len()]
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#333\">{}</text>\n",
            WIDTH - MARGIN - 72.0,
            y + 10.0,
            trace.model.colours[*c].name
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn fmt_tick(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.2}")
    }
}

use std::fmt::Write;

use crate::analysis::{ScenarioResult, TornadoBar};
use crate::report::format::round4;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
/// Bar color for the raised parameter value.
pub const INCREASE_COLOR: &str = "#1a9850";
/// Bar color for the lowered parameter value.
pub const DECREASE_COLOR: &str = "#d73027";

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn open(width: f64, height: f64, timestamp: Option<&str>) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    if let Some(ts) = timestamp {
        let _ = writeln!(s, "<!-- generated {} -->", escape(ts).replace("--", "- -"));
    }
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    );
    s
}

fn text(s: &mut String, x: f64, y: f64, anchor: &str, body: &str) {
    let _ = writeln!(
        s,
        "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\">{}</text>",
        escape(body)
    );
}

fn rect(s: &mut String, x: f64, y: f64, w: f64, h: f64, fill: &str, title: Option<&str>) {
    let _ = write!(
        s,
        "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\""
    );
    match title {
        Some(t) => {
            let _ = writeln!(s, "><title>{}</title></rect>", escape(t));
        }
        None => s.push_str("/>\n"),
    }
}

/// Grouped bars of target `t`: one group per target level, one bar per
/// scenario, probability on the vertical axis.
pub fn scenario_svg(results: &[ScenarioResult], t: usize, timestamp: Option<&str>) -> String {
    let levels = results
        .first()
        .map(|r| r.posteriors[t].levels.clone())
        .unwrap_or_default();
    let target = results
        .first()
        .map(|r| r.posteriors[t].target.clone())
        .unwrap_or_default();
    let n_sc = results.len().max(1) as f64;
    let (left, top, plot_h, legend_w): (f64, f64, f64, f64) = (60.0, 40.0, 300.0, 220.0);
    let group_w = (n_sc * 14.0 + 30.0).max(90.0);
    let plot_w = group_w * levels.len().max(1) as f64;
    let width = left + plot_w + 20.0 + legend_w;
    let height = top + plot_h + 60.0;
    let mut s = open(width, height.max(top + 20.0 * n_sc + 40.0), timestamp);
    text(&mut s, left, 22.0, "start", &format!("P({target}) by scenario"));

    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let y = top + plot_h * (1.0 - v);
        let _ = writeln!(
            s,
            "<line x1=\"{left}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>",
            left + plot_w
        );
        text(&mut s, left - 6.0, y + 4.0, "end", &format!("{v:.1}"));
    }
    let _ = writeln!(
        s,
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{:.2}\" stroke=\"#000000\"/>",
        top + plot_h
    );

    let bar_w = (group_w - 30.0) / n_sc;
    for (g, level) in levels.iter().enumerate() {
        let gx = left + g as f64 * group_w + 15.0;
        for (i, r) in results.iter().enumerate() {
            let p = r.posteriors[t].distribution[g];
            let h = plot_h * p;
            rect(
                &mut s,
                gx + i as f64 * bar_w,
                top + plot_h - h,
                bar_w,
                h,
                PALETTE[i % PALETTE.len()],
                Some(&format!("{}: {level} = {}", r.scenario, round4(p))),
            );
        }
        text(
            &mut s,
            gx + (group_w - 30.0) / 2.0,
            top + plot_h + 18.0,
            "middle",
            level,
        );
    }

    let lx = left + plot_w + 20.0;
    for (i, r) in results.iter().enumerate() {
        let y = top + 20.0 * i as f64;
        rect(&mut s, lx, y, 12.0, 12.0, PALETTE[i % PALETTE.len()], None);
        text(&mut s, lx + 18.0, y + 10.0, "start", &r.scenario);
    }
    s.push_str("</svg>\n");
    s
}

/// Horizontal tornado of the first `max_bars` bars: each row shows the
/// shift from lowering (left color) and raising (right color) the
/// parameter around a zero axis.
pub fn tornado_svg(bars: &[TornadoBar], event: &str, max_bars: usize, timestamp: Option<&str>) -> String {
    let shown = &bars[..bars.len().min(max_bars)];
    let (label_w, plot_w, row_h, top) = (320.0, 420.0, 22.0, 60.0);
    let width = label_w + plot_w + 40.0;
    let height = top + row_h * shown.len() as f64 + 50.0;
    let mut s = open(width, height, timestamp);
    text(&mut s, 10.0, 22.0, "start", &format!("Sensitivity of P({event})"));

    let scale = shown.iter().map(TornadoBar::max_shift).fold(0.0, f64::max);
    let half = plot_w / 2.0;
    let x0 = label_w + half;
    let px = |v: f64| if scale > 0.0 { v / scale * half } else { 0.0 };

    rect(&mut s, label_w, 34.0, 12.0, 12.0, DECREASE_COLOR, None);
    text(&mut s, label_w + 18.0, 44.0, "start", "parameter decreased");
    rect(&mut s, label_w + 180.0, 34.0, 12.0, 12.0, INCREASE_COLOR, None);
    text(&mut s, label_w + 198.0, 44.0, "start", "parameter increased");

    for (i, b) in shown.iter().enumerate() {
        let y = top + row_h * i as f64;
        text(&mut s, label_w - 8.0, y + row_h * 0.65, "end", &b.label);
        for (shift, color, what) in [
            (b.shift_down, DECREASE_COLOR, "decrease"),
            (b.shift_up, INCREASE_COLOR, "increase"),
        ] {
            let w = px(shift);
            let x = if w < 0.0 { x0 + w } else { x0 };
            rect(
                &mut s,
                x,
                y + 3.0,
                w.abs(),
                row_h - 6.0,
                color,
                Some(&format!("{what}: {}", round4(shift))),
            );
        }
    }
    let bottom = top + row_h * shown.len() as f64;
    let _ = writeln!(
        s,
        "<line x1=\"{x0:.2}\" y1=\"{top}\" x2=\"{x0:.2}\" y2=\"{bottom:.2}\" stroke=\"#000000\"/>"
    );
    text(
        &mut s,
        x0 - half,
        bottom + 18.0,
        "start",
        &format!("-{}", round4(scale)),
    );
    text(&mut s, x0, bottom + 18.0, "middle", "0");
    text(&mut s, x0 + half, bottom + 18.0, "end", &format!("+{}", round4(scale)));
    s.push_str("</svg>\n");
    s
}

//! Hand-assembled SVG figures: the stacked-area threshold sweep and the
//! correlation scatter plot. No plotting library, no external resources;
//! identical inputs produce identical bytes.

use rewrite_probe_core::breakdown::SweepSeries;
use rewrite_probe_core::correlation::CorrelationReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 16.0;
const MARGIN_BOTTOM: f64 = 48.0;

pub fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Frame {
    plot_w: f64,
    plot_h: f64,
}

impl Frame {
    fn new(width: f64) -> Self {
        Frame {
            plot_w: width - MARGIN_LEFT - MARGIN_RIGHT,
            plot_h: HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
        }
    }

    fn x(&self, unit: f64) -> f64 {
        MARGIN_LEFT + unit * self.plot_w
    }

    fn y(&self, unit: f64) -> f64 {
        MARGIN_TOP + (1.0 - unit) * self.plot_h
    }

    /// Axis lines, 0.2-spaced ticks with labels on both [0,1] axes, and the
    /// axis titles.
    fn axes(&self, x_label: &str, y_label: &str) -> String {
        let mut out = String::new();
        let x0 = self.x(0.0);
        let x1 = self.x(1.0);
        let y0 = self.y(0.0);
        let y1 = self.y(1.0);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n",
            fmt(x0),
            fmt(y0),
            fmt(x1),
            fmt(y0)
        ));
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n",
            fmt(x0),
            fmt(y0),
            fmt(x0),
            fmt(y1)
        ));
        for i in 0..=5 {
            let unit = i as f64 / 5.0;
            let label = format!("{unit:.1}");
            let tx = self.x(unit);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n",
                fmt(tx),
                fmt(y0),
                fmt(tx),
                fmt(y0 + 4.0)
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>\n",
                fmt(tx), fmt(y0 + 16.0)
            ));
            let ty = self.y(unit);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#333333\"/>\n",
                fmt(x0 - 4.0),
                fmt(ty),
                fmt(x0),
                fmt(ty)
            ));
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{label}</text>\n",
                fmt(x0 - 7.0), fmt(ty + 4.0)
            ));
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            fmt((x0 + x1) / 2.0), fmt(HEIGHT - 10.0), xml_escape(x_label)
        ));
        out.push_str(&format!(
            "<text x=\"14\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
            fmt((y0 + y1) / 2.0), fmt((y0 + y1) / 2.0), xml_escape(y_label)
        ));
        out
    }
}

fn svg_open(width: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{HEIGHT}\" viewBox=\"0 0 {width} {HEIGHT}\">\n"
    )
}

/// Stacked-area chart of the four sweep regions, stacked bottom-to-top as
/// correct-without-rewriting, correct-with-rewriting, rewriting errors,
/// answering errors.
pub fn stacked_area_svg(series: &SweepSeries, metric_label: &str) -> String {
    let frame = Frame::new(WIDTH);
    // cumulative region boundaries per row, bottom-to-top
    let layers: Vec<[f64; 5]> = series
        .rows
        .iter()
        .map(|row| {
            let c0 = row.correct_without_rewriting;
            let c1 = c0 + row.correct_with_rewriting;
            let c2 = c1 + row.qr_error;
            [0.0, c0, c1, c2, 1.0]
        })
        .collect();
    let regions = [
        (
            "region-correct-without-rewriting",
            "#f2a9c4",
            "correct without rewriting",
        ),
        (
            "region-correct-with-rewriting",
            "#a8d8a0",
            "correct with rewriting",
        ),
        ("region-qr-error", "#e8923a", "rewriting error"),
        ("region-qa-error", "#4878a8", "answering error"),
    ];

    let mut svg = svg_open(WIDTH);
    svg.push_str(&format!(
        "<title>{}</title>\n",
        xml_escape(&format!("outcome regions by {metric_label} threshold"))
    ));
    for (layer, (id, color, label)) in regions.iter().enumerate() {
        let mut points = Vec::new();
        for (row, bounds) in series.rows.iter().zip(&layers) {
            points.push(format!(
                "{},{}",
                fmt(frame.x(row.threshold)),
                fmt(frame.y(bounds[layer + 1]))
            ));
        }
        for (row, bounds) in series.rows.iter().zip(&layers).rev() {
            points.push(format!(
                "{},{}",
                fmt(frame.x(row.threshold)),
                fmt(frame.y(bounds[layer]))
            ));
        }
        svg.push_str(&format!(
            "<polygon id=\"{id}\" fill=\"{color}\" stroke=\"none\" points=\"{}\"><title>{}</title></polygon>\n",
            points.join(" "),
            xml_escape(label)
        ));
    }
    svg.push_str(&frame.axes(
        &format!("{metric_label} threshold"),
        "proportion of questions",
    ));
    // legend, top-to-bottom in stacking order
    let legend_x = WIDTH - MARGIN_RIGHT + 12.0;
    for (i, (_, color, label)) in regions.iter().rev().enumerate() {
        let ly = MARGIN_TOP + 8.0 + i as f64 * 20.0;
        svg.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\n",
            fmt(legend_x),
            fmt(ly)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            fmt(legend_x + 18.0),
            fmt(ly + 10.0),
            xml_escape(label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Scatter plot of (QR similarity, QA quality) pairs on fixed [0,1]^2 axes.
pub fn scatter_svg(report: &CorrelationReport) -> String {
    let width = 480.0 + MARGIN_RIGHT - 96.0; // square plot area, slim legend gutter
    let frame = Frame::new(width);
    let mut svg = svg_open(width);
    svg.push_str(&format!(
        "<title>{}</title>\n",
        xml_escape(&format!("{} vs {}", report.qr_metric, report.qa_metric))
    ));
    svg.push_str(&frame.axes(&report.qr_metric, &report.qa_metric));
    for point in &report.series {
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3.50\" fill=\"#4878a8\" fill-opacity=\"0.65\"><title>{}</title></circle>\n",
            fmt(frame.x(point.qr_value)),
            fmt(frame.y(point.qa_value)),
            xml_escape(&point.qid)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">n = {}, r = {}</text>\n",
        fmt(frame.x(1.0)),
        fmt(MARGIN_TOP + 12.0),
        report.n,
        format_args!("{:.4}", report.pearson_r)
    ));
    svg.push_str("</svg>\n");
    svg
}

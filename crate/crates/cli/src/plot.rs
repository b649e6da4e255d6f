//! Plot output: plain two-column data files plus small self-contained SVG
//! figures. No plotting library; the figures are simple scatter/line charts
//! meant for quick inspection, the .dat files are the real interface.

use std::path::Path;

use chevron::{Error, Result};

/// Writes `# comment` lines then one "x y" pair per line, full precision.
pub fn write_xy_dat(path: &Path, comments: &[String], points: &[(f64, f64)]) -> Result<()> {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    for &(x, y) in points {
        out.push_str(&format!("{x} {y}\n"));
    }
    std::fs::write(path, out).map_err(Error::Io)
}

struct Bounds {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

fn bounds(series: &[&[(f64, f64)]]) -> Bounds {
    let mut b = Bounds {
        xmin: f64::INFINITY,
        xmax: f64::NEG_INFINITY,
        ymin: f64::INFINITY,
        ymax: f64::NEG_INFINITY,
    };
    for s in series {
        for &(x, y) in *s {
            b.xmin = b.xmin.min(x);
            b.xmax = b.xmax.max(x);
            b.ymin = b.ymin.min(y);
            b.ymax = b.ymax.max(y);
        }
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let span = *hi - *lo;
        let p = if span > 0.0 { 0.05 * span } else { 0.5 * lo.abs().max(1.0) };
        *lo -= p;
        *hi += p;
    };
    pad(&mut b.xmin, &mut b.xmax);
    pad(&mut b.ymin, &mut b.ymax);
    b
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

/// Scatter points plus an optional polyline, framed with ticks and labels.
pub fn write_svg_scatter(
    path: &Path,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    scatter: &[(f64, f64)],
    line: &[(f64, f64)],
) -> Result<()> {
    let b = bounds(&[scatter, line]);
    let px = |x: f64| ML + (x - b.xmin) / (b.xmax - b.xmin) * (W - ML - MR);
    let py = |y: f64| H - MB - (y - b.ymin) / (b.ymax - b.ymin) * (H - MT - MB);
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    s.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    s.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">{}</text>\n",
        W / 2.0,
        title
    ));
    s.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    for i in 0..=4 {
        let fx = b.xmin + (b.xmax - b.xmin) * i as f64 / 4.0;
        let fy = b.ymin + (b.ymax - b.ymin) * i as f64 / 4.0;
        let (tx, ty) = (px(fx), py(fy));
        s.push_str(&format!(
            "<line x1=\"{tx}\" y1=\"{}\" x2=\"{tx}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            H - MB + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{tx}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{fx:.3}</text>\n",
            H - MB + 18.0
        ));
        s.push_str(&format!(
            "<line x1=\"{}\" y1=\"{ty}\" x2=\"{ML}\" y2=\"{ty}\" stroke=\"black\"/>\n",
            ML - 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{fy:.3}</text>\n",
            ML - 8.0,
            ty + 4.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        (ML + W - MR) / 2.0,
        H - 12.0,
        xlabel
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        ylabel
    ));
    if line.len() >= 2 {
        let pts: Vec<String> = line.iter().map(|&(x, y)| format!("{},{}", px(x), py(y))).collect();
        s.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#c22\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        ));
    }
    for &(x, y) in scatter {
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"none\" stroke=\"#136\" stroke-width=\"1.5\"/>\n",
            px(x),
            py(y)
        ));
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(Error::Io)
}

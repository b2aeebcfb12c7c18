use std::fmt::Write;

use num_complex::Complex64;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// Radius compressed to `ln(1 + |w|)`, direction kept. `|h(t)|` grows like
/// `|t|^n`, so a linear plot would show only the tails; the compressed curve
/// crosses the axes and winds around the origin exactly where `h` does.
fn compress(w: Complex64) -> Complex64 {
    let r = w.norm();
    if r == 0.0 {
        w
    } else {
        w * (r.ln_1p() / r)
    }
}

/// A single polyline of the curve with cross-hairs through the origin.
pub fn render(values: &[Complex64]) -> String {
    let pts: Vec<Complex64> = values.iter().map(|&w| compress(w)).collect();
    let reach = pts.iter().map(|w| w.re.abs().max(w.im.abs())).fold(1e-12, f64::max);
    let half = SIZE / 2.0;
    let scale = (half - MARGIN) / reach;
    let mut path = String::new();
    for (i, w) in pts.iter().enumerate() {
        if i > 0 {
            path.push(' ');
        }
        // y grows downwards in SVG
        let _ = write!(path, "{:.3},{:.3}", half + scale * w.re, half - scale * w.im);
    }
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
            "<line x1=\"0\" y1=\"{h}\" x2=\"{s}\" y2=\"{h}\" stroke=\"gray\"/>\n",
            "<line x1=\"{h}\" y1=\"0\" x2=\"{h}\" y2=\"{s}\" stroke=\"gray\"/>\n",
            "<polyline fill=\"none\" stroke=\"black\" points=\"{p}\"/>\n",
            "</svg>\n"
        ),
        s = SIZE,
        h = half,
        p = path
    )
}

//! Minimal self-contained SVG output: a scatter for complex spectra and a
//! line plot for the Benedetto-Li profile. Presentation only; never gates
//! exit codes.

fn header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn axis_bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = (hi - lo) * 0.08;
    (lo - pad, hi + pad)
}

/// Scatter of points in the complex plane, one crosshair pair of axes.
pub fn scatter(points: &[(f64, f64)], title: &str) -> String {
    let (w, h) = (480.0, 480.0);
    let (x0, x1) = axis_bounds(points.iter().map(|p| p.0));
    let (y0, y1) = axis_bounds(points.iter().map(|p| p.1));
    let sx = |x: f64| 40.0 + (x - x0) / (x1 - x0) * (w - 80.0);
    let sy = |y: f64| h - 40.0 - (y - y0) / (y1 - y0) * (h - 80.0);
    let mut out = header(w, h);
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
        w / 2.0,
        title
    ));
    // axes through zero when visible
    if x0 < 0.0 && x1 > 0.0 {
        out.push_str(&format!(
            "<line x1=\"{0}\" y1=\"40\" x2=\"{0}\" y2=\"{1}\" stroke=\"#ccc\"/>\n",
            sx(0.0),
            h - 40.0
        ));
    }
    if y0 < 0.0 && y1 > 0.0 {
        out.push_str(&format!(
            "<line x1=\"40\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#ccc\"/>\n",
            sy(0.0),
            w - 40.0
        ));
    }
    out.push_str(&format!(
        "<rect x=\"40\" y=\"40\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        w - 80.0,
        h - 80.0
    ));
    for &(x, y) in points {
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.75\"/>\n",
            sx(x),
            sy(y)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">re</text>\n",
        w / 2.0,
        h - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" transform=\"rotate(-90 14 {})\">im</text>\n",
        h / 2.0,
        h / 2.0
    ));
    out.push_str("</svg>\n");
    out
}

/// Line plot of a nonnegative profile over the unit interval.
pub fn profile(values: &[f64], title: &str) -> String {
    let (w, h) = (560.0, 360.0);
    let (y0, y1) = axis_bounds(values.iter().cloned().chain(std::iter::once(0.0)));
    let n = values.len().max(1);
    let sx = |j: usize| 50.0 + j as f64 / n as f64 * (w - 90.0);
    let sy = |y: f64| h - 40.0 - (y - y0) / (y1 - y0) * (h - 80.0);
    let mut out = header(w, h);
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
        w / 2.0,
        title
    ));
    out.push_str(&format!(
        "<rect x=\"50\" y=\"40\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        w - 90.0,
        h - 80.0
    ));
    if !values.is_empty() {
        let mut d = String::from("M");
        for (j, &v) in values.iter().enumerate() {
            d.push_str(&format!(" {:.3} {:.3}", sx(j), sy(v)));
        }
        out.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n"
        ));
    }
    for (label, y) in [(format!("{y0:.3}"), y0), (format!("{y1:.3}"), y1)] {
        out.push_str(&format!(
            "<text x=\"46\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{}</text>\n",
            sy(y) + 3.0,
            label
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">xi</text>\n",
        w / 2.0,
        h - 12.0
    ));
    out.push_str("</svg>\n");
    out
}

//! Deterministic SVG emission for the feasible region.
//!
//! The emitter writes elements in a fixed order with a fixed coordinate
//! transform and formats every number with 9 significant digits, so the
//! bytes depend only on the input source.

use eo_region::distribution::PredictorVec;
use eo_region::metrics::{self, MetricPoint, Tie};
use eo_region::region::{contains, RegionPolygon};
use eo_region::DataSource;

use crate::io::CliError;

/// Figure geometry and axis ranges. Error spans `[0,1]` horizontally and
/// opportunity-difference spans `[-1,1]` vertically; markers are only
/// drawn at points the region contains within 1e-6.
pub struct PlotSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub margin: f64,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            width_px: 640,
            height_px: 480,
            margin: 54.0,
        }
    }
}

pub const MARKER_TOL: f64 = 1e-6;

impl PlotSpec {
    fn plot_w(&self) -> f64 {
        self.width_px as f64 - 2.0 * self.margin
    }

    fn plot_h(&self) -> f64 {
        self.height_px as f64 - 2.0 * self.margin
    }

    /// error ∈ [0,1] → pixel x.
    fn px(&self, error: f64) -> f64 {
        self.margin + error * self.plot_w()
    }

    /// opp_diff ∈ [−1,1] → pixel y (positive differences point up).
    fn py(&self, opp_diff: f64) -> f64 {
        self.margin + (1.0 - opp_diff) / 2.0 * self.plot_h()
    }
}

/// Format with 9 significant digits in the shortest of fixed/scientific
/// notation (the printf `%.9g` convention).
pub fn g9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.8e}", x.abs());
    let (mant, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 9);
    let body = if (-4..9).contains(&exp) {
        if exp >= 0 {
            let point = (exp + 1) as usize;
            let frac = digits[point..].trim_end_matches('0');
            if frac.is_empty() {
                digits[..point].to_string()
            } else {
                format!("{}.{frac}", &digits[..point])
            }
        } else {
            let frac = format!("{}{digits}", "0".repeat((-exp - 1) as usize));
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let rest = digits[1..].trim_end_matches('0');
        let m = if rest.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{rest}", &digits[..1])
        };
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

fn marker(out: &mut String, shape: &str, x: f64, y: f64, color: &str, label: &str) {
    match shape {
        "square" => out.push_str(&format!(
            "  <rect x=\"{}\" y=\"{}\" width=\"9\" height=\"9\" fill=\"{color}\"><title>{label}</title></rect>\n",
            g9(x - 4.5),
            g9(y - 4.5),
        )),
        "circle" => out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{color}\"><title>{label}</title></circle>\n",
            g9(x),
            g9(y),
        )),
        _ => out.push_str(&format!(
            "  <polygon points=\"{},{} {},{} {},{} {},{}\" fill=\"{color}\"><title>{label}</title></polygon>\n",
            g9(x),
            g9(y - 6.0),
            g9(x + 6.0),
            g9(y),
            g9(x),
            g9(y + 6.0),
            g9(x - 6.0),
            g9(y),
        )),
    }
}

/// Render the region figure: frame, ticks, the EO line `d = 0`, the
/// polygon (or its degenerate segment/point), and the reference markers.
pub fn render_svg(
    spec: &PlotSpec,
    source: &DataSource,
    region: &RegionPolygon,
) -> Result<String, CliError> {
    let m = spec.margin;
    let (w, h) = (spec.width_px as f64, spec.height_px as f64);
    let (pw, ph) = (spec.plot_w(), spec.plot_h());

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        spec.width_px, spec.height_px, spec.width_px, spec.height_px
    ));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        g9(w),
        g9(h)
    ));

    // Frame and ticks.
    out.push_str("  <g stroke=\"#888888\" stroke-width=\"1\" fill=\"none\">\n");
    out.push_str(&format!(
        "    <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>\n",
        g9(m),
        g9(m),
        g9(pw),
        g9(ph)
    ));
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let x = spec.px(t);
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            g9(x),
            g9(m + ph),
            g9(x),
            g9(m + ph + 5.0)
        ));
    }
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = spec.py(t);
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            g9(m - 5.0),
            g9(y),
            g9(m),
            g9(y)
        ));
    }
    out.push_str("  </g>\n");

    // Tick labels and axis titles.
    out.push_str("  <g font-family=\"Helvetica,Arial,sans-serif\" font-size=\"12\" fill=\"#333333\">\n");
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            g9(spec.px(t)),
            g9(m + ph + 18.0),
            g9(t)
        ));
    }
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        out.push_str(&format!(
            "    <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            g9(m - 8.0),
            g9(spec.py(t) + 4.0),
            g9(t)
        ));
    }
    out.push_str(&format!(
        "    <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">error</text>\n",
        g9(m + pw / 2.0),
        g9(h - 12.0)
    ));
    out.push_str(&format!(
        "    <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">opportunity difference</text>\n",
        g9(14.0),
        g9(m + ph / 2.0),
        g9(14.0),
        g9(m + ph / 2.0)
    ));
    out.push_str("  </g>\n");

    // The EO line d = 0.
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n",
        g9(m),
        g9(spec.py(0.0)),
        g9(m + pw),
        g9(spec.py(0.0))
    ));

    // Region polygon, or its degenerate form.
    let pts: Vec<String> = region
        .vertices()
        .iter()
        .map(|v| format!("{},{}", g9(spec.px(v.error)), g9(spec.py(v.opp_diff))))
        .collect();
    match pts.len() {
        0 => {}
        1 => out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#3182bd\"/>\n",
            g9(spec.px(region.vertices()[0].error)),
            g9(spec.py(region.vertices()[0].opp_diff))
        )),
        2 => out.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#3182bd\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        )),
        _ => out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.55\" stroke=\"#3182bd\" stroke-width=\"1.5\"/>\n",
            pts.join(" ")
        )),
    }
    if region.is_degenerate() {
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"Helvetica,Arial,sans-serif\" font-size=\"12\" fill=\"#a63603\">degenerate region</text>\n",
            g9(m + 6.0),
            g9(m + 16.0)
        ));
    }

    // Reference markers, gated on actual membership.
    let zero = metrics::metric_point(source, &PredictorVec::zeros(source))?;
    let ones = metrics::metric_point(source, &PredictorVec::ones(source))?;
    let bayes = metrics::metric_point(source, &metrics::bayes(source, Tie::Strict))?;
    let (opt_f, _) = eo_region::fairopt::min_error_eo(source, 0.0)?;
    let opt = metrics::metric_point(source, &opt_f)?;
    let markers: [(&str, MetricPoint, &str, &str); 4] = [
        ("square", zero, "#636363", "constant 0"),
        ("square", ones, "#636363", "constant 1"),
        ("circle", bayes, "#e6550d", "Bayes"),
        ("diamond", opt, "#31a354", "optimal EO"),
    ];
    for (shape, pt, color, label) in markers {
        if contains(region, pt, MARKER_TOL) {
            marker(&mut out, shape, spec.px(pt.error), spec.py(pt.opp_diff), color, label);
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_matches_printf_conventions() {
        assert_eq!(g9(0.0), "0");
        assert_eq!(g9(-0.0), "0");
        assert_eq!(g9(1.0), "1");
        assert_eq!(g9(-0.5), "-0.5");
        assert_eq!(g9(0.3125), "0.3125");
        assert_eq!(g9(0.65), "0.65");
        assert_eq!(g9(218.75), "218.75");
        assert_eq!(g9(123456789.0), "123456789");
        assert_eq!(g9(1234567891.0), "1.23456789e+09");
        assert_eq!(g9(1e-10), "1e-10");
        assert_eq!(g9(0.0001), "0.0001");
        assert_eq!(g9(0.00001), "1e-05");
        assert_eq!(g9(0.123456789123), "0.123456789");
        assert_eq!(g9(-1.0 / 3.0), "-0.333333333");
        assert_eq!(g9(2.0 / 3.0), "0.666666667");
    }

    #[test]
    fn g9_is_stable_at_rounding_boundaries() {
        assert_eq!(g9(0.001), "0.001");
        assert_eq!(g9(100.0), "100");
        assert_eq!(g9(9.999999999e8), "1e+09");
        assert_eq!(g9(0.999999999999), "1");
    }

    #[test]
    fn transform_maps_the_unit_ranges_to_the_frame() {
        let spec = PlotSpec::default();
        assert_eq!(spec.px(0.0), 54.0);
        assert_eq!(spec.px(1.0), 586.0);
        assert_eq!(spec.py(1.0), 54.0);
        assert_eq!(spec.py(-1.0), 426.0);
        assert_eq!(spec.py(0.0), 240.0);
    }
}

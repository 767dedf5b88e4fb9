//! SVG rendering of one layer of a grid.
//!
//! `beta` runs horizontally and `alpha` vertically (upwards). True cells are
//! drawn as unit squares inside a group scaled to the plot area; boundary
//! curves are polylines in data coordinates `(beta, alpha)` mapped by a
//! group transform, so the `points` attribute carries the exact curve values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Layer, RegionGrid};
use crate::error::Result;
use crate::regions::BETA_CP_BRANCH;

/// Layers of the default figures, in order.
pub const FIGURE_LAYERS: [Layer; 4] = [
    Layer::Positive,
    Layer::Cp,
    Layer::PosNotCp,
    Layer::DecompSuff,
];

const PLOT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 4;

fn fill(layer: Layer) -> &'static str {
    match layer {
        Layer::Positive => "#9ecae1",
        Layer::TwoPositive => "#a1d99b",
        Layer::Cp => "#fdae6b",
        Layer::Ccp => "#fdd0a2",
        Layer::PosNotCp => "#bcbddc",
        Layer::TwoPosNotCp => "#fa9fb5",
        Layer::DecompSuff => "#c7e9c0",
        Layer::DecompAnd2Pos => "#fc9272",
    }
}

/// `beta` values at which boundaries are sampled: the `res + 1` cell edges
/// plus the kinks and anchor points that fall inside the range.
fn sample_betas(grid: &RegionGrid) -> Vec<f64> {
    let c = &grid.config;
    let mut betas: Vec<f64> = (0..=c.resolution)
        .map(|k| c.beta_min + k as f64 * c.beta_step())
        .collect();
    // the last edge exactly
    betas[c.resolution] = c.beta_max;
    for anchor in [-1.0, BETA_CP_BRANCH, 0.0] {
        if (c.beta_min..=c.beta_max).contains(&anchor) {
            betas.push(anchor);
        }
    }
    betas.sort_by(f64::total_cmp);
    betas.dedup();
    betas
}

pub fn render_svg(grid: &RegionGrid, layer: Layer) -> String {
    let c = &grid.config;
    let res = c.resolution;
    let size = PLOT + 2.0 * MARGIN;
    let mut s = String::new();
    let mut w = |args: std::fmt::Arguments| s.write_fmt(args).expect("write to String");

    w(format_args!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\" data-layer=\"{layer}\">\n"
    ));
    w(format_args!("<title>{layer}</title>\n"));
    w(format_args!(
        "<defs><clipPath id=\"plot-area\"><rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{PLOT}\" height=\"{PLOT}\"/></clipPath></defs>\n"
    ));
    w(format_args!(
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{PLOT}\" height=\"{PLOT}\" fill=\"white\" stroke=\"black\"/>\n"
    ));

    let cell = PLOT / res as f64;
    w(format_args!(
        "<g class=\"cells\" fill=\"{}\" shape-rendering=\"crispEdges\" transform=\"translate({MARGIN} {MARGIN}) scale({cell})\">\n",
        fill(layer)
    ));
    for ia in 0..res {
        for ib in 0..res {
            if layer.get(grid.cell(ia, ib)) {
                w(format_args!(
                    "<rect x=\"{ib}\" y=\"{}\" width=\"1\" height=\"1\"/>\n",
                    res - 1 - ia
                ));
            }
        }
    }
    w(format_args!("</g>\n"));

    let sx = PLOT / (c.beta_max - c.beta_min);
    let sy = PLOT / (c.alpha_max - c.alpha_min);
    let tx = MARGIN - c.beta_min * sx;
    let ty = MARGIN + c.alpha_max * sy;
    w(format_args!("<g clip-path=\"url(#plot-area)\">\n"));
    // stroke width is in data units, about 1.5 px
    w(format_args!(
        "<g class=\"boundaries\" transform=\"matrix({sx} 0 0 {} {tx} {ty})\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\">\n",
        -sy,
        1.5 / sx.min(sy)
    ));
    let betas = sample_betas(grid);
    for boundary in layer.boundaries() {
        let mut points = String::new();
        for (k, &beta) in betas.iter().enumerate() {
            if k > 0 {
                points.push(' ');
            }
            write!(points, "{beta},{}", boundary.alpha_at(beta, c.n)).expect("write to String");
        }
        w(format_args!(
            "<polyline data-boundary=\"{}\" points=\"{points}\"/>\n",
            boundary.name()
        ));
    }
    w(format_args!("</g>\n</g>\n"));

    w(format_args!(
        "<g class=\"axes\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    for t in 0..=TICKS {
        let f = t as f64 / TICKS as f64;
        let beta = c.beta_min + f * (c.beta_max - c.beta_min);
        let x = MARGIN + f * PLOT;
        w(format_args!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN + PLOT + 18.0,
            super::format_coordinate(beta)
        ));
        let alpha = c.alpha_min + f * (c.alpha_max - c.alpha_min);
        let y = MARGIN + PLOT - f * PLOT;
        w(format_args!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            MARGIN - 6.0,
            y + 4.0,
            super::format_coordinate(alpha)
        ));
    }
    w(format_args!(
        "<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"16\">β</text>\n",
        MARGIN + PLOT / 2.0,
        MARGIN + PLOT + 42.0
    ));
    w(format_args!(
        "<text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"16\">α</text>\n",
        MARGIN - 40.0,
        MARGIN + PLOT / 2.0
    ));
    w(format_args!("</g>\n</svg>\n"));
    s
}

pub fn emit_plot(grid: &RegionGrid, path: &Path, layer: Layer) -> Result<()> {
    fs::write(path, render_svg(grid, layer))?;
    Ok(())
}

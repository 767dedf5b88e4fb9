//! Raster scans of the `(alpha, beta)` plane.
//!
//! Cell `(ia, ib)` of a `res x res` grid covers
//! `[amin + ia*ha, amin + (ia+1)*ha) x [bmin + ib*hb, bmin + (ib+1)*hb)` and is
//! classified at its center. Cells are stored row-major with `alpha` as the
//! row index, so cell `ia * res + ib`.

mod csv;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub use self::csv::{
    emit_csv, format_coordinate, parse_csv, read_csv, write_csv, CsvRow, CSV_HEADER,
};
pub use self::svg::{emit_plot, render_svg, FIGURE_LAYERS};

use crate::error::{Error, Result};
use crate::linalg::DEFAULT_PSD_TOL;
use crate::maps::MapParams;
use crate::oracle::numeric_flags;
use crate::regions::{classify, Boundary, Classification, BETA_CP_BRANCH};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanMode {
    ClosedForm,
    Numeric,
    Compare,
}

impl ScanMode {
    pub fn name(self) -> &'static str {
        match self {
            ScanMode::ClosedForm => "closed",
            ScanMode::Numeric => "numeric",
            ScanMode::Compare => "compare",
        }
    }
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" | "closed_form" => Ok(ScanMode::ClosedForm),
            "numeric" => Ok(ScanMode::Numeric),
            "compare" => Ok(ScanMode::Compare),
            _ => Err(Error::InvalidConfig(format!("unknown scan mode `{s}`"))),
        }
    }
}

/// One predicate column of the scan output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Layer {
    Positive,
    TwoPositive,
    Cp,
    Ccp,
    PosNotCp,
    TwoPosNotCp,
    DecompSuff,
    DecompAnd2Pos,
}

impl Layer {
    /// CSV column order.
    pub const ALL: [Layer; 8] = [
        Layer::Positive,
        Layer::TwoPositive,
        Layer::Cp,
        Layer::Ccp,
        Layer::PosNotCp,
        Layer::TwoPosNotCp,
        Layer::DecompSuff,
        Layer::DecompAnd2Pos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Positive => "positive",
            Layer::TwoPositive => "two_positive",
            Layer::Cp => "cp",
            Layer::Ccp => "ccp",
            Layer::PosNotCp => "pos_not_cp",
            Layer::TwoPosNotCp => "two_pos_not_cp",
            Layer::DecompSuff => "decomp_suff",
            Layer::DecompAnd2Pos => "decomp_and_2pos",
        }
    }

    pub fn get(self, c: &Classification) -> bool {
        match self {
            Layer::Positive => c.positive,
            Layer::TwoPositive => c.two_positive,
            Layer::Cp => c.completely_positive,
            Layer::Ccp => c.completely_copositive,
            Layer::PosNotCp => c.positive_not_cp,
            Layer::TwoPosNotCp => c.two_positive_not_cp,
            Layer::DecompSuff => c.decomposable_sufficient,
            Layer::DecompAnd2Pos => c.decomposable_and_two_positive,
        }
    }

    /// Curves `alpha = f(beta)` along which the layer can change.
    pub fn boundaries(self) -> &'static [Boundary] {
        use Boundary::*;
        match self {
            Layer::Positive => &[Positivity],
            Layer::TwoPositive => &[TwoPositivity],
            Layer::Cp | Layer::Ccp => &[CompletePositivity],
            Layer::PosNotCp => &[Positivity, CompletePositivity],
            Layer::TwoPosNotCp => &[TwoPositivity, CompletePositivity],
            Layer::DecompSuff => &[Decomposability],
            Layer::DecompAnd2Pos => &[Decomposability, TwoPositivity, CompletePositivity],
        }
    }

    /// Whether the layer is also cut by the vertical line `beta = -0.2`.
    pub fn has_branch_line(self) -> bool {
        matches!(self, Layer::TwoPosNotCp | Layer::DecompAnd2Pos)
    }

    /// Only `positive` is defined for `n > 3`.
    pub fn available(self, n: usize) -> bool {
        n == 3 || self == Layer::Positive
    }

    /// Distance from `p` to the nearest curve bounding this layer.
    pub fn boundary_distance(self, p: &MapParams) -> f64 {
        let d = self
            .boundaries()
            .iter()
            .map(|b| b.distance(p))
            .fold(f64::INFINITY, f64::min);
        if self.has_branch_line() {
            d.min((p.beta - BETA_CP_BRANCH).abs())
        } else {
            d
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Layer::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLayer(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    /// Cells per axis.
    pub resolution: usize,
    pub mode: ScanMode,
    pub n: usize,
    /// Recorded with the scan; the numeric predicates are deterministic.
    pub seed: u64,
    pub csv_path: Option<PathBuf>,
    pub svg_dir: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            alpha_min: -4.0,
            alpha_max: 4.0,
            beta_min: -4.0,
            beta_max: 4.0,
            resolution: 101,
            mode: ScanMode::ClosedForm,
            n: 3,
            seed: 0,
            csv_path: None,
            svg_dir: None,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha_min, self.alpha_max, self.beta_min, self.beta_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("axis ranges must be finite".into()));
        }
        if self.alpha_min >= self.alpha_max {
            return Err(Error::InvalidConfig(format!(
                "alpha range [{}, {}] is empty",
                self.alpha_min, self.alpha_max
            )));
        }
        if self.beta_min >= self.beta_max {
            return Err(Error::InvalidConfig(format!(
                "beta range [{}, {}] is empty",
                self.beta_min, self.beta_max
            )));
        }
        if self.resolution < 2 {
            return Err(Error::InvalidConfig(format!(
                "resolution must be at least 2, got {}",
                self.resolution
            )));
        }
        if self.resolution > 4096 {
            return Err(Error::InvalidConfig(format!(
                "resolution {} exceeds 4096",
                self.resolution
            )));
        }
        // validates n
        MapParams::new(self.alpha_min, self.beta_min, self.n)?;
        Ok(())
    }

    pub fn alpha_step(&self) -> f64 {
        (self.alpha_max - self.alpha_min) / self.resolution as f64
    }

    pub fn beta_step(&self) -> f64 {
        (self.beta_max - self.beta_min) / self.resolution as f64
    }

    pub fn alpha_center(&self, ia: usize) -> f64 {
        self.alpha_min + (ia as f64 + 0.5) * self.alpha_step()
    }

    pub fn beta_center(&self, ib: usize) -> f64 {
        self.beta_min + (ib as f64 + 0.5) * self.beta_step()
    }

    /// `(alpha, beta)` at the center of cell `index`.
    pub fn cell_center(&self, index: usize) -> (f64, f64) {
        (
            self.alpha_center(index / self.resolution),
            self.beta_center(index % self.resolution),
        )
    }

    pub fn cell_params(&self, index: usize) -> Result<MapParams> {
        let (alpha, beta) = self.cell_center(index);
        MapParams::new(alpha, beta, self.n)
    }
}

/// A disagreement between closed form and numeric oracle in compare mode.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub cell: usize,
    pub predicate: &'static str,
    pub boundary_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionGrid {
    pub config: ScanConfig,
    pub cells: Vec<Classification>,
    pub mismatches: Vec<Mismatch>,
}

impl RegionGrid {
    pub fn resolution(&self) -> usize {
        self.config.resolution
    }

    pub fn cell(&self, ia: usize, ib: usize) -> &Classification {
        &self.cells[ia * self.config.resolution + ib]
    }

    /// Share of cells where `layer` holds.
    pub fn fraction(&self, layer: Layer) -> f64 {
        let hits = self.cells.iter().filter(|c| layer.get(c)).count();
        hits as f64 / self.cells.len() as f64
    }

    /// Mismatches farther than `band` from every curve bounding their layer.
    pub fn mismatches_outside(&self, band: f64) -> Vec<&Mismatch> {
        self.mismatches
            .iter()
            .filter(|m| m.boundary_distance >= band)
            .collect()
    }

    /// `alpha` values of the cell edges in column `ib` where `layer` flips.
    pub fn transitions(&self, layer: Layer, ib: usize) -> Vec<f64> {
        let res = self.config.resolution;
        (1..res)
            .filter(|&ia| layer.get(self.cell(ia - 1, ib)) != layer.get(self.cell(ia, ib)))
            .map(|ia| self.config.alpha_min + ia as f64 * self.config.alpha_step())
            .collect()
    }

    /// Largest distance, in cell heights, between a raster transition of
    /// `layer` and the nearest bounding curve evaluated at the column center.
    /// Zero when the layer has no transitions.
    pub fn max_transition_offset(&self, layer: Layer) -> f64 {
        let h = self.config.alpha_step();
        let mut worst: f64 = 0.0;
        for ib in 0..self.config.resolution {
            let beta = self.config.beta_center(ib);
            for edge in self.transitions(layer, ib) {
                let d = layer
                    .boundaries()
                    .iter()
                    .map(|b| (edge - b.alpha_at(beta, self.config.n)).abs())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d / h);
            }
        }
        worst
    }

    pub fn check_invariants(&self) -> Result<()> {
        let expected = self.config.resolution * self.config.resolution;
        if self.cells.len() != expected {
            return Err(Error::Consistency(format!(
                "grid holds {} cells, expected {expected}",
                self.cells.len()
            )));
        }
        self.cells
            .iter()
            .try_for_each(Classification::check_invariants)
    }
}

enum CellResult {
    Plain(Classification),
    Compared(Classification, Vec<Mismatch>),
}

fn evaluate_cell(config: &ScanConfig, index: usize) -> Result<CellResult> {
    let p = config.cell_params(index)?;
    match config.mode {
        ScanMode::ClosedForm => Ok(CellResult::Plain(classify(&p)?)),
        ScanMode::Numeric => {
            let c = numeric_flags(&p, DEFAULT_PSD_TOL)?;
            c.check_invariants()?;
            Ok(CellResult::Plain(c))
        }
        ScanMode::Compare => {
            let closed = classify(&p)?;
            let numeric = numeric_flags(&p, DEFAULT_PSD_TOL)?;
            let mismatches = Layer::ALL
                .into_iter()
                .filter(|l| l.available(p.n) && l.get(&closed) != l.get(&numeric))
                .map(|l| Mismatch {
                    cell: index,
                    predicate: l.name(),
                    boundary_distance: l.boundary_distance(&p),
                })
                .collect();
            Ok(CellResult::Compared(closed, mismatches))
        }
    }
}

/// Classifies every cell. Cells are evaluated in parallel and collected in
/// index order, so the result does not depend on scheduling.
pub fn scan(config: &ScanConfig) -> Result<RegionGrid> {
    config.validate()?;
    let total = config.resolution * config.resolution;
    let results: Vec<CellResult> = (0..total)
        .into_par_iter()
        .map(|index| evaluate_cell(config, index))
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(total);
    let mut mismatches = Vec::new();
    for r in results {
        match r {
            CellResult::Plain(c) => cells.push(c),
            CellResult::Compared(c, m) => {
                cells.push(c);
                mismatches.extend(m);
            }
        }
    }
    Ok(RegionGrid {
        config: config.clone(),
        cells,
        mismatches,
    })
}

//! Parameter sweeps that regenerate the figure data as CSV tables, each with
//! a JSON sidecar holding everything needed to rerun it.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    capacity_approx, capacity_interference_limited, density_constant, ds_capacity, optimal_spectral_efficiency,
};
use crate::error::{Error, Result};
use crate::lattice::{det_upper_bound, lattice_max_density};
use crate::params::{NetworkParams, Snr};
use crate::sim::{solve_capacity, FadingModel, SimConfig};

pub const MAX_SWEEP_N: u32 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    Fig1,
    Fig2,
    DsCompare,
    BoundsCompare,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub alphas: Vec<f64>,
    pub n_min: u32,
    pub n_max: u32,
    pub utils: Vec<f64>,
    pub d: f64,
    pub epsilon: f64,
    /// SNR of the noisy Monte-Carlo column.
    pub finite_snr_db: f64,
    pub fading: FadingModel,
    /// Leave the Monte-Carlo columns of Fig. 2 empty when false.
    pub monte_carlo: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub figure: Figure,
    pub grid: SweepGrid,
    pub sim: SimConfig,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    /// The grid used for the published figures.
    pub fn defaults(figure: Figure) -> Self {
        let alphas = match figure {
            Figure::Fig1 => {
                let mut a = vec![2.01, 2.1];
                a.extend((1..=16).map(|k| 2.0 + 0.25 * f64::from(k)));
                a
            }
            Figure::Fig2 | Figure::DsCompare => vec![4.0],
            Figure::BoundsCompare => vec![3.0, 3.5, 4.0, 5.0],
        };
        SweepSpec {
            figure,
            grid: SweepGrid {
                alphas,
                n_min: 1,
                n_max: 20,
                utils: vec![0.25, 0.5],
                d: 10.0,
                epsilon: 0.1,
                finite_snr_db: 20.0,
                fading: FadingModel::PathLossOnly,
                monte_carlo: true,
            },
            sim: SimConfig::default(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.alphas.is_empty() {
            return Err(Error::invalid("alpha grid must not be empty"));
        }
        if g.alphas.iter().any(|&a| !(a > 2.0 && a.is_finite())) {
            return Err(Error::invalid("alpha must exceed 2"));
        }
        if matches!(self.figure, Figure::Fig2 | Figure::DsCompare) {
            if g.alphas.len() != 1 {
                return Err(Error::invalid("this sweep takes exactly one alpha"));
            }
            if g.utils.is_empty() {
                return Err(Error::invalid("utilization grid must not be empty"));
            }
            if g.n_min < 1 || g.n_max > MAX_SWEEP_N || g.n_min > g.n_max {
                return Err(Error::invalid(format!("n range must be a non-empty subset of [1, {MAX_SWEEP_N}]")));
            }
        }
        if g.utils.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
            return Err(Error::invalid("util must be positive"));
        }
        if !(g.d > 0.0 && g.d.is_finite()) {
            return Err(Error::invalid("d must be positive and finite"));
        }
        if !(g.epsilon > 0.0 && g.epsilon < 1.0) {
            return Err(Error::invalid("epsilon must lie in (0, 1)"));
        }
        if g.finite_snr_db.is_nan() {
            return Err(Error::invalid("snr must be a number"));
        }
        self.sim.validate()
    }

    fn n_range(&self) -> impl Iterator<Item = u32> + Clone {
        self.grid.n_min..=self.grid.n_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub alpha: f64,
    pub b_star: f64,
    pub density_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig2Row {
    pub n: u32,
    pub util: f64,
    pub analytic_lambda: f64,
    pub mc_inf_lambda: Option<f64>,
    pub mc_inf_stderr: Option<f64>,
    pub mc_20db_lambda: Option<f64>,
    pub mc_20db_stderr: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DsRow {
    pub n: u32,
    pub util: f64,
    pub fh_lambda: f64,
    pub ds_lambda: f64,
    pub fh_over_ds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub alpha: f64,
    pub b_star: f64,
    pub random_lambda: f64,
    pub det_upper_lambda: f64,
    pub lattice_lambda: f64,
    pub upper_over_lattice: f64,
    pub random_over_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "figure", content = "rows", rename_all = "kebab-case")]
pub enum SweepTable {
    Fig1(Vec<Fig1Row>),
    Fig2(Vec<Fig2Row>),
    DsCompare(Vec<DsRow>),
    BoundsCompare(Vec<BoundsRow>),
}

impl SweepTable {
    pub fn len(&self) -> usize {
        match self {
            SweepTable::Fig1(r) => r.len(),
            SweepTable::Fig2(r) => r.len(),
            SweepTable::DsCompare(r) => r.len(),
            SweepTable::BoundsCompare(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        match self {
            SweepTable::Fig1(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
            SweepTable::Fig2(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
            SweepTable::DsCompare(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
            SweepTable::BoundsCompare(rows) => rows.iter().try_for_each(|r| w.serialize(r))?,
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Everything needed to regenerate a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub spec: SweepSpec,
    pub rows: usize,
}

impl Sidecar {
    pub fn new(spec: &SweepSpec, table: &SweepTable) -> Self {
        Sidecar {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: spec.sim.master_seed,
            spec: spec.clone(),
            rows: table.len(),
        }
    }
}

/// `<stem>.json` next to the CSV.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Rows `(alpha, b*, density constant)`.
pub fn run_fig1(alphas: &[f64]) -> Result<Vec<Fig1Row>> {
    alphas
        .iter()
        .map(|&alpha| {
            Ok(Fig1Row {
                alpha,
                b_star: optimal_spectral_efficiency(alpha)?,
                density_constant: density_constant(alpha)?,
            })
        })
        .collect()
}

struct Fig2Cell {
    util: f64,
    n: u32,
}

/// Density against band count for every utilization: the noise-free
/// approximation plus Monte-Carlo solutions at infinite and finite SNR.
pub fn run_fig2(spec: &SweepSpec) -> Result<Vec<Fig2Row>> {
    spec.validate()?;
    let g = &spec.grid;
    let alpha = g.alphas[0];
    let cells: Vec<Fig2Cell> =
        g.utils.iter().flat_map(|&util| spec.n_range().map(move |n| Fig2Cell { util, n })).collect();
    let snr = Snr::from_db(g.finite_snr_db)?;
    let inner = SimConfig { threads: 0, ..spec.sim.clone() };

    crate::sim::with_threads(spec.sim.threads, || {
        cells
            .par_iter()
            .map(|cell| {
                let clean = NetworkParams::interference_limited(alpha, g.d, cell.util)?;
                let noisy = clean.with_snr(snr)?;
                let analytic_lambda = capacity_approx(&clean, cell.n, g.epsilon)?.lambda;
                let mut row = Fig2Row {
                    n: cell.n,
                    util: cell.util,
                    analytic_lambda,
                    mc_inf_lambda: None,
                    mc_inf_stderr: None,
                    mc_20db_lambda: None,
                    mc_20db_stderr: None,
                };
                if g.monte_carlo {
                    let inf = solve_capacity(&clean, cell.n, g.epsilon, g.fading, &inner)?;
                    let fin = solve_capacity(&noisy, cell.n, g.epsilon, g.fading, &inner)?;
                    row.mc_inf_lambda = Some(inf.lambda);
                    row.mc_inf_stderr = Some(inf.stderr);
                    row.mc_20db_lambda = Some(fin.lambda);
                    row.mc_20db_stderr = Some(fin.stderr);
                }
                Ok(row)
            })
            .collect()
    })
}

/// Frequency-hopping against direct-sequence densities over the band range.
pub fn run_ds_compare(spec: &SweepSpec) -> Result<Vec<DsRow>> {
    spec.validate()?;
    let g = &spec.grid;
    let alpha = g.alphas[0];
    let mut rows = Vec::new();
    for &util in &g.utils {
        let params = NetworkParams::interference_limited(alpha, g.d, util)?;
        for n in spec.n_range() {
            let fh = capacity_interference_limited(&params, n, g.epsilon)?.lambda;
            let ds = ds_capacity(&params, n, g.epsilon)?.lambda;
            rows.push(DsRow { n, util, fh_lambda: fh, ds_lambda: ds, fh_over_ds: fh / ds });
        }
    }
    Ok(rows)
}

/// Random, nearest-interferer and lattice densities at `util = b*`, `n = 1`.
pub fn run_bounds_compare(spec: &SweepSpec) -> Result<Vec<BoundsRow>> {
    spec.validate()?;
    let g = &spec.grid;
    g.alphas
        .iter()
        .map(|&alpha| {
            let b_star = optimal_spectral_efficiency(alpha)?;
            let params = NetworkParams::interference_limited(alpha, g.d, b_star)?;
            let random = capacity_interference_limited(&params, 1, g.epsilon)?.lambda;
            let upper = det_upper_bound(&params, b_star)?.lambda;
            let lattice = lattice_max_density(&params, b_star)?.lambda;
            Ok(BoundsRow {
                alpha,
                b_star,
                random_lambda: random,
                det_upper_lambda: upper,
                lattice_lambda: lattice,
                upper_over_lattice: upper / lattice,
                random_over_upper: random / upper,
            })
        })
        .collect()
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    Ok(match spec.figure {
        Figure::Fig1 => SweepTable::Fig1(run_fig1(&spec.grid.alphas)?),
        Figure::Fig2 => SweepTable::Fig2(run_fig2(spec)?),
        Figure::DsCompare => SweepTable::DsCompare(run_ds_compare(spec)?),
        Figure::BoundsCompare => SweepTable::BoundsCompare(run_bounds_compare(spec)?),
    })
}

/// Writes the CSV to `csv_path` and the sidecar next to it.
pub fn write_outputs(spec: &SweepSpec, table: &SweepTable, csv_path: &Path) -> Result<PathBuf> {
    let file = BufWriter::new(File::create(csv_path)?);
    table.write_csv(file)?;
    let side = sidecar_path(csv_path);
    let mut out = BufWriter::new(File::create(&side)?);
    serde_json::to_writer_pretty(&mut out, &Sidecar::new(spec, table))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(side)
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

//! On-disk problem and result bundles.

use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use spdp::io::{
    read_matrix_market, read_vector_csv, write_matrix_csv, write_matrix_market, write_pgm,
    write_vector_csv,
};
use spdp::tomo::{Geometry, NoiseModel, TomoProblem};
use spdp::LinearOperator;

pub const MATRIX_FILE: &str = "A.mtx";
pub const DATA_FILE: &str = "b.csv";
pub const TRUTH_FILE: &str = "x_true.csv";
pub const SINOGRAM_FILE: &str = "sinogram.csv";
pub const PHANTOM_FILE: &str = "phantom.pgm";
pub const META_FILE: &str = "meta.toml";
pub const CONFIG_ECHO: &str = "config.toml";
pub const RECON_FILE: &str = "recon.pgm";
pub const SOLUTION_FILE: &str = "x.csv";
pub const HISTORY_FILE: &str = "history.csv";
pub const SUMMARY_FILE: &str = "summary.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub geometry: GeometryMeta,
    pub noise: NoiseMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryMeta {
    pub n: usize,
    pub p: usize,
    pub angles_deg: Vec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub detector_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseMeta {
    pub gaussian_sigma: f64,
    pub impulse_fraction: f64,
    pub impulse_scale: f64,
    pub seed: u64,
    pub impulses: usize,
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes `problem` (with `b` already noisy) and its metadata to `dir`.
pub fn write_problem(
    dir: &Path,
    problem: &TomoProblem,
    noise: &NoiseModel,
    seed: u64,
    impulses: usize,
) -> Result<()> {
    ensure_dir(dir)?;
    let g = &problem.geometry;
    let shape = problem.a.shape();
    write_matrix_market(&dir.join(MATRIX_FILE), &problem.a)?;
    write_vector_csv(&dir.join(DATA_FILE), &problem.b)?;
    write_vector_csv(&dir.join(TRUTH_FILE), &problem.x_true)?;
    let sinogram: Vec<&[f64]> = problem.b.chunks(g.p).collect();
    write_matrix_csv(&dir.join(SINOGRAM_FILE), &sinogram)?;
    write_pgm(&dir.join(PHANTOM_FILE), g.n, g.n, &problem.x_true)?;
    let meta = Meta {
        geometry: GeometryMeta {
            n: g.n,
            p: g.p,
            angles_deg: g.angles_deg.clone(),
            rows: shape.rows,
            cols: shape.cols,
            detector_width: g.detector_width(),
        },
        noise: NoiseMeta {
            gaussian_sigma: noise.gaussian_sigma,
            impulse_fraction: noise.impulse_fraction,
            impulse_scale: noise.impulse_scale,
            seed,
            impulses,
        },
    };
    write_text(&dir.join(META_FILE), &toml::to_string(&meta)?)
}

pub fn read_problem(dir: &Path) -> Result<(TomoProblem, Meta)> {
    let meta_path = dir.join(META_FILE);
    let text = std::fs::read_to_string(&meta_path)
        .with_context(|| format!("cannot read {}", meta_path.display()))?;
    let meta: Meta =
        toml::from_str(&text).with_context(|| format!("in {}", meta_path.display()))?;
    let gm = &meta.geometry;
    let geometry = Geometry::new(gm.n, gm.angles_deg.clone(), Some(gm.p))?;
    let a = read_matrix_market(&dir.join(MATRIX_FILE))?;
    let b = read_vector_csv(&dir.join(DATA_FILE))?;
    let x_true = read_vector_csv(&dir.join(TRUTH_FILE))?;
    let shape = a.shape();
    anyhow::ensure!(
        shape.rows == geometry.rows() && shape.cols == gm.n * gm.n,
        "{} is {shape} but the geometry needs {}x{}",
        MATRIX_FILE,
        geometry.rows(),
        gm.n * gm.n
    );
    anyhow::ensure!(
        b.len() == shape.rows,
        "{DATA_FILE} has {} entries, expected {}",
        b.len(),
        shape.rows
    );
    anyhow::ensure!(
        x_true.len() == shape.cols,
        "{TRUTH_FILE} has {} entries, expected {}",
        x_true.len(),
        shape.cols
    );
    Ok((
        TomoProblem {
            a: Arc::new(a),
            b,
            x_true,
            geometry,
        },
        meta,
    ))
}

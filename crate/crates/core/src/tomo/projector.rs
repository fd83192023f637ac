//! Parallel-beam projector on a square pixel grid.
//!
//! The image occupies `[-n/2, n/2]^2` with unit pixels, stored row-major with
//! row 0 at the top. For angle `theta` and detector offset `s`, a ray is the
//! infinite line through `(s cos theta, s sin theta)` with direction
//! `(-sin theta, cos theta)`. Offsets are `p` equispaced points on a detector of
//! width `sqrt(2) n`, symmetric about zero. Row `a * p + j` of the system matrix
//! holds the chord lengths of ray `j` at angle `a`.

use std::sync::Arc;

use super::phantom::shepp_logan;
use crate::error::{Error, Result};
use crate::linop::{LinearOperator, SparseMatrix};

/// Chords shorter than this are treated as corner touches and dropped.
const MIN_CHORD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub n: usize,
    pub angles_deg: Vec<f64>,
    pub p: usize,
}

impl Geometry {
    pub fn new(n: usize, angles_deg: Vec<f64>, p: Option<usize>) -> Result<Self> {
        let g = Geometry {
            n,
            p: p.unwrap_or_else(|| default_rays(n)),
            angles_deg,
        };
        g.validate()?;
        Ok(g)
    }

    /// Angles `0:1:179` and the default ray count.
    pub fn with_defaults(n: usize) -> Result<Self> {
        Self::new(n, (0..180).map(f64::from).collect(), None)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("image side n must be at least 1"));
        }
        if self.angles_deg.is_empty() {
            return Err(Error::invalid("at least one projection angle is required"));
        }
        if let Some(a) = self.angles_deg.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!(
                "projection angle {a} is not finite"
            )));
        }
        if self.p == 0 {
            return Err(Error::invalid("rays per angle p must be at least 1"));
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.angles_deg.len() * self.p
    }

    pub fn detector_width(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.n as f64
    }

    /// Detector offsets; `offset(p-1-j) == -offset(j)` exactly.
    pub fn offsets(&self) -> Vec<f64> {
        let d = self.detector_width();
        if self.p == 1 {
            return vec![0.0];
        }
        let q = (self.p - 1) as f64;
        (0..self.p)
            .map(|k| d * (2.0 * k as f64 - q) / (2.0 * q))
            .collect()
    }

    /// Point on the line and unit direction for ray `j` at angle index `a`.
    pub fn ray(&self, a: usize, offset: f64) -> ([f64; 2], [f64; 2]) {
        let (s, c) = sincos_deg(self.angles_deg[a]);
        ([offset * c, offset * s], [-s, c])
    }
}

/// `round(sqrt(2) n)`, rays covering the image diagonal.
pub fn default_rays(n: usize) -> usize {
    (std::f64::consts::SQRT_2 * n as f64).round() as usize
}

/// Parses `start:step:stop` (stop inclusive) or a comma-separated list.
pub fn parse_angles(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let bad = |what: &str| Error::invalid(format!("invalid angle specification {spec:?}: {what}"));
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("expected numbers"))?;
        let [start, step, stop] = parts[..] else {
            return Err(bad("expected start:step:stop"));
        };
        if !(step > 0.0) || !start.is_finite() || !stop.is_finite() {
            return Err(bad("step must be > 0 and bounds finite"));
        }
        if stop < start {
            return Err(bad("stop is below start"));
        }
        // tolerate stop landing a rounding error short of a grid point
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| start + k as f64 * step).collect())
    } else {
        let angles: Vec<f64> = spec
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad("expected numbers"))?;
        if angles.is_empty() {
            return Err(bad("no angles"));
        }
        Ok(angles)
    }
}

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90.
pub fn sincos_deg(deg: f64) -> (f64, f64) {
    let r = deg.rem_euclid(360.0);
    if r.fract() == 0.0 && (r as u32) % 90 == 0 {
        return match r as u32 {
            0 => (0.0, 1.0),
            90 => (1.0, 0.0),
            180 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    deg.to_radians().sin_cos()
}

/// Pixel indices and chord lengths of the line `point + t dir` through an
/// `n x n` image, in order of increasing `t`.
///
/// A ray lying on a grid line is assigned to the pixels on its right/upper
/// side; one on the right or top image edge misses.
pub fn trace_ray(n: usize, point: [f64; 2], dir: [f64; 2]) -> Vec<(usize, f64)> {
    let h = n as f64 / 2.0;
    let norm = dir[0].hypot(dir[1]);
    if n == 0 || !(norm > 0.0) {
        return Vec::new();
    }
    let d = [dir[0] / norm, dir[1] / norm];

    let mut t_in = f64::NEG_INFINITY;
    let mut t_out = f64::INFINITY;
    for axis in 0..2 {
        if d[axis] == 0.0 {
            if point[axis] < -h || point[axis] > h {
                return Vec::new();
            }
        } else {
            let ta = (-h - point[axis]) / d[axis];
            let tb = (h - point[axis]) / d[axis];
            t_in = t_in.max(ta.min(tb));
            t_out = t_out.min(ta.max(tb));
        }
    }
    if !(t_out - t_in > MIN_CHORD) {
        return Vec::new();
    }

    let crossings = |axis: usize| -> Vec<f64> {
        if d[axis] == 0.0 {
            return Vec::new();
        }
        let mut ts: Vec<f64> = (1..n)
            .map(|k| (k as f64 - h - point[axis]) / d[axis])
            .filter(|&t| t > t_in && t < t_out)
            .collect();
        if d[axis] < 0.0 {
            ts.reverse();
        }
        ts
    };
    let (tx, ty) = (crossings(0), crossings(1));

    let mut ts = Vec::with_capacity(tx.len() + ty.len() + 2);
    ts.push(t_in);
    let (mut i, mut j) = (0, 0);
    while i < tx.len() || j < ty.len() {
        if j == ty.len() || (i < tx.len() && tx[i] <= ty[j]) {
            ts.push(tx[i]);
            i += 1;
        } else {
            ts.push(ty[j]);
            j += 1;
        }
    }
    ts.push(t_out);

    let mut out = Vec::with_capacity(ts.len());
    for w in ts.windows(2) {
        let len = w[1] - w[0];
        if len <= MIN_CHORD {
            continue;
        }
        let tm = 0.5 * (w[0] + w[1]);
        let col = (point[0] + tm * d[0] + h).floor();
        let up = (point[1] + tm * d[1] + h).floor();
        if col < 0.0 || up < 0.0 || col >= n as f64 || up >= n as f64 {
            continue;
        }
        let row = n - 1 - up as usize;
        out.push((row * n + col as usize, len));
    }
    out
}

/// System matrix, exact phantom and noiseless data for one geometry.
#[derive(Debug, Clone)]
pub struct TomoProblem {
    pub a: Arc<SparseMatrix>,
    pub b: Vec<f64>,
    pub x_true: Vec<f64>,
    pub geometry: Geometry,
}

/// Assembles the system matrix of `geometry`; rays that miss stay as zero rows.
pub fn system_matrix(geometry: &Geometry) -> Result<SparseMatrix> {
    geometry.validate()?;
    let n = geometry.n;
    let offsets = geometry.offsets();
    let mut rows = Vec::with_capacity(geometry.rows());
    for a in 0..geometry.angles_deg.len() {
        for &s in &offsets {
            let (point, dir) = geometry.ray(a, s);
            rows.push(trace_ray(n, point, dir));
        }
    }
    SparseMatrix::from_rows(n * n, rows)
}

/// Parallel-beam test problem on the modified Shepp-Logan phantom.
pub fn paralleltomo(n: usize, angles_deg: Vec<f64>, p: Option<usize>) -> Result<TomoProblem> {
    let geometry = Geometry::new(n, angles_deg, p)?;
    let a = system_matrix(&geometry)?;
    let x_true = shepp_logan(n);
    let b = a.apply(&x_true)?;
    Ok(TomoProblem {
        a: Arc::new(a),
        b,
        x_true,
        geometry,
    })
}

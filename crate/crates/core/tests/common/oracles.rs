//! Reference implementations used only by tests. Each is written without
//! reference to the library's algorithm for the same quantity.

#![allow(dead_code)]

use nalgebra::DMatrix;
use spdp::{LinearOperator, Param, ProxFunction};

/// Smallest `z` in `[lo, hi]` with `dplus(z) >= 0`, for a nondecreasing
/// right derivative. Bisects to adjacent floats.
pub fn bisect_min(mut lo: f64, mut hi: f64, dplus: impl Fn(f64) -> f64) -> f64 {
    if dplus(lo) >= 0.0 {
        return lo;
    }
    if dplus(hi) < 0.0 {
        return hi;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dplus(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // either end is within one ulp; pick the better objective side
    if dplus(lo) >= 0.0 {
        lo
    } else {
        hi
    }
}

fn sgn_plus(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn param_at(p: &Param, i: usize) -> f64 {
    match p {
        Param::Uniform(v) => *v,
        Param::PerCoord(v) => v[i],
    }
}

/// `argmin_z t f(z) + 1/2 |z - v|^2` by one-dimensional root finding on the
/// optimality condition, per coordinate or along the ray through the centre.
pub fn prox_oracle(f: &ProxFunction, t: f64, v: &[f64]) -> Vec<f64> {
    match f {
        ProxFunction::Zero => v.to_vec(),
        ProxFunction::L1 { weight, shift } => v
            .iter()
            .enumerate()
            .map(|(i, &vi)| {
                let b = param_at(shift, i);
                let (lo, hi) = (vi.min(b) - 1.0, vi.max(b) + 1.0);
                bisect_min(lo, hi, |z| t * weight * sgn_plus(z - b) + z - vi)
            })
            .collect(),
        ProxFunction::SqL2 { weight, shift } => v
            .iter()
            .enumerate()
            .map(|(i, &vi)| {
                let b = param_at(shift, i);
                let (lo, hi) = (vi.min(b) - 1.0, vi.max(b) + 1.0);
                bisect_min(lo, hi, |z| t * weight * (z - b) + z - vi)
            })
            .collect(),
        ProxFunction::L2Norm { weight, shift } => {
            let b: Vec<f64> = (0..v.len()).map(|i| param_at(shift, i)).collect();
            ray_shrink(v, &b, t * weight)
        }
        ProxFunction::GroupL12 { weight, group_len } => {
            let m = *group_len;
            let mut out = vec![0.0; 2 * m];
            for i in 0..m {
                let p = ray_shrink(&[v[i], v[m + i]], &[0.0, 0.0], t * weight);
                out[i] = p[0];
                out[m + i] = p[1];
            }
            out
        }
        ProxFunction::IndicatorNonneg => v
            .iter()
            .map(|&vi| bisect_min(0.0, vi.abs() + 1.0, |z| z - vi))
            .collect(),
        ProxFunction::IndicatorBox { lo, hi } => v
            .iter()
            .enumerate()
            .map(|(i, &vi)| {
                let l = param_at(lo, i).max(vi - vi.abs() - 1.0);
                let h = param_at(hi, i).min(vi + vi.abs() + 1.0);
                bisect_min(l.min(h), h, |z| z - vi)
            })
            .collect(),
    }
}

/// Minimizer of `c |z - b| + 1/2 |z - v|^2`, which lies on the segment from
/// `b` to `v`: `z = b + s (v - b)` with `s` in `[0, 1]`.
fn ray_shrink(v: &[f64], b: &[f64], c: f64) -> Vec<f64> {
    let r = v
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    if r == 0.0 {
        return b.to_vec();
    }
    // d/ds [c s r + 1/2 (1 - s)^2 r^2]
    let s = bisect_min(0.0, 1.0, |s| c * r - (1.0 - s) * r * r);
    v.iter().zip(b).map(|(x, y)| y + s * (x - y)).collect()
}

/// Length of the line `point + t dir` inside `[-h, h]^2`, from its
/// intersections with the four edge segments.
pub fn chord_length(n: usize, point: [f64; 2], dir: [f64; 2]) -> f64 {
    let h = n as f64 / 2.0;
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for axis in 0..2 {
        if dir[axis] == 0.0 {
            continue;
        }
        let other = 1 - axis;
        for edge in [-h, h] {
            let t = (edge - point[axis]) / dir[axis];
            let q = point[other] + t * dir[other];
            if (-h..=h).contains(&q) {
                let mut p = [0.0; 2];
                p[axis] = edge;
                p[other] = q;
                pts.push(p);
            }
        }
    }
    let mut best: f64 = 0.0;
    for a in &pts {
        for b in &pts {
            best = best.max((a[0] - b[0]).hypot(a[1] - b[1]));
        }
    }
    best
}

/// Dense matrix of any operator, by applying it to unit vectors.
pub fn materialize(op: &dyn LinearOperator) -> DMatrix<f64> {
    let s = op.shape();
    let mut m = DMatrix::zeros(s.rows, s.cols);
    let mut e = vec![0.0; s.cols];
    for j in 0..s.cols {
        e[j] = 1.0;
        let col = op.apply(&e).unwrap();
        for i in 0..s.rows {
            m[(i, j)] = col[i];
        }
        e[j] = 0.0;
    }
    m
}

/// `[I (x) B; B (x) I]` with `B` the forward-difference matrix (zero last row).
pub fn kronecker_gradient(n: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        b[(i, i)] = -1.0;
        b[(i, i + 1)] = 1.0;
    }
    let id = DMatrix::<f64>::identity(n, n);
    let top = id.kronecker(&b);
    let bottom = b.kronecker(&id);
    let mut d = DMatrix::zeros(2 * n * n, n * n);
    d.view_mut((0, 0), (n * n, n * n)).copy_from(&top);
    d.view_mut((n * n, 0), (n * n, n * n)).copy_from(&bottom);
    d
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

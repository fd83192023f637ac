//! Fixtures shared by the benchmarks.

use spdp::tomo::{
    build_ct_problem, paralleltomo, Constraint, CtModelSpec, Method, TomoProblem, TvKind,
};
use spdp::Problem;

/// Noiseless phantom data, `n x n` pixels and angles `0:10:179`.
pub fn tomo(n: usize) -> TomoProblem {
    let angles = (0..18).map(|k| 10.0 * k as f64).collect();
    paralleltomo(n, angles, None).expect("valid geometry")
}

pub fn ct_problem(t: &TomoProblem, tv: TvKind, method: Method) -> Problem {
    let spec = CtModelSpec {
        w1: 0.1,
        w2: 0.9,
        lambda: 0.8,
        tv,
        constraint: Constraint::Box { lo: 0.0, hi: 1.0 },
        method,
    };
    build_ct_problem(t, &spec).expect("valid model")
}

/// Deterministic pseudo-random values in `[-1, 1)`.
pub fn signal(len: usize, salt: u64) -> Vec<f64> {
    let mut s = salt.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    (0..len)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 52) as f64 - 1.0
        })
        .collect()
}

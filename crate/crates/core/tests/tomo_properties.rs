mod common;

use common::oracles::{chord_length, max_abs_diff};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spdp::linop::{Grad2D, LinearOperator};
use spdp::tomo::{
    build_ct_problem, paralleltomo, parse_angles, shepp_logan, snr_db, system_matrix, trace_ray,
    Constraint, CtModelSpec, Geometry, Method, NoiseModel, TvKind,
};
use spdp::vector::{norm1, norm2};

const CHORD_TOL: f64 = 1e-9;

#[test]
fn benchmark_geometry_shape() {
    let g = Geometry::new(256, parse_angles("0:10:179").unwrap(), None).unwrap();
    assert_eq!(g.p, 362);
    let a = system_matrix(&g).unwrap();
    assert_eq!((a.shape().rows, a.shape().cols), (6516, 65536));
}

#[test]
fn random_rays_match_line_box_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = rng.random_range(1..48usize);
        let theta: f64 = rng.random_range(0.0..360.0);
        let reach = 0.75 * n as f64;
        let s: f64 = rng.random_range(-reach..reach);
        let (sn, cs) = theta.to_radians().sin_cos();
        let point = [s * cs, s * sn];
        let dir = [-sn, cs];
        let hits = trace_ray(n, point, dir);
        let total: f64 = hits.iter().map(|h| h.1).sum();
        let want = chord_length(n, point, dir);
        assert!(
            (total - want).abs() <= CHORD_TOL,
            "n={n} theta={theta} s={s}: {total} vs {want}"
        );
        let mut seen: Vec<usize> = hits.iter().map(|h| h.0).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), hits.len());
        assert!(hits
            .iter()
            .all(|&(p, l)| p < n * n && l > 0.0 && l <= std::f64::consts::SQRT_2 + 1e-12));
    }
}

#[test]
fn axis_aligned_rays_cross_n_unit_pixels() {
    for n in [1, 2, 7, 64] {
        for k in 0..n {
            let centre = k as f64 + 0.5 - n as f64 / 2.0;
            for (point, dir) in [([centre, 0.0], [0.0, 1.0]), ([0.0, centre], [1.0, 0.0])] {
                let hits = trace_ray(n, point, dir);
                assert_eq!(hits.len(), n);
                assert_eq!(hits.iter().map(|h| h.1).sum::<f64>(), n as f64);
            }
        }
    }
}

#[test]
fn diagonal_ray_through_two_by_two() {
    let g = Geometry::new(2, vec![45.0], Some(1)).unwrap();
    let a = system_matrix(&g).unwrap();
    let row: f64 = a.values().iter().sum();
    assert!((row - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
    assert_eq!(a.nnz(), 2);
    for v in a.values() {
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn opposite_angles_reverse_the_detector(n in 1usize..24, theta in 0.0..180.0f64, p in prop::option::of(1usize..40)) {
        let g = Geometry::new(n, vec![theta, theta + 180.0], p).unwrap();
        let a = system_matrix(&g).unwrap().to_dense();
        let p = g.p;
        for j in 0..p {
            prop_assert!(max_abs_diff(&a[j], &a[2 * p - 1 - j]) <= 1e-9);
        }
    }

    #[test]
    fn snr_strictly_decreases_along_a_ray(x in prop::collection::vec(-5.0..5.0f64, 1..20), seed in 0u64..1000) {
        prop_assume!(norm2(&x) > 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d: Vec<f64> = x.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
        prop_assume!(norm2(&d) > 1e-3);
        let mut prev = f64::INFINITY;
        for c in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
            let rec: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + c * b).collect();
            let s = snr_db(&x, &rec).unwrap();
            prop_assert!(s < prev);
            prev = s;
        }
    }
}

#[test]
fn impulse_count_matches_binomial() {
    let t = paralleltomo(32, parse_angles("0:10:179").unwrap(), None).unwrap();
    let model = NoiseModel::default_for(&t.b);
    let m = t.b.len() as f64;
    let p = model.impulse_fraction;
    let sd = (m * p * (1.0 - p)).sqrt();
    let mut total = 0usize;
    for seed in 0..100 {
        let (_, mask) = model.apply(&t.b, seed).unwrap();
        let count = mask.iter().filter(|&&h| h).count();
        assert!(
            (count as f64 - p * m).abs() <= 4.0 * sd,
            "seed {seed}: {count}"
        );
        total += count;
    }
    let mean = total as f64 / 100.0;
    assert!(
        (mean - p * m).abs() <= 3.0 * sd / 10.0,
        "mean {mean} vs {}",
        p * m
    );
}

#[test]
fn gaussian_part_has_requested_spread() {
    let b = vec![1.0; 20_000];
    let model = NoiseModel {
        gaussian_sigma: 0.25,
        impulse_fraction: 0.0,
        impulse_scale: 1.0,
    };
    let (noisy, _) = model.apply(&b, 3).unwrap();
    let mean = noisy.iter().sum::<f64>() / b.len() as f64;
    let var = noisy.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b.len() - 1) as f64;
    assert!((mean - 1.0).abs() < 0.01);
    assert!((var.sqrt() - 0.25).abs() < 0.01);
}

fn spec(w1: f64, method: Method) -> CtModelSpec {
    CtModelSpec {
        w1,
        w2: 1.0 - w1,
        lambda: 0.6,
        tv: TvKind::Atv,
        constraint: Constraint::Nonneg,
        method,
    }
}

#[test]
fn data_terms_vanish_at_truth() {
    let t = paralleltomo(16, parse_angles("0:20:179").unwrap(), None).unwrap();
    for method in [Method::MethodI, Method::MethodII] {
        let p = build_ct_problem(&t, &spec(1.0, method)).unwrap();
        for term in &p.terms()[..2] {
            assert_eq!(term.f.value(&term.k.apply(&t.x_true).unwrap()), 0.0);
        }
    }
}

#[test]
fn objective_special_cases() {
    let t = paralleltomo(12, parse_angles("0:30:179").unwrap(), None).unwrap();
    let d = Grad2D::new(12).unwrap();
    let x: Vec<f64> = (0..144).map(|i| ((i * 37) % 11) as f64 / 10.0).collect();
    let r: Vec<f64> =
        t.a.apply(&x)
            .unwrap()
            .iter()
            .zip(&t.b)
            .map(|(u, v)| u - v)
            .collect();
    let tv = 0.6 * norm1(&d.apply(&x).unwrap());
    let l2 = 0.5 * r.iter().map(|v| v * v).sum::<f64>();
    let l1 = norm1(&r);
    for method in [Method::MethodI, Method::MethodII] {
        let f = build_ct_problem(&t, &spec(1.0, method))
            .unwrap()
            .objective(&x)
            .unwrap();
        assert!((f - (l2 + tv)).abs() <= 1e-10 * f);
        let f = build_ct_problem(&t, &spec(0.0, method))
            .unwrap()
            .objective(&x)
            .unwrap();
        assert!((f - (l1 + tv)).abs() <= 1e-10 * f);
    }
    let mut neg = x.clone();
    neg[5] = -0.1;
    assert_eq!(
        build_ct_problem(&t, &spec(0.5, Method::MethodII))
            .unwrap()
            .objective(&neg)
            .unwrap(),
        f64::INFINITY
    );
}

#[test]
fn isotropic_tv_objective() {
    let t = paralleltomo(6, vec![0.0, 90.0], None).unwrap();
    let mut s = spec(1.0, Method::MethodII);
    s.tv = TvKind::Itv;
    let p = build_ct_problem(&t, &s).unwrap();
    let dx = Grad2D::new(6).unwrap().apply(&t.x_true).unwrap();
    let itv: f64 = (0..36).map(|i| dx[i].hypot(dx[36 + i])).sum();
    assert!((p.objective(&t.x_true).unwrap() - 0.6 * itv).abs() < 1e-12);
}

#[test]
fn phantom_matches_problem_truth() {
    let t = paralleltomo(20, vec![0.0], None).unwrap();
    assert_eq!(t.x_true, shepp_logan(20));
    assert_eq!(t.b, t.a.apply(&t.x_true).unwrap());
}

//! Modified Shepp-Logan head phantom.

/// An ellipse on the unit square `[-1, 1]^2` adding `intensity` inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub intensity: f64,
    pub semi_x: f64,
    pub semi_y: f64,
    pub center_x: f64,
    pub center_y: f64,
    /// Counter-clockwise rotation in degrees.
    pub angle_deg: f64,
}

const fn e(intensity: f64, semi_x: f64, semi_y: f64, cx: f64, cy: f64, angle: f64) -> Ellipse {
    Ellipse {
        intensity,
        semi_x,
        semi_y,
        center_x: cx,
        center_y: cy,
        angle_deg: angle,
    }
}

/// Toft's high-contrast ("modified") Shepp-Logan table.
pub const MODIFIED_SHEPP_LOGAN: [Ellipse; 10] = [
    e(1.0, 0.69, 0.92, 0.0, 0.0, 0.0),
    e(-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0),
    e(-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0),
    e(-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0),
    e(0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0),
    e(0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0),
    e(0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0),
    e(0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0),
    e(0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0),
    e(0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0),
];

impl Ellipse {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let (dx, dy) = (x - self.center_x, y - self.center_y);
        let u = c * dx + s * dy;
        let v = -s * dx + c * dy;
        (u / self.semi_x).powi(2) + (v / self.semi_y).powi(2) <= 1.0
    }
}

/// Rasterizes `ellipses` on an `n x n` grid, row-major with row 0 at the top.
///
/// Pixel `(r, c)` takes the summed intensity of every ellipse containing its
/// centre `((c + 1/2 - n/2) / (n/2), (n/2 - r - 1/2) / (n/2))`. No clamping.
pub fn render_ellipses(n: usize, ellipses: &[Ellipse]) -> Vec<f64> {
    let half = n as f64 / 2.0;
    let mut img = vec![0.0; n * n];
    for r in 0..n {
        let y = (half - r as f64 - 0.5) / half;
        for c in 0..n {
            let x = (c as f64 + 0.5 - half) / half;
            img[r * n + c] = ellipses
                .iter()
                .filter(|el| el.contains(x, y))
                .map(|el| el.intensity)
                .sum();
        }
    }
    img
}

/// The modified Shepp-Logan phantom with values clamped to `[0, 1]`.
pub fn shepp_logan(n: usize) -> Vec<f64> {
    let mut img = render_ellipses(n, &MODIFIED_SHEPP_LOGAN);
    for v in &mut img {
        *v = v.clamp(0.0, 1.0);
    }
    img
}

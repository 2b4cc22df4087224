//! Deterministic synthetic test images.
//!
//! The corpus stands in for natural photographs: a colour gradient card, a
//! skin-tone patch with soft shading, and a smooth coloured noise field. All
//! generators are pure functions of their arguments, and the copies under
//! `fixtures/` in this crate are checked against them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::{quantize, RgbImage8};

/// Side length of the shipped fixture images.
pub const FIXTURE_SIZE: usize = 96;

fn build(width: usize, height: usize, mut f: impl FnMut(f64, f64) -> [f64; 3]) -> RgbImage8 {
    let mut bytes = Vec::with_capacity(width * height * 3);
    for row in 0..height {
        for col in 0..width {
            let u = (col as f64 + 0.5) / width as f64;
            let v = (row as f64 + 0.5) / height as f64;
            bytes.extend(f(u, v).map(|c| quantize(c.clamp(0.0, 1.0))));
        }
    }
    RgbImage8::from_interleaved(width, height, &bytes).expect("dimensions match")
}

/// Bilinearly interpolated lattice noise in `[0, 1]`.
struct ValueNoise {
    cells: usize,
    lattice: Vec<f64>,
}

impl ValueNoise {
    fn new(cells: usize, rng: &mut ChaCha8Rng) -> Self {
        let n = cells + 1;
        Self {
            cells,
            lattice: (0..n * n).map(|_| rng.gen::<f64>()).collect(),
        }
    }

    fn at(&self, u: f64, v: f64) -> f64 {
        let n = self.cells + 1;
        let x = u * self.cells as f64;
        let y = v * self.cells as f64;
        let (x0, y0) = ((x.floor() as usize).min(self.cells - 1), (y.floor() as usize).min(self.cells - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        // Smoothstep keeps the field free of visible lattice creases.
        let (sx, sy) = (fx * fx * (3.0 - 2.0 * fx), fy * fy * (3.0 - 2.0 * fy));
        let l = |i: usize, j: usize| self.lattice[j * n + i];
        let top = l(x0, y0) * (1.0 - sx) + l(x0 + 1, y0) * sx;
        let bottom = l(x0, y0 + 1) * (1.0 - sx) + l(x0 + 1, y0 + 1) * sx;
        top * (1.0 - sy) + bottom * sy
    }
}

/// Hue sweep left to right, dark at the top and light at the bottom, with a
/// band of grey steps along the bottom edge.
pub fn gradient_card(width: usize, height: usize) -> RgbImage8 {
    build(width, height, |u, v| {
        if v > 0.85 {
            let step = (u * 8.0).floor() / 7.0;
            let g = 0.1 + 0.8 * step;
            return [g, g, g];
        }
        let t = u * std::f64::consts::TAU;
        let light = 0.15 + 0.7 * (v / 0.85).powf(1.4);
        let sat = 0.55;
        [0.0, 1.0, 2.0].map(|k: f64| {
            let c = 0.5 + 0.5 * (t - k * std::f64::consts::TAU / 3.0).cos();
            light * (1.0 - sat + sat * c)
        })
    })
}

/// A warm skin-tone field with soft radial shading and fine texture.
pub fn skin_patch(width: usize, height: usize) -> RgbImage8 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let coarse = ValueNoise::new(4, &mut rng);
    let fine = ValueNoise::new(24, &mut rng);
    build(width, height, |u, v| {
        let d2 = (u - 0.45).powi(2) + (v - 0.4).powi(2);
        let shade = 0.55 + 0.4 * (-d2 * 4.0).exp() + 0.12 * (coarse.at(u, v) - 0.5);
        let tex = 0.06 * (fine.at(u, v) - 0.5);
        let base = [0.88, 0.64, 0.52];
        base.map(|c| c * shade + tex)
    })
}

/// Smooth coloured noise with independent low-frequency structure per channel.
pub fn noise_image(width: usize, height: usize, seed: u64) -> RgbImage8 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [0, 1, 2].map(|_| (ValueNoise::new(3, &mut rng), ValueNoise::new(12, &mut rng)));
    build(width, height, |u, v| {
        let mut out = [0.0; 3];
        for (c, (lo, hi)) in fields.iter().enumerate() {
            out[c] = 0.75 * lo.at(u, v) + 0.25 * hi.at(u, v);
        }
        out
    })
}

/// The named fixture corpus at [`FIXTURE_SIZE`].
pub fn corpus() -> Vec<(&'static str, RgbImage8)> {
    vec![
        ("gradient_card", gradient_card(FIXTURE_SIZE, FIXTURE_SIZE)),
        ("skin_patch", skin_patch(FIXTURE_SIZE, FIXTURE_SIZE)),
        ("noise", noise_image(FIXTURE_SIZE, FIXTURE_SIZE, 7)),
    ]
}

//! RGB <-> HSI conversion using the arccos / 120-degree-sector formulation.
//!
//! `I = (r + g + b) / 3`, `S = 1 - min(r, g, b) / I`, and hue is the angle
//! `arccos(((r - g) + (r - b)) / (2 sqrt((r - g)^2 + (r - b)(g - b))))`,
//! reflected to `360 - θ` when `b > g`. Hue is stored divided by 360 degrees.
//! Achromatic pixels get `H = 0, S = 0`.

use std::f64::consts::PI;

use crate::image::{HsiImage, PlaneF, RgbImage};

const TWO_PI: f64 = 2.0 * PI;
const THIRD_TURN: f64 = TWO_PI / 3.0;

/// Components further than this outside `[0, 1]` count as clamped. Smaller
/// excursions are rounding noise of the inverse transform and are clamped
/// silently.
const CLAMP_NOISE: f64 = 1e-9;

/// Converts one pixel. Returns `(h, s, i)` with `h` in `[0, 1)`.
pub fn rgb_to_hsi_pixel(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let i = (r + g + b) / 3.0;
    let min = r.min(g).min(b);
    let max = r.max(g).max(b);
    if i <= 0.0 || min == max {
        return (0.0, 0.0, i);
    }
    let s = (1.0 - min / i).clamp(0.0, 1.0);
    let num = (r - g) + (r - b);
    let den = 2.0 * ((r - g) * (r - g) + (r - b) * (g - b)).sqrt();
    if s == 0.0 || den == 0.0 {
        return (0.0, 0.0, i);
    }
    let theta = (num / den).clamp(-1.0, 1.0).acos();
    let angle = if b <= g { theta } else { TWO_PI - theta };
    let mut h = angle / TWO_PI;
    if h >= 1.0 {
        h = 0.0;
    }
    (h, s, i)
}

/// Inverse of [`rgb_to_hsi_pixel`], unclamped.
pub fn hsi_to_rgb_pixel_raw(h: f64, s: f64, i: f64) -> (f64, f64, f64) {
    if s == 0.0 {
        return (i, i, i);
    }
    let angle = h * TWO_PI;
    // Returns (dominant, other, weakest) for an angle within one sector.
    let sector = |a: f64| {
        let weakest = i * (1.0 - s);
        let dominant = i * (1.0 + s * a.cos() / (PI / 3.0 - a).cos());
        let other = 3.0 * i - (dominant + weakest);
        (dominant, other, weakest)
    };
    if angle < THIRD_TURN {
        let (r, g, b) = sector(angle);
        (r, g, b)
    } else if angle < 2.0 * THIRD_TURN {
        let (g, b, r) = sector(angle - THIRD_TURN);
        (r, g, b)
    } else {
        let (b, r, g) = sector(angle - 2.0 * THIRD_TURN);
        (r, g, b)
    }
}

/// Inverse conversion of one pixel with each component clamped to `[0, 1]`.
/// The flag reports whether clamping moved a component by more than rounding
/// noise.
pub fn hsi_to_rgb_pixel(h: f64, s: f64, i: f64) -> ((f64, f64, f64), bool) {
    let (r, g, b) = hsi_to_rgb_pixel_raw(h, s, i);
    let out_of_gamut = [r, g, b]
        .iter()
        .any(|&c| c < -CLAMP_NOISE || c > 1.0 + CLAMP_NOISE);
    (
        (r.clamp(0.0, 1.0), g.clamp(0.0, 1.0), b.clamp(0.0, 1.0)),
        out_of_gamut,
    )
}

pub fn rgb_to_hsi(img: &RgbImage) -> HsiImage {
    let n = img.r().len();
    let (mut h, mut s, mut i) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for idx in 0..n {
        let (r, g, b) = img.pixel(idx);
        let (ph, ps, pi) = rgb_to_hsi_pixel(r, g, b);
        h.push(ph);
        s.push(ps);
        i.push(pi.clamp(0.0, 1.0));
    }
    let (w, ht) = img.dims();
    HsiImage::from_parts(
        PlaneF::from_parts(w, ht, h),
        PlaneF::from_parts(w, ht, s),
        PlaneF::from_parts(w, ht, i),
    )
}

/// Inverse conversion; returns the image and the number of pixels that had at
/// least one out-of-gamut component.
pub fn hsi_to_rgb_counted(img: &HsiImage) -> (RgbImage, usize) {
    let n = img.i().len();
    let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let mut clamped = 0;
    for idx in 0..n {
        let ((pr, pg, pb), hit) =
            hsi_to_rgb_pixel(img.h().data()[idx], img.s().data()[idx], img.i().data()[idx]);
        clamped += usize::from(hit);
        r.push(pr);
        g.push(pg);
        b.push(pb);
    }
    let (w, h) = img.dims();
    let rgb = RgbImage::new(
        PlaneF::from_parts(w, h, r),
        PlaneF::from_parts(w, h, g),
        PlaneF::from_parts(w, h, b),
    )
    .expect("planes share dimensions");
    (rgb, clamped)
}

pub fn hsi_to_rgb(img: &HsiImage) -> RgbImage {
    hsi_to_rgb_counted(img).0
}

/// Mean circular hue distance, in turns, between two images of the same size.
/// Only pixels where both images have saturation above `min_saturation`
/// contribute; returns 0 when none do.
pub fn mean_hue_shift(a: &RgbImage, b: &RgbImage, min_saturation: f64) -> f64 {
    assert_eq!(a.dims(), b.dims(), "images must share dimensions");
    let (mut total, mut n) = (0.0, 0usize);
    for idx in 0..a.r().len() {
        let (ar, ag, ab) = a.pixel(idx);
        let (br, bg, bb) = b.pixel(idx);
        let (ha, sa, _) = rgb_to_hsi_pixel(ar, ag, ab);
        let (hb, sb, _) = rgb_to_hsi_pixel(br, bg, bb);
        if sa > min_saturation && sb > min_saturation {
            let d = (ha - hb).abs();
            total += d.min(1.0 - d);
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        total / n as f64
    }
}

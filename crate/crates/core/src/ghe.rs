//! Global histogram equalization, the comparison baseline.
//!
//! Levels are remapped through the cumulative histogram anchored at its
//! smallest non-zero value, so a plane whose histogram is already uniform maps
//! to itself and the highest occupied level always lands on 255.

use crate::colorspace::{hsi_to_rgb_counted, rgb_to_hsi};
use crate::error::Result;
use crate::image::{denormalize_plane, normalize_plane, HsiImage, PlaneU8, RgbImage, RgbImage8};

/// Level counts of an 8-bit plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram256 {
    pub counts: [u64; 256],
    pub total: u64,
}

impl Histogram256 {
    /// Running sums: `cumulative()[v]` pixels have a level `<= v`.
    pub fn cumulative(&self) -> [u64; 256] {
        let mut acc = 0;
        self.counts.map(|c| {
            acc += c;
            acc
        })
    }

    /// The `cdf_min`-anchored equalization table. A single occupied level
    /// yields the identity table.
    pub fn equalization_lut(&self) -> [u8; 256] {
        let cum = self.cumulative();
        let cdf_min = cum.iter().copied().find(|&c| c > 0).unwrap_or(0);
        let mut lut = [0u8; 256];
        if cdf_min == self.total {
            for (v, slot) in lut.iter_mut().enumerate() {
                *slot = v as u8;
            }
            return lut;
        }
        let den = self.total - cdf_min;
        for (slot, &c) in lut.iter_mut().zip(&cum) {
            // round(255 (c - cdf_min) / den), half away from zero, in integers.
            let num = 255 * c.saturating_sub(cdf_min);
            *slot = ((2 * num + den) / (2 * den)) as u8;
        }
        lut
    }
}

pub fn histogram(p: &PlaneU8) -> Histogram256 {
    let mut counts = [0u64; 256];
    for &v in p.data() {
        counts[usize::from(v)] += 1;
    }
    Histogram256 {
        counts,
        total: p.len() as u64,
    }
}

pub fn ghe_plane(p: &PlaneU8) -> PlaneU8 {
    p.map_levels(&histogram(p).equalization_lut())
}

/// Equalizes each 8-bit channel on its own.
pub fn ghe_rgb(img: &RgbImage8) -> RgbImage8 {
    RgbImage8::new(ghe_plane(img.r()), ghe_plane(img.g()), ghe_plane(img.b()))
        .expect("planes share dimensions")
}

/// Output of [`ghe_hsi`].
#[derive(Debug, Clone)]
pub struct GheHsiOutcome {
    /// HSI planes right before the inverse conversion.
    pub hsi: HsiImage,
    pub image: RgbImage,
    pub clamped_pixels: usize,
}

/// Quantizes the intensity plane to 8 bits, equalizes it, and converts back
/// with hue and saturation untouched. A constant quantized intensity plane is
/// left as it was, unquantized.
pub fn ghe_hsi(img: &RgbImage) -> Result<GheHsiOutcome> {
    let hsi = rgb_to_hsi(img);
    let levels = denormalize_plane(hsi.i());
    let hist = histogram(&levels);
    let hsi = if hist.counts.iter().filter(|&&c| c > 0).count() > 1 {
        let i = normalize_plane(&levels.map_levels(&hist.equalization_lut()));
        hsi.with_intensity(i)?
    } else {
        hsi
    };
    let (image, clamped_pixels) = hsi_to_rgb_counted(&hsi);
    Ok(GheHsiOutcome {
        hsi,
        image,
        clamped_pixels,
    })
}

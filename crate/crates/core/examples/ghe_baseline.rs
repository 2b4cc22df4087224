//! Histogram equalization per RGB channel versus on intensity only.
//!
//! Equalizing R, G and B independently gives each channel its own level map,
//! which shifts hues. Equalizing only the intensity plane keeps them.
//!
//!     cargo run --example ghe_baseline

use iterpow::{fixtures, ghe_hsi, ghe_rgb, histogram, mean_hue_shift, degrade, DegradeParams};

fn occupied(p: &iterpow::PlaneU8) -> usize {
    histogram(p).counts.iter().filter(|&&c| c > 0).count()
}

fn main() -> iterpow::Result<()> {
    let low = degrade(&fixtures::skin_patch(96, 96), &DegradeParams::default())?;
    let unit = low.to_unit();

    let rgb = ghe_rgb(&low);
    let hsi = ghe_hsi(&unit)?;

    for (name, before, after) in [
        ("R", low.r(), rgb.r()),
        ("G", low.g(), rgb.g()),
        ("B", low.b(), rgb.b()),
    ] {
        let range = |p: &iterpow::PlaneU8| {
            (p.data().iter().min().copied().unwrap_or(0), p.data().iter().max().copied().unwrap_or(0))
        };
        println!(
            "{name}: range {:?} -> {:?}, {} occupied levels",
            range(before),
            range(after),
            occupied(after)
        );
    }
    println!("mean hue shift, GHE per channel: {:.4} turns", mean_hue_shift(&unit, &rgb.to_unit(), 0.02));
    println!(
        "mean hue shift, GHE on intensity: {:.4} turns ({} pixels clamped)",
        mean_hue_shift(&unit, &hsi.image.to_u8().to_unit(), 0.02),
        hsi.clamped_pixels
    );
    Ok(())
}

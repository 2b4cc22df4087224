//! Equalize only the intensity channel, leaving hue and saturation alone.
//!
//!     cargo run --example equalize_hsi [input.png|ppm] [output.png|ppm]

use iterpow::{equalize_hsi, fixtures, io, mean_hue_shift, degrade, DegradeParams, EqualizeConfig};

fn main() -> iterpow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let input = match args.first() {
        Some(path) => io::load_image(path)?,
        None => degrade(&fixtures::noise_image(96, 96, 7), &DegradeParams::default())?,
    };
    let unit = input.to_unit();
    let out = equalize_hsi(&unit, &EqualizeConfig::default())?;

    let t = &out.trace;
    println!(
        "I: {:?} after {} steps, mean {:.4} -> {:.6}",
        t.status,
        t.transitions(),
        t.initial_mean(),
        t.final_mean()
    );
    for r in &t.records {
        match r.theta {
            Some(th) => println!("  k={:<3} mean={:.6} theta={:.6}", r.iteration, r.mean, th),
            None => println!("  k={:<3} mean={:.6}", r.iteration, r.mean),
        }
    }
    println!("out-of-gamut pixels clamped: {}", out.clamped_pixels);
    println!(
        "mean hue shift: {:.2e} turns",
        mean_hue_shift(&unit, &out.image, 0.05)
    );
    if let Some(path) = args.get(1) {
        io::save_image(&out.image.to_u8(), path)?;
        println!("wrote {path}");
    }
    Ok(())
}

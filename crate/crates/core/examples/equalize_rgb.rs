//! Equalize a low-contrast image channel by channel.
//!
//!     cargo run --example equalize_rgb [input.png|ppm] [output.png|ppm]
//!
//! Without arguments the skin-tone fixture is degraded and used as input.

use iterpow::{equalize_rgb, fixtures, io, degrade, DegradeParams, EqualizeConfig, PsnrReport};

fn main() -> iterpow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (input, reference) = match args.first() {
        Some(path) => (io::load_image(path)?, None),
        None => {
            let original = fixtures::skin_patch(96, 96);
            (degrade(&original, &DegradeParams::default())?, Some(original))
        }
    };

    let (out, traces) = equalize_rgb(&input.to_unit(), &EqualizeConfig::default())?;
    for t in &traces {
        println!(
            "{}: {:?} after {} steps, mean {:.4} -> {:.6}",
            t.channel,
            t.status,
            t.transitions(),
            t.initial_mean(),
            t.final_mean()
        );
    }

    let out = out.to_u8();
    if let Some(original) = reference {
        let before = PsnrReport::new("degraded", "-", &original, &input)?;
        let after = PsnrReport::new("iterpow", "rgb", &original, &out)?;
        println!("PSNR vs original: {} dB -> {} dB", before.psnr_avg, after.psnr_avg);
    }
    if let Some(path) = args.get(1) {
        io::save_image(&out, path)?;
        println!("wrote {path}");
    }
    Ok(())
}

//! Regenerate the fixture images under `fixtures/`.
//!
//!     cargo run --example write_fixtures

use std::path::Path;

use iterpow::{degrade, fixtures, io, DegradeParams};

fn main() -> iterpow::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for (name, img) in fixtures::corpus() {
        io::save_image(&img, dir.join(format!("{name}.ppm")))?;
        let low = degrade(&img, &DegradeParams::default())?;
        io::save_image(&low, dir.join(format!("{name}_low.ppm")))?;
        println!("{name}: {}x{}", img.width(), img.height());
    }
    Ok(())
}

//! Four-way PSNR comparison on the built-in fixture corpus.
//!
//! Each fixture is degraded with the default low-contrast transform, then
//! equalized by histogram equalization and by the iterative power method, in
//! both the RGB and the HSI pipeline. Every output is scored against the
//! pristine fixture.
//!
//!     cargo run --example psnr_table

use iterpow::commands::four_way_candidates;
use iterpow::{compare_report, degrade, fixtures, DegradeParams, EqualizeConfig};

fn main() -> iterpow::Result<()> {
    for (name, original) in fixtures::corpus() {
        let low = degrade(&original, &DegradeParams::default())?;
        let candidates = four_way_candidates(&low, &EqualizeConfig::default())?;
        let cmp = compare_report(&original, &candidates)?;

        println!("{name}");
        print!("{:>10}", "PSNR (dB)");
        for r in &cmp.reports {
            print!("{:>14}", r.label());
        }
        println!();
        for (row, idx) in [("R", 0), ("G", 1), ("B", 2)] {
            print!("{row:>10}");
            for r in &cmp.reports {
                print!("{:>14}", r.channels()[idx].to_string());
            }
            println!();
        }
        print!("{:>10}", "average");
        for r in &cmp.reports {
            print!("{:>14}", r.psnr_avg.to_string());
        }
        println!("\n");
    }
    Ok(())
}

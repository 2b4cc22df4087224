//! Per-iteration mean, power factor and PSNR as CSV on stdout.
//!
//!     cargo run --example iteration_trace > trace.csv

use iterpow::commands::{run_pipeline, Method, Pipeline};
use iterpow::{fixtures, degrade, DegradeParams, EqualizeConfig};

fn main() -> iterpow::Result<()> {
    let original = fixtures::noise_image(96, 96, 7);
    // A darkening gamma gives every channel several steps to climb back.
    let low = degrade(&original, &DegradeParams { gain: 0.6, bias: 0.05, gamma: 2.2 })?;
    let run = run_pipeline(&low, Pipeline::Rgb, Method::Iterpow, &EqualizeConfig::default(), Some(&original))?;
    let report = run.trace_report.expect("iterpow runs produce a trace");
    report.write_csv(std::io::stdout().lock())?;
    Ok(())
}

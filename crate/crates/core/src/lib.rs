//! Contrast equalization of colour images by iterated n-th root / n-th power maps.
//!
//! Every channel (or the intensity channel alone, in the HSI pipeline) is
//! normalized to the unit interval and repeatedly raised to the power
//! `ln 0.5 / ln μ`, where `μ` is the current channel mean, until the mean
//! settles at 0.5. A global histogram-equalization baseline, PSNR metrics and
//! a synthetic low-contrast degrader are provided so both methods can be
//! compared on the same inputs.
//!
//! ```
//! use iterpow::{equalize_rgb, EqualizeConfig, PlaneF, RgbImage};
//!
//! let plane = |v: f64| PlaneF::filled(4, 4, v).unwrap();
//! let img = RgbImage::new(plane(0.2), plane(0.5), plane(0.8)).unwrap();
//! let (out, traces) = equalize_rgb(&img, &EqualizeConfig::default()).unwrap();
//! assert!((out.r().mean() - 0.5).abs() < 1e-12);
//! assert_eq!(traces[1].transitions(), 0);
//! ```

pub mod colorspace;
pub mod commands;
pub mod degrade;
pub mod equalize;
mod error;
pub mod fixtures;
pub mod ghe;
pub mod image;
pub mod io;
pub mod metrics;

pub use colorspace::{hsi_to_rgb, hsi_to_rgb_counted, mean_hue_shift, rgb_to_hsi};
pub use degrade::{degrade, DegradeParams};
pub use equalize::{
    equalize_hsi, equalize_intensity, equalize_plane, equalize_plane_observed, equalize_rgb,
    power_step, theta, Channel, EqualizeConfig, HsiOutcome, IterationRecord, IterationTrace,
    Status,
};
pub use error::{Error, Result};
pub use ghe::{ghe_hsi, ghe_plane, ghe_rgb, histogram, GheHsiOutcome, Histogram256};
pub use image::{denormalize_plane, normalize_plane, plane_mean, quantize, HsiImage, PlaneF, PlaneU8, RgbImage, RgbImage8};
pub use metrics::{compare_report, mse, psnr, Candidate, Comparison, Psnr, PsnrDelta, PsnrReport, TraceReport, TraceRow};

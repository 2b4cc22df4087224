//! Iterative n-th root / n-th power equalization.
//!
//! A plane with mean `μ` is raised pixel-wise to `Θ = ln 0.5 / ln μ`. For
//! `μ < 0.5` this is a root (`Θ < 1`) and lifts the mean; for `μ > 0.5` it is a
//! power and lowers it. A constant plane lands on 0.5 in one step; any other
//! plane approaches 0.5 from one side, so the step is repeated until the mean is
//! within tolerance, stops moving, or the iteration cap is hit.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colorspace::{hsi_to_rgb_counted, rgb_to_hsi};
use crate::error::{Error, Result};
use crate::image::{HsiImage, PlaneF, RgbImage};

/// Stopping rules for [`equalize_plane`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualizeConfig {
    /// Converged once `|μ - 0.5| <= tol`.
    pub tol: f64,
    /// Hard cap on the number of power steps.
    pub max_iters: usize,
    /// Stalled once a step moves the mean by less than this.
    pub stall_eps: f64,
    /// Means are clamped into `[mu_clamp, 1 - mu_clamp]` before computing Θ.
    pub mu_clamp: f64,
}

impl Default for EqualizeConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iters: 100,
            stall_eps: 1e-9,
            mu_clamp: 1e-6,
        }
    }
}

impl EqualizeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.tol > 0.0 && self.tol < 0.5) {
            return bad(format!("tol must be in (0, 0.5), got {}", self.tol));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1".into());
        }
        if !(self.stall_eps > 0.0 && self.stall_eps < self.tol) {
            return bad(format!(
                "stall_eps must be in (0, tol), got {}",
                self.stall_eps
            ));
        }
        if !(self.mu_clamp > 0.0 && self.mu_clamp < 0.5) {
            return bad(format!("mu_clamp must be in (0, 0.5), got {}", self.mu_clamp));
        }
        Ok(())
    }
}

/// Channel label carried by traces and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    R,
    G,
    B,
    I,
}

impl Channel {
    pub const RGB: [Channel; 3] = [Channel::R, Channel::G, Channel::B];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::R => "R",
            Channel::G => "G",
            Channel::B => "B",
            Channel::I => "I",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(Channel::R),
            "G" => Ok(Channel::G),
            "B" => Ok(Channel::B),
            "I" => Ok(Channel::I),
            other => Err(Error::Malformed(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    Stalled,
    MaxIters,
}

/// State before transition `iteration`. `theta` is the power applied to reach
/// the next record, and is `None` on the final record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub mean: f64,
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub channel: Channel,
    pub records: Vec<IterationRecord>,
    pub status: Status,
}

impl IterationTrace {
    /// Number of power steps applied.
    pub fn transitions(&self) -> usize {
        self.records.len() - 1
    }

    pub fn initial_mean(&self) -> f64 {
        self.records[0].mean
    }

    pub fn final_mean(&self) -> f64 {
        self.records[self.records.len() - 1].mean
    }

    pub fn means(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.mean)
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().filter_map(|r| r.theta)
    }
}

/// `ln 0.5 / ln mu`. Fails unless `mu` lies strictly inside `(0, 1)`.
pub fn theta(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::DegenerateMean(mu));
    }
    Ok(0.5f64.ln() / mu.ln())
}

/// Raises every sample to `th`. 0 and 1 are fixed points.
pub fn power_step(p: &PlaneF, th: f64) -> PlaneF {
    debug_assert!(th > 0.0);
    p.map(|x| x.powf(th))
}

pub fn equalize_plane(p: &PlaneF, cfg: &EqualizeConfig) -> Result<(PlaneF, IterationTrace)> {
    equalize_plane_observed(p, Channel::I, cfg, |_, _| {})
}

/// [`equalize_plane`] with a channel label and a callback that sees every
/// iterate, including the input (`k = 0`) and the returned plane.
pub fn equalize_plane_observed(
    p: &PlaneF,
    channel: Channel,
    cfg: &EqualizeConfig,
    mut observe: impl FnMut(usize, &PlaneF),
) -> Result<(PlaneF, IterationTrace)> {
    cfg.validate()?;
    let mut plane = p.clone();
    let mut mean = plane.mean();
    let mut records = Vec::new();
    let mut k = 0;
    observe(k, &plane);

    let converged = |m: f64| (m - 0.5).abs() <= cfg.tol;
    let status = loop {
        if converged(mean) {
            break Status::Converged;
        }
        if k == cfg.max_iters {
            break Status::MaxIters;
        }
        let th = theta(mean.clamp(cfg.mu_clamp, 1.0 - cfg.mu_clamp))?;
        records.push(IterationRecord {
            iteration: k,
            mean,
            theta: Some(th),
        });
        plane = power_step(&plane, th);
        k += 1;
        observe(k, &plane);
        let next = plane.mean();
        let moved = (next - mean).abs();
        mean = next;
        if !converged(mean) && moved < cfg.stall_eps {
            break Status::Stalled;
        }
    };
    records.push(IterationRecord {
        iteration: k,
        mean,
        theta: None,
    });
    Ok((
        plane,
        IterationTrace {
            channel,
            records,
            status,
        },
    ))
}

/// Equalizes R, G and B independently.
pub fn equalize_rgb(img: &RgbImage, cfg: &EqualizeConfig) -> Result<(RgbImage, [IterationTrace; 3])> {
    equalize_rgb_observed(img, cfg, |_, _, _| {})
}

/// [`equalize_rgb`] with a per-iterate callback `(channel, k, plane)`.
pub fn equalize_rgb_observed(
    img: &RgbImage,
    cfg: &EqualizeConfig,
    mut observe: impl FnMut(Channel, usize, &PlaneF),
) -> Result<(RgbImage, [IterationTrace; 3])> {
    let mut run = |p: &PlaneF, c: Channel| equalize_plane_observed(p, c, cfg, |k, q| observe(c, k, q));
    let (r, tr) = run(img.r(), Channel::R)?;
    let (g, tg) = run(img.g(), Channel::G)?;
    let (b, tb) = run(img.b(), Channel::B)?;
    Ok((RgbImage::new(r, g, b)?, [tr, tg, tb]))
}

/// Equalizes only the intensity plane. Hue and saturation are cloned through.
pub fn equalize_intensity(
    hsi: &HsiImage,
    cfg: &EqualizeConfig,
    observe: impl FnMut(usize, &PlaneF),
) -> Result<(HsiImage, IterationTrace)> {
    let (i, trace) = equalize_plane_observed(hsi.i(), Channel::I, cfg, observe)?;
    Ok((hsi.with_intensity(i)?, trace))
}

/// Result of an HSI-pipeline run.
#[derive(Debug, Clone)]
pub struct HsiOutcome {
    /// HSI planes right before the inverse conversion.
    pub hsi: HsiImage,
    pub image: RgbImage,
    pub trace: IterationTrace,
    /// Pixels with at least one component clamped back into `[0, 1]`.
    pub clamped_pixels: usize,
}

pub fn equalize_hsi(img: &RgbImage, cfg: &EqualizeConfig) -> Result<HsiOutcome> {
    equalize_hsi_observed(img, cfg, |_, _| {})
}

pub fn equalize_hsi_observed(
    img: &RgbImage,
    cfg: &EqualizeConfig,
    observe: impl FnMut(usize, &PlaneF),
) -> Result<HsiOutcome> {
    let (hsi, trace) = equalize_intensity(&rgb_to_hsi(img), cfg, observe)?;
    let (image, clamped_pixels) = hsi_to_rgb_counted(&hsi);
    Ok(HsiOutcome {
        hsi,
        image,
        trace,
        clamped_pixels,
    })
}

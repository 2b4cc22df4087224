//! The operations behind the `iterpow` binary: equalize, compare and degrade.
//!
//! Each command takes a plain config struct, does its file I/O, and returns a
//! serializable summary. The binary only parses flags and prints the summary as
//! JSON.

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colorspace::rgb_to_hsi;
use crate::degrade::{degrade, DegradeParams};
use crate::equalize::{equalize_hsi_observed, equalize_rgb_observed, Channel, EqualizeConfig, IterationTrace, Status};
use crate::error::{Error, Result};
use crate::ghe::{ghe_hsi, ghe_rgb};
use crate::image::{denormalize_plane, RgbImage8};
use crate::io::{load_image, save_image};
use crate::metrics::{compare_report, psnr, Candidate, Comparison, Psnr, PsnrReport, TraceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Rgb,
    Hsi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Iterpow,
    Ghe,
}

impl Pipeline {
    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Rgb => "rgb",
            Pipeline::Hsi => "hsi",
        }
    }
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Iterpow => "iterpow",
            Method::Ghe => "ghe",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rgb" => Ok(Pipeline::Rgb),
            "hsi" => Ok(Pipeline::Hsi),
            _ => Err(Error::InvalidConfig(format!("unknown pipeline {s:?}, expected rgb or hsi"))),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iterpow" => Ok(Method::Iterpow),
            "ghe" => Ok(Method::Ghe),
            _ => Err(Error::InvalidConfig(format!("unknown method {s:?}, expected iterpow or ghe"))),
        }
    }
}

/// Command-line overrides of [`EqualizeConfig`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EqualizeOverrides {
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

impl EqualizeOverrides {
    pub fn is_empty(&self) -> bool {
        self.tol.is_none() && self.max_iters.is_none()
    }

    pub fn apply(&self, mut cfg: EqualizeConfig) -> EqualizeConfig {
        if let Some(tol) = self.tol {
            cfg.tol = tol;
        }
        if let Some(max_iters) = self.max_iters {
            cfg.max_iters = max_iters;
        }
        cfg
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pipeline: Pipeline,
    pub method: Method,
    pub overrides: EqualizeOverrides,
    pub input: PathBuf,
    pub output: PathBuf,
    pub reference: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// In-memory result of one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub image: RgbImage8,
    /// Empty for GHE.
    pub traces: Vec<IterationTrace>,
    /// HSI pipelines only.
    pub clamped_pixels: Option<usize>,
    /// Per-iteration means and power factors, with PSNR against the reference
    /// when one was given. Iterpow only.
    pub trace_report: Option<TraceReport>,
}

/// Runs one method/pipeline pair on an 8-bit image.
///
/// With a reference, trace rows carry the PSNR of each quantized iterate: per
/// colour channel for the RGB pipeline, and of the intensity plane against the
/// reference's intensity plane for the HSI pipeline.
pub fn run_pipeline(
    img: &RgbImage8,
    pipeline: Pipeline,
    method: Method,
    cfg: &EqualizeConfig,
    reference: Option<&RgbImage8>,
) -> Result<PipelineRun> {
    if let Some(r) = reference {
        if r.dims() != img.dims() {
            return Err(Error::DimensionMismatch(format!(
                "reference is {}x{}, input is {}x{}",
                r.width(),
                r.height(),
                img.width(),
                img.height()
            )));
        }
    }
    let unit = img.to_unit();
    let mut psnrs: Vec<(Channel, usize, Psnr)> = Vec::new();
    match (method, pipeline) {
        (Method::Ghe, Pipeline::Rgb) => Ok(PipelineRun {
            image: ghe_rgb(img),
            traces: Vec::new(),
            clamped_pixels: None,
            trace_report: None,
        }),
        (Method::Ghe, Pipeline::Hsi) => {
            let out = ghe_hsi(&unit)?;
            Ok(PipelineRun {
                image: out.image.to_u8(),
                traces: Vec::new(),
                clamped_pixels: Some(out.clamped_pixels),
                trace_report: None,
            })
        }
        (Method::Iterpow, Pipeline::Rgb) => {
            let (out, traces) = equalize_rgb_observed(&unit, cfg, |c, k, plane| {
                if let Some(r) = reference {
                    let target = r.planes()[c as usize];
                    let p = psnr(target, &denormalize_plane(plane)).expect("dimensions checked");
                    psnrs.push((c, k, p));
                }
            })?;
            let report = join(&traces, &psnrs);
            Ok(PipelineRun {
                image: out.to_u8(),
                traces: traces.to_vec(),
                clamped_pixels: None,
                trace_report: Some(report),
            })
        }
        (Method::Iterpow, Pipeline::Hsi) => {
            let target = reference.map(|r| denormalize_plane(rgb_to_hsi(&r.to_unit()).i()));
            let out = equalize_hsi_observed(&unit, cfg, |k, plane| {
                if let Some(t) = &target {
                    let p = psnr(t, &denormalize_plane(plane)).expect("dimensions checked");
                    psnrs.push((Channel::I, k, p));
                }
            })?;
            let report = join(std::slice::from_ref(&out.trace), &psnrs);
            Ok(PipelineRun {
                image: out.image.to_u8(),
                traces: vec![out.trace],
                clamped_pixels: Some(out.clamped_pixels),
                trace_report: Some(report),
            })
        }
    }
}

fn join(traces: &[IterationTrace], psnrs: &[(Channel, usize, Psnr)]) -> TraceReport {
    TraceReport::from_traces(traces, |c, k| {
        psnrs
            .iter()
            .find(|(pc, pk, _)| *pc == c && *pk == k)
            .map(|&(_, _, p)| p)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSummary {
    pub channel: Channel,
    pub status: Status,
    pub iterations: usize,
    pub initial_mean: f64,
    pub final_mean: f64,
}

impl From<&IterationTrace> for ChannelSummary {
    fn from(t: &IterationTrace) -> Self {
        Self {
            channel: t.channel,
            status: t.status,
            iterations: t.transitions(),
            initial_mean: t.initial_mean(),
            final_mean: t.final_mean(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualizeSummary {
    pub pipeline: Pipeline,
    pub method: Method,
    pub input: PathBuf,
    pub output: PathBuf,
    pub width: usize,
    pub height: usize,
    pub channels: Vec<ChannelSummary>,
    pub clamped_pixels: Option<usize>,
    pub psnr_vs_input: PsnrReport,
    pub psnr_vs_reference: Option<PsnrReport>,
    pub trace: Option<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn cmd_equalize(cfg: &RunConfig) -> Result<EqualizeSummary> {
    let mut warnings = Vec::new();
    if cfg.method == Method::Ghe && !cfg.overrides.is_empty() {
        warnings.push("--tol/--max-iters have no effect with --method ghe".to_owned());
    }
    if cfg.method == Method::Ghe && cfg.trace.is_some() {
        warnings.push("--trace has no effect with --method ghe; no trace written".to_owned());
    }
    let eq_cfg = cfg.overrides.apply(EqualizeConfig::default());
    eq_cfg.validate()?;

    let input = load_image(&cfg.input)?;
    let reference = cfg.reference.as_ref().map(load_image).transpose()?;
    let run = run_pipeline(&input, cfg.pipeline, cfg.method, &eq_cfg, reference.as_ref())?;
    save_image(&run.image, &cfg.output)?;

    let mut trace_written = None;
    if let (Some(path), Some(report)) = (&cfg.trace, &run.trace_report) {
        let file = File::create(path).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
        report.write_csv(BufWriter::new(file))?;
        trace_written = Some(path.clone());
    }

    let (method, pipeline) = (cfg.method.as_str(), cfg.pipeline.as_str());
    Ok(EqualizeSummary {
        pipeline: cfg.pipeline,
        method: cfg.method,
        input: cfg.input.clone(),
        output: cfg.output.clone(),
        width: input.width(),
        height: input.height(),
        channels: run.traces.iter().map(ChannelSummary::from).collect(),
        clamped_pixels: run.clamped_pixels,
        psnr_vs_input: PsnrReport::new(method, pipeline, &input, &run.image)?,
        psnr_vs_reference: reference
            .as_ref()
            .map(|r| PsnrReport::new(method, pipeline, r, &run.image))
            .transpose()?,
        trace: trace_written,
        warnings,
    })
}

#[derive(Debug, Clone)]
pub struct CompareConfig {
    /// The pristine image every candidate is scored against.
    pub reference: PathBuf,
    /// When set, the four method/pipeline pairs are run on this image and
    /// scored first.
    pub input: Option<PathBuf>,
    /// Extra images as `[LABEL=]PATH`, where `LABEL` is `method-pipeline`.
    pub candidates: Vec<String>,
    pub overrides: EqualizeOverrides,
}

/// The four method/pipeline pairs in report order.
pub const FOUR_WAY: [(Method, Pipeline); 4] = [
    (Method::Ghe, Pipeline::Rgb),
    (Method::Ghe, Pipeline::Hsi),
    (Method::Iterpow, Pipeline::Rgb),
    (Method::Iterpow, Pipeline::Hsi),
];

/// Runs [`FOUR_WAY`] on `input` and returns the outputs as candidates.
pub fn four_way_candidates(input: &RgbImage8, cfg: &EqualizeConfig) -> Result<Vec<Candidate>> {
    FOUR_WAY
        .iter()
        .map(|&(m, p)| {
            let run = run_pipeline(input, p, m, cfg, None)?;
            Ok(Candidate::new(m.as_str(), p.as_str(), run.image))
        })
        .collect()
}

fn parse_candidate(spec: &str) -> Result<Candidate> {
    let (label, path) = match spec.split_once('=') {
        Some((label, path)) => (label.to_owned(), path),
        None => {
            let stem = std::path::Path::new(spec)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(spec);
            (stem.to_owned(), spec)
        }
    };
    let (method, pipeline) = label.split_once('-').unwrap_or((&label, "-"));
    Ok(Candidate::new(method, pipeline, load_image(path)?))
}

pub fn cmd_compare(cfg: &CompareConfig) -> Result<Comparison> {
    let eq_cfg = cfg.overrides.apply(EqualizeConfig::default());
    eq_cfg.validate()?;
    let reference = load_image(&cfg.reference)?;
    let mut candidates = match &cfg.input {
        Some(path) => four_way_candidates(&load_image(path)?, &eq_cfg)?,
        None => Vec::new(),
    };
    for spec in &cfg.candidates {
        candidates.push(parse_candidate(spec)?);
    }
    if candidates.is_empty() {
        return Err(Error::InvalidConfig(
            "nothing to compare: pass --input and/or candidate images".into(),
        ));
    }
    compare_report(&reference, &candidates)
}

#[derive(Debug, Clone)]
pub struct DegradeConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub params: DegradeParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegradeSummary {
    pub input: PathBuf,
    pub output: PathBuf,
    pub params: DegradeParams,
    pub means_before: [f64; 3],
    pub means_after: [f64; 3],
}

pub fn cmd_degrade(cfg: &DegradeConfig) -> Result<DegradeSummary> {
    let input = load_image(&cfg.input)?;
    let out = degrade(&input, &cfg.params)?;
    save_image(&out, &cfg.output)?;
    let means = |img: &RgbImage8| img.to_unit().planes().map(|p| p.mean());
    Ok(DegradeSummary {
        input: cfg.input.clone(),
        output: cfg.output.clone(),
        params: cfg.params,
        means_before: means(&input),
        means_after: means(&out),
    })
}

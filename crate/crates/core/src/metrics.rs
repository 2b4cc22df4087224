//! MSE / PSNR, comparison reports and per-iteration trace tables.
//!
//! All metrics work on 8-bit planes with a peak of 255:
//! `PSNR = 20 log10(255 / sqrt(MSE))`. Identical planes have an infinite PSNR,
//! represented by [`Psnr::Infinite`] and serialized as `"inf"`.

use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::equalize::{Channel, IterationTrace};
use crate::error::{Error, Result};
use crate::image::{PlaneU8, RgbImage8};

fn check_dims(a: &PlaneU8, b: &PlaneU8) -> Result<()> {
    if a.dims() == b.dims() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )))
    }
}

/// Sum of squared level differences, exact.
pub fn squared_error(a: &PlaneU8, b: &PlaneU8) -> Result<u64> {
    check_dims(a, b)?;
    Ok(a.data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum())
}

/// Mean squared error over all pixels.
pub fn mse(a: &PlaneU8, b: &PlaneU8) -> Result<f64> {
    Ok(squared_error(a, b)? as f64 / a.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Psnr {
    Finite(f64),
    Infinite,
}

impl Psnr {
    /// PSNR for a given MSE; zero error is [`Psnr::Infinite`].
    pub fn from_mse(mse: f64) -> Psnr {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Finite(20.0 * (255.0 / mse.sqrt()).log10())
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Psnr::Finite(v) => Some(v),
            Psnr::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Psnr::Infinite
    }

    /// The value as an `f64`, with `f64::INFINITY` for the infinite marker.
    pub fn as_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.4}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Psnr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Psnr::Finite(v) => s.serialize_f64(*v),
            Psnr::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Psnr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Psnr::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(Psnr::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("invalid PSNR {s:?}"))),
        }
    }
}

pub fn psnr(a: &PlaneU8, b: &PlaneU8) -> Result<Psnr> {
    Ok(Psnr::from_mse(mse(a, b)?))
}

/// One column of a method comparison: per-channel PSNR against a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsnrReport {
    pub method: String,
    pub pipeline: String,
    pub psnr_r: Psnr,
    pub psnr_g: Psnr,
    pub psnr_b: Psnr,
    pub psnr_avg: Psnr,
}

impl PsnrReport {
    pub fn new(method: &str, pipeline: &str, reference: &RgbImage8, image: &RgbImage8) -> Result<Self> {
        let [r, g, b] = [0, 1, 2].map(|c| psnr(reference.planes()[c], image.planes()[c]));
        let (psnr_r, psnr_g, psnr_b) = (r?, g?, b?);
        let psnr_avg = match (psnr_r, psnr_g, psnr_b) {
            (Psnr::Finite(r), Psnr::Finite(g), Psnr::Finite(b)) => Psnr::Finite((r + g + b) / 3.0),
            _ => Psnr::Infinite,
        };
        Ok(Self {
            method: method.to_owned(),
            pipeline: pipeline.to_owned(),
            psnr_r,
            psnr_g,
            psnr_b,
            psnr_avg,
        })
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.method, self.pipeline)
    }

    pub fn channels(&self) -> [Psnr; 3] {
        [self.psnr_r, self.psnr_g, self.psnr_b]
    }
}

/// A labelled image to score against the reference.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub method: String,
    pub pipeline: String,
    pub image: RgbImage8,
}

impl Candidate {
    pub fn new(method: impl Into<String>, pipeline: impl Into<String>, image: RgbImage8) -> Self {
        Self {
            method: method.into(),
            pipeline: pipeline.into(),
            image,
        }
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.method, self.pipeline)
    }
}

/// Relative change of the average PSNR from one report to another, in
/// percent. `None` when either side is infinite or the base is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsnrDelta {
    pub from: String,
    pub to: String,
    pub percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub reports: Vec<PsnrReport>,
    pub deltas: Vec<PsnrDelta>,
}

impl Comparison {
    pub fn report(&self, method: &str, pipeline: &str) -> Option<&PsnrReport> {
        self.reports
            .iter()
            .find(|r| r.method == method && r.pipeline == pipeline)
    }
}

pub fn percent_change(from: Psnr, to: Psnr) -> Option<f64> {
    match (from, to) {
        (Psnr::Finite(a), Psnr::Finite(b)) if a != 0.0 => Some((b - a) / a * 100.0),
        _ => None,
    }
}

/// Scores every candidate against `original` and lists the average-PSNR
/// change for every ordered pair `(i, j)` with `i < j`.
pub fn compare_report(original: &RgbImage8, candidates: &[Candidate]) -> Result<Comparison> {
    let reports = candidates
        .iter()
        .map(|c| {
            if c.image.dims() != original.dims() {
                return Err(Error::DimensionMismatch(format!(
                    "candidate {} is {}x{}, reference is {}x{}",
                    c.label(),
                    c.image.width(),
                    c.image.height(),
                    original.width(),
                    original.height()
                )));
            }
            PsnrReport::new(&c.method, &c.pipeline, original, &c.image)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut deltas = Vec::new();
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            deltas.push(PsnrDelta {
                from: a.label(),
                to: b.label(),
                percent: percent_change(a.psnr_avg, b.psnr_avg),
            });
        }
    }
    Ok(Comparison { reports, deltas })
}

/// Formats like C's `%.6g`.
pub fn format_sig6(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if (-4..6).contains(&exp) {
        trim(&format!("{v:.*}", (5 - exp) as usize))
    } else {
        format!("{}e{}{:02}", trim(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub channel: Channel,
    pub mean: f64,
    pub theta: Option<f64>,
    pub psnr: Option<Psnr>,
}

/// Per-iteration mean, power factor and PSNR for one or more channels,
/// ordered by channel then iteration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceReport {
    pub rows: Vec<TraceRow>,
}

pub const TRACE_HEADER: [&str; 5] = ["iteration", "channel", "mean", "theta", "psnr"];

impl TraceReport {
    /// Joins traces with an optional PSNR per `(channel, iteration)`.
    pub fn from_traces<'a>(
        traces: impl IntoIterator<Item = &'a IterationTrace>,
        mut psnr_at: impl FnMut(Channel, usize) -> Option<Psnr>,
    ) -> Self {
        let mut rows: Vec<TraceRow> = traces
            .into_iter()
            .flat_map(|t| t.records.iter().map(move |r| (t.channel, r)))
            .map(|(channel, r)| TraceRow {
                iteration: r.iteration,
                channel,
                mean: r.mean,
                theta: r.theta,
                psnr: psnr_at(channel, r.iteration),
            })
            .collect();
        rows.sort_by_key(|r| (r.channel, r.iteration));
        Self { rows }
    }

    pub fn channel(&self, channel: Channel) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(move |r| r.channel == channel)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(TRACE_HEADER)?;
        for r in &self.rows {
            out.write_record([
                r.iteration.to_string(),
                r.channel.to_string(),
                format_sig6(r.mean),
                r.theta.map(format_sig6).unwrap_or_default(),
                match r.psnr {
                    Some(Psnr::Finite(v)) => format_sig6(v),
                    Some(Psnr::Infinite) => "inf".into(),
                    None => String::new(),
                },
            ])?;
        }
        out.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut input = csv::Reader::from_reader(r);
        if input.headers()?.iter().ne(TRACE_HEADER) {
            return Err(Error::Malformed(format!(
                "trace header must be {}",
                TRACE_HEADER.join(",")
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Malformed(format!("bad number {s:?} in trace")))
        };
        let mut rows = Vec::new();
        for rec in input.records() {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            rows.push(TraceRow {
                iteration: field(0)
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad iteration {:?}", field(0))))?,
                channel: field(1).parse()?,
                mean: num(field(2))?,
                theta: match field(3) {
                    "" => None,
                    s => Some(num(s)?),
                },
                psnr: match field(4) {
                    "" => None,
                    "inf" => Some(Psnr::Infinite),
                    s => Some(Psnr::Finite(num(s)?)),
                },
            });
        }
        Ok(Self { rows })
    }
}

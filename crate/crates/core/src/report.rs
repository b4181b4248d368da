//! Report documents and their JSON/CSV serialization.
//!
//! Floats are written like C's `%.17g`, which round-trips every `f64`, so a
//! document parsed and re-emitted is byte-identical.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::ser::Serialize;
use serde::{de::DeserializeOwned, Deserialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::campaign::{CampaignReport, CellReport, Skipped};
use crate::error::{Error, Result};
use crate::inequalities::{Fingerprint, TheoremId};
use crate::instance::NamedMatrix;
use crate::params::{BoundParams, LOG_BASE};
use crate::search::SearchResult;

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub seed: u64,
    pub tol: f64,
    pub timestamp: String,
    pub log_base: String,
}

impl Meta {
    pub fn new(version: &str, seed: u64, tol: f64, timestamp: &str) -> Self {
        Self {
            version: version.to_owned(),
            seed,
            tol,
            timestamp: timestamp.to_owned(),
            log_base: LOG_BASE.to_owned(),
        }
    }
}

/// The worst-slack instance of one theorem over all its cells.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct ExtremalInstance {
    pub theorem: TheoremId,
    pub dim: usize,
    pub params: BoundParams,
    pub fingerprint: Fingerprint,
    pub draw: usize,
    pub label: String,
    pub ratio: f64,
    pub rel_slack: f64,
    pub map: Option<String>,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct ReportDocument {
    pub meta: Meta,
    pub results: Vec<CellReport>,
    pub skipped: Vec<Skipped>,
    pub extremal_instances: Vec<ExtremalInstance>,
}

impl ReportDocument {
    pub fn new(meta: Meta, campaign: CampaignReport) -> Self {
        let mut extremal: Vec<ExtremalInstance> = Vec::new();
        for cell in &campaign.cells {
            let e = &cell.extremal;
            let candidate = ExtremalInstance {
                theorem: cell.theorem,
                dim: cell.dim,
                params: cell.params,
                fingerprint: e.fingerprint,
                draw: e.draw,
                label: e.label.clone(),
                ratio: e.ratio,
                rel_slack: e.rel_slack,
                map: e.map.clone(),
                matrices: e.matrices.clone(),
            };
            match extremal.iter_mut().find(|x| x.theorem == cell.theorem) {
                Some(x) if candidate.rel_slack < x.rel_slack => *x = candidate,
                Some(_) => {}
                None => extremal.push(candidate),
            }
        }
        Self {
            meta,
            results: campaign.cells,
            skipped: campaign.skipped,
            extremal_instances: extremal,
        }
    }

    pub fn violations(&self) -> usize {
        self.results.iter().map(|c| c.violations).sum()
    }
}

/// Output of a sharpness search.
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
pub struct SearchDocument {
    pub meta: Meta,
    pub search: SearchResult,
}

/// `x` formatted like C's `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const P: i32 = 17;
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let strip = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s.to_owned()
        }
    };
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip(mantissa), sign, exp.abs())
    } else {
        strip(&format!("{:.*}", (P - 1 - exp) as usize, x))
    }
}

/// Pretty JSON with `%.17g` floats.
struct G17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for G17Formatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_g17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Any serializable value as pretty JSON with `%.17g` floats and a
/// trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, G17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub const CSV_HEADER: [&str; 11] = [
    "theorem_id",
    "dim",
    "m",
    "m_prime",
    "M_prime",
    "M",
    "samples",
    "violations",
    "max_ratio",
    "min_slack",
    "mean_slack",
];

/// One row per cell.
pub fn to_csv(doc: &ReportDocument) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for c in &doc.results {
        let p = &c.params;
        w.write_record([
            c.theorem.to_string(),
            c.dim.to_string(),
            format_g17(p.m),
            format_g17(p.m_prime),
            format_g17(p.big_m_prime),
            format_g17(p.big_m),
            c.samples.to_string(),
            c.violations.to_string(),
            format_g17(c.max_ratio),
            format_g17(c.min_slack),
            format_g17(c.mean_slack),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

pub fn emit_report(doc: &ReportDocument, format: ReportFormat, path: &Path) -> Result<()> {
    let text = match format {
        ReportFormat::Json => to_json(doc)?,
        ReportFormat::Csv => to_csv(doc)?,
    };
    fs::write(path, text)?;
    Ok(())
}

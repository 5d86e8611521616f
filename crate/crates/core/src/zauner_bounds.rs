//! Upper bounds on the size `n(d)` of the smallest weighted projective
//! 2-design in `CP^{d-1}`, and the comparison table.
//!
//! Previously known bounds, each applicable only under its condition:
//!
//! * `sic`: `d^2` when an exact SIC is known in dimension `d`;
//! * `b`:   `k d^2 + 2d` when `k d + 1` is a prime power;
//! * `c`:   `d^2 + 1` when `d - 1` is a prime power;
//! * `d`:   `d^2 + d - 1` when `d` is a prime power;
//! * `e`:   `C(d + 1, 2)^2` always.
//!
//! The Sidon bound is `m_known(d) + d`: the Bodmann–Haas design of a
//! size-`d` Sidon set in a group of order `m` has `m + d` vectors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::smallest_prime_geq;
use crate::finite_field::is_prime_power;
use crate::sidon::{m_known, Family, KnownBound};

pub const DEFAULT_K_MAX: u64 = 16;
pub const DEFAULT_TABLE_DMAX: u64 = 150;
pub const MAX_TABLE_DMAX: u64 = 2000;
/// Dimensions that must appear in any SIC data file.
pub const REQUIRED_SIC_DIMENSIONS: [u64; 4] = [23, 52, 67, 103];
/// Environment variable naming a SIC data file to use instead of the
/// bundled one.
pub const SIC_DATA_ENV: &str = "BHD_SIC_DATA";

const BUNDLED_SIC_DATA: &str = include_str!("../data/sic_dimensions.txt");

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("SIC data line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("SIC data is missing required dimension {0}")]
    MissingRequiredDimension(u64),
    #[error("d_max = {0} outside [2, {MAX_TABLE_DMAX}]")]
    DMaxOutOfRange(u64),
    #[error("reading SIC data: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Dimensions with a published exact SIC.
#[derive(Debug, Clone)]
pub struct SicDimensionData {
    dims: BTreeMap<u64, String>,
    sha256: String,
}

impl SicDimensionData {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_SIC_DATA).expect("bundled SIC data is valid")
    }

    /// The file named by `BHD_SIC_DATA` if set, else the bundled list.
    pub fn from_env() -> Result<Self, BoundsError> {
        match std::env::var_os(SIC_DATA_ENV) {
            Some(path) => Self::load(Path::new(&path)),
            None => Ok(Self::bundled()),
        }
    }

    pub fn load(path: &Path) -> Result<Self, BoundsError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut dims = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let (value, note) = match line.split_once('#') {
                Some((v, n)) => (v.trim(), n.trim()),
                None => (line.trim(), ""),
            };
            if value.is_empty() {
                continue;
            }
            let d: u64 = value.parse().map_err(|_| BoundsError::Parse {
                line: i + 1,
                reason: format!("'{value}' is not a dimension"),
            })?;
            dims.insert(d, note.to_string());
        }
        if let Some(&missing) = REQUIRED_SIC_DIMENSIONS.iter().find(|d| !dims.contains_key(d)) {
            return Err(BoundsError::MissingRequiredDimension(missing));
        }
        let sha256 = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(SicDimensionData { dims, sha256 })
    }

    pub fn contains(&self, d: u64) -> bool {
        self.dims.contains_key(&d)
    }

    pub fn note(&self, d: u64) -> Option<&str> {
        self.dims.get(&d).map(String::as_str)
    }

    pub fn dimensions(&self) -> impl Iterator<Item = u64> + '_ {
        self.dims.keys().copied()
    }

    /// SHA-256 of the data file contents, hex encoded.
    pub fn sha256(&self) -> &str {
        &self.sha256
    }
}

pub fn smallest_prime_geq_d(d: u64) -> u64 {
    smallest_prime_geq(d)
}

/// `(k d^2 + 2d, k)` for the smallest `k <= k_max` with `k d + 1` a prime
/// power. The value grows with `k`, so the first hit is the minimum.
pub fn bound_b(d: u64, k_max: u64) -> Option<(u64, u64)> {
    (1..=k_max)
        .find(|k| is_prime_power(k * d + 1).is_some())
        .map(|k| (k * d * d + 2 * d, k))
}

pub fn bound_c(d: u64) -> Option<u64> {
    (d >= 1 && is_prime_power(d - 1).is_some()).then(|| d * d + 1)
}

pub fn bound_d(d: u64) -> Option<u64> {
    is_prime_power(d).map(|_| d * d + d - 1)
}

pub fn bound_e(d: u64) -> u64 {
    let c = d * (d + 1) / 2;
    c * c
}

pub fn bound_sic(d: u64, data: &SicDimensionData) -> Option<u64> {
    data.contains(d).then(|| d * d)
}

/// `m_known(d) + d` and the family that achieves it.
pub fn bound_sidon(d: u64) -> (u64, KnownBound) {
    let m = m_known(d);
    (m.order + d, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundSource {
    Sic,
    B,
    C,
    D,
    E,
    Sidon,
}

impl BoundSource {
    pub fn tag(self) -> &'static str {
        match self {
            BoundSource::Sic => "sic",
            BoundSource::B => "b",
            BoundSource::C => "c",
            BoundSource::D => "d",
            BoundSource::E => "e",
            BoundSource::Sidon => "sidon",
        }
    }
}

/// How a row relates the Sidon bound to the previously known ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowClass {
    /// An exact SIC is known, so `n(d) = d^2`.
    SicKnown,
    /// No SIC; the best previous upper bound equals the Sidon bound.
    Tie,
    /// No SIC; the Sidon bound is strictly smaller.
    SidonBetter,
    /// No SIC; a previous bound is strictly smaller.
    PreviousBetter,
}

#[derive(Debug, Clone)]
pub struct BoundRecord {
    pub d: u64,
    pub lower: u64,
    pub sic: Option<u64>,
    /// Value and the `k` that achieves it.
    pub b: Option<(u64, u64)>,
    pub c: Option<u64>,
    pub d_bound: Option<u64>,
    pub e: u64,
    pub sidon: u64,
    pub sidon_witness: KnownBound,
    pub best: u64,
    /// Every source achieving `best`, in column order.
    pub best_sources: Vec<BoundSource>,
}

impl BoundRecord {
    pub fn compute(d: u64, data: &SicDimensionData, k_max: u64) -> Self {
        let (sidon, sidon_witness) = bound_sidon(d);
        let mut rec = BoundRecord {
            d,
            lower: d * d,
            sic: bound_sic(d, data),
            b: bound_b(d, k_max),
            c: bound_c(d),
            d_bound: bound_d(d),
            e: bound_e(d),
            sidon,
            sidon_witness,
            best: 0,
            best_sources: Vec::new(),
        };
        let cols = rec.columns();
        rec.best = cols.iter().map(|&(_, v)| v).min().expect("e and sidon always apply");
        rec.best_sources = cols
            .iter()
            .filter(|&&(_, v)| v == rec.best)
            .map(|&(s, _)| s)
            .collect();
        rec
    }

    /// Applicable bounds as `(source, value)`, in column order.
    pub fn columns(&self) -> Vec<(BoundSource, u64)> {
        let mut out = Vec::with_capacity(6);
        out.extend(self.sic.map(|v| (BoundSource::Sic, v)));
        out.extend(self.b.map(|(v, _)| (BoundSource::B, v)));
        out.extend(self.c.map(|v| (BoundSource::C, v)));
        out.extend(self.d_bound.map(|v| (BoundSource::D, v)));
        out.push((BoundSource::E, self.e));
        out.push((BoundSource::Sidon, self.sidon));
        out
    }

    /// Smallest of the previously known upper bounds `b`..`e`.
    pub fn previous_upper(&self) -> (u64, Vec<BoundSource>) {
        let cols: Vec<_> = self
            .columns()
            .into_iter()
            .filter(|(s, _)| !matches!(s, BoundSource::Sic | BoundSource::Sidon))
            .collect();
        let best = cols.iter().map(|&(_, v)| v).min().expect("e always applies");
        let srcs = cols.into_iter().filter(|&(_, v)| v == best).map(|(s, _)| s).collect();
        (best, srcs)
    }

    pub fn class(&self) -> RowClass {
        if self.sic.is_some() {
            return RowClass::SicKnown;
        }
        let (prev, _) = self.previous_upper();
        match self.sidon.cmp(&prev) {
            std::cmp::Ordering::Equal => RowClass::Tie,
            std::cmp::Ordering::Less => RowClass::SidonBetter,
            std::cmp::Ordering::Greater => RowClass::PreviousBetter,
        }
    }

    /// `sic`, `sidon`, or `tie(c,sidon)` when several sources agree.
    pub fn best_source(&self) -> String {
        if self.best_sources.len() == 1 {
            self.best_sources[0].tag().to_string()
        } else {
            let tags: Vec<&str> = self.best_sources.iter().map(|s| s.tag()).collect();
            format!("tie({})", tags.join(","))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

/// One record per `d` in `2..=d_max`, in order.
pub fn table(d_max: u64, data: &SicDimensionData, k_max: u64) -> Result<Vec<BoundRecord>, BoundsError> {
    if !(2..=MAX_TABLE_DMAX).contains(&d_max) {
        return Err(BoundsError::DMaxOutOfRange(d_max));
    }
    Ok((2..=d_max)
        .into_par_iter()
        .map(|d| BoundRecord::compute(d, data, k_max))
        .collect())
}

fn opt(v: Option<u64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

/// CSV with a leading `#` comment carrying the SIC data hash.
pub fn render_csv(rows: &[BoundRecord], data: &SicDimensionData) -> Result<String, BoundsError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "d",
        "lower",
        "sic",
        "b",
        "c",
        "d_bound",
        "e",
        "sidon",
        "sidon_witness",
        "best",
        "best_source",
    ])?;
    for r in rows {
        w.write_record([
            r.d.to_string(),
            r.lower.to_string(),
            opt(r.sic),
            opt(r.b.map(|(v, _)| v)),
            opt(r.c),
            opt(r.d_bound),
            r.e.to_string(),
            r.sidon.to_string(),
            r.sidon_witness.label(),
            r.best.to_string(),
            r.best_source(),
        ])?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8");
    Ok(format!("# sic-data sha256: {}\n{body}", data.sha256()))
}

/// Markdown table: `d`, `d^2`, best previous bound with its source, and
/// the Sidon bound with its witness. The winning upper bound is bold, and
/// `d^2` is bold too when it is attained.
pub fn render_markdown(rows: &[BoundRecord], data: &SicDimensionData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "SIC data sha256: `{}`", data.sha256());
    out.push('\n');
    out.push_str("| d | d² | previous bound | source | Sidon bound | Sidon set |\n");
    out.push_str("|---:|---:|---:|:---|---:|:---|\n");
    let bold = |v: u64, on: bool| if on { format!("**{v}**") } else { v.to_string() };
    for r in rows {
        let (prev, prev_src) = match r.sic {
            Some(v) => (v, vec![BoundSource::Sic]),
            None => r.previous_upper(),
        };
        let src: Vec<String> = prev_src
            .iter()
            .map(|s| match (s, r.b) {
                (BoundSource::B, Some((_, k))) => format!("b (k={k})"),
                (s, _) => s.tag().to_string(),
            })
            .collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.d,
            bold(r.lower, r.best == r.lower),
            bold(prev, prev == r.best),
            src.join(", "),
            bold(r.sidon, r.sidon == r.best),
            r.sidon_witness.label()
        );
    }
    out
}

pub fn render(rows: &[BoundRecord], data: &SicDimensionData, format: TableFormat) -> Result<String, BoundsError> {
    match format {
        TableFormat::Csv => render_csv(rows, data),
        TableFormat::Markdown => Ok(render_markdown(rows, data)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub d_max: u64,
    /// Largest `(m_known(d) + d - d^2) / d^1.525` over `2 <= d <= d_max`.
    pub max_ratio: f64,
    pub argmax: u64,
    /// `d` with `m_known(d) > p(d)^2`; expected empty.
    pub prime_square_violations: Vec<u64>,
    /// `d` with `m_known(d) + d < d^2 + 1`; expected empty.
    pub floor_violations: Vec<u64>,
}

pub fn asymptotic_check(d_max: u64) -> AsymptoticReport {
    let rows: Vec<(u64, f64, bool, bool)> = (2..=d_max.max(2))
        .into_par_iter()
        .map(|d| {
            let m = m_known(d).order;
            let p = smallest_prime_geq(d);
            let excess = (m + d) as f64 - (d * d) as f64;
            (d, excess / (d as f64).powf(1.525), m <= p * p, m + d > d * d)
        })
        .collect();
    let (argmax, max_ratio) = rows
        .iter()
        .map(|&(d, r, _, _)| (d, r))
        .fold((2, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    AsymptoticReport {
        d_max,
        max_ratio,
        argmax,
        prime_square_violations: rows.iter().filter(|r| !r.2).map(|r| r.0).collect(),
        floor_violations: rows.iter().filter(|r| !r.3).map(|r| r.0).collect(),
    }
}

/// Exact integer tie identities between family members and the previous
/// bounds, for the member with parameter `q`. Returns `(family, d, design
/// size, matching previous bound)` for every family the identity covers.
pub fn tie_identities(q: u64) -> Vec<(Family, u64, u64, Option<u64>)> {
    let mut out = Vec::new();
    if is_prime_power(q).is_none() {
        return out;
    }
    let size = |family: Family| {
        let (g, s) = family.parameters(q).unwrap();
        (s, g + s)
    };
    let (d, n) = size(Family::Singer);
    out.push((Family::Singer, d, n, bound_c(d)));
    let (d, n) = size(Family::Bose);
    out.push((Family::Bose, d, n, bound_d(d)));
    if q >= 3 {
        let (d, n) = size(Family::Spence);
        out.push((
            Family::Spence,
            d,
            n,
            bound_b(d, 1).map(|(v, _)| v),
        ));
    }
    out
}

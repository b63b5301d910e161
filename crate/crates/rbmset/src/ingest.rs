//! Track ingestion and trajectory CSV round-trips.
//!
//! Real tracking data arrive as CSV with configurable column names; rows
//! are sorted by time, optionally normalized into the unit square
//! (aspect-preserving), and exposed as a `Trajectory` whose nominal step
//! is the median time gap. The estimators consume point sets only, so
//! non-uniform gaps merely show up as metadata.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::geom::Point2;
use crate::sim::Trajectory;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("column {0:?} not found in header")]
    MissingColumn(String),
    #[error("row {row}: {msg}")]
    UnparseableRow { row: usize, msg: String },
    #[error("file holds no data rows")]
    EmptyFile,
    #[error("truncation must keep at least 2 points")]
    TooFewPoints,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Column names for track CSV files.
#[derive(Debug, Clone)]
pub struct ColumnMapping {
    pub t: String,
    pub x: String,
    pub y: String,
    pub tag: Option<String>,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            t: "t".into(),
            x: "x".into(),
            y: "y".into(),
            tag: None,
        }
    }
}

/// One tracking record.
#[derive(Debug, Clone)]
pub struct TrackRecord {
    pub timestamp: f64,
    pub x: f64,
    pub y: f64,
    pub tag: Option<String>,
}

/// Read a track CSV, sort by time, and build a trajectory.
///
/// With `normalize`, coordinates are affinely mapped so the bounding box
/// fits `[0,1]²` preserving the aspect ratio. The trajectory step is the
/// median time gap; the worst deviation from it is kept as metadata.
pub fn read_track_csv(
    path: &Path,
    mapping: &ColumnMapping,
    normalize: bool,
) -> Result<Trajectory, IngestError> {
    let file = File::open(path)?;
    read_track_reader(BufReader::new(file), mapping, normalize)
}

pub fn read_track_reader<R: Read>(
    reader: R,
    mapping: &ColumnMapping,
    normalize: bool,
) -> Result<Trajectory, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let (ti, xi, yi) = (col(&mapping.t)?, col(&mapping.x)?, col(&mapping.y)?);
    let tagi = match &mapping.tag {
        Some(name) => Some(col(name)?),
        None => None,
    };

    let mut records: Vec<TrackRecord> = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let row = row?;
        let parse = |idx: usize, what: &str| -> Result<f64, IngestError> {
            row.get(idx)
                .ok_or_else(|| IngestError::UnparseableRow {
                    row: k + 2,
                    msg: format!("missing {what} field"),
                })?
                .parse::<f64>()
                .map_err(|e| IngestError::UnparseableRow {
                    row: k + 2,
                    msg: format!("bad {what} value: {e}"),
                })
        };
        let rec = TrackRecord {
            timestamp: parse(ti, "time")?,
            x: parse(xi, "x")?,
            y: parse(yi, "y")?,
            tag: tagi.and_then(|i| row.get(i).map(str::to_string)),
        };
        if !rec.timestamp.is_finite() || !rec.x.is_finite() || !rec.y.is_finite() {
            return Err(IngestError::UnparseableRow {
                row: k + 2,
                msg: "non-finite value".into(),
            });
        }
        records.push(rec);
    }
    if records.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    records.sort_by(|a, b| a.timestamp.partial_cmp(&b.timestamp).unwrap());

    let mut points: Vec<Point2> = records.iter().map(|r| Point2::new(r.x, r.y)).collect();
    if normalize {
        points = normalize_points(&points);
    }

    let t0 = records[0].timestamp;
    let mut gaps: Vec<f64> = records.windows(2).map(|w| w[1].timestamp - w[0].timestamp).collect();
    let h = if gaps.is_empty() {
        1.0
    } else {
        gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = gaps.len() / 2;
        let med = if gaps.len() % 2 == 1 {
            gaps[mid]
        } else {
            0.5 * (gaps[mid - 1] + gaps[mid])
        };
        if med > 0.0 {
            med
        } else {
            1.0
        }
    };
    let max_gap_skew = records
        .windows(2)
        .map(|w| ((w[1].timestamp - w[0].timestamp) - h).abs())
        .fold(0.0f64, f64::max);

    Ok(Trajectory {
        t0,
        h,
        points,
        seed: None,
        reflections: 0,
        l_proxy: 0.0,
        max_gap_skew,
    })
}

/// Aspect-preserving map of the bounding box into [0,1]².
pub fn normalize_points(points: &[Point2]) -> Vec<Point2> {
    let bb = crate::geom::BBox2::of_points(points).expect("nonempty");
    let extent = bb.width().max(bb.height());
    let scale = if extent > 0.0 { 1.0 / extent } else { 1.0 };
    points
        .iter()
        .map(|p| Point2::new((p.x - bb.min.x) * scale, (p.y - bb.min.y) * scale))
        .collect()
}

/// Keep the first `ceil(fraction · n)` points.
pub fn truncate(traj: &Trajectory, fraction: f64) -> Result<Trajectory, IngestError> {
    assert!(fraction > 0.0 && fraction <= 1.0, "fraction must be in (0,1]");
    let keep = (fraction * traj.points.len() as f64).ceil() as usize;
    if keep < 2 {
        return Err(IngestError::TooFewPoints);
    }
    Ok(traj.prefix(keep))
}

/// Write `t,x,y` rows with 12 significant digits.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut out: W) -> Result<(), IngestError> {
    writeln!(out, "t,x,y")?;
    for (k, p) in traj.points.iter().enumerate() {
        writeln!(out, "{:.11e},{:.11e},{:.11e}", traj.time_at(k), p.x, p.y)?;
    }
    Ok(())
}

pub fn write_trajectory_csv_file(traj: &Trajectory, path: &Path) -> Result<(), IngestError> {
    let mut f = File::create(path)?;
    write_trajectory_csv(traj, &mut f)
}

/// Read a trajectory written by [`write_trajectory_csv`] (or any track CSV
/// with the default `t,x,y` columns), without normalization.
pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory, IngestError> {
    read_track_csv(path, &ColumnMapping::default(), false)
}

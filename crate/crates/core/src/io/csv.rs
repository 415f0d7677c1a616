use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{RegularSeries, SeriesKind};

const TICK_SECONDS: i64 = 180;

/// First column of a series file: integer tick indices or timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TimeColumn {
    Ticks,
    Timestamps { origin: i64 },
}

fn parse_timestamp(field: &str) -> Option<i64> {
    if let Ok(t) = DateTime::parse_from_rfc3339(field) {
        return Some(t.timestamp());
    }
    [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ]
    .iter()
    .find_map(|f| NaiveDateTime::parse_from_str(field, f).ok())
    .map(|t| t.and_utc().timestamp())
}

/// Reads a two-column log-price file: tick index (or ISO-8601 timestamp on
/// the 3-minute grid) and value. Blank lines and lines starting with `#` are
/// skipped; a first line whose value field is not numeric is a header.
/// Ticks must be strictly consecutive.
pub fn load_series_csv<T: Scalar>(path: &Path) -> Result<RegularSeries<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut time_col = None;
    let mut start = 0i64;
    let mut prev: Option<i64> = None;
    let mut values = Vec::new();
    let mut seen_data = false;

    for (idx, line) in reader.lines().enumerate() {
        let row = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                row,
                col: fields.len().min(2) + 1,
                message: format!("expected 2 columns, found {}", fields.len()),
            });
        }
        let value: f64 = match fields[1].parse() {
            Ok(v) => v,
            Err(_) if !seen_data && values.is_empty() && fields[0].parse::<f64>().is_err() => {
                // header line
                seen_data = true;
                continue;
            }
            Err(e) => {
                return Err(Error::Parse {
                    row,
                    col: 2,
                    message: format!("'{}': {e}", fields[1]),
                })
            }
        };
        seen_data = true;

        let kind = *time_col.get_or_insert_with(|| match fields[0].parse::<i64>() {
            Ok(_) => TimeColumn::Ticks,
            Err(_) => TimeColumn::Timestamps {
                origin: parse_timestamp(fields[0]).unwrap_or(0),
            },
        });
        let tick = match kind {
            TimeColumn::Ticks => fields[0].parse::<i64>().map_err(|e| Error::Parse {
                row,
                col: 1,
                message: format!("'{}': {e}", fields[0]),
            })?,
            TimeColumn::Timestamps { origin } => {
                let secs = parse_timestamp(fields[0]).ok_or_else(|| Error::Parse {
                    row,
                    col: 1,
                    message: format!("'{}' is neither a tick index nor an ISO-8601 timestamp", fields[0]),
                })?;
                let offset = secs - origin;
                if offset.rem_euclid(TICK_SECONDS) != 0 {
                    return Err(Error::Parse {
                        row,
                        col: 1,
                        message: format!("'{}' is off the 3-minute grid", fields[0]),
                    });
                }
                offset.div_euclid(TICK_SECONDS)
            }
        };
        if !value.is_finite() {
            return Err(Error::NonFiniteValue { row });
        }
        match prev {
            None => start = tick,
            Some(p) if tick <= p => return Err(Error::NonMonotonicTime { row }),
            Some(p) if tick > p + 1 => return Err(Error::GapDetected { row, tick: p + 1 }),
            _ => {}
        }
        prev = Some(tick);
        values.push(T::from_f64(value).ok_or(Error::NonFiniteValue { row })?);
    }
    if values.is_empty() {
        return Err(Error::InvalidSeries(format!("{} holds no data rows", path.display())));
    }
    let series = RegularSeries::new(start, values, SeriesKind::LogPrice)?;
    log::info!(
        "loaded {} rows spanning ticks {}..={} from {}",
        series.len(),
        series.start(),
        series.end(),
        path.display()
    );
    Ok(series)
}

/// Writes `tick,value` rows with 17 significant digits, so that
/// [`load_series_csv`] reproduces the values bit for bit. `comments` are
/// emitted first as `#` lines.
pub fn save_series_csv<T: Scalar>(series: &RegularSeries<T>, path: &Path, comments: &[String]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        for c in comments {
            for line in c.lines() {
                writeln!(w, "# {line}")?;
            }
        }
        writeln!(w, "tick,value")?;
        for (i, v) in series.values().iter().enumerate() {
            writeln!(w, "{},{:.16e}", series.start() + i as i64, v.to_f64_exact())?;
        }
        w.flush()
    };
    write(&mut w).map_err(|e| Error::io(path, e))
}

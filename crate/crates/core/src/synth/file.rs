//! Binary trace container and the CSV import adapter.
//!
//! Layout (little-endian): header `"HTRC"`, `version: u32`, `n_traces: u64`,
//! `n_samples: u32`, `dt: f64`, `flags: u32`; then per trace `herald_id: u64`,
//! `theta: f64`, `samples: [f32; n_samples]`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::trace::TimeTrace;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"HTRC";
pub const FORMAT_VERSION: u32 = 1;
/// Samples are already scaled to shot-noise units.
pub const FLAG_SHOT_NOISE_UNITS: u32 = 1;

/// A set of equal-length traces stored the way the digitizer delivers them.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    pub dt: f64,
    pub n_samples: usize,
    pub flags: u32,
    pub herald_ids: Vec<u64>,
    pub thetas: Vec<f64>,
    /// Row-major, `n_samples` values per trace.
    pub data: Vec<f32>,
}

impl TraceSet {
    pub fn new(dt: f64, n_samples: usize) -> Self {
        Self {
            dt,
            n_samples,
            flags: 0,
            herald_ids: Vec::new(),
            thetas: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.n_samples..(i + 1) * self.n_samples]
    }

    pub fn trace(&self, i: usize) -> TimeTrace {
        TimeTrace {
            samples: self.row(i).iter().map(|&v| v as f64).collect(),
            dt: self.dt,
            theta: self.thetas[i],
            herald_id: self.herald_ids[i],
        }
    }

    pub fn push(&mut self, trace: &TimeTrace) -> Result<()> {
        if trace.samples.len() != self.n_samples {
            return Err(Error::Mismatch(format!(
                "trace has {} samples, set expects {}",
                trace.samples.len(),
                self.n_samples
            )));
        }
        self.herald_ids.push(trace.herald_id);
        self.thetas.push(trace.theta);
        self.data.extend(trace.samples.iter().map(|&v| v as f32));
        Ok(())
    }

    /// Multiplies every sample by `factor`.
    pub fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|v| *v = (*v as f64 * factor) as f32);
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
        w.write_u64::<LittleEndian>(self.len() as u64)?;
        w.write_u32::<LittleEndian>(self.n_samples as u32)?;
        w.write_f64::<LittleEndian>(self.dt)?;
        w.write_u32::<LittleEndian>(self.flags)?;
        for i in 0..self.len() {
            w.write_u64::<LittleEndian>(self.herald_ids[i])?;
            w.write_f64::<LittleEndian>(self.thetas[i])?;
            for &v in self.row(i) {
                w.write_f32::<LittleEndian>(v)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R, origin: &Path) -> Result<Self> {
        let bad = |reason: String| Error::TraceFormat {
            path: origin.to_path_buf(),
            reason,
        };
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|e| bad(format!("missing header: {e}")))?;
        if magic != MAGIC {
            return Err(bad(format!("bad magic {magic:?}")));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version {version}")));
        }
        let n_traces = r.read_u64::<LittleEndian>()? as usize;
        let n_samples = r.read_u32::<LittleEndian>()? as usize;
        let dt = r.read_f64::<LittleEndian>()?;
        let flags = r.read_u32::<LittleEndian>()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(bad(format!("invalid dt {dt}")));
        }
        let mut set = TraceSet::new(dt, n_samples);
        set.flags = flags;
        set.herald_ids.reserve(n_traces);
        set.thetas.reserve(n_traces);
        set.data.reserve(n_traces * n_samples);
        let mut row = vec![0f32; n_samples];
        for i in 0..n_traces {
            let id = r
                .read_u64::<LittleEndian>()
                .map_err(|e| bad(format!("truncated at trace {i}: {e}")))?;
            let theta = r.read_f64::<LittleEndian>()?;
            r.read_f32_into::<LittleEndian>(&mut row)
                .map_err(|e| bad(format!("truncated samples in trace {i}: {e}")))?;
            if !theta.is_finite() || row.iter().any(|v| !v.is_finite()) {
                return Err(bad(format!("non-finite value in trace {i}")));
            }
            set.herald_ids.push(id);
            set.thetas.push(theta);
            set.data.extend_from_slice(&row);
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(bad("trailing bytes after last trace".into()));
        }
        Ok(set)
    }
}

pub fn write_trace_file(path: &Path, set: &TraceSet) -> Result<()> {
    set.write_to(BufWriter::new(File::create(path)?))
}

pub fn read_trace_file(path: &Path) -> Result<TraceSet> {
    TraceSet::read_from(BufReader::new(File::open(path)?), path)
}

/// Imports traces from CSV rows `herald_id, theta, s_0, s_1, ...`.
/// A leading header row is skipped when its first field is not an integer.
pub fn read_trace_csv(path: &Path, dt: f64) -> Result<TraceSet> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let bad = |reason: String| Error::TraceFormat {
        path: path.to_path_buf(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut set: Option<TraceSet> = None;
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let Some(first) = record.get(0) else { continue };
        let Ok(herald_id) = first.parse::<u64>() else {
            if line == 0 {
                continue;
            }
            return Err(bad(format!("line {}: bad herald id {first:?}", line + 1)));
        };
        let values: std::result::Result<Vec<f64>, _> = record.iter().skip(1).map(str::parse::<f64>).collect();
        let values = values.map_err(|e| bad(format!("line {}: {e}", line + 1)))?;
        if values.len() < 2 {
            return Err(bad(format!("line {}: need theta and at least one sample", line + 1)));
        }
        let trace = TimeTrace {
            samples: values[1..].to_vec(),
            dt,
            theta: values[0],
            herald_id,
        };
        let set = set.get_or_insert_with(|| TraceSet::new(dt, trace.samples.len()));
        set.push(&trace).map_err(|e| bad(format!("line {}: {e}", line + 1)))?;
    }
    Ok(set.unwrap_or_else(|| TraceSet::new(dt, 0)))
}

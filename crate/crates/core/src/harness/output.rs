use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dynamics::ResultRecord;
use crate::error::{Error, Result};

use super::sweep::SweepResult;

/// SHA-256 of the JSON form of `value`, in hex.
pub fn config_hash<T: Serialize>(value: &T) -> Result<String> {
    let json = serde_json::to_string(value).map_err(|e| Error::Config(e.to_string()))?;
    Ok(Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(file, value).map_err(|e| Error::Io(e.into()))
}

/// Long-format trajectory: one row per sample and site, sites 1-based.
///
/// Columns: `t, j, X_j, Y_j, x, displacement, S_<partition>..., norm,
/// energy, config_hash`.
pub fn write_trajectory_csv(path: &Path, record: &ResultRecord) -> Result<()> {
    let tr = &record.trajectory;
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    let mut header: Vec<String> = ["t", "j", "X_j", "Y_j", "x", "displacement"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=tr.partitions.len()).map(|p| format!("S_partition{p}")));
    header.extend(["norm", "energy", "config_hash"].iter().map(|s| s.to_string()));
    w.write_record(&header).map_err(csv_error)?;
    for k in 0..tr.len() {
        for j in 0..tr.x_j[k].len() {
            let mut row = vec![
                format!("{}", tr.times[k]),
                format!("{}", j + 1),
                format!("{}", tr.x_j[k][j]),
                format!("{}", tr.y_j[k][j]),
                format!("{}", tr.position[k]),
                format!("{}", tr.displacement[k]),
            ];
            row.extend(tr.entropy.iter().map(|s| format!("{}", s[k])));
            row.push(format!("{}", tr.norm[k]));
            row.push(format!("{}", tr.energy[k]));
            row.push(record.config_hash.clone());
            w.write_record(&row).map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per realization: `value, realization, seed, fidelity,
/// preparation_overlap, error, config_hash`.
pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(["value", "realization", "seed", "fidelity", "preparation_overlap", "error", "config_hash"])
        .map_err(csv_error)?;
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v}"));
    for p in &sweep.points {
        for r in &p.realizations {
            w.write_record([
                format!("{}", p.value),
                format!("{}", r.index),
                format!("{}", r.seed),
                opt(r.fidelity),
                opt(r.preparation_overlap),
                r.error.clone().unwrap_or_default(),
                sweep.config_hash.clone(),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_hex() {
        let h = config_hash(&vec![1, 2, 3]).unwrap();
        assert_eq!(h.len(), 64);
        assert_eq!(h, config_hash(&vec![1, 2, 3]).unwrap());
        assert_ne!(h, config_hash(&vec![1, 2, 4]).unwrap());
    }
}

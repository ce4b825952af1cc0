//! IQ sample files: little-endian IEEE-754 binary32 interleaved I,Q pairs
//! with no header, or a two-column `i,q` text alternative.

use std::io::{BufRead, BufWriter, Read, Write};
use std::path::Path;

use mdsense::Complex64;

use crate::CliError;

pub fn write_binary(path: &Path, samples: &[Complex64]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for s in samples {
        w.write_all(&(s.re as f32).to_le_bytes())
            .and_then(|_| w.write_all(&(s.im as f32).to_le_bytes()))
            .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("write failed: {e}")))
}

pub fn read_binary(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if bytes.len() % 8 != 0 {
        return Err(CliError::Io(format!(
            "{}: length {} is not a multiple of 8 bytes (interleaved f32 I,Q)",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64;
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]) as f64;
            Complex64::new(re, im)
        })
        .collect())
}

pub fn write_text(path: &Path, samples: &[Complex64]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    for s in samples {
        writeln!(w, "{},{}", s.re as f32, s.im as f32)
            .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
    }
    w.flush()
        .map_err(|e| CliError::Io(format!("write failed: {e}")))
}

pub fn read_text(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let reader = std::io::BufReader::new(file);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CliError::Io(format!("read failed: {e}")))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let parse = |s: Option<&str>| -> Result<f64, CliError> {
            s.map(str::trim)
                .and_then(|t| t.parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::Io(format!(
                        "{}:{}: expected two comma-separated numbers",
                        path.display(),
                        lineno + 1
                    ))
                })
        };
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

//! Deterministic output: fixed 17-significant-digit float formatting and a
//! sink that is either stdout or a file.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// 17 significant digits, scientific; byte-identical across platforms for
/// identical inputs.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sink(output: Option<&Path>) -> Result<Box<dyn Write>> {
    match output {
        Some(path) => {
            let f = File::create(path)
                .with_context(|| format!("cannot create output file {}", path.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Write a CSV table: header row, comma separation, `\n` endings.
pub fn write_csv(out: &mut dyn Write, header: &str, rows: &[Vec<String>]) -> io::Result<()> {
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Write one JSON object per line from pre-rendered `key:value` pairs.
pub fn write_json_lines(out: &mut dyn Write, rows: &[Vec<(String, String)>]) -> io::Result<()> {
    for row in rows {
        let body: Vec<String> = row
            .iter()
            .map(|(k, v)| format!("\"{k}\":{v}"))
            .collect();
        out.write_all(b"{")?;
        out.write_all(body.join(",").as_bytes())?;
        out.write_all(b"}\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(fmt_f64(0.75), "7.5000000000000000e-1");
        assert_eq!(fmt_f64(66.5244), "6.6524400000000000e1");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
    }
}

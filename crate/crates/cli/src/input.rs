use crate::{CliError, Context};
use equicube::hypercube::{parse_hex, parse_hex_coloring, read_coloring_json, Coloring, Dimension, Fiber};
use equicube::spectral::QuotientMatrix;
use std::io::Read;
use std::path::Path;

/// Contents of `path`, or of stdin for `-`; the digest goes into the manifest.
pub fn read_text(path: &Path, ctx: &mut Context) -> Result<String, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(equicube::Error::from)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| equicube::Error::Io(format!("{}: {e}", path.display())))?
    };
    ctx.record_input(path, text.as_bytes());
    Ok(text)
}

pub fn dimension(n: u32) -> Result<Dimension, CliError> {
    Ok(Dimension::new(n)?)
}

/// A JSON coloring, or hex lines (one fiber per color) when `n` is given. A
/// single hex line is read as a 2-coloring by that fiber.
pub fn read_coloring(path: &Path, n: Option<u32>, ctx: &mut Context) -> Result<Coloring, CliError> {
    let text = read_text(path, ctx)?;
    if text.trim_start().starts_with('{') {
        return coloring_from_json(&text);
    }
    let n = n.ok_or_else(|| CliError::Usage("hex input needs --n".into()))?;
    let d = dimension(n)?;
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    if lines.len() == 1 {
        return Ok(Coloring::from_fiber(&parse_hex(lines[0], d)?));
    }
    Ok(parse_hex_coloring(&text, d)?)
}

/// A bare coloring object, or the output of another command that carries one
/// under `coloring` or `canonical`.
fn coloring_from_json(text: &str) -> Result<Coloring, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(equicube::Error::from)?;
    for key in ["coloring", "canonical"] {
        if let Some(inner) = v.get(key).filter(|x| x.is_object()) {
            return Ok(read_coloring_json(&inner.to_string())?);
        }
    }
    Ok(read_coloring_json(text)?)
}

pub fn read_fiber(hex: &str, n: u32) -> Result<Fiber, CliError> {
    Ok(parse_hex(hex, dimension(n)?)?)
}

/// `"a,b;c,d"` or a JSON array of rows.
pub fn parse_matrix(s: &str) -> Result<QuotientMatrix, CliError> {
    let s = s.trim();
    if s.starts_with('[') {
        let rows: Vec<Vec<u32>> = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad matrix: {e}")))?;
        return Ok(QuotientMatrix::new(rows)?);
    }
    QuotientMatrix::parse(s).map_err(|e| CliError::Usage(format!("bad matrix {s:?}: {e}")))
}

pub fn parse_list(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Usage(format!("bad list {s:?}"))))
        .collect()
}

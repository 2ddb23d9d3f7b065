//! Hex truth tables and JSON colorings.
//!
//! Hex: nibble `c` covers vertices `4c..4c+3`, its most significant bit
//! being vertex `4c`.

use super::{Coloring, Dimension, Fiber};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub fn parse_hex(s: &str, n: Dimension) -> Result<Fiber> {
    if n.get() < 2 {
        return Err(Error::DimensionOutOfRange(n.get()));
    }
    let s = s.trim();
    let expected = n.order() / 4;
    if s.len() != expected {
        return Err(Error::HexLength { expected, got: s.len() });
    }
    let mut t = Fiber::empty(n);
    for (c, ch) in s.chars().enumerate() {
        let nib = ch.to_digit(16).ok_or(Error::HexChar(ch))?;
        for i in 0..4 {
            if (nib >> (3 - i)) & 1 == 1 {
                t.set((4 * c + i) as u32, true);
            }
        }
    }
    Ok(t)
}

pub fn emit_hex(t: &Fiber) -> String {
    let order = t.n().order();
    let mut s = String::with_capacity(order / 4);
    for c in 0..order / 4 {
        let mut nib = 0u32;
        for i in 0..4 {
            nib = (nib << 1) | t.get((4 * c + i) as u32) as u32;
        }
        s.push(char::from_digit(nib, 16).unwrap());
    }
    s
}

/// One fiber per non-empty line; `#` starts a comment line.
pub fn read_hex_fibers(text: &str, n: Dimension) -> Result<Vec<Fiber>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_hex(l.split_whitespace().next().unwrap_or(l), n))
        .collect()
}

/// A k-coloring as `k` hex lines, color `i` on line `i`.
pub fn parse_hex_coloring(text: &str, n: Dimension) -> Result<Coloring> {
    let fibers = read_hex_fibers(text, n)?;
    Coloring::from_fibers(&fibers)
}

pub fn emit_hex_coloring(f: &Coloring) -> String {
    f.fibers().iter().map(|t| emit_hex(t) + "\n").collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub n: u32,
    pub k: u32,
    pub colors: Vec<u32>,
}

impl ColoringJson {
    pub fn from_coloring(f: &Coloring) -> Self {
        ColoringJson {
            n: f.n().get(),
            k: f.k() as u32,
            colors: f.colors().iter().map(|&c| c as u32).collect(),
        }
    }

    /// Validates and renames colors by first occurrence.
    pub fn to_coloring(&self) -> Result<Coloring> {
        let n = Dimension::new(self.n)?;
        if let Some(&c) = self.colors.iter().find(|&&c| c >= self.k) {
            return Err(Error::InvalidColoring(format!("color {c} outside [0, {})", self.k)));
        }
        let f = Coloring::from_labels(n, &self.colors)?;
        if f.k() as u32 != self.k {
            return Err(Error::InvalidColoring(format!(
                "declared k = {} but {} colors occur",
                self.k,
                f.k()
            )));
        }
        Ok(f)
    }
}

pub fn read_coloring_json(text: &str) -> Result<Coloring> {
    let j: ColoringJson = serde_json::from_str(text)?;
    j.to_coloring()
}

pub fn write_coloring_json(f: &Coloring) -> String {
    serde_json::to_string(&ColoringJson::from_coloring(f)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn nibble_order() {
        let t = parse_hex("c3", dim(3)).unwrap();
        let bits: Vec<u16> = t.to_labels();
        assert_eq!(bits, vec![1, 1, 0, 0, 0, 0, 1, 1]);
        assert!(parse_hex("00", dim(3)).unwrap().is_empty());
        assert_eq!(emit_hex(&parse_hex("1", dim(2)).unwrap()), "1");
        assert!(parse_hex("1", dim(2)).unwrap().get(3));
    }

    #[test]
    fn round_trip_code() {
        let s = "c30000c3003c3c00003c3c00c30000c3";
        assert_eq!(emit_hex(&parse_hex(s, dim(7)).unwrap()), s);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_hex("c", dim(3)), Err(Error::HexLength { .. })));
        assert!(matches!(parse_hex("cg", dim(3)), Err(Error::HexChar('g'))));
        assert!(parse_hex("c", dim(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = Coloring::distance_coloring(dim(3), 0);
        let text = write_coloring_json(&f);
        assert_eq!(read_coloring_json(&text).unwrap(), f);
        let renamed = r#"{"n":2,"k":2,"colors":[1,0,0,1]}"#;
        assert_eq!(read_coloring_json(renamed).unwrap().colors(), &[0, 1, 1, 0]);
        assert!(read_coloring_json(r#"{"n":2,"k":3,"colors":[1,0,0,1]}"#).is_err());
    }

    #[test]
    fn hex_coloring() {
        let f = Coloring::parity(dim(3));
        let text = emit_hex_coloring(&f);
        assert_eq!(text, "96\n69\n");
        assert_eq!(parse_hex_coloring(&text, dim(3)).unwrap(), f);
        assert!(parse_hex_coloring("96\n96\n", dim(3)).is_err());
    }
}

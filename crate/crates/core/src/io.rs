//! Raster outputs: 16-bit binary PGM and full-precision CSV.
//!
//! Both formats write the row of largest `z` first, so images appear upright.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Result, SimError};
use crate::field::{Grid, ScalarField2D, Unit};

const PGM_MAX: f64 = 65535.0;

/// Quantise a field to 16-bit grey levels in file row order.
///
/// Intensity and visibility fields map `[0, 1]` to `[0, 65535]`; other units map
/// `[min, max]`. Values round half-up and clamp to the range.
pub fn quantize(field: &ScalarField2D) -> Vec<u16> {
    let (lo, hi) = match field.unit() {
        Unit::IntensityNorm | Unit::Visibility => (0.0, 1.0),
        _ => (field.min(), field.max()),
    };
    let span = hi - lo;
    let grid = field.grid();
    let mut out = Vec::with_capacity(grid.len());
    for iz in (0..grid.nz).rev() {
        for ix in 0..grid.nx {
            let v = field.get(ix, iz);
            let level = if span > 0.0 {
                ((v - lo) / span * PGM_MAX + 0.5)
                    .floor()
                    .clamp(0.0, PGM_MAX)
            } else {
                0.0
            };
            out.push(level as u16);
        }
    }
    out
}

/// Bytes of a binary PGM (`P5`, maxval 65535, big-endian samples).
pub fn encode_pgm(field: &ScalarField2D) -> Vec<u8> {
    let grid = field.grid();
    let mut bytes = format!("P5\n{} {}\n65535\n", grid.nx, grid.nz).into_bytes();
    for level in quantize(field) {
        bytes.extend_from_slice(&level.to_be_bytes());
    }
    bytes
}

pub fn write_pgm(field: &ScalarField2D, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(field)).map_err(|e| SimError::io(path, e))
}

/// A decoded 16-bit greymap, rows top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u16>,
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm> {
    let bad = |reason: &str| SimError::Format {
        kind: "pgm",
        reason: reason.to_string(),
    };
    let mut pos = 0;
    let mut token = || -> Result<String> {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P5" {
        return Err(bad("missing P5 magic"));
    }
    let width: usize = token()?.parse().map_err(|_| bad("bad width"))?;
    let height: usize = token()?.parse().map_err(|_| bad("bad height"))?;
    if token()? != "65535" {
        return Err(bad("only maxval 65535 is supported"));
    }
    // exactly one whitespace byte separates the header from the raster
    let data = &bytes[pos + 1..];
    if data.len() != 2 * width * height {
        return Err(bad("raster size does not match header"));
    }
    let pixels = data
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok(Pgm {
        width,
        height,
        pixels,
    })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Pgm> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| SimError::io(path, e))?;
    decode_pgm(&bytes)
}

/// CSV text: a `#` header with grid and unit, then one line per z-row.
///
/// Floats use Rust's shortest round-trip formatting.
pub fn encode_csv(field: &ScalarField2D) -> String {
    let g = field.grid();
    let mut out = format!(
        "# nx={} nz={} extent_x={:e} extent_z={:e} unit={}\n",
        g.nx,
        g.nz,
        g.extent_x,
        g.extent_z,
        field.unit().tag()
    );
    for iz in (0..g.nz).rev() {
        let row: Vec<String> = (0..g.nx)
            .map(|ix| format!("{}", field.get(ix, iz)))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(field: &ScalarField2D, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_csv(field)).map_err(|e| SimError::io(path, e))
}

pub fn decode_csv(text: &str) -> Result<ScalarField2D> {
    let bad = |reason: String| SimError::Format {
        kind: "csv",
        reason,
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|h| h.strip_prefix("# "))
        .ok_or_else(|| bad("missing header".into()))?;
    let mut nx = None;
    let mut nz = None;
    let mut ex = None;
    let mut ez = None;
    let mut unit = None;
    for kv in header.split_whitespace() {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| bad(format!("bad header item {kv}")))?;
        match k {
            "nx" => nx = v.parse::<usize>().ok(),
            "nz" => nz = v.parse::<usize>().ok(),
            "extent_x" => ex = v.parse::<f64>().ok(),
            "extent_z" => ez = v.parse::<f64>().ok(),
            "unit" => unit = Unit::from_tag(v),
            _ => {}
        }
    }
    let (Some(nx), Some(nz), Some(ex), Some(ez), Some(unit)) = (nx, nz, ex, ez, unit) else {
        return Err(bad("incomplete header".into()));
    };
    let grid = Grid::new(nx, nz, ex, ez)?;
    let rows: Vec<Vec<f64>> = lines
        .map(|l| {
            l.split(',')
                .map(|v| v.parse::<f64>().map_err(|e| bad(format!("{v}: {e}"))))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    if rows.len() != nz || rows.iter().any(|r| r.len() != nx) {
        return Err(bad("row or column count does not match header".into()));
    }
    let values = rows.into_iter().rev().flatten().collect();
    // noisy detector images may leave [0, 1]; accept them as written
    Ok(ScalarField2D::from_values_unchecked(grid, unit, values))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<ScalarField2D> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    decode_csv(&text)
}

/// Plain column table with a header row, for 1D profiles and parameter sweeps.
pub fn write_table_csv(path: impl AsRef<Path>, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    let io = |e| SimError::io(path, e);
    writeln!(out, "{}", columns.join(",")).map_err(io)?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(out, "{}", cells.join(",")).map_err(io)?;
    }
    fs::write(path, out).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_intensity_maps_to_32768() {
        let f = ScalarField2D::constant(Grid::square(3, 1.0).unwrap(), Unit::IntensityNorm, 0.5)
            .unwrap();
        assert!(quantize(&f).iter().all(|&v| v == 32768));
    }

    #[test]
    fn minimal_pgm_layout() {
        let f = ScalarField2D::constant(Grid::square(1, 1.0).unwrap(), Unit::IntensityNorm, 0.0)
            .unwrap();
        let bytes = encode_pgm(&f);
        assert_eq!(&bytes[..], b"P5\n1 1\n65535\n\x00\x00");
        assert_eq!(bytes.len(), 13 + 2);
    }

    #[test]
    fn top_row_is_max_z() {
        let g = Grid::new(2, 2, 1.0, 1.0).unwrap();
        let f =
            ScalarField2D::from_values(g, Unit::IntensityNorm, vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        assert_eq!(quantize(&f), vec![65535, 65535, 0, 0]);
        let csv = encode_csv(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "1,1");
        assert_eq!(lines[2], "0,0");
    }

    #[test]
    fn non_intensity_uses_min_max() {
        let g = Grid::new(3, 1, 1.0, 1.0).unwrap();
        let f = ScalarField2D::from_values(g, Unit::ThicknessM, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(quantize(&f), vec![0, 32768, 65535]);
        let flat = ScalarField2D::constant(g, Unit::ThicknessM, 4.0).unwrap();
        assert_eq!(quantize(&flat), vec![0, 0, 0]);
    }

    #[test]
    fn pgm_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(7, 5, 1.0, 2.0).unwrap();
        let f = ScalarField2D::from_fn(g, Unit::IntensityNorm, |x, z| {
            0.5 + 0.4 * (3.0 * x + z).sin()
        })
        .unwrap();
        let path = dir.path().join("f.pgm");
        write_pgm(&f, &path).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!((back.width, back.height), (7, 5));
        assert_eq!(back.pixels, quantize(&f));
    }

    #[test]
    fn csv_shape_and_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::square(100, 15e-3).unwrap();
        let f = ScalarField2D::from_fn(g, Unit::IntensityNorm, |x, z| {
            0.5 + 0.5 * (1e3 * x * z).cos()
        })
        .unwrap();
        let path = dir.path().join("f.csv");
        write_csv(&f, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 101);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 100));
        assert_eq!(read_csv(&path).unwrap(), f);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let f = ScalarField2D::constant(Grid::square(1, 1.0).unwrap(), Unit::IntensityNorm, 0.0)
            .unwrap();
        let err = write_pgm(&f, "/nonexistent-dir/x.pgm").unwrap_err();
        assert!(matches!(err, SimError::Io { .. }));
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(decode_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_pgm(b"P5\n2 2\n65535\n\x00\x00").is_err());
        assert!(decode_csv("nx=1\n0").is_err());
        assert!(decode_csv("# nx=2 nz=1 extent_x=1 extent_z=1 unit=dimensionless\n1").is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(vals in proptest::collection::vec(-1e300f64..1e300, 12)) {
            let g = Grid::new(4, 3, 2.5e-3, 1e-3).unwrap();
            let f = ScalarField2D::from_values(g, Unit::Dimensionless, vals).unwrap();
            let back = decode_csv(&encode_csv(&f)).unwrap();
            prop_assert!(back.values().iter().zip(f.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }

        #[test]
        fn pgm_round_trip_preserves_levels(vals in proptest::collection::vec(0.0f64..=1.0, 6)) {
            let g = Grid::new(3, 2, 1.0, 1.0).unwrap();
            let f = ScalarField2D::from_values(g, Unit::IntensityNorm, vals).unwrap();
            prop_assert_eq!(decode_pgm(&encode_pgm(&f)).unwrap().pixels, quantize(&f));
        }
    }
}

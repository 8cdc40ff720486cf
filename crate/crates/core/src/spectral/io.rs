//! Field snapshot formats.
//!
//! Binary layout, little-endian throughout:
//!
//! | offset | type    | content                         |
//! |--------|---------|---------------------------------|
//! | 0      | u64     | `N`, points per axis            |
//! | 8      | f64     | `L`, box side length            |
//! | 16     | f64     | simulation time                 |
//! | 24     | f64 × N³| samples, row-major, last axis fastest |
//!
//! The CSV form has header `i,j,k,x,y,z,u` and one row per sample in the
//! same order. It is meant for small grids.

use std::io::{Read, Write};

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const SNAPSHOT_HEADER_BYTES: usize = 24;

pub fn write_snapshot<W: Write>(mut w: W, field: &Field, time: f64) -> Result<()> {
    let grid = field.grid();
    w.write_all(&(grid.n() as u64).to_le_bytes())?;
    w.write_all(&grid.length().to_le_bytes())?;
    w.write_all(&time.to_le_bytes())?;
    let mut buf = Vec::with_capacity(grid.len() * 8);
    for v in field.values() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a snapshot, returning the field and its time stamp.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<(Field, f64)> {
    let mut header = [0u8; SNAPSHOT_HEADER_BYTES];
    r.read_exact(&mut header)
        .map_err(|e| Error::Format(format!("truncated snapshot header: {e}")))?;
    let n = u64::from_le_bytes(header[0..8].try_into().unwrap());
    let length = f64::from_le_bytes(header[8..16].try_into().unwrap());
    let time = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let n = usize::try_from(n).map_err(|_| Error::Format(format!("grid size {n} too large")))?;
    if n > 4096 {
        return Err(Error::Format(format!("grid size {n} too large")));
    }
    let grid = Grid::new(n, length)?;
    let mut payload = vec![0u8; grid.len() * 8];
    r.read_exact(&mut payload)
        .map_err(|e| Error::Format(format!("truncated snapshot payload: {e}")))?;
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((Field::from_values(&grid, values)?, time))
}

pub fn write_csv<W: Write>(mut w: W, field: &Field) -> Result<()> {
    let grid = field.grid();
    writeln!(w, "i,j,k,x,y,z,u")?;
    for (idx, v) in field.values().iter().enumerate() {
        let (i, j, k) = grid.unravel(idx);
        writeln!(
            w,
            "{i},{j},{k},{},{},{},{v:e}",
            grid.coord(i),
            grid.coord(j),
            grid.coord(k)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let g = Grid::new(16, 2.5).unwrap();
        let f = Field::constant(&g, 1.5);
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 0.125).unwrap();
        assert_eq!(buf.len(), SNAPSHOT_HEADER_BYTES + 8 * 4096);
        assert_eq!(&buf[0..8], &16u64.to_le_bytes());
        assert_eq!(&buf[8..16], &2.5f64.to_le_bytes());
        assert_eq!(&buf[16..24], &0.125f64.to_le_bytes());
        assert_eq!(&buf[24..32], &1.5f64.to_le_bytes());
    }

    #[test]
    fn truncated_input_is_a_format_error() {
        let g = Grid::new(16, 1.0).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &Field::zeros(&g), 0.0).unwrap();
        buf.truncate(100);
        assert!(matches!(read_snapshot(&buf[..]), Err(Error::Format(_))));
        assert!(matches!(read_snapshot(&buf[..10]), Err(Error::Format(_))));
    }

    #[test]
    fn csv_rows() {
        let g = Grid::new(16, 16.0).unwrap();
        let f = Field::from_fn(&g, |x, _, _| x);
        let mut buf = Vec::new();
        write_csv(&mut buf, &f).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("i,j,k,x,y,z,u"));
        assert_eq!(lines.next(), Some("0,0,0,-8,-8,-8,-8e0"));
        assert_eq!(text.lines().count(), 4097);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn snapshot_round_trip(seed in any::<u64>(), time in -1e6f64..1e6, length in 0.1f64..100.0) {
            let g = Grid::new(16, length).unwrap();
            let f = Field::from_fn(&g, move |x, y, z| ((seed % 997) as f64 * x).sin() + y * z);
            let mut buf = Vec::new();
            write_snapshot(&mut buf, &f, time).unwrap();
            let (back, t) = read_snapshot(&buf[..]).unwrap();
            prop_assert_eq!(t, time);
            prop_assert_eq!(back, f);
        }
    }
}

//! Binary portable-pixmap (P6) rasters of selected columns.

use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

pub const GREEN: [u8; 3] = [0, 160, 0];
pub const WHITE: [u8; 3] = [255, 255, 255];
pub const PINK: [u8; 3] = [255, 105, 180];

pub fn color(v: u8) -> [u8; 3] {
    match v {
        0 => GREEN,
        1 => WHITE,
        _ => PINK,
    }
}

/// Observation order of the raster: cases first, then controls, each in
/// original order.
pub fn row_order(d: &Dataset) -> Vec<usize> {
    let (mut cases, controls): (Vec<usize>, Vec<usize>) = (0..d.n()).partition(|&i| d.y()[i] == 1);
    cases.extend(controls);
    cases
}

/// One pixel row per observation, one pixel column per selected variable.
pub fn raster_bytes(d: &Dataset, selected: &[usize]) -> Result<Vec<u8>> {
    if let Some(&j) = selected.iter().find(|&&j| j >= d.p()) {
        return Err(Error::invalid_argument(format!("variable {} outside 1..={}", j + 1, d.p())));
    }
    let mut out = format!("P6\n{} {}\n255\n", selected.len(), d.n()).into_bytes();
    for i in row_order(d) {
        for &j in selected {
            out.extend_from_slice(&color(d.value(i, j)));
        }
    }
    Ok(out)
}

pub fn raster_export(d: &Dataset, selected: &[usize], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, raster_bytes(d, selected)?)?;
    Ok(())
}

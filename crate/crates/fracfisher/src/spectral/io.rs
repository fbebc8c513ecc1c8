//! CSV export and import of profiles.
//!
//! The first line is a comment recording the grid and the mass deficit,
//! `# n_points=65536,x_max=200,mass_deficit=1.2e-5`, followed by a header row
//! `x,value` (physical space) or `xi,re,im` (frequency space).

use std::io::{BufRead, BufReader, Read, Write};

use rustfft::num_complex::Complex64;

use super::grid::GridSpec;
use super::profile::{RealProfile, SpectralProfile};
use crate::{Error, Result};

fn header<W: Write>(w: &mut W, grid: &GridSpec, mass_deficit: f64) -> Result<()> {
    writeln!(
        w,
        "# n_points={},x_max={},mass_deficit={}",
        grid.n_points(),
        grid.x_max(),
        mass_deficit
    )?;
    Ok(())
}

pub fn write_profile_csv<W: Write>(mut w: W, profile: &RealProfile) -> Result<()> {
    header(&mut w, profile.grid(), (1.0 - profile.integral()).abs())?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["x", "value"])?;
    for (j, v) in profile.samples().iter().enumerate() {
        csv.write_record([profile.grid().x(j).to_string(), v.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_spectrum_csv<W: Write>(mut w: W, spectrum: &SpectralProfile) -> Result<()> {
    header(&mut w, spectrum.grid(), (1.0 - spectrum.at_zero().re).abs())?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["xi", "re", "im"])?;
    for (k, v) in spectrum.samples().iter().enumerate() {
        csv.write_record([spectrum.grid().xi(k).to_string(), v.re.to_string(), v.im.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<GridSpec> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Format("missing `#` header line".into()))?;
    let mut n_points = None;
    let mut x_max = None;
    for field in body.split(',') {
        let (key, value) = field
            .trim()
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("bad header field `{field}`")))?;
        let bad = |_| Error::Format(format!("bad value for `{key}`"));
        match key {
            "n_points" => n_points = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "x_max" => x_max = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
            _ => {}
        }
    }
    match (n_points, x_max) {
        (Some(n), Some(x)) => GridSpec::new(n, x),
        _ => Err(Error::Format("header must record n_points and x_max".into())),
    }
}

fn read_columns<R: Read>(r: R, columns: usize) -> Result<(GridSpec, Vec<Vec<f64>>)> {
    let mut reader = BufReader::new(r);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let grid = parse_header(first.trim())?;
    let mut csv = csv::Reader::from_reader(reader);
    let mut rows = Vec::with_capacity(grid.n_points());
    for record in csv.records() {
        let record = record?;
        if record.len() != columns {
            return Err(Error::Format(format!(
                "expected {columns} columns, got {}",
                record.len()
            )));
        }
        let row = record
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("not a number: `{s}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.len() != grid.n_points() {
        return Err(Error::Format(format!(
            "{} rows for n_points={}",
            rows.len(),
            grid.n_points()
        )));
    }
    Ok((grid, rows))
}

pub fn read_profile_csv<R: Read>(r: R) -> Result<RealProfile> {
    let (grid, rows) = read_columns(r, 2)?;
    RealProfile::new(grid, rows.into_iter().map(|row| row[1]).collect())
}

pub fn read_spectrum_csv<R: Read>(r: R) -> Result<SpectralProfile> {
    let (grid, rows) = read_columns(r, 3)?;
    SpectralProfile::new(
        grid,
        rows.into_iter().map(|row| Complex64::new(row[1], row[2])).collect(),
    )
}

//! Mesh and table export for reconstructed surface grids.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::to_display;

use super::{GeometryReport, SurfaceGrid};

/// Writes the grid as a Wavefront OBJ mesh: one `v` record per node in
/// row-major order and two counterclockwise triangles per grid cell.
pub fn write_obj<T: Real, W: Write>(grid: &SurfaceGrid<T>, out: &mut W) -> Result<()> {
    let spec = grid.spec();
    for j in 0..spec.nv() {
        for i in 0..spec.nu() {
            let [x, y, z] = grid.position(i, j);
            writeln!(
                out,
                "v {:.16e} {:.16e} {:.16e}",
                to_display(x),
                to_display(y),
                to_display(z)
            )?;
        }
    }
    let row = spec.nu();
    for j in 0..spec.nv() - 1 {
        for i in 0..spec.nu() - 1 {
            let n00 = j * row + i + 1;
            let n10 = n00 + 1;
            let n01 = n00 + row;
            let n11 = n01 + 1;
            writeln!(out, "f {n00} {n10} {n11}")?;
            writeln!(out, "f {n00} {n11} {n01}")?;
        }
    }
    Ok(())
}

pub fn export_obj<T: Real>(grid: &SurfaceGrid<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_obj(grid, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes one row per node with position and pointwise geometry. Values
/// carry seventeen significant digits so a parsed-back table reproduces
/// the stored doubles exactly.
pub fn write_csv<T: Real, W: Write>(
    grid: &SurfaceGrid<T>,
    report: &GeometryReport<T>,
    out: &mut W,
) -> Result<()> {
    let spec = grid.spec();
    if report.spec() != spec {
        return Err(Error::Domain {
            func: "geometry report grid",
            value: report.nodes().len() as f64,
        });
    }
    writeln!(out, "u,v,x,y,z,K,d,I")?;
    for j in 0..spec.nv() {
        for i in 0..spec.nu() {
            let [x, y, z] = grid.position(i, j);
            let node = report.node(i, j);
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                to_display(spec.u_at(i)),
                to_display(spec.v_at(j)),
                to_display(x),
                to_display(y),
                to_display(z),
                to_display(node.k),
                to_display(node.d),
                to_display(node.invariant)
            )?;
        }
    }
    Ok(())
}

pub fn export_csv<T: Real>(
    grid: &SurfaceGrid<T>,
    report: &GeometryReport<T>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(grid, report, &mut out)?;
    out.flush()?;
    Ok(())
}

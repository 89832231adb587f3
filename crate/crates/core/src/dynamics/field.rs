use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Game2x2;

use super::{flow, PopulationState, RevisionProtocol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub p1: f64,
    pub p2: f64,
    pub dp1: f64,
    pub dp2: f64,
}

/// Uncapped flow on a `resolution × resolution` grid over the unit square,
/// `p2` as the outer loop.
pub fn vector_field(
    proto: &RevisionProtocol,
    g: &Game2x2,
    resolution: usize,
) -> Result<Vec<FieldSample>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("field resolution must be at least 2".into()));
    }
    let axis: Vec<f64> = (0..resolution)
        .map(|i| i as f64 / (resolution - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(resolution * resolution);
    for &p2 in &axis {
        for &p1 in &axis {
            let (dp1, dp2) = flow(proto, g, PopulationState { p1, p2 });
            out.push(FieldSample { p1, p2, dp1, dp2 });
        }
    }
    Ok(out)
}

/// CSV with columns `p1,p2,dp1,dp2`.
pub fn write_field_csv<W: Write>(field: &[FieldSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p1", "p2", "dp1", "dp2"])?;
    for s in field {
        w.write_record([
            s.p1.to_string(),
            s.p2.to_string(),
            s.dp1.to_string(),
            s.dp2.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

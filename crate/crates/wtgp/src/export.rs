//! Region, capacity and simulation artifacts.

use std::path::Path;

use serde::{Deserialize, Serialize};
use wtgp_core::regions::{AuxiliaryDist, Family, RateBounds, RateRegion, RawBounds, SearchParams, SupportSample};

use crate::error::{CliError, CliResult};

/// `x` with 9 significant digits, in plain decimal notation.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let mag = x.abs().log10().floor() as i32;
    let mut decimals = (8 - mag).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding up can carry into a new leading digit (0.9999999999 -> 1.0)
    if decimals > 0 && s.trim_start_matches('-').parse::<f64>().unwrap_or(0.0) >= 10f64.powi(mag + 1) {
        decimals -= 1;
        s = format!("{x:.decimals$}");
    }
    // -0.000000000 style results collapse to 0
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxRecord {
    pub u_size: usize,
    pub x_size: usize,
    /// Present for GP auxiliaries, which are indexed `[z][u][x]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_size: Option<usize>,
    pub params: Vec<f64>,
}

impl AuxRecord {
    pub fn from_aux(a: &AuxiliaryDist) -> Self {
        match a {
            AuxiliaryDist::Wiretap { u_size, x_size, p_ux } => AuxRecord {
                u_size: *u_size,
                x_size: *x_size,
                z_size: None,
                params: p_ux.clone(),
            },
            AuxiliaryDist::Gp {
                u_size,
                x_size,
                z_size,
                q_ux_given_z,
            } => AuxRecord {
                u_size: *u_size,
                x_size: *x_size,
                z_size: Some(*z_size),
                params: q_ux_given_z.clone(),
            },
        }
    }

    pub fn to_aux(&self) -> CliResult<AuxiliaryDist> {
        Ok(match self.z_size {
            None => AuxiliaryDist::wiretap(self.u_size, self.x_size, self.params.clone())?,
            Some(z) => AuxiliaryDist::gp(self.u_size, self.x_size, z, self.params.clone())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRecord {
    pub r1: f64,
    pub r2: f64,
    pub sum: Option<f64>,
    pub raw_r1: f64,
    pub raw_r2: f64,
    pub raw_sum: Option<f64>,
}

impl BoundsRecord {
    pub fn from_bounds(b: &RateBounds) -> Self {
        BoundsRecord {
            r1: b.r1,
            r2: b.r2,
            sum: b.sum,
            raw_r1: b.raw.r1,
            raw_r2: b.raw.r2,
            raw_sum: b.raw.sum,
        }
    }

    fn to_bounds(&self) -> RateBounds {
        RateBounds {
            r1: self.r1,
            r2: self.r2,
            sum: self.sum,
            raw: RawBounds {
                r1: self.raw_r1,
                r2: self.raw_r2,
                sum: self.raw_sum,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub lambda: [f64; 2],
    pub support_value: f64,
    pub point: [f64; 2],
    pub aux: AuxRecord,
    pub bounds: BoundsRecord,
    pub converged: bool,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchMeta {
    pub seed: u64,
    pub restarts: usize,
    pub directions: usize,
    pub tolerance: f64,
    pub max_passes: usize,
    pub u_size: Option<usize>,
    pub converged: bool,
    /// Hausdorff distance to the grid oracle, when one was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_hausdorff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_grid_delta: Option<f64>,
}

impl SearchMeta {
    pub fn new(p: &SearchParams, converged: bool) -> Self {
        SearchMeta {
            seed: p.seed,
            restarts: p.restarts,
            directions: p.directions,
            tolerance: p.tolerance,
            max_passes: p.max_passes,
            u_size: p.u_size,
            converged,
            oracle_hausdorff: None,
            oracle_grid_delta: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionFile {
    pub family: String,
    pub boundary: Vec<[f64; 2]>,
    pub samples: Vec<SampleRecord>,
    pub metadata: SearchMeta,
}

impl RegionFile {
    pub fn new(region: &RateRegion, metadata: SearchMeta) -> Self {
        RegionFile {
            family: region.family.name().into(),
            boundary: region.boundary.iter().map(|&(a, b)| [a, b]).collect(),
            samples: region
                .samples
                .iter()
                .map(|s| SampleRecord {
                    lambda: [s.lambda.0, s.lambda.1],
                    support_value: s.value,
                    point: [s.point.0, s.point.1],
                    aux: AuxRecord::from_aux(&s.aux),
                    bounds: BoundsRecord::from_bounds(&s.bounds),
                    converged: s.converged,
                    evaluations: s.evaluations,
                })
                .collect(),
            metadata,
        }
    }

    /// Rebuilds the region, keeping the stored boundary as is.
    pub fn to_region(&self) -> CliResult<RateRegion> {
        let samples = self
            .samples
            .iter()
            .map(|s| {
                Ok(SupportSample {
                    lambda: (s.lambda[0], s.lambda[1]),
                    value: s.support_value,
                    point: (s.point[0], s.point[1]),
                    aux: s.aux.to_aux()?,
                    bounds: s.bounds.to_bounds(),
                    converged: s.converged,
                    evaluations: s.evaluations,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(RateRegion {
            family: Family::parse(&self.family)?,
            samples,
            boundary: self.boundary.iter().map(|p| (p[0], p[1])).collect(),
        })
    }
}

/// CSV text with columns `lambda1, lambda2, support_value, R1, R2`, one row
/// per support sample. A region without samples gives one row per boundary
/// point with zero direction and support.
pub fn region_csv(region: &RateRegion) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| CliError::Config(format!("CSV encoding failed: {e}"));
    w.write_record(["lambda1", "lambda2", "support_value", "R1", "R2"]).map_err(wrap)?;
    if region.samples.is_empty() {
        for &(a, b) in &region.boundary {
            w.write_record(["0".into(), "0".into(), "0".into(), sig9(a), sig9(b)]).map_err(wrap)?;
        }
    } else {
        for s in &region.samples {
            w.write_record([
                sig9(s.lambda.0),
                sig9(s.lambda.1),
                sig9(s.value),
                sig9(s.point.0),
                sig9(s.point.1),
            ])
            .map_err(wrap)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Config(format!("CSV encoding failed: {e}")))
}

pub fn to_json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable value");
    b.push(b'\n');
    b
}

/// Writes a region as CSV or JSON. IO errors surface unchanged.
pub fn export_region(region: &RateRegion, meta: SearchMeta, path: &Path, json: bool) -> CliResult<()> {
    let bytes = if json {
        to_json_bytes(&RegionFile::new(region, meta))
    } else {
        region_csv(region)?
    };
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn import_region(path: &Path) -> CliResult<(RateRegion, SearchMeta)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let f: RegionFile = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok((f.to_region()?, f.metadata))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(0.25293250129808), "0.252932501");
        assert_eq!(sig9(123.456789012), "123.456789");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(-1.5e-3), "-0.00150000000");
        assert_eq!(sig9(0.99999999999), "1.00000000");
    }
}

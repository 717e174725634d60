//! Channel files.
//!
//! ```json
//! {
//!   "kind": "wiretap",
//!   "alphabets": { "x": 2, "y1": 2, "y2": 2, "z": 2 },
//!   "law": [[[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.5]]], ...],
//!   "informed_receiver": false,
//!   "coop_capacity": 0.5,
//!   "state_dist": [0.5, 0.5]
//! }
//! ```
//!
//! Wiretap laws are indexed `[x][y1][y2][z]`, GP laws `[x][z][y1][y2]`. A
//! point-to-point model omits `y2` (and its law level); `y` is accepted for
//! `y1`. An alphabet is a size or a list of symbol labels. GP files need
//! `state_dist`; on a wiretap file it is the default target `q_Z`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wtgp_core::channel::{GpModel, WiretapModel};
use wtgp_core::prob::Pmf;

use crate::error::{CliError, CliResult};

/// Row-sum tolerance for files.
pub const FILE_TOLERANCE: f64 = 1e-9;

/// True when `total` is within [`FILE_TOLERANCE`] of one. A few ulps of
/// slack keep a decimal row such as 0.999999999 on the accepted side after
/// summation error.
pub fn sums_to_one(total: f64) -> bool {
    (total - 1.0).abs() <= FILE_TOLERANCE + 4.0 * f64::EPSILON
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Wiretap,
    Gp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Alphabet {
    Size(usize),
    Labels(Vec<String>),
}

impl Alphabet {
    fn size(&self) -> usize {
        match self {
            Alphabet::Size(n) => *n,
            Alphabet::Labels(l) => l.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub kind: Kind,
    pub alphabets: BTreeMap<String, Alphabet>,
    pub law: Value,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informed_receiver: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coop_capacity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_dist: Option<Vec<f64>>,
    /// `(x, z)` cells of a GP law that were filled uniform.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub null_cells: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedModel {
    Wiretap {
        model: WiretapModel,
        state_dist: Option<Pmf>,
    },
    Gp(GpModel),
}

struct Sizes {
    x: usize,
    y1: usize,
    y2: Option<usize>,
    z: usize,
}

fn alphabet_sizes(path: &Path, file: &ChannelFile) -> CliResult<Sizes> {
    let mismatch = |message: String| CliError::Alphabet {
        path: path.to_path_buf(),
        message,
    };
    for k in file.alphabets.keys() {
        if !["x", "y", "y1", "y2", "z"].contains(&k.as_str()) {
            return Err(mismatch(format!("unknown alphabet \"{k}\"")));
        }
    }
    if file.alphabets.contains_key("y") && file.alphabets.contains_key("y1") {
        return Err(mismatch("both \"y\" and \"y1\" given".into()));
    }
    let get = |k: &str| file.alphabets.get(k).map(Alphabet::size);
    let need = |k: &str| get(k).ok_or_else(|| mismatch(format!("missing alphabet \"{k}\"")));
    let sizes = Sizes {
        x: need("x")?,
        y1: get("y1").or(get("y")).ok_or_else(|| mismatch("missing alphabet \"y1\"".into()))?,
        y2: get("y2"),
        z: need("z")?,
    };
    if [sizes.x, sizes.y1, sizes.y2.unwrap_or(1), sizes.z].contains(&0) {
        return Err(mismatch("alphabets must be non-empty".into()));
    }
    Ok(sizes)
}

/// Flattens a nested array of the given shape, row-major.
fn flatten(path: &Path, v: &Value, shape: &[usize], names: &[&str]) -> CliResult<Vec<f64>> {
    fn walk(
        path: &Path,
        v: &Value,
        shape: &[usize],
        names: &[&str],
        at: &mut Vec<usize>,
        out: &mut Vec<f64>,
    ) -> CliResult<()> {
        let loc = || {
            let idx: String = at.iter().map(|i| format!("[{i}]")).collect();
            format!("law{idx}")
        };
        let Some((&n, rest)) = shape.split_first() else {
            let p = v.as_f64().ok_or_else(|| CliError::Json {
                path: path.to_path_buf(),
                message: format!("{} is not a number", loc()),
            })?;
            if !p.is_finite() || p < 0.0 {
                return Err(CliError::Negative {
                    path: path.to_path_buf(),
                    cell: at.clone(),
                    value: p,
                });
            }
            out.push(p);
            return Ok(());
        };
        let arr = v.as_array().ok_or_else(|| CliError::Alphabet {
            path: path.to_path_buf(),
            message: format!("{} should be an array over {}", loc(), names[at.len()]),
        })?;
        if arr.len() != n {
            return Err(CliError::Alphabet {
                path: path.to_path_buf(),
                message: format!("{} has {} entries, |{}| = {n}", loc(), arr.len(), names[at.len()]),
            });
        }
        for (i, e) in arr.iter().enumerate() {
            at.push(i);
            walk(path, e, rest, names, at, out)?;
            at.pop();
        }
        Ok(())
    }
    let mut out = Vec::with_capacity(shape.iter().product());
    walk(path, v, shape, names, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Checks that each row, indexed by the `lead` axes, sums to one within
/// [`FILE_TOLERANCE`] and renormalizes it.
fn normalize_rows(path: &Path, mass: &mut [f64], lead: &[usize]) -> CliResult<()> {
    let rows: usize = lead.iter().product();
    let width = mass.len() / rows;
    for (r, row) in mass.chunks_mut(width).enumerate() {
        let total: f64 = row.iter().sum();
        if !sums_to_one(total) {
            let mut idx = vec![0; lead.len()];
            let mut rest = r;
            for (k, &n) in lead.iter().enumerate().rev() {
                idx[k] = rest % n;
                rest /= n;
            }
            return Err(CliError::RowSum {
                path: path.to_path_buf(),
                row: idx,
                total,
            });
        }
        row.iter_mut().for_each(|p| *p /= total);
    }
    Ok(())
}

fn state_pmf(path: &Path, v: &[f64], nz: usize) -> CliResult<Pmf> {
    if v.len() != nz {
        return Err(CliError::Alphabet {
            path: path.to_path_buf(),
            message: format!("state_dist has {} entries, |z| = {nz}", v.len()),
        });
    }
    if let Some((i, &p)) = v.iter().enumerate().find(|(_, p)| !p.is_finite() || **p < 0.0) {
        return Err(CliError::Negative {
            path: path.to_path_buf(),
            cell: vec![i],
            value: p,
        });
    }
    let mut m = v.to_vec();
    normalize_rows(path, &mut m, &[1])?;
    Ok(Pmf::new(m)?)
}

impl ChannelFile {
    pub fn parse(path: &Path, text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Json {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Validates the file and builds the model.
    pub fn to_model(&self, path: &Path) -> CliResult<LoadedModel> {
        let s = alphabet_sizes(path, self)?;
        let y2 = s.y2.unwrap_or(1);
        let mut shape = match self.kind {
            Kind::Wiretap => vec![s.x, s.y1, y2, s.z],
            Kind::Gp => vec![s.x, s.z, s.y1, y2],
        };
        let mut names = match self.kind {
            Kind::Wiretap => vec!["x", "y1", "y2", "z"],
            Kind::Gp => vec!["x", "z", "y1", "y2"],
        };
        if s.y2.is_none() {
            let k = names.iter().position(|&n| n == "y2").unwrap();
            shape.remove(k);
            names.remove(k);
        }
        let mut law = flatten(path, &self.law, &shape, &names)?;
        if let Some(c) = self.coop_capacity {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(CliError::Config(format!("coop_capacity {c} must be non-negative")));
            }
        }
        match self.kind {
            Kind::Wiretap => {
                if !self.null_cells.is_empty() {
                    return Err(CliError::Alphabet {
                        path: path.to_path_buf(),
                        message: "null_cells only apply to GP laws".into(),
                    });
                }
                normalize_rows(path, &mut law, &[s.x])?;
                let model = WiretapModel::new(s.x, s.y1, y2, s.z, law)?
                    .with_informed_receiver(self.informed_receiver)
                    .with_coop_capacity(self.coop_capacity)?;
                let state_dist = self
                    .state_dist
                    .as_deref()
                    .map(|v| state_pmf(path, v, s.z))
                    .transpose()?;
                Ok(LoadedModel::Wiretap { model, state_dist })
            }
            Kind::Gp => {
                normalize_rows(path, &mut law, &[s.x, s.z])?;
                let q = self.state_dist.as_deref().ok_or_else(|| CliError::Json {
                    path: path.to_path_buf(),
                    message: "GP files need \"state_dist\"".into(),
                })?;
                let q = state_pmf(path, q, s.z)?;
                let cells = self.null_cells.iter().map(|c| (c[0], c[1])).collect();
                let model = GpModel::new(q, s.x, s.y1, y2, law)?
                    .with_null_cells(cells)?
                    .with_informed_receiver(self.informed_receiver)
                    .with_coop_capacity(self.coop_capacity)?;
                Ok(LoadedModel::Gp(model))
            }
        }
    }

    fn sizes_map(x: usize, y1: usize, y2: usize, z: usize) -> BTreeMap<String, Alphabet> {
        let mut m = BTreeMap::new();
        m.insert("x".into(), Alphabet::Size(x));
        m.insert("y1".into(), Alphabet::Size(y1));
        if y2 > 1 {
            m.insert("y2".into(), Alphabet::Size(y2));
        }
        m.insert("z".into(), Alphabet::Size(z));
        m
    }

    pub fn from_wiretap(m: &WiretapModel, state_dist: Option<&Pmf>) -> Self {
        let (x, y1, y2, z) = (m.x_size(), m.y1_size(), m.y2_size(), m.z_size());
        let law = nest(m.law().rows(), &[x, y1, y2, z], (y2 == 1).then_some(2));
        ChannelFile {
            kind: Kind::Wiretap,
            alphabets: Self::sizes_map(x, y1, y2, z),
            law,
            informed_receiver: m.informed_receiver,
            coop_capacity: m.coop_capacity,
            state_dist: state_dist.map(|q| q.mass().to_vec()),
            null_cells: Vec::new(),
        }
    }

    pub fn from_gp(m: &GpModel) -> Self {
        let (x, z, y1, y2) = (m.x_size(), m.z_size(), m.y1_size(), m.y2_size());
        ChannelFile {
            kind: Kind::Gp,
            alphabets: Self::sizes_map(x, y1, y2, z),
            law: nest(m.law().rows(), &[x, z, y1, y2], (y2 == 1).then_some(3)),
            informed_receiver: m.informed_receiver,
            coop_capacity: m.coop_capacity,
            state_dist: Some(m.state_dist().mass().to_vec()),
            null_cells: m.null_cells().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// Nests a flat row-major array, dropping the unit-size level `drop` if
/// given (removing a size-1 level does not change the layout).
fn nest(flat: &[f64], shape: &[usize], drop: Option<usize>) -> Value {
    let mut shape = shape.to_vec();
    if let Some(k) = drop {
        shape.remove(k);
    }
    fn go(flat: &[f64], shape: &[usize]) -> Value {
        match shape.split_first() {
            None => Value::from(flat[0]),
            Some((&n, rest)) => {
                let w: usize = rest.iter().product();
                Value::Array((0..n).map(|i| go(&flat[i * w..(i + 1) * w], rest)).collect())
            }
        }
    }
    go(flat, &shape)
}

/// Reads and validates a channel file.
pub fn parse_channel_file(path: &Path) -> CliResult<LoadedModel> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ChannelFile::parse(path, &text)?.to_model(path)
}

/// Human-readable structure report.
pub fn classification_report(m: &LoadedModel) -> String {
    let (kind, sizes, flags, informed) = match m {
        LoadedModel::Wiretap { model, .. } => (
            "wiretap",
            [model.x_size(), model.y1_size(), model.y2_size(), model.z_size()],
            model.classify(),
            model.informed_receiver,
        ),
        LoadedModel::Gp(model) => (
            "gp",
            [model.x_size(), model.y1_size(), model.y2_size(), model.z_size()],
            model.classify(),
            model.informed_receiver,
        ),
    };
    let yes = |b: bool| if b { "yes" } else { "no" };
    let mut s = format!(
        "{kind} |X|={} |Y1|={} |Y2|={} |Z|={}\nSD: {}\nPD: {} (residual {:.3e})\n",
        sizes[0],
        sizes[1],
        sizes[2],
        sizes[3],
        yes(flags.is_sd()),
        yes(flags.is_pd()),
        flags.pd_residual
    );
    if informed {
        s.push_str("receiver 1 observes Z\n");
    }
    if let LoadedModel::Gp(g) = m {
        if !g.null_cells().is_empty() {
            s.push_str(&format!("null cells (x,z): {:?}\n", g.null_cells()));
        }
    }
    s
}

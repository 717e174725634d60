//! Wiretap broadcast channels, state-dependent (GP) broadcast channels, and
//! the map from the first kind to the second.
//!
//! A wiretap law is a kernel `X -> (Y1, Y2, Z)` indexed `[x][y1][y2][z]`.
//! A GP law is a kernel `(X, Z) -> (Y1, Y2)` indexed `[x][z][y1][y2]`, with
//! the state `Z` drawn i.i.d. from `state_dist` and known to the encoder.
//! A singleton `Y2` alphabet gives the point-to-point case.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::prob::{Axis, Pmf, StochasticKernel};
use crate::{Error, Result};

/// Mass a row must carry on one symbol to count as deterministic.
pub const SD_TOLERANCE: f64 = 1e-12;
/// Largest factorization residual accepted by the physical-degradation test.
pub const PD_TOLERANCE: f64 = 1e-9;

fn check_coop(c: Option<f64>) -> Result<()> {
    match c {
        Some(v) if !(v >= 0.0 && v.is_finite()) => Err(Error::Argument(format!(
            "cooperation capacity {v} must be finite and non-negative"
        ))),
        _ => Ok(()),
    }
}

/// A two-receiver wiretap broadcast channel `p(y1, y2, z | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapModel {
    law: StochasticKernel,
    /// Receiver 1 also observes the eavesdropper output `Z`.
    pub informed_receiver: bool,
    /// Rate of a one-way link from receiver 1 to receiver 2, if present.
    pub coop_capacity: Option<f64>,
}

impl WiretapModel {
    /// Builds a model from a flat law indexed `[x][y1][y2][z]`.
    pub fn new(x: usize, y1: usize, y2: usize, z: usize, law: Vec<f64>) -> Result<Self> {
        let kernel = StochasticKernel::new(
            vec![Axis::new("x", x)],
            vec![Axis::new("y1", y1), Axis::new("y2", y2), Axis::new("z", z)],
            law,
        )?;
        Ok(WiretapModel {
            law: kernel,
            informed_receiver: false,
            coop_capacity: None,
        })
    }

    /// Point-to-point wiretap channel from a law indexed `[x][y][z]`.
    pub fn point_to_point(x: usize, y: usize, z: usize, law: Vec<f64>) -> Result<Self> {
        Self::new(x, y, 1, z, law)
    }

    /// Receivers conditionally independent given `X`: `p(y1,y2|x) p(z|x)`.
    /// `main` is indexed `[x][y1][y2]` and `eve` is indexed `[x][z]`.
    pub fn independent(
        x: usize,
        y1: usize,
        y2: usize,
        z: usize,
        main: &[f64],
        eve: &[f64],
    ) -> Result<Self> {
        if main.len() != x * y1 * y2 || eve.len() != x * z {
            return Err(Error::Shape("component laws do not match alphabets".into()));
        }
        let mut law = Vec::with_capacity(x * y1 * y2 * z);
        for xi in 0..x {
            for m in 0..y1 * y2 {
                for zi in 0..z {
                    law.push(main[xi * y1 * y2 + m] * eve[xi * z + zi]);
                }
            }
        }
        Self::new(x, y1, y2, z, law)
    }

    pub fn with_informed_receiver(mut self, informed: bool) -> Self {
        self.informed_receiver = informed;
        self
    }

    pub fn with_coop_capacity(mut self, c12: Option<f64>) -> Result<Self> {
        check_coop(c12)?;
        self.coop_capacity = c12;
        Ok(self)
    }

    pub fn law(&self) -> &StochasticKernel {
        &self.law
    }

    pub fn x_size(&self) -> usize {
        self.law.inputs()[0].size
    }

    pub fn y1_size(&self) -> usize {
        self.law.outputs()[0].size
    }

    pub fn y2_size(&self) -> usize {
        self.law.outputs()[1].size
    }

    pub fn z_size(&self) -> usize {
        self.law.outputs()[2].size
    }

    pub fn is_point_to_point(&self) -> bool {
        self.y2_size() == 1
    }

    /// `p(y1, y2, z | x)`.
    #[inline]
    pub fn prob(&self, x: usize, y1: usize, y2: usize, z: usize) -> f64 {
        let (n1, n2, nz) = (self.y1_size(), self.y2_size(), self.z_size());
        self.law.rows()[((x * n1 + y1) * n2 + y2) * nz + z]
    }

    /// `p(z | x)` as a flat `[x][z]` table.
    pub fn eve_law(&self) -> Vec<f64> {
        let (nx, nz) = (self.x_size(), self.z_size());
        let mut out = vec![0.0; nx * nz];
        for x in 0..nx {
            for (i, &v) in self.law.row(x).iter().enumerate() {
                out[x * nz + i % nz] += v;
            }
        }
        out
    }

    /// The `Z` marginal under input distribution `p_x`.
    pub fn z_marginal(&self, p_x: &[f64]) -> Result<Pmf> {
        if p_x.len() != self.x_size() {
            return Err(Error::Shape("input distribution does not match |X|".into()));
        }
        let nz = self.z_size();
        let eve = self.eve_law();
        let mut q = vec![0.0; nz];
        for (x, &px) in p_x.iter().enumerate() {
            for z in 0..nz {
                q[z] += px * eve[x * nz + z];
            }
        }
        Ok(Pmf::from_raw(q))
    }

    /// Default state distribution for the GP transformation: the `Z`
    /// marginal under the uniform input.
    pub fn default_state_dist(&self) -> Pmf {
        let nx = self.x_size();
        self.z_marginal(&vec![1.0 / nx as f64; nx])
            .expect("uniform input matches alphabet")
    }

    pub fn classify(&self) -> ClassFlags {
        let (n1, n2, nz) = (self.y1_size(), self.y2_size(), self.z_size());
        // Rows indexed by x; receiver-1 marginal per row, and the (y1, z)
        // factor for the degradation test laid out as [row][y1][rest].
        let rows = self.x_size();
        let mut p1 = vec![0.0; rows * n1];
        for x in 0..rows {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    for z in 0..nz {
                        p1[x * n1 + y1] += self.prob(x, y1, y2, z);
                    }
                }
            }
        }
        let sd = deterministic_map(&p1, rows, n1, &[]);
        // Reorder the law to [row][y1][z][y2] so y2 is innermost.
        let mut law = vec![0.0; rows * n1 * nz * n2];
        for x in 0..rows {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    for z in 0..nz {
                        law[((x * n1 + y1) * nz + z) * n2 + y2] = self.prob(x, y1, y2, z);
                    }
                }
            }
        }
        let (pd, pd_residual) = degradation_factor(&law, rows, n1, nz, n2, &[]);
        ClassFlags {
            sd,
            pd: if pd_residual < PD_TOLERANCE { Some(pd) } else { None },
            pd_residual,
        }
    }
}

/// A state-dependent broadcast channel `q(y1, y2 | x, z)` with i.i.d. state
/// `Z ~ state_dist` known non-causally at the encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct GpModel {
    state_dist: Pmf,
    law: StochasticKernel,
    pub informed_receiver: bool,
    pub coop_capacity: Option<f64>,
    null_cells: Vec<(usize, usize)>,
}

impl GpModel {
    /// Builds a model from a flat law indexed `[x][z][y1][y2]`.
    pub fn new(state_dist: Pmf, x: usize, y1: usize, y2: usize, law: Vec<f64>) -> Result<Self> {
        let z = state_dist.len();
        let kernel = StochasticKernel::new(
            vec![Axis::new("x", x), Axis::new("z", z)],
            vec![Axis::new("y1", y1), Axis::new("y2", y2)],
            law,
        )?;
        Ok(GpModel {
            state_dist,
            law: kernel,
            informed_receiver: false,
            coop_capacity: None,
            null_cells: Vec::new(),
        })
    }

    pub fn with_informed_receiver(mut self, informed: bool) -> Self {
        self.informed_receiver = informed;
        self
    }

    pub fn with_coop_capacity(mut self, c12: Option<f64>) -> Result<Self> {
        check_coop(c12)?;
        self.coop_capacity = c12;
        Ok(self)
    }

    /// Marks `(x, z)` cells as uniform-filled placeholders, as produced by
    /// [`analogous_gpbc`]. Used when reading such a model back from a file.
    pub fn with_null_cells(mut self, mut cells: Vec<(usize, usize)>) -> Result<Self> {
        let (nx, nz) = (self.x_size(), self.z_size());
        if let Some(&(x, z)) = cells.iter().find(|&&(x, z)| x >= nx || z >= nz) {
            return Err(Error::Shape(format!("null cell ({x}, {z}) outside {nx}x{nz}")));
        }
        cells.sort_unstable();
        cells.dedup();
        self.law = StochasticKernel::from_parts(
            self.law.inputs().to_vec(),
            self.law.outputs().to_vec(),
            self.law.rows().to_vec(),
            cells.iter().map(|&(x, z)| x * nz + z).collect(),
        );
        self.null_cells = cells;
        Ok(self)
    }

    pub fn state_dist(&self) -> &Pmf {
        &self.state_dist
    }

    pub fn law(&self) -> &StochasticKernel {
        &self.law
    }

    pub fn x_size(&self) -> usize {
        self.law.inputs()[0].size
    }

    pub fn z_size(&self) -> usize {
        self.law.inputs()[1].size
    }

    pub fn y1_size(&self) -> usize {
        self.law.outputs()[0].size
    }

    pub fn y2_size(&self) -> usize {
        self.law.outputs()[1].size
    }

    pub fn is_point_to_point(&self) -> bool {
        self.y2_size() == 1
    }

    /// `(x, z)` cells whose law row was undefined and filled uniform.
    pub fn null_cells(&self) -> &[(usize, usize)] {
        &self.null_cells
    }

    /// `q(y1, y2 | x, z)`.
    #[inline]
    pub fn prob(&self, x: usize, z: usize, y1: usize, y2: usize) -> f64 {
        let (nz, n1, n2) = (self.z_size(), self.y1_size(), self.y2_size());
        self.law.rows()[((x * nz + z) * n1 + y1) * n2 + y2]
    }

    /// Structural tests; uniform-filled null cells are ignored.
    pub fn classify(&self) -> ClassFlags {
        let (nx, nz, n1, n2) = (self.x_size(), self.z_size(), self.y1_size(), self.y2_size());
        let rows = nx * nz;
        let mut p1 = vec![0.0; rows * n1];
        for r in 0..rows {
            for y1 in 0..n1 {
                p1[r * n1 + y1] = self.law.row(r)[y1 * n2..(y1 + 1) * n2].iter().sum();
            }
        }
        let skip = self.law.null_rows();
        let sd = deterministic_map(&p1, rows, n1, skip);
        let (pd, pd_residual) = degradation_factor(self.law.rows(), rows, n1, 1, n2, skip);
        ClassFlags {
            sd,
            pd: if pd_residual < PD_TOLERANCE { Some(pd) } else { None },
            pd_residual,
        }
    }
}

/// Outcome of the structural tests on a model.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFlags {
    /// When receiver 1 is semi-deterministic: its output as a function of the
    /// kernel input row (`x` for wiretap, `x * |Z| + z` for GP).
    pub sd: Option<Vec<usize>>,
    /// When receiver 2 is a physically degraded version of receiver 1: the
    /// kernel `p(y2 | y1)`.
    pub pd: Option<StochasticKernel>,
    /// Largest absolute residual of the best degradation factorization.
    pub pd_residual: f64,
}

impl ClassFlags {
    pub fn is_sd(&self) -> bool {
        self.sd.is_some()
    }

    pub fn is_pd(&self) -> bool {
        self.pd.is_some()
    }
}

/// Rows listed in `skip` (uniform-filled null rows) pass every test and map
/// to output 0.
fn deterministic_map(p1: &[f64], rows: usize, n1: usize, skip: &[usize]) -> Option<Vec<usize>> {
    (0..rows)
        .map(|r| {
            if skip.contains(&r) {
                return Some(0);
            }
            p1[r * n1..(r + 1) * n1]
                .iter()
                .position(|&v| v >= 1.0 - SD_TOLERANCE)
        })
        .collect()
}

/// Best factorization `law[r][y1][s][y2] ~ a[r][y1][s] k[y1][y2]` in the
/// least-squares sense. The first factor is forced to be the `(y1, s)`
/// marginal, so the alternating scheme converges in one step:
/// `k = sum a P / sum a^2`, whose rows sum to one automatically.
fn degradation_factor(
    law: &[f64],
    rows: usize,
    n1: usize,
    ns: usize,
    n2: usize,
    skip: &[usize],
) -> (StochasticKernel, f64) {
    let mut num = vec![0.0; n1 * n2];
    let mut den = vec![0.0; n1];
    let mut a = vec![0.0; rows * n1 * ns];
    for r in (0..rows).filter(|r| !skip.contains(r)) {
        for y1 in 0..n1 {
            for s in 0..ns {
                let base = ((r * n1 + y1) * ns + s) * n2;
                let cell = &law[base..base + n2];
                let av: f64 = cell.iter().sum();
                a[(r * n1 + y1) * ns + s] = av;
                den[y1] += av * av;
                for (y2, &p) in cell.iter().enumerate() {
                    num[y1 * n2 + y2] += av * p;
                }
            }
        }
    }
    let mut k = vec![0.0; n1 * n2];
    let mut null_rows = Vec::new();
    for y1 in 0..n1 {
        if den[y1] > 0.0 {
            for y2 in 0..n2 {
                k[y1 * n2 + y2] = num[y1 * n2 + y2] / den[y1];
            }
        } else {
            k[y1 * n2..(y1 + 1) * n2].iter_mut().for_each(|v| *v = 1.0 / n2 as f64);
            null_rows.push(y1);
        }
    }
    let mut residual: f64 = 0.0;
    for r in (0..rows).filter(|r| !skip.contains(r)) {
        for y1 in 0..n1 {
            for s in 0..ns {
                let av = a[(r * n1 + y1) * ns + s];
                let base = ((r * n1 + y1) * ns + s) * n2;
                for y2 in 0..n2 {
                    residual = residual.max((law[base + y2] - av * k[y1 * n2 + y2]).abs());
                }
            }
        }
    }
    let kernel = StochasticKernel::from_parts(
        vec![Axis::new("y1", n1)],
        vec![Axis::new("y2", n2)],
        k,
        null_rows,
    );
    (kernel, residual)
}

/// The GP broadcast channel analogous to a wiretap channel:
/// `q(y1, y2 | x, z) = p(y1, y2, z | x) / p(z | x)` with state distribution
/// `q_z` (the default state distribution when `None`). Cells with
/// `p(z | x) = 0` are filled uniform and listed in
/// [`GpModel::null_cells`]. The informed-receiver flag and cooperation
/// capacity carry over.
pub fn analogous_gpbc(wt: &WiretapModel, q_z: Option<&Pmf>) -> Result<GpModel> {
    let (nx, n1, n2, nz) = (wt.x_size(), wt.y1_size(), wt.y2_size(), wt.z_size());
    let state = match q_z {
        Some(q) if q.len() != nz => {
            return Err(Error::Shape(format!(
                "state distribution has {} symbols, |Z| = {}",
                q.len(),
                nz
            )))
        }
        Some(q) => q.clone(),
        None => wt.default_state_dist(),
    };
    let eve = wt.eve_law();
    let mut law = vec![0.0; nx * nz * n1 * n2];
    let mut null_cells = Vec::new();
    for x in 0..nx {
        for z in 0..nz {
            let pz = eve[x * nz + z];
            let base = (x * nz + z) * n1 * n2;
            if pz > 0.0 {
                for y1 in 0..n1 {
                    for y2 in 0..n2 {
                        law[base + y1 * n2 + y2] = wt.prob(x, y1, y2, z) / pz;
                    }
                }
            } else {
                law[base..base + n1 * n2]
                    .iter_mut()
                    .for_each(|v| *v = 1.0 / (n1 * n2) as f64);
                null_cells.push((x, z));
            }
        }
    }
    let kernel = StochasticKernel::from_parts(
        vec![Axis::new("x", nx), Axis::new("z", nz)],
        vec![Axis::new("y1", n1), Axis::new("y2", n2)],
        law,
        null_cells.iter().map(|&(x, z)| x * nz + z).collect(),
    );
    Ok(GpModel {
        state_dist: state,
        law: kernel,
        informed_receiver: wt.informed_receiver,
        coop_capacity: wt.coop_capacity,
        null_cells,
    })
}

/// Replaces receiver 1's output by the pair `(Y1, Z)`, encoded as
/// `y1 * |Z| + z`, and sets the informed flag.
pub fn informed_lift_wiretap(wt: &WiretapModel) -> WiretapModel {
    let (nx, n1, n2, nz) = (wt.x_size(), wt.y1_size(), wt.y2_size(), wt.z_size());
    let m1 = n1 * nz;
    let mut law = vec![0.0; nx * m1 * n2 * nz];
    for x in 0..nx {
        for y1 in 0..n1 {
            for y2 in 0..n2 {
                for z in 0..nz {
                    let y = y1 * nz + z;
                    law[((x * m1 + y) * n2 + y2) * nz + z] = wt.prob(x, y1, y2, z);
                }
            }
        }
    }
    let kernel = StochasticKernel::from_parts(
        vec![Axis::new("x", nx)],
        vec![Axis::new("y1", m1), Axis::new("y2", n2), Axis::new("z", nz)],
        law,
        Vec::new(),
    );
    WiretapModel {
        law: kernel,
        informed_receiver: true,
        coop_capacity: wt.coop_capacity,
    }
}

/// GP counterpart of [`informed_lift_wiretap`].
pub fn informed_lift_gp(gp: &GpModel) -> GpModel {
    let (nx, nz, n1, n2) = (gp.x_size(), gp.z_size(), gp.y1_size(), gp.y2_size());
    let m1 = n1 * nz;
    let mut law = vec![0.0; nx * nz * m1 * n2];
    for x in 0..nx {
        for z in 0..nz {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    let y = y1 * nz + z;
                    law[((x * nz + z) * m1 + y) * n2 + y2] = gp.prob(x, z, y1, y2);
                }
            }
        }
    }
    let kernel = StochasticKernel::from_parts(
        vec![Axis::new("x", nx), Axis::new("z", nz)],
        vec![Axis::new("y1", m1), Axis::new("y2", n2)],
        law,
        gp.law.null_rows().to_vec(),
    );
    GpModel {
        state_dist: gp.state_dist.clone(),
        law: kernel,
        informed_receiver: true,
        coop_capacity: gp.coop_capacity,
        null_cells: gp.null_cells.clone(),
    }
}

/// Crossover kernel of a binary symmetric channel, indexed `[x][y]`.
pub fn bsc(p: f64) -> [f64; 4] {
    [1.0 - p, p, p, 1.0 - p]
}

/// Binary erasure channel, indexed `[x][y]` with `y = 2` the erasure.
pub fn bec(e: f64) -> [f64; 6] {
    [1.0 - e, 0.0, e, 0.0, 1.0 - e, e]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn noiseless_sd() -> WiretapModel {
        // Y1 = Y2 = X, Z constant.
        let law = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        WiretapModel::new(2, 2, 2, 1, law).unwrap()
    }

    #[test]
    fn sd_and_pd_detection() {
        let flags = noiseless_sd().classify();
        assert_eq!(flags.sd, Some(vec![0, 1]));
        assert!(flags.is_pd());

        // Receivers independent BSCs: neither semi-deterministic nor degraded.
        let b1 = bsc(0.1);
        let b2 = bsc(0.2);
        let mut main = vec![0.0; 8];
        for x in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    main[x * 4 + y1 * 2 + y2] = b1[x * 2 + y1] * b2[x * 2 + y2];
                }
            }
        }
        let wt = WiretapModel::independent(2, 2, 2, 1, &main, &[1.0, 1.0]).unwrap();
        let flags = wt.classify();
        assert!(!flags.is_sd());
        assert!(!flags.is_pd());
    }

    #[test]
    fn degraded_cascade_recovers_factor() {
        // Y1 = BSC(0.1)(X), Y2 = BSC(0.2)(Y1).
        let b1 = bsc(0.1);
        let b2 = bsc(0.2);
        let mut main = vec![0.0; 8];
        for x in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    main[x * 4 + y1 * 2 + y2] = b1[x * 2 + y1] * b2[y1 * 2 + y2];
                }
            }
        }
        let eve = bsc(0.3);
        let wt = WiretapModel::independent(2, 2, 2, 2, &main, &eve).unwrap();
        let flags = wt.classify();
        let k = flags.pd.expect("degraded");
        for (a, b) in k.rows().iter().zip(b2) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn analogous_gp_law_and_null_cells() {
        // Z = X exactly, so p(z | x) vanishes off the diagonal.
        let wt = WiretapModel::point_to_point(2, 2, 2, vec![0.9, 0.0, 0.1, 0.0, 0.0, 0.2, 0.0, 0.8])
            .unwrap()
            .with_informed_receiver(true);
        let gp = analogous_gpbc(&wt, None).unwrap();
        assert_eq!(gp.null_cells(), &[(0, 1), (1, 0)]);
        assert_abs_diff_eq!(gp.prob(0, 0, 0, 0), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(gp.prob(1, 1, 1, 0), 0.8, epsilon = 1e-15);
        assert_eq!(gp.prob(0, 1, 0, 0), 0.5);
        assert!(gp.informed_receiver);
        assert_eq!(gp.state_dist().mass(), &[0.5, 0.5]);
    }

    #[test]
    fn state_dist_size_checked() {
        let wt = noiseless_sd();
        assert!(analogous_gpbc(&wt, Some(&Pmf::uniform(3))).is_err());
    }

    #[test]
    fn gp_sd_detection() {
        // Y1 = X xor Z.
        let law = vec![1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        let gp = GpModel::new(Pmf::uniform(2), 2, 2, 1, law).unwrap();
        assert_eq!(gp.classify().sd, Some(vec![0, 1, 1, 0]));
    }

    #[test]
    fn lift_pairs_outputs() {
        let wt = WiretapModel::independent(2, 2, 1, 2, &bsc(0.1), &bsc(0.3)).unwrap();
        let l = informed_lift_wiretap(&wt);
        assert!(l.informed_receiver);
        assert_eq!(l.y1_size(), 4);
        assert_abs_diff_eq!(l.prob(0, 1, 0, 1), 0.9 * 0.3, epsilon = 1e-15);
        assert_eq!(l.prob(0, 1, 0, 0), 0.0);
    }
}

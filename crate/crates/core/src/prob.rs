//! PMFs over named axes, stochastic kernels and information measures.
//!
//! Logarithms are base 2 throughout and `0 log 0 = 0`. Joint masses are
//! stored row-major with the last axis varying fastest.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{entropy_of, log2};
use crate::{Error, Result};

/// Normalization tolerance applied when a distribution is constructed.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// Default cap on the number of entries an i.i.d. extension may allocate.
pub const DEFAULT_IID_BUDGET: u128 = 1 << 24;

fn check_mass(mass: &[f64]) -> Result<()> {
    let mut total = 0.0;
    for (index, &value) in mass.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidMass { index, value });
        }
        total += value;
    }
    if (total - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::NotNormalized { total });
    }
    Ok(())
}

/// A PMF on `{0, ..., k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    mass: Vec<f64>,
}

impl Pmf {
    /// Validates non-negativity and normalization. Nothing is renormalized.
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::Shape("empty alphabet".into()));
        }
        check_mass(&mass)?;
        Ok(Pmf { mass })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "alphabet must be non-empty");
        Pmf {
            mass: vec![1.0 / k as f64; k],
        }
    }

    pub fn point(k: usize, at: usize) -> Self {
        assert!(at < k, "point mass outside alphabet");
        let mut mass = vec![0.0; k];
        mass[at] = 1.0;
        Pmf { mass }
    }

    pub(crate) fn from_raw(mass: Vec<f64>) -> Self {
        Pmf { mass }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.mass)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }
}

/// A named finite alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub name: String,
    pub size: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        Axis {
            name: name.into(),
            size,
        }
    }
}

fn check_axes(axes: &[Axis]) -> Result<usize> {
    let mut total: usize = 1;
    for (i, a) in axes.iter().enumerate() {
        if a.size == 0 {
            return Err(Error::Shape(format!("axis `{}` is empty", a.name)));
        }
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(Error::Shape(format!("axis `{}` appears twice", a.name)));
        }
        total = total
            .checked_mul(a.size)
            .ok_or_else(|| Error::Shape("joint alphabet overflows usize".into()))?;
    }
    Ok(total)
}

fn product_size(axes: &[Axis]) -> usize {
    axes.iter().map(|a| a.size).product()
}

/// A PMF over the product of named axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    axes: Vec<Axis>,
    mass: Vec<f64>,
}

impl JointPmf {
    pub fn new(axes: Vec<Axis>, mass: Vec<f64>) -> Result<Self> {
        let total = check_axes(&axes)?;
        if total != mass.len() {
            return Err(Error::Shape(format!(
                "axes describe {} cells but {} masses were given",
                total,
                mass.len()
            )));
        }
        check_mass(&mass)?;
        Ok(JointPmf { axes, mass })
    }

    /// Internal constructor for masses produced by exact arithmetic on
    /// already-validated inputs.
    pub(crate) fn from_parts(axes: Vec<Axis>, mass: Vec<f64>) -> Self {
        debug_assert_eq!(product_size(&axes), mass.len());
        JointPmf { axes, mass }
    }

    pub(crate) fn into_mass(self) -> Vec<f64> {
        self.mass
    }

    pub fn from_pmf(name: impl Into<String>, pmf: &Pmf) -> Self {
        JointPmf {
            axes: vec![Axis::new(name, pmf.len())],
            mass: pmf.mass.clone(),
        }
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size).collect()
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAxis(name.to_string()))
    }

    fn indices(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let i = self.axis_index(n)?;
            if out.contains(&i) {
                return Err(Error::Argument(format!("axis `{n}` listed twice")));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Mass at a multi-index given in axis order.
    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.axes.len());
        let mut flat = 0;
        for (a, &i) in self.axes.iter().zip(index) {
            assert!(i < a.size);
            flat = flat * a.size + i;
        }
        self.mass[flat]
    }

    /// Sums out every axis not in `keep`. The result carries the kept axes in
    /// the order listed, so this doubles as an axis permutation.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointPmf> {
        let idx = self.indices(keep)?;
        let mass = self.marginal_raw(&idx);
        let axes = idx.iter().map(|&i| self.axes[i].clone()).collect();
        Ok(JointPmf { axes, mass })
    }

    /// Marginal mass over the axes at positions `keep`, laid out in that order.
    pub(crate) fn marginal_raw(&self, keep: &[usize]) -> Vec<f64> {
        let r = self.axes.len();
        let mut tstride = vec![0usize; r];
        let mut size = 1;
        for &k in keep.iter().rev() {
            tstride[k] = size;
            size *= self.axes[k].size;
        }
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; r];
        let mut t = 0usize;
        for &m in &self.mass {
            out[t] += m;
            let mut a = r;
            while a > 0 {
                a -= 1;
                digits[a] += 1;
                t += tstride[a];
                if digits[a] < self.axes[a].size {
                    break;
                }
                t -= tstride[a] * digits[a];
                digits[a] = 0;
            }
        }
        out
    }

    /// The kernel from `given` to the remaining axes. Rows conditioned on a
    /// zero-mass tuple are filled uniform and reported in `null_rows`.
    pub fn condition(&self, given: &[&str]) -> Result<StochasticKernel> {
        let gi = self.indices(given)?;
        let rest: Vec<usize> = (0..self.axes.len()).filter(|i| !gi.contains(i)).collect();
        if rest.is_empty() {
            return Err(Error::Argument("conditioning on every axis".into()));
        }
        let mut order = gi.clone();
        order.extend_from_slice(&rest);
        let permuted = self.marginal_raw(&order);
        let n_in: usize = gi.iter().map(|&i| self.axes[i].size).product();
        let n_out = permuted.len() / n_in;
        let mut rows = permuted;
        let mut null_rows = Vec::new();
        for r in 0..n_in {
            let row = &mut rows[r * n_out..(r + 1) * n_out];
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.iter_mut().for_each(|v| *v /= s);
            } else {
                row.iter_mut().for_each(|v| *v = 1.0 / n_out as f64);
                null_rows.push(r);
            }
        }
        Ok(StochasticKernel {
            inputs: gi.iter().map(|&i| self.axes[i].clone()).collect(),
            outputs: rest.iter().map(|&i| self.axes[i].clone()).collect(),
            rows,
            null_rows,
        })
    }

    /// Outer product with an independent PMF on disjoint axes.
    pub fn product(&self, other: &JointPmf) -> Result<JointPmf> {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().cloned());
        check_axes(&axes)?;
        let mut mass = Vec::with_capacity(self.mass.len() * other.mass.len());
        for &a in &self.mass {
            for &b in &other.mass {
                mass.push(a * b);
            }
        }
        Ok(JointPmf { axes, mass })
    }

    /// Flattened view as a PMF over the joint alphabet.
    pub fn to_pmf(&self) -> Pmf {
        Pmf::from_raw(self.mass.clone())
    }

    fn same_shape(&self, other: &JointPmf) -> Result<()> {
        if self.axes != other.axes {
            return Err(Error::Shape(
                "distributions must share axis names, sizes and order".into(),
            ));
        }
        Ok(())
    }
}

/// A conditional PMF from the product of `inputs` to the product of
/// `outputs`, stored as one row per input tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticKernel {
    inputs: Vec<Axis>,
    outputs: Vec<Axis>,
    rows: Vec<f64>,
    null_rows: Vec<usize>,
}

impl StochasticKernel {
    /// Every row must be a PMF within [`PROB_TOLERANCE`].
    pub fn new(inputs: Vec<Axis>, outputs: Vec<Axis>, rows: Vec<f64>) -> Result<Self> {
        let mut all = inputs.clone();
        all.extend(outputs.iter().cloned());
        check_axes(&all)?;
        let n_in = product_size(&inputs);
        let n_out = product_size(&outputs);
        if n_in * n_out != rows.len() {
            return Err(Error::Shape(format!(
                "kernel needs {} x {} entries, got {}",
                n_in,
                n_out,
                rows.len()
            )));
        }
        for r in 0..n_in {
            check_mass(&rows[r * n_out..(r + 1) * n_out]).map_err(|e| match e {
                Error::InvalidMass { index, value } => Error::InvalidMass {
                    index: r * n_out + index,
                    value,
                },
                other => other,
            })?;
        }
        Ok(StochasticKernel {
            inputs,
            outputs,
            rows,
            null_rows: Vec::new(),
        })
    }

    pub(crate) fn from_parts(
        inputs: Vec<Axis>,
        outputs: Vec<Axis>,
        rows: Vec<f64>,
        null_rows: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(product_size(&inputs) * product_size(&outputs), rows.len());
        StochasticKernel {
            inputs,
            outputs,
            rows,
            null_rows,
        }
    }

    pub fn inputs(&self) -> &[Axis] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Axis] {
        &self.outputs
    }

    pub fn n_in(&self) -> usize {
        product_size(&self.inputs)
    }

    pub fn n_out(&self) -> usize {
        product_size(&self.outputs)
    }

    pub fn row(&self, r: usize) -> &[f64] {
        let n = self.n_out();
        &self.rows[r * n..(r + 1) * n]
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    /// Input rows that had no mass and were filled uniform.
    pub fn null_rows(&self) -> &[usize] {
        &self.null_rows
    }

    /// The joint `p(in) k(out | in)` with input axes first.
    pub fn apply(&self, input: &JointPmf) -> Result<JointPmf> {
        if input.axes != self.inputs {
            return Err(Error::Shape("input PMF does not match kernel inputs".into()));
        }
        let n_out = self.n_out();
        let mut mass = Vec::with_capacity(input.mass.len() * n_out);
        for (r, &p) in input.mass.iter().enumerate() {
            for &k in self.row(r) {
                mass.push(p * k);
            }
        }
        let mut axes = self.inputs.clone();
        axes.extend(self.outputs.iter().cloned());
        Ok(JointPmf { axes, mass })
    }
}

/// Relative entropy, with divergence to a distribution lacking support kept
/// as a distinguished value rather than a float overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_finite(self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(v),
            Divergence::Infinite => None,
        }
    }

    /// Lossy conversion for reporting; `Infinite` maps to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Total variation `1/2 sum |p - q|` over raw mass vectors of equal length.
pub fn total_variation_raw(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut l1 = 0.0;
    let mut one_sided = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        l1 += (a - b).abs();
        if a > b {
            one_sided += a - b;
        }
    }
    let tv = 0.5 * l1;
    debug_assert!(
        (tv - one_sided).abs() <= 1e-12,
        "half-L1 {tv} and one-sided {one_sided} forms disagree"
    );
    tv
}

/// Total variation distance; axes must agree in name, size and order.
pub fn total_variation(p: &JointPmf, q: &JointPmf) -> Result<f64> {
    p.same_shape(q)?;
    Ok(total_variation_raw(&p.mass, &q.mass))
}

pub fn relative_entropy_raw(p: &[f64], q: &[f64]) -> Divergence {
    let mut d = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return Divergence::Infinite;
            }
            d += a * log2(a / b);
        }
    }
    Divergence::Finite(d.max(0.0))
}

/// `D(p || q)` in bits.
pub fn relative_entropy(p: &JointPmf, q: &JointPmf) -> Result<Divergence> {
    p.same_shape(q)?;
    Ok(relative_entropy_raw(&p.mass, &q.mass))
}

fn disjoint(a: &[usize], b: &[usize]) -> Result<()> {
    if a.iter().any(|i| b.contains(i)) {
        return Err(Error::Argument("axis sets overlap".into()));
    }
    Ok(())
}

/// Entropy `H(axes)` of a marginal.
pub fn entropy(joint: &JointPmf, axes: &[&str]) -> Result<f64> {
    let idx = joint.indices(axes)?;
    Ok(entropy_of(&joint.marginal_raw(&idx)))
}

/// `I(left; right)` computed as `D(p_{LR} || p_L p_R)`.
pub fn mutual_information(joint: &JointPmf, left: &[&str], right: &[&str]) -> Result<f64> {
    let li = joint.indices(left)?;
    let ri = joint.indices(right)?;
    disjoint(&li, &ri)?;
    Ok(mi_by_index(joint, &li, &ri))
}

pub(crate) fn mi_by_index(joint: &JointPmf, li: &[usize], ri: &[usize]) -> f64 {
    let mut order = li.to_vec();
    order.extend_from_slice(ri);
    let m = joint.marginal_raw(&order);
    let nr: usize = ri.iter().map(|&i| joint.axes[i].size).product();
    let nl = m.len() / nr;
    let mut pl = vec![0.0; nl];
    let mut pr = vec![0.0; nr];
    for a in 0..nl {
        for b in 0..nr {
            let v = m[a * nr + b];
            pl[a] += v;
            pr[b] += v;
        }
    }
    let mut i = 0.0;
    for a in 0..nl {
        for b in 0..nr {
            let v = m[a * nr + b];
            if v > 0.0 {
                i += v * log2(v / (pl[a] * pr[b]));
            }
        }
    }
    i.max(0.0)
}

/// `H(target | given)`.
pub fn conditional_entropy(joint: &JointPmf, target: &[&str], given: &[&str]) -> Result<f64> {
    let ti = joint.indices(target)?;
    let gi = joint.indices(given)?;
    disjoint(&ti, &gi)?;
    Ok(cond_entropy_by_index(joint, &ti, &gi))
}

pub(crate) fn cond_entropy_by_index(joint: &JointPmf, ti: &[usize], gi: &[usize]) -> f64 {
    let mut order = gi.to_vec();
    order.extend_from_slice(ti);
    let m = joint.marginal_raw(&order);
    let nt: usize = ti.iter().map(|&i| joint.axes[i].size).product();
    let ng = m.len() / nt;
    let mut h = 0.0;
    for g in 0..ng {
        let row = &m[g * nt..(g + 1) * nt];
        let pg: f64 = row.iter().sum();
        for &v in row {
            if v > 0.0 {
                h -= v * log2(v / pg);
            }
        }
    }
    h.max(0.0)
}

/// `I(left; right | given)`; an empty `given` reduces to plain mutual
/// information.
pub fn conditional_mutual_information(
    joint: &JointPmf,
    left: &[&str],
    right: &[&str],
    given: &[&str],
) -> Result<f64> {
    let li = joint.indices(left)?;
    let ri = joint.indices(right)?;
    let gi = joint.indices(given)?;
    disjoint(&li, &ri)?;
    disjoint(&li, &gi)?;
    disjoint(&ri, &gi)?;
    Ok(cmi_by_index(joint, &li, &ri, &gi))
}

pub(crate) fn cmi_by_index(joint: &JointPmf, li: &[usize], ri: &[usize], gi: &[usize]) -> f64 {
    if gi.is_empty() {
        return mi_by_index(joint, li, ri);
    }
    let mut order = gi.to_vec();
    order.extend_from_slice(li);
    order.extend_from_slice(ri);
    let m = joint.marginal_raw(&order);
    let nl: usize = li.iter().map(|&i| joint.axes[i].size).product();
    let nr: usize = ri.iter().map(|&i| joint.axes[i].size).product();
    let ng = m.len() / (nl * nr);
    let mut total = 0.0;
    let mut pl = vec![0.0; nl];
    let mut pr = vec![0.0; nr];
    for g in 0..ng {
        let block = &m[g * nl * nr..(g + 1) * nl * nr];
        pl.iter_mut().for_each(|v| *v = 0.0);
        pr.iter_mut().for_each(|v| *v = 0.0);
        let mut pg = 0.0;
        for a in 0..nl {
            for b in 0..nr {
                let v = block[a * nr + b];
                pl[a] += v;
                pr[b] += v;
                pg += v;
            }
        }
        for a in 0..nl {
            for b in 0..nr {
                let v = block[a * nr + b];
                if v > 0.0 {
                    total += v * log2(v * pg / (pl[a] * pr[b]));
                }
            }
        }
    }
    total.max(0.0)
}

/// The `n`-fold product `p^n` on axes `prefix.1, ..., prefix.n`.
/// Fails when `|A|^n` exceeds `budget`.
pub fn iid_extension(p: &Pmf, n: usize, prefix: &str, budget: u128) -> Result<JointPmf> {
    if n == 0 {
        return Err(Error::Argument("blocklength must be positive".into()));
    }
    let required = (p.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let mut mass = vec![1.0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(mass.len() * p.len());
        for &a in &mass {
            for &b in &p.mass {
                next.push(a * b);
            }
        }
        mass = next;
    }
    let axes = (1..=n)
        .map(|i| Axis::new(format!("{prefix}.{i}"), p.len()))
        .collect();
    Ok(JointPmf { axes, mass })
}

/// Empirical PMF of a sequence over `{0, ..., k-1}`.
pub fn empirical(x: &[usize], k: usize) -> Result<Pmf> {
    if x.is_empty() {
        return Err(Error::Argument("empty sequence".into()));
    }
    let mut counts = vec![0.0; k];
    for &s in x {
        if s >= k {
            return Err(Error::Argument(format!("symbol {s} outside alphabet of size {k}")));
        }
        counts[s] += 1.0;
    }
    let n = x.len() as f64;
    Ok(Pmf::from_raw(counts.into_iter().map(|c| c / n).collect()))
}

/// Robust letter typicality: `|nu(a) - p(a)| <= eps p(a)` for every symbol,
/// where `nu` is the empirical PMF of `x`. Symbols with `p(a) = 0` must not
/// occur.
pub fn is_typical(x: &[usize], p: &Pmf, eps: f64) -> Result<bool> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Domain(format!("typicality slack {eps} must be non-negative")));
    }
    let k = p.len();
    if x.is_empty() {
        return Err(Error::Argument("empty sequence".into()));
    }
    let mut counts = vec![0usize; k];
    for &s in x {
        if s >= k {
            return Err(Error::Argument(format!("symbol {s} outside alphabet of size {k}")));
        }
        counts[s] += 1;
    }
    Ok(typical_counts(&counts, x.len(), p.mass(), eps))
}

/// Typicality check on precomputed symbol counts.
#[inline]
pub(crate) fn typical_counts(counts: &[usize], n: usize, p: &[f64], eps: f64) -> bool {
    let n = n as f64;
    counts
        .iter()
        .zip(p)
        .all(|(&c, &pa)| (c as f64 - n * pa).abs() <= eps * n * pa)
}

/// Largest slack for which [`mi_continuity_bound`] is defined,
/// `2^{-1/ln 2} = 1/e`.
pub const MI_BOUND_MAX_EPS: f64 = 0.367_879_441_171_442_33;

/// Continuity bound on mutual information between `n`-letter distributions
/// on `X^n x Y^n` at total variation at most `eps`:
/// `2 n eps (log|X| + log|Y|) - 3 eps log eps`.
pub fn mi_continuity_bound(eps: f64, n: usize, x_size: usize, y_size: usize) -> Result<f64> {
    if !(0.0..=MI_BOUND_MAX_EPS).contains(&eps) {
        return Err(Error::Domain(format!(
            "eps = {eps} must lie in [0, 2^(-1/ln 2)]"
        )));
    }
    if n == 0 || x_size == 0 || y_size == 0 {
        return Err(Error::Argument("blocklength and alphabet sizes must be positive".into()));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let lx = log2(x_size as f64);
    let ly = log2(y_size as f64);
    Ok(2.0 * n as f64 * eps * (lx + ly) - 3.0 * eps * log2(eps))
}

/// Mixed-radix digits of `flat` over `base` with `n` digits, most significant
/// first.
pub fn digits(mut flat: usize, base: usize, n: usize, out: &mut [usize]) {
    for i in (0..n).rev() {
        out[i] = flat % base;
        flat /= base;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn binary_joint(m: [f64; 4]) -> JointPmf {
        JointPmf::new(vec![Axis::new("a", 2), Axis::new("b", 2)], m.to_vec()).unwrap()
    }

    #[test]
    fn divergence_example() {
        let p = JointPmf::from_pmf("x", &Pmf::new(vec![0.5, 0.5]).unwrap());
        let q = JointPmf::from_pmf("x", &Pmf::new(vec![0.25, 0.75]).unwrap());
        let d = relative_entropy(&p, &q).unwrap().finite().unwrap();
        let expect = 0.5 * log2(0.5 / 0.25) + 0.5 * log2(0.5 / 0.75);
        assert_abs_diff_eq!(d, expect, epsilon = 1e-15);
        assert_abs_diff_eq!(d, 0.20752, epsilon = 1e-5);
    }

    #[test]
    fn divergence_to_missing_support_is_infinite() {
        let p = JointPmf::from_pmf("x", &Pmf::uniform(2));
        let q = JointPmf::from_pmf("x", &Pmf::point(2, 0));
        assert_eq!(relative_entropy(&p, &q).unwrap(), Divergence::Infinite);
        assert_eq!(relative_entropy(&q, &p).unwrap(), Divergence::Finite(1.0));
    }

    #[test]
    fn mutual_information_example() {
        let j = binary_joint([0.4, 0.1, 0.1, 0.4]);
        let i = mutual_information(&j, &["a"], &["b"]).unwrap();
        // 1 - h(0.2)
        let h = -(0.2 * log2(0.2) + 0.8 * log2(0.8));
        assert_abs_diff_eq!(i, 1.0 - h, epsilon = 1e-14);
        assert_abs_diff_eq!(i, 0.27807, epsilon = 1e-5);
    }

    #[test]
    fn overlapping_axes_rejected() {
        let j = binary_joint([0.25; 4]);
        assert!(matches!(
            mutual_information(&j, &["a"], &["a", "b"]),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            mutual_information(&j, &["c"], &["b"]),
            Err(Error::UnknownAxis(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_mass() {
        assert!(matches!(Pmf::new(vec![0.5, 0.6]), Err(Error::NotNormalized { .. })));
        assert!(matches!(
            Pmf::new(vec![1.5, -0.5]),
            Err(Error::InvalidMass { index: 1, .. })
        ));
        assert!(Pmf::new(vec![0.5, 0.5 + 5e-13]).is_ok());
        assert!(Pmf::new(vec![0.5, 0.5 + 5e-12]).is_err());
    }

    #[test]
    fn continuity_bound_example_and_domain() {
        assert_abs_diff_eq!(mi_continuity_bound(0.25, 1, 2, 2).unwrap(), 2.5, epsilon = 1e-15);
        assert_eq!(mi_continuity_bound(0.0, 3, 2, 2).unwrap(), 0.0);
        assert!(matches!(mi_continuity_bound(0.4, 1, 2, 2), Err(Error::Domain(_))));
        assert!(matches!(mi_continuity_bound(-0.1, 1, 2, 2), Err(Error::Domain(_))));
        assert_abs_diff_eq!(MI_BOUND_MAX_EPS, libm::exp2(-1.0 / core::f64::consts::LN_2), epsilon = 1e-16);
    }

    #[test]
    fn iid_example_and_budget() {
        let p = Pmf::new(vec![0.3, 0.7]).unwrap();
        let j = iid_extension(&p, 2, "x", DEFAULT_IID_BUDGET).unwrap();
        let expect = [0.09, 0.21, 0.21, 0.49];
        for (a, b) in j.mass().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert!(matches!(
            iid_extension(&p, 30, "x", 1000),
            Err(Error::Budget { required, budget: 1000 }) if required == 1 << 30
        ));
    }

    #[test]
    fn typicality_example() {
        let p = Pmf::uniform(2);
        assert!(!is_typical(&[0, 0], &p, 0.5).unwrap());
        assert!(is_typical(&[0, 1], &p, 0.0).unwrap());
        assert!(!is_typical(&[0, 1], &Pmf::point(2, 0), 10.0).unwrap());
    }

    #[test]
    fn conditioning_flags_null_rows() {
        let j = binary_joint([0.5, 0.5, 0.0, 0.0]);
        let k = j.condition(&["a"]).unwrap();
        assert_eq!(k.null_rows(), &[1]);
        assert_eq!(k.row(1), &[0.5, 0.5]);
        assert_eq!(k.row(0), &[0.5, 0.5]);
    }

    #[test]
    fn marginalize_full_set_is_identity_and_can_permute() {
        let j = binary_joint([0.1, 0.2, 0.3, 0.4]);
        assert_eq!(j.marginalize(&["a", "b"]).unwrap(), j);
        let t = j.marginalize(&["b", "a"]).unwrap();
        assert_eq!(t.mass(), &[0.1, 0.3, 0.2, 0.4]);
    }

    #[test]
    fn entropy_of_point_mass_is_zero() {
        let j = JointPmf::from_pmf("x", &Pmf::point(3, 1));
        assert_eq!(entropy(&j, &["x"]).unwrap(), 0.0);
    }
}

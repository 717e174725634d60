//! Single-letter rate bounds, capacity search, frontier sweeps and the
//! two-to-one auxiliary reduction for semi-deterministic models.
//!
//! Every bound is evaluated on the joint PMF over axes `(u, x, y1, y2, z)`.
//! On the wiretap side that joint is `p(u,x) p(y1,y2,z|x)`; on the GP side it
//! is `q(z) q(u,x|z) q(y1,y2|x,z)`. Both families share the same formula
//! code, so one numeric joint yields bitwise-identical bounds either way.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::channel::{GpModel, WiretapModel};
use crate::prob::{
    cmi_by_index, cond_entropy_by_index, mi_by_index, Axis, JointPmf, PROB_TOLERANCE,
};
use crate::rng;
use crate::{Error, Result};

const U: usize = 0;
const X: usize = 1;
const Y1: usize = 2;
const Y2: usize = 3;
const Z: usize = 4;

/// Which side of the analogy a model or auxiliary lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Wiretap,
    Gp,
}

/// The six region families with a single-letter characterization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SdWt,
    SdGp,
    PdIrWt,
    PdIrGp,
    PdIrWtCoop,
    PdIrGpCoop,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Sd,
    PdIr,
    Coop,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::SdWt,
        Family::SdGp,
        Family::PdIrWt,
        Family::PdIrGp,
        Family::PdIrWtCoop,
        Family::PdIrGpCoop,
    ];

    pub fn side(self) -> Side {
        match self {
            Family::SdWt | Family::PdIrWt | Family::PdIrWtCoop => Side::Wiretap,
            _ => Side::Gp,
        }
    }

    fn kind(self) -> Kind {
        match self {
            Family::SdWt | Family::SdGp => Kind::Sd,
            Family::PdIrWt | Family::PdIrGp => Kind::PdIr,
            Family::PdIrWtCoop | Family::PdIrGpCoop => Kind::Coop,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::SdWt => "SD-WT",
            Family::SdGp => "SD-GP",
            Family::PdIrWt => "PD-IR-WT",
            Family::PdIrGp => "PD-IR-GP",
            Family::PdIrWtCoop => "PD-IR-WT-COOP",
            Family::PdIrGpCoop => "PD-IR-GP-COOP",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Argument(format!("unknown region family `{s}`")))
    }

    /// The family with the same bound formulas on the other side.
    pub fn analog(self) -> Family {
        match self {
            Family::SdWt => Family::SdGp,
            Family::SdGp => Family::SdWt,
            Family::PdIrWt => Family::PdIrGp,
            Family::PdIrGp => Family::PdIrWt,
            Family::PdIrWtCoop => Family::PdIrGpCoop,
            Family::PdIrGpCoop => Family::PdIrWtCoop,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A channel model from either side.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Wiretap(WiretapModel),
    Gp(GpModel),
}

impl Model {
    pub fn side(&self) -> Side {
        match self {
            Model::Wiretap(_) => Side::Wiretap,
            Model::Gp(_) => Side::Gp,
        }
    }

    pub fn x_size(&self) -> usize {
        match self {
            Model::Wiretap(m) => m.x_size(),
            Model::Gp(m) => m.x_size(),
        }
    }

    pub fn z_size(&self) -> usize {
        match self {
            Model::Wiretap(m) => m.z_size(),
            Model::Gp(m) => m.z_size(),
        }
    }

    fn sizes(&self) -> [usize; 4] {
        match self {
            Model::Wiretap(m) => [m.x_size(), m.y1_size(), m.y2_size(), m.z_size()],
            Model::Gp(m) => [m.x_size(), m.y1_size(), m.y2_size(), m.z_size()],
        }
    }

    pub fn coop_capacity(&self) -> Option<f64> {
        match self {
            Model::Wiretap(m) => m.coop_capacity,
            Model::Gp(m) => m.coop_capacity,
        }
    }

    /// Default auxiliary cardinality: `|X| + 1` on the wiretap side and
    /// `|X||Z| + 1` on the GP side.
    pub fn default_u_size(&self) -> usize {
        match self {
            Model::Wiretap(m) => m.x_size() + 1,
            Model::Gp(m) => m.x_size() * m.z_size() + 1,
        }
    }

    /// Checks that the model belongs to `family`.
    pub fn check_family(&self, family: Family) -> Result<()> {
        if family.side() != self.side() {
            return Err(Error::Classification(format!(
                "{family} needs a {:?} model",
                family.side()
            )));
        }
        let flags = match self {
            Model::Wiretap(m) => m.classify(),
            Model::Gp(m) => m.classify(),
        };
        match family.kind() {
            Kind::Sd if !flags.is_sd() => Err(Error::Classification(format!(
                "{family}: receiver 1 is not deterministic"
            ))),
            Kind::PdIr | Kind::Coop if !flags.is_pd() => Err(Error::Classification(format!(
                "{family}: receiver 2 is not degraded (residual {:.3e})",
                flags.pd_residual
            ))),
            Kind::Coop if self.coop_capacity().is_none() => Err(Error::Classification(format!(
                "{family}: model has no cooperation link"
            ))),
            _ => Ok(()),
        }
    }
}

/// An auxiliary distribution: `p(u, x)` for wiretap models, `q(u, x | z)`
/// for GP models.
#[derive(Debug, Clone, PartialEq)]
pub enum AuxiliaryDist {
    /// Indexed `[u][x]`.
    Wiretap { u_size: usize, x_size: usize, p_ux: Vec<f64> },
    /// Indexed `[z][u][x]`.
    Gp {
        u_size: usize,
        x_size: usize,
        z_size: usize,
        q_ux_given_z: Vec<f64>,
    },
}

fn check_simplex_block(b: &[f64], offset: usize) -> Result<()> {
    let mut total = 0.0;
    for (i, &v) in b.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidMass {
                index: offset + i,
                value: v,
            });
        }
        total += v;
    }
    if (total - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::NotNormalized { total });
    }
    Ok(())
}

impl AuxiliaryDist {
    pub fn wiretap(u_size: usize, x_size: usize, p_ux: Vec<f64>) -> Result<Self> {
        if u_size == 0 || x_size == 0 || p_ux.len() != u_size * x_size {
            return Err(Error::Shape("p(u,x) must have |U||X| entries".into()));
        }
        check_simplex_block(&p_ux, 0)?;
        Ok(AuxiliaryDist::Wiretap {
            u_size,
            x_size,
            p_ux,
        })
    }

    pub fn gp(u_size: usize, x_size: usize, z_size: usize, q_ux_given_z: Vec<f64>) -> Result<Self> {
        let b = u_size * x_size;
        if b == 0 || z_size == 0 || q_ux_given_z.len() != b * z_size {
            return Err(Error::Shape("q(u,x|z) must have |Z||U||X| entries".into()));
        }
        for z in 0..z_size {
            check_simplex_block(&q_ux_given_z[z * b..(z + 1) * b], z * b)?;
        }
        Ok(AuxiliaryDist::Gp {
            u_size,
            x_size,
            z_size,
            q_ux_given_z,
        })
    }

    pub fn side(&self) -> Side {
        match self {
            AuxiliaryDist::Wiretap { .. } => Side::Wiretap,
            AuxiliaryDist::Gp { .. } => Side::Gp,
        }
    }

    pub fn u_size(&self) -> usize {
        match self {
            AuxiliaryDist::Wiretap { u_size, .. } | AuxiliaryDist::Gp { u_size, .. } => *u_size,
        }
    }

    /// Flat parameter vector (`p_ux` or `q_ux_given_z`).
    pub fn params(&self) -> &[f64] {
        match self {
            AuxiliaryDist::Wiretap { p_ux, .. } => p_ux,
            AuxiliaryDist::Gp { q_ux_given_z, .. } => q_ux_given_z,
        }
    }
}

/// Rate bounds after clamping, with the raw values kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBounds {
    pub r1: f64,
    pub r2: f64,
    /// Absent when the family has no sum-rate bound.
    pub sum: Option<f64>,
    pub raw: RawBounds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawBounds {
    pub r1: f64,
    pub r2: f64,
    pub sum: Option<f64>,
}

impl RawBounds {
    pub fn clamp(self) -> RateBounds {
        RateBounds {
            r1: self.r1.max(0.0),
            r2: self.r2.max(0.0),
            sum: self.sum.map(|s| s.max(0.0)),
            raw: self,
        }
    }
}

fn check_aux(model: &Model, aux: &AuxiliaryDist) -> Result<()> {
    match (model, aux) {
        (Model::Wiretap(m), AuxiliaryDist::Wiretap { x_size, .. }) if *x_size == m.x_size() => Ok(()),
        (Model::Gp(m), AuxiliaryDist::Gp { x_size, z_size, .. })
            if *x_size == m.x_size() && *z_size == m.z_size() =>
        {
            Ok(())
        }
        _ => Err(Error::Shape(
            "auxiliary side or alphabet sizes do not match the model".into(),
        )),
    }
}

fn joint_axes(u: usize, sizes: [usize; 4]) -> Vec<Axis> {
    vec![
        Axis::new("u", u),
        Axis::new("x", sizes[0]),
        Axis::new("y1", sizes[1]),
        Axis::new("y2", sizes[2]),
        Axis::new("z", sizes[3]),
    ]
}

/// Writes the single-letter joint for auxiliary parameters `params` into
/// `out`, laid out `[u][x][y1][y2][z]`.
fn fill_joint(model: &Model, u: usize, params: &[f64], out: &mut Vec<f64>) {
    out.clear();
    match model {
        Model::Wiretap(m) => {
            let nx = m.x_size();
            let rows = m.law().rows();
            let n_out = m.law().n_out();
            for ui in 0..u {
                for x in 0..nx {
                    let w = params[ui * nx + x];
                    out.extend(rows[x * n_out..(x + 1) * n_out].iter().map(|&k| w * k));
                }
            }
        }
        Model::Gp(m) => {
            let (nx, nz, n1, n2) = (m.x_size(), m.z_size(), m.y1_size(), m.y2_size());
            let qz = m.state_dist().mass();
            out.resize(u * nx * n1 * n2 * nz, 0.0);
            let b = u * nx;
            for ui in 0..u {
                for x in 0..nx {
                    for z in 0..nz {
                        let w = qz[z] * params[z * b + ui * nx + x];
                        for y1 in 0..n1 {
                            for y2 in 0..n2 {
                                out[(((ui * nx + x) * n1 + y1) * n2 + y2) * nz + z] =
                                    w * m.prob(x, z, y1, y2);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// The single-letter joint over `(u, x, y1, y2, z)` induced by `aux`.
pub fn single_letter_joint(model: &Model, aux: &AuxiliaryDist) -> Result<JointPmf> {
    check_aux(model, aux)?;
    let mut mass = Vec::new();
    fill_joint(model, aux.u_size(), aux.params(), &mut mass);
    Ok(JointPmf::from_parts(joint_axes(aux.u_size(), model.sizes()), mass))
}

fn check_joint_axes(joint: &JointPmf) -> Result<()> {
    let names = ["u", "x", "y1", "y2", "z"];
    let ok = joint.axes().len() == 5 && joint.axes().iter().zip(names).all(|(a, n)| a.name == n);
    if ok {
        Ok(())
    } else {
        Err(Error::Shape("joint must have axes (u, x, y1, y2, z)".into()))
    }
}

fn raw_bounds(kind: Kind, joint: &JointPmf, c12: f64) -> RawBounds {
    let i_uy2 = mi_by_index(joint, &[U], &[Y2]);
    let i_uz = mi_by_index(joint, &[U], &[Z]);
    let r2 = i_uy2 - i_uz;
    match kind {
        Kind::Sd => {
            let h1 = cond_entropy_by_index(joint, &[Y1], &[Z]);
            let i_uy1z = mi_by_index(joint, &[U], &[Y1, Z]);
            RawBounds {
                r1: h1,
                r2,
                sum: Some(h1 + i_uy2 - i_uy1z),
            }
        }
        Kind::PdIr => RawBounds {
            r1: cmi_by_index(joint, &[X], &[Y1], &[U, Z]),
            r2,
            sum: None,
        },
        Kind::Coop => RawBounds {
            r1: cmi_by_index(joint, &[X], &[Y1], &[U, Z]),
            r2: r2 + c12,
            sum: Some(cmi_by_index(joint, &[X], &[Y1], &[Z])),
        },
    }
}

/// Bounds of `family` evaluated on an explicit joint over
/// `(u, x, y1, y2, z)`. `c12` is required by the cooperative families.
pub fn bounds_from_joint(family: Family, joint: &JointPmf, c12: Option<f64>) -> Result<RateBounds> {
    check_joint_axes(joint)?;
    let c = match (family.kind(), c12) {
        (Kind::Coop, None) => {
            return Err(Error::Argument(format!("{family} needs a cooperation capacity")))
        }
        (_, c) => c.unwrap_or(0.0),
    };
    Ok(raw_bounds(family.kind(), joint, c).clamp())
}

/// The rate bounds of `family` at auxiliary `aux`.
pub fn eval_rate_bounds(family: Family, aux: &AuxiliaryDist, model: &Model) -> Result<RateBounds> {
    model.check_family(family)?;
    if aux.side() != family.side() {
        return Err(Error::Classification(format!(
            "{family} needs a {:?}-side auxiliary",
            family.side()
        )));
    }
    let joint = single_letter_joint(model, aux)?;
    bounds_from_joint(family, &joint, model.coop_capacity())
}

/// `max lambda1 R1 + lambda2 R2` over the polytope of `bounds`, by vertex
/// enumeration. Ties go to the larger `R1`.
pub fn support_maximum(bounds: &RateBounds, l1: f64, l2: f64) -> Result<(f64, (f64, f64))> {
    if !(l1 >= 0.0 && l2 >= 0.0) {
        return Err(Error::Argument(format!("direction ({l1}, {l2}) must be non-negative")));
    }
    Ok(support_unchecked(bounds, l1, l2))
}

fn support_unchecked(b: &RateBounds, l1: f64, l2: f64) -> (f64, (f64, f64)) {
    let (r1, r2) = (b.r1, b.r2);
    let s = b.sum.unwrap_or(f64::INFINITY);
    let mut cands: [(f64, f64); 5] = [(0.0, 0.0); 5];
    let mut n = 0;
    let mut push = |p: (f64, f64)| {
        cands[n] = p;
        n += 1;
    };
    push((0.0, 0.0));
    push((r1.min(s), 0.0));
    push((0.0, r2.min(s)));
    if s >= r1 {
        push((r1, r2.min(s - r1)));
    }
    if s >= r2 {
        push((r1.min(s - r2), r2));
    }
    let mut best = (f64::NEG_INFINITY, (0.0, 0.0));
    for &(a, c) in &cands[..n] {
        let v = l1 * a + l2 * c;
        if v > best.0 || (v == best.0 && a > best.1 .0) {
            best = (v, (a, c));
        }
    }
    best
}

/// Tuning knobs for the searches and the grid oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchParams {
    pub restarts: usize,
    pub directions: usize,
    /// A full pass improving the objective by less than this ends a restart.
    pub tolerance: f64,
    pub max_passes: usize,
    /// Overrides the default auxiliary cardinality.
    pub u_size: Option<usize>,
    pub seed: u64,
    pub grid_delta: f64,
    pub grid_budget: u128,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            restarts: 32,
            directions: 64,
            tolerance: 1e-9,
            max_passes: 2000,
            u_size: None,
            seed: 0,
            grid_delta: 0.05,
            grid_budget: 10_000_000,
        }
    }
}

/// Result of a capacity search or capacity oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    /// Clamped at zero.
    pub value: f64,
    pub raw_value: f64,
    pub aux: AuxiliaryDist,
    /// False when some restart ran out of passes.
    pub converged: bool,
    pub evaluations: u64,
}

#[derive(Clone, Copy, PartialEq)]
enum Goal {
    Bounds(Kind),
    Capacity { informed: bool },
}

/// An optimization problem over one or more simplices of auxiliary
/// parameters.
struct Problem<'a> {
    model: &'a Model,
    u: usize,
    /// Parameters are input distributions (`p_x` or `q(x|z)`), expanded to
    /// the auxiliary `U = X`.
    input_only: bool,
    blocks: usize,
    len: usize,
    goal: Goal,
    c12: f64,
    scratch: Vec<f64>,
    expanded: Vec<f64>,
    axes: Vec<Axis>,
}

impl<'a> Problem<'a> {
    fn new(model: &'a Model, u: usize, input_only: bool, goal: Goal) -> Self {
        let nx = model.x_size();
        let blocks = match model {
            Model::Wiretap(_) => 1,
            Model::Gp(m) => m.z_size(),
        };
        let (u, len) = if input_only { (nx, nx) } else { (u, u * nx) };
        Problem {
            model,
            u,
            input_only,
            blocks,
            len,
            goal,
            c12: model.coop_capacity().unwrap_or(0.0),
            scratch: Vec::new(),
            expanded: Vec::new(),
            axes: joint_axes(u, model.sizes()),
        }
    }

    fn expand(&self, params: &[f64], out: &mut Vec<f64>) {
        out.clear();
        if !self.input_only {
            out.extend_from_slice(params);
            return;
        }
        let nx = self.model.x_size();
        out.resize(self.blocks * nx * nx, 0.0);
        for b in 0..self.blocks {
            for x in 0..nx {
                out[b * nx * nx + x * nx + x] = params[b * nx + x];
            }
        }
    }

    fn aux(&self, params: &[f64]) -> AuxiliaryDist {
        let mut p = Vec::new();
        self.expand(params, &mut p);
        match self.model {
            Model::Wiretap(m) => AuxiliaryDist::Wiretap {
                u_size: self.u,
                x_size: m.x_size(),
                p_ux: p,
            },
            Model::Gp(m) => AuxiliaryDist::Gp {
                u_size: self.u,
                x_size: m.x_size(),
                z_size: m.z_size(),
                q_ux_given_z: p,
            },
        }
    }

    fn joint(&mut self, params: &[f64]) -> JointPmf {
        let mut expanded = core::mem::take(&mut self.expanded);
        self.expand(params, &mut expanded);
        let mut mass = core::mem::take(&mut self.scratch);
        fill_joint(self.model, self.u, &expanded, &mut mass);
        self.expanded = expanded;
        JointPmf::from_parts(self.axes.clone(), mass)
    }

    fn recycle(&mut self, joint: JointPmf) {
        self.scratch = joint.into_mass();
    }

    fn bounds(&mut self, params: &[f64]) -> RateBounds {
        let Goal::Bounds(kind) = self.goal else {
            unreachable!("bounds requested from a capacity problem")
        };
        let j = self.joint(params);
        let b = raw_bounds(kind, &j, self.c12).clamp();
        self.recycle(j);
        b
    }

    fn capacity_raw(&mut self, params: &[f64]) -> f64 {
        let j = self.joint(params);
        let v = match self.goal {
            Goal::Capacity { informed: false } => {
                mi_by_index(&j, &[U], &[Y1]) - mi_by_index(&j, &[U], &[Z])
            }
            Goal::Capacity { informed: true } => cmi_by_index(&j, &[X], &[Y1], &[Z]),
            Goal::Bounds(_) => unreachable!(),
        };
        self.recycle(j);
        v
    }

    fn random_start(&self, rng: &mut impl rand_core::RngCore) -> Vec<f64> {
        let mut p = vec![0.0; self.blocks * self.len];
        for b in 0..self.blocks {
            rng::dirichlet_flat(rng, &mut p[b * self.len..(b + 1) * self.len]);
        }
        p
    }
}

struct AscentReport {
    value: f64,
    converged: bool,
    evaluations: u64,
}

const MIN_STEP: f64 = 1e-10;
const STEP_FLOOR: f64 = 1e-6;

/// Projected coordinate ascent over a product of simplices. Each
/// coordinate is moved toward its vertex or away from it, with the step
/// halved until the objective improves.
fn coordinate_ascent(
    f: &mut dyn FnMut(&[f64]) -> f64,
    p: &mut [f64],
    blocks: usize,
    len: usize,
    tolerance: f64,
    max_passes: usize,
) -> AscentReport {
    let mut fx = f(p);
    let mut evaluations = 1u64;
    let mut step = vec![0.5; blocks * len * 2];
    let mut cand = p.to_vec();
    for _ in 0..max_passes {
        let start = fx;
        for b in 0..blocks {
            let r = b * len..(b + 1) * len;
            for i in 0..len {
                for dir in 0..2 {
                    let pi = p[r.start + i];
                    if (dir == 0 && pi >= 1.0) || (dir == 1 && pi <= 0.0) || len == 1 {
                        continue;
                    }
                    let slot = (b * len + i) * 2 + dir;
                    let mut a = step[slot];
                    let first = a;
                    loop {
                        move_block(&p[r.clone()], &mut cand[r.clone()], i, dir == 0, a);
                        let fc = f(&cand);
                        evaluations += 1;
                        if fc > fx {
                            p[r.clone()].copy_from_slice(&cand[r.clone()]);
                            fx = fc;
                            step[slot] = (2.0 * a).min(1.0);
                            break;
                        }
                        a *= 0.5;
                        if a < MIN_STEP {
                            step[slot] = (first * 0.25).max(STEP_FLOOR);
                            cand[r.clone()].copy_from_slice(&p[r.clone()]);
                            break;
                        }
                    }
                }
            }
        }
        if fx - start < tolerance {
            return AscentReport {
                value: fx,
                converged: true,
                evaluations,
            };
        }
    }
    AscentReport {
        value: fx,
        converged: false,
        evaluations,
    }
}

/// Moves `src` toward vertex `i` by fraction `a` (`toward`), or removes a
/// fraction `a` of the mass on `i` and renormalizes the rest.
fn move_block(src: &[f64], dst: &mut [f64], i: usize, toward: bool, a: f64) {
    if toward {
        for (j, (d, &s)) in dst.iter_mut().zip(src).enumerate() {
            *d = (1.0 - a) * s + if j == i { a } else { 0.0 };
        }
        return;
    }
    let pi = src[i];
    let rest = 1.0 - pi;
    if rest <= 1e-15 {
        // Point mass on i: spread the removed mass evenly.
        let k = (src.len() - 1) as f64;
        for (j, d) in dst.iter_mut().enumerate() {
            *d = if j == i { 1.0 - a } else { a / k };
        }
        return;
    }
    let removed = a * pi;
    let scale = (rest + removed) / rest;
    for (j, (d, &s)) in dst.iter_mut().zip(src).enumerate() {
        *d = if j == i { pi - removed } else { s * scale };
    }
}

const TAG_CAPACITY: u64 = 1 << 40;
const TAG_FRONTIER: u64 = 2 << 40;

fn multistart(
    problem: &mut Problem<'_>,
    params: &SearchParams,
    tag: u64,
    objective: &mut dyn FnMut(&mut Problem<'_>, &[f64]) -> f64,
) -> (Vec<f64>, f64, bool, u64) {
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut converged = true;
    let mut evaluations = 0;
    let (blocks, len) = (problem.blocks, problem.len);
    for r in 0..params.restarts.max(1) {
        let mut s = rng::stream(params.seed, tag, r as u64);
        let mut p = problem.random_start(&mut s);
        let rep = coordinate_ascent(
            &mut |x: &[f64]| objective(problem, x),
            &mut p,
            blocks,
            len,
            params.tolerance,
            params.max_passes,
        );
        converged &= rep.converged;
        evaluations += rep.evaluations;
        if best.as_ref().is_none_or(|(_, v)| rep.value > *v) {
            best = Some((p, rep.value));
        }
    }
    let (p, v) = best.expect("at least one restart");
    (p, v, converged, evaluations)
}

fn capacity_problem<'a>(model: &'a Model, params: &SearchParams, informed: bool) -> Result<Problem<'a>> {
    let p2p = match model {
        Model::Wiretap(m) => m.is_point_to_point(),
        Model::Gp(m) => m.is_point_to_point(),
    };
    if !p2p {
        return Err(Error::Argument(
            "capacity is defined for point-to-point models (|Y2| = 1)".into(),
        ));
    }
    let u = params.u_size.unwrap_or_else(|| model.default_u_size());
    if u == 0 {
        return Err(Error::Argument("auxiliary cardinality must be positive".into()));
    }
    Ok(Problem::new(model, u, informed, Goal::Capacity { informed }))
}

fn capacity(model: &Model, informed: bool, params: &SearchParams) -> Result<Optimum> {
    let mut problem = capacity_problem(model, params, informed)?;
    let (p, v, converged, evaluations) =
        multistart(&mut problem, params, TAG_CAPACITY, &mut |pr, x| pr.capacity_raw(x));
    Ok(Optimum {
        value: v.max(0.0),
        raw_value: v,
        aux: problem.aux(&p),
        converged,
        evaluations,
    })
}

/// Secrecy capacity `max I(U;Y) - I(U;Z)` of a point-to-point wiretap
/// channel, or `max I(X;Y|Z)` when the receiver observes `Z`. The value is
/// the best found over all restarts, a lower estimate of the true maximum.
pub fn wt_capacity(model: &WiretapModel, params: &SearchParams) -> Result<Optimum> {
    capacity(&Model::Wiretap(model.clone()), model.informed_receiver, params)
}

/// Capacity `max I(U;Y) - I(U;Z)` of a point-to-point GP channel, or
/// `max I(X;Y|Z)` with an informed receiver.
pub fn gp_capacity(model: &GpModel, params: &SearchParams) -> Result<Optimum> {
    capacity(&Model::Gp(model.clone()), model.informed_receiver, params)
}

/// The directions of a sweep over the non-negative quadrant, from `(1, 0)`
/// to `(0, 1)` at equal angular spacing.
pub fn sweep_directions(count: usize) -> Vec<(f64, f64)> {
    match count {
        0 => Vec::new(),
        1 => vec![(core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2)],
        _ => (0..count)
            .map(|k| {
                if k == 0 {
                    (1.0, 0.0)
                } else if k == count - 1 {
                    (0.0, 1.0)
                } else {
                    let t = k as f64 / (count - 1) as f64 * core::f64::consts::FRAC_PI_2;
                    (libm::cos(t), libm::sin(t))
                }
            })
            .collect(),
    }
}

/// One direction of a frontier sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub lambda: (f64, f64),
    pub value: f64,
    /// The maximizing vertex.
    pub point: (f64, f64),
    pub aux: AuxiliaryDist,
    pub bounds: RateBounds,
    pub converged: bool,
    pub evaluations: u64,
}

/// A rate region described by support samples and its Pareto boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub family: Family,
    pub samples: Vec<SupportSample>,
    /// Non-dominated hull of the sample vertices, sorted by `R1` ascending
    /// and `R2` descending.
    pub boundary: Vec<(f64, f64)>,
}

impl RateRegion {
    pub fn from_samples(family: Family, samples: Vec<SupportSample>) -> Self {
        let pts: Vec<(f64, f64)> = samples.iter().map(|s| s.point).collect();
        RateRegion {
            family,
            boundary: pareto_hull(&pts),
            samples,
        }
    }

    /// Support value in direction `(l1, l2)` from the boundary.
    pub fn support(&self, l1: f64, l2: f64) -> f64 {
        self.boundary
            .iter()
            .map(|&(a, b)| l1 * a + l2 * b)
            .fold(0.0, f64::max)
    }

    /// True when every sample restart converged.
    pub fn converged(&self) -> bool {
        self.samples.iter().all(|s| s.converged)
    }
}

/// The non-dominated part of the convex hull of `points`, sorted by the
/// first coordinate ascending. An empty input gives `[(0, 0)]`.
pub fn pareto_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    if pts.is_empty() {
        return vec![(0.0, 0.0)];
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    pts.dedup_by(|b, a| a.0 == b.0);
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let top = hull
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let start = hull.iter().rposition(|p| p.1 == top).unwrap_or(0);
    hull.split_off(start)
}

/// Optimizes one direction of a frontier sweep. Independent of every other
/// direction, so callers may run directions in any order or in parallel.
pub fn frontier_direction(
    family: Family,
    model: &Model,
    params: &SearchParams,
    index: usize,
) -> Result<SupportSample> {
    model.check_family(family)?;
    let dirs = sweep_directions(params.directions);
    let &(l1, l2) = dirs
        .get(index)
        .ok_or_else(|| Error::Argument(format!("direction {index} outside the sweep")))?;
    let u = params.u_size.unwrap_or_else(|| model.default_u_size());
    let mut problem = Problem::new(model, u, false, Goal::Bounds(family.kind()));
    let (p, _, converged, evaluations) = multistart(
        &mut problem,
        params,
        TAG_FRONTIER | index as u64,
        &mut |pr, x| support_unchecked(&pr.bounds(x), l1, l2).0,
    );
    let bounds = problem.bounds(&p);
    let (value, point) = support_unchecked(&bounds, l1, l2);
    Ok(SupportSample {
        lambda: (l1, l2),
        value,
        point,
        aux: problem.aux(&p),
        bounds,
        converged,
        evaluations,
    })
}

/// Sweeps `params.directions` support directions and assembles the region.
pub fn region_frontier(family: Family, model: &Model, params: &SearchParams) -> Result<RateRegion> {
    model.check_family(family)?;
    let samples = (0..params.directions)
        .map(|k| frontier_direction(family, model, params, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(RateRegion::from_samples(family, samples))
}

/// What the grid oracle maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleTarget {
    Frontier(Family),
    /// Capacity of the point-to-point model, honoring the informed flag.
    Capacity,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleResult {
    Capacity(Optimum),
    Frontier(RateRegion),
}

/// Number of points of the `delta`-grid on a simplex with `dim` vertices.
pub fn simplex_grid_size(dim: usize, steps: usize) -> u128 {
    // C(steps + dim - 1, dim - 1), computed incrementally (exact at each step).
    let mut c: u128 = 1;
    for i in 1..dim as u128 {
        c = c.saturating_mul(steps as u128 + i) / i;
    }
    c
}

fn grid_steps(delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Argument(format!("grid step {delta} must lie in (0, 1]")));
    }
    let k = libm::round(1.0 / delta);
    if (k * delta - 1.0).abs() > 1e-9 {
        return Err(Error::Argument(format!("grid step {delta} must divide 1")));
    }
    Ok(k as usize)
}

/// Advances `c` to the next composition of `total` in reverse
/// lexicographic order. Returns false after the last one.
fn next_composition(c: &mut [usize]) -> bool {
    let d = c.len();
    if d < 2 {
        return false;
    }
    // Find rightmost nonzero entry before the last position.
    let last = c[d - 1];
    c[d - 1] = 0;
    let Some(j) = (0..d - 1).rev().find(|&j| c[j] > 0) else {
        c[d - 1] = last;
        return false;
    };
    c[j] -= 1;
    c[j + 1] = last + 1;
    true
}

/// Exhaustive search over the `params.grid_delta` grid of the auxiliary
/// simplex (or product of simplices), evaluating the same formulas as the
/// searches.
pub fn brute_force_oracle(target: OracleTarget, model: &Model, params: &SearchParams) -> Result<OracleResult> {
    let k = grid_steps(params.grid_delta)?;
    let (mut problem, directions) = match target {
        OracleTarget::Frontier(f) => {
            model.check_family(f)?;
            let u = params.u_size.unwrap_or_else(|| model.default_u_size());
            (
                Problem::new(model, u, false, Goal::Bounds(f.kind())),
                sweep_directions(params.directions),
            )
        }
        OracleTarget::Capacity => {
            let informed = match model {
                Model::Wiretap(m) => m.informed_receiver,
                Model::Gp(m) => m.informed_receiver,
            };
            (capacity_problem(model, params, informed)?, Vec::new())
        }
    };
    let (blocks, len) = (problem.blocks, problem.len);
    let per_block = simplex_grid_size(len, k);
    let mut required: u128 = 1;
    for _ in 0..blocks {
        required = required.saturating_mul(per_block);
    }
    if required > params.grid_budget {
        return Err(Error::Budget {
            required,
            budget: params.grid_budget,
        });
    }
    let mut comps: Vec<Vec<usize>> = (0..blocks)
        .map(|_| {
            let mut c = vec![0; len];
            c[0] = k;
            c
        })
        .collect();
    let mut x = vec![0.0; blocks * len];
    let kf = k as f64;
    let mut best_cap: Option<(Vec<f64>, f64)> = None;
    let mut best_dir: Vec<Option<(Vec<f64>, f64)>> = vec![None; directions.len()];
    let mut evaluations = 0u64;
    loop {
        for (b, c) in comps.iter().enumerate() {
            for (i, &ci) in c.iter().enumerate() {
                x[b * len + i] = ci as f64 / kf;
            }
        }
        evaluations += 1;
        if directions.is_empty() {
            let v = problem.capacity_raw(&x);
            if best_cap.as_ref().is_none_or(|(_, b)| v > *b) {
                best_cap = Some((x.clone(), v));
            }
        } else {
            let bounds = problem.bounds(&x);
            for (d, &(l1, l2)) in directions.iter().enumerate() {
                let v = support_unchecked(&bounds, l1, l2).0;
                if best_dir[d].as_ref().is_none_or(|(_, b)| v > *b) {
                    best_dir[d] = Some((x.clone(), v));
                }
            }
        }
        // Odometer over the product of block compositions.
        let mut b = blocks;
        let advanced = loop {
            if b == 0 {
                break false;
            }
            b -= 1;
            if next_composition(&mut comps[b]) {
                break true;
            }
            comps[b].iter_mut().for_each(|v| *v = 0);
            comps[b][0] = k;
        };
        if !advanced {
            break;
        }
    }
    match target {
        OracleTarget::Capacity => {
            let (p, v) = best_cap.expect("grid is non-empty");
            Ok(OracleResult::Capacity(Optimum {
                value: v.max(0.0),
                raw_value: v,
                aux: problem.aux(&p),
                converged: true,
                evaluations,
            }))
        }
        OracleTarget::Frontier(f) => {
            let samples = best_dir
                .into_iter()
                .zip(&directions)
                .map(|(b, &(l1, l2))| {
                    let (p, _) = b.expect("grid is non-empty");
                    let bounds = problem.bounds(&p);
                    let (value, point) = support_unchecked(&bounds, l1, l2);
                    SupportSample {
                        lambda: (l1, l2),
                        value,
                        point,
                        aux: problem.aux(&p),
                        bounds,
                        converged: true,
                        evaluations,
                    }
                })
                .collect();
            Ok(OracleResult::Frontier(RateRegion::from_samples(f, samples)))
        }
    }
}

fn down_closed_polygon(boundary: &[(f64, f64)]) -> Vec<(f64, f64)> {
    // Counter-clockwise: origin, R1 axis, boundary from right to left, R2 axis.
    let mut poly = vec![(0.0, 0.0)];
    if let Some(&(r1, _)) = boundary.last() {
        poly.push((r1, 0.0));
    }
    poly.extend(boundary.iter().rev().copied());
    if let Some(&(_, r2)) = boundary.first() {
        poly.push((0.0, r2));
    }
    poly
}

fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    libm::sqrt(qx * qx + qy * qy)
}

fn polygon_distance(p: (f64, f64), poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    let mut inside = n >= 3;
    let mut d = f64::INFINITY;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        if cross < 0.0 {
            inside = false;
        }
        d = d.min(segment_distance(p, a, b));
    }
    if inside {
        0.0
    } else {
        d
    }
}

/// Hausdorff distance between the down-closed convex hulls of two Pareto
/// boundaries. For convex polygons the farthest point is a vertex, so only
/// vertices are checked.
pub fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let pa = down_closed_polygon(a);
    let pb = down_closed_polygon(b);
    let ab = pa.iter().map(|&p| polygon_distance(p, &pb)).fold(0.0, f64::max);
    let ba = pb.iter().map(|&p| polygon_distance(p, &pa)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Which single auxiliary [`reduce_auxiliary`] chose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionCase {
    /// `U = V`.
    DropT,
    /// `U = (V, T)`, encoded `v * |T| + t`.
    Merge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub case: ReductionCase,
    pub aux: AuxiliaryDist,
    /// `I(T;Y2|V) - I(T;Y1,Z|V)`; non-positive selects [`ReductionCase::DropT`].
    pub first: f64,
    /// `I(T;Y2|V) - I(T;Z|V)`; never smaller than `first`.
    pub second: f64,
    /// Raw single-auxiliary bounds at `aux`.
    pub reduced: RawBounds,
    /// Raw two-auxiliary bounds at `(V, T)`.
    pub two_aux: RawBounds,
}

fn vtx_joint(p_vtx: &JointPmf, model: &WiretapModel) -> Result<JointPmf> {
    let names: Vec<&str> = p_vtx.axes().iter().map(|a| a.name.as_str()).collect();
    if names != ["v", "t", "x"] || p_vtx.axes()[2].size != model.x_size() {
        return Err(Error::Shape("p_vtx must have axes (v, t, x) with |X| matching the model".into()));
    }
    let n_out = model.law().n_out();
    let nx = model.x_size();
    let mut mass = Vec::with_capacity(p_vtx.mass().len() * n_out);
    for (i, &w) in p_vtx.mass().iter().enumerate() {
        let x = i % nx;
        mass.extend(model.law().row(x).iter().map(|&k| w * k));
    }
    let mut axes = p_vtx.axes().to_vec();
    axes.extend(model.law().outputs().iter().cloned());
    Ok(JointPmf::from_parts(axes, mass))
}

/// Two-auxiliary outer bounds at `p(v, t, x)`:
/// `R1 <= H(Y1|Z)`, `R2 <= I(V;Y2) - I(V;Z)`,
/// `R1 + R2 <= H(Y1|Z) + I(V,T;Y2) - I(V,T;Y1,Z)`.
pub fn two_aux_bounds(p_vtx: &JointPmf, model: &WiretapModel) -> Result<RawBounds> {
    let j = vtx_joint(p_vtx, model)?;
    // Axes: v, t, x, y1, y2, z.
    let (v, t, y1, y2, z) = (0, 1, 3, 4, 5);
    let h = cond_entropy_by_index(&j, &[y1], &[z]);
    Ok(RawBounds {
        r1: h,
        r2: mi_by_index(&j, &[v], &[y2]) - mi_by_index(&j, &[v], &[z]),
        sum: Some(h + mi_by_index(&j, &[v, t], &[y2]) - mi_by_index(&j, &[v, t], &[y1, z])),
    })
}

/// Replaces the pair `(V, T)` by a single auxiliary whose SD bounds
/// dominate the two-auxiliary bounds componentwise.
pub fn reduce_auxiliary(p_vtx: &JointPmf, model: &WiretapModel) -> Result<Reduction> {
    let m = Model::Wiretap(model.clone());
    m.check_family(Family::SdWt)?;
    let j = vtx_joint(p_vtx, model)?;
    let (v, t, y1, y2, z) = (0, 1, 3, 4, 5);
    let i_t_y2 = cmi_by_index(&j, &[t], &[y2], &[v]);
    let first = i_t_y2 - cmi_by_index(&j, &[t], &[y1, z], &[v]);
    let second = i_t_y2 - cmi_by_index(&j, &[t], &[z], &[v]);
    let (nv, nt, nx) = (p_vtx.axes()[0].size, p_vtx.axes()[1].size, model.x_size());
    let (case, aux) = if first <= 0.0 {
        let p = p_vtx.marginalize(&["v", "x"])?;
        (
            ReductionCase::DropT,
            AuxiliaryDist::Wiretap {
                u_size: nv,
                x_size: nx,
                p_ux: p.mass().to_vec(),
            },
        )
    } else {
        (
            ReductionCase::Merge,
            AuxiliaryDist::Wiretap {
                u_size: nv * nt,
                x_size: nx,
                p_ux: p_vtx.mass().to_vec(),
            },
        )
    };
    let joint = single_letter_joint(&m, &aux)?;
    Ok(Reduction {
        case,
        first,
        second,
        reduced: raw_bounds(Kind::Sd, &joint, 0.0),
        two_aux: two_aux_bounds(p_vtx, model)?,
        aux,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(r1: f64, r2: f64, s: Option<f64>) -> RateBounds {
        RawBounds { r1, r2, sum: s }.clamp()
    }

    #[test]
    fn support_examples() {
        let (v, p) = support_maximum(&b(0.6, 0.8, Some(1.0)), 2.0, 1.0).unwrap();
        assert!((v - 1.6).abs() < 1e-15);
        assert_eq!(p, (0.6, 0.4));
        let (v, p) = support_maximum(&b(1.0, 1.0, None), 1.0, 1.0).unwrap();
        assert_eq!((v, p), (2.0, (1.0, 1.0)));
        let (v, p) = support_maximum(&b(1.0, 1.0, Some(1.0)), 1.0, 1.0).unwrap();
        assert_eq!((v, p), (1.0, (1.0, 0.0)));
        assert!(support_maximum(&b(1.0, 1.0, None), -1.0, 1.0).is_err());
    }

    #[test]
    fn compositions_enumerate_grid() {
        let mut c = vec![3, 0, 0];
        let mut n = 1;
        while next_composition(&mut c) {
            assert_eq!(c.iter().sum::<usize>(), 3);
            n += 1;
        }
        assert_eq!(n, 10);
        assert_eq!(simplex_grid_size(3, 3), 10);
        assert_eq!(simplex_grid_size(6, 50), 3_478_761);
    }

    #[test]
    fn pareto_hull_drops_dominated_and_interior() {
        let h = pareto_hull(&[(0.0, 1.0), (0.5, 0.5), (0.2, 0.2), (1.0, 0.0), (0.4, 0.9)]);
        assert_eq!(h, vec![(0.0, 1.0), (0.4, 0.9), (1.0, 0.0)]);
        assert_eq!(pareto_hull(&[(0.0, 0.0), (0.0, 0.0)]), vec![(0.0, 0.0)]);
    }

    #[test]
    fn hausdorff_basics() {
        let a = vec![(0.0, 1.0), (1.0, 0.0)];
        assert_eq!(hausdorff_distance(&a, &a), 0.0);
        let b = vec![(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)];
        let d = hausdorff_distance(&a, &b);
        assert!((d - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::parse(f.name()).unwrap(), f);
            assert_eq!(f.analog().analog(), f);
            assert_ne!(f.side(), f.analog().side());
        }
    }
}

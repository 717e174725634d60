//! Finite-blocklength laboratory.
//!
//! Superposition codebooks, block codes with explicit encoder kernels and
//! decoder tables, exact or simulated induced joint distributions, and the
//! reliability and secrecy metrics evaluated on them.
//!
//! Sequences over an alphabet of size `k` are indexed most-significant letter
//! first: `(s_1, ..., s_n) -> sum_i s_i k^{n-i}`. Messages are 0-based, so the
//! decoders' fallback "message 1" is index 0.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{analogous_gpbc, GpModel, WiretapModel};
use crate::math::{log2, message_count};
use crate::prob::{
    digits, mutual_information, relative_entropy_raw, total_variation_raw, typical_counts, Axis,
    Divergence, JointPmf, Pmf, StochasticKernel,
};
use crate::regions::Model;
use crate::rng;
use crate::{Error, Result};

/// Default cap on enumeration work, in weighted terms.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

const TAG_INNER: u64 = 3 << 40;
const TAG_OUTER: u64 = 4 << 40;
const TAG_TRIAL: u64 = 5 << 40;

/// Message rates and randomization rates, in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub r1: f64,
    pub r2: f64,
    pub rand1: f64,
    pub rand2: f64,
}

impl Rates {
    pub fn new(r1: f64, r2: f64, rand1: f64, rand2: f64) -> Result<Self> {
        for (name, v) in [("R1", r1), ("R2", r2), ("R~1", rand1), ("R~2", rand2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Argument(format!("rate {name} = {v} must be finite and non-negative")));
            }
        }
        Ok(Rates { r1, r2, rand1, rand2 })
    }
}

fn pow(base: usize, n: usize) -> Result<usize> {
    base.checked_pow(n as u32)
        .ok_or_else(|| Error::Argument(format!("{base}^{n} overflows")))
}

fn seq_index(s: &[usize], k: usize) -> usize {
    s.iter().fold(0, |acc, &v| acc * k + v)
}

fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        Err(Error::Budget { required, budget })
    } else {
        Ok(())
    }
}

/// Inner codewords `u(m2, w2)` and outer codewords `x(m1, w1 | m2, w2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionCodebook {
    pub n: usize,
    pub rates: Rates,
    pub seed: u64,
    pub u_size: usize,
    pub x_size: usize,
    /// Generating PMF `p(u, x)`, indexed `[u][x]`.
    pub p_ux: Vec<f64>,
    pub m1: usize,
    pub m2: usize,
    pub w1: usize,
    pub w2: usize,
    inner: Vec<u8>,
    outer: Vec<u8>,
}

impl SuperpositionCodebook {
    fn inner_index(&self, m2: usize, w2: usize) -> usize {
        m2 * self.w2 + w2
    }

    fn outer_index(&self, m1: usize, w1: usize, m2: usize, w2: usize) -> usize {
        (self.inner_index(m2, w2) * self.m1 + m1) * self.w1 + w1
    }

    /// `u(m2, w2)`.
    pub fn inner(&self, m2: usize, w2: usize) -> &[u8] {
        let i = self.inner_index(m2, w2) * self.n;
        &self.inner[i..i + self.n]
    }

    /// `x(m1, w1 | m2, w2)`.
    pub fn outer(&self, m1: usize, w1: usize, m2: usize, w2: usize) -> &[u8] {
        let i = self.outer_index(m1, w1, m2, w2) * self.n;
        &self.outer[i..i + self.n]
    }

    /// Raw codeword bytes, inner block then outer block.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut b = self.inner.clone();
        b.extend_from_slice(&self.outer);
        b
    }

    /// Encoder of the superposition scheme: `x(m1, w1 | m2, w2)` for explicit
    /// randomization indices.
    pub fn encode(&self, m1: usize, m2: usize, w1: usize, w2: usize) -> Result<&[u8]> {
        if m1 >= self.m1 || m2 >= self.m2 || w1 >= self.w1 || w2 >= self.w2 {
            return Err(Error::Argument(format!(
                "indices ({m1}, {m2}, {w1}, {w2}) outside {}x{}x{}x{}",
                self.m1, self.m2, self.w1, self.w2
            )));
        }
        Ok(self.outer(m1, w1, m2, w2))
    }

    /// Encoder with uniformly drawn randomization indices.
    pub fn encode_random(
        &self,
        m1: usize,
        m2: usize,
        rng: &mut impl rand_core::RngCore,
    ) -> Result<&[u8]> {
        let w1 = rng::index(rng, self.w1);
        let w2 = rng::index(rng, self.w2);
        self.encode(m1, m2, w1, w2)
    }

    /// The stochastic encoder `f(x^n | m1, m2)`, averaging over uniform
    /// randomization indices.
    pub fn encoder_kernel(&self, budget: u128) -> Result<StochasticKernel> {
        let nx = pow(self.x_size, self.n)?;
        check_budget((self.m1 * self.m2) as u128 * nx as u128, budget)?;
        let mut rows = vec![0.0; self.m1 * self.m2 * nx];
        let w = 1.0 / (self.w1 * self.w2) as f64;
        let mut seq = vec![0usize; self.n];
        for m1 in 0..self.m1 {
            for m2 in 0..self.m2 {
                for w1 in 0..self.w1 {
                    for w2 in 0..self.w2 {
                        for (s, &c) in seq.iter_mut().zip(self.outer(m1, w1, m2, w2)) {
                            *s = c as usize;
                        }
                        rows[(m1 * self.m2 + m2) * nx + seq_index(&seq, self.x_size)] += w;
                    }
                }
            }
        }
        Ok(StochasticKernel::from_parts(
            vec![Axis::new("m1", self.m1), Axis::new("m2", self.m2)],
            vec![Axis::new("xn", nx)],
            rows,
            Vec::new(),
        ))
    }
}

/// Draws a superposition codebook: inner letters i.i.d. from `p_U`, outer
/// letters from `p_{X|U}` given the parent inner letter. Each codeword has
/// its own random stream, so regeneration is bit-identical.
pub fn sample_codebook(
    p_ux: &JointPmf,
    n: usize,
    rates: Rates,
    seed: u64,
    budget: u128,
) -> Result<SuperpositionCodebook> {
    if p_ux.axes().len() != 2 {
        return Err(Error::Shape("p_ux must have axes (u, x)".into()));
    }
    if n == 0 {
        return Err(Error::Argument("blocklength must be positive".into()));
    }
    let (nu, nx) = (p_ux.axes()[0].size, p_ux.axes()[1].size);
    if nu > 256 || nx > 256 {
        return Err(Error::Argument("codebook letters are stored as bytes".into()));
    }
    let m1 = message_count(n, rates.r1);
    let m2 = message_count(n, rates.r2);
    let w1 = message_count(n, rates.rand1);
    let w2 = message_count(n, rates.rand2);
    let outer_words = (m1 as u128) * (m2 as u128) * (w1 as u128) * (w2 as u128);
    check_budget((outer_words + (m2 * w2) as u128) * n as u128, budget)?;
    let mass = p_ux.mass();
    let p_u: Vec<f64> = (0..nu).map(|u| mass[u * nx..(u + 1) * nx].iter().sum()).collect();
    let p_x_given_u: Vec<f64> = (0..nu)
        .flat_map(|u| {
            let pu = p_u[u];
            mass[u * nx..(u + 1) * nx]
                .iter()
                .map(move |&v| if pu > 0.0 { v / pu } else { 1.0 / nx as f64 })
        })
        .collect();
    let mut inner = vec![0u8; m2 * w2 * n];
    for (k, word) in inner.chunks_exact_mut(n).enumerate() {
        let mut r = rng::stream(seed, TAG_INNER, k as u64);
        for c in word.iter_mut() {
            *c = rng::categorical(&mut r, &p_u) as u8;
        }
    }
    let mut outer = vec![0u8; outer_words as usize * n];
    let per_parent = m1 * w1;
    for (k, word) in outer.chunks_exact_mut(n).enumerate() {
        let parent = &inner[(k / per_parent) * n..(k / per_parent + 1) * n];
        let mut r = rng::stream(seed, TAG_OUTER, k as u64);
        for (c, &u) in word.iter_mut().zip(parent) {
            let u = u as usize;
            *c = rng::categorical(&mut r, &p_x_given_u[u * nx..(u + 1) * nx]) as u8;
        }
    }
    Ok(SuperpositionCodebook {
        n,
        rates,
        seed,
        u_size: nu,
        x_size: nx,
        p_ux: mass.to_vec(),
        m1,
        m2,
        w1,
        w2,
        inner,
        outer,
    })
}

/// Single-letter PMFs the typicality decoders test against.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalitySpec {
    /// `p(u, x, y1)`, indexed `[u][x][y1]`.
    pub p_uxy1: Pmf,
    /// `p(u, y2)`, indexed `[u][y2]`.
    pub p_uy2: Pmf,
    pub eps: f64,
    u: usize,
    x: usize,
    y1: usize,
    y2: usize,
}

impl TypicalitySpec {
    /// PMFs induced by `p(u, x)` (indexed `[u][x]`) through the model.
    pub fn new(p_ux: &[f64], u: usize, model: &WiretapModel, eps: f64) -> Result<Self> {
        if eps.is_nan() || eps < 0.0 {
            return Err(Error::Domain(format!("typicality slack {eps} must be non-negative")));
        }
        let (x, y1, y2, z) = (model.x_size(), model.y1_size(), model.y2_size(), model.z_size());
        if p_ux.len() != u * x {
            return Err(Error::Shape("p(u,x) does not match |U||X|".into()));
        }
        let mut a = vec![0.0; u * x * y1];
        let mut b = vec![0.0; u * y2];
        for ui in 0..u {
            for xi in 0..x {
                let w = p_ux[ui * x + xi];
                for v1 in 0..y1 {
                    for v2 in 0..y2 {
                        for zi in 0..z {
                            let p = w * model.prob(xi, v1, v2, zi);
                            a[(ui * x + xi) * y1 + v1] += p;
                            b[ui * y2 + v2] += p;
                        }
                    }
                }
            }
        }
        Ok(TypicalitySpec {
            p_uxy1: Pmf::from_raw(a),
            p_uy2: Pmf::from_raw(b),
            eps,
            u,
            x,
            y1,
            y2,
        })
    }
}

/// Which legitimate receiver decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    One,
    Two,
}

/// Joint-typicality decoder of the superposition scheme. Receiver 1 looks
/// for a unique `(m1, m2, w1, w2)` with `(u, x, y1)` typical and returns
/// `m1`; receiver 2 looks for a unique `(m2, w2)` with `(u, y2)` typical and
/// returns `m2`. No unique candidate means message index 0.
pub fn typicality_decode(
    cb: &SuperpositionCodebook,
    spec: &TypicalitySpec,
    y: &[usize],
    receiver: Receiver,
) -> usize {
    let mut counts = Vec::new();
    decode_with(cb, spec, y, receiver, &mut counts)
}

fn decode_with(
    cb: &SuperpositionCodebook,
    spec: &TypicalitySpec,
    y: &[usize],
    receiver: Receiver,
    counts: &mut Vec<usize>,
) -> usize {
    let n = cb.n;
    debug_assert_eq!(y.len(), n);
    let mut found: Option<usize> = None;
    match receiver {
        Receiver::One => {
            counts.resize(spec.u * spec.x * spec.y1, 0);
            for m2 in 0..cb.m2 {
                for w2 in 0..cb.w2 {
                    let u = cb.inner(m2, w2);
                    for m1 in 0..cb.m1 {
                        for w1 in 0..cb.w1 {
                            let x = cb.outer(m1, w1, m2, w2);
                            counts.iter_mut().for_each(|c| *c = 0);
                            for i in 0..n {
                                counts[(u[i] as usize * spec.x + x[i] as usize) * spec.y1 + y[i]] += 1;
                            }
                            if typical_counts(counts, n, spec.p_uxy1.mass(), spec.eps) {
                                if found.is_some() {
                                    return 0;
                                }
                                found = Some(m1);
                            }
                        }
                    }
                }
            }
        }
        Receiver::Two => {
            counts.resize(spec.u * spec.y2, 0);
            for m2 in 0..cb.m2 {
                for w2 in 0..cb.w2 {
                    let u = cb.inner(m2, w2);
                    counts.iter_mut().for_each(|c| *c = 0);
                    for i in 0..n {
                        counts[u[i] as usize * spec.y2 + y[i]] += 1;
                    }
                    if typical_counts(counts, n, spec.p_uy2.mass(), spec.eps) {
                        if found.is_some() {
                            return 0;
                        }
                        found = Some(m2);
                    }
                }
            }
        }
    }
    found.unwrap_or(0)
}

/// Which model family a block code is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeSide {
    Wiretap,
    Gp,
}

/// An `(n, R1, R2)` code with a stochastic encoder and deterministic
/// decoders. On the GP side the encoder also sees the state sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockCode {
    pub n: usize,
    pub side: CodeSide,
    pub rates: Rates,
    pub m1: usize,
    pub m2: usize,
    pub x_size: usize,
    /// State alphabet size; 0 on the wiretap side.
    pub z_size: usize,
    pub y1_size: usize,
    pub y2_size: usize,
    /// Inputs `(m1, m2)` or `(m1, m2, zn)`; output `xn`.
    pub encoder: StochasticKernel,
    /// `phi_1`, indexed by the `y1` sequence.
    pub decoder1: Vec<usize>,
    /// `phi_2`, indexed by the `y2` sequence.
    pub decoder2: Vec<usize>,
}

/// Alphabet sizes and blocklength of a block code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeShape {
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub x: usize,
    pub y1: usize,
    pub y2: usize,
    /// Ignored on the wiretap side.
    pub z: usize,
}

impl BlockCode {
    /// A code from explicit tables. `encoder` rows are indexed `(m1, m2)` on
    /// the wiretap side and `(m1, m2, zn)` on the GP side.
    pub fn new(
        side: CodeSide,
        shape: CodeShape,
        encoder: Vec<f64>,
        decoder1: Vec<usize>,
        decoder2: Vec<usize>,
    ) -> Result<Self> {
        let CodeShape { n, m1, m2, x, y1, y2, z } = shape;
        if n == 0 || m1 == 0 || m2 == 0 {
            return Err(Error::Argument("blocklength and message sets must be non-empty".into()));
        }
        let mut inputs = vec![Axis::new("m1", m1), Axis::new("m2", m2)];
        if side == CodeSide::Gp {
            inputs.push(Axis::new("zn", pow(z, n)?));
        }
        let enc = StochasticKernel::new(inputs, vec![Axis::new("xn", pow(x, n)?)], encoder)?;
        if decoder1.len() != pow(y1, n)? || decoder2.len() != pow(y2, n)? {
            return Err(Error::Shape("decoder tables must cover every output sequence".into()));
        }
        if decoder1.iter().any(|&m| m >= m1) || decoder2.iter().any(|&m| m >= m2) {
            return Err(Error::Argument("decoder output outside the message set".into()));
        }
        let nominal = |m: usize| log2(m as f64) / n as f64;
        Ok(BlockCode {
            n,
            side,
            rates: Rates {
                r1: nominal(m1),
                r2: nominal(m2),
                rand1: 0.0,
                rand2: 0.0,
            },
            m1,
            m2,
            x_size: x,
            z_size: if side == CodeSide::Gp { z } else { 0 },
            y1_size: y1,
            y2_size: y2,
            encoder: enc,
            decoder1,
            decoder2,
        })
    }

    /// Tabulates the superposition scheme on `model`: the encoder averages
    /// over randomization indices and each decoder table is filled by
    /// [`typicality_decode`].
    pub fn from_codebook(
        cb: &SuperpositionCodebook,
        model: &WiretapModel,
        eps: f64,
        budget: u128,
    ) -> Result<Self> {
        if model.x_size() != cb.x_size {
            return Err(Error::Shape("codebook input alphabet does not match the model".into()));
        }
        let spec = TypicalitySpec::new(&cb.p_ux, cb.u_size, model, eps)?;
        let n = cb.n;
        let ny1 = pow(model.y1_size(), n)?;
        let ny2 = pow(model.y2_size(), n)?;
        let words = (cb.m1 * cb.m2 * cb.w1 * cb.w2) as u128;
        check_budget((ny1 as u128 * words + ny2 as u128 * (cb.m2 * cb.w2) as u128) * n as u128, budget)?;
        let encoder = cb.encoder_kernel(budget)?;
        let mut seq = vec![0usize; n];
        let mut counts = Vec::new();
        let decoder1 = (0..ny1)
            .map(|k| {
                digits(k, model.y1_size(), n, &mut seq);
                decode_with(cb, &spec, &seq, Receiver::One, &mut counts)
            })
            .collect();
        let decoder2 = (0..ny2)
            .map(|k| {
                digits(k, model.y2_size(), n, &mut seq);
                decode_with(cb, &spec, &seq, Receiver::Two, &mut counts)
            })
            .collect();
        Ok(BlockCode {
            n,
            side: CodeSide::Wiretap,
            rates: cb.rates,
            m1: cb.m1,
            m2: cb.m2,
            x_size: cb.x_size,
            z_size: 0,
            y1_size: model.y1_size(),
            y2_size: model.y2_size(),
            encoder,
            decoder1,
            decoder2,
        })
    }

    fn check_model(&self, model: &Model) -> Result<()> {
        let ok = match (self.side, model) {
            (CodeSide::Wiretap, Model::Wiretap(m)) => {
                m.x_size() == self.x_size && m.y1_size() == self.y1_size && m.y2_size() == self.y2_size
            }
            (CodeSide::Gp, Model::Gp(m)) => {
                m.x_size() == self.x_size
                    && m.y1_size() == self.y1_size
                    && m.y2_size() == self.y2_size
                    && m.z_size() == self.z_size
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape("code and model disagree on side or alphabets".into()))
        }
    }

    /// Encoder rows filled uniform because their conditioning event had no
    /// mass.
    pub fn null_rows(&self) -> &[usize] {
        self.encoder.null_rows()
    }
}

/// How an induced joint was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

/// A joint PMF induced by a code on a channel, over axes
/// `m1, m2, x.1..x.n, y1.1..y1.n, y2.1..y2.n, z.1..z.n, m1hat, m2hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedJoint {
    pub joint: JointPmf,
    pub n: usize,
    pub side: CodeSide,
    pub provenance: Provenance,
}

/// Enumeration or simulation mode for [`induced_joint`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

fn induced_axes(code: &BlockCode, nz: usize) -> Vec<Axis> {
    let n = code.n;
    let mut axes = vec![Axis::new("m1", code.m1), Axis::new("m2", code.m2)];
    for (p, k) in [("x", code.x_size), ("y1", code.y1_size), ("y2", code.y2_size), ("z", nz)] {
        for i in 1..=n {
            axes.push(Axis::new(format!("{p}.{i}"), k));
        }
    }
    axes.push(Axis::new("m1hat", code.m1));
    axes.push(Axis::new("m2hat", code.m2));
    axes
}

/// Per-letter channel law as a kernel `(x, z_in) -> (y1, y2, z_out)` so
/// both sides share one enumeration routine. On the wiretap side `z_in` is a
/// dummy of size 1 and the law emits `z`; on the GP side the state is an
/// input and `z_out` copies it.
struct LetterLaw {
    y1: usize,
    y2: usize,
    z: usize,
    /// `law[(x * z_in + zi) * outs + ((y1 * y2 + y2) * z + z)]`.
    law: Vec<f64>,
    state_inputs: bool,
}

impl LetterLaw {
    fn new(model: &Model) -> Self {
        match model {
            Model::Wiretap(m) => LetterLaw {
                y1: m.y1_size(),
                y2: m.y2_size(),
                z: m.z_size(),
                law: m.law().rows().to_vec(),
                state_inputs: false,
            },
            Model::Gp(m) => {
                let (x, z, y1, y2) = (m.x_size(), m.z_size(), m.y1_size(), m.y2_size());
                let outs = y1 * y2 * z;
                let mut law = vec![0.0; x * z * outs];
                for xi in 0..x {
                    for zi in 0..z {
                        for a in 0..y1 {
                            for b in 0..y2 {
                                law[(xi * z + zi) * outs + (a * y2 + b) * z + zi] = m.prob(xi, zi, a, b);
                            }
                        }
                    }
                }
                LetterLaw {
                    y1,
                    y2,
                    z,
                    law,
                    state_inputs: true,
                }
            }
        }
    }

    fn outs(&self) -> usize {
        self.y1 * self.y2 * self.z
    }

    fn z_in(&self) -> usize {
        if self.state_inputs {
            self.z
        } else {
            1
        }
    }

    fn row(&self, x: usize, zi: usize) -> &[f64] {
        let o = self.outs();
        let r = x * self.z_in() + zi;
        &self.law[r * o..(r + 1) * o]
    }
}

struct Layout {
    n: usize,
    strides: Vec<usize>,
}

impl Layout {
    fn new(axes: &[Axis]) -> Self {
        let mut strides = vec![0; axes.len()];
        let mut s = 1;
        for (i, a) in axes.iter().enumerate().rev() {
            strides[i] = s;
            s *= a.size;
        }
        Layout { n: (axes.len() - 4) / 4, strides }
    }

    /// Flat index of a full outcome.
    #[allow(clippy::too_many_arguments)]
    fn index(&self, m1: usize, m2: usize, x: &[usize], y1: &[usize], y2: &[usize], z: &[usize], h1: usize, h2: usize) -> usize {
        let n = self.n;
        let s = &self.strides;
        let mut k = m1 * s[0] + m2 * s[1];
        for i in 0..n {
            k += x[i] * s[2 + i] + y1[i] * s[2 + n + i] + y2[i] * s[2 + 2 * n + i] + z[i] * s[2 + 3 * n + i];
        }
        k + h1 * s[2 + 4 * n] + h2 * s[3 + 4 * n]
    }
}

/// State PMF used by the enumeration: `q_Z` on the GP side, a point mass on
/// the dummy state on the wiretap side.
fn state_mass(model: &Model) -> Vec<f64> {
    match model {
        Model::Wiretap(_) => vec![1.0],
        Model::Gp(m) => m.state_dist().mass().to_vec(),
    }
}

/// The joint distribution a code induces on a channel, enumerated exactly
/// or estimated from independent trials.
pub fn induced_joint(code: &BlockCode, model: &Model, mode: Mode, budget: u128) -> Result<InducedJoint> {
    code.check_model(model)?;
    let letter = LetterLaw::new(model);
    let n = code.n;
    let axes = induced_axes(code, letter.z);
    let cells: u128 = axes.iter().map(|a| a.size as u128).product();
    let nx = pow(code.x_size, n)?;
    let n_state_in = pow(letter.z_in(), n)?;
    let n_outs = pow(letter.outs(), n)?;
    let layout = Layout::new(&axes);
    let qz = state_mass(model);
    let (mass, provenance) = match mode {
        Mode::Exact => {
            let terms = (code.m1 * code.m2) as u128 * n_state_in as u128 * nx as u128 * n_outs as u128;
            check_budget(terms.max(cells), budget)?;
            let mut mass = vec![0.0; cells as usize];
            let pm = 1.0 / (code.m1 * code.m2) as f64;
            let mut xs = vec![0; n];
            let mut zin = vec![0; n];
            let mut os = vec![0; n];
            let (mut y1, mut y2, mut z) = (vec![0; n], vec![0; n], vec![0; n]);
            for m1 in 0..code.m1 {
                for m2 in 0..code.m2 {
                    for s in 0..n_state_in {
                        digits(s, letter.z_in(), n, &mut zin);
                        let ps: f64 = zin.iter().map(|&v| qz[v]).product();
                        if ps == 0.0 {
                            continue;
                        }
                        let row = match code.side {
                            CodeSide::Wiretap => m1 * code.m2 + m2,
                            CodeSide::Gp => (m1 * code.m2 + m2) * n_state_in + s,
                        };
                        for (xk, &fx) in code.encoder.row(row).iter().enumerate() {
                            if fx == 0.0 {
                                continue;
                            }
                            digits(xk, code.x_size, n, &mut xs);
                            let w = pm * ps * fx;
                            for ok in 0..n_outs {
                                digits(ok, letter.outs(), n, &mut os);
                                let mut p = w;
                                for i in 0..n {
                                    p *= letter.row(xs[i], zin[i])[os[i]];
                                    if p == 0.0 {
                                        break;
                                    }
                                }
                                if p == 0.0 {
                                    continue;
                                }
                                for i in 0..n {
                                    let o = os[i];
                                    z[i] = o % letter.z;
                                    y2[i] = (o / letter.z) % letter.y2;
                                    y1[i] = o / (letter.z * letter.y2);
                                }
                                let h1 = code.decoder1[seq_index(&y1, letter.y1)];
                                let h2 = code.decoder2[seq_index(&y2, letter.y2)];
                                mass[layout.index(m1, m2, &xs, &y1, &y2, &z, h1, h2)] += p;
                            }
                        }
                    }
                }
            }
            (mass, Provenance::Exact)
        }
        Mode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::Argument("Monte Carlo needs at least one trial".into()));
            }
            check_budget(cells.max(trials as u128 * n as u128), budget)?;
            let mut counts = vec![0u64; cells as usize];
            let mut xs = vec![0; n];
            let mut zin = vec![0; n];
            let (mut y1, mut y2, mut z) = (vec![0; n], vec![0; n], vec![0; n]);
            for t in 0..trials {
                let mut r = rng::stream(seed, TAG_TRIAL, t);
                let m1 = rng::index(&mut r, code.m1);
                let m2 = rng::index(&mut r, code.m2);
                for v in zin.iter_mut() {
                    *v = rng::categorical(&mut r, &qz);
                }
                let row = match code.side {
                    CodeSide::Wiretap => m1 * code.m2 + m2,
                    CodeSide::Gp => (m1 * code.m2 + m2) * n_state_in + seq_index(&zin, letter.z_in()),
                };
                let xk = rng::categorical(&mut r, code.encoder.row(row));
                digits(xk, code.x_size, n, &mut xs);
                for i in 0..n {
                    let o = rng::categorical(&mut r, letter.row(xs[i], zin[i]));
                    z[i] = o % letter.z;
                    y2[i] = (o / letter.z) % letter.y2;
                    y1[i] = o / (letter.z * letter.y2);
                }
                let h1 = code.decoder1[seq_index(&y1, letter.y1)];
                let h2 = code.decoder2[seq_index(&y2, letter.y2)];
                counts[layout.index(m1, m2, &xs, &y1, &y2, &z, h1, h2)] += 1;
            }
            let tf = trials as f64;
            (
                counts.into_iter().map(|c| c as f64 / tf).collect(),
                Provenance::MonteCarlo { trials, seed },
            )
        }
    };
    Ok(InducedJoint {
        joint: JointPmf::from_parts(axes, mass),
        n,
        side: code.side,
        provenance,
    })
}

fn z_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z.{i}")).collect()
}

fn message_block(ij: &InducedJoint) -> Result<(JointPmf, usize)> {
    let m = ij.joint.marginalize(&["m1", "m2", "m1hat", "m2hat"])?;
    let k = m.axes()[0].size * m.axes()[1].size;
    Ok((m, k))
}

/// `|| P_{M, Mhat} - p_U 1{Mhat = M} ||_TV` with `p_U` uniform on messages.
pub fn reliability_tv(ij: &InducedJoint) -> Result<f64> {
    let (m, k) = message_block(ij)?;
    let target: Vec<f64> = (0..k * k)
        .map(|i| if i / k == i % k { 1.0 / k as f64 } else { 0.0 })
        .collect();
    Ok(total_variation_raw(m.mass(), &target))
}

/// `P[(Mhat1, Mhat2) != (M1, M2)]`.
pub fn error_probability(ij: &InducedJoint) -> Result<f64> {
    let (m, k) = message_block(ij)?;
    let correct: f64 = (0..k).map(|i| m.mass()[i * k + i]).sum();
    let off: f64 = m
        .mass()
        .iter()
        .enumerate()
        .filter(|(i, _)| i / k != i % k)
        .map(|(_, &v)| v)
        .sum();
    debug_assert!((correct + off - 1.0).abs() < 1e-9);
    if ij.provenance == Provenance::Exact {
        let tv = reliability_tv(ij)?;
        debug_assert!((tv - off).abs() <= 1e-12, "P_e {off} and reliability TV {tv} disagree");
    }
    Ok(off)
}

fn product_state(q_z: &Pmf, n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        out = out
            .iter()
            .flat_map(|&a| q_z.mass().iter().map(move |&b| a * b))
            .collect();
    }
    out
}

fn check_state(ij: &InducedJoint, q_z: &Pmf) -> Result<()> {
    let zs = ij.joint.axis_index("z.1").map(|i| ij.joint.axes()[i].size)?;
    if zs != q_z.len() {
        return Err(Error::Shape(format!("q_Z has {} symbols, |Z| = {zs}", q_z.len())));
    }
    Ok(())
}

/// TV between the `(M, Mhat, Z^n)` marginal and the ideal
/// `p_U 1{Mhat = M} q_Z^n`.
pub fn tv_to_target(ij: &InducedJoint, q_z: &Pmf) -> Result<f64> {
    check_state(ij, q_z)?;
    let zn = z_names(ij.n);
    let mut keep: Vec<&str> = vec!["m1", "m2", "m1hat", "m2hat"];
    keep.extend(zn.iter().map(|s| s.as_str()));
    let m = ij.joint.marginalize(&keep)?;
    let k = m.axes()[0].size * m.axes()[1].size;
    let qn = product_state(q_z, ij.n);
    let nz = qn.len();
    let target: Vec<f64> = (0..m.mass().len())
        .map(|i| {
            let (mh, zk) = (i / nz, i % nz);
            let (a, b) = (mh / k, mh % k);
            if a == b {
                qn[zk] / k as f64
            } else {
                0.0
            }
        })
        .collect();
    Ok(total_variation_raw(m.mass(), &target))
}

/// `|| P_{M, Z^n} - p_U q_Z^n ||_TV`, which equals the TV between a wiretap
/// code's induced joint and that of its induced GP code.
pub fn secrecy_tv(ij: &InducedJoint, q_z: &Pmf) -> Result<f64> {
    check_state(ij, q_z)?;
    let zn = z_names(ij.n);
    let mut keep: Vec<&str> = vec!["m1", "m2"];
    keep.extend(zn.iter().map(|s| s.as_str()));
    let m = ij.joint.marginalize(&keep)?;
    let k = m.axes()[0].size * m.axes()[1].size;
    let qn = product_state(q_z, ij.n);
    let target: Vec<f64> = (0..k * qn.len()).map(|i| qn[i % qn.len()] / k as f64).collect();
    Ok(total_variation_raw(m.mass(), &target))
}

/// Leakage, stealth and their sum, the effective secrecy divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Secrecy {
    /// `I(M1, M2; Z^n)`.
    pub leakage: f64,
    /// `D(P_{Z^n} || q_Z^n)`.
    pub stealth: Divergence,
    /// `D(P_{M, Z^n} || p_U q_Z^n)`.
    pub total: Divergence,
}

fn secrecy_from_mz(p_mz: &[f64], k: usize, qn: &[f64]) -> Secrecy {
    let nz = qn.len();
    let mut pz = vec![0.0; nz];
    let mut pm = vec![0.0; k];
    for m in 0..k {
        for z in 0..nz {
            pz[z] += p_mz[m * nz + z];
            pm[m] += p_mz[m * nz + z];
        }
    }
    let mut leakage = 0.0;
    for m in 0..k {
        for z in 0..nz {
            let v = p_mz[m * nz + z];
            if v > 0.0 {
                leakage += v * log2(v / (pm[m] * pz[z]));
            }
        }
    }
    let leakage = leakage.max(0.0);
    let stealth = relative_entropy_raw(&pz, qn);
    let target: Vec<f64> = (0..k * nz).map(|i| qn[i % nz] / k as f64).collect();
    let total = relative_entropy_raw(p_mz, &target);
    Secrecy {
        leakage,
        stealth,
        total,
    }
}

/// Effective secrecy of an induced joint. Exact enumeration keeps the
/// message marginal uniform, so `total = leakage + stealth` holds exactly.
pub fn effective_secrecy(ij: &InducedJoint, q_z: &Pmf) -> Result<Secrecy> {
    check_state(ij, q_z)?;
    let zn = z_names(ij.n);
    let mut keep: Vec<&str> = vec!["m1", "m2"];
    keep.extend(zn.iter().map(|s| s.as_str()));
    let m = ij.joint.marginalize(&keep)?;
    let k = m.axes()[0].size * m.axes()[1].size;
    let s = secrecy_from_mz(m.mass(), k, &product_state(q_z, ij.n));
    if ij.provenance == Provenance::Exact {
        debug_assert!({
            let zs: Vec<&str> = zn.iter().map(|s| s.as_str()).collect();
            let i = mutual_information(&m, &["m1", "m2"], &zs).unwrap_or(s.leakage);
            (i - s.leakage).abs() <= 1e-10
        });
        if let (Some(st), Some(t)) = (s.stealth.finite(), s.total.finite()) {
            debug_assert!((t - s.leakage - st).abs() <= 1e-10, "secrecy decomposition broke: {t} vs {} + {st}", s.leakage);
        }
    }
    Ok(s)
}

/// Effective secrecy of a superposition codebook computed exactly from the
/// codewords, without enumerating legitimate outputs:
/// `P(m, z^n) = 1/|M| 1/|W| sum_w prod_i p(z_i | x_i(m, w))`.
pub fn codebook_secrecy(cb: &SuperpositionCodebook, model: &WiretapModel, q_z: &Pmf, budget: u128) -> Result<Secrecy> {
    let nz = model.z_size();
    if q_z.len() != nz || model.x_size() != cb.x_size {
        return Err(Error::Shape("codebook, model and q_Z disagree on alphabets".into()));
    }
    let n = cb.n;
    let nzn = pow(nz, n)?;
    let k = cb.m1 * cb.m2;
    let words = (k * cb.w1 * cb.w2) as u128;
    check_budget(words * nzn as u128 * n as u128, budget)?;
    let eve = model.eve_law();
    let mut p_mz = vec![0.0; k * nzn];
    let scale = 1.0 / (k * cb.w1 * cb.w2) as f64;
    let mut zs = vec![0usize; n];
    for m1 in 0..cb.m1 {
        for m2 in 0..cb.m2 {
            let row = &mut p_mz[(m1 * cb.m2 + m2) * nzn..(m1 * cb.m2 + m2 + 1) * nzn];
            for w1 in 0..cb.w1 {
                for w2 in 0..cb.w2 {
                    let x = cb.outer(m1, w1, m2, w2);
                    for (zk, cell) in row.iter_mut().enumerate() {
                        digits(zk, nz, n, &mut zs);
                        let mut p = scale;
                        for i in 0..n {
                            p *= eve[x[i] as usize * nz + zs[i]];
                        }
                        *cell += p;
                    }
                }
            }
        }
    }
    Ok(secrecy_from_mz(&p_mz, k, &product_state(q_z, n)))
}

/// Outcome of a Monte Carlo run of the superposition scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub trials: u64,
    pub errors: u64,
    pub error_probability: f64,
    /// Binomial standard error of `error_probability`.
    pub std_error: f64,
}

/// Simulates the superposition scheme: uniform messages and randomization,
/// channel outputs drawn from the model, typicality decoding at both
/// receivers. Trials use independent keyed streams.
pub fn simulate_superposition(
    cb: &SuperpositionCodebook,
    model: &WiretapModel,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::Argument("Monte Carlo needs at least one trial".into()));
    }
    let spec = TypicalitySpec::new(&cb.p_ux, cb.u_size, model, eps)?;
    let (n1, n2, nz) = (model.y1_size(), model.y2_size(), model.z_size());
    let n = cb.n;
    let mut y1 = vec![0; n];
    let mut y2 = vec![0; n];
    let mut counts = Vec::new();
    let mut errors = 0u64;
    for t in 0..trials {
        let mut r = rng::stream(seed, TAG_TRIAL, t);
        let m1 = rng::index(&mut r, cb.m1);
        let m2 = rng::index(&mut r, cb.m2);
        let x = cb.encode_random(m1, m2, &mut r)?;
        for i in 0..n {
            let o = rng::categorical(&mut r, model.law().row(x[i] as usize));
            y2[i] = (o / nz) % n2;
            y1[i] = o / (nz * n2);
        }
        debug_assert!(y1.iter().all(|&v| v < n1));
        let h1 = decode_with(cb, &spec, &y1, Receiver::One, &mut counts);
        let h2 = decode_with(cb, &spec, &y2, Receiver::Two, &mut counts);
        if h1 != m1 || h2 != m2 {
            errors += 1;
        }
    }
    let p = errors as f64 / trials as f64;
    Ok(SimulationReport {
        trials,
        errors,
        error_probability: p,
        std_error: crate::math::sqrt(p * (1.0 - p) / trials as f64),
    })
}

/// How [`simulation_sweep`] evaluates reliability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Tabulate decoders and enumerate the induced joint.
    Exact,
    /// Simulate this many trials in total, split evenly over codebooks.
    MonteCarlo { trials: u64 },
}

/// Settings of a blocklength sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub blocklengths: Vec<usize>,
    pub rates: Rates,
    pub eps: f64,
    pub codebooks: u64,
    pub seed: u64,
    pub mode: SweepMode,
    pub budget: u128,
}

/// Metrics at one blocklength, averaged over independently drawn
/// codebooks. Standard errors are taken across codebooks.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub codebooks: u64,
    pub trials: u64,
    pub error_probability: f64,
    pub error_std: f64,
    pub leakage: f64,
    pub stealth: Divergence,
    pub secrecy: Divergence,
    pub secrecy_std: f64,
    /// Mean TV to the ideal distribution; exact mode only.
    pub tv_to_target: Option<f64>,
    /// Exact mode only: the largest deviation, over codebooks, from the
    /// identities `P_e = reliability TV` and `total = leakage + stealth`.
    pub identity_residual: Option<f64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let k = v.len() as f64;
    let mu = v.iter().sum::<f64>() / k;
    if v.len() < 2 {
        return (mu, 0.0);
    }
    let var = v.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (k - 1.0);
    (mu, crate::math::sqrt(var / k))
}

fn mean_divergence(v: &[Divergence]) -> (Divergence, f64) {
    if v.iter().any(|d| !d.is_finite()) {
        return (Divergence::Infinite, f64::INFINITY);
    }
    let f: Vec<f64> = v.iter().map(|d| d.to_f64()).collect();
    let (m, s) = mean_std(&f);
    (Divergence::Finite(m), s)
}

/// Runs the superposition scheme over a list of blocklengths. `model` is
/// the channel as defined; when its receiver 1 is informed the decoder sees
/// `(Y1, Z)`. Secrecy is always computed exactly per codebook.
pub fn simulation_sweep(
    p_ux: &JointPmf,
    model: &WiretapModel,
    q_z: &Pmf,
    params: &SweepParams,
) -> Result<Vec<SweepPoint>> {
    if params.codebooks == 0 {
        return Err(Error::Argument("need at least one codebook".into()));
    }
    let rx = if model.informed_receiver {
        crate::channel::informed_lift_wiretap(model)
    } else {
        model.clone()
    };
    let mut out = Vec::with_capacity(params.blocklengths.len());
    for (k, &n) in params.blocklengths.iter().enumerate() {
        let mut pe = Vec::new();
        let mut leak = Vec::new();
        let mut stealth = Vec::new();
        let mut total = Vec::new();
        let mut tvs = Vec::new();
        let mut residual: Option<f64> = None;
        let mut trials = 0;
        for b in 0..params.codebooks {
            let seed = params.seed ^ ((k as u64) << 32 | b);
            let cb = sample_codebook(p_ux, n, params.rates, seed, params.budget)?;
            let s = match params.mode {
                SweepMode::Exact => {
                    let code = BlockCode::from_codebook(&cb, &rx, params.eps, params.budget)?;
                    let ij = induced_joint(&code, &Model::Wiretap(rx.clone()), Mode::Exact, params.budget)?;
                    let e = error_probability(&ij)?;
                    let s = effective_secrecy(&ij, q_z)?;
                    let mut r = (e - reliability_tv(&ij)?).abs();
                    if let (Some(st), Some(t)) = (s.stealth.finite(), s.total.finite()) {
                        r = r.max((t - s.leakage - st).abs());
                    }
                    residual = Some(residual.unwrap_or(0.0).max(r));
                    pe.push(e);
                    tvs.push(tv_to_target(&ij, q_z)?);
                    s
                }
                SweepMode::MonteCarlo { trials: t } => {
                    let per = (t / params.codebooks).max(1);
                    trials += per;
                    pe.push(simulate_superposition(&cb, &rx, params.eps, per, seed)?.error_probability);
                    codebook_secrecy(&cb, model, q_z, params.budget)?
                }
            };
            leak.push(s.leakage);
            stealth.push(s.stealth);
            total.push(s.total);
        }
        let (error_probability, error_std) = mean_std(&pe);
        let (stealth, _) = mean_divergence(&stealth);
        let (secrecy, secrecy_std) = mean_divergence(&total);
        out.push(SweepPoint {
            n,
            codebooks: params.codebooks,
            trials,
            error_probability,
            error_std,
            leakage: mean_std(&leak).0,
            stealth,
            secrecy,
            secrecy_std,
            tv_to_target: if tvs.is_empty() { None } else { Some(mean_std(&tvs).0) },
            identity_residual: residual,
        });
    }
    Ok(out)
}

/// Turns a wiretap code into a code for the analogous GP channel: the GP
/// encoder is `P_{X^n | Z^n, M}` under the wiretap code, and the decoders
/// are reused. Rows with `P(m, z^n) = 0` are filled uniform and flagged.
pub fn induce_gp_code(
    wt_code: &BlockCode,
    wt_model: &WiretapModel,
    q_z: Option<&Pmf>,
    budget: u128,
) -> Result<(GpModel, BlockCode)> {
    wt_code.check_model(&Model::Wiretap(wt_model.clone()))?;
    if wt_code.side != CodeSide::Wiretap {
        return Err(Error::Argument("expected a wiretap code".into()));
    }
    let gp = analogous_gpbc(wt_model, q_z)?;
    let n = wt_code.n;
    let nz = wt_model.z_size();
    let nx = pow(wt_code.x_size, n)?;
    let nzn = pow(nz, n)?;
    let k = wt_code.m1 * wt_code.m2;
    check_budget(k as u128 * nx as u128 * nzn as u128 * n as u128, budget)?;
    let eve = wt_model.eve_law();
    let mut rows = vec![0.0; k * nzn * nx];
    let mut null_rows = Vec::new();
    let mut xs = vec![0; n];
    let mut zs = vec![0; n];
    for m in 0..k {
        let f = wt_code.encoder.row(m);
        for zk in 0..nzn {
            digits(zk, nz, n, &mut zs);
            let r = m * nzn + zk;
            let row = &mut rows[r * nx..(r + 1) * nx];
            for (xk, &fx) in f.iter().enumerate() {
                if fx == 0.0 {
                    continue;
                }
                digits(xk, wt_code.x_size, n, &mut xs);
                let mut p = fx;
                for i in 0..n {
                    p *= eve[xs[i] * nz + zs[i]];
                }
                row[xk] = p;
            }
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.iter_mut().for_each(|v| *v /= s);
            } else {
                row.iter_mut().for_each(|v| *v = 1.0 / nx as f64);
                null_rows.push(r);
            }
        }
    }
    let encoder = StochasticKernel::from_parts(
        vec![
            Axis::new("m1", wt_code.m1),
            Axis::new("m2", wt_code.m2),
            Axis::new("zn", nzn),
        ],
        vec![Axis::new("xn", nx)],
        rows,
        null_rows,
    );
    let code = BlockCode {
        n,
        side: CodeSide::Gp,
        rates: wt_code.rates,
        m1: wt_code.m1,
        m2: wt_code.m2,
        x_size: wt_code.x_size,
        z_size: nz,
        y1_size: wt_code.y1_size,
        y2_size: wt_code.y2_size,
        encoder,
        decoder1: wt_code.decoder1.clone(),
        decoder2: wt_code.decoder2.clone(),
    };
    Ok((gp, code))
}

/// Encoder rows of a GP code that were uniform-filled although `q_Z^n`
/// charges their state sequence.
pub fn charged_null_rows(code: &BlockCode, q_z: &Pmf) -> Vec<usize> {
    if code.side != CodeSide::Gp {
        return Vec::new();
    }
    let qn = product_state(q_z, code.n);
    code.null_rows()
        .iter()
        .copied()
        .filter(|&r| qn[r % qn.len()] > 0.0)
        .collect()
}

/// Terms of the multi-letter converse bound for a point-to-point GP code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverseGap {
    /// `(1/n) sum_i [I(U_i; Y_i) - I(U_i; Z_i)]` with
    /// `U_i = (M, Y_{1..i-1}, Z_{i+1..n})`.
    pub bracket: f64,
    /// `1/n + R P_e`.
    pub eps_n: f64,
    /// `log2 |M| / n`.
    pub rate: f64,
    pub error_probability: f64,
    /// `bracket + eps_n - rate`; non-negative by Fano's inequality.
    pub gap: f64,
}

/// Evaluates the multi-letter converse for a point-to-point GP code under
/// its exactly enumerated induced joint. The message is `(M1, M2)` and the
/// legitimate output is `Y1`.
pub fn multiletter_converse_gap(gp_code: &BlockCode, gp_model: &GpModel, budget: u128) -> Result<ConverseGap> {
    if !gp_model.is_point_to_point() {
        return Err(Error::Argument("converse gap is defined for point-to-point GP models".into()));
    }
    if gp_code.side != CodeSide::Gp {
        return Err(Error::Argument("expected a GP code".into()));
    }
    let ij = induced_joint(gp_code, &Model::Gp(gp_model.clone()), Mode::Exact, budget)?;
    let n = gp_code.n;
    let ys: Vec<String> = (1..=n).map(|i| format!("y1.{i}")).collect();
    let zs = z_names(n);
    let mut keep: Vec<&str> = vec!["m1", "m2"];
    keep.extend(ys.iter().map(|s| s.as_str()));
    keep.extend(zs.iter().map(|s| s.as_str()));
    let j = ij.joint.marginalize(&keep)?;
    let mut sum = 0.0;
    for i in 0..n {
        let mut u: Vec<&str> = vec!["m1", "m2"];
        u.extend(ys[..i].iter().map(|s| s.as_str()));
        u.extend(zs[i + 1..].iter().map(|s| s.as_str()));
        sum += mutual_information(&j, &u, &[ys[i].as_str()])?
            - mutual_information(&j, &u, &[zs[i].as_str()])?;
    }
    let bracket = sum / n as f64;
    let rate = log2((gp_code.m1 * gp_code.m2) as f64) / n as f64;
    let pe = error_probability(&ij)?;
    let eps_n = 1.0 / n as f64 + rate * pe;
    Ok(ConverseGap {
        bracket,
        eps_n,
        rate,
        error_probability: pe,
        gap: bracket + eps_n - rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::bsc;

    fn noiseless_p2p() -> WiretapModel {
        // Y = X, Z constant.
        WiretapModel::point_to_point(2, 2, 1, vec![1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn identity_code(n: usize) -> BlockCode {
        let k = 1 << n;
        let mut enc = vec![0.0; k * k];
        for m in 0..k {
            enc[m * k + m] = 1.0;
        }
        let shape = CodeShape { n, m1: k, m2: 1, x: 2, y1: 2, y2: 1, z: 1 };
        BlockCode::new(CodeSide::Wiretap, shape, enc, (0..k).collect(), vec![0]).unwrap()
    }

    #[test]
    fn perfect_code_has_no_errors() {
        let code = identity_code(1);
        let ij = induced_joint(&code, &Model::Wiretap(noiseless_p2p()), Mode::Exact, DEFAULT_BUDGET).unwrap();
        assert_eq!(error_probability(&ij).unwrap(), 0.0);
        assert_eq!(reliability_tv(&ij).unwrap(), 0.0);
    }

    #[test]
    fn constant_decoder_error_is_one_minus_one_over_k() {
        let mut code = identity_code(2);
        code.decoder1 = vec![0; 4];
        let ij = induced_joint(&code, &Model::Wiretap(noiseless_p2p()), Mode::Exact, DEFAULT_BUDGET).unwrap();
        assert!((error_probability(&ij).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn z_equal_message_leaks_one_bit() {
        // n = 1, Y = Z = X, q_Z uniform.
        let wt = WiretapModel::point_to_point(2, 2, 2, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let code = identity_code(1);
        let ij = induced_joint(&code, &Model::Wiretap(wt), Mode::Exact, DEFAULT_BUDGET).unwrap();
        let s = effective_secrecy(&ij, &Pmf::uniform(2)).unwrap();
        assert!((s.leakage - 1.0).abs() < 1e-15);
        assert_eq!(s.stealth, Divergence::Finite(0.0));
        assert_eq!(s.total, Divergence::Finite(1.0));
    }

    #[test]
    fn zero_rates_give_singletons() {
        let p = JointPmf::new(vec![Axis::new("u", 2), Axis::new("x", 2)], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let cb = sample_codebook(&p, 4, Rates::new(0.5, 0.0, 0.0, 0.0).unwrap(), 9, DEFAULT_BUDGET).unwrap();
        assert_eq!((cb.m1, cb.m2, cb.w1, cb.w2), (4, 1, 1, 1));
        for m1 in 0..cb.m1 {
            assert_eq!(cb.outer(m1, 0, 0, 0), cb.inner(0, 0));
        }
    }

    #[test]
    fn identical_codebook_is_ambiguous() {
        let p = JointPmf::new(vec![Axis::new("u", 1), Axis::new("x", 2)], vec![0.5, 0.5]).unwrap();
        let mut cb = sample_codebook(&p, 2, Rates::new(1.0, 0.0, 0.0, 0.0).unwrap(), 1, DEFAULT_BUDGET).unwrap();
        cb.outer.iter_mut().for_each(|c| *c = 0);
        let wt = WiretapModel::independent(2, 2, 1, 1, &bsc(0.0), &[1.0, 1.0]).unwrap();
        let spec = TypicalitySpec::new(&cb.p_ux, 1, &wt, 10.0).unwrap();
        assert_eq!(typicality_decode(&cb, &spec, &[0, 0], Receiver::One), 0);
    }
}

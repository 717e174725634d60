//! Command dispatch. Every command computes its artifacts in memory and
//! writes them once at the end. Module errors leave no output; a failed
//! invariant check still writes the artifacts that show the failure.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use wtgp_core::channel::{analogous_gpbc, GpModel, WiretapModel};
use wtgp_core::lab::{
    effective_secrecy, error_probability, induce_gp_code, induced_joint, secrecy_tv, simulation_sweep,
    tv_to_target, BlockCode, Mode, SweepMode, SweepParams, SweepPoint,
};
use wtgp_core::prob::{total_variation_raw, Axis, Divergence, JointPmf, Pmf};
use wtgp_core::regions::{
    bounds_from_joint, brute_force_oracle, eval_rate_bounds, gp_capacity, hausdorff_distance, region_frontier,
    single_letter_joint, wt_capacity, AuxiliaryDist, Family, Model, OracleResult, OracleTarget, RateBounds,
};
use wtgp_core::{rng, Error};

use crate::config::{Command, Format, QzChoice, RunConfig};
use crate::error::{CliError, CliResult};
use crate::export::{region_csv, sig9, to_json_bytes, AuxRecord, BoundsRecord, RegionFile, SearchMeta};
use crate::model_file::{classification_report, parse_channel_file, ChannelFile, LoadedModel};

/// Residual allowed between a wiretap bound and its GP analog when both are
/// evaluated through their own models.
pub const ANALOG_TOLERANCE: f64 = 1e-9;
/// Tolerance of the exact code identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;
const SIM_RESIDUAL_TOLERANCE: f64 = 1e-10;

const TAG_COMPARE: u64 = 0xc0;

/// What a run printed and wrote.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub stdout: String,
    /// Diagnostics, including the classification report.
    pub stderr: String,
    pub files: Vec<PathBuf>,
}

struct Pending {
    out: RunOutput,
    writes: Vec<(PathBuf, Vec<u8>)>,
}

impl Pending {
    fn new(report: String) -> Self {
        Pending {
            out: RunOutput {
                stderr: report,
                ..RunOutput::default()
            },
            writes: Vec::new(),
        }
    }

    fn file(&mut self, dir: &Path, name: &str, bytes: Vec<u8>) {
        self.writes.push((dir.join(name), bytes));
    }

    fn write_now(&mut self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (path, bytes) in std::mem::take(&mut self.writes) {
            std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            self.out.files.push(path);
        }
        Ok(())
    }

    fn flush(mut self, dir: &Path) -> CliResult<RunOutput> {
        self.write_now(dir)?;
        Ok(self.out)
    }
}

pub fn run(cfg: &RunConfig) -> CliResult<RunOutput> {
    let loaded = parse_channel_file(&cfg.channel)?;
    let mut p = Pending::new(classification_report(&loaded));
    match cfg.command {
        Command::Capacity => capacity(cfg, &loaded, &mut p)?,
        Command::Region => region(cfg, &loaded, &mut p)?,
        Command::Transform => transform(cfg, &loaded, &mut p)?,
        Command::Simulate => simulate(cfg, &loaded, &mut p)?,
        Command::Compare => compare(cfg, &loaded, &mut p)?,
    }
    p.flush(&cfg.out)
}

fn wiretap_only(loaded: &LoadedModel, cmd: Command) -> CliResult<(&WiretapModel, Option<&Pmf>)> {
    match loaded {
        LoadedModel::Wiretap { model, state_dist } => Ok((model, state_dist.as_ref())),
        LoadedModel::Gp(_) => Err(CliError::Config(format!("`{}` needs a wiretap channel file", cmd.name()))),
    }
}

fn model_of(loaded: &LoadedModel) -> Model {
    match loaded {
        LoadedModel::Wiretap { model, .. } => Model::Wiretap(model.clone()),
        LoadedModel::Gp(g) => Model::Gp(g.clone()),
    }
}

fn read_pmf(path: &Path, len: usize) -> CliResult<Pmf> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let v: Vec<f64> = serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if v.len() != len {
        return Err(CliError::Alphabet {
            path: path.to_path_buf(),
            message: format!("q_Z has {} entries, |Z| = {len}", v.len()),
        });
    }
    if let Some((i, &x)) = v.iter().enumerate().find(|(_, x)| x.is_nan() || **x < 0.0) {
        return Err(CliError::Negative {
            path: path.to_path_buf(),
            cell: vec![i],
            value: x,
        });
    }
    let total: f64 = v.iter().sum();
    if !crate::model_file::sums_to_one(total) {
        return Err(CliError::RowSum {
            path: path.to_path_buf(),
            row: vec![],
            total,
        });
    }
    Ok(Pmf::new(v.iter().map(|x| x / total).collect())?)
}

/// Target `q_Z`. `p_x` is the input distribution in play; `None` means
/// uniform.
fn resolve_qz(cfg: &RunConfig, wt: &WiretapModel, file_q: Option<&Pmf>, p_x: Option<&[f64]>) -> CliResult<Pmf> {
    let induced = || -> CliResult<Pmf> {
        match p_x {
            Some(p) => Ok(wt.z_marginal(p)?),
            None => Ok(wt.default_state_dist()),
        }
    };
    match &cfg.qz {
        Some(QzChoice::Uniform) => Ok(Pmf::uniform(wt.z_size())),
        Some(QzChoice::Induced) => induced(),
        Some(QzChoice::File(path)) => read_pmf(path, wt.z_size()),
        None => match file_q {
            Some(q) => Ok(q.clone()),
            None => induced(),
        },
    }
}

fn divergence_json(d: Divergence) -> Value {
    match d {
        Divergence::Finite(v) => json!(v),
        Divergence::Infinite => json!("inf"),
    }
}

fn capacity(cfg: &RunConfig, loaded: &LoadedModel, p: &mut Pending) -> CliResult<()> {
    let opt = match loaded {
        LoadedModel::Wiretap { model, .. } => wt_capacity(model, &cfg.search)?,
        LoadedModel::Gp(g) => gp_capacity(g, &cfg.search)?,
    };
    let oracle = if cfg.oracle {
        match brute_force_oracle(OracleTarget::Capacity, &model_of(loaded), &cfg.search)? {
            OracleResult::Capacity(o) => Some(json!({
                "value": o.value,
                "grid_delta": cfg.search.grid_delta,
                "aux": AuxRecord::from_aux(&o.aux),
            })),
            OracleResult::Frontier(_) => unreachable!("capacity oracle returns a capacity"),
        }
    } else {
        None
    };
    let doc = json!({
        "command": "capacity",
        "value": opt.value,
        "raw_value": opt.raw_value,
        "converged": opt.converged,
        "evaluations": opt.evaluations,
        "aux": AuxRecord::from_aux(&opt.aux),
        "metadata": SearchMeta::new(&cfg.search, opt.converged),
        "oracle": oracle,
    });
    p.out.stdout = format!("{:.6}\n", opt.value);
    p.file(&cfg.out, "capacity.json", to_json_bytes(&doc));
    Ok(())
}

/// The most specific family the model belongs to.
pub fn infer_family(model: &Model) -> CliResult<Family> {
    let (sd, pd) = match model {
        Model::Wiretap(m) => (m.classify().is_sd(), m.classify().is_pd()),
        Model::Gp(m) => (m.classify().is_sd(), m.classify().is_pd()),
    };
    let wt = matches!(model, Model::Wiretap(_));
    let family = match (sd, pd, model.coop_capacity().is_some(), wt) {
        (true, _, _, true) => Family::SdWt,
        (true, _, _, false) => Family::SdGp,
        (false, true, false, true) => Family::PdIrWt,
        (false, true, false, false) => Family::PdIrGp,
        (false, true, true, true) => Family::PdIrWtCoop,
        (false, true, true, false) => Family::PdIrGpCoop,
        (false, false, _, _) => {
            return Err(CliError::Config(
                "model is neither semi-deterministic nor physically degraded; pass --family".into(),
            ))
        }
    };
    Ok(family)
}

fn region(cfg: &RunConfig, loaded: &LoadedModel, p: &mut Pending) -> CliResult<()> {
    let model = model_of(loaded);
    let family = match cfg.family {
        Some(f) => f,
        None => infer_family(&model)?,
    };
    let region = region_frontier(family, &model, &cfg.search)?;
    let mut meta = SearchMeta::new(&cfg.search, region.converged());
    if cfg.oracle {
        if let OracleResult::Frontier(o) = brute_force_oracle(OracleTarget::Frontier(family), &model, &cfg.search)? {
            meta.oracle_hausdorff = Some(hausdorff_distance(&region.boundary, &o.boundary));
            meta.oracle_grid_delta = Some(cfg.search.grid_delta);
        }
    }
    let mut s = format!("family {family}, {} directions\n", region.samples.len());
    for &(a, b) in &region.boundary {
        s.push_str(&format!("{}\t{}\n", sig9(a), sig9(b)));
    }
    if let Some(h) = meta.oracle_hausdorff {
        s.push_str(&format!("hausdorff to grid oracle: {h:.3e}\n"));
    }
    p.out.stdout = s;
    if cfg.format == Format::Csv {
        p.file(&cfg.out, "region.csv", region_csv(&region)?);
    }
    p.file(&cfg.out, "region.json", to_json_bytes(&RegionFile::new(&region, meta)));
    Ok(())
}

fn transform(cfg: &RunConfig, loaded: &LoadedModel, p: &mut Pending) -> CliResult<()> {
    let (wt, file_q) = wiretap_only(loaded, Command::Transform)?;
    let q = resolve_qz(cfg, wt, file_q, None)?;
    let gp = analogous_gpbc(wt, Some(&q))?;
    let gp_loaded = LoadedModel::Gp(gp.clone());
    p.out.stdout = format!(
        "wiretap:\n{}analogous GP:\n{}",
        classification_report(loaded),
        classification_report(&gp_loaded)
    );
    p.file(&cfg.out, "gp_model.json", to_json_bytes(&ChannelFile::from_gp(&gp)));
    Ok(())
}

/// `p(u, x)` from rows over `u`, or constant `U` with uniform `X`.
fn p_ux(cfg: &RunConfig, x_size: usize) -> CliResult<JointPmf> {
    let (rows, u) = match &cfg.sim.p_ux {
        Some(rows) => (rows.concat(), rows.len()),
        None => (vec![1.0 / x_size as f64; x_size], 1),
    };
    if u == 0 || rows.len() != u * x_size {
        return Err(CliError::Config(format!("sim.p_ux must have rows of length |X| = {x_size}")));
    }
    JointPmf::new(vec![Axis::new("u", u), Axis::new("x", x_size)], rows)
        .map_err(|e| CliError::Config(format!("sim.p_ux: {e}")))
}

fn p_x_of(p_ux: &JointPmf) -> Vec<f64> {
    let nx = p_ux.axes()[1].size;
    let mut p = vec![0.0; nx];
    for (i, &w) in p_ux.mass().iter().enumerate() {
        p[i % nx] += w;
    }
    p
}

#[derive(Serialize)]
struct PointRecord {
    n: usize,
    codebooks: u64,
    trials: u64,
    error_probability: f64,
    error_std: f64,
    leakage: f64,
    stealth: Value,
    secrecy: Value,
    secrecy_std: Value,
    tv_to_target: Option<f64>,
    identity_residual: Option<f64>,
}

impl PointRecord {
    fn new(s: &SweepPoint) -> Self {
        PointRecord {
            n: s.n,
            codebooks: s.codebooks,
            trials: s.trials,
            error_probability: s.error_probability,
            error_std: s.error_std,
            leakage: s.leakage,
            stealth: divergence_json(s.stealth),
            secrecy: divergence_json(s.secrecy),
            secrecy_std: if s.secrecy_std.is_finite() {
                json!(s.secrecy_std)
            } else {
                json!("inf")
            },
            tv_to_target: s.tv_to_target,
            identity_residual: s.identity_residual,
        }
    }
}

fn simulate(cfg: &RunConfig, loaded: &LoadedModel, p: &mut Pending) -> CliResult<()> {
    let (wt, file_q) = wiretap_only(loaded, Command::Simulate)?;
    let pux = p_ux(cfg, wt.x_size())?;
    let q = resolve_qz(cfg, wt, file_q, Some(&p_x_of(&pux)))?;
    let params = SweepParams {
        blocklengths: cfg.sim.blocklengths.clone(),
        rates: cfg.sim.rates,
        eps: cfg.sim.eps,
        codebooks: cfg.sim.codebooks,
        seed: cfg.seed,
        mode: cfg.sim.mode,
        budget: cfg.sim.budget,
    };
    let points = simulation_sweep(&pux, wt, &q, &params)?;
    let mut s = String::from("n\tP_e\tsecrecy\n");
    for pt in &points {
        s.push_str(&format!("{}\t{:.6}\t{}\n", pt.n, pt.error_probability, divergence_json(pt.secrecy)));
    }
    p.out.stdout = s;
    let r = cfg.sim.rates;
    let doc = json!({
        "command": "simulate",
        "seed": cfg.seed,
        "mode": match cfg.sim.mode {
            SweepMode::Exact => json!("exact"),
            SweepMode::MonteCarlo { trials } => json!({ "mc": trials }),
        },
        "rates": [r.r1, r.r2, r.rand1, r.rand2],
        "eps": cfg.sim.eps,
        "q_z": q.mass(),
        "points": points.iter().map(PointRecord::new).collect::<Vec<_>>(),
    });
    // Written before the check so a failing run still leaves its evidence.
    p.file(&cfg.out, "simulate.json", to_json_bytes(&doc));
    if let Some(bad) = points
        .iter()
        .find(|pt| pt.identity_residual.is_some_and(|r| r.is_nan() || r > SIM_RESIDUAL_TOLERANCE))
    {
        let msg = format!(
            "code identity residual {:.3e} at n = {} exceeds {SIM_RESIDUAL_TOLERANCE:e}",
            bad.identity_residual.unwrap_or(f64::NAN),
            bad.n
        );
        p.write_now(&cfg.out)?;
        return Err(CliError::Invariant(msg));
    }
    Ok(())
}

/// `q(u, x | z) = p(u, x) p(z | x) / P_Z(z)`, uniform where `P_Z(z) = 0`,
/// together with `P_Z`.
pub fn conditional_aux(wt: &WiretapModel, u: usize, p_ux: &[f64]) -> CliResult<(AuxiliaryDist, Pmf)> {
    let (nx, nz) = (wt.x_size(), wt.z_size());
    let eve = wt.eve_law();
    let mut pz = vec![0.0; nz];
    for (i, &w) in p_ux.iter().enumerate() {
        for z in 0..nz {
            pz[z] += w * eve[(i % nx) * nz + z];
        }
    }
    let b = u * nx;
    let mut q = vec![0.0; nz * b];
    for z in 0..nz {
        let block = &mut q[z * b..(z + 1) * b];
        if pz[z] > 0.0 {
            for (i, c) in block.iter_mut().enumerate() {
                *c = p_ux[i] * eve[(i % nx) * nz + z] / pz[z];
            }
            let t: f64 = block.iter().sum();
            block.iter_mut().for_each(|c| *c /= t);
        } else {
            block.iter_mut().for_each(|c| *c = 1.0 / b as f64);
        }
    }
    let t: f64 = pz.iter().sum();
    let pz = Pmf::new(pz.iter().map(|v| v / t).collect())?;
    Ok((AuxiliaryDist::gp(u, nx, nz, q)?, pz))
}

fn bounds_residual(a: &RateBounds, b: &RateBounds) -> f64 {
    let sum = match (a.raw.sum, b.raw.sum) {
        (Some(x), Some(y)) => (x - y).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    };
    (a.raw.r1 - b.raw.r1).abs().max((a.raw.r2 - b.raw.r2).abs()).max(sum)
}

fn bit_identical(a: &RateBounds, b: &RateBounds) -> bool {
    let bits = |x: &RateBounds| {
        [
            x.r1.to_bits(),
            x.r2.to_bits(),
            x.sum.map_or(u64::MAX, f64::to_bits),
            x.raw.r1.to_bits(),
            x.raw.r2.to_bits(),
            x.raw.sum.map_or(u64::MAX, f64::to_bits),
        ]
    };
    bits(a) == bits(b)
}

/// Appendix-style checks of one code: the wiretap code against the GP code
/// it induces under `q_Z`.
#[derive(Debug, Clone, Serialize)]
pub struct CodeCheck {
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    pub error_probability_wt: f64,
    pub error_probability_gp: f64,
    pub tv_joint: f64,
    pub secrecy_tv: f64,
    pub tv_to_target: f64,
    /// `|TV(P, Q) - ||P_{M,Z^n} - p_M q_Z^n|||`.
    pub residual: f64,
    /// `P_e(gp) <= P_e(wt) + 2 tv_to_target`, with slack 1e-12.
    pub triangle_holds: bool,
    pub charged_null_rows: usize,
    pub secrecy: Value,
}

pub fn check_code(code: &BlockCode, wt: &WiretapModel, q: &Pmf, budget: u128) -> Result<CodeCheck, Error> {
    let pj = induced_joint(code, &Model::Wiretap(wt.clone()), Mode::Exact, budget)?;
    let (gp, gcode): (GpModel, BlockCode) = induce_gp_code(code, wt, Some(q), budget)?;
    let qj = induced_joint(&gcode, &Model::Gp(gp), Mode::Exact, budget)?;
    let tv = total_variation_raw(pj.joint.mass(), qj.joint.mass());
    let stv = secrecy_tv(&pj, q)?;
    let ttt = tv_to_target(&pj, q)?;
    let (pw, pg) = (error_probability(&pj)?, error_probability(&qj)?);
    Ok(CodeCheck {
        n: code.n,
        m1: code.m1,
        m2: code.m2,
        error_probability_wt: pw,
        error_probability_gp: pg,
        tv_joint: tv,
        secrecy_tv: stv,
        tv_to_target: ttt,
        residual: (tv - stv).abs(),
        triangle_holds: pg <= pw + 2.0 * ttt + IDENTITY_TOLERANCE,
        charged_null_rows: wtgp_core::lab::charged_null_rows(&gcode, q).len(),
        secrecy: divergence_json(effective_secrecy(&pj, q)?.total),
    })
}

fn compare(cfg: &RunConfig, loaded: &LoadedModel, p: &mut Pending) -> CliResult<()> {
    let (wt, file_q) = wiretap_only(loaded, Command::Compare)?;
    let wmodel = Model::Wiretap(wt.clone());
    let family = match cfg.family {
        Some(f) if f.side() == wtgp_core::regions::Side::Wiretap => f,
        Some(f) => f.analog(),
        None => infer_family(&wmodel)?,
    };
    let u = cfg.search.u_size.unwrap_or(wt.x_size() + 1);
    let nx = wt.x_size();
    let c12 = wt.coop_capacity;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Config(format!("CSV encoding failed: {e}"));
    csv.write_record([
        "sample", "wt_R1", "wt_R2", "wt_sum", "gp_R1", "gp_R2", "gp_sum", "analog_residual", "joint_residual",
    ])
    .map_err(csv_err)?;
    for k in 0..cfg.compare_samples {
        let mut r = rng::stream(cfg.seed, TAG_COMPARE, k as u64);
        let mut pux = vec![0.0; u * nx];
        rng::dirichlet_flat(&mut r, &mut pux);
        let waux = AuxiliaryDist::wiretap(u, nx, pux.clone())?;
        let (gaux, pz) = conditional_aux(wt, u, &pux)?;
        let gp = analogous_gpbc(wt, Some(&pz))?;
        let gmodel = Model::Gp(gp);
        let wb = eval_rate_bounds(family, &waux, &wmodel)?;
        let gb = eval_rate_bounds(family.analog(), &gaux, &gmodel)?;
        let analog_residual = bounds_residual(&wb, &gb);
        // Both families on one joint must agree exactly.
        let joint = single_letter_joint(&wmodel, &waux)?;
        let jw = bounds_from_joint(family, &joint, c12)?;
        let jg = bounds_from_joint(family.analog(), &joint, c12)?;
        let joint_residual = if bit_identical(&jw, &jg) { 0.0 } else { bounds_residual(&jw, &jg).max(f64::MIN_POSITIVE) };
        let gjoint = single_letter_joint(&gmodel, &gaux)?;
        let joint_tv = total_variation_raw(joint.mass(), gjoint.mass());
        if analog_residual.is_nan() || analog_residual > ANALOG_TOLERANCE {
            violations.push(format!("sample {k}: analog residual {analog_residual:.3e}"));
        }
        if joint_residual != 0.0 {
            violations.push(format!("sample {k}: bounds differ on one joint"));
        }
        let opt = |v: Option<f64>| v.map(sig9).unwrap_or_default();
        csv.write_record([
            k.to_string(),
            sig9(wb.r1),
            sig9(wb.r2),
            opt(wb.sum),
            sig9(gb.r1),
            sig9(gb.r2),
            opt(gb.sum),
            format!("{analog_residual:e}"),
            format!("{joint_residual:e}"),
        ])
        .map_err(csv_err)?;
        rows.push(json!({
            "sample": k,
            "p_ux": pux,
            "wiretap": BoundsRecord::from_bounds(&wb),
            "gp": BoundsRecord::from_bounds(&gb),
            "analog_residual": analog_residual,
            "joint_residual": joint_residual,
            "joint_tv": joint_tv,
        }));
    }

    // One superposition code at the first blocklength, if it fits the budget.
    let pux = p_ux(cfg, nx)?;
    let q = resolve_qz(cfg, wt, file_q, Some(&p_x_of(&pux)))?;
    let rx = if wt.informed_receiver {
        wtgp_core::channel::informed_lift_wiretap(wt)
    } else {
        wt.clone()
    };
    let n = cfg.sim.blocklengths[0];
    let code_check = wtgp_core::lab::sample_codebook(&pux, n, cfg.sim.rates, cfg.seed, cfg.sim.budget)
        .and_then(|cb| BlockCode::from_codebook(&cb, &rx, cfg.sim.eps, cfg.sim.budget))
        .and_then(|code| check_code(&code, &rx, &q, cfg.sim.budget));
    let code = match code_check {
        Ok(c) => {
            if c.residual.is_nan() || c.residual > IDENTITY_TOLERANCE {
                violations.push(format!("code TV residual {:.3e}", c.residual));
            }
            if !c.triangle_holds {
                violations.push("code error probability exceeds the triangle bound".into());
            }
            json!(c)
        }
        Err(Error::Budget { required, budget }) => {
            json!({ "skipped": format!("needs {required} terms, budget {budget}") })
        }
        Err(e) => return Err(e.into()),
    };

    let mut s = format!("family {family} vs {}\n", family.analog());
    s.push_str("sample\twt (R1, R2, sum)\tgp (R1, R2, sum)\tresidual\n");
    for row in &rows {
        let f = |b: &Value| {
            format!(
                "({}, {}, {})",
                b["r1"].as_f64().map(sig9).unwrap_or_default(),
                b["r2"].as_f64().map(sig9).unwrap_or_default(),
                b["sum"].as_f64().map(sig9).unwrap_or_else(|| "-".into())
            )
        };
        s.push_str(&format!(
            "{}\t{}\t{}\t{:.1e}\n",
            row["sample"],
            f(&row["wiretap"]),
            f(&row["gp"]),
            row["analog_residual"].as_f64().unwrap_or(f64::NAN)
        ));
    }
    if let Some(r) = code.get("residual").and_then(Value::as_f64) {
        s.push_str(&format!("code n={n}: TV residual {r:.1e}\n"));
    }
    p.out.stdout = s;
    let doc = json!({
        "command": "compare",
        "family": family.name(),
        "analog": family.analog().name(),
        "seed": cfg.seed,
        "u_size": u,
        "samples": rows,
        "code": code,
        "q_z": q.mass(),
        "violations": violations,
    });
    if cfg.format == Format::Csv {
        p.file(&cfg.out, "compare.csv", csv.into_inner().map_err(|e| CliError::Config(e.to_string()))?);
    }
    p.file(&cfg.out, "compare.json", to_json_bytes(&doc));
    if !violations.is_empty() {
        p.write_now(&cfg.out)?;
        return Err(CliError::Invariant(violations.join("; ")));
    }
    Ok(())
}

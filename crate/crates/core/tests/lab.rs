mod common;

use common::*;
use wtgp_core::channel::{analogous_gpbc, GpModel};
use wtgp_core::lab::*;
use wtgp_core::prob::{total_variation_raw, Axis, Divergence, JointPmf, Pmf};
use wtgp_core::regions::Model;
use wtgp_core::Error;

fn state(r: &mut rand_chacha::ChaCha8Rng) -> Pmf {
    Pmf::new(simplex(r, 2)).unwrap()
}

#[test]
fn error_probability_equals_reliability_tv() {
    let mut r = rng(1);
    for k in 0..40 {
        let wt = wiretap(&mut r, 2, 2, 2, 2);
        let code = binary_code(&mut r, 1 + k % 2);
        let ij = induced_joint(&code, &Model::Wiretap(wt), Mode::Exact, DEFAULT_BUDGET).unwrap();
        let pe = error_probability(&ij).unwrap();
        assert!((pe - reliability_tv(&ij).unwrap()).abs() <= 1e-12);
        assert!(pe <= tv_to_target(&ij, &state(&mut r)).unwrap() + 1e-12);
    }
}

#[test]
fn secrecy_splits_into_leakage_and_stealth() {
    let mut r = rng(2);
    for k in 0..40 {
        let wt = wiretap(&mut r, 2, 2, 2, 2);
        let code = binary_code(&mut r, 1 + k % 2);
        let ij = induced_joint(&code, &Model::Wiretap(wt), Mode::Exact, DEFAULT_BUDGET).unwrap();
        let s = effective_secrecy(&ij, &state(&mut r)).unwrap();
        match (s.stealth, s.total) {
            (Divergence::Finite(st), Divergence::Finite(t)) => assert!((t - s.leakage - st).abs() <= 1e-10),
            (st, t) => assert!(!st.is_finite() && !t.is_finite()),
        }
    }
}

#[test]
fn point_state_outside_support_gives_infinite_stealth() {
    let mut r = rng(3);
    // Z is always 1
    let law = vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
    let wt = wtgp_core::channel::WiretapModel::point_to_point(2, 2, 2, law).unwrap();
    let shape = CodeShape { n: 1, m1: 2, m2: 1, x: 2, y1: 2, y2: 1, z: 2 };
    let code = random_code(&mut r, CodeSide::Wiretap, shape);
    let ij = induced_joint(&code, &Model::Wiretap(wt), Mode::Exact, DEFAULT_BUDGET).unwrap();
    let s = effective_secrecy(&ij, &Pmf::point(2, 0)).unwrap();
    assert_eq!(s.stealth, Divergence::Infinite);
    assert_eq!(s.total, Divergence::Infinite);
}

#[test]
fn induced_gp_code_sits_at_secrecy_tv_from_the_wiretap_code() {
    let mut r = rng(4);
    for k in 0..30 {
        let wt = wiretap(&mut r, 2, 2, 2, 2);
        let code = binary_code(&mut r, 1 + k % 2);
        let q = state(&mut r);
        let p = induced_joint(&code, &Model::Wiretap(wt.clone()), Mode::Exact, DEFAULT_BUDGET).unwrap();
        let (gp, gcode) = induce_gp_code(&code, &wt, Some(&q), DEFAULT_BUDGET).unwrap();
        let qj = induced_joint(&gcode, &Model::Gp(gp), Mode::Exact, DEFAULT_BUDGET).unwrap();
        assert_eq!(p.joint.axes(), qj.joint.axes());
        let full = total_variation_raw(p.joint.mass(), qj.joint.mass());
        assert!((full - secrecy_tv(&p, &q).unwrap()).abs() <= 1e-12, "case {k}");
        let (pe_w, pe_g) = (error_probability(&p).unwrap(), error_probability(&qj).unwrap());
        assert!(pe_g <= pe_w + full + 1e-12);
        assert!(pe_g <= pe_w + 2.0 * tv_to_target(&p, &q).unwrap() + 1e-12);
    }
}

#[test]
fn null_encoder_rows_are_flagged() {
    // Z = X exactly, so state sequences the code never emits have no mass.
    let law = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let wt = wtgp_core::channel::WiretapModel::point_to_point(2, 2, 2, law).unwrap();
    let shape = CodeShape { n: 1, m1: 2, m2: 1, x: 2, y1: 2, y2: 1, z: 2 };
    let code = BlockCode::new(CodeSide::Wiretap, shape, vec![1.0, 0.0, 0.0, 1.0], vec![0, 1], vec![0]).unwrap();
    let (_, g) = induce_gp_code(&code, &wt, None, DEFAULT_BUDGET).unwrap();
    // rows are (m, z): message 0 never yields z = 1 and message 1 never z = 0
    assert_eq!(g.null_rows(), &[1, 2]);
    assert_eq!(g.encoder.row(1), &[0.5, 0.5]);
    assert_eq!(charged_null_rows(&g, &Pmf::uniform(2)), vec![1, 2]);
    assert!(charged_null_rows(&g, &Pmf::point(2, 0)) == vec![2]);
}

#[test]
fn converse_gap_is_non_negative_on_random_codes() {
    let mut r = rng(5);
    for k in 0..60 {
        let (x, y, z) = (2, 2, 2);
        let gp: GpModel = gp_p2p(&mut r, x, y, z);
        let shape = CodeShape { n: 1 + k % 3, m1: 1 + k % 4, m2: 1, x, y1: y, y2: 1, z };
        let code = random_code(&mut r, CodeSide::Gp, shape);
        let g = multiletter_converse_gap(&code, &gp, DEFAULT_BUDGET).unwrap();
        assert!(g.gap >= -1e-9, "case {k}: {g:?}");
        assert!((g.eps_n - 1.0 / shape.n as f64 - g.rate * g.error_probability).abs() < 1e-15);
    }
}

#[test]
fn perfect_code_gap_is_one_over_n() {
    let gp = GpModel::new(Pmf::point(1, 0), 2, 2, 1, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
    for n in 1..=3 {
        let k = 1usize << n;
        let mut enc = vec![0.0; k * k];
        for m in 0..k {
            enc[m * k + m] = 1.0;
        }
        let shape = CodeShape { n, m1: k, m2: 1, x: 2, y1: 2, y2: 1, z: 1 };
        let code = BlockCode::new(CodeSide::Gp, shape, enc, (0..k).collect(), vec![0]).unwrap();
        let g = multiletter_converse_gap(&code, &gp, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.error_probability, 0.0);
        assert!((g.gap - 1.0 / n as f64).abs() < 1e-12);
    }
}

#[test]
fn converse_gap_needs_point_to_point() {
    let mut r = rng(6);
    let wt = wiretap(&mut r, 2, 2, 2, 2);
    let gp = analogous_gpbc(&wt, None).unwrap();
    let shape = CodeShape { n: 1, m1: 1, m2: 1, x: 2, y1: 2, y2: 2, z: 2 };
    let code = random_code(&mut r, CodeSide::Gp, shape);
    assert!(matches!(multiletter_converse_gap(&code, &gp, DEFAULT_BUDGET), Err(Error::Argument(_))));
}

#[test]
fn monte_carlo_tracks_the_exact_joint() {
    let mut r = rng(7);
    let wt = wiretap(&mut r, 2, 2, 2, 2);
    let code = binary_code(&mut r, 2);
    let model = Model::Wiretap(wt);
    let exact = induced_joint(&code, &model, Mode::Exact, DEFAULT_BUDGET).unwrap();
    let mc = induced_joint(&code, &model, Mode::MonteCarlo { trials: 1_000_000, seed: 11 }, DEFAULT_BUDGET).unwrap();
    let tv = total_variation_raw(exact.joint.mass(), mc.joint.mass());
    assert!(tv <= 5e-3, "tv {tv}");
    assert_eq!(mc.provenance, Provenance::MonteCarlo { trials: 1_000_000, seed: 11 });
}

#[test]
fn exact_enumeration_reports_the_required_budget() {
    let mut r = rng(8);
    let wt = wiretap(&mut r, 2, 2, 2, 2);
    let code = binary_code(&mut r, 2);
    match induced_joint(&code, &Model::Wiretap(wt), Mode::Exact, 10) {
        Err(Error::Budget { required, budget }) => assert!(required > 10 && budget == 10),
        other => panic!("{other:?}"),
    }
}

fn uniform_ux(u: usize, x: usize) -> JointPmf {
    JointPmf::new(vec![Axis::new("u", u), Axis::new("x", x)], vec![1.0 / (u * x) as f64; u * x]).unwrap()
}

#[test]
fn codebooks_regenerate_bit_identically() {
    let p = uniform_ux(2, 3);
    let rates = Rates::new(0.5, 0.25, 0.25, 0.5).unwrap();
    let a = sample_codebook(&p, 6, rates, 42, DEFAULT_BUDGET).unwrap();
    let b = sample_codebook(&p, 6, rates, 42, DEFAULT_BUDGET).unwrap();
    let c = sample_codebook(&p, 6, rates, 43, DEFAULT_BUDGET).unwrap();
    assert_eq!(a.to_bytes(), b.to_bytes());
    assert_ne!(a.to_bytes(), c.to_bytes());
}

#[test]
fn outer_letters_follow_their_parent() {
    // X = U deterministically
    let p = JointPmf::new(vec![Axis::new("u", 2), Axis::new("x", 2)], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
    let cb = sample_codebook(&p, 5, Rates::new(0.4, 0.4, 0.2, 0.2).unwrap(), 3, DEFAULT_BUDGET).unwrap();
    for m2 in 0..cb.m2 {
        for w2 in 0..cb.w2 {
            for m1 in 0..cb.m1 {
                for w1 in 0..cb.w1 {
                    assert_eq!(cb.outer(m1, w1, m2, w2), cb.inner(m2, w2));
                }
            }
        }
    }
}

#[test]
fn exact_sweep_matches_manual_pipeline() {
    let mut r = rng(9);
    let wt = wiretap(&mut r, 2, 2, 2, 2);
    let p = uniform_ux(2, 2);
    let q = wt.default_state_dist();
    let params = SweepParams {
        blocklengths: vec![2],
        rates: Rates::new(0.5, 0.5, 0.0, 0.5).unwrap(),
        eps: 4.0,
        codebooks: 1,
        seed: 77,
        mode: SweepMode::Exact,
        budget: DEFAULT_BUDGET,
    };
    let pt = &simulation_sweep(&p, &wt, &q, &params).unwrap()[0];
    let cb = sample_codebook(&p, 2, params.rates, 77, DEFAULT_BUDGET).unwrap();
    let code = BlockCode::from_codebook(&cb, &wt, 4.0, DEFAULT_BUDGET).unwrap();
    let ij = induced_joint(&code, &Model::Wiretap(wt.clone()), Mode::Exact, DEFAULT_BUDGET).unwrap();
    assert_eq!(pt.error_probability, error_probability(&ij).unwrap());
    let s = effective_secrecy(&ij, &q).unwrap();
    assert_eq!(pt.secrecy, s.total);
    let direct = codebook_secrecy(&cb, &wt, &q, DEFAULT_BUDGET).unwrap();
    assert!((direct.total.to_f64() - s.total.to_f64()).abs() < 1e-12);
}

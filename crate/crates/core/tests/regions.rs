mod common;

use common::*;
use wtgp_core::channel::{bsc, GpModel, WiretapModel};
use wtgp_core::prob::{Axis, JointPmf, Pmf};
use wtgp_core::regions::*;
use wtgp_core::Error;

/// Blahut-Arimoto capacity of a channel given as rows `w[x][y]`, in bits.
fn blahut_arimoto(w: &[Vec<f64>]) -> f64 {
    let nx = w.len();
    let ny = w[0].len();
    let mut p = vec![1.0 / nx as f64; nx];
    let mut lower = 0.0;
    for _ in 0..20_000 {
        let q: Vec<f64> = (0..ny).map(|y| (0..nx).map(|x| p[x] * w[x][y]).sum()).collect();
        let d: Vec<f64> = (0..nx)
            .map(|x| {
                (0..ny)
                    .filter(|&y| w[x][y] > 0.0)
                    .map(|y| w[x][y] * (w[x][y] / q[y]).log2())
                    .sum()
            })
            .collect();
        let z: f64 = (0..nx).map(|x| p[x] * d[x].exp2()).sum();
        lower = z.log2();
        let upper = d.iter().cloned().fold(f64::MIN, f64::max);
        if upper - lower < 1e-12 {
            break;
        }
        for x in 0..nx {
            p[x] *= d[x].exp2() / z;
        }
    }
    lower
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

#[test]
fn gp_capacity_with_constant_state_is_channel_capacity() {
    let gp = GpModel::new(Pmf::point(1, 0), 2, 2, 1, bsc(0.1).to_vec()).unwrap();
    let c = gp_capacity(&gp, &SearchParams::default()).unwrap();
    let oracle = blahut_arimoto(&[vec![0.9, 0.1], vec![0.1, 0.9]]);
    assert!((oracle - (1.0 - h2(0.1))).abs() < 1e-9);
    assert!((c.value - oracle).abs() < 1e-4, "{} vs {oracle}", c.value);
}

#[test]
fn wiretap_capacity_with_silent_eve_matches_blahut_arimoto() {
    let mut r = rng(20);
    for _ in 0..3 {
        let w = rows(&mut r, 3, 3, false);
        let wt = WiretapModel::point_to_point(3, 3, 1, w.clone()).unwrap();
        let params = SearchParams { restarts: 8, ..SearchParams::default() };
        let c = wt_capacity(&wt, &params).unwrap();
        let oracle = blahut_arimoto(&w.chunks(3).map(|c| c.to_vec()).collect::<Vec<_>>());
        assert!((c.value - oracle).abs() < 1e-4, "{} vs {oracle}", c.value);
    }
}

#[test]
fn degraded_wiretap_capacity_is_entropy_difference() {
    // Z is Y passed through another BSC, so Z is a BSC(0.26) of X.
    let pz = 0.1 * 0.8 + 0.9 * 0.2;
    let mut law = vec![];
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                law.push(bsc(0.1)[x * 2 + y] * bsc(0.2)[y * 2 + z]);
            }
        }
    }
    let wt = WiretapModel::point_to_point(2, 2, 2, law).unwrap();
    let c = wt_capacity(&wt, &SearchParams::default()).unwrap();
    assert!((c.value - (h2(pz) - h2(0.1))).abs() < 1e-6, "{}", c.value);
    // the search never loses to a coarse grid
    let grid = SearchParams { grid_delta: 0.1, u_size: Some(2), ..SearchParams::default() };
    let OracleResult::Capacity(o) = brute_force_oracle(OracleTarget::Capacity, &Model::Wiretap(wt), &grid).unwrap() else {
        unreachable!()
    };
    assert!(c.value >= o.value - 1e-9 && c.value <= o.value + 1e-3 + 0.05);
}

/// Entropy of the marginal of a `[u][x][y1][y2][z]` table on the flagged axes.
fn table_entropy(m: &[f64], shape: [usize; 5], keep: [bool; 5]) -> f64 {
    let mut acc = std::collections::BTreeMap::<Vec<usize>, f64>::new();
    for (i, &v) in m.iter().enumerate() {
        let mut rest = i;
        let mut idx = [0usize; 5];
        for a in (0..5).rev() {
            idx[a] = rest % shape[a];
            rest /= shape[a];
        }
        let key: Vec<usize> = (0..5).filter(|&a| keep[a]).map(|a| idx[a]).collect();
        *acc.entry(key).or_default() += v;
    }
    acc.values().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

#[test]
fn degraded_bounds_match_an_entropy_table() {
    let mut r = rng(21);
    for _ in 0..50 {
        // y1 random given x, y2 a noisy copy of y1, z independent given x
        let (nx, n1, n2, nz) = (2, 3, 2, 2);
        let a = rows(&mut r, nx, n1, true);
        let b = rows(&mut r, n1, n2, true);
        let e = rows(&mut r, nx, nz, true);
        let mut law = vec![];
        for x in 0..nx {
            for y1 in 0..n1 {
                for y2 in 0..n2 {
                    for z in 0..nz {
                        law.push(a[x * n1 + y1] * b[y1 * n2 + y2] * e[x * nz + z]);
                    }
                }
            }
        }
        let model = Model::Wiretap(WiretapModel::new(nx, n1, n2, nz, law).unwrap());
        let u = 3;
        let aux = AuxiliaryDist::wiretap(u, nx, sparse_simplex(&mut r, u * nx)).unwrap();
        let got = eval_rate_bounds(Family::PdIrWt, &aux, &model).unwrap();
        let j = single_letter_joint(&model, &aux).unwrap();
        let shape = [u, nx, n1, n2, nz];
        let h = |k: [bool; 5]| table_entropy(j.mass(), shape, k);
        let (t, f) = (true, false);
        // I(X;Y1|U,Z) = H(X,U,Z) + H(Y1,U,Z) - H(X,Y1,U,Z) - H(U,Z)
        let r1 = h([t, t, f, f, t]) + h([t, f, t, f, t]) - h([t, t, t, f, t]) - h([t, f, f, f, t]);
        let i_uy2 = h([t, f, f, f, f]) + h([f, f, f, t, f]) - h([t, f, f, t, f]);
        let i_uz = h([t, f, f, f, f]) + h([f, f, f, f, t]) - h([t, f, f, f, t]);
        assert!((got.raw.r1 - r1).abs() < 1e-10);
        assert!((got.raw.r2 - (i_uy2 - i_uz)).abs() < 1e-10);
        assert_eq!(got.sum, None);
    }
}

#[test]
fn analogous_families_agree_bitwise_on_one_joint() {
    let mut r = rng(22);
    for _ in 0..50 {
        let m = simplex(&mut r, 3 * 2 * 2 * 2 * 2);
        let axes = ["u", "x", "y1", "y2", "z"]
            .iter()
            .zip([3, 2, 2, 2, 2])
            .map(|(n, s)| Axis::new(*n, s))
            .collect();
        let j = JointPmf::new(axes, m).unwrap();
        for f in Family::ALL {
            let c = Some(0.3);
            assert_eq!(bounds_from_joint(f, &j, c).unwrap(), bounds_from_joint(f.analog(), &j, c).unwrap());
        }
    }
}

#[test]
fn reduction_always_dominates() {
    let mut r = rng(23);
    for k in 0..300 {
        let model = sd_wiretap(&mut r, 2, 2, 2, 2);
        let (nv, nt) = (1 + k % 3, 1 + (k / 3) % 3);
        let p = JointPmf::new(
            vec![Axis::new("v", nv), Axis::new("t", nt), Axis::new("x", 2)],
            sparse_simplex(&mut r, nv * nt * 2),
        )
        .unwrap();
        let red = reduce_auxiliary(&p, &model).unwrap();
        assert!(red.second >= red.first - 1e-12);
        assert_eq!(red.case == ReductionCase::DropT, red.first <= 0.0);
        let (a, b) = (red.reduced, red.two_aux);
        assert!(a.r1 >= b.r1 - 1e-9 && a.r2 >= b.r2 - 1e-9);
        assert!(a.sum.unwrap() >= b.sum.unwrap() - 1e-9);
    }
}

#[test]
fn reduction_rejects_non_deterministic_receivers() {
    let mut r = rng(24);
    let model = WiretapModel::new(2, 2, 2, 2, vec![0.125; 16]).unwrap();
    let p = JointPmf::new(vec![Axis::new("v", 1), Axis::new("t", 1), Axis::new("x", 2)], simplex(&mut r, 2)).unwrap();
    assert!(matches!(reduce_auxiliary(&p, &model), Err(Error::Classification(_))));
}

#[test]
fn relabeling_inputs_leaves_bounds_unchanged() {
    let mut r = rng(25);
    for _ in 0..30 {
        let wt = sd_wiretap(&mut r, 3, 2, 2, 2);
        let perm = [2usize, 0, 1];
        let per = 2 * 2 * 2;
        let law: Vec<f64> = (0..3).flat_map(|x| wt.law().row(perm[x]).to_vec()).collect();
        let relabeled = WiretapModel::new(3, 2, 2, 2, law).unwrap();
        assert_eq!(relabeled.law().rows().len(), 3 * per);
        let p = sparse_simplex(&mut r, 2 * 3);
        let q: Vec<f64> = (0..6).map(|i| p[(i / 3) * 3 + perm[i % 3]]).collect();
        let a = eval_rate_bounds(Family::SdWt, &AuxiliaryDist::wiretap(2, 3, p).unwrap(), &Model::Wiretap(wt)).unwrap();
        let b = eval_rate_bounds(Family::SdWt, &AuxiliaryDist::wiretap(2, 3, q).unwrap(), &Model::Wiretap(relabeled)).unwrap();
        assert!((a.raw.r1 - b.raw.r1).abs() < 1e-12);
        assert!((a.raw.r2 - b.raw.r2).abs() < 1e-12);
        assert!((a.raw.sum.unwrap() - b.raw.sum.unwrap()).abs() < 1e-12);
    }
}

#[test]
fn wrong_family_is_a_classification_error() {
    let wt = WiretapModel::new(2, 2, 2, 2, vec![0.125; 16]).unwrap();
    let aux = AuxiliaryDist::wiretap(1, 2, vec![0.5, 0.5]).unwrap();
    let m = Model::Wiretap(wt);
    assert!(matches!(eval_rate_bounds(Family::SdWt, &aux, &m), Err(Error::Classification(_))));
    assert!(matches!(eval_rate_bounds(Family::SdGp, &aux, &m), Err(Error::Classification(_))));
}

#[test]
fn noiseless_frontier_reaches_both_corners() {
    // y1 = x, y2 = x, z constant
    let law = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let wt = WiretapModel::new(2, 2, 2, 1, law).unwrap();
    let params = SearchParams { directions: 9, restarts: 8, ..SearchParams::default() };
    let reg = region_frontier(Family::SdWt, &Model::Wiretap(wt), &params).unwrap();
    assert!((reg.support(1.0, 1.0) - 1.0).abs() < 1e-6);
    assert!((reg.support(1.0, 0.0) - 1.0).abs() < 1e-6);
    assert!((reg.support(0.0, 1.0) - 1.0).abs() < 1e-6);
    assert_eq!(reg.samples.len(), 9);
}

#[test]
fn oracle_budget_reports_required_points() {
    let wt = WiretapModel::new(2, 2, 2, 1, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    let params = SearchParams { grid_delta: 0.01, grid_budget: 1000, u_size: Some(3), ..SearchParams::default() };
    match brute_force_oracle(OracleTarget::Frontier(Family::SdWt), &Model::Wiretap(wt), &params) {
        Err(Error::Budget { required, .. }) => assert_eq!(required, simplex_grid_size(6, 100)),
        other => panic!("{other:?}"),
    }
}

mod common;

use common::*;
use wtgp_core::channel::*;
use wtgp_core::prob::Pmf;

#[test]
fn analogous_law_times_eve_rebuilds_the_wiretap_law() {
    let mut r = rng(30);
    for _ in 0..50 {
        let wt = wiretap(&mut r, 3, 2, 2, 3);
        let gp = analogous_gpbc(&wt, None).unwrap();
        let eve = wt.eve_law();
        for x in 0..3 {
            for z in 0..3 {
                for y1 in 0..2 {
                    for y2 in 0..2 {
                        let back = gp.prob(x, z, y1, y2) * eve[x * 3 + z];
                        assert!((back - wt.prob(x, y1, y2, z)).abs() < 1e-12);
                    }
                }
                assert_eq!(gp.null_cells().contains(&(x, z)), eve[x * 3 + z] == 0.0);
            }
        }
        let q = gp.state_dist().mass().to_vec();
        let expect: Vec<f64> = (0..3).map(|z| (0..3).map(|x| eve[x * 3 + z] / 3.0).sum()).collect();
        for (a, b) in q.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn independent_eve_leaves_receiver_rows_unchanged() {
    let main: Vec<f64> = [0.7, 0.1, 0.1, 0.1, 0.2, 0.2, 0.3, 0.3].to_vec();
    let wt = WiretapModel::independent(2, 2, 2, 3, &main, &[0.5, 0.25, 0.25, 0.1, 0.1, 0.8]).unwrap();
    let gp = analogous_gpbc(&wt, Some(&Pmf::uniform(3))).unwrap();
    for x in 0..2 {
        for z in 0..3 {
            for k in 0..4 {
                assert!((gp.prob(x, z, k / 2, k % 2) - main[x * 4 + k]).abs() < 1e-15);
            }
        }
    }
    assert!(gp.null_cells().is_empty());
}

#[test]
fn erasure_cascade_is_degraded_but_not_deterministic() {
    let a = bec(0.2);
    let mut law = vec![];
    for x in 0..2 {
        for y1 in 0..3 {
            for y2 in 0..3 {
                // y2 erases y1 again with probability 0.5
                let k = if y1 == 2 { (y2 == 2) as u8 as f64 } else if y2 == y1 || y2 == 2 { 0.5 } else { 0.0 };
                law.push(a[x * 3 + y1] * k);
            }
        }
    }
    let wt = WiretapModel::new(2, 3, 3, 1, law).unwrap();
    let flags = wt.classify();
    assert!(flags.is_pd() && !flags.is_sd());
    let k = flags.pd.unwrap();
    assert!((k.row(0)[0] - 0.5).abs() < 1e-12 && (k.row(2)[2] - 1.0).abs() < 1e-12);
}

#[test]
fn lifted_receiver_sees_the_state() {
    let mut r = rng(31);
    let wt = wiretap(&mut r, 2, 2, 2, 3);
    let lifted = informed_lift_wiretap(&wt);
    assert!(lifted.informed_receiver);
    assert_eq!(lifted.y1_size(), 6);
    for x in 0..2 {
        for y1 in 0..2 {
            for y2 in 0..2 {
                for z in 0..3 {
                    assert_eq!(lifted.prob(x, y1 * 3 + z, y2, z), wt.prob(x, y1, y2, z));
                }
            }
        }
    }
    // lifting commutes with the analogy away from uniform-filled cells
    let a = informed_lift_gp(&analogous_gpbc(&wt, None).unwrap());
    let b = analogous_gpbc(&lifted, None).unwrap();
    assert_eq!(a.null_cells(), b.null_cells());
    for x in 0..2 {
        for z in 0..3 {
            if a.null_cells().contains(&(x, z)) {
                continue;
            }
            for y in 0..6 {
                for y2 in 0..2 {
                    assert!((a.prob(x, z, y, y2) - b.prob(x, z, y, y2)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn malformed_laws_are_rejected() {
    assert!(WiretapModel::new(2, 2, 1, 1, vec![0.5, 0.5, 0.5]).is_err());
    assert!(WiretapModel::new(2, 2, 1, 1, vec![0.5, 0.5, 1.5, -0.5]).is_err());
    assert!(WiretapModel::new(2, 2, 1, 1, vec![0.5, 0.5, 0.5, 0.4]).is_err());
    assert!(analogous_gpbc(&WiretapModel::new(2, 2, 1, 1, vec![0.5; 4]).unwrap(), Some(&Pmf::uniform(2))).is_err());
}

#[test]
fn analog_of_a_deterministic_receiver_stays_deterministic() {
    let mut r = rng(32);
    for _ in 0..20 {
        let wt = sd_wiretap(&mut r, 3, 2, 2, 2);
        let gp = analogous_gpbc(&wt, None).unwrap();
        assert!(wt.classify().is_sd());
        assert!(gp.classify().is_sd(), "null cells {:?}", gp.null_cells());
    }
}

use std::sync::Arc;

use g2_geometries::{bggg_canonical, bs_canonical, su3_forms, Profile};
use g2_instantons::*;
use g2_liealg::Coframe;

fn bs() -> Arc<dyn Profile<f64>> {
    Arc::new(bs_canonical::<f64>())
}

fn bggg() -> Arc<dyn Profile<f64>> {
    Arc::new(bggg_canonical::<f64>())
}

fn orbit_scale(p: &dyn Profile<f64>) -> f64 {
    p.at_sigma(0.0).state.b[0]
}

#[test]
fn bs_p1_series() {
    let p = bs();
    let s = series_start(&BoundaryData::BsP1 { x1: 1.0 }, p.as_ref(), None, DEFAULT_ORDER).unwrap();
    assert!(s.t0 <= 0.05 * orbit_scale(p.as_ref()));
    let [x, y] = [&s.comps[0], &s.comps[1]];
    assert_eq!(x.coeff(1), 1.0);
    assert!((x.coeff(3) + 0.75).abs() < 1e-12);
    assert!(x.has_parity(true, 1e-14));
    assert!((0..12).all(|k| y.coeff(k) == 0.0));
    let v = s.values(s.t0);
    assert!((v[0] - s.t0).abs() < s.t0.powi(3));
}

#[test]
fn bs_pid_series_matches_limit_connection() {
    let p = bs();
    for y0 in [0.0, 0.5, 2.0] {
        let s = series_start(&BoundaryData::BsPid { y0 }, p.as_ref(), None, DEFAULT_ORDER).unwrap();
        assert_eq!(s.comps[0].coeff(-1), 2.0);
        assert!((s.comps[0].coeff(1) - (y0 * y0 - 1.0) / 4.0).abs() < 1e-12);
        assert_eq!(s.comps[1].coeff(0), y0);
    }
    let s = series_start(&BoundaryData::BsPid { y0: 0.0 }, p.as_ref(), None, DEFAULT_ORDER).unwrap();
    for t in [0.01, 0.02, 0.04] {
        let x = s.values(t)[0];
        assert!((x - (2.0 / t - t / 4.0)).abs() < 2.0 * t.powi(3));
        let prof = p.at_sigma(s.sigma.eval(t));
        let alim = alim_closed_form(prof.rho).unwrap();
        assert!((prof.state.a[0] * x - alim).abs() < 2.0 * t.powi(3), "t = {t}");
    }
}

#[test]
fn bggg_p1_series_has_the_smooth_parities() {
    let p = bggg();
    let s = series_start(&BoundaryData::BgggP1 { f1p: 1.0, g1p: 0.25 }, p.as_ref(), None, DEFAULT_ORDER).unwrap();
    assert!(s.comps[0].has_parity(true, 1e-13) && s.comps[1].has_parity(true, 1e-13));
    assert!(s.comps[2].has_parity(false, 1e-13) && s.comps[3].has_parity(false, 1e-13));
    assert_eq!((s.comps[0].coeff(1), s.comps[1].coeff(1)), (1.0, 0.25));
}

#[test]
fn bggg_pid_series() {
    let p = bggg();
    let ms = p.metric_series(12).unwrap();
    let (a1_3, a2_3) = (ms.a[0].coeff(3), ms.a[1].coeff(3));
    for b0m in [0.0, 0.3, -1.0] {
        let b2p = bggg_pid_b2p(b0m, p.as_ref()).unwrap();
        let s = series_start(&BoundaryData::BgggPid { b0m, b2p }, p.as_ref(), None, DEFAULT_ORDER).unwrap();
        let [fp, gp, fm, gm] = [&s.comps[0], &s.comps[1], &s.comps[2], &s.comps[3]];
        assert_eq!((fp.coeff(-1), gp.coeff(-1)), (2.0, 2.0));
        // O(t) terms b₂⁺ − (2/3)A⃛(0), with A⃛(0) = 6 × (t³ coefficient)
        assert!((fp.coeff(1) - (b2p - 4.0 * a1_3)).abs() < 1e-12);
        assert!((gp.coeff(1) - (b2p - 4.0 * a2_3)).abs() < 1e-12);
        assert_eq!((fm.coeff(0), gm.coeff(0)), (b0m, b0m));
        assert!((fm.coeff(2) - gm.coeff(2)).abs() < 1e-12);
        assert!(fp.has_parity(true, 1e-12) && fm.has_parity(false, 1e-12));
    }
    let bad = BoundaryData::BgggPid { b0m: 0.3, b2p: 0.0 };
    assert!(matches!(
        series_start(&bad, p.as_ref(), None, DEFAULT_ORDER),
        Err(InstantonError::Inconsistent { order: 2, .. })
    ));
}

#[test]
fn richardson_consistency() {
    let cases = [
        (BoundaryData::BsP1 { x1: 1.0 }, bs()),
        (BoundaryData::BsPid { y0: 0.0 }, bs()),
        (BoundaryData::BgggP1 { f1p: 1.0, g1p: 0.25 }, bggg()),
    ];
    let tol = 1e-10;
    for (data, p) in cases {
        let t0 = series_start(&data, p.as_ref(), None, DEFAULT_ORDER).unwrap().t0;
        let run = |t0: f64| {
            let opts = LaunchOptions { tol, t_max: 1.0, t0: Some(t0), ..Default::default() };
            launch(&data, p.clone(), &opts).unwrap().sample(1.0).unwrap().u
        };
        let (a, b) = (run(t0), run(t0 / 2.0));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 10.0 * tol * (1.0 + x.abs()), "{data:?}: {x} vs {y}");
        }
    }
}

#[test]
fn launched_trajectories_are_instantons() {
    let b2p = bggg_pid_b2p(0.3, bggg().as_ref()).unwrap();
    let cases = [
        (BoundaryData::BsP1 { x1: 1.0 }, bs()),
        (BoundaryData::BsPid { y0: 0.3 }, bs()),
        (BoundaryData::BgggP1 { f1p: 1.0, g1p: 0.25 }, bggg()),
        (BoundaryData::BgggPid { b0m: 0.3, b2p }, bggg()),
    ];
    for (data, p) in cases {
        let traj = launch(&data, p, &LaunchOptions { t_max: 4.0, ..Default::default() }).unwrap();
        for k in 1..=10 {
            let t = 0.02 + 0.2 * k as f64;
            let Some(s) = traj.sample(t) else { continue };
            let r = s.residual().unwrap();
            assert!(r.psi <= 1e-9 && r.asd <= 1e-9, "{data:?} at {t}: {r:?}");
            let omega = su3_forms(&s.profile.state, None).omega;
            let f = s.connection().form().curvature(&Coframe::s3xs3()).unwrap();
            assert!(f.spatial_part().wedge(&omega.wedge(&omega)).max_abs() < 1e-9);
        }
    }
}

#[test]
fn bggg_system_on_bs_reproduces_clarke() {
    let opts = LaunchOptions { t_max: 10.0, ..Default::default() };
    let clarke = launch(&BoundaryData::BsP1 { x1: 1.3 }, bs(), &opts).unwrap();
    let reduced = launch(&BoundaryData::BgggP1 { f1p: 1.3, g1p: 1.3 }, bs(), &opts).unwrap();
    for t in [0.5, 2.0, 10.0] {
        let (a, b) = (clarke.sample(t).unwrap(), reduced.sample(t).unwrap());
        assert!((a.u[0] - b.u[0]).abs() < 1e-8 && (a.u[0] - b.u[1]).abs() < 1e-8, "t = {t}");
        assert!(b.u[2].abs() < 1e-12 && b.u[3].abs() < 1e-12);
    }
}

#[test]
fn blow_up_stops_the_launch() {
    let traj = launch(&BoundaryData::BgggP1 { f1p: 0.3, g1p: 0.5 }, bggg(), &LaunchOptions::default()).unwrap();
    assert!(!traj.completed());
    assert!(traj.t_end() < 20.0);
    assert!(traj.values.iter().all(|v| v.iter().all(|x| x.is_finite())));
    assert!(traj.grid.windows(2).all(|w| w[0] < w[1]));
}

use std::sync::Arc;

use g2_geometries::{bggg_canonical, bs_canonical, Family, Profile};
use g2_instantons::{bggg_abelian_profiles, clarke_closed_form, BoundaryData, Bundle};
use g2_shooting::*;

fn bggg() -> Arc<dyn Profile<f64>> {
    Arc::new(bggg_canonical::<f64>())
}

fn bs() -> Arc<dyn Profile<f64>> {
    Arc::new(bs_canonical::<f64>())
}

fn shoot_p1(f1p: f64, g1p: f64) -> (g2_instantons::Trajectory, Classification) {
    shoot(&BoundaryData::BgggP1 { f1p, g1p }, bggg(), &ShootOptions::default()).unwrap()
}

#[test]
fn clarke_launch_matches_closed_form() {
    let (traj, class) = shoot(&BoundaryData::BsP1 { x1: 1.0 }, bs(), &ShootOptions::default()).unwrap();
    assert_eq!(class.verdict, Verdict::GlobalBounded);
    let lim = class.asymptote.unwrap();
    assert!((lim[0] - A_INFINITY).abs() < 1e-5 && lim[1] == 0.0);
    for i in (0..traj.grid.len()).step_by(7) {
        let s = traj.sample(traj.grid[i]).unwrap();
        let x = clarke_closed_form(1.0, s.profile.rho).unwrap();
        assert!((s.u[0] - x).abs() < 1e-7, "t = {}: {} vs {x}", s.t, s.u[0]);
    }
}

#[test]
fn paper_cells() {
    let (_, c) = shoot_p1(1.0, 0.25);
    assert_eq!(c.verdict, Verdict::GlobalBounded);
    assert!(c.t_blow.is_none() && c.asymptote.is_some());
    let (_, c) = shoot_p1(0.3, 0.5);
    assert_eq!(c.verdict, Verdict::CurvatureUnbounded);
    assert!(c.t_blow.is_some() && c.asymptote.is_none());
}

#[test]
fn abelian_cells_match_closed_form() {
    let (traj, c) = shoot_p1(0.4, 0.0);
    assert_eq!(c.verdict, Verdict::Abelian);
    // A₁f⁺ is a fixed multiple x₁ of the closed-form η₁⁺ profile
    let ratio = |i: usize| {
        let (p, _) = bggg_abelian_profiles(traj.profile.at_sigma(traj.sigma[i]).rho).unwrap();
        traj.coefficients(i)[0] / p.value
    };
    let x1 = ratio(traj.grid.len() / 2);
    for i in (1..traj.grid.len()).step_by(5) {
        assert!((ratio(i) - x1).abs() < 1e-8 * x1.abs(), "{} vs {x1}", ratio(i));
    }
}

#[test]
fn decay_rates() {
    let (traj, _) = shoot(&BoundaryData::BsP1 { x1: 1.0 }, bs(), &ShootOptions::default()).unwrap();
    let slope = decay_fit(&traj, &[A_INFINITY, 0.0]).unwrap().slope;
    assert!((slope + 3.0).abs() < 0.2, "slope {slope}");
    let (traj, _) = shoot_p1(1.0, 0.25);
    let slope = curvature_decay_fit(&traj).unwrap().slope;
    assert!((slope + 2.0).abs() < 0.3, "slope {slope}");
    let (short, _) = shoot_p1(0.3, 0.5);
    assert!(matches!(curvature_decay_fit(&short), Err(ShootError::InsufficientTail { .. })));
}

#[test]
fn holonomy_is_well_defined() {
    let (traj, c) = shoot_p1(0.0, 0.0);
    assert_eq!(holonomy_at_infinity(&traj, &c).unwrap(), 0.0);
    let (traj, c) = shoot_p1(1.0, 0.25);
    let angle = holonomy_at_infinity(&traj, &c).unwrap();
    assert!((0.0..std::f64::consts::TAU).contains(&angle));
    let again = holonomy_at_infinity(&traj, &c.clone()).unwrap();
    assert_eq!(angle, again);
    let (traj, c) = shoot_p1(0.3, 0.5);
    assert!(holonomy_at_infinity(&traj, &c).is_err());
}

#[test]
fn bs_x1_scan_is_bounded() {
    let spec = ScanSpec {
        family: Family::BryantSalamon,
        bundle: Bundle::P1,
        axes: vec![Axis::new("x1", 0.0, 10.0, 11)],
        shoot: ShootOptions::default(),
        boundary_tol: 1e-9,
    };
    let report = scan(&spec);
    assert!(report.cells.iter().all(|c| c.classification.verdict == Verdict::GlobalBounded));
    assert!(report.cells.iter().all(|c| c.region == Region::NotApplicable));
}

#[test]
fn regions() {
    assert_eq!(Region::of(1.0, 0.25), Region::B);
    assert_eq!(Region::of(0.3, 0.5), Region::A);
    assert_eq!(Region::of(1.0, 1.5), Region::A);
    assert_eq!(Region::of(1.0, 0.75), Region::Open);
    assert_eq!(Region::of(1.0, 0.0), Region::Outside);
    assert!(Region::B.contains_with_margin(1.5, 0.25, 0.1));
    assert!(!Region::B.contains_with_margin(0.8, 0.25, 0.1));
}

#[test]
fn boundary_cells_are_undetermined_by_policy() {
    let mut spec = ScanSpec::bggg_square(2);
    spec.axes = vec![Axis::new("f1p", 0.5, 0.75, 2), Axis::new("g1p", 0.25, 0.25, 1)];
    let report = scan(&spec);
    assert_eq!(report.cells.len(), 2);
    for c in &report.cells {
        assert_eq!(c.classification.verdict, Verdict::Undetermined);
        assert!(c.classification.reason.as_deref().unwrap().contains("boundary"));
    }
}

#[test]
fn scans_are_reproducible_and_refinement_is_monotone() {
    let mut spec = ScanSpec::bggg_square(8);
    spec.axes = vec![Axis::new("f1p", 1.0, 2.0, 10), Axis::new("g1p", 0.05, 0.45, 6)];
    let a = scan(&spec);
    let b = scan(&spec);
    assert_eq!(format!("{:?}", a.cells), format!("{:?}", b.cells));
    let certified: Vec<_> = a.cells.iter().filter(|c| c.region == Region::B).collect();
    assert!(certified.len() >= 50);
    assert!(certified.iter().all(|c| c.classification.verdict == Verdict::GlobalBounded));
    spec.shoot.tol = 1e-11;
    let fine = scan(&spec);
    for (c, f) in a.cells.iter().zip(&fine.cells) {
        if c.region == Region::B {
            assert_ne!(f.classification.verdict, Verdict::CurvatureUnbounded, "{:?}", f.params);
        }
    }
}

#[test]
fn pid_parameters_complete_b2p() {
    let p = bggg();
    let data = boundary_for(Family::Bggg, Bundle::Pid, &[0.3], p.as_ref()).unwrap();
    let BoundaryData::BgggPid { b0m, .. } = data else { panic!("{data:?}") };
    assert_eq!(b0m, 0.3);
    assert!(boundary_for(Family::Bggg, Bundle::P1, &[0.3], p.as_ref()).is_err());
}

use g2_geometries::*;
use g2_liealg::{Algebra, Coframe, Form};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn e(i: usize) -> Form {
    Form::basis(i, Algebra::Scalar, vec![1.0])
}

#[test]
fn unit_state_forms() {
    let f = su3_forms(&State::full(1.0, 1.0), None);
    let mut omega = Form::zero(2, Algebra::Scalar);
    for i in 1..=3 {
        omega = omega.add(&e(3 + i).wedge(&e(i)).scale(4.0));
    }
    assert!(f.omega.sub(&omega).max_abs() < 1e-15);
    let mut g1 = e(4).wedge(&e(5)).wedge(&e(6)).scale(8.0);
    for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        g1 = g1.sub(&e(i).wedge(&e(j)).wedge(&e(3 + k)).scale(8.0));
    }
    assert!(f.gamma1.sub(&g1).max_abs() < 1e-15);
}

#[test]
fn random_states_are_compatible() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut v = [0.0; 6];
        v.iter_mut().for_each(|x| *x = rng.gen_range(0.2..3.0));
        let s = State::from_values(v);
        let f = su3_forms(&s, None);
        assert!(f.omega.wedge(&f.gamma2).max_abs() < 1e-10);
        let w3 = f.omega.wedge(&f.omega).wedge(&f.omega);
        let rhs = f.gamma1.wedge(&f.gamma2).scale(1.5);
        assert!(w3.sub(&rhs).max_abs() < 1e-10 * (1.0 + w3.max_abs()));
        let g2 = g2_from_su3(&s, None).unwrap();
        let star = g2.metric.hodge_star(&g2.phi).unwrap();
        assert!(star.sub(&g2.psi).max_abs() < 1e-10 * (1.0 + g2.psi.max_abs()));
    }
}

fn assert_torsion_free(p: &dyn Profile<f64>, sigma_max: f64) {
    let alg = Coframe::s3xs3();
    for i in 1..=50 {
        let sigma = sigma_max * i as f64 / 50.0;
        let smp = p.at_sigma(sigma);
        let g2 = g2_from_su3(&smp.state, Some(&smp.rate)).unwrap();
        let (dphi, dpsi) = g2.torsion(&alg).unwrap();
        assert!(dphi <= 1e-9 && dpsi <= 1e-9, "{} at sigma {sigma}: {dphi:e} {dpsi:e}", p.name());
    }
}

#[test]
fn closed_forms_are_torsion_free() {
    assert_torsion_free(&bs_canonical(), 4.0);
    assert_torsion_free(&bggg_canonical(), 4.0);
    assert_torsion_free(&BryantSalamon::new(2.5).unwrap(), 3.0);
    assert_torsion_free(&Bggg::new(0.7, 1.3).unwrap(), 3.0);
}

#[test]
fn named_points_are_torsion_free() {
    let alg = Coframe::s3xs3();
    let bs = bs_canonical();
    let bg = bggg_canonical();
    for (p, r) in [(&bs as &dyn Profile<f64>, 2.0), (&bg, 3.0)] {
        let smp = p.at(r).unwrap();
        let (a, b) = g2_from_su3(&smp.state, Some(&smp.rate)).unwrap().torsion(&alg).unwrap();
        assert!(a < 1e-9 && b < 1e-9);
    }
    // a non-solution is detected
    let smp = bs.at(2.0).unwrap();
    let mut rate = smp.rate;
    rate.a[0] += 0.1;
    let (_, dpsi) = g2_from_su3(&smp.state, Some(&rate)).unwrap().torsion(&alg).unwrap();
    assert!(dpsi > 1e-3);
}

#[test]
fn cone_is_homogeneous() {
    let alg = Coframe::s3xs3();
    let unit = su3_forms(&cone_state(1.0), None);
    for t in [0.5, 1.0, 3.0] {
        let rate = cone_state(1.0);
        let g2 = g2_from_su3(&cone_state(t), Some(&rate)).unwrap();
        let expect = e(0).wedge(&unit.omega).scale(t * t).add(&unit.gamma1.scale(t * t * t));
        assert!(g2.phi.sub(&expect).max_abs() < 1e-12);
        let (a, b) = g2.torsion(&alg).unwrap();
        assert!(a < 1e-12 && b < 1e-12);
    }
}

#[test]
fn profile_values() {
    let s = bs_spinor_profile(1.0, 1.0).unwrap();
    assert_eq!((s.a[0], s.b[0]), (0.0, 1.0));
    let s = bs_spinor_profile(0.0, 2.0).unwrap();
    assert!((s.a[0] - 2.0 / 3f64.sqrt()).abs() < 1e-14 && (s.b[0] - 2.0).abs() < 1e-14);
    let s = bs_spinor_profile(1.0, 2.0).unwrap();
    assert!((s.a[0] - 2.0 / 3f64.sqrt() * (7.0f64 / 8.0).sqrt()).abs() < 1e-14);
    assert_eq!(s.symmetry(1e-12), Symmetry::Full);
    assert!(bs_spinor_profile(1.0, 0.9).is_err());

    let g = bggg_profile(1.0, 1.0, 1.0).unwrap();
    assert_eq!(g.values(), [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    let g = bggg_profile(1.0, 1.0, 2.0).unwrap();
    assert!((g.a[1] - 0.5 * 7f64.sqrt()).abs() < 1e-14);
    assert!((g.b[1] - 0.5 * 15f64.sqrt()).abs() < 1e-14);
    assert_eq!(g.symmetry(1e-12), Symmetry::U1Reduced);
    assert!(bggg_profile(1.0, 2.0, 1.9).is_err());

    let c = bggg_canonical::<f64>().state(2.25).unwrap();
    assert!(c.a[1] == 0.0 && (c.b[0] - 1.5).abs() < 1e-15 && (c.b[1] - 1.5).abs() < 1e-15);
    // r-form of A₂
    let r = 5.0;
    let c = bggg_canonical::<f64>().state(r).unwrap();
    assert!((c.a[1] - ((r - 2.25) * (r + 0.75) / 3.0).sqrt()).abs() < 1e-13);
    // r-form of BS: B = r/√3, A = (r/3)√(1 − r⁻³)
    let b = bs_canonical::<f64>().state(r).unwrap();
    assert!((b.b[0] - r / 3f64.sqrt()).abs() < 1e-14);
    assert!((b.a[0] - r / 3.0 * (1.0 - r.powi(-3)).sqrt()).abs() < 1e-14);
}

#[test]
fn bggg_scaling_covariance() {
    for &lam in &[0.5f64, 1.7, 3.0] {
        for &s in &[1.3, 2.5, 10.0] {
            let s = s * lam;
            let a = bggg_profile(1.3, lam, s).unwrap().values();
            let b = bggg_profile(1.3, 1.0, s / lam).unwrap().values();
            for i in 0..6 {
                assert!((a[i] - lam * b[i]).abs() < 1e-12 * (1.0 + a[i].abs()));
            }
        }
    }
}

fn fd_check(p: &dyn Profile<f64>, rho: f64) {
    let h = 1e-5;
    let drho = p.drho_dt(rho).unwrap();
    let up = p.state(rho + h).unwrap().values();
    let dn = p.state(rho - h).unwrap().values();
    let rate = p.rate(rho).unwrap().values();
    for i in 0..6 {
        let fd = (up[i] - dn[i]) / (2.0 * h) * drho;
        assert!((fd - rate[i]).abs() < 1e-7, "{} component {i} at {rho}: {fd} vs {}", p.name(), rate[i]);
    }
}

#[test]
fn analytic_rates_match_finite_differences() {
    for rho in [1.3, 2.0, 7.0] {
        fd_check(&bs_canonical(), rho);
    }
    for rho in [2.5, 3.0, 12.0] {
        fd_check(&bggg_canonical(), rho);
    }
    // BGGG: dr/dt = A₁ in the canonical coordinate
    let p = bggg_canonical::<f64>();
    assert!((p.drho_dt(4.0).unwrap() - p.state(4.0).unwrap().a[0]).abs() < 1e-14);
}

/// Fixed-order Gauss–Legendre nodes and weights on [-1, 1].
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

fn legendre_integral(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    gauss_legendre(60).iter().map(|(x, w)| w * f(0.5 * (a + b) + 0.5 * (b - a) * x)).sum::<f64>() * 0.5 * (b - a)
}

#[test]
fn arc_length_against_fixed_quadrature() {
    assert_eq!(t_of_r(Family::BryantSalamon, 1.0).unwrap(), 0.0);
    assert_eq!(t_of_r(Family::Bggg, 2.25).unwrap(), 0.0);
    // ∫₁² dr/√(1 − r⁻³) with r = 1 + u²
    let oracle = legendre_integral(|u| { let r = 1.0 + u * u; 2.0 * u / (1.0 - r.powi(-3)).sqrt() }, 0.0, 1.0);
    assert!((t_of_r(Family::BryantSalamon, 2.0).unwrap() - oracle).abs() < 1e-10);
    // BGGG: dt/dr = 1/A₁ with r = 9/4 + u²
    let p = bggg_canonical::<f64>();
    let oracle = legendre_integral(|u| 2.0 * u / p.state(2.25 + u * u).unwrap().a[0], 0.0, (5.0f64 - 2.25).sqrt());
    assert!((t_of_r(Family::Bggg, 5.0).unwrap() - oracle).abs() < 1e-10);
    assert!(t_of_r(Family::Bggg, 2.0).is_err());
    let mut last = 0.0;
    for r in [1.1, 1.5, 3.0, 10.0] {
        let t = t_of_r(Family::BryantSalamon, r).unwrap();
        assert!(t > last);
        last = t;
        let back = bs_canonical::<f64>().rho_of_t(t).unwrap();
        assert!((back - r).abs() < 1e-10);
    }
    // cone: t = √3 s
    assert!((BryantSalamon::new(0.0).unwrap().t_of(2.0).unwrap() - 2.0 * 3f64.sqrt()).abs() < 1e-15);
}

#[test]
fn singular_orbit_series_match_closed_forms() {
    for p in [&bs_canonical::<f64>() as &dyn Profile<f64>, &bggg_canonical()] {
        let ms = p.metric_series(8).unwrap();
        for t in [0.02, 0.05, 0.1] {
            let rho = p.rho_of_t(t).unwrap();
            let v = p.state(rho).unwrap();
            for i in 0..3 {
                assert!((ms.a[i].eval(t) - v.a[i]).abs() < 1e-8, "{} A{i} at {t}", p.name());
                assert!((ms.b[i].eval(t) - v.b[i]).abs() < 1e-8, "{} B{i} at {t}", p.name());
            }
            assert!((ms.sigma.eval(t) - (rho - p.start()).sqrt()).abs() < 1e-8);
        }
        // smooth extension: A odd, B even in t
        assert!(ms.a[0].has_parity(true, 1e-12) && ms.b[0].has_parity(false, 1e-12));
    }
    let bs = bs_canonical::<f64>().metric_series(6).unwrap();
    // Ȧ(0) = 1/2 in the r-form
    assert!((bs.a[0].coeff(1) - 0.5).abs() < 1e-12);
    assert!(BryantSalamon::new(0.0).unwrap().metric_series(4).is_err());
}

#[test]
fn asymptotics() {
    // BS approaches the cone ratio
    let s = bs_canonical::<f64>().state(1e4).unwrap();
    assert!((s.a[0] / s.b[0] - 1.0 / 3f64.sqrt()).abs() < 1e-6);
    // BGGG: relative distance to the circle bundle model decays like 1/t
    let p = bggg_canonical::<f64>();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..=10 {
        let r = 100.0 * 10f64.powf(k as f64 / 5.0);
        let t = p.t_of(r).unwrap();
        let v = p.state(r).unwrap().values();
        let h = bggg_asymptotic(t).values();
        let dev = (0..6).map(|i| ((v[i] - h[i]) / h[i]).abs()).fold(0.0, f64::max);
        xs.push(t.ln());
        ys.push(dev.ln());
    }
    let fit = g2_numerics::linear_fit(&xs, &ys).unwrap();
    assert!((fit.slope + 1.0).abs() < 0.1, "slope {}", fit.slope);
}

#[test]
fn lambda2_profile_values() {
    let p = lambda2s4_profile(0.0).unwrap();
    assert_eq!((p.f, p.a, p.b), (1.0, 0.0, 2f64.sqrt()));
    assert!((lambda2s4_profile(1.0).unwrap().f - 2f64.powf(-0.25)).abs() < 1e-15);
    assert!(lambda2s4_profile(-0.1).is_err());
    let xs: Vec<f64> = (0..10).map(|k| (1e3 * 2f64.powi(k)).ln()).collect();
    let ys: Vec<f64> = xs.iter().map(|x| lambda2s4_profile(x.exp()).unwrap().a.ln()).collect();
    let fit = g2_numerics::linear_fit(&xs, &ys).unwrap();
    assert!((fit.slope - 0.5).abs() < 1e-3);
}

#[test]
fn lambda2_metrics_are_torsion_free() {
    for base in [Lambda2Base::S4, Lambda2Base::CP2] {
        let alg = base.coframe::<f64>();
        for i in 1..=20 {
            let s = 0.25 * i as f64;
            let g2 = lambda2_structure(base, s).unwrap();
            let (a, b) = g2.torsion(&alg).unwrap();
            assert!(a < 1e-10 && b < 1e-10, "{base:?} at s={s}: {a:e} {b:e}");
            let star = g2.metric.hodge_star(&g2.phi).unwrap();
            assert!(star.sub(&g2.psi).max_abs() < 1e-12 * (1.0 + g2.psi.max_abs()), "{base:?}: *phi != psi");
        }
    }
}

#[test]
fn sasaki_einstein_identities() {
    let alg = Coframe::s3xs3();
    let se = sasaki_einstein_s2s3::<f64>();
    let [w1, w2, w3] = &se.omega;
    assert!(se.alpha.d(&alg).unwrap().add(&w1.scale(2.0)).max_abs() < 1e-15);
    assert!(w2.d(&alg).unwrap().sub(&se.alpha.wedge(w3).scale(3.0)).max_abs() < 1e-14);
    assert!(w3.d(&alg).unwrap().add(&se.alpha.wedge(w2).scale(3.0)).max_abs() < 1e-14);
    let deta = se.eta_infty.d(&alg).unwrap();
    for w in &se.omega {
        assert!(deta.wedge(w).max_abs() < 1e-15);
    }
    let alc = AlcData::<f64>::bggg();
    assert_eq!((alc.m, alc.nu), (1.0, -1.0));
    assert!(AlcData::new(1.0, -2.0, se.eta_infty.clone(), &alg).is_err());
    assert!(AlcData::new(1.0, -2.0, Form::zero(1, Algebra::Scalar), &alg).is_ok());
    assert!(AlcData::new(1.0, 0.5, se.eta_infty, &alg).is_err());
}

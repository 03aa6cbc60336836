use g2_geometries::{
    bggg_canonical, bs_canonical, cone_state, g2_from_su3, lambda2_structure, sasaki_einstein_s2s3, su3_forms,
    Lambda2Base, Profile, ProfileSample,
};
use g2_instantons::*;
use g2_liealg::{t_basis, Algebra, Coframe, Form};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bs_at(r: f64) -> ProfileSample<f64> {
    bs_canonical::<f64>().at(r).unwrap()
}

fn residual_at(a: &Form, p: &ProfileSample<f64>) -> Residual<f64> {
    let g2 = g2_from_su3(&p.state, Some(&p.rate)).unwrap();
    instanton_residual(a, &g2, &Coframe::s3xs3()).unwrap()
}

fn plus_connection(c: Jet<f64>) -> Form {
    let z = Jet { value: 0.0, rate: 0.0 };
    InvariantConnection { plus: [c; 3], minus: [z; 3] }.form()
}

fn radii(start: f64) -> impl Iterator<Item = f64> {
    (0..20).map(move |k| start + 0.01 + 0.35 * k as f64)
}

#[test]
fn clarke_examples() {
    assert_eq!(clarke_closed_form(1.0f64, 1.0).unwrap(), 0.0);
    for r in [1.0f64, 2.0, 30.0] {
        assert_eq!(clarke_closed_form(0.0, r).unwrap(), 0.0);
    }
    let far = clarke_coefficient(1.0f64, 1e6).unwrap().value;
    assert!((far - 2.0 / 3.0).abs() < 1e-11);
    assert!(matches!(clarke_closed_form(-1.0f64, 2.0), Err(InstantonError::Pole(_))));
    assert!(clarke_closed_form(1.0f64, 0.5).is_err());
}

#[test]
fn closed_forms_solve_the_reduced_odes() {
    for x1 in [0.1, 1.0, 10.0] {
        for r in radii(1.0) {
            let p = bs_at(r);
            let c = clarke_coefficient(x1, r).unwrap();
            let (a, da) = (p.state.a[0], p.rate.a[0]);
            let x = c.value / a;
            let xdot = (c.rate - da * x) / a;
            assert!((x - clarke_closed_form(x1, r).unwrap()).abs() < 1e-12);
            let (rhs, ydot) = clarke_rhs(x, 0.0, &p.state, &p.rate).unwrap();
            assert!((rhs - xdot).abs() <= 1e-10, "x1 {x1} r {r}: {rhs} vs {xdot}");
            assert_eq!(ydot, 0.0);
        }
    }
    for r in radii(1.0) {
        let p = bs_at(r);
        let c = alim_coefficient(r).unwrap();
        let x = c.value / p.state.a[0];
        let xdot = (c.rate - p.rate.a[0] * x) / p.state.a[0];
        assert!((clarke_rhs(x, 0.0, &p.state, &p.rate).unwrap().0 - xdot).abs() <= 1e-10);
    }
}

#[test]
fn clarke_rhs_special_points() {
    let p = bs_at(2.0);
    assert_eq!(clarke_rhs(0.0, 0.0, &p.state, &p.rate).unwrap(), (0.0, 0.0));
    let (a, da) = (p.state.a[0], p.rate.a[0]);
    let (xd, _) = clarke_rhs(0.7, 0.0, &p.state, &p.rate).unwrap();
    assert!((xd - (da / a * 0.7 - 0.49)).abs() < 1e-15);
    // on the cone, x = 2/t is the constant connection a∞
    let t: f64 = 3.0;
    let (xd, yd) = clarke_rhs(2.0 / t, 0.0, &cone_state(t), &cone_state(1.0f64)).unwrap();
    assert!((xd + 2.0 / (t * t)).abs() < 1e-15 && yd == 0.0);
    let flat = bggg_rhs([0.0; 4], &bggg_canonical::<f64>().at(3.0).unwrap().state).unwrap();
    assert_eq!(flat, [0.0; 4]);
    let singular = bs_canonical::<f64>().at(1.0).unwrap();
    assert!(matches!(clarke_rhs(1.0, 0.0, &singular.state, &singular.rate), Err(InstantonError::Singular(_))));
}

#[test]
fn alim_values() {
    assert_eq!(alim_closed_form(1.0f64).unwrap(), 1.0);
    assert!((alim_closed_form(2.0f64).unwrap() - 7.0 / 9.0).abs() < 1e-15);
    assert!((alim_closed_form(1e8f64).unwrap() - 2.0 / 3.0).abs() < 1e-8);
}

#[test]
fn abelian_examples() {
    assert!(abelian_bs([1.0f64, 2.0, 3.0], 1.0).unwrap().is_zero());
    let harmonic = abelian_bggg([1.0f64, 0.0, 0.0], 4.0).unwrap();
    assert_eq!(harmonic.terms().len(), 1);
    assert!(!harmonic.coeff(&[1]).is_empty());
    // the η₂⁺ profile grows like eʳ/r^(3/2)
    for r in [20.0f64, 40.0] {
        let (_, q) = bggg_abelian_profiles(r).unwrap();
        let ratio = q.value * r.powf(1.5) / r.exp();
        assert!((ratio - 1.0).abs() < 8.0 / r, "{ratio}");
    }
}

#[test]
fn closed_form_instanton_residuals() {
    let mut worst: f64 = 0.0;
    let mut check = |res: Residual<f64>, what: &str| {
        assert!(res.psi <= 1e-9 && res.asd <= 1e-9, "{what}: {res:?}");
        worst = worst.max(res.psi);
    };
    for r in radii(1.0) {
        let p = bs_at(r);
        for x1 in [0.1, 1.0, 10.0] {
            check(residual_at(&plus_connection(clarke_coefficient(x1, r).unwrap()), &p), "clarke");
        }
        check(residual_at(&plus_connection(alim_coefficient(r).unwrap()), &p), "alim");
        check(residual_at(&abelian_bs([1.0, -0.5, 2.0], r).unwrap(), &p), "bs u1");
    }
    let bggg = bggg_canonical::<f64>();
    for r in radii(2.25) {
        let p = bggg.at(r).unwrap();
        check(residual_at(&abelian_bggg([1.3, 0.0, 0.0], r).unwrap(), &p), "bggg u1");
    }
    for base in [Lambda2Base::S4, Lambda2Base::CP2] {
        let alg = base.coframe::<f64>();
        for k in 0..20 {
            let s = 0.15 * (k + 1) as f64;
            let g2 = lambda2_structure(base, s).unwrap();
            let plus = instanton_residual(&lambda2_instanton(base, s, true).unwrap().connection, &g2, &alg).unwrap();
            let minus = instanton_residual(&lambda2_instanton(base, s, false).unwrap().connection, &g2, &alg).unwrap();
            check(plus, "lambda2 +");
            check(minus, "lambda2 -");
            assert!((plus.psi - minus.psi).abs() < 1e-14 && (plus.curvature - minus.curvature).abs() < 1e-12);
            if base == Lambda2Base::S4 {
                check(instanton_residual(&spin_connection(), &g2, &alg).unwrap(), "spin");
            }
        }
    }
    assert!(worst < 1e-9);
}

#[test]
fn perturbations_are_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in [1.3, 2.0, 5.0] {
        let p = bs_at(r);
        let c = clarke_coefficient(1.0, r).unwrap();
        let mut bumped = InvariantConnection { plus: [c; 3], minus: [Jet { value: 0.0, rate: 0.0 }; 3] };
        for j in bumped.plus.iter_mut().chain(bumped.minus.iter_mut()) {
            j.value += rng.gen_range(-0.05..0.05);
        }
        let res = residual_at(&bumped.form(), &p);
        assert!(res.psi > 1e-4, "{res:?}");
    }
}

#[test]
fn fast_curvature_norm_matches_form_calculus() {
    let alg = Coframe::s3xs3();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let p = bggg_canonical::<f64>().at(rng.gen_range(2.5..8.0)).unwrap();
        let mut jet = || Jet { value: rng.gen_range(-1.0..1.0), rate: rng.gen_range(-1.0..1.0) };
        let a = InvariantConnection { plus: [jet(), jet(), jet()], minus: [jet(), jet(), jet()] };
        let slow = p.state.metric().unwrap().norm_sq(&a.form().curvature(&alg).unwrap()).unwrap();
        let fast = curvature_norm_sq(&a, &p.state, &alg);
        assert!((slow - fast).abs() < 1e-12 * (1.0 + slow), "{slow} {fast}");
    }
}

#[test]
fn limit_connection_is_flat_along_dt_and_satisfies_bianchi() {
    let alg = Coframe::s3xs3();
    let a = InvariantConnection::constant_plus(2.0 / 3.0).form();
    let f = a.curvature(&alg).unwrap();
    assert!(f.dt_part().is_zero());
    assert!(f.covariant_d(&a, &alg).unwrap().max_abs() < 1e-14);
}

#[test]
fn lambda2_constraint_and_ode() {
    for k in 0..50 {
        let s = 0.1 * k as f64;
        for plus in [true, false] {
            let inst = lambda2_instanton::<f64>(Lambda2Base::S4, s, plus).unwrap();
            assert!(inst.constraint_defect().abs() <= 1e-12, "s = {s}");
            assert!(inst.ode_defect().abs() <= 1e-12, "s = {s}");
        }
    }
    assert_eq!(lambda2_instanton::<f64>(Lambda2Base::S4, 0.0, true).unwrap().a, 1.0);
    assert_eq!(lambda2_instanton::<f64>(Lambda2Base::S4, 0.0, false).unwrap().a, -1.0);
}

#[test]
fn u_c_properties() {
    for c in [0.0f64, 0.5, 2.0] {
        assert_eq!(su3_family_u(c, 0.0).unwrap().u, 1.0);
        let far = su3_family_u(c, 1e9).unwrap().u;
        assert!((far - (1.0 - c) / (1.0 + c)).abs() < 1e-8);
    }
    for s in [0.0, 1.0, 10.0] {
        let v = su3_family_u(0.0f64, s).unwrap();
        assert_eq!(v.u, 1.0);
        assert!(!v.imaginary);
    }
    let v = su3_family_u(1.0f64, 1.0).unwrap();
    assert!(v.u < 1.0 && v.imaginary && v.radicand < 0.0);
    assert!((v.root * v.root + v.radicand).abs() < 1e-15);
    assert!(su3_family_u(-1.0f64, 1.0).is_err());
    assert!(su3_family_u(1.0f64, -1.0).is_err());
}

#[test]
fn cone_forms_are_closed() {
    let alg = Coframe::s3xs3();
    let se = sasaki_einstein_s2s3::<f64>();
    for rho in [0.5, 1.0, 3.0] {
        let cone = cone_forms(&se, rho);
        for (name, f) in [("omega", &cone.omega), ("re", &cone.re_omega), ("im", &cone.im_omega)] {
            assert!(f.d(&alg).unwrap().max_abs() < 1e-13, "d{name} at {rho}");
        }
        // ω∧Ω = 0
        assert!(cone.omega.wedge(&cone.re_omega).max_abs() < 1e-13);
    }
}

#[test]
fn calabi_yau_monopole_examples() {
    let alg = Coframe::s3xs3();
    let se = sasaki_einstein_s2s3::<f64>();
    let cone = cone_forms(&se, 2.0);
    let zero = Form::zero(1, Algebra::Su2);
    let higgs = Form::zero(0, Algebra::Su2).add(&Form::constant(1.0).otimes(Algebra::Su2, &t_basis(0)));
    assert_eq!(cy_monopole_residual(&zero, &higgs, &cone, &alg).unwrap(), (0.0, 0.0));

    let abelian = se.eta_infty.otimes(Algebra::Su2, &t_basis(0)).scale(0.7);
    let (_, second) = cy_monopole_residual(&abelian, &higgs, &cone, &alg).unwrap();
    assert!(second < 1e-14);

    // a Higgs field depending on the radius: the first residual is linear in its scale
    let radial = Form::constant(1.0).otimes(Algebra::Su2, &t_basis(0)).scale_jet(&[2.0, 1.0, 0.0]);
    let (one, _) = cy_monopole_residual(&zero, &radial, &cone, &alg).unwrap();
    let (three, _) = cy_monopole_residual(&zero, &radial.scale(3.0), &cone, &alg).unwrap();
    assert!(one > 0.0 && (three - 3.0 * one).abs() < 1e-12 * three);
}

#[test]
fn orbit_constraint_holds_for_closed_forms() {
    let alg = Coframe::s3xs3();
    for r in radii(1.0) {
        let p = bs_at(r);
        let omega = su3_forms(&p.state, None).omega;
        let f = plus_connection(clarke_coefficient(1.0, r).unwrap()).curvature(&alg).unwrap();
        assert!(f.spatial_part().wedge(&omega.wedge(&omega)).max_abs() < 1e-9);
    }
}

//! The verification suites behind `g2lab verify`.
//!
//! Each check reduces to one nonnegative number compared with a tolerance, so a
//! report can show how much room every identity has.

use g2_analysis::{alc_rate_fit, AsymptoticModel};
use g2_geometries::{
    bggg_canonical, bs_canonical, g2_from_su3, lambda2_structure, sasaki_einstein_s2s3, su3_forms, Lambda2Base,
    Profile, ProfileSample, State,
};
use g2_hitchin::integrate_flow;
use g2_instantons::{
    abelian_bggg, abelian_bs, alim_coefficient, clarke_coefficient, instanton_residual, lambda2_instanton,
    spin_connection, InvariantConnection, Jet,
};
use g2_liealg::{Coframe, ExactCoframe, Form};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// What is being measured, in words.
    pub statement: String,
    pub value: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub passed: bool,
    /// Set when the measurement itself failed.
    pub error: Option<String>,
}

impl Check {
    fn new(suite: &'static str, name: &str, statement: &str, tolerance: f64, value: Result<f64, String>) -> Self {
        let (value, error) = match value {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e)),
        };
        let passed = value.is_finite() && value <= tolerance;
        Self {
            suite,
            name: name.into(),
            statement: statement.into(),
            value,
            tolerance,
            margin: tolerance - value,
            passed,
            error,
        }
    }
}

fn worst(values: impl IntoIterator<Item = Result<f64, String>>) -> Result<f64, String> {
    values.into_iter().try_fold(0.0f64, |w, v| v.map(|v| w.max(v)))
}

fn s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// d² = 0, the Sasaki–Einstein relations and SU(3) compatibility.
pub fn identity_suite(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (name, alg, exact) in [
        ("d2_s3xs3", Coframe::s3xs3(), ExactCoframe::s3xs3()),
        ("d2_sp2", Coframe::sp2(), ExactCoframe::sp2()),
        ("d2_su3", Coframe::su3(), ExactCoframe::su3()),
    ] {
        out.push(Check::new(
            "identities",
            name,
            "max |d(d e^k)| over the coframe, in floating point",
            1e-14,
            Ok(alg.jacobi_defect()),
        ));
        let zero = exact.jacobi_defect() == num_zero();
        out.push(Check::new(
            "identities",
            &format!("{name}_exact"),
            "d(d e^k) = 0 exactly over the rationals (value 1 when not)",
            0.0,
            Ok(if zero { 0.0 } else { 1.0 }),
        ));
    }

    let alg = Coframe::s3xs3();
    let se = sasaki_einstein_s2s3::<f64>();
    let d = |f: &Form| f.d(&alg).map_err(s);
    let [w1, w2, w3] = &se.omega;
    let rel = |lhs: Result<Form, String>, rhs: Form| lhs.map(|l| l.sub(&rhs).max_abs());
    out.push(Check::new(
        "identities",
        "se_d_alpha",
        "d alpha = -2 omega_1 on S2xS3",
        1e-12,
        rel(d(&se.alpha), w1.scale(-2.0)),
    ));
    out.push(Check::new(
        "identities",
        "se_d_omega2",
        "d omega_2 = 3 alpha ^ omega_3",
        1e-12,
        rel(d(w2), se.alpha.wedge(w3).scale(3.0)),
    ));
    out.push(Check::new(
        "identities",
        "se_d_omega3",
        "d omega_3 = -3 alpha ^ omega_2",
        1e-12,
        rel(d(w3), se.alpha.wedge(w2).scale(-3.0)),
    ));
    out.push(Check::new(
        "identities",
        "se_deta_omega",
        "d eta_inf ^ omega_i = 0 for i = 1, 2, 3",
        1e-12,
        d(&se.eta_infty).map(|de| se.omega.iter().map(|w| de.wedge(w).max_abs()).fold(0.0, f64::max)),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut wg, mut w3) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let mut v = [0.0; 6];
        v.iter_mut().for_each(|x| *x = rng.gen_range(0.2..3.0));
        let f = su3_forms(&State::from_values(v), None);
        wg = wg.max(f.omega.wedge(&f.gamma2).max_abs());
        let cube = f.omega.wedge(&f.omega).wedge(&f.omega);
        let rhs = f.gamma1.wedge(&f.gamma2).scale(1.5);
        w3 = w3.max(cube.sub(&rhs).max_abs() / (1.0 + cube.max_abs()));
    }
    out.push(Check::new(
        "identities",
        "su3_omega_gamma2",
        "omega ^ gamma_2 = 0 on 20 random invariant states",
        1e-10,
        Ok(wg),
    ));
    out.push(Check::new(
        "identities",
        "su3_omega_cubed",
        "omega^3 = (3/2) gamma_1 ^ gamma_2 on 20 random invariant states, relative",
        1e-10,
        Ok(w3),
    ));
    out
}

fn num_zero() -> g2_liealg::Exact {
    g2_liealg::Exact::from_integer(0)
}

fn torsion_of(p: &dyn Profile<f64>, sigma_max: f64, n: usize) -> Result<f64, String> {
    let alg = Coframe::s3xs3();
    worst((1..=n).map(|i| {
        let smp = p.at_sigma(sigma_max * i as f64 / n as f64);
        let g2 = g2_from_su3(&smp.state, Some(&smp.rate)).map_err(s)?;
        let (a, b) = g2.torsion(&alg).map_err(s)?;
        Ok(a.max(b))
    }))
}

/// Largest relative deviation of the integrated flow from a closed-form profile
/// over t ∈ [t0, t1], at 41 evenly spaced times.
pub fn flow_deviation(p: &dyn Profile<f64>, t0: f64, t1: f64, tol: f64) -> Result<f64, String> {
    let start = p.rho_of_t(t0).map_err(s)?;
    let tr = integrate_flow(&p.state(start).map_err(s)?, t0, t1, tol).map_err(s)?;
    if tr.truncated() {
        return Err(format!("flow stopped early: {:?}", tr.diagnostics.status));
    }
    worst((0..=40).map(|k| {
        let t = t0 + (t1 - t0) * k as f64 / 40.0;
        let got = tr.state_at(t).ok_or("no interpolant")?.values();
        let want = p.state(p.rho_of_t(t).map_err(s)?).map_err(s)?.values();
        Ok((0..6).map(|i| ((got[i] - want[i]) / want[i]).abs()).fold(0.0, f64::max))
    }))
}

/// Torsion of the closed forms, the Hitchin flow against them, and the decay of
/// the BGGG metric towards its ALC model.
pub fn torsion_suite() -> Vec<Check> {
    let bs = bs_canonical::<f64>();
    let bggg = bggg_canonical::<f64>();
    let mut out = vec![
        Check::new(
            "torsion",
            "bs_torsion_free",
            "max(|d phi|, |d psi|) at 50 samples of the BS metric on R4xS3",
            1e-9,
            torsion_of(&bs, 4.0, 50),
        ),
        Check::new(
            "torsion",
            "bggg_torsion_free",
            "max(|d phi|, |d psi|) at 50 samples of the BGGG metric",
            1e-9,
            torsion_of(&bggg, 4.0, 50),
        ),
    ];
    for (name, base) in [("lambda2_s4_torsion_free", Lambda2Base::S4), ("lambda2_cp2_torsion_free", Lambda2Base::CP2)] {
        let alg = base.coframe::<f64>();
        let v = worst((1..=20).map(|k| {
            let g2 = lambda2_structure(base, 0.15 * k as f64).map_err(s)?;
            let (a, b) = g2.torsion(&alg).map_err(s)?;
            Ok(a.max(b))
        }));
        out.push(Check::new("torsion", name, "max(|d phi|, |d psi|) at 20 fibre radii", 1e-9, v));
    }
    out.push(Check::new(
        "torsion",
        "bs_flow_decade",
        "relative deviation of the Hitchin flow from the BS profile over t in [1, 10]",
        1e-8,
        flow_deviation(&bs, 1.0, 10.0, 1e-12),
    ));
    out.push(Check::new(
        "torsion",
        "bggg_flow_decade",
        "relative deviation of the Hitchin flow from the BGGG profile over t in [1, 10]",
        1e-8,
        flow_deviation(&bggg, 1.0, 10.0, 1e-12),
    ));
    out.push(Check::new(
        "torsion",
        "bggg_alc_rate",
        "|nu + 1| for the fitted decay of BGGG towards its ALC model",
        0.1,
        alc_rate_fit(&bggg, AsymptoticModel::Bggg, 1e3, 1e4).map(|f| (f.nu + 1.0).abs()).map_err(s),
    ));
    out
}

fn bump(a: &Form, perturb: bool) -> Form {
    if !perturb {
        return a.clone();
    }
    let alg = a.algebra();
    let mut unit = vec![0.0; alg.dim()];
    unit[0] = 1.0;
    a.add(&Form::basis(1, alg, unit).scale_jet(&[0.05, 0.0]))
}

fn plus(c: Jet<f64>) -> Form {
    let z = Jet { value: 0.0, rate: 0.0 };
    InvariantConnection { plus: [c; 3], minus: [z; 3] }.form()
}

fn s3s3_residual(
    name: &str,
    statement: &str,
    start: f64,
    profile: &dyn Profile<f64>,
    conn: impl Fn(f64) -> Result<Form, String>,
    perturb: bool,
) -> Check {
    let alg = Coframe::s3xs3();
    let v = worst((0..20).map(|k| {
        let r = start + 0.01 + 0.35 * k as f64;
        let p: ProfileSample<f64> = profile.at(r).map_err(s)?;
        let g2 = g2_from_su3(&p.state, Some(&p.rate)).map_err(s)?;
        let res = instanton_residual(&bump(&conn(r)?, perturb), &g2, &alg).map_err(s)?;
        Ok(res.psi.max(res.asd))
    }));
    Check::new("instantons", name, statement, 1e-9, v)
}

/// |F∧ψ| (and the anti-self-duality defect) for every closed-form instanton at 20
/// samples. With `perturb` each connection gets a constant bump first.
pub fn instanton_suite(perturb: bool) -> Vec<Check> {
    let bs = bs_canonical::<f64>();
    let bggg = bggg_canonical::<f64>();
    let mut out = Vec::new();
    for x1 in [0.1, 1.0, 10.0] {
        out.push(s3s3_residual(
            &format!("clarke_x1_{x1}"),
            &format!("|F^psi| for the Clarke instanton with x1 = {x1} on BS R4xS3"),
            1.0,
            &bs,
            |r| clarke_coefficient(x1, r).map(plus).map_err(s),
            perturb,
        ));
    }
    out.push(s3s3_residual(
        "alim",
        "|F^psi| for the limiting connection A_lim on BS R4xS3",
        1.0,
        &bs,
        |r| alim_coefficient(r).map(plus).map_err(s),
        perturb,
    ));
    out.push(s3s3_residual(
        "bs_abelian",
        "|F^psi| for the U(1) instanton on BS R4xS3 with x = (1, -0.5, 2)",
        1.0,
        &bs,
        |r| abelian_bs([1.0, -0.5, 2.0], r).map_err(s),
        perturb,
    ));
    out.push(s3s3_residual(
        "bggg_abelian",
        "|F^psi| for the U(1) instanton on BGGG with x2 = x3 = 0",
        9.0 / 4.0,
        &bggg,
        |r| abelian_bggg([1.3, 0.0, 0.0], r).map_err(s),
        perturb,
    ));
    for (tag, base) in [("s4", Lambda2Base::S4), ("cp2", Lambda2Base::CP2)] {
        let alg = base.coframe::<f64>();
        for (sign, positive) in [("plus", true), ("minus", false)] {
            let v = worst((1..=20).map(|k| {
                let sv = 0.15 * k as f64;
                let g2 = lambda2_structure(base, sv).map_err(s)?;
                let a = lambda2_instanton(base, sv, positive).map_err(s)?.connection;
                let res = instanton_residual(&bump(&a, perturb), &g2, &alg).map_err(s)?;
                Ok(res.psi.max(res.asd))
            }));
            out.push(Check::new(
                "instantons",
                &format!("lambda2_{tag}_{sign}"),
                &format!("|F^psi| for the {sign} instanton on Lambda2 of {}", tag.to_uppercase()),
                1e-9,
                v,
            ));
        }
    }
    let alg = Coframe::sp2();
    let v = worst((1..=20).map(|k| {
        let g2 = lambda2_structure(Lambda2Base::S4, 0.15 * k as f64).map_err(s)?;
        let res = instanton_residual(&bump(&spin_connection(), perturb), &g2, &alg).map_err(s)?;
        Ok(res.psi.max(res.asd))
    }));
    out.push(Check::new(
        "instantons",
        "spin_connection_s4",
        "|F^psi| for the pulled-back spin connection of S4",
        1e-9,
        v,
    ));
    out
}

pub fn all(seed: u64, perturb: bool) -> Vec<Check> {
    let mut out = identity_suite(seed);
    out.extend(torsion_suite());
    out.extend(instanton_suite(perturb));
    out
}

use g2_liealg::{t_basis, Algebra, Coframe, DiagonalMetric, Form, Metric};
use proptest::prelude::*;

fn e(i: usize) -> Form {
    Form::basis(i, Algebra::Scalar, vec![1.0])
}

fn random_form(degree: usize, slots: usize, coeffs: &[f64]) -> Form {
    // enumerate all degree-subsets of 0..slots in mask order
    let mut terms = Vec::new();
    let mut k = 0;
    for mask in 0u16..(1 << slots) {
        if mask.count_ones() as usize == degree {
            terms.push((mask, vec![coeffs[k % coeffs.len()]]));
            k += 1;
        }
    }
    Form::from_terms(degree, Algebra::Scalar, terms)
}

proptest! {
    #[test]
    fn wedge_is_graded_commutative(p in 0usize..4, q in 0usize..4, c in prop::collection::vec(-2.0f64..2.0, 40)) {
        let a = random_form(p, 7, &c);
        let b = random_form(q, 7, &c[7..]);
        let ab = a.wedge(&b);
        let ba = b.wedge(&a).scale(if (p * q) % 2 == 0 { 1.0 } else { -1.0 });
        prop_assert!(ab.sub(&ba).max_abs() < 1e-12);
    }

    #[test]
    fn double_star_is_identity(p in 0usize..8, s in prop::collection::vec(0.2f64..3.0, 7), c in prop::collection::vec(-2.0f64..2.0, 35)) {
        let m = Metric::leading(s).unwrap();
        let a = random_form(p, 7, &c);
        let back = m.hodge_star(&m.hodge_star(&a).unwrap()).unwrap();
        let err = back.sub(&a).max_abs();
        prop_assert!(err < 1e-12 * (1.0 + a.max_abs()) * 1e2, "err {}", err);
    }

    #[test]
    fn d_obeys_leibniz(p in 1usize..3, c in prop::collection::vec(-2.0f64..2.0, 40)) {
        let alg = Coframe::s3xs3();
        let a = random_form(p, 7, &c);
        let b = random_form(1, 7, &c[5..]);
        let lhs = a.wedge(&b).d(&alg).unwrap();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = a.d(&alg).unwrap().wedge(&b).add(&a.wedge(&b.d(&alg).unwrap()).scale(sign));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12);
    }
}

#[test]
fn d_squared_vanishes_in_floating_point() {
    for alg in [Coframe::s3xs3(), Coframe::sp2(), Coframe::su3()] {
        assert!(alg.jacobi_defect() <= 1e-14);
    }
}

#[test]
fn spin_connection_curvature_on_s4() {
    let alg = Coframe::sp2();
    let mut theta = Form::zero(1, Algebra::Su2);
    for i in 0..3 {
        theta = theta.add(&Form::basis(5 + i, Algebra::Su2, t_basis(i)));
    }
    let f = theta.curvature(&alg).unwrap();
    let w = |a: usize, b: usize| e(a).wedge(&e(b));
    let bar = [
        w(1, 2).add(&w(3, 4)),
        w(1, 3).add(&w(4, 2)),
        w(1, 4).add(&w(2, 3)),
    ];
    let mut expect = Form::zero(2, Algebra::Su2);
    for (i, o) in bar.iter().enumerate() {
        expect = expect.add(&o.otimes(Algebra::Su2, &t_basis(i)).scale(-0.5));
    }
    assert!(f.sub(&expect).max_abs() < 1e-15);
    // Bianchi for a static connection.
    assert!(f.covariant_d(&theta, &alg).unwrap().max_abs() < 1e-14);
}

#[test]
fn canonical_limit_connection_satisfies_bianchi() {
    let alg = Coframe::s3xs3();
    let mut a = Form::zero(1, Algebra::Su2);
    for i in 0..3 {
        a = a.add(&Form::basis(1 + i, Algebra::Su2, t_basis(i)).scale(2.0 / 3.0));
    }
    let f = a.curvature(&alg).unwrap();
    assert!(f.covariant_d(&a, &alg).unwrap().max_abs() < 1e-14);
}

#[test]
fn time_dependent_bianchi_with_second_derivatives() {
    // A = x(t) Σ Tᵢηᵢ⁺ with x = t², jets carried to second order.
    let alg = Coframe::s3xs3();
    let t = 0.7;
    let jet = [t * t, 2.0 * t, 2.0, 0.0];
    let mut a = Form::zero(1, Algebra::Su2);
    for i in 0..3 {
        a = a.add(&Form::basis(1 + i, Algebra::Su2, t_basis(i)).scale_jet(&jet));
    }
    let f = a.curvature(&alg).unwrap();
    let bianchi = f.covariant_d(&a, &alg).unwrap();
    assert!(bianchi.max_abs() < 1e-13);
}

#[test]
fn norm_respects_scales() {
    let m = DiagonalMetric::leading(vec![1.0, 2.0, 4.0]).unwrap();
    let a = e(1).wedge(&e(2)).scale(8.0);
    assert_eq!(m.norm_sq(&a).unwrap(), 1.0);
}

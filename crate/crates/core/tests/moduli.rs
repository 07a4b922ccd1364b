use ecdensity::algebra::{int, is_23_unit, Fp, MPoly, Ring};
use ecdensity::elliptic::{Curve, Point, WeierstrassModel};
use ecdensity::moduli::*;
use ecdensity::padic::sqrt_mod_p;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn short_disc<R: Ring>(a: &R, b: &R) -> R {
    (a.pow_u(3).times(4) + b.pow_u(2).times(27)).times(-16)
}

fn psi3<R: Ring>(a: &R, b: &R, x: &R) -> R {
    x.pow_u(4).times(3) + (a.clone() * x.pow_u(2)).times(6) + (b.clone() * x.clone()).times(12) - a.pow_u(2)
}

#[test]
fn jacobian_of_pi1() {
    let v = MPoly::vars(2);
    let (a, b) = pi1(&v[0], &v[1]);
    assert_eq!(jacobian(&a, &b, 0, 1), v[1].pow_u(2).times(256));
}

#[test]
fn jacobian_of_pi2() {
    let v = MPoly::vars(2);
    let (u, w) = (&v[0], &v[1]);
    let (a, b) = pi2(u, w);
    let expected = (u.pow_u(2) * (u.clone() - w.clone()).pow_u(2) * (u.pow_u(2) + u.clone() * w.clone() + w.pow_u(2)).pow_u(2))
        .times(-559872);
    assert_eq!(jacobian(&a, &b, 0, 1), expected);
}

#[test]
fn jacobian_of_pi_psi() {
    let v = MPoly::vars(3);
    let (l, u, w) = (&v[0], &v[1], &v[2]);
    let (a, b) = pi_psi(l, u, w);
    assert_eq!(jacobian(&a, &b, 1, 2), (l.pow_u(2) * w.pow_u(2)).times(4));
}

#[test]
fn jacobian_of_pi_f() {
    let v = MPoly::vars(3);
    let (bb, u, w) = (&v[0], &v[1], &v[2]);
    let (a, b) = pi_f(bb, u, w);
    let expected = (bb.pow_u(2) * u.pow_u(2) * (u.pow_u(3) + (bb.clone() * w.pow_u(3)).times(6912)).pow_u(2)).times(-432);
    assert_eq!(jacobian(&a, &b, 1, 2), expected);
}

#[test]
fn jacobian_of_phi() {
    let v = MPoly::vars(4);
    let (u, z, p, nu) = (&v[0], &v[1], &v[2], &v[3]);
    for delta in 0..2 {
        for eps in 0..2 {
            let (a, b) = phi_b_map(JZeroParams { delta, eps }, p, nu, u, z);
            let inner = (nu.pow_u(eps) * z.clone()).times(48).pow_u(3) + u.pow_u(3);
            let expected = (nu.pow_u(6 * eps) * p.pow_u(5 * delta) * u.pow_u(2) * inner.pow_u(2)).times(-(48 * 48 * 48));
            assert_eq!(jacobian(&a, &b, 0, 1), expected, "delta={delta} eps={eps}");
        }
    }
}

#[test]
fn pi_f_is_the_a_zero_hesse_family() {
    let v = MPoly::vars(3);
    let zero = v[0].zero_like();
    assert_eq!(pi_f(&v[0], &v[1], &v[2]), hesse_polynomials(&zero, &v[0], &v[1], &v[2]));
}

#[test]
fn hesse_polynomials_at_v_zero() {
    let v = MPoly::vars(2);
    let one = v[0].one_like();
    let zero = v[0].zero_like();
    assert_eq!(hesse_polynomials(&v[0], &v[1], &one, &zero), (v[0].clone(), v[1].clone()));
}

#[test]
fn discriminant_of_pi1_is_tate_discriminant() {
    let v = MPoly::vars(2);
    let (u, w) = (&v[0], &v[1]);
    let (a, b) = pi1(u, w);
    let d = short_disc(&a, &b);
    let tate = (u.pow_u(3) - w.times(27)) * w.pow_u(3);
    let k = d.eval(&[int(1), int(1)]) / tate.eval(&[int(1), int(1)]);
    assert!(is_23_unit(&k), "scale {k}");
    assert_eq!(d, tate * MPoly::constant_in(2, k));
}

#[test]
fn pi1_origin_is_a_flex() {
    let v = MPoly::vars(2);
    let (a, b) = pi1(&v[0], &v[1]);
    // the marked point has x = u^2 / 3 on the scaled model
    let x = v[0].pow_u(2) * v[0].constant(1, 3);
    assert!(psi3(&a, &b, &x).is_zero());
}

#[test]
fn pi_psi_kernel_root() {
    let v = MPoly::vars(3);
    let (l, u, w) = (&v[0], &v[1], &v[2]);
    let (a, b) = pi_psi(l, u, w);
    let x = l.clone() * u.pow_u(2) * l.constant(1, 3);
    assert!(psi3(&a, &b, &x).is_zero());
}

#[test]
fn hesse_points_are_3_torsion_identically() {
    let v = MPoly::vars(3);
    let (u, w, s) = (&v[0], &v[1], &v[2]);
    let (a, b) = pi2(u, w);
    let (p1, p2) = hesse_torsion_points(u, w, s);
    let on_curve = |x: &MPoly, y2: MPoly| y2 - (x.pow_u(3) + a.clone() * x.clone() + b.clone());
    let (Point::Affine(x1, y1), Point::Affine(x2, _)) = (&p1, &p2) else { unreachable!() };
    assert!(on_curve(x1, y1.pow_u(2)).is_zero());
    assert!(psi3(&a, &b, x1).is_zero());
    // y2^2 with s^2 = -3
    let y2sq = (u.pow_u(3) - w.pow_u(3)).pow_u(2).times(-3 * 144);
    assert!(on_curve(x2, y2sq).is_zero());
    assert!(psi3(&a, &b, x2).is_zero());
}

#[test]
fn hesse_point_over_q_has_order_three() {
    let (u, v) = (int(2), int(1));
    let (a, b) = pi2(&u, &v);
    let curve = WeierstrassModel::short_q(a, b).curve();
    let (p1, _) = hesse_torsion_points(&u, &v, &BigRational::zero());
    assert!(curve.contains(&p1));
    assert_eq!(curve.order_of(&p1, 3), Some(3));
}

#[test]
fn pi2_resultants() {
    let res_u: BigRational = "614787626176508399616".parse::<num_bigint::BigInt>().unwrap().into();
    let res_v: BigRational = "-265588254508251628634112".parse::<num_bigint::BigInt>().unwrap().into();
    for t in [-3i64, -1, 1, 2, 5, 7] {
        let tq = int(t);
        let p24 = num_traits::pow(tq.clone(), 24);
        assert_eq!(pi2_resultant_in_u(&tq), &res_u * &p24);
        assert_eq!(pi2_resultant_in_v(&tq), &res_v * &p24);
    }
}

#[test]
fn random_family_points_over_small_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a3a);
    for p in [7u64, 13] {
        let s = Fp::new(sqrt_mod_p(p - 3, p).unwrap() as i128, p);
        let (mut x1_done, mut x_done) = (0, 0);
        while x1_done < 100 || x_done < 100 {
            let u = Fp::new(rng.gen_range(0..p) as i128, p);
            let v = Fp::new(rng.gen_range(0..p) as i128, p);
            let (a, b) = pi1(&u, &v);
            let c = Curve::new(u.zero_like(), u.zero_like(), u.zero_like(), a, b);
            if x1_done < 100 && !c.is_singular() {
                assert!(c.has_point_of_order(3), "pi1({u:?}, {v:?}) over F_{p}");
                x1_done += 1;
            }
            let (a, b) = pi2(&u, &v);
            let c = Curve::new(u.zero_like(), u.zero_like(), u.zero_like(), a, b);
            if x_done < 100 && !c.is_singular() {
                assert!(c.has_full_torsion(3), "pi2({u:?}, {v:?}) over F_{p}");
                let (p1, p2) = hesse_torsion_points(&u, &v, &s);
                assert_eq!(c.order_of(&p1, 3), Some(3));
                assert_eq!(c.order_of(&p2, 3), Some(3));
                x_done += 1;
            }
        }
    }
}

//! Parametrizations of short Weierstrass equations with level-3 structure:
//! Tate normal form, the Hesse pencil, the isogeny-kernel family, and point
//! counts on the parameter spaces over `F_p`.

use crate::algebra::{Fp, MPoly, Ring};
use crate::elliptic::{Curve, Point, WeierstrassModel};
use crate::error::{Error, Result};
use crate::padic::{is_prime, require_odd_prime};
use crate::poly::RatPoly;
use num_rational::BigRational;
use num_traits::Zero;

/// Tate normal form `y^2 + u xy + v y = x^3` of `(W, P)` for a point `P` of order 3.
/// The returned model is isomorphic to `W` by a change of variables with unit scaling.
pub fn tate_normal_form(w: &WeierstrassModel, p: &(BigRational, BigRational)) -> Result<(BigRational, BigRational)> {
    let curve = w.curve();
    if curve.is_singular() {
        return Err(Error::SingularCurve(w.to_string()));
    }
    let pt = Point::Affine(p.0.clone(), p.1.clone());
    if !curve.contains(&pt) {
        return Err(Error::InvalidInput("point is not on the curve".into()));
    }
    if curve.order_of(&pt, 3) != Some(3) {
        return Err(Error::InvalidInput("point does not have order 3".into()));
    }
    let [a1, a2, a3, a4, _] = w.coefficients();
    let (r, t) = p.clone();
    let b3 = &a3 + &r * &a1 + BigRational::from_integer(2.into()) * &t;
    let b2 = &a2 + BigRational::from_integer(3.into()) * &r;
    let b4 = &a4 + BigRational::from_integer(2.into()) * &r * &a2 - &t * &a1
        + BigRational::from_integer(3.into()) * &r * &r;
    let s = &b4 / &b3;
    let u = &a1 + BigRational::from_integer(2.into()) * &s;
    let c2 = &b2 - &s * &a1 - &s * &s;
    debug_assert!(c2.is_zero(), "a point of order 3 is a flex");
    Ok((u, b3))
}

/// Short model of `y^2 + u xy + v y = x^3`, scaled by `(x, y) -> (4x, 8y)`:
/// `(8uv - u^4/3, 16v^2 - 8vu^3/3 + 2u^6/27)`. Jacobian `256 v^2`.
pub fn pi1<R: Ring>(u: &R, v: &R) -> (R, R) {
    let a = (u.clone() * v.clone()).times(8) - u.pow_u(4) * u.constant(1, 3);
    let b = v.pow_u(2).times(16) - v.clone() * u.pow_u(3) * u.constant(8, 3) + u.pow_u(6) * u.constant(2, 27);
    (a, b)
}

/// The Hesse family `(-216 u^3 v - 27 v^4, -432 u^6 - 1080 u^3 v^3 + 54 v^6)`: curves with
/// full level-3 structure when the cube roots of unity are rational.
pub fn pi2<R: Ring>(u: &R, v: &R) -> (R, R) {
    let a = (u.pow_u(3) * v.clone()).times(-216) - v.pow_u(4).times(27);
    let b = u.pow_u(6).times(-432) - (u.pow_u(3) * v.pow_u(3)).times(1080) + v.pow_u(6).times(54);
    (a, b)
}

/// The two generators of the 3-torsion of the curve `pi2(u, v)`. `sqrt_m3` must square to -3.
pub fn hesse_torsion_points<R: Ring>(u: &R, v: &R, sqrt_m3: &R) -> (Point<R>, Point<R>) {
    let x1 = (u.pow_u(2).times(4) + (u.clone() * v.clone()).times(4) + v.pow_u(2)).times(3);
    let y1 = (u.pow_u(3) + u.pow_u(2) * v.clone() + u.clone() * v.pow_u(2)).times(-36);
    let x2 = v.pow_u(2).times(-9);
    let y2 = sqrt_m3.clone() * (u.pow_u(3) - v.pow_u(3)).times(12);
    (Point::Affine(x1, y1), Point::Affine(x2, y2))
}

/// Curves `y^2 = x^3 + a x + b` whose 3-isogeny kernel has x-coordinate `lambda u^2 / 3`.
/// Jacobian `4 lambda^2 v^2`.
pub fn pi_psi<R: Ring>(lambda: &R, u: &R, v: &R) -> (R, R) {
    let l = lambda;
    let a = (l.clone() * u.clone() * v.clone()).times(2) - l.pow_u(2) * u.pow_u(4) * u.constant(1, 3);
    let b = l.clone() * v.pow_u(2) - l.pow_u(2) * v.clone() * u.pow_u(3) * u.constant(2, 3)
        + l.pow_u(3) * u.pow_u(6) * u.constant(2, 27);
    (a, b)
}

/// The Hesse polynomials `(C4, C6)` attached to `y^2 = x^3 + a x + b`: the curves whose
/// 3-torsion is isomorphic to that of `(a, b)` as a Galois module. `(a, b, 1, 0) -> (a, b)`.
pub fn hesse_polynomials<R: Ring>(a: &R, b: &R, u: &R, v: &R) -> (R, R) {
    let c4 = (a.pow_u(3) * v.pow_u(4)).times(-6912)
        - (a.pow_u(2) * u.pow_u(2) * v.pow_u(2)).times(288)
        - (a.clone() * b.clone() * u.clone() * v.pow_u(3)).times(3456)
        + a.clone() * u.pow_u(4)
        - (b.pow_u(2) * v.pow_u(4)).times(62208)
        + (b.clone() * u.pow_u(3) * v.clone()).times(72);
    let c6 = (a.pow_u(4) * u.clone() * v.pow_u(5)).times(-110592)
        - (a.pow_u(3) * b.clone() * v.pow_u(6)).times(995328)
        + (a.pow_u(2) * b.clone() * u.pow_u(2) * v.pow_u(4)).times(34560)
        - (a.pow_u(2) * u.pow_u(5) * v.clone()).times(16)
        - (a.clone() * b.pow_u(2) * u.clone() * v.pow_u(5)).times(497664)
        - (a.clone() * b.clone() * u.pow_u(4) * v.pow_u(2)).times(720)
        - (b.pow_u(3) * v.pow_u(6)).times(5971968)
        - (b.pow_u(2) * u.pow_u(3) * v.pow_u(3)).times(17280)
        + b.clone() * u.pow_u(6);
    (c4, c6)
}

/// `hesse_polynomials` at `a = 0`: the family through `y^2 = x^3 + b`.
/// Jacobian `-432 b^2 u^2 (u^3 + 6912 b v^3)^2`.
pub fn pi_f<R: Ring>(b: &R, u: &R, v: &R) -> (R, R) {
    let a = (b.pow_u(2) * v.pow_u(4)).times(-62208) + (b.clone() * u.pow_u(3) * v.clone()).times(72);
    let c = (b.pow_u(3) * v.pow_u(6)).times(-5971968) - (b.pow_u(2) * u.pow_u(3) * v.pow_u(3)).times(17280)
        + b.clone() * u.pow_u(6);
    (a, c)
}

/// Parameters of the j = 0 family: `b = 16 p^(3 delta) nu^(3 eps)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JZeroParams {
    pub delta: u32,
    pub eps: u32,
}

/// `pi_f` at `b = 16 p^(3 delta) nu^(3 eps)` after `v = z p^(-delta)`, written so
/// every coefficient is integral. `prime` and `nu` are ring elements so the map can
/// be evaluated symbolically. Jacobian `-48^3 nu^(6 eps) p^(5 delta) u^2 ((48 nu^eps z)^3 + u^3)^2`.
pub fn phi_b_map<R: Ring>(params: JZeroParams, prime: &R, nu: &R, u: &R, z: &R) -> (R, R) {
    let pd = prime.pow_u(params.delta);
    let e = params.eps;
    let n3 = nu.pow_u(3 * e);
    let n6 = nu.pow_u(6 * e);
    let n9 = nu.pow_u(9 * e);
    let a = pd.pow_u(2)
        * ((n6.clone() * z.pow_u(4)).times(-(65536 * 243)) + (n3.clone() * u.pow_u(3) * z.clone()).times(128 * 9));
    let b = pd.pow_u(3)
        * ((n9 * z.pow_u(6)).times(-(33554432 * 729))
            - (n6 * u.pow_u(3) * z.pow_u(3)).times(32768 * 27 * 5)
            + (n3 * u.pow_u(6)).times(16));
    (a, b)
}

/// Jacobian determinant `d(f, g)/d(x_i, x_j)` of two symbolic polynomials.
pub fn jacobian(f: &MPoly, g: &MPoly, i: usize, j: usize) -> MPoly {
    f.derivative(i) * g.derivative(j) - f.derivative(j) * g.derivative(i)
}

/// Resultant of the two components of `pi2` in `u`, at a fixed rational `v`.
pub fn pi2_resultant_in_u(v: &BigRational) -> BigRational {
    let (c4, c6) = pi2_as_polys_in_first(v, true);
    c4.resultant(&c6)
}

/// Resultant of the two components of `pi2` in `v`, at a fixed rational `u`.
pub fn pi2_resultant_in_v(u: &BigRational) -> BigRational {
    let (c4, c6) = pi2_as_polys_in_first(u, false);
    c4.resultant(&c6)
}

fn pi2_as_polys_in_first(fixed: &BigRational, in_u: bool) -> (RatPoly, RatPoly) {
    let vars = MPoly::vars(2);
    let (a, b) = pi2(&vars[0], &vars[1]);
    let free = if in_u { 0 } else { 1 };
    let to_poly = |m: &MPoly| {
        let mut coeffs = vec![BigRational::zero(); 7];
        for (e, c) in m.terms() {
            let fixed_pow = num_traits::pow(fixed.clone(), e[1 - free] as usize);
            coeffs[e[free] as usize] += c * fixed_pow;
        }
        RatPoly::new(coeffs)
    };
    (to_poly(&a), to_poly(&b))
}

/// Parameter spaces with a level-3 structure, named after the modular curves they cover.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamFamily {
    /// `(u, v)` with `(u^3 - 27 v) v != 0`: Tate normal forms, i.e. curves with a point of order 3.
    X1_3,
    /// `(u, v)` with `u (u^3 - v^3) != 0`: the Hesse family.
    X_3,
}

/// Closed-form count of `F_p` points on a parameter space.
/// `X1_3`: `(p - 1)^2`. `X_3`: `p^2 - 4p + 3` when `p = 1 mod 3`, `(p - 1)^2` otherwise.
pub fn count_parameter_points_fp(p: u64, family: ParamFamily) -> Result<u64> {
    require_odd_prime(p)?;
    let x1 = (p - 1) * (p - 1);
    Ok(match family {
        ParamFamily::X1_3 => x1,
        ParamFamily::X_3 if p % 3 == 1 => p * p - 4 * p + 3,
        ParamFamily::X_3 => x1,
    })
}

/// The same counts by enumerating `F_p^2`.
pub fn enumerate_parameter_points_fp(p: u64, family: ParamFamily) -> Result<u64> {
    require_odd_prime(p)?;
    let mut n = 0;
    for u in 0..p {
        for v in 0..p {
            let keep = match family {
                ParamFamily::X1_3 => v != 0 && u * u * u % p != 27 * v % p,
                ParamFamily::X_3 => {
                    let c = |x: u64| x * x % p * x % p;
                    u != 0 && c(u) != c(v)
                }
            };
            if keep {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// Level structure searched for on `y^2 = x^3 + a x + b` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelStructure {
    /// A rational point of order `ell`.
    PointOfOrder,
    /// `E[ell] = (Z/ell)^2` over `F_p`.
    FullLevel,
}

/// Number of nonsingular `(a, b)` in `F_p^2` with the given `ell`-structure.
pub fn count_weierstrass_with_ell_structure(p: u64, ell: u64, structure: LevelStructure) -> Result<u64> {
    require_odd_prime(p)?;
    if p == 3 {
        return Err(Error::Unsupported("short Weierstrass equations need p >= 5".into()));
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let mut n = 0;
    for a in 0..p as i128 {
        for b in 0..p as i128 {
            let c = Curve::<Fp>::short_mod(a, b, p);
            if c.is_singular() {
                continue;
            }
            let hit = match structure {
                LevelStructure::PointOfOrder => c.has_point_of_order(ell),
                LevelStructure::FullLevel => c.has_full_torsion(ell),
            };
            if hit {
                n += 1;
            }
        }
    }
    Ok(n)
}

//! Weierstrass models, invariants, division polynomials, point groups over
//! `F_p` and reduction types over `Z_p`.

use crate::algebra::{Field, Fp, Ring};
use crate::error::{Error, Result};
use crate::padic::{
    is_prime, legendre, max_precision, reduce_bigint, require_odd_prime, sqrt_mod_p, ResidueInt,
    Val,
};
use crate::poly::{IntPoly, Poly, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Which normal form a model is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
    Long,
    /// `y^2 = x^3 + a2 x^2 + a4 x + a6`
    Medium,
    /// `y^2 = x^3 + a x + b`
    Short,
}

/// A Weierstrass equation with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    pub form: Form,
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

impl WeierstrassModel {
    pub fn long_q(a1: BigRational, a2: BigRational, a3: BigRational, a4: BigRational, a6: BigRational) -> Self {
        WeierstrassModel { form: Form::Long, a1, a2, a3, a4, a6 }
    }

    pub fn long(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        Self::long_q(q(a1), q(a2), q(a3), q(a4), q(a6))
    }

    pub fn medium_q(a2: BigRational, a4: BigRational, a6: BigRational) -> Self {
        WeierstrassModel { form: Form::Medium, a1: q(0), a2, a3: q(0), a4, a6 }
    }

    pub fn medium(a2: i64, a4: i64, a6: i64) -> Self {
        Self::medium_q(q(a2), q(a4), q(a6))
    }

    pub fn short_q(a: BigRational, b: BigRational) -> Self {
        WeierstrassModel { form: Form::Short, a1: q(0), a2: q(0), a3: q(0), a4: a, a6: b }
    }

    pub fn short(a: i64, b: i64) -> Self {
        Self::short_q(q(a), q(b))
    }

    pub fn short_int(a: &BigInt, b: &BigInt) -> Self {
        Self::short_q(BigRational::from_integer(a.clone()), BigRational::from_integer(b.clone()))
    }

    /// `(a1, a2, a3, a4, a6)`.
    pub fn coefficients(&self) -> [BigRational; 5] {
        [self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone()]
    }

    pub fn curve(&self) -> Curve<BigRational> {
        Curve::new(self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), self.a6.clone())
    }

    /// Reduction modulo `p`; fails when a denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Curve<Fp>> {
        let red = |c: &BigRational| -> Result<Fp> {
            let d = reduce_bigint(c.denom(), p);
            let n = reduce_bigint(c.numer(), p);
            let inv = Fp::new(d as i128, p)
                .inverse()
                .ok_or_else(|| Error::InvalidInput(format!("coefficient {c} is not {p}-integral")))?;
            Ok(Fp::new(n as i128, p) * inv)
        };
        Ok(Curve::new(red(&self.a1)?, red(&self.a2)?, red(&self.a3)?, red(&self.a4)?, red(&self.a6)?))
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.form {
            Form::Short => write!(f, "y^2 = x^3 + ({})x + ({})", self.a4, self.a6),
            Form::Medium => write!(f, "y^2 = x^3 + ({})x^2 + ({})x + ({})", self.a2, self.a4, self.a6),
            Form::Long => write!(
                f,
                "y^2 + ({})xy + ({})y = x^3 + ({})x^2 + ({})x + ({})",
                self.a1, self.a3, self.a2, self.a4, self.a6
            ),
        }
    }
}

/// Standard invariants of a model. The j-invariant is kept as the fraction `c4^3 / disc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigRational,
    pub b4: BigRational,
    pub b6: BigRational,
    pub b8: BigRational,
    pub c4: BigRational,
    pub c6: BigRational,
    pub disc: BigRational,
    pub j_num: BigRational,
    pub j_den: BigRational,
}

impl Invariants {
    /// `None` for singular models.
    pub fn j(&self) -> Option<BigRational> {
        (!self.j_den.is_zero()).then(|| &self.j_num / &self.j_den)
    }
}

/// Computes `b2, b4, b6, b8, c4, c6` and the discriminant, checking `c4^3 - c6^2 = 1728 disc`.
pub fn invariants(w: &WeierstrassModel) -> Invariants {
    generic_invariants(&w.a1, &w.a2, &w.a3, &w.a4, &w.a6).into()
}

/// The same invariants over any ring.
pub fn generic_invariants<R: Ring>(a1: &R, a2: &R, a3: &R, a4: &R, a6: &R) -> InvariantsOf<R> {
    let (a1, a2, a3, a4, a6) = (a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone());
    let b2 = a1.clone() * a1.clone() + a2.times(4);
    let b4 = a1.clone() * a3.clone() + a4.times(2);
    let b6 = a3.clone() * a3.clone() + a6.times(4);
    let b8 = a1.clone() * a1.clone() * a6.clone() + (a2.clone() * a6.clone()).times(4)
        - a1 * a3.clone() * a4.clone()
        + a2 * a3.clone() * a3
        - a4.clone() * a4;
    let c4 = b2.clone() * b2.clone() - b4.times(24);
    let c6 = -(b2.pow_u(3)) + (b2.clone() * b4.clone()).times(36) - b6.times(216);
    let disc = -(b2.clone() * b2.clone() * b8.clone()) - b4.pow_u(3).times(8) - (b6.clone() * b6.clone()).times(27)
        + (b2.clone() * b4.clone() * b6.clone()).times(9);
    let lhs = c4.pow_u(3) - c6.clone() * c6.clone();
    assert!(lhs == disc.times(1728), "c4^3 - c6^2 = 1728 disc violated");
    InvariantsOf { j_num: c4.pow_u(3), j_den: disc.clone(), b2, b4, b6, b8, c4, c6, disc }
}

/// Invariants over an arbitrary ring.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantsOf<R> {
    pub b2: R,
    pub b4: R,
    pub b6: R,
    pub b8: R,
    pub c4: R,
    pub c6: R,
    pub disc: R,
    pub j_num: R,
    pub j_den: R,
}

impl From<InvariantsOf<BigRational>> for Invariants {
    fn from(g: InvariantsOf<BigRational>) -> Self {
        Invariants {
            b2: g.b2,
            b4: g.b4,
            b6: g.b6,
            b8: g.b8,
            c4: g.c4,
            c6: g.c6,
            disc: g.disc,
            j_num: g.j_num,
            j_den: g.j_den,
        }
    }
}

impl WeierstrassModel {
    pub fn invariants(&self) -> Invariants {
        invariants(self)
    }
}

/// Completes the square in `y` (any odd `p`) and, for `p >= 5`, removes the `x^2`
/// term. Both substitutions have unit Jacobian, so `c4`, `c6` and the
/// discriminant are unchanged. At `p = 3` the medium form is returned.
pub fn complete_square_and_depress(w: &WeierstrassModel, p: u64) -> Result<WeierstrassModel> {
    require_odd_prime(p)?;
    let medium = complete_square(w);
    if p == 3 {
        Ok(medium)
    } else {
        depress(&medium, p)
    }
}

/// `y -> y - (a1 x + a3)/2`.
pub fn complete_square(w: &WeierstrassModel) -> WeierstrassModel {
    if w.form != Form::Long {
        return w.clone();
    }
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    WeierstrassModel::medium_q(
        &w.a2 + &w.a1 * &w.a1 * &quarter,
        &w.a4 + &w.a1 * &w.a3 * &half,
        &w.a6 + &w.a3 * &w.a3 * &quarter,
    )
}

/// `x -> x - a2/3` on a medium model. Requires `p != 3`.
pub fn depress(w: &WeierstrassModel, p: u64) -> Result<WeierstrassModel> {
    if p == 3 {
        return Err(Error::Unsupported("removing the x^2 term needs 3 to be a unit".into()));
    }
    let m = complete_square(w);
    if m.form == Form::Short {
        return Ok(m);
    }
    let a2 = &m.a2;
    let a = &m.a4 - a2 * a2 / q(3);
    let b = &m.a6 - a2 * &m.a4 / q(3) + q(2) * a2 * a2 * a2 / q(27);
    Ok(WeierstrassModel::short_q(a, b))
}

/// The n-th division polynomial as a polynomial in `x`.
///
/// For odd `n` this is `psi_n`; for even `n` it is `psi_n / psi_2`, which lies in
/// `Q[x]` and has the x-coordinates of the non-2-torsion points of order dividing
/// `n` as roots. `psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8`.
pub fn division_polynomial(w: &WeierstrassModel, n: u32) -> Result<RatPoly> {
    if n == 0 {
        return Err(Error::InvalidInput("division polynomial index must be positive".into()));
    }
    let inv = invariants(w);
    Ok(division_polynomial_from_b(&inv.b2, &inv.b4, &inv.b6, &inv.b8, n))
}

fn division_polynomial_from_b(
    b2: &BigRational,
    b4: &BigRational,
    b6: &BigRational,
    b8: &BigRational,
    n: u32,
) -> RatPoly {
    let c = |v: &BigRational| v.clone();
    let f = Poly::new(vec![c(b6), q(2) * b4, c(b2), q(4)]);
    let f2 = &f * &f;
    let mut fs: Vec<RatPoly> = vec![
        Poly::zero(),
        Poly::constant(q(1)),
        Poly::constant(q(1)),
        Poly::new(vec![c(b8), q(3) * b6, q(3) * b4, c(b2), q(3)]),
        Poly::new(vec![
            b4 * b8 - b6 * b6,
            b2 * b8 - b4 * b6,
            q(10) * b8,
            q(10) * b6,
            q(5) * b4,
            c(b2),
            q(2),
        ]),
    ];
    let cube = |p: &RatPoly| &(p * p) * p;
    for m in fs.len() as u32..=n {
        let next = if m % 2 == 1 {
            let h = (m / 2) as usize;
            let t1 = &fs[h + 2] * &cube(&fs[h]);
            let t2 = &fs[h - 1] * &cube(&fs[h + 1]);
            if h % 2 == 0 {
                &(&f2 * &t1) - &t2
            } else {
                &t1 - &(&f2 * &t2)
            }
        } else {
            let h = (m / 2) as usize;
            let inner = &(&fs[h + 2] * &(&fs[h - 1] * &fs[h - 1])) - &(&fs[h - 2] * &(&fs[h + 1] * &fs[h + 1]));
            &fs[h] * &inner
        };
        fs.push(next);
    }
    fs[n as usize].clone()
}

/// Division polynomial of `y^2 = x^3 + a x + b` with integer coefficients.
pub fn division_polynomial_short(a: &BigInt, b: &BigInt, n: u32) -> Result<IntPoly> {
    let w = WeierstrassModel::short_int(a, b);
    Ok(division_polynomial(&w, n)?.map(|c| c.to_integer()))
}

/// A point on a Weierstrass curve over a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Infinity,
    Affine(F, F),
}

/// A long Weierstrass curve over a field with the chord-tangent group law.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve<F> {
    pub a1: F,
    pub a2: F,
    pub a3: F,
    pub a4: F,
    pub a6: F,
}

impl<F: Field> Curve<F> {
    pub fn new(a1: F, a2: F, a3: F, a4: F, a6: F) -> Self {
        Curve { a1, a2, a3, a4, a6 }
    }

    pub fn invariants(&self) -> InvariantsOf<F> {
        generic_invariants(&self.a1, &self.a2, &self.a3, &self.a4, &self.a6)
    }

    pub fn is_singular(&self) -> bool {
        self.invariants().disc.is_zero_elem()
    }

    pub fn contains(&self, pt: &Point<F>) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let lhs = y.clone() * y.clone() + self.a1.clone() * x.clone() * y.clone() + self.a3.clone() * y.clone();
                let rhs = x.pow_u(3) + self.a2.clone() * x.clone() * x.clone() + self.a4.clone() * x.clone() + self.a6.clone();
                lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: &Point<F>) -> Point<F> {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                Point::Affine(x.clone(), -y.clone() - self.a1.clone() * x.clone() - self.a3.clone())
            }
        }
    }

    pub fn add(&self, p1: &Point<F>, p2: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, _) => return p2.clone(),
            (_, Point::Infinity) => return p1.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let (l, nu) = if x1 != x2 {
            let d = (x2.clone() - x1.clone()).inverse().expect("distinct x");
            let l = (y2.clone() - y1.clone()) * d.clone();
            let nu = (y1.clone() * x2.clone() - y2.clone() * x1.clone()) * d;
            (l, nu)
        } else {
            let den = y1.times(2) + self.a1.clone() * x1.clone() + self.a3.clone();
            if y1.clone() + y2.clone() + self.a1.clone() * x2.clone() + self.a3.clone() == den.zero_like() {
                return Point::Infinity;
            }
            let d = den.inverse().expect("nonzero tangent denominator");
            let l = (x1.pow_u(2).times(3) + (self.a2.clone() * x1.clone()).times(2) + self.a4.clone()
                - self.a1.clone() * y1.clone())
                * d.clone();
            let nu = (-(x1.pow_u(3)) + self.a4.clone() * x1.clone() + self.a6.times(2) - self.a3.clone() * y1.clone()) * d;
            (l, nu)
        };
        let x3 = l.clone() * l.clone() + self.a1.clone() * l.clone() - self.a2.clone() - x1.clone() - x2.clone();
        let y3 = -(l + self.a1.clone()) * x3.clone() - nu - self.a3.clone();
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, n: u64, pt: &Point<F>) -> Point<F> {
        let mut acc = Point::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Order of a point, searched up to `bound`.
    pub fn order_of(&self, pt: &Point<F>, bound: u64) -> Option<u64> {
        let mut cur = pt.clone();
        for n in 1..=bound {
            if cur == Point::Infinity {
                return Some(n);
            }
            cur = self.add(&cur, pt);
        }
        None
    }
}

/// A point over `F_p`.
pub type FpPoint = Point<Fp>;

/// Largest prime accepted by the exhaustive `F_p` routines.
pub const FP_ENUMERATION_LIMIT: u64 = 1_000_000;

impl Curve<Fp> {
    fn prime(&self) -> u64 {
        self.a1.p()
    }

    /// Reduction of `y^2 = x^3 + a x + b` modulo `p`.
    pub fn short_mod(a: i128, b: i128, p: u64) -> Self {
        let z = Fp::new(0, p);
        Curve::new(z, z, z, Fp::new(a, p), Fp::new(b, p))
    }

    pub fn medium_mod(a2: i128, a4: i128, a6: i128, p: u64) -> Self {
        let z = Fp::new(0, p);
        Curve::new(z, Fp::new(a2, p), z, Fp::new(a4, p), Fp::new(a6, p))
    }

    /// `(a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)`, whose square roots give `2y + a1 x + a3`.
    fn disc_at(&self, x: Fp) -> Fp {
        let t = self.a1 * x + self.a3;
        t * t + (x.pow_u(3) + self.a2 * x * x + self.a4 * x + self.a6).times(4)
    }

    /// Number of points including infinity.
    pub fn order(&self) -> u64 {
        let p = self.prime();
        let s: i64 = (0..p).map(|x| legendre(self.disc_at(Fp::new(x as i128, p)).value() as i128, p) as i64).sum();
        (p as i64 + 1 + s) as u64
    }

    pub fn points(&self) -> Vec<FpPoint> {
        let p = self.prime();
        let half = Fp::new(1, p).constant(1, 2);
        let mut out = vec![Point::Infinity];
        for xv in 0..p {
            let x = Fp::new(xv as i128, p);
            let d = self.disc_at(x);
            let Some(s) = sqrt_mod_p(d.value(), p) else { continue };
            let t = self.a1 * x + self.a3;
            let s = Fp::new(s as i128, p);
            out.push(Point::Affine(x, (s - t) * half));
            if s.value() != 0 {
                out.push(Point::Affine(x, (-s - t) * half));
            }
        }
        out
    }

    /// True when the group has a point of exact order `ell` (prime).
    pub fn has_point_of_order(&self, ell: u64) -> bool {
        self.order() % ell == 0
    }

    /// True when the full `ell`-torsion is rational, i.e. `E[ell](F_p) = (Z/ell)^2`.
    pub fn has_full_torsion(&self, ell: u64) -> bool {
        if self.order() % (ell * ell) != 0 {
            return false;
        }
        let killed = self.points().iter().filter(|pt| self.mul(ell, pt) == Point::Infinity).count() as u64;
        killed == ell * ell
    }
}

/// All points of `W` reduced modulo `p` (with infinity first).
pub fn fp_group_points(w: &WeierstrassModel, p: u64) -> Result<Vec<FpPoint>> {
    require_odd_prime(p)?;
    if p > FP_ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded(format!("p = {p} exceeds the enumeration limit {FP_ENUMERATION_LIMIT}")));
    }
    let c = w.reduce_mod(p)?;
    if c.is_singular() {
        return Err(Error::SingularCurve(format!("{w} is singular modulo {p}")));
    }
    Ok(c.points())
}

/// Whether the reduction of `W` modulo `p` has a point of prime order `ell`.
pub fn has_point_of_order(w: &WeierstrassModel, p: u64, ell: u64) -> Result<bool> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    require_odd_prime(p)?;
    let c = w.reduce_mod(p)?;
    if c.is_singular() {
        return Err(Error::SingularCurve(format!("{w} is singular modulo {p}")));
    }
    Ok(c.has_point_of_order(ell))
}

/// Short model with residue coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueShort {
    pub a: ResidueInt,
    pub b: ResidueInt,
}

/// Medium model `y^2 = x^3 + a2 x^2 + a4 x + a6` with residue coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueMedium {
    pub a2: ResidueInt,
    pub a4: ResidueInt,
    pub a6: ResidueInt,
}

impl ResidueShort {
    pub fn new(a: i128, b: i128, p: u64, k: u32) -> Result<Self> {
        Ok(ResidueShort { a: ResidueInt::new(a, p, k)?, b: ResidueInt::new(b, p, k)? })
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    /// `-16 (4 a^3 + 27 b^2)`.
    pub fn disc(&self) -> ResidueInt {
        let (a, b) = (self.a, self.b);
        let t = a * a * a * a.const_like(4) + b * b * b.const_like(27);
        t * t.const_like(-16)
    }

    /// `-48 a`.
    pub fn c4(&self) -> ResidueInt {
        self.a * self.a.const_like(-48)
    }

    /// `psi_3 = 3x^4 + 6a x^2 + 12b x - a^2`, ascending.
    pub fn psi3(&self) -> Vec<ResidueInt> {
        let (a, b) = (self.a, self.b);
        let p = a.p();
        let exact = |c: i64| ResidueInt::exact(&BigInt::from(c), p);
        vec![-(a * a), b * b.const_like(12), a * a.const_like(6), exact(0), exact(3)]
    }

    /// `x^3 + a x + b` evaluated at a residue.
    pub fn rhs(&self, x: ResidueInt) -> ResidueInt {
        x * x * x + self.a * x + self.b
    }

    /// Division polynomial computed from representatives and reduced back; each
    /// coefficient is known to the precision of the data.
    pub fn division_polynomial(&self, n: u32) -> Result<Vec<ResidueInt>> {
        let k = self.a.k().min(self.b.k());
        let f = division_polynomial_short(&BigInt::from(self.a.value()), &BigInt::from(self.b.value()), n)?;
        let p = self.p();
        let mut out: Vec<ResidueInt> =
            f.coeffs().iter().map(|c| ResidueInt::with_precision(0, p, k) + residue_of(c, p, k)).collect();
        // the leading coefficient n (odd n) is exact
        if let Some(last) = out.last_mut() {
            *last = ResidueInt::exact(f.leading().expect("nonzero"), p);
        }
        Ok(out)
    }
}

fn residue_of(c: &BigInt, p: u64, k: u32) -> ResidueInt {
    ResidueInt::with_precision(reduce_bigint(c, crate::padic::pow_u64(p, k)) as i128, p, k)
}

impl ResidueMedium {
    pub fn new(a2: i128, a4: i128, a6: i128, p: u64, k: u32) -> Result<Self> {
        Ok(ResidueMedium {
            a2: ResidueInt::new(a2, p, k)?,
            a4: ResidueInt::new(a4, p, k)?,
            a6: ResidueInt::new(a6, p, k)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.a2.p()
    }

    pub fn invariants(&self) -> InvariantsOf<ResidueInt> {
        let z = self.a2.const_like(0);
        let (a2, a4, a6) = (self.a2, self.a4, self.a6);
        let b2 = a2 * a2.const_like(4);
        let b4 = a4 * a4.const_like(2);
        let b6 = a6 * a6.const_like(4);
        let b8 = a2 * a6 * a6.const_like(4) - a4 * a4;
        let c4 = b2 * b2 - b4 * b4.const_like(24);
        let c6 = -(b2 * b2 * b2) + b2 * b4 * b4.const_like(36) - b6 * b6.const_like(216);
        let disc = -(b2 * b2 * b8) - b4 * b4 * b4 * b4.const_like(8) - b6 * b6 * b6.const_like(27)
            + b2 * b4 * b6 * b6.const_like(9);
        InvariantsOf { b2, b4, b6, b8, c4, c6, disc, j_num: z, j_den: disc }
    }

    pub fn disc(&self) -> ResidueInt {
        self.invariants().disc
    }

    /// `psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8`, ascending.
    pub fn psi3(&self) -> Vec<ResidueInt> {
        let inv = self.invariants();
        let three = ResidueInt::exact(&BigInt::from(3), self.p());
        vec![inv.b8, inv.b6 * inv.b6.const_like(3), inv.b4 * inv.b4.const_like(3), inv.b2, three]
    }

    pub fn rhs(&self, x: ResidueInt) -> ResidueInt {
        x * x * x + self.a2 * x * x + self.a4 * x + self.a6
    }

    /// `x -> x + r`.
    pub fn translate(&self, r: i128) -> Self {
        let (a2, a4, a6) = (self.a2, self.a4, self.a6);
        let r2 = a2.const_like(r);
        ResidueMedium {
            a2: a2 + r2 * a2.const_like(3),
            a4: a4 + a2 * r2 * a2.const_like(2) + r2 * r2 * a2.const_like(3),
            a6: a6 + a4 * r2 + a2 * r2 * r2 + r2 * r2 * r2,
        }
    }
}

impl From<ResidueShort> for ResidueMedium {
    fn from(s: ResidueShort) -> Self {
        ResidueMedium { a2: s.a.const_like(0), a4: s.a, a6: s.b }
    }
}

/// Kodaira symbols of additive reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kodaira {
    II,
    III,
    IV,
    /// `I_n^*`; `n` may be known only as a lower bound.
    IStar(Val),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IStar(Val::Exact(n)) => write!(f, "I{n}*"),
            Kodaira::IStar(v) => write!(f, "In* (n {v})"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

/// Reduction type of a model over `Z_p`, valid for every lift of the residue data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Good,
    /// `n = v(disc)` of the minimal model.
    Multiplicative { split: bool, n: Val },
    /// `tamagawa3` is set for types IV and IV* when the component group has order 3.
    Additive { kodaira: Kodaira, tamagawa3: bool },
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReductionData {
    pub kind: ReductionKind,
    /// Number of `(a, b) -> (a/p^4, b/p^6)` rescalings applied to reach a minimal model.
    pub rescalings: u32,
}

impl ReductionData {
    fn undecided(reason: &str, rescalings: u32) -> Self {
        ReductionData { kind: ReductionKind::Undecided(reason.to_string()), rescalings }
    }
}

/// Classification of a short model at `p >= 5` together with the minimal model reached.
pub fn classify_short(model: ResidueShort) -> Result<(ReductionData, ResidueShort)> {
    let p = model.p();
    require_odd_prime(p)?;
    if p == 3 {
        return Err(Error::Unsupported("use the p = 3 classification for medium models".into()));
    }
    let mut m = model;
    let mut rescalings = 0;
    loop {
        let disc = m.disc();
        let vd = disc.valuation();
        if vd == Val::Exact(0) {
            return Ok((ReductionData { kind: ReductionKind::Good, rescalings }, m));
        }
        if disc.k() == 0 {
            return Ok((ReductionData::undecided("discriminant unknown modulo p", rescalings), m));
        }
        let (va, vb) = (m.a.valuation(), m.b.valuation());
        if va == Val::Exact(0) {
            let fa = Fp::new(m.a.value() as i128, p);
            let fb = Fp::new(m.b.value() as i128, p);
            let x0 = fb.times(-3) * fa.times(2).inverse().expect("a is a unit");
            let split = legendre(x0.times(3).value() as i128, p) == 1;
            let kind = ReductionKind::Multiplicative { split, n: vd };
            return Ok((ReductionData { kind, rescalings }, m));
        }
        if va.lower() == 0 || vb.lower() == 0 {
            return Ok((ReductionData::undecided("coefficients unknown modulo p", rescalings), m));
        }
        let iv_tam = |b: ResidueInt, e: u32| {
            b.div_p_pow(e).and_then(|u| u.mod_p()).is_some_and(|u| legendre(u as i128, p) == 1)
        };
        let rows: &[(u32, Option<u32>, u32, Option<u32>, Row)] = &[
            (1, None, 1, Some(1), Row::Kod(Kodaira::II)),
            (1, Some(1), 2, None, Row::Kod(Kodaira::III)),
            (2, None, 2, Some(2), Row::IV),
            (2, Some(2), 3, Some(3), Row::IStarFromDisc),
            (2, Some(2), 4, None, Row::Kod(Kodaira::IStar(Val::Exact(0)))),
            (3, None, 3, Some(3), Row::Kod(Kodaira::IStar(Val::Exact(0)))),
            (2, Some(2), 3, None, Row::Kod(Kodaira::IStar(Val::AtLeast(0)))),
            (3, None, 4, Some(4), Row::IVStar),
            (3, Some(3), 5, None, Row::Kod(Kodaira::IIIStar)),
            (4, None, 5, Some(5), Row::Kod(Kodaira::IIStar)),
            (4, None, 6, None, Row::NonMinimal),
        ];
        let hit = rows
            .iter()
            .find(|(alo, ahi, blo, bhi, _)| va.within(*alo, *ahi) && vb.within(*blo, *bhi));
        let Some((_, _, _, _, row)) = hit else {
            return Ok((ReductionData::undecided("valuations of a and b not resolved", rescalings), m));
        };
        let (kodaira, tamagawa3) = match row {
            Row::Kod(k) => (*k, false),
            Row::IV => (Kodaira::IV, iv_tam(m.b, 2)),
            Row::IVStar => (Kodaira::IVStar, iv_tam(m.b, 4)),
            Row::IStarFromDisc => {
                let n = match vd {
                    Val::Exact(d) => Val::Exact(d.saturating_sub(6)),
                    other => Val::AtLeast(other.lower().saturating_sub(6)),
                };
                (Kodaira::IStar(n), false)
            }
            Row::NonMinimal => {
                let (Some(a), Some(b)) = (m.a.div_p_pow(4), m.b.div_p_pow(6)) else {
                    return Ok((ReductionData::undecided("rescaling exhausted the precision", rescalings), m));
                };
                m = ResidueShort { a, b };
                rescalings += 1;
                continue;
            }
        };
        let kind = ReductionKind::Additive { kodaira, tamagawa3 };
        return Ok((ReductionData { kind, rescalings }, m));
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Row {
    Kod(Kodaira),
    IV,
    IVStar,
    IStarFromDisc,
    NonMinimal,
}

/// Reduction type of `y^2 = x^3 + a x + b` over `Z_p`, `p >= 5`, from residues.
pub fn classify_reduction(model: ResidueShort) -> Result<ReductionData> {
    classify_short(model).map(|(d, _)| d)
}

/// Tate's algorithm at `p = 3` for medium models. Returns the data and the
/// minimal model in the normal form reached by the algorithm.
pub fn classify_medium_p3(model: ResidueMedium) -> Result<(ReductionData, ResidueMedium)> {
    if model.p() != 3 {
        return Err(Error::InvalidInput("the p = 3 classification needs residues modulo powers of 3".into()));
    }
    let mut m = model;
    let mut rescalings = 0;
    let undecided = |why: &str, r: u32, m: ResidueMedium| Ok((ReductionData::undecided(why, r), m));
    loop {
        let disc = m.disc();
        let vd = disc.valuation();
        if vd == Val::Exact(0) {
            return Ok((ReductionData { kind: ReductionKind::Good, rescalings }, m));
        }
        if disc.k() == 0 || m.a2.k() == 0 || m.a4.k() == 0 || m.a6.k() == 0 {
            return undecided("coefficients unknown modulo 3", rescalings, m);
        }
        // move the singular point to x = 0
        let (c2, c4, c6) = (m.a2.value() % 3, m.a4.value() % 3, m.a6.value() % 3);
        let Some(x0) = (0..3u64).find(|&x| {
            (x * x * x + c2 * x * x + c4 * x + c6) % 3 == 0 && (2 * c2 * x + c4) % 3 == 0
        }) else {
            return undecided("no singular point found modulo 3", rescalings, m);
        };
        m = m.translate(x0 as i128);
        if m.a2.value() % 3 != 0 {
            let split = m.a2.value() % 3 == 1;
            let kind = ReductionKind::Multiplicative { split, n: vd };
            return Ok((ReductionData { kind, rescalings }, m));
        }
        let additive = |kodaira: Kodaira, tamagawa3: bool, r: u32, m: ResidueMedium| {
            Ok((ReductionData { kind: ReductionKind::Additive { kodaira, tamagawa3 }, rescalings: r }, m))
        };
        let v6 = m.a6.valuation();
        if v6 == Val::Exact(1) {
            return additive(Kodaira::II, false, rescalings, m);
        }
        if v6.lower() < 2 {
            return undecided("a6 not resolved modulo 9", rescalings, m);
        }
        let b8 = m.a2 * m.a6 * m.a2.const_like(4) - m.a4 * m.a4;
        match b8.valuation() {
            Val::Exact(v) if v < 3 => return additive(Kodaira::III, false, rescalings, m),
            v if v.lower() >= 3 => {}
            _ => return undecided("b8 not resolved modulo 27", rescalings, m),
        }
        if v6 == Val::Exact(2) {
            let t = m.a6.div_p_pow(2).and_then(|u| u.mod_p()) == Some(1);
            return additive(Kodaira::IV, t, rescalings, m);
        }
        if v6.lower() < 3 {
            return undecided("a6 not resolved modulo 27", rescalings, m);
        }
        // 3 | a2, 9 | a4, 27 | a6: study T^3 + a2/3 T^2 + a4/9 T + a6/27 modulo 3
        let (Some(p2), Some(p4), Some(p6)) = (
            m.a2.div_p_pow(1).and_then(|x| x.mod_p()),
            m.a4.div_p_pow(2).and_then(|x| x.mod_p()),
            m.a6.div_p_pow(3).and_then(|x| x.mod_p()),
        ) else {
            return undecided("cubic for type I0* not resolved", rescalings, m);
        };
        let (al, be, ga) = (p2 as i64, p4 as i64, p6 as i64);
        let disc_t = (al * al * be * be + 2 * be * be * be + 2 * al * al * al * ga).rem_euclid(3);
        if disc_t != 0 {
            return additive(Kodaira::IStar(Val::Exact(0)), false, rescalings, m);
        }
        if al != 0 || be != 0 {
            let n = match vd {
                Val::Exact(d) => Val::Exact(d.saturating_sub(6)),
                other => Val::AtLeast(other.lower().saturating_sub(6)),
            };
            return additive(Kodaira::IStar(n), false, rescalings, m);
        }
        // triple root t = -a6/27 mod 3; move it to 0
        let t = (3 - p6 % 3) % 3;
        m = m.translate(3 * t as i128);
        let v6 = m.a6.valuation();
        if v6 == Val::Exact(4) {
            let tam = m.a6.div_p_pow(4).and_then(|u| u.mod_p()) == Some(1);
            return additive(Kodaira::IVStar, tam, rescalings, m);
        }
        if v6.lower() < 5 {
            return undecided("a6 not resolved modulo 3^5", rescalings, m);
        }
        match m.a4.valuation() {
            Val::Exact(3) => return additive(Kodaira::IIIStar, false, rescalings, m),
            v if v.lower() >= 4 => {}
            _ => return undecided("a4 not resolved modulo 3^4", rescalings, m),
        }
        let v6 = m.a6.valuation();
        if v6 == Val::Exact(5) {
            return additive(Kodaira::IIStar, false, rescalings, m);
        }
        if v6.lower() < 6 {
            return undecided("a6 not resolved modulo 3^6", rescalings, m);
        }
        let (Some(a2), Some(a4), Some(a6)) = (m.a2.div_p_pow(2), m.a4.div_p_pow(4), m.a6.div_p_pow(6)) else {
            return undecided("rescaling exhausted the precision", rescalings, m);
        };
        m = ResidueMedium { a2, a4, a6 };
        rescalings += 1;
    }
}

/// Reduction type of a medium model over `Z_3` from residues modulo `3^k`.
pub fn classify_reduction_p3(model: ResidueMedium) -> Result<ReductionData> {
    classify_medium_p3(model).map(|(d, _)| d)
}

/// Largest supported precision for residue models at `p`.
pub fn max_model_precision(p: u64) -> u32 {
    max_precision(p)
}

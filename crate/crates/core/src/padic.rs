//! Residues modulo `p^k`, valuations, Legendre symbols, Hensel lifting and
//! counting roots of polynomials in `Z_p` and `Q_p`.
//!
//! Residue data stands for the set of all integer lifts. Every answer produced
//! from residue data is either valid for every lift or reported as uncertain.

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Trial-division primality test, adequate for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Accepts odd primes only; `p = 2` gets its own error.
pub fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::PrimeTwoUnsupported);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Largest `k` with `p^k <= 2^62`, so products of residues fit in `u128`.
pub fn max_precision(p: u64) -> u32 {
    let mut k = 0;
    let mut m: u64 = 1;
    while let Some(next) = m.checked_mul(p) {
        if next > 1 << 62 {
            break;
        }
        m = next;
        k += 1;
    }
    k
}

pub fn pow_u64(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("p^k overflows u64")
}

pub fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce_i128(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn reduce_bigint(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

/// Legendre symbol `(a/p)` for an odd prime `p`, computed by Euler's criterion.
pub fn legendre(a: i128, p: u64) -> i8 {
    let r = reduce_i128(a, p);
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a as i128, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(mod_pow(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z as i128, p) == -1)?;
    let mulp = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulp(t2, t2);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mulp(b, b);
        t = mulp(t, c);
        r = mulp(r, b);
    }
    Some(r)
}

/// Smallest quadratic non-residue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&z| legendre(z as i128, p) == -1).expect("odd prime has a non-residue")
}

/// A p-adic valuation that may only be known up to a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Val {
    Exact(u32),
    /// The value vanishes to the known precision `k`, so the valuation is `>= k`.
    AtLeast(u32),
    /// Valuation of the exact integer zero.
    Infinite,
}

impl Val {
    /// Smallest valuation compatible with the data.
    pub fn lower(self) -> u32 {
        match self {
            Val::Exact(v) | Val::AtLeast(v) => v,
            Val::Infinite => u32::MAX,
        }
    }

    /// Largest compatible valuation, `None` when unbounded.
    pub fn upper(self) -> Option<u32> {
        match self {
            Val::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn exact(self) -> Option<u32> {
        self.upper()
    }

    /// True when every compatible valuation lies in `[lo, hi]` (`hi = None` is unbounded).
    pub fn within(self, lo: u32, hi: Option<u32>) -> bool {
        if self.lower() < lo {
            return false;
        }
        match (hi, self.upper()) {
            (None, _) => true,
            (Some(h), Some(u)) => u <= h,
            (Some(_), None) => false,
        }
    }

    /// True when every compatible valuation lies outside `[lo, hi]`.
    pub fn excludes(self, lo: u32, hi: Option<u32>) -> bool {
        let below = self.upper().is_some_and(|u| u < lo);
        let above = hi.is_some_and(|h| self.lower() > h);
        below || above
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Exact(v) => write!(f, "{v}"),
            Val::AtLeast(v) => write!(f, ">={v}"),
            Val::Infinite => write!(f, "inf"),
        }
    }
}

/// Valuation of an exact integer.
pub fn valuation(n: &BigInt, p: u64) -> Val {
    if n.is_zero() {
        return Val::Infinite;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Val::Exact(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_u64(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// An integer known modulo `p^k`. Precision `k = 0` means no information.
///
/// Binary operations between residues of different precision truncate to the
/// smaller one.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueInt {
    value: u64,
    p: u64,
    k: u32,
    modulus: u64,
}

impl fmt::Debug for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.p, self.k)
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl ResidueInt {
    /// Residue of `value` modulo `p^k` with `1 <= k <= max_precision(p)`.
    pub fn new(value: i128, p: u64, k: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let max = max_precision(p);
        if k == 0 || k > max {
            return Err(Error::Precision { p, k, max });
        }
        Ok(Self::with_precision(value, p, k))
    }

    pub fn from_bigint(value: &BigInt, p: u64, k: u32) -> Result<Self> {
        let r = Self::new(0, p, k)?;
        Ok(Self { value: reduce_bigint(value, r.modulus), ..r })
    }

    /// Like [`ResidueInt::new`] but clamps `k` into `0..=max_precision(p)`.
    pub fn with_precision(value: i128, p: u64, k: u32) -> Self {
        let k = k.min(max_precision(p));
        let modulus = pow_u64(p, k);
        ResidueInt { value: reduce_i128(value, modulus), p, k, modulus }
    }

    /// An exact integer represented at the largest supported precision.
    pub fn exact(value: &BigInt, p: u64) -> Self {
        let k = max_precision(p);
        let modulus = pow_u64(p, k);
        ResidueInt { value: reduce_bigint(value, modulus), p, k, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Representative in `(-p^k/2, p^k/2]`.
    pub fn centered(&self) -> i128 {
        let v = self.value as i128;
        if 2 * self.value > self.modulus {
            v - self.modulus as i128
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn valuation(&self) -> Val {
        match valuation_u64(self.value, self.p) {
            Some(v) => Val::Exact(v),
            None => Val::AtLeast(self.k),
        }
    }

    /// Residue modulo `p` when known.
    pub fn mod_p(&self) -> Option<u64> {
        (self.k >= 1).then(|| self.value % self.p)
    }

    /// The same residue at a lower precision.
    pub fn truncate(&self, k: u32) -> Self {
        Self::with_precision(self.value as i128, self.p, k.min(self.k))
    }

    /// Multiplication by `p^j`, which gains `j` digits of precision.
    pub fn mul_p_pow(&self, j: u32) -> Self {
        let k = (self.k + j).min(max_precision(self.p));
        let modulus = pow_u64(self.p, k);
        let v = (self.value as u128 * pow_u64(self.p, j.min(k)) as u128 % modulus as u128) as u64;
        let v = if j > k { 0 } else { v };
        ResidueInt { value: v, p: self.p, k, modulus }
    }

    /// Division by `p^j`, losing `j` digits. `None` unless `p^j` divides the value
    /// and `j <= k`.
    pub fn div_p_pow(&self, j: u32) -> Option<Self> {
        if j > self.k {
            return None;
        }
        let d = pow_u64(self.p, j);
        if self.value % d != 0 {
            return None;
        }
        Some(Self::with_precision((self.value / d) as i128, self.p, self.k - j))
    }

    pub fn pow(&self, e: u32) -> Self {
        ResidueInt { value: mod_pow(self.value, e as u64, self.modulus), ..*self }
    }

    /// Inverse of a unit residue at the same precision.
    pub fn inverse(&self) -> Result<Self> {
        match mod_inv(self.value, self.modulus) {
            Some(v) if self.k > 0 => Ok(ResidueInt { value: v, ..*self }),
            _ => Err(Error::NotUnit(self.to_string())),
        }
    }

    /// Residue of an integer constant at the same `p` and precision.
    pub fn const_like(&self, c: i128) -> Self {
        Self::with_precision(c, self.p, self.k)
    }

    fn align(self, other: Self) -> (Self, Self) {
        assert_eq!(self.p, other.p, "residues for different primes");
        let k = self.k.min(other.k);
        (self.truncate(k), other.truncate(k))
    }
}

impl Add for ResidueInt {
    type Output = ResidueInt;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = self.align(rhs);
        let v = (a.value as u128 + b.value as u128) % a.modulus as u128;
        ResidueInt { value: v as u64, ..a }
    }
}

impl Sub for ResidueInt {
    type Output = ResidueInt;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = self.align(rhs);
        let v = (a.value as u128 + a.modulus as u128 - b.value as u128) % a.modulus as u128;
        ResidueInt { value: v as u64, ..a }
    }
}

impl Mul for ResidueInt {
    type Output = ResidueInt;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = self.align(rhs);
        let v = a.value as u128 * b.value as u128 % a.modulus as u128;
        ResidueInt { value: v as u64, ..a }
    }
}

impl Neg for ResidueInt {
    type Output = ResidueInt;
    fn neg(self) -> Self {
        let v = if self.value == 0 { 0 } else { self.modulus - self.value };
        ResidueInt { value: v, ..self }
    }
}

/// Whether a residue is a square in `Z_p` for every lift; `None` when the data
/// does not decide it.
pub fn is_square_zp(x: &ResidueInt) -> Option<bool> {
    match x.valuation() {
        Val::Exact(v) if v % 2 == 1 => Some(false),
        Val::Exact(v) => {
            let u = x.div_p_pow(v)?.mod_p()?;
            Some(legendre(u as i128, x.p()) == 1)
        }
        _ => None,
    }
}

/// Tests whether the unit `u` is a p-th power modulo `p^2`, i.e. `u^(p-1) = 1 mod p^2`.
pub fn is_pth_power_unit_mod_p2(u: i128, p: u64) -> Result<bool> {
    if reduce_i128(u, p) == 0 {
        return Err(Error::NotUnit(u.to_string()));
    }
    let m = p * p;
    Ok(mod_pow(reduce_i128(u, m), p - 1, m) == 1)
}

/// Lifts a simple root `x0` of `f` modulo `p` to the unique root modulo `p^k`.
pub fn hensel_lift_simple_root(f: &IntPoly, p: u64, x0: i128, k: u32) -> Result<ResidueInt> {
    let coeffs: Vec<ResidueInt> =
        f.coeffs().iter().map(|c| ResidueInt::from_bigint(c, p, k)).collect::<Result<_>>()?;
    let x = ResidueInt::new(x0, p, k)?;
    if coeffs.is_empty() {
        return Err(Error::HenselPrecondition("zero polynomial".into()));
    }
    let fx = eval_residue(&coeffs, x);
    let dfx = eval_residue(&derivative_residue(&coeffs), x);
    if fx.value() % p != 0 {
        return Err(Error::HenselPrecondition(format!("f({x0}) is not 0 mod {p}")));
    }
    if dfx.value() % p == 0 {
        return Err(Error::HenselPrecondition(format!("f'({x0}) is 0 mod {p}")));
    }
    let deriv = derivative_residue(&coeffs);
    let mut x = x;
    for _ in 0..=k {
        let step = eval_residue(&coeffs, x) * eval_residue(&deriv, x).inverse()?;
        if step.is_zero() {
            break;
        }
        x = x - step;
    }
    Ok(x)
}

pub fn eval_residue(coeffs: &[ResidueInt], x: ResidueInt) -> ResidueInt {
    coeffs.iter().rev().fold(x.const_like(0), |acc, &c| acc * x + c)
}

fn derivative_residue(coeffs: &[ResidueInt]) -> Vec<ResidueInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * c.const_like(i as i128))
        .collect()
}

/// Outcome of a root count: `count` roots were certified; when `certain` is
/// false further roots may exist beyond the available precision or budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootCount {
    pub count: usize,
    pub certain: bool,
}

/// Certified roots in `Z_p` with approximations; `complete` says whether every
/// branch of the search was resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSearch {
    pub roots: Vec<ResidueInt>,
    pub complete: bool,
}

/// Default recursion budget for residue data.
pub const RESIDUE_BUDGET: u32 = 64;

/// Finds the roots in `Z_p` of a polynomial whose coefficients are residues,
/// each with its own precision. Every reported root exists for every lift.
pub fn zp_roots(coeffs: &[ResidueInt], budget: u32) -> RootSearch {
    let mut out = RootSearch { roots: Vec::new(), complete: true };
    let Some(first) = coeffs.first() else {
        out.complete = false;
        return out;
    };
    search(coeffs.to_vec(), first.p(), 0, 0, budget, &mut out);
    out
}

fn search(f: Vec<ResidueInt>, p: u64, base: u64, depth: u32, budget: u32, out: &mut RootSearch) {
    let content = f.iter().filter_map(|c| c.valuation().exact()).min();
    let Some(c) = content else {
        out.complete = false;
        return;
    };
    if f.iter().any(|x| x.valuation().exact().is_none() && x.k() <= c) {
        out.complete = false;
        return;
    }
    let g: Vec<ResidueInt> = f.iter().map(|x| x.div_p_pow(c).expect("content divides")).collect();
    let mut fbar: Vec<u64> = g.iter().map(|x| x.value() % p).collect();
    while fbar.last() == Some(&0) {
        fbar.pop();
    }
    if fbar.len() <= 1 {
        return;
    }
    let max_k = max_precision(p);
    for r in 0..p {
        let m = multiplicity_mod_p(&fbar, r, p);
        if m == 0 {
            continue;
        }
        let approx_k = (depth + 1).min(max_k);
        let pd = if depth < max_k { pow_u64(p, depth) } else { 0 };
        let next_base =
            ((base as u128 + pd as u128 * r as u128) % pow_u64(p, approx_k) as u128) as u64;
        if m == 1 {
            out.roots.push(ResidueInt::with_precision(next_base as i128, p, approx_k));
        } else if depth + 1 >= budget || depth + 1 >= max_k {
            out.complete = false;
        } else {
            search(translate_scaled(&g, r, p), p, next_base, depth + 1, budget, out);
        }
    }
}

/// Multiplicity of `r` as a root of a polynomial over `F_p` given by `fbar`.
fn multiplicity_mod_p(fbar: &[u64], r: u64, p: u64) -> usize {
    let mut cur = fbar.to_vec();
    let mut m = 0;
    while cur.len() > 1 {
        let mut q = vec![0u64; cur.len() - 1];
        let mut acc = 0u64;
        for i in (0..cur.len()).rev() {
            acc = (acc * r + cur[i]) % p;
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if acc != 0 {
            break;
        }
        m += 1;
        cur = q;
        while cur.last() == Some(&0) {
            cur.pop();
        }
    }
    m
}

/// Coefficients of `g(r + p t)` as a polynomial in `t`. Coefficient `j` is known to
/// `min_{i >= j} k_i + j` digits.
fn translate_scaled(g: &[ResidueInt], r: u64, p: u64) -> Vec<ResidueInt> {
    let d = g.len();
    (0..d)
        .map(|j| {
            let k = g[j..].iter().map(|c| c.k()).min().unwrap_or(0);
            let m = pow_u64(p, k) as u128;
            let mut s: u128 = 0;
            let mut binom: u128 = 1;
            let mut rpow: u128 = 1 % m.max(1);
            for (i, c) in g.iter().enumerate().skip(j) {
                if i > j {
                    binom = binom * i as u128 / (i - j) as u128;
                    rpow = rpow * r as u128 % m;
                }
                s = (s + (binom % m) * rpow % m * c.value() as u128) % m;
            }
            ResidueInt::with_precision(s as i128, p, k).mul_p_pow(j as u32)
        })
        .collect()
}

/// Counts the distinct roots in `Q_p` of a polynomial given by residues.
/// Roots of negative valuation are found through the reversed polynomial.
pub fn count_qp_roots_residue(coeffs: &[ResidueInt], budget: u32) -> RootCount {
    let pos = zp_roots(coeffs, budget);
    let neg = zp_roots(&reversed_scaled(coeffs), budget);
    RootCount {
        count: pos.roots.len() + neg.roots.len(),
        certain: pos.complete && neg.complete,
    }
}

/// `t^d f(1/t)` evaluated at `t = p s`: its `Z_p`-roots are the reciprocals of
/// the roots of `f` with negative valuation.
fn reversed_scaled(coeffs: &[ResidueInt]) -> Vec<ResidueInt> {
    coeffs.iter().rev().enumerate().map(|(j, c)| c.mul_p_pow(j as u32)).collect()
}

/// Counts the distinct roots in `Q_p` of an exact integer polynomial.
///
/// The default budget is `4 (1 + v_p(disc f))` recursion levels. Exhausting the
/// budget or the working precision yields `certain = false`, never a wrong count.
pub fn count_qp_roots(f: &IntPoly, p: u64, budget: Option<u32>) -> Result<RootCount> {
    require_odd_prime(p)?;
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has every element as a root".into()));
    }
    let zeros = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    let g = IntPoly::new(f.coeffs()[zeros..].to_vec());
    let zero_root = usize::from(zeros > 0);
    if g.degree() == Some(0) {
        return Ok(RootCount { count: zero_root, certain: true });
    }
    let budget = budget.unwrap_or_else(|| default_budget(&g, p));
    let coeffs: Vec<ResidueInt> = g.coeffs().iter().map(|c| ResidueInt::exact(c, p)).collect();
    let rc = count_qp_roots_residue(&coeffs, budget);
    Ok(RootCount { count: rc.count + zero_root, ..rc })
}

fn default_budget(f: &IntPoly, p: u64) -> u32 {
    let disc = f.to_rational().discriminant();
    if disc.is_zero() {
        return 4 * (1 + max_precision(p));
    }
    let v = valuation(disc.numer(), p).lower().saturating_sub(valuation(disc.denom(), p).lower());
    4 * (1 + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i128, p: u64, k: u32) -> ResidueInt {
        ResidueInt::new(v, p, k).unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(45), 3), Val::Exact(2));
        assert_eq!(valuation(&BigInt::from(7), 5), Val::Exact(0));
        assert_eq!(valuation(&BigInt::from(0), 5), Val::Infinite);
        assert_eq!(r(0, 5, 3).valuation(), Val::AtLeast(3));
        assert_eq!(r(50, 5, 3).valuation(), Val::Exact(2));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(legendre(4, 7), 1);
        assert_eq!(legendre(21, 7), 0);
        assert_eq!(legendre(-1, 13), 1);
    }

    #[test]
    fn square_roots_mod_p() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 101] {
            for a in 0..p {
                match sqrt_mod_p(a, p) {
                    Some(s) => assert_eq!(s * s % p, a),
                    None => assert_eq!(legendre(a as i128, p), -1),
                }
            }
        }
    }

    #[test]
    fn mixed_precision_truncates() {
        let a = r(30, 5, 3);
        let b = r(7, 5, 1);
        let s = a + b;
        assert_eq!(s.k(), 1);
        assert_eq!(s.value(), 2);
        assert_eq!((a * r(2, 5, 3)).value(), 60);
        assert_eq!((-r(1, 5, 2)).value(), 24);
    }

    #[test]
    fn shifts_track_precision() {
        let a = r(7, 5, 2);
        let b = a.mul_p_pow(2);
        assert_eq!((b.value(), b.k()), (175, 4));
        let c = b.div_p_pow(2).unwrap();
        assert_eq!((c.value(), c.k()), (7, 2));
        assert!(b.div_p_pow(3).is_none());
    }

    #[test]
    fn hensel_examples() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(hensel_lift_simple_root(&f, 7, 3, 2).unwrap().value(), 10);
        let g = IntPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(hensel_lift_simple_root(&g, 5, 1, 3).unwrap().value(), 1);
        assert!(matches!(hensel_lift_simple_root(&f, 7, 2, 2), Err(Error::HenselPrecondition(_))));
        let double = IntPoly::from_i64(&[1, -2, 1]);
        assert!(matches!(
            hensel_lift_simple_root(&double, 5, 1, 3),
            Err(Error::HenselPrecondition(_))
        ));
    }

    #[test]
    fn pth_power_units() {
        assert!(is_pth_power_unit_mod_p2(1, 3).unwrap());
        assert!(!is_pth_power_unit_mod_p2(6, 5).unwrap());
        assert!(!is_pth_power_unit_mod_p2(7, 3).unwrap());
        assert!(is_pth_power_unit_mod_p2(8, 3).unwrap());
        assert!(matches!(is_pth_power_unit_mod_p2(10, 5), Err(Error::NotUnit(_))));
    }

    #[test]
    fn root_count_examples() {
        let f = IntPoly::from_i64(&[0, -1, 1]);
        assert_eq!(count_qp_roots(&f, 5, None).unwrap(), RootCount { count: 2, certain: true });
        let g = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(count_qp_roots(&g, 5, None).unwrap(), RootCount { count: 0, certain: true });
        // roots of negative valuation: 25 x^2 - 1 has roots +-1/5
        let h = IntPoly::from_i64(&[-1, 0, 25]);
        assert_eq!(count_qp_roots(&h, 5, None).unwrap(), RootCount { count: 2, certain: true });
        // clustered roots 1 and 1 + 5^3
        let c = IntPoly::from_i64(&[126, -127, 1]);
        assert_eq!(count_qp_roots(&c, 5, None).unwrap(), RootCount { count: 2, certain: true });
    }

    #[test]
    fn repeated_factor_is_uncertain() {
        let f = IntPoly::from_i64(&[1, -2, 1]);
        let rc = count_qp_roots(&f, 5, Some(6)).unwrap();
        assert!(!rc.certain);
    }

    #[test]
    fn residue_roots_respect_precision() {
        // x^2 - 25 u with u unknown beyond precision: undecided
        let coeffs = [r(0, 5, 2), r(0, 5, 2), r(1, 5, 2)];
        assert!(!zp_roots(&coeffs, RESIDUE_BUDGET).complete);
        // x^2 - 2 is decided from a single digit
        let coeffs = [r(-2, 5, 1), r(0, 5, 1), r(1, 5, 1)];
        let s = zp_roots(&coeffs, RESIDUE_BUDGET);
        assert!(s.complete && s.roots.is_empty());
    }

    #[test]
    fn squares_in_zp() {
        assert_eq!(is_square_zp(&r(4, 5, 3)), Some(true));
        assert_eq!(is_square_zp(&r(2, 5, 3)), Some(false));
        assert_eq!(is_square_zp(&r(5, 5, 3)), Some(false));
        assert_eq!(is_square_zp(&r(25 * 4, 5, 2)), None);
        assert_eq!(is_square_zp(&r(25 * 4, 5, 3)), Some(true));
    }
}

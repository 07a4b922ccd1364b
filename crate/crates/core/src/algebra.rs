//! Coefficient rings shared by the curve and parametrization code: exact
//! rationals, prime fields, p-adic residues and symbolic multivariate
//! polynomials.

use crate::padic::{mod_inv, mod_pow, reduce_i128, ResidueInt};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A commutative ring whose elements know how to build constants of their own kind.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// The constant `num/den` in the ring of `self`. Panics when `den` is not invertible.
    fn constant(&self, num: i64, den: i64) -> Self;

    fn zero_like(&self) -> Self {
        self.constant(0, 1)
    }

    fn one_like(&self) -> Self {
        self.constant(1, 1)
    }

    fn is_zero_elem(&self) -> bool {
        *self == self.zero_like()
    }

    fn pow_u(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplication by an integer constant.
    fn times(&self, c: i64) -> Self {
        self.clone() * self.constant(c, 1)
    }
}

/// A ring in which nonzero elements can be inverted.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Ring for BigRational {
    fn constant(&self, num: i64, den: i64) -> Self {
        rat(num, den)
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Ring for ResidueInt {
    fn constant(&self, num: i64, den: i64) -> Self {
        let n = ResidueInt::with_precision(num as i128, self.p(), self.k());
        let d = ResidueInt::with_precision(den as i128, self.p(), self.k());
        n * d.inverse().expect("denominator is a p-adic unit")
    }
}

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl Fp {
    pub fn new(v: i128, p: u64) -> Self {
        Fp { v: reduce_i128(v, p), p }
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        Fp { v: (self.v + rhs.v) % self.p, p: self.p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        Fp { v: (self.v + self.p - rhs.v) % self.p, p: self.p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp { v: ((self.v as u128 * rhs.v as u128) % self.p as u128) as u64, p: self.p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
}

impl Ring for Fp {
    fn constant(&self, num: i64, den: i64) -> Self {
        let d = mod_inv(reduce_i128(den as i128, self.p), self.p).expect("denominator invertible mod p");
        Fp::new(num as i128, self.p) * Fp { v: d, p: self.p }
    }

    fn pow_u(&self, e: u32) -> Self {
        Fp { v: mod_pow(self.v, e as u64, self.p), p: self.p }
    }
}

impl Field for Fp {
    fn inverse(&self) -> Option<Self> {
        mod_inv(self.v, self.p).map(|v| Fp { v, p: self.p })
    }
}

/// A polynomial in a fixed number of variables with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant_in(nvars: usize, c: BigRational) -> Self {
        let mut m = MPoly::zero(nvars);
        if !c.is_zero() {
            m.terms.insert(vec![0; nvars], c);
        }
        m
    }

    /// The variable with index `i`.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut m = MPoly::zero(nvars);
        m.terms.insert(e, BigRational::one());
        m
    }

    /// `nvars` variables at once.
    pub fn vars(nvars: usize) -> Vec<Self> {
        (0..nvars).map(|i| MPoly::var(i, nvars)).collect()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, e: Vec<u32>, c: BigRational) {
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert_add(e2, c * int(e[i] as i64));
        }
        out
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, c) in rhs.terms {
            self.insert_add(e, c);
        }
        self
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }
}

impl Ring for MPoly {
    fn constant(&self, num: i64, den: i64) -> Self {
        MPoly::constant_in(self.nvars, rat(num, den))
    }
}

/// Whether a rational is an integer whose only prime factors are 2 and 3, up to sign.
pub fn is_23_unit(x: &BigRational) -> bool {
    if x.is_zero() || !x.is_integer() {
        return false;
    }
    let mut n = x.numer().abs();
    for q in [2u32, 3] {
        let qb = BigInt::from(q);
        while (&n % &qb).is_zero() {
            n /= &qb;
        }
    }
    n.is_one()
}

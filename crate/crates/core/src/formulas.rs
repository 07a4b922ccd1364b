//! Closed-form densities and finite counts, in exact rational arithmetic.
//!
//! Every value here is a `BigRational`; nothing is approximated.

use crate::error::{Error, Result};
use crate::padic::{is_prime, legendre, require_odd_prime};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A density or count as a reduced fraction with positive denominator.
pub type ExactDensity = BigRational;

fn q(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pw(p: u64, e: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(p), e as usize))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `p^10 / (p^10 - 1)`: the factor undoing the restriction to minimal models.
pub fn minimality_factor(p: u64) -> BigRational {
    pw(p, 10) / (pw(p, 10) - BigRational::one())
}

fn require_at_least_5(p: u64) -> Result<()> {
    require_odd_prime(p)?;
    if p == 3 {
        return Err(Error::Unsupported("this formula needs p >= 5; p = 3 has its own treatment".into()));
    }
    Ok(())
}

/// Density of Weierstrass equations over `Z_p` with a nontrivial `Q_p`-rational 3-torsion point.
pub fn density_tors(p: u64) -> Result<ExactDensity> {
    require_odd_prime(p)?;
    let pq = q(p);
    Ok(match p % 3 {
        0 => frac(3, 26),
        1 => {
            let num = pw(p, 2) * (q(3) * pw(p, 6) + pw(p, 2) * q(4) - &pq * q(4) + q(4));
            let den = q(8) * (pw(p, 8) + pw(p, 6) + pw(p, 4) + pw(p, 2) + BigRational::one());
            num / den
        }
        _ => pw(p, 2) / (q(2) * (pw(p, 2) + &pq + BigRational::one())),
    })
}

/// Density of Weierstrass equations over `Z_p` whose curve has a `Q_p`-rational 3-isogeny.
pub fn density_iso(p: u64) -> Result<ExactDensity> {
    require_at_least_5(p)?;
    let s = pw(p, 4) + pw(p, 3) + pw(p, 2) + q(p) + BigRational::one();
    Ok(if p % 3 == 1 {
        (q(3) * pw(p, 4) + q(3) * pw(p, 3) + q(4) * pw(p, 2) + q(4)) / (q(4) * s)
    } else {
        (pw(p, 4) + pw(p, 3) + q(2) * pw(p, 2) + q(2)) / (q(2) * s)
    })
}

/// Contributions of each reduction type to the 3-torsion density, before the minimality factor.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityComponents {
    pub good: ExactDensity,
    pub split_mult: ExactDensity,
    pub nonsplit_mult: ExactDensity,
    pub additive: ExactDensity,
}

impl DensityComponents {
    pub fn sum(&self) -> ExactDensity {
        &self.good + &self.split_mult + &self.nonsplit_mult + &self.additive
    }

    /// The full density: the sum scaled by `p^10 / (p^10 - 1)`.
    pub fn total(&self, p: u64) -> ExactDensity {
        self.sum() * minimality_factor(p)
    }
}

/// Per-reduction-type measures of minimal equations with a 3-torsion point, `p >= 5`.
pub fn density_components(p: u64) -> Result<DensityComponents> {
    require_at_least_5(p)?;
    let p2 = pw(p, 2);
    let pm1 = q(p - 1);
    let one_mod3 = p % 3 == 1;
    let good = w3p(p)? / &p2;
    let split_mult = if one_mod3 {
        &pm1 / (q(2) * &p2)
    } else {
        &pm1 / (q(2) * &p2 * (&p2 + q(p) + BigRational::one()))
    };
    let nonsplit_mult = if one_mod3 { BigRational::zero() } else { &pm1 / (q(2) * &p2) };
    let additive = &pm1 / (q(2) * pw(p, 5)) + &pm1 / (q(2) * pw(p, 8));
    Ok(DensityComponents { good, split_mult, nonsplit_mult, additive })
}

/// Number of short Weierstrass equations over `F_p` with a nontrivial 3-torsion point.
pub fn w3p(p: u64) -> Result<ExactDensity> {
    require_at_least_5(p)?;
    Ok(if p % 3 == 1 { q(3 * p * p - 4 * p + 1) / q(8) } else { q((p - 1) * (p - 1)) / q(2) })
}

/// `int_{Z_p^2} |g^k h^m|` where `h` is a product of `n + 1` linear forms with distinct roots mod p
/// and `g` reduces to an irreducible form of degree `d > 1`.
pub fn igusa_closed_form(p: u64, k: u32, m: u32, n: u32, d: u32) -> Result<ExactDensity> {
    require_odd_prime(p)?;
    let e = (n + 1) * m + k * d;
    let nq = q(n as u64);
    let num = pw(p, e) * (pw(p, m + 2) - pw(p, m + 1) * &nq + q(p) * &nq - BigRational::one());
    let geometric: BigRational = (0..=m).map(|i| pw(p, i)).sum();
    Ok(num / ((pw(p, e + 2) - BigRational::one()) * geometric))
}

/// The four square classes of `Q_p^*`: `1`, `nu`, `p`, `nu p`, with `nu` a non-residue unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SquareClass {
    One,
    Nu,
    P,
    NuP,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [SquareClass::One, SquareClass::Nu, SquareClass::P, SquareClass::NuP];

    /// Whether the class has odd valuation.
    pub fn ramified(self) -> bool {
        matches!(self, SquareClass::P | SquareClass::NuP)
    }
}

/// Measures used to assemble the isogeny density.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaValues {
    /// Measure of the image of the twisted parametrization, per square class.
    pub eta_lambda: BTreeMap<SquareClass, ExactDensity>,
    /// Equations whose curve has exactly one, two or four rational 3-isogenies.
    pub eta1: ExactDensity,
    pub eta2: ExactDensity,
    pub eta4: ExactDensity,
}

impl EtaValues {
    pub fn sum_lambda(&self) -> ExactDensity {
        self.eta_lambda.values().sum()
    }
}

pub fn eta_values(p: u64) -> Result<EtaValues> {
    require_at_least_5(p)?;
    let one = BigRational::one();
    let base = (pw(p, 3) - pw(p, 2)) / (pw(p, 3) - &one);
    let eta_lambda: BTreeMap<_, _> = SquareClass::ALL
        .iter()
        .map(|&c| (c, if c.ramified() { &base / pw(p, 2) } else { base.clone() }))
        .collect();
    let pm1 = q(p - 1);
    let common = (pw(p, 10) - &one) * (pw(p, 3) - &one);
    let (eta2, eta4) = if p % 3 == 1 {
        let e4 = pw(p, 3) * &pm1 * (pw(p, 4) - q(3) * pw(p, 3) + q(3) * q(p) - &one) * (pw(p, 5) + &one)
            / (q(12) * &common);
        (BigRational::zero(), e4)
    } else {
        let e2 = pw(p, 3) * &pm1 * &pm1 * (pw(p, 5) + &one) * (pw(p, 3) + &one) / (q(2) * &common);
        (e2, BigRational::zero())
    };
    let total: BigRational = eta_lambda.values().sum();
    let eta1 = (total - q(4) * &eta2 - q(8) * &eta4) / q(2);
    Ok(EtaValues { eta_lambda, eta1, eta2, eta4 })
}

/// Number of matrices in `GL_2(F_ell)` with determinant `s` and trace `t`.
pub fn gamma_count(ell: u64, s: u64, t: u64) -> Result<u64> {
    require_unit(ell, s)?;
    let disc = (t as i128) * (t as i128) - 4 * s as i128;
    Ok(((ell * ell) as i64 + legendre(disc, ell) as i64 * ell as i64) as u64)
}

fn require_unit(ell: u64, s: u64) -> Result<()> {
    require_odd_prime(ell)?;
    if s % ell == 0 {
        return Err(Error::InvalidInput(format!("{s} is not a unit mod {ell}")));
    }
    Ok(())
}

/// Largest `ell` accepted by `gamma_brute_force`.
pub const GAMMA_BRUTE_FORCE_LIMIT: u64 = 13;

/// `gamma_count` by enumerating all 2x2 matrices over `F_ell`.
pub fn gamma_brute_force(ell: u64, s: u64, t: u64) -> Result<u64> {
    require_unit(ell, s)?;
    if ell > GAMMA_BRUTE_FORCE_LIMIT {
        return Err(Error::BudgetExceeded(format!("ell = {ell} exceeds {GAMMA_BRUTE_FORCE_LIMIT}")));
    }
    let (s, t) = (s % ell, t % ell);
    let mut n = 0;
    for a in 0..ell {
        for b in 0..ell {
            for c in 0..ell {
                for d in 0..ell {
                    if (a * d + ell * ell - b * c) % ell == s && (a + d) % ell == t {
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

/// Determinant-trace counts for one `ell`, keyed by `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaTable {
    pub ell: u64,
    pub entries: BTreeMap<(u64, u64), u64>,
}

impl GammaTable {
    pub fn new(ell: u64) -> Result<Self> {
        require_odd_prime(ell)?;
        let mut entries = BTreeMap::new();
        for s in 1..ell {
            for t in 0..ell {
                entries.insert((s, t), gamma_count(ell, s, t)?);
            }
        }
        Ok(GammaTable { ell, entries })
    }

    /// `sum_t gamma(s, t)`, which is `#SL_2(F_ell)` for every unit `s`.
    pub fn row_sum(&self, s: u64) -> u64 {
        self.entries.range((s, 0)..(s, self.ell)).map(|(_, v)| v).sum()
    }
}

/// Limit of the `ell`-torsion density as `p -> infinity` with `p = s mod ell`.
pub fn asymptotic_density(ell: u64, s: u64) -> Result<ExactDensity> {
    require_unit(ell, s)?;
    let base = BigRational::one() / q(ell - 1);
    Ok(if s % ell == 1 { base - BigRational::one() / q(ell * ell - 1) } else { base })
}

/// The same limit as the share `gamma(s, s + 1) / #SL_2(F_ell)`.
pub fn asymptotic_density_from_gamma(ell: u64, s: u64) -> Result<ExactDensity> {
    let g = gamma_count(ell, s % ell, (s + 1) % ell)?;
    Ok(q(g) / q(ell * ell * ell - ell))
}

/// Point counts on the level-`ell` modular covers over `F_p`, derived from counts of equations.
/// A curve with `E(F_p)[ell]` cyclic has `ell - 1` marked points of order `ell`; with full level
/// it has `ell^2 - 1` of them and `#SL_2(F_ell)` symplectic bases.
pub fn cover_counts_from_equation_counts(ell: u64, with_point: u64, with_full: u64) -> (u64, u64) {
    let x1 = (ell - 1) * (with_point - with_full) + (ell * ell - 1) * with_full;
    let xfull = (ell * ell * ell - ell) * with_full;
    (x1, xfull)
}

/// Density of `Q_p`-rational `ell`-torsion from modular cover counts `x1` (pairs of an equation and a
/// point of order `ell`) and `xfull` (pairs of an equation and a symplectic basis of `E[ell]`).
pub fn density_ell_from_cover_counts(p: u64, ell: u64, x1: u64, xfull: u64) -> Result<ExactDensity> {
    require_at_least_5(p)?;
    require_odd_prime(ell)?;
    if ell == p {
        return Err(Error::InvalidInput("ell must differ from p".into()));
    }
    let p2 = pw(p, 2);
    let pm1 = q(p - 1);
    let good = (q(x1) / q(ell - 1) - q(xfull) / q(ell * ell - 1)) / &p2;
    let split = if p % ell == 1 {
        &pm1 / (q(2) * &p2)
    } else {
        &pm1 * &pm1 / (q(2) * &p2 * (pw(p, ell as u32) - BigRational::one()))
    };
    let nonsplit = if (p + 1) % ell == 0 { &pm1 / (q(2) * &p2) } else { BigRational::zero() };
    let additive = if ell == 3 {
        &pm1 / (q(2) * pw(p, 5)) + &pm1 / (q(2) * pw(p, 8))
    } else {
        BigRational::zero()
    };
    Ok((good + split + nonsplit + additive) * minimality_factor(p))
}

/// Density of `Q_p`-rational `ell`-torsion from the number of equations over `F_p` with a point of
/// order `ell` (`with_point`, which includes those with full level) and with full level `ell` structure.
pub fn density_ell_via_counts(p: u64, ell: u64, with_point: u64, with_full: u64) -> Result<ExactDensity> {
    if with_full > with_point {
        return Err(Error::InvalidInput("full-level count exceeds point count".into()));
    }
    let (x1, xfull) = cover_counts_from_equation_counts(ell, with_point, with_full);
    density_ell_from_cover_counts(p, ell, x1, xfull)
}

/// What the count passed to `twist_probability` measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistCount {
    /// Number of `Q_p`-rational roots of the `ell`-division polynomial.
    Roots { ell: u64 },
    /// Number of `Q_p`-rational 3-isogenies.
    Isogenies,
}

/// Probability that a random quadratic twist (among the four square classes) of a curve has a
/// `Q_p`-rational point of order `ell`.
pub fn twist_probability(count: u64, mode: TwistCount, p: u64) -> Result<ExactDensity> {
    require_at_least_5(p)?;
    match mode {
        TwistCount::Roots { ell } => {
            require_odd_prime(ell)?;
            if ell == p {
                return Err(Error::InvalidInput("ell must differ from p".into()));
            }
            let half = (ell - 1) / 2;
            match count {
                0 => Ok(BigRational::zero()),
                m if m == half => Ok(frac(1, 4)),
                m if m > half => Ok(if p % ell == 1 { frac(1, 4) } else { frac(1, 2) }),
                m => Err(Error::InvalidInput(format!(
                    "{m} rational roots is impossible: a root brings its (ell - 1)/2 = {half} multiples"
                ))),
            }
        }
        TwistCount::Isogenies => match (count, p % 3) {
            (0, _) => Ok(BigRational::zero()),
            (1, _) => Ok(frac(1, 4)),
            (2, 2) => Ok(frac(1, 2)),
            (4, 1) => Ok(frac(1, 4)),
            (n, _) => Err(Error::InvalidInput(format!("{n} rational 3-isogenies is impossible for p = {p}"))),
        },
    }
}

/// Pieces of the 3-torsion density over `Q_3`.
#[derive(Clone, Debug, PartialEq)]
pub struct P3Components {
    /// Good reduction with a nonsingular torsion point.
    pub good: ExactDensity,
    /// Additive reduction with a nonsingular torsion point.
    pub additive_nonsingular: ExactDensity,
    /// Types IV and IV* with the torsion point reducing to the singular point.
    pub additive_singular: ExactDensity,
    /// Split multiplicative reduction with the torsion point reducing to the singular point.
    pub split_mult_singular: ExactDensity,
}

impl P3Components {
    pub fn sum(&self) -> ExactDensity {
        &self.good + &self.additive_nonsingular + &self.additive_singular + &self.split_mult_singular
    }

    pub fn total(&self) -> ExactDensity {
        self.sum() * minimality_factor(3)
    }
}

pub fn density_p3_components() -> P3Components {
    P3Components {
        good: frac(2, 27),
        additive_nonsingular: frac(1, 27),
        additive_singular: frac(1, 729) + frac(1, 19683),
        split_mult_singular: frac(2, 27 * 26),
    }
}

/// Checks that `p` is a prime other than 2.
pub fn validate_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    require_odd_prime(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_examples() {
        assert_eq!(density_tors(5).unwrap(), frac(25, 62));
        assert_eq!(density_tors(3).unwrap(), frac(3, 26));
        assert_eq!(density_tors(7).unwrap(), frac(17302831, 47079208));
        assert!(matches!(density_tors(2), Err(Error::PrimeTwoUnsupported)));
    }

    #[test]
    fn isogeny_examples() {
        assert_eq!(density_iso(5).unwrap(), frac(401, 781));
        assert_eq!(density_iso(7).unwrap(), frac(2108, 2801));
        assert!(density_iso(3).is_err());
        assert!(density_iso(2).is_err());
    }

    #[test]
    fn components() {
        let c = density_components(5).unwrap();
        assert_eq!(c.good, frac(8, 25));
        assert_eq!(c.additive, frac(4, 6250) + frac(4, 781250));
        for p in [5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(density_components(p).unwrap().total(p), density_tors(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn w3p_values() {
        assert_eq!(w3p(7).unwrap(), q(15));
        assert_eq!(w3p(5).unwrap(), q(8));
        assert_eq!(w3p(13).unwrap(), q(57));
    }

    #[test]
    fn igusa_values() {
        for p in [3u64, 5, 7, 11] {
            let pq = q(p);
            assert_eq!(igusa_closed_form(p, 0, 2, 0, 2).unwrap(), pw(p, 2) / (pw(p, 2) + &pq + BigRational::one()));
            let expected = pw(p, 8) * (pw(p, 4) - q(3) * pw(p, 3) + q(3) * &pq - BigRational::one())
                / ((pw(p, 10) - BigRational::one()) * (BigRational::one() + &pq + pw(p, 2)));
            assert_eq!(igusa_closed_form(p, 0, 2, 3, 2).unwrap(), expected);
            assert_eq!(igusa_closed_form(p, 0, 0, 0, 2).unwrap(), BigRational::one());
        }
        assert_eq!(igusa_closed_form(5, 0, 2, 0, 2).unwrap(), frac(25, 31));
    }

    #[test]
    fn eta_examples() {
        let e = eta_values(5).unwrap();
        assert_eq!(e.eta_lambda[&SquareClass::One], frac(25, 31));
        assert_eq!(e.eta_lambda[&SquareClass::P], frac(1, 31));
        assert_eq!(e.sum_lambda(), frac(52, 31));
        for p in [5, 7, 11, 13, 17, 19] {
            let e = eta_values(p).unwrap();
            assert_eq!(&e.eta1 + &e.eta2 + &e.eta4, density_iso(p).unwrap(), "p = {p}");
            let pm1 = q(p - 1);
            let expected = q(2) * &pm1 * (pw(p, 2) + BigRational::one()) / (pw(p, 3) - BigRational::one());
            assert_eq!(e.sum_lambda(), expected);
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_count(3, 1, 2).unwrap(), 9);
        assert_eq!(gamma_count(3, 2, 0).unwrap(), 12);
        assert_eq!(gamma_brute_force(3, 2, 0).unwrap(), 12);
        assert_eq!(GammaTable::new(3).unwrap().row_sum(1), 24);
        for ell in [3u64, 5, 7, 11] {
            let table = GammaTable::new(ell).unwrap();
            for s in 1..ell {
                assert_eq!(table.row_sum(s), ell * ell * ell - ell);
                for t in 0..ell {
                    assert_eq!(table.entries[&(s, t)], gamma_brute_force(ell, s, t).unwrap(), "ell={ell} s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn asymptotic_values() {
        assert_eq!(asymptotic_density(3, 1).unwrap(), frac(3, 8));
        assert_eq!(asymptotic_density(3, 2).unwrap(), frac(1, 2));
        assert_eq!(asymptotic_density(5, 1).unwrap(), frac(5, 24));
        for ell in [3u64, 5, 7, 11] {
            for s in 1..ell {
                assert_eq!(asymptotic_density(ell, s).unwrap(), asymptotic_density_from_gamma(ell, s).unwrap());
            }
        }
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist_probability(0, TwistCount::Isogenies, 7).unwrap(), BigRational::zero());
        assert_eq!(twist_probability(2, TwistCount::Isogenies, 5).unwrap(), frac(1, 2));
        assert_eq!(twist_probability(4, TwistCount::Isogenies, 7).unwrap(), frac(1, 4));
        assert!(twist_probability(3, TwistCount::Isogenies, 7).is_err());
        assert_eq!(twist_probability(2, TwistCount::Roots { ell: 5 }, 7).unwrap(), frac(1, 4));
        assert_eq!(twist_probability(6, TwistCount::Roots { ell: 5 }, 7).unwrap(), frac(1, 2));
        assert_eq!(twist_probability(12, TwistCount::Roots { ell: 5 }, 11).unwrap(), frac(1, 4));
        assert!(twist_probability(1, TwistCount::Roots { ell: 5 }, 7).is_err());
    }

    #[test]
    fn p3_components() {
        let c = density_p3_components();
        assert_eq!(c.good, frac(2, 27));
        assert_eq!(c.split_mult_singular, frac(2, 702));
        assert_eq!(c.total(), frac(3, 26));
    }

    #[test]
    fn cover_count_conversion_for_ell_3() {
        // p = 7: 15 equations with a 3-torsion point, 1 with full level
        let (x1, xfull) = cover_counts_from_equation_counts(3, 15, 1);
        assert_eq!((x1, xfull), (36, 24));
        assert_eq!(density_ell_from_cover_counts(7, 3, x1, xfull).unwrap(), density_tors(7).unwrap());
        assert_eq!(density_ell_via_counts(5, 3, 8, 0).unwrap(), density_tors(5).unwrap());
    }
}

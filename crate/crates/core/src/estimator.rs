//! Haar-measure estimates of decision predicates over residues, and numerical p-adic integrals.
//!
//! Models are sampled as pairs `(a, b)` for `p >= 5` and triples `(a2, a4, a6)` for `p = 3`.
//! Work is split into fixed chunks whose tallies are summed, so results do not depend on the
//! number of threads.

use crate::algebra::MPoly;
use crate::decision::{Decider, Decision, Stratum, Target, TriState};
use crate::error::{Error, Result};
use crate::padic::{pow_u64, require_odd_prime, valuation_u64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::ops::Add;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const SCHEMA_VERSION: u32 = 1;
pub const RNG_NAME: &str = "ChaCha8";
/// Samples per Monte-Carlo chunk; chunk `i` draws from stream `i` of the seeded generator.
pub const MC_CHUNK: u64 = 1 << 14;

/// Counts of yes, no and undecided answers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tally {
    pub yes: u64,
    pub no: u64,
    pub undecided: u64,
}

impl Tally {
    pub fn record(&mut self, t: TriState) {
        match t {
            TriState::Yes => self.yes += 1,
            TriState::No => self.no += 1,
            TriState::Undecided(_) => self.undecided += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.yes + self.no + self.undecided
    }
}

impl Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally { yes: self.yes + o.yes, no: self.no + o.no, undecided: self.undecided + o.undecided }
    }
}

/// Tallies split by reduction stratum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratifiedTally {
    pub by_stratum: BTreeMap<Stratum, Tally>,
}

impl StratifiedTally {
    pub fn record(&mut self, d: Decision) {
        self.by_stratum.entry(d.stratum).or_default().record(d.answer);
    }

    pub fn merge(mut self, o: StratifiedTally) -> StratifiedTally {
        for (s, t) in o.by_stratum {
            let e = self.by_stratum.entry(s).or_default();
            *e = *e + t;
        }
        self
    }

    pub fn get(&self, s: Stratum) -> Tally {
        self.by_stratum.get(&s).copied().unwrap_or_default()
    }

    pub fn overall(&self) -> Tally {
        self.by_stratum.values().fold(Tally::default(), |a, &b| a + b)
    }
}

/// Optional restriction to one reduction stratum; estimates are then conditional on it.
pub type StratumFilter = Option<Stratum>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Execution knobs shared by the estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Largest residue space enumerated exhaustively.
    pub budget: u64,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { budget: DEFAULT_BUDGET, jobs: 0 }
    }
}

impl RunOptions {
    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        if self.jobs == 0 {
            return Ok(f());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityEstimate {
    pub p: u64,
    pub k: u32,
    pub predicate: String,
    pub stratum: StratumFilter,
    pub mode: Mode,
    /// Tally over the selected stratum, or over everything.
    pub tally: Tally,
    pub strata: StratifiedTally,
    /// `yes / total`.
    pub lower: BigRational,
    /// `(yes + undecided) / total`.
    pub upper: BigRational,
    /// Monte-Carlo only: `[lower, upper]` widened by four standard errors.
    pub confidence: Option<(BigRational, BigRational)>,
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact fraction as `"num/den"`.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl DensityEstimate {
    fn from_tallies(
        p: u64,
        k: u32,
        target: Target,
        stratum: StratumFilter,
        mode: Mode,
        strata: StratifiedTally,
    ) -> Self {
        let tally = match stratum {
            Some(s) => strata.get(s),
            None => strata.overall(),
        };
        let n = tally.total();
        let (lower, upper) =
            if n == 0 { (BigRational::zero(), BigRational::one()) } else { (ratio(tally.yes, n), ratio(tally.yes + tally.undecided, n)) };
        let confidence = match mode {
            Mode::MonteCarlo { .. } if n > 0 => {
                let var = |r: &BigRational| {
                    let x = to_f64(r);
                    x * (1.0 - x)
                };
                let sigma = (var(&lower).max(var(&upper)) / n as f64).sqrt();
                // rational upper bound on 4 sigma, rounded up to 1e-9
                let h = BigRational::new(BigInt::from((4.0 * sigma * 1e9).ceil() as u64), BigInt::from(1_000_000_000u64));
                let lo = (&lower - &h).max(BigRational::zero());
                let hi = (&upper + &h).min(BigRational::one());
                Some((lo, hi))
            }
            _ => None,
        };
        DensityEstimate { p, k, predicate: target.name(), stratum, mode, tally, strata, lower, upper, confidence }
    }

    pub fn undecided_mass(&self) -> BigRational {
        &self.upper - &self.lower
    }

    /// Midpoint of `[lower, upper]`.
    pub fn point(&self) -> f64 {
        (to_f64(&self.lower) + to_f64(&self.upper)) / 2.0
    }

    /// The interval claimed to contain the true density: exact for exhaustive runs,
    /// the widened one for Monte-Carlo runs.
    pub fn bracket(&self) -> (&BigRational, &BigRational) {
        match &self.confidence {
            Some((lo, hi)) => (lo, hi),
            None => (&self.lower, &self.upper),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let (lo, hi) = self.bracket();
        lo <= x && x <= hi
    }

    pub fn to_json(&self) -> Value {
        let (mode, seed, samples) = match self.mode {
            Mode::Exhaustive => ("exhaustive", None, None),
            Mode::MonteCarlo { samples, seed } => ("monte_carlo", Some(seed), Some(samples)),
        };
        let strata: serde_json::Map<String, Value> = self
            .strata
            .by_stratum
            .iter()
            .map(|(s, t)| (s.name().to_string(), json!({"yes": t.yes, "no": t.no, "undecided": t.undecided})))
            .collect();
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "version": env!("CARGO_PKG_VERSION"),
            "p": self.p,
            "k": self.k,
            "predicate": self.predicate,
            "mode": mode,
            "seed": seed,
            "samples": samples,
            "rng": seed.map(|_| RNG_NAME),
            "stratum": self.stratum.map(|s| s.name()),
            "yes": self.tally.yes,
            "no": self.tally.no,
            "undecided": self.tally.undecided,
            "total": self.tally.total(),
            "lower": ratio_string(&self.lower),
            "upper": ratio_string(&self.upper),
            "strata": strata,
        });
        if let Some((lo, hi)) = &self.confidence {
            v["confidence_lower"] = json!(ratio_string(lo));
            v["confidence_upper"] = json!(ratio_string(hi));
        }
        v
    }
}

fn decider_with_table(target: Target, p: u64) -> Result<Decider> {
    Ok(Decider::new(target, p)?.with_order_table())
}

fn check_precision(p: u64, k: u32) -> Result<u64> {
    require_odd_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidInput("precision k must be at least 1".into()));
    }
    let max = crate::padic::max_precision(p);
    if k > max {
        return Err(Error::Precision { p, k, max });
    }
    Ok(pow_u64(p, k))
}

/// Applies the predicate to every residue model modulo `p^k`.
pub fn exhaustive_density(
    p: u64,
    k: u32,
    target: Target,
    stratum: StratumFilter,
    opts: RunOptions,
) -> Result<DensityEstimate> {
    let m = check_precision(p, k)?;
    let decider = decider_with_table(target, p)?;
    let arity = decider.arity() as u32;
    let size = (m as u128).pow(arity);
    if size > opts.budget as u128 {
        return Err(Error::BudgetExceeded(format!("{size} residue models exceed the budget {}", opts.budget)));
    }
    let strata = opts.run(|| {
        (0..m)
            .into_par_iter()
            .map(|c0| -> Result<StratifiedTally> {
                let mut t = StratifiedTally::default();
                let mut coeffs = vec![c0; arity as usize];
                let inner = m.pow(arity - 1);
                for idx in 0..inner {
                    let mut r = idx;
                    for c in coeffs.iter_mut().skip(1) {
                        *c = r % m;
                        r /= m;
                    }
                    t.record(decider.decide_residues(&coeffs, k)?);
                }
                Ok(t)
            })
            .try_reduce(StratifiedTally::default, |a, b| Ok(a.merge(b)))
    })??;
    Ok(DensityEstimate::from_tallies(p, k, target, stratum, Mode::Exhaustive, strata))
}

/// Applies the predicate to `samples` uniform residue models drawn from a seeded generator.
pub fn monte_carlo_density(
    p: u64,
    k: u32,
    samples: u64,
    seed: u64,
    target: Target,
    stratum: StratumFilter,
    opts: RunOptions,
) -> Result<DensityEstimate> {
    let m = check_precision(p, k)?;
    let decider = decider_with_table(target, p)?;
    let arity = decider.arity();
    let chunks = samples.div_ceil(MC_CHUNK);
    let strata = opts.run(|| {
        (0..chunks)
            .into_par_iter()
            .map(|i| -> Result<StratifiedTally> {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let n = MC_CHUNK.min(samples - i * MC_CHUNK);
                let mut t = StratifiedTally::default();
                let mut coeffs = vec![0u64; arity];
                for _ in 0..n {
                    for c in coeffs.iter_mut() {
                        *c = rng.gen_range(0..m);
                    }
                    t.record(decider.decide_residues(&coeffs, k)?);
                }
                Ok(t)
            })
            .try_reduce(StratifiedTally::default, |a, b| Ok(a.merge(b)))
    })??;
    Ok(DensityEstimate::from_tallies(p, k, target, stratum, Mode::MonteCarlo { samples, seed }, strata))
}

/// Truncated integral `sum_{(x, y) mod p^K} p^(-min(v(f), K)) / p^(2K)`.
///
/// The truncation only raises the integrand, so the true integral lies in
/// `[value - tail_bound, value]` with `tail_bound = p^(-K) * mu(v(f) >= K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IgusaEstimate {
    pub p: u64,
    pub precision: u32,
    pub value: BigRational,
    pub tail_bound: BigRational,
    /// Number of residue pairs modulo `p^K` on which `v(f) >= K`.
    pub boundary_count: u128,
}

impl IgusaEstimate {
    pub fn contains(&self, x: &BigRational) -> bool {
        &(&self.value - &self.tail_bound) <= x && x <= &self.value
    }
}

/// Dense bivariate polynomial modulo `m`, indexed `c[i][j]` for `x^i y^j`.
#[derive(Clone, Debug)]
struct ModPoly2 {
    c: Vec<Vec<u64>>,
    m: u64,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn shift_univariate(c: &mut [u64], s: u64, m: u64) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] = (c[j] + mulmod(s, c[j + 1], m)) % m;
        }
    }
}

impl ModPoly2 {
    /// `f(s + p X, t + p Y)`.
    fn child(&self, s: u64, t: u64, p: u64) -> ModPoly2 {
        let m = self.m;
        let mut c = self.c.clone();
        for row in c.iter_mut() {
            shift_univariate(row, t, m);
        }
        let (dx, dy) = (c.len(), c[0].len());
        for j in 0..dy {
            let mut col: Vec<u64> = (0..dx).map(|i| c[i][j]).collect();
            shift_univariate(&mut col, s, m);
            for i in 0..dx {
                c[i][j] = col[i];
            }
        }
        let mut pp = vec![1u64; dx + dy];
        for e in 1..dx + dy {
            pp[e] = mulmod(pp[e - 1], p, m);
        }
        for (i, row) in c.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = mulmod(*x, pp[i + j], m);
            }
        }
        ModPoly2 { c, m }
    }
}

struct IgusaAcc {
    /// Sum of `p^(3K - 2j - v)` over terminal classes.
    scaled: u128,
    boundary: u128,
}

fn igusa_node(g: &ModPoly2, j: u32, p: u64, big_k: u32) -> IgusaAcc {
    let val = |x: u64| valuation_u64(x, p).map_or(big_k, |v| v.min(big_k));
    let vc = val(g.c[0][0]);
    let vnc = g
        .c
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(move |&(jj, _)| i + jj > 0).map(|(_, &x)| x))
        .map(val)
        .min()
        .unwrap_or(big_k);
    let pp = |e: u32| (p as u128).pow(e);
    if vc < vnc {
        return IgusaAcc { scaled: pp(3 * big_k - 2 * j - vc), boundary: 0 };
    }
    if vc >= big_k && vnc >= big_k {
        return IgusaAcc { scaled: pp(2 * big_k - 2 * j), boundary: pp(2 * big_k - 2 * j) };
    }
    let children: Vec<(u64, u64)> = (0..p).flat_map(|s| (0..p).map(move |t| (s, t))).collect();
    let run = |&(s, t): &(u64, u64)| igusa_node(&g.child(s, t, p), j + 1, p, big_k);
    let combine = |a: IgusaAcc, b: IgusaAcc| IgusaAcc { scaled: a.scaled + b.scaled, boundary: a.boundary + b.boundary };
    let zero = || IgusaAcc { scaled: 0, boundary: 0 };
    if j == 0 {
        children.par_iter().map(run).reduce(zero, combine)
    } else {
        children.iter().map(run).fold(zero(), combine)
    }
}

/// Largest `K` accepted by `igusa_numeric`: residues fit in `u64` and `p^(3K)` in `u128`.
pub fn igusa_max_precision(p: u64) -> u32 {
    let mut k = 0;
    while (p as u128).checked_pow(3 * (k + 1)).is_some_and(|v| v < 1u128 << 120) {
        k += 1;
    }
    k.min(crate::padic::max_precision(p))
}

/// Numerical `int_{Z_p^2} |f(x, y)|_p dx dy` at precision `p^K` for a bivariate integer polynomial.
pub fn igusa_numeric(p: u64, f: &MPoly, big_k: u32) -> Result<IgusaEstimate> {
    require_odd_prime(p)?;
    if f.nvars() != 2 {
        return Err(Error::InvalidInput("the integrand must have two variables".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("the integrand must be nonzero".into()));
    }
    let max = igusa_max_precision(p);
    if big_k == 0 || big_k > max {
        return Err(Error::Precision { p, k: big_k, max });
    }
    let m = pow_u64(p, big_k);
    let deg = |i: usize| f.terms().map(|(e, _)| e[i] as usize).max().unwrap_or(0);
    let mut c = vec![vec![0u64; deg(1) + 1]; deg(0) + 1];
    for (e, coef) in f.terms() {
        if !coef.is_integer() {
            return Err(Error::InvalidInput("the integrand must have integer coefficients".into()));
        }
        let v = coef.to_integer().mod_floor(&BigInt::from(m));
        c[e[0] as usize][e[1] as usize] = v.to_u64().unwrap_or(0);
    }
    let acc = igusa_node(&ModPoly2 { c, m }, 0, p, big_k);
    let denom = BigInt::from((p as u128).pow(3 * big_k));
    let value = BigRational::new(BigInt::from(acc.scaled), denom.clone());
    let tail_bound = BigRational::new(BigInt::from(acc.boundary), denom);
    Ok(IgusaEstimate { p, precision: big_k, value, tail_bound, boundary_count: acc.boundary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    #[test]
    fn constant_predicate_is_one() {
        let e = exhaustive_density(5, 1, Target::Always, None, RunOptions::default()).unwrap();
        assert_eq!(e.lower, BigRational::one());
        assert_eq!(e.upper, BigRational::one());
        assert_eq!(e.tally.total(), 25);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = RunOptions { budget: 100, jobs: 0 };
        assert!(matches!(exhaustive_density(5, 2, Target::Always, None, opts), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn igusa_of_one_is_exact() {
        let one = MPoly::vars(2)[0].one_like();
        let e = igusa_numeric(5, &one, 3).unwrap();
        assert_eq!(e.value, BigRational::one());
        assert!(e.tail_bound.is_zero());
    }

    #[test]
    fn igusa_of_a_variable() {
        // int |x| = (1 - 1/p) / (1 - 1/p^2) = p / (p + 1)
        let x = MPoly::vars(2)[0].clone();
        let e = igusa_numeric(7, &x, 4).unwrap();
        assert!(e.contains(&ratio(7, 8)));
    }

    #[test]
    fn json_has_versions_and_string_ratios() {
        let e = exhaustive_density(5, 1, Target::Always, None, RunOptions::default()).unwrap();
        let v = e.to_json();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["lower"], "1/1");
        assert_eq!(v["mode"], "exhaustive");
    }
}

//! Tri-state predicates on curves given by residues modulo `p^k`.
//!
//! A residue model stands for every integer lift. A predicate answers yes or no
//! only when the answer is the same for all lifts, and undecided otherwise.

use crate::elliptic::{
    classify_medium_p3, classify_short, division_polynomial_short, Curve, ReductionData, ReductionKind,
    ResidueMedium, ResidueShort,
};
use crate::error::{Error, Result};
use crate::padic::{
    count_qp_roots_residue, is_prime, is_pth_power_unit_mod_p2, is_square_zp, pow_u64, reduce_bigint,
    require_odd_prime, zp_roots, ResidueInt, Val, RESIDUE_BUDGET,
};
use num_bigint::BigInt;
use std::fmt;
use std::str::FromStr;

/// Why a predicate could not decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UndecidedReason {
    /// Every coefficient is zero to the given precision, so the lifts include singular curves.
    DiscVanishesAtPrecision,
    /// A valuation needed by the case analysis is beyond the precision.
    ValuationUnresolved,
    /// The root search ran out of precision or recursion budget.
    RootBudget,
}

impl fmt::Display for UndecidedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UndecidedReason::DiscVanishesAtPrecision => "discriminant vanishes at precision",
            UndecidedReason::ValuationUnresolved => "valuation unresolved",
            UndecidedReason::RootBudget => "root budget",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Undecided(UndecidedReason),
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriState::No
    }

    pub fn is_decided(self) -> bool {
        !matches!(self, TriState::Undecided(_))
    }

    /// `self or other` in three-valued logic.
    pub fn or(self, other: TriState) -> TriState {
        match (self, other) {
            (TriState::Yes, _) | (_, TriState::Yes) => TriState::Yes,
            (TriState::No, TriState::No) => TriState::No,
            (TriState::Undecided(r), _) | (_, TriState::Undecided(r)) => TriState::Undecided(r),
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriState::Yes => write!(f, "yes"),
            TriState::No => write!(f, "no"),
            TriState::Undecided(r) => write!(f, "undecided ({r})"),
        }
    }
}

/// Reduction type buckets used to stratify estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    Good,
    SplitMult,
    NonsplitMult,
    Additive,
    /// The reduction type is not determined by the residues.
    Unresolved,
}

impl Stratum {
    pub const ALL: [Stratum; 5] =
        [Stratum::Good, Stratum::SplitMult, Stratum::NonsplitMult, Stratum::Additive, Stratum::Unresolved];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::Good => "good",
            Stratum::SplitMult => "split_mult",
            Stratum::NonsplitMult => "nonsplit_mult",
            Stratum::Additive => "additive",
            Stratum::Unresolved => "unresolved",
        }
    }

    pub fn of(kind: &ReductionKind) -> Stratum {
        match kind {
            ReductionKind::Good => Stratum::Good,
            ReductionKind::Multiplicative { split: true, .. } => Stratum::SplitMult,
            ReductionKind::Multiplicative { split: false, .. } => Stratum::NonsplitMult,
            ReductionKind::Additive { .. } => Stratum::Additive,
            ReductionKind::Undecided(_) => Stratum::Unresolved,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stratum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Stratum::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown stratum {s:?}")))
    }
}

/// An answer together with the reduction stratum of the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Decision {
    pub answer: TriState,
    pub stratum: Stratum,
}

/// The property being decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// A nontrivial `Q_p`-rational 3-torsion point.
    Torsion3,
    /// A `Q_p`-rational 3-isogeny.
    Isogeny3,
    /// A nontrivial `Q_p`-rational point of prime order `ell != p`.
    EllTorsion(u64),
    /// A nontrivial `Q_p`-rational point of order `p`.
    PTorsion,
    /// Constant yes; useful for checking the estimator itself.
    Always,
}

impl Target {
    pub fn name(&self) -> String {
        match self {
            Target::Torsion3 => "torsion3".into(),
            Target::Isogeny3 => "isogeny3".into(),
            Target::EllTorsion(l) => format!("torsion{l}"),
            Target::PTorsion => "ptorsion".into(),
            Target::Always => "always".into(),
        }
    }
}

/// Group orders `#E(F_p)` of all `y^2 = x^3 + a x + b` over `F_p`, indexed by `a p + b`.
#[derive(Clone, Debug)]
pub struct FpOrderTable {
    p: u64,
    orders: Vec<u32>,
}

/// Largest `p` for which `Decider::with_order_table` builds a table.
pub const ORDER_TABLE_LIMIT: u64 = 400;

impl FpOrderTable {
    pub fn new(p: u64) -> Self {
        let mut orders = Vec::with_capacity((p * p) as usize);
        for a in 0..p {
            for b in 0..p {
                orders.push(Curve::short_mod(a as i128, b as i128, p).order() as u32);
            }
        }
        FpOrderTable { p, orders }
    }

    pub fn order(&self, a: u64, b: u64) -> u64 {
        self.orders[((a % self.p) * self.p + b % self.p) as usize] as u64
    }
}

/// Decides one target at one prime, for short models (`p >= 5`) or medium models (`p = 3`).
#[derive(Clone, Debug)]
pub struct Decider {
    p: u64,
    target: Target,
    orders: Option<FpOrderTable>,
}

impl Decider {
    pub fn new(target: Target, p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        if let Target::EllTorsion(ell) = target {
            if !is_prime(ell) || ell == 2 {
                return Err(Error::InvalidInput(format!("ell = {ell} must be an odd prime")));
            }
            if ell == p {
                return Err(Error::InvalidInput("use the p-torsion target when ell = p".into()));
            }
        }
        Ok(Decider { p, target, orders: None })
    }

    /// Precomputes `#E(F_p)` for every short model when `p` is small enough.
    pub fn with_order_table(mut self) -> Self {
        if self.p > 3 && self.p <= ORDER_TABLE_LIMIT {
            self.orders = Some(FpOrderTable::new(self.p));
        }
        self
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn target(&self) -> Target {
        self.target
    }

    /// Number of coefficients of the models sampled at this prime: `(a, b)` or `(a2, a4, a6)` at 3.
    pub fn arity(&self) -> usize {
        if self.p == 3 {
            3
        } else {
            2
        }
    }

    /// Decides for the model whose coefficients are the given residues modulo `p^k`.
    pub fn decide_residues(&self, coeffs: &[u64], k: u32) -> Result<Decision> {
        if coeffs.len() != self.arity() {
            return Err(Error::InvalidInput(format!("expected {} coefficients", self.arity())));
        }
        if self.p == 3 {
            let m = ResidueMedium::new(coeffs[0] as i128, coeffs[1] as i128, coeffs[2] as i128, 3, k)?;
            self.decide_medium(m)
        } else {
            self.decide_short(ResidueShort::new(coeffs[0] as i128, coeffs[1] as i128, self.p, k)?)
        }
    }

    pub fn decide_short(&self, model: ResidueShort) -> Result<Decision> {
        if model.p() != self.p {
            return Err(Error::InvalidInput("model and decider use different primes".into()));
        }
        if self.p == 3 {
            return self.decide_medium(model.into());
        }
        let (data, m) = classify_short(model)?;
        let stratum = Stratum::of(&data.kind);
        let answer = match self.target {
            Target::Always => TriState::Yes,
            Target::Torsion3 => self.ell_torsion_by_type(3, &data, || self.order_short(&m), model.disc()),
            Target::EllTorsion(ell) => {
                self.ell_torsion_by_type(ell, &data, || self.order_short(&m), model.disc())
            }
            Target::Isogeny3 => isogeny_answer(&model.psi3(), model.disc()),
            Target::PTorsion => self.p_torsion_short(&data, &m, model.disc())?,
        };
        Ok(Decision { answer, stratum })
    }

    pub fn decide_medium(&self, model: ResidueMedium) -> Result<Decision> {
        if model.p() != 3 || self.p != 3 {
            return Err(Error::InvalidInput("medium models are decided at p = 3".into()));
        }
        let (data, m) = classify_medium_p3(model)?;
        let stratum = Stratum::of(&data.kind);
        let order = || {
            let v = |x: ResidueInt| x.value() as i128;
            Curve::medium_mod(v(m.a2), v(m.a4), v(m.a6), 3).order()
        };
        let answer = match self.target {
            Target::Always => TriState::Yes,
            Target::Torsion3 | Target::PTorsion => q3_torsion(&data, &m, model.disc()),
            Target::EllTorsion(ell) => self.ell_torsion_by_type(ell, &data, order, model.disc()),
            Target::Isogeny3 => isogeny_answer(&model.psi3(), model.disc()),
        };
        Ok(Decision { answer, stratum })
    }

    fn order_short(&self, m: &ResidueShort) -> u64 {
        let (a, b) = (m.a.value() % self.p, m.b.value() % self.p);
        match &self.orders {
            Some(t) => t.order(a, b),
            None => Curve::short_mod(a as i128, b as i128, self.p).order(),
        }
    }

    /// `ell`-torsion with `ell != p` from the reduction type: a point of order `ell` exists
    /// exactly when `ell` divides `[E(Q_p) : E_1(Q_p)]`.
    fn ell_torsion_by_type(
        &self,
        ell: u64,
        data: &ReductionData,
        order: impl FnOnce() -> u64,
        disc: ResidueInt,
    ) -> TriState {
        let p = self.p;
        match &data.kind {
            ReductionKind::Good => TriState::from_bool(order() % ell == 0),
            ReductionKind::Multiplicative { split: true, n } => {
                if (p - 1) % ell == 0 {
                    return TriState::Yes;
                }
                match n.exact() {
                    Some(n) => TriState::from_bool(n as u64 % ell == 0),
                    None => TriState::Undecided(UndecidedReason::ValuationUnresolved),
                }
            }
            ReductionKind::Multiplicative { split: false, .. } => TriState::from_bool((p + 1) % ell == 0),
            ReductionKind::Additive { tamagawa3, .. } => TriState::from_bool(ell == 3 && *tamagawa3),
            ReductionKind::Undecided(_) => TriState::Undecided(classification_reason(disc)),
        }
    }

    /// `p`-torsion for `p >= 5` on the minimal short model `m`.
    fn p_torsion_short(&self, data: &ReductionData, m: &ResidueShort, disc: ResidueInt) -> Result<TriState> {
        let p = self.p;
        Ok(match &data.kind {
            ReductionKind::Undecided(_) => TriState::Undecided(classification_reason(disc)),
            // the nonsingular part of the reduction has order p - 1 or p + 1
            ReductionKind::Multiplicative { split: false, .. } => TriState::No,
            ReductionKind::Multiplicative { split: true, n } => {
                split_mult_p_torsion(p, *n, m.disc(), m.c4())?
            }
            ReductionKind::Good if self.order_short(m) % p != 0 => TriState::No,
            // good anomalous reduction, or additive (nonsingular part of order p);
            // the component group has order at most 4, so only nonsingular points matter
            ReductionKind::Good | ReductionKind::Additive { .. } => {
                match nonsingular_p_torsion_short(m)? {
                    Some(b) => TriState::from_bool(b),
                    None => TriState::Undecided(UndecidedReason::ValuationUnresolved),
                }
            }
        })
    }
}

fn classification_reason(disc: ResidueInt) -> UndecidedReason {
    if disc.is_zero() {
        UndecidedReason::DiscVanishesAtPrecision
    } else {
        UndecidedReason::ValuationUnresolved
    }
}

fn isogeny_answer(psi3: &[ResidueInt], disc: ResidueInt) -> TriState {
    if disc.is_zero() {
        return TriState::Undecided(UndecidedReason::DiscVanishesAtPrecision);
    }
    let rc = count_qp_roots_residue(psi3, RESIDUE_BUDGET);
    if rc.count > 0 {
        TriState::Yes
    } else if rc.certain {
        TriState::No
    } else {
        TriState::Undecided(UndecidedReason::RootBudget)
    }
}

/// Split multiplicative reduction: a point of order `p` reducing to the node exists iff
/// `p | n` and the unit part of `1/j = disc / c4^3` (congruent to that of the Tate parameter
/// modulo `p^2`) is a `p`-th power.
fn split_mult_p_torsion(p: u64, n: Val, disc: ResidueInt, c4: ResidueInt) -> Result<TriState> {
    let unresolved = Ok(TriState::Undecided(UndecidedReason::ValuationUnresolved));
    let Some(n) = n.exact() else { return unresolved };
    if n as u64 % p != 0 {
        return Ok(TriState::No);
    }
    let Some(d1) = disc.div_p_pow(n) else { return unresolved };
    let w = d1 * c4.inverse()?.pow(3);
    if w.k() < 2 {
        return unresolved;
    }
    let w = (w.value() % (p * p)) as i128;
    Ok(TriState::from_bool(is_pth_power_unit_mod_p2(w, p)?))
}

/// Search modulo `p^2` for a point `(x0, y0)` on `y^2 = f(x)` that is nonsingular modulo `p`
/// with `psi_p(x0) = 0 mod p^2`. On a minimal model such a point exists iff there is a
/// `Q_p`-rational point of order `p` with nonsingular reduction.
fn nonsingular_p_torsion_search(p: u64, cubic: [u64; 4], psi: &[u64]) -> bool {
    let m = p * p;
    let eval = |c: &[u64], x: u64| c.iter().rev().fold(0u64, |acc, &ci| (acc * x + ci) % m);
    let mut roots_of: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for y in 0..m {
        roots_of[(y * y % m) as usize].push(y);
    }
    let dcubic = [cubic[1], 2 * cubic[2] % m, 3 * cubic[3] % m];
    (0..m).any(|x0| {
        if eval(psi, x0) != 0 {
            return false;
        }
        let r = eval(&cubic, x0);
        let singular_x = eval(&dcubic, x0) % p == 0;
        roots_of[r as usize].iter().any(|&y0| !(y0 % p == 0 && singular_x))
    })
}

fn mod_p2_or_none(x: ResidueInt) -> Option<u64> {
    (x.k() >= 2).then(|| x.value() % (x.p() * x.p()))
}

/// `None` when the model is not known modulo `p^2`.
fn nonsingular_p_torsion_short(m: &ResidueShort) -> Result<Option<bool>> {
    let p = m.p();
    let (Some(a), Some(b)) = (mod_p2_or_none(m.a), mod_p2_or_none(m.b)) else { return Ok(None) };
    let psi = division_polynomial_short(&BigInt::from(a), &BigInt::from(b), p as u32)?;
    let psi: Vec<u64> = psi.coeffs().iter().map(|c| reduce_bigint(c, p * p)).collect();
    Ok(Some(nonsingular_p_torsion_search(p, [b, a, 0, 1], &psi)))
}

fn nonsingular_3_torsion_medium(m: &ResidueMedium) -> Option<bool> {
    let (a2, a4, a6) = (mod_p2_or_none(m.a2)?, mod_p2_or_none(m.a4)?, mod_p2_or_none(m.a6)?);
    let (a2, a4, a6) = (a2 as i64, a4 as i64, a6 as i64);
    // psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8 with b2 = 4a2, b4 = 2a4, b6 = 4a6
    let b8 = 4 * a2 * a6 - a4 * a4;
    let psi: Vec<u64> =
        [b8, 12 * a6, 6 * a4, 4 * a2, 3].iter().map(|c| c.rem_euclid(9) as u64).collect();
    Some(nonsingular_p_torsion_search(3, [a6 as u64, a4 as u64, a2 as u64, 1], &psi))
}

/// 3-torsion over `Q_3` on the minimal medium model `m` in the normal form of the classification.
fn q3_torsion(data: &ReductionData, m: &ResidueMedium, disc: ResidueInt) -> TriState {
    let unresolved = TriState::Undecided(UndecidedReason::ValuationUnresolved);
    if let ReductionKind::Undecided(_) = data.kind {
        return TriState::Undecided(classification_reason(disc));
    }
    let nonsingular = match nonsingular_3_torsion_medium(m) {
        Some(b) => TriState::from_bool(b),
        None => unresolved,
    };
    let singular = match &data.kind {
        ReductionKind::Good | ReductionKind::Multiplicative { split: false, .. } => TriState::No,
        ReductionKind::Multiplicative { split: true, n } => {
            let c4 = m.invariants().c4;
            split_mult_p_torsion(3, *n, m.disc(), c4).unwrap_or(unresolved)
        }
        ReductionKind::Additive { kodaira: crate::elliptic::Kodaira::IV, .. } => {
            // 9 | a2 and a6 / 9 = 1 mod 3
            let a2_ok = m.a2.valuation();
            let a6_unit = m.a6.div_p_pow(2).and_then(|u| u.mod_p());
            match (a2_ok, a6_unit) {
                (v, Some(u)) if v.lower() >= 2 => TriState::from_bool(u == 1),
                (Val::Exact(v), _) if v < 2 => TriState::No,
                (_, Some(u)) if u != 1 => TriState::No,
                _ => unresolved,
            }
        }
        ReductionKind::Additive { kodaira: crate::elliptic::Kodaira::IVStar, .. } => {
            // 3^7 | a2 a6 - a4^2 and a6 / 81 = 1 mod 3
            let t = m.a2 * m.a6 - m.a4 * m.a4;
            let a6_unit = m.a6.div_p_pow(4).and_then(|u| u.mod_p());
            match (t.valuation(), a6_unit) {
                (_, Some(u)) if u != 1 => TriState::No,
                (Val::Exact(v), _) if v < 7 => TriState::No,
                (v, Some(1)) if v.lower() >= 7 => TriState::Yes,
                _ => unresolved,
            }
        }
        ReductionKind::Additive { .. } => TriState::No,
        ReductionKind::Undecided(_) => unreachable!(),
    };
    nonsingular.or(singular)
}

fn decider_for(target: Target, p: u64) -> Result<Decider> {
    Decider::new(target, p)
}

/// Whether the curve has a nontrivial `Q_p`-rational 3-torsion point.
pub fn has_qp_3torsion(model: &ResidueShort) -> Result<TriState> {
    Ok(decider_for(Target::Torsion3, model.p())?.decide_short(*model)?.answer)
}

/// Whether the curve has a nontrivial `Q_p`-rational point of prime order `ell != p`.
pub fn has_qp_ell_torsion(model: &ResidueShort, ell: u64) -> Result<TriState> {
    Ok(decider_for(Target::EllTorsion(ell), model.p())?.decide_short(*model)?.answer)
}

/// Whether the curve has a `Q_p`-rational 3-isogeny, i.e. `psi_3` has a root in `Q_p`.
pub fn has_qp_3isogeny(model: &ResidueShort) -> Result<TriState> {
    Ok(decider_for(Target::Isogeny3, model.p())?.decide_short(*model)?.answer)
}

/// Number of `Q_p`-rational 3-isogenies, or the reason it is not determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsogenyCount {
    Exact(usize),
    /// At least `found` isogenies are certified.
    Undecided { found: usize, reason: UndecidedReason },
}

/// Counts the distinct `Q_p`-roots of `psi_3`; each is the x-coordinate of a kernel.
pub fn count_qp_3isogenies(model: &ResidueShort) -> Result<IsogenyCount> {
    require_odd_prime(model.p())?;
    let psi = if model.p() == 3 { ResidueMedium::from(*model).psi3() } else { model.psi3() };
    if model.disc().is_zero() {
        return Ok(IsogenyCount::Undecided { found: 0, reason: UndecidedReason::DiscVanishesAtPrecision });
    }
    let rc = count_qp_roots_residue(&psi, RESIDUE_BUDGET);
    Ok(if rc.certain {
        IsogenyCount::Exact(rc.count)
    } else {
        IsogenyCount::Undecided { found: rc.count, reason: UndecidedReason::RootBudget }
    })
}

/// Whether `y^2 = x^3 + a2 x^2 + a4 x + a6` over `Z_3` has a nontrivial `Q_3`-rational 3-torsion point.
pub fn has_q3_3torsion(model: &ResidueMedium) -> Result<TriState> {
    Ok(decider_for(Target::Torsion3, 3)?.decide_medium(*model)?.answer)
}

/// Whether the curve has a nontrivial `Q_p`-rational point of order `p`.
pub fn has_qp_p_torsion(model: &ResidueShort) -> Result<TriState> {
    Ok(decider_for(Target::PTorsion, model.p())?.decide_short(*model)?.answer)
}

/// 3-torsion from the definition: a `Z_p`-root `x0` of `psi_3` with `x0^3 + a x0 + b` a square.
/// Points of order 3 on an integral model have integral coordinates when `p != 3`.
pub fn has_qp_3torsion_direct(model: &ResidueShort) -> Result<TriState> {
    torsion_by_roots(model, &model.psi3())
}

/// `p`-torsion for good reduction from the roots of `psi_p` and a square test on each.
pub fn has_qp_p_torsion_by_roots(model: &ResidueShort) -> Result<TriState> {
    let (data, m) = classify_short(*model)?;
    if data.kind != ReductionKind::Good {
        return Err(Error::Unsupported("the root method needs good reduction".into()));
    }
    torsion_by_roots(&m, &m.division_polynomial(m.p() as u32)?)
}

fn torsion_by_roots(model: &ResidueShort, psi: &[ResidueInt]) -> Result<TriState> {
    require_odd_prime(model.p())?;
    if model.disc().is_zero() {
        return Ok(TriState::Undecided(UndecidedReason::DiscVanishesAtPrecision));
    }
    let search = zp_roots(psi, RESIDUE_BUDGET);
    let mut answer = if search.complete { TriState::No } else { TriState::Undecided(UndecidedReason::RootBudget) };
    for x in search.roots {
        let square = match is_square_zp(&model.rhs(x)) {
            Some(s) => TriState::from_bool(s),
            None => TriState::Undecided(UndecidedReason::RootBudget),
        };
        answer = answer.or(square);
    }
    Ok(answer)
}

/// Modulus `p^k` as used by the residue constructors.
pub fn residue_modulus(p: u64, k: u32) -> u64 {
    pow_u64(p, k)
}

use ecdensity::algebra::{Ring, MPoly};
use ecdensity::decision::{Stratum, Target};
use ecdensity::estimator::*;
use ecdensity::formulas::{density_iso, density_tors, igusa_closed_form};
use num_rational::BigRational;
use num_traits::One;
use std::time::Instant;

fn width(e: &DensityEstimate) -> f64 {
    to_f64(&e.upper) - to_f64(&e.lower)
}

#[test]
fn exhaustive_brackets_torsion_density_at_5() {
    let t = Instant::now();
    let e = exhaustive_density(5, 4, Target::Torsion3, None, RunOptions::default()).unwrap();
    let d = density_tors(5).unwrap();
    eprintln!("p=5 k=4 tors: [{}, {}] width {} in {:?}", e.lower, e.upper, width(&e), t.elapsed());
    assert!(e.contains(&d));
    assert!(width(&e) <= 0.01);
}

#[test]
fn exhaustive_brackets_isogeny_density_at_7() {
    let t = Instant::now();
    let e = exhaustive_density(7, 3, Target::Isogeny3, None, RunOptions::default()).unwrap();
    let d = density_iso(7).unwrap();
    eprintln!("p=7 k=3 iso: [{}, {}] width {} in {:?}", e.lower, e.upper, width(&e), t.elapsed());
    assert!(e.contains(&d));
    assert!(width(&e) <= 0.01);
}

#[test]
fn monte_carlo_at_3() {
    let t = Instant::now();
    let e = monte_carlo_density(3, 8, 1_000_000, 20241016, Target::Torsion3, None, RunOptions::default()).unwrap();
    let d = density_tors(3).unwrap();
    eprintln!("p=3 mc: [{}, {}] point {} conf {:?} in {:?}", to_f64(&e.lower), to_f64(&e.upper), e.point(), e.confidence.as_ref().map(|(a, b)| (to_f64(a), to_f64(b))), t.elapsed());
    assert!(e.contains(&d));
    assert!((e.point() - to_f64(&d)).abs() <= 0.004);
}

#[test]
fn monte_carlo_at_11() {
    let e = monte_carlo_density(11, 3, 100_000, 7, Target::Torsion3, None, RunOptions::default()).unwrap();
    assert!(e.contains(&density_tors(11).unwrap()));
}

#[test]
fn monte_carlo_is_reproducible_and_independent_of_jobs() {
    let run = |jobs| monte_carlo_density(5, 3, 40_000, 99, Target::Torsion3, None, RunOptions { jobs, ..Default::default() }).unwrap();
    let a = run(1);
    let b = run(4);
    assert_eq!(a, b);
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
}

#[test]
fn strata_recombine() {
    let all = exhaustive_density(5, 3, Target::Torsion3, None, RunOptions::default()).unwrap();
    let mut yes = 0;
    for s in Stratum::ALL {
        let e = exhaustive_density(5, 3, Target::Torsion3, Some(s), RunOptions::default()).unwrap();
        yes += e.tally.yes;
    }
    assert_eq!(yes, all.tally.yes);
    assert_eq!(all.tally.total(), 5u64.pow(6));
}

#[test]
fn undecided_mass_shrinks_with_precision() {
    let u3 = exhaustive_density(5, 3, Target::Torsion3, None, RunOptions::default()).unwrap().undecided_mass();
    let u4 = exhaustive_density(5, 4, Target::Torsion3, None, RunOptions::default()).unwrap().undecided_mass();
    assert!(u4 < u3, "{u4} vs {u3}");
}

#[test]
fn igusa_matches_closed_forms() {
    let v = MPoly::vars(2);
    let (x, y) = (&v[0], &v[1]);
    let t = Instant::now();
    let e = igusa_numeric(5, &y.pow_u(2), 6).unwrap();
    assert!(e.contains(&igusa_closed_form(5, 0, 2, 0, 2).unwrap()), "{:?}", e);
    let octic = x.pow_u(2) * (x.clone() - y.clone()).pow_u(2) * (x.pow_u(2) + x.clone() * y.clone() + y.pow_u(2)).pow_u(2);
    let e = igusa_numeric(7, &octic, 5).unwrap();
    eprintln!("octic in {:?} bound {}", t.elapsed(), to_f64(&e.tail_bound));
    assert!(e.contains(&igusa_closed_form(7, 0, 2, 3, 2).unwrap()), "{:?}", e);
    assert_eq!(igusa_numeric(5, &x.one_like(), 2).unwrap().value, BigRational::one());
}

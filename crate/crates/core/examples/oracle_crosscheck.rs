// Cross-check the fast solvers against brute force and exact arithmetic.

use qi_core::closure::closest_superset;
use qi_core::instances;
use qi_core::lp::LpInstance;
use qi_core::nearest::{build_lp, solve_closest, Mode, NearestQuery, Norm};
use qi_core::oracle::{exhaustive_minimal_superset, rational_to_f64, solve_rational_lp, RationalLp};
use qi_core::pattern::BinaryPattern;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut checked = 0;
    for bits in 0..256u64 {
        let k = BinaryPattern::from_bits(2, 2, bits & 15)?;
        let g = BinaryPattern::from_bits(2, 2, bits >> 4)?;
        assert_eq!(closest_superset(&k, &g)?.0, exhaustive_minimal_superset(&k, &g)?);
        checked += 1;
    }
    println!("closure matches brute force on all {checked} 2x2 pairs");

    let p = instances::propagation_delays();
    let t = instances::transmission_delays();
    let query = NearestQuery::new(Mode::Set, Norm::Inf);
    let lp: LpInstance = build_lp(&t, &p, &query)?;
    let exact = solve_rational_lp(&RationalLp::from_lp(&lp)?)?;
    let float = solve_closest(&t, &p, &query)?;
    println!("set, inf-norm: exact {} = {:.9}, simplex {:.9}", exact.objective, rational_to_f64(&exact.objective), float.objective);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Nearest QI transmission delays in every mode and norm.

use qi_core::instances;
use qi_core::nearest::{minplus_superset, solve_closest, Mode, NearestQuery, Norm};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = instances::propagation_delays();
    let t = instances::transmission_delays();

    let closure = minplus_superset(&t, &p)?;
    println!("(min,+) superset, {} steps, delta:", closure.iterations);
    for row in &closure.delta {
        println!("  {row:?}");
    }

    println!("{:>6} {:>10} {:>10} {:>10}", "norm", "subset", "set", "superset");
    for norm in [Norm::One, Norm::Two, Norm::Inf] {
        let mut line = format!("{:>6}", norm.to_string());
        for mode in [Mode::Subset, Mode::Set, Mode::Superset] {
            let r = solve_closest(&t, &p, &NearestQuery::new(mode, norm))?;
            line.push_str(&format!(" {:>10.4}", r.objective));
        }
        println!("{line}");
    }

    let tied = solve_closest(&t, &p, &NearestQuery::new(Mode::Superset, Norm::Inf).with_tiebreak(true))?;
    assert_eq!(tied.t_out, closure.t_out);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Dense QI subsets by the two disconnection heuristics.

use qi_core::heuristics::{close_subset, three_hop_weights, HeuristicConfig, Method, Schedule};
use qi_core::oracle::exhaustive_maximal_subset;
use qi_core::pattern::BinaryPattern;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = BinaryPattern::from_rows(&[[1, 1, 0], [1, 1, 1], [0, 1, 1]])?;
    let g = BinaryPattern::from_rows(&[[1, 0, 0], [1, 1, 0], [0, 1, 1]])?;
    println!("three-hop weights: {:?}", three_hop_weights(&k, &g)?);

    let (_, best) = exhaustive_maximal_subset(&k, &g)?;
    println!("optimal distance: {best}");
    for method in [Method::Weights, Method::RelaxedLp] {
        for schedule in [Schedule::PerDisconnection, Schedule::PerPass] {
            let r = close_subset(&k, &g, &HeuristicConfig::new(method).with_schedule(schedule))?;
            assert!(r.z.le(&k));
            println!(
                "{method:?}/{schedule:?}: distance {}, removed {:?}",
                r.hamming_distance,
                r.removed_links.iter().map(|(a, b)| (a + 1, b + 1)).collect::<Vec<_>>()
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

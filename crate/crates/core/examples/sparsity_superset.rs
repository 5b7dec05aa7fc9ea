// Closest QI superset of a block-diagonal controller for two plants.

use qi_core::closure::{closest_superset, term_expansion};
use qi_core::instances;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = instances::block_diagonal();
    for (name, g, expected) in [
        ("plant one", instances::plant_one(), instances::superset_one()),
        ("plant two", instances::plant_two(), instances::superset_two()),
    ] {
        let (z, trace) = closest_superset(&k, &g)?;
        assert_eq!(z, expected);
        let added: Vec<String> = trace.added_links.iter().map(|(r, c)| format!("({},{})", r + 1, c + 1)).collect();
        println!("{name}: {} iterations, added {}", trace.iterations_used, added.join(" "));
        print!("{z}");
        assert_eq!(term_expansion(&k, &g, trace.iterations_used as u32)?, z);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

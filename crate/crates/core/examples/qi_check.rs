// Test quadratic invariance of a sparsity pattern and of a delay matrix.

use qi_core::delay::DelayMatrix;
use qi_core::instances;
use qi_core::qi::{is_qi_delay, is_qi_delay_reduced, is_qi_sparsity, triangle_holds};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = is_qi_sparsity(&instances::block_diagonal(), &instances::plant_one())?;
    println!("block-diagonal K under plant one: is_qi = {}", report.is_qi);
    for v in &report.violations {
        let (k, i, j, l) = v.one_based();
        println!("  K[{k}][{i}] G[{i}][{j}] K[{j}][{l}] = 1 but K[{k}][{l}] = 0");
    }

    let p = instances::propagation_delays();
    let t = instances::transmission_delays();
    let full = is_qi_delay(&t, &p)?;
    println!("reference delays: is_qi = {}, {} violations", full.is_qi, full.violations.len());

    // Metric delays with a zero diagonal admit the pairwise test p >= t.
    let t = DelayMatrix::from_rows(&[[0.0, 2.0], [1.0, 0.0]])?;
    let p = DelayMatrix::from_rows(&[[3.0, 2.0], [1.0, 3.0]])?;
    assert!(triangle_holds(&t)?.holds);
    let reduced = is_qi_delay_reduced(&t, &p)?;
    assert_eq!(reduced.is_qi, is_qi_delay(&t, &p)?.is_qi);
    println!("metric 2x2 example: is_qi = {}", reduced.is_qi);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

// Binary semiring arithmetic and the sparsity/delay correspondence.

use qi_core::delay::{delay_to_sparsity, sparsity_to_delay};
use qi_core::instances;
use qi_core::pattern::BinaryPattern;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let g = instances::plant_two();
    let k = instances::block_diagonal();

    // KGK: which controller links a three-hop path would need
    let kgk = &(&k * &g) * &k;
    println!("K G K =\n{kgk}");
    println!("K + K G K = K? {}", &k + &kgk == k);

    let squared = &g * &g;
    println!("G^2 has {} ones, G has {}", squared.nnz(), g.nnz());

    let t = sparsity_to_delay(&k, 1.0)?;
    println!("K as delays:\n{}", qi_core::text::format_delays(&t));
    let back = delay_to_sparsity(&t, 1.0)?;
    assert_eq!(back, k);

    let x = BinaryPattern::from_rows(&[[0, 1], [0, 0]])?;
    let y = BinaryPattern::from_rows(&[[1, 0], [0, 0]])?;
    println!("[[0,1],[0,0]] + [[1,0],[0,0]] =\n{}", &x + &y);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}

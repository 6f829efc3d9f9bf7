//! Distances between discrete distributions, and the index bounds implied by
//! the Bhattacharyya coefficient.

use ims_core::similarity::{
    bhattacharyya, bhattacharyya_index_bounds, euclidean_distance, example1_column, kl_divergence, LogBase, EXAMPLE1_X, EXAMPLE1_Y, EXAMPLE1_Z,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, other) in [("Y", &EXAMPLE1_Y), ("Z", &EXAMPLE1_Z)] {
        let row = example1_column(other);
        println!("X vs {name}: euclidean {:.3}, bhattacharyya {:.3}, KL {:.3}", row.euclidean, row.bhattacharyya_distance, row.kl_divergence);
    }

    // the same quantities from the generic functions
    let (rho, d_b) = bhattacharyya(&EXAMPLE1_X, &EXAMPLE1_Y)?;
    println!("rho(X, Y) = {rho:.4}, D_B = {d_b:.4}");
    println!("D(Y||X) natural = {:.4}, base 10 = {:.4}", kl_divergence(&EXAMPLE1_Y, &EXAMPLE1_X, LogBase::Natural)?, kl_divergence(&EXAMPLE1_Y, &EXAMPLE1_X, LogBase::Decimal)?);
    println!("euclidean = {:.4}", euclidean_distance(&EXAMPLE1_X, &EXAMPLE1_Y)?);

    for xi in [0.1, 0.5, 0.9] {
        let (lo, hi) = bhattacharyya_index_bounds(xi, rho)?;
        println!("xi = {xi}: index bounds [{lo:.4}, {hi:.4}]");
    }
    Ok(())
}

//! Naive and Ryser permanents, integer and complex.
use qcs_core::linops::{permanent_naive, permanent_naive_int, permanent_ryser, permanent_ryser_int, ComplexMatrix, IntMatrix};

fn main() -> qcs_core::Result<()> {
    let m = IntMatrix::from_json(include_str!("int_matrix.json"))?;
    println!("{m}");
    println!("Per (naive) = {}", permanent_naive_int(&m)?);
    println!("Per (Ryser) = {}", permanent_ryser_int(&m)?);

    let ones = IntMatrix::from_rows(vec![vec![1; 10]; 10])?;
    println!("Per(J_10) = {} (10! = 3628800)", permanent_ryser_int(&ones)?);

    let z = ComplexMatrix::from_json(include_str!("complex_matrix.json"))?;
    let (a, b) = (permanent_naive(&z)?, permanent_ryser(&z)?);
    println!("complex: naive = {a}, Ryser = {b}, |diff| = {:.2e}", (a - b).norm());
    Ok(())
}

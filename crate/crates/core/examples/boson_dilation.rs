//! Embed a matrix in a unitary and read its permanent off a Fock amplitude.
use qcs_core::linops::{encode_permanent, fock_amplitude, ComplexMatrix, FockConfig};

fn main() -> qcs_core::Result<()> {
    let u = ComplexMatrix::from_json(include_str!("two_mode_unitary.json"))?;
    let r: FockConfig = "(2,1)".parse()?;
    let r2: FockConfig = "(1,2)".parse()?;
    println!("<{r}|phi(U)|{r2}> = {}", fock_amplitude(&u, &r, &r2)?);

    let a = ComplexMatrix::from_json(include_str!("complex_matrix.json"))?;
    let e = encode_permanent(&a)?;
    println!("c = {:.6}", e.c);
    println!("unitarity defect = {:.2e}", e.unitary.unitarity_defect()?);
    println!("amplitude        = {}", e.amplitude);
    println!("c^n Per(A)       = {}", e.scaled_permanent);
    println!("relative error   = {:.2e}", e.relative_error());
    Ok(())
}

//! Parse a polynomial in both formats and count its gap.
use qcs_core::Poly3;

fn main() -> qcs_core::Result<()> {
    let f = Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3)?;
    let g = Poly3::from_json(include_str!("paper_f.json"))?;
    assert_eq!(f, g);
    println!("f = {f}");
    println!("json = {}", f.to_json());
    println!("gap (truth table) = {}", f.gap_bruteforce()?.0);
    println!("gap (pointwise)   = {}", f.gap_pointwise()?.0);
    println!("zeros = {} of {}", f.zeros_count()?, 1u64 << f.n());
    Ok(())
}

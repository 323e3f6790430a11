//! QAOA acceptance is proportional to gap^2 with a constant that depends
//! only on n.
use qcs_core::circuits::{build_qaoa, qaoa_acceptance, qaoa_kappa, teleport_gadget_column};
use qcs_core::Poly3;

fn main() -> qcs_core::Result<()> {
    for i in 0..8u128 {
        let f = Poly3::from_index(2, i)?;
        let gap = f.gap_bruteforce()?.0;
        let acc = qaoa_acceptance(&f)?;
        let ratio = if gap == 0 { f64::NAN } else { acc / (gap * gap) as f64 };
        println!("{:<16} gap = {gap:>2}  acceptance = {acc:.6}  ratio = {ratio:.6}", f.to_string());
    }
    println!("kappa(2) = {}", qaoa_kappa(2));
    let (spec, _) = build_qaoa(&Poly3::parse("x1*x2*x3", 3)?);
    println!("x1*x2*x3: {} qubits, {} constraints", spec.qubits, spec.constraint_count());
    for b in [false, true] {
        let col = teleport_gadget_column(b)?;
        println!("gadget on |{}>: [{:.4}, {:.4}]", u8::from(b), col[0], col[1]);
    }
    Ok(())
}

//! Qubit counts that make simulation take a century at 1e18 operations per
//! second, and the effect of weakening the conjecture.
use qcs_core::estimator::{
    conjecture_weakening, format_table, headline_table, EstimateParams, Model, Weakening, CENTURY_SECONDS, DEFAULT_BUDGET,
    DEFAULT_FLOPS,
};

fn main() -> qcs_core::Result<()> {
    let rows = headline_table(DEFAULT_FLOPS, CENTURY_SECONDS, DEFAULT_BUDGET, None)?;
    print!("{}", format_table(&rows));
    let p = EstimateParams::new(Model::IqpMult);
    for (mode, name) in [(Weakening::DividePrefactor, "prefactor"), (Weakening::DivideConstant, "constant")] {
        let w = conjecture_weakening(&p, 1024.0, mode)?;
        println!("iqp-mult, {name} weakened by 1024: {} -> {} qubits", w.before.q, w.after.q);
    }
    Ok(())
}

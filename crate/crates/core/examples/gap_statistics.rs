//! Moments of the normalised gap, subspace counts, the mass polynomial and
//! promise statistics.
use qcs_core::gap_stats::{count_condition_subspaces, exact_moment, mass_poly, promise_stats, sampled_moment};

fn main() -> qcs_core::Result<()> {
    for n in 1..=4 {
        let m2 = exact_moment(n, 1)?;
        let m4 = exact_moment(n, 2)?;
        println!("n = {n}: E[x^2] = {}  E[x^4] = {}", m2.exact.unwrap_or_default(), m4.exact.unwrap_or_default());
    }
    let s = sampled_moment(12, 2, 5000, 1)?;
    println!("n = 12 sampled E[x^4] = {:.3} +- {:.3}", s.value, s.std_error);
    let d3: Vec<u64> = (1..=4).map(|k| count_condition_subspaces(k, 3)).collect::<qcs_core::Result<_>>()?;
    println!("degree-3 subspace counts: {d3:?}");
    let p = mass_poly();
    println!("mass polynomial: sum of c_j = {:.6}", p.c.iter().sum::<f64>());
    let ps = promise_stats(10, 20_000, 5)?;
    println!("n = 10: yes = {:.3}, no = {:.3}, p0 = {:.3}", ps.yes, ps.no, ps.p0);
    Ok(())
}

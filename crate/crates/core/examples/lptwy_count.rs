//! Count satisfying assignments with the modular algorithm and compare with
//! brute force.
use qcs_core::lptwy::{count_ones_lptwy_report, monomial_bound_check};
use qcs_core::Poly3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qcs_core::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = Poly3::random(14, &mut rng)?;
    for t in 1..=4 {
        let r = count_ones_lptwy_report(&f, t)?;
        println!(
            "t = {t}: ones = {}, l = {}, {} monomials of degree {} over {} variables",
            r.ones, r.l, r.monomials, r.degree, r.fixed_vars
        );
    }
    println!("brute force: ones = {}", f.ones_count()?);
    let b = monomial_bound_check(100_000, 0.01)?;
    println!("monomial bound at n = 1e5, delta = 0.01: log2 M = {:.1} vs {:.1}, holds = {}", b.log2_m, b.log2_threshold, b.holds);
    Ok(())
}

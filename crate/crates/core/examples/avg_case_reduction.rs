//! Recover a gap through an oracle for randomised linear parts, and evaluate
//! the query algorithm's acceptance against its thresholds.
use qcs_core::avg_case::{find_certificate, gap_from_quasi_avg_oracle, sb_report, GapOracle, SbThresholds};
use qcs_core::Poly3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qcs_core::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = Poly3::random(10, &mut rng)?;
    let exact = gap_from_quasi_avg_oracle(&f, &mut GapOracle::Exact, &mut rng)?;
    println!("true gap = {}, recovered = {} with {} oracle calls", f.gap_bruteforce()?.0, exact.gap, exact.oracle_calls);

    let trials = 200;
    let mut ok = 0;
    for t in 0..trials {
        let mut oracle = GapOracle::corrupted(1.0 / 30.0, t)?;
        ok += usize::from(gap_from_quasi_avg_oracle(&f, &mut oracle, &mut rng)?.gap == exact.gap);
    }
    println!("corrupted oracle (rate 1/30): {ok}/{trials} successes");

    let g = Poly3::parse("x1*x2*x3", 3)?;
    println!("certificate for {g}: {:?}", find_certificate(&g)?);

    for n in [4, 6, 8] {
        let th = SbThresholds::new(n);
        let yes = sb_report(n, th.yes_gap())?;
        let no = sb_report(n, th.no_gap())?;
        println!(
            "n = {n}: ln t = {:.2}, yes gap {} -> {:.2} ({}), no gap {} -> {:.2} ({})",
            th.log_t, th.yes_gap(), yes.log_accept, yes.above_t, th.no_gap(), no.log_accept, no.below_t_over_c
        );
    }
    Ok(())
}

//! Classify promise-gap instances from output probabilities, with exact
//! probabilities and under an adversarial perturbation.
use qcs_core::circuits::{adversarial_robustness, algorithm_a, ExactProvider};
use qcs_core::gap_stats::sgap_classify;
use qcs_core::Poly3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qcs_core::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let f = Poly3::random(6, &mut rng)?;
        let label = sgap_classify(&f)?;
        let verdict = algorithm_a(&f, &mut ExactProvider)?;
        println!("gap = {:>3}  label = {label:?}  verdict = {verdict:?}", f.gap_bruteforce()?.0);
    }
    let fbar = Poly3::random(8, &mut rng)?;
    let r = adversarial_robustness(&fbar, 1e-3)?;
    println!(
        "adversary with l1 budget 1e-3: {}/{} promise instances still correct ({} flipped)",
        r.correct, r.promise_instances, r.flipped
    );
    Ok(())
}

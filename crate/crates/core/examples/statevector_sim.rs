//! Build a small circuit, read amplitudes, the distribution and samples.
use qcs_core::statevector::{Circuit, Gate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qcs_core::Result<()> {
    let mut c = Circuit::new(3);
    c.push(Gate::H(0)).push(Gate::H(1)).push(Gate::H(2));
    c.push(Gate::CCZ(0, 1, 2));
    c.push(Gate::XRot { beta: 0.3, target: 1 });
    let state = c.run()?;
    println!("circuit json: {}", c.to_json());
    println!("<000|psi> = {}", state.amplitude(0)?);
    println!("norm = {:.15}", state.norm_sqr());
    println!("distribution = {:?}", state.full_distribution()?);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    println!("samples = {:?}", state.sample_many(10, &mut rng)?);
    Ok(())
}

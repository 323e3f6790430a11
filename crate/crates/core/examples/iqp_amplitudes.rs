//! The IQP circuit of f has 2^n <0|U_f|0> = gap(f), and a single run of the
//! circuit for the cubic part yields every gap obtained by adding linear terms.
use qcs_core::circuits::{build_iqp, iqp_gap_amplitude, iqp_shifted_amplitude};
use qcs_core::Poly3;

fn main() -> qcs_core::Result<()> {
    let f = Poly3::parse("x1 + x2 + x1*x2 + x1*x2*x3", 3)?;
    let amp = iqp_gap_amplitude(&f)?;
    println!("2^n amplitude = {:.12}, gap = {}", amp.re * 8.0, f.gap_bruteforce()?.0);
    println!("shifted amplitude x 2^n = {:.12}", iqp_shifted_amplitude(&f)?.re * 8.0);

    let fbar = f.strip_linear();
    let state = build_iqp(&fbar).run()?;
    for delta in 0..8u64 {
        let g = fbar.with_linear_mask(delta)?;
        println!(
            "delta = {delta:03b}: 2^n amp = {:>5.1}, gap = {:>2}  ({g})",
            state.amplitude(delta as usize)?.re * 8.0,
            g.gap_bruteforce()?.0
        );
    }
    Ok(())
}

//! Gadget graph of a polynomial whose permanent is a known multiple of the gap.
use qcs_core::valiant::{build_graph, verify_reduction};
use qcs_core::Poly3;

fn main() -> qcs_core::Result<()> {
    for text in ["x1*x2*x3", "x1 + x2*x3", "x1 + x2 + x1*x2"] {
        let f = Poly3::parse(text, 3)?;
        let g = build_graph(&f)?;
        let r = verify_reduction(&f)?;
        println!(
            "{text:<16} nodes = {:>3}  gap = {:>2}  Per = {:>8}  expected = {:>8}  via {:?}  ok = {}",
            g.nodes, r.gap, r.perm, r.expected, r.method, r.ok
        );
    }
    Ok(())
}

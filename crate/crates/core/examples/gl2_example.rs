//! The GL₂ pair: `x = (diag(1,2), (1,1;0,1))` has a non-closed orbit, `y`
//! and the joint tuple do not.

use orbitlab::field::{FieldElement, FieldSpec};
use orbitlab::module::centralizer_algebra;
use orbitlab::orbit::{is_orbit_closed_full, verify};
use orbitlab::zoo::{gl2_x, gl2_y};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::Q;
    let a = FieldElement::from_i64(q, 2);
    let x = gl2_x(q, &a);
    let y = gl2_y(q);

    let cx = is_orbit_closed_full(&x)?;
    println!("G·x: {:?}", cx.verdict);
    if let Some(l) = &cx.destabilizer {
        println!("  destabilizer diag(t^w), w = {:?}", l.diagonal_weights());
    }
    if let Some(orbitlab::cochar::Point::ConjugationOnTuple(ms)) = &cx.limit_value {
        for m in ms {
            println!("  limit entry\n{m}");
        }
    }
    println!("  non-conjugacy: {:?}", cx.nonconjugacy);

    let cy = is_orbit_closed_full(&y)?;
    println!("G·y: {:?}", cy.verdict);
    let joint = orbitlab::module::MatrixTuple::from_entries(x.entries().iter().chain(y.entries()).cloned().collect())?;
    let cj = is_orbit_closed_full(&joint)?;
    println!("G·(x, y): {:?}", cj.verdict);
    println!("dim C(x) = {}, dim C(y) = {}", centralizer_algebra(&x).dim(), centralizer_algebra(&y).dim());

    for c in [&cx, &cy, &cj] {
        verify(c)?;
    }
    println!("all certificates re-verified");
    Ok(())
}

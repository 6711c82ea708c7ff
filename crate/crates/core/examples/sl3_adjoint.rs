//! The adjoint representation of SL₂ in characteristic 2 lands in SL₃ with
//! a fixed vector `h` whose SL₃-orbit is not closed.

use orbitlab::field::FieldSpec;
use orbitlab::module::{centralizer_algebra, is_semisimple_module};
use orbitlab::orbit::{destabilizer_search, SubgroupSpec, TorusOfSubgroup};
use orbitlab::zoo::{rho_image, sl3_fixed_vector, zoo_sl3_adjoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f4 = FieldSpec::finite(2, 2)?;
    let image = rho_image(f4);
    for g in image.entries() {
        println!("ρ(generator) =\n{g}");
    }
    println!("semisimple: {}", is_semisimple_module(&image));
    println!("dim of the centralizer algebra: {}", centralizer_algebra(&image).dim());

    let h = sl3_fixed_vector(f4);
    let cert = destabilizer_search(&h, &SubgroupSpec::FullSl, &TorusOfSubgroup::diagonal(f4, 3), 1)?;
    println!("SL₃·h: {:?}", cert.verdict);
    println!("  λ = diag(t^w), w = {:?}", cert.destabilizer.as_ref().and_then(|l| l.diagonal_weights()));
    println!("  limit {:?}", cert.limit_value.as_ref().map(|p| p.is_zero()));
    println!("  proof {:?}", cert.nonconjugacy);

    let report = zoo_sl3_adjoint();
    for r in &report.results {
        println!("{} {}", if r.passed { "ok  " } else { "FAIL" }, r.id);
    }
    Ok(())
}

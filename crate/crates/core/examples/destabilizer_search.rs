//! Bounded destabilizer search for a subgroup: `x = J_2(1) ⊕ (3)` under the
//! centralizer of `diag(1,1,2)`, over the torus of that centralizer.

use orbitlab::field::FieldSpec;
use orbitlab::matrix::Matrix;
use orbitlab::module::MatrixTuple;
use orbitlab::orbit::{destabilizer_search, torus_of_centralizer, verify, SubgroupSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::Q;
    let x = MatrixTuple::from_entries(vec![Matrix::from_i64(q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 3]])])?;
    let a = MatrixTuple::from_entries(vec![Matrix::from_i64(q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])])?;
    let torus = torus_of_centralizer(&a)?;
    println!("torus rank {}", torus.rank());
    let h = SubgroupSpec::CentralizerUnits { tuple: a };
    for bound in 1..=3 {
        let cert = destabilizer_search(&x.to_instance(), &h, &torus, bound)?;
        println!("bound {bound}: {:?}", cert.verdict);
        if let Some(l) = &cert.destabilizer {
            println!("  weights {:?} in basis\n{}", l.weights(), l.base_change());
            println!("  proof {:?}", cert.nonconjugacy);
        }
        verify(&cert)?;
    }
    Ok(())
}

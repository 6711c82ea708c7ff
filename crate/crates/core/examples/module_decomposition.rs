//! Radicals, semisimplicity, isotypic decomposition and isomorphism tests
//! for modules given by matrix tuples.

use orbitlab::field::FieldSpec;
use orbitlab::matrix::Matrix;
use orbitlab::module::{
    brute_force_semisimple, centralizer_algebra, isotypic_decomposition, is_semisimple_module, modules_isomorphic, span_algebra,
    MatrixTuple,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = FieldSpec::prime(2);
    let t = MatrixTuple::from_entries(vec![
        Matrix::from_i64(f2, &[&[1, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 0]]),
        Matrix::from_i64(f2, &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]]),
    ])?;
    let alg = span_algebra(&t);
    println!("algebra dim {}, radical dim {}", alg.dim(), alg.radical().len());
    println!("semisimple: {} (brute force: {})", is_semisimple_module(&t), brute_force_semisimple(&t)?);

    let s = MatrixTuple::from_entries(vec![t.entries()[0].clone()])?;
    let d = isotypic_decomposition(&s)?;
    for c in &d.components {
        println!("component: irreducible dim {}, multiplicity {}", c.irreducible_dim, c.multiplicity);
    }
    println!("centralizer dim {}", centralizer_algebra(&s).dim());

    let g = Matrix::from_i64(f2, &[&[1, 1, 0, 1], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 0, 0, 1]]);
    let iso = modules_isomorphic(&t, &t.conjugate(&g))?;
    println!("t ≅ g·t: {}", iso.is_isomorphic());
    let diag = MatrixTuple::from_entries(vec![t.entries()[0].clone(), Matrix::zeros(f2, 4, 4)])?;
    println!("t ≅ (t₀, 0): {:?}", modules_isomorphic(&t, &diag)?);
    Ok(())
}

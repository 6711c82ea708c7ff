//! Generic tuples: a basis of the algebra spanned by some generators, whose
//! orbit is closed exactly when the generated group is completely reducible.

use orbitlab::field::FieldSpec;
use orbitlab::matrix::Matrix;
use orbitlab::module::{generic_tuple, MatrixTuple};
use orbitlab::orbit::is_orbit_closed_full;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = FieldSpec::prime(3);
    let upper = MatrixTuple::from_entries(vec![
        Matrix::from_i64(f3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 2]]),
        Matrix::from_i64(f3, &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
    ])?;
    let mut with_lower = upper.entries().to_vec();
    with_lower.push(Matrix::from_i64(f3, &[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]));
    for (name, gens) in [("upper", upper), ("with lower", MatrixTuple::from_entries(with_lower)?)] {
        let g = generic_tuple(&gens);
        let cert = is_orbit_closed_full(&g.tuple)?;
        println!("{name}: generic tuple of length {}, words {:?}, orbit {:?}", g.tuple.len(), g.words, cert.verdict);
    }
    Ok(())
}

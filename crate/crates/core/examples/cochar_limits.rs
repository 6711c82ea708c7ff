//! Limits along cocharacters and the parabolic subgroups they define.

use orbitlab::cochar::{act_on_cocharacter, check_conjlim, limit, ActionInstance, Cocharacter};
use orbitlab::field::FieldSpec;
use orbitlab::matrix::Matrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::Q;
    let x = ActionInstance::tuple(vec![Matrix::from_i64(q, &[&[1, 5, 7], &[0, 2, 3], &[0, 0, 4]])])?;
    for w in [[2, 1, 0], [0, 1, 2], [1, 1, 0]] {
        let l = Cocharacter::diagonal(q, &w);
        let out = limit(&x, &l)?;
        println!("λ = {w:?}: exists {}, negative weights {:?}", out.exists, out.negative_support);
        if let Some(orbitlab::cochar::Point::ConjugationOnTuple(ms)) = &out.value {
            println!("{}", ms[0]);
        }
    }
    let l = Cocharacter::diagonal(q, &[2, 1, 0]);
    let u = Matrix::from_i64(q, &[&[1, 3, -1], &[0, 1, 2], &[0, 0, 1]]);
    println!("u ∈ R_u(P_λ): {}", l.ru_p_lambda_contains(&u)?);
    println!("u ∈ L_λ: {}", l.l_lambda_contains(&u)?);
    println!("lim u·λ of x equals u·(lim λ of u⁻¹·x): {}", check_conjlim(&x, &l, &u)?);
    let mu = act_on_cocharacter(&u, &l)?;
    println!("u·λ has weights {:?} in basis\n{}", mu.weights(), mu.base_change());
    Ok(())
}

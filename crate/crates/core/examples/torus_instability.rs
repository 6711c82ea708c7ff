//! Closedness and optimal destabilizers for a torus acting diagonally.
//!
//! `cargo run --example torus_instability -- '[[1,0],[0,1],[-1,2]]'`

use orbitlab::torus::{limit_along, min_norm_point, optimal_destabilizer, torus_orbit_closed, TorusPoint, WeightSupport};
use orbitlab::field::{FieldElement, FieldSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let weights: Vec<Vec<i64>> = match std::env::args().nth(1) {
        Some(text) => serde_json::from_str(&text)?,
        None => vec![vec![1, 0], vec![0, 1], vec![-1, 2]],
    };
    let rank = weights.first().map_or(1, Vec::len);
    let s = WeightSupport::new(rank, weights.clone())?;
    let cert = torus_orbit_closed(&s);
    println!("support {:?}", s.weights());
    println!("kind {:?}, normal {:?}", cert.kind, cert.normal);
    if let Some(w) = &cert.witness {
        println!("convex witness {}", w.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    }
    println!("certificate checks: {}", cert.check(&s));
    if cert.is_closed() {
        return Ok(());
    }
    let m = min_norm_point(&s);
    println!("min-norm point {}", m.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
    match optimal_destabilizer(&s) {
        Ok(w) => {
            println!("optimal destabilizer {w:?}");
            let ones = vec![FieldElement::one(FieldSpec::Q); weights.len()];
            let p = TorusPoint::new(rank, weights, ones)?;
            let lim = limit_along(&p, &w);
            println!("limit exists: {}, value is zero: {}", lim.exists, lim.value.is_some_and(|v| v.iter().all(FieldElement::is_zero)));
        }
        Err(e) => println!("no optimal destabilizer: {e}"),
    }
    Ok(())
}

//! Emits a certificate, re-verifies it, then shows that a tampered copy is
//! rejected with the inconsistency exit status.

use orbitlab::cochar::Cocharacter;
use orbitlab::field::{FieldElement, FieldSpec};
use orbitlab::orbit::{is_orbit_closed_full, verify};
use orbitlab::zoo::gl2_x;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = FieldSpec::Q;
    let cert = is_orbit_closed_full(&gl2_x(q, &FieldElement::from_i64(q, 2)))?;
    let json = serde_json::to_string(&cert)?;
    println!("{:?} certificate, {} bytes of JSON", cert.verdict, json.len());
    verify(&serde_json::from_str(&json)?)?;
    println!("round trip verified");

    let mut tampered = cert.clone();
    tampered.destabilizer = Some(Cocharacter::diagonal(q, &[-1, 1]));
    match verify(&tampered) {
        Ok(()) => println!("tampered certificate accepted (unexpected)"),
        Err(e) => println!("tampered certificate rejected, exit code {}: {e}", e.exit_code()),
    }
    Ok(())
}

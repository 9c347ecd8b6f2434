//! Building and checking optimality certificates for Euclidean matching.

use hkit::matching::{build_certificate, match_l2, verify_certificate};
use hkit::VPolytope;

fn main() -> hkit::Result<()> {
    let p = VPolytope::from_ints(&[&[0, 0], &[6, 1], &[2, 5]])?;
    let q = VPolytope::from_ints(&[&[-3, 0], &[4, -2], &[5, 4], &[-1, 6]])?;
    let m = match_l2(&p, &q, 1e-12)?;
    let (moved, cert) = build_certificate(&p, &q, &m, 1e-9)?;
    println!("rho ~ {:.9}, |R| = {}, |S| = {}", cert.rho, cert.r.len(), cert.s.len());
    for (x, y) in &cert.r {
        println!("  R: {x} -> {y}");
    }
    for (x, y) in &cert.s {
        println!("  S: {x} -> {y}");
    }
    println!("as built:      {:?}", verify_certificate(&moved, &q, &cert, 1e-6)?);
    let mut wrong = cert.clone();
    wrong.rho += 0.01;
    println!("rho too large: {:?}", verify_certificate(&moved, &q, &wrong, 1e-6)?);
    Ok(())
}

//! Optimal homotheties: exact under polytopal norms, certified accuracy under l2.

use hkit::matching::{match_l2, match_polytopal, reference_match};
use hkit::{NormSpec, Polytope, VPolytope};

fn main() -> hkit::Result<()> {
    let square = VPolytope::from_ints(&[&[-1, -1], &[1, -1], &[1, 1], &[-1, 1]])?;
    let diamond = VPolytope::from_ints(&[&[2, 0], &[0, 2], &[-2, 0], &[0, -2]])?;
    for norm in [NormSpec::L1, NormSpec::LInf] {
        let m = match_polytopal(&square, &diamond, &norm)?;
        println!("{:4} rho = {} with alpha {} c {}", norm.name(), m.value, m.homothety.alpha, m.homothety.c);
    }
    let m = match_l2(&square, &diamond, 1e-10)?;
    println!("l2   rho ~ {:.10} in [{:.10}, {:.10}], 2 - sqrt 2 = {:.10}", m.rho, m.lower_bound, m.rho, 2.0 - 2f64.sqrt());
    println!("     alpha ~ {:.8}, c ~ {:?}", m.homothety.alpha_f64(), m.homothety.c_f64());
    let r = reference_match(&Polytope::V(square), &Polytope::V(diamond))?;
    println!("bounding-box homothety: alpha {} c {}", r.alpha, r.c);
    Ok(())
}

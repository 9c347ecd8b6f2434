//! Norm maximization over a symmetric polytope as a Hausdorff distance to the origin.

use hkit::hardness::{gen_normmax_instance, NormExponent};
use hkit::hausdorff::hausdorff_oracle;
use hkit::rational::int;
use hkit::{HPolytope, NormSpec, Polytope};

fn main() -> hkit::Result<()> {
    let p = HPolytope::from_rows(2, &[(&[1, 2], 4), (&[-1, -2], 4), (&[3, -1], 6), (&[-3, 1], 6)])?;
    for (norm, exponent) in [(NormSpec::L1, NormExponent::One), (NormSpec::L2, NormExponent::Two), (NormSpec::LInf, NormExponent::Infinity)] {
        let inst = gen_normmax_instance(&p, int(5), exponent)?;
        let h = hausdorff_oracle(&Polytope::H(inst.p), &Polytope::V(inst.q), &norm)?;
        println!("max ||x||_{}^p = {} at {}; >= gamma = {}: {}", norm.name(), h.value, h.argmax_p, inst.gamma, h.value >= inst.gamma);
    }
    Ok(())
}

//! Exact Hausdorff distances between V- and H-polytopes.

use hkit::hausdorff::{hausdorff_oracle, hausdorff_vv};
use hkit::rational::{int, sqrt_f64};
use hkit::{HPolytope, NormSpec, Polytope, VPolytope};

fn main() -> hkit::Result<()> {
    let p = VPolytope::from_ints(&[&[0, 0], &[4, 0], &[4, 1], &[0, 1]])?;
    let q = VPolytope::from_ints(&[&[1, -1], &[3, -1], &[2, 3]])?;
    for norm in [NormSpec::L1, NormSpec::L2, NormSpec::LInf] {
        let h = hausdorff_vv(&p, &q, &norm)?;
        println!("{:4} delta = {}  (P->Q {}, Q->P {}), attained at {} and {}", norm.name(), h.value, h.directed_pq, h.directed_qp, h.argmax_p, h.argmax_q);
    }
    println!("l2 distance ~ {:.9}", sqrt_f64(&hausdorff_vv(&p, &q, &NormSpec::L2)?.value));
    // An H-polytope on one side: vertices are enumerated exactly first.
    let cube = Polytope::H(HPolytope::cube(2, int(2)));
    let h = hausdorff_oracle(&Polytope::V(q), &cube, &NormSpec::LInf)?;
    println!("linf delta(Q, [-2, 2]^2) = {}", h.value);
    Ok(())
}

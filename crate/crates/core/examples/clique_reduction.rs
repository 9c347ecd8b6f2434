//! The Clique reduction: a k-clique exists iff the l1 Hausdorff distance reaches k epsilon.

use hkit::hardness::{brute_force_clique, gen_clique_instance, GraphInstance};
use hkit::hausdorff::hausdorff_oracle;
use hkit::{NormSpec, Polytope};

fn main() -> hkit::Result<()> {
    let graphs = [
        ("triangle plus pendant", vec![(1, 2), (2, 3), (1, 3), (3, 4)]),
        ("4-cycle", vec![(1, 2), (2, 3), (3, 4), (1, 4)]),
    ];
    for (name, edges) in graphs {
        let g = GraphInstance::new(4, 3, edges)?;
        let inst = gen_clique_instance(&g)?;
        let h = hausdorff_oracle(&Polytope::H(inst.p.clone()), &Polytope::H(inst.q.clone()), &NormSpec::L1)?;
        println!(
            "{name}: dim {}, {} + {} facets, delta {} vs k eps {} -> clique {} (brute force {})",
            inst.p.dim(),
            inst.p.rows().len(),
            inst.q.rows().len(),
            h.value,
            inst.k_eps,
            h.value == inst.k_eps,
            brute_force_clique(&g)
        );
    }
    Ok(())
}

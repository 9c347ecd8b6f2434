//! Exact vertex enumeration of H-polytopes.

use hkit::vertex_enum::{vertex_enumeration, vertex_enumeration_with, ScaleGuard};
use hkit::{HPolytope, Polytope};

fn main() -> hkit::Result<()> {
    // Truncated cube: [-2, 2]^3 with the corners cut off.
    let mut rows: Vec<(Vec<i64>, i64)> = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut a = vec![0; 3];
            a[i] = s;
            rows.push((a, 2));
        }
    }
    for s in 0..8 {
        let a: Vec<i64> = (0..3).map(|k| if s >> k & 1 == 1 { -1 } else { 1 }).collect();
        rows.push((a, 5));
    }
    let borrowed: Vec<(&[i64], i64)> = rows.iter().map(|(a, b)| (a.as_slice(), *b)).collect();
    let h = HPolytope::from_rows(3, &borrowed)?;
    let v = vertex_enumeration(&h)?;
    println!("{} facets -> {} vertices", h.rows().len(), v.vertices().len());
    println!("{}", Polytope::V(v).to_json_string());
    let tight = ScaleGuard::parse("rows=8")?;
    match vertex_enumeration_with(&h, &tight) {
        Err(e) => println!("with rows=8: {e}"),
        Ok(_) => println!("guard did not trigger"),
    }
    Ok(())
}

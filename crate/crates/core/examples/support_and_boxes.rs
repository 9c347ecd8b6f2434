//! Support functions, bounding boxes and direct products.

use hkit::polytope::{bounding_box, direct_product};
use hkit::rational::int;
use hkit::{HPolytope, Point, Polytope, VPolytope};

fn main() -> hkit::Result<()> {
    let triangle = VPolytope::from_ints(&[&[0, 0], &[4, 0], &[1, 3]])?;
    let square = HPolytope::cube(2, int(1));
    for u in [[1, 0], [1, 1], [-1, 2]] {
        let u = Point::from_ints(&u);
        println!("h(T, {u}) = {}   h(C, {u}) = {}", triangle.support(&u)?, square.support(&u)?);
    }
    let b = bounding_box(&Polytope::V(triangle.clone()))?;
    println!("box of T: {} .. {}, squared diameter {}", b.lower, b.upper, b.diam_sq);
    let prism = VPolytope::product(&[triangle, VPolytope::from_ints(&[&[0], &[2]])?])?;
    println!("T x [0, 2] has {} vertices in dimension {}", prism.vertices().len(), prism.dim());
    let cube3 = direct_product(&[square, HPolytope::cube(1, int(1))])?;
    println!("C x [-1, 1] has {} facets", cube3.rows().len());
    Ok(())
}

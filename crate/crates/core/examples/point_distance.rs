//! Distance from a point to V- and H-polytopes under several norms.

use hkit::distance::point_distance;
use hkit::rational::ratio;
use hkit::{HPolytope, NormSpec, Point, Polytope, VPolytope};

fn main() -> hkit::Result<()> {
    let x = Point::new(vec![ratio(7, 2), ratio(5, 2)]);
    let tri = Polytope::V(VPolytope::from_ints(&[&[0, 0], &[2, 0], &[0, 2]])?);
    let diamond = Polytope::H(HPolytope::from_rows(2, &[(&[1, 1], 1), (&[1, -1], 1), (&[-1, 1], 1), (&[-1, -1], 1)])?);
    let hexagon = NormSpec::polytopal_v(VPolytope::from_ints(&[&[2, 0], &[1, 2], &[-1, 2], &[-2, 0], &[-1, -2], &[1, -2]])?)?;
    for (name, p) in [("triangle", &tri), ("diamond", &diamond)] {
        for norm in [NormSpec::L1, NormSpec::L2, NormSpec::LInf, hexagon.clone()] {
            let r = point_distance(&x, p, &norm)?;
            let shown = if norm.is_euclidean() { format!("{} (squared)", r.value) } else { r.value.to_string() };
            println!("{name:8} {:10} {shown:>14}  ~{:.6}  nearest {}", norm.name(), r.distance_f64(), r.witness);
        }
    }
    Ok(())
}

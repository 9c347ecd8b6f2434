//! Searching for small vertex subsets with the same matching value.

use hkit::matching::{coreset_search, match_l2};
use hkit::VPolytope;

fn main() -> hkit::Result<()> {
    let p = VPolytope::from_ints(&[&[0, 0], &[6, 0], &[7, 3], &[3, 6], &[-1, 3]])?;
    let q = VPolytope::from_ints(&[&[-2, -1], &[8, 0], &[6, 7], &[-3, 5]])?;
    println!("full value {:.9}", match_l2(&p, &q, 1e-10)?.rho);
    match coreset_search(&p, &q, 1e-6) {
        Ok(cs) => {
            println!("core-set with |R| = {}, |S| = {}, value {:.9}", cs.r.len(), cs.s.len(), cs.rho);
            let r: Vec<String> = cs.r.iter().map(|x| x.to_string()).collect();
            let s: Vec<String> = cs.s.iter().map(|x| x.to_string()).collect();
            println!("R = {}\nS = {}", r.join(" "), s.join(" "));
        }
        Err(e) => println!("no core-set: {e}"),
    }
    Ok(())
}

//! Exact rational simplex with a duality check.

use hkit::lp::{solve_lp, LPOutcome, LinearProgram};
use hkit::rational::int;

fn main() {
    // maximize 3x + 2y  s.t.  x + y ≤ 4,  x + 3y ≤ 6,  x ≤ 3,  x, y ≥ 0
    let mut lp = LinearProgram::new(2);
    lp.set_nonneg(0);
    lp.set_nonneg(1);
    lp.add_le(&[int(1), int(1)], int(4));
    lp.add_le(&[int(1), int(3)], int(6));
    lp.add_le(&[int(1), int(0)], int(3));
    lp.maximize(&[int(3), int(2)]);
    match solve_lp(&lp) {
        LPOutcome::Optimal { value, solution, duals } => {
            println!("optimum {value} at {solution}");
            let duals: Vec<String> = duals.iter().map(|y| y.to_string()).collect();
            println!("row multipliers [{}]", duals.join(", "));
        }
        other => println!("{:?}", other.status()),
    }
    let dual = solve_lp(&lp.dual());
    println!("dual optimum {} (negated primal)", dual.value().expect("bounded"));
}

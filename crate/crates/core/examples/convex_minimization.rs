//! The ellipsoid-based convex minimizer on a piecewise-linear function.

use hkit::minimize::{minimize_convex, Eval};

fn main() -> hkit::Result<()> {
    // f(x, y) = max(|x - 1| + |y|, 2 - x + y / 2)
    let f = |x: &[f64]| {
        let a = (x[0] - 1.0).abs() + x[1].abs();
        let b = 2.0 - x[0] + 0.5 * x[1];
        if a >= b {
            Eval::Value { f: a, g: vec![(x[0] - 1.0).signum(), x[1].signum()] }
        } else {
            Eval::Value { f: b, g: vec![-1.0, 0.5] }
        }
    };
    let m = minimize_convex(f, &[0.0, 0.0], 1e-10, 10_000)?;
    println!("min ~ {:.10} in [{:.10}, {:.10}] at {:?} after {} steps", m.value, m.lower_bound, m.value, m.x, m.iterations);
    Ok(())
}

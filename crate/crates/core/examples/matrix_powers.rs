//! Eigen-structure, case labels and closed-form powers of the two example
//! coefficient matrices and a sign-flip matrix.

use stable_ar2::{classify_case, eigen_structure, theta_power, CoeffMatrix, LagParity};

fn naive_power(theta: &CoeffMatrix, j: usize) -> CoeffMatrix {
    (0..j).fold(CoeffMatrix::identity(), |acc, _| acc.mul(theta))
}

fn main() -> stable_ar2::Result<()> {
    let systems = [
        ("theta1", CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6)),
        ("theta2", CoeffMatrix::new(0.5, 0.1, -0.1, 0.7)),
        ("flip", CoeffMatrix::new(0.1, 0.3, 0.5, -0.1)),
    ];
    for (name, theta) in systems {
        let eig = eigen_structure(&theta)?;
        println!(
            "{name}: lambda1 = {:.6}, lambda2 = {:.6}, repeated = {}, even lags {}, odd lags {}",
            eig.lambda1,
            eig.lambda2,
            eig.degenerate,
            classify_case(&eig, LagParity::Even),
            classify_case(&eig, LagParity::Odd),
        );
        for j in [1, 5, 20, 50] {
            let closed = theta_power(&theta, j)?;
            let err = closed.max_abs_diff(&naive_power(&theta, j));
            println!("  j = {j:>2}: {:?}  (max diff to repeated product {err:.1e})", closed.rows());
        }
    }
    Ok(())
}

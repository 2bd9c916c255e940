//! Certified-truncation values of the cross-codifference and
//! cross-covariation for both example systems, in both lag directions.

use stable_ar2::measures::evaluate;
use stable_ar2::{Alpha, CoeffMatrix, Direction, LagSpec, MeasureKind, SpectralMeasure, StableAR1Model};

fn main() -> stable_ar2::Result<()> {
    let tol = 1e-12;
    for (name, theta) in [
        ("theta1", CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6)),
        ("theta2", CoeffMatrix::new(0.5, 0.1, -0.1, 0.7)),
    ] {
        let model = StableAR1Model::new(theta, Alpha::new(1.5)?, SpectralMeasure::four_point_example())?;
        println!("{name}, alpha = 1.5, tol = {tol:e}");
        println!("{:>3} {:>6} {:>14} {:>14} {:>6}", "h", "dir", "CD", "CV", "J");
        for h in [0, 1, 2, 5, 10, 20] {
            for direction in [Direction::Minus, Direction::Plus] {
                let lag = LagSpec { h, direction };
                let cd = evaluate(&model, MeasureKind::Codifference, lag, tol)?;
                let cv = evaluate(&model, MeasureKind::Covariation, lag, tol)?;
                println!(
                    "{h:>3} {:>6} {:>14.6e} {:>14.6e} {:>6}",
                    direction.as_str(),
                    cd.value,
                    cv.value,
                    cd.truncation_j.max(cv.truncation_j)
                );
            }
        }
    }
    Ok(())
}

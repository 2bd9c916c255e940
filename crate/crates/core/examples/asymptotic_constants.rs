//! Asymptotic constants and how fast the series approach their
//! leading-order predictions.

use stable_ar2::measures::{evaluate, lag_scaled_tolerance};
use stable_ar2::{
    asymptotic_cd, asymptotic_constants, asymptotic_cv, Alpha, CoeffMatrix, Direction, LagSpec,
    MeasureKind, SpectralMeasure, StableAR1Model,
};

fn main() -> stable_ar2::Result<()> {
    for (name, theta) in [
        ("theta1", CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6)),
        ("theta2", CoeffMatrix::new(0.5, 0.1, -0.1, 0.7)),
        ("flip", CoeffMatrix::new(0.1, 0.3, 0.5, -0.1)),
    ] {
        let model = StableAR1Model::new(theta, Alpha::new(1.5)?, SpectralMeasure::four_point_example())?;
        let c = asymptotic_constants(&model)?;
        print!("{name}:");
        for i in 1..=11 {
            if let Some(v) = c.d(i) {
                print!(" D{i}={v:.6}");
            }
        }
        if let Some(e) = c.e3 {
            print!(" E3={e:.6}");
        }
        println!();
        for h in [10, 30, 60] {
            let mut line = format!("  h = {h:>2}:");
            for kind in [MeasureKind::Codifference, MeasureKind::Covariation] {
                for direction in [Direction::Minus, Direction::Plus] {
                    let lag = LagSpec { h, direction };
                    let series = evaluate(&model, kind, lag, lag_scaled_tolerance(&model, 1e-12, h))?.value;
                    let pred = match kind {
                        MeasureKind::Codifference => asymptotic_cd(&c, lag),
                        MeasureKind::Covariation => asymptotic_cv(&c, lag),
                    };
                    line += &format!(
                        " {}{}={:+.2e}{}",
                        kind.as_str(),
                        if direction == Direction::Minus { "-" } else { "+" },
                        series / pred.value - 1.0,
                        if pred.exact { "*" } else { "" }
                    );
                }
            }
            println!("{line}");
        }
    }
    println!("(series/prediction - 1; * marks exact formulas)");
    Ok(())
}

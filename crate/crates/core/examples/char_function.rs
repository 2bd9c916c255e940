//! The four-atom spectral measure: its characteristic function, and a
//! check of the bivariate sampler against it on a few arguments.

use stable_ar2::{joint_char_function, sample_bivariate_stable, Alpha, SpectralMeasure};

fn main() -> stable_ar2::Result<()> {
    let gamma = SpectralMeasure::four_point_example();
    let alpha = Alpha::new(1.5)?;
    println!("total mass Γ(S2) = {}", gamma.total_mass());

    let draws = sample_bivariate_stable(&gamma, alpha, 200_000, 11)?;
    println!("{:>14} {:>12} {:>12}", "theta", "exact", "empirical");
    for theta in [[0.5, 0.0], [0.0, 0.5], [0.3, -0.4], [1.0, 1.0]] {
        let exact = joint_char_function(&gamma, alpha, theta);
        let emp = draws
            .iter()
            .map(|z| (theta[0] * z[0] + theta[1] * z[1]).cos())
            .sum::<f64>()
            / draws.len() as f64;
        println!("{:>14} {exact:>12.6} {emp:>12.6}", format!("{theta:?}"));
    }
    Ok(())
}

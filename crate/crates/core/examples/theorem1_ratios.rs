//! Ratio curves `r(-h)/α` and `r(h)` for both example systems and three
//! stability indices. Pass a directory to also write one SVG per system.

use stable_ar2::asymptotics::DEFAULT_RATIO_GUARD;
use stable_ar2::svg::{line_chart, Series};
use stable_ar2::{ratio_series, theorem1_check, Alpha, CoeffMatrix, SpectralMeasure, StableAR1Model};

fn main() -> stable_ar2::Result<()> {
    let out_dir = std::env::args().nth(1);
    let h_max = 40;
    for (name, theta) in [
        ("theta1", CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6)),
        ("theta2", CoeffMatrix::new(0.5, 0.1, -0.1, 0.7)),
    ] {
        let mut curves = Vec::new();
        for a in [1.2, 1.5, 1.8] {
            let model = StableAR1Model::new(theta, Alpha::new(a)?, SpectralMeasure::four_point_example())?;
            let r = ratio_series(&model, h_max, DEFAULT_RATIO_GUARD)?;
            let report = theorem1_check(&model, h_max, 0.02)?;
            println!(
                "{name} alpha={a}: r(-h)/alpha at h=1,10,40: {:.4} {:.4} {:.4} | r(h): {:.4} {:.4} {:.2e} | check {}",
                r.r_minus_over_alpha(1).unwrap_or(f64::NAN),
                r.r_minus_over_alpha(10).unwrap_or(f64::NAN),
                r.r_minus_over_alpha(h_max).unwrap_or(f64::NAN),
                r.r_plus_at(1).unwrap_or(f64::NAN),
                r.r_plus_at(10).unwrap_or(f64::NAN),
                r.r_plus_at(h_max).unwrap_or(f64::NAN),
                if report.passed() { "pass" } else { "fail" },
            );
            curves.push((a, r));
        }
        if let Some(dir) = &out_dir {
            let names: Vec<String> = curves.iter().map(|(a, _)| format!("alpha = {a}")).collect();
            for (label, minus) in [("minus", true), ("plus", false)] {
                let series: Vec<Series> = curves
                    .iter()
                    .zip(&names)
                    .map(|((_, r), n)| Series {
                        name: n,
                        points: r
                            .lags
                            .iter()
                            .skip(1)
                            .map(|&h| {
                                let v = if minus { r.r_minus_over_alpha(h) } else { r.r_plus_at(h) };
                                (h as f64, v)
                            })
                            .collect(),
                    })
                    .collect();
                let path = format!("{dir}/{name}_{label}.svg");
                std::fs::write(&path, line_chart(&format!("{name}, {label} direction"), "h", &series))?;
                println!("wrote {path}");
            }
        }
    }
    Ok(())
}

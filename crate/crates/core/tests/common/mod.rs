#![allow(dead_code)]

use stable_ar2::{Alpha, CoeffMatrix, Direction, SpectralMeasure, StableAR1Model};

pub const THETA1: CoeffMatrix = CoeffMatrix::new(-0.2, 0.1, -0.3, 0.6);
pub const THETA2: CoeffMatrix = CoeffMatrix::new(0.5, 0.1, -0.1, 0.7);
pub const ALPHAS: [f64; 3] = [1.2, 1.5, 1.8];

pub fn model(theta: CoeffMatrix, alpha: f64) -> StableAR1Model {
    StableAR1Model::new(theta, Alpha::new(alpha).unwrap(), SpectralMeasure::four_point_example()).unwrap()
}

pub fn mat_mul(p: [[f64; 2]; 2], t: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [p[0][0] * t[0][0] + p[0][1] * t[1][0], p[0][0] * t[0][1] + p[0][1] * t[1][1]],
        [p[1][0] * t[0][0] + p[1][1] * t[1][0], p[1][0] * t[0][1] + p[1][1] * t[1][1]],
    ]
}

pub fn naive_power(theta: &CoeffMatrix, j: usize) -> [[f64; 2]; 2] {
    (0..j).fold([[1.0, 0.0], [0.0, 1.0]], |p, _| mat_mul(p, theta.rows()))
}

fn dot(r: [f64; 2], s: [f64; 2]) -> f64 {
    r[0] * s[0] + r[1] * s[1]
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// `-log E exp(i sum_m <a_m, Z_m>)` for independent copies `Z_m` of the
/// noise, given the coefficient rows `a_m`.
fn scale_of(rows: &[[f64; 2]], m: &StableAR1Model) -> f64 {
    let alpha = m.alpha().value();
    rows.iter()
        .map(|&r| {
            m.noise()
                .atoms()
                .iter()
                .map(|at| at.weight * dot(r, at.point()).abs().powf(alpha))
                .sum::<f64>()
        })
        .sum()
}

/// Coefficient rows of `X1(t)` and of `X2(t ∓ h)` on the noise
/// `Z(t + h - k)`, `k = 0..j_max + 2h`, from the moving-average form with
/// powers built by repeated multiplication.
fn coefficient_rows(m: &StableAR1Model, h: usize, dir: Direction, j_max: usize) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
    let powers: Vec<[[f64; 2]; 2]> = (0..j_max)
        .scan([[1.0, 0.0], [0.0, 1.0]], |p, _| {
            let cur = *p;
            *p = mat_mul(cur, m.theta().rows());
            Some(cur)
        })
        .collect();
    let n = j_max + 2 * h;
    let mut a = vec![[0.0; 2]; n];
    let mut b = vec![[0.0; 2]; n];
    for k in 0..n {
        // noise at time t + h - k
        let x1_lag = k as isize - h as isize;
        if x1_lag >= 0 && (x1_lag as usize) < j_max {
            a[k] = powers[x1_lag as usize][0];
        }
        let x2_lag = match dir {
            Direction::Minus => k as isize - 2 * h as isize,
            Direction::Plus => k as isize,
        };
        if x2_lag >= 0 && (x2_lag as usize) < j_max {
            b[k] = powers[x2_lag as usize][1];
        }
    }
    (a, b)
}

/// Codifference of `(X1(t), X2(t ∓ h))` straight from the definition
/// `log φ(1,-1) - log φ(1,0) - log φ(0,-1)`, fixed truncation `j_max`.
pub fn brute_codifference(m: &StableAR1Model, h: usize, dir: Direction, j_max: usize) -> f64 {
    let (a, b) = coefficient_rows(m, h, dir, j_max);
    let diff: Vec<[f64; 2]> = a.iter().zip(&b).map(|(&x, &y)| sub(x, y)).collect();
    -scale_of(&diff, m) + scale_of(&a, m) + scale_of(&b, m)
}

/// Covariation `[X1(t), X2(t ∓ h)]_α` as the sum over independent noise
/// terms of `∫ <a,s> <b,s>^<α-1> Γ(ds)`, fixed truncation `j_max`.
pub fn brute_covariation(m: &StableAR1Model, h: usize, dir: Direction, j_max: usize) -> f64 {
    let alpha = m.alpha().value();
    let (a, b) = coefficient_rows(m, h, dir, j_max);
    let mut total = 0.0;
    for (ra, rb) in a.iter().zip(&b) {
        for at in m.noise().atoms() {
            let y = dot(*rb, at.point());
            total += at.weight * dot(*ra, at.point()) * y.abs().powf(alpha - 1.0) * y.signum();
        }
    }
    total
}

/// Stationary covariance `Γ0 = Θ Γ0 Θ' + Q` of the Gaussian AR(1) whose
/// noise has characteristic function `exp(-Σ w <θ,s>^2)`, i.e.
/// `Q = 2 Σ w s s'`.
pub fn gaussian_gamma0(theta: &CoeffMatrix, noise: &SpectralMeasure) -> [[f64; 2]; 2] {
    let t = theta.rows();
    let mut q = [[0.0; 2]; 2];
    for at in noise.atoms() {
        let s = at.point();
        for i in 0..2 {
            for j in 0..2 {
                q[i][j] += 2.0 * at.weight * s[i] * s[j];
            }
        }
    }
    // (I - Θ ⊗ Θ) vec(Γ0) = vec(Q), row-major vec
    let mut a = [[0.0; 5]; 4];
    for i in 0..2 {
        for j in 0..2 {
            let r = 2 * i + j;
            for k in 0..2 {
                for l in 0..2 {
                    a[r][2 * k + l] = -t[i][k] * t[j][l];
                }
            }
            a[r][r] += 1.0;
            a[r][4] = q[i][j];
        }
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        a.swap(col, piv);
        for row in 0..4 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for c in col..5 {
                    a[row][c] -= f * a[col][c];
                }
            }
        }
    }
    let x: Vec<f64> = (0..4).map(|r| a[r][4] / a[r][r]).collect();
    [[x[0], x[1]], [x[2], x[3]]]
}

/// `Cov(X1(t), X2(t ∓ h))` of that Gaussian process.
pub fn gaussian_cross_covariance(theta: &CoeffMatrix, noise: &SpectralMeasure, h: usize, dir: Direction) -> f64 {
    let g = gaussian_gamma0(theta, noise);
    let c = mat_mul(naive_power(theta, h), g);
    // Cov(X(t), X(t-h)) = Θ^h Γ0 and Cov(X(t), X(t+h)) = Γ0 (Θ^h)' = (Θ^h Γ0)'
    match dir {
        Direction::Minus => c[0][1],
        Direction::Plus => c[1][0],
    }
}

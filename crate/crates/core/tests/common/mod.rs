#![allow(dead_code)]

/// Dense Gauss-Jordan elimination with partial pivoting, independent of the
/// library's solvers. `a` is row-major `n×n`.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut r = r.clone();
            r.push(bi);
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap())
            .unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        assert!(piv.abs() > 1e-300, "oracle hit a singular system");
        for j in c..=n {
            m[c][j] /= piv;
        }
        for i in 0..n {
            if i != c {
                let f = m[i][c];
                if f != 0.0 {
                    for j in c..=n {
                        m[i][j] -= f * m[c][j];
                    }
                }
            }
        }
    }
    m.iter().map(|r| r[n]).collect()
}

/// Least squares via the normal equations solved by [`gauss_solve`].
pub fn normal_equations(x: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = x[0].len();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for (row, &yi) in x.iter().zip(y) {
        for i in 0..n {
            b[i] += row[i] * yi;
            for j in 0..n {
                a[i][j] += row[i] * row[j];
            }
        }
    }
    gauss_solve(&a, &b)
}

/// Central finite-difference gradient with a step scaled to each coordinate.
pub fn fd_gradient(f: &mut dyn FnMut(&[f64]) -> f64, theta: &[f64]) -> Vec<f64> {
    let mut t = theta.to_vec();
    (0..t.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + theta[i].abs());
            t[i] = theta[i] + h;
            let up = f(&t);
            t[i] = theta[i] - h;
            let down = f(&t);
            t[i] = theta[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `max_i |a_i - n_i| / max(|a_i|, |n_i|, floor)`.
pub fn max_rel_err(a: &[f64], n: &[f64], floor: f64) -> f64 {
    a.iter()
        .zip(n)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}

pub fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

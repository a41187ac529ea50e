//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use regresslab_core::basis::{self, BasisKind, BasisSpec, InitStrategy};
use regresslab_core::cv::{self, SplitKind};
use regresslab_core::dataset::{self, gen_sine, gen_sparse_linear, gen_two_gaussians, sine_grid, Dataset};
use regresslab_core::glm::{self, GaussianClassModel, GenerativeParams, LinearParams, ModelKind, Reduction, SoftmaxParams, Targets};
use regresslab_core::kernel::{self, KernelRidge, KernelSpec};
use regresslab_core::nn::{self, Activation, LossKind, OutputKind};
use regresslab_core::optim::{self, GdConfig, GradientStrategy};
use regresslab_core::regpath::{self, LassoConfig, PathOptions, PenaltyKind};
use regresslab_core::{Error, Matrix, Rng, Vector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail}; {:.2}s", took.as_secs_f64()))
}

fn e<T: std::fmt::Debug>(err: T) -> String {
    format!("{err:?}")
}

// ---- test-side oracles ----

fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| [r.as_slice(), &[v]].concat()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        for j in c..=n {
            m[c][j] /= piv;
        }
        for i in 0..n {
            if i != c {
                let f = m[i][c];
                for j in c..=n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    m.iter().map(|r| r[n]).collect()
}

fn fd_gradient(f: &mut dyn FnMut(&[f64]) -> f64, theta: &[f64]) -> Vec<f64> {
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

/// Relative error with a floor of 1e-4 on the denominator.
fn rel_err(a: &[f64], n: &[f64]) -> f64 {
    a.iter()
        .zip(n)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-4))
        .fold(0.0, f64::max)
}

fn rmse(a: &[f64], b: &[f64]) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

fn randn(m: usize, n: usize, rng: &mut Rng) -> Matrix {
    Matrix::new(m, n, (0..m * n).map(|_| rng.normal()).collect()).unwrap()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

// ---- criteria ----

fn rental() -> Outcome {
    timed(Duration::from_secs(1), || {
        let d = dataset::fixture_rental();
        let fit = glm::fit_ols(&d.x().with_bias(), d.y_real().unwrap()).map_err(e)?;
        let (b, w) = (fit.theta[0], fit.theta[1]);
        // Simple-regression oracle: slope = cov(x, y) / var(x).
        let xs = d.x().column(0);
        let ys = d.y_real().unwrap();
        let mx = xs.iter().sum::<f64>() / 6.0;
        let my = ys.iter().sum::<f64>() / 6.0;
        let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        ensure((w - sxy / sxx).abs() < 1e-9, || format!("slope {w} vs oracle {}", sxy / sxx))?;
        let pred = glm::predict_linear(&fit, &[1.0, 20.0]).map_err(e)?;
        ensure((w - 82.6).abs() <= 0.1, || format!("slope {w}"))?;
        ensure((b - 228.4).abs() <= 0.5, || format!("intercept {b}"))?;
        ensure((pred - 1880.4).abs() <= 1.0, || format!("prediction {pred}"))?;
        Ok(format!("slope {w:.4}, intercept {b:.4}, predict(20) {pred:.2}"))
    })
}

fn poly_fit(d: &Dataset, k: u32, lambda: f64) -> Result<(BasisSpec, LinearParams), String> {
    let spec = BasisSpec::polynomial(1, k).map_err(e)?;
    let y = d.y_real().unwrap();
    let p = if lambda == 0.0 {
        basis::fit_lbfm_interpolating(&spec, d.x(), y)
    } else {
        basis::fit_lbfm_closed(&spec, d.x(), y, lambda)
    }
    .map_err(e)?;
    Ok((spec, p))
}

fn poly_rmse(m: &(BasisSpec, LinearParams), d: &Dataset) -> f64 {
    let pred = basis::predict_lbfm(&m.0, &m.1, d.x()).unwrap();
    rmse(&pred, d.y_real().unwrap())
}

fn noisy_sine() -> Dataset {
    gen_sine(10, 0.2, &mut Rng::new(42)).unwrap()
}

fn under_overfitting() -> Outcome {
    timed(Duration::from_secs(5), || {
        let train = noisy_sine();
        let test = sine_grid(100);
        let fits: Vec<_> = [1, 3, 9].iter().map(|&k| poly_fit(&train, k, 0.0)).collect::<Result<_, _>>()?;
        let train9 = poly_rmse(&fits[2], &train);
        let tests: Vec<f64> = fits.iter().map(|f| poly_rmse(f, &test)).collect();
        let (c3, c9) = (max_abs(&fits[1].1.theta), max_abs(&fits[2].1.theta));
        ensure(train9 < 1e-6, || format!("K=9 train rmse {train9:e}"))?;
        ensure(tests[1] < tests[0] && tests[1] < tests[2], || format!("test rmse {tests:?}"))?;
        ensure(c9 > 100.0 * c3, || format!("max|θ| K=3 {c3}, K=9 {c9}"))?;
        Ok(format!(
            "train(9) {train9:.1e}, test(1,3,9) {:.3}/{:.3}/{:.3}, max|θ| {c3:.1} vs {c9:.0}",
            tests[0], tests[1], tests[2]
        ))
    })
}

fn ridge_rescue() -> Outcome {
    timed(Duration::from_secs(10), || {
        let train = noisy_sine();
        let test = sine_grid(100);
        let plan = cv::split(10, SplitKind::Loocv, 0).map_err(e)?;
        let grid: Vec<f64> = (0..=12).map(|p| 10f64.powi(p - 12)).collect();
        let sel = cv::select_hyperparameter(
            &train,
            &grid,
            &plan,
            |&l, tr| basis::fit_lbfm_closed(&BasisSpec::polynomial(1, 9)?, tr.x(), tr.y_real().unwrap(), l),
            |p, va| {
                let pred = basis::predict_lbfm(&BasisSpec::polynomial(1, 9)?, p, va.x())?;
                Ok(rmse(&pred, va.y_real().unwrap()))
            },
        )
        .map_err(e)?;
        let ridge = poly_rmse(&poly_fit(&train, 9, sel.best)?, &test);
        let plain = poly_rmse(&poly_fit(&train, 9, 0.0)?, &test);
        ensure(ridge < plain, || format!("ridge {ridge} vs unregularized {plain}"))?;
        let norms: Vec<f64> = grid
            .iter()
            .map(|&l| poly_fit(&train, 9, l).map(|f| max_abs(&f.1.theta)))
            .collect::<Result<_, _>>()?;
        ensure(norms.windows(2).all(|w| w[1] <= w[0]), || format!("‖θ‖∞ not monotone: {norms:?}"))?;
        Ok(format!("λ* = {:e}, test rmse {ridge:.3} vs {plain:.3}", sel.best))
    })
}

fn gradient_suite() -> Outcome {
    timed(Duration::from_secs(30), || {
        const DRAWS: usize = 500;
        let mut rng = Rng::new(2025);
        let mut worst: Vec<(&str, f64)> = Vec::new();
        // Linear, logistic and softmax on fresh data per draw.
        for (name, k) in [("linear", 0usize), ("logistic", 1), ("softmax", 3)] {
            let mut w = 0.0f64;
            for _ in 0..DRAWS {
                let x = randn(6, 3, &mut rng).with_bias();
                let kind = match k {
                    0 => ModelKind::Linear,
                    1 => ModelKind::Logistic,
                    c => ModelKind::Softmax { classes: c },
                };
                let theta: Vec<f64> = (0..kind.param_len(4)).map(|_| rng.normal()).collect();
                let yr: Vec<f64> = (0..6).map(|_| if k == 1 { rng.below(2) as f64 } else { rng.normal() }).collect();
                let cls: Vec<usize> = (0..6).map(|_| rng.below(3)).collect();
                let oh = dataset::one_hot_encode(&cls, 3).unwrap();
                let t = if k == 3 { Targets::OneHot(&oh) } else { Targets::Real(&yr) };
                let a = glm::gradient(kind, &theta, &x, t, Reduction::Mean).map_err(e)?;
                let n = fd_gradient(&mut |p| glm::loss(kind, p, &x, t, Reduction::Mean).unwrap(), &theta);
                w = w.max(rel_err(&a, &n));
            }
            worst.push((name, w));
        }
        // Basis-function models: the gradient flows through the expanded design.
        let mut w = 0.0f64;
        for d in 0..DRAWS {
            let kind = [BasisKind::Polynomial, BasisKind::Rbf, BasisKind::Sigmoid, BasisKind::Fourier][d % 4];
            let x = randn(6, 2, &mut rng);
            let count = if kind == BasisKind::Polynomial { 3 } else { 4 };
            let spec = basis::init_basis_params(kind, &x, count, InitStrategy::Random, &mut rng).map_err(e)?;
            let phi = basis::expand(&spec, &x).map_err(e)?;
            let y: Vec<f64> = (0..6).map(|_| rng.normal()).collect();
            let theta: Vec<f64> = (0..phi.cols()).map(|_| rng.normal()).collect();
            let a = glm::gradient(ModelKind::Linear, &theta, &phi, Targets::Real(&y), Reduction::Mean).map_err(e)?;
            let n = fd_gradient(
                &mut |p| {
                    let pred = phi.matvec(p).unwrap();
                    pred.iter().zip(&y).map(|(q, t)| 0.5 * (q - t) * (q - t)).sum::<f64>() / 6.0
                },
                &theta,
            );
            w = w.max(rel_err(&a, &n));
        }
        worst.push(("lbfm", w));
        // Networks with one to three hidden layers.
        let mut w = 0.0f64;
        for d in 0..DRAWS {
            let act = [Activation::Sigmoid, Activation::Tanh][d % 2];
            let (out, loss, k) = [
                (OutputKind::Linear, LossKind::Mse, 1),
                (OutputKind::Logistic, LossKind::Xent, 1),
                (OutputKind::Softmax, LossKind::Xent, 3),
            ][d % 3];
            let mut sizes = vec![2];
            sizes.extend((0..1 + d % 3).map(|_| 2 + rng.below(5)));
            sizes.push(k);
            let net = nn::init_mlp(&sizes, act, out, &mut rng, 1.0).map_err(e)?;
            let x = randn(3, 2, &mut rng);
            let ys: Vec<Vec<f64>> = (0..3)
                .map(|_| match out {
                    OutputKind::Softmax => {
                        let mut v = vec![0.0; 3];
                        v[rng.below(3)] = 1.0;
                        v
                    }
                    OutputKind::Logistic => vec![rng.below(2) as f64],
                    OutputKind::Linear => vec![rng.normal()],
                })
                .collect();
            let y = Matrix::from_rows(&ys).unwrap();
            let all = [0, 1, 2];
            let a = nn::mean_gradient(&net, &x, &y, loss, &all).map_err(e)?;
            let mut scratch = net.clone();
            let n = fd_gradient(
                &mut |p| {
                    scratch.set_flat_params(p).unwrap();
                    (0..3).map(|i| nn::sample_loss(&scratch, x.row(i), y.row(i), loss).unwrap()).sum::<f64>() / 3.0
                },
                &net.flat_params(),
            );
            w = w.max(rel_err(&a, &n));
        }
        worst.push(("mlp", w));
        for (name, w) in &worst {
            ensure(*w < 1e-5, || format!("{name}: max relative error {w:e}"))?;
        }
        let lib = regresslab_core::gradcheck::run_suite(7, DRAWS).map_err(e)?;
        ensure(lib.iter().all(|r| r.passed), || format!("library suite: {lib:?}"))?;
        let summary: Vec<String> = worst.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect();
        Ok(format!("{DRAWS} draws each: {}", summary.join(", ")))
    })
}

fn unified_gradient() -> Outcome {
    let mut rng = Rng::new(21);
    let (m, n, k) = (40, 3, 4);
    let x = randn(m, n, &mut rng).with_bias();
    let mut worst = 0.0f64;
    let theta: Vec<f64> = (0..=n).map(|_| rng.normal()).collect();
    let yr: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
    let yb: Vec<f64> = (0..m).map(|_| rng.below(2) as f64).collect();
    for (kind, y) in [(ModelKind::Linear, &yr), (ModelKind::Logistic, &yb)] {
        let g = glm::gradient(kind, &theta, &x, Targets::Real(y), Reduction::Mean).map_err(e)?;
        let mut oracle = vec![0.0; n + 1];
        for i in 0..m {
            let z: f64 = x.row(i).iter().zip(&theta).map(|(a, b)| a * b).sum();
            let yhat = if kind == ModelKind::Linear { z } else { 1.0 / (1.0 + (-z).exp()) };
            for j in 0..=n {
                oracle[j] += (yhat - y[i]) * x[(i, j)] / m as f64;
            }
        }
        worst = worst.max(g.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    }
    let th: Vec<f64> = (0..(n + 1) * k).map(|_| rng.normal()).collect();
    let cls: Vec<usize> = (0..m).map(|_| rng.below(k)).collect();
    let oh = dataset::one_hot_encode(&cls, k).unwrap();
    let g = glm::gradient(ModelKind::Softmax { classes: k }, &th, &x, Targets::OneHot(&oh), Reduction::Mean).map_err(e)?;
    let mut oracle = vec![0.0; th.len()];
    for i in 0..m {
        let z: Vec<f64> = (0..k).map(|c| (0..=n).map(|j| x[(i, j)] * th[j * k + c]).sum()).collect();
        let mx = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ex: Vec<f64> = z.iter().map(|v| (v - mx).exp()).collect();
        let s: f64 = ex.iter().sum();
        for c in 0..k {
            for j in 0..=n {
                oracle[j * k + c] += (ex[c] / s - oh[(i, c)]) * x[(i, j)] / m as f64;
            }
        }
    }
    worst = worst.max(g.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("linear/logistic/softmax max deviation {worst:.1e}"))
}

fn kernel_primal() -> Outcome {
    let mut rng = Rng::new(17);
    let x = randn(30, 5, &mut rng).with_bias();
    let y: Vec<f64> = (0..30).map(|_| rng.normal()).collect();
    let lambda = 0.5;
    let dual = KernelRidge::fit(&KernelSpec::Linear, &x, &y, lambda).map_err(e)?;
    let xnew = randn(20, 5, &mut rng).with_bias();
    let dp = dual.predict(&xnew).map_err(e)?;
    let mut a = vec![vec![0.0; 6]; 6];
    let mut b = vec![0.0; 6];
    for i in 0..30 {
        for p in 0..6 {
            b[p] += x[(i, p)] * y[i];
            for q in 0..6 {
                a[p][q] += x[(i, p)] * x[(i, q)];
            }
        }
    }
    for (p, row) in a.iter_mut().enumerate() {
        row[p] += lambda;
    }
    let theta = gauss_solve(&a, &b);
    let mut dev = 0.0f64;
    for i in 0..20 {
        let primal: f64 = xnew.row(i).iter().zip(&theta).map(|(u, v)| u * v).sum();
        dev = dev.max((primal - dp[i]).abs());
    }
    ensure(dev < 1e-8, || format!("dual vs primal {dev:e}"))?;
    let x2 = randn(25, 2, &mut rng);
    let g = kernel::gram(&KernelSpec::Polynomial { degree: 2, bias: 0.0 }, &x2).map_err(e)?;
    let phi = |r: &[f64]| [r[0] * r[0], 2f64.sqrt() * r[0] * r[1], r[1] * r[1]];
    let mut gdev = 0.0f64;
    for i in 0..25 {
        for j in 0..25 {
            let ex: f64 = phi(x2.row(i)).iter().zip(&phi(x2.row(j))).map(|(u, v)| u * v).sum();
            gdev = gdev.max((ex - g.k[(i, j)]).abs());
        }
    }
    ensure(gdev < 1e-10, || format!("polynomial Gram deviation {gdev:e}"))?;
    Ok(format!("prediction deviation {dev:.1e}, Gram deviation {gdev:.1e}"))
}

fn softmax_logistic() -> Outcome {
    let mut rng = Rng::new(77);
    let n = 3;
    let t1: Vec<f64> = (0..=n).map(|_| rng.normal()).collect();
    let t2: Vec<f64> = (0..=n).map(|_| rng.normal()).collect();
    let flat: Vec<f64> = (0..=n).flat_map(|j| [t1[j], t2[j]]).collect();
    let sm = SoftmaxParams::new(Matrix::new(n + 1, 2, flat).unwrap()).map_err(e)?;
    let lg = LinearParams {
        theta: Vector::new(t1.iter().zip(&t2).map(|(a, b)| a - b).collect()).unwrap(),
    };
    let mut dev = 0.0f64;
    for _ in 0..1000 {
        let mut x = vec![1.0];
        x.extend((0..n).map(|_| 3.0 * rng.normal()));
        let p = glm::predict_softmax(&sm, &x).map_err(e)?;
        let q = glm::predict_logistic(&lg, &x).map_err(e)?;
        dev = dev.max((p[0] - q).abs());
    }
    ensure(dev <= 1e-14, || format!("max deviation {dev:e}"))?;
    Ok(format!("1000 inputs, max deviation {dev:.1e}"))
}

fn lasso() -> Outcome {
    let mut rng = Rng::new(11);
    // Orthonormal columns, also orthogonal to the constant column.
    let m = 40;
    let mut cols: Vec<Vec<f64>> = vec![vec![1.0 / (m as f64).sqrt(); m]];
    while cols.len() < 7 {
        let mut v: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
        for c in &cols {
            let p: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= p * b);
        }
        let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        cols.push(v.iter().map(|a| a / nrm).collect());
    }
    let rows: Vec<Vec<f64>> = (0..m).map(|i| [vec![1.0], cols[1..].iter().map(|c| c[i]).collect()].concat()).collect();
    let x = Matrix::from_rows(&rows).unwrap();
    let y: Vec<f64> = (0..m).map(|_| 2.0 * rng.normal()).collect();
    let mut dev = 0.0f64;
    for lambda in [0.1, 1.0, 3.0] {
        let fit = regpath::lasso_cd(&x, &y, lambda, &LassoConfig::default(), None).map_err(e)?;
        for j in 1..7 {
            let rho: f64 = (0..m).map(|i| x[(i, j)] * y[i]).sum();
            let soft = rho.signum() * (rho.abs() - lambda / 2.0).max(0.0);
            dev = dev.max((fit.params.theta[j] - soft).abs());
        }
    }
    ensure(dev < 1e-8, || format!("soft-threshold deviation {dev:e}"))?;

    let truth = [3.0, -2.0, 1.5, 0.0, 0.0, 0.0, 0.0, 0.0];
    let d = gen_sparse_linear(100, &truth, 0.5, 0.1, &mut Rng::new(2024)).map_err(e)?;
    let xs = d.x().with_bias();
    let ys = d.y_real().unwrap().as_slice();
    let lmax = regpath::lambda_max(&xs, ys).map_err(e)?;
    for s in [1.0, 2.0] {
        let fit = regpath::lasso_cd(&xs, ys, s * lmax, &LassoConfig::default(), None).map_err(e)?;
        ensure(fit.params.theta[1..].iter().all(|v| *v == 0.0), || format!("nonzero at {s}·λ_max"))?;
    }
    let grid = regpath::default_lambda_grid(&xs, ys).map_err(e)?;
    let opts = PathOptions {
        standardize: false,
        ..PathOptions::default()
    };
    let path = regpath::regularization_path(&xs, ys, PenaltyKind::L1, &grid, &opts).map_err(e)?;
    let tol = 1e-6 * lmax;
    let mut kkt = 0.0f64;
    for p in &path {
        let r: Vec<f64> = (0..xs.rows()).map(|i| ys[i] - xs.row(i).iter().zip(p.theta.iter()).map(|(a, b)| a * b).sum::<f64>()).collect();
        for j in 0..xs.cols() {
            let g = 2.0 * (0..xs.rows()).map(|i| xs[(i, j)] * r[i]).sum::<f64>();
            let v = if j == 0 {
                g.abs()
            } else if p.theta[j] == 0.0 {
                (g.abs() - p.lambda).max(0.0)
            } else {
                (g - p.lambda * p.theta[j].signum()).abs()
            };
            kkt = kkt.max(v);
        }
    }
    ensure(kkt <= tol, || format!("KKT violation {kkt:e}"))?;
    let hit = path.iter().position(|p| {
        p.theta[1..].iter().zip(&truth).all(|(t, s)| (t.abs() > regpath::ZERO_TOL) == (*s != 0.0))
    });
    ensure(hit.is_some(), || "no path point recovers the support".into())?;
    Ok(format!(
        "soft-threshold {dev:.1e}, KKT {kkt:.1e} over {} points, support at λ={:.3}",
        path.len(),
        path[hit.unwrap()].lambda
    ))
}

fn generative() -> Outcome {
    let model = GaussianClassModel {
        mus: vec![Vector::new(vec![-1.0, 0.0]).unwrap(), Vector::new(vec![1.0, 0.0]).unwrap()],
        sigma: Matrix::identity(2),
        priors: Vector::new(vec![0.5, 0.5]).unwrap(),
    };
    let GenerativeParams::Binary(p) = model.params().map_err(e)? else {
        return Err("expected binary parameters".into());
    };
    ensure(p.theta.as_slice() == [0.0, 2.0, 0.0], || format!("plug-in {:?}", p.theta))?;
    let d = gen_two_gaussians(2000, &[-1.0, 0.0], &[1.0, 0.0], &Matrix::identity(2), &mut Rng::new(42)).map_err(e)?;
    let (_, fitted) = glm::fit_gaussian_generative(&d, 2).map_err(e)?;
    let GenerativeParams::Binary(f) = fitted else {
        return Err("expected binary parameters".into());
    };
    let dev = f.theta.iter().zip([0.0, 2.0, 0.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(dev < 0.2, || format!("sampled fit {:?}", f.theta))?;
    Ok(format!("plug-in exact, sampled (b, w) = ({:.3}, {:.3}, {:.3})", f.theta[0], f.theta[1], f.theta[2]))
}

fn optimizer() -> Outcome {
    let loss = |t: &[f64]| Ok((t[0] - 1.0) * (t[0] - 1.0));
    let grad = |t: &[f64]| Vector::new(vec![2.0 * (t[0] - 1.0)]);
    let cfg = |eta| GdConfig {
        learning_rate: eta,
        delta: 1e-12,
        ..GdConfig::default()
    };
    let out = optim::gd_minimize(loss, grad, &[5.0], &cfg(0.1)).map_err(e)?;
    let err = (out.theta[0] - 1.0).abs();
    ensure(err < 1e-5, || format!("|θ-1| = {err:e}"))?;
    match optim::gd_minimize(loss, grad, &[5.0], &cfg(1.1)) {
        Err(Error::Diverged { .. }) => {}
        other => return Err(format!("η=1.1 gave {other:?}")),
    }
    let mut rng = Rng::new(13);
    let m = 37;
    let x = randn(m, 3, &mut rng).with_bias();
    let y: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
    let all: Vec<usize> = (0..m).collect();
    let run = |strategy| {
        let c = GdConfig {
            strategy,
            max_iters: 300,
            delta: 0.0,
            seed: 99,
            ..GdConfig::default()
        };
        let mut src = optim::make_gradient_strategy(strategy, m, c.seed, |p: &[f64], idx: &[usize]| {
            glm::gradient_on(ModelKind::Linear, p, &x, Targets::Real(&y), idx)
        })
        .unwrap();
        optim::gd_minimize(
            |p: &[f64]| glm::loss_on(ModelKind::Linear, p, &x, Targets::Real(&y), &all),
            |p| src.next(p),
            &[0.0; 4],
            &c,
        )
        .unwrap()
    };
    let a = run(GradientStrategy::Batch);
    let b = run(GradientStrategy::Minibatch { size: m });
    let bits = |o: &optim::GdOutcome| {
        o.trace
            .steps
            .iter()
            .flat_map(|s| [s.loss.to_bits(), s.grad_inf_norm.to_bits()])
            .chain(o.theta.iter().map(|v| v.to_bits()))
            .collect::<Vec<u64>>()
    };
    ensure(bits(&a) == bits(&b), || "minibatch B=M differs from batch".into())?;
    Ok(format!(
        "|θ-1| = {err:.1e} after {} steps, η=1.1 diverged, B=M bit-exact",
        out.trace.iterations()
    ))
}

fn flop_linearity() -> Outcome {
    let mut rng = Rng::new(1);
    let mut ratios = Vec::new();
    for w in [8usize, 16, 32, 64] {
        let net = nn::init_mlp(&[4, w, w, w, 1], Activation::Tanh, OutputKind::Linear, &mut rng, 0.5).map_err(e)?;
        let (_, f) = nn::backprop_with_flops(&net, &[0.1, -0.2, 0.3, 0.4], &[1.0], LossKind::Mse).map_err(e)?;
        ratios.push(f.total() as f64 / net.param_count() as f64);
    }
    let mean = ratios.iter().sum::<f64>() / 4.0;
    ensure(ratios.iter().all(|r| (r / mean - 1.0).abs() <= 0.2), || format!("flops/W {ratios:?}"))?;
    let s: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok(format!("flops/W for widths 8..64: {}", s.join(", ")))
}

fn vanishing() -> Outcome {
    let mut sizes = vec![1];
    sizes.extend([8; 10]);
    sizes.push(1);
    let net = nn::init_mlp(&sizes, Activation::Sigmoid, OutputKind::Linear, &mut Rng::new(3), 0.5).map_err(e)?;
    let rep = nn::vanishing_diagnostic(&net, &[0.5], &[1.0], LossKind::Mse).map_err(e)?;
    // Recompute the ratio from the raw per-layer gradients.
    let g = nn::backprop(&net, &[0.5], &[1.0], LossKind::Mse).map_err(e)?;
    let norm = |m: &Matrix| max_abs(m.as_slice());
    let ratio = norm(&g[0]) / norm(&g[9]);
    ensure(rep.ratio == Some(ratio), || format!("diagnostic {:?} vs {ratio}", rep.ratio))?;
    ensure(ratio < 1e-3, || format!("ratio {ratio:e}"))?;
    Ok(format!("layer 1 / layer 10 gradient ratio {ratio:.2e}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_regresslab"))
        .args(args)
        .current_dir(dir)
        .env_remove("REGRESSLAB_SEED")
        .output()
        .map_err(e)?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

const DETERMINISM_CONFIG: &str = r#"{
  "seed": 11,
  "data": {"path": "sine.csv"},
  "model": {"kind": "mlp", "net": {"hidden": [6], "activation": "tanh"}},
  "training": {"method": "gd", "gd": {"learning_rate": 0.1, "max_iters": 300,
      "strategy": {"kind": "minibatch", "size": 8}}},
  "output": {"dir": "fit"}
}"#;

fn cli_session(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    std::fs::write(dir.join("run.json"), DETERMINISM_CONFIG).map_err(e)?;
    let mut stdout = Vec::new();
    stdout.extend(run_cli(dir, &["synth", "--kind", "sine", "--m", "30", "--seed", "5", "--out", "sine.csv"])?);
    stdout.extend(run_cli(dir, &["synth", "--kind", "sparse-linear", "--out", "sparse.csv"])?);
    stdout.extend(run_cli(dir, &["fit", "--config", "run.json"])?);
    stdout.extend(run_cli(dir, &["eval", "--model", "fit/model.json", "--data", "sine.csv", "--out", "eval.json"])?);
    stdout.extend(run_cli(dir, &["sweep", "--penalty", "l1", "--data", "sparse.csv", "--out-dir", "path"])?);
    stdout.extend(run_cli(dir, &["sweep", "--data", "sine.csv", "--degrees", "1,3,5", "--out-dir", "deg"])?);
    stdout.extend(run_cli(dir, &["gradcheck", "--draws", "20", "--out", "grad.json"])?);
    let mut files = vec![("stdout".to_string(), stdout)];
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for ent in std::fs::read_dir(&d).map_err(e)? {
            let p = ent.map_err(e)?.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, std::fs::read(&p).map_err(e)?));
            }
        }
    }
    files.sort();
    Ok(files)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(e)?;
    let b = tempfile::tempdir().map_err(e)?;
    let first = cli_session(a.path())?;
    let second = cli_session(b.path())?;
    ensure(first.len() == second.len(), || "different file sets".into())?;
    for ((na, ca), (nb, cb)) in first.iter().zip(&second) {
        ensure(na == nb && ca == cb, || format!("{na} differs between runs"))?;
    }
    Ok(format!("{} outputs byte-identical across two runs", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("rental-price reproduction", rental),
        ("under/overfitting", under_overfitting),
        ("regularization rescue", ridge_rescue),
        ("gradient-correctness suite", gradient_suite),
        ("unified gradient identity", unified_gradient),
        ("kernel-primal equivalence", kernel_primal),
        ("softmax-logistic reduction", softmax_logistic),
        ("LASSO correctness", lasso),
        ("generative closed forms", generative),
        ("optimizer behavior", optimizer),
        ("backprop cost linearity", flop_linearity),
        ("vanishing-gradient diagnostic", vanishing),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {:>2}: {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

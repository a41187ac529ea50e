mod common;

use regresslab_core::basis::{self, BasisKind, BasisSpec, InitStrategy};
use regresslab_core::dataset::{gen_sine, sine_grid};
use regresslab_core::{Matrix, Rng};

fn vandermonde(xs: &[f64], k: u32) -> Vec<Vec<f64>> {
    xs.iter().map(|&x| (0..=k).map(|p| x.powi(p as i32)).collect()).collect()
}

#[test]
fn polynomial_fit_matches_vandermonde_oracle() {
    let mut rng = Rng::new(42);
    let d = gen_sine(25, 0.2, &mut rng).unwrap();
    let xs = d.x().column(0);
    let y = d.y_real().unwrap().as_slice();
    for k in 0..=5u32 {
        let spec = BasisSpec::polynomial(1, k).unwrap();
        let fit = basis::fit_lbfm_closed(&spec, d.x(), y, 0.0).unwrap();
        let oracle = common::normal_equations(&vandermonde(&xs, k), y);
        for (a, b) in fit.theta.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "K={k}: {a} vs {b}");
        }
    }
}

#[test]
fn expanded_polynomial_columns_are_powers() {
    let x = Matrix::new(3, 1, vec![-1.5, 0.0, 2.0]).unwrap();
    let phi = basis::expand(&BasisSpec::polynomial(1, 4).unwrap(), &x).unwrap();
    let oracle = vandermonde(&[-1.5, 0.0, 2.0], 4);
    for i in 0..3 {
        assert_eq!(phi.row(i), oracle[i].as_slice());
    }
}

#[test]
fn every_basis_family_fits_a_smooth_curve() {
    let train = sine_grid(40);
    let test = sine_grid(101);
    let y = train.y_real().unwrap().as_slice();
    for kind in [BasisKind::Polynomial, BasisKind::Rbf, BasisKind::Sigmoid, BasisKind::Fourier] {
        let count = if kind == BasisKind::Polynomial { 7 } else { 12 };
        let mut rng = Rng::new(1);
        let spec = basis::init_basis_params(kind, train.x(), count, InitStrategy::Grid, &mut rng).unwrap();
        let fit = basis::fit_lbfm_closed(&spec, train.x(), y, 1e-8).unwrap();
        let pred = basis::predict_lbfm(&spec, &fit, test.x()).unwrap();
        let err = common::rmse(&pred, test.y_real().unwrap());
        assert!(err < 0.05, "{kind:?}: test rmse {err}");
    }
}

#[test]
fn kmeans_centers_reach_both_clusters() {
    let mut rows = Vec::new();
    let mut rng = Rng::new(9);
    for c in [-5.0, 5.0] {
        for _ in 0..50 {
            rows.push(vec![c + 0.1 * rng.normal(), 0.1 * rng.normal()]);
        }
    }
    let x = Matrix::from_rows(&rows).unwrap();
    let centers = basis::kmeans(&x, 2, basis::KMEANS_ITERS, &mut rng).unwrap();
    let mut firsts: Vec<f64> = (0..2).map(|k| centers[(k, 0)]).collect();
    firsts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((firsts[0] + 5.0).abs() < 0.1 && (firsts[1] - 5.0).abs() < 0.1, "{firsts:?}");
}

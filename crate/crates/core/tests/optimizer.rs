use regresslab_core::glm::{self, ModelKind, Targets};
use regresslab_core::optim::{self, GdConfig, GradientStrategy, Schedule, StopReason};
use regresslab_core::{Error, Matrix, Rng, Vector};

fn quad_cfg(eta: f64) -> GdConfig {
    GdConfig {
        learning_rate: eta,
        delta: 1e-12,
        max_iters: 10_000,
        ..GdConfig::default()
    }
}

fn quad_loss(t: &[f64]) -> regresslab_core::Result<f64> {
    Ok((t[0] - 1.0) * (t[0] - 1.0))
}

fn quad_grad(t: &[f64]) -> regresslab_core::Result<Vector> {
    Vector::new(vec![2.0 * (t[0] - 1.0)])
}

#[test]
fn quadratic_converges_to_its_minimizer() {
    let out = optim::gd_minimize(quad_loss, quad_grad, &[5.0], &quad_cfg(0.1)).unwrap();
    assert!((out.theta[0] - 1.0).abs() < 1e-5, "{}", out.theta[0]);
    assert_eq!(out.stop, StopReason::LossDecrease);
    // Each step contracts the error by exactly 1 - 2η.
    let e: Vec<f64> = out.trace.steps.iter().map(|s| s.loss.sqrt()).collect();
    for w in e.windows(2).take(20) {
        assert!((w[1] / w[0] - 0.8).abs() < 1e-12);
    }
}

#[test]
fn too_large_a_step_diverges() {
    match optim::gd_minimize(quad_loss, quad_grad, &[5.0], &quad_cfg(1.1)) {
        Err(Error::Diverged { iteration, trace }) => {
            assert!(iteration > 0);
            assert!(trace.steps.len() > 1);
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn full_minibatch_reproduces_batch_bit_for_bit() {
    let mut rng = Rng::new(13);
    let m = 37;
    let x = Matrix::new(m, 3, (0..m * 3).map(|_| rng.normal()).collect())
        .unwrap()
        .with_bias();
    let y: Vec<f64> = (0..m).map(|_| rng.normal()).collect();
    let all: Vec<usize> = (0..m).collect();
    let run = |strategy| {
        let cfg = GdConfig {
            strategy,
            max_iters: 200,
            delta: 0.0,
            seed: 99,
            ..GdConfig::default()
        };
        let mut src = optim::make_gradient_strategy(strategy, m, cfg.seed, |p: &[f64], idx: &[usize]| {
            glm::gradient_on(ModelKind::Linear, p, &x, Targets::Real(&y), idx)
        })
        .unwrap();
        optim::gd_minimize(
            |p: &[f64]| glm::loss_on(ModelKind::Linear, p, &x, Targets::Real(&y), &all),
            |p| src.next(p),
            &[0.0; 4],
            &cfg,
        )
        .unwrap()
    };
    let batch = run(GradientStrategy::Batch);
    let mini = run(GradientStrategy::Minibatch { size: m });
    assert_eq!(batch.trace, mini.trace);
    let bits = |v: &[f64]| v.iter().map(|f| f.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&batch.theta), bits(&mini.theta));
}

#[test]
fn stochastic_descent_still_reaches_the_neighbourhood() {
    let mut rng = Rng::new(14);
    let m = 200;
    let x = Matrix::new(m, 1, (0..m).map(|_| rng.normal()).collect())
        .unwrap()
        .with_bias();
    let y: Vec<f64> = (0..m).map(|i| 1.0 + 2.0 * x[(i, 1)] + 0.01 * rng.normal()).collect();
    let all: Vec<usize> = (0..m).collect();
    let cfg = GdConfig {
        strategy: GradientStrategy::Stochastic,
        learning_rate: 0.05,
        schedule: Schedule::Exponential { gamma: 0.999 },
        max_iters: 4000,
        delta: 0.0,
        seed: 5,
    };
    let mut src = optim::make_gradient_strategy(cfg.strategy, m, cfg.seed, |p: &[f64], idx: &[usize]| {
        glm::gradient_on(ModelKind::Linear, p, &x, Targets::Real(&y), idx)
    })
    .unwrap();
    let out = optim::gd_minimize(
        |p: &[f64]| glm::loss_on(ModelKind::Linear, p, &x, Targets::Real(&y), &all),
        |p| src.next(p),
        &[0.0, 0.0],
        &cfg,
    )
    .unwrap();
    assert!((out.theta[0] - 1.0).abs() < 0.05 && (out.theta[1] - 2.0).abs() < 0.05, "{:?}", out.theta);
}

#[test]
fn schedules_follow_their_formulas() {
    let eta = 0.4;
    assert_eq!(optim::schedule_eval(&Schedule::Constant, eta, 7), eta);
    let step = Schedule::Step { gamma: 0.5, every: 10 };
    assert_eq!(optim::schedule_eval(&step, eta, 9), eta);
    assert_eq!(optim::schedule_eval(&step, eta, 25), eta * 0.25);
    let e = optim::schedule_eval(&Schedule::Exponential { gamma: 0.9 }, eta, 3);
    assert!((e - eta * 0.729).abs() < 1e-15);
    let c = Schedule::Cosine { period: 100 };
    assert!((optim::schedule_eval(&c, eta, 50) - eta / 2.0).abs() < 1e-15);
}

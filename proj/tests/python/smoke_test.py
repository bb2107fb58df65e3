"""End-to-end smoke tests for the python bindings."""

import math

import mixlab


def test_distributions():
    mix = mixlab.derive_mixture(mixlab.BetaParams(1.0, 1.0))
    assert abs(mix.weight_a - 0.5) < 1e-12
    assert abs(mixlab.moment_one_minus_lambda(mix) - 1.0 / 3.0) < 1e-12
    assert abs(mixlab.moment_one_minus_lambda_sq(mix) - 1.0 / 6.0) < 1e-12

    draws = mixlab.sample_mixture(mix, seed=7, n=20000)
    assert all(0.0 <= v <= 1.0 for v in draws)
    assert abs(sum(draws) / len(draws) - 2.0 / 3.0) < 0.01

    mix22 = mixlab.derive_mixture(mixlab.BetaParams(2.0, 2.0))
    assert abs(mixlab.moment_ratio_sq(mix22) - 3.0) < 1e-12
    try:
        mixlab.moment_ratio_sq(mix)
    except mixlab.MixlabError:
        pass
    else:
        raise AssertionError("expected a divergent-moment error")


def test_data_and_models():
    ds = mixlab.gen_two_moons(100, 0.1, seed=3)
    assert ds.n == 100 and ds.dim == 2
    centered = mixlab.center(ds)
    assert centered.centered

    lin = mixlab.init_linear(2, seed=4)
    f = mixlab.predict(lin, centered.inputs[0])
    g = mixlab.grad_input(lin, centered.inputs[0])
    assert len(g) == 2 and math.isfinite(f)
    assert mixlab.hessian_input_quadform(lin, [1.0, 2.0], [0.5, -1.0]) == 0.0


def test_losses_and_breakdown():
    ds = mixlab.center(mixlab.gen_two_moons(60, 0.1, seed=5))
    lin = mixlab.init_linear(2, seed=6)
    mix = mixlab.derive_mixture(mixlab.BetaParams(1.0, 1.0))

    breakdown = mixlab.approx_mixup_loss(lin, "logistic", ds, mix)
    total = breakdown.standard + breakdown.r1 + breakdown.r2 + breakdown.r3
    assert abs(breakdown.total - total) < 1e-12

    cfg = mixlab.MixupConfig()
    cfg.lambda_draws = 200
    cfg.seed = 11
    est = mixlab.mixup_loss_mc(lin, "logistic", ds, cfg)
    assert abs(est.estimate - breakdown.total) < 5 * max(est.std_error, 0.02)


def test_training_and_theorem():
    ds = mixlab.make_centered_halfspace(80, 6, seed=9)
    cfg = mixlab.TrainConfig()
    cfg.epochs = 150
    cfg.log_every = 150
    cfg.seed = 9
    model, log = mixlab.train(mixlab.init_linear(6, seed=10), "logistic", ds,
                              None, cfg)
    assert log.rows[-1].train_accuracy == 1.0
    assert mixlab.in_theta_region(model, ds)

    mix = mixlab.derive_mixture(mixlab.BetaParams(1.0, 1.0))
    report = mixlab.check_theorem_linear(model, ds, mix)
    assert report.holds_chain
    assert report.lhs >= report.mid - 1e-9 * (1 + abs(report.lhs))
    assert report.eps_mix <= min(report.eps_i) + 1e-15

    radii, r_min = mixlab.cosine_radii(model, ds)
    assert abs(min(radii) - r_min) < 1e-15


def test_adversarial():
    ds = mixlab.make_centered_halfspace(50, 4, seed=12)
    lin = mixlab.LinearModel([0.5, -0.25, 1.0, 0.0])
    x = ds.inputs[0]
    y = ds.targets[0]
    clean = mixlab.pointwise_loss("logistic", mixlab.predict(lin, x), y)
    assert mixlab.exact_l2_adv_loss_linear(lin, x, y, 0.5) >= clean - 1e-15
    assert mixlab.quad_adv_loss_glm(lin, x, y, 0.5) >= clean - 1e-15

    adv = mixlab.fgsm_attack(lin, "logistic", x, y, 0.1)
    assert max(abs(a - b) for a, b in zip(adv, x)) <= 0.1 + 1e-15

    curve = mixlab.robust_accuracy(lin, "logistic", ds, [0.0, 0.1], "fgsm")
    assert curve[0][1] >= curve[1][1]


def test_generalization():
    ds = mixlab.gen_gaussian_halfspace(60, 5, seed=13)
    est = mixlab.estimate_rademacher_ball(ds, radius_b=1.0, n_draws=500, seed=14)
    assert est.mean > 0.0
    bound = mixlab.rademacher_bound_glm(1.0, 0.5, 5, 60)
    assert bound > 0.0
    rho = mixlab.estimate_rho(ds, "logistic", 32, seed=15)
    assert 0.0 < rho <= 0.5

    net = mixlab.init_net(8, 5, bias_enabled=True, seed=16)
    stats = mixlab.hidden_feature_stats(net, ds)
    assert stats.rank <= 8
    assert mixlab.rademacher_bound_net(1.0, stats, 60) >= 0.0


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok: {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()

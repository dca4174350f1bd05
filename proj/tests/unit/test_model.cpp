#include <doctest.h>

#include "datasets.hpp"
#include "forecast/error.hpp"
#include "forecast/nn/train.hpp"
#include "test_support.hpp"

using namespace forecast;
using namespace forecast::testing;

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  CHECK_NOTHROW(hp.validate());
  hp.patience = 0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = {};
  hp.kernel_len = 31;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = {};
  hp.learning_rate = 0.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  CHECK_THROWS_AS(build_model(HyperParams{}, 0, RngStream(1)), ConfigError);
}

TEST_CASE("default model shapes") {
  const ModelState m = build_model(HyperParams{}, 4, RngStream(1));
  const auto layout = time_layout(m.hp);
  CHECK(layout.pool1 == 15);
  CHECK(layout.conv3 == 7);
  CHECK(m.net.head.affine.in_features() == 7 * 128);
  RngStream rng(2);
  const auto [pred, cache] = forward(m, random_tensor(rng, {30, 4}));
  CHECK(pred.shape() == Shape{7});
  CHECK_THROWS_AS(forward(m, Tensor({30, 3})), DimensionError);
  CHECK_THROWS_AS(forward(m, Tensor({29, 4})), DimensionError);

  HyperParams uni;
  uni.bidirectional = false;
  const ModelState u = build_model(uni, 4, RngStream(1));
  CHECK(u.net.head.affine.in_features() == 7 * 64);
}

TEST_CASE("initialisation is deterministic and Glorot-bounded") {
  const ModelState a = build_model(HyperParams{}, 4, RngStream(9));
  const ModelState b = build_model(HyperParams{}, 4, RngStream(9));
  CHECK(a == b);
  CHECK_FALSE(a == build_model(HyperParams{}, 4, RngStream(10)));

  const Tensor& w = a.net.convs[1].weights;  // 32 x 16 x 3
  const double limit = std::sqrt(6.0 / (16.0 * 3 + 32.0 * 3));
  for (double v : w.values()) CHECK(std::abs(v) <= limit);
  for (double v : a.net.convs[1].bias.values()) CHECK(v == 0.0);
}

TEST_CASE("zero model predicts zero; identical windows give identical predictions") {
  const ModelState z = model_skeleton(HyperParams{}, 3);
  RngStream rng(3);
  const Tensor x = random_tensor(rng, {30, 3});
  const Tensor zp = forward(z, x).first;
  for (double v : zp.values()) CHECK(v == 0.0);
  const ModelState m = build_model(HyperParams{}, 3, RngStream(4));
  CHECK(forward(m, x).first == forward(m, Tensor(x)).first);
}

TEST_CASE("mse loss") {
  const Tensor t({7}, 0.0);
  CHECK(mse_loss(t, t).value == 0.0);
  Tensor p = t;
  p[0] = 1.0;
  const Loss l = mse_loss(p, t);
  CHECK(l.value == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(l.grad[0] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK_THROWS_AS(mse_loss(Tensor({7}), Tensor({6})), DimensionError);

  RngStream rng(5);
  Tensor pr = random_tensor(rng, {7});
  const Tensor tg = random_tensor(rng, {7});
  const Loss g = mse_loss(pr, tg);
  GradCheckStats st;
  check_tensor(pr, g.grad, "pred", [&] { return mse_loss(pr, tg).value; }, [] { return true; },
               1e-5, st);
  CHECK(st.max_rel < 1e-6);
}

TEST_CASE("sgd step") {
  HyperParams hp = tiny_hp();
  ModelState m = build_model(hp, 2, RngStream(6));
  const ModelState before = m;
  Network g = m.net.zeros_like();
  g.head.affine.bias.fill(1.0);
  sgd_step(m, g, 0.0);
  CHECK(m == before);

  // theta = 1, grad 2 (f = theta^2), lr 0.1 -> 0.8
  m.net.head.affine.bias.fill(1.0);
  g.head.affine.bias.fill(2.0);
  sgd_step(m, g, 0.1);
  CHECK(m.net.head.affine.bias[0] == doctest::Approx(0.8).epsilon(1e-15));

  // two half steps on the same gradient equal one step on their mean
  ModelState a = before, b = before;
  Network g1 = before.net.zeros_like(), g2 = before.net.zeros_like();
  RngStream rng(7);
  Network::visit(g1, [&](const std::string&, Tensor& t) { t = random_tensor(rng, t.shape()); });
  Network::visit(g2, [&](const std::string&, Tensor& t) { t = random_tensor(rng, t.shape()); });
  Network mean = g1;
  mean += g2;
  mean *= 0.5;
  sgd_step(a, mean, 0.05);
  sgd_step(b, g1, 0.025);
  sgd_step(b, g2, 0.025);
  Network::visit(a.net, [&](const std::string& n, const Tensor& t) {
    const Tensor* other = nullptr;
    Network::visit(b.net, [&](const std::string& n2, const Tensor& t2) {
      if (n2 == n) other = &t2;
    });
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] == doctest::Approx((*other)[i]).epsilon(1e-13));
  });

  Network bad = before.net.zeros_like();
  bad.gru.layers[0].forward.u_update[1] = std::nan("");
  ModelState c = before;
  try {
    sgd_step(c, bad, 0.1);
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("gru.l0.fwd.u_update") != std::string::npos);
  }
  CHECK(c == before);
}

TEST_CASE("tiny model gradients match finite differences") {
  const HyperParams hp = tiny_hp();
  ModelState m = build_model(hp, 2, RngStream(123));
  Network::visit(m.net, [&](const std::string& n, Tensor& t) {
    if (n.find("bias") != std::string::npos || n.find(".b_") != std::string::npos) {
      RngStream r = RngStream(5).child(n);
      t = random_tensor(r, t.shape(), -0.5, 0.5);
    }
  });
  RngStream rng(11);
  const Tensor x = random_tensor(rng, {10, 2});
  const Tensor y = random_tensor(rng, {2});
  const GradCheckStats st = check_model_gradients(m, x, y);
  CHECK_MESSAGE(st.max_rel < 1e-4, st.worst << " rel " << st.max_rel);
  CHECK(st.checked > st.skipped);

  Tensor gx;
  auto [pred, cache] = forward(m, x);
  backward(m, cache, mse_loss(pred, y).grad, &gx);
  CHECK(gx.shape() == x.shape());
}

TEST_CASE("early stopping on a validation set that only gets worse") {
  HyperParams hp = tiny_hp();
  hp.learning_rate = 0.05;
  hp.batch_size = 4;
  hp.max_epochs = 40;
  hp.patience = 10;
  WindowedDataset tr = sine_windows(16, 10, 2, 1);
  WindowedDataset va = tr;
  tr.targets.fill(1.0);
  va.targets.fill(-1.0);
  ModelState m = build_model(hp, 2, RngStream(2));
  m.net.head.affine.weights.fill(0.0);
  const TrainResult r = train(m, tr, va, hp);
  CHECK(r.report.stopped_early);
  CHECK(r.report.epochs_completed() == 11);
  CHECK(r.report.best_epoch == 1);
  for (std::size_t e = 1; e < r.report.val_loss.size(); ++e) {
    CHECK(r.report.val_loss[e] > r.report.val_loss[e - 1]);
  }
  CHECK(evaluate_mse(r.best, va) == r.report.val_loss[0]);
}

TEST_CASE("training is deterministic and returns the best snapshot") {
  HyperParams hp = tiny_hp();
  hp.learning_rate = 0.05;
  hp.batch_size = 8;
  hp.max_epochs = 12;
  const WindowedDataset tr = sine_windows(40, 10, 2, 3), va = sine_windows(12, 10, 2, 4);
  const ModelState m = build_model(hp, 2, RngStream(5));
  const TrainResult a = train(m, tr, va, hp), b = train(m, tr, va, hp);
  CHECK(a.best == b.best);
  CHECK(a.report.train_loss == b.report.train_loss);
  CHECK(a.report.val_loss == b.report.val_loss);
  CHECK(a.report.best_epoch == b.report.best_epoch);
  const auto best = std::min_element(a.report.val_loss.begin(), a.report.val_loss.end());
  CHECK(a.report.best_epoch == static_cast<std::size_t>(best - a.report.val_loss.begin()) + 1);
  CHECK(evaluate_mse(a.best, va) == *best);
  CHECK(a.report.val_loss.front() > *best);

  hp.seed = 99;
  const TrainResult c = train(m, tr, va, hp);
  CHECK(c.report.train_loss != a.report.train_loss);

  hp.early_stopping = false;
  hp.max_epochs = 3;
  const TrainResult d = train(m, tr, va, hp);
  CHECK(d.report.epochs_completed() == 3);
  CHECK(evaluate_mse(d.best, va) == d.report.val_loss.back());
}

TEST_CASE("non-finite loss aborts training") {
  HyperParams hp = tiny_hp();
  hp.learning_rate = 1e200;
  hp.max_epochs = 5;
  const WindowedDataset tr = sine_windows(16, 10, 2, 6);
  CHECK_THROWS_AS(train(build_model(hp, 2, RngStream(1)), tr, tr, hp), NumericError);
  CHECK_THROWS_AS(train(build_model(hp, 2, RngStream(1)), tr, tr.select({}), hp), DataError);
}

// Acceptance runner: one PASS/FAIL line per criterion. AC-8 is reported
// without being gated.
#include "support.hpp"

#include "regpath/baselines.hpp"
#include "regpath/continuation.hpp"
#include "regpath/data.hpp"
#include "regpath/front_io.hpp"
#include "regpath/log.hpp"
#include "regpath/metrics.hpp"
#include "regpath/nn.hpp"
#include "regpath/problems.hpp"
#include "regpath/prox.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace regpath;
using regpath::testing::QuadraticProblem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Paths {
  fs::path iris = REGPATH_IRIS_CSV;
  fs::path mnist_images = REGPATH_MNIST_IMAGES;
  fs::path mnist_labels = REGPATH_MNIST_LABELS;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// ---------------------------------------------------------------- AC-1

Outcome ac1(const Paths&) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream detail;
  double worst_rel = 0, worst_res = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LassoInstanceSpec spec;
    spec.seed = seed;
    auto inst = make_random_lasso(spec);
    LassoProblem problem(inst.A, inst.b);
    const double L = problem.lipschitz();

    // Step sizes come from the problem's own scales: h = 1/L, and the Adam
    // predictor moves in units of ‖Aᵀb‖∞/L, the size of one gradient step from 0.
    const double theta_scale =
        (problem.A().transpose() * problem.b()).lpNorm<Eigen::Infinity>() / L;
    ContinuationConfig cfg;
    cfg.n_cont = 40;
    cfg.direction = LegDirection::both;
    cfg.sparsity_share = 0.1;
    cfg.eta = 1.0 / L;
    cfg.init_iters = 20000;
    cfg.corrector_iters = 20000;
    cfg.corrector_tol = 1e-11;
    cfg.predictor_iters = 7;
    cfg.adam.lr = 0.0045 * theta_scale;
    cfg.shrink_weight = 1.0;
    cfg.shrink_iters = 10;
    cfg.seed = seed;
    const ParamVector init = uniform_init(problem.dim(), 0.5, seed);
    const auto cm = continuation_run(problem, init, cfg);
    const FrontArchive oracle = regpath::testing::ista_front(problem, 50);

    const ReferencePoint ref = default_reference({&cm.archive, &oracle});
    const double hv_cm = hypervolume_2d(cm.archive, ref);
    const double hv_or = hypervolume_2d(oracle, ref);
    const double rel = std::abs(hv_cm - hv_or) / hv_or;
    double res = 0;
    for (const auto& p : cm.archive.points()) res = std::max(res, criticality_residual(problem, p.theta));
    worst_rel = std::max(worst_rel, rel);
    worst_res = std::max(worst_res, res);
    if (rel > 0.01 || res > 1e-6) ok = false;
    detail << " [seed " << seed << ": hv_rel " << fmt(rel) << ", max_res " << fmt(res) << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > 10) ok = false;
  return {ok, "worst hv_rel " + fmt(worst_rel) + " (<= 0.01), worst residual " + fmt(worst_res) +
                  " (<= 1e-6), " + fmt(secs, 3) + " s (<= 10)" + detail.str()};
}

// ---------------------------------------------------------------- AC-2

Outcome ac2(const Paths&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.1, 1.0);
  std::normal_distribution<double> nrm;
  double worst = 0;
  for (int k = 0; k < 25; ++k) {
    const Eigen::Vector2d theta(u(rng), u(rng));
    const Eigen::Vector2d g(nrm(rng), nrm(rng));
    const double w = pos(rng), h = pos(rng);
    QuadraticProblem problem(Eigen::Vector2d::Zero(), w);
    SolverConfig cfg;
    cfg.step_h = h;
    const auto r = direction_subproblem(g, theta, problem, cfg);
    const Eigen::Vector2d d_bf = regpath::testing::brute_force_direction_2d(g, theta, w, h);
    worst = std::max(worst, (r.d - d_bf).norm());
  }

  // f1 = ½(θ-1)², g2 = |θ|, h = 1.
  QuadraticProblem toy(Eigen::VectorXd::Ones(1), 1.0);
  SolverConfig cfg;
  cfg.step_h = 1.0;
  auto analytic = [&](double th) {
    ParamVector theta = ParamVector::Constant(1, th);
    return direction_subproblem(toy.grad_f1(theta, BatchSpec::full()), theta, toy, cfg).d(0);
  };
  const double e1 = std::abs(analytic(1.5) + 0.5);
  const double e2 = std::abs(analytic(0.5));
  const double e3 = std::abs(analytic(0.0));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst <= 1e-3 && e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-6 && secs <= 5;
  return {ok, "max |d - d_grid| " + fmt(worst) + " (<= 1e-3); analytic errors " + fmt(e1) + ", " +
                  fmt(e2) + ", " + fmt(e3) + " (<= 1e-6); " + fmt(secs, 3) + " s (<= 5)"};
}

// ---------------------------------------------------------------- AC-3

struct GradCheck {
  double rel_error = 0;
  int probed = 0;
  int skipped = 0;
};

std::vector<bool> sign_pattern(const MlpArchitecture& arch, const ParamVector& theta,
                               const RowMatrix& x) {
  std::vector<bool> out;
  const auto pre = mlp_preactivations(arch, theta, x);
  for (std::size_t l = 0; l + 1 < pre.size(); ++l)  // output layer has no ReLU
    for (Index i = 0; i < pre[l].size(); ++i) out.push_back(pre[l].data()[i] > 0);
  return out;
}

GradCheck gradient_check(const MlpArchitecture& arch, std::uint64_t seed, int max_probes,
                         double scale) {
  std::mt19937_64 rng(seed);
  const Index rows = 4;
  Batch batch;
  batch.inputs = RowMatrix(rows, arch.input_dim());
  std::uniform_real_distribution<double> u01(0, 1);
  for (Index i = 0; i < batch.inputs.size(); ++i) batch.inputs.data()[i] = u01(rng);
  std::uniform_int_distribution<int> cls(0, static_cast<int>(arch.num_classes()) - 1);
  for (Index i = 0; i < rows; ++i) batch.labels.push_back(cls(rng));

  const ParamVector theta = mlp_init(arch, scale, seed);
  const LossGrad lg = loss_and_grad(arch, theta, batch);
  const auto base = sign_pattern(arch, theta, batch.inputs);

  std::vector<Index> coords(theta.size());
  std::iota(coords.begin(), coords.end(), Index{0});
  if (static_cast<Index>(coords.size()) > max_probes) {
    std::shuffle(coords.begin(), coords.end(), rng);
    coords.resize(max_probes);
  }

  const double eps = 1e-6;
  GradCheck out;
  double diff2 = 0, norm2 = 0;
  for (Index i : coords) {
    ParamVector tp = theta, tm = theta;
    tp(i) += eps;
    tm(i) -= eps;
    // A probe that flips a ReLU is not differentiable across its stencil.
    if (sign_pattern(arch, tp, batch.inputs) != base || sign_pattern(arch, tm, batch.inputs) != base) {
      ++out.skipped;
      continue;
    }
    const double fd = (mlp_loss(arch, tp, batch.inputs, batch.labels) -
                       mlp_loss(arch, tm, batch.inputs, batch.labels)) /
                      (2 * eps);
    diff2 += (fd - lg.grad(i)) * (fd - lg.grad(i));
    norm2 += std::max(fd * fd, lg.grad(i) * lg.grad(i));
    ++out.probed;
  }
  out.rel_error = std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12);
  return out;
}

Outcome ac3(const Paths&) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_small = 0, worst_big = 0;
  int probed = 0, skipped = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = gradient_check(MlpArchitecture{{4, 4, 4, 3}}, seed, 1000, 0.5);
    const auto b = gradient_check(MlpArchitecture{{784, 20, 20, 10}}, 100 + seed, 300, 0.1);
    worst_small = std::max(worst_small, a.rel_error);
    worst_big = std::max(worst_big, b.rel_error);
    probed += a.probed + b.probed;
    skipped += a.skipped + b.skipped;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst_small <= 1e-5 && worst_big <= 1e-5 && secs <= 30 && probed > 0;
  return {ok, "worst relative error [4,4,4,3] " + fmt(worst_small) + ", [784,20,20,10] " +
                  fmt(worst_big) + " (<= 1e-5); " + std::to_string(probed) + " probes, " +
                  std::to_string(skipped) + " kink-skipped; " + fmt(secs, 3) + " s (<= 30)"};
}

// ---------------------------------------------------------------- AC-4

ContinuationConfig iris_config() {
  ContinuationConfig cfg;
  cfg.n_cont = 50;
  cfg.direction = LegDirection::toward_loss;
  // A long initial solve from near-zero weights prunes every weight to
  // exactly 0, where all weight gradients vanish and the path cannot start.
  cfg.init_iters = 20;
  cfg.predictor_iters = 7;
  cfg.corrector_iters = 20;
  cfg.eta = 0.05;
  cfg.adam.lr = 0.02;
  cfg.seed = 0;
  return cfg;
}

Outcome ac4(const Paths& paths) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset iris = load_iris(paths.iris);
  auto [train, test] = split(iris, SplitSpec{0.8, 0});
  const MlpArchitecture arch{{4, 4, 4, 3}};
  MlpProblem problem(arch, train, test);
  const ContinuationConfig cfg = iris_config();
  const auto res = continuation_run(problem, mlp_init(arch, 1e-2, 0), cfg);

  const FrontArchive nd = front_filter_nondominated(res.archive);
  int f1_violations = 0, l1_violations = 0;
  const auto& pts = res.archive.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].f1_train > pts[i - 1].f1_train) ++f1_violations;
    if (pts[i].l1_unscaled < pts[i - 1].l1_unscaled) ++l1_violations;
  }
  const auto best = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.f1_train < b.f1_train;
  });
  const double acc = best->acc_train.value_or(0.0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = cfg.n_cont >= 30 && nd.size() >= 30 && f1_violations == 0 &&
                  l1_violations == 0 && acc >= 0.90 && secs <= 120;
  std::string notes;
  for (const auto& n : res.notes) notes += " note: " + n;
  return {ok, std::to_string(nd.size()) + "/" + std::to_string(pts.size()) +
                  " non-dominated (>= 30); f1 increases " + std::to_string(f1_violations) +
                  ", l1 decreases " + std::to_string(l1_violations) +
                  " (both 0); min-loss train accuracy " + fmt(acc) + " (>= 0.90), test " +
                  fmt(best->acc_test.value_or(0.0)) + "; " + fmt(secs, 3) + " s (<= 120)" + notes};
}

// ---------------------------------------------------------------- AC-5

struct MnistSplit {
  Dataset train;
  Dataset test;
};

MnistSplit load_mnist_split(const Paths& paths, std::uint64_t seed, Index train_rows) {
  const Dataset all = load_mnist(paths.mnist_images, paths.mnist_labels);
  auto [train, test] = split(all, SplitSpec{0.8, seed});
  return {head(train, train_rows), std::move(test)};
}

// Starts near zero and walks toward lower loss. Stochastic MPG from a random
// init mostly shrinks weights without training them, so a mid-front start
// point is out of reach at desk-scale budgets.
ContinuationConfig mnist_cm_config(std::uint64_t seed, int n_points, int init_iters) {
  ContinuationConfig cfg;
  cfg.n_cont = n_points;
  cfg.direction = LegDirection::toward_loss;
  cfg.init_iters = init_iters;
  cfg.predictor_iters = 7;
  cfg.corrector_iters = 20;
  cfg.eta = 0.05;
  cfg.adam.lr = 1e-3;
  cfg.batch_size = 64;
  cfg.seed = seed;
  return cfg;
}

constexpr double kMnistInitScale = 0.01;

Outcome ac5(const Paths& paths) {
  const auto t0 = std::chrono::steady_clock::now();
  const MlpArchitecture arch{{784, 20, 20, 10}};
  const int n_points = 24;
  // The initial solve gets at least 500 iterations, padded so the CM total
  // splits evenly over the WS weights.
  const auto probe = mnist_cm_config(0, n_points, 500);
  const int legs = (n_points - 1) * (probe.predictor_iters + probe.corrector_iters);
  const int init_iters = 500 + (n_points - (500 + legs) % n_points) % n_points;
  bool ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto data = load_mnist_split(paths, seed, 8000);
    MlpProblem problem(arch, data.train, data.test);

    const auto cfg = mnist_cm_config(seed, n_points, init_iters);
    const auto cm = continuation_run(problem, mlp_init(arch, kMnistInitScale, seed), cfg);
    const std::int64_t budget = cm.trace.budget.gradient_evals;

    WsConfig ws_cfg;
    ws_cfg.n_lambda = n_points;
    ws_cfg.iters_per_lambda = static_cast<int>(budget / n_points);
    ws_cfg.adam.lr = cfg.adam.lr;
    ws_cfg.init_scale = kMnistInitScale;
    ws_cfg.batch_size = 64;
    ws_cfg.seed = seed;
    const auto ws = ws_sweep(problem, ws_cfg);

    const double gap_cm = max_gap(cm.archive);
    const double gap_ws = max_gap(ws.archive);
    const bool equal = ws.trace.budget.gradient_evals == budget &&
                       cm.archive.size() == ws.archive.size();
    if (!(gap_cm < gap_ws) || !equal) ok = false;
    detail << " [seed " << seed << ": CM gap " << fmt(gap_cm) << " vs WS " << fmt(gap_ws)
           << ", grad evals " << budget << "/" << ws.trace.budget.gradient_evals << ", points "
           << cm.archive.size() << "/" << ws.archive.size() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > 900) ok = false;
  return {ok, "CM max_gap < WS max_gap on every seed at equal budget; " + fmt(secs, 3) +
                  " s (<= 900)" + detail.str()};
}

// ---------------------------------------------------------------- AC-6

Outcome ac6(const Paths&) {
  const Index iris = mlp_param_count(MlpArchitecture{{4, 4, 4, 3}});
  const Index mnist = mlp_param_count(MlpArchitecture{{784, 20, 20, 10}});
  return {iris == 55 && mnist == 16330,
          "[4,4,4,3] -> " + std::to_string(iris) + " (55), [784,20,20,10] -> " +
              std::to_string(mnist) + " (16330)"};
}

// ---------------------------------------------------------------- AC-7

Outcome ac7(const Paths&) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> failed;
  auto check = [&](const std::string& name, bool ok) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nrm;
  std::uniform_real_distribution<double> u01(0, 1);

  // prox agrees with a 1-D grid minimization of c|φ| + ½(φ - v)².
  {
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const double v = 3 * nrm(rng), c = 2 * u01(rng);
      double best = std::numeric_limits<double>::infinity(), arg = 0;
      for (int i = 0; i <= 200000; ++i) {
        const double phi = -8 + 16.0 * i / 200000;
        const double obj = c * std::abs(phi) + 0.5 * (phi - v) * (phi - v);
        if (obj < best) {
          best = obj;
          arg = phi;
        }
      }
      worst = std::max(worst, std::abs(soft_threshold(ParamVector::Constant(1, v), c)(0) - arg));
    }
    check("prox grid oracle", worst <= 1e-4);
  }
  // nonexpansiveness
  {
    bool ok = true;
    for (int k = 0; k < 200; ++k) {
      ParamVector a(8), b(8);
      for (int i = 0; i < 8; ++i) {
        a(i) = nrm(rng);
        b(i) = nrm(rng);
      }
      const double c = u01(rng);
      ok = ok && (soft_threshold(a, c) - soft_threshold(b, c)).norm() <= (a - b).norm() + 1e-15;
    }
    check("prox nonexpansive", ok);
  }
  // dominance filter against a brute-force oracle
  {
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      FrontArchive a;
      for (int i = 0; i < 30; ++i) {
        ParetoPoint p;
        p.f1_train = std::round(10 * u01(rng)) / 10;
        p.g2 = std::round(10 * u01(rng)) / 10;
        a.append(p, Direction::ws);
      }
      const FrontArchive nd = front_filter_nondominated(a);
      std::size_t expected = 0;
      for (const auto& p : a.points()) {
        bool dom = false;
        for (const auto& q : a.points())
          dom = dom || ((q.f1_train <= p.f1_train && q.g2 <= p.g2) &&
                        (q.f1_train < p.f1_train || q.g2 < p.g2));
        if (!dom) ++expected;
      }
      ok = ok && nd.size() == expected;
    }
    check("dominance filter oracle", ok);
  }
  // hypervolume against Monte Carlo
  {
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
      FrontArchive a;
      for (int i = 0; i < 15; ++i) {
        ParetoPoint p;
        p.f1_train = u01(rng);
        p.g2 = u01(rng);
        a.append(p, Direction::ws);
      }
      const ReferencePoint ref{1.2, 1.3};
      const double hv = hypervolume_2d(a, ref);
      const int samples = 400000;
      int hit = 0;
      for (int s = 0; s < samples; ++s) {
        const double x = ref.f1_ref * u01(rng), y = ref.g2_ref * u01(rng);
        for (const auto& p : a.points()) {
          if (p.f1_train <= x && p.g2 <= y) {
            ++hit;
            break;
          }
        }
      }
      const double mc = ref.f1_ref * ref.g2_ref * hit / samples;
      worst = std::max(worst, std::abs(mc - hv) / hv);
    }
    check("hypervolume Monte Carlo", worst <= 0.01);
  }
  // MPG full-batch monotonicity on convex instances
  {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      LassoInstanceSpec spec;
      spec.seed = 50 + seed;
      auto inst = make_random_lasso(spec);
      LassoProblem problem(inst.A, inst.b);
      SolverConfig cfg;
      cfg.step_h = 1.0 / problem.lipschitz();
      cfg.max_iter = 300;
      FullBatchSampler full;
      const auto r = mpg_solve(problem, uniform_init(problem.dim(), 2.0, seed), cfg, full);
      for (std::size_t i = 1; i < r.trace.rows.size(); ++i) {
        ok = ok && r.trace.rows[i].f1 <= r.trace.rows[i - 1].f1 + 1e-12 &&
             r.trace.rows[i].f2 <= r.trace.rows[i - 1].f2 + 1e-12;
      }
    }
    check("MPG monotone", ok);
  }
  // bit-identical reruns
  {
    LassoInstanceSpec spec;
    spec.seed = 9;
    auto inst = make_random_lasso(spec);
    LassoProblem problem(inst.A, inst.b);
    ContinuationConfig cfg;
    cfg.n_cont = 10;
    cfg.eta = 0.01;
    const ParamVector init = uniform_init(problem.dim(), 0.5, 1);
    std::ostringstream a, b;
    write_front_csv(a, continuation_run(problem, init, cfg).archive);
    write_front_csv(b, continuation_run(problem, init, cfg).archive);
    WsConfig ws;
    ws.n_lambda = 5;
    ws.iters_per_lambda = 50;
    ws.batch_size = 5;
    std::ostringstream c, d;
    write_front_csv(c, ws_sweep(problem, ws).archive);
    write_front_csv(d, ws_sweep(problem, ws).archive);
    check("determinism", a.str() == b.str() && c.str() == d.str());
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = failed.empty() ? "all 6 invariant groups hold" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty() && secs <= 120, detail + "; " + fmt(secs, 3) + " s (<= 120)"};
}

// ---------------------------------------------------------------- AC-8

Outcome ac8(const Paths& paths) {
  const auto t0 = std::chrono::steady_clock::now();
  const MlpArchitecture arch{{784, 20, 20, 10}};
  const Dataset all = load_mnist(paths.mnist_images, paths.mnist_labels);
  auto [train, test] = split(all, SplitSpec{0.8, 0});
  MlpProblem problem(arch, train, test);
  ContinuationConfig cfg = mnist_cm_config(0, 44, 500);
  const auto res = continuation_run(problem, mlp_init(arch, kMnistInitScale, 0), cfg);
  double best = 0;
  for (const auto& p : res.archive.points()) best = std::max(best, p.acc_test.value_or(0.0));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {true, "best CM test accuracy " + fmt(100 * best, 4) + "% vs 95.66% reference, gap " +
                    fmt(100 * (best - 0.9566), 3) + " points; " + std::to_string(all.rows()) +
                    " MNIST samples, " + std::to_string(res.trace.budget.gradient_evals) +
                    " gradient evaluations, " + fmt(secs, 3) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> only;
  Paths paths;
  std::string iris = paths.iris.string(), images = paths.mnist_images.string(),
              labels = paths.mnist_labels.string();
  app.add_option("--only", only, "criteria to run, e.g. AC-1");
  app.add_option("--iris", iris);
  app.add_option("--mnist-images", images);
  app.add_option("--mnist-labels", labels);
  CLI11_PARSE(app, argc, argv);
  paths.iris = iris;
  paths.mnist_images = images;
  paths.mnist_labels = labels;
  set_quiet(true);

  const std::vector<std::tuple<std::string, bool, std::function<Outcome(const Paths&)>>> all = {
      {"AC-1", true, ac1}, {"AC-2", true, ac2}, {"AC-3", true, ac3}, {"AC-4", true, ac4},
      {"AC-5", true, ac5}, {"AC-6", true, ac6}, {"AC-7", true, ac7}, {"AC-8", false, ac8}};

  int failures = 0;
  for (const auto& [name, gated, fn] : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = fn(paths);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const char* status = gated ? (o.pass ? "PASS" : "FAIL") : "INFO";
    std::cout << name << ' ' << status << "  " << o.detail << std::endl;
    if (gated && !o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

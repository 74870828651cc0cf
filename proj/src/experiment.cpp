#include "regpath/experiment.hpp"

#include "regpath/front_io.hpp"
#include "regpath/log.hpp"
#include "regpath/metrics.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace regpath {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid config:";
  for (const auto& s : issues) out += "\n  " + s;
  return out;
}

// Reads one JSON object, recording type errors and unknown keys under
// dotted field paths, and builds the resolved copy with defaults filled in.
class ObjectReader {
 public:
  ObjectReader(const json* j, std::string path, std::vector<std::string>& issues)
      : j_(j), path_(std::move(path)), issues_(issues), resolved_(json::object()) {
    if (j_ && !j_->is_object()) {
      issue("", "must be an object");
      j_ = nullptr;
    }
  }

  template <class T>
  T get(const std::string& key, T def) {
    auto v = read<T>(key);
    T out = v.value_or(def);
    resolved_[key] = out;
    return out;
  }

  template <class T>
  std::optional<T> get_optional(const std::string& key) {
    auto v = read<T>(key);
    resolved_[key] = v ? json(*v) : json(nullptr);
    return v;
  }

  template <class T>
  T require(const std::string& key) {
    auto v = read<T>(key);
    if (!v) {
      if (!present(key)) issue(key, "is required");
      resolved_[key] = nullptr;
      return T{};
    }
    resolved_[key] = *v;
    return *v;
  }

  ObjectReader child(const std::string& key) {
    seen_.insert(key);
    const json* c = (j_ && j_->contains(key) && !(*j_)[key].is_null()) ? &(*j_)[key] : nullptr;
    return ObjectReader(c, field(key), issues_);
  }

  // Accepts a string or an array of strings.
  std::vector<std::string> get_string_list(const std::string& key) {
    seen_.insert(key);
    std::vector<std::string> out;
    if (!present(key)) {
      resolved_[key] = json::array();
      return out;
    }
    const json& v = (*j_)[key];
    if (v.is_string()) {
      out.push_back(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_string()) {
          issue(key, "must contain only strings");
          return {};
        }
        out.push_back(e.get<std::string>());
      }
    } else {
      issue(key, "must be a string or an array of strings");
    }
    resolved_[key] = out;
    return out;
  }

  void set_resolved(const std::string& key, json v) { resolved_[key] = std::move(v); }

  void finish() {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!seen_.count(it.key())) issue(it.key(), "unknown key");
    }
  }

  json resolved() const { return resolved_; }
  void issue(const std::string& key, const std::string& msg) {
    issues_.push_back(field(key) + ": " + msg);
  }
  std::string field(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  bool present(const std::string& key) const {
    return j_ && j_->contains(key) && !(*j_)[key].is_null();
  }

  template <class T>
  std::optional<T> read(const std::string& key) {
    seen_.insert(key);
    if (!present(key)) return std::nullopt;
    const json& v = (*j_)[key];
    if constexpr (std::is_same_v<T, bool>) {
      if (v.is_boolean()) return v.get<bool>();
      issue(key, "must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (v.is_number_integer()) {
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0) return v.get<T>();
          issue(key, "must be a non-negative integer");
          return std::nullopt;
        }
        return v.get<T>();
      }
      issue(key, "must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (v.is_number()) return v.get<T>();
      issue(key, "must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (v.is_string()) return v.get<std::string>();
      issue(key, "must be a string");
    } else if constexpr (std::is_same_v<T, std::vector<std::int64_t>>) {
      if (v.is_array()) {
        std::vector<std::int64_t> out;
        for (const auto& e : v) {
          if (!e.is_number_integer()) {
            issue(key, "must be an array of integers");
            return std::nullopt;
          }
          out.push_back(e.get<std::int64_t>());
        }
        return out;
      }
      issue(key, "must be an array of integers");
    }
    return std::nullopt;
  }

  const json* j_;
  std::string path_;
  std::vector<std::string>& issues_;
  json resolved_;
  std::set<std::string> seen_;
};

AdamConfig read_adam(ObjectReader r, json& resolved, const AdamConfig& def) {
  AdamConfig a;
  a.lr = r.get<double>("lr", def.lr);
  a.beta1 = r.get<double>("beta1", def.beta1);
  a.beta2 = r.get<double>("beta2", def.beta2);
  a.epsilon = r.get<double>("epsilon", def.epsilon);
  if (!(a.lr > 0)) r.issue("lr", "must be > 0");
  if (!(a.beta1 > 0 && a.beta1 < 1)) r.issue("beta1", "must lie in (0,1)");
  if (!(a.beta2 > 0 && a.beta2 < 1)) r.issue("beta2", "must lie in (0,1)");
  if (!(a.epsilon > 0)) r.issue("epsilon", "must be > 0");
  r.finish();
  resolved = r.resolved();
  return a;
}

fs::path absolute_from(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig parse_config(const json& j, const fs::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  std::vector<std::string> issues;
  ExperimentConfig cfg;
  ObjectReader root(&j, "", issues);
  if (!j.is_object()) throw ConfigError(issues);

  cfg.seed = root.get<std::uint64_t>("seed", 0);
  if (seed_override) {
    cfg.seed = *seed_override;
    root.set_resolved("seed", cfg.seed);
  }
  cfg.precision = root.get<std::string>("precision", "double");
  if (cfg.precision != "double") root.issue("precision", "only \"double\" is supported");

  // problem
  {
    ObjectReader p = root.child("problem");
    const std::string type = p.require<std::string>("type");
    if (type == "lasso") {
      LassoProblemSpec s;
      s.instance.rows = p.get<std::int64_t>("rows", 20);
      s.instance.cols = p.get<std::int64_t>("cols", 10);
      s.instance.noise = p.get<double>("noise", 0.01);
      s.instance.density = p.get<double>("density", 0.3);
      s.instance.seed = p.get<std::uint64_t>("seed", cfg.seed);
      s.l1_weight = p.get_optional<double>("l1_weight");
      s.init_scale = p.get<double>("init_scale", 0.0);
      if (s.instance.rows < 1) p.issue("rows", "must be >= 1");
      if (s.instance.cols < 1) p.issue("cols", "must be >= 1");
      if (!(s.instance.density > 0 && s.instance.density <= 1)) p.issue("density", "must lie in (0,1]");
      if (s.l1_weight && !(*s.l1_weight >= 0)) p.issue("l1_weight", "must be >= 0");
      if (!(s.init_scale >= 0)) p.issue("init_scale", "must be >= 0");
      cfg.problem = s;
    } else if (type == "mlp") {
      MlpProblemSpec s;
      s.dataset = p.require<std::string>("dataset");
      if (!s.dataset.empty() && s.dataset != "iris" && s.dataset != "mnist")
        p.issue("dataset", "must be \"iris\" or \"mnist\"");
      const std::vector<std::int64_t> def_arch =
          s.dataset == "mnist" ? std::vector<std::int64_t>{784, 20, 20, 10}
                               : std::vector<std::int64_t>{4, 4, 4, 3};
      const auto arch = p.get<std::vector<std::int64_t>>("arch", def_arch);
      s.arch.layer_sizes.assign(arch.begin(), arch.end());
      if (arch.size() < 2 || std::any_of(arch.begin(), arch.end(), [](auto v) { return v < 1; }))
        p.issue("arch", "needs >= 2 positive layer sizes");
      s.train_fraction = p.get<double>("train_fraction", 0.8);
      if (!(s.train_fraction > 0 && s.train_fraction < 1)) p.issue("train_fraction", "must lie in (0,1)");
      const auto limit = p.get_optional<std::int64_t>("train_limit");
      if (limit) {
        if (*limit < 1) p.issue("train_limit", "must be >= 1");
        s.train_limit = *limit;
      }
      s.init_scale = p.get<double>("init_scale", 0.01);
      if (!(s.init_scale >= 0)) p.issue("init_scale", "must be >= 0");
      cfg.problem = s;
    } else if (!type.empty()) {
      p.issue("type", "must be \"lasso\" or \"mlp\"");
    }
    p.finish();
    root.set_resolved("problem", p.resolved());
  }

  // mode
  {
    ObjectReader m = root.child("mode");
    const std::string type = m.get<std::string>("type", "deterministic");
    if (type == "stochastic") {
      const auto bs = m.get<std::int64_t>("batch_size", 64);
      if (bs < 1) m.issue("batch_size", "must be >= 1");
      cfg.batch_size = bs;
    } else if (type != "deterministic") {
      m.issue("type", "must be \"deterministic\" or \"stochastic\"");
    }
    m.finish();
    root.set_resolved("mode", m.resolved());
  }

  // method
  {
    ObjectReader m = root.child("method");
    const std::string type = m.require<std::string>("type");
    const std::size_t issues_before = issues.size();
    json adam_resolved;
    if (type == "continuation") {
      ContinuationConfig c;
      c.n_cont = m.get<int>("n_cont", c.n_cont);
      c.predictor_iters = m.get<int>("predictor_iters", c.predictor_iters);
      c.corrector_iters = m.get<int>("corrector_iters", c.corrector_iters);
      c.init_iters = m.get<int>("init_iters", c.init_iters);
      c.eta = m.get<double>("eta", c.eta);
      const std::string dir = m.get<std::string>("direction", "both");
      if (dir == "toward_loss") {
        c.direction = LegDirection::toward_loss;
      } else if (dir == "toward_sparsity") {
        c.direction = LegDirection::toward_sparsity;
      } else if (dir == "both") {
        c.direction = LegDirection::both;
      } else {
        m.issue("direction", "must be toward_loss, toward_sparsity or both");
      }
      c.adam = read_adam(m.child("adam"), adam_resolved, c.adam);
      m.set_resolved("adam", adam_resolved);
      c.slope_stop = m.get_optional<double>("slope_stop");
      const std::string pred = m.get<std::string>("gradient_predictor", "adam");
      if (pred == "gd") {
        c.gradient_predictor = GradientPredictor::gd;
      } else if (pred != "adam") {
        m.issue("gradient_predictor", "must be \"adam\" or \"gd\"");
      }
      c.shrink_iters = m.get_optional<int>("shrink_iters");
      c.shrink_weight = m.get_optional<double>("shrink_weight");
      c.sparsity_share = m.get<double>("sparsity_share", c.sparsity_share);
      c.corrector_tol = m.get_optional<double>("corrector_tol");
      c.dual_tol = m.get<double>("dual_tol", c.dual_tol);
      c.seed = cfg.seed;
      c.batch_size = cfg.batch_size;
      // Field checks above already explain most failures.
      try {
        c.validate();
      } catch (const std::invalid_argument& e) {
        if (issues.size() == issues_before) m.issue("", e.what());
      }
      cfg.method = c;
    } else if (type == "ws") {
      WsConfig w;
      w.n_lambda = m.get<int>("n_lambda", w.n_lambda);
      w.iters_per_lambda = m.get<int>("iters_per_lambda", w.iters_per_lambda);
      w.adam = read_adam(m.child("adam"), adam_resolved, w.adam);
      m.set_resolved("adam", adam_resolved);
      w.warm_start = m.get<bool>("warm_start", w.warm_start);
      w.init_scale = m.get<double>("init_scale", w.init_scale);
      w.seed = cfg.seed;
      w.batch_size = cfg.batch_size;
      // Field checks above already explain most failures.
      try {
        w.validate();
      } catch (const std::invalid_argument& e) {
        if (issues.size() == issues_before) m.issue("", e.what());
      }
      cfg.method = w;
    } else if (!type.empty()) {
      m.issue("type", "must be \"continuation\" or \"ws\"");
    }
    m.finish();
    root.set_resolved("method", m.resolved());
  }

  // paths
  {
    ObjectReader p = root.child("paths");
    cfg.paths.iris_csv = absolute_from(base_dir, p.get<std::string>("iris_csv", ""));
    for (const auto& s : p.get_string_list("mnist_images"))
      cfg.paths.mnist_images.push_back(absolute_from(base_dir, s));
    for (const auto& s : p.get_string_list("mnist_labels"))
      cfg.paths.mnist_labels.push_back(absolute_from(base_dir, s));
    cfg.paths.output_dir = absolute_from(base_dir, p.get<std::string>("output_dir", "runs"));
    if (cfg.paths.mnist_images.size() != cfg.paths.mnist_labels.size())
      p.issue("mnist_labels", "must list one labels file per images file");
    if (auto* mlp = std::get_if<MlpProblemSpec>(&cfg.problem)) {
      if (mlp->dataset == "iris" && cfg.paths.iris_csv.empty())
        p.issue("iris_csv", "is required for the iris dataset");
      if (mlp->dataset == "mnist" && cfg.paths.mnist_images.empty())
        p.issue("mnist_images", "is required for the mnist dataset");
    }
    p.finish();
    json pr = p.resolved();
    pr["iris_csv"] = cfg.paths.iris_csv.string();
    pr["mnist_images"] = json::array();
    for (const auto& x : cfg.paths.mnist_images) pr["mnist_images"].push_back(x.string());
    pr["mnist_labels"] = json::array();
    for (const auto& x : cfg.paths.mnist_labels) pr["mnist_labels"].push_back(x.string());
    pr["output_dir"] = cfg.paths.output_dir.string();
    root.set_resolved("paths", pr);
  }

  root.finish();
  if (!issues.empty()) throw ConfigError(issues);
  cfg.resolved = root.resolved();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"<file>: cannot open " + path.string()});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<file>: ") + e.what()});
  }
  return parse_config(j, fs::absolute(path).parent_path(), seed_override);
}

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  BuiltProblem out;
  if (const auto* lasso = std::get_if<LassoProblemSpec>(&cfg.problem)) {
    auto inst = make_random_lasso(lasso->instance);
    out.problem = std::make_unique<LassoProblem>(std::move(inst.A), std::move(inst.b),
                                                 lasso->l1_weight);
    out.theta_init = uniform_init(out.problem->dim(), lasso->init_scale, cfg.seed);
    return out;
  }
  const auto& mlp = std::get<MlpProblemSpec>(cfg.problem);
  Dataset full;
  if (mlp.dataset == "iris") {
    full = load_iris(cfg.paths.iris_csv);
  } else {
    for (std::size_t k = 0; k < cfg.paths.mnist_images.size(); ++k) {
      Dataset part = load_mnist(cfg.paths.mnist_images[k], cfg.paths.mnist_labels[k]);
      full = k == 0 ? std::move(part) : concat(full, part);
    }
  }
  auto [train, test] = split(full, SplitSpec{mlp.train_fraction, cfg.seed});
  if (mlp.train_limit) train = head(train, *mlp.train_limit);
  out.problem = std::make_unique<MlpProblem>(mlp.arch, std::move(train), std::move(test));
  out.theta_init = mlp_init(mlp.arch, mlp.init_scale, cfg.seed);
  return out;
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%d-%H%M%S");
  return os.str();
}

fs::path fresh_run_dir(const fs::path& root) {
  fs::create_directories(root);
  const std::string base = "run-" + timestamp();
  fs::path dir = root / base;
  for (int k = 1; fs::exists(dir); ++k) dir = root / (base + "-" + std::to_string(k));
  fs::create_directory(dir);
  return dir;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json budget_json(const Budget& b) {
  return {{"gradient_evals", b.gradient_evals},
          {"prox_evals", b.prox_evals},
          {"samples_touched", b.samples_touched}};
}

json front_metrics(const FrontArchive& archive, const ReferencePoint& ref) {
  json m;
  const FrontArchive nd = front_filter_nondominated(archive);
  m["n_points"] = archive.size();
  m["n_nondominated"] = nd.size();
  m["reference"] = {{"f1", ref.f1_ref}, {"g2", ref.g2_ref}};
  m["hypervolume"] = archive.empty() ? json(nullptr) : json(hypervolume_2d(archive, ref));
  json gap = nullptr;
  if (nd.size() >= 2) {
    try {
      gap = max_gap(archive);
    } catch (const std::invalid_argument&) {
    }
  }
  m["max_gap"] = gap;
  m["max_gap_normalization"] = "bounding box of the front's own non-dominated points";
  return m;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, fs::path out_root) {
  if (out_root.empty()) out_root = cfg.paths.output_dir;
  RunOutcome out;
  out.run_dir = fresh_run_dir(out_root);
  write_json(out.run_dir / "config.resolved.json", cfg.resolved);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    BuiltProblem built = build_problem(cfg);
    std::vector<std::string> notes;
    std::string method;
    if (const auto* cc = std::get_if<ContinuationConfig>(&cfg.method)) {
      method = "continuation";
      auto res = continuation_run(*built.problem, built.theta_init, *cc);
      out.archive = std::move(res.archive);
      out.trace = std::move(res.trace);
      notes = std::move(res.notes);
    } else {
      method = "ws";
      auto res = ws_sweep(*built.problem, std::get<WsConfig>(cfg.method));
      out.archive = std::move(res.archive);
      out.trace = std::move(res.trace);
      notes = std::move(res.failures);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_front_csv(out.run_dir / "front.csv", out.archive);
    {
      std::ofstream tr(out.run_dir / "trace.csv");
      write_trace_csv(tr, out.trace);
    }

    json m;
    m["method"] = method;
    m["elapsed_seconds"] = elapsed;
    m["budget"] = budget_json(budget_report(out.trace));
    if (!out.archive.empty()) {
      m.update(front_metrics(out.archive, default_reference({&out.archive})));
      double best_train = -1, best_test = -1, min_f1 = out.archive[0].f1_train;
      for (const auto& p : out.archive.points()) {
        if (p.acc_train) best_train = std::max(best_train, *p.acc_train);
        if (p.acc_test) best_test = std::max(best_test, *p.acc_test);
        min_f1 = std::min(min_f1, p.f1_train);
      }
      m["min_f1_train"] = min_f1;
      m["best_acc_train"] = best_train >= 0 ? json(best_train) : json(nullptr);
      m["best_acc_test"] = best_test >= 0 ? json(best_test) : json(nullptr);
    }
    m["notes"] = notes;
    write_json(out.run_dir / "metrics.json", m);
    out.metrics = std::move(m);
  } catch (const std::exception& e) {
    write_json(out.run_dir / "error.json", {{"error", e.what()}});
    throw;
  }
  return out;
}

json compare_fronts(const FrontArchive& a, const FrontArchive& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("compare: both fronts need points");
  const ReferencePoint ref = default_reference({&a, &b});

  auto dominated_by = [](const FrontArchive& x, const FrontArchive& y) {
    std::size_t n = 0;
    for (const auto& p : x.points()) {
      for (const auto& q : y.points()) {
        if (dominates(q, p)) {
          ++n;
          break;
        }
      }
    }
    return n;
  };
  // Points of x that are non-dominated within the union of x and y.
  auto contributes = [](const FrontArchive& x, const FrontArchive& y) {
    std::size_t n = 0;
    for (const auto& p : x.points()) {
      bool dom = false;
      for (const auto& q : x.points()) dom = dom || dominates(q, p);
      for (const auto& q : y.points()) dom = dom || dominates(q, p);
      if (!dom) ++n;
    }
    return n;
  };

  json report;
  report["reference"] = {{"f1", ref.f1_ref}, {"g2", ref.g2_ref}};
  json ja = front_metrics(a, ref), jb = front_metrics(b, ref);
  ja["dominated_by_other"] = dominated_by(a, b);
  jb["dominated_by_other"] = dominated_by(b, a);
  ja["nondominated_in_union"] = contributes(a, b);
  jb["nondominated_in_union"] = contributes(b, a);
  report["a"] = ja;
  report["b"] = jb;
  return report;
}

json compare_front_files(const fs::path& a, const fs::path& b, const fs::path& out_json) {
  json report = compare_fronts(read_front_csv(a), read_front_csv(b));
  report["a"]["path"] = a.string();
  report["b"]["path"] = b.string();
  if (!out_json.empty()) write_json(out_json, report);
  return report;
}

}  // namespace regpath

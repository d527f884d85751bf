#include "conekit/cli.hpp"

#include "conekit/blowup.hpp"
#include "conekit/domain_json.hpp"
#include "conekit/hypotheses.hpp"
#include "conekit/kernels.hpp"
#include "conekit/scaling_spheres.hpp"
#include "conekit/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace conekit::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class OptType { Int, Double, UInt64, String };

struct OptionInfo {
  const char* name;
  OptType type;
  const char* help;
};

const std::vector<OptionInfo>& option_table() {
  static const std::vector<OptionInfo> table = {
      {"config", OptType::String, "JSON config file; flags override its entries"},
      {"seed", OptType::UInt64, "seed for all sampling"},
      {"out", OptType::String, "output directory (writes <command>.json and <command>.csv)"},
      {"format", OptType::String, "stdout format: json or csv"},
      {"n", OptType::Int, "dimension"},
      {"s", OptType::Double, "order s"},
      {"a", OptType::Double, "weight exponent a in |x|^a u^p"},
      {"p", OptType::Double, "power p"},
      {"t", OptType::Double, "source term t"},
      {"k", OptType::Int, "bootstrap iterations"},
      {"mu0", OptType::Double, "initial bootstrap exponent"},
      {"direction", OptType::String, "DilateOutward, DilateFundamental or ShrinkInward"},
      {"which", OptType::String, "hypothesis H1, H2, H3, H2t or H3t"},
      {"domain", OptType::String, "domain JSON (inline object or file path)"},
      {"normalization", OptType::String, "Angular or PaperCycles"},
      {"steps", OptType::Int, "number of kernel compositions"},
      {"samples", OptType::Int, "number of random samples"},
      {"center", OptType::String, "centre point, e.g. 0,0,0"},
      {"x", OptType::String, "first kernel argument"},
      {"y", OptType::String, "second kernel argument"},
      {"nodes", OptType::Int, "grid nodes of the solution"},
      {"max-iters", OptType::Int, "Picard iteration cap"},
      {"damping", OptType::Double, "Picard damping in (0, 1]"},
      {"residual-tol", OptType::Double, "Picard residual tolerance"},
      {"order", OptType::Int, "quadrature order"},
      {"mode", OptType::String, "Picard mode: Auto, Plain or Scaled"},
      {"profile", OptType::String, "test profile: fundamental or gaussian"},
      {"motion", OptType::String, "sphere motion: dilate or shrink"},
      {"lambda-min", OptType::Double, "smallest lambda of the grid"},
      {"lambda-max", OptType::Double, "largest lambda of the grid"},
      {"lambda-count", OptType::Int, "number of grid values"},
      {"x0", OptType::String, "boundary point of the blow-up"},
      {"rho", OptType::String, "decreasing list of scales, e.g. 1e-1,1e-2"},
      {"grid", OptType::Int, "grid points per axis of the Hausdorff check"},
      {"approach", OptType::String, "direction e of the anchor path x0 + rho^2 e"},
  };
  return table;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"kernel-eval", "kernel-verify", "solve",
                                             "mss-lambda0", "bootstrap",     "blowup"};
  return c;
}

json convert(const OptionInfo& opt, const std::string& raw) {
  try {
    std::size_t used = 0;
    switch (opt.type) {
      case OptType::Int: {
        const long v = std::stol(raw, &used);
        if (used != raw.size()) break;
        return json(static_cast<int>(v));
      }
      case OptType::Double: {
        const double v = std::stod(raw, &used);
        if (used != raw.size()) break;
        return json(v);
      }
      case OptType::UInt64: {
        if (!raw.empty() && raw[0] == '-') break;
        const unsigned long long v = std::stoull(raw, &used);
        if (used != raw.size()) break;
        return json(static_cast<std::uint64_t>(v));
      }
      case OptType::String:
        return json(raw);
    }
  } catch (const std::logic_error&) {
  }
  throw UsageError("invalid value '" + raw + "' for --" + opt.name);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

// Accessors over the merged configuration.
class Config {
 public:
  explicit Config(json j) : j_(std::move(j)) {}

  bool has(const std::string& key) const { return j_.contains(key) && !j_[key].is_null(); }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? value<T>(key) : fallback;
  }

  template <typename T>
  T require(const std::string& key) const {
    if (!has(key)) throw UsageError("missing required option --" + key);
    return value<T>(key);
  }

  const json& raw(const std::string& key) const { return j_.at(key); }

 private:
  template <typename T>
  T value(const std::string& key) const {
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError("option '" + key + "' has the wrong type");
    }
  }

  json j_;
};

std::vector<double> parse_list(const json& j, const std::string& what) {
  if (j.is_array()) {
    try {
      return j.get<std::vector<double>>();
    } catch (const json::exception&) {
      throw UsageError("'" + what + "' must be a list of numbers");
    }
  }
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_string()) throw UsageError("'" + what + "' must be a list of numbers");
  std::string s = j.get<std::string>();
  if (!s.empty() && s.front() == '[') return parse_list(json::parse(s, nullptr, false), what);
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("'" + what + "' must be a list of numbers");
    }
  }
  if (out.empty()) throw UsageError("'" + what + "' is empty");
  return out;
}

Point parse_point(const Config& cfg, const std::string& key) {
  const auto v = parse_list(cfg.raw(key), key);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

DomainSpec load_domain(const Config& cfg) {
  if (!cfg.has("domain")) throw UsageError("missing required option --domain");
  json j = cfg.raw("domain");
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (!s.empty() && s.front() == '{') {
      j = json::parse(s, nullptr, false);
      if (j.is_discarded()) throw UsageError("malformed inline domain JSON");
    } else {
      j = read_json_file(s);
    }
  }
  try {
    return domain_from_json(j);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed domain: ") + e.what());
  }
}

Normalization load_normalization(const Config& cfg) {
  return normalization_from_string(cfg.get<std::string>("normalization", "Angular"));
}

std::shared_ptr<const Kernel> load_kernel(const Config& cfg, const DomainSpec& dom) {
  auto base = std::make_shared<GreenKernel>(cfg.get<double>("s", 1.0), dom, load_normalization(cfg));
  const int steps = cfg.get<int>("steps", 1);
  return green_iterated(base, steps, cfg.get<int>("order", 16));
}

// Table of numbers with a header.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += csv_field(t.header[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

struct Outcome {
  json report;
  Table table;
  int status = kExitOk;
};

Outcome cmd_kernel_eval(const Config& cfg) {
  const DomainSpec dom = load_domain(cfg);
  const auto kernel = load_kernel(cfg, dom);
  const Point x = parse_point(cfg, "x"), y = parse_point(cfg, "y");
  if (x.size() != dom.dim() || y.size() != dom.dim()) throw UsageError("point dimension mismatch");
  Outcome o;
  const double v = (*kernel)(x, y);
  o.report = {{"domain", to_json(dom)},
              {"s", kernel->order() / cfg.get<int>("steps", 1)},
              {"steps", cfg.get<int>("steps", 1)},
              {"normalization", std::string(to_string(load_normalization(cfg)))},
              {"x", std::vector<double>(x.data(), x.data() + x.size())},
              {"y", std::vector<double>(y.data(), y.data() + y.size())},
              {"value", v}};
  for (int i = 0; i < x.size(); ++i) o.table.header.push_back("x" + std::to_string(i));
  for (int i = 0; i < y.size(); ++i) o.table.header.push_back("y" + std::to_string(i));
  o.table.header.push_back("value");
  std::vector<double> row(x.data(), x.data() + x.size());
  row.insert(row.end(), y.data(), y.data() + y.size());
  row.push_back(v);
  o.table.rows.push_back(row);
  return o;
}

Outcome cmd_kernel_verify(const Config& cfg) {
  const DomainSpec dom = load_domain(cfg);
  const auto kernel = load_kernel(cfg, dom);
  HypothesisOptions opts;
  opts.samples = cfg.get<int>("samples", 1000);
  opts.seed = cfg.get<std::uint64_t>("seed", 0);
  if (cfg.has("center")) opts.center = parse_point(cfg, "center");
  const Hypothesis which = hypothesis_from_string(cfg.require<std::string>("which"));
  const HypothesisReport rep = verify_hypotheses(*kernel, which, opts);
  Outcome o;
  o.report = to_json(rep);
  o.report["domain"] = to_json(dom);
  o.report["seed"] = opts.seed;
  o.table.header = {"min_margin", "theta_fit", "theta_expected", "pass"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  o.table.rows.push_back({rep.min_margin, rep.theta_fit.value_or(nan), rep.theta_expected.value_or(nan),
                          rep.pass ? 1.0 : 0.0});
  o.status = rep.pass ? kExitOk : kExitVerificationFailure;
  return o;
}

Outcome cmd_solve(const Config& cfg) {
  const DomainSpec dom = load_domain(cfg);
  const auto kernel = load_kernel(cfg, dom);
  const int count = cfg.get<int>("nodes", 41);
  if (count < 2) throw UsageError("--nodes must be at least 2");
  GridLayoutPtr layout;
  double diam = 0.0;
  bool radial = false;
  if (const auto* b = dom.as<Ball>()) {
    layout = ball_radial_layout(b->center, b->radius, count);
    diam = 2 * b->radius;
    radial = true;
  } else if (const auto* iv = dom.as<Interval>()) {
    layout = linear_layout(Eigen::VectorXd::LinSpaced(count, iv->a, iv->b));
    diam = iv->b - iv->a;
  } else {
    throw UsageError("solve supports Ball and Interval domains");
  }
  Nonlinearity f;
  f.a = cfg.get<double>("a", 0.0);
  f.p = cfg.require<double>("p");
  f.t = cfg.get<double>("t", 0.0);
  f.center = cfg.has("center") ? parse_point(cfg, "center") : domain_center(dom);
  SolverConfig sc;
  sc.max_iters = cfg.get<int>("max-iters", sc.max_iters);
  sc.damping = cfg.get<double>("damping", sc.damping);
  sc.residual_tol = cfg.get<double>("residual-tol", sc.residual_tol);
  sc.order = cfg.get<int>("order", sc.order);
  const std::string mode = cfg.get<std::string>("mode", "Auto");
  if (mode == "Auto") {
    sc.mode = PicardMode::Auto;
  } else if (mode == "Plain") {
    sc.mode = PicardMode::Plain;
  } else if (mode == "Scaled") {
    sc.mode = PicardMode::Scaled;
  } else {
    throw UsageError("unknown --mode " + mode);
  }
  const IntegralOperator op(kernel, layout, f, sc);
  Eigen::VectorXd init = op.torsion().cwiseMax(0.0);
  if (init.maxCoeff() <= 0) init.setOnes();
  const SolveResult res = picard_solve(op, GridFunction(layout, init), sc);

  Outcome o;
  o.report = to_json(res);
  o.report["domain"] = to_json(dom);
  o.report["params"] = {{"a", f.a}, {"p", f.p}, {"t", f.t}, {"s", kernel->order()}};
  const double s = kernel->order();
  bool bound_ok = true;
  if (f.p > 1 && (s <= 1 || std::floor(s) == s)) {
    const double rho = lower_bound_rho(dom.dim(), s, f.p, diam, barrier_constant(std::min(s, 1.0), dom.dim()));
    o.report["lower_bound_rho"] = rho;
    bound_ok = res.u.sup_norm() >= rho;
    o.report["meets_lower_bound"] = bound_ok;
  }
  if (radial) {
    o.table.header = {"r", "u"};
    const Point c = layout->center;
    for (int j = 0; j < res.u.size(); ++j) o.table.rows.push_back({(res.u.node(j) - c).norm(), res.u.values()(j)});
  } else {
    o.table.header = {"x", "u"};
    for (int j = 0; j < res.u.size(); ++j) o.table.rows.push_back({res.u.node(j)(0), res.u.values()(j)});
  }
  if (res.diverged) {
    o.status = kExitDivergence;
  } else if (!res.converged || !bound_ok) {
    o.status = kExitVerificationFailure;
  }
  return o;
}

Outcome cmd_mss_lambda0(const Config& cfg) {
  const int n = cfg.get<int>("n", 3);
  const double s = cfg.get<double>("s", 1.0);
  if (n < 1) throw UsageError("--n must be positive");
  const Point P = cfg.has("center") ? parse_point(cfg, "center") : Point(Point::Zero(n));
  if (P.size() != n) throw UsageError("centre dimension mismatch");
  const double order_exp = n - 2 * s;
  const std::string profile = cfg.get<std::string>("profile", "gaussian");
  std::function<double(const Point&)> u;
  if (profile == "gaussian") {
    u = [](const Point& x) { return std::exp(-x.squaredNorm()); };
  } else if (profile == "fundamental") {
    if (!(order_exp > 0)) throw UsageError("fundamental profile needs n > 2s");
    u = [P, order_exp](const Point& x) { return std::pow((x - P).norm(), -order_exp); };
  } else {
    throw UsageError("unknown --profile " + profile);
  }
  const std::string motion_name = cfg.get<std::string>("motion", "dilate");
  SphereMotion motion;
  if (motion_name == "dilate") {
    motion = SphereMotion::Dilate;
  } else if (motion_name == "shrink") {
    motion = SphereMotion::Shrink;
  } else {
    throw UsageError("unknown --motion " + motion_name);
  }
  const double lo = cfg.get<double>("lambda-min", 0.1), hi = cfg.get<double>("lambda-max", 3.0);
  const int count = cfg.get<int>("lambda-count", 30);
  if (!(lo > 0) || !(hi > lo) || count < 2) throw UsageError("invalid lambda grid");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);

  const int samples = cfg.get<int>("samples", 2000);
  if (samples < 1) throw UsageError("--samples must be positive");
  std::mt19937_64 rng(cfg.get<std::uint64_t>("seed", 0));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double radius = 4 * hi;
  Eigen::MatrixXd cand(n, samples);
  double u_sup = 0.0;
  for (int j = 0; j < samples; ++j) {
    Point z(n);
    do {
      for (int i = 0; i < n; ++i) z(i) = unif(rng);
    } while (z.squaredNorm() > 1.0 || z.squaredNorm() == 0.0);
    cand.col(j) = P + radius * z;
    u_sup = std::max(u_sup, std::abs(u(cand.col(j))));
  }
  const Lambda0Report rep = find_lambda0(u, P, order_exp, motion, grid, cand, u_sup);
  Outcome o;
  o.report = to_json(rep);
  o.report["profile"] = profile;
  o.report["n"] = n;
  o.report["s"] = s;
  o.report["seed"] = cfg.get<std::uint64_t>("seed", 0);
  o.table.header = {"lambda", "margin"};
  for (int i = 0; i < count; ++i) o.table.rows.push_back({grid[i], rep.margins[i]});
  return o;
}

Outcome cmd_bootstrap(const Config& cfg) {
  ExponentParams e;
  e.n = cfg.require<int>("n");
  e.s = cfg.require<double>("s");
  e.a = cfg.get<double>("a", 0.0);
  e.p = cfg.require<double>("p");
  const int K = cfg.get<int>("k", 50);
  const BootstrapDirection dir =
      bootstrap_direction_from_string(cfg.get<std::string>("direction", "DilateOutward"));
  const BootstrapRun run = bootstrap(e, cfg.get<double>("mu0", -0.5), dir, K);
  Outcome o;
  o.report = to_json(run);
  o.table.header = {"k", "mu"};
  for (std::size_t i = 0; i < run.sequence.size(); ++i) {
    o.table.rows.push_back({static_cast<double>(i), run.sequence[i]});
  }
  return o;
}

Outcome cmd_blowup(const Config& cfg) {
  const DomainSpec dom = load_domain(cfg);
  const auto* poly = dom.as<Polygon2D>();
  if (!poly) throw UsageError("blowup needs a Polygon2D domain");
  const Point x0 = parse_point(cfg, "x0");
  if (x0.size() != 2) throw UsageError("--x0 must be a 2-D point");
  std::vector<double> rhos = {1e-1, 1e-2, 1e-3, 1e-4};
  if (cfg.has("rho")) rhos = parse_list(cfg.raw("rho"), "rho");
  BcbOptions opts;
  opts.grid = cfg.get<int>("grid", opts.grid);
  if (cfg.has("approach")) {
    const Point e = parse_point(cfg, "approach");
    if (e.size() != 2) throw UsageError("--approach must be a 2-D vector");
    opts.approach = Eigen::Vector2d(e(0), e(1));
  }
  const BcbReport rep = bcb_check(*poly, Eigen::Vector2d(x0(0), x0(1)), rhos, opts);
  Outcome o;
  o.report = to_json(rep);
  o.report["domain"] = to_json(dom);
  o.table.header = {"rho", "hausdorff", "hausdorff_boundary", "grid_resolution", "cone_angle"};
  for (const auto& e : rep.entries) {
    o.table.rows.push_back({e.rho, e.hausdorff, e.hausdorff_boundary, e.grid_resolution, rep.cone.angle});
  }
  return o;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << content;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conekit: potential-theory toolkit for cone-like domains"};
  std::string command;
  app.add_option("command", command, "kernel-eval | kernel-verify | solve | mss-lambda0 | bootstrap | blowup");
  std::map<std::string, std::string> raw;
  for (const auto& opt : option_table()) {
    const std::string name = opt.name;
    app.add_option_function<std::string>(
        "--" + name, [&raw, name](const std::string& v) { raw[name] = v; }, opt.help);
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    json merged = json::object();
    if (raw.count("config")) {
      json file = read_json_file(raw["config"]);
      if (!file.is_object()) throw UsageError("config must be a JSON object");
      for (auto& [key, value] : file.items()) {
        if (key == "params") {
          if (!value.is_object()) throw UsageError("config 'params' must be an object");
          for (auto& [pk, pv] : value.items()) merged[pk] = pv;
        } else if (key == "output") {
          merged["out"] = value;
        } else {
          merged[key] = value;
        }
      }
    }
    for (const auto& opt : option_table()) {
      auto it = raw.find(opt.name);
      if (it != raw.end() && std::string(opt.name) != "config") merged[opt.name] = convert(opt, it->second);
    }
    if (command.empty() && merged.contains("command")) command = merged["command"].get<std::string>();
    if (command.empty()) throw UsageError("no command given");
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
      throw UsageError("unknown command '" + command + "'");
    }
    const Config cfg(merged);
    const std::string format = cfg.get<std::string>("format", "json");
    if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");

    Outcome o;
    if (command == "kernel-eval") {
      o = cmd_kernel_eval(cfg);
    } else if (command == "kernel-verify") {
      o = cmd_kernel_verify(cfg);
    } else if (command == "solve") {
      o = cmd_solve(cfg);
    } else if (command == "mss-lambda0") {
      o = cmd_mss_lambda0(cfg);
    } else if (command == "bootstrap") {
      o = cmd_bootstrap(cfg);
    } else {
      o = cmd_blowup(cfg);
    }
    o.report["command"] = command;
    const std::string report = o.report.dump(2) + "\n";
    const std::string table = to_csv(o.table);
    if (cfg.has("out")) {
      const std::filesystem::path dir = cfg.get<std::string>("out", ".");
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw UsageError("cannot create " + dir.string());
      write_file(dir / (command + ".json"), report);
      write_file(dir / (command + ".csv"), table);
    } else {
      out << (format == "json" ? report : table);
    }
    return o.status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace conekit::cli

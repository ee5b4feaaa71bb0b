#include "mixdisc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include "mixdisc/capacity.hpp"
#include "mixdisc/extremal.hpp"
#include "mixdisc/genaf.hpp"
#include "mixdisc/hyperbolic.hpp"
#include "mixdisc/io.hpp"
#include "mixdisc/pascal.hpp"
#include "mixdisc/structure.hpp"

namespace mixdisc::cli {

namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

struct TolFlag {
  const char* flag;
  const char* env;
  double Tolerances::*field;
  double value = 0.0;
  CLI::Option* option = nullptr;
};

struct Values {
  std::string file, second_file, kind = "psd", algorithm = "polarized", output_dir = ".", output;
  bool cross_check = false, sweep = false;
  int n = 0;
  long trials = 100, draws = 1000;
  std::uint64_t seed = 0;
  int restarts = SearchOptions{}.restarts;
  int max_rejections = SearchOptions{}.max_rejections;
};

class Session {
 public:
  Session(std::istream& in, std::ostream& out, Tolerances tol, std::string output_dir)
      : in_(in), out_(out), tol_(tol), output_dir_(std::move(output_dir)), start_(Clock::now()) {}

  const Tolerances& tol() const { return tol_; }

  Json load(const std::string& path) {
    Json doc = io::parse_json(io::read_source(path, in_), path == "-" ? "<stdin>" : path);
    inputs_["documents"].push_back(doc);
    return doc;
  }

  void arg(const char* key, const Json& value) { inputs_["args"][key] = value; }
  void set_seed(std::uint64_t seed) {
    seed_ = seed;
    arg("seed", seed);
  }
  Json& results() { return results_; }

  std::string digest() const { return io::sha256_hex(inputs_.dump()); }

  std::filesystem::path side_file(const std::string& command, const std::string& suffix) const {
    std::filesystem::create_directories(output_dir_);
    return std::filesystem::path(output_dir_) / (command + "-" + digest() + suffix);
  }

  int emit(const std::string& command, int code) {
    Json report;
    report["schema_version"] = io::kSchemaVersion;
    report["command"] = command;
    report["inputs_digest"] = digest();
    report["results"] = results_;
    report["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    report["tolerances"] = {{"hermitian_tol", tol_.hermitian_tol}, {"psd_tol", tol_.psd_tol},
                            {"rank_tol", tol_.rank_tol},           {"ds_tol", tol_.ds_tol},
                            {"opt_tol", tol_.opt_tol}};
    report["wall_time"] = std::chrono::duration<double>(Clock::now() - start_).count();
    out_ << io::serialize(report);
    return code;
  }

  void print(const Json& doc) { out_ << io::serialize(doc); }

 private:
  std::istream& in_;
  std::ostream& out_;
  Tolerances tol_;
  std::string output_dir_;
  Clock::time_point start_;
  Json inputs_ = {{"args", Json::object()}, {"documents", Json::array()}};
  Json results_ = Json::object();
  std::optional<std::uint64_t> seed_;
};

double factorial_ratio(int n) {
  double r = 1.0;
  for (int k = 1; k <= n; ++k) r *= static_cast<double>(k) / n;
  return r;
}

Json ds_report_json(const DsTupleReport& r) {
  return {{"psd_violation", r.psd_violation},
          {"trace_violation", r.trace_violation},
          {"sum_violation", r.sum_violation},
          {"is_doubly_stochastic", r.is_doubly_stochastic}};
}

Json block_report_json(const BlockDsReport& r) {
  return {{"hermitian_defect", r.hermitian_defect}, {"psd_violation", r.psd_violation},
          {"sum_violation", r.sum_violation},       {"trace_violation", r.trace_violation},
          {"is_block_ds", r.is_block_ds}};
}

int cmd_eval(Session& s, const Values& v) {
  const MatrixTuple t = io::tuple_from_json(s.load(v.file), s.tol());
  const Algorithm algorithm = parse_algorithm(v.algorithm);
  s.arg("algorithm", v.algorithm);
  s.arg("cross_check", v.cross_check);
  auto& r = s.results();
  r["n"] = t.dim();
  r["algorithm"] = algorithm_name(algorithm);
  r["value"] = evaluate(t, algorithm);
  if (v.cross_check) {
    Json values = Json::object();
    std::vector<double> seen;
    for (Algorithm a : {Algorithm::Polarized, Algorithm::SigmaDet, Algorithm::DoublePerm,
                        Algorithm::SignedPermanent, Algorithm::Tensor}) {
      if (t.dim() > dimension_gate(a)) continue;
      const double d = evaluate(t, a);
      values[std::string(algorithm_name(a))] = d;
      seen.push_back(d);
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < seen.size(); ++i)
      for (std::size_t j = i + 1; j < seen.size(); ++j) {
        const double scale = std::max(std::abs(seen[i]), std::abs(seen[j]));
        if (scale > 0.0) dev = std::max(dev, std::abs(seen[i] - seen[j]) / scale);
      }
    r["cross_check"] = {{"values", values}, {"max_deviation", dev}};
  }
  return s.emit("eval", 0);
}

int cmd_capacity(Session& s, const Values& v) {
  const MatrixTuple t = io::tuple_from_json(s.load(v.file), s.tol());
  CapacityOptions options;
  options.tol = s.tol();
  options.throw_on_nonconvergence = true;
  const CapacityResult c = capacity(t, options);
  const double d = mixed_discriminant(t);
  auto& r = s.results();
  r["value"] = c.value;
  r["minimizer_x"] = io::real_vector_to_json(c.minimizer_x);
  r["gradient_norm"] = c.gradient_norm;
  r["iterations"] = c.iterations;
  r["converged"] = c.converged;
  r["discriminant"] = d;
  if (check_doubly_stochastic(t, s.tol()).is_doubly_stochastic) {
    const double ratio = c.value / d;
    const double upper = 1.0 / factorial_ratio(t.dim());
    r["bounds"] = {{"ratio", ratio}, {"upper", upper},
                   {"within_bounds", ratio >= 1.0 - 1e-6 && ratio <= upper * (1.0 + 1e-6)}};
  }
  return s.emit("capacity", 0);
}

int cmd_scale(Session& s, const Values& v) {
  const MatrixTuple t = io::tuple_from_json(s.load(v.file), s.tol());
  ScalingOptions options;
  options.tol = s.tol();
  const ScalingResult sc = scale_to_doubly_stochastic(t, options);
  auto& r = s.results();
  r["scaled"] = io::tuple_to_json(sc.scaled);
  r["canonical"] = io::tuple_to_json(sc.canonical);
  r["alpha"] = io::real_vector_to_json(sc.alpha);
  r["s"] = io::matrix_to_json(sc.s.matrix());
  r["ds_defect"] = sc.ds_defect;
  r["iterations"] = sc.iterations;
  r["converged"] = sc.converged;
  r["capacity"] = capacity_via_scaling(sc);
  return s.emit("scale", 0);
}

int cmd_decompose(Session& s, const Values& v) {
  const MatrixTuple t = io::tuple_from_json(s.load(v.file), s.tol());
  const DecompositionResult d = decompose(t, s.tol());
  Json parts = Json::array();
  for (const auto& p : d.parts) {
    parts.push_back({{"indices", p.indices},
                     {"basis", io::matrix_to_json(p.basis)},
                     {"tuple", io::tuple_to_json(p.tuple)},
                     {"value", mixed_discriminant(p.tuple)}});
  }
  auto& r = s.results();
  r["parts"] = std::move(parts);
  r["value"] = d.value;
  r["product_check"] = d.product_check;
  return s.emit("decompose", 0);
}

int cmd_check_ds(Session& s, const Values& v) {
  const Json doc = s.load(v.file);
  bool passes = false;
  if (io::document_kind(doc) == "block") {
    const BlockDsReport b = check_block_ds(io::block_from_json(doc), s.tol());
    s.results() = block_report_json(b);
    passes = b.is_block_ds;
  } else {
    const DsTupleReport t = check_doubly_stochastic(io::tuple_from_json(doc, s.tol()), s.tol());
    s.results() = ds_report_json(t);
    passes = t.is_doubly_stochastic;
  }
  s.results()["passes"] = passes;
  return s.emit("check-ds", passes ? 0 : 1);
}

int cmd_bapat_search(Session& s, const Values& v) {
  s.arg("n", v.n);
  s.arg("trials", v.trials);
  s.arg("restarts", v.restarts);
  s.arg("max_rejections", v.max_rejections);
  s.set_seed(v.seed);
  SearchOptions options;
  options.restarts = v.restarts;
  options.max_rejections = v.max_rejections;
  options.keep_trajectories = true;
  const SearchRecord rec = minimize_search(v.n, v.trials, v.seed, options);
  const auto csv = s.side_file("bapat-search", ".csv");
  std::ofstream f(csv);
  f << "trial,step,best_value\n";
  char buf[64];
  for (std::size_t k = 0; k < rec.trajectories.size(); ++k)
    for (std::size_t step = 0; step < rec.trajectories[k].size(); ++step) {
      std::snprintf(buf, sizeof buf, "%.17g", rec.trajectories[k][step]);
      f << k << ',' << step << ',' << buf << '\n';
    }
  auto& r = s.results();
  r["n"] = rec.n;
  r["trials"] = rec.trials;
  r["best_value"] = rec.best_value;
  r["bound"] = rec.bound;
  r["below_bound"] = rec.below_bound;
  r["distance_to_uniform"] = rec.distance_to_uniform;
  r["best_tuple"] = io::tuple_to_json(rec.best_tuple);
  r["csv"] = csv.filename().string();
  return s.emit("bapat-search", rec.below_bound ? 3 : 0);
}

int cmd_genaf(Session& s, const Values& v) {
  const MatrixTuple t = io::tuple_from_json(s.load(v.file), s.tol());
  const ConvexCombination c = io::combination_from_json(s.load(v.second_file));
  CapacityOptions options;
  options.tol = s.tol();
  const LogConcavityCheck chk = check_log_concavity(t, c, options);
  auto& r = s.results();
  r["cap_slack"] = chk.cap_slack;
  r["m_slack"] = chk.m_slack;
  r["holds"] = chk.holds;
  r["skipped"] = chk.skipped;
  r["skip_reason"] = chk.skip_reason;
  return s.emit("genaf", !chk.skipped && !chk.holds ? 3 : 0);
}

int cmd_af_experiment(Session& s, const Values& v) {
  s.arg("n", v.n);
  s.arg("sweep", v.sweep);
  auto row = [](const AfExperiment& e) {
    return Json{{"n", e.n},
                {"alpha1", e.alpha1.values()},
                {"alpha2", e.alpha2.values()},
                {"per_e", e.per_e},
                {"per_alpha1", e.per_alpha1},
                {"per_alpha2", e.per_alpha2},
                {"ratio", e.ratio},
                {"log_deficit", e.log_deficit},
                {"log_deficit_per_n", e.log_deficit / e.n}};
  };
  auto& r = s.results();
  if (!v.sweep) {
    r = row(af_lower_bound_experiment(v.n));
  } else {
    if (v.n < 2 || v.n % 2 != 0) throw PreconditionViolated("sweep needs an even N >= 2");
    Json rows = Json::array();
    double best = 0.0;
    for (int n = 2; n <= v.n; n += 2) {
      const AfExperiment e = af_lower_bound_experiment(n);
      best = std::max(best, e.log_deficit / n);
      rows.push_back(row(e));
    }
    r["rows"] = std::move(rows);
    r["max_log_deficit_per_n"] = best;
  }
  return s.emit("af-experiment", 0);
}

int cmd_qp(Session& s, const Values& v) {
  const BlockMatrix rho = io::block_from_json(s.load(v.file));
  auto& r = s.results();
  const double q = qp_block(rho);
  r["n"] = rho.n();
  r["value"] = q;
  r["bound"] = factorial_ratio(rho.n());
  r["block_ds"] = block_report_json(check_block_ds(rho, s.tol()));
  if (rho.n() <= 4) {
    const double qt = qp_tensor(rho);
    r["tensor_value"] = qt;
    r["deviation"] = std::abs(q - qt) / std::max(1e-300, std::max(std::abs(q), std::abs(qt)));
  }
  return s.emit("qp", 0);
}

int cmd_qp_experiment(Session& s, const Values& v) {
  s.arg("n", v.n);
  s.arg("draws", v.draws);
  s.set_seed(v.seed);
  const QpExperiment e = separable_qp_experiment(v.n, v.draws, v.seed);
  auto& r = s.results();
  r["n"] = e.n;
  r["draws"] = e.draws;
  r["min_qp"] = e.min_qp;
  r["bound"] = e.bound;
  r["below_bound"] = e.below_bound;
  return s.emit("qp-experiment", e.below_bound ? 3 : 0);
}

io::PencilDocument load_pencil(Session& s, const Values& v) { return io::pencil_from_json(s.load(v.file), s.tol()); }

int cmd_hyp_roots(Session& s, const Values& v) {
  const auto doc = load_pencil(s, v);
  if (doc.points.empty()) throw PreconditionViolated("pencil document has no points");
  Json rows = Json::array();
  for (const auto& x : doc.points) {
    const RootVector rv = roots(doc.pencil, x);
    rows.push_back({{"lambda", io::real_vector_to_json(rv.lambda)},
                    {"residual", rv.residual},
                    {"trace_e", rv.lambda.sum()},
                    {"e_nonnegative", rv.lambda(rv.lambda.size() - 1) >= -s.tol().psd_tol},
                    {"p", doc.pencil.p(x)}});
  }
  s.results()["p_e"] = doc.pencil.p_e();
  s.results()["points"] = std::move(rows);
  return s.emit("hyp-roots", 0);
}

std::vector<RVector> points_or_axes(const io::PencilDocument& doc) {
  if (!doc.points.empty()) return doc.points;
  if (doc.pencil.m() != doc.pencil.n()) throw PreconditionViolated("no points given and m != n");
  return axis_vectors(doc.pencil.m());
}

int cmd_hyp_mixed(Session& s, const Values& v) {
  const auto doc = load_pencil(s, v);
  const double m = mixed_value(doc.pencil, points_or_axes(doc));
  auto& r = s.results();
  r["value"] = m;
  r["p_e"] = doc.pencil.p_e();
  r["ratio"] = m / doc.pencil.p_e();
  r["bound"] = factorial_ratio(doc.pencil.n());
  return s.emit("hyp-mixed", 0);
}

int cmd_hyp_check_hd(Session& s, const Values& v) {
  const auto doc = load_pencil(s, v);
  const HdReport h = check_hd_membership(doc.pencil, points_or_axes(doc), s.tol().ds_tol);
  s.results() = {{"min_root", h.min_root},
                 {"trace_violation", h.trace_violation},
                 {"sum_violation", h.sum_violation},
                 {"is_member", h.is_member}};
  return s.emit("hyp-check-hd", h.is_member ? 0 : 1);
}

int cmd_hyp_experiment(Session& s, const Values& v) {
  s.arg("n", v.n);
  s.arg("draws", v.draws);
  s.set_seed(v.seed);
  const HdExperiment e = hd_lower_bound_experiment(v.n, v.draws, v.seed);
  auto& r = s.results();
  r["n"] = e.n;
  r["draws"] = e.draws;
  r["rejections"] = e.rejections;
  r["rejection_rate"] = static_cast<double>(e.rejections) / static_cast<double>(e.rejections + e.draws);
  r["min_ratio"] = e.min_ratio;
  r["bound"] = e.bound;
  r["below_bound"] = e.below_bound;
  if (e.below_bound && e.worst) {
    const auto path = s.side_file("hyp-experiment", "-bundle.json");
    Json bundle = {{"schema_version", io::kSchemaVersion},
                   {"kind", "hd-counterexample"},
                   {"seed", v.seed},
                   {"ratio", e.min_ratio},
                   {"bound", e.bound},
                   {"pencil", io::pencil_to_json(e.worst->pencil, e.worst->x)}};
    std::ofstream(path) << io::serialize(bundle);
    r["bundle"] = path.filename().string();
  }
  return s.emit("hyp-experiment", e.below_bound ? 3 : 0);
}

int cmd_gen_random(Session& s, const Values& v) {
  if (v.n < 1) throw PreconditionViolated("--n must be positive");
  Rng rng(v.seed);
  Json doc;
  if (v.kind == "psd") {
    std::vector<HermitianMatrix> mats;
    for (int i = 0; i < v.n; ++i) mats.push_back(random_psd(v.n, rng));
    doc = io::tuple_to_json(MatrixTuple(std::move(mats)));
  } else if (v.kind == "ds") {
    doc = io::tuple_to_json(random_ds_tuple(v.n, rng));
  } else if (v.kind == "block-ds") {
    doc = io::block_to_json(random_block_ds(v.n, rng));
  } else if (v.kind == "separable") {
    doc = io::block_to_json(random_separable_ds(v.n, rng));
  } else {
    throw PreconditionViolated("unknown kind \"" + v.kind + "\"");
  }
  if (v.output.empty() || v.output == "-") {
    s.print(doc);
  } else {
    std::ofstream f(v.output);
    if (!f) throw ParseError(v.output + ": cannot open for writing");
    f << io::serialize(doc);
  }
  return 0;
}

double parse_env(const char* name, const char* text) {
  char* end = nullptr;
  const double d = std::strtod(text, &end);
  if (end == text || *end != '\0') throw PreconditionViolated(std::string(name) + ": not a number: " + text);
  return d;
}

}  // namespace

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Input:
      return 1;
    case ErrorCategory::Numerical:
      return 2;
    case ErrorCategory::Invariant:
      return 3;
  }
  return 3;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed discriminants, capacity, scaling and related experiments", "mixdisc"};
  app.require_subcommand(1);
  app.fallthrough();
  Values v;

  std::vector<TolFlag> tols{{"--hermitian-tol", "MIXDISC_HERMITIAN_TOL", &Tolerances::hermitian_tol},
                            {"--psd-tol", "MIXDISC_PSD_TOL", &Tolerances::psd_tol},
                            {"--rank-tol", "MIXDISC_RANK_TOL", &Tolerances::rank_tol},
                            {"--ds-tol", "MIXDISC_DS_TOL", &Tolerances::ds_tol},
                            {"--opt-tol", "MIXDISC_OPT_TOL", &Tolerances::opt_tol}};
  for (auto& t : tols) t.option = app.add_option(t.flag, t.value, "overrides " + std::string(t.env));
  app.add_option("--output-dir", v.output_dir, "directory for CSV and bundle side files");

  auto file_arg = [&](CLI::App* sub) { sub->add_option("file", v.file, "input document, - for stdin")->required(); };

  auto* eval = app.add_subcommand("eval", "mixed discriminant of a tuple");
  file_arg(eval);
  eval->add_option("--algorithm", v.algorithm, "polarized|sigma-det|double-perm|signed-perm|tensor");
  eval->add_flag("--cross-check", v.cross_check, "compare every evaluator within its gate");

  auto* cap = app.add_subcommand("capacity", "capacity by convex minimization");
  file_arg(cap);
  auto* scale = app.add_subcommand("scale", "operator scaling to doubly stochastic form");
  file_arg(scale);
  auto* dec = app.add_subcommand("decompose", "split a doubly stochastic tuple into indecomposable parts");
  file_arg(dec);
  auto* check = app.add_subcommand("check-ds", "doubly stochastic check for a tuple or block document");
  file_arg(check);

  auto* search = app.add_subcommand("bapat-search", "local search for tuples below n!/n^n");
  search->add_option("--n", v.n)->required();
  search->add_option("--trials", v.trials);
  search->add_option("--seed", v.seed);
  search->add_option("--restarts", v.restarts);
  search->add_option("--max-rejections", v.max_rejections);

  auto* genaf = app.add_subcommand("genaf", "log-concavity check over a weight combination");
  file_arg(genaf);
  genaf->add_option("combination", v.second_file, "combination document")->required();

  auto* af = app.add_subcommand("af-experiment", "permanents of I + shift under weight repetition");
  af->add_option("N", v.n)->required();
  af->add_flag("--sweep", v.sweep, "run every even size up to N");

  auto* qp = app.add_subcommand("qp", "four-dimensional Pascal determinant of a block matrix");
  file_arg(qp);
  auto* qpx = app.add_subcommand("qp-experiment", "minimum over separable block doubly stochastic samples");
  qpx->add_option("--n", v.n)->required();
  qpx->add_option("--draws", v.draws);
  qpx->add_option("--seed", v.seed);

  auto* hyp = app.add_subcommand("hyp", "determinantal hyperbolic polynomials");
  hyp->require_subcommand(1);
  auto* hroots = hyp->add_subcommand("roots", "roots of p(x - t e) at each point");
  file_arg(hroots);
  auto* hmixed = hyp->add_subcommand("mixed", "p-mixed value of the points (axis vectors by default)");
  file_arg(hmixed);
  auto* hcheck = hyp->add_subcommand("check-hd", "e-doubly stochastic membership of the points");
  file_arg(hcheck);
  auto* hexp = hyp->add_subcommand("experiment", "minimum of M_p / p(e) over random members");
  hexp->add_option("--n", v.n)->required();
  hexp->add_option("--draws", v.draws);
  hexp->add_option("--seed", v.seed);

  auto* gen = app.add_subcommand("gen-random", "write a random document");
  gen->add_option("--n", v.n)->required();
  gen->add_option("--seed", v.seed);
  gen->add_option("--kind", v.kind)->check(CLI::IsMember({"psd", "ds", "block-ds", "separable"}));
  gen->add_option("-o,--output", v.output, "output path, stdout by default");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Tolerances tol;
    for (auto& t : tols) {
      if (t.option->count() > 0) {
        tol.*t.field = t.value;
      } else if (const char* env = std::getenv(t.env)) {
        tol.*t.field = parse_env(t.env, env);
      }
    }
    tol.validate();
    Session s(in, out, tol, v.output_dir);

    if (eval->parsed()) return cmd_eval(s, v);
    if (cap->parsed()) return cmd_capacity(s, v);
    if (scale->parsed()) return cmd_scale(s, v);
    if (dec->parsed()) return cmd_decompose(s, v);
    if (check->parsed()) return cmd_check_ds(s, v);
    if (search->parsed()) return cmd_bapat_search(s, v);
    if (genaf->parsed()) return cmd_genaf(s, v);
    if (af->parsed()) return cmd_af_experiment(s, v);
    if (qp->parsed()) return cmd_qp(s, v);
    if (qpx->parsed()) return cmd_qp_experiment(s, v);
    if (hroots->parsed()) return cmd_hyp_roots(s, v);
    if (hmixed->parsed()) return cmd_hyp_mixed(s, v);
    if (hcheck->parsed()) return cmd_hyp_check_hd(s, v);
    if (hexp->parsed()) return cmd_hyp_experiment(s, v);
    if (gen->parsed()) return cmd_gen_random(s, v);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace mixdisc::cli

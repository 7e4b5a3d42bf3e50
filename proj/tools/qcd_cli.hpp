#pragma once

// Command-line front end. run_cli is kept separate from main() so the tests can drive it.

#include <qcd/io.hpp>
#include <qcd/qcd.hpp>
#include <qcd/verify/acceptance.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace qcd::cli {

using io::json;

enum exit_code : int { ok = 0, verdict_failure = 1, usage = 2, numerical = 3 };

enum class Format { json, csv };

struct RunConfig {
  std::size_t N = 64;
  std::size_t K = 8;
  double tol = 1e-8;
  std::uint64_t seed = 20240611;
  Format format = Format::json;
  std::string out;  // empty = stdout

  void validate() const {
    if (K < 1) throw error(errc::invalid_argument, "--k must be >= 1");
    if (N < 4 * K)
      throw error(errc::invalid_argument,
                  "--n must be at least 4 * --k (got n=" + std::to_string(N) + ", k=" + std::to_string(K) + ")");
    if (!(tol > 0)) throw error(errc::invalid_argument, "--tol must be positive");
  }
};

enum class Level { error = 0, info = 1, debug = 2 };

class Log {
 public:
  Log(std::ostream& err, Level level) : err_(err), level_(level) {}
  void info(const std::string& m) const { emit(Level::info, "info", m); }
  void debug(const std::string& m) const { emit(Level::debug, "debug", m); }
  void error(const std::string& m) const { emit(Level::error, "error", m); }

 private:
  void emit(Level l, const char* tag, const std::string& m) const {
    if (static_cast<int>(l) <= static_cast<int>(level_)) err_ << "qcd: " << tag << ": " << m << "\n";
  }
  std::ostream& err_;
  Level level_;
};

inline Level log_level_from_env() {
  const char* v = std::getenv("QCD_LOG");
  if (!v || !*v) return Level::error;
  const std::string s(v);
  if (s == "error") return Level::error;
  if (s == "info") return Level::info;
  if (s == "debug") return Level::debug;
  throw error(errc::invalid_argument, "QCD_LOG must be one of error, info, debug");
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// Operator chosen on the command line: a built-in name or a JSON file.
struct OperatorArgs {
  std::string name;
  std::string file;
  std::string weights = "const:1";

  io::OperatorSpec resolve() const { return file.empty() ? io::operator_by_name(name, weights) : io::read_operator(file); }
};

inline std::vector<Quaternion> parse_samples(const std::vector<std::string>& texts) {
  std::vector<Quaternion> out;
  for (const auto& t : texts) out.push_back(parse_quaternion(t));
  return out;
}

inline std::string num(double v) { return io::CsvWriter::num(v); }

inline json operator_json(const io::OperatorSpec& op, const OperatorArgs& a) {
  json j;
  j["name"] = io::operator_label(op);
  if (!a.file.empty()) j["file"] = a.file;
  if (!op.dense) j["weights"] = op.banded.weights.name;
  return j;
}

inline json config_json(const RunConfig& c) {
  json j;
  j["N"] = c.N;
  j["K"] = c.K;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  return j;
}

// ---- subcommands --------------------------------------------------------------------------
// Each returns the document to print and the exit code.

struct Output {
  std::string text;
  int code = ok;
};

inline Output emit(const RunConfig& c, const json& j, const io::CsvWriter& csv, int code = ok) {
  return {c.format == Format::json ? io::dump(j) : csv.str(), code};
}

inline Output cmd_example_tci(const RunConfig& c, const Log& log) {
  Stopwatch sw;
  const worked::TciReport rep = worked::tci_example(c.N, {c.tol});
  log.info("tci probe took " + num(sw.seconds()) + " s");
  json j = io::envelope("example tci");
  j["config"] = config_json(c);
  j["truncations"] = rep.truncations;
  j["region1"] = io::to_json(rep.region1);
  j["region2"] = io::to_json(rep.region2);
  auto show = [](const ProbeReport& p) { return p.n ? "n=" + std::to_string(*p.n) : std::string("n unstable"); };
  j["verdict"] = show(rep.region1) + " on Omega1; " + show(rep.region2) + " on Omega2";
  j["reproduces"] = rep.reproduces();

  io::CsvWriter csv({"region", "s_a0", "s_a1", "s_a2", "s_a3", "N", "kernel_dim_H", "sigma_min", "surjectivity"});
  for (int region = 1; region <= 2; ++region)
    for (const auto& e : (region == 1 ? rep.region1 : rep.region2).entries)
      csv.row({std::to_string(region), num(e.s.a0), num(e.s.a1), num(e.s.a2), num(e.s.a3), std::to_string(e.N),
               std::to_string(e.kernel_dim_H), num(e.sigma_min), num(e.surjectivity)});
  return emit(c, j, csv);
}

inline Output cmd_example_cndu(const RunConfig& c, const Log& log) {
  Stopwatch sw;
  const worked::CnduReport rep = worked::cndu_example(c.N, c.K, c.tol);
  log.info("curvature-twin report took " + num(sw.seconds()) + " s");
  json j = io::envelope("example cndu");
  j["config"] = config_json(c);
  json curv;
  curv["points"] = rep.curvature.samples.size();
  curv["max_difference"] = rep.curvature.max_diff;
  curv["max_estimator_gap"] = rep.curvature.max_gap;
  curv["same"] = rep.curvature.same;
  j["curvature"] = std::move(curv);
  j["canonical_T"] = io::to_json(rep.canonical_T);
  j["canonical_T_tilde"] = io::to_json(rep.canonical_T_tilde);
  json eq;
  eq["ad_theta"] = rep.ad_theta.equivalent;
  if (!rep.ad_theta.reason.empty()) eq["ad_theta_reason"] = rep.ad_theta.reason;
  eq["jet_frames"] = rep.quaternionic.equivalent;
  if (!rep.quaternionic.reason.empty()) eq["jet_frames_reason"] = rep.quaternionic.reason;
  eq["complex_rep"] = rep.complex_rep.equivalent;
  if (!rep.complex_rep.reason.empty()) eq["complex_rep_reason"] = rep.complex_rep.reason;
  j["equivalence"] = std::move(eq);
  j["verdict"] = std::string("same curvature: ") + (rep.same_curvature() ? "true" : "false") +
                 "; quaternion unitarily equivalent: " + (rep.unitarily_equivalent() ? "true" : "false");

  io::CsvWriter csv({"re", "im", "K_T", "K_T_tilde", "gap_T", "gap_T_tilde"});
  for (const auto& p : rep.curvature.samples)
    csv.row({num(p.a.w.real()), num(p.a.w.imag()), num(p.a.K), num(p.b.K), num(p.a.gap), num(p.b.gap)});
  return emit(c, j, csv);
}

inline Output cmd_spectrum(const RunConfig& c, const Log& log, const OperatorArgs& oa,
                           const std::vector<std::string>& sample_text, bool classes) {
  const io::OperatorSpec op = oa.resolve();
  std::vector<Quaternion> samples = parse_samples(sample_text);
  if (samples.empty()) {
    samples = fixtures::tci_omega1_samples();
    for (const auto& s : fixtures::tci_omega2_samples()) samples.push_back(s);
  }
  json j = io::envelope("spectrum");
  j["config"] = config_json(c);
  j["operator"] = operator_json(op, oa);
  io::CsvWriter csv({"s_a0", "s_a1", "s_a2", "s_a3", "N", "sigma_min", "kernel_dim_H"});
  json rows = json::array();
  const std::size_t N = op.dense ? op.matrix.rows() : c.N;
  for (const auto& s : samples) {
    const PencilResult r = op.dense ? s_point_membership(op.matrix, s, c.tol) : s_point_membership(op.banded, s, N, {c.tol});
    log.debug("s = " + to_string(s) + ": kernel_dim_H " + std::to_string(r.kernel_dim_H));
    rows.push_back(io::to_json(r));
    csv.row({num(s.a0), num(s.a1), num(s.a2), num(s.a3), std::to_string(N), num(r.sigma_min), std::to_string(r.kernel_dim_H)});
  }
  j["samples"] = std::move(rows);
  if (classes) {
    const EigenClasses ec = right_eigen_classes(op.at(N));
    json cl = json::array();
    for (const auto& q : ec.classes) cl.push_back(io::to_json(q));
    j["eigen_classes"] = std::move(cl);
    json un = json::array();
    for (const auto& z : ec.unpaired) un.push_back(io::to_json(z));
    j["unpaired"] = std::move(un);
  }
  return emit(c, j, csv);
}

inline Output cmd_shift(const RunConfig& c, const Log& log, const std::string& weights, std::size_t n_max,
                        const std::vector<std::string>& sample_text) {
  const WeightRule w = io::parse_weight_rule(weights);
  const RspEstimate r = rsp(w, n_max);
  const BandedOperator T = weighted_shift(w);
  const std::size_t m_max = std::max<std::size_t>(1, c.N / 2);
  const RadiusEstimate sr = s_radius_estimate(T, c.N, m_max);
  json j = io::envelope("shift");
  j["config"] = config_json(c);
  j["weights"] = w.name;
  j["rsp"] = {{"estimate", r.estimate}, {"n_max", n_max}};
  j["s_radius"] = {{"estimate", sr.estimate}, {"N", c.N}, {"m_max", m_max}};
  const std::vector<Quaternion> samples = parse_samples(sample_text);
  if (!samples.empty()) {
    Stopwatch sw;
    j["probe"] = io::to_json(bn_probe(T, samples, doubling_truncations(c.N), {c.tol}));
    log.info("probe took " + num(sw.seconds()) + " s");
  }
  io::CsvWriter csv({"n", "root_product"});
  for (std::size_t n = 0; n < r.sequence.size(); ++n) csv.row({std::to_string(n + 1), num(r.sequence[n])});
  return emit(c, j, csv);
}

inline Output cmd_frame(const RunConfig& c, const OperatorArgs& oa, const std::string& w0_text) {
  const io::OperatorSpec op = oa.resolve();
  const QMatrix T = op.at(c.N);
  const JetFrame F = frame_from_right_inverse(T, parse_quaternion(w0_text), c.K);
  const DerivativeReport d = derivative_identity_check(T, F);
  json j = io::envelope("frame");
  j["config"] = config_json(c);
  j["operator"] = operator_json(op, oa);
  j["frame"] = io::to_json(F);
  j["derivative_residuals"] = {{"tangent", d.tangent}, {"pencil", d.pencil}, {"power", d.power}};
  io::CsvWriter csv({"section", "order", "index", "a0", "a1", "a2", "a3"});
  for (std::size_t i = 0; i < F.rank(); ++i)
    for (std::size_t k = 0; k <= F.order; ++k)
      for (std::size_t n = 0; n < F.dim(); ++n) {
        const Quaternion& q = F.jets[i][k][n];
        csv.row({std::to_string(i), std::to_string(k), std::to_string(n), num(q.a0), num(q.a1), num(q.a2), num(q.a3)});
      }
  return emit(c, j, csv);
}

inline void gram_rows(io::CsvWriter& csv, const GramData& a, const GramData& b) {
  for (std::size_t m = 0; m <= a.order; ++m)
    for (std::size_t k = 0; k <= a.order; ++k)
      for (std::size_t i = 0; i < a.rank; ++i)
        for (std::size_t jj = 0; jj < a.rank; ++jj) {
          const Quaternion &p = a.at(m, k, i, jj), &q = b.at(m, k, i, jj);
          csv.row({std::to_string(m), std::to_string(k), std::to_string(i), std::to_string(jj), num(p.a0), num(p.a1),
                   num(p.a2), num(p.a3), num(q.a0), num(q.a1), num(q.a2), num(q.a3)});
        }
}

inline Output cmd_rigidity(const RunConfig& c, const OperatorArgs& oa, const OperatorArgs& other,
                           const std::string& w0_text) {
  const io::OperatorSpec op = oa.resolve();
  const QMatrix T = op.at(c.N);
  const Quaternion w0 = parse_quaternion(w0_text);
  const JetFrame F = frame_from_right_inverse(T, w0, c.K);
  const bool pair = !other.name.empty() || !other.file.empty();
  JetFrame G;
  json j = io::envelope("rigidity");
  j["config"] = config_json(c);
  j["operator"] = operator_json(op, oa);
  if (pair) {
    const io::OperatorSpec op2 = other.resolve();
    G = frame_from_right_inverse(op2.at(c.N), w0, c.K);
    j["mode"] = "pair";
    j["other"] = operator_json(op2, other);
  } else {
    G = transport(householder_random_unitary(T.rows(), c.seed), F);
    j["mode"] = "transported";
  }
  if (F.rank() != G.rank()) throw error(errc::rank_mismatch, "frames have different ranks at w0");
  const RigidityResult r = rigidity_check(F, G, c.tol);
  j["congruent"] = r.congruent;
  j["gram_comparison"] = io::to_json(r.gram);
  if (r.U) j["reconstruction_residual"] = r.reconstruction;
  const GramData ga = gram(F), gb = gram(G);
  j["gram"] = io::to_json(ga);
  j["gram_other"] = io::to_json(gb);
  io::CsvWriter csv({"m", "k", "i", "j", "a0", "a1", "a2", "a3", "b0", "b1", "b2", "b3"});
  gram_rows(csv, ga, gb);
  return emit(c, j, csv);
}

inline Output cmd_canonical(const RunConfig& c, const OperatorArgs& oa, const std::string& w0_text) {
  const io::OperatorSpec op = oa.resolve();
  const CanonicalRep rep = canonical_matrix(op.at(c.N), parse_quaternion(w0_text), c.K);
  json j = io::envelope("canonical");
  j["config"] = config_json(c);
  j["operator"] = operator_json(op, oa);
  j["canonical"] = io::to_json(rep);
  io::CsvWriter csv({"row", "col", "a0", "a1", "a2", "a3"});
  for (std::size_t r = 0; r < rep.size; ++r)
    for (std::size_t k = 0; k < rep.size; ++k) {
      const Quaternion& q = rep.N(r, k);
      csv.row({std::to_string(r), std::to_string(k), num(q.a0), num(q.a1), num(q.a2), num(q.a3)});
    }
  return emit(c, j, csv);
}

inline Output cmd_curvature(const RunConfig& c, const OperatorArgs& oa, const std::string& section,
                            const std::string& w0_text, double radius, std::size_t steps, double h) {
  Section s;
  std::vector<cplx> grid;
  json j = io::envelope("curvature");
  j["config"] = config_json(c);
  if (!section.empty()) {
    if (section == "cndu-T") s = fixtures::cndu_section_T(c.N);
    else if (section == "cndu-T-tilde") s = fixtures::cndu_section_T_tilde(c.N);
    else if (section == "szego") s = fixtures::szego_section(c.N);
    else throw error(errc::invalid_argument, "unknown section '" + section + "'");
    j["section"] = section;
    grid = section == "szego" ? fixtures::disc_grid(0.0, radius, steps) : fixtures::cndu_grid(steps);
  } else {
    const io::OperatorSpec op = oa.resolve();
    const Quaternion w0 = parse_quaternion(w0_text);
    s = section_from_frame(frame_from_right_inverse(op.at(c.N), w0, c.K));
    j["operator"] = operator_json(op, oa);
    j["base"] = io::to_json(w0);
    grid = fixtures::disc_grid(w0.z1(), radius, steps);
  }
  json rows = json::array();
  io::CsvWriter csv({"re", "im", "K", "gap"});
  for (cplx w : grid) {
    const CurvatureSample k = curvature(s, w, h);
    rows.push_back({{"w", io::to_json(w)}, {"K", k.K}, {"K_formula", k.K_formula}, {"gap", k.gap}, {"richardson", k.richardson}});
    csv.row({num(w.real()), num(w.imag()), num(k.K), num(k.gap)});
  }
  j["samples"] = std::move(rows);
  return emit(c, j, csv);
}

inline Output cmd_equiv(const RunConfig& c, const OperatorArgs& a, const OperatorArgs& b, const std::string& w0_text) {
  const io::OperatorSpec op1 = a.resolve(), op2 = b.resolve();
  const QMatrix T1 = op1.at(c.N), T2 = op2.at(c.N);
  const Quaternion w0 = parse_quaternion(w0_text);
  json j = io::envelope("equiv");
  j["config"] = config_json(c);
  j["operator"] = operator_json(op1, a);
  j["other"] = operator_json(op2, b);
  io::CsvWriter csv({"route", "equivalent", "residual"});

  const EquivalenceResult q = operator_equivalence(T1, T2, w0, c.K, c.tol);
  j["jet_frames"] = {{"equivalent", q.equivalent}, {"reason", q.reason}, {"intertwining_residual", q.intertwining}};
  csv.row({"jet_frames", io::CsvWriter::boolean(q.equivalent), num(q.intertwining)});

  const JetFrame F1 = frame_from_right_inverse(T1, w0, c.K), F2 = frame_from_right_inverse(T2, w0, c.K);
  if (F1.rank() == 1 && F2.rank() == 1) {
    const AdThetaResult ad = ad_theta_equivalent(canonical_matrix_from_frame(T1, F1), canonical_matrix_from_frame(T2, F2), c.tol);
    j["ad_theta"] = {{"equivalent", ad.equivalent}, {"reason", ad.reason}};
    if (ad.theta) j["ad_theta"]["theta"] = *ad.theta;
    csv.row({"ad_theta", io::CsvWriter::boolean(ad.equivalent), ""});
    const ComplexEquivalenceResult cr = complex_rep_equivalence(T1, T2, w0, c.K, c.tol);
    j["complex_rep"] = {{"equivalent", cr.equivalent}, {"reason", cr.reason}, {"residual", std::max(cr.w_residual, cr.u_residual)}};
    csv.row({"complex_rep", io::CsvWriter::boolean(cr.equivalent), num(std::max(cr.w_residual, cr.u_residual))});
  }
  return emit(c, j, csv);
}

inline Output cmd_suite(const RunConfig& c, const Log& log) {
  verify::SuiteConfig sc;
  sc.seed = c.seed;
  const verify::SuiteResult res = verify::run_suite(sc, [&](const verify::CriterionResult& r) {
    log.info(std::string(r.passed ? "pass " : "FAIL ") + std::to_string(r.id) + " " + r.name + ": " + r.detail +
             " (" + num(r.seconds) + " s)");
  });
  json j = io::envelope("suite");
  j["seed"] = c.seed;
  j["passed"] = res.passed();
  json rows = json::array();
  io::CsvWriter csv({"id", "name", "passed", "detail"});
  for (const auto& r : res.criteria) {
    rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    csv.row({std::to_string(r.id), r.name, io::CsvWriter::boolean(r.passed), r.detail});
  }
  j["criteria"] = std::move(rows);
  return emit(c, j, csv, res.passed() ? ok : verdict_failure);
}

// ---- entry point ----------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Level level;
  try {
    level = log_level_from_env();
  } catch (const error& e) {
    err << "qcd: " << e.what() << "\n";
    return usage;
  }
  const Log log(err, level);

  CLI::App app{"Quaternionic Cowen-Douglas toolkit", "qcd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qcd 0.1.0");

  RunConfig cfg;
  std::string format = "json";
  auto common = [&](CLI::App* s) {
    s->add_option("--n", cfg.N, "truncation size")->capture_default_str();
    s->add_option("--k", cfg.K, "jet order")->capture_default_str();
    s->add_option("--tol", cfg.tol, "decision tolerance")->capture_default_str();
    s->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    s->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    s->add_option("--out", cfg.out, "output file (default stdout)");
  };
  auto operator_opts = [](CLI::App* s, OperatorArgs& a, const std::string& def) {
    a.name = def;
    s->add_option("--operator", a.name, "built-in operator")->check(CLI::IsMember(io::operator_names()))->capture_default_str();
    s->add_option("--op-file", a.file, "operator JSON file");
    s->add_option("--weights", a.weights, "weights for 'shift': const:c | ratio | custom:file.json")->capture_default_str();
  };

  std::string example_name;
  auto* ex = app.add_subcommand("example", "reproduce a worked example");
  ex->add_option("name", example_name, "tci | cndu")->required()->check(CLI::IsMember({"tci", "cndu"}));
  common(ex);

  OperatorArgs spec_op;
  std::vector<std::string> spec_samples;
  bool spec_classes = false;
  auto* sp = app.add_subcommand("spectrum", "pencil kernel data at sample points");
  common(sp);
  operator_opts(sp, spec_op, "tci");
  sp->add_option("--s", spec_samples, "sample quaternions, e.g. \"0.1 + 0.3i\"");
  sp->add_flag("--classes", spec_classes, "also list right-eigenvalue classes of the truncation");

  std::string shift_weights = "const:1";
  std::size_t shift_nmax = 10000;
  std::vector<std::string> shift_samples;
  auto* sh = app.add_subcommand("shift", "weighted shift: rsp sequence, s-radius and probe");
  common(sh);
  sh->add_option("--weights", shift_weights, "const:c | ratio | custom:file.json")->capture_default_str();
  sh->add_option("--nmax", shift_nmax, "rsp sample range")->check(CLI::PositiveNumber)->capture_default_str();
  sh->add_option("--s", shift_samples, "probe samples");

  OperatorArgs frame_op;
  std::string frame_w0 = "i";
  auto* fr = app.add_subcommand("frame", "jet frame at a base point");
  common(fr);
  operator_opts(fr, frame_op, "cndu-T");
  fr->add_option("--w0", frame_w0, "base point")->capture_default_str();

  OperatorArgs rig_op, rig_other;
  std::string rig_w0 = "i";
  auto* rg = app.add_subcommand("rigidity", "Gram congruence of two frames");
  common(rg);
  operator_opts(rg, rig_op, "cndu-T");
  rg->add_option("--other", rig_other.name, "second operator (default: the first, moved by a random unitary)")
      ->check(CLI::IsMember(io::operator_names()));
  rg->add_option("--other-file", rig_other.file, "second operator JSON file");
  rg->add_option("--w0", rig_w0, "base point")->capture_default_str();

  OperatorArgs can_op;
  std::string can_w0 = "i";
  auto* cn = app.add_subcommand("canonical", "canonical matrix of a rank-1 frame");
  common(cn);
  operator_opts(cn, can_op, "cndu-T");
  cn->add_option("--w0", can_w0, "base point")->capture_default_str();

  OperatorArgs curv_op;
  std::string curv_section, curv_w0 = "i";
  double curv_radius = 0.1, curv_h = 1e-3;
  std::size_t curv_steps = 5;
  auto* cv = app.add_subcommand("curvature", "curvature on a grid");
  common(cv);
  operator_opts(cv, curv_op, "cndu-T");
  cv->add_option("--section", curv_section, "closed-form section instead of an operator frame")
      ->check(CLI::IsMember({"cndu-T", "cndu-T-tilde", "szego"}));
  cv->add_option("--w0", curv_w0, "frame base point and grid centre")->capture_default_str();
  cv->add_option("--radius", curv_radius, "grid radius")->check(CLI::PositiveNumber)->capture_default_str();
  cv->add_option("--steps", curv_steps, "grid steps per axis")->check(CLI::Range(1, 201))->capture_default_str();
  cv->add_option("--fd-step", curv_h, "finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();

  OperatorArgs eq_a, eq_b;
  std::string eq_w0 = "i";
  auto* eq = app.add_subcommand("equiv", "unitary equivalence of two operators");
  common(eq);
  operator_opts(eq, eq_a, "cndu-T");
  eq_b.name = "cndu-T-tilde";
  eq->add_option("--other", eq_b.name, "second operator")->check(CLI::IsMember(io::operator_names()))->capture_default_str();
  eq->add_option("--other-file", eq_b.file, "second operator JSON file");
  eq->add_option("--w0", eq_w0, "base point")->capture_default_str();

  auto* su = app.add_subcommand("suite", "run the acceptance suite");
  common(su);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? ok : usage;
  }
  eq_b.weights = eq_a.weights;
  rig_other.weights = rig_op.weights;
  cfg.format = format == "csv" ? Format::csv : Format::json;

  Output result;
  try {
    cfg.validate();
    Stopwatch sw;
    if (ex->parsed()) result = example_name == "tci" ? cmd_example_tci(cfg, log) : cmd_example_cndu(cfg, log);
    else if (sp->parsed()) result = cmd_spectrum(cfg, log, spec_op, spec_samples, spec_classes);
    else if (sh->parsed()) result = cmd_shift(cfg, log, shift_weights, shift_nmax, shift_samples);
    else if (fr->parsed()) result = cmd_frame(cfg, frame_op, frame_w0);
    else if (rg->parsed()) result = cmd_rigidity(cfg, rig_op, rig_other, rig_w0);
    else if (cn->parsed()) result = cmd_canonical(cfg, can_op, can_w0);
    else if (cv->parsed()) result = cmd_curvature(cfg, curv_op, curv_section, curv_w0, curv_radius, curv_steps, curv_h);
    else if (eq->parsed()) result = cmd_equiv(cfg, eq_a, eq_b, eq_w0);
    else if (su->parsed()) result = cmd_suite(cfg, log);
    log.info("finished in " + num(sw.seconds()) + " s");
  } catch (const error& e) {
    err << "qcd: " << e.what() << "\n";
    return is_numerical(e.code()) ? numerical : usage;
  } catch (const std::exception& e) {
    err << "qcd: " << e.what() << "\n";
    return numerical;
  }

  if (cfg.out.empty()) {
    out << result.text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "qcd: cannot write " << cfg.out << "\n";
      return usage;
    }
    f << result.text;
  }
  return result.code;
}

}  // namespace qcd::cli

#include "persist/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "persist/errors.hpp"
#include "persist/ucp_lift.hpp"

namespace persist {

using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json complex_values(const std::vector<Complex>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({{"re", v.real()}, {"im", v.imag()}});
  return out;
}

json canonical_section(const StochasticMatrix& s, const ReducedForm& rf) {
  json classes = json::array();
  for (const auto& c : rf.classes) {
    classes.push_back(
        {{"states", c.states}, {"period", c.period}, {"cyclic_classes", c.cyclic_classes}});
  }
  return {{"permutation", rf.permutation},
          {"order", rf.order},
          {"transient", rf.transient},
          {"classes", classes},
          {"L", rf.lcm_period},
          {"transient_block", transient_block(s, rf).to_rows()}};
}

// Non-finite residuals (an empty divisor set) serialize as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void dump_value(const json& v, int indent, std::string& out);

bool is_flat(const json& v) {
  for (const auto& e : v)
    if (e.is_structured()) return false;
  return true;
}

void newline(int indent, std::string& out) {
  out += '\n';
  out.append(static_cast<std::size_t>(indent), ' ');
}

void dump_value(const json& v, int indent, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(indent + 2, out);
        out += json(it.key()).dump();
        out += ": ";
        dump_value(it.value(), indent + 2, out);
      }
      newline(indent, out);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = is_flat(v);
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(indent + 2, out);
        dump_value(e, indent + 2, out);
      }
      if (!flat) newline(indent, out);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

void text_line(std::ostringstream& os, const char* label, const json& v) {
  os << "  " << label << ": " << v.dump() << '\n';
}

}  // namespace

AnalysisOutcome analyze_matrix(const StochasticMatrix& s, json input,
                               const AnalysisOptions& options) {
  Stopwatch clock;
  json timings;

  const ReducedForm rf = canonical_form(s, options.zero_tol);
  timings["canonical_ms"] = clock.lap_ms();

  SpectralOptions spectral_options;
  spectral_options.proj_tol = options.tol;
  spectral_options.max_squarings = options.max_squarings;
  const SpectralData sd = analyze_spectrum(s, rf, spectral_options);
  const std::size_t t_dec = decoherence_time(s, sd.projection, options.epsilon);
  timings["spectral_ms"] = clock.lap_ms();

  const PersistentAlgebra algebra = build_persistent_algebra(s, rf, sd.projection, options.tol);
  const AlgebraReport ar = algebra_check(algebra, options.tol);
  const AutomorphismReport au = restricted_automorphism_check(s, algebra, options.tol);
  const auto partition = multiplicative_domain(s, options.zero_tol);
  const DecoherenceReport dr = decoherence_split_check(s, sd.projection, partition, options.tol);
  timings["algebra_ms"] = clock.lap_ms();

  const bool verified = ar.passed && au.passed && au.order == rf.lcm_period && au.order_sharp;

  json spectral = {
      {"rank_P", sd.rank_projection},
      {"rank_E1", sd.rank_ergodic},
      {"peripheral_values", complex_values(sd.peripheral_values)},
      {"gap_estimate", sd.gap_estimate},
      {"interior_radius_estimate", 1.0 - sd.gap_estimate},
      {"epsilon", options.epsilon},
      {"decoherence_time", t_dec},
      {"projection", sd.projection.to_rows()},
      {"stationary_distributions", stationary_distributions(sd.ergodic, rf)},
  };
  json residuals = {
      {"commutativity", ar.commutativity},
      {"associativity", ar.associativity},
      {"closure", ar.closure},
      {"unit", ar.unit},
      {"idempotent_resolution", ar.idempotent_resolution},
      {"multiplicativity", au.multiplicativity},
      {"commutation", au.commutation},
      {"range_invariance", au.range_invariance},
      {"order", au.order_residual},
      {"divisor", finite_or_null(au.divisor_residual)},
      {"min_inverse_coordinate", au.min_inverse_coordinate},
      {"inverse_reconstruction", au.inverse_reconstruction},
  };
  json alg = {
      {"residuals", residuals},
      {"idempotent_count", algebra.idempotents.size()},
      {"idempotents", algebra.idempotents},
      {"algebra_passed", ar.passed},
      {"automorphism_passed", au.passed},
      {"automorphism_order", au.order},
      {"order_sharp", au.order_sharp},
      {"product_coincides", dr.product_coincides},
      {"split_holds", dr.split_holds},
      {"multiplicative_domain", dr.mult_domain_partition},
      {"dim_N", dr.dim_multiplicative},
      {"dim_A0", dr.dim_vanishing},
      {"verified", verified},
  };

  timings["total_ms"] = timings["canonical_ms"].get<double>() +
                        timings["spectral_ms"].get<double>() +
                        timings["algebra_ms"].get<double>();
  json report = {{"input", std::move(input)},
                 {"canonical", canonical_section(s, rf)},
                 {"spectral", std::move(spectral)},
                 {"algebra", std::move(alg)},
                 {"timings", std::move(timings)}};
  return {std::move(report), verified};
}

AnalysisOutcome run_analyze(const std::string& path, InputFormat format,
                            const AnalysisOptions& options) {
  MatrixInput in = read_matrix_file(path, format);
  const StochasticMatrix s = make_stochastic(in.rows);
  json input = {{"path", path},
                {"format", format == InputFormat::json ? "json" : "csv"},
                {"name", in.name},
                {"n", s.size()},
                {"digest", in.digest}};
  return analyze_matrix(s, std::move(input), options);
}

namespace {

AnalysisOutcome lift_outcome(const Superoperator& phi, const StochasticMatrix& s, json input,
                             const AnalysisOptions& options) {
  AnalysisOutcome outcome = analyze_matrix(s, std::move(input), options);
  Stopwatch clock;
  const ReducedForm rf = canonical_form(s, options.zero_tol);
  const DenseMatrix pphi = superop_peripheral(phi, rf, options.tol, options.max_squarings);
  const IsoReport iso = persistent_iso_check(phi, s, options.tol, options.zero_tol);
  outcome.report["lift"] = {
      {"n", phi.n},
      {"superoperator", phi.m.to_rows()},
      {"unitality_residual", unitality_residual(phi)},
      {"rank_P_phi", numerical_rank(pphi)},
      {"rank_P_S", iso.rank_scalar},
      {"projection_residual", iso.projection_residual},
      {"off_diagonal_residual", iso.off_diagonal_residual},
      {"dynamics_residual", iso.dynamics_residual},
      {"product_residual", iso.product_residual},
      {"iso_holds", iso.holds},
  };
  auto& timings = outcome.report["timings"];
  timings["lift_ms"] = clock.lap_ms();
  timings["total_ms"] = timings["total_ms"].get<double>() + timings["lift_ms"].get<double>();
  outcome.verified = outcome.verified && iso.holds;
  return outcome;
}

}  // namespace

AnalysisOutcome run_lift_pullover(const std::string& path, InputFormat format,
                                  const AnalysisOptions& options) {
  MatrixInput in = read_matrix_file(path, format);
  const StochasticMatrix s = make_stochastic(in.rows);
  json input = {{"kind", "pullover"},
                {"path", path},
                {"format", format == InputFormat::json ? "json" : "csv"},
                {"name", in.name},
                {"n", s.size()},
                {"digest", in.digest}};
  return lift_outcome(diag_pullover(s), s, std::move(input), options);
}

AnalysisOutcome run_lift_phase_damping(double alpha, double beta,
                                       const AnalysisOptions& options) {
  const Superoperator phi = phase_damping(alpha, beta);
  const StochasticMatrix s = embedded_stochastic(phi);
  char params[96];
  std::snprintf(params, sizeof params, "phase-damping %.17g %.17g", alpha, beta);
  json input = {{"kind", "phase-damping"},
                {"alpha", alpha},
                {"beta", beta},
                {"n", s.size()},
                {"digest", fnv1a_digest(params)}};
  return lift_outcome(phi, s, std::move(input), options);
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const InputError*>(&e)) return kExitInput;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitNoConvergence;
  if (dynamic_cast<const VerificationError*>(&e)) return kExitVerification;
  if (dynamic_cast<const ArgumentError*>(&e)) return kExitInput;
  return 1;
}

std::string to_json_text(const json& report) {
  std::string out;
  dump_value(report, 0, out);
  out += '\n';
  return out;
}

std::string to_text(const json& report) {
  std::ostringstream os;
  const auto& in = report.at("input");
  os << "input";
  if (in.contains("path")) os << " " << in["path"].get<std::string>();
  if (in.contains("kind")) os << " (" << in["kind"].get<std::string>() << ")";
  os << ", n = " << in.at("n").dump() << ", " << in.at("digest").get<std::string>() << '\n';

  const auto& c = report.at("canonical");
  os << "canonical form\n";
  text_line(os, "transient", c.at("transient"));
  for (const auto& cls : c.at("classes")) {
    os << "  class " << cls.at("states").dump() << " period " << cls.at("period").dump()
       << " cyclic classes " << cls.at("cyclic_classes").dump() << '\n';
  }
  text_line(os, "L", c.at("L"));
  text_line(os, "B_00", c.at("transient_block"));

  const auto& sp = report.at("spectral");
  os << "spectral\n";
  text_line(os, "rank P", sp.at("rank_P"));
  text_line(os, "rank E_1", sp.at("rank_E1"));
  os << "  peripheral values:";
  for (const auto& v : sp.at("peripheral_values")) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (%.6g, %.6g)", v.at("re").get<double>(),
                  v.at("im").get<double>());
    os << buf;
  }
  os << '\n';
  char buf[128];
  std::snprintf(buf, sizeof buf, "  gap estimate: %.10g (interior radius %.10g)\n",
                sp.at("gap_estimate").get<double>(),
                sp.at("interior_radius_estimate").get<double>());
  os << buf;
  os << "  decoherence time (eps = " << sp.at("epsilon").get<double>()
     << "): " << sp.at("decoherence_time").dump() << '\n';

  const auto& a = report.at("algebra");
  os << "algebra\n";
  for (const char* key : {"idempotent_count", "automorphism_order", "order_sharp",
                          "algebra_passed", "automorphism_passed", "product_coincides",
                          "split_holds", "dim_N", "dim_A0", "verified"}) {
    text_line(os, key, a.at(key));
  }
  os << "  max residuals:";
  for (auto it = a.at("residuals").begin(); it != a.at("residuals").end(); ++it) {
    os << ' ' << it.key() << '=';
    if (it.value().is_null()) {
      os << "n/a";
    } else {
      std::snprintf(buf, sizeof buf, "%.3g", it.value().get<double>());
      os << buf;
    }
  }
  os << '\n';

  if (report.contains("lift")) {
    const auto& l = report.at("lift");
    os << "lift\n";
    for (const char* key : {"rank_P_phi", "rank_P_S", "projection_residual",
                            "off_diagonal_residual", "dynamics_residual", "product_residual",
                            "unitality_residual", "iso_holds"}) {
      text_line(os, key, l.at(key));
    }
  }
  return os.str();
}

json without_timings(json report) {
  report.erase("timings");
  return report;
}

}  // namespace persist

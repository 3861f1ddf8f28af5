#ifndef FROBREP_CLI_HPP
#define FROBREP_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "frobrep/autgroup.hpp"
#include "frobrep/char_ring.hpp"
#include "frobrep/derham.hpp"
#include "frobrep/glnrep.hpp"
#include "frobrep/induced.hpp"
#include "frobrep/irreducibles.hpp"
#include "frobrep/json_io.hpp"

namespace frobrep::cli {

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  Scalar p = 2;
  int n = 1;
  int r = 1;
  std::optional<Weight> lambda;
  std::optional<int> lambda_max;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::string output;  // empty: stdout
  Format format = Format::json;
  std::size_t scope_limit = kDefaultScopeLimit;
  std::string witness;  // kernel: JSON file with {"b": ..., "a": ...}
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"dims", "cohomology", "verify-socle", "kernel", "character", "group-check"};
  return c;
}

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 a check failed, 2 usage or scope error, 3 outside hypotheses
  std::string text;
  std::vector<std::string> failures;
};

namespace detail {

class Report {
 public:
  explicit Report(const RunConfig& c) {
    body_["command"] = c.command;
    body_["p"] = c.p;
    body_["n"] = c.n;
    body_["r"] = c.r;
    body_["seed"] = c.seed;
  }
  Json& body() { return body_; }
  void check(bool ok, const std::string& statement) {
    if (!ok) failures_.push_back(statement);
  }
  const std::vector<std::string>& failures() const { return failures_; }
  Json finish() {
    body_["failures"] = failures_;
    body_["ok"] = failures_.empty();
    return body_;
  }

 private:
  Json body_;
  std::vector<std::string> failures_;
};

inline void require_lambda(const RunConfig& c) {
  if (!c.lambda) throw ParameterError(c.command + " needs --lambda");
  if (static_cast<int>(c.lambda->size()) != c.n)
    throw ParameterError("--lambda has " + std::to_string(c.lambda->size()) + " entries but --n is " +
                         std::to_string(c.n));
}

// Dominant weights with nonnegative entries and degree <= d, by degree then lex-descending.
inline std::vector<Weight> dominant_weights(int n, int d) {
  std::vector<Weight> out;
  Weight cur;
  auto rec = [&](auto&& self, int left, int cap) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int v = std::min(left, cap); v >= 0; --v) {
      cur.push_back(v);
      self(self, left - v, v);
      cur.pop_back();
    }
  };
  rec(rec, d, d);
  std::stable_sort(out.begin(), out.end(),
                   [](const Weight& x, const Weight& y) { return weight_degree(x) < weight_degree(y); });
  return out;
}

inline std::string csv_weight(const Weight& w) { return "\"" + weight_to_string(w) + "\""; }

inline std::string run_dims(const RunConfig& c, Report& rep) {
  std::vector<Weight> weights;
  if (c.lambda) {
    require_lambda(c);
    weights.push_back(*c.lambda);
  } else {
    if (!c.lambda_max) throw ParameterError("dims needs --lambda or --lambda-max");
    if (*c.lambda_max < 0) throw ParameterError("--lambda-max must be nonnegative");
    weights = dominant_weights(c.n, *c.lambda_max);
  }
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "lambda,case,dim\n";
  for (const auto& w : weights) {
    Json row{{"lambda", w}};
    try {
      auto ir = dim_irreducible_G(w, c.r, c.p, c.scope_limit);
      row["case"] = to_string(ir.kind);
      row["dim"] = ir.dim;
      const bool low = check_lowest_part(ir, c.scope_limit).ok();
      row["lowest_part_ok"] = low;
      rep.check(low, "lowest graded piece of the character of L" + weight_to_string(w) +
                         " equals the character of the GL_n irreducible");
      csv << csv_weight(w) << "," << to_string(ir.kind) << "," << ir.dim << "\n";
    } catch (const OutsideHypothesesError&) {
      row["case"] = "outside_hypotheses";
      row["dim"] = nullptr;
      csv << csv_weight(w) << ",outside_hypotheses,\n";
    }
    rows.push_back(row);
  }
  rep.body()["rows"] = rows;
  return csv.str();
}

inline std::string run_cohomology(const RunConfig& c, Report& rep) {
  std::optional<WeightModule> twist;
  if (c.lambda) {
    require_lambda(c);
    twist = gln_irreducible_module(*c.lambda, c.p, c.scope_limit);
    rep.body()["twist"] = *c.lambda;
  }
  auto cx = DeRhamComplex::build(c.n, c.r, c.p, twist, c.scope_limit);
  auto h = cohomology_dimensions(cx);
  std::vector<std::size_t> dims, images, expected;
  const long long scale = ipow(static_cast<long long>(c.p), static_cast<unsigned>(c.n * (c.r - 1)));
  for (int i = 0; i <= c.n; ++i) {
    dims.push_back(cx.term(i).dim());
    images.push_back(i == 0 ? 0 : rank(cx.differential(i)));
    expected.push_back(static_cast<std::size_t>(scale * binomial(c.n, i)) * cx.twist_dim());
  }
  rep.body()["twist_dim"] = cx.twist_dim();
  rep.body()["dims"] = dims;
  rep.body()["cohomology"] = h;
  rep.body()["image_dims"] = images;
  rep.body()["expected_cohomology"] = expected;
  for (int i = 0; i <= c.n; ++i)
    rep.check(h[static_cast<std::size_t>(i)] == expected[static_cast<std::size_t>(i)],
              "dim H^" + std::to_string(i) + " of the de Rham complex equals p^(n(r-1)) binom(n,i) dim V");
  std::ostringstream csv;
  csv << "i,term_dim,image_dim,cohomology,expected\n";
  for (int i = 0; i <= c.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    csv << i << "," << dims[k] << "," << images[k] << "," << h[k] << "," << expected[k] << "\n";
  }
  return csv.str();
}

inline void run_verify_socle(const RunConfig& c, Report& rep) {
  require_lambda(c);
  const Weight& lam = *c.lambda;
  Rng rng(c.seed);
  const auto kind = classify(lam, c.p);
  rep.body()["lambda"] = lam;
  rep.body()["case"] = to_string(kind);
  auto ir = dim_irreducible_G(lam, c.r, c.p, c.scope_limit);
  rep.body()["dim"] = ir.dim;
  switch (kind) {
    case IrreducibleCase::fundamental: {
      auto f = verify_socle_fundamental(lam, c.r, c.p, c.samples, rng, c.scope_limit);
      rep.body()["fundamental_index"] = f.i;
      rep.body()["twist_dim"] = f.twist_dim;
      rep.body()["image_dim"] = f.image_dim;
      rep.body()["closure_dim"] = f.closure_dim;
      rep.body()["closure_trace"] = f.closure_trace;
      rep.body()["samples"] = f.samples;
      rep.body()["invariants_dim"] = f.invariants_dim;
      rep.check(f.closure_equals_image, "Lie closure of the invariant generators equals the image of d_i");
      rep.check(f.lie_stable, "the image of d_i is stable under the Lie operators");
      rep.check(f.group_stable, "the image of d_i is stable under the sampled group points");
      rep.check(f.invariants_dim == f.expected_invariants_dim,
                "the G^- invariants of the image of d_i have dimension binom(n,i) dim L(s)");
      rep.check(f.image_dim == ir.dim, "the image of d_i has the dimension of L(lambda, G(n,r))");
      break;
    }
    case IrreducibleCase::generic: {
      const Weight restricted = mod_p_reduce(lam, c.p).r_part;
      auto g = verify_socle_generic(restricted, c.r, c.p, c.scope_limit);
      rep.body()["reduced_to"] = restricted;
      rep.body()["full_dim"] = g.full_dim;
      rep.body()["closure_dim"] = g.closure_dim;
      rep.body()["closure_trace"] = g.closure_trace;
      rep.check(g.ok(), "Lie closure of 1 (x) v(lambda) is all of I(W(lambda))");
      break;
    }
    case IrreducibleCase::r_zero: {
      auto m = InducedModule::build(gln_irreducible_module(lam, c.p, c.scope_limit), c.r, c.scope_limit);
      std::vector<SparseMatrix> ops;
      const auto samples = group_samples(m.ring(), c.samples, rng);
      for (const auto& g : samples)
        for (const auto& comp : m.group_operator(g).components) ops.push_back(comp);
      const auto seeds = m.constant_slice().basis();
      std::vector<std::size_t> trace;
      Subspace s = operator_closure(m.dim(), c.p, std::span<const Vec>(seeds), ops, &trace);
      rep.body()["closure_dim"] = s.dim();
      rep.body()["closure_trace"] = trace;
      rep.body()["samples"] = c.samples;
      rep.check(s.dim() == ir.dim, "the submodule generated by 1 (x) L(lambda) has the pulled back dimension");
      rep.check(subspace_lie_stable(m, s), "the generated submodule is stable under the Lie operators");
      break;
    }
  }
}

inline void run_kernel(const RunConfig& c, Report& rep) {
  const PairRingParams prm{c.n, c.r, c.p};
  if (!c.witness.empty()) {
    std::ifstream in(c.witness);
    if (!in) throw ParameterError("cannot read witness file " + c.witness);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const std::exception& e) {
      throw ParameterError("witness file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("b") || !j.contains("a")) throw ParameterError("witness file needs keys \"b\" and \"a\"");
    GrothendieckPair x{laurent_from_json(j["b"], c.n), laurent_from_json(j["a"], c.n)};
    auto m = kernel_membership(x, prm);
    rep.body()["in_kernel"] = image_map(x, prm).is_zero();
    rep.body()["membership"] = m.ok();
    rep.body()["failed_step"] = to_string(m.failed);
    rep.body()["witness"] = m.ok() ? to_json(*m.witness) : Json(nullptr);
    rep.check(m.ok(), "the pair lies in the parametrized kernel family");
    return;
  }
  const bool identity = adams_iterate(delta_class(c.n), c.p, c.r) == u_class(c.n, c.r, c.p) * delta_class(c.n);
  rep.body()["adams_delta_identity"] = identity;
  rep.check(identity, "(psi^p)^r delta = U_r delta");
  Rng rng(c.seed);
  std::size_t solved = 0;
  for (std::size_t k = 0; k < c.samples; ++k) {
    auto a = random_symmetric_poly(c.n, rng);
    auto m = kernel_membership(kernel_element(a, prm), prm);
    if (m.ok() && *m.witness == a) ++solved;
  }
  rep.body()["round_trips"] = c.samples;
  rep.body()["round_trips_solved"] = solved;
  rep.check(solved == c.samples, "kernel_membership recovers the parameter of every kernel element");
  if (c.n == 1) {
    auto w = exhaustive_kernel_window(prm, -1, 2, 1);
    rep.body()["window"] = Json{{"exponents", {-1, 2}},
                                {"coefficients", {-1, 1}},
                                {"candidates", w.candidates},
                                {"kernel_pairs", w.kernel_pairs},
                                {"outside_family", w.outside_family.size()}};
    rep.check(w.ok(), "every kernel pair in the window belongs to the parametrized family");
  }
  const bool all = rep.failures().empty();
  rep.body()["conclusion"] = all ? (c.n == 1 ? "kernel = parametrized family, exhaustive at window"
                                             : "kernel = parametrized family on all sampled solves")
                                 : "kernel check failed";
}

inline void run_character(const RunConfig& c, Report& rep) {
  require_lambda(c);
  auto ir = dim_irreducible_G(*c.lambda, c.r, c.p, c.scope_limit);
  rep.body()["lambda"] = ir.lambda;
  rep.body()["case"] = to_string(ir.kind);
  rep.body()["dim"] = ir.dim;
  rep.body()["character"] = to_json(ir.character);
  auto low = check_lowest_part(ir, c.scope_limit);
  rep.body()["lowest_part"] = to_json(low.lowest);
  rep.check(low.ok(), "lowest graded piece of the character equals the character of the GL_n irreducible");
  if (c.r == 1) {
    auto s = surjection_bookkeeping(ir, c.scope_limit);
    rep.body()["pair"] = Json{{"b", to_json(s.pair.b)}, {"a", to_json(s.pair.a)}};
    rep.body()["b_terms"] = to_json(s.b_terms);
    rep.body()["a_terms"] = to_json(s.a_terms);
    rep.check(s.reconstructs, "U_1 b + psi^p(a) equals the computed character");
    rep.check(s.terms_recompose, "b and a are integer combinations of irreducible characters");
  }
}

inline void run_group_check(const RunConfig& c, Report& rep) {
  Rng rng(c.seed);
  auto ring = PolyRing::make(c.n, c.r, c.p);
  auto alg = TestAlgebra::truncated(c.p, 1, c.r);
  auto g = check_group_structure(ring, alg, c.samples, rng);
  rep.body()["algebra"] = "F_p[a]/(a^(p^r))";
  rep.body()["samples"] = g.samples;
  rep.body()["checks"] = g.checks;
  for (const auto& f : g.failures) rep.check(false, f);
}

inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

/// Runs one command and renders its report; never throws for library errors.
inline RunResult run(const RunConfig& c) {
  RunResult res;
  try {
    bool known = false;
    for (const auto& k : commands()) known = known || k == c.command;
    if (!known) throw ParameterError("unknown command '" + c.command + "'");
    if (c.format == Format::csv && c.command != "dims" && c.command != "cohomology")
      throw ParameterError("--format csv is only available for dims and cohomology");
    if (c.n < 1) throw ParameterError("--n must be >= 1");
    if (c.r < 1) throw ParameterError("--r must be >= 1");
    checked_prime(c.p);
    detail::Report rep(c);
    std::string csv;
    if (c.command == "dims") csv = detail::run_dims(c, rep);
    else if (c.command == "cohomology") csv = detail::run_cohomology(c, rep);
    else if (c.command == "verify-socle") detail::run_verify_socle(c, rep);
    else if (c.command == "kernel") detail::run_kernel(c, rep);
    else if (c.command == "character") detail::run_character(c, rep);
    else detail::run_group_check(c, rep);
    res.failures = rep.failures();
    Json body = rep.finish();
    res.text = c.format == Format::csv ? csv : detail::render_json(body);
    res.exit_code = res.failures.empty() ? 0 : 1;
  } catch (const OutsideHypothesesError& e) {
    res.exit_code = 3;
    res.text = std::string("error: ") + e.what() + "\n";
  } catch (const Error& e) {
    res.exit_code = 2;
    res.text = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

/// Scope limit from FROBREP_SCOPE_LIMIT, or the default.
inline std::size_t scope_limit_from_env() {
  const char* v = std::getenv("FROBREP_SCOPE_LIMIT");
  if (!v || !*v) return kDefaultScopeLimit;
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != std::string(v).size() || x <= 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ParameterError("FROBREP_SCOPE_LIMIT must be a positive integer");
  }
}

/// Full command line: parse, run, write output. Returns the process exit status.
inline int main_entry(int argc, char** argv) {
  CLI::App app{"frobrep"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string lambda_text, format_text = "json";
  std::optional<std::size_t> scope_flag;
  std::optional<int> lambda_max;
  unsigned p = 2;
  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--p", p, "prime")->required();
    sub->add_option("--n", cfg.n, "number of variables");
    sub->add_option("--r", cfg.r, "Frobenius kernel height");
    sub->add_option("--lambda", lambda_text, "weight, e.g. 2,1,0");
    if (name == "dims") sub->add_option("--lambda-max", lambda_max, "largest weight degree");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--samples", cfg.samples, "number of random samples");
    sub->add_option("--output", cfg.output, "output file (default stdout)");
    sub->add_option("--format", format_text, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--scope-limit", scope_flag, "largest ambient dimension");
    if (name == "kernel") sub->add_option("--witness", cfg.witness, "JSON file with a pair {b, a} to test");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.p = p;
    cfg.format = format_text == "csv" ? Format::csv : Format::json;
    cfg.lambda_max = lambda_max;
    if (!lambda_text.empty()) cfg.lambda = parse_weight(lambda_text);
    cfg.scope_limit = scope_flag ? *scope_flag : scope_limit_from_env();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  RunResult res = run(cfg);
  if (res.exit_code >= 2) {
    std::cerr << res.text;
    return res.exit_code;
  }
  if (cfg.output.empty()) {
    std::cout << res.text;
  } else {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.output << "\n";
      return 2;
    }
    out << res.text;
  }
  for (const auto& f : res.failures) std::cerr << "FAILED: " << f << "\n";
  return res.exit_code;
}

}  // namespace frobrep::cli

#endif  // FROBREP_CLI_HPP

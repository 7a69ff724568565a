// frechet: command-line front end.
//
// Exit codes: 0 success, 1 negative answer (decide says no), 2 usage or
// input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "frechet/frechet.hpp"

namespace {

using namespace frechet;

struct common_options {
  std::string mode;
  std::string metric_text = "strong";
  int digits = 0;
  bool collapse = false;
  double tolerance = -1.0;
};

metric parse_metric(const std::string& s) {
  if (s == "strong") return metric::strong;
  if (s == "weak") return metric::weak;
  throw input_error("metric must be 'strong' or 'weak'");
}

std::string resolve_mode(const std::string& flag) {
  std::string mode = flag;
  if (mode.empty()) {
    const char* env = std::getenv("FRECHET_MODE");
    mode = env ? env : "float";
  }
  if (mode != "float" && mode != "rational") throw input_error("mode must be 'float' or 'rational'");
  return mode;
}

template <scalar T>
curve_file<T> load_curves(const std::string& path, bool collapse) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  return read_curves<T>(in, format_for_path(path), collapse ? duplicate_policy::collapse : duplicate_policy::reject);
}

template <scalar T>
std::string format_radius(const radius<T>& r, int digits) {
  if constexpr (is_exact_v<T>) {
    const rational& s = r.squared();
    mpz_class num = s.get_num(), den = s.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t()))
      return format_number(rational(mpz_class(sqrt(num)), mpz_class(sqrt(den))), digits);
  }
  return format_number(r.approx(), digits);
}

// distance ------------------------------------------------------------------

struct distance_args {
  std::string file, sigma_id, tau_id;
  bool witness = false;
};

template <scalar T>
int run_distance(const distance_args& a, const common_options& o) {
  auto curves = load_curves<T>(a.file, o.collapse);
  const auto& sigma = curves.find(a.sigma_id);
  const auto& tau = curves.find(a.tau_id);
  auto res = frechet_distance(sigma, tau, parse_metric(o.metric_text));
  std::cout << "distance=" << format_radius(res.value, o.digits) << '\n';
  if constexpr (is_exact_v<T>) std::cout << "distance_squared=" << format_number(res.value.squared()) << '\n';
  std::cout << "critical_values=" << res.critical_count << '\n';
  if (a.witness) {
    std::cout << "witness=";
    for (std::size_t i = 0; i < res.witness.size(); ++i)
      std::cout << (i ? " " : "") << format_number(res.witness[i].tau, o.digits) << ':'
                << format_number(res.witness[i].sigma, o.digits);
    std::cout << '\n';
  }
  return 0;
}

// decide --------------------------------------------------------------------

struct decide_args {
  std::string file, sigma_id, tau_id, r;
  bool from_signs = false;
};

template <scalar T>
int run_decide(const decide_args& a, const common_options& o) {
  auto curves = load_curves<T>(a.file, o.collapse);
  const auto& sigma = curves.find(a.sigma_id);
  const auto& tau = curves.find(a.tau_id);
  T r = parse_number<T>(a.r);
  if (r < 0) throw input_error("radius must be nonnegative");
  metric which = parse_metric(o.metric_text);
  auto rad = radius<T>::from_value(r);
  bool yes;
  if (a.from_signs) {
    polynomial_set<T> set(tau, sigma.size(), which == metric::weak);
    yes = decide_from_sign_vector(compute_sign_vector(set, sigma, rad), which);
  } else {
    yes = decide(sigma, tau, rad, which);
  }
  std::cout << (yes ? "yes" : "no") << '\n';
  return yes ? 0 : 1;
}

// simplify ------------------------------------------------------------------

struct simplify_args {
  std::string file, tau_id, problem = "min-size", out, format = "csv";
  std::optional<double> r;
  std::optional<std::size_t> k;
  double alpha = 0.5;
  std::size_t restarts = 32;
  std::uint64_t seed = 1;
  bool pin = false;
};

int run_simplify(const simplify_args& a, const common_options& o) {
  auto curves = load_curves<double>(a.file, o.collapse);
  const auto& tau = curves.find(a.tau_id);
  metric which = parse_metric(o.metric_text);
  search_budget budget;
  budget.restarts = a.restarts;
  budget.seed = a.seed;
  budget.pin_endpoints = a.pin;
  auto need_r = [&] {
    if (!a.r) throw input_error("--r is required for " + a.problem);
    return *a.r;
  };
  simplification_result res;
  if (a.problem == "min-size") {
    res = min_size_simplify(tau, need_r(), which, budget);
  } else if (a.problem == "min-error") {
    if (!a.k) throw input_error("--k is required for min-error");
    res = min_error_simplify(tau, *a.k, which, budget);
  } else if (a.problem == "greedy") {
    res = greedy_simplify(tau, need_r(), a.alpha, which, budget);
  } else if (a.problem == "vertex-restricted") {
    res = vertex_restricted_simplify(tau, need_r(), which);
  } else {
    throw input_error("unknown problem '" + a.problem + "'");
  }
  curve_format fmt = a.format == "jsonl" ? curve_format::jsonl : curve_format::csv;
  if (a.format != "csv" && a.format != "jsonl") throw input_error("format must be csv or jsonl");
  curve_file<double> outfile;
  outfile.dim = tau.dim();
  outfile.add(a.tau_id + "-simplified", res.sigma);
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw input_error("cannot write '" + a.out + "'");
    write_curves(f, outfile, fmt);
  } else {
    write_curves(std::cout, outfile, fmt);
  }
  std::cout << "certified=" << (res.certified ? "yes" : "no") << " size=" << res.sigma.size()
            << " achieved_r=" << format_number(res.achieved_r, o.digits) << " restarts=" << res.trace.restarts
            << " evaluations=" << res.trace.evaluations << '\n';
  return 0;
}

// query ---------------------------------------------------------------------

struct query_args {
  std::string dataset, load, save, sigma_file, sigma_id, r, subcurve, tau_id;
  std::optional<std::size_t> k;
  bool nn = false, verify = false;
  std::size_t warmup = 0;
  std::uint64_t seed = 1;
};

template <scalar T>
subcurve_spec<T> parse_subcurve(const std::string& text) {
  // i:beta,i2:gamma
  auto comma = text.find(',');
  if (comma == std::string::npos) throw input_error("--subcurve expects i:beta,i2:gamma");
  auto part = [](const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw input_error("--subcurve expects i:beta,i2:gamma");
    return std::make_pair(static_cast<std::size_t>(std::stoul(s.substr(0, colon))), parse_number<T>(s.substr(colon + 1)));
  };
  auto [i, beta] = part(text.substr(0, comma));
  auto [i2, gamma] = part(text.substr(comma + 1));
  return {i, beta, i2, gamma};
}

template <scalar T>
int run_query(const query_args& a, const common_options& o) {
  metric which = parse_metric(o.metric_text);
  std::optional<curve_file<T>> data;
  if (!a.dataset.empty()) data = load_curves<T>(a.dataset, o.collapse);

  auto sigma_source = a.sigma_file.empty() ? a.dataset : a.sigma_file;
  if (sigma_source.empty() || a.sigma_id.empty()) throw input_error("--sigma-id (and a curve file) is required");
  auto sigma_curves = load_curves<T>(sigma_source, o.collapse);
  const auto& sigma = sigma_curves.find(a.sigma_id);

  if (!a.subcurve.empty()) {
    if (!data || a.tau_id.empty()) throw input_error("--subcurve needs a dataset and --tau-id");
    const auto& tau = data->find(a.tau_id);
    auto spec = parse_subcurve<T>(a.subcurve);
    auto res = subcurve_distance(tau, spec, sigma, which);
    std::cout << "distance=" << format_radius(res.value, o.digits) << '\n';
    if (a.verify) {
      auto check = verify_subcurve(tau, spec, sigma, which);
      std::cout << "verified=" << (check.ok() ? "yes" : "no") << '\n';
      if (!check.ok()) return 1;
    }
    return 0;
  }

  std::optional<range_index<T>> index;
  if (!a.load.empty()) {
    std::ifstream in(a.load);
    if (!in) throw input_error("cannot open '" + a.load + "'");
    index.emplace(load_index<T>(in));
  } else {
    if (!data) throw input_error("a dataset or --load-index is required");
    index.emplace(data->curves, a.k.value_or(sigma.size()), which);
    index->set_labels(data->ids);
  }
  if (a.warmup) std::cout << "warmup_entries=" << index->warmup(a.warmup, a.seed) << '\n';
  auto label = [&](std::size_t i) { return index->label(i); };

  if (a.nn) {
    auto best = nearest_neighbor(*index, sigma);
    std::cout << "neighbor=" << label(best.index) << " index=" << best.index
              << " distance=" << format_radius(best.distance, o.digits) << '\n';
  } else {
    if (a.r.empty()) throw input_error("one of --r, --nn or --subcurve is required");
    T r = parse_number<T>(a.r);
    if (r < 0) throw input_error("radius must be nonnegative");
    auto subset = index->range_query(sigma, r);
    std::cout << "subset=";
    for (std::size_t i = 0; i < subset.size(); ++i) std::cout << (i ? "," : "") << subset[i];
    std::cout << "\nids=";
    for (std::size_t i = 0; i < subset.size(); ++i) std::cout << (i ? "," : "") << label(subset[i]);
    auto st = index->stats();
    std::cout << "\ncache_hits=" << st.hits << " cache_misses=" << st.misses << " cache_size=" << index->cache_size()
              << '\n';
  }
  if (!a.save.empty()) {
    std::ofstream out(a.save);
    if (!out) throw input_error("cannot write '" + a.save + "'");
    save_index(out, *index);
  }
  return 0;
}

// vc ------------------------------------------------------------------------

struct vc_args {
  std::string dataset, report;
  std::size_t k = 2, budget = 1000;
  std::uint64_t seed = 1;
  double constant = 1.0;
};

int run_vc(const vc_args& a, const common_options& o) {
  auto data = load_curves<double>(a.dataset, o.collapse);
  auto rep = vc_counting_experiment(data.curves, a.k, {a.budget, a.seed}, a.constant);
  std::cout << "curves=" << rep.n << " d=" << rep.d << " k=" << rep.k << " max_m=" << rep.max_m << '\n'
            << "samples=" << rep.samples << " polynomials=" << rep.polynomial_count << '\n'
            << "distinct_sign_vectors=" << rep.distinct_sign_vectors << '\n'
            << "distinct_range_subsets=" << rep.distinct_range_subsets << '\n'
            << "shattered=" << (rep.shattered ? "yes" : "no") << '\n'
            << "log2_subsets=" << format_number(rep.log2_subsets, o.digits) << '\n'
            << "reference_log2=" << format_number(rep.reference_log2, o.digits) << " exponent=" << rep.exponent
            << " subcurve_exponent=" << rep.subcurve_exponent << " c=" << format_number(rep.constant, o.digits)
            << '\n';
  if (!a.report.empty()) {
    std::ofstream out(a.report);
    if (!out) throw input_error("cannot write '" + a.report + "'");
    out << nlohmann::json{{"curves", rep.n},
                          {"d", rep.d},
                          {"k", rep.k},
                          {"max_m", rep.max_m},
                          {"samples", rep.samples},
                          {"polynomials", rep.polynomial_count},
                          {"distinct_sign_vectors", rep.distinct_sign_vectors},
                          {"distinct_range_subsets", rep.distinct_range_subsets},
                          {"exponent", rep.exponent},
                          {"subcurve_exponent", rep.subcurve_exponent},
                          {"c", rep.constant},
                          {"reference_log2", rep.reference_log2}}
               .dump()
        << '\n';
    for (const auto& rec : rep.records) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& v : rec.sigma.vertices()) pts.push_back(std::vector<double>(v.coords().begin(), v.coords().end()));
      out << nlohmann::json{{"signs", rec.signs}, {"sigma", pts}, {"r", rec.r}, {"subset", rec.subset}}.dump() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frechet and weak Frechet distance via polynomial sign predicates"};
  app.require_subcommand(1);
  common_options common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mode", common.mode, "float or rational (default: $FRECHET_MODE or float)");
    sub->add_option("--metric", common.metric_text, "strong or weak")->capture_default_str();
    sub->add_option("--digits", common.digits, "significant digits for display (0 = round-trip)");
    sub->add_flag("--collapse", common.collapse, "collapse repeated consecutive vertices instead of rejecting");
    sub->add_option("--tolerance", common.tolerance, "comparison tolerance in float mode");
  };

  distance_args dist;
  auto* distance = app.add_subcommand("distance", "exact distance between two curves of a file");
  distance->add_option("file", dist.file)->required();
  distance->add_option("sigma", dist.sigma_id)->required();
  distance->add_option("tau", dist.tau_id)->required();
  distance->add_flag("--witness", dist.witness, "print the matching breakpoints (tau:sigma)");
  add_common(distance);

  decide_args dec;
  auto* decide_cmd = app.add_subcommand("decide", "is the distance at most r?");
  decide_cmd->add_option("file", dec.file)->required();
  decide_cmd->add_option("sigma", dec.sigma_id)->required();
  decide_cmd->add_option("tau", dec.tau_id)->required();
  decide_cmd->add_option("--r", dec.r)->required();
  decide_cmd->add_flag("--from-signs", dec.from_signs, "decide from the sign vector only");
  add_common(decide_cmd);

  simplify_args simp;
  auto* simplify = app.add_subcommand("simplify", "simplify one curve");
  simplify->add_option("file", simp.file)->required();
  simplify->add_option("tau", simp.tau_id)->required();
  simplify->add_option("--problem", simp.problem, "min-size, min-error, greedy or vertex-restricted")
      ->capture_default_str();
  simplify->add_option("--r", simp.r);
  simplify->add_option("--k", simp.k);
  simplify->add_option("--alpha", simp.alpha)->capture_default_str();
  simplify->add_option("--budget", simp.restarts, "restarts per size")->capture_default_str();
  simplify->add_option("--seed", simp.seed)->capture_default_str();
  simplify->add_flag("--pin-endpoints", simp.pin);
  simplify->add_option("--out", simp.out, "write the simplified curve here");
  simplify->add_option("--format", simp.format, "csv or jsonl")->capture_default_str();
  add_common(simplify);

  query_args q;
  auto* query = app.add_subcommand("query", "range, nearest-neighbor and subcurve queries");
  query->add_option("dataset", q.dataset);
  query->add_option("--load-index", q.load);
  query->add_option("--save-index", q.save);
  query->add_option("--sigma-file", q.sigma_file);
  query->add_option("--sigma-id", q.sigma_id);
  query->add_option("--k", q.k);
  query->add_option("--r", q.r);
  query->add_flag("--nn", q.nn);
  query->add_option("--subcurve", q.subcurve, "i:beta,i2:gamma (0-based edges)");
  query->add_option("--tau-id", q.tau_id);
  query->add_flag("--verify", q.verify);
  query->add_option("--warmup", q.warmup);
  query->add_option("--seed", q.seed);
  add_common(query);

  vc_args vc;
  auto* vc_cmd = app.add_subcommand("vc", "range-subset counting experiment");
  vc_cmd->add_option("dataset", vc.dataset)->required();
  vc_cmd->add_option("--k", vc.k)->capture_default_str();
  vc_cmd->add_option("--budget", vc.budget)->capture_default_str();
  vc_cmd->add_option("--seed", vc.seed)->capture_default_str();
  vc_cmd->add_option("--constant", vc.constant)->capture_default_str();
  vc_cmd->add_option("--report", vc.report);
  add_common(vc_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (common.tolerance >= 0) set_comparison_tolerance(common.tolerance);
    bool exact = resolve_mode(common.mode) == "rational";
    if (distance->parsed()) return exact ? run_distance<rational>(dist, common) : run_distance<double>(dist, common);
    if (decide_cmd->parsed()) return exact ? run_decide<rational>(dec, common) : run_decide<double>(dec, common);
    if (simplify->parsed()) {
      if (exact) throw input_error("simplify runs in float mode only");
      return run_simplify(simp, common);
    }
    if (query->parsed()) return exact ? run_query<rational>(q, common) : run_query<double>(q, common);
    if (vc_cmd->parsed()) {
      if (exact) throw input_error("vc runs in float mode only");
      return run_vc(vc, common);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

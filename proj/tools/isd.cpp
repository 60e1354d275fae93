// Command-line front end: construct, inspect, search, verify and run the
// randomized pipelines with reproducible seeds.
//
// Exit codes: 0 success / 1 negative or stage failure / 2 malformed input /
// 3 I/O error / 4 budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isd/certificate_io.hpp"
#include "isd/connectivity.hpp"
#include "isd/generators.hpp"
#include "isd/graph_io.hpp"
#include "isd/invariants.hpp"
#include "isd/linkage_io.hpp"
#include "isd/main_theorem.hpp"
#include "isd/mader_params.hpp"
#include "isd/pipeline.hpp"
#include "isd/planted.hpp"
#include "isd/projective_plane.hpp"
#include "isd/regular_graph.hpp"
#include "isd/rng.hpp"
#include "isd/subdivision.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitIo = 3;
constexpr int kExitBudget = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  out << data;
  if (!out) throw std::ios_base::failure("write failed on " + path);
}

isd::GraphFormat format_from_name(const std::string& name, const std::string& bytes) {
  if (name == "graph6" || name == "g6") return isd::GraphFormat::graph6;
  if (name == "edge-list" || name == "edgelist") return isd::GraphFormat::edge_list;
  if (name == "json") return isd::GraphFormat::json;
  if (name == "auto") return isd::sniff_format(bytes);
  throw CLI::ValidationError("--format", "unknown format " + name);
}

isd::Graph load_graph_file(const std::string& path, const std::string& format) {
  std::string bytes = read_file(path);
  return isd::load_graph(bytes, format_from_name(format, bytes));
}

nlohmann::ordered_json report_to_json(const isd::VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["is_subdivision"] = rep.is_subdivision;
  j["is_induced"] = rep.is_induced;
  j["is_proper"] = rep.is_proper;
  auto& violations = j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : rep.violations) {
    nlohmann::ordered_json entry;
    entry["kind"] = v.kind;
    entry["witness"] = v.witness;
    violations.push_back(std::move(entry));
  }
  return j;
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q(text);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const std::string& cert_path, const std::string& graph_path,
               const std::string& format, bool require_proper) {
  auto cert = isd::parse_certificate(read_file(cert_path));
  auto host = load_graph_file(graph_path, format);
  isd::VerificationReport rep;
  try {
    rep = isd::verify(host, cert);
  } catch (const isd::MalformedCertificate& e) {
    nlohmann::ordered_json j;
    j["malformed"] = e.what();
    std::cout << j.dump(2) << "\n";
    return kExitMalformed;
  }
  std::cout << report_to_json(rep).dump(2) << "\n";
  bool ok = rep.is_induced && (!require_proper || rep.is_proper);
  return ok ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------
// find
// ---------------------------------------------------------------------------

int run_find(const std::string& graph_path, const std::string& format, int s, bool proper,
             std::uint64_t budget, const std::string& out_path) {
  if (s < 3) throw CLI::ValidationError("--s", "pattern order must be >= 3");
  auto host = load_graph_file(graph_path, format);
  auto result = isd::find_induced_subdivision(host, isd::complete_graph(s), budget, proper);
  if (result.status == isd::SearchStatus::found) {
    auto j = isd::certificate_to_json(*result.certificate);
    if (!out_path.empty()) write_file(out_path, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "none ("
            << (result.status == isd::SearchStatus::none_exists ? "search exhausted"
                                                                : "budget exhausted")
            << ", nodes=" << result.nodes_expanded << ")\n";
  return result.status == isd::SearchStatus::none_exists ? kExitNegative : kExitBudget;
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

int run_construct_plane(int q, const std::string& out_path) {
  auto pl = isd::projective_plane(q);
  auto j = isd::plane_to_json(pl);
  if (!out_path.empty())
    write_file(out_path, j.dump(2) + "\n");
  else
    std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_construct_incidence(int q, const std::string& format, const std::string& out_path) {
  auto g = isd::incidence_graph(isd::projective_plane(q));
  auto fmt = format == "auto" ? isd::GraphFormat::graph6 : format_from_name(format, "");
  std::string data = isd::save_graph(g, fmt);
  if (fmt != isd::GraphFormat::edge_list) data += "\n";
  if (!out_path.empty())
    write_file(out_path, data);
  else
    std::cout << data;
  return kExitOk;
}

int run_construct_regular(int d, int n, int girth, std::uint64_t seed, std::uint64_t swaps,
                          const std::string& format, const std::string& out_path) {
  auto g = isd::high_girth_regular(d, n, girth, seed, swaps);
  if (!g) {
    std::cout << "none (girth target not reached within the swap budget or below the Moore bound)\n";
    return kExitNegative;
  }
  auto fmt = format == "auto" ? isd::GraphFormat::graph6 : format_from_name(format, "");
  std::string data = isd::save_graph(*g, fmt);
  if (fmt != isd::GraphFormat::edge_list) data += "\n";
  if (!out_path.empty())
    write_file(out_path, data);
  else
    std::cout << data;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

int run_moore(int delta, long m);

int run_invariants(const std::string& graph_path, const std::string& format, bool with_conn,
                   const std::vector<long>& moore_args) {
  if (!moore_args.empty()) return run_moore(static_cast<int>(moore_args[0]), moore_args[1]);
  if (graph_path.empty()) {
    std::cerr << "invariants: need a graph file or --moore <delta> <m>\n";
    return kExitMalformed;
  }
  auto g = load_graph_file(graph_path, format);
  auto s = isd::stats(g);
  auto ord = isd::degeneracy_order(g);
  nlohmann::ordered_json j;
  j["n"] = g.n();
  j["m"] = g.m();
  j["min_degree"] = s.min_degree;
  j["max_degree"] = s.max_degree;
  j["average_degree"] = std::to_string(s.average_degree.num) + "/" + std::to_string(s.average_degree.den);
  if (s.girth)
    j["girth"] = *s.girth;
  else
    j["girth"] = "infinity";
  j["components"] = s.component_count;
  j["degeneracy"] = ord.degeneracy;
  if (with_conn && g.n() >= 2) j["vertex_connectivity"] = isd::vertex_connectivity(g);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_moore(int delta, long m) {
  auto bound = isd::moore_lower_bound(delta, m);
  nlohmann::ordered_json j;
  j["delta"] = delta;
  j["m"] = m;
  j["digits"] = mpz_sizeinbase(bound.get_mpz_t(), 10);
  if (mpz_sizeinbase(bound.get_mpz_t(), 10) <= 10000)
    j["moore_lower_bound"] = bound.get_str();
  else
    j["moore_lower_bound"] = "(omitted, " + std::to_string(mpz_sizeinbase(bound.get_mpz_t(), 10)) + " digits)";
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mader-params
// ---------------------------------------------------------------------------

int run_params(int s, const std::string& eta, const std::string& d_expr, int ell, int m) {
  mpz_class D;
  auto caret = d_expr.find('^');
  if (caret != std::string::npos) {
    mpz_class base(d_expr.substr(0, caret));
    mpz_pow_ui(D.get_mpz_t(), base.get_mpz_t(), std::stoul(d_expr.substr(caret + 1)));
  } else {
    D = mpz_class(d_expr);
  }
  auto der = isd::derive_mader_parameters(s, parse_rational(eta), D, ell, m);
  nlohmann::ordered_json j;
  j["s"] = s;
  j["a"] = der.params.a;
  j["q"] = der.params.q;
  j["Q"] = der.params.Q;
  j["ell"] = ell;
  j["L"] = der.params.L;
  j["m"] = m;
  j["girth_threshold"] = der.params.girth_threshold.get_str();
  j["mu_ell_log10"] = der.feasibility.mu_ell_log10;
  j["pi_log10"] = der.feasibility.pi_log10;
  j["feasible"] = der.feasibility.feasible;
  j["violated"] = der.feasibility.violated;
  std::cout << j.dump(2) << "\n";
  return der.feasibility.feasible ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

struct PipelineOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> retries;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> profile;
  bool relax_girth = false;
};

int run_pipeline(const std::string& descriptor_path, const std::string& trace_path,
                 const std::string& cert_path, bool timings, const PipelineOverrides& over) {
  nlohmann::json desc;
  try {
    desc = nlohmann::json::parse(read_file(descriptor_path));
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "descriptor parse error: " << e.what() << "\n";
    return kExitMalformed;
  }
  if (!desc.is_object() || !desc.contains("op")) {
    std::cerr << "descriptor must be an object with an 'op' field\n";
    return kExitMalformed;
  }
  // command-line overrides win over descriptor fields
  if (over.seed) desc["seed"] = *over.seed;
  if (over.retries) desc["retries"] = *over.retries;
  if (over.budget) desc["budget"] = *over.budget;
  if (over.profile) desc["profile"] = *over.profile;
  if (over.relax_girth) desc["relax_girth"] = true;

  std::string op = desc.at("op").get<std::string>();
  std::uint64_t seed = desc.value("seed", 0ULL);
  int retries = desc.value("retries", 20);

  auto graph_of = [&](const char* key) { return isd::graph_from_json(desc.at(key)); };
  auto ints_of = [&](const char* key) { return desc.at(key).get<std::vector<int>>(); };

  isd::PipelineResult result;
  std::optional<std::pair<std::vector<int>, std::vector<int>>> cleaned_sets;
  std::optional<nlohmann::ordered_json> linkage_json;

  try {
    if (op == "solve_linkage") {
      auto inst = isd::linkage_from_json(desc);
      auto lres = isd::solve_linkage(inst, desc.value("budget", 10'000'000ULL));
      linkage_json = isd::linkage_result_to_json(lres);
      if (lres.status != isd::SearchStatus::found)
        result.failure = lres.status == isd::SearchStatus::budget_exhausted
                             ? "linkage budget exhausted"
                             : "linkage infeasible";
    } else if (op == "unbalanced_step") {
      isd::UnbalancedOptions opts;
      opts.seed = seed;
      opts.retries = retries;
      opts.girth_floor = desc.value("girth_floor", 54);
      if (desc.contains("budget")) opts.finder_budget = desc.at("budget").get<std::uint64_t>();
      result = isd::unbalanced_step(graph_of("graph"), ints_of("A"), ints_of("B"),
                                    desc.at("d").get<int>(), opts);
    } else if (op == "cleaning_step") {
      isd::CleaningOptions opts;
      opts.seed = seed;
      opts.retries = retries;
      opts.girth_floor = desc.value("girth_floor", 54);
      if (desc.contains("min_x_fraction"))
        opts.min_x_fraction = parse_rational(desc.at("min_x_fraction").get<std::string>());
      if (desc.contains("size_coeff"))
        opts.size_coeff = parse_rational(desc.at("size_coeff").get<std::string>());
      auto cres = isd::cleaning_step(graph_of("graph"), ints_of("X"), ints_of("B0"),
                                     desc.at("d").get<int>(), opts);
      result.trace = std::move(cres.trace);
      result.failure = cres.failure;
      cleaned_sets = std::move(cres.sets);
    } else if (op == "induced_mader") {
      isd::MaderOptions opts;
      opts.seed = seed;
      opts.retries = retries;
      opts.relax_girth = desc.value("relax_girth", false);
      opts.relax_core = desc.value("relax_core", false);
      isd::MaderParameters params;
      if (desc.value("profile", "") == "planted-desk") {
        params = isd::plant_mader().params;  // constants of the planted family
      } else if (desc.contains("d")) {
        auto der = isd::paper_mader_parameters(desc.at("d").get<int>());
        params = der.params;
      } else {
        std::cerr << "induced_mader descriptor needs 'd' (paper profile) or profile=planted-desk\n";
        return kExitMalformed;
      }
      result = isd::induced_mader(graph_of("graph"), params, opts);
    } else if (op == "main_theorem") {
      isd::MainTheoremProfile profile;
      std::string prof_name = desc.value("profile", "paper");
      if (prof_name == "desk")
        profile = isd::MainTheoremProfile::desk();
      else if (prof_name == "paper")
        profile = isd::MainTheoremProfile::paper();
      else {
        std::cerr << "unknown profile " << prof_name << "\n";
        return kExitMalformed;
      }
      profile.seed = seed;
      profile.retries = retries;
      if (desc.contains("girth_requirement"))
        profile.girth_requirement = mpz_class(desc.at("girth_requirement").get<long>());
      result = isd::main_theorem(graph_of("graph"), desc.at("k").get<int>(), profile);
    } else {
      std::cerr << "unknown pipeline op '" << op << "'\n";
      return kExitMalformed;
    }
  } catch (const std::invalid_argument& e) {
    result.failure = std::string("precondition: ") + e.what();
  } catch (const isd::StructuralError& e) {
    result.failure = std::string("structural: ") + e.what();
  }

  nlohmann::ordered_json trace;
  trace["op"] = op;
  trace["resolved_config"] = {{"seed", seed}, {"retries", retries}};
  trace["stages"] = result.trace.to_json(timings);
  trace["failed_stage"] = result.failure;
  bool success = result.certificate.has_value() || cleaned_sets.has_value() ||
                 (linkage_json && result.failure.empty());
  trace["success"] = success;
  if (cleaned_sets) {
    trace["X_prime"] = cleaned_sets->first;
    trace["Y"] = cleaned_sets->second;
  }
  if (linkage_json) trace["linkage"] = *linkage_json;
  std::string trace_text = trace.dump(2) + "\n";
  if (!trace_path.empty())
    write_file(trace_path, trace_text);
  else
    std::cout << trace_text;

  if (result.certificate) {
    // certificates are re-verified by the pipeline before they reach here
    auto jcert = isd::certificate_to_json(*result.certificate);
    if (!cert_path.empty())
      write_file(cert_path, jcert.dump(2) + "\n");
    else
      std::cout << jcert.dump(2) << "\n";
  }
  if (!success) {
    std::cerr << "pipeline failed: " << result.failure << "\n";
    return kExitNegative;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-diff
// ---------------------------------------------------------------------------

int run_oracle_diff(int count, int max_n, std::uint64_t seed, std::uint64_t budget) {
  auto rng = isd::make_rng(seed, 0x0d1ffULL);
  isd::Graph k3 = isd::complete_graph(3);
  int mismatches = 0;
  for (int i = 0; i < count; ++i) {
    int n = 3 + static_cast<int>(isd::uniform_below(rng, static_cast<std::uint64_t>(max_n - 2)));
    int max_m = n * (n - 1) / 2;
    int m = static_cast<int>(isd::uniform_below(rng, static_cast<std::uint64_t>(max_m + 1)));
    auto g = isd::random_connected_graph(n, m, rng);
    auto found = isd::find_induced_subdivision(g, k3, budget);
    if (found.status == isd::SearchStatus::budget_exhausted) {
      std::cerr << "budget exhausted on instance " << i << "\n";
      return kExitBudget;
    }
    // independent oracle: any cycle contains a chordless one; detect cycles
    // by edge count against the spanning forest
    bool has_cycle = g.m() > g.n() - isd::component_count(g);
    if ((found.status == isd::SearchStatus::found) != has_cycle) {
      ++mismatches;
      std::cerr << "mismatch on instance " << i << ": finder="
                << (found.status == isd::SearchStatus::found) << " oracle=" << has_cycle << "\n";
    }
    if (found.certificate && !isd::verify(g, *found.certificate).is_induced) {
      ++mismatches;
      std::cerr << "invalid certificate on instance " << i << "\n";
    }
  }
  nlohmann::ordered_json j;
  j["instances"] = count;
  j["mismatches"] = mismatches;
  std::cout << j.dump(2) << "\n";
  return mismatches == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"induced subdivisions in high-girth graphs"};
  app.require_subcommand(1);

  // verify
  std::string cert_path, graph_path, format = "auto", out_path;
  bool require_proper = false;
  auto* verify_cmd = app.add_subcommand("verify", "check a subdivision certificate against a host graph");
  verify_cmd->add_option("certificate", cert_path, "certificate JSON file")->required();
  verify_cmd->add_option("graph", graph_path, "host graph file")->required();
  verify_cmd->add_option("--format", format, "graph format: auto|graph6|edge-list|json");
  verify_cmd->add_flag("--proper", require_proper, "require properness for exit 0");

  // find
  int find_s = 3;
  std::uint64_t budget = 100'000'000;
  auto* find_cmd = app.add_subcommand("find", "complete search for an induced K_s-subdivision");
  find_cmd->add_option("graph", graph_path, "host graph file")->required();
  find_cmd->add_option("--s", find_s, "pattern clique order")->required();
  find_cmd->add_option("--format", format, "graph format");
  find_cmd->add_option("--budget", budget, "node-expansion budget");
  find_cmd->add_flag("--proper", require_proper, "search for a proper witness only");
  find_cmd->add_option("--out", out_path, "certificate output file");

  // construct
  auto* construct = app.add_subcommand("construct", "build planes, incidence graphs and regular graphs");
  int q = 2, reg_d = 3, reg_n = 14, reg_girth = 6;
  std::uint64_t seed = 0, swaps = 200'000;
  auto* plane_cmd = construct->add_subcommand("plane", "projective plane PG(2,q) as JSON");
  plane_cmd->add_option("--q", q, "prime power <= 64")->required();
  plane_cmd->add_option("--out", out_path, "output file");
  auto* inc_cmd = construct->add_subcommand("incidence", "point-line incidence graph of PG(2,q)");
  inc_cmd->add_option("--q", q, "prime power <= 64")->required();
  inc_cmd->add_option("--format", format, "output format (default graph6)");
  inc_cmd->add_option("--out", out_path, "output file");
  auto* reg_cmd = construct->add_subcommand("regular", "random d-regular graph with a girth target");
  reg_cmd->add_option("--d", reg_d, "degree")->required();
  reg_cmd->add_option("--n", reg_n, "vertex count")->required();
  reg_cmd->add_option("--girth", reg_girth, "girth target")->required();
  reg_cmd->add_option("--seed", seed, "random seed");
  reg_cmd->add_option("--swap-budget", swaps, "edge-swap budget");
  reg_cmd->add_option("--format", format, "output format (default graph6)");
  reg_cmd->add_option("--out", out_path, "output file");

  // invariants
  bool with_conn = false;
  std::string inv_graph_path;
  std::vector<long> moore_args;
  auto* inv_cmd = app.add_subcommand("invariants",
                                     "degrees, girth, degeneracy, connectivity, Moore bound");
  inv_cmd->add_option("graph", inv_graph_path, "graph file");
  inv_cmd->add_option("--format", format, "graph format");
  inv_cmd->add_flag("--connectivity", with_conn, "also compute vertex connectivity");
  inv_cmd->add_option("--moore", moore_args, "Moore bound for <delta> <m> instead of a graph")
      ->expected(2);

  // mader-params
  int ms = 5, mell = 205, mm = 4814;
  std::string meta = "1/20", md = "4^43";
  auto* params_cmd = app.add_subcommand("mader-params", "derive and check the branching constants");
  params_cmd->add_option("--s", ms, "clique order")->required();
  params_cmd->add_option("--eta", meta, "density margin, rational like 1/20");
  params_cmd->add_option("--D", md, "max degree, integer or base^exp");
  params_cmd->add_option("--ell", mell, "radius parameter")->required();
  params_cmd->add_option("--m", mm, "Moore parameter")->required();

  // pipeline
  std::string descriptor_path, trace_path;
  bool timings = false, relax_girth = false;
  std::optional<std::uint64_t> pipe_seed, pipe_budget;
  std::optional<int> pipe_retries;
  std::optional<std::string> pipe_profile;
  auto* pipe_cmd = app.add_subcommand("pipeline", "run a pipeline op from a JSON descriptor");
  pipe_cmd->add_option("descriptor", descriptor_path, "run descriptor JSON")->required();
  pipe_cmd->add_option("--trace", trace_path, "trace output file");
  pipe_cmd->add_option("--cert", cert_path, "certificate output file");
  pipe_cmd->add_flag("--timings", timings, "include wall-clock timings in the trace");
  pipe_cmd->add_option("--seed", pipe_seed, "override the descriptor seed");
  pipe_cmd->add_option("--retries", pipe_retries, "override the descriptor retry budget");
  pipe_cmd->add_option("--budget", pipe_budget, "override the descriptor search budget");
  pipe_cmd->add_option("--profile", pipe_profile, "override the descriptor profile");
  pipe_cmd->add_flag("--relax-girth", relax_girth, "downgrade girth preconditions to warnings");

  // oracle-diff
  int diff_count = 200, diff_max_n = 9;
  auto* diff_cmd = app.add_subcommand("oracle-diff", "finder vs. independent cycle oracle on a random corpus");
  diff_cmd->add_option("--count", diff_count, "number of instances");
  diff_cmd->add_option("--max-n", diff_max_n, "maximum host order");
  diff_cmd->add_option("--seed", seed, "corpus seed");
  diff_cmd->add_option("--budget", budget, "finder budget per instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) return run_verify(cert_path, graph_path, format, require_proper);
    if (*find_cmd) return run_find(graph_path, format, find_s, require_proper, budget, out_path);
    if (*plane_cmd) return run_construct_plane(q, out_path);
    if (*inc_cmd) return run_construct_incidence(q, format, out_path);
    if (*reg_cmd) return run_construct_regular(reg_d, reg_n, reg_girth, seed, swaps, format, out_path);
    if (*inv_cmd) return run_invariants(inv_graph_path, format, with_conn, moore_args);
    if (*params_cmd) return run_params(ms, meta, md, mell, mm);
    if (*pipe_cmd) {
      PipelineOverrides over{pipe_seed, pipe_retries, pipe_budget, pipe_profile, relax_girth};
      return run_pipeline(descriptor_path, trace_path, cert_path, timings, over);
    }
    if (*diff_cmd) return run_oracle_diff(diff_count, diff_max_n, seed, budget);
  } catch (const isd::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const isd::MalformedCertificate& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tcs/diamond.hpp"
#include "tcs/embeddings.hpp"
#include "tcs/errors.hpp"
#include "tcs/json_io.hpp"
#include "tcs/parallel.hpp"
#include "tcs/projections.hpp"
#include "tcs/spaces.hpp"
#include "tcs/transport.hpp"
#include "tcs/verification.hpp"

using namespace tcs;

namespace {

enum class Format { json, csv };

struct Common {
  std::string family = "laakso";
  int n = 1;
  int k = 2;
  bool json = false;
  bool csv = false;
  std::size_t max_edges = kDefaultMaxEdges;
  std::size_t threads = 0;

  Format format(Format fallback = Format::json) const {
    if (csv) return Format::csv;
    if (json) return Format::json;
    return fallback;
  }
};

void add_common(CLI::App* cmd, Common& c, bool graph_flags) {
  if (graph_flags) {
    cmd->add_option("--family", c.family, "laakso or diamond")->check(CLI::IsMember({"laakso", "diamond"}));
    cmd->add_option("--n", c.n, "level")->check(CLI::Range(1, 12));
    cmd->add_option("--k", c.k, "diamond branching")->check(CLI::Range(2, 64));
  }
  auto* j = cmd->add_flag("--json", c.json, "JSON output");
  cmd->add_flag("--csv", c.csv, "CSV output")->excludes(j);
  cmd->add_option("--max-edges", c.max_edges, "capacity cap on edges")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "worker threads (0: default)");
}

RecursiveGraph make_graph(const Common& c) {
  return c.family == "laakso" ? build_laakso(c.n, c.max_edges) : build_diamond(c.n, c.k, c.max_edges);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void put_rational(json& j, const std::string& key, const Rational& r) {
  j[key] = to_string(r);
  j[key + "_decimal"] = to_double(r);
}

// ---- subcommands

int cmd_gen(const Common& c) {
  auto g = make_graph(c);
  if (c.format() == Format::csv) {
    std::cout << "edge,tail,head,address\n";
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      std::cout << e << "," << g.edge(e).tail << "," << g.edge(e).head << "," << g.edge_address(e).to_string()
                << "\n";
  } else {
    emit(graph_to_json(g));
  }
  return 0;
}

int cmd_basis(const Common& c) {
  if (c.family != "laakso") throw DomainError("basis is only available for the laakso family");
  OrthogonalBasis b(c.n, c.max_edges);
  if (c.format() == Format::csv) {
    std::cout << "index,label,class,level,support,norm2,nnz\n";
    for (std::size_t i = 0; i < b.size(); ++i)
      std::cout << i << "," << b[i].label() << "," << to_string(b[i].cls) << "," << b[i].level << ","
                << b[i].support.to_string() << "," << to_string(b.norm2(i)) << "," << b[i].vector.nnz() << "\n";
  } else {
    emit(basis_to_json(b));
  }
  return 0;
}

int cmd_proj_norm(const Common& c, const std::string& which) {
  if (c.family != "laakso") throw DomainError("proj-norm is only available for the laakso family");
  auto basis = std::make_shared<const OrthogonalBasis>(c.n, c.max_edges);
  EdgeOperator op = which == "Pn" ? build_Pn(basis).op : orthogonal_projection(basis);
  auto norm = operator_l1_norm(op);
  const Rational upper(c.n + 1, 2), lower(3 * (c.n + 1), 8);
  if (c.format() == Format::csv) {
    std::cout << "n,which,norm,norm_decimal,upper,lower,witness_edge\n"
              << c.n << "," << which << "," << to_string(norm.norm) << "," << to_double(norm.norm) << ","
              << to_string(upper) << "," << to_string(lower) << "," << norm.witness_edge << "\n";
    return 0;
  }
  json j;
  j["n"] = c.n;
  j["which"] = which;
  put_rational(j, "norm", norm.norm);
  j["upper"] = to_string(upper);
  j["lower"] = to_string(lower);
  j["witness_edge"] = norm.witness_edge;
  emit(j);
  return 0;
}

int cmd_tc_norm(const Common& c, const std::string& space_file, const std::string& problem_file) {
  auto space = space_from_json(read_json_file(space_file));
  auto p = problem_from_json(read_json_file(problem_file), space);
  auto sol = tc_norm(space, p);
  if (c.format() == Format::csv) {
    std::cout << "source,sink,amount\n";
    for (const auto& s : sol.plan.steps)
      std::cout << space.names()[s.source] << "," << space.names()[s.sink] << "," << to_string(s.amount) << "\n";
    std::cout << "norm," << to_string(sol.norm) << "," << to_double(sol.norm) << "\n";
    return 0;
  }
  json j;
  put_rational(j, "norm", sol.norm);
  j["plan"] = plan_to_json(sol.plan, space);
  emit(j);
  return 0;
}

int cmd_quotient(const Common& c, const std::string& vector_file, long edge, const std::string& named) {
  auto g = make_graph(c);
  EdgeVector x(g.edge_count());
  if (!vector_file.empty()) {
    x = vector_from_json(read_json_file(vector_file), g.edge_count());
  } else if (!named.empty()) {
    if (g.kind() != GraphKind::laakso) throw DomainError("--named needs the laakso family");
    const NamedRole role = named == "f" ? NamedRole::f : named == "g" ? NamedRole::g : NamedRole::h;
    x = named_vector(role, c.n, c.max_edges).vector;
  } else {
    if (edge < 0 || static_cast<std::size_t>(edge) >= g.edge_count()) throw DomainError("--edge out of range");
    x = EdgeVector::unit(g.edge_count(), static_cast<std::size_t>(edge));
  }
  auto q = quotient_norm(g, x);
  auto t = tc_norm(g, boundary(g, x));
  if (q.norm != t.norm)
    throw VerificationError("quotient norm " + to_string(q.norm) + " differs from transport cost " +
                            to_string(t.norm));
  if (c.format() == Format::csv) {
    std::cout << "quotient,tc,l1\n"
              << to_string(q.norm) << "," << to_string(t.norm) << "," << to_string(x.l1()) << "\n";
    return 0;
  }
  json j;
  put_rational(j, "quotient", q.norm);
  put_rational(j, "tc", t.norm);
  j["l1"] = to_string(x.l1());
  j["match"] = true;
  emit(j);
  return 0;
}

int cmd_lambda(const Common& c) {
  auto r = lambda_diamond(c.n, c.k, c.max_edges);
  if (c.format() == Format::csv) {
    std::cout << "n,k,computed,formula,match\n"
              << r.n << "," << r.k << "," << to_string(r.computed) << "," << to_string(r.formula) << ","
              << (r.match() ? "true" : "false") << "\n";
    return 0;
  }
  json j;
  j["n"] = r.n;
  j["k"] = r.k;
  put_rational(j, "computed", r.computed);
  j["formula"] = to_string(r.formula);
  j["match"] = r.match();
  emit(j);
  return 0;
}

int cmd_tree_check(const Common& c, const std::string& space_file) {
  auto space = space_from_json(read_json_file(space_file));
  auto r = is_weighted_tree_metric(space);
  const auto& names = space.names();
  if (c.format() == Format::csv) {
    std::cout << "u,v\n";
    for (const auto& [u, v] : r.edges) std::cout << names[u] << "," << names[v] << "\n";
    std::cout << "is_tree," << (r.is_tree ? "true" : "false") << "\n";
    return 0;
  }
  json j;
  j["is_tree"] = r.is_tree;
  j["extreme_pairs"] = r.edges.size();
  json e = json::array();
  for (const auto& [u, v] : r.edges) e.push_back({names[u], names[v]});
  j["essential_edges"] = std::move(e);
  if (r.violation) j["violation"] = {names[r.violation->first], names[r.violation->second]};
  if (!r.reason.empty()) j["reason"] = r.reason;
  emit(j);
  return 0;
}

int cmd_embed_check(const Common& c, const std::string& which) {
  auto space = which == "T" ? metric_T() : metric_F();
  auto probs = which == "T" ? problems_T() : problems_F();
  auto r = verify_linfty(space, probs);
  if (c.format() == Format::csv) {
    std::cout << "theta,norm\n";
    for (const auto& sp : r.norms) {
      for (std::size_t i = 0; i < sp.theta.size(); ++i) std::cout << (sp.theta[i] > 0 ? '+' : '-');
      std::cout << "," << to_string(sp.norm) << "\n";
    }
    std::cout << "max_deviation," << to_string(r.max_deviation) << "\n";
  } else {
    json j;
    j["which"] = which;
    j["patterns"] = r.patterns;
    j["max_deviation"] = to_string(r.max_deviation);
    j["rank"] = r.rank;
    json norms = json::array();
    for (const auto& sp : r.norms) norms.push_back({{"theta", sp.theta}, {"norm", to_string(sp.norm)}});
    j["norms"] = std::move(norms);
    emit(j);
  }
  return r.isometric() ? 0 : 1;
}

int cmd_verify_all(const Common& c, int max_n, bool timings, const std::vector<int>& only) {
  VerifyOptions opts;
  opts.max_n = max_n;
  opts.max_edges = c.max_edges;
  opts.enforce_time = false;
  std::vector<CriterionResult> results;
  if (only.empty()) {
    results = run_all(opts);
  } else {
    for (int id : only) results.push_back(run_criterion(id, opts));
  }
  bool all = true;
  for (const auto& r : results) all = all && r.pass();
  const Format f = c.format(Format::csv);
  if (c.json) {
    json j;
    j["max_n"] = max_n;
    json list = json::array();
    for (const auto& r : results) {
      json e{{"id", r.id}, {"title", r.title}, {"pass", r.pass()}};
      if (!r.pass()) e["detail"] = r.detail();
      if (timings) e["seconds"] = r.seconds;
      json checks = json::array();
      for (const auto& ch : r.checks)
        checks.push_back({{"what", ch.what}, {"expected", ch.expected}, {"computed", ch.computed}, {"ok", ch.ok}});
      e["checks"] = std::move(checks);
      list.push_back(std::move(e));
    }
    j["criteria"] = std::move(list);
    j["pass"] = all;
    emit(j);
  } else if (f == Format::csv && c.csv) {
    std::cout << "criterion,check,expected,computed,ok\n";
    for (const auto& r : results)
      for (const auto& ch : r.checks)
        std::cout << r.id << ",\"" << ch.what << "\",\"" << ch.expected << "\",\"" << ch.computed << "\","
                  << (ch.ok ? "true" : "false") << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << (r.pass() ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << "  (" << r.checks.size()
                << " checks";
      if (timings) std::cout << ", " << r.seconds << " s";
      std::cout << ")\n";
      for (const auto& ch : r.checks)
        if (!ch.ok) std::cout << "      " << ch.what << "\n        expected " << ch.expected << "\n        computed "
                              << ch.computed << "\n";
      if (!r.error.empty()) std::cout << "      error: " << r.error << "\n";
    }
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle, cut and transportation-cost spaces of Laakso and diamond graphs"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("gen", "emit a graph");
  add_common(gen, c, true);

  auto* basis = app.add_subcommand("basis", "labeled orthogonal cycle and cut bases of L_n");
  add_common(basis, c, true);

  std::string which = "Pn";
  auto* proj = app.add_subcommand("proj-norm", "exact l1 operator norm of a projection onto Z_n");
  add_common(proj, c, true);
  proj->add_option("--which", which, "Pn or orth")->check(CLI::IsMember({"Pn", "orth"}));

  std::string space_file, problem_file;
  auto* tc = app.add_subcommand("tc-norm", "transportation cost norm of a problem on a finite metric space");
  add_common(tc, c, false);
  tc->add_option("--space", space_file, "{points, dist}")->required();
  tc->add_option("--problem", problem_file, "{values: {point: p/q}}")->required();

  std::string vector_file, named;
  long edge = 0;
  auto* quot = app.add_subcommand("quotient", "quotient norm of E/Z checked against transport cost");
  add_common(quot, c, true);
  auto* vf = quot->add_option("--vector", vector_file, "{edge: p/q} JSON file");
  auto* nm = quot->add_option("--named", named, "f, g or h")->check(CLI::IsMember({"f", "g", "h"}));
  auto* ed = quot->add_option("--edge", edge, "unit edge vector");
  vf->excludes(nm)->excludes(ed);
  nm->excludes(ed);

  auto* lam = app.add_subcommand("lambda", "projection constant of Lip_0(D_{n,k})");
  add_common(lam, c, true);

  auto* tree = app.add_subcommand("tree-check", "essential edges and the weighted-tree test");
  add_common(tree, c, false);
  tree->add_option("--space", space_file, "{points, dist}")->required();

  std::string embed = "T";
  auto* emb = app.add_subcommand("embed-check", "l_inf^k inside TC(T) or TC(F)");
  add_common(emb, c, false);
  emb->add_option("--which", embed, "T or F")->check(CLI::IsMember({"T", "F"}));

  int max_n = 4;
  bool timings = false;
  std::vector<int> only;
  auto* ver = app.add_subcommand("verify-all", "run the acceptance criteria");
  add_common(ver, c, false);
  ver->add_option("--max-n", max_n, "largest level used")->check(CLI::Range(1, 5));
  ver->add_option("--only", only, "criterion ids");
  ver->add_flag("--timings", timings, "include run times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c.threads > 0) set_thread_count(c.threads);
    if (*gen) return cmd_gen(c);
    if (*basis) return cmd_basis(c);
    if (*proj) return cmd_proj_norm(c, which);
    if (*tc) return cmd_tc_norm(c, space_file, problem_file);
    if (*quot) return cmd_quotient(c, vector_file, edge, named);
    if (*lam) {
      c.family = "diamond";
      return cmd_lambda(c);
    }
    if (*tree) return cmd_tree_check(c, space_file);
    if (*emb) return cmd_embed_check(c, embed);
    if (*ver) return cmd_verify_all(c, max_n, timings, only);
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const InvarianceError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

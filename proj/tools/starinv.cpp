// starinv: invariants, isomorphism tests and sentence evaluation for
// finite-dimensional C*-algebras and their presentations.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "starinv/cuntz.hpp"
#include "starinv/errors.hpp"
#include "starinv/formula.hpp"
#include "starinv/ktheory.hpp"
#include "starinv/presentations.hpp"
#include "starinv/report.hpp"
#include "starinv/states.hpp"

using namespace starinv;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kInvalid = 3, kStrictUnknown = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string emit = "human";
  std::uint64_t seed = 0;
  long budget = 10000;
  int depth = 8;
  long max_n = kDefaultMaxN;
  bool strict = false;
  double tol = 1e-6;
  bool timing = false;
  bool pointed = false;
  bool s0 = false;
  int restarts = 64;
  int steps = 200;
  std::string on;
  std::vector<std::string> assign;
};

struct Input {
  std::string path;
  std::string text;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return {path, ss.str()};
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_config(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join_vec(const RVector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s;
}

std::string join_rows(const std::vector<RVector>& rows) {
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? ";" : "") + join_vec(rows[i]);
  return s;
}

std::string matrix_text(const IntMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ";" : "";
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? "," : "") + std::to_string(m[i][j]);
  }
  return s;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

// Entries: `a`, `bi`, `a+bi`, `a-bi` with rational a, b (`i` alone is 1i).
QComplex parse_entry(std::string e) {
  if (e.empty()) throw ParseError(1, 1, "empty matrix entry");
  if (e.back() != 'i') return QComplex(parse_rational(e));
  e.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = e.size(); k-- > 1;)
    if ((e[k] == '+' || e[k] == '-') && e[k - 1] != '/') {
      split = k;
      break;
    }
  auto imag = [](std::string s) -> Rational {
    if (s.empty() || s == "+") return 1;
    if (s == "-") return -1;
    if (s[0] == '+') s.erase(0, 1);
    return parse_rational(s);
  };
  if (split == std::string::npos) return {Rational(0), imag(e)};
  return {parse_rational(e.substr(0, split)), imag(e.substr(split))};
}

// `x<k>=<block>|<block>...`, each block rows separated by `;` and entries by `,`.
std::pair<int, BlockElement> parse_assignment(const std::string& arg, const FDAlgebra& A) {
  const std::size_t eq = arg.find('=');
  if (eq == std::string::npos || arg.size() < 2 || arg[0] != 'x')
    throw UsageError("--assign expects x<k>=<matrix blocks>, got '" + arg + "'");
  int var = 0;
  try {
    std::size_t used = 0;
    var = std::stoi(arg.substr(1, eq - 1), &used);
    if (used != eq - 1 || var < 0) throw std::invalid_argument("index");
  } catch (const std::exception&) {
    throw UsageError("bad variable in --assign '" + arg + "'");
  }
  BlockElement e;
  std::string body = arg.substr(eq + 1);
  body.erase(std::remove(body.begin(), body.end(), ' '), body.end());
  std::stringstream blocks(body);
  std::string block;
  try {
    while (std::getline(blocks, block, '|')) {
      std::vector<std::vector<QComplex>> rows;
      std::stringstream rs(block);
      std::string row;
      while (std::getline(rs, row, ';')) {
        rows.emplace_back();
        std::stringstream es(row);
        std::string entry;
        while (std::getline(es, entry, ',')) rows.back().push_back(parse_entry(entry));
      }
      const std::size_t n = rows.size();
      QMatrix m(n, n);
      for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) throw ValidationError("x" + std::to_string(var) + ": block is not square");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c];
      }
      e.blocks.push_back(std::move(m));
    }
  } catch (const std::invalid_argument& ex) {
    throw ParseError(1, static_cast<int>(eq) + 2, std::string("bad matrix entry in --assign: ") + ex.what());
  }
  e.check_shape(A);
  return {var, std::move(e)};
}

RunReport base_report(const std::string& command, const std::vector<Input>& inputs) {
  RunReport r;
  r.command = command;
  for (const auto& in : inputs) r.inputs.push_back({in.path, content_hash(in.text)});
  return r;
}

bool unknown_verdict(const std::string& v) { return v == "UNKNOWN"; }

RunReport cmd_invariants(const Options& o, const std::string& path) {
  Input in = read_input(path);
  FDAlgebra A = parse_fd_algebra(in.text);
  RunReport r = base_report("invariants", {in});
  r.config = {{"max_n", std::to_string(o.max_n)}, {"seed", std::to_string(o.seed)}, {"tol", fmt_config(o.tol)}};
  ElliottInvariant E = elliott_invariant(A);
  CuPresentation cu = cu_of_fd_algebra(A);
  RadiusResult rc = radius_of_comparison(cu, o.max_n);
  EvalConfig cfg;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  RankResult sr = stable_rank_leq(A, 1, cfg);
  RankResult rr = real_rank_leq(A, 0, cfg);
  r.result = {
      {"algebra", trim(emit_fd_algebra(A))},
      {"k0", emit_group(E.k0)},
      {"k1", E.k1.is_trivial() ? "0" : "nontrivial"},
      {"traces", join_rows(E.traces.vertices)},
      {"pairing", join_rows(E.pairing)},
      {"elliott", emit_elliott(E)},
      {"cu", trim(emit_cup(cu))},
      {"rc", to_string(rc)},
      {"stable_rank_le_1", to_string(sr.verdict)},
      {"real_rank_le_0", to_string(rr.verdict)},
  };
  r.verdict = "OK";
  return r;
}

RunReport cmd_iso(const Options& o, const std::string& kind, const std::string& pa, const std::string& pb) {
  Input a = read_input(pa), b = read_input(pb);
  RunReport r = base_report("iso " + kind, {a, b});
  if (kind == "ell") {
    auto E1 = elliott_invariant(parse_fd_algebra(a.text));
    auto E2 = elliott_invariant(parse_fd_algebra(b.text));
    auto res = elliott_isomorphic(E1, E2);
    r.verdict = to_string(res.verdict);
    if (res.verdict == IsoVerdict::Iso) {
      r.result.emplace_back("k0_witness", matrix_text(res.k0_witness));
      std::string tm;
      for (std::size_t j = 0; j < res.trace_map.size(); ++j)
        tm += (j ? "," : "") + std::to_string(j) + "->" + std::to_string(res.trace_map[j]);
      r.result.emplace_back("trace_map", tm);
    } else {
      r.result.emplace_back("reason", res.reason);
    }
  } else if (kind == "group") {
    OrderedGroupWithUnit G = parse_group(a.text), H = parse_group(b.text);
    validate(G);
    validate(H);
    GroupIsoOptions opts;
    opts.budget = o.budget;
    r.config = {{"budget", std::to_string(o.budget)}};
    auto res = ordered_group_isomorphic(G, H, opts);
    r.verdict = to_string(res.verdict);
    if (res.verdict == IsoVerdict::Iso)
      r.result.emplace_back("witness", matrix_text(res.witness));
    else
      r.result.emplace_back("reason", res.reason);
  } else if (kind == "cu") {
    CuPresentation D1 = parse_cup(a.text), D2 = parse_cup(b.text);
    CuEquivalenceOptions opts;
    opts.budget = o.budget;
    opts.pointed = o.pointed;
    r.config = {{"budget", std::to_string(o.budget)}, {"pointed", o.pointed ? "yes" : "no"}};
    auto res = cu_equivalent(D1, D2, opts);
    r.verdict = to_string(res.verdict);
    if (res.verdict == CuVerdict::Equivalent)
      r.result.emplace_back("witness", res.witness);
    else
      r.result.emplace_back("invariant", res.invariant);
  } else {
    throw UsageError("unknown iso kind '" + kind + "' (expected ell, cu or group)");
  }
  return r;
}

RunReport cmd_radius(const Options& o, const std::string& path) {
  Input in = read_input(path);
  CuPresentation D = parse_cup(in.text);
  RunReport r = base_report("radius", {in});
  r.config = {{"depth", std::to_string(o.depth)}, {"max_n", std::to_string(o.max_n)}};
  RadiusResult rd = radius_of_comparison(D, o.max_n);
  r.result.emplace_back("rc", to_string(rd));
  if (rd.witness_n > 0)
    r.result.emplace_back("witness", "m=" + std::to_string(rd.witness_m) + " n=" + std::to_string(rd.witness_n));
  if (o.depth > 0) {
    WCompletion W = w_completion(D, o.depth);
    r.result.emplace_back("completion_classes", std::to_string(W.size()));
    r.result.emplace_back("rc_completion", to_string(radius_of_comparison(W, o.max_n)));
  }
  r.verdict = rd.exact ? "EXACT" : "BOUNDED";
  return r;
}

RunReport cmd_eval(const Options& o, const std::string& path) {
  if (o.on.empty()) throw UsageError("eval needs --on <algebra.fda>");
  Input f = read_input(path);
  Input alg = read_input(o.on);
  FormulaParseOptions popts;
  popts.polynomial_only = o.s0;
  auto formulas = parse_formula_file(f.text, popts);
  FDAlgebra A = parse_fd_algebra(alg.text);
  ExactAssignment env;
  for (const auto& arg : o.assign) {
    auto [var, e] = parse_assignment(arg, A);
    env[var] = std::move(e);
  }
  EvalConfig cfg;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.restarts = o.restarts;
  cfg.steps = o.steps;
  RunReport r = base_report("eval", {f, alg});
  r.config = {{"restarts", std::to_string(o.restarts)},
              {"seed", std::to_string(o.seed)},
              {"steps", std::to_string(o.steps)},
              {"tol", fmt_config(o.tol)}};
  for (const auto& nf : formulas) {
    EvalResult res = evaluate(nf.formula, A, env, cfg);
    r.result.emplace_back(nf.id + ".value", fmt_double(res.value));
    r.result.emplace_back(nf.id + ".certificate", to_string(res.certificate));
  }
  r.verdict = "OK";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"starinv: invariants of finite-dimensional C*-algebras"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--emit", o.emit, "output format")->check(CLI::IsMember({"human", "machine"}));
    sub->add_flag("--timing", o.timing, "include wall time in the report");
    sub->add_flag("--strict", o.strict, "exit 4 when the verdict is UNKNOWN");
  };

  std::string inv_path;
  auto* inv = app.add_subcommand("invariants", "K-theory, traces, Cuntz data and ranks of an algebra");
  inv->add_option("algebra", inv_path, ".fda file")->required();
  inv->add_option("--max-n", o.max_n, "largest n in the radius search");
  inv->add_option("--seed", o.seed, "seed for the rank samples");
  inv->add_option("--tol", o.tol, "norm tolerance");
  common(inv);

  std::string iso_kind, iso_a, iso_b;
  auto* iso = app.add_subcommand("iso", "compare two objects");
  iso->add_option("kind", iso_kind, "ell | cu | group")->required()->check(CLI::IsMember({"ell", "cu", "group"}));
  iso->add_option("a", iso_a)->required();
  iso->add_option("b", iso_b)->required();
  iso->add_option("--budget", o.budget, "search budget");
  iso->add_flag("--pointed", o.pointed, "cu: require the codes to match units");
  common(iso);

  std::string rad_path;
  auto* rad = app.add_subcommand("radius", "radius of comparison of a .cup presentation");
  rad->add_option("presentation", rad_path, ".cup file")->required();
  rad->add_option("--max-n", o.max_n, "largest n in the search");
  rad->add_option("--depth", o.depth, "also compute on the completion of this depth (0 to skip)");
  common(rad);

  std::string eval_path;
  auto* ev = app.add_subcommand("eval", "evaluate the formulas of a .clf file");
  ev->add_option("formulas", eval_path, ".clf file")->required();
  ev->add_option("--on", o.on, ".fda algebra")->required();
  ev->add_option("--assign", o.assign, "x<k>=<blocks>, blocks separated by |, rows by ;, entries by ,");
  ev->add_option("--seed", o.seed);
  ev->add_option("--restarts", o.restarts);
  ev->add_option("--steps", o.steps);
  ev->add_option("--tol", o.tol);
  ev->add_flag("--s0", o.s0, "accept only rational-polynomial connectives");
  common(ev);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (o.max_n < 1) throw UsageError("--max-n must be positive");
    if (o.budget < 1) throw UsageError("--budget must be positive");
    if (!(o.tol > 0)) throw UsageError("--tol must be positive");
    RunReport r;
    if (*inv)
      r = cmd_invariants(o, inv_path);
    else if (*iso)
      r = cmd_iso(o, iso_kind, iso_a, iso_b);
    else if (*rad)
      r = cmd_radius(o, rad_path);
    else
      r = cmd_eval(o, eval_path);
    if (o.timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const std::string out = o.emit == "machine" ? emit_machine(r) : emit_human(r);
    std::cout << out << std::flush;
    return (o.strict && unknown_verdict(r.verdict)) ? kStrictUnknown : kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kInvalid;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

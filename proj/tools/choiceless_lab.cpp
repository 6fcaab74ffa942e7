// choiceless_lab: command-line front end. Every command prints one JSON
// report (stdout or --out). Exit status: 0 ok, 2 usage, 3 malformed input,
// 4 guard limit, 5 internal error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "choiceless/bgs/interpreter.hpp"
#include "choiceless/bgs/parser.hpp"
#include "choiceless/bgs/stdlib.hpp"
#include "choiceless/cfi.hpp"
#include "choiceless/errors.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/linalg/intmatrix.hpp"
#include "choiceless/linalg/matfile.hpp"
#include "choiceless/linalg/matrix.hpp"
#include "choiceless/matching.hpp"
#include "choiceless/multipede.hpp"
#include "choiceless/structure.hpp"

namespace {

using nlohmann::json;
using namespace choiceless;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 2, kParse = 3, kGuard = 4, kInternal = 5 };

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

InputStructure load_structure(const std::string& path) {
  InputStructure s = parse_structure(read_file(path));
  s.validate();
  return s;
}

struct Options {
  bool force = false;
  std::string out;
};

void warn_force(const Options& o, const std::string& what) {
  if (o.force) std::cerr << "warning: --force lifts the limit on " << what << "\n";
}

// Generated artifacts go to --file when given, else into the report.
void emit_artifact(json& report, const std::string& file, const std::string& text) {
  if (file.empty()) {
    report["content"] = text;
  } else {
    write_file(file, text);
    report["file"] = file;
  }
}

std::string hf_text(HfValue v, const InputStructure& s) {
  return to_string(v, [&](std::uint32_t id) { return s.atom_name(id); });
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---- commands ------------------------------------------------------------

struct BgsRunArgs {
  std::string program, input;
  bool cpt_only = false;
};

json bgs_run(const BgsRunArgs& a) {
  bgs::Program prog = bgs::parse_program(read_file(a.program), {!a.cpt_only});
  InputStructure in = load_structure(a.input);
  auto bounds = bgs::RunBounds::from_program(prog, !a.cpt_only);
  auto outcome = bgs::run(prog, in, bounds, bgs::standard_externals());
  json r;
  r["verdict"] = bgs::to_string(outcome.verdict);
  r["steps"] = outcome.steps;
  r["peak_active"] = outcome.peak_active;
  r["step_bound"] = bounds.steps(in.size()).str();
  r["active_bound"] = bounds.active(in.size()).str();
  r["atoms"] = in.size();
  r["card"] = !a.cpt_only;
  if (outcome.verdict != bgs::Verdict::BoundExceeded)
    r["output"] = hf_text(outcome.output, in);
  return r;
}

struct GenCfiArgs {
  std::size_t m = 2;
  std::string twist = "even";
  bool pad = false;
  std::string file;
};

json gen_cfi(const GenCfiArgs& a, const Options& o) {
  if (a.m < 2) throw UsageError("--m must be at least 2");
  cfi::BaseGraph g = cfi::complete_graph(a.m + 1);
  std::set<std::size_t> twist;
  if (a.twist == "odd") {
    twist = {0};
  } else if (a.twist != "even") {
    std::stringstream ss(a.twist);
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        std::size_t used = 0;
        unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        twist.insert(v);
      } catch (const std::exception&) {
        throw UsageError("--twist takes even, odd or a comma list of vertices");
      }
    }
  }
  cfi::GadgetGraph gg = cfi::build_twisted(g, twist);
  cfi::CfiStructure s;
  std::size_t padding = 0;
  if (a.pad) {
    if (a.m > cfi::kPadMaxM) warn_force(o, "padding size");
    s = cfi::pad(gg, a.m, o.force);
    padding = cfi::padding_count(a.m);
  } else {
    s = cfi::to_cfi_structure(gg);
  }
  json r;
  r["m"] = a.m;
  r["twist"] = std::vector<std::size_t>(twist.begin(), twist.end());
  r["class"] = twist.size() % 2;
  r["vertices"] = s.n;
  r["padding"] = padding;
  emit_artifact(r, a.file,
                write_structure(cfi::to_structure(s, cfi::padded_names(gg, padding))));
  return r;
}

struct GenMultipedeArgs {
  std::size_t segments = 0, hyperedges = 0;
  std::uint64_t seed = 0;
  bool shoe = false, sets = false;
  std::string file;
};

json gen_multipede(const GenMultipedeArgs& a) {
  auto m = multipede::random_multipede(a.segments, a.hyperedges, a.seed);
  std::optional<std::size_t> shoe;
  if (a.shoe) shoe = multipede::make_shod(m, m.base.feet_of(m.order.at(0))[0]).shoe;
  bool sets = a.sets && a.segments <= multipede::kSetsMaxSegments;
  json r;
  r["segments"] = a.segments;
  r["hyperedges"] = a.hyperedges;
  r["seed"] = a.seed;
  r["odd"] = multipede::is_odd(m.base);
  r["shoe"] = a.shoe;
  r["sets_materialized"] = sets;
  emit_artifact(r, a.file,
                write_structure(multipede::to_structure(m.base, &m.order, shoe, sets)));
  return r;
}

struct GenBipartiteArgs {
  std::size_t a = 0, b = 0;
  double density = 0.5;
  std::uint64_t seed = 0;
  std::string file;
};

json gen_bipartite(const GenBipartiteArgs& a) {
  if (a.density < 0 || a.density > 1) throw UsageError("--density must lie in [0, 1]");
  BipartiteGraph g = random_bipartite(a.a, a.b, a.density, a.seed);
  json r;
  r["a"] = a.a;
  r["b"] = a.b;
  r["density"] = a.density;
  r["seed"] = a.seed;
  r["edges"] = g.edges().size();
  emit_artifact(r, a.file, write_structure(to_structure(g)));
  return r;
}

struct GenMatrixArgs {
  std::uint32_t q = 2;
  bool integer = false;
  std::int64_t bound = 256;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string file;
};

json gen_matrix(const GenMatrixArgs& a) {
  json r;
  r["n"] = a.n;
  r["seed"] = a.seed;
  if (a.integer) {
    if (a.bound < 0) throw UsageError("--bound must be non-negative");
    std::mt19937_64 rng(a.seed);
    std::vector<std::vector<linalg::BigInt>> v(a.n, std::vector<linalg::BigInt>(a.n));
    auto span = static_cast<std::uint64_t>(2 * a.bound + 1);
    for (auto& row : v)
      for (auto& x : row) x = static_cast<std::int64_t>(rng() % span) - a.bound;
    r["ring"] = "Z";
    r["bound"] = a.bound;
    emit_artifact(r, a.file, linalg::write_mat(linalg::IntMatrix::from_rows(v)));
  } else {
    linalg::FiniteField f = linalg::finite_field(a.q);
    r["q"] = a.q;
    emit_artifact(r, a.file, linalg::write_mat(a.q, linalg::random_matrix(f, a.n, a.seed)));
  }
  return r;
}

json solve_matching(const std::string& input, bool max_size) {
  BipartiteGraph g = bipartite_from_structure(load_structure(input));
  json r;
  r["verdict"] = yes_no(decide_complete_matching(g));
  r["a"] = g.size_a();
  r["b"] = g.size_b();
  StableColoring c = stable_coloring(g);
  r["a_blocks"] = c.a_blocks.size();
  r["b_blocks"] = c.b_blocks.size();
  if (max_size) r["max_matching_size"] = max_matching_size(g);
  return r;
}

json solve_det(const std::string& path, std::string method, bool prime_divisors) {
  linalg::MatFile mf = linalg::parse_mat(read_file(path));
  json r;
  if (mf.is_integer()) {
    if (method.empty()) method = "crt";
    if (method != "crt") throw UsageError("integer matrices support --method crt only");
    const auto& m = mf.int_matrix;
    r["ring"] = "Z";
    r["n"] = m.size();
    r["crt_dimension"] = linalg::crt_dimension(m);
    r["primes_checked"] = linalg::crt_primes(m).size();
    bool ns = linalg::nonsingular_int(m);
    r["verdict"] = yes_no(ns);
    if (prime_divisors) {
      if (ns)
        r["prime_divisors"] = linalg::det_prime_divisors(m);
      else
        r["prime_divisors"] = "all listed primes (determinant is zero)";
    }
  } else {
    if (prime_divisors) throw UsageError("--prime-divisors needs an integer matrix");
    if (method.empty()) method = "power";
    linalg::FiniteField f = linalg::finite_field(*mf.field_order);
    const auto& m = mf.field_matrix;
    if (m.num_rows() != m.num_cols())
      throw UsageError("the matrix must have as many rows as columns");
    bool ns;
    if (method == "power") {
      ns = m.is_square() ? linalg::nonsingular_square(f, m) : linalg::nonsingular_rect(f, m);
    } else if (method == "gauss") {
      ns = linalg::rank_gaussian(f, m) == m.num_rows();
    } else {
      throw UsageError("field matrices support --method power or gauss");
    }
    r["q"] = *mf.field_order;
    r["n"] = m.num_rows();
    r["square"] = m.is_square();
    r["verdict"] = yes_no(ns);
  }
  r["method"] = method;
  return r;
}

json solve_cfi(const std::string& input) {
  InputStructure in = load_structure(input);
  cfi::CfiStructure s = cfi::cfi_from_structure(in);
  auto v = cfi::recognize_and_classify(s);
  json r;
  r["verdict"] = cfi::to_string(v);
  if (v == cfi::CfiVerdict::NotCfi) {
    r["class"] = nullptr;
  } else {
    r["class"] = v == cfi::CfiVerdict::Odd ? 1 : 0;
    r["m"] = cfi::cfi_shape(s)->m;
  }
  return r;
}

multipede::Shod3 load_shod3(const std::string& path) {
  auto d = multipede::multipede_from_structure(load_structure(path));
  if (!d.order) throw ParseError(path + ": a 3-multipede needs the Le relation");
  if (!d.shoe) throw ParseError(path + ": missing Shoe");
  try {
    return multipede::make_shod(multipede::Multipede3{d.base, *d.order}, *d.shoe);
  } catch (const GuardError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

json iso_multipede(const std::string& a, const std::string& b, bool four,
                   const Options& o) {
  auto sa = load_shod3(a), sb = load_shod3(b);
  json r;
  r["segments"] = {sa.m.base.segments, sb.m.base.segments};
  if (four) {
    if (std::max(sa.m.base.segments, sb.m.base.segments) >
        multipede::kExhaustiveMaxSegments)
      warn_force(o, "exhaustive matching search");
    multipede::Shod4 a4{multipede::with_sets(sa.m), sa.shoe};
    multipede::Shod4 b4{multipede::with_sets(sb.m), sb.shoe};
    r["verdict"] = yes_no(multipede::iso4_decide(a4, b4, o.force));
    r["method"] = "exhaustive";
  } else {
    r["verdict"] = yes_no(multipede::iso3_decide(sa, sb));
    r["method"] = "linear-system";
  }
  return r;
}

json iso_cfi(const std::string& a, const std::string& b, const Options& o) {
  auto sa = cfi::cfi_from_structure(load_structure(a));
  auto sb = cfi::cfi_from_structure(load_structure(b));
  auto ia = cfi::cfi_shape(sa), ib = cfi::cfi_shape(sb);
  if (!ia || !ib) throw ParseError("input is not a CFI structure");
  json r;
  r["m"] = {ia->m, ib->m};
  if (ia->m != ib->m || ia->padded != ib->padded) {
    r["verdict"] = "no";
    r["method"] = "shape";
    return r;
  }
  int ca, cb;
  if (ia->padded) {
    if (ia->m > cfi::kDistinguishMaxM) warn_force(o, "choice enumeration");
    ca = cfi::distinguish_padded(sa, o.force);
    cb = cfi::distinguish_padded(sb, o.force);
    r["method"] = "padded-distinguisher";
  } else {
    ca = cfi::recognize_and_classify(sa) == cfi::CfiVerdict::Odd;
    cb = cfi::recognize_and_classify(sb) == cfi::CfiVerdict::Odd;
    r["method"] = "ordered-classifier";
  }
  r["class"] = {ca, cb};
  r["verdict"] = yes_no(ca == cb);
  return r;
}

json experiment_det(std::uint32_t q, std::size_t n, std::size_t trials,
                    std::uint64_t seed, unsigned threads) {
  linalg::FiniteField f = linalg::finite_field(q);
  double frac = linalg::frequency_experiment(f, n, trials, seed, threads);
  double limit = 1.0;
  for (int j = 1; j <= 64; ++j) limit *= 1.0 - std::pow(static_cast<double>(q), -j);
  json r;
  r["q"] = q;
  r["n"] = n;
  r["trials"] = trials;
  r["seed"] = seed;
  r["fraction"] = frac;
  r["limit"] = limit;
  return r;
}

json validate_multipede(const std::string& input, const Options& o) {
  auto d = multipede::multipede_from_structure(load_structure(input));
  auto violations = multipede::validate(d.base);
  json r;
  r["segments"] = d.base.segments;
  r["feet"] = d.base.feet();
  r["hyperedges"] = d.base.hyperedges.size();
  r["violations"] = json::array();
  for (const auto& v : violations)
    r["violations"].push_back({{"axiom", v.axiom}, {"witness", v.witness}});
  r["verdict"] = violations.empty() ? "valid" : "invalid";
  r["has_order"] = d.order.has_value();
  r["has_shoe"] = d.shoe.has_value();
  r["has_sets"] = d.has_sets;
  if (violations.empty()) {
    r["odd"] = multipede::is_odd(d.base);
    if (d.shoe && d.order) {
      try {
        multipede::make_shod(multipede::Multipede3{d.base, *d.order}, *d.shoe);
        r["shoe_ok"] = true;
      } catch (const Error&) {
        r["shoe_ok"] = false;
        r["verdict"] = "invalid";
      }
    }
    if (d.order && (d.base.segments <= multipede::kExhaustiveMaxSegments || o.force))
      r["automorphisms"] =
          multipede::automorphism_count(multipede::Multipede3{d.base, *d.order}, o.force);
  }
  return r;
}

json validate_structure(const std::string& input) {
  InputStructure s = load_structure(input);
  json r;
  r["verdict"] = "valid";
  r["atoms"] = s.size();
  json rels = json::object();
  for (const auto& [name, rel] : s.relations())
    rels[name] = {{"arity", rel.arity}, {"tuples", rel.tuples.size()}};
  r["relations"] = rels;
  json funs = json::object();
  for (const auto& [name, fn] : s.functions()) funs[name] = {{"arity", fn.arity}};
  r["functions"] = funs;
  json consts = json::array();
  for (const auto& [name, v] : s.constants()) consts.push_back(name);
  r["constants"] = consts;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Choiceless computation lab: BGS programs, matching, CFI graphs, "
               "multipedes and determinants"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opt;
  app.add_flag("--force", opt.force, "Lift named size limits on exhaustive searches");
  app.add_option("--out", opt.out, "Write the JSON report to this file");

  std::function<json()> action;
  std::string command;
  auto bind = [&](CLI::App* sub, std::string name, std::function<json()> fn) {
    sub->callback([&, name, fn] {
      command = name;
      action = fn;
    });
  };

  // bgs run
  auto* bgs_cmd = app.add_subcommand("bgs", "BGS programs")->require_subcommand(1);
  BgsRunArgs bgs_args;
  auto* bgs_run_cmd = bgs_cmd->add_subcommand("run", "Run a program on a structure");
  bgs_run_cmd->add_option("--program", bgs_args.program)->required()->check(CLI::ExistingFile);
  bgs_run_cmd->add_option("--input", bgs_args.input)->required()->check(CLI::ExistingFile);
  bgs_run_cmd->add_flag("--cpt-only", bgs_args.cpt_only, "Disable the Card builtin");
  bind(bgs_run_cmd, "bgs run", [&] { return bgs_run(bgs_args); });

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances")->require_subcommand(1);
  GenCfiArgs cfi_args;
  auto* gen_cfi_cmd = gen->add_subcommand("cfi", "CFI graph over K_{m+1}");
  gen_cfi_cmd->add_option("--m", cfi_args.m)->required();
  gen_cfi_cmd->add_option("--twist", cfi_args.twist, "even, odd, or comma list of base vertices");
  gen_cfi_cmd->add_flag("--pad", cfi_args.pad, "Add 2^(m^2) isolated vertices");
  gen_cfi_cmd->add_option("--file", cfi_args.file, "Write the .str here");
  bind(gen_cfi_cmd, "gen cfi", [&] { return gen_cfi(cfi_args, opt); });

  GenMultipedeArgs mp_args;
  auto* gen_mp = gen->add_subcommand("multipede", "Random multipede");
  gen_mp->add_option("--segments", mp_args.segments)->required();
  gen_mp->add_option("--hyperedges", mp_args.hyperedges)->required();
  gen_mp->add_option("--seed", mp_args.seed)->required();
  gen_mp->add_flag("--shoe", mp_args.shoe, "Put a shoe on the first segment");
  gen_mp->add_flag("--sets", mp_args.sets, "Materialize the sets sort (<= 16 segments)");
  gen_mp->add_option("--file", mp_args.file, "Write the .str here");
  bind(gen_mp, "gen multipede", [&] { return gen_multipede(mp_args); });

  GenBipartiteArgs bip_args;
  auto* gen_bip = gen->add_subcommand("bipartite", "Random bipartite graph");
  gen_bip->add_option("--a", bip_args.a)->required();
  gen_bip->add_option("--b", bip_args.b)->required();
  gen_bip->add_option("--density", bip_args.density);
  gen_bip->add_option("--seed", bip_args.seed)->required();
  gen_bip->add_option("--file", bip_args.file, "Write the .str here");
  bind(gen_bip, "gen bipartite", [&] { return gen_bipartite(bip_args); });

  GenMatrixArgs mat_args;
  auto* gen_mat = gen->add_subcommand("matrix", "Random square matrix");
  gen_mat->add_option("--q", mat_args.q, "Field order");
  gen_mat->add_flag("--integer", mat_args.integer, "Integer matrix instead");
  gen_mat->add_option("--bound", mat_args.bound, "Integer entries lie in [-bound, bound]");
  gen_mat->add_option("--n", mat_args.n)->required();
  gen_mat->add_option("--seed", mat_args.seed)->required();
  gen_mat->add_option("--file", mat_args.file, "Write the .mat here");
  bind(gen_mat, "gen matrix", [&] { return gen_matrix(mat_args); });

  // solve
  auto* solve = app.add_subcommand("solve", "Decide a property")->require_subcommand(1);
  std::string solve_input;
  bool max_size = false;
  auto* solve_match = solve->add_subcommand("matching", "Complete matching of A into B");
  solve_match->add_option("--input", solve_input)->required()->check(CLI::ExistingFile);
  solve_match->add_flag("--max-size", max_size, "Also report the maximum matching size");
  bind(solve_match, "solve matching", [&] { return solve_matching(solve_input, max_size); });

  std::string matrix_path, method;
  bool prime_divisors = false;
  auto* solve_det_cmd = solve->add_subcommand("det", "Non-singularity of a matrix");
  solve_det_cmd->add_option("--matrix", matrix_path)->required()->check(CLI::ExistingFile);
  solve_det_cmd->add_option("--method", method)
      ->check(CLI::IsMember({"power", "gauss", "crt"}));
  solve_det_cmd->add_flag("--prime-divisors", prime_divisors);
  bind(solve_det_cmd, "solve det",
       [&] { return solve_det(matrix_path, method, prime_divisors); });

  auto* solve_cfi_cmd = solve->add_subcommand("cfi-classify", "Parity class of a CFI graph");
  solve_cfi_cmd->add_option("--input", solve_input)->required()->check(CLI::ExistingFile);
  bind(solve_cfi_cmd, "solve cfi-classify", [&] { return solve_cfi(solve_input); });

  // iso
  auto* iso = app.add_subcommand("iso", "Isomorphism tests")->require_subcommand(1);
  std::string iso_a, iso_b;
  for (const char* kind : {"multipede3", "multipede4", "cfi"}) {
    auto* sub = iso->add_subcommand(kind);
    sub->add_option("--a", iso_a)->required()->check(CLI::ExistingFile);
    sub->add_option("--b", iso_b)->required()->check(CLI::ExistingFile);
    std::string k = kind;
    bind(sub, "iso " + k, [&, k]() -> json {
      if (k == "cfi") return iso_cfi(iso_a, iso_b, opt);
      return iso_multipede(iso_a, iso_b, k == "multipede4", opt);
    });
  }

  // experiment
  auto* exp = app.add_subcommand("experiment", "Randomized experiments")->require_subcommand(1);
  std::uint32_t eq = 2;
  std::size_t en = 0, etrials = 0;
  std::uint64_t eseed = 0;
  unsigned ethreads = 0;
  auto* exp_det = exp->add_subcommand("det-frequency", "Fraction of non-singular random matrices");
  exp_det->add_option("--q", eq)->required();
  exp_det->add_option("--n", en)->required();
  exp_det->add_option("--trials", etrials)->required();
  exp_det->add_option("--seed", eseed)->required();
  exp_det->add_option("--threads", ethreads, "Worker cap (default: CHOICELESS_LAB_THREADS)");
  bind(exp_det, "experiment det-frequency",
       [&] { return experiment_det(eq, en, etrials, eseed, ethreads); });

  // validate
  auto* val = app.add_subcommand("validate", "Check input files")->require_subcommand(1);
  std::string val_input;
  auto* val_mp = val->add_subcommand("multipede", "Multipede axioms");
  val_mp->add_option("--input", val_input)->required()->check(CLI::ExistingFile);
  bind(val_mp, "validate multipede", [&] { return validate_multipede(val_input, opt); });
  auto* val_st = val->add_subcommand("structure", "Structure file syntax");
  val_st->add_option("--input", val_input)->required()->check(CLI::ExistingFile);
  bind(val_st, "validate structure", [&] { return validate_structure(val_input); });

  json report;
  report["tool"] = "choiceless_lab";
  report["version"] = kVersion;
  report["invocation"] = std::vector<std::string>(argv + 1, argv + argc);

  auto emit = [&](const json& r) {
    std::string text = r.dump(2) + "\n";
    if (opt.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(opt.out, std::ios::binary);
      out << text;
    }
  };
  auto fail = [&](int status, const char* kind, const std::string& msg,
                  const std::string& limit = "") {
    json err = {{"kind", kind}, {"message", msg}};
    if (!limit.empty()) err["limit"] = limit;
    report["error"] = err;
    report["exit_status"] = status;
    if (!command.empty()) report["command"] = command;
    emit(report);
    return status;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  auto start = std::chrono::steady_clock::now();
  try {
    json result = action();
    report["command"] = command;
    for (auto& [k, v] : result.items()) report[k] = v;
  } catch (const UsageError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const UnsupportedSymbolError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const GuardError& e) {
    return fail(kGuard, "guard", e.what(), e.limit());
  } catch (const Error& e) {
    return fail(kParse, "invalid-input", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
  auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start);
  report["elapsed_ms"] = std::round(elapsed.count() * 1000) / 1000;
  emit(report);
  return kOk;
}

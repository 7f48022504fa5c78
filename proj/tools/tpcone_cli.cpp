#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tpcone/tpcone.hpp"

using namespace tpcone;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kVerifyFailed = 1, kResource = 2, kBadInput = 3;

struct Config {
  int n = 3;
  std::uint64_t seed = Rng::kDefaultSeed;
  unsigned threads = 1;
  std::string mode = "sampled";
  std::size_t k = 10'000;
  double budget_seconds = 0;
  std::size_t term_cap = kDefaultTermCap;
  std::string out;
  std::string ratio_file;
  std::string ratio;
  std::size_t rounds = 0;
  bool progress = false;
  std::string f_file;
};

std::optional<std::chrono::steady_clock::time_point> deadline(const Config& c) {
  if (c.budget_seconds <= 0) return std::nullopt;
  return std::chrono::steady_clock::now() + std::chrono::milliseconds(static_cast<std::int64_t>(c.budget_seconds * 1000));
}

void require_n(const Config& c, int lo, int hi) {
  if (c.n < lo || c.n > hi)
    throw Error("n=" + std::to_string(c.n) + " not supported here (allowed " + std::to_string(lo) + ".." +
                std::to_string(hi) + ")");
}

std::ofstream open_out(const Config& c, const std::string& name) {
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name);
  if (!f) throw Error("cannot write " + (fs::path(c.out) / name).string());
  return f;
}

std::vector<RatioVector> load_ratios(const Config& c) {
  if (!c.ratio.empty()) return {parse_ratio(c.ratio, c.n)};
  if (c.ratio_file.empty()) {
    if (c.n == 4) return bundled_rays();
    throw Error("no ratio given (use --ratio or --ratio-file)");
  }
  std::ifstream f(c.ratio_file);
  if (!f) throw Error("cannot read " + c.ratio_file);
  auto v = parse_ratio_list(f, c.n);
  if (v.empty()) throw Error(c.ratio_file + " contains no ratio");
  return v;
}

std::string bracket_list(const std::vector<PluckerIndex>& cols) {
  std::string s;
  for (const auto& c : cols) s += (s.empty() ? "" : " ") + c.digits();
  return "[" + s + "]";
}

int cmd_primitives(const Config& c) {
  require_n(c, 3, 6);
  auto ps = enumerate_primitives(c.n);
  std::string text = format_primitives(ps);
  std::cout << text << "count=" << ps.size() << '\n';
  if (!c.out.empty()) {
    open_out(c, "primitives.txt") << text;
    auto file = open_out(c, "primitives.cone");
    write_cone(file, primitive_cone(ps));
  }
  return kOk;
}

int cmd_relations(const Config& c) {
  require_n(c, 3, 6);
  auto ps = enumerate_primitives(c.n);
  auto chains = relations(ps);
  int bad = 0;
  for (const auto& ch : chains) {
    const auto& id = ch.ids;
    std::cout << ps[id[0]].spec.str() << " - " << ps[id[1]].spec.str() << " = " << ps[id[2]].spec.str() << " - "
              << ps[id[3]].spec.str() << " = " << ps[id[4]].spec.str() << " - " << ps[id[5]].spec.str() << '\n';
    bad += !chain_holds(ch, ps);
  }
  std::cout << "chains=" << chains.size() << " isolated=" << isolated_primitives(ps).size() << '\n';
  return bad ? kVerifyFailed : kOk;
}

int cmd_rank(const Config& c) {
  require_n(c, 3, 6);
  RankResult r = rank_G(c.n);
  std::cout << "rank=" << r.rank << " free=" << bracket_list(display_order(r.free_columns, c.n)) << '\n';
  return r.rank == static_cast<std::size_t>(binomial(2 * c.n, c.n) - 2 * c.n) ? kOk : kVerifyFailed;
}

int cmd_basis(const Config& c) {
  require_n(c, 3, 6);
  auto b = basis_B(c.n);
  std::cout << format_primitives(b);
  const std::size_t r = rank(primitive_matrix(b), space_of(c.n).size());
  std::cout << "size=" << b.size() << " rank=" << r << " formula=" << basis_count_formula(c.n) << '\n';
  return r == b.size() && static_cast<std::int64_t>(r) == basis_count_formula(c.n) ? kOk : kVerifyFailed;
}

int cmd_facets(const Config& c) {
  require_n(c, 3, 4);
  auto ps = enumerate_primitives(c.n);
  auto fa = analyze_facets(primitive_matrix(ps), space_of(c.n).size());
  std::vector<std::string> name(ps.size());
  if (c.n == 3) {
    auto numbering = chain_numbering(ps, relations(ps));
    for (std::size_t v = 0; v < numbering.size(); ++v) name[numbering[v]] = "v" + std::to_string(v + 1);
  } else {
    for (std::size_t k = 0; k < ps.size(); ++k) name[k] = ps[k].spec.str();
  }
  std::cout << "dimension=" << fa.dimension << " facets=" << fa.facets.size() << '\n';
  for (std::size_t f = 0; f < fa.facets.size(); ++f) {
    const auto& fi = fa.facets[f];
    std::cout << "facet " << f + 1 << ": " << to_string(fi.normal) << '\n' << "  outer {";
    for (std::size_t k = 0; k < fi.outer.size(); ++k) std::cout << (k ? ", " : "") << name[fi.outer[k]];
    std::cout << "}\n";
  }
  if (!c.out.empty()) {
    auto file = open_out(c, "hull.cone");
    write_cone(file, fa.system);
  }
  return kOk;
}

int cmd_build_f(const Config& c) {
  require_n(c, 2, 4);
  BuildFOptions opt;
  opt.threads = c.threads;
  opt.deadline = deadline(c);
  if (c.progress)
    opt.progress = [](std::size_t done, std::size_t total, std::size_t cones) {
      std::cerr << "refined " << done << '/' << total << " coordinates, " << cones << " cones" << std::endl;
    };
  BuildFResult f = build_F(c.n, opt);
  std::cout << "fan_cones=" << f.fan_cones << " fan_rays=" << f.fan_rays << " raw_rows=" << f.raw.ineqs.size()
            << " rows=" << f.system.ineqs.size() << " equalities=" << f.system.eqs.size() << '\n';
  if (!c.out.empty()) {
    {
      auto file = open_out(c, "F" + std::to_string(c.n) + ".cone");
      write_cone(file, f.system);
    }
    {
      auto file = open_out(c, "F" + std::to_string(c.n) + ".lambda");
      write_lambda_sidecar(file, f);
    }
  }
  return kOk;
}

std::optional<ConeH> load_f(const Config& c) {
  if (c.f_file.empty()) return std::nullopt;
  std::ifstream f(c.f_file);
  if (!f) throw Error("cannot read " + c.f_file);
  ConeH h = read_cone_h(f);
  if (h.dim != space_of(c.n).size()) throw Error(c.f_file + " has the wrong dimension for n=" + std::to_string(c.n));
  return h;
}

BoundedVerdict check_bounded(const Config& c, const TropicalProfile& prof, const RatioVector& v) {
  if (c.mode == "sampled") {
    Rng rng(c.seed);
    return bounded_sampled(prof, v, {c.k, 20}, rng);
  }
  if (c.mode != "exact") throw Error("--mode must be exact or sampled");
  if (auto F = load_f(c)) {
    auto r = bounded_exact(*F, v);
    if (!r.bounded && r.st0) {
      Rng rng(c.seed);
      auto s = bounded_sampled(prof, v, {c.k, 20}, rng);
      r.witness = s.witness;
      r.witness_exponent = s.witness_exponent;
    }
    return r;
  }
  if (c.n <= 3) {
    BuildFOptions o;
    o.deadline = deadline(c);
    auto r = bounded_exact(build_F(prof, o).system, v);
    if (!r.bounded && r.st0) r.witness = bounded_exact_fan(prof, v).witness;
    if (r.witness) r.witness_exponent = tropical_exponent(prof, v, *r.witness);
    return r;
  }
  FanOptions o;
  o.threads = c.threads;
  o.deadline = deadline(c);
  return bounded_exact_fan(prof, v, o);
}

int cmd_check(const Config& c) {
  require_n(c, 2, 5);
  auto ratios = load_ratios(c);
  auto prof = TropicalProfile::build(c.n, c.threads);
  int rc = kOk;
  for (const auto& v : ratios) {
    auto st0 = st0_check(v);
    auto b = check_bounded(c, prof, v);
    std::string verdict = !b.st0 ? "unbounded (ST0 fails)"
                          : b.bounded ? (b.mode == BoundMode::sampled ? "no-counterexample" : "bounded")
                                      : "unbounded";
    std::cout << "ratio: " << format_ratio(v) << '\n';
    std::cout << "st0: " << (st0.ok ? "pass" : "fail") << '\n';
    if (!st0.ok) {
      std::cout << "  defect:";
      for (auto x : st0.defect) std::cout << ' ' << x;
      std::cout << '\n';
    }
    std::cout << "degree: " << degree_balance(v) << '\n';
    std::cout << "bounded: " << verdict << " (" << to_string(b.mode) << ")\n";
    std::cout << "directions_checked: " << b.directions_checked << '\n';
    if (b.witness) std::cout << "witness: " << to_string(*b.witness) << " exponent=" << b.witness_exponent->str() << '\n';
    if (!b.bounded) rc = kVerifyFailed;
  }
  return rc;
}

int cmd_verify_rays(const Config& c) {
  require_n(c, 3, 4);
  auto ratios = load_ratios(c);
  RayContext ctx = RayContext::build(c.n, c.threads);
  if (c.mode == "exact") {
    if (auto F = load_f(c))
      ctx.F = std::move(F);
    else if (c.n == 3)
      ctx.F = build_F(ctx.profile).system;
    else
      throw Error("--mode exact for verify-rays at n=4 needs --f-file (e.g. data/F4.cone)");
  }
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.samples = c.k;
  opt.term_cap = c.term_cap;
  auto arr = nlohmann::ordered_json::array();
  int rc = kOk;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    RayReport r = verify_ray(ratios[k], ctx, opt);
    nlohmann::ordered_json j{{"item", k + 1}};
    j.update(to_json(r));
    arr.push_back(j);
    bool ok = r.st0.ok && r.degree_ok() && r.bounded.bounded && r.subtraction_free && r.subtraction_free->passed;
    std::cout << "ray " << k + 1 << ": st0=" << (r.st0.ok ? "pass" : "fail") << " degree=" << r.degree
              << " bounded=" << j["bounded"]["verdict"].get<std::string>() << " primitive_hull="
              << (r.primitive_member.feasible ? "inside" : "outside")
              << " subtraction_free=" << j["subtraction_free"]["verdict"].get<std::string>();
    if (r.subtraction_free) std::cout << " (" << j["subtraction_free"]["mode"].get<std::string>() << ")";
    std::cout << '\n';
    if (!ok) rc = kVerifyFailed;
  }
  if (!c.out.empty()) open_out(c, "rays.json") << arr.dump(2) << '\n';
  return rc;
}

int cmd_search(const Config& c) {
  require_n(c, 3, 4);
  BuildFOptions o;
  o.threads = c.threads;
  o.deadline = deadline(c);
  BuildFResult f = build_F(c.n, o);
  ConeV K = primitive_cone(enumerate_primitives(c.n));
  SearchOptions so;
  so.seed = c.seed;
  Search2Result s = search_method_2(f.system, K, c.rounds, so);
  for (const auto& r : s.rays) std::cout << format_ratio(RatioVector::from_int(c.n, r)) << '\n';
  std::cout << "new_rays=" << s.rays.size() << " rounds=" << s.rounds_run << " converged=" << (s.converged ? 1 : 0)
            << '\n';
  return kOk;
}

int cmd_wsgraph(const Config& c) {
  require_n(c, 2, 6);
  auto ratios = load_ratios(c);
  std::vector<WSGraph> gs;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    WSGraph g = ws_graph(ratios[k]);
    std::cout << "graph " << k + 1 << ": vertices=" << g.vertices.size() << " edges=" << g.edge_count() << '\n';
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      std::cout << "  " << (g.numerator[i] ? '+' : '-') << g.vertices[i].str() << ':';
      for (std::size_t j = 0; j < g.vertices.size(); ++j)
        if (g.adj[i][j]) std::cout << ' ' << g.vertices[j].digits();
      std::cout << '\n';
    }
    gs.push_back(std::move(g));
  }
  if (gs.size() > 1) {
    std::cout << "isomorphism classes:";
    std::vector<int> cls(gs.size(), -1);
    int next = 0;
    for (std::size_t a = 0; a < gs.size(); ++a) {
      if (cls[a] >= 0) continue;
      cls[a] = next++;
      for (std::size_t b = a + 1; b < gs.size(); ++b)
        if (cls[b] < 0 && ws_isomorphic(gs[a], gs[b])) cls[b] = cls[a];
    }
    for (int x : cls) std::cout << ' ' << x;
    std::cout << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded ratios of Pluecker coordinates on totally positive matrices"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--n", cfg.n, "matrix order");
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    s->add_option("--budget-seconds", cfg.budget_seconds, "time budget, 0 for none");
    s->add_option("--out", cfg.out, "directory for artifacts");
  };
  auto ratio_opts = [&](CLI::App* s) {
    s->add_option("--ratio-file", cfg.ratio_file, "file with one ratio per line");
    s->add_option("--ratio", cfg.ratio, "a ratio in bracket form");
  };

  std::map<std::string, std::function<int(const Config&)>> run{
      {"primitives", cmd_primitives}, {"relations", cmd_relations}, {"rank", cmd_rank},
      {"basis", cmd_basis},           {"facets", cmd_facets},       {"build-f", cmd_build_f},
      {"check", cmd_check},           {"verify-rays", cmd_verify_rays}, {"search", cmd_search},
      {"wsgraph", cmd_wsgraph}};
  std::map<std::string, std::string> help{
      {"primitives", "list primitive ratios"},
      {"relations", "list linear relations between primitive vectors"},
      {"rank", "rank and free columns of the primitive matrix"},
      {"basis", "the basis B_n"},
      {"facets", "facets and outer sets of the primitive hull"},
      {"build-f", "exact boundedness system from the tropical fan"},
      {"check", "boundedness check of ratios"},
      {"verify-rays", "full verification report for ratios (default: bundled rays)"},
      {"search", "search for extreme rays outside the primitive hull"},
      {"wsgraph", "weak separation graphs"}};
  for (const auto& [name, fn] : run) {
    auto* s = app.add_subcommand(name, help[name]);
    common(s);
    if (name == "check" || name == "verify-rays" || name == "wsgraph") ratio_opts(s);
    if (name == "check" || name == "verify-rays") {
      s->add_option("--mode", cfg.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
      s->add_option("--k", cfg.k, "number of sampled directions");
    }
    if (name == "verify-rays") s->add_option("--term-cap", cfg.term_cap, "term cap for symbolic expansion");
    if (name == "check" || name == "verify-rays")
      s->add_option("--f-file", cfg.f_file, "exact boundedness system (cone file) used by --mode exact");
    if (name == "build-f") s->add_flag("--progress", cfg.progress, "report refinement progress on stderr");
    if (name == "search") s->add_option("--rounds", cfg.rounds, "extra rounds of the iterated search");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return run.at(name)(cfg);
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

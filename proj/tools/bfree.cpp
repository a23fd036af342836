// Command-line front end for B-free lattice systems.
//
// Exit codes: 0 ok, 1 not found / mismatch / rejected, 2 bad input, 3 limit
// breach. Diagnostics go to stderr; stdout carries the summary or result.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bfree/error.hpp"
#include "bfree/serialize.hpp"

namespace fs = std::filesystem;
using namespace bfree;

namespace {

struct Config {
  std::string preset;
  std::string spec_path;
  std::string box;
  std::string shape;
  std::string search;
  std::string format = "csv";
  std::string out;
  std::string sides = "5,10,20";
  std::string check;
  std::string name = "all";
  unsigned threads = 1;
  long radius = 40;
  long max_side = 6;
  std::uint64_t limit_cells = kDefaultCellLimit;
  std::size_t coset_limit = kDefaultCosetLimit;
  std::size_t exact_limit = 20;
  long instance_bound = 200;
  bool crt = false;
  bool exact = false;
  bool bless = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

BigInt parse_int(const std::string& s) {
  try {
    return parse_bigint(s);
  } catch (const Error&) {
    fail(Errc::ParseError, "'" + s + "' is not an integer");
  }
}

// lo:hi,lo:hi,...
Box parse_box(const std::string& text) {
  std::vector<BigInt> lo, hi;
  for (const std::string& range : split(text, ',')) {
    const auto parts = split(range, ':');
    if (parts.size() != 2) fail(Errc::ParseError, "box range '" + range + "' is not lo:hi");
    lo.push_back(parse_int(parts[0]));
    hi.push_back(parse_int(parts[1]));
  }
  if (lo.empty()) fail(Errc::ParseError, "empty box");
  Point plo(static_cast<Eigen::Index>(lo.size())), phi(static_cast<Eigen::Index>(hi.size()));
  for (std::size_t i = 0; i < lo.size(); ++i) {
    plo(static_cast<Eigen::Index>(i)) = lo[i];
    phi(static_cast<Eigen::Index>(i)) = hi[i];
  }
  try {
    return Box(plo, phi);
  } catch (const Error& e) {
    fail(Errc::ParseError, e.what());
  }
}

// a:bxc:d for rectangles, @file for one offset per line.
Shape parse_shape(const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) fail(Errc::ParseError, "cannot open shape file " + text.substr(1));
    std::vector<Point> pts;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      for (char& c : line)
        if (c == ',') c = ' ';
      std::istringstream ls(line);
      std::vector<BigInt> coords;
      std::string tok;
      while (ls >> tok) coords.push_back(parse_int(tok));
      if (coords.empty()) continue;
      Point p(static_cast<Eigen::Index>(coords.size()));
      for (std::size_t i = 0; i < coords.size(); ++i) p(static_cast<Eigen::Index>(i)) = coords[i];
      if (!pts.empty() && p.size() != pts.front().size())
        fail(Errc::ParseError, "shape file line " + std::to_string(n) + ": wrong dimension");
      pts.push_back(std::move(p));
    }
    if (pts.empty()) fail(Errc::ParseError, "shape file has no offsets");
    return Shape(std::move(pts));
  }
  std::string boxed;
  for (const std::string& r : split(text, 'x')) boxed += (boxed.empty() ? "" : ",") + r;
  return Shape::rectangle(parse_box(boxed));
}

FamilySpec load_input(const Config& c) {
  if (c.preset.empty() == c.spec_path.empty()) fail(Errc::ParseError, "give exactly one of --preset or --spec");
  return c.preset.empty() ? load_family(c.spec_path) : preset(c.preset);
}

WindowOptions window_options(const Config& c) { return {c.threads, c.limit_cells}; }

Budget budget(const Config& c) {
  Budget b;
  b.max_side = c.max_side;
  b.search_radius = c.radius;
  b.coset_limit = c.coset_limit;
  b.exact_limit = c.exact_limit;
  b.instance_bound = c.instance_bound;
  b.density_sides.clear();
  for (const std::string& s : split(c.sides, ',')) b.density_sides.push_back(parse_int(s).get_si());
  b.density_radius = c.radius;
  b.window = window_options(c);
  return b;
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) fail(Errc::InvalidArgument, "cannot write " + c.out);
  f << text;
}

std::string window_text(const EtaWindow& w, const std::string& format) {
  if (format == "csv") return to_csv(w);
  if (format == "pgm") return to_pgm(w);
  if (format == "json") return to_json_text(w);
  fail(Errc::ParseError, "unknown format '" + format + "' (csv, pgm, json)");
}

int cmd_eta(const Config& c) {
  const FamilySpec spec = load_input(c);
  if (c.box.empty()) fail(Errc::ParseError, "--box is required");
  const EtaWindow w = eta_window(spec, parse_box(c.box), window_options(c));
  const std::string summary = "ones=" + std::to_string(w.ones()) + " cells=" + std::to_string(w.bits.size()) + "\n";
  if (c.out.empty() || c.out == "-") {
    std::cout << window_text(w, c.format);
    std::cerr << summary;
  } else {
    emit(c, window_text(w, c.format));
    std::cout << summary;
  }
  return 0;
}

// Pairwise coprime members to pair with the cells of a shape.
std::vector<Lattice> crt_members(const FamilySpec& spec, const Budget& b, std::size_t need) {
  const ProximalityVerdict v = decide(spec, b);
  if (const auto* cs = std::get_if<CoprimeSubscheme>(&v.certificate); cs && cs->witnesses.size() < need) {
    Budget more = b;
    more.witness_count = need;
    return std::get<CoprimeSubscheme>(decide(spec, more).certificate).witnesses;
  } else if (cs) {
    return cs->witnesses;
  }
  return extract_coprime_subset(instances_up_to(spec, b.instance_bound), b.exact_limit);
}

int cmd_zero(const Config& c) {
  const FamilySpec spec = load_input(c);
  if (c.shape.empty()) fail(Errc::ParseError, "--shape is required");
  const Shape shape = parse_shape(c.shape);
  if (shape.dim() != spec.dim) fail(Errc::ParseError, "shape dimension differs from the family");
  const Budget b = budget(c);
  Json out;

  if (c.crt) {
    std::vector<Lattice> members = crt_members(spec, b, shape.size());
    if (members.size() < shape.size())
      fail(Errc::NotEnoughIdeals, std::to_string(members.size()) + " pairwise coprime members for " +
                                      std::to_string(shape.size()) + " cells");
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(shape.size()), members.end());
    const Point g = construct_zero_translate_crt(members, shape);
    for (const Point& f : shape.offsets())
      if (!in_M(spec, g + f)) fail(Errc::InconsistencyDetected, "CRT translate fails the membership recheck");
    out = Json{{"translate", point_to_json(g)}, {"period_lattice", lattice_to_json(intersect_all(members))},
               {"route", "crt"}, {"verified_cells", shape.size()}};
    std::cout << out.dump() << "\n";
    return 0;
  }

  if (c.exact) {
    const ProximalityVerdict v = decide(spec, b);
    if (const auto* cov = std::get_if<Covering>(&v.certificate); cov && cov->verified) {
      if (!cover_translate(cov->covers, shape, b.coset_limit)) {
        std::cout << "exact: no zero translate exists\n";
        return 1;
      }
    } else {
      std::cerr << "no verified covering certificate; exact mode unavailable, searching the box\n";
    }
  }

  const Box search = c.search.empty() ? Box::centered(IntVector::Zero(spec.dim), c.radius) : parse_box(c.search);
  const std::optional<Point> g = find_zero_translate(spec, shape, search, window_options(c));
  if (!g) {
    std::cout << "not found in search box\n";
    return 1;
  }
  const Lattice period = syndetic_period(spec, *g, shape);
  const std::size_t checks = verify_period(spec, *g, shape, period, 100);
  out = Json{{"translate", point_to_json(*g)}, {"period_lattice", lattice_to_json(period)}, {"route", "search"},
             {"period_checks", checks}};
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_decide(const Config& c) {
  const FamilySpec spec = load_input(c);
  const Budget b = budget(c);
  if (!c.check.empty()) {
    std::ifstream in(c.check);
    if (!in) fail(Errc::ParseError, "cannot open " + c.check);
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
      j = Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::ParseError, e.what());
    }
    const bool ok = verify_verdict(spec, verdict_from_json(j), b.coset_limit);
    std::cout << (ok ? "verified\n" : "rejected\n");
    return ok ? 0 : 1;
  }
  emit(c, verdict_to_json(decide(spec, b)).dump(2) + "\n");
  return 0;
}

std::vector<DensitySeed> crt_seeds(const FamilySpec& spec, const Budget& b) {
  std::vector<DensitySeed> seeds;
  for (long n : b.density_sides) {
    const BigInt cells = pow(BigInt(2 * n + 1), static_cast<unsigned long>(spec.dim));
    if (cells > 10000) continue;
    Budget more = b;
    more.witness_count = cells.get_ui();
    const ProximalityVerdict v = decide_rectangular(spec, more);
    if (const auto* cs = std::get_if<CoprimeSubscheme>(&v.certificate))
      seeds.push_back(crt_seed(cs->witnesses, spec.dim, n));
  }
  return seeds;
}

int cmd_density(const Config& c) {
  const FamilySpec spec = load_input(c);
  const Budget b = budget(c);
  const std::vector<DensitySeed> seeds = c.crt && is_rectangular(spec) ? crt_seeds(spec, b) : std::vector<DensitySeed>{};
  const DensityProfile p = density_profile(spec, b.density_sides, Box::centered(IntVector::Zero(spec.dim), c.radius),
                                           window_options(c), seeds);
  emit(c, density_csv(p));
  return 0;
}

int cmd_report(const Config& c) {
  const FamilySpec spec = load_input(c);
  emit(c, report_to_json(spec, conditions_report(spec, budget(c))).dump(2) + "\n");
  return 0;
}

// Artifacts regenerated by `reproduce`; the figures are PGM windows.
std::vector<std::pair<std::string, std::string>> artifacts(const std::string& name, const Config& c) {
  const FamilySpec spec = preset(name);
  Config fixed = c;
  fixed.radius = 40;
  fixed.max_side = 6;
  fixed.sides = "5,10,20";
  const Budget b = budget(fixed);
  const EtaWindow w = eta_window(spec, Box::centered(IntVector::Zero(2), 25), window_options(c));
  const EtaWindow fig = eta_window(spec, Box::centered(IntVector::Zero(2), 10), window_options(c));
  return {
      {"eta.pgm", to_pgm(w)},
      {"eta.json", to_json_text(w)},
      {"figure.pgm", to_pgm(fig)},
      {"verdict.json", verdict_to_json(decide(spec, b)).dump(2) + "\n"},
      {"report.json", report_to_json(spec, conditions_report(spec, b)).dump(2) + "\n"},
  };
}

int cmd_reproduce(const Config& c) {
  std::vector<std::string> names;
  if (c.name == "all")
    names = {"ex2", "ex1"};
  else if (c.name == "ex2" || c.name == "ex1")
    names = {c.name};
  else
    fail(Errc::UnknownPreset, "reproduce knows ex2 and ex1, not '" + c.name + "'");
  const char* env = std::getenv("BFREE_GOLDEN_DIR");
  const fs::path root = env ? fs::path(env) : fs::path(BFREE_GOLDEN_DIR);
  int status = 0;
  for (const std::string& n : names) {
    const fs::path dir = root / n;
    const auto arts = artifacts(n, c);
    for (const auto& [file, text] : arts) {
      const fs::path path = dir / file;
      if (c.bless) {
        fs::create_directories(dir);
        std::ofstream(path, std::ios::binary) << text;
        std::cout << "blessed " << n << "/" << file << "\n";
        continue;
      }
      std::ifstream in(path, std::ios::binary);
      std::stringstream ss;
      if (in) ss << in.rdbuf();
      const bool same = in && ss.str() == text;
      std::cout << (same ? "match " : "mismatch ") << n << "/" << file << "\n";
      if (!same) status = 1;
    }
    if (!c.bless) {
      // Headline facts of the report.
      const Json rep = Json::parse(arts.back().second);
      std::cout << n << ": proximal=" << rep["proximal"].dump() << " (" << rep["proximal_grade"].get<std::string>() << ")";
      for (const auto& cond : rep["conditions"])
        std::cout << " " << cond["name"].get<std::string>() << "=" << cond["truth"].get<std::string>();
      std::cout << "\n";
    }
  }
  return status;
}

int exit_code(Errc e) {
  switch (e) {
    case Errc::ParseError:
    case Errc::UnknownPreset:
    case Errc::InvalidArgument:
    case Errc::DimensionMismatch:
      return 2;
    case Errc::TooLarge:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bfree: B-free lattice systems in Z^m"};
  app.require_subcommand(1);
  Config c;
  if (const char* env = std::getenv("BFREE_LIMIT_CELLS")) {
    try {
      c.limit_cells = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "BFREE_LIMIT_CELLS is not a number\n";
      return 2;
    }
  }

  auto input = [&](CLI::App* sub) {
    auto* pre = sub->add_option("--preset", c.preset, "Built-in family (" + CLI::detail::join(preset_names()) + ")");
    auto* spec = sub->add_option("--spec", c.spec_path, "Family file")->check(CLI::ExistingFile);
    pre->excludes(spec);
    sub->add_option("--threads", c.threads, "Worker threads for windows")->check(CLI::PositiveNumber);
    sub->add_option("--limit-cells", c.limit_cells, "Cell limit for windows")->check(CLI::PositiveNumber);
    sub->add_option("--coset-limit", c.coset_limit, "Coset enumeration limit")->check(CLI::PositiveNumber);
    sub->add_option("--exact-limit", c.exact_limit, "Exhaustive coprime subset search limit")->check(CLI::PositiveNumber);
    sub->add_option("--radius", c.radius, "Search radius for translates and shifts")->check(CLI::NonNegativeNumber);
    sub->add_option("--max-side", c.max_side, "Largest [0,k]^m shape for evidence")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", c.out, "Output file (default stdout)");
  };

  auto* eta = app.add_subcommand("eta", "Write eta on a box");
  input(eta);
  eta->add_option("--box", c.box, "lo:hi,lo:hi")->required();
  eta->add_option("--format", c.format, "csv, pgm or json")->check(CLI::IsMember({"csv", "pgm", "json"}));

  auto* zero = app.add_subcommand("zero", "Find a zero translate of a shape and its period");
  input(zero);
  zero->add_option("--shape", c.shape, "a:bxc:d or @file")->required();
  zero->add_option("--search", c.search, "Search box lo:hi,lo:hi (default [-radius,radius]^m)");
  zero->add_flag("--crt", c.crt, "Construct the translate from pairwise coprime members");
  zero->add_flag("--exact", c.exact, "Prove nonexistence over one period when a covering is known");
  zero->add_option("--instance-bound", c.instance_bound, "Index bound for listing members")->check(CLI::PositiveNumber);

  auto* decide_cmd = app.add_subcommand("decide", "Proximality verdict as JSON");
  input(decide_cmd);
  decide_cmd->add_option("--check", c.check, "Re-verify a verdict JSON file instead")->check(CLI::ExistingFile);

  auto* density = app.add_subcommand("density", "Best-shift density lower bounds as CSV");
  input(density);
  density->add_option("--sides", c.sides, "Comma-separated n values");
  density->add_flag("--crt", c.crt, "Add CRT seeds for rectangular families");

  auto* report = app.add_subcommand("report", "Conditions report as JSON");
  input(report);
  report->add_option("--sides", c.sides, "Density sides");

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate the worked examples and compare with goldens");
  reproduce->add_option("name", c.name, "ex2, ex1 or all");
  reproduce->add_flag("--bless", c.bless, "Overwrite the goldens");
  reproduce->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*eta) return cmd_eta(c);
    if (*zero) return cmd_zero(c);
    if (*decide_cmd) return cmd_decide(c);
    if (*density) return cmd_density(c);
    if (*report) return cmd_report(c);
    if (*reproduce) return cmd_reproduce(c);
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// harmzero: build, certify and inspect truncated constructions.
//
// Exit status: 0 when everything passed, 1 on a failed check or a runtime
// failure, 2 on usage or configuration errors.

#include "harmzero/coarse.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace harmzero;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kDefaultSeed = 20240601;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string brief(const Real& x) { return x.str(6, std::ios::scientific); }

struct RunConfig {
  std::vector<int> n;
  std::string epsilon;
  int depth = 0;
  unsigned precision = 256;
  std::string construction_path = "construction.json";
  std::string audit_path;
};

int parse_int(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("config: " + key + " expects an integer, got '" + text + "'");
  return v;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw UsageError("config: " + std::string(e.what()));
  }
  RunConfig cfg;
  bool have_n = false, have_eps = false, have_depth = false;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    const std::string section = item.parents.empty() ? "" : item.parents.front();
    const std::string key = section + "." + item.name;
    auto single = [&]() -> const std::string& {
      if (item.inputs.size() != 1) throw UsageError("config: " + key + " expects a single value");
      return item.inputs.front();
    };
    if (key == "construction.n") {
      cfg.n.clear();
      for (const auto& s : item.inputs) cfg.n.push_back(parse_int(key, s));
      have_n = true;
    } else if (key == "construction.epsilon") {
      cfg.epsilon = single();
      have_eps = true;
    } else if (key == "construction.depth") {
      cfg.depth = parse_int(key, single());
      have_depth = true;
    } else if (key == "construction.precision") {
      cfg.precision = static_cast<unsigned>(std::max(0, parse_int(key, single())));
    } else if (key == "output.construction") {
      cfg.construction_path = single();
    } else if (key == "output.audit") {
      cfg.audit_path = single();
    } else {
      throw UsageError("config: unknown key " + key);
    }
  }
  if (!have_n || !have_eps) throw UsageError("config: [construction] needs n and epsilon");
  if (!have_depth) cfg.depth = static_cast<int>(cfg.n.size());
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.n.empty()) throw UsageError("n must not be empty");
  for (int v : cfg.n) {
    if (v < 1) throw UsageError("n entries must be positive integers");
  }
  if (cfg.depth < 1 || static_cast<std::size_t>(cfg.depth) > cfg.n.size()) {
    throw UsageError("depth N = " + std::to_string(cfg.depth) + " must lie in [1, length(n) = " +
                     std::to_string(cfg.n.size()) + "]");
  }
  if (cfg.precision < 53) throw UsageError("precision must be >= 53 bits");
}

Construction load_construction(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open construction file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("construction file " + path + " does not parse: " + e.what());
  }
  return construction_from_json(j);
}

// Writes to `path`, or stdout when empty or "-".
template <class F>
void emit(const std::string& path, F&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  body(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string audit_text(const Construction& constr, const std::string& hash) {
  std::ostringstream os;
  os << "# construction " << hash << "\n";
  os << "precision " << constr.precision << " bits, epsilon " << constr.epsilon.str(20) << ", depth "
     << constr.depth << "\n";
  const auto rows = audit_construction(constr);
  for (const auto& l : constr.levels) {
    const auto& a = rows[static_cast<std::size_t>(l.k - 1)];
    const TailBound t = tail_bound(constr, l.k);
    os << "level " << l.k << "  c=" << l.c << "  A=" << brief(l.A) << "  a=" << brief(l.a)
       << "  m=" << brief(l.m) << "  load=" << brief(a.load) << "  tail=" << brief(t.value)
       << " (built " << brief(t.built_part) << ", unbuilt " << brief(t.unbuilt_part) << ")  "
       << (a.ok() ? "ok" : "FAILED") << "\n";
  }
  os << "unbuilt tail on B_" << (1L << (constr.depth + 1)) << ": " << brief(unbuilt_tail(constr)) << "\n";
  return os.str();
}

int cmd_build(const std::string& config_path, const std::string& out, std::optional<unsigned> precision,
              std::optional<int> depth) {
  RunConfig cfg = read_config(config_path);
  if (precision) cfg.precision = *precision;
  if (depth) cfg.depth = *depth;
  validate(cfg);
  set_working_precision(cfg.precision);
  Real eps;
  try {
    eps = from_decimal(cfg.epsilon);
  } catch (const std::invalid_argument&) {
    throw UsageError("epsilon must be a decimal string, got '" + cfg.epsilon + "'");
  }
  if (!(eps > 0)) throw UsageError("epsilon must be > 0");

  Construction constr;
  try {
    constr = build_construction(cfg.n, eps, cfg.depth, cfg.precision);
  } catch (const PrecisionError& e) {
    std::cerr << "build failed at level " << e.level() << ": " << e.what() << "\n"
              << "retry with --precision " << 2 * cfg.precision << "\n";
    return kExitFail;
  }
  const std::string path = out.empty() ? cfg.construction_path : out;
  const std::string hash = construction_hash(constr);
  emit(path, [&](std::ostream& os) { os << to_json(constr).dump(2) << "\n"; });
  const std::string audit = audit_text(constr, hash);
  std::string audit_path = cfg.audit_path;
  if (audit_path.empty() && path != "-") {
    audit_path = std::filesystem::path(path).replace_extension(".audit.txt").string();
  }
  if (!audit_path.empty()) emit(audit_path, [&](std::ostream& os) { os << audit; });
  std::cout << audit;
  const auto rows = audit_construction(constr);
  return std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.ok(); }) ? 0 : kExitFail;
}

int cmd_count(const std::string& file, const std::string& radius, const std::string& out) {
  const Construction constr = load_construction(file);
  Real r;
  try {
    r = from_decimal(radius);
  } catch (const std::invalid_argument&) {
    throw UsageError("radius must be a decimal number");
  }
  const CountReport report = count_zeros_ball(constr, r);
  nlohmann::json j = to_json(report);
  j["construction"] = construction_hash(constr);
  emit(out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  std::cerr << "certified " << report.total << " zeros in B_" << radius << " (target " << report.target
            << (report.target_asserted ? ", asserted" : "") << ")\n";
  const bool ok = report.failed_brackets == 0 && (!report.target_asserted || report.meets_target);
  return ok ? 0 : kExitFail;
}

BoundingBox parse_bbox(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("bbox must be x0,y0,x1,y1");
    }
  }
  if (v.size() != 4) throw UsageError("bbox must be x0,y0,x1,y1");
  if (!(v[2] > v[0]) || !(v[3] > v[1])) throw UsageError("bbox is empty");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_trace(const std::string& file, std::optional<int> level, std::optional<int> c,
              const std::string& bbox_text, int resolution, unsigned precision, const std::string& out) {
  std::optional<Construction> constr;
  std::string header;
  if (!file.empty()) {
    constr = load_construction(file);
    header = "# construction " + construction_hash(*constr);
    if (level && (*level < 1 || *level > constr->depth)) throw UsageError("level outside the construction");
  } else {
    if (!level || !c) throw UsageError("trace needs a construction file, or both --level and --c");
    if (precision < 53) throw UsageError("precision must be >= 53 bits");
    set_working_precision(precision);
    header = "# block k=" + std::to_string(*level) + " c=" + std::to_string(*c);
  }

  BoundingBox box;
  if (!bbox_text.empty()) {
    box = parse_bbox(bbox_text);
  } else {
    const int k = level ? *level : constr->depth;
    box = {0.0, -std::ldexp(1.0, k - 1), std::ldexp(1.0, k) + 1, 1.0};
  }

  std::vector<Polyline> lines;
  if (level) {
    const Block block = constr ? constr->level(*level).block : Block(*level, extract_b(*c));
    lines = trace_zero_set(block, box, resolution);
  } else {
    const Construction& cs = *constr;
    lines = trace_level_set(
        [&](const Real& x, const Real& y) { return eval_g(cs, x, y).value; }, box, resolution);
  }
  emit(out, [&](std::ostream& os) {
    os << header << "\n";
    os << "# bbox " << box.x0 << ',' << box.y0 << ',' << box.x1 << ',' << box.y1 << " resolution "
       << resolution << "\n";
    os << "polyline,x,y\n";
    os.precision(12);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (const auto& [x, y] : lines[i]) os << i << ',' << x << ',' << y << "\n";
    }
  });
  return 0;
}

std::vector<double> parse_deltas(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 3) return log_spaced(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]));
    if (parts.size() == 1) {
      std::vector<double> v;
      std::stringstream list(spec);
      while (std::getline(list, part, ',')) v.push_back(std::stod(part));
      std::sort(v.begin(), v.end());
      return v;
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw UsageError("deltas must be lo:hi:count or a comma-separated list");
}

int cmd_coarse(const std::string& file, const std::string& radius, const std::string& deltas_spec,
               int resolution, const std::string& out, const std::string& pgm, std::optional<double> pgm_delta) {
  const Construction constr = load_construction(file);
  const Real r = from_decimal(radius);
  const std::vector<double> deltas = parse_deltas(deltas_spec);
  const CountReport report = count_zeros_ball(constr, r);
  const CoarseSweep sweep = coarse_sweep(constr, r, deltas, resolution, report.certificates);
  const std::string hash = construction_hash(constr);
  emit(out, [&](std::ostream& os) { write_sweep_csv(os, sweep, hash); });
  if (!pgm.empty()) {
    const CoarseRaster raster = rasterize(constr, r, resolution);
    emit(pgm, [&](std::ostream& os) {
      write_mask_pgm(os, raster, pgm_delta ? *pgm_delta : deltas.front(), report.certificates);
    });
  }
  if (!sweep.monotone()) {
    std::cerr << "coarse counts are not monotone in delta\n";
    return kExitFail;
  }
  return 0;
}

int cmd_check(const std::string& file, std::uint64_t seed, const std::string& out) {
  Construction constr;
  try {
    constr = load_construction(file);
  } catch (const std::exception& e) {
    std::cout << "FAIL parse " << e.what() << "\n";
    return kExitFail;
  }
  const std::string hash = construction_hash(constr);
  std::ostringstream os;
  bool all = true;
  auto line = [&](bool ok, const std::string& name, const std::string& detail) {
    os << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
    all = all && ok;
  };
  os << "# construction " << hash << "\n";

  for (const AuditRow& a : audit_construction(constr)) {
    const std::string k = std::to_string(a.k);
    const Level& l = constr.level(a.k);
    line(a.cap_ok, "cap[" + k + "]", "a=" + brief(l.a) + " A=" + brief(l.A) + " recomputed=" + brief(a.cap_recomputed));
    line(a.load_ok, "amplitude[" + k + "]",
         a.k == 1 ? std::string("no prior levels") : "load=" + brief(a.load) + " prior_min_m=" + brief(a.prior_min));
    line(a.tail_ok, "tail[" + k + "]", "tail=" + brief(a.tail) + " m=" + brief(l.m));
    line(a.margin_ok, "margin[" + k + "]", "m=" + brief(l.m));
  }

  std::vector<Real> radii;
  const Real top = ldexp2(Real(1), constr.depth);
  for (int i = 0; i < 50; ++i) radii.push_back(top * Real(i) / Real(49));
  const MuReport mu = check_mu_bound(constr, radii, 0);
  Real worst(0);
  for (const auto& row : mu.rows) worst = std::max(worst, row.certified / row.budget);
  line(mu.certified_ok(), "modulus", "max certified/budget over 50 radii = " + brief(worst));

  std::vector<ZeroCertificate> certs;
  for (int k = 1; k <= constr.depth; ++k) {
    std::vector<ZeroCertificate> found;
    bool ok = true;
    try {
      found = count_zeros_on_line(constr, k);
    } catch (const PrecisionError&) {
      ok = false;
    }
    const int want = constr.n[static_cast<std::size_t>(k - 1)];
    ok = ok && static_cast<int>(found.size()) == want &&
         std::all_of(found.begin(), found.end(), [](const ZeroCertificate& z) { return z.regular(); });
    line(ok, "zeros[" + std::to_string(k) + "]",
         std::to_string(found.size()) + " certified on x=2^" + std::to_string(k - 1) + ", expected " + std::to_string(want));
    certs.insert(certs.end(), found.begin(), found.end());
  }

  const RestrictionReport rr = verify_restriction(constr, 100, seed, certs);
  line(rr.deviation_ok, "restriction", "max |f-h| = " + brief(rr.max_deviation) + " allowed " + brief(rr.max_allowed));
  line(rr.zeros_vanish && rr.zeros_regular, "extension-zeros",
       std::to_string(rr.zeros_checked) + " zeros, min det margin " + brief(rr.min_det_margin));

  std::cout << os.str();
  if (!out.empty()) emit(out, [&](std::ostream& o) { o << os.str(); });
  return all ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified zero counting for a truncated harmonic construction"};
  app.require_subcommand(1);

  std::string config, out, file, radius = "16", bbox, deltas = "1e-12:1e-1:12", pgm;
  std::optional<unsigned> precision;
  std::optional<int> depth, level, c;
  std::optional<double> pgm_delta;
  int resolution = 0;
  std::uint64_t seed = kDefaultSeed;

  auto* build = app.add_subcommand("build", "Build a construction from a config file");
  build->add_option("--config", config, "TOML config file")->required();
  build->add_option("--out", out, "Construction JSON path (overrides [output] construction)");
  build->add_option("--precision", precision, "Mantissa bits (overrides config)");
  build->add_option("--depth", depth, "Truncation depth N (overrides config)");

  auto* count = app.add_subcommand("count", "Certify zeros of h in a disk");
  count->add_option("construction", file, "Construction JSON")->required();
  count->add_option("--radius,-r", radius, "Disk radius (decimal)");
  count->add_option("--out", out, "Report path (default stdout)");

  auto* trace = app.add_subcommand("trace", "Zero-set polylines of u_k or g");
  trace->add_option("construction", file, "Construction JSON (optional)");
  trace->add_option("--level,-k", level, "Trace u_k instead of g");
  trace->add_option("--c", c, "Block parameter c when no construction is given");
  trace->add_option("--bbox", bbox, "x0,y0,x1,y1");
  trace->add_option("--resolution", resolution, "Grid cells per side")->check(CLI::PositiveNumber);
  trace->add_option("--precision", precision, "Mantissa bits when no construction is given");
  trace->add_option("--out", out, "CSV path (default stdout)");

  auto* coarse = app.add_subcommand("coarse", "Coarse zero counts over a delta sweep");
  coarse->add_option("construction", file, "Construction JSON")->required();
  coarse->add_option("--radius,-r", radius, "Disk radius (decimal)");
  coarse->add_option("--deltas", deltas, "lo:hi:count (log-spaced) or a comma-separated list");
  coarse->add_option("--resolution", resolution, "Grid half-width R; the grid is (2R+1)^2");
  coarse->add_option("--out", out, "CSV path (default stdout)");
  coarse->add_option("--pgm", pgm, "Also write a PGM mask");
  coarse->add_option("--pgm-delta", pgm_delta, "Threshold for the PGM mask (default smallest delta)");

  auto* check = app.add_subcommand("check", "Audit a stored construction");
  check->add_option("construction", file, "Construction JSON")->required();
  check->add_option("--seed", seed, "Seed for random sampling");
  check->add_option("--out", out, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*build) return cmd_build(config, out, precision, depth);
    if (*count) return cmd_count(file, radius, out);
    if (*trace) return cmd_trace(file, level, c, bbox, resolution ? resolution : 128, precision.value_or(256), out);
    if (*coarse) return cmd_coarse(file, radius, deltas, resolution ? resolution : 512, out, pgm, pgm_delta);
    if (*check) return cmd_check(file, seed, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}

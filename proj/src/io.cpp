#include "sqg/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "sqg/errors.hpp"

namespace sqg {

using Json = nlohmann::ordered_json;

namespace {

// ---- config ---------------------------------------------------------------

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const Json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "must be an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(join(prefix, item.key()), "unknown key");
  }
}

double read_double(const Json& obj, const std::string& prefix, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(prefix, key), "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(prefix, key), "must be finite");
  return x;
}

long long read_int(const Json& obj, const std::string& prefix, const char* key, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(prefix, key), "must be an integer");
  return v.get<long long>();
}

std::uint64_t read_seed(const Json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(key, "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string read_string(const Json& obj, const std::string& prefix, const char* key,
                        const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(prefix, key), "must be a string");
  return v.get<std::string>();
}

std::vector<double> read_double_list(const Json& obj, const std::string& prefix, const char* key,
                                     const std::vector<double>& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(join(prefix, key), "must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(join(prefix, key) + "[" + std::to_string(i) + "]", "must be a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<int> read_int_list(const Json& obj, const std::string& prefix, const char* key,
                               const std::vector<int>& fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(join(prefix, key), "must be a nonempty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      throw ConfigError(join(prefix, key) + "[" + std::to_string(i) + "]", "must be an integer");
    }
    out.push_back(v[i].get<int>());
  }
  return out;
}

Json spec_json(const ExperimentSpec& s) {
  Json pairs = Json::array();
  for (const auto& [b1, b2] : s.beta_pairs) pairs.push_back(Json::array({b1, b2}));
  return Json{{"gamma", s.gamma},
              {"n", s.n},
              {"dt", s.dt},
              {"dt_max", s.dt_max},
              {"t_end", s.t_end},
              {"seed", s.seed},
              {"initial",
               {{"kind", to_string(s.initial.kind)},
                {"s", s.initial.sigma},
                {"amplitude", s.initial.amplitude}}},
              {"beta_list", s.beta_list},
              {"beta_pairs", pairs},
              {"t0", s.t0},
              {"schedule",
               {{"kind", to_string(s.schedule.kind)},
                {"count", s.schedule.count},
                {"t_min", s.schedule.t_min}}},
              {"slope_tol", s.slope_tol},
              {"refinement_threshold", s.refinement_threshold},
              {"window_end", s.window_end},
              {"small_amplitude", s.small_amplitude},
              {"small_n", s.small_n}};
}

Json inequality_config_json(const InequalitySuiteConfig& c) {
  return Json{{"ensemble", c.ensemble},
              {"grid_sizes", c.grid_sizes},
              {"commutator_grid_sizes", c.commutator_grid_sizes},
              {"threshold", c.threshold},
              {"commutator_alpha", c.commutator_alpha},
              {"extra_commutator_tuples", c.extra_commutator_tuples}};
}

// JSON has no infinities; they are written as the strings "inf" and "-inf", NaN as null.
Json number(double x) {
  if (std::isfinite(x)) return Json(x);
  if (std::isinf(x)) return Json(x > 0 ? "inf" : "-inf");
  return Json(nullptr);
}

Json number_map(const std::map<std::string, double>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = number(v);
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string with_metadata(const std::string& body) {
  Json j = Json::parse(body);
  j["metadata"] = Json{{"generated_at", utc_timestamp()}};
  return j.dump(2) + "\n";
}

// ---- snapshot bytes --------------------------------------------------------

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  check_keys(root, "",
             {"gamma", "n", "dt", "dt_max", "t_end", "seed", "initial", "beta_list", "beta_pairs",
              "t0", "schedule", "output_dir", "slope_tol", "refinement_threshold", "window_end",
              "small_amplitude", "small_n", "inequalities"});
  RunConfig cfg;
  ExperimentSpec& s = cfg.spec;
  s.gamma = read_double(root, "", "gamma", s.gamma);
  s.n = static_cast<int>(read_int(root, "", "n", s.n));
  s.dt = read_double(root, "", "dt", s.dt);
  s.dt_max = read_double(root, "", "dt_max", root.contains("dt_max") ? s.dt_max : std::max(s.dt_max, s.dt));
  s.t_end = read_double(root, "", "t_end", s.t_end);
  s.seed = read_seed(root, "seed", s.seed);
  if (root.contains("initial")) {
    const Json& init = root.at("initial");
    check_keys(init, "initial", {"kind", "s", "amplitude"});
    const std::string kind = read_string(init, "initial", "kind", to_string(s.initial.kind));
    if (kind == "rough") {
      s.initial.kind = InitialData::Kind::rough;
    } else if (kind == "sine") {
      s.initial.kind = InitialData::Kind::sine;
    } else {
      throw ConfigError("initial.kind", "must be \"rough\" or \"sine\", got \"" + kind + "\"");
    }
    s.initial.sigma = read_double(init, "initial", "s", s.initial.sigma);
    s.initial.amplitude = read_double(init, "initial", "amplitude", s.initial.amplitude);
  }
  s.beta_list = read_double_list(root, "", "beta_list", s.beta_list);
  if (root.contains("beta_pairs")) {
    const Json& v = root.at("beta_pairs");
    if (!v.is_array()) throw ConfigError("beta_pairs", "must be an array of [beta1, beta2] pairs");
    s.beta_pairs.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string field = "beta_pairs[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number()) {
        throw ConfigError(field, "must be a pair of numbers");
      }
      s.beta_pairs.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
    }
  }
  s.t0 = read_double(root, "", "t0", s.t0);
  if (root.contains("schedule")) {
    const Json& sch = root.at("schedule");
    check_keys(sch, "schedule", {"kind", "count", "t_min"});
    const std::string kind = read_string(sch, "schedule", "kind", to_string(s.schedule.kind));
    if (kind == "log") {
      s.schedule.kind = SampleSchedule::Kind::log;
    } else if (kind == "linear") {
      s.schedule.kind = SampleSchedule::Kind::linear;
    } else {
      throw ConfigError("schedule.kind", "must be \"log\" or \"linear\", got \"" + kind + "\"");
    }
    s.schedule.count = static_cast<int>(read_int(sch, "schedule", "count", s.schedule.count));
    s.schedule.t_min = read_double(sch, "schedule", "t_min", s.schedule.t_min);
  }
  cfg.output_dir = read_string(root, "", "output_dir", cfg.output_dir);
  s.slope_tol = read_double(root, "", "slope_tol", s.slope_tol);
  s.refinement_threshold = read_double(root, "", "refinement_threshold", s.refinement_threshold);
  s.window_end = read_double(root, "", "window_end", s.window_end);
  s.small_amplitude = read_double(root, "", "small_amplitude", s.small_amplitude);
  s.small_n = static_cast<int>(read_int(root, "", "small_n", s.small_n));

  InequalitySuiteConfig& q = cfg.inequalities;
  if (root.contains("inequalities")) {
    const Json& iq = root.at("inequalities");
    const std::string p = "inequalities";
    check_keys(iq, p,
               {"ensemble", "grid_sizes", "commutator_grid_sizes", "threshold", "commutator_alpha",
                "extra_commutator_tuples"});
    const long long ensemble = read_int(iq, p, "ensemble", static_cast<long long>(q.ensemble));
    if (ensemble < 1) throw ConfigError("inequalities.ensemble", "must be >= 1");
    q.ensemble = static_cast<std::size_t>(ensemble);
    q.grid_sizes = read_int_list(iq, p, "grid_sizes", q.grid_sizes);
    q.commutator_grid_sizes = read_int_list(iq, p, "commutator_grid_sizes", q.commutator_grid_sizes);
    q.threshold = read_double(iq, p, "threshold", q.threshold);
    q.commutator_alpha = read_double(iq, p, "commutator_alpha", q.commutator_alpha);
    const long long extra =
        read_int(iq, p, "extra_commutator_tuples", static_cast<long long>(q.extra_commutator_tuples));
    if (extra < 0) throw ConfigError("inequalities.extra_commutator_tuples", "must be >= 0");
    q.extra_commutator_tuples = static_cast<std::size_t>(extra);
    for (const auto* list : {&q.grid_sizes, &q.commutator_grid_sizes}) {
      for (int n : *list) {
        if (n < 8 || n % 2 != 0) {
          throw ConfigError(list == &q.grid_sizes ? "inequalities.grid_sizes"
                                                  : "inequalities.commutator_grid_sizes",
                            "entries must be even integers >= 8");
        }
      }
    }
    if (!(q.threshold > 0.0)) throw ConfigError("inequalities.threshold", "must be > 0");
  }
  q.seed = s.seed;
  s.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string serialize_config(const RunConfig& config) {
  Json j = spec_json(config.spec);
  j["output_dir"] = config.output_dir;
  j["inequalities"] = inequality_config_json(config.inequalities);
  return j.dump(2) + "\n";
}

void write_snapshot(const std::filesystem::path& path, const SimulationState& state, double gamma) {
  const TorusGrid& grid = state.theta.grid();
  std::string bytes;
  bytes.reserve(kSnapshotHeaderBytes + grid.spectral_size() * 16);
  bytes.append("SQGF", 4);
  put_u32(bytes, kSnapshotVersion);
  put_u32(bytes, static_cast<std::uint32_t>(grid.n()));
  put_f64(bytes, gamma);
  put_f64(bytes, state.t);
  for (const Complex& c : state.theta.coeffs()) {
    put_f64(bytes, c.real());
    put_f64(bytes, c.imag());
  }
  try {
    write_text(path, bytes);
  } catch (const Error& e) {
    throw SnapshotError(SnapshotError::Kind::io, e.what());
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  using Kind = SnapshotError::Kind;
  const std::string where = "snapshot '" + path.string() + "': ";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError(Kind::io, where + "cannot open");
  const std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 4) throw SnapshotError(Kind::truncated, where + "shorter than the magic");
  if (std::memcmp(p, "SQGF", 4) != 0) throw SnapshotError(Kind::bad_magic, where + "bad magic");
  if (raw.size() < kSnapshotHeaderBytes) throw SnapshotError(Kind::truncated, where + "truncated header");
  const std::uint32_t version = get_u32(p + 4);
  if (version != kSnapshotVersion) {
    throw SnapshotError(Kind::version_mismatch, where + "version " + std::to_string(version) +
                                                    ", expected " + std::to_string(kSnapshotVersion));
  }
  const std::uint32_t n = get_u32(p + 8);
  const double gamma = get_f64(p + 12);
  const double t = get_f64(p + 20);
  if (n < static_cast<std::uint32_t>(TorusGrid::kMinModes) || n % 2 != 0 || n > (1u << 16)) {
    throw SnapshotError(Kind::invalid_header, where + "invalid n = " + std::to_string(n));
  }
  if (!std::isfinite(gamma) || !std::isfinite(t)) {
    throw SnapshotError(Kind::invalid_header, where + "non-finite gamma or t");
  }
  const TorusGrid grid(static_cast<int>(n));
  const std::size_t payload = grid.spectral_size() * 16;
  if (raw.size() < kSnapshotHeaderBytes + payload) {
    throw SnapshotError(Kind::truncated, where + "payload has " +
                                             std::to_string(raw.size() - kSnapshotHeaderBytes) +
                                             " bytes, expected " + std::to_string(payload));
  }
  if (raw.size() > kSnapshotHeaderBytes + payload) {
    throw SnapshotError(Kind::invalid_header, where + "trailing bytes after the payload");
  }
  ComplexBuffer coeffs(grid.spectral_size());
  const unsigned char* q = p + kSnapshotHeaderBytes;
  for (std::size_t i = 0; i < coeffs.size(); ++i, q += 16) {
    coeffs[i] = Complex(get_f64(q), get_f64(q + 8));
  }
  return {gamma, SimulationState{t, SpectralField(grid, std::move(coeffs)), 0}};
}

void write_timeseries(const NormTrajectory& trajectory, const std::filesystem::path& path) {
  if (trajectory.empty()) throw InvalidArgument("write_timeseries: empty trajectory");
  std::string text = "t";
  for (const auto& c : trajectory.columns()) text += "," + c;
  text += "\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    text += format_double(trajectory.times()[i]);
    for (const auto& c : trajectory.columns()) text += "," + format_double(trajectory.column(c)[i]);
    text += "\n";
  }
  write_text(path, text);
}

NormTrajectory read_timeseries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path.string() + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("'" + path.string() + "': missing header");
  auto header = split(line);
  if (header.empty() || header.front() != "t") {
    throw InvalidArgument("'" + path.string() + "': header must start with 't'");
  }
  NormTrajectory traj(std::vector<std::string>(header.begin() + 1, header.end()));
  std::size_t lineno = 1;
  std::vector<double> row(header.size() - 1);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw InvalidArgument("'" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                            std::to_string(header.size()) + " fields");
    }
    std::vector<double> values(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const char* b = cells[k].data();
      const char* e = b + cells[k].size();
      const auto res = std::from_chars(b, e, values[k]);
      if (res.ec != std::errc() || res.ptr != e) {
        throw InvalidArgument("'" + path.string() + "' line " + std::to_string(lineno) +
                              ": bad number in column '" + header[k] + "'");
      }
    }
    std::copy(values.begin() + 1, values.end(), row.begin());
    traj.append(values.front(), row);
  }
  return traj;
}

std::string estimate_report_body(const EstimateReport& report) {
  Json claims = Json::array();
  for (const Claim& c : report.claims) {
    claims.push_back(Json{{"id", c.id},
                          {"quantity", c.quantity},
                          {"measured", number(c.measured)},
                          {"threshold", number(c.threshold)},
                          {"verdict", to_string(c.verdict)},
                          {"details", number_map(c.details)}});
  }
  const char* verdict = report.diverged() ? "diverged" : report.any_failed() ? "fail" : "pass";
  Json j{{"schema_version", kSchemaVersion},
         {"kind", "estimate_report"},
         {"environment", spec_json(report.spec)},
         {"conventions",
          {{"resolved_time", resolved_time(report.spec.n, report.spec.gamma)},
           {"note",
            "constants C, T, T0 and eps0 have no stated values; all thresholds are measurement "
            "conventions"}}},
         {"claims", claims},
         {"verdict", verdict}};
  return j.dump(2) + "\n";
}

std::string inequality_report_body(const InequalitySuiteConfig& config,
                                   const std::vector<ConstantReport>& reports) {
  Json list = Json::array();
  bool ok = true;
  for (const ConstantReport& r : reports) {
    Json ratios = Json::array();
    for (double x : r.max_ratio) ratios.push_back(number(x));
    list.push_back(Json{{"id", r.id},
                        {"params", number_map(r.params)},
                        {"ensemble_size", r.ensemble_size},
                        {"grid_sizes", r.grid_sizes},
                        {"max_ratio", ratios},
                        {"growth", number(r.growth)},
                        {"threshold", number(r.threshold)},
                        {"violations", r.violations},
                        {"verdict", r.verdict ? "pass" : "fail"},
                        {"extras", number_map(r.extras)}});
    ok = ok && r.verdict;
  }
  Json cfg = inequality_config_json(config);
  cfg["seed"] = config.seed;
  Json j{{"schema_version", kSchemaVersion},
         {"kind", "inequality_report"},
         {"config", cfg},
         {"reports", list},
         {"verdict", ok ? "pass" : "fail"}};
  return j.dump(2) + "\n";
}

void write_estimate_report(const EstimateReport& report, const std::filesystem::path& path) {
  write_text(path, with_metadata(estimate_report_body(report)));
}

void write_inequality_report(const InequalitySuiteConfig& config,
                             const std::vector<ConstantReport>& reports,
                             const std::filesystem::path& path) {
  write_text(path, with_metadata(inequality_report_body(config, reports)));
}

ReportSummary summarize_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read report '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("report '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion) {
    throw InvalidArgument("report '" + path.string() + "': unsupported schema_version");
  }
  const std::string kind = j.value("kind", "");
  auto fmt = [](const Json& v) {
    if (v.is_null()) return std::string("-");
    if (v.is_string()) return v.get<std::string>();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v.get<double>());
    return std::string(buf);
  };
  ReportSummary out;
  std::ostringstream text;
  if (kind == "estimate_report") {
    const Json& env = j["environment"];
    text << "estimate report: gamma=" << fmt(env["gamma"]) << " n=" << env["n"].get<int>()
         << " dt=" << fmt(env["dt"]) << " t_end=" << fmt(env["t_end"])
         << " seed=" << env["seed"].get<std::uint64_t>() << "\n";
    char line[256];
    std::snprintf(line, sizeof(line), "  %-28s %-14s %14s %14s\n", "claim", "verdict", "measured",
                  "threshold");
    text << line;
    for (const Json& c : j["claims"]) {
      const std::string verdict = c["verdict"].get<std::string>();
      std::snprintf(line, sizeof(line), "  %-28s %-14s %14s %14s\n",
                    c["id"].get<std::string>().c_str(), verdict.c_str(), fmt(c["measured"]).c_str(),
                    fmt(c["threshold"]).c_str());
      text << line;
      out.failed = out.failed || verdict == "fail" || verdict == "diverged";
      out.diverged = out.diverged || verdict == "diverged";
    }
  } else if (kind == "inequality_report") {
    text << "inequality report: seed=" << j["config"]["seed"].get<std::uint64_t>()
         << " ensemble=" << j["config"]["ensemble"].get<std::size_t>() << "\n";
    char line[256];
    for (const Json& r : j["reports"]) {
      std::string params;
      for (const auto& item : r["params"].items()) {
        params += (params.empty() ? "" : ",") + item.key() + "=" + fmt(item.value());
      }
      std::string ratios;
      for (const Json& x : r["max_ratio"]) ratios += (ratios.empty() ? "" : " ") + fmt(x);
      const std::string verdict = r["verdict"].get<std::string>();
      std::snprintf(line, sizeof(line), "  %-22s %-28s %-5s growth=%-10s max_ratio=[%s]\n",
                    r["id"].get<std::string>().c_str(), params.c_str(), verdict.c_str(),
                    fmt(r["growth"]).c_str(), ratios.c_str());
      text << line;
      out.failed = out.failed || verdict != "pass";
    }
  } else {
    throw InvalidArgument("report '" + path.string() + "': unknown kind '" + kind + "'");
  }
  text << "verdict: " << j.value("verdict", "unknown") << "\n";
  out.text = text.str();
  return out;
}

}  // namespace sqg

#include "holorigid/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "holorigid/errors.hpp"

namespace holorigid {

namespace {

double get_positive(const nlohmann::json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number())
    throw InputError(std::string("config field '") + field +
                     "' must be a number");
  double v = j[field].get<double>();
  if (!(v > 0.0))
    throw InputError(std::string("config field '") + field +
                     "' must be positive");
  return v;
}

int get_depth(const nlohmann::json& j, const char* field, int fallback) {
  if (!j.contains(field)) return fallback;
  if (!j[field].is_number_integer())
    throw InputError(std::string("config field '") + field +
                     "' must be an integer");
  int v = j[field].get<int>();
  if (v < 1)
    throw InputError(std::string("config field '") + field +
                     "' must be at least 1");
  return v;
}

}  // namespace

void RunConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0))
      throw InputError(std::string("config field '") + field +
                       "' must be positive");
  };
  auto depth = [](int v, const char* field) {
    if (v < 1)
      throw InputError(std::string("config field '") + field +
                       "' must be at least 1");
  };
  positive(tol, "tol");
  positive(orbit_tol, "orbit_tol");
  positive(dimension_tol, "dimension_tol");
  depth(pressure_order, "pressure_order");
  depth(max_period, "max_period");
  depth(bridge_depth, "bridge_depth");
  depth(grid_depth, "grid_depth");
  positive(cell_size, "cell_size");
  positive(critical_radius, "critical_radius");
  positive(neighborhood_radius, "neighborhood_radius");
  if (out_dir.empty()) throw InputError("config field 'out_dir' is empty");
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["tol"] = tol;
  j["orbit_tol"] = orbit_tol;
  j["dimension_tol"] = dimension_tol;
  j["pressure_order"] = pressure_order;
  j["max_period"] = max_period;
  j["bridge_depth"] = bridge_depth;
  j["grid_depth"] = grid_depth;
  j["cell_size"] = cell_size;
  j["critical_radius"] = critical_radius;
  j["neighborhood_radius"] = neighborhood_radius;
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config root must be a JSON object");
  // "provenance" is the stamp the CLI adds to every artifact; accepting and
  // ignoring it here lets a written config file be fed back in unchanged.
  static const std::set<std::string> known = {
      "tol",        "orbit_tol",    "dimension_tol",   "pressure_order",
      "max_period", "bridge_depth", "grid_depth",      "cell_size",
      "critical_radius", "neighborhood_radius", "out_dir", "seed",
      "provenance"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw InputError("unknown config field '" + key + "'");

  RunConfig c;
  c.tol = get_positive(j, "tol", c.tol);
  c.orbit_tol = get_positive(j, "orbit_tol", c.orbit_tol);
  c.dimension_tol = get_positive(j, "dimension_tol", c.dimension_tol);
  c.pressure_order = get_depth(j, "pressure_order", c.pressure_order);
  c.max_period = get_depth(j, "max_period", c.max_period);
  c.bridge_depth = get_depth(j, "bridge_depth", c.bridge_depth);
  c.grid_depth = get_depth(j, "grid_depth", c.grid_depth);
  c.cell_size = get_positive(j, "cell_size", c.cell_size);
  c.critical_radius = get_positive(j, "critical_radius", c.critical_radius);
  c.neighborhood_radius =
      get_positive(j, "neighborhood_radius", c.neighborhood_radius);
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string())
      throw InputError("config field 'out_dir' must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw InputError("config field 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
  try {
    return from_json(j);
  } catch (const InputError& e) {
    throw InputError("config '" + path + "': " + e.what());
  }
}

void RunConfig::save(const std::string& path) const {
  write_text_file(path, to_json().dump(2) + "\n");
}

std::string config_hash(const RunConfig& cfg) {
  std::string dump = cfg.to_json().dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_footer(const RunConfig& cfg) {
  return std::string("# tool_version=") + kToolVersion + "\n" +
         "# config_hash=" + config_hash(cfg) + "\n";
}

nlohmann::ordered_json provenance_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["tool_version"] = kToolVersion;
  j["config_hash"] = config_hash(cfg);
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw InputError("cannot create directory '" +
                       p.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out.flush())
    throw InputError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace holorigid

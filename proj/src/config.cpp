#include "villain/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace villain {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long r = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno != 0) throw ValidationError("key '" + key + "': not an integer: " + v);
  return r;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || *end != '\0' || errno != 0) {
    throw ValidationError("key '" + key + "': not an unsigned integer: " + v);
  }
  return r;
}

double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double r = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno != 0) throw ValidationError("key '" + key + "': not a number: " + v);
  return r;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("key '" + key + "': not a boolean: " + v);
}

std::vector<Separation> parse_separations(const std::string& key, const std::string& v) {
  std::vector<Separation> out;
  for (const std::string& item : split(v, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ValidationError("key '" + key + "': separation must be dx:dt, got " + item);
    out.push_back({static_cast<int>(parse_int(key, parts[0])), static_cast<int>(parse_int(key, parts[1]))});
  }
  return out;
}

// Shortest of %.15g / %.17g that parses back to the same double.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<Separation>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i].dx) + ":" + std::to_string(v[i].dt);
  }
  return s;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += f(v[i]);
  }
  return s;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

std::vector<Field> fields(RunConfig& c) {
  auto i32 = [](const char* k, int& f) {
    return std::pair{std::function<void(const std::string&)>([k, &f](const std::string& v) {
                       f = static_cast<int>(parse_int(k, v));
                     }),
                     std::function<std::string()>([&f] { return std::to_string(f); })};
  };
  auto f64 = [](const char* k, double& f) {
    return std::pair{std::function<void(const std::string&)>([k, &f](const std::string& v) { f = parse_double(k, v); }),
                     std::function<std::string()>([&f] { return fmt(f); })};
  };
  auto boolean = [](const char* k, bool& f) {
    return std::pair{std::function<void(const std::string&)>([k, &f](const std::string& v) { f = parse_bool(k, v); }),
                     std::function<std::string()>([&f] { return std::string(f ? "true" : "false"); })};
  };
  auto seps = [](const char* k, std::vector<Separation>& f) {
    return std::pair{
        std::function<void(const std::string&)>([k, &f](const std::string& v) { f = parse_separations(k, v); }),
        std::function<std::string()>([&f] { return fmt(f); })};
  };
  auto choice = [](const char* k, std::string& f, std::initializer_list<const char*> allowed) {
    std::vector<const char*> opts(allowed);
    return std::pair{std::function<void(const std::string&)>([k, &f, opts](const std::string& v) {
                       for (const char* a : opts) {
                         if (v == a) {
                           f = v;
                           return;
                         }
                       }
                       throw ValidationError(std::string("key '") + k + "': unsupported value '" + v + "'");
                     }),
                     std::function<std::string()>([&f] { return f; })};
  };
  auto make = [](const char* s, const char* k, auto p) { return Field{s, k, p.first, p.second}; };

  std::vector<Field> out;
  out.push_back(make("lattice", "Lx", i32("Lx", c.lx)));
  out.push_back(make("lattice", "Lt", i32("Lt", c.lt)));
  out.push_back(make("lattice", "delta", f64("delta", c.delta)));
  out.push_back(make("couplings", "I", f64("I", c.inertia)));
  out.push_back(make("couplings", "J", f64("J", c.coupling)));
  out.push_back(Field{"chain", "seed", [&c](const std::string& v) { c.seed = parse_u64("seed", v); },
                      [&c] { return std::to_string(c.seed); }});
  out.push_back(make("chain", "therm", i32("therm", c.therm)));
  out.push_back(make("chain", "sweeps", i32("sweeps", c.sweeps)));
  out.push_back(make("chain", "bin", i32("bin", c.bin)));
  out.push_back(make("chain", "rep", choice("rep", c.rep, {"angle", "height", "gaussian"})));
  out.push_back(make("chain", "windings", boolean("windings", c.windings)));
  out.push_back(make("chain", "width", f64("width", c.width)));
  out.push_back(make("greens", "form", choice("form", c.form, {"primal", "dual"})));
  out.push_back(make("greens", "method", choice("method", c.method, {"auto", "direct", "fft"})));
  out.push_back(make("greens", "fit_min", f64("fit_min", c.fit_min)));
  out.push_back(make("greens", "fit_max", f64("fit_max", c.fit_max)));
  out.push_back(make("sample", "separations", seps("separations", c.sample_separations)));
  out.push_back(make("sample", "xi", f64("xi", c.sample_xi)));
  out.push_back(Field{"sample", "x",
                      [&c](const std::string& v) {
                        c.sample_x.clear();
                        for (const auto& s : split(v, ',')) c.sample_x.push_back(static_cast<int>(parse_int("x", s)));
                      },
                      [&c] { return join(c.sample_x, [](int v) { return std::to_string(v); }); }});
  out.push_back(make("sample", "bound_check", choice("bound_check", c.bound_check, {"none", "mbs"})));
  out.push_back(make("oracle", "K", i32("K", c.max_current)));
  out.push_back(make("oracle", "quad_points", i32("quad_points", c.quad_points)));
  out.push_back(make("oracle", "max_shift", i32("max_shift", c.max_shift)));
  out.push_back(make("oracle", "tol", f64("tol", c.tol)));
  out.push_back(make("oracle", "threshold", f64("threshold", c.threshold)));
  out.push_back(make("oracle", "tail_tol", f64("tail_tol", c.tail_tol)));
  out.push_back(make("oracle", "max_height", i32("max_height", c.max_height)));
  out.push_back(make("oracle", "max_winding", i32("max_winding", c.max_winding)));
  out.push_back(make("oracle", "xi", f64("xi", c.oracle_xi)));
  out.push_back(make("oracle", "x", i32("x", c.oracle_x)));
  out.push_back(make("oracle", "disorder", boolean("disorder", c.disorder)));
  out.push_back(make("bounds", "source", choice("source", c.source, {"exact", "file"})));
  out.push_back(Field{"bounds", "input", [&c](const std::string& v) { c.input = v; }, [&c] { return c.input; }});
  out.push_back(make("bounds", "separations", seps("separations", c.bound_separations)));
  out.push_back(Field{"bounds", "xi",
                      [&c](const std::string& v) {
                        c.bound_xi.clear();
                        for (const auto& s : split(v, ',')) c.bound_xi.push_back(parse_double("xi", s));
                      },
                      [&c] { return join(c.bound_xi, [](double v) { return fmt(v); }); }});
  out.push_back(make("bounds", "x", i32("x", c.bound_x)));
  out.push_back(make("bounds", "statement_form", boolean("statement_form", c.statement_form)));
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  auto table = fields(config);
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const Field& f : table) known = known || section == f.section;
      if (!known) throw ValidationError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + "expected key = value");
    if (section.empty()) throw ValidationError(where + "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool found = false;
    for (Field& f : table) {
      if (section == f.section && key == f.key) {
        try {
          f.set(value);
        } catch (const ValidationError& e) {
          throw ValidationError(where + e.what());
        }
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError(where + "unknown key '" + key + "' in [" + section + "]");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("summary JSON unreadable: ") + e.what());
    }
    if (!j.contains("config_text") || !j["config_text"].is_string()) {
      throw ValidationError("summary JSON has no config_text");
    }
    return parse_config(j["config_text"].get<std::string>());
  }
  return parse_config(text);
}

std::string to_config_text(const RunConfig& config) {
  RunConfig copy = config;
  std::string out, section;
  for (const Field& f : fields(copy)) {
    if (section != f.section) {
      if (!section.empty()) out += "\n";
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get() + "\n";
  }
  return out;
}

nlohmann::json to_json(const RunConfig& config) {
  RunConfig copy = config;
  nlohmann::json j = nlohmann::json::object();
  for (const Field& f : fields(copy)) j[f.section][f.key] = f.get();
  return j;
}

}  // namespace villain

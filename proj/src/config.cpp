#include "nlb/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "nlb/data.hpp"
#include "nlb/io.hpp"

namespace nlb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (v.empty() || end != begin + v.size() || !std::isfinite(x)) throw ConfigError("expected a number, got '" + v + "'", line);
  return x;
}

int to_int(const std::string& v, int line) {
  const double x = to_double(v, line);
  if (x != std::floor(x) || std::abs(x) > 2e9) throw ConfigError("expected an integer, got '" + v + "'", line);
  return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("expected true or false, got '" + v + "'", line);
}

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line));
  return out;
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"kernel.kind", [](RunConfig& c, const std::string& v, int) { c.kernel.kind = v; }},
      {"kernel.alpha", [](RunConfig& c, const std::string& v, int l) { c.kernel.alpha = to_double(v, l); }},
      {"kernel.sign", [](RunConfig& c, const std::string& v, int l) { c.kernel.sign = to_int(v, l); }},
      {"kernel.file", [](RunConfig& c, const std::string& v, int) { c.kernel.file = v; }},
      {"grid.L", [](RunConfig& c, const std::string& v, int l) { c.L = to_double(v, l); }},
      {"grid.n", [](RunConfig& c, const std::string& v, int l) { c.n = to_int(v, l); }},
      {"grid.boundary",
       [](RunConfig& c, const std::string& v, int l) {
         try {
           c.boundary = boundary_from_string(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what(), l);
         }
       }},
      {"initial.kind", [](RunConfig& c, const std::string& v, int) { c.initial.kind = v; }},
      {"initial.amplitude", [](RunConfig& c, const std::string& v, int l) { c.initial.amplitude = to_double(v, l); }},
      {"initial.width", [](RunConfig& c, const std::string& v, int l) { c.initial.width = to_double(v, l); }},
      {"initial.center", [](RunConfig& c, const std::string& v, int l) { c.initial.center = to_double(v, l); }},
      {"initial.height", [](RunConfig& c, const std::string& v, int l) { c.initial.height = to_double(v, l); }},
      {"initial.slope", [](RunConfig& c, const std::string& v, int l) { c.initial.slope = to_double(v, l); }},
      {"initial.left", [](RunConfig& c, const std::string& v, int l) { c.initial.left = to_double(v, l); }},
      {"initial.right", [](RunConfig& c, const std::string& v, int l) { c.initial.right = to_double(v, l); }},
      {"initial.periods", [](RunConfig& c, const std::string& v, int l) { c.initial.periods = to_int(v, l); }},
      {"initial.file", [](RunConfig& c, const std::string& v, int) { c.initial.file = v; }},
      {"run.t_final", [](RunConfig& c, const std::string& v, int l) { c.t_final = to_double(v, l); }},
      {"run.times", [](RunConfig& c, const std::string& v, int l) { c.times = to_list(v, l); }},
      {"run.record_every", [](RunConfig& c, const std::string& v, int l) { c.record_every = to_double(v, l); }},
      {"run.epsilon", [](RunConfig& c, const std::string& v, int l) { c.epsilon = to_double(v, l); }},
      {"run.s", [](RunConfig& c, const std::string& v, int l) { c.s = to_double(v, l); }},
      {"run.cfl", [](RunConfig& c, const std::string& v, int l) { c.cfl = to_double(v, l); }},
      {"verify.holder", [](RunConfig& c, const std::string& v, int l) { c.verify.holder = to_bool(v, l); }},
      {"verify.height", [](RunConfig& c, const std::string& v, int l) { c.verify.height = to_bool(v, l); }},
      {"verify.l2", [](RunConfig& c, const std::string& v, int l) { c.verify.l2 = to_bool(v, l); }},
      {"verify.l2_limit", [](RunConfig& c, const std::string& v, int l) { c.verify.l2_limit = to_bool(v, l); }},
      {"verify.contraction",
       [](RunConfig& c, const std::string& v, int l) { c.verify.contraction = to_bool(v, l); }},
      {"verify.resolution",
       [](RunConfig& c, const std::string& v, int l) { c.verify.resolution = to_bool(v, l); }},
      {"verify.breaking", [](RunConfig& c, const std::string& v, int l) { c.verify.breaking = to_bool(v, l); }},
      {"verify.holder_variant",
       [](RunConfig& c, const std::string& v, int l) {
         try {
           holder_variant_from_string(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(e.what(), l);
         }
         c.verify.holder_variant = v;
       }},
      {"verify.rho", [](RunConfig& c, const std::string& v, int l) { c.verify.rho = to_double(v, l); }},
      {"verify.contraction_radius",
       [](RunConfig& c, const std::string& v, int l) { c.verify.contraction_radius = to_double(v, l); }},
      {"verify.contraction_times",
       [](RunConfig& c, const std::string& v, int l) { c.verify.contraction_times = to_list(v, l); }},
      {"verify.bump_amplitude",
       [](RunConfig& c, const std::string& v, int l) { c.verify.bump_amplitude = to_double(v, l); }},
      {"verify.bump_width", [](RunConfig& c, const std::string& v, int l) { c.verify.bump_width = to_double(v, l); }},
      {"verify.bump_center",
       [](RunConfig& c, const std::string& v, int l) { c.verify.bump_center = to_double(v, l); }},
      {"output.dir", [](RunConfig& c, const std::string& v, int) { c.output_dir = v; }},
  };
  return table;
}

}  // namespace

HolderVariant holder_variant_from_string(const std::string& s) {
  if (s == "simple") return HolderVariant::simple;
  if (s == "sharp") return HolderVariant::sharp;
  if (s == "b_exact") return HolderVariant::b_exact;
  throw std::invalid_argument("unknown holder variant '" + s + "' (simple, sharp, b_exact)");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      static const char* known[] = {"kernel", "grid", "initial", "run", "verify", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    if (section.empty()) throw ConfigError("key outside of any [section]", line);
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    const auto it = setters().find(section + "." + key);
    if (it == setters().end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    it->second(c, value, line);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config " + path + ": " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  RunConfig c = parse_config(text, dir.empty() ? "." : dir.string());
  c.validate();
  return c;
}

std::string RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

void RunConfig::validate() const {
  static const char* kernels[] = {"bessel", "exponential", "zero", "custom"};
  if (std::find(std::begin(kernels), std::end(kernels), kernel.kind) == std::end(kernels))
    throw ConfigError("unknown kernel kind '" + kernel.kind + "'");
  if (kernel.kind == "bessel" && !(kernel.alpha > 1.0)) throw ConfigError("bessel kernel needs alpha > 1");
  if (kernel.sign != 1 && kernel.sign != -1) throw ConfigError("kernel sign must be 1 or -1");
  if (kernel.kind == "custom") {
    if (kernel.file.empty()) throw ConfigError("custom kernel needs [kernel] file");
    if (!std::filesystem::exists(resolve(kernel.file)))
      throw ConfigError("kernel file not found: " + resolve(kernel.file));
  }
  static const char* data[] = {"gaussian", "square", "ramp", "step", "sine", "file"};
  if (std::find(std::begin(data), std::end(data), initial.kind) == std::end(data))
    throw ConfigError("unknown initial kind '" + initial.kind + "'");
  if (initial.kind == "file") {
    if (initial.file.empty()) throw ConfigError("file initial data needs [initial] file");
    if (!std::filesystem::exists(resolve(initial.file)))
      throw ConfigError("initial data file not found: " + resolve(initial.file));
  }
  if (initial.kind == "sine" && boundary != Boundary::periodic) throw ConfigError("sine data needs a periodic grid");
  try {
    grid().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be >= 0");
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("run times must be sorted");
  for (double t : times)
    if (t < 0.0 || t > t_final) throw ConfigError("run times must lie in [0, t_final]");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("s must lie in [0, 1]");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
  if (record_every < 0.0) throw ConfigError("record_every must be >= 0");
  if (!(verify.rho > 0.0 && verify.rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (verify.contraction && boundary != Boundary::zero_extended)
    throw ConfigError("the contraction check needs boundary = zero_extended");
  if (!std::is_sorted(verify.contraction_times.begin(), verify.contraction_times.end()))
    throw ConfigError("contraction times must be sorted");
}

bool RunConfig::operator==(const RunConfig& o) const {
  return kernel == o.kernel && L == o.L && n == o.n && boundary == o.boundary && initial == o.initial &&
         t_final == o.t_final && times == o.times && record_every == o.record_every && epsilon == o.epsilon &&
         s == o.s && cfl == o.cfl && verify == o.verify && output_dir == o.output_dir;
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[kernel]\nkind = " << c.kernel.kind << "\nalpha = " << fmt(c.kernel.alpha) << "\nsign = " << c.kernel.sign
    << "\nfile = " << c.kernel.file << "\n\n";
  o << "[grid]\nL = " << fmt(c.L) << "\nn = " << c.n << "\nboundary = " << to_string(c.boundary) << "\n\n";
  const auto& i = c.initial;
  o << "[initial]\nkind = " << i.kind << "\namplitude = " << fmt(i.amplitude) << "\nwidth = " << fmt(i.width)
    << "\ncenter = " << fmt(i.center) << "\nheight = " << fmt(i.height) << "\nslope = " << fmt(i.slope)
    << "\nleft = " << fmt(i.left) << "\nright = " << fmt(i.right) << "\nperiods = " << i.periods
    << "\nfile = " << i.file << "\n\n";
  o << "[run]\nt_final = " << fmt(c.t_final) << "\ntimes = " << list_str(c.times)
    << "\nrecord_every = " << fmt(c.record_every) << "\nepsilon = " << fmt(c.epsilon) << "\ns = " << fmt(c.s)
    << "\ncfl = " << fmt(c.cfl) << "\n\n";
  const auto& v = c.verify;
  o << "[verify]\nholder = " << bool_str(v.holder) << "\nheight = " << bool_str(v.height)
    << "\nl2 = " << bool_str(v.l2) << "\nl2_limit = " << bool_str(v.l2_limit)
    << "\ncontraction = " << bool_str(v.contraction) << "\nbreaking = " << bool_str(v.breaking)
    << "\nresolution = " << bool_str(v.resolution)
    << "\nholder_variant = " << v.holder_variant << "\nrho = " << fmt(v.rho)
    << "\ncontraction_radius = " << fmt(v.contraction_radius) << "\ncontraction_times = "
    << list_str(v.contraction_times) << "\nbump_amplitude = " << fmt(v.bump_amplitude)
    << "\nbump_width = " << fmt(v.bump_width) << "\nbump_center = " << fmt(v.bump_center) << "\n\n";
  o << "[output]\ndir = " << c.output_dir << "\n";
  return o.str();
}

SampledKernel build_kernel(const RunConfig& c, double* tail) {
  const Grid g = c.grid();
  if (tail) *tail = 0.0;
  if (c.kernel.kind == "zero") return make_zero_kernel(g);
  if (c.kernel.kind == "custom") {
    SampledKernel K = read_kernel_csv(c.resolve(c.kernel.file), true);
    if (!(K.grid == g))
      throw ConfigError("kernel file " + c.resolve(c.kernel.file) + " is on a different grid than [grid]");
    return K;
  }
  const double alpha = c.kernel.kind == "exponential" ? 2.0 : c.kernel.alpha;
  BesselPair pair = make_bessel(alpha, c.kernel.sign, g);
  if (tail) *tail = pair.tail;
  return pair.K;
}

GridFunction build_initial(const RunConfig& c) {
  const Grid g = c.grid();
  const auto& i = c.initial;
  if (i.kind == "gaussian") return gaussian(g, c.boundary, i.amplitude, i.width, i.center);
  if (i.kind == "square") return square_pulse(g, c.boundary, i.height, i.width, i.center);
  if (i.kind == "ramp") return ramp(g, c.boundary, i.slope, i.width);
  if (i.kind == "step") return step(g, c.boundary, i.left, i.right, i.center);
  if (i.kind == "sine") return sine(g, i.amplitude, i.periods);
  GridFunction f = read_field_csv(c.resolve(i.file));
  if (!(f.grid == g)) throw ConfigError("initial data file " + c.resolve(i.file) + " is on a different grid");
  f.boundary = c.boundary;
  return f;
}

SplitConfig build_split(const RunConfig& c, const SampledKernel& K) {
  SplitConfig sc;
  sc.epsilon = c.epsilon;
  sc.kernel = K;
  sc.burgers.cfl = c.cfl;
  sc.record_every = c.record_every;
  sc.record_times = c.times;
  sc.s = c.s;
  return sc;
}

}  // namespace nlb

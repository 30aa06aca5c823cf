#include "io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace plw::cli {

std::string encode_runs(const std::vector<std::uint8_t>& bits) {
  std::string out;
  std::size_t i = 0;
  while (i < bits.size()) {
    std::size_t j = i;
    while (j < bits.size() && (bits[j] != 0) == (bits[i] != 0)) ++j;
    if (!out.empty()) out += ',';
    out += (bits[i] ? "1:" : "0:") + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::vector<std::uint8_t> decode_runs(const std::string& text, std::size_t expected) {
  std::vector<std::uint8_t> bits;
  bits.reserve(expected);
  std::stringstream ss(text);
  std::string run;
  while (std::getline(ss, run, ',')) {
    const auto colon = run.find(':');
    if (colon == std::string::npos || colon == 0) throw InvalidArgument("bad run '" + run + "' in inside mask");
    const std::string bit = run.substr(0, colon);
    if (bit != "0" && bit != "1") throw InvalidArgument("run bit must be 0 or 1");
    std::size_t count = 0;
    try {
      count = std::stoul(run.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("bad run length in '" + run + "'");
    }
    bits.insert(bits.end(), count, bit == "1" ? 1 : 0);
  }
  if (bits.size() != expected)
    throw InvalidArgument("inside mask has " + std::to_string(bits.size()) + " nodes, expected " +
                          std::to_string(expected));
  return bits;
}

nlohmann::ordered_json domain_to_json(const GridDomain& E) {
  nlohmann::ordered_json j;
  j["n"] = E.lattice.shape[0];
  j["h"] = E.h();
  std::vector<double> bbox(E.bbox.center.data(), E.bbox.center.data() + E.dim());
  bbox.push_back(E.bbox.half_edge);
  j["bbox"] = bbox;
  j["name"] = E.traits.name;
  j["inside"] = encode_runs(E.inside);
  return j;
}

GridDomain domain_from_json(const nlohmann::json& j) {
  try {
    const auto bbox = j.at("bbox").get<std::vector<double>>();
    const int dim = static_cast<int>(bbox.size()) - 1;
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("bbox must hold 2 to 4 numbers: center..., half_edge");
    const double h = j.at("h").get<double>();
    Point c(dim);
    for (int a = 0; a < dim; ++a) c[a] = bbox[static_cast<std::size_t>(a)];
    GridDomain E = rasterize(make_cube(c, bbox.back()), h, [](const Point&) { return false; });
    const long n = j.at("n").get<long>();
    if (n != E.lattice.shape[0]) throw InvalidArgument("node count n does not match bbox and h");
    E.inside = decode_runs(j.at("inside").get<std::string>(), static_cast<std::size_t>(E.lattice.size()));
    E.shape = nullptr;
    E.traits.name = j.value("name", std::string("custom"));
    return E;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("domain file: ") + e.what());
  }
}

GridDomain load_domain(const std::string& spec, const BenchmarkParams& params) {
  const auto& names = benchmark_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return benchmark_domain(spec, params);
  std::ifstream in(spec);
  if (!in) throw InvalidArgument("'" + spec + "' is neither a benchmark name nor a readable domain file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("domain file " + spec + ": " + e.what());
  }
  return domain_from_json(j);
}

namespace {

std::vector<double> numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw InvalidArgument("'" + cell + "' is not a number");
    }
  }
  return out;
}

}  // namespace

Point parse_point(const std::string& text, int dim) {
  const auto v = numbers(text);
  if (static_cast<int>(v.size()) != dim)
    throw InvalidArgument("point '" + text + "' needs " + std::to_string(dim) + " coordinates");
  Point x(dim);
  for (int a = 0; a < dim; ++a) x[a] = v[static_cast<std::size_t>(a)];
  return x;
}

Cube parse_cube(const std::string& text, int dim) {
  if (text.rfind("cube:", 0) != 0) throw InvalidArgument("cube spec must read cube:x,...,half_edge");
  const auto v = numbers(text.substr(5));
  if (static_cast<int>(v.size()) != dim + 1)
    throw InvalidArgument("cube '" + text + "' needs " + std::to_string(dim) + " center coordinates and a half edge");
  Point c(dim);
  for (int a = 0; a < dim; ++a) c[a] = v[static_cast<std::size_t>(a)];
  return make_cube(c, v.back());
}

namespace {

BoundaryData sampled_boundary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read sampled boundary field " + path);
  auto u = std::make_shared<Field>(read_field_csv(in));
  BoundaryData d;
  d.g = [u](const Point& x, double t) {
    MultiIndex i{0, 0, 0};
    for (int a = 0; a < u->dim(); ++a) {
      const double s = std::round((x[a] - u->lattice.origin[a]) / u->lattice.h);
      i[a] = std::clamp<Index>(static_cast<Index>(s), 0, u->lattice.shape[a] - 1);
    }
    const Index k = u->lattice.flat(i);
    const auto& ts = u->times;
    if (t <= ts.front()) return u->values.front()[k];
    if (t >= ts.back()) return u->values.back()[k];
    const std::size_t hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
    const double w = (t - ts[hi - 1]) / (ts[hi] - ts[hi - 1]);
    return (1.0 - w) * u->values[hi - 1][k] + w * u->values[hi][k];
  };
  return d;
}

}  // namespace

BoundaryData load_boundary(const std::string& spec, const std::string& initial) {
  const bool is_file = spec.size() > 5 && spec.substr(spec.size() - 5) == ".json";
  if (!is_file) return boundary_from_expression(spec, initial);
  std::ifstream in(spec);
  if (!in) throw InvalidArgument("cannot read boundary data file " + spec);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("boundary file " + spec + ": " + e.what());
  }
  if (j.contains("field")) {
    BoundaryData d = sampled_boundary(j["field"].get<std::string>());
    const std::string init = j.value("initial", initial);
    if (!init.empty()) d.initial = to_function(Expression(init));
    return d;
  }
  if (!j.contains("g")) throw InvalidArgument("boundary file needs \"g\" or \"field\"");
  return boundary_from_expression(j["g"].get<std::string>(), j.value("initial", initial));
}

void emit(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << content;
}

}  // namespace plw::cli

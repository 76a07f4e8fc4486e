#include "regfrac/sources.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace regfrac {

namespace {

std::pair<std::string, std::string> split_head(const std::string& d) {
  const auto pos = d.find(':');
  if (pos == std::string::npos) return {d, ""};
  return {d.substr(0, pos), d.substr(pos + 1)};
}

RadialProfile read_csv_profile(const std::string& path,
                               std::shared_ptr<const RadialGrid> grid) {
  std::ifstream f(path);
  if (!f) throw ConfigError("source csv: cannot open " + path);
  std::string line;
  std::vector<double> rs, us;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw ConfigError("source csv: malformed row '" + line + "'");
    rs.push_back(std::stod(a));
    us.push_back(std::stod(b));
  }
  if (rs.size() < 2) throw ConfigError("source csv: needs at least two rows");
  for (std::size_t k = 0; k + 1 < rs.size(); ++k)
    if (!(rs[k] < rs[k + 1]))
      throw ConfigError("source csv: radii must be strictly increasing");
  // resample onto the grid by linear interpolation (clamped at the ends)
  std::vector<double> v(grid->node_count());
  for (int i = 0; i < grid->node_count(); ++i) {
    const double r = grid->node(i);
    if (r <= rs.front()) {
      v[i] = us.front();
    } else if (r >= rs.back()) {
      v[i] = us.back();
    } else {
      std::size_t k = 0;
      while (rs[k + 1] < r) ++k;
      const double lam = (r - rs[k]) / (rs[k + 1] - rs[k]);
      v[i] = (1.0 - lam) * us[k] + lam * us[k + 1];
    }
  }
  return RadialProfile(std::move(grid), std::move(v));
}

}  // namespace

bool source_is_constant(const std::string& descriptor) {
  return split_head(descriptor).first == "constant";
}

RadialProfile make_source(const std::string& descriptor,
                          std::shared_ptr<const RadialGrid> grid) {
  const auto [head, arg] = split_head(descriptor);
  if (head == "constant") {
    if (arg.empty()) throw ConfigError("source constant: needs a value, e.g. constant:3");
    return RadialProfile(std::move(grid), std::stod(arg));
  }
  if (head == "two-minus-r-squared")
    return RadialProfile(std::move(grid), [](double r) { return 2.0 - r * r; });
  if (head == "gaussian") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos)
      throw ConfigError("source gaussian: needs two parameters, e.g. gaussian:1,4");
    const double a = std::stod(arg.substr(0, comma));
    const double b = std::stod(arg.substr(comma + 1));
    return RadialProfile(std::move(grid),
                         [a, b](double r) { return a * std::exp(-b * r * r); });
  }
  if (head == "csv") {
    if (arg.empty()) throw ConfigError("source csv: needs a path");
    return read_csv_profile(arg, std::move(grid));
  }
  throw ConfigError("unknown source descriptor '" + descriptor + "'");
}

}  // namespace regfrac

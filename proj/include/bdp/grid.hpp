#ifndef BDP_GRID_HPP
#define BDP_GRID_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdp {

// Inclusive arithmetic grid start, start+step, ..., up to stop (within
// half a step of rounding slack).
inline std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("bad grid bounds");
  const long count = static_cast<long>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) g.push_back(start + static_cast<double>(k) * step);
  return g;
}

// Parses "start:stop:step".
inline std::vector<double> parse_grid(const std::string& spec) {
  const auto p1 = spec.find(':');
  const auto p2 = spec.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    throw std::invalid_argument("grid spec must be start:stop:step, got '" + spec + "'");
  try {
    const double start = std::stod(spec.substr(0, p1));
    const double stop = std::stod(spec.substr(p1 + 1, p2 - p1 - 1));
    const double step = std::stod(spec.substr(p2 + 1));
    return make_grid(start, stop, step);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("grid spec must be numeric, got '" + spec + "'");
  }
}

}  // namespace bdp

#endif  // BDP_GRID_HPP

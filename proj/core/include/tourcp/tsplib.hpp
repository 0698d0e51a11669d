#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tourcp/geometry.hpp"
#include "tourcp/graphalg.hpp"

namespace tourcp {

// Parse or semantic error in a node coordinate file; the message names the
// offending 1-based line.
class TsplibError : public std::runtime_error {
public:
  explicit TsplibError(const std::string& what) : std::runtime_error(what) {}
};

// Rounded Euclidean distance: nearest integer to the plain 2D distance.
int euc2d_distance(const Point& a, const Point& b);

// A symmetric Euclidean instance: city coordinates, the full rounded weight
// matrix, and all undirected edges sorted ascending by (weight, u, v).
struct TspInstance {
  std::string name;
  int n = 0;
  std::vector<Point> coords;
  std::vector<int> weights;         // row-major n*n, zero diagonal
  std::vector<Edge> edges_by_weight;

  int weight(int i, int j) const {
    return weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)];
  }

  static TspInstance from_coords(std::string name, std::vector<Point> coords);
};

// Parses TSPLIB-style text.  Only EDGE_WEIGHT_TYPE EUC_2D is understood;
// anything else is rejected loudly rather than silently miscosted.
TspInstance parse_instance(std::string_view text);

TspInstance load_instance(const std::filesystem::path& path);

}  // namespace tourcp

#include "tourcp/tsplib.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tourcp {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << line << ": " << what;
  throw TsplibError(msg.str());
}

}  // namespace

int euc2d_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return static_cast<int>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

TspInstance TspInstance::from_coords(std::string name, std::vector<Point> coords) {
  TspInstance inst;
  inst.name = std::move(name);
  inst.n = static_cast<int>(coords.size());
  inst.coords = std::move(coords);
  inst.weights.assign(static_cast<std::size_t>(inst.n) * static_cast<std::size_t>(inst.n), 0);
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j) {
      const int w = euc2d_distance(inst.coords[static_cast<std::size_t>(i)],
                                   inst.coords[static_cast<std::size_t>(j)]);
      inst.weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(inst.n) +
                   static_cast<std::size_t>(j)] = w;
      inst.weights[static_cast<std::size_t>(j) * static_cast<std::size_t>(inst.n) +
                   static_cast<std::size_t>(i)] = w;
      inst.edges_by_weight.push_back(Edge{i, j, w});
    }
  std::sort(inst.edges_by_weight.begin(), inst.edges_by_weight.end(), edge_less);
  return inst;
}

TspInstance parse_instance(std::string_view text) {
  std::string name;
  int dimension = -1;
  bool euc2d = false;
  bool saw_weight_type = false;
  std::vector<Point> coords;
  std::vector<bool> seen;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool in_coords = false;
  int coords_read = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line == "EOF") break;

    if (!in_coords) {
      if (line == "NODE_COORD_SECTION") {
        if (dimension <= 0) fail_at(line_no, "NODE_COORD_SECTION before DIMENSION");
        if (!saw_weight_type) fail_at(line_no, "NODE_COORD_SECTION before EDGE_WEIGHT_TYPE");
        coords.assign(static_cast<std::size_t>(dimension), Point{});
        seen.assign(static_cast<std::size_t>(dimension), false);
        in_coords = true;
        continue;
      }
      const std::size_t colon = line.find(':');
      const std::string key = trim(colon == std::string::npos ? line : line.substr(0, colon));
      const std::string value = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
      if (key == "NAME") {
        name = value;
      } else if (key == "DIMENSION") {
        try {
          dimension = std::stoi(value);
        } catch (const std::exception&) {
          fail_at(line_no, "DIMENSION is not a number: '" + value + "'");
        }
        if (dimension <= 0) fail_at(line_no, "DIMENSION must be positive");
      } else if (key == "EDGE_WEIGHT_TYPE") {
        saw_weight_type = true;
        euc2d = value == "EUC_2D";
        if (!euc2d)
          fail_at(line_no, "unsupported EDGE_WEIGHT_TYPE '" + value + "' (only EUC_2D)");
      }
      // Other header keys (TYPE, COMMENT, ...) carry no data we use.
      continue;
    }

    // Coordinate line: <id> <x> <y>, ids are 1-based.
    std::istringstream fields(line);
    int id;
    double x, y;
    if (!(fields >> id >> x >> y)) fail_at(line_no, "malformed coordinate line: '" + line + "'");
    if (id < 1 || id > dimension) fail_at(line_no, "node id out of range: " + std::to_string(id));
    if (seen[static_cast<std::size_t>(id - 1)])
      fail_at(line_no, "duplicate node id: " + std::to_string(id));
    seen[static_cast<std::size_t>(id - 1)] = true;
    coords[static_cast<std::size_t>(id - 1)] = Point{x, y};
    ++coords_read;
  }

  if (dimension <= 0) throw TsplibError("missing DIMENSION header");
  if (!euc2d) throw TsplibError("missing EDGE_WEIGHT_TYPE header");
  if (!in_coords) throw TsplibError("missing NODE_COORD_SECTION");
  if (coords_read != dimension)
    throw TsplibError("expected " + std::to_string(dimension) + " coordinates, got " +
                      std::to_string(coords_read));

  return TspInstance::from_coords(std::move(name), std::move(coords));
}

TspInstance load_instance(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw TsplibError("cannot open file: " + path.string());
  std::ostringstream content;
  content << file.rdbuf();
  return parse_instance(content.str());
}

}  // namespace tourcp

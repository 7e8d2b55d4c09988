#include "mpot/cost.hpp"

#include <fstream>
#include <limits>
#include <regex>
#include <sstream>
#include <string>

#include "mpot/error.hpp"

namespace mpot {

SeparableCost::SeparableCost(GridShape shape, std::vector<CostTable> tables)
    : shape_(std::move(shape)), tables_(std::move(tables)) {
  if (static_cast<int>(tables_.size()) != shape_.rank()) {
    throw Error(ErrorKind::LengthMismatch, "need one cost table per axis");
  }
  // each axis is capped so that the d-term sum cannot overflow
  const std::int64_t per_axis_cap = std::numeric_limits<std::int64_t>::max() / shape_.rank();
  for (int a = 0; a < shape_.rank(); ++a) {
    const auto& t = tables_[static_cast<std::size_t>(a)];
    if (t.rows() != shape_.dim(a) || t.cols() != shape_.dim(a)) {
      throw Error(ErrorKind::ShapeMismatch, "cost table for axis " + std::to_string(a) + " must be " +
                                                std::to_string(shape_.dim(a)) + "x" + std::to_string(shape_.dim(a)));
    }
    if (t.minCoeff() < 0) throw Error(ErrorKind::InvalidArgument, "cost tables must be nonnegative");
    const auto m = t.maxCoeff();
    if (m > per_axis_cap) throw Error(ErrorKind::Overflow, "cost table entry too large");
    max_cost_ += m;
  }
}

SeparableCost power_cost(const GridShape& shape, int p) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "power p must be >= 1");
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max() / shape.rank();
  std::vector<CostTable> tables;
  tables.reserve(static_cast<std::size_t>(shape.rank()));
  for (int a = 0; a < shape.rank(); ++a) {
    const Index n = shape.dim(a);
    // |a-b|^p for every distance 0..n-1, with overflow detection
    std::vector<std::int64_t> by_distance(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
      std::int64_t v = 1;
      for (int e = 0; e < p; ++e) {
        if (__builtin_mul_overflow(v, k, &v) || v > cap) {
          throw Error(ErrorKind::Overflow, std::to_string(k) + "^" + std::to_string(p) + " exceeds the cost bound");
        }
      }
      by_distance[static_cast<std::size_t>(k)] = v;
    }
    CostTable t(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) t(i, j) = by_distance[static_cast<std::size_t>(i > j ? i - j : j - i)];
    }
    tables.push_back(std::move(t));
  }
  return SeparableCost(shape, std::move(tables));
}

std::int64_t ground_cost(const SeparableCost& cost, std::span<const Index> x, std::span<const Index> y) {
  const auto& shape = cost.shape();
  if (static_cast<int>(x.size()) != shape.rank() || static_cast<int>(y.size()) != shape.rank()) {
    throw Error(ErrorKind::LengthMismatch, "point rank differs from cost rank");
  }
  std::int64_t c = 0;
  for (int a = 0; a < shape.rank(); ++a) {
    const auto xa = x[static_cast<std::size_t>(a)];
    const auto ya = y[static_cast<std::size_t>(a)];
    if (xa < 0 || xa >= shape.dim(a) || ya < 0 || ya >= shape.dim(a)) {
      throw Error(ErrorKind::IndexOutOfRange, "coordinate outside axis " + std::to_string(a));
    }
    c += cost(a, xa, ya);
  }
  return c;
}

std::int64_t ground_cost(const SeparableCost& cost, Index x, Index y) {
  const auto& shape = cost.shape();
  if (x < 0 || x >= shape.size() || y < 0 || y >= shape.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "bin index outside grid");
  }
  std::int64_t c = 0;
  for (int a = 0; a < shape.rank(); ++a) c += cost(a, shape.coord(x, a), shape.coord(y, a));
  return c;
}

SeparableCost parse_cost_tables(std::istream& in, const GridShape& shape) {
  static const std::regex header(R"(^\s*#\s*axis:\s*(\d+)\s*,\s*size:\s*(\d+)\s*$)");
  std::vector<CostTable> tables(static_cast<std::size_t>(shape.rank()));
  std::vector<bool> seen(tables.size(), false);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, msg + " (line " + std::to_string(lineno) + ")");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(line, m, header)) fail("expected '# axis: i, size: N' header");
    const auto axis = std::stoll(m[1]);
    const auto size = std::stoll(m[2]);
    if (axis >= shape.rank()) fail("axis " + std::to_string(axis) + " outside grid rank");
    if (size != shape.dim(static_cast<int>(axis))) fail("table size does not match grid axis");
    if (seen[static_cast<std::size_t>(axis)]) fail("duplicate table for axis " + std::to_string(axis));
    CostTable t(size, size);
    for (Index r = 0; r < size; ++r) {
      if (!std::getline(in, line)) fail("truncated cost table");
      ++lineno;
      std::istringstream row(line);
      for (Index c = 0; c < size; ++c) {
        if (!(row >> t(r, c))) fail("expected " + std::to_string(size) + " integers");
      }
      std::string extra;
      if (row >> extra) fail("too many entries in row");
    }
    tables[static_cast<std::size_t>(axis)] = std::move(t);
    seen[static_cast<std::size_t>(axis)] = true;
  }
  for (std::size_t a = 0; a < seen.size(); ++a) {
    if (!seen[a]) throw Error(ErrorKind::ParseError, "missing table for axis " + std::to_string(a));
  }
  return SeparableCost(shape, std::move(tables));
}

SeparableCost load_cost_tables(const std::filesystem::path& path, const GridShape& shape) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return parse_cost_tables(in, shape);
}

void write_cost_tables(std::ostream& out, const SeparableCost& cost) {
  for (int a = 0; a < cost.rank(); ++a) {
    const auto& t = cost.table(a);
    out << "# axis: " << a << ", size: " << t.rows() << '\n';
    for (Index r = 0; r < t.rows(); ++r) {
      for (Index c = 0; c < t.cols(); ++c) out << (c ? " " : "") << t(r, c);
      out << '\n';
    }
  }
}

}  // namespace mpot

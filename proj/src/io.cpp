#include "mpot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mpot {
namespace {

std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

// Cursor over an in-memory file that reports line and byte positions.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    const auto line = 1 + std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos_), '\n');
    throw Error(ErrorKind::ParseError, msg + " (line " + std::to_string(line) + ", byte " + std::to_string(pos_) + ")");
  }

  // Skips whitespace and `#` comments that run to end of line.
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::int64_t integer(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) fail(std::string("unexpected end of file reading ") + what);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail(std::string("expected integer for ") + what);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t remaining() const noexcept { return text_.size() - pos_; }
  const char* data() const noexcept { return text_.data() + pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorKind::ParseError, "bad number '" + std::string(tok) + "' (line " + std::to_string(line) + ")");
  }
  return v;
}

}  // namespace

Histogram parse_pgm(std::istream& in) {
  const std::string text = slurp(in);
  Cursor cur(text);
  if (text.size() < 2 || text[0] != 'P') throw Error(ErrorKind::UnsupportedFormat, "not a PGM file");
  const char kind = text[1];
  if (kind != '2' && kind != '5') {
    throw Error(ErrorKind::UnsupportedFormat, std::string("PGM variant P") + kind + " not supported");
  }
  cur.advance(2);
  const auto width = cur.integer("width");
  const auto height = cur.integer("height");
  const auto maxval = cur.integer("maxval");
  if (width < 1 || height < 1) cur.fail("image dimensions must be positive");
  if (maxval < 1 || maxval > 65535) cur.fail("maxval must be in [1, 65535]");

  const GridShape shape{height, width};
  Histogram::Vector mass(static_cast<Eigen::Index>(shape.size()));
  if (kind == '2') {
    for (Eigen::Index i = 0; i < mass.size(); ++i) {
      const auto v = cur.integer("pixel");
      if (v < 0 || v > maxval) cur.fail("pixel value outside [0, maxval]");
      mass[i] = static_cast<double>(v);
    }
  } else {
    // exactly one whitespace byte separates the header from the raster
    if (cur.remaining() == 0 || !std::isspace(static_cast<unsigned char>(*cur.data()))) {
      cur.fail("missing separator before raster");
    }
    cur.advance(1);
    const std::size_t bytes = maxval > 255 ? 2 : 1;
    const auto need = static_cast<std::size_t>(shape.size()) * bytes;
    if (cur.remaining() < need) {
      cur.fail("truncated raster: need " + std::to_string(need) + " bytes, have " + std::to_string(cur.remaining()));
    }
    const auto* p = reinterpret_cast<const unsigned char*>(cur.data());
    for (Eigen::Index i = 0; i < mass.size(); ++i) {
      unsigned v = bytes == 2 ? (unsigned{p[2 * i]} << 8) | p[2 * i + 1] : p[i];
      if (v > static_cast<unsigned>(maxval)) cur.fail("pixel value outside [0, maxval]");
      mass[i] = static_cast<double>(v);
    }
  }
  return Histogram(shape, std::move(mass));
}

Histogram load_pgm(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_pgm(in);
}

Histogram parse_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Index> dims;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (s.empty()) continue;
    constexpr std::string_view key = "# shape:";
    if (!s.starts_with(key)) {
      throw Error(ErrorKind::ParseError, "expected '# shape: N1,...,Nd' header (line " + std::to_string(lineno) + ")");
    }
    s.remove_prefix(key.size());
    std::stringstream ss{std::string(s)};
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const double v = parse_real(tok, lineno);
      if (v < 1 || v != static_cast<double>(static_cast<Index>(v))) {
        throw Error(ErrorKind::ParseError, "axis size must be a positive integer (line " + std::to_string(lineno) + ")");
      }
      dims.push_back(static_cast<Index>(v));
    }
    break;
  }
  if (dims.empty()) throw Error(ErrorKind::ParseError, "missing shape header");
  const GridShape shape(dims);

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(shape.size()));
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    values.push_back(parse_real(s, lineno));
  }
  if (static_cast<Index>(values.size()) != shape.size()) {
    throw Error(ErrorKind::ParseError, "shape declares " + std::to_string(shape.size()) + " values, file has " +
                                           std::to_string(values.size()));
  }
  return from_dense(shape, values);
}

Histogram load_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_csv(in);
}

void write_csv(std::ostream& out, const Histogram& h) {
  out << "# shape: ";
  for (int a = 0; a < h.shape().rank(); ++a) out << (a ? "," : "") << h.shape().dim(a);
  out << '\n';
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < h.mass().size(); ++i) out << h.mass()[i] << '\n';
  out.precision(old);
}

Histogram load_histogram(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" ? load_pgm(path) : load_csv(path);
}

Eigen::MatrixXd parse_points(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    std::vector<double> row;
    std::stringstream ss{std::string(s)};
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_real(tok, lineno));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::ParseError, "inconsistent dimension (line " + std::to_string(lineno) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "point file has no points");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      pts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return pts;
}

Eigen::MatrixXd load_points(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_points(in);
}

}  // namespace mpot

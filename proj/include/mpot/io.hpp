#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>

#include "mpot/histogram.hpp"

namespace mpot {

/// Reads a P2 (ASCII) or P5 (binary) graymap as a 2-D histogram of shape
/// (height, width). Samples wider than one byte are big-endian.
Histogram load_pgm(const std::filesystem::path& path);
Histogram parse_pgm(std::istream& in);

/// Histogram CSV: a `# shape: N1,...,Nd` header then one value per line,
/// row-major.
Histogram load_csv(const std::filesystem::path& path);
Histogram parse_csv(std::istream& in);
void write_csv(std::ostream& out, const Histogram& h);

/// Dispatches on extension: `.pgm` goes to load_pgm, everything else to load_csv.
Histogram load_histogram(const std::filesystem::path& path);

/// Point cloud CSV: one point per line, comma separated, optional `#` header.
Eigen::MatrixXd load_points(const std::filesystem::path& path);
Eigen::MatrixXd parse_points(std::istream& in);

}  // namespace mpot

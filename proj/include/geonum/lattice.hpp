#ifndef GEONUM_LATTICE_HPP
#define GEONUM_LATTICE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/integer.hpp"
#include "geonum/random.hpp"

namespace geonum {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Threshold on |det| of the basis after dividing it by its largest column norm.
inline constexpr double kSingularTolerance = 1e-12;

/// A full-rank lattice given by d basis columns. The basis is kept exactly as
/// supplied; no reduction happens on construction.
class Lattice {
 public:
  static Lattice from_columns(Matrix basis) {
    if (basis.rows() != basis.cols()) {
      fail(ErrorKind::DimensionMismatch, "basis must be square, got " + std::to_string(basis.rows()) + "x" +
                                             std::to_string(basis.cols()));
    }
    if (basis.cols() < 2) fail(ErrorKind::DimensionTooSmall, "lattice dimension must be at least 2");
    if (!basis.allFinite()) fail(ErrorKind::InvalidArgument, "basis entries must be finite");
    double scale = 0.0;
    for (Eigen::Index j = 0; j < basis.cols(); ++j) scale = std::max(scale, basis.col(j).norm());
    if (scale == 0.0) fail(ErrorKind::SingularBasis, "zero basis");
    const Matrix scaled = basis / scale;
    if (std::abs(scaled.determinant()) <= kSingularTolerance) {
      fail(ErrorKind::SingularBasis, "basis columns are (numerically) linearly dependent");
    }
    const double det = std::abs(basis.determinant());
    return Lattice(std::move(basis), det);
  }

  int dim() const noexcept { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const noexcept { return basis_; }
  double det() const noexcept { return det_; }

  Vector point(std::span<const Int> coeffs) const {
    Vector x = Vector::Zero(basis_.rows());
    for (int j = 0; j < dim(); ++j) x += static_cast<double>(coeffs[j]) * basis_.col(j);
    return x;
  }

 private:
  Lattice(Matrix basis, double det) : basis_(std::move(basis)), det_(det) {}

  Matrix basis_;
  double det_;
};

/// A lattice vector together with its integer coordinates in the basis.
struct LatticePoint {
  Vector coords;
  std::vector<Int> coeffs;

  bool is_origin() const noexcept {
    for (Int c : coeffs) {
      if (c != 0) return false;
    }
    return true;
  }
};

inline Lattice make_lattice(const Matrix& columns) { return Lattice::from_columns(columns); }

inline LatticePoint make_point(const Lattice& lattice, std::vector<Int> coeffs) {
  if (static_cast<int>(coeffs.size()) != lattice.dim()) {
    fail(ErrorKind::DimensionMismatch, "coefficient vector length differs from lattice dimension");
  }
  Vector coords = lattice.point(coeffs);
  return LatticePoint{std::move(coords), std::move(coeffs)};
}

/// True iff p is nonzero and its basis coefficients are coprime. Throws
/// NotLatticePoint when coords and coeffs disagree beyond 1e-9 relative.
inline bool is_primitive(const Lattice& lattice, const LatticePoint& p) {
  if (static_cast<int>(p.coeffs.size()) != lattice.dim() || p.coords.size() != lattice.dim()) {
    fail(ErrorKind::DimensionMismatch, "point dimension differs from lattice dimension");
  }
  const Vector expected = lattice.point(p.coeffs);
  const double scale = std::max(1.0, std::max(expected.norm(), p.coords.norm()));
  if ((expected - p.coords).norm() > 1e-9 * scale) {
    fail(ErrorKind::NotLatticePoint, "coordinates do not match basis * coeffs");
  }
  return coefficient_gcd(p.coeffs) == 1;
}

/// Adds independent uniform offsets in [-magnitude, magnitude] to every basis
/// entry. Deterministic in seed; magnitude 0 returns the basis untouched.
inline Lattice perturb_basis(const Lattice& lattice, double magnitude, std::uint64_t seed) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    fail(ErrorKind::InvalidArgument, "perturbation magnitude must be a finite nonnegative number");
  }
  if (magnitude == 0.0) return lattice;
  Rng rng(seed);
  Matrix basis = lattice.basis();
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    for (Eigen::Index i = 0; i < basis.rows(); ++i) basis(i, j) += rng.uniform(-magnitude, magnitude);
  }
  return Lattice::from_columns(std::move(basis));
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token, std::string_view context) {
  token = trim(token);
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  std::string buffer(token);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(buffer, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, "expected a number in " + std::string(context) + ", got '" + buffer + "'");
  }
  if (used != buffer.size()) {
    fail(ErrorKind::ParseError, "trailing characters in " + std::string(context) + ": '" + buffer + "'");
  }
  return value;
}

}  // namespace detail

/// Parses "1,0;0.5,0.866": columns separated by ';', entries by ','.
inline Matrix parse_basis(std::string_view spec) {
  const auto columns = detail::split(spec, ';');
  const auto d = static_cast<Eigen::Index>(columns.size());
  Matrix basis(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto entries = detail::split(columns[j], ',');
    if (static_cast<Eigen::Index>(entries.size()) != d) {
      fail(ErrorKind::ParseError, "basis '" + std::string(spec) + "' is not square: column " + std::to_string(j) +
                                      " has " + std::to_string(entries.size()) + " entries, expected " +
                                      std::to_string(d));
    }
    for (Eigen::Index i = 0; i < d; ++i) basis(i, j) = detail::parse_real(entries[i], "basis");
  }
  return basis;
}

inline Lattice parse_lattice(std::string_view spec) { return Lattice::from_columns(parse_basis(spec)); }

/// Inverse of parse_basis with round-trip precision.
inline std::string format_basis(const Matrix& basis) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    if (j > 0) out << ';';
    for (Eigen::Index i = 0; i < basis.rows(); ++i) {
      if (i > 0) out << ',';
      out << basis(i, j);
    }
  }
  return out.str();
}

}  // namespace geonum

#endif  // GEONUM_LATTICE_HPP

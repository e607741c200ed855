#include "spectratile/int_matrix.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "spectratile/errors.hpp"

namespace spectratile {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : IntMatrix(rows, cols, std::vector<Integer>(rows * cols)) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0)
    throw InputError("matrix must have at least one row and one column");
  if (entries_.size() != rows_ * cols_)
    throw InputError("matrix entry count does not match rows x cols");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0)
    throw InputError("matrix must have at least one row and one column");
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix literal");
    for (long v : r) entries_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::zero(std::size_t rows, std::size_t cols) { return IntMatrix(rows, cols); }

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::reduced(const Integer& modulus) const {
  IntMatrix out(*this);
  for (auto& e : out.entries_) e = mod_floor(e, modulus);
  return out;
}

Integer mod_floor(const Integer& value, const Integer& modulus) {
  if (sgn(modulus) <= 0) throw InputError("modulus must be positive");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

std::string format_matrix(const IntMatrix& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << m(r, c).get_str();
    }
    os << '\n';
  }
  return os;
}

namespace {

Integer parse_integer(const std::string& token) {
  Integer v;
  if (token.empty() || v.set_str(token, 10) != 0)
    throw InputError("not a decimal integer: '" + token + "'");
  return v;
}

} // namespace

IntMatrix parse_matrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw InputError("matrix header must be 'rows cols'");
  if (rows <= 0 || cols <= 0) throw InputError("matrix dimensions must be positive");
  std::vector<Integer> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  std::string token;
  for (long long i = 0; i < rows * cols; ++i) {
    if (!(in >> token)) throw InputError("matrix has fewer entries than declared");
    entries.push_back(parse_integer(token));
  }
  return IntMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                   std::move(entries));
}

IntMatrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  IntMatrix m = parse_matrix(in);
  std::string extra;
  if (in >> extra) throw InputError("trailing data after matrix: '" + extra + "'");
  return m;
}

} // namespace spectratile

#include "mammoscope/wavelet.hpp"

#include <cmath>
#include <string>

#include "mammoscope/error.hpp"

namespace mammoscope {

std::string_view to_string(FilterId id) noexcept {
  return id == FilterId::haar ? "haar" : "daub4";
}

FilterId parse_filter_id(std::string_view name) {
  if (name == "haar") return FilterId::haar;
  if (name == "daub4") return FilterId::daub4;
  throw Error(Errc::InvalidArgument, "unknown wavelet filter '" + std::string(name) + "'");
}

std::string_view to_string(Band b) noexcept {
  switch (b) {
    case Band::LL: return "LL";
    case Band::HL: return "HL";
    case Band::LH: return "LH";
    case Band::HH: return "HH";
  }
  return "?";
}

WaveletFilter make_filter(FilterId id) {
  WaveletFilter f;
  f.id = id;
  if (id == FilterId::haar) {
    const double r = 1.0 / std::sqrt(2.0);
    f.lowpass = {r, r};
  } else {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    f.lowpass = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
  }
  const std::size_t n = f.lowpass.size();
  f.highpass.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.highpass[k] = (k % 2 ? -1.0 : 1.0) * f.lowpass[n - 1 - k];
  return f;
}

std::vector<Subband> WaveletDecomposition::subbands() const {
  std::vector<Subband> out;
  out.reserve(3 * details.size() + 1);
  for (std::size_t i = 0; i < details.size(); ++i) {
    out.push_back({Band::HL, i + 1, details[i].hl});
    out.push_back({Band::LH, i + 1, details[i].lh});
    out.push_back({Band::HH, i + 1, details[i].hh});
  }
  out.push_back({Band::LL, details.size(), ll});
  return out;
}

std::pair<std::vector<double>, std::vector<double>> dwt1d(std::span<const double> signal, const WaveletFilter& f) {
  const std::size_t n = signal.size();
  if (n % 2) throw Error(Errc::OddLength, "signal length " + std::to_string(n) + " is odd");
  if (n < f.length()) {
    throw Error(Errc::SignalTooShort,
                "signal length " + std::to_string(n) + " shorter than filter length " + std::to_string(f.length()));
  }
  const std::size_t half = n / 2;
  std::vector<double> approx(half, 0.0);
  std::vector<double> detail(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double a = 0.0;
    double d = 0.0;
    for (std::size_t j = 0; j < f.length(); ++j) {
      const double s = signal[(2 * k + j) % n];
      a += f.lowpass[j] * s;
      d += f.highpass[j] * s;
    }
    approx[k] = a;
    detail[k] = d;
  }
  return {std::move(approx), std::move(detail)};
}

std::vector<double> idwt1d(std::span<const double> approx, std::span<const double> detail, const WaveletFilter& f) {
  if (approx.size() != detail.size()) {
    throw Error(Errc::DimensionMismatch, "approx and detail lengths differ (" + std::to_string(approx.size()) +
                                             " vs " + std::to_string(detail.size()) + ")");
  }
  const std::size_t n = 2 * approx.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  for (std::size_t k = 0; k < approx.size(); ++k) {
    for (std::size_t j = 0; j < f.length(); ++j) {
      out[(2 * k + j) % n] += f.lowpass[j] * approx[k] + f.highpass[j] * detail[k];
    }
  }
  return out;
}

namespace {

// Filters every row, writing low halves to `lo` and high halves to `hi`.
void analyze_rows(const Matrix& m, const WaveletFilter& f, Matrix& lo, Matrix& hi) {
  lo = Matrix(m.rows, m.cols / 2);
  hi = Matrix(m.rows, m.cols / 2);
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto [a, d] = dwt1d(m.row(r), f);
    std::copy(a.begin(), a.end(), lo.row(r).begin());
    std::copy(d.begin(), d.end(), hi.row(r).begin());
  }
}

void analyze_cols(const Matrix& m, const WaveletFilter& f, Matrix& lo, Matrix& hi) {
  Matrix tlo, thi;
  analyze_rows(transpose(m), f, tlo, thi);
  lo = transpose(tlo);
  hi = transpose(thi);
}

Matrix synthesize_rows(const Matrix& lo, const Matrix& hi, const WaveletFilter& f) {
  Matrix out(lo.rows, lo.cols * 2);
  for (std::size_t r = 0; r < lo.rows; ++r) {
    auto s = idwt1d(lo.row(r), hi.row(r), f);
    std::copy(s.begin(), s.end(), out.row(r).begin());
  }
  return out;
}

Matrix synthesize_cols(const Matrix& lo, const Matrix& hi, const WaveletFilter& f) {
  return transpose(synthesize_rows(transpose(lo), transpose(hi), f));
}

bool same_shape(const Matrix& a, const Matrix& b) { return a.rows == b.rows && a.cols == b.cols; }

Matrix crop(const Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.rows == rows && m.cols == cols) return m;
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(r, c);
  return out;
}

}  // namespace

QuadBands dwt2d_level(const Matrix& m, const WaveletFilter& f) {
  if (m.rows % 2 || m.cols % 2) {
    throw Error(Errc::OddLength, "matrix " + std::to_string(m.rows) + "x" + std::to_string(m.cols) + " has an odd side");
  }
  Matrix x_low, x_high;
  analyze_rows(m, f, x_low, x_high);
  QuadBands q;
  analyze_cols(x_low, f, q.ll, q.lh);
  analyze_cols(x_high, f, q.hl, q.hh);
  return q;
}

Matrix idwt2d_level(const QuadBands& q, const WaveletFilter& f) {
  if (!same_shape(q.ll, q.hl) || !same_shape(q.ll, q.lh) || !same_shape(q.ll, q.hh)) {
    throw Error(Errc::DimensionMismatch, "subbands of one level must share a shape");
  }
  Matrix x_low = synthesize_cols(q.ll, q.lh, f);
  Matrix x_high = synthesize_cols(q.hl, q.hh, f);
  return synthesize_rows(x_low, x_high, f);
}

std::pair<Matrix, std::pair<std::size_t, std::size_t>> pad_even(const Matrix& m) {
  const std::size_t rows = m.rows + m.rows % 2;
  const std::size_t cols = m.cols + m.cols % 2;
  if (rows == m.rows && cols == m.cols) return {m, {m.rows, m.cols}};
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = std::min(r, m.rows - 1);
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = m(sr, std::min(c, m.cols - 1));
  }
  return {std::move(out), {m.rows, m.cols}};
}

WaveletDecomposition dwt2d(const Matrix& m, const WaveletFilter& f, std::size_t levels) {
  if (levels == 0) throw Error(Errc::TooManyLevels, "at least one level is required");
  if (m.empty()) throw Error(Errc::TooManyLevels, "empty input");
  WaveletDecomposition d;
  d.filter = f.id;
  Matrix current = m;
  for (std::size_t level = 1; level <= levels; ++level) {
    if (current.rows < f.length() || current.cols < f.length()) {
      throw Error(Errc::TooManyLevels, "level " + std::to_string(level) + " input is " + std::to_string(current.rows) +
                                           "x" + std::to_string(current.cols) + ", filter needs " +
                                           std::to_string(f.length()));
    }
    auto [padded, dims] = pad_even(current);
    QuadBands q = dwt2d_level(padded, f);
    d.details.push_back({dims.first, dims.second, std::move(q.hl), std::move(q.lh), std::move(q.hh)});
    current = std::move(q.ll);
  }
  d.ll = std::move(current);
  return d;
}

Matrix idwt2d(const WaveletDecomposition& d) {
  if (d.details.empty()) throw Error(Errc::MalformedDecomposition, "no levels");
  const WaveletFilter f = make_filter(d.filter);
  Matrix current = d.ll;
  for (std::size_t i = d.details.size(); i-- > 0;) {
    const DetailLevel& lvl = d.details[i];
    const std::size_t half_rows = (lvl.input_rows + 1) / 2;
    const std::size_t half_cols = (lvl.input_cols + 1) / 2;
    const bool ok = current.rows == half_rows && current.cols == half_cols && same_shape(current, lvl.hl) &&
                    same_shape(current, lvl.lh) && same_shape(current, lvl.hh);
    if (!ok) {
      throw Error(Errc::MalformedDecomposition, "level " + std::to_string(i + 1) + " subband shapes are inconsistent");
    }
    Matrix full = idwt2d_level({current, lvl.hl, lvl.lh, lvl.hh}, f);
    current = crop(full, lvl.input_rows, lvl.input_cols);
  }
  return current;
}

}  // namespace mammoscope

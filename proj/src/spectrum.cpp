#include "niep/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "niep/errors.hpp"
#include "niep/linalg.hpp"

namespace niep {

double default_pair_tolerance(const ComplexList& raw) {
  double magnitude = 1.0;
  for (const auto& z : raw) magnitude = std::max(magnitude, std::abs(z));
  return 1e-10 * magnitude;
}

SpectrumSpec canonicalize_spectrum(const ComplexList& raw) {
  return canonicalize_spectrum(raw, default_pair_tolerance(raw));
}

SpectrumSpec canonicalize_spectrum(const ComplexList& raw, double pair_tol) {
  if (raw.empty()) throw InvalidInput("spectrum must contain at least one value");
  if (!(pair_tol >= 0.0)) throw InvalidInput("pair tolerance must be nonnegative");
  for (const auto& z : raw)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidInput("spectrum contains a non-finite value");

  std::vector<double> reals;
  ComplexList upper, lower;
  for (const auto& z : raw) {
    if (std::abs(z.imag()) <= pair_tol)
      reals.push_back(z.real());
    else if (z.imag() > 0.0)
      upper.push_back(z);
    else
      lower.push_back(z);
  }
  if (upper.size() != lower.size())
    throw UnpairedComplexValue("spectrum is not closed under conjugation: " +
                               std::to_string(upper.size()) + " values above the real axis, " +
                               std::to_string(lower.size()) + " below");

  ComplexList mirrored;
  mirrored.reserve(lower.size());
  for (const auto& z : lower) mirrored.push_back(std::conj(z));
  const auto match = linalg::match_multisets(upper, mirrored);

  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    const Complex& z = upper[i];
    const Complex& w = lower[static_cast<std::size_t>(match.to[i])];
    if (std::abs(z - std::conj(w)) > pair_tol) {
      std::ostringstream msg;
      msg << "no conjugate partner within " << pair_tol << " for " << z.real() << (z.imag() < 0 ? "" : "+")
          << z.imag() << "i";
      throw UnpairedComplexValue(msg.str());
    }
    pairs.emplace_back(0.5 * (z.real() + w.real()), 0.5 * (z.imag() - w.imag()));
  }
  std::sort(pairs.begin(), pairs.end());
  std::sort(reals.begin(), reals.end());

  SpectrumSpec spec;
  spec.n = static_cast<int>(raw.size());
  spec.pairs = static_cast<int>(pairs.size());
  for (const auto& [a, b] : pairs) {
    spec.values.emplace_back(a, b);
    spec.values.emplace_back(a, -b);
  }
  for (double r : reals) spec.values.emplace_back(r, 0.0);
  return spec;
}

LambdaStructure build_lambda(const SpectrumSpec& spec) {
  LambdaStructure out;
  const int n = spec.n;
  out.n = n;
  out.lambda = Matrix::Zero(n, n);
  for (int i = 0; i < spec.pairs; ++i) {
    const Complex& z = spec.values[static_cast<std::size_t>(2 * i)];
    const int k = 2 * i;
    out.lambda(k, k) = z.real();
    out.lambda(k, k + 1) = z.imag();
    out.lambda(k + 1, k) = -z.imag();
    out.lambda(k + 1, k + 1) = z.real();
  }
  for (int k = 2 * spec.pairs; k < n; ++k) out.lambda(k, k) = spec.values[static_cast<std::size_t>(k)].real();

  out.w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i >= j || out.lambda(i, j) != 0.0) {
        out.fixed.emplace_back(i, j);
      } else {
        out.free.emplace_back(i, j);
        out.w(i, j) = 1.0;
      }
    }
  }
  const long nn = static_cast<long>(n);
  out.dim_manifold = nn * nn + nn * (nn - 1) / 2 + static_cast<long>(out.free.size());
  return out;
}

PrescribedEntries make_prescribed(std::vector<IndexPair> entries, const Matrix& c_a) {
  const auto n = c_a.rows();
  if (c_a.cols() != n) throw InvalidInput("C_a must be square");
  if (!c_a.allFinite()) throw InvalidInput("C_a has non-finite entries");
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());

  PrescribedEntries pe;
  pe.c_a = c_a;
  pe.u_hat = Matrix::Zero(n, n);
  for (const auto& [i, j] : entries) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidInput("prescribed index out of range");
    if (c_a(i, j) < 0.0) throw InvalidInput("prescribed entries must be nonnegative");
    pe.u_hat(i, j) = 1.0;
  }
  pe.entries = std::move(entries);
  pe.c_hat_a = pe.u_hat.cwiseProduct(c_a);
  return pe;
}

SpectrumSpec read_spectrum(std::istream& in) {
  ComplexList raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<double> nums;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw InvalidInput("spectrum line " + std::to_string(line_no) + ": cannot parse '" + token + "'");
      }
    }
    if (nums.empty()) continue;
    if (nums.size() > 2)
      throw InvalidInput("spectrum line " + std::to_string(line_no) + ": expected 'a' or 'a b'");
    raw.emplace_back(nums[0], nums.size() == 2 ? nums[1] : 0.0);
  }
  return canonicalize_spectrum(raw);
}

SpectrumSpec read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open spectrum file " + path);
  return read_spectrum(in);
}

void write_spectrum(std::ostream& out, const SpectrumSpec& spec) {
  out << "# n = " << spec.n << ", conjugate pairs = " << spec.pairs << "\n";
  out << std::setprecision(17);
  for (const auto& z : spec.values) {
    out << z.real();
    if (z.imag() != 0.0) out << ' ' << z.imag();
    out << '\n';
  }
}

void write_spectrum_file(const std::string& path, const SpectrumSpec& spec) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write spectrum file " + path);
  write_spectrum(out, spec);
}

}  // namespace niep

// SPDX-License-Identifier: Apache-2.0
#include "qucc/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qucc {

namespace {

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::runtime_error("FCIDUMP parse error at line " +
                           std::to_string(line_no) + ": " + what);
}

// pulls "KEY= 12," style integers out of the header text
bool header_int(const std::string& header, const std::string& key, int& out) {
  auto pos = header.find(key);
  while (pos != std::string::npos) {
    // must be a whole token (avoid NELEC matching ELEC etc.)
    if (pos == 0 || !std::isalpha(static_cast<unsigned char>(header[pos - 1]))) {
      auto eq = header.find('=', pos);
      if (eq == std::string::npos) return false;
      out = std::stoi(header.substr(eq + 1));
      return true;
    }
    pos = header.find(key, pos + 1);
  }
  return false;
}

}  // namespace

IntegralSet::IntegralSet(int n_spatial, int n_electrons, int ms2,
                         double core_energy)
    : n_spatial_(n_spatial),
      n_electrons_(n_electrons),
      ms2_(ms2),
      core_energy_(core_energy),
      one_body_(Matrix::Zero(n_spatial, n_spatial)) {
  if (n_spatial < 1 || 2 * n_spatial > 64)
    throw std::invalid_argument("orbital count must be in [1, 32]");
  const std::size_t K = static_cast<std::size_t>(n_spatial) * (n_spatial + 1) / 2;
  two_body_.assign(K * (K + 1) / 2, 0.0);
}

void IntegralSet::set_one_body(int p, int q, double v) {
  one_body_(p, q) = v;
  one_body_(q, p) = v;
}

void IntegralSet::set_two_body(int p, int q, int r, int s, double v) {
  two_body_[two_body_index(p, q, r, s)] = v;
}

double IntegralSet::one_body_spin(int p, int q) const {
  if (is_alpha(p, n_spatial_) != is_alpha(q, n_spatial_)) return 0.0;
  return one_body_(spatial_of(p, n_spatial_), spatial_of(q, n_spatial_));
}

double IntegralSet::antisymmetrized(int p, int q, int r, int s) const {
  const int M = n_spatial_;
  // physicists' <pq|rs> = spatial (p r|q s) with spin deltas
  auto phys = [&](int a, int b, int c, int d) {
    if (is_alpha(a, M) != is_alpha(c, M) || is_alpha(b, M) != is_alpha(d, M))
      return 0.0;
    return two_body(spatial_of(a, M), spatial_of(c, M), spatial_of(b, M),
                    spatial_of(d, M));
  };
  return phys(p, q, r, s) - phys(p, q, s, r);
}

IntegralSet IntegralSet::parse_fcidump(std::istream& in) {
  std::string line;
  int line_no = 0;

  // header: everything up to &END or a bare '/'
  std::string header;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    header += " " + line;
    auto upper = line;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    if (upper.find("&END") != std::string::npos ||
        line.find('/') != std::string::npos)
      header_done = true;
  }
  if (!header_done) parse_fail(line_no, "missing &END / '/' header terminator");

  std::transform(header.begin(), header.end(), header.begin(), ::toupper);
  int norb = 0, nelec = 0, ms2 = 0;
  if (!header_int(header, "NORB", norb))
    parse_fail(line_no, "header missing NORB");
  if (!header_int(header, "NELEC", nelec))
    parse_fail(line_no, "header missing NELEC");
  header_int(header, "MS2", ms2);  // optional, defaults to 0

  IntegralSet ints(norb, nelec, ms2, 0.0);

  // duplicate detection by canonical index
  std::vector<char> seen1(static_cast<std::size_t>(norb) * norb, 0);
  const std::size_t K = static_cast<std::size_t>(norb) * (norb + 1) / 2;
  std::vector<char> seen2(K * (K + 1) / 2, 0);
  bool seen_core = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    double v;
    int p, q, r, s;
    if (!(ls >> v)) continue;  // blank line
    if (!(ls >> p >> q >> r >> s))
      parse_fail(line_no, "expected `value p q r s`");
    for (int idx : {p, q, r, s})
      if (idx < 0 || idx > norb)
        parse_fail(line_no, "orbital index " + std::to_string(idx) +
                                " out of range (NORB=" + std::to_string(norb) +
                                ")");
    auto check_dup = [&](double old_v, bool was_seen) {
      if (was_seen && std::abs(old_v - v) > 1e-12)
        parse_fail(line_no, "inconsistent duplicate entry");
    };
    if (p == 0 && q == 0 && r == 0 && s == 0) {
      check_dup(ints.core_energy_, seen_core);
      ints.core_energy_ = v;
      seen_core = true;
    } else if (r == 0 && s == 0) {
      if (p == 0 || q == 0) parse_fail(line_no, "one-body entry with index 0");
      const int a = std::max(p, q) - 1, b = std::min(p, q) - 1;
      check_dup(ints.one_body_(a, b), seen1[a * norb + b] != 0);
      if (!seen1[a * norb + b]) ++ints.one_body_stored_;
      seen1[a * norb + b] = 1;
      ints.set_one_body(a, b, v);
    } else {
      if (p == 0 || q == 0 || r == 0 || s == 0)
        parse_fail(line_no, "two-body entry with index 0");
      const std::size_t idx =
          IntegralSet::two_body_index(p - 1, q - 1, r - 1, s - 1);
      check_dup(ints.two_body_[idx], seen2[idx] != 0);
      if (!seen2[idx]) ++ints.two_body_stored_;
      seen2[idx] = 1;
      ints.set_two_body(p - 1, q - 1, r - 1, s - 1, v);
    }
  }
  return ints;
}

IntegralSet IntegralSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);
  return parse_fcidump(in);
}

std::string IntegralSet::serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "&FCI NORB=" << n_spatial_ << ",NELEC=" << n_electrons_
      << ",MS2=" << ms2_ << ",\n&END\n";
  const int M = n_spatial_;
  for (int p = 0; p < M; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= (r == p ? q : r); ++s) {
          const double v = two_body(p, q, r, s);
          if (v != 0.0)
            out << " " << v << " " << p + 1 << " " << q + 1 << " " << r + 1
                << " " << s + 1 << "\n";
        }
  for (int p = 0; p < M; ++p)
    for (int q = 0; q <= p; ++q)
      if (one_body_(p, q) != 0.0)
        out << " " << one_body_(p, q) << " " << p + 1 << " " << q + 1
            << " 0 0\n";
  out << " " << core_energy_ << " 0 0 0 0\n";
  return out.str();
}

Vector orbital_energies(const IntegralSet& ints, Determinant reference) {
  const int n_spin = ints.n_spin();
  const auto occ = reference.occupied_list(n_spin);
  Vector eps(n_spin);
  for (int p = 0; p < n_spin; ++p) {
    double e = ints.one_body_spin(p, p);
    for (int i : occ) e += ints.antisymmetrized(p, i, p, i);
    eps[p] = e;
  }
  return eps;
}

double hf_energy(const IntegralSet& ints, Determinant reference) {
  const auto occ = reference.occupied_list(ints.n_spin());
  double e = ints.core_energy();
  for (int i : occ) e += ints.one_body_spin(i, i);
  for (int i : occ)
    for (int j : occ) e += 0.5 * ints.antisymmetrized(i, j, i, j);
  return e;
}

}  // namespace qucc

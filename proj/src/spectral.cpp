#include "fraclab/spectral.hpp"

#include <fftw3.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fraclab {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void run_dft(const std::vector<int>& sizes, std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out, int sign) {
  fftw_plan plan;
  {
    // only plan creation and destruction are not thread safe
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(),
                         reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()), sign,
                         FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

SpectralField::SpectralField(std::vector<int> sizes, std::vector<double> lengths)
    : sizes_(std::move(sizes)), lengths_(std::move(lengths)) {
  if (sizes_.empty() || sizes_.size() > 3)
    throw std::invalid_argument("SpectralField: dimension must be 1, 2 or 3");
  for (int s : sizes_)
    if (!is_power_of_two(s) || s < 2)
      throw std::invalid_argument("SpectralField: grid sizes must be powers of two >= 2");
  if (lengths_.empty()) lengths_.assign(sizes_.size(), 2.0 * std::numbers::pi);
  if (lengths_.size() != sizes_.size())
    throw std::invalid_argument("SpectralField: one length per axis");
  for (double l : lengths_)
    if (!(l > 0.0)) throw std::invalid_argument("SpectralField: lengths must be positive");
  std::size_t total = 1;
  for (int s : sizes_) total *= static_cast<std::size_t>(s);
  values_.assign(total, 0.0);
  coeffs_.assign(total, {0.0, 0.0});
}

double SpectralField::volume() const noexcept {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

void SpectralField::set_values(std::vector<double> values) {
  if (values.size() != values_.size()) throw std::invalid_argument("set_values: size mismatch");
  values_ = std::move(values);
  forward();
}

void SpectralField::set_coeffs(std::vector<std::complex<double>> coeffs) {
  if (coeffs.size() != coeffs_.size()) throw std::invalid_argument("set_coeffs: size mismatch");
  coeffs_ = std::move(coeffs);
  backward();
}

void SpectralField::frequency(std::size_t flat, std::vector<int>& k) const {
  k.resize(sizes_.size());
  for (std::size_t a = sizes_.size(); a-- > 0;) {
    const int n = sizes_[a];
    const int i = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
    k[a] = i < n / 2 ? i : i - n;
  }
}

double SpectralField::wavenumber(std::size_t flat) const {
  std::vector<int> k;
  frequency(flat, k);
  double s = 0.0;
  for (std::size_t a = 0; a < k.size(); ++a) {
    const double xi = 2.0 * std::numbers::pi * k[a] / lengths_[a];
    s += xi * xi;
  }
  return std::sqrt(s);
}

std::size_t SpectralField::conjugate_index(std::size_t flat) const {
  std::vector<int> k;
  frequency(flat, k);
  std::size_t out = 0;
  for (std::size_t a = 0; a < k.size(); ++a) {
    const int n = sizes_[a];
    out = out * static_cast<std::size_t>(n) + static_cast<std::size_t>(((-k[a]) % n + n) % n);
  }
  return out;
}

void SpectralField::position(std::size_t flat, std::vector<double>& x) const {
  x.resize(sizes_.size());
  for (std::size_t a = sizes_.size(); a-- > 0;) {
    const int n = sizes_[a];
    const auto i = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
    x[a] = lengths_[a] * i / n;
  }
}

double SpectralField::hermitian_defect() const {
  double d = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    d = std::max(d, std::abs(coeffs_[i] - std::conj(coeffs_[conjugate_index(i)])));
  return d;
}

double SpectralField::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool SpectralField::same_grid(const SpectralField& other) const {
  return sizes_ == other.sizes_ && lengths_ == other.lengths_;
}

void SpectralField::forward() {
  std::vector<std::complex<double>> in(values_.begin(), values_.end());
  std::vector<std::complex<double>> out(in.size());
  run_dft(sizes_, in, out, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(values_.size());
  // Symmetrize so that c_{-k} == conj(c_k) holds bit for bit.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = conjugate_index(i);
    if (j < i) continue;
    const std::complex<double> a = out[i] * scale, b = out[j] * scale;
    const std::complex<double> s = 0.5 * (a + std::conj(b));
    coeffs_[i] = s;
    coeffs_[j] = std::conj(s);
  }
}

void SpectralField::backward() {
  std::vector<std::complex<double>> in = coeffs_;
  std::vector<std::complex<double>> out(in.size());
  run_dft(sizes_, in, out, FFTW_BACKWARD);
  for (std::size_t i = 0; i < out.size(); ++i) values_[i] = out[i].real();
}

ModeTable distinct_modes(const SpectralField& f) {
  const std::size_t n = f.total();
  std::vector<std::pair<double, std::size_t>> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = {f.wavenumber(i), i};
  std::sort(lam.begin(), lam.end());
  ModeTable t;
  t.mode_slot.assign(n, 0);
  for (const auto& [l, i] : lam) {
    if (t.lambdas.empty() || l - t.lambdas.back() > 1e-12 * std::max(1.0, l)) t.lambdas.push_back(l);
    t.mode_slot[i] = t.lambdas.size() - 1;
  }
  return t;
}

std::vector<double> map_modes(const std::vector<double>& lambdas,
                              const std::function<double(double)>& fn, Execution exec) {
  std::vector<double> out(lambdas.size());
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = fn(lambdas[i]);
    return out;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto count = static_cast<long>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = fn(lambdas[i]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

SpectralField apply_radial_symbol(const SpectralField& f, const std::function<double(double)>& symbol,
                                  Execution exec, double zero_mode_value) {
  const ModeTable table = distinct_modes(f);
  std::vector<double> values = map_modes(table.lambdas, [&](double l) {
    return l == 0.0 ? zero_mode_value : symbol(l);
  }, exec);
  std::vector<std::complex<double>> c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= values[table.mode_slot[i]];
  SpectralField out = f;
  out.set_coeffs(std::move(c));
  return out;
}

SpectralField fractional_multiplier_apply(const SpectralField& f, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("fractional_multiplier_apply: need gamma > 0");
  return apply_radial_symbol(
      f, [gamma](double l) { return std::pow(l, 2.0 * gamma); }, Execution::Serial);
}

double pairing(const SpectralField& f, const SpectralField& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("pairing: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < f.total(); ++i)
    s += (f.coeffs()[i] * std::conj(g.coeffs()[i])).real();
  return s * f.volume();
}

double pairing_direct(const SpectralField& f, const SpectralField& g) {
  if (!f.same_grid(g)) throw std::invalid_argument("pairing_direct: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < f.total(); ++i) s += f.values()[i] * g.values()[i];
  return s * f.volume() / static_cast<double>(f.total());
}

double dirichlet_energy(const SpectralField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.total(); ++i) {
    const double l = f.wavenumber(i);
    s += l * l * std::norm(f.coeffs()[i]);
  }
  return s * f.volume();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_record(std::istream& is, bool& ok) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false, any = false;
  ok = false;
  int ch;
  while ((ch = is.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          cur += '"';
          is.get();
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get();
      break;
    } else if (c == '\n') {
      break;
    } else {
      cur += c;
    }
  }
  if (!any) return fields;
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  fields.push_back(std::move(cur));
  ok = true;
  return fields;
}

void write_csv(std::ostream& os, const SpectralField& f) {
  for (int a = 0; a < f.dim(); ++a) os << "i" << a << ",";
  os << "value\r\n";
  std::vector<int> idx(f.dim());
  char buf[64];
  for (std::size_t flat = 0; flat < f.total(); ++flat) {
    std::size_t rest = flat;
    for (int a = f.dim(); a-- > 0;) {
      idx[a] = static_cast<int>(rest % static_cast<std::size_t>(f.sizes()[a]));
      rest /= static_cast<std::size_t>(f.sizes()[a]);
    }
    for (int a = 0; a < f.dim(); ++a) os << idx[a] << ",";
    std::snprintf(buf, sizeof buf, "%.17g", f.values()[flat]);
    os << csv_escape(buf) << "\r\n";
  }
}

SpectralField read_csv(std::istream& is, std::vector<double> lengths) {
  bool ok = false;
  const auto header = parse_csv_record(is, ok);
  if (!ok || header.size() < 2 || header.size() > 4 || header.back() != "value")
    throw std::runtime_error("csv: expected header i0,[i1,[i2,]]value");
  const std::size_t dim = header.size() - 1;
  for (std::size_t a = 0; a < dim; ++a)
    if (header[a] != "i" + std::to_string(a)) throw std::runtime_error("csv: bad index column name");
  std::map<std::vector<int>, double> entries;
  std::vector<int> max_idx(dim, -1);
  std::size_t line = 1;
  while (true) {
    auto rec = parse_csv_record(is, ok);
    if (!ok) break;
    ++line;
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() != dim + 1) throw std::runtime_error("csv: wrong field count on line " + std::to_string(line));
    std::vector<int> idx(dim);
    try {
      for (std::size_t a = 0; a < dim; ++a) {
        std::size_t used = 0;
        idx[a] = std::stoi(rec[a], &used);
        if (used != rec[a].size() || idx[a] < 0) throw std::invalid_argument("index");
        max_idx[a] = std::max(max_idx[a], idx[a]);
      }
      std::size_t used = 0;
      const double v = std::stod(rec[dim], &used);
      if (used != rec[dim].size()) throw std::invalid_argument("value");
      entries[idx] = v;
    } catch (const std::exception&) {
      throw std::runtime_error("csv: unparsable field on line " + std::to_string(line));
    }
  }
  std::vector<int> sizes(dim);
  for (std::size_t a = 0; a < dim; ++a) sizes[a] = max_idx[a] + 1;
  SpectralField f(sizes, std::move(lengths));
  if (entries.size() != f.total()) throw std::runtime_error("csv: grid is incomplete");
  std::vector<double> values(f.total());
  std::size_t flat = 0;
  for (const auto& [idx, v] : entries) values[flat++] = v;  // std::map orders row-major
  f.set_values(std::move(values));
  return f;
}

}  // namespace fraclab

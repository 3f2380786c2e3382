#pragma once

#include <complex>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace fraclab {

enum class Execution { Serial, Parallel };

/// Real samples on a periodic box [0, L_0) x ... together with their Fourier coefficients,
/// normalized so that f(x) = sum_k c_k exp(i xi_k . x), xi_k = 2 pi k / L.
/// Storage is row-major: the last axis varies fastest.
class SpectralField {
public:
  SpectralField() = default;
  /// Zero field; sizes must be powers of two, n = sizes.size() in {1, 2, 3}.
  SpectralField(std::vector<int> sizes, std::vector<double> lengths = {});

  template <class F>
  static SpectralField from_function(std::vector<int> sizes, F&& f, std::vector<double> lengths = {}) {
    SpectralField field(std::move(sizes), std::move(lengths));
    std::vector<double> x(field.dim());
    for (std::size_t flat = 0; flat < field.total(); ++flat) {
      field.position(flat, x);
      field.values_[flat] = f(x);
    }
    field.forward();
    return field;
  }

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(sizes_.size()); }
  [[nodiscard]] const std::vector<int>& sizes() const noexcept { return sizes_; }
  [[nodiscard]] const std::vector<double>& lengths() const noexcept { return lengths_; }
  [[nodiscard]] std::size_t total() const noexcept { return values_.size(); }
  [[nodiscard]] double volume() const noexcept;

  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] const std::vector<std::complex<double>>& coeffs() const noexcept { return coeffs_; }

  /// Replace samples and recompute coefficients.
  void set_values(std::vector<double> values);
  /// Replace coefficients (must be Hermitian) and recompute samples.
  void set_coeffs(std::vector<std::complex<double>> coeffs);

  /// Signed integer frequency of `flat` along each axis, in [-N/2, N/2).
  void frequency(std::size_t flat, std::vector<int>& k) const;
  /// |xi| for the mode at `flat`.
  [[nodiscard]] double wavenumber(std::size_t flat) const;
  /// Flat index of the mode -k.
  [[nodiscard]] std::size_t conjugate_index(std::size_t flat) const;
  void position(std::size_t flat, std::vector<double>& x) const;

  /// max_k |c_k - conj(c_{-k})|; zero when the field is exactly real.
  [[nodiscard]] double hermitian_defect() const;
  [[nodiscard]] double sup_norm() const;
  [[nodiscard]] bool same_grid(const SpectralField& other) const;

private:
  void forward();
  void backward();

  std::vector<int> sizes_;
  std::vector<double> lengths_;
  std::vector<double> values_;
  std::vector<std::complex<double>> coeffs_;
};

/// Values of a radial multiplier at each distinct |xi| of the grid, evaluated once per
/// distinct value (the expensive per-mode solves are keyed by |xi|).
struct ModeTable {
  std::vector<double> lambdas;         // distinct |xi|, ascending
  std::vector<std::size_t> mode_slot;  // for each flat index, its slot in `lambdas`
};

ModeTable distinct_modes(const SpectralField& f);

/// Evaluates fn on every entry of `lambdas`. The parallel variant distributes entries over
/// OpenMP threads; each entry is computed independently, so both variants return identical
/// bits.
std::vector<double> map_modes(const std::vector<double>& lambdas,
                              const std::function<double(double)>& fn, Execution exec);

/// c_k -> symbol(|xi_k|) c_k, with the zero mode sent to zero_mode_value * c_0.
SpectralField apply_radial_symbol(const SpectralField& f, const std::function<double(double)>& symbol,
                                  Execution exec = Execution::Parallel, double zero_mode_value = 0.0);

/// The oracle: c_k -> |xi_k|^{2 gamma} c_k, zero mode to 0.
SpectralField fractional_multiplier_apply(const SpectralField& f, double gamma);

/// Boundary integral of f g via Parseval (volume * sum c_f conj(c_g)).
double pairing(const SpectralField& f, const SpectralField& g);
/// Same integral by the rectangle rule on the samples (exact for trigonometric polynomials).
double pairing_direct(const SpectralField& f, const SpectralField& g);

/// int |grad f|^2 = volume * sum |xi|^2 |c|^2.
double dirichlet_energy(const SpectralField& f);

/// CSV with columns i0, i1, ..., value (RFC 4180 quoting where needed).
void write_csv(std::ostream& os, const SpectralField& f);
/// Reads the format above; sizes are inferred from the largest index on each axis.
SpectralField read_csv(std::istream& is, std::vector<double> lengths = {});

/// Parses one RFC 4180 record (handles quoted fields, doubled quotes, embedded separators).
std::vector<std::string> parse_csv_record(std::istream& is, bool& ok);
/// Quotes the field if it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

}  // namespace fraclab

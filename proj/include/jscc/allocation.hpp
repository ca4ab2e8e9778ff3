#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jscc {

enum class Scheme { UpperBound, SingleLayer, LS, HLS, BS };

// Short names used on the command line and in CSV: ub, single, ls, hls, bs.
std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

// Number of source layers; Infinite selects the closed-form limits.
class LayerCount {
 public:
  static LayerCount finite(int n) { return LayerCount(n); }
  static LayerCount infinite() { return LayerCount(-1); }
  // "inf" or a nonnegative integer.
  static std::optional<LayerCount> parse(std::string_view text);

  bool is_infinite() const { return n_ < 0; }
  // Only meaningful when finite.
  int count() const { return n_; }
  std::string to_string() const;

  bool operator==(const LayerCount&) const = default;

 private:
  explicit LayerCount(int n) : n_(n) {}
  int n_;
};

// Per-layer operating point of a layered scheme, in high-SNR units.
struct LayerAllocation {
  Scheme scheme = Scheme::LS;
  // Multiplexing gains r_1..r_n (rate = r * log2 SNR).
  std::vector<double> gains;
  // LS/HLS: fraction of the digital channel uses given to each layer.
  std::vector<double> time_shares;
  // BS: SNR exponent of the cumulative power of layers k..n, before the
  // epsilon_{k-1} slack is applied: 1 - L(r_1 + ... + r_{k-1}).
  std::vector<double> power_exponents;
  // HLS: fraction 1/(b m_min) of channel uses carrying the analog error.
  double analog_share = 0.0;
  // BS: the layers run on the (m_t-k) x (m_r-k) subsystem (k > 0 only in
  // the low-bandwidth bands of the single-block construction).
  int antenna_reduction = 0;

  int layers() const { return int(gains.size()); }
};

}  // namespace jscc

#include "ebcc/base_codec.hpp"

#include <cmath>

#include "ebcc/errors.hpp"

namespace ebcc {

std::size_t base_budget(std::size_t chunk_bytes, double ratio) noexcept
{
  const double b = std::floor(double(chunk_bytes) / ratio);
  if (!(b > double(kSpihtHeaderSize))) return kSpihtHeaderSize;
  return static_cast<std::size_t>(b);
}

double fraction_within(std::span<const float> a, std::span<const float> b, double epsilon)
{
  if (a.size() != b.size()) throw ArgumentError("fraction_within: shape mismatch");
  if (a.empty()) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ok += std::abs(double(b[i]) - double(a[i])) <= epsilon;
  return double(ok) / double(a.size());
}

namespace {

class EmbeddedBaseSession final : public BaseSession {
 public:
  EmbeddedBaseSession(const Field2D& normalized, double epsilon, unsigned planes)
      : input_(normalized), epsilon_(epsilon), chunk_bytes_(float_bytes(normalized))
  {
    const auto pyr = forward_dwt(normalized);
    full_ = spiht_encode(pyr, std::max(chunk_bytes_, kSpihtHeaderSize), planes);
  }

  std::size_t encoded_size(double ratio) const override
  {
    return std::min(base_budget(chunk_bytes_, ratio), full_.size());
  }

  BaseEncoding encode(double ratio) override
  {
    if (!(ratio >= 1.0)) throw ArgumentError("base_encode: ratio must be >= 1");
    const std::size_t len = encoded_size(ratio);
    BaseEncoding e;
    const auto prefix = full_.prefix(len);
    e.bytes.assign(prefix.begin(), prefix.end());
    e.achieved_ratio = double(chunk_bytes_) / double(len);
    auto it = q_by_length_.find(len);
    if (it == q_by_length_.end()) {
      const auto decoded = inverse_dwt(spiht_decode(e.bytes));
      it = q_by_length_.emplace(len, fraction_within(input_.span(), decoded.span(), epsilon_)).first;
    }
    e.q_achieved = it->second;
    return e;
  }

  double epsilon() const noexcept override { return epsilon_; }

 private:
  const Field2D& input_;
  double epsilon_;
  std::size_t chunk_bytes_;
  EmbeddedStream full_;
  std::map<std::size_t, double> q_by_length_;
};

}  // namespace

std::unique_ptr<BaseSession> WaveletBaseCodec::open(const Field2D& normalized, double epsilon) const
{
  if (normalized.size() == 0) throw ArgumentError("base codec: empty chunk");
  return std::make_unique<EmbeddedBaseSession>(normalized, epsilon, bit_planes_);
}

Field2D WaveletBaseCodec::decode(std::span<const std::uint8_t> bytes) const
{
  return inverse_dwt(spiht_decode(bytes));
}

const BaseCodec& default_base_codec()
{
  static const WaveletBaseCodec codec;
  return codec;
}

BaseEncoding base_encode(const Field2D& normalized, double ratio, double epsilon)
{
  if (!(ratio >= 1.0)) throw ArgumentError("base_encode: ratio must be >= 1");
  return default_base_codec().open(normalized, epsilon)->encode(ratio);
}

Field2D base_decode(std::span<const std::uint8_t> bytes) { return default_base_codec().decode(bytes); }

}  // namespace ebcc

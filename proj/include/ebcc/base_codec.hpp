#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ebcc/field.hpp"
#include "ebcc/spiht.hpp"

namespace ebcc {

struct BaseEncoding {
  std::vector<std::uint8_t> bytes;
  double achieved_ratio = 0.0;  // uncompressed float bytes / bytes.size()
  double q_achieved = 0.0;      // fraction of points with |decoded - input| <= epsilon
};

inline std::size_t float_bytes(const Field2D& f) noexcept { return f.size() * sizeof(float); }

// max(header, floor(chunk_bytes / ratio)).
std::size_t base_budget(std::size_t chunk_bytes, double ratio) noexcept;

// Rate-parameterized encoder bound to one normalized chunk and one epsilon.
class BaseSession {
 public:
  virtual ~BaseSession() = default;
  // Throws ArgumentError if ratio < 1.
  virtual BaseEncoding encode(double ratio) = 0;
  // Byte length encode(ratio) would produce; used to detect converged searches.
  virtual std::size_t encoded_size(double ratio) const = 0;
  virtual double epsilon() const noexcept = 0;
};

class BaseCodec {
 public:
  virtual ~BaseCodec() = default;
  // `normalized` must outlive the session.
  virtual std::unique_ptr<BaseSession> open(const Field2D& normalized, double epsilon) const = 0;
  virtual Field2D decode(std::span<const std::uint8_t> bytes) const = 0;
};

// CDF 9/7 + SPIHT truncated to the byte budget. The stream for a chunk is
// produced once at the ratio-1 budget; every other ratio is a prefix of it.
class WaveletBaseCodec final : public BaseCodec {
 public:
  explicit WaveletBaseCodec(unsigned bit_planes = kDefaultBitPlanes) : bit_planes_(bit_planes) {}
  std::unique_ptr<BaseSession> open(const Field2D& normalized, double epsilon) const override;
  Field2D decode(std::span<const std::uint8_t> bytes) const override;

 private:
  unsigned bit_planes_;
};

const BaseCodec& default_base_codec();

// Convenience wrappers over default_base_codec().
BaseEncoding base_encode(const Field2D& normalized, double ratio, double epsilon);
Field2D base_decode(std::span<const std::uint8_t> bytes);

// Fraction of points with |b - a| <= epsilon.
double fraction_within(std::span<const float> a, std::span<const float> b, double epsilon);

}  // namespace ebcc

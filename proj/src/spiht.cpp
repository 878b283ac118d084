#include "ebcc/spiht.hpp"

#include <algorithm>
#include <cmath>

#include "ebcc/byte_io.hpp"
#include "ebcc/errors.hpp"

namespace ebcc {
namespace {

// Lowest plane the decoder will visit below n_max; far beyond float precision.
constexpr int kMaxDecodePlanes = 64;

struct StreamExhausted {};

class BitWriter {
 public:
  BitWriter(std::vector<std::uint8_t>& out, std::size_t max_bytes) : out_(out)
  {
    const std::size_t room = max_bytes > out.size() ? max_bytes - out.size() : 0;
    capacity_ = room > kUnlimitedBytes / 8 ? kUnlimitedBytes : room * 8;
  }

  bool operator()(bool bit)
  {
    if (written_ == capacity_) throw StreamExhausted{};
    if (written_ % 8 == 0) out_.push_back(0);
    if (bit) out_.back() |= static_cast<std::uint8_t>(0x80u >> (written_ % 8));
    ++written_;
    return bit;
  }

 private:
  std::vector<std::uint8_t>& out_;
  std::size_t capacity_ = 0;
  std::size_t written_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  bool operator()(bool /*ignored*/)
  {
    if (pos_ == bits_.size() * 8) throw StreamExhausted{};
    const bool b = (bits_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return b;
  }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

enum class SetType : std::uint8_t { A, B };

struct LisEntry {
  std::uint32_t index;
  SetType type;
};

// Sorting and refinement passes shared by encoder and decoder. In encoder mode
// the significance and refinement bits come from the magnitudes; in decoder
// mode `io` ignores its argument and returns the next stream bit. `recon` holds
// the lower end of each coefficient's known magnitude interval with its sign,
// so every emitted bit moves a coefficient closer to its true value.
template <bool Encode, typename Io>
class PassRunner {
 public:
  PassRunner(const SubbandGeometry& g, Io& io, std::span<const float> coeffs)
      : g_(g), io_(io), coeffs_(coeffs), recon_(g.size(), 0.0), negative_(g.size(), 0)
  {
    if constexpr (Encode) compute_set_maxima();
    const std::size_t top = g.levels();
    for (std::size_t r = 0; r < g.rows(top); ++r)
      for (std::size_t c = 0; c < g.cols(top); ++c) {
        const auto idx = static_cast<std::uint32_t>(r * g.cols() + c);
        lip_.push_back(idx);
        if (g.has_offspring(r, c)) lis_.push_back({idx, SetType::A});
      }
  }

  void run(int n_max, int planes)
  {
    try {
      for (int p = 0; p < planes; ++p) {
        const int n = n_max - p;
        threshold_ = std::ldexp(1.0, n);
        const std::size_t refine_count = lsp_.size();
        sorting_pass();
        refinement_pass(n, refine_count);
      }
    } catch (const StreamExhausted&) {
    }
  }

  std::vector<float> values() const
  {
    std::vector<float> out(recon_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<float>(negative_[i] ? -recon_[i] : recon_[i]);
    return out;
  }

 private:
  bool coefficient_significant(std::uint32_t i)
  {
    if constexpr (Encode) return io_(std::abs(coeffs_[i]) >= threshold_);
    else return io_(false);
  }

  bool descendants_significant(std::uint32_t i)
  {
    if constexpr (Encode) return io_(desc_max_[i] >= threshold_);
    else return io_(false);
  }

  bool grand_descendants_significant(std::uint32_t i)
  {
    if constexpr (Encode) return io_(grand_max_[i] >= threshold_);
    else return io_(false);
  }

  void mark_significant(std::uint32_t i)
  {
    bool neg = false;
    if constexpr (Encode) neg = io_(coeffs_[i] < 0.0f);
    else neg = io_(false);
    negative_[i] = neg;
    recon_[i] = threshold_;
    lsp_.push_back(i);
  }

  SubbandGeometry::Offspring offspring(std::uint32_t i) const
  {
    return g_.offspring(i / g_.cols(), i % g_.cols());
  }

  bool has_grandchildren(const SubbandGeometry::Offspring& o) const
  {
    for (unsigned k = 0; k < o.count; ++k) {
      if (g_.has_offspring(o.index[k] / g_.cols(), o.index[k] % g_.cols())) return true;
    }
    return false;
  }

  void sorting_pass()
  {
    std::size_t keep = 0;
    for (std::size_t k = 0; k < lip_.size(); ++k) {
      const auto i = lip_[k];
      if (coefficient_significant(i))
        mark_significant(i);
      else
        lip_[keep++] = i;
    }
    lip_.resize(keep);

    // Entries appended during the pass are visited in the same pass.
    std::vector<LisEntry> next;
    for (std::size_t k = 0; k < lis_.size(); ++k) {
      const LisEntry e = lis_[k];
      const auto kids = offspring(e.index);
      if (e.type == SetType::A) {
        if (!descendants_significant(e.index)) {
          next.push_back(e);
          continue;
        }
        for (unsigned j = 0; j < kids.count; ++j) {
          const auto child = kids.index[j];
          if (coefficient_significant(child))
            mark_significant(child);
          else
            lip_.push_back(child);
        }
        if (has_grandchildren(kids)) lis_.push_back({e.index, SetType::B});
      } else {
        if (!grand_descendants_significant(e.index)) {
          next.push_back(e);
          continue;
        }
        for (unsigned j = 0; j < kids.count; ++j) {
          const auto child = kids.index[j];
          if (g_.has_offspring(child / g_.cols(), child % g_.cols()))
            lis_.push_back({child, SetType::A});
        }
      }
    }
    lis_.swap(next);
  }

  void refinement_pass(int n, std::size_t count)
  {
    for (std::size_t k = 0; k < count; ++k) {
      const auto i = lsp_[k];
      bool bit = false;
      if constexpr (Encode) {
        const double scaled = std::floor(std::ldexp(double(std::abs(coeffs_[i])), -n));
        bit = io_(std::fmod(scaled, 2.0) >= 1.0);
      } else {
        bit = io_(false);
      }
      if (bit) recon_[i] += threshold_;
    }
  }

  void compute_set_maxima()
  {
    desc_max_.assign(g_.size(), 0.0f);
    grand_max_.assign(g_.size(), 0.0f);
    auto visit = [&](std::size_t r, std::size_t c) {
      const auto idx = r * g_.cols() + c;
      const auto kids = g_.offspring(r, c);
      float d = 0.0f, gd = 0.0f;
      for (unsigned j = 0; j < kids.count; ++j) {
        const auto ch = kids.index[j];
        d = std::max({d, std::abs(coeffs_[ch]), desc_max_[ch]});
        gd = std::max(gd, desc_max_[ch]);
      }
      desc_max_[idx] = d;
      grand_max_[idx] = gd;
    };
    // Children live one level finer, so walk from level 2 up to the roots.
    const unsigned top = g_.levels();
    for (unsigned l = 2; l <= top; ++l) {
      for (std::size_t r = 0; r < g_.rows(l - 1); ++r)
        for (std::size_t c = 0; c < g_.cols(l - 1); ++c) {
          if (r < g_.rows(l) && c < g_.cols(l)) continue;
          visit(r, c);
        }
    }
    if (top >= 1) {
      for (std::size_t r = 0; r < g_.rows(top); ++r)
        for (std::size_t c = 0; c < g_.cols(top); ++c) visit(r, c);
    }
  }

  const SubbandGeometry& g_;
  Io& io_;
  std::span<const float> coeffs_;
  std::vector<double> recon_;
  std::vector<std::uint8_t> negative_;
  std::vector<float> desc_max_;
  std::vector<float> grand_max_;
  std::vector<std::uint32_t> lip_;
  std::vector<std::uint32_t> lsp_;
  std::vector<LisEntry> lis_;
  double threshold_ = 1.0;
};

void write_header(std::vector<std::uint8_t>& out, const SpihtHeader& h)
{
  out.push_back('S');
  out.push_back('P');
  put_le(out, static_cast<std::int8_t>(h.n_max));
  put_le(out, static_cast<std::uint8_t>(h.levels));
  put_le(out, h.rows);
  put_le(out, h.cols);
}

}  // namespace

SpihtHeader parse_spiht_header(std::span<const std::uint8_t> stream)
{
  ByteReader in(stream);
  const auto m0 = in.get<std::uint8_t>("SPIHT header");
  const auto m1 = in.get<std::uint8_t>("SPIHT header");
  if (m0 != 'S' || m1 != 'P') throw FormatError("bad SPIHT magic", 0);
  SpihtHeader h;
  h.n_max = in.get<std::int8_t>("SPIHT header");
  h.levels = in.get<std::uint8_t>("SPIHT header");
  h.rows = in.get<std::uint32_t>("SPIHT header");
  h.cols = in.get<std::uint32_t>("SPIHT header");
  if (h.rows == 0 || h.cols == 0 || std::uint64_t(h.rows) * h.cols > (std::uint64_t(1) << 31))
    throw FormatError("bad SPIHT dimensions", 4);
  if (h.levels > SubbandGeometry::max_levels(h.rows, h.cols))
    throw FormatError("bad SPIHT level count", 3);
  return h;
}

EmbeddedStream spiht_encode(const WaveletPyramid& pyramid, std::size_t max_bytes, unsigned max_planes,
                            std::vector<float>* quantized)
{
  const auto& g = pyramid.geometry;
  const auto coeffs = pyramid.coeffs.span();
  if (coeffs.size() != g.size()) throw ArgumentError("spiht_encode: pyramid shape mismatch");

  float peak = 0.0f;
  for (float v : coeffs) peak = std::max(peak, std::abs(v));
  SpihtHeader h;
  h.levels = g.levels();
  h.rows = static_cast<std::uint32_t>(g.rows());
  h.cols = static_cast<std::uint32_t>(g.cols());
  int exponent = 0;
  std::frexp(peak, &exponent);
  // frexp gives peak in [2^(e-1), 2^e); tiny peaks are coded as all zero.
  if (peak > 0.0f && exponent - 1 > kSpihtZeroSentinel) h.n_max = exponent - 1;

  EmbeddedStream out;
  write_header(out.bytes, h);
  if (h.all_zero() || max_planes == 0) {
    if (quantized) quantized->assign(coeffs.size(), 0.0f);
    return out;
  }
  BitWriter writer(out.bytes, std::max(max_bytes, kSpihtHeaderSize));
  PassRunner<true, BitWriter> runner(g, writer, coeffs);
  runner.run(h.n_max, static_cast<int>(max_planes));
  if (quantized) *quantized = runner.values();
  return out;
}

WaveletPyramid spiht_decode(std::span<const std::uint8_t> stream, std::size_t prefix_len)
{
  prefix_len = std::min(prefix_len, stream.size());
  if (prefix_len < kSpihtHeaderSize) throw FormatError("SPIHT prefix shorter than header", prefix_len);
  const auto h = parse_spiht_header(stream);
  WaveletPyramid p{Field2D(h.rows, h.cols), SubbandGeometry(h.rows, h.cols, h.levels)};
  if (h.all_zero()) return p;
  BitReader reader(stream.subspan(kSpihtHeaderSize, prefix_len - kSpihtHeaderSize));
  PassRunner<false, BitReader> runner(p.geometry, reader, {});
  runner.run(h.n_max, kMaxDecodePlanes);
  p.coeffs.values = runner.values();
  return p;
}

WaveletPyramid spiht_decode(std::span<const std::uint8_t> stream)
{
  return spiht_decode(stream, stream.size());
}

}  // namespace ebcc

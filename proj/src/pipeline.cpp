#include "ebcc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "ebcc/byte_io.hpp"
#include "ebcc/dwt.hpp"

namespace ebcc {

void EbccParams::validate() const
{
  if (!(epsilon_rel > 0.0) || !std::isfinite(epsilon_rel)) throw ArgumentError("epsilon_rel must be > 0");
  if (!(q > 0.0 && q <= 1.0)) throw ArgumentError("q must lie in (0, 1]");
  if (!(r0 >= 1.0) || !std::isfinite(r0)) throw ArgumentError("r0 must be >= 1");
  if (!(search_tol > 0.0)) throw ArgumentError("search_tol must be > 0");
  if (base_planes == 0 || residual_planes == 0 || deep_residual_planes == 0)
    throw ArgumentError("bit plane counts must be positive");
}

const char* to_string(ChunkMode m) noexcept
{
  switch (m) {
    case ChunkMode::Constant: return "constant";
    case ChunkMode::PureBase: return "pure-base";
    case ChunkMode::TwoLayer: return "two-layer";
    case ChunkMode::Raw: return "raw";
  }
  return "unknown";
}

RatioSearch search_base_ratio(BaseSession& session, double q, double r0, double tol)
{
  RatioSearch out;
  auto eval = [&](double r) {
    ++out.evaluations;
    return session.encode(r);
  };

  BaseEncoding e = eval(r0);
  const double q0 = e.q_achieved;
  double r_low = r0;
  double r_high = r0;

  // Initial ratio too high: halve until q is met or ratio 1 is reached.
  double qa = q0;
  while (qa < q) {
    if (r_low <= 1.0) {
      out.encoding = std::move(e);
      out.ratio = 1.0;
      out.q_unreachable = true;
      return out;
    }
    r_low = std::max(1.0, r_low / 2.0);
    e = eval(r_low);
    qa = e.q_achieved;
  }
  BaseEncoding feasible = std::move(e);

  // Initial ratio too low: double until q is no longer met. Feasible doublings
  // raise the lower bracket too, since the bisection needs r_high infeasible.
  qa = q0;
  while (qa >= q) {
    if (session.encoded_size(r_high) <= kSpihtHeaderSize) {
      out.encoding = session.encode(r_high);
      out.ratio = r_high;
      return out;
    }
    if (r_high > r_low) {
      r_low = r_high;
      feasible = std::move(e);
    }
    r_high *= 2.0;
    e = eval(r_high);
    qa = e.q_achieved;
  }

  // Bisect; encodings only change with the byte budget, so adjacent budgets
  // mean the boundary is resolved.
  while (r_high - r_low > tol && session.encoded_size(r_low) > session.encoded_size(r_high) + 1) {
    const double r_mid = 0.5 * (r_low + r_high);
    e = eval(r_mid);
    if (e.q_achieved < q) {
      r_high = r_mid;
    } else {
      r_low = r_mid;
      feasible = std::move(e);
    }
  }
  out.encoding = std::move(feasible);
  out.ratio = r_low;
  return out;
}

RatioSearch search_base_ratio(const Chunk& normalized, const EbccParams& params)
{
  params.validate();
  if (!normalized.normalized || normalized.constant)
    throw ArgumentError("search_base_ratio: chunk must be normalized and non-constant");
  const WaveletBaseCodec codec(params.base_planes);
  auto session = codec.open(normalized.values, params.epsilon_rel);
  return search_base_ratio(*session, params.q, params.r0, params.search_tol);
}

Field2D combine_layers(const Field2D& base_field, std::span<const std::uint8_t> residual_prefix)
{
  const auto residual = inverse_dwt(spiht_decode(residual_prefix));
  if (!residual.same_shape(base_field)) throw FormatError("residual shape does not match base layer", 0);
  Field2D out(base_field.rows, base_field.cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = base_field.values[i] + residual.values[i];
  return out;
}

std::size_t search_truncation(const EmbeddedStream& residual, const Field2D& base_field, const ErrorBound& bound)
{
  const std::size_t len = residual.size() - kSpihtHeaderSize;
  auto feasible = [&](std::size_t t) {
    const auto rec = combine_layers(base_field, residual.prefix(kSpihtHeaderSize + t));
    return bound.satisfied_by_normalized(rec.span());
  };
  if (feasible(0)) return 0;
  if (!feasible(len)) throw ResidualInsufficient("full residual stream does not meet the error bound");
  std::size_t t_low = 0;
  std::size_t t_high = len;
  while (t_high - t_low > 1) {
    const std::size_t t_mid = t_low + (t_high - t_low) / 2;
    if (feasible(t_mid))
      t_high = t_mid;
    else
      t_low = t_mid;
  }
  return t_high;
}

namespace {

struct TwoLayerCandidate {
  std::vector<std::uint8_t> base;
  std::vector<std::uint8_t> residual;
  double ratio = 0.0;
  std::size_t truncation = 0;
  bool deep = false;
};

std::optional<TwoLayerCandidate> two_layer_path(BaseSession& session, const BaseCodec& codec, const Field2D& input,
                                                const ErrorBound& bound, const EbccParams& p)
{
  auto search = search_base_ratio(session, p.q, p.r0, p.search_tol);
  const auto base_field = codec.decode(search.encoding.bytes);
  Field2D residue(input.rows, input.cols);
  for (std::size_t i = 0; i < residue.size(); ++i) residue.values[i] = input.values[i] - base_field.values[i];
  const auto pyramid = forward_dwt(residue);

  TwoLayerCandidate c;
  c.ratio = search.ratio;
  for (const unsigned planes : {p.residual_planes, p.deep_residual_planes}) {
    const auto stream = spiht_encode(pyramid, kUnlimitedBytes, planes);
    try {
      c.truncation = search_truncation(stream, base_field, bound);
    } catch (const ResidualInsufficient&) {
      c.deep = true;
      continue;
    }
    const auto prefix = stream.prefix(kSpihtHeaderSize + c.truncation);
    c.residual.assign(prefix.begin(), prefix.end());
    c.base = std::move(search.encoding.bytes);
    return c;
  }
  return std::nullopt;
}

struct PureBaseCandidate {
  std::vector<std::uint8_t> bytes;
  double ratio = 0.0;
};

std::optional<PureBaseCandidate> pure_base_path(BaseSession& session, const BaseCodec& codec,
                                                const ErrorBound& bound, const EbccParams& p)
{
  auto search = search_base_ratio(session, 1.0, p.r0, p.search_tol);
  double ratio = search.ratio;
  BaseEncoding enc = std::move(search.encoding);
  // q_achieved is measured in normalized space; confirm in original units and
  // back off the ratio if denormalization rounding breaks the bound.
  while (true) {
    if (bound.satisfied_by_normalized(codec.decode(enc.bytes).span())) return PureBaseCandidate{std::move(enc.bytes), ratio};
    if (ratio <= 1.0) return std::nullopt;
    ratio = std::max(1.0, ratio / 2.0);
    enc = session.encode(ratio);
  }
}

std::vector<std::uint8_t> raw_payload(const Field2D& original)
{
  std::vector<std::uint8_t> out;
  out.reserve(original.size() * sizeof(float));
  for (float v : original.values) put_le(out, v);
  return out;
}

}  // namespace

CompressionTrace compress_chunk_traced(const Chunk& chunk, const EbccParams& params)
{
  params.validate();
  CompressionTrace trace;
  auto& cc = trace.chunk;
  cc.rows = chunk.values.rows;
  cc.cols = chunk.values.cols;
  cc.epsilon_rel = static_cast<float>(params.epsilon_rel);
  cc.q = static_cast<float>(params.q);

  const Chunk norm = normalize(chunk);
  cc.vmin = norm.vmin;
  cc.vmax = norm.vmax;
  if (norm.constant) {
    cc.mode = ChunkMode::Constant;
    return trace;
  }

  const ErrorBound bound{chunk.values.span(), norm.vmin, norm.vmax, params.epsilon_rel};
  const WaveletBaseCodec codec(params.base_planes);
  auto session = codec.open(norm.values, params.epsilon_rel);

  auto pure = pure_base_path(*session, codec, bound, params);
  if (pure) {
    trace.pure_base_size = pure->bytes.size();
    trace.pure_base_ratio = pure->ratio;
  }
  std::optional<TwoLayerCandidate> two;
  if (params.q < 1.0) {
    two = two_layer_path(*session, codec, norm.values, bound, params);
    if (two) {
      trace.two_layer_size = two->base.size() + two->residual.size();
      trace.base_ratio = two->ratio;
      trace.truncation = two->truncation;
      trace.deep_residual = two->deep;
    }
  }

  const std::size_t raw_size = chunk.values.size() * sizeof(float);
  if (two && (!pure || *trace.two_layer_size < pure->bytes.size()) && *trace.two_layer_size < raw_size) {
    cc.mode = ChunkMode::TwoLayer;
    cc.base_len = static_cast<std::uint32_t>(two->base.size());
    cc.residual_len = static_cast<std::uint32_t>(two->residual.size());
    cc.payload = std::move(two->base);
    cc.payload.insert(cc.payload.end(), two->residual.begin(), two->residual.end());
  } else if (pure && pure->bytes.size() < raw_size) {
    cc.mode = ChunkMode::PureBase;
    cc.base_len = static_cast<std::uint32_t>(pure->bytes.size());
    cc.payload = std::move(pure->bytes);
  } else {
    cc.mode = ChunkMode::Raw;
    cc.payload = raw_payload(chunk.values);
    cc.base_len = static_cast<std::uint32_t>(cc.payload.size());
  }
  return trace;
}

CompressedChunk compress_chunk(const Chunk& chunk, const EbccParams& params)
{
  return compress_chunk_traced(chunk, params).chunk;
}

namespace {

void check_stream_shape(std::span<const std::uint8_t> stream, const CompressedChunk& cc, std::size_t offset)
{
  SpihtHeader h;
  try {
    h = parse_spiht_header(stream);
  } catch (const FormatError& e) {
    throw FormatError(std::string("bad layer header: ") + e.what(), offset + e.offset());
  }
  if (h.rows != cc.rows || h.cols != cc.cols) throw FormatError("layer shape does not match chunk", offset + 4);
}

}  // namespace

Field2D decompress_chunk(const CompressedChunk& cc)
{
  if (std::size_t(cc.base_len) + cc.residual_len != cc.payload.size())
    throw FormatError("payload length does not match layer lengths", cc.payload.size());
  if (!std::isfinite(cc.vmin) || !std::isfinite(cc.vmax) || cc.vmin > cc.vmax)
    throw FormatError("invalid chunk min/max", 0);
  const std::size_t n = cc.rows * cc.cols;
  switch (cc.mode) {
    case ChunkMode::Constant:
      if (!cc.payload.empty()) throw FormatError("constant chunk with payload", 0);
      return Field2D(cc.rows, cc.cols, cc.vmin);
    case ChunkMode::Raw: {
      if (cc.residual_len != 0 || cc.base_len != n * sizeof(float))
        throw FormatError("raw chunk length mismatch", 0);
      Field2D out(cc.rows, cc.cols);
      std::memcpy(out.values.data(), cc.payload.data(), cc.payload.size());
      return out;
    }
    case ChunkMode::PureBase: {
      if (cc.residual_len != 0) throw FormatError("pure-base chunk with residual", cc.base_len);
      check_stream_shape(cc.base(), cc, 0);
      return denormalize(base_decode(cc.base()), cc.vmin, cc.vmax);
    }
    case ChunkMode::TwoLayer: {
      check_stream_shape(cc.base(), cc, 0);
      check_stream_shape(cc.residual(), cc, cc.base_len);
      const auto base_field = base_decode(cc.base());
      return denormalize(combine_layers(base_field, cc.residual()), cc.vmin, cc.vmax);
    }
  }
  throw FormatError("unknown chunk mode", 0);
}

std::vector<CompressedChunk> compress_grid(const GridArray& grid, const EbccParams& params, unsigned threads)
{
  params.validate();
  const auto origins = grid.chunk_origins();
  std::vector<CompressedChunk> out(origins.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < origins.size();) {
      try {
        const auto& o = origins[i];
        out[i] = compress_chunk(flatten_chunk(grid, o, grid.chunk_extent(o)), params);
      } catch (const std::exception& e) {
        const auto& o = origins[i];
        const std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(ChunkError(
              std::string(e.what()) + " in chunk at (" + std::to_string(o[0]) + "," + std::to_string(o[1]) + "," +
                  std::to_string(o[2]) + "," + std::to_string(o[3]) + ")",
              o));
        }
        next = origins.size();
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(origins.size(), 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

GridArray decompress_grid(const Shape4& dims, const Shape4& chunk_shape, std::span<const CompressedChunk> chunks)
{
  GridArray grid(dims, chunk_shape, std::vector<float>(volume(dims), 0.0f));
  const auto origins = grid.chunk_origins();
  if (origins.size() != chunks.size()) throw FormatError("chunk count does not match grid tiling", 0);
  for (std::size_t i = 0; i < origins.size(); ++i) {
    const auto extent = grid.chunk_extent(origins[i]);
    if (chunks[i].rows != extent[0] * extent[1] * extent[2] || chunks[i].cols != extent[3])
      throw FormatError("chunk shape does not match grid tiling", i);
    unflatten_chunk(decompress_chunk(chunks[i]), origins[i], extent, grid);
  }
  return grid;
}

}  // namespace ebcc

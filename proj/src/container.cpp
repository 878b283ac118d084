#include "ebcc/container.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ebcc/byte_io.hpp"

namespace ebcc {
namespace {

std::size_t expected_chunks(const GridMetadata& m)
{
  if (volume(m.dims) == 0) return 0;
  std::size_t n = 1;
  for (std::size_t i = 0; i < 4; ++i) n *= (m.dims[i] + m.chunk_shape[i] - 1) / m.chunk_shape[i];
  return n;
}

}  // namespace

std::vector<std::uint8_t> serialize(const GridMetadata& meta, std::span<const CompressedChunk> chunks)
{
  if (chunks.size() != expected_chunks(meta)) throw ArgumentError("chunk count does not match grid tiling");
  std::vector<std::uint8_t> out;
  out.insert(out.end(), {'E', 'B', 'C', 'C'});
  put_le(out, kFormatVersion);
  for (auto d : meta.dims) put_le(out, static_cast<std::uint32_t>(d));
  for (auto c : meta.chunk_shape) put_le(out, static_cast<std::uint32_t>(c));
  put_le(out, static_cast<std::uint32_t>(chunks.size()));
  for (const auto& cc : chunks) {
    if (std::size_t(cc.base_len) + cc.residual_len != cc.payload.size())
      throw ArgumentError("chunk payload does not match its layer lengths");
    put_le(out, static_cast<std::uint8_t>(cc.mode));
    put_le(out, cc.epsilon_rel);
    put_le(out, cc.q);
    put_le(out, cc.vmin);
    put_le(out, cc.vmax);
    put_le(out, cc.base_len);
    put_le(out, cc.residual_len);
    out.insert(out.end(), cc.payload.begin(), cc.payload.end());
  }
  return out;
}

EbccFile deserialize(std::span<const std::uint8_t> bytes)
{
  ByteReader in(bytes);
  const auto magic = in.take(4, "file header");
  if (std::memcmp(magic.data(), "EBCC", 4) != 0) throw FormatError("bad magic", 0);
  const auto version_at = in.position();
  const auto version = in.get<std::uint16_t>("file header");
  if ((version >> 8) != kFormatMajor) throw UnsupportedVersion(version, version_at);

  EbccFile file;
  auto& m = file.metadata;
  for (auto& d : m.dims) d = in.get<std::uint32_t>("file header");
  const auto shape_at = in.position();
  for (auto& c : m.chunk_shape) {
    c = in.get<std::uint32_t>("file header");
    if (c == 0) throw FormatError("zero chunk extent", shape_at);
  }
  const auto count_at = in.position();
  const auto count = in.get<std::uint32_t>("file header");
  if (count != expected_chunks(m)) throw FormatError("chunk count does not match grid tiling", count_at);

  Shape4 o{0, 0, 0, 0};
  file.chunks.reserve(count);
  auto read_chunk = [&] {
    const auto record_at = in.position();
    CompressedChunk cc;
    const auto mode = in.get<std::uint8_t>("chunk record");
    if (mode > static_cast<std::uint8_t>(ChunkMode::Raw)) throw FormatError("bad chunk mode", record_at);
    cc.mode = static_cast<ChunkMode>(mode);
    cc.epsilon_rel = in.get<float>("chunk record");
    cc.q = in.get<float>("chunk record");
    cc.vmin = in.get<float>("chunk record");
    cc.vmax = in.get<float>("chunk record");
    cc.base_len = in.get<std::uint32_t>("chunk record");
    cc.residual_len = in.get<std::uint32_t>("chunk record");
    Shape4 e;
    for (std::size_t i = 0; i < 4; ++i) e[i] = std::min(m.chunk_shape[i], m.dims[i] - o[i]);
    cc.rows = e[0] * e[1] * e[2];
    cc.cols = e[3];
    const std::uint64_t len = std::uint64_t(cc.base_len) + cc.residual_len;
    if (len > in.remaining()) throw FormatError("truncated chunk payload", in.position() + in.remaining());
    const auto payload = in.take(static_cast<std::size_t>(len), "chunk payload");
    cc.payload.assign(payload.begin(), payload.end());
    const bool lengths_ok = [&] {
      switch (cc.mode) {
        case ChunkMode::Constant: return len == 0;
        case ChunkMode::PureBase: return cc.residual_len == 0 && cc.base_len >= kSpihtHeaderSize;
        case ChunkMode::TwoLayer: return cc.base_len >= kSpihtHeaderSize && cc.residual_len >= kSpihtHeaderSize;
        case ChunkMode::Raw: return cc.residual_len == 0 && cc.base_len == cc.rows * cc.cols * sizeof(float);
      }
      return false;
    }();
    if (!lengths_ok) throw FormatError("layer lengths inconsistent with chunk mode", record_at);
    if (!std::isfinite(cc.vmin) || !std::isfinite(cc.vmax) || cc.vmin > cc.vmax)
      throw FormatError("invalid chunk min/max", record_at + 9);
    file.chunks.push_back(std::move(cc));
  };
  if (count > 0) {
    for (o[0] = 0; o[0] < m.dims[0]; o[0] += m.chunk_shape[0])
      for (o[1] = 0; o[1] < m.dims[1]; o[1] += m.chunk_shape[1])
        for (o[2] = 0; o[2] < m.dims[2]; o[2] += m.chunk_shape[2])
          for (o[3] = 0; o[3] < m.dims[3]; o[3] += m.chunk_shape[3]) read_chunk();
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes after last chunk", in.position());
  return file;
}

std::size_t write_file(std::span<const CompressedChunk> chunks, const GridMetadata& meta, std::ostream& sink)
{
  const auto bytes = serialize(meta, chunks);
  sink.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!sink) throw IoError("failed to write compressed file");
  return bytes.size();
}

EbccFile read_file(std::istream& source)
{
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw IoError("failed to read compressed file");
  return deserialize(bytes);
}

void write_file(std::span<const CompressedChunk> chunks, const GridMetadata& meta, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_file(chunks, meta, out);
}

EbccFile read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_file(in);
}

std::vector<float> read_raw_floats(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() % sizeof(float) != 0)
    throw FormatError("raw file size is not a multiple of 4", bytes.size() - bytes.size() % sizeof(float));
  std::vector<float> out(bytes.size() / sizeof(float));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

void write_raw_floats(std::span<const float> values, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
  if (!out) throw IoError("failed to write " + path.string());
}

}  // namespace ebcc

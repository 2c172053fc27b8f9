#include "binofeat/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "binofeat/errors.hpp"

namespace binofeat {

namespace {

constexpr char kMagic[4] = {'B', 'N', 'F', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::istream& is, const std::string& path) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), 4))
    throw FormatError("checkpoint truncated: " + path);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const NamedTensors& tensors) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write checkpoint: " + path);
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(os, static_cast<std::uint32_t>(t.ndim()));
    for (int d = 0; d < t.ndim(); ++d) write_u32(os, static_cast<std::uint32_t>(t.dim(d)));
    os.write(reinterpret_cast<const char*>(t.data()),
             static_cast<std::streamsize>(t.numel() * sizeof(float)));
  }
  os.flush();
  if (!os) throw IoError("write failed: " + path);
}

NamedTensors load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a checkpoint file: " + path);
  const std::uint32_t version = read_u32(is, path);
  if (version != kVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version) +
                      ": " + path);
  const std::uint32_t count = read_u32(is, path);
  NamedTensors out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = read_u32(is, path);
    if (name_len > 4096) throw FormatError("corrupt tensor name length: " + path);
    std::string name(name_len, '\0');
    if (!is.read(name.data(), name_len)) throw FormatError("checkpoint truncated: " + path);
    const std::uint32_t ndim = read_u32(is, path);
    if (ndim == 0 || ndim > 8) throw FormatError("corrupt tensor rank: " + path);
    std::vector<int> dims(ndim);
    std::int64_t numel = 1;
    for (auto& d : dims) {
      const std::uint32_t v = read_u32(is, path);
      if (v == 0 || v > (1u << 28)) throw FormatError("corrupt tensor dim: " + path);
      d = static_cast<int>(v);
      numel *= d;
    }
    std::vector<float> data(static_cast<std::size_t>(numel));
    if (!is.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(data.size() * sizeof(float))))
      throw FormatError("checkpoint truncated: " + path);
    out.emplace_back(std::move(name), Tensor::from_data(dims, data));
  }
  return out;
}

void assign_tensors(const NamedTensors& loaded,
                    const std::vector<std::pair<std::string, Tensor*>>& dst) {
  for (const auto& [name, target] : dst) {
    const Tensor* found = nullptr;
    for (const auto& [n, t] : loaded)
      if (n == name) {
        found = &t;
        break;
      }
    if (!found) throw FormatError("checkpoint missing tensor: " + name);
    if (!found->same_shape(*target))
      throw ShapeError("checkpoint tensor " + name + " has shape " + found->shape_str() +
                       ", expected " + target->shape_str());
    std::memcpy(target->data(), found->data(),
                static_cast<std::size_t>(target->numel()) * sizeof(float));
  }
}

}  // namespace binofeat

#include "cloze/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

namespace cloze {

namespace {
constexpr char kMagic[5] = {'L', 'B', 'R', 'D', '1'};
}

void Checkpoint::add(const std::string& name, std::vector<size_t> shape,
                     std::vector<double> values) {
  if (Tensor<double>::numel(shape) != values.size())
    throw VerifyError("checkpoint entry '" + name + "': shape " +
                      shape_string(shape) + " does not match value count " +
                      std::to_string(values.size()));
  names.push_back(name);
  shapes.push_back(std::move(shape));
  data.push_back(std::move(values));
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  if (ckpt.precision != "f32" && ckpt.precision != "f64")
    throw VerifyError("checkpoint precision must be f32 or f64, got '" +
                      ckpt.precision + "'");
  nlohmann::ordered_json manifest;
  manifest["precision"] = ckpt.precision;
  manifest["meta"] = ckpt.meta.is_null() ? nlohmann::ordered_json::object()
                                         : ckpt.meta;
  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (size_t i = 0; i < ckpt.names.size(); ++i) {
    nlohmann::ordered_json e;
    e["name"] = ckpt.names[i];
    e["shape"] = ckpt.shapes[i];
    params.push_back(e);
  }
  manifest["params"] = params;
  const std::string mstr = manifest.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const uint64_t mlen = mstr.size();
  out.write(reinterpret_cast<const char*>(&mlen), sizeof(mlen));
  out.write(mstr.data(), static_cast<std::streamsize>(mstr.size()));
  for (const auto& values : ckpt.data) {
    if (ckpt.precision == "f64") {
      out.write(reinterpret_cast<const char*>(values.data()),
                static_cast<std::streamsize>(values.size() * sizeof(double)));
    } else {
      std::vector<float> f(values.begin(), values.end());
      out.write(reinterpret_cast<const char*>(f.data()),
                static_cast<std::streamsize>(f.size() * sizeof(float)));
    }
  }
  if (!out) throw DataError("checkpoint write failed: " + path);
}

namespace {

Checkpoint load_impl(const std::string& path, bool with_data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw VerifyError("not a checkpoint (bad magic): " + path);
  uint64_t mlen = 0;
  if (!in.read(reinterpret_cast<char*>(&mlen), sizeof(mlen)))
    throw VerifyError("checkpoint truncated at offset 5 (manifest length): " + path);
  std::string mstr(mlen, '\0');
  if (!in.read(mstr.data(), static_cast<std::streamsize>(mlen)))
    throw VerifyError("checkpoint truncated at offset 13 (manifest body): " + path);
  nlohmann::ordered_json manifest;
  try {
    manifest = nlohmann::ordered_json::parse(mstr);
  } catch (const std::exception& e) {
    throw VerifyError("checkpoint manifest is not valid JSON: " + path + ": " +
                      e.what());
  }
  Checkpoint ckpt;
  if (!manifest.contains("precision") || !manifest["precision"].is_string())
    throw VerifyError("checkpoint manifest missing precision: " + path);
  ckpt.precision = manifest["precision"].get<std::string>();
  if (ckpt.precision != "f32" && ckpt.precision != "f64")
    throw VerifyError("checkpoint has unknown precision '" + ckpt.precision +
                      "': " + path);
  ckpt.meta = manifest.value("meta", nlohmann::ordered_json::object());
  if (!manifest.contains("params") || !manifest["params"].is_array())
    throw VerifyError("checkpoint manifest missing params: " + path);
  for (const auto& e : manifest["params"]) {
    ckpt.names.push_back(e.at("name").get<std::string>());
    ckpt.shapes.push_back(e.at("shape").get<std::vector<size_t>>());
  }
  if (!with_data) return ckpt;

  const size_t width = ckpt.precision == "f64" ? 8 : 4;
  uint64_t offset = sizeof(kMagic) + sizeof(mlen) + mlen;
  for (size_t i = 0; i < ckpt.names.size(); ++i) {
    const size_t n = Tensor<double>::numel(ckpt.shapes[i]);
    std::vector<double> values(n);
    if (ckpt.precision == "f64") {
      if (!in.read(reinterpret_cast<char*>(values.data()),
                   static_cast<std::streamsize>(n * width)))
        throw VerifyError("checkpoint truncated at offset " +
                          std::to_string(offset + in.gcount()) +
                          " while reading '" + ckpt.names[i] + "': " + path);
    } else {
      std::vector<float> f(n);
      if (!in.read(reinterpret_cast<char*>(f.data()),
                   static_cast<std::streamsize>(n * width)))
        throw VerifyError("checkpoint truncated at offset " +
                          std::to_string(offset + in.gcount()) +
                          " while reading '" + ckpt.names[i] + "': " + path);
      for (size_t k = 0; k < n; ++k) values[k] = static_cast<double>(f[k]);
    }
    offset += n * width;
    ckpt.data.push_back(std::move(values));
  }
  char extra;
  if (in.read(&extra, 1))
    throw VerifyError("checkpoint has trailing bytes at offset " +
                      std::to_string(offset) + ": " + path);
  return ckpt;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) { return load_impl(path, true); }

Checkpoint load_checkpoint_manifest(const std::string& path) {
  return load_impl(path, false);
}

}  // namespace cloze

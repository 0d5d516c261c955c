#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cloze/error.hpp"
#include "cloze/tensor.hpp"

namespace cloze {

/// Checkpoint container: magic "LBRD1", a JSON manifest naming parameters,
/// shapes and precision, then row-major little-endian values in manifest
/// order. Values live as doubles in memory; the declared precision decides
/// the on-disk width (f32 round-trips exactly through double).
struct Checkpoint {
  std::string precision = "f32";  // "f32" | "f64"
  nlohmann::ordered_json meta;    // free-form: model config, vocab, invocation
  std::vector<std::string> names;
  std::vector<std::vector<size_t>> shapes;
  std::vector<std::vector<double>> data;

  int index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }

  void add(const std::string& name, std::vector<size_t> shape,
           std::vector<double> values);

  template <typename S>
  void add_tensor(const std::string& name, const Tensor<S>& t) {
    std::vector<double> values(t.size());
    for (size_t i = 0; i < t.size(); ++i) values[i] = static_cast<double>(t[i]);
    add(name, t.shape(), std::move(values));
  }

  /// Copies the named entry into `t`; the stored shape must match. Throws
  /// VerifyError on a missing name or shape mismatch.
  template <typename S>
  void read_tensor(const std::string& name, Tensor<S>& t) const {
    const int idx = index_of(name);
    if (idx < 0) throw VerifyError("checkpoint manifest missing '" + name + "'");
    if (shapes[idx] != t.shape())
      throw VerifyError("checkpoint shape mismatch for '" + name + "': stored " +
                        shape_string(shapes[idx]) + ", expected " +
                        shape_string(t.shape()));
    const auto& src = data[idx];
    for (size_t i = 0; i < src.size(); ++i) t[i] = static_cast<S>(src[i]);
  }
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

/// Reads only the manifest (precision + meta + entry list, no data).
Checkpoint load_checkpoint_manifest(const std::string& path);

inline const char* precision_name(bool is_double) { return is_double ? "f64" : "f32"; }

template <typename S>
constexpr const char* precision_of() {
  return sizeof(S) == 8 ? "f64" : "f32";
}

}  // namespace cloze

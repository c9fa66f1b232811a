// core/src/checkpoint.cpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "trajloc/neural/checkpoint.hpp"

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"

namespace trajloc {

namespace {

constexpr char kCkptMagic[4] = {'W', 'S', 'S', 'L'};
constexpr std::uint16_t kCkptVersion = 1;

void put_tensor(ByteWriter& w, const std::string& name,
                const Tensor<float>& t) {
  w.put_string(name);
  w.put_u8(static_cast<std::uint8_t>(t.rank()));
  for (std::int64_t d : t.shape) {
    w.put_u32(static_cast<std::uint32_t>(d));
  }
  for (float v : t.data) {
    w.put_f32(v);
  }
}

std::pair<std::string, Tensor<float>> get_tensor(ByteReader& r) {
  const std::string name = r.get_string();
  const std::uint8_t ndim = r.get_u8();
  if (ndim == 0 || ndim > 4) {
    throw FormatError("tensor '" + name + "' has unsupported rank " +
                          std::to_string(ndim),
                      r.offset() - 1);
  }
  std::vector<std::int64_t> dims(ndim);
  for (auto& d : dims) {
    d = r.get_u32();
  }
  Tensor<float> t(dims);
  for (float& v : t.data) {
    v = r.get_f32();
  }
  return {name, std::move(t)};
}

}  // namespace

void save_checkpoint(const ParamStore<float>& store, const std::string& path,
                     const OptimizerState* optimizer) {
  ByteWriter w;
  w.put_magic(kCkptMagic);
  w.put_u16(kCkptVersion);
  w.put_u32(static_cast<std::uint32_t>(store.size()));
  for (const std::string& name : store.names()) {
    put_tensor(w, name, store.entry(name).value);
  }
  // Flags section: per-tensor trainable / frozen bits.
  w.put_u32(static_cast<std::uint32_t>(store.size()));
  for (const std::string& name : store.names()) {
    const auto& e = store.entry(name);
    w.put_string(name);
    std::uint8_t flags = 0;
    if (e.trainable) {
      flags |= 1;
    }
    if (e.frozen) {
      flags |= 2;
    }
    w.put_u8(flags);
  }
  // Optimizer section.
  w.put_u8(optimizer ? 1 : 0);
  if (optimizer) {
    w.put_string(optimizer->kind);
    w.put_u64(static_cast<std::uint64_t>(optimizer->step));
    w.put_u32(static_cast<std::uint32_t>(optimizer->tensors.size()));
    for (const auto& [name, t] : optimizer->tensors) {
      put_tensor(w, name, t);
    }
  }
  w.save(path);
}

namespace {

Checkpoint read_all(const std::string& path) {
  ByteReader r = ByteReader::from_file(path);
  r.expect_magic(kCkptMagic, "checkpoint");
  const std::uint16_t version = r.get_u16();
  if (version != kCkptVersion) {
    throw FormatError("unsupported checkpoint version " +
                          std::to_string(version),
                      r.offset() - 2);
  }
  Checkpoint ckpt;
  const std::uint32_t count = r.get_u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    auto [name, t] = get_tensor(r);
    ParamEntry<float>* e = ckpt.store.create(name, t.shape);
    e->value = std::move(t);
  }
  const std::uint32_t flag_count = r.get_u32();
  for (std::uint32_t i = 0; i < flag_count; ++i) {
    const std::string name = r.get_string();
    const std::uint8_t flags = r.get_u8();
    if (!ckpt.store.has(name)) {
      throw FormatError("flags for unknown tensor '" + name + "'",
                        r.offset());
    }
    auto& e = ckpt.store.entry(name);
    e.trainable = (flags & 1) != 0;
    e.frozen = (flags & 2) != 0;
  }
  if (r.get_u8() == 1) {
    OptimizerState opt;
    opt.kind = r.get_string();
    opt.step = static_cast<std::int64_t>(r.get_u64());
    const std::uint32_t n = r.get_u32();
    for (std::uint32_t i = 0; i < n; ++i) {
      auto [name, t] = get_tensor(r);
      opt.tensors.emplace(name, std::move(t));
    }
    ckpt.optimizer = std::move(opt);
  }
  if (!r.at_end()) {
    throw FormatError("trailing bytes after checkpoint payload", r.offset());
  }
  return ckpt;
}

}  // namespace

Checkpoint load_checkpoint(const std::string& path) { return read_all(path); }

std::optional<OptimizerState> load_checkpoint_into(ParamStore<float>& store,
                                                   const std::string& path) {
  Checkpoint ckpt = read_all(path);
  // Validate both directions before touching the destination.
  for (const std::string& name : store.names()) {
    if (!ckpt.store.has(name)) {
      throw DimError("checkpoint " + path + " is missing tensor '" + name +
                     "'");
    }
    const auto& src = ckpt.store.entry(name);
    const auto& dst = store.entry(name);
    if (src.value.shape != dst.value.shape) {
      throw DimError("checkpoint tensor '" + name + "' has shape " +
                     src.value.shape_str() + ", model expects " +
                     dst.value.shape_str());
    }
  }
  for (const std::string& name : ckpt.store.names()) {
    if (!store.has(name)) {
      throw DimError("checkpoint " + path + " has unexpected tensor '" + name +
                     "'");
    }
  }
  for (const std::string& name : store.names()) {
    auto& dst = store.entry(name);
    const auto& src = ckpt.store.entry(name);
    dst.value = src.value;
    dst.trainable = src.trainable;
    dst.frozen = src.frozen;
  }
  return ckpt.optimizer;
}

void copy_params(ParamStore<float>& dst, const ParamStore<float>& src,
                 const std::string& prefix) {
  for (const std::string& name : src.names_with_prefix(prefix)) {
    if (!dst.has(name)) {
      throw DimError("copy_params: destination is missing tensor '" + name +
                     "'");
    }
    auto& d = dst.entry(name);
    const auto& s = src.entry(name);
    if (d.value.shape != s.value.shape) {
      throw DimError("copy_params: tensor '" + name + "' has shape " +
                     s.value.shape_str() + ", destination expects " +
                     d.value.shape_str());
    }
    d.value = s.value;
    d.trainable = s.trainable;
  }
}

std::uint64_t params_hash(const ParamStore<float>& store,
                          const std::string& prefix) {
  ByteWriter w;
  for (const std::string& name : store.names()) {
    if (!prefix.empty() && name.rfind(prefix, 0) != 0) {
      continue;
    }
    w.put_string(name);
    for (float v : store.entry(name).value.data) {
      w.put_f32(v);
    }
  }
  return content_hash(w.buffer());
}

}  // namespace trajloc

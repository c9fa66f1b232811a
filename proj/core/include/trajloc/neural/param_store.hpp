// core/include/trajloc/neural/param_store.hpp

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

#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "trajloc/errors.hpp"
#include "trajloc/neural/tensor.hpp"

namespace trajloc {

// One named parameter with its gradient accumulator.  trainable is false
// for buffers (batchnorm running stats); frozen marks tensors excluded from
// optimization by a later stage (the stage-2 freeze of F1).
template <typename S>
struct ParamEntry {
  Tensor<S> value;
  Tensor<S> grad;
  bool trainable = true;
  bool frozen = false;
};

// Ordered map name -> ParamEntry.  Entries have stable addresses, so layers
// hold plain pointers into the store.
template <typename S>
class ParamStore {
 public:
  ParamEntry<S>* create(const std::string& name,
                        std::vector<std::int64_t> shape,
                        bool trainable = true) {
    if (index_.contains(name)) {
      throw DimError("duplicate parameter name: " + name);
    }
    auto entry = std::make_unique<ParamEntry<S>>();
    entry->value = Tensor<S>(shape);
    entry->grad = Tensor<S>(std::move(shape));
    entry->trainable = trainable;
    ParamEntry<S>* raw = entry.get();
    index_.emplace(name, std::move(entry));
    order_.push_back(name);
    return raw;
  }

  bool has(const std::string& name) const { return index_.contains(name); }

  ParamEntry<S>& entry(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw DimError("unknown parameter: " + name);
    }
    return *it->second;
  }
  const ParamEntry<S>& entry(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw DimError("unknown parameter: " + name);
    }
    return *it->second;
  }

  const std::vector<std::string>& names() const { return order_; }
  std::size_t size() const { return order_.size(); }

  void zero_grads() {
    for (const std::string& name : order_) {
      index_.at(name)->grad.fill(S{0});
    }
  }

  // Marks every tensor whose name starts with `prefix`.
  void set_frozen(const std::string& prefix, bool frozen) {
    for (const std::string& name : order_) {
      if (name.rfind(prefix, 0) == 0) {
        index_.at(name)->frozen = frozen;
      }
    }
  }

  std::vector<std::string> names_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const std::string& name : order_) {
      if (name.rfind(prefix, 0) == 0) {
        out.push_back(name);
      }
    }
    return out;
  }

 private:
  std::unordered_map<std::string, std::unique_ptr<ParamEntry<S>>> index_;
  std::vector<std::string> order_;
};

}  // namespace trajloc

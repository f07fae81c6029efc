// Copyright 2026 The greenlan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "greenlan/json_out.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace greenlan {
namespace {

using Json = nlohmann::ordered_json;

void emit(const Json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += Json(key).dump();
        out += ": ";
        emit(item, depth + 1, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; matrices read row by row.
      const bool flat = std::none_of(v.begin(), v.end(), [](const Json& x) {
        return x.is_structured();
      });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          emit(v[i], depth + 1, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        emit(v[i], depth + 1, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      if (x == 0.0) x = 0.0;  // no "-0.0000"
      std::string s = fmt::format("{:.4f}", x);
      if (s == "-0.0000") s = "0.0000";
      out += s;
      return;
    }
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string dump_fixed(const nlohmann::ordered_json& value) {
  std::string out;
  emit(value, 0, out);
  out += '\n';
  return out;
}

}  // namespace greenlan

// Copyright 2026 The vecforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vecforge/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <nlohmann/json.hpp>

#include "vecforge/error.h"
#include "vecforge/half.h"

namespace vecforge {

using nlohmann::json;

void Checkpoint::Add(std::string name, Tensor tensor) {
  if (name.empty() || name == kMetadataKey) {
    throw Error(ErrorCode::kFormatError, fmt::format("invalid tensor name '{}'", name));
  }
  if (tensors.contains(name)) {
    throw Error(ErrorCode::kFormatError, fmt::format("duplicate tensor name '{}'", name));
  }
  tensors.emplace(std::move(name), std::move(tensor));
}

const Tensor& Checkpoint::at(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) {
    throw Error(ErrorCode::kUnknownKey, fmt::format("no tensor named '{}'", name));
  }
  return it->second;
}

std::size_t Checkpoint::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors) n += t.size();
  return n;
}

namespace {

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t GetLE(const char* p, int nbytes) {
  std::uint64_t v = 0;
  for (int i = nbytes - 1; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  }
  return v;
}

std::string Serialize(const Checkpoint& ckpt, bool with_metadata) {
  json header = json::object();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : ckpt.tensors) {
    if (name.empty() || name == kMetadataKey) {
      throw Error(ErrorCode::kFormatError, fmt::format("invalid tensor name '{}'", name));
    }
    const std::uint64_t nbytes = t.size() * DTypeSize(t.dtype());
    header[name] = {{"dtype", DTypeName(t.dtype())},
                    {"shape", t.shape()},
                    {"data_offsets", {offset, offset + nbytes}}};
    offset += nbytes;
  }
  if (with_metadata && !ckpt.metadata.empty()) header[std::string(kMetadataKey)] = ckpt.metadata;

  std::string text = header.dump();
  text.append((8 - text.size() % 8) % 8, ' ');

  std::string out;
  out.reserve(8 + text.size() + offset);
  PutU64(out, text.size());
  out += text;
  for (const auto& [name, t] : ckpt.tensors) {
    if (t.dtype() == DType::kF16) {
      for (float v : t.data()) PutU16(out, EncodeHalf(v));
    } else {
      for (float v : t.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  return out;
}

struct Extent {
  std::uint64_t begin;
  std::uint64_t end;
  std::string name;
};

Tensor DecodeTensor(const std::string& name, const json& entry, std::string_view data,
                    std::vector<Extent>& extents) {
  if (!entry.is_object() || !entry.contains("dtype") || !entry.contains("shape") ||
      !entry.contains("data_offsets")) {
    throw Error(ErrorCode::kFormatError,
                fmt::format("tensor '{}' needs dtype, shape and data_offsets", name));
  }
  const json& jdtype = entry["dtype"];
  const json& jshape = entry["shape"];
  const json& joffsets = entry["data_offsets"];
  if (!jdtype.is_string() || !jshape.is_array() || !joffsets.is_array() ||
      joffsets.size() != 2) {
    throw Error(ErrorCode::kFormatError, fmt::format("malformed entry for '{}'", name));
  }
  const DType dtype = ParseDType(jdtype.get<std::string>());

  Shape shape;
  for (const json& d : jshape) {
    if (!d.is_number_unsigned()) {
      throw Error(ErrorCode::kShapeError, fmt::format("bad dimension in shape of '{}'", name));
    }
    shape.push_back(d.get<std::size_t>());
  }
  for (const json& o : joffsets) {
    if (!o.is_number_unsigned()) {
      throw Error(ErrorCode::kShapeError, fmt::format("bad data_offsets for '{}'", name));
    }
  }
  const auto begin = joffsets[0].get<std::uint64_t>();
  const auto end = joffsets[1].get<std::uint64_t>();
  const std::uint64_t expected = NumElements(shape) * DTypeSize(dtype);
  if (end < begin || end - begin != expected || end > data.size()) {
    throw Error(ErrorCode::kShapeError,
                fmt::format("'{}': offsets [{}, {}] inconsistent with shape {} {} "
                            "and a {}-byte data region",
                            name, begin, end, ShapeString(shape), DTypeName(dtype),
                            data.size()));
  }
  extents.push_back({begin, end, name});

  const std::size_t n = NumElements(shape);
  std::vector<float> values(n);
  const char* p = data.data() + begin;
  if (dtype == DType::kF16) {
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = DecodeHalf(static_cast<std::uint16_t>(GetLE(p + 2 * i, 2)));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = std::bit_cast<float>(static_cast<std::uint32_t>(GetLE(p + 4 * i, 4)));
    }
  }
  return Tensor(std::move(shape), std::move(values), dtype);
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) { return Serialize(ckpt, true); }

Checkpoint ParseCheckpoint(std::string_view bytes) {
  if (bytes.size() < 8) {
    throw Error(ErrorCode::kFormatError,
                fmt::format("{} bytes is too short for a header length", bytes.size()));
  }
  const std::uint64_t header_len = GetLE(bytes.data(), 8);
  if (header_len > bytes.size() - 8) {
    throw Error(ErrorCode::kFormatError,
                fmt::format("header length {} exceeds file size {}", header_len, bytes.size()));
  }
  json header;
  try {
    header = json::parse(bytes.substr(8, header_len));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kFormatError, fmt::format("header is not valid JSON: {}", e.what()));
  }
  if (!header.is_object()) {
    throw Error(ErrorCode::kFormatError, "header must be a JSON object");
  }

  const std::string_view data = bytes.substr(8 + header_len);
  Checkpoint ckpt;
  std::vector<Extent> extents;
  for (const auto& [key, value] : header.items()) {
    if (key == kMetadataKey) {
      if (!value.is_object()) {
        throw Error(ErrorCode::kFormatError, "__metadata__ must be an object");
      }
      for (const auto& [mk, mv] : value.items()) {
        if (!mv.is_string()) {
          throw Error(ErrorCode::kFormatError,
                      fmt::format("metadata value for '{}' is not a string", mk));
        }
        ckpt.metadata[mk] = mv.get<std::string>();
      }
      continue;
    }
    ckpt.Add(key, DecodeTensor(key, value, data, extents));
  }

  std::sort(extents.begin(), extents.end(),
            [](const Extent& a, const Extent& b) { return a.begin < b.begin; });
  std::uint64_t cursor = 0;
  for (const Extent& e : extents) {
    if (e.begin != cursor) {
      throw Error(ErrorCode::kShapeError,
                  fmt::format("tensor '{}' starts at {} but previous data ends at {}", e.name,
                              e.begin, cursor));
    }
    cursor = e.end;
  }
  if (cursor != data.size()) {
    throw Error(ErrorCode::kFormatError,
                fmt::format("{} trailing bytes after the last tensor", data.size() - cursor));
  }
  return ckpt;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot open '{}'", path.string()));
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIoError, fmt::format("failed reading '{}'", path.string()));
  }
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) {
    throw Error(ErrorCode::kIoError, fmt::format("failed writing '{}'", path.string()));
  }
}

Checkpoint ReadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFileBytes(path));
}

void WriteCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeCheckpoint(ckpt));
}

std::string Fingerprint(const Checkpoint& ckpt) {
  const std::string bytes = Serialize(ckpt, false);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 digest failed");
  }
  std::string hex = "sha256:";
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace vecforge

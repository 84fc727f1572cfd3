# Copyright 2026 The vecforge Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the golden checkpoint fixtures byte by byte.

Deliberately independent of the C++ writer: plain struct packing plus the
json module. Run from this directory; the outputs are checked in.
"""

import json
import struct

import numpy as np


def write(path, tensors, metadata=None):
    header = {}
    blobs = []
    offset = 0
    for name in sorted(tensors):
        dtype, shape, values = tensors[name]
        if dtype == "F32":
            blob = struct.pack("<%df" % len(values), *values)
        else:
            blob = np.asarray(values, dtype="<f2").tobytes()
        header[name] = {"dtype": dtype, "shape": shape,
                        "data_offsets": [offset, offset + len(blob)]}
        offset += len(blob)
        blobs.append(blob)
    if metadata:
        header["__metadata__"] = metadata
    text = json.dumps(header, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")
    text += b" " * ((8 - len(text) % 8) % 8)
    with open(path, "wb") as f:
        f.write(struct.pack("<Q", len(text)))
        f.write(text)
        for blob in blobs:
            f.write(blob)


write("empty.safetensors", {})
write("simple.safetensors", {"w": ("F32", [2], [1.0, 2.0])})
write("mixed.safetensors", {
    "enc.fc.weight": ("F32", [2, 3], [0.5, -1.25, 3.0, 0.0, 1e-3, -7.5]),
    "enc.fc.bias": ("F32", [3], [0.1, 0.2, 0.3]),
    "dec.proj": ("F16", [2, 2], [1.0, -2.0, 0.333251953125, 65504.0]),
}, metadata={"model": "toy", "note": "accent été"})
write("lora_rank1.safetensors", {
    "fc.lora_A": ("F32", [1, 2], [1.0, 1.0]),
    "fc.lora_B": ("F32", [2, 1], [1.0, 2.0]),
}, metadata={"lora_alpha": "2", "rank": "1"})

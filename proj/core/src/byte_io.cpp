// Copyright 2026 The NeuRO Authors
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

#include "neuro/byte_io.hpp"

#include <fstream>
#include <iterator>

namespace neuro {

std::vector<std::byte> read_file_bytes(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw error{ error_code::io_error, "cannot open '" + path.string() + "' for reading" };
    }
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    std::vector<std::byte> out(size);
    in.read(reinterpret_cast<char *>(out.data()), static_cast<std::streamsize>(size));
    if (!in) {
        throw error{ error_code::io_error, "short read from '" + path.string() + "'" };
    }
    return out;
}

void write_file_bytes(const std::filesystem::path &path, std::span<const std::byte> bytes) {
    std::ofstream out{ path, std::ios::binary | std::ios::trunc };
    if (!out) {
        throw error{ error_code::io_error, "cannot open '" + path.string() + "' for writing" };
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw error{ error_code::io_error, "write to '" + path.string() + "' failed" };
    }
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw error{ error_code::io_error, "cannot open '" + path.string() + "' for reading" };
    }
    return { std::istreambuf_iterator<char>{ in }, std::istreambuf_iterator<char>{} };
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
    write_file_bytes(path, as_byte_span(text));
}

}  // namespace neuro

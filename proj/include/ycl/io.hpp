#pragma once

#include <filesystem>
#include <string>

#include "ycl/field.hpp"

namespace ycl {

// Flat binary field layout: int32 d, int32 L, int32 n, float64 m, then the
// row-major point values as little-endian float64.
void write_field_binary(const std::filesystem::path& path, const ScalarField& f, double mass);
ScalarField read_field_binary(const std::filesystem::path& path, double* mass_out = nullptr);

// CSV with per-axis index columns plus the value.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ycl

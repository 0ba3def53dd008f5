#pragma once

#include <string>
#include <string_view>

namespace solitonforge {

/// Fixed-format float for reproducible reports: 17 significant digits, '.'
/// decimal separator.
std::string fmt_g17(double v);

/// Writes content verbatim ('\n' line endings, no locale).
void write_text_file(const std::string& path, std::string_view content);

std::string read_text_file(const std::string& path);

}  // namespace solitonforge

#pragma once

#include <string_view>
#include <vector>

namespace pentaca::detail {

struct EmbeddedFile {
  std::string_view path;  // relative to data/
  std::string_view text;
};

const std::vector<EmbeddedFile>& embedded_files();

}  // namespace pentaca::detail

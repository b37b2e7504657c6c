#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace qvsum {

inline constexpr int kNumClasses = 80;

// Class names in detector index order (COCO / YOLO numbering).
const std::array<std::string_view, kNumClasses>& class_names();

std::string_view class_name(int class_id);

// Accepts underscore or space separated names, any case, plus the
// 'tannis_racket' spelling. Returns nullopt for unknown names.
std::optional<int> class_id_from_name(std::string_view name);

}  // namespace qvsum

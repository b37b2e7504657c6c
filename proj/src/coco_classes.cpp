#include "qvsum/coco_classes.hpp"

#include <cctype>

#include "qvsum/error.hpp"

namespace qvsum {

const std::array<std::string_view, kNumClasses>& class_names() {
  static constexpr std::array<std::string_view, kNumClasses> names{
      "person",        "bicycle",      "car",           "motorcycle",    "airplane",
      "bus",           "train",        "truck",         "boat",          "traffic_light",
      "fire_hydrant",  "stop_sign",    "parking_meter", "bench",         "bird",
      "cat",           "dog",          "horse",         "sheep",         "cow",
      "elephant",      "bear",         "zebra",         "giraffe",       "backpack",
      "umbrella",      "handbag",      "tie",           "suitcase",      "frisbee",
      "skis",          "snowboard",    "sports_ball",   "kite",          "baseball_bat",
      "baseball_glove", "skateboard",  "surfboard",     "tennis_racket", "bottle",
      "wine_glass",    "cup",          "fork",          "knife",         "spoon",
      "bowl",          "banana",       "apple",         "sandwich",      "orange",
      "broccoli",      "carrot",       "hot_dog",       "pizza",         "donut",
      "cake",          "chair",        "couch",         "potted_plant",  "bed",
      "dining_table",  "toilet",       "tv",            "laptop",        "mouse",
      "remote",        "keyboard",     "cell_phone",    "microwave",     "oven",
      "toaster",       "sink",         "refrigerator",  "book",          "clock",
      "vase",          "scissors",     "teddy_bear",    "hair_drier",    "toothbrush"};
  return names;
}

std::string_view class_name(int class_id) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw SchemaError("class_id out of range [0,79]: " + std::to_string(class_id));
  }
  return class_names()[static_cast<std::size_t>(class_id)];
}

std::optional<int> class_id_from_name(std::string_view name) {
  std::string norm;
  norm.reserve(name.size());
  for (char c : name) {
    norm.push_back(c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (norm == "tannis_racket") norm = "tennis_racket";
  const auto& names = class_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == norm) return static_cast<int>(i);
  }
  return std::nullopt;
}

}  // namespace qvsum

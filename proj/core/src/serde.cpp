#include "depict/serde.hpp"

#include <stdexcept>

namespace depict {

Json canvas_to_json(const CanvasSpec& canvas) {
  Json j;
  j["width"] = canvas.width;
  j["height"] = canvas.height;
  j["background"] = {canvas.background.r, canvas.background.g, canvas.background.b};
  Json palette = Json::array();
  for (const auto& [name, rgb] : canvas.palette) {
    palette.push_back(Json{{"name", name}, {"rgb", {rgb.r, rgb.g, rgb.b}}});
  }
  j["palette"] = palette;
  return j;
}

namespace {

Rgb rgb_from_json(const Json& j, const char* what) {
  const auto parts = j.get<std::vector<int>>();
  if (parts.size() != 3) throw std::invalid_argument(std::string(what) + " needs three channels");
  for (const int v : parts) {
    if (v < 0 || v > 255) throw std::invalid_argument(std::string(what) + " channel outside [0,255]");
  }
  return Rgb{static_cast<std::uint8_t>(parts[0]), static_cast<std::uint8_t>(parts[1]),
             static_cast<std::uint8_t>(parts[2])};
}

}  // namespace

CanvasSpec canvas_from_json(const Json& j) {
  CanvasSpec canvas;
  canvas.width = j.at("width").get<int>();
  canvas.height = j.at("height").get<int>();
  canvas.background = rgb_from_json(j.at("background"), "background");
  canvas.palette.clear();
  for (const Json& entry : j.at("palette")) {
    canvas.palette.emplace_back(entry.at("name").get<std::string>(), rgb_from_json(entry.at("rgb"), "palette color"));
  }
  return canvas;
}

}  // namespace depict

#pragma once

#include "json.hpp"

#include "depict/scene.hpp"

namespace depict {

// Insertion-ordered JSON keeps emitted artifacts byte-stable.
using Json = nlohmann::ordered_json;

Json canvas_to_json(const CanvasSpec& canvas);
CanvasSpec canvas_from_json(const Json& j);

}  // namespace depict

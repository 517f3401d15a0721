#include "depict/dataset_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "depict/pnm.hpp"
#include "depict/serde.hpp"

namespace depict {

namespace fs = std::filesystem;

namespace {

constexpr int kSchemaVersion = 1;

std::string image_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "imgs/%06zu.ppm", i);
  return buf;
}

}  // namespace

void Dataset::validate() const {
  space.validate();
  canvas.validate();
  const auto n = images.size();
  if (concepts.rows() != static_cast<int>(n) || labels.size() != n || captions.size() != n) {
    throw std::invalid_argument("dataset: images, concepts, labels, and captions disagree on row count");
  }
  if (n > 0 && concepts.cols() != space.size()) {
    throw std::invalid_argument("dataset: concept matrix width does not match the concept space");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (images[i].width != canvas.width || images[i].height != canvas.height) {
      throw std::invalid_argument("dataset: image " + std::to_string(i) + " does not match the canvas size");
    }
    if (labels[i] > 1) {
      throw std::invalid_argument("dataset: label " + std::to_string(i) + " is not 0 or 1");
    }
  }
}

void write_dataset(const Dataset& ds, const std::string& dir) {
  ds.validate();
  fs::create_directories(fs::path(dir) / "imgs");

  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["count"] = ds.size();
  meta["concepts"] = ds.space.names;
  meta["canvas"] = canvas_to_json(ds.canvas);
  write_file_bytes((fs::path(dir) / "meta.json").string(), meta.dump(2) + "\n");

  std::ostringstream index;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::string name = image_name(i);
    write_ppm((fs::path(dir) / name).string(), ds.images[i]);

    Json rec;
    rec["image"] = name;
    rec["caption"] = ds.captions[i];
    rec["concepts"] = ds.concepts.row(i);
    rec["label"] = static_cast<int>(ds.labels[i]);
    index << rec.dump() << '\n';
  }
  write_file_bytes((fs::path(dir) / "index.jsonl").string(), index.str());
}

Dataset read_dataset(const std::string& dir) {
  const std::string meta_path = (fs::path(dir) / "meta.json").string();
  Json meta;
  try {
    meta = Json::parse(read_file_bytes(meta_path));
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(meta_path + ": " + e.what());
  }

  Dataset ds;
  try {
    const int version = meta.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw std::runtime_error("unsupported schema_version " + std::to_string(version));
    }
    ds.space.names = meta.at("concepts").get<std::vector<std::string>>();
    ds.canvas = canvas_from_json(meta.at("canvas"));
  } catch (const Json::exception& e) {
    throw std::runtime_error(meta_path + ": " + e.what());
  }
  const auto count = meta.at("count").get<std::size_t>();

  ds.concepts = ConceptMatrix(static_cast<int>(count), ds.space.size());
  ds.images.reserve(count);
  ds.labels.reserve(count);
  ds.captions.reserve(count);

  const std::string index_path = (fs::path(dir) / "index.jsonl").string();
  std::istringstream index(read_file_bytes(index_path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(index, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = index_path + ":" + std::to_string(line_no);
    if (line_no > count) {
      throw std::runtime_error(where + ": more records than meta.json count " + std::to_string(count));
    }
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    std::string image_rel;
    try {
      const auto bits = rec.at("concepts").get<ConceptVector>();
      for (const auto b : bits) {
        if (b > 1) throw std::invalid_argument("concept bit is not 0 or 1");
      }
      ds.concepts.set_row(static_cast<int>(line_no) - 1, bits);
      ds.captions.push_back(rec.at("caption").get<std::string>());
      const int label = rec.at("label").get<int>();
      if (label != 0 && label != 1) {
        throw std::invalid_argument("label is not 0 or 1");
      }
      ds.labels.push_back(static_cast<std::uint8_t>(label));
      image_rel = rec.at("image").get<std::string>();
    } catch (const Json::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    ds.images.push_back(read_ppm((fs::path(dir) / image_rel).string()));
  }
  if (ds.images.size() != count) {
    throw std::runtime_error(index_path + ": " + std::to_string(ds.images.size()) +
                             " records but meta.json count is " + std::to_string(count));
  }

  ds.validate();
  return ds;
}

}  // namespace depict

#include "depict/caption.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <vector>

namespace depict {
namespace {

std::string describe(const PlacedShape& shape, const ConceptSpace& space) {
  const std::string color = space.color_of(shape.concept_index);
  if (const auto* c = std::get_if<Circle>(&shape.geom)) {
    return color + " circle " + std::to_string(c->r) + " (" + std::to_string(c->cx) + "," +
           std::to_string(c->cy) + ")";
  }
  const auto& r = std::get<RectShape>(shape.geom);
  return color + " rectangle ((" + std::to_string(r.x1) + "," + std::to_string(r.y1) + ") (" +
         std::to_string(r.x2) + "," + std::to_string(r.y2) + "))";
}

struct Token {
  enum class Kind { Word, Integer, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  long long value = 0;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Word;
      while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        t.text += text_[pos_++];
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      t.kind = Token::Kind::Integer;
      if (text_[pos_] == '-') t.text += text_[pos_++];
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        t.text += text_[pos_++];
      }
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer out of range: \"" + t.text + "\"", t.offset);
      }
      return t;
    }
    if (c == '(' || c == ')' || c == ',') {
      t.kind = Token::Kind::Punct;
      t.text = c;
      ++pos_;
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text, const ConceptSpace& space) : lexer_(text), space_(space) { advance(); }

  std::vector<PlacedShape> parse() {
    std::vector<PlacedShape> shapes;
    if (tok_.kind == Token::Kind::End) return shapes;
    shapes.push_back(parse_desc());
    while (tok_.kind != Token::Kind::End) {
      expect_punct(",");
      shapes.push_back(parse_desc());
    }
    return shapes;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect_punct(const std::string& text) {
    if (tok_.kind != Token::Kind::Punct || tok_.text != text) {
      throw ParseError("expected \"" + text + "\", got \"" + shown() + "\"", tok_.offset);
    }
    advance();
  }

  int expect_int() {
    if (tok_.kind != Token::Kind::Integer) {
      throw ParseError("expected an integer, got \"" + shown() + "\"", tok_.offset);
    }
    const long long v = tok_.value;
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ParseError("coordinate out of range: " + tok_.text, tok_.offset);
    }
    advance();
    return static_cast<int>(v);
  }

  std::string shown() const { return tok_.kind == Token::Kind::End ? "<end>" : tok_.text; }

  PlacedShape parse_desc() {
    if (tok_.kind != Token::Kind::Word) {
      throw ParseError("expected a color word, got \"" + shown() + "\"", tok_.offset);
    }
    const Token color = tok_;
    advance();
    if (tok_.kind != Token::Kind::Word) {
      throw ParseError("expected a shape word, got \"" + shown() + "\"", tok_.offset);
    }
    const Token kind = tok_;
    if (kind.text != "circle" && kind.text != "rectangle") {
      throw ParseError("unknown shape word \"" + kind.text + "\"", kind.offset);
    }
    const int concept_index = space_.find(color.text, kind.text);
    if (concept_index < 0) {
      throw ParseError("unknown concept \"" + color.text + " " + kind.text + "\"", color.offset);
    }
    advance();
    PlacedShape shape;
    shape.concept_index = concept_index;
    if (kind.text == "circle") {
      Circle c;
      c.r = expect_int();
      expect_punct("(");
      c.cx = expect_int();
      expect_punct(",");
      c.cy = expect_int();
      expect_punct(")");
      shape.geom = c;
    } else {
      RectShape r;
      expect_punct("(");
      expect_punct("(");
      r.x1 = expect_int();
      expect_punct(",");
      r.y1 = expect_int();
      expect_punct(")");
      expect_punct("(");
      r.x2 = expect_int();
      expect_punct(",");
      r.y2 = expect_int();
      expect_punct(")");
      expect_punct(")");
      shape.geom = r;
    }
    return shape;
  }

  Lexer lexer_;
  const ConceptSpace& space_;
  Token tok_;
};

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error("caption parse error at offset " + std::to_string(offset) + ": " + message),
      offset(offset) {}

std::string render_caption(const ShapeScene& scene, const ConceptSpace& space) {
  std::vector<PlacedShape> ordered = scene.shapes;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const PlacedShape& a, const PlacedShape& b) { return a.concept_index < b.concept_index; });
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i > 0) out += ", ";
    out += describe(ordered[i], space);
  }
  return out;
}

ShapeScene parse_caption(const std::string& text, const ConceptSpace& space, const CanvasSpec& canvas) {
  ShapeScene scene;
  scene.canvas = canvas;
  scene.shapes = Parser(text, space).parse();
  return scene;
}

}  // namespace depict

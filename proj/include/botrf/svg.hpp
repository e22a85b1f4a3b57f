#pragma once

#include <span>
#include <string>
#include <string_view>

namespace botrf::svg {

struct Point {
  double x;
  double y;
};

std::string escape(std::string_view text);

// Minimal SVG 1.1 writer. Coordinates are printed with two decimals so that
// identical input always produces identical bytes.
class Document {
 public:
  Document(int width, int height);

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none");
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0,
            std::string_view dash = {});
  void polyline(std::span<const Point> points, std::string_view stroke, double width = 1.5,
                std::string_view dash = {});
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view stroke = "none");
  void text(double x, double y, std::string_view content, int size = 12, std::string_view anchor = "start",
            std::string_view fill = "#000000", bool bold = false, double rotate_deg = 0.0);
  void begin_group(std::string_view id, std::string_view css_class = {});
  void end_group();

  std::string str() const;

 private:
  int width_;
  int height_;
  std::string body_;
};

}  // namespace botrf::svg

#include "botrf/svg.hpp"

#include <fmt/format.h>

namespace botrf::svg {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

Document::Document(int width, int height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke) {
  body_ += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}" stroke="{}"/>)", x, y,
                       w, h, fill, stroke);
  body_ += '\n';
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width,
                    std::string_view dash) {
  body_ += fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}" stroke="{}" stroke-width="{:.2f}")",
                       x1, y1, x2, y2, stroke, width);
  if (!dash.empty()) body_ += fmt::format(R"( stroke-dasharray="{}")", dash);
  body_ += "/>\n";
}

void Document::polyline(std::span<const Point> points, std::string_view stroke, double width,
                        std::string_view dash) {
  body_ += R"(<polyline fill="none" points=")";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += fmt::format("{:.2f},{:.2f}", points[i].x, points[i].y);
  }
  body_ += fmt::format(R"(" stroke="{}" stroke-width="{:.2f}")", stroke, width);
  if (!dash.empty()) body_ += fmt::format(R"( stroke-dasharray="{}")", dash);
  body_ += "/>\n";
}

void Document::circle(double cx, double cy, double r, std::string_view fill, std::string_view stroke) {
  body_ += fmt::format(R"(<circle cx="{:.2f}" cy="{:.2f}" r="{:.2f}" fill="{}" stroke="{}"/>)", cx, cy, r, fill,
                       stroke);
  body_ += '\n';
}

void Document::text(double x, double y, std::string_view content, int size, std::string_view anchor,
                    std::string_view fill, bool bold, double rotate_deg) {
  const std::string transform =
      rotate_deg != 0.0 ? fmt::format(R"x( transform="rotate({:.2f} {:.2f} {:.2f})")x", rotate_deg, x, y) : "";
  body_ += fmt::format(
      R"(<text x="{:.2f}" y="{:.2f}" font-family="sans-serif" font-size="{}" text-anchor="{}" fill="{}"{}{}>{}</text>)",
      x, y, size, anchor, fill, bold ? R"( font-weight="bold")" : "", transform, escape(content));
  body_ += '\n';
}

void Document::begin_group(std::string_view id, std::string_view css_class) {
  body_ += fmt::format(R"(<g id="{}")", escape(id));
  if (!css_class.empty()) body_ += fmt::format(R"( class="{}")", escape(css_class));
  body_ += ">\n";
}

void Document::end_group() { body_ += "</g>\n"; }

std::string Document::str() const {
  std::string out;
  out += R"(<?xml version="1.0" encoding="UTF-8" standalone="no"?>)";
  out += '\n';
  out += fmt::format(
      R"(<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
      width_, height_);
  out += '\n';
  out += body_;
  out += "</svg>\n";
  return out;
}

}  // namespace botrf::svg

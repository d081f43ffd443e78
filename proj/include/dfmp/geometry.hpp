#pragma once

#include <algorithm>

namespace dfmp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  Point operator+(const Point& o) const { return {x + o.x, y + o.y}; }
  Point operator-(const Point& o) const { return {x - o.x, y - o.y}; }
  Point operator*(double s) const { return {x * s, y * s}; }
  Point& operator+=(const Point& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

struct Outline {
  double width = 0.0;
  double height = 0.0;

  friend bool operator==(const Outline&, const Outline&) = default;
  Point center() const { return {width / 2.0, height / 2.0}; }
};

// Axis-aligned rectangle given by its lower-left corner and extent.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  double xmax() const { return x + width; }
  double ymax() const { return y + height; }
  double area() const { return width * height; }

  // Interiors intersect. Rectangles that only touch along an edge do not overlap.
  bool overlaps(const Rect& o) const {
    return x < o.xmax() && o.x < xmax() && y < o.ymax() && o.y < ymax();
  }

  double overlap_area(const Rect& o) const {
    const double w = std::min(xmax(), o.xmax()) - std::max(x, o.x);
    const double h = std::min(ymax(), o.ymax()) - std::max(y, o.y);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
  }
};

}  // namespace dfmp

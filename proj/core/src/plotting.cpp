#include "binofeat/plotting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "binofeat/errors.hpp"
#include "binofeat/image_io.hpp"

namespace binofeat {

namespace {

// 5x7 glyphs, one byte per row, low 5 bits used (MSB-left).
struct Glyph {
  char ch;
  std::uint8_t rows[7];
};

constexpr Glyph kFont[] = {
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'%', {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
};

const Glyph* find_glyph(char c) {
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& g : kFont)
    if (g.ch == up) return &g;
  return nullptr;
}

class Canvas {
 public:
  Canvas(int width, int height, Rgb bg) : width_(width), height_(height) {
    buffer_.resize(static_cast<std::size_t>(width) * height * 3);
    for (int i = 0; i < width * height; ++i) set_raw(i, bg);
  }

  void pixel(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    set_raw(y * width_ + x, c);
  }

  void dot(int x, int y, Rgb c, int radius = 1) {
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx) pixel(x + dx, y + dy, c);
  }

  void line(double x0, double y0, double x1, double y1, Rgb c) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int steps = std::max(1, static_cast<int>(std::ceil(
                                      std::max(std::abs(dx), std::abs(dy)))));
    for (int i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) / steps;
      pixel(static_cast<int>(std::lround(x0 + t * dx)),
            static_cast<int>(std::lround(y0 + t * dy)), c);
    }
  }

  void text(int x, int y, const std::string& s, Rgb c) {
    int cx = x;
    for (char ch : s) {
      if (const Glyph* g = find_glyph(ch)) {
        for (int row = 0; row < 7; ++row)
          for (int col = 0; col < 5; ++col)
            if (g->rows[row] & (0x10 >> col)) pixel(cx + col, y + row, c);
      }
      cx += 6;
    }
  }

  void save(const std::string& path) const {
    write_rgb_png(path, width_, height_, buffer_);
  }

 private:
  void set_raw(int index, Rgb c) {
    buffer_[static_cast<std::size_t>(index) * 3] = c[0];
    buffer_[static_cast<std::size_t>(index) * 3 + 1] = c[1];
    buffer_[static_cast<std::size_t>(index) * 3 + 2] = c[2];
  }

  int width_, height_;
  std::vector<std::uint8_t> buffer_;
};

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

}  // namespace

void render_plot(const std::string& path, const std::string& title,
                 const std::string& x_label, const std::string& y_label,
                 const std::vector<PlotSeries>& series, int width, int height) {
  if (width < 200 || height < 150)
    throw ShapeError("render_plot: canvas too small");

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  bool any = false;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw ShapeError("render_plot: series '" + s.label + "' x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      any = true;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (!any) {
    x_min = 0;
    x_max = 1;
    y_min = 0;
    y_max = 1;
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 1;
    x_max += 1;
  }
  if (y_max - y_min < 1e-12) {
    y_min -= 1;
    y_max += 1;
  }
  const double x_pad = 0.05 * (x_max - x_min), y_pad = 0.05 * (y_max - y_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_min -= y_pad;
  y_max += y_pad;

  const Rgb bg{255, 255, 255}, frame{40, 40, 40}, grid{225, 225, 225},
      ink{20, 20, 20};
  const int left = 70, right = 20, top = 36, bottom = 48;
  const int px0 = left, px1 = width - right, py0 = top, py1 = height - bottom;
  Canvas canvas(width, height, bg);

  auto to_px = [&](double x) {
    return px0 + (x - x_min) / (x_max - x_min) * (px1 - px0);
  };
  auto to_py = [&](double y) {
    return py1 - (y - y_min) / (y_max - y_min) * (py1 - py0);
  };

  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double fy = y_min + (y_max - y_min) * i / kTicks;
    const int gx = static_cast<int>(std::lround(to_px(fx)));
    const int gy = static_cast<int>(std::lround(to_py(fy)));
    canvas.line(gx, py0, gx, py1, grid);
    canvas.line(px0, gy, px1, gy, grid);
    const std::string xs = format_tick(fx), ys = format_tick(fy);
    canvas.text(gx - 3 * static_cast<int>(xs.size()), py1 + 8, xs, ink);
    canvas.text(px0 - 6 * static_cast<int>(ys.size()) - 6, gy - 3, ys, ink);
  }
  canvas.line(px0, py0, px0, py1, frame);
  canvas.line(px0, py1, px1, py1, frame);
  canvas.line(px1, py0, px1, py1, frame);
  canvas.line(px0, py0, px1, py0, frame);

  canvas.text((px0 + px1) / 2 - 3 * static_cast<int>(title.size()), 12, title, ink);
  canvas.text((px0 + px1) / 2 - 3 * static_cast<int>(x_label.size()), height - 16,
              x_label, ink);
  canvas.text(8, py0 - 14, y_label, ink);

  int legend_y = py0 + 6;
  for (const auto& s : series) {
    double last_px = 0, last_py = 0;
    bool have_last = false;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        have_last = false;
        continue;
      }
      const double cx = to_px(s.x[i]), cy = to_py(s.y[i]);
      if (have_last)
        canvas.line(last_px, last_py, cx, cy, s.color);
      else
        canvas.dot(static_cast<int>(std::lround(cx)),
                   static_cast<int>(std::lround(cy)), s.color, 1);
      last_px = cx;
      last_py = cy;
      have_last = true;
    }
    if (!s.label.empty()) {
      const int lx = px1 - 6 * static_cast<int>(s.label.size()) - 26;
      canvas.line(lx, legend_y + 3, lx + 16, legend_y + 3, s.color);
      canvas.text(lx + 20, legend_y, s.label, ink);
      legend_y += 12;
    }
  }
  canvas.save(path);
}

}  // namespace binofeat

// Copyright toppmpc contributors
// SPDX-License-Identifier: Apache-2.0

#include "toppmpc/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace toppmpc::io {

namespace {

struct Frame {
  double xmin, xmax, ymin, ymax;  // data range
  double px, py;                  // pixel offsets
  double w, h;                    // pixel size

  double x(double v) const { return px + (v - xmin) / (xmax - xmin) * w; }
  double y(double v) const { return py + h - (v - ymin) / (ymax - ymin) * h; }
};

void polyline(std::ostringstream& os, const Frame& f, const std::vector<Vec2>& pts,
              const char* color, double width, bool close = false) {
  if (pts.empty()) return;
  os << "<path d=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    os << (i == 0 ? "M" : "L") << f.x(pts[i].x()) << " " << f.y(pts[i].y()) << " ";
  }
  if (close) os << "Z";
  os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"/>\n";
}

}  // namespace

std::string trajectory_svg(const sim::SimLog& log, const std::vector<ContactPatch>& footsteps) {
  double xmin = 1e9, xmax = -1e9, zmin = 1e9, zmax = -1e9;
  auto grow = [&](double x, double z) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    zmin = std::min(zmin, z);
    zmax = std::max(zmax, z);
  };
  for (const ContactPatch& p : footsteps) grow(p.center.x(), p.center.z());
  for (const sim::TickRecord& t : log.ticks) {
    grow(t.p_com.x(), t.p_com.z());
    grow(t.p_swing.x(), t.p_swing.z());
  }
  if (xmin > xmax) {
    xmin = zmin = 0.0;
    xmax = zmax = 1.0;
  }
  const double margin = 0.15 * std::max(1e-3, std::max(xmax - xmin, zmax - zmin));
  xmin -= margin;
  xmax += margin;
  zmin -= margin;
  zmax += margin;

  Frame f{xmin, xmax, zmin, zmax, 40, 20, 720, 360};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"420\" "
        "viewBox=\"0 0 800 420\">\n";
  os << "<rect width=\"800\" height=\"420\" fill=\"white\"/>\n";

  for (const ContactPatch& p : footsteps) {
    const Vec3 a = p.center - p.half_length * p.tangent;
    const Vec3 b = p.center + p.half_length * p.tangent;
    polyline(os, f, {Vec2(a.x(), a.z()), Vec2(b.x(), b.z())}, "#444444", 4.0);
  }

  std::vector<Vec2> com, swing;
  for (const sim::TickRecord& t : log.ticks) {
    com.emplace_back(t.p_com.x(), t.p_com.z());
    swing.emplace_back(t.p_swing.x(), t.p_swing.z());
  }
  polyline(os, f, swing, "#2ca02c", 1.5);
  polyline(os, f, com, "#d62728", 1.5);

  os << "<text x=\"45\" y=\"15\" font-size=\"12\">COM (red), swing foot (green), footsteps "
        "(grey), side view x-z [m]</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string polygons_svg(const std::vector<PolygonSnapshot>& snaps) {
  const double panel_w = 240, panel_h = 220;
  const int cols = std::max(1, int(std::min<size_t>(snaps.size(), 3)));
  const int rows = int((snaps.size() + size_t(cols) - 1) / size_t(cols));
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * panel_w << "\" height=\""
     << rows * panel_h << "\">\n";
  os << "<rect width=\"" << cols * panel_w << "\" height=\"" << rows * panel_h
     << "\" fill=\"white\"/>\n";

  for (size_t i = 0; i < snaps.size(); ++i) {
    const PolygonSnapshot& snap = snaps[i];
    const double ox = double(int(i) % cols) * panel_w;
    const double oy = double(int(i) / cols) * panel_h;
    double xmin = -1, xmax = 1, ymin = -0.5, ymax = 1;
    for (const Vec2& v : snap.polygon.vertices) {
      xmin = std::min(xmin, v.x());
      xmax = std::max(xmax, v.x());
      ymin = std::min(ymin, v.y());
      ymax = std::max(ymax, v.y());
    }
    const double mx = 0.1 * (xmax - xmin), my = 0.1 * (ymax - ymin);
    Frame f{xmin - mx, xmax + mx, ymin - my, ymax + my, ox + 30, oy + 25, panel_w - 50, panel_h - 55};

    // axes through the origin
    polyline(os, f, {Vec2(f.xmin, 0), Vec2(f.xmax, 0)}, "#bbbbbb", 1.0);
    polyline(os, f, {Vec2(0, f.ymin), Vec2(0, f.ymax)}, "#bbbbbb", 1.0);
    polyline(os, f, snap.polygon.vertices, "#1f77b4", 1.5, true);
    os << "<circle cx=\"" << f.x(0) << "\" cy=\"" << f.y(0) << "\" r=\"3.5\" fill=\"red\"/>\n";
    os << "<text x=\"" << ox + 30 << "\" y=\"" << oy + 16 << "\" font-size=\"11\">s = " << snap.s
       << (snap.origin_feasible ? " (static ok)" : " (not static)") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace toppmpc::io

#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "minfact/lamination.hpp"
#include "minfact/processes.hpp"

namespace minfact {

// SVG 1.1 rendering: red unit circle, red chords, black convex faces with
// red outlines. Output is deterministic (fixed-precision coordinates), so
// renders are byte-stable under a fixed seed and diffable as golden files.
struct RenderOptions {
  int size = 800;          // canvas edge in px
  double margin = 0.05;    // fraction of the radius
  double stroke = 1.5;     // px
};

namespace svg_detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Mapper {
  double cx, cy, r;
  explicit Mapper(const RenderOptions& o) {
    cx = o.size / 2.0;
    cy = o.size / 2.0;
    r = o.size / 2.0 * (1.0 - o.margin);
  }
  std::string x(const UnitAngle& a) const { return fmt(cx + r * a.x()); }
  std::string y(const UnitAngle& a) const { return fmt(cy - r * a.y()); }
};

}  // namespace svg_detail

inline std::string render_svg(const ColoredLamination& L, const RenderOptions& opt = {}) {
  using svg_detail::fmt;
  svg_detail::Mapper m(opt);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.size
     << "\" height=\"" << opt.size << "\" viewBox=\"0 0 " << opt.size << " " << opt.size
     << "\">\n";
  os << "  <circle cx=\"" << fmt(m.cx) << "\" cy=\"" << fmt(m.cy) << "\" r=\"" << fmt(m.r)
     << "\" fill=\"none\" stroke=\"red\" stroke-width=\"" << fmt(opt.stroke) << "\"/>\n";
  for (const Chord& c : L.chords) {
    os << "  <line x1=\"" << m.x(c.a) << "\" y1=\"" << m.y(c.a) << "\" x2=\"" << m.x(c.b)
       << "\" y2=\"" << m.y(c.b) << "\" stroke=\"red\" stroke-width=\"" << fmt(opt.stroke)
       << "\"/>\n";
  }
  for (const BlackFace& f : L.faces) {
    os << "  <polygon points=\"";
    for (std::size_t i = 0; i < f.corners.size(); ++i) {
      if (i) os << " ";
      os << m.x(f.corners[i]) << "," << m.y(f.corners[i]);
    }
    os << "\" fill=\"black\" stroke=\"red\" stroke-width=\"" << fmt(opt.stroke) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Frames of a process: frame j shows the prefix with round(j * k / (F-1))
// events, F = min(frames, k+1) in total, so frame 0 is the bare circle and
// the last frame the full lamination.
inline std::vector<std::string> render_frames(const LaminationProcess& p, int frames,
                                              const RenderOptions& opt = {}) {
  const int k = static_cast<int>(p.events.size());
  const int F = std::min(frames, k + 1);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(std::max(F, 0)));
  for (int j = 0; j < F; ++j) {
    const double cutoff =
        F > 1 ? std::floor(static_cast<double>(j) * k / (F - 1) + 0.5) : 0.0;
    ColoredLamination L;
    int taken = 0;
    for (const ProcessEvent& e : p.events) {
      if (taken >= static_cast<int>(cutoff)) break;
      if (e.is_face) {
        append_face_edges(e.face, L.chords);
        L.faces.push_back(e.face);
      } else {
        L.chords.push_back(e.chord);
      }
      ++taken;
    }
    out.push_back(render_svg(L, opt));
  }
  return out;
}

}  // namespace minfact

#include "tessforest/svg.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tessforest {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace

std::string render_partition_svg(const Partition& p, double px_per_unit) {
    if (p.window().dim() != 2) throw std::invalid_argument("svg: rendering requires d = 2");
    if (!p.window().is_box()) throw std::invalid_argument("svg: rendering requires a box window");
    const auto& box = p.window().box();
    double w = (box.upper[0] - box.lower[0]) * px_per_unit;
    double h = (box.upper[1] - box.lower[1]) * px_per_unit;
    auto tx = [&](double x) { return (x - box.lower[0]) * px_per_unit; };
    auto ty = [&](double y) { return (box.upper[1] - y) * px_per_unit; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < p.cell_count(); ++i) {
        auto verts = polygon_vertices_2d(p.cell(i));
        if (verts.size() < 3) continue;
        out << "<polygon points=\"";
        for (std::size_t k = 0; k < verts.size(); ++k) {
            if (k) out << " ";
            out << fmt(tx(verts[k][0])) << "," << fmt(ty(verts[k][1]));
        }
        out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace tessforest

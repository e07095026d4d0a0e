#pragma once

// Output formats: CSV with a header line, JSON, and a minimal SVG scatter.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "operators.hpp"

namespace decimate {

/// Shortest representation that round-trips, never more than 17 significant digits.
inline std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

inline nlohmann::json to_json(const TridiagonalOperator& t) {
    return {{"size", t.size()}, {"diag", t.diag}, {"sub", t.sub}, {"super", t.super}};
}

inline TridiagonalOperator operator_from_json(const nlohmann::json& j) {
    auto t = TridiagonalOperator(j.at("diag").get<std::vector<double>>(), j.at("sub").get<std::vector<double>>(),
                                 j.at("super").get<std::vector<double>>());
    require(j.at("size").get<std::size_t>() == t.size(), "operator JSON size field does not match diag length");
    return t;
}

/// JSON dump with every double rendered by format_double.
inline std::string dump_json(const nlohmann::json& j) {
    std::ostringstream os;
    const auto emit = [&](const auto& self, const nlohmann::json& v, int indent) -> void {
        const std::string pad(static_cast<std::size_t>(indent), ' ');
        const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
        if (v.is_number_float()) {
            const double d = v.get<double>();
            os << (std::isfinite(d) ? format_double(d) : "null");
        } else if (v.is_object()) {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << inner << nlohmann::json(it.key()).dump() << ": ";
                self(self, it.value(), indent + 2);
            }
            os << "\n" << pad << "}";
        } else if (v.is_array()) {
            bool scalar = true;
            for (const auto& e : v) scalar = scalar && e.is_primitive();
            if (v.empty()) {
                os << "[]";
            } else if (scalar) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    self(self, v[i], indent);
                }
                os << "]";
            } else {
                os << "[\n";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ",\n";
                    os << inner;
                    self(self, v[i], indent + 2);
                }
                os << "\n" << pad << "]";
            }
        } else {
            os << v.dump();
        }
    };
    emit(emit, j, 0);
    os << "\n";
    return os.str();
}

struct SvgPoint {
    double x;
    double y;
};

/// Static scatter plot; coordinates are mapped linearly onto the canvas.
inline std::string svg_scatter(const std::vector<SvgPoint>& pts, const std::string& xlabel, const std::string& ylabel,
                               double radius = 0.6) {
    const double w = 800.0, h = 600.0, margin = 50.0;
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (!pts.empty()) {
        xmin = xmax = pts[0].x;
        ymin = ymax = pts[0].y;
        for (const auto& p : pts) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
    const auto sy = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << " " << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w - 2 * margin << "\" height=\""
       << h - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel
       << " [" << num(xmin) << ", " << num(xmax) << "]</text>\n";
    os << "<text x=\"14\" y=\"" << h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 14 "
       << h / 2 << ")\">" << ylabel << " [" << num(ymin) << ", " << num(ymax) << "]</text>\n";
    os << "<g fill=\"black\">\n";
    for (const auto& p : pts)
        os << "<circle cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y)) << "\" r=\"" << radius << "\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace decimate

#include "qcav/holography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qcav/errors.hpp"

namespace qcav {

double HoloScene::scene_diameter() const {
    std::vector<Eigen::Vector3d> pts{source};
    for (const auto& s : scatterers) {
        pts.push_back(s.position);
    }
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            d = std::max(d, (pts[i] - pts[j]).norm());
        }
    }
    return d;
}

void HoloScene::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigurationError("hologram wavenumber k must be > 0");
    }
    if (nx < 1 || ny < 1) {
        throw ConfigurationError("hologram grid counts must be >= 1");
    }
    if (!(extent >= 0.0) || !std::isfinite(extent)) {
        throw ConfigurationError("hologram detector extent must be >= 0");
    }
    if (!(detector_distance > 0.0) || !std::isfinite(detector_distance)) {
        throw ConfigurationError("hologram detector distance must be > 0");
    }
    for (std::size_t j = 0; j < scatterers.size(); ++j) {
        if ((scatterers[j].position - source).norm() == 0.0) {
            throw GeometryError("scatterer " + std::to_string(j) + " coincides with the source");
        }
    }
    const double diameter = scene_diameter();
    if (detector_distance < far_field_ratio * diameter) {
        std::ostringstream msg;
        msg << "detector distance " << detector_distance << " m is below " << far_field_ratio
            << " x scene diameter " << diameter << " m";
        throw ConfigurationError(msg.str());
    }
}

Eigen::Vector3d HoloScene::pixel(int ix, int iy) const {
    auto coord = [this](int i, int n) { return extent * ((i + 0.5) / n - 0.5); };
    return {coord(ix, nx), coord(iy, ny), detector_distance};
}

ComplexMatrix far_field_amplitude(const HoloScene& scene) {
    scene.validate();
    // Per-scatterer prefactor f e^{ikd}/d does not depend on the pixel.
    std::vector<Complex> weight;
    std::vector<Eigen::Vector3d> offset;
    for (const auto& s : scene.scatterers) {
        const double d = (s.position - scene.source).norm();
        weight.push_back(s.f * std::polar(1.0 / d, scene.k * d));
        offset.push_back(scene.source - s.position);
    }
    ComplexMatrix out(scene.ny, scene.nx);
    for (int iy = 0; iy < scene.ny; ++iy) {
        for (int ix = 0; ix < scene.nx; ++ix) {
            const Eigen::Vector3d khat = scene.pixel(ix, iy).normalized();
            Complex a{1.0, 0.0};
            for (std::size_t j = 0; j < weight.size(); ++j) {
                a += weight[j] * std::polar(1.0, scene.k * khat.dot(offset[j]));
            }
            out(iy, ix) = a;
        }
    }
    return out;
}

Eigen::MatrixXd far_field_intensity(const HoloScene& scene) { return far_field_amplitude(scene).cwiseAbs2(); }

double fringe_contrast(const Eigen::MatrixXd& grid) {
    if (grid.size() == 0) {
        throw ConfigurationError("fringe contrast needs a non-empty grid");
    }
    const double hi = grid.maxCoeff();
    const double lo = grid.minCoeff();
    if (hi + lo == 0.0) {
        return 0.0;
    }
    return (hi - lo) / (hi + lo);
}

double two_source_fringe_period(double k, double transverse_separation, double detector_distance) {
    if (!(k > 0.0) || !(transverse_separation > 0.0) || !(detector_distance > 0.0)) {
        throw ConfigurationError("fringe period needs k, separation and distance > 0");
    }
    return 2.0 * std::numbers::pi * detector_distance / (k * transverse_separation);
}

WavelengthEcho wavelength_echo(double phase_velocity, double omega, double spacing) {
    if (!(phase_velocity > 0.0) || !(omega > 0.0) || !(spacing > 0.0)) {
        throw ConfigurationError("wavelength echo needs positive velocity, frequency and spacing");
    }
    WavelengthEcho w;
    w.wavelength = 2.0 * std::numbers::pi * phase_velocity / omega;
    w.spacing = spacing;
    w.ratio = w.wavelength / spacing;
    return w;
}

void write_intensity_csv(std::ostream& os, const HoloScene& scene, const Eigen::MatrixXd& grid) {
    os << "iy,ix,x_m,y_m,intensity\n";
    char buf[160];
    for (Eigen::Index iy = 0; iy < grid.rows(); ++iy) {
        for (Eigen::Index ix = 0; ix < grid.cols(); ++ix) {
            const Eigen::Vector3d p = scene.pixel(static_cast<int>(ix), static_cast<int>(iy));
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.12g,%.12g,%.12g\n", static_cast<long>(iy),
                          static_cast<long>(ix), p.x(), p.y(), grid(iy, ix));
            os << buf;
        }
    }
}

void write_intensity_svg(std::ostream& os, const Eigen::MatrixXd& grid) {
    const double hi = grid.size() ? grid.maxCoeff() : 0.0;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << grid.cols() << "\" height=\"" << grid.rows()
       << "\" viewBox=\"0 0 " << grid.cols() << ' ' << grid.rows() << "\" shape-rendering=\"crispEdges\">\n";
    for (Eigen::Index iy = 0; iy < grid.rows(); ++iy) {
        for (Eigen::Index ix = 0; ix < grid.cols(); ++ix) {
            const double v = hi > 0.0 ? grid(iy, ix) / hi : 0.0;
            const int g = std::clamp(static_cast<int>(std::lround(255.0 * v)), 0, 255);
            os << "<rect x=\"" << ix << "\" y=\"" << iy << "\" width=\"1\" height=\"1\" fill=\"rgb(" << g << ','
               << g << ',' << g << ")\"/>\n";
        }
    }
    os << "</svg>\n";
}

}  // namespace qcav

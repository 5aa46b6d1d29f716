#pragma once

// Internal-source far-field holography: a spherical reference wave from a
// source inside the sample interferes with waves single-scattered by
// point objects. Scalar waves, no polarization, no multiple scattering.

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "qcav/qstate.hpp"

namespace qcav {

struct Scatterer {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();  // m
    Complex f{0.0, 0.0};                                   // scattering amplitude
};

/// Detector plane z = detector_distance, square of side `extent` centered on the z axis,
/// sampled nx × ny at pixel centers.
struct HoloScene {
    double k = 0.0;  // 1/m
    Eigen::Vector3d source = Eigen::Vector3d::Zero();
    std::vector<Scatterer> scatterers;
    double detector_distance = 0.0;
    double extent = 0.0;
    int nx = 0;
    int ny = 0;

    /// Largest pairwise distance among the source and scatterers.
    double scene_diameter() const;
    /// Throws ConfigurationError on bad k, grid or far-field ratio, GeometryError
    /// when a scatterer sits on the source.
    void validate() const;
    Eigen::Vector3d pixel(int ix, int iy) const;
};

inline constexpr double far_field_ratio = 50.0;

/// Angular amplitude R·A(k̂): 1 for the reference wave plus
/// Σ f_j e^{ik d_j}/d_j · e^{ik k̂·(r_s − r_j)}, d_j = |r_j − r_s|.
/// Rows index y, columns index x.
ComplexMatrix far_field_amplitude(const HoloScene& scene);

/// |R·A|²; the bare reference wave gives exactly 1 everywhere.
Eigen::MatrixXd far_field_intensity(const HoloScene& scene);

/// (I_max − I_min)/(I_max + I_min); 0 for an all-zero grid.
double fringe_contrast(const Eigen::MatrixXd& grid);

/// Two-point-source fringe period on the detector: 2πR/(k Δ).
double two_source_fringe_period(double k, double transverse_separation, double detector_distance);

struct WavelengthEcho {
    double wavelength = 0.0;  // m
    double spacing = 0.0;     // m
    double ratio = 0.0;       // wavelength / spacing
};

/// 2π v / ω compared to a lattice spacing.
WavelengthEcho wavelength_echo(double phase_velocity, double omega, double spacing = 4e-9);

/// Row-major CSV: iy,ix,x_m,y_m,intensity.
void write_intensity_csv(std::ostream& os, const HoloScene& scene, const Eigen::MatrixXd& grid);

/// Grayscale raster, one rect per pixel, scaled to the grid maximum.
void write_intensity_svg(std::ostream& os, const Eigen::MatrixXd& grid);

}  // namespace qcav

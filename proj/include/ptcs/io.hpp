#pragma once

// File formats: phase-space grids and trajectories as CSV, eigenbasis
// matrices as JSON, heatmaps as PNG.  Numbers are written with 17
// significant digits so that doubles survive a round trip.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptcs/dynamics.hpp"

namespace ptcs {

/// IO or parse failure; the message names the file and, for parse errors, the line.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Key/value pairs written as "# key = value" header lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);

/// Header "q,p,rho", rows in q then p.  Throws ValidationError on an empty grid.
void write_grid_csv(std::ostream& out, const PhaseSpaceDistribution& rho, const Metadata& meta = {});
void write_grid_csv(const std::string& path, const PhaseSpaceDistribution& rho, const Metadata& meta = {});
PhaseSpaceDistribution read_grid_csv(std::istream& in, const std::string& name, Metadata* meta = nullptr);
PhaseSpaceDistribution read_grid_csv(const std::string& path, Metadata* meta = nullptr);

/// Header "q,p".
void write_trajectory_csv(const std::string& path, const std::vector<PhasePoint>& points, const Metadata& meta = {});
std::vector<PhasePoint> read_trajectory_csv(const std::string& path);

/// Header "x,re,im,abs2".
void write_wavefunction_csv(const std::string& path, const std::vector<double>& x,
                            const std::vector<std::complex<double>>& values, const Metadata& meta = {});
/// Header "n,re,im,abs2".
void write_coefficients_csv(const std::string& path, const SpectralState& state, const Metadata& meta = {});
/// Header "x,phi_0,...,phi_nmax".
void write_eigenfunctions_csv(const std::string& path, const std::vector<double>& x, double nu, int nmax,
                              double value_scale = 1.0, const Metadata& meta = {});
/// Header "n,E_n,Z_n".
void write_eigen_table_csv(const std::string& path, double nu, int nmax, double energy_scale = 1.0,
                           double norm_scale = 1.0, const Metadata& meta = {});

/// {"nmax": N, "re": [[...]], "im": [[...]]}
std::string matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const std::string& text);
void write_matrix_json(const std::string& path, const Eigen::MatrixXcd& m);

/// Blue (t = 0) through cyan, green, yellow to red (t = 1).
std::array<std::uint8_t, 3> color_ramp(double t);

struct RenderOptions {
    int width = 800;   // plot area
    int height = 560;
    int line_width = 3;
    std::string q_label = "q";
    std::string p_label = "p";
};

/// Heatmap of rho (q horizontal, p vertical) with an optional trajectory
/// overlay.  Values map linearly onto the ramp over [0, max rho]; a grid
/// with a single repeated value maps to mid-ramp.
void render_heatmap(const std::string& png_path, const PhaseSpaceDistribution& rho,
                    const std::vector<PhasePoint>* overlay = nullptr, const RenderOptions& opts = {});

/// Reads the CSVs (axis labels from their "# units" metadata) and renders.
void render_heatmap_files(const std::string& grid_csv, const std::string& overlay_csv, const std::string& png_path);

}  // namespace ptcs

#pragma once

#include <filesystem>
#include <string>

#include "glidesnn/scenario.hpp"

namespace glidesnn {

inline constexpr const char* kErrorsHeader =
    "t,true_x,true_y,r1_ex,r1_ey,r2_ex,r2_ey,snn_ex,snn_ey,oracle_ex,oracle_ey";

/// Shortest decimal that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] std::string errors_csv(const RunReport& r);
[[nodiscard]] std::string histograms_csv(const RunReport& r);
[[nodiscard]] std::string stats_csv(const RunReport& r);

[[nodiscard]] std::string errors_svg(const RunReport& r, char axis);
[[nodiscard]] std::string histogram_svg(const RunReport& r, char axis);
[[nodiscard]] std::string stats_bar_svg(const RunReport& r);

/// Writes errors.csv, histograms.csv, stats.csv and the five plots into `dir`
/// (created if needed). An empty report throws DomainError before anything is
/// written; file system failures throw IoError naming the path.
void emit_outputs(const RunReport& r, const std::filesystem::path& dir);

/// Parses an errors.csv back into a summarized report (sigma fields stay 0).
[[nodiscard]] RunReport read_errors_csv(const std::filesystem::path& path);

}  // namespace glidesnn

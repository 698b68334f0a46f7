// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fedsmd/experiment.hpp"

namespace fedsmd {

inline constexpr const char* kSummaryHeader =
    "sweep_param,value,repetition,seed,T,global_error,final_consensus_max,"
    "mean_clip_fraction,fitted_slope";
inline constexpr const char* kCurveHeader =
    "t,f_gap_avg_clients,consensus_max,consensus_bound,alpha_t,lambda_t,"
    "clip_fraction";

/// Shortest round-trip form is not required; 17 significant digits is.
std::string format_real(double v);

std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string curve_csv(const std::vector<CurvePoint>& curve);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);
std::vector<CurvePoint> parse_curve_csv(std::string_view text);

/// Writes through a temporary file and renames, so readers never observe a
/// partial file.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

/// gnuplot script plotting f_gap_avg_clients against t on log-log axes for
/// each curve file.
std::string plot_script(const std::string& sweep_param,
                        const std::vector<SweepPoint>& points);

}  // namespace fedsmd

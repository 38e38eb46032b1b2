#pragma once

#include "asln/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace asln::harness {
struct ExperimentRecord;
}

namespace asln::svg {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Static line chart (log-log when requested); axes, decade ticks, legend.
void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, bool log_x, bool log_y);

/// Seed-mean summary chart for a set of experiment records.
void write_records_chart(const std::vector<harness::ExperimentRecord>& records,
                         const std::string& path, const std::string& title);

}  // namespace asln::svg

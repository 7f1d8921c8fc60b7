#pragma once

#include "vms/solver.hpp"

#include <ostream>

namespace vms {

struct PerfSample {
    int workers = 1;
    double seconds = 0.0;
    PhaseTimes phases;
};

struct PerfRecord {
    std::string label;
    Index dofs = 0;
    std::vector<PerfSample> samples;
};

struct EfficiencyRow {
    int workers = 1;
    double seconds = 0.0;
    double speedup = 0.0;     // T_1 / T_p
    double efficiency = 0.0;  // T_1 / (p T_p)
    bool superlinear = false;
};

/// Throws ConfigError without a p = 1 sample or with a nonpositive time.
[[nodiscard]] std::vector<EfficiencyRow> efficiency_report(const PerfRecord& record);

/// 1 / (s + (1 - s) / p); p may be infinite.
[[nodiscard]] double amdahl_speedup(double serial_fraction, double workers);

void write_perf_table(const PerfRecord& record, std::ostream& out);
void write_perf_csv(const PerfRecord& record, std::ostream& out);

/// Times linearize() (kernels, condensation, assembly) at `state` for each
/// worker count, keeping the fastest of `repeats` runs. When `matrices` is
/// given it receives the assembled matrix of each worker count.
[[nodiscard]] PerfRecord measure_assembly(const Discretization& disc, const State& state, const CaseData& data,
                                          const std::vector<int>& workers, int repeats,
                                          std::vector<linalg::CsrMatrix>* matrices = nullptr);

}  // namespace vms

#include "vms/perf.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>

namespace vms {

std::vector<EfficiencyRow> efficiency_report(const PerfRecord& record)
{
    const PerfSample* serial = nullptr;
    for (const auto& s : record.samples) {
        if (!(s.seconds > 0.0)) throw ConfigError("perf record has a nonpositive time");
        if (s.workers < 1) throw ConfigError("perf record has a worker count below 1");
        if (s.workers == 1 && serial == nullptr) serial = &s;
    }
    if (serial == nullptr) throw ConfigError("efficiency needs a single-worker measurement");
    std::vector<EfficiencyRow> rows;
    for (const auto& s : record.samples) {
        EfficiencyRow r;
        r.workers = s.workers;
        r.seconds = s.seconds;
        r.speedup = serial->seconds / s.seconds;
        r.efficiency = serial->seconds / (s.workers * s.seconds);
        r.superlinear = r.efficiency > 1.0;
        rows.push_back(r);
    }
    return rows;
}

double amdahl_speedup(double serial_fraction, double workers)
{
    if (serial_fraction < 0.0 || serial_fraction > 1.0) throw ConfigError("serial fraction must lie in [0, 1]");
    if (!(workers >= 1.0)) throw ConfigError("worker count must be at least 1");
    if (std::isinf(workers)) return 1.0 / serial_fraction;
    return 1.0 / (serial_fraction + (1.0 - serial_fraction) / workers);
}

void write_perf_table(const PerfRecord& record, std::ostream& out)
{
    const auto rows = efficiency_report(record);
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << "problem: " << record.label << " (" << record.dofs << " dofs)\n";
    out << std::setw(8) << "workers" << std::setw(14) << "seconds" << std::setw(10) << "speedup" << std::setw(12)
        << "efficiency" << std::setw(12) << "kernel" << std::setw(12) << "condense" << std::setw(12) << "assemble"
        << "  note\n";
    out << std::fixed;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& ph = record.samples[i].phases;
        out << std::setw(8) << r.workers << std::setw(14) << std::setprecision(6) << r.seconds << std::setw(10)
            << std::setprecision(3) << r.speedup << std::setw(11) << std::setprecision(1) << 100.0 * r.efficiency
            << '%' << std::setw(12) << std::setprecision(6) << ph.kernel << std::setw(12) << ph.condense
            << std::setw(12) << ph.assemble << (r.superlinear ? "  superlinear" : "") << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

void write_perf_csv(const PerfRecord& record, std::ostream& out)
{
    const auto rows = efficiency_report(record);
    const auto precision = out.precision(17);
    out << "workers,seconds,speedup,efficiency,superlinear,kernel,condense,assemble,solve,dofs\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto& ph = record.samples[i].phases;
        out << r.workers << ',' << r.seconds << ',' << r.speedup << ',' << r.efficiency << ','
            << (r.superlinear ? 1 : 0) << ',' << ph.kernel << ',' << ph.condense << ',' << ph.assemble << ','
            << ph.solve << ',' << record.dofs << '\n';
    }
    out.precision(precision);
}

PerfRecord measure_assembly(const Discretization& disc, const State& state, const CaseData& data,
                            const std::vector<int>& workers, int repeats, std::vector<linalg::CsrMatrix>* matrices)
{
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
    PerfRecord record;
    record.label = std::to_string(disc.mesh().num_elements()) + " elements, " + to_string(disc.path());
    record.dofs = dof_counts(disc.mesh()).total();
    if (matrices != nullptr) matrices->clear();
    for (int w : workers) {
        if (w < 1) throw ConfigError("worker count must be at least 1");
        PerfSample sample;
        sample.workers = w;
        sample.seconds = std::numeric_limits<double>::infinity();
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            auto lin = disc.linearize(state, data, w);
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (dt < sample.seconds) {
                sample.seconds = dt;
                sample.phases = lin.phases;
            }
            if (r == 0 && matrices != nullptr) matrices->push_back(std::move(lin.system.matrix));
        }
        record.samples.push_back(sample);
    }
    return record;
}

}  // namespace vms

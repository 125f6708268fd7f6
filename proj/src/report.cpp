#include "larp/report.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace larp {

std::string format_real(double value) {
    std::array<char, 40> buf{};
    const int written = std::snprintf(buf.data(), buf.size(), "%.17g", value);
    if (written < 0 || static_cast<std::size_t>(written) >= buf.size()) {
        throw std::runtime_error("format_real: formatting failed");
    }
    return std::string(buf.data(), static_cast<std::size_t>(written));
}

std::string cells_csv(const std::vector<CellRecord>& records) {
    std::string out = "epsilon,kind,rep,m,param,delta,risk\n";
    for (const CellRecord& r : records) {
        out += format_real(r.epsilon);
        out += ',';
        out += to_string(r.kind);
        out += ',';
        out += std::to_string(r.replication);
        out += ',';
        out += format_real(r.noise_mean);
        out += ',';
        out += format_real(r.param);
        out += ',';
        out += format_real(r.delta);
        out += ',';
        out += format_real(r.risk);
        out += '\n';
    }
    return out;
}

std::string aggregate_csv(const std::vector<AggregateRecord>& records) {
    std::string out = "epsilon,kind,r_agn_mean,r_agn_stderr\n";
    for (const AggregateRecord& r : records) {
        out += format_real(r.epsilon);
        out += ',';
        out += to_string(r.kind);
        out += ',';
        out += format_real(r.r_agn_mean);
        out += ',';
        out += format_real(r.r_agn_stderr);
        out += '\n';
    }
    return out;
}

std::string hetero_aggregate_csv(const std::vector<HeteroAggregateRecord>& records) {
    std::string out = "delta2,kind,gap_mean,gap_stderr\n";
    for (const HeteroAggregateRecord& r : records) {
        out += format_real(r.delta2);
        out += ',';
        out += to_string(r.kind);
        out += ',';
        out += format_real(r.gap_mean);
        out += ',';
        out += format_real(r.gap_stderr);
        out += '\n';
    }
    return out;
}

std::string lowerbound_csv(const std::vector<std::array<double, 5>>& rows) {
    std::string out = "p1,theta0,theta_quarter,theta2,r_agn\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += format_real(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            throw std::system_error(errno, std::generic_category(),
                                    "cannot open " + tmp.string() + " for writing");
        }
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!stream) {
            throw std::system_error(errno, std::generic_category(),
                                    "write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace larp

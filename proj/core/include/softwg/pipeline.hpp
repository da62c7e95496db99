#pragma once

#include "softwg/config.hpp"
#include "softwg/hamiltonian2d.hpp"
#include "softwg/variational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace softwg {

struct TransverseRunReport {
    double E1 = 0.0;
    double N_plus = 0.0, N_minus = 0.0;
    struct Row {
        double R = 0.0;
        double E1R = 0.0;
        double upper_bound = 0.0;
        double gap = 0.0; // E1 - E1R > 0
    };
    std::vector<Row> rows;
    double gap_slope = 0.0;      ///< least-squares slope of ln(gap) vs R
    double expected_slope = 0.0; ///< -2 sqrt(-E1)
};

struct VariationalRunReport {
    std::vector<FormBreakdown> breakdowns; ///< one per n in n_list
    bool straight = false;                 ///< theta == 0
    bool divergent = false;                ///< theta == pi: the limit is -infinity
    double limit = 0.0;                    ///< -inf when divergent
    std::optional<Certificate> certificate;
    std::string certificate_note; ///< "no certificate (straight)" and similar
};

struct SpectrumRunReport {
    SpectralReport spectral;
    double variational_limit = 0.0; ///< -inf at theta = pi, 0 at theta = 0
};

struct SweepRowReport {
    double theta = 0.0;
    double E1 = 0.0;
    double threshold = 0.0;
    std::vector<double> lambdas;
    int binding_count = 0;
    double variational_limit = 0.0;
    int certificate_n0 = 0; ///< 0 when none was found
    std::string error;      ///< non-empty when the row failed; run continues
};

TransverseRunReport run_transverse(const RunConfig& cfg);
VariationalRunReport run_variational(const RunConfig& cfg);
SpectrumRunReport run_spectrum(const RunConfig& cfg, int threads = 1,
                               const std::string& matrix_dump_path = {});
std::vector<SweepRowReport> run_sweep(const RunConfig& cfg, int threads = 1);

// CSV (fixed headers, 17-significant-digit decimals) and JSON documents;
// the JSON always embeds the resolved config.
std::string to_csv(const TransverseRunReport& r);
std::string to_csv(const VariationalRunReport& r);
std::string to_csv(const SpectrumRunReport& r, const RunConfig& cfg);
std::string to_csv(const std::vector<SweepRowReport>& rows, const RunConfig& cfg);

std::string to_json(const TransverseRunReport& r, const RunConfig& cfg);
std::string to_json(const VariationalRunReport& r, const RunConfig& cfg);
std::string to_json(const SpectrumRunReport& r, const RunConfig& cfg);
std::string to_json(const std::vector<SweepRowReport>& rows, const RunConfig& cfg);

} // namespace softwg

#pragma once

// Seeded batches of searches, outlier cleaning and CSV persistence.

#include "difftrail/search.hpp"
#include "difftrail/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace difftrail {

struct ExperimentRecord {
    std::int64_t experiment_id = 0;
    Technique technique = Technique::baseline;
    std::string cipher; // CipherSpec::name()
    int rounds = 0;
    int target_weight = 0;
    std::uint64_t seed = 0;
    int best_weight = 0;
    std::int64_t iterations = 0;
    double duration_s = 0;
    bool terminated_early = false;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

// Runs i = 0..n_runs-1 use seed base_seed + i and experiment_id i. Up to `jobs`
// runs execute concurrently; the output is sorted by experiment_id.
std::vector<ExperimentRecord> run_batch(const SearchConfig& config, const SamplingContext& ctx, int n_runs,
                                        std::uint64_t base_seed, int jobs = 1);

enum class IqrMode { fences_1_5, middle_50 };
IqrMode parse_iqr_mode(std::string_view s);

// Drops records whose best weight is not the target, then drops records whose
// iterations or duration fall outside the IQR range computed over the
// survivors of the first step. May return an empty list.
std::vector<ExperimentRecord> clean_data(const std::vector<ExperimentRecord>& records, int target_weight,
                                         IqrMode mode = IqrMode::fences_1_5);

std::vector<double> iterations_of(const std::vector<ExperimentRecord>& records);
std::vector<double> durations_of(const std::vector<ExperimentRecord>& records);

inline constexpr const char* experiment_csv_header =
    "experiment_id,technique,cipher,rounds,target_weight,seed,best_weight,iterations,duration_s,terminated_early";

std::string to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> from_csv(std::string_view text, const std::string& source = "csv");
void write_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);
std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path);

} // namespace difftrail

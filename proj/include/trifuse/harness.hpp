#ifndef TRIFUSE_HARNESS_HPP
#define TRIFUSE_HARNESS_HPP

#include "trifuse/clahe.hpp"
#include "trifuse/metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace trifuse {

/// Batch-pipeline configuration; file form is `key = value` lines under
/// `[section]` headers.
struct RunConfig {
    std::filesystem::path dataset_dir;
    int resize_w = 640;
    int resize_h = 480;
    ThermalBand band = ThermalBand::LWIR;

    std::vector<std::string> methods;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;
    int jobs = 1;
    bool recolor = false;
    bool quantize_metrics = true;

    ClaheConfig clahe;
    int lp_levels = 4;
    std::filesystem::path weights_tri;
    std::filesystem::path weights_dual;
    std::string cascade_cmd;
};

/// Parse a config file; unknown sections or keys are errors.
RunConfig parse_config_file(const std::filesystem::path& path);

/// True iff `method` is in the registered set (lp3, gff3, net-dual, net-tri,
/// net-tri-realswir, cascade, cascade:<cmd>).
bool method_registered(const std::string& method);

struct IngestResult {
    std::vector<Sample> samples;  // deterministic order by stem
    std::vector<std::string> warnings;
};

/// Pair files across rgb/ and thermal/ (and optional swir/) by filename stem,
/// decode, resize, convert to a common (0,255) range and synthesize the
/// derived band when any requested method needs it.
IngestResult ingest(const RunConfig& cfg);

struct RunReport {
    std::vector<MetricReport> reports;
    std::vector<std::string> warnings;
    int item_failures = 0;
};

/// Fuse every (sample, method) pair, score the results, and write fused
/// images plus metrics.csv / per_source.csv / warnings.jsonl under
/// cfg.output_dir.
RunReport run_fuse(const RunConfig& cfg);

/// Score pre-computed fused images (<id>.png under fused_dir) against the
/// ingested dataset.
RunReport score_fused_dir(const RunConfig& cfg, const std::filesystem::path& fused_dir,
                          const std::string& method);

// ---- radar aggregation ----------------------------------------------------

struct RadarTable {
    std::vector<std::string> methods;
    std::vector<std::string> metrics;  // en, sd, sf, mi, vif, qabf, ssim
    Eigen::MatrixXd values;            // methods x metrics, cross-dataset means
    bool normalized = true;            // false when only one method was given
};

/// Min-max normalize per-dataset per-metric method means onto [0,1] (best 1,
/// worst 0, ties 0.5) and average across datasets.
RadarTable radar_from_csvs(
    const std::vector<std::pair<std::string, std::filesystem::path>>& dataset_csvs);

/// Emit radar.csv (method x metric matrix) and radar_polar.csv (plot-ready
/// angular rows) into `dir`.
void write_radar(const RadarTable& table, const std::filesystem::path& dir);

// ---- throughput ------------------------------------------------------------

struct BenchRow {
    std::string method;
    double ms_median = 0.0, ms_p10 = 0.0, ms_p90 = 0.0, fps = 0.0;
    long params = 0;
    long peak_rss_kb = 0;
};

/// Median / p10 / p90 frame times per method at the given size.
std::vector<BenchRow> bench_methods(const RunConfig& cfg, int width, int height, int reps);
std::string bench_csv_header();
std::string bench_csv_row(const BenchRow& row);

}  // namespace trifuse

#endif

#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chunkwise/chunker.hpp"
#include "chunkwise/errors.hpp"
#include "chunkwise/headings.hpp"
#include "chunkwise/layout.hpp"
#include "chunkwise/markdown.hpp"
#include "chunkwise/raw_document.hpp"
#include "chunkwise/tables.hpp"

namespace chunkwise {

enum class OutputFormat { markdown, json };

struct PipelineConfig {
    LayoutConfig layout;
    TableConfig tables;
    HeadingConfig headings;
    ChunkerConfig chunker;
    OutputFormat output = OutputFormat::markdown;

    /// Throws Error(ConfigError) for a non-positive constant or an out-of-range fraction.
    void validate() const;

    static PipelineConfig from_json(const std::string& json_text);
    std::string to_json() const;
};

inline constexpr const char* kConfigEnv = "CHUNKWISE_CONFIG";

/// Explicit path, else $CHUNKWISE_CONFIG, else defaults. Always validated.
PipelineConfig load_config(const std::optional<std::filesystem::path>& path = std::nullopt);

struct ParsedDocument {
    std::string doc_id;
    int page_count = 0;
    MarkdownDoc markdown;
};

/// Layout, tables, headings and markdown emission over already-extracted primitives.
MarkdownDoc analyze(const RawDocument& raw, const PipelineConfig& cfg);

/// By extension: .pdf is extracted, .json is a span fixture, .md/.markdown is read as-is.
RawDocument load_raw(const std::filesystem::path& path);
ParsedDocument parse_document(const std::filesystem::path& path, const PipelineConfig& cfg);

struct DocumentResult {
    std::filesystem::path path;
    std::string doc_id;
    int page_count = 0;
    MarkdownDoc markdown;
    std::vector<Chunk> chunks;
    std::optional<ErrorCode> error_code;
    std::string error;

    bool ok() const { return !error_code; }
};

/// Results come back in input order; a failing document does not stop the others.
std::vector<DocumentResult> run_pipeline(const std::vector<std::filesystem::path>& inputs, const PipelineConfig& cfg,
                                         int jobs = 1);

/// Literal paths pass through; patterns with * ? [ are expanded and sorted.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& patterns);

/// E = load x hours x P, in watt-hours.
double compute_cpu_energy(double load_fraction, double hours, double power_watts);

/// Samples this process's CPU load, as a fraction of all cores, on a background thread.
class CpuLoadSampler {
public:
    explicit CpuLoadSampler(std::chrono::milliseconds interval = std::chrono::milliseconds(1000));
    ~CpuLoadSampler();
    CpuLoadSampler(const CpuLoadSampler&) = delete;
    CpuLoadSampler& operator=(const CpuLoadSampler&) = delete;

    void start();
    /// Takes a final partial sample and returns the duration-weighted mean load.
    double stop();
    std::size_t samples() const { return samples_; }

private:
    void sample();

    std::chrono::milliseconds interval_;
    std::thread thread_;
    std::mutex mutex_;
    std::condition_variable cv_;
    bool running_ = false;
    std::size_t samples_ = 0;
    double weighted_load_ = 0.0;
    double weighted_time_ = 0.0;
    double last_cpu_ = 0.0;
    std::chrono::steady_clock::time_point last_wall_;
};

/// Process CPU time in seconds.
double process_cpu_seconds();

struct BenchDocument {
    std::string path;
    int pages = 0;
    double parse_ms = 0.0;
    std::string error;
};

struct BenchReport {
    std::vector<BenchDocument> documents;
    int total_pages = 0;
    double total_parse_ms = 0.0;
    double per_page_mean_ms = 0.0;
    double per_page_std_ms = 0.0;
    double total_wall_hours = 0.0;
    double mean_cpu_load = 0.0;
    std::size_t load_samples = 0;
    double cpu_power_watts = 0.0;
    double cpu_energy_wh = 0.0;
    double gpu_energy_wh = 0.0;

    std::string to_json() const;
    /// "105 ms ± 296"
    std::string per_page_line() const;
    bool any_failed() const;
};

/// Parses one document at a time; chunking is not timed.
BenchReport bench_parse(const std::vector<std::filesystem::path>& inputs, const PipelineConfig& cfg, double power_watts,
                        std::chrono::milliseconds sample_interval = std::chrono::milliseconds(1000));

}  // namespace chunkwise

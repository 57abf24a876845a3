#include "chunkwise/pipeline.hpp"

#include <glob.h>
#include <sys/resource.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chunkwise/pdf/extract.hpp"
#include "json.hpp"

namespace chunkwise {

using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string lower_ext(const std::filesystem::path& p) {
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e;
}

void positive(double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) throw Error(ErrorCode::ConfigError, std::string(name) + " must be positive");
}

void fraction(double v, const char* name) {
    if (!(v > 0 && v <= 1)) throw Error(ErrorCode::ConfigError, std::string(name) + " must lie in (0, 1]");
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::ConfigError, std::string("bad type for \"") + key + "\"");
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
            throw Error(ErrorCode::ConfigError, "unknown key \"" + k + "\" in " + where);
    }
}

const json& section(const json& j, const char* key) {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j[key].is_object()) throw Error(ErrorCode::ConfigError, std::string("\"") + key + "\" must be an object");
    return j[key];
}

}  // namespace

void PipelineConfig::validate() const {
    positive(layout.line_merge_tolerance, "layout.line_merge_tolerance");
    positive(layout.block_gap_factor, "layout.block_gap_factor");
    fraction(layout.repeat_page_fraction, "layout.repeat_page_fraction");
    positive(layout.repeat_min_pages, "layout.repeat_min_pages");
    fraction(layout.link_overlap, "layout.link_overlap");
    positive(tables.snap_tolerance, "tables.snap_tolerance");
    fraction(headings.metadata_match_rate, "headings.metadata_match_rate");
    positive(headings.toc_min_run, "headings.toc_min_run");
    positive(headings.toc_scan_pages, "headings.toc_scan_pages");
    positive(headings.indent_granularity, "headings.indent_granularity");
    positive(headings.bold_max_words, "headings.bold_max_words");
    positive(headings.size_margin, "headings.size_margin");
    chunker.validate();
}

PipelineConfig PipelineConfig::from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("config is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    reject_unknown(j, {"layout", "tables", "headings", "chunker", "output"}, "config");
    PipelineConfig c;
    const json& l = section(j, "layout");
    reject_unknown(l, {"line_merge_tolerance", "block_gap_factor", "repeat_page_fraction", "repeat_min_pages",
                       "link_overlap"},
                   "layout");
    read_if(l, "line_merge_tolerance", c.layout.line_merge_tolerance);
    read_if(l, "block_gap_factor", c.layout.block_gap_factor);
    read_if(l, "repeat_page_fraction", c.layout.repeat_page_fraction);
    read_if(l, "repeat_min_pages", c.layout.repeat_min_pages);
    read_if(l, "link_overlap", c.layout.link_overlap);
    const json& t = section(j, "tables");
    reject_unknown(t, {"snap_tolerance"}, "tables");
    read_if(t, "snap_tolerance", c.tables.snap_tolerance);
    const json& h = section(j, "headings");
    reject_unknown(h, {"metadata_match_rate", "toc_min_run", "toc_scan_pages", "indent_granularity", "bold_max_words",
                       "size_margin"},
                   "headings");
    read_if(h, "metadata_match_rate", c.headings.metadata_match_rate);
    read_if(h, "toc_min_run", c.headings.toc_min_run);
    read_if(h, "toc_scan_pages", c.headings.toc_scan_pages);
    read_if(h, "indent_granularity", c.headings.indent_granularity);
    read_if(h, "bold_max_words", c.headings.bold_max_words);
    read_if(h, "size_margin", c.headings.size_margin);
    const json& k = section(j, "chunker");
    reject_unknown(k, {"soft_limit_words", "hard_limit_words", "min_words"}, "chunker");
    read_if(k, "soft_limit_words", c.chunker.soft_limit_words);
    read_if(k, "hard_limit_words", c.chunker.hard_limit_words);
    read_if(k, "min_words", c.chunker.min_words);
    if (j.contains("output")) {
        std::string o;
        read_if(j, "output", o);
        if (o == "md" || o == "markdown") c.output = OutputFormat::markdown;
        else if (o == "json") c.output = OutputFormat::json;
        else throw Error(ErrorCode::ConfigError, "output must be \"md\" or \"json\"");
    }
    c.validate();
    return c;
}

std::string PipelineConfig::to_json() const {
    nlohmann::ordered_json j;
    j["layout"] = {{"line_merge_tolerance", layout.line_merge_tolerance},
                   {"block_gap_factor", layout.block_gap_factor},
                   {"repeat_page_fraction", layout.repeat_page_fraction},
                   {"repeat_min_pages", layout.repeat_min_pages},
                   {"link_overlap", layout.link_overlap}};
    j["tables"] = {{"snap_tolerance", tables.snap_tolerance}};
    j["headings"] = {{"metadata_match_rate", headings.metadata_match_rate},
                     {"toc_min_run", headings.toc_min_run},
                     {"toc_scan_pages", headings.toc_scan_pages},
                     {"indent_granularity", headings.indent_granularity},
                     {"bold_max_words", headings.bold_max_words},
                     {"size_margin", headings.size_margin}};
    j["chunker"] = {{"soft_limit_words", chunker.soft_limit_words},
                    {"hard_limit_words", chunker.hard_limit_words},
                    {"min_words", chunker.min_words}};
    j["output"] = output == OutputFormat::json ? "json" : "md";
    return j.dump(2);
}

PipelineConfig load_config(const std::optional<std::filesystem::path>& path) {
    std::optional<std::filesystem::path> p = path;
    if (!p) {
        const char* env = std::getenv(kConfigEnv);
        if (env && *env) p = env;
    }
    if (!p) {
        PipelineConfig c;
        c.validate();
        return c;
    }
    std::string text;
    try {
        text = read_text(*p);
    } catch (const Error&) {
        throw Error(ErrorCode::ConfigError, "cannot read config " + p->string());
    }
    return PipelineConfig::from_json(text);
}

MarkdownDoc analyze(const RawDocument& raw, const PipelineConfig& cfg) {
    RawDocument doc = bind_links(remove_headers_footers(raw, cfg.layout), cfg.layout);
    std::vector<bool> consumed;
    const auto tables = extract_tables(doc, consumed, cfg.tables);

    RawDocument flow = doc;
    flow.spans.clear();
    for (std::size_t i = 0; i < doc.spans.size(); ++i)
        if (!consumed[i]) flow.spans.push_back(doc.spans[i]);

    // A page of nothing but tables still has body text statistics.
    const BodyStats stats = estimate_body_stats(flow.spans.empty() ? doc : flow, cfg.layout);
    auto blocks = assemble_blocks(assemble_lines(flow, cfg.layout), stats, cfg.layout);
    const auto title_block = main_title_block(blocks, stats);
    std::optional<std::string> title;
    if (title_block) {
        title = blocks[*title_block].text();
        blocks[*title_block].kind = BlockKind::other;
    }
    const auto headings = resolve_headings(doc, blocks, stats, cfg.headings);
    return emit(blocks, headings, tables, title, title_block);
}

RawDocument load_raw(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".json") return load_fixture(path);
    return extract_raw(path);
}

ParsedDocument parse_document(const std::filesystem::path& path, const PipelineConfig& cfg) {
    ParsedDocument out;
    out.doc_id = path.stem().string();
    const std::string ext = lower_ext(path);
    if (ext == ".md" || ext == ".markdown") {
        out.markdown = markdown_from_text(read_text(path));
        return out;
    }
    const RawDocument raw = load_raw(path);
    out.page_count = raw.page_count;
    out.markdown = analyze(raw, cfg);
    return out;
}

std::vector<DocumentResult> run_pipeline(const std::vector<std::filesystem::path>& inputs, const PipelineConfig& cfg,
                                         int jobs) {
    cfg.validate();
    std::vector<DocumentResult> results(inputs.size());
    auto work = [&](std::size_t i) {
        DocumentResult& r = results[i];
        r.path = inputs[i];
        r.doc_id = inputs[i].stem().string();
        try {
            ParsedDocument p = parse_document(inputs[i], cfg);
            r.page_count = p.page_count;
            r.chunks = chunk_markdown(p.markdown, cfg.chunker, p.doc_id);
            r.markdown = std::move(p.markdown);
        } catch (const Error& e) {
            r.error_code = e.code();
            r.error = e.what();
        } catch (const std::exception& e) {
            r.error_code = ErrorCode::MalformedPdf;
            r.error = e.what();
        }
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), inputs.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < inputs.size(); ++i) work(i);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < inputs.size(); i = next++) work(i);
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& patterns) {
    std::vector<std::filesystem::path> out;
    for (const auto& p : patterns) {
        if (p.find_first_of("*?[") == std::string::npos) {
            if (std::filesystem::is_directory(p)) {
                std::vector<std::filesystem::path> found;
                for (const auto& e : std::filesystem::directory_iterator(p))
                    if (e.is_regular_file() && lower_ext(e.path()) == ".pdf") found.push_back(e.path());
                std::sort(found.begin(), found.end());
                out.insert(out.end(), found.begin(), found.end());
            } else {
                out.emplace_back(p);
            }
            continue;
        }
        glob_t g{};
        const int rc = ::glob(p.c_str(), 0, nullptr, &g);
        if (rc == 0) {
            for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
        }
        ::globfree(&g);
        if (rc != 0 && rc != GLOB_NOMATCH) throw Error(ErrorCode::IoError, "cannot expand " + p);
    }
    return out;
}

double compute_cpu_energy(double load_fraction, double hours, double power_watts) {
    if (!(load_fraction >= 0 && load_fraction <= 1)) throw Error(ErrorCode::DomainError, "load fraction outside [0, 1]");
    if (!(hours >= 0) || !std::isfinite(hours)) throw Error(ErrorCode::DomainError, "hours must be non-negative");
    if (!(power_watts > 0) || !std::isfinite(power_watts)) throw Error(ErrorCode::DomainError, "power must be positive");
    return load_fraction * hours * power_watts;
}

double process_cpu_seconds() {
    rusage ru{};
    ::getrusage(RUSAGE_SELF, &ru);
    auto sec = [](const timeval& t) { return static_cast<double>(t.tv_sec) + static_cast<double>(t.tv_usec) * 1e-6; };
    return sec(ru.ru_utime) + sec(ru.ru_stime);
}

CpuLoadSampler::CpuLoadSampler(std::chrono::milliseconds interval) : interval_(interval) {}

CpuLoadSampler::~CpuLoadSampler() {
    if (running_) stop();
}

void CpuLoadSampler::start() {
    std::lock_guard lock(mutex_);
    if (running_) return;
    running_ = true;
    samples_ = 0;
    weighted_load_ = weighted_time_ = 0.0;
    last_cpu_ = process_cpu_seconds();
    last_wall_ = std::chrono::steady_clock::now();
    thread_ = std::thread([this] {
        std::unique_lock lk(mutex_);
        while (running_) {
            if (cv_.wait_for(lk, interval_, [this] { return !running_; })) break;
            sample();
        }
    });
}

void CpuLoadSampler::sample() {
    const double cpu = process_cpu_seconds();
    const auto now = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(now - last_wall_).count();
    if (wall <= 0) return;
    const double cores = std::max(1u, std::thread::hardware_concurrency());
    const double load = std::clamp((cpu - last_cpu_) / (wall * cores), 0.0, 1.0);
    weighted_load_ += load * wall;
    weighted_time_ += wall;
    ++samples_;
    last_cpu_ = cpu;
    last_wall_ = now;
}

double CpuLoadSampler::stop() {
    {
        std::lock_guard lock(mutex_);
        if (!running_) return weighted_time_ > 0 ? weighted_load_ / weighted_time_ : 0.0;
        running_ = false;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
    std::lock_guard lock(mutex_);
    sample();
    return weighted_time_ > 0 ? std::clamp(weighted_load_ / weighted_time_, 0.0, 1.0) : 0.0;
}

std::string BenchReport::per_page_line() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.0f ms \xC2\xB1 %.0f", per_page_mean_ms, per_page_std_ms);
    return buf;
}

bool BenchReport::any_failed() const {
    return std::any_of(documents.begin(), documents.end(), [](const BenchDocument& d) { return !d.error.empty(); });
}

std::string BenchReport::to_json() const {
    nlohmann::ordered_json j;
    j["documents"] = nlohmann::ordered_json::array();
    for (const auto& d : documents) {
        nlohmann::ordered_json row{{"path", d.path}, {"pages", d.pages}, {"parse_ms", d.parse_ms}};
        if (!d.error.empty()) row["error"] = d.error;
        j["documents"].push_back(row);
    }
    j["total_pages"] = total_pages;
    j["total_parse_ms"] = total_parse_ms;
    j["per_page_mean_ms"] = per_page_mean_ms;
    j["per_page_std_ms"] = per_page_std_ms;
    j["per_page"] = per_page_line();
    j["total_wall_hours"] = total_wall_hours;
    j["mean_cpu_load"] = mean_cpu_load;
    j["load_samples"] = load_samples;
    j["cpu_power_watts"] = cpu_power_watts;
    j["cpu_energy_wh"] = cpu_energy_wh;
    j["gpu_energy_wh"] = gpu_energy_wh;
    return j.dump(2);
}

BenchReport bench_parse(const std::vector<std::filesystem::path>& inputs, const PipelineConfig& cfg, double power_watts,
                        std::chrono::milliseconds sample_interval) {
    if (!(power_watts > 0)) throw Error(ErrorCode::DomainError, "power must be positive");
    cfg.validate();
    BenchReport r;
    r.cpu_power_watts = power_watts;
    CpuLoadSampler sampler(sample_interval);
    const auto wall0 = std::chrono::steady_clock::now();
    sampler.start();
    for (const auto& path : inputs) {
        BenchDocument d;
        d.path = path.string();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            d.pages = parse_document(path, cfg).page_count;
        } catch (const std::exception& e) {
            d.error = e.what();
        }
        d.parse_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        r.documents.push_back(std::move(d));
    }
    r.mean_cpu_load = sampler.stop();
    r.load_samples = sampler.samples();
    r.total_wall_hours = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count() / 3600.0;

    // Each page of a document is credited with that document's time divided by its page count.
    double sum_sq = 0;
    for (const auto& d : r.documents) {
        if (!d.error.empty() || d.pages <= 0) continue;
        r.total_pages += d.pages;
        r.total_parse_ms += d.parse_ms;
    }
    if (r.total_pages > 0) {
        r.per_page_mean_ms = r.total_parse_ms / r.total_pages;
        for (const auto& d : r.documents) {
            if (!d.error.empty() || d.pages <= 0) continue;
            const double diff = d.parse_ms / d.pages - r.per_page_mean_ms;
            sum_sq += diff * diff * d.pages;
        }
        r.per_page_std_ms = std::sqrt(sum_sq / r.total_pages);
    }
    r.cpu_energy_wh = compute_cpu_energy(r.mean_cpu_load, r.total_wall_hours, power_watts);
    r.gpu_energy_wh = 0.0;
    return r;
}

}  // namespace chunkwise

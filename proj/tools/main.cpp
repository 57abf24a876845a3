// Command-line front end: parse, chunk, bench, eval, gen-corpus.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "chunkwise/corpus.hpp"
#include "chunkwise/eval.hpp"
#include "chunkwise/pipeline.hpp"
#include "json.hpp"

using namespace chunkwise;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
    return file;
}

void report_failure(const DocumentResult& r) {
    nlohmann::ordered_json j{{"path", r.path.string()},
                             {"error", std::string(to_string(*r.error_code))},
                             {"message", r.error}};
    std::cerr << j.dump() << "\n";
}

nlohmann::ordered_json markdown_json(const DocumentResult& r) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["page_count"] = r.page_count;
    j["main_title"] = r.markdown.main_title ? nlohmann::ordered_json(*r.markdown.main_title) : nullptr;
    j["markdown"] = r.markdown.text;
    auto pages = nlohmann::ordered_json::array();
    for (const auto& p : r.markdown.line_pages)
        pages.push_back(p ? nlohmann::ordered_json::array({p->start, p->end}) : nlohmann::ordered_json(nullptr));
    j["line_pages"] = pages;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heuristic PDF to Markdown parser and title-aware chunker"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, std::string("Pipeline config JSON (default: $") + kConfigEnv + ")");

    auto* parse = app.add_subcommand("parse", "Convert documents to Markdown");
    std::vector<std::string> parse_inputs;
    std::string spans_out, parse_format, parse_output;
    int parse_jobs = 1;
    parse->add_option("inputs", parse_inputs, "PDF, fixture JSON or Markdown paths and globs")->required();
    parse->add_option("--spans", spans_out, "Also write the extracted primitives of the first input as fixture JSON");
    parse->add_option("--out", parse_format, "Output format")->check(CLI::IsMember({"md", "json"}));
    parse->add_option("-o,--output", parse_output, "Output file (default stdout)");
    parse->add_option("-j,--jobs", parse_jobs, "Documents parsed concurrently")->check(CLI::PositiveNumber);

    auto* chunk = app.add_subcommand("chunk", "Parse and chunk documents into JSONL");
    std::vector<std::string> chunk_inputs;
    std::optional<int> soft, hard, min_words;
    std::string chunk_output;
    int chunk_jobs = 1;
    chunk->add_option("inputs", chunk_inputs, "PDF, fixture JSON or Markdown paths and globs")->required();
    chunk->add_option("--soft-limit", soft, "Soft limit in words");
    chunk->add_option("--hard-limit", hard, "Hard limit in words");
    chunk->add_option("--min-words", min_words, "Drop chunks shorter than this");
    chunk->add_option("--out", chunk_output, "Chunk JSONL path (default stdout)");
    chunk->add_option("-j,--jobs", chunk_jobs, "Documents parsed concurrently")->check(CLI::PositiveNumber);

    auto* bench = app.add_subcommand("bench", "Time parsing and estimate CPU energy");
    std::string bench_dir, bench_report;
    double tdp = 0;
    bench->add_option("dir", bench_dir, "Directory of PDFs, or a glob")->required();
    bench->add_option("--cpu-tdp", tdp, "Rated CPU power in watts")->required()->check(CLI::PositiveNumber);
    bench->add_option("--report", bench_report, "Write the report JSON here");

    auto* eval = app.add_subcommand("eval", "Retrieval evaluation of a chunk file");
    std::string dataset, chunks_path, embedder_spec = "hash", cache, eval_report;
    int k = 10;
    bool fuzzy = false;
    RemoteOptions remote;
    eval->add_option("--dataset", dataset, "Question JSONL")->required();
    eval->add_option("--chunks", chunks_path, "Chunk JSONL")->required();
    eval->add_option("--embedder", embedder_spec, "\"hash\" or an http:// embedding endpoint");
    eval->add_option("-k", k, "Cutoff rank")->check(CLI::PositiveNumber);
    eval->add_flag("--fuzzy", fuzzy, "Token-overlap relevance for reflowed text");
    eval->add_option("--cache", cache, "Embedding cache JSONL");
    eval->add_option("--batch-size", remote.batch_size, "Texts per remote request")->check(CLI::PositiveNumber);
    eval->add_option("--report", eval_report, "Write the report JSON here (default stdout)");

    auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic eval corpus");
    std::string gen_dir;
    std::uint32_t seed = 7;
    int bench_pages = 0;
    gen->add_option("dir", gen_dir, "Output directory")->required();
    gen->add_option("--seed", seed, "Generator seed");
    gen->add_option("--bench-pages", bench_pages, "Also write bench.pdf with this many pages");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = load_config(config_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(config_path));

        if (*parse) {
            if (parse_format == "json") cfg.output = OutputFormat::json;
            else if (parse_format == "md") cfg.output = OutputFormat::markdown;
            const auto inputs = expand_inputs(parse_inputs);
            if (!spans_out.empty() && !inputs.empty()) dump_fixture(load_raw(inputs.front()), spans_out);
            const auto results = run_pipeline(inputs, cfg, parse_jobs);
            std::ofstream file;
            std::ostream& out = open_out(parse_output, file);
            bool failed = false;
            for (const auto& r : results) {
                if (!r.ok()) {
                    report_failure(r);
                    failed = true;
                    continue;
                }
                if (cfg.output == OutputFormat::json) out << markdown_json(r).dump() << "\n";
                else out << r.markdown.text << "\n";
            }
            return failed ? 1 : 0;
        }

        if (*chunk) {
            if (soft) cfg.chunker.soft_limit_words = *soft;
            if (hard) cfg.chunker.hard_limit_words = *hard;
            if (min_words) cfg.chunker.min_words = *min_words;
            cfg.chunker.validate();
            const auto results = run_pipeline(expand_inputs(chunk_inputs), cfg, chunk_jobs);
            std::ofstream file;
            std::ostream& out = open_out(chunk_output, file);
            bool failed = false;
            for (const auto& r : results) {
                if (!r.ok()) {
                    report_failure(r);
                    failed = true;
                    continue;
                }
                out << chunk_jsonl(r.chunks);
            }
            return failed ? 1 : 0;
        }

        if (*bench) {
            const auto report = bench_parse(expand_inputs({bench_dir}), cfg, tdp);
            if (!bench_report.empty()) {
                std::ofstream file;
                open_out(bench_report, file) << report.to_json() << "\n";
            }
            std::printf("pages: %d\nper-page parse time: %s\ncpu load: %.4f\nwall: %.6f h\ncpu energy: %.6f Wh\n"
                        "gpu energy: %.1f Wh\n",
                        report.total_pages, report.per_page_line().c_str(), report.mean_cpu_load,
                        report.total_wall_hours, report.cpu_energy_wh, report.gpu_energy_wh);
            for (const auto& d : report.documents)
                if (!d.error.empty()) std::fprintf(stderr, "%s: %s\n", d.path.c_str(), d.error.c_str());
            return report.any_failed() ? 1 : 0;
        }

        if (*eval) {
            auto embedder = make_embedder(embedder_spec, remote);
            EvalOptions opt;
            opt.k = k;
            opt.fuzzy = fuzzy;
            if (!cache.empty()) opt.cache = cache;
            const std::string report = run_eval(dataset, chunks_path, *embedder, opt);
            std::ofstream file;
            open_out(eval_report, file) << report << "\n";
            return 0;
        }

        if (*gen) {
            const auto corpus = write_eval_corpus(gen_dir, seed);
            for (const auto& p : corpus.pdfs) std::cout << p.string() << "\n";
            std::cout << corpus.questions.string() << "\n";
            if (bench_pages > 0) {
                const auto path = std::filesystem::path(gen_dir) / "bench.pdf";
                write_bench_pdf(path, bench_pages);
                std::cout << path.string() << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}

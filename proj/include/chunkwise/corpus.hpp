#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "chunkwise/eval.hpp"
#include "chunkwise/pdf/writer.hpp"

namespace chunkwise {

/// Flows headings, paragraphs and ruled tables onto letter pages, with a
/// running header and page-number footer on every page.
class PageFlow {
public:
    PageFlow(pdf::Writer& writer, std::string running_header);

    void title(const std::string& text);
    void heading(const std::string& text, int level);
    void paragraph(const std::string& text);
    void table(const std::vector<std::vector<std::string>>& rows);
    void page_break() { new_page(); }
    void outline_entry(const std::string& text, int level);
    void finish();

    /// Once the flow would start page `n + 1`, further content is dropped.
    void limit_pages(int n) { max_pages_ = n; }
    bool full() const { return full_; }

private:
    void ensure(double height);
    void new_page();

    pdf::Writer& w_;
    std::string header_;
    int page_ = -1;
    double y_ = 0;
    int max_pages_ = 0;
    bool full_ = false;
    static constexpr double kLeft = 72, kRight = 540, kTop = 90, kBottom = 720;
};

struct EvalCorpus {
    std::vector<std::filesystem::path> pdfs;
    std::filesystem::path questions;
};

/// Five small PDFs and a single-mode question file whose answer passages
/// appear verbatim in the documents. Deterministic for a given seed.
EvalCorpus write_eval_corpus(const std::filesystem::path& dir, std::uint32_t seed = 7);

/// Text-heavy PDF with headings, paragraphs and a table every few pages.
void write_bench_pdf(const std::filesystem::path& path, int pages = 50, std::uint32_t seed = 11);

}  // namespace chunkwise

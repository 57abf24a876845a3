#include "chunkwise/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "chunkwise/errors.hpp"

namespace chunkwise {

using pdf::Face;
using pdf::Writer;

namespace {

constexpr double kBody = 10.5;
constexpr double kLeading = 14.0;

const char* const kVocabulary[] = {
    "analysis", "archive",  "balance", "barrier",  "beacon",  "border",   "bridge",  "cargo",   "channel", "circuit",
    "climate",  "cluster",  "coastal", "column",   "compass", "contract", "current", "delta",   "density", "depot",
    "design",   "drainage", "estate",  "factor",   "fabric",  "ferry",    "field",   "filter",  "forest",  "freight",
    "gallery",  "garden",   "harbor",  "harvest",  "horizon", "index",    "inland",  "journal", "kernel",  "ladder",
    "lagoon",   "lantern",  "ledger",  "lumber",   "margin",  "market",   "meadow",  "mineral", "mirror",  "module",
    "network",  "orchard",  "outpost", "parcel",   "pasture", "pattern",  "pillar",  "pioneer", "plateau", "portal",
    "quarry",   "railway",  "record",  "reserve",  "ridge",   "river",    "routine", "salvage", "schedule", "sector",
    "shelter",  "signal",   "summit",  "surface",  "survey",  "tariff",   "terrace", "timber",  "tunnel",  "valley",
    "vessel",   "village",  "voltage", "warden",   "window",  "harness",  "granite", "furnace", "estuary", "dialect"};
const char* const kGlue[] = {"the", "a", "of", "in", "for", "with", "near", "under", "across", "beyond"};
const char* const kVerbs[] = {"supports", "records", "follows", "crosses", "shapes", "limits", "feeds", "marks",
                              "guards", "replaces", "balances", "connects"};

std::string sentence(std::mt19937& rng, int words) {
    std::string s;
    for (int i = 0; i < words; ++i) {
        std::string w;
        if (i == words / 2) w = kVerbs[rng() % std::size(kVerbs)];
        else if (i % 3 == 1) w = kGlue[rng() % std::size(kGlue)];
        else w = kVocabulary[rng() % std::size(kVocabulary)];
        if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        s += (i ? " " : "") + w;
    }
    return s + ".";
}

std::string paragraph_text(std::mt19937& rng, int target_words) {
    std::string p;
    int n = 0;
    while (n < target_words) {
        const int len = 9 + static_cast<int>(rng() % 8);
        p += (p.empty() ? "" : " ") + sentence(rng, len);
        n += len;
    }
    return p;
}

std::vector<std::string> wrap(const std::string& text, Face face, double size, double width) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string word, cur;
    while (in >> word) {
        const std::string trial = cur.empty() ? word : cur + " " + word;
        if (!cur.empty() && Writer::text_width(trial, face, size) > width) {
            lines.push_back(cur);
            cur = word;
        } else {
            cur = trial;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

}  // namespace

PageFlow::PageFlow(Writer& writer, std::string running_header) : w_(writer), header_(std::move(running_header)) {}

void PageFlow::new_page() {
    if (max_pages_ > 0 && w_.page_count() >= max_pages_) {
        full_ = true;
        y_ = kTop;
        return;
    }
    page_ = w_.add_page();
    y_ = kTop;
    w_.text(page_, kLeft, 50, header_, Face::Helvetica, 8);
    w_.text(page_, 290, 760, "Page " + std::to_string(page_ + 1), Face::Helvetica, 8);
}

void PageFlow::ensure(double height) {
    if (page_ < 0 || y_ + height > kBottom) new_page();
}

void PageFlow::title(const std::string& text) {
    ensure(40);
    if (full_) return;
    y_ += 22;
    w_.text(page_, kLeft, y_, text, Face::HelveticaBold, 22);
    y_ += 24;
}

void PageFlow::heading(const std::string& text, int level) {
    const double size = level <= 1 ? 16 : level == 2 ? 13 : 11.5;
    ensure(size + 3 * kLeading);
    if (full_) return;
    y_ += size + 8;
    w_.text(page_, kLeft, y_, text, Face::HelveticaBold, size);
    y_ += 8;
}

void PageFlow::outline_entry(const std::string& text, int level) { w_.outline(text, level, std::max(page_, 0)); }

void PageFlow::paragraph(const std::string& text) {
    const auto lines = wrap(text, Face::TimesRoman, kBody, kRight - kLeft);
    ensure(kLeading);
    y_ += kLeading;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (y_ > kBottom) {
            new_page();
            y_ += kLeading;
        }
        if (full_) return;
        w_.text(page_, kLeft, y_, lines[i], Face::TimesRoman, kBody);
        if (i + 1 < lines.size()) y_ += kLeading;
    }
    y_ += 0.9 * kLeading;
}

void PageFlow::table(const std::vector<std::vector<std::string>>& rows) {
    if (rows.empty() || rows[0].empty()) return;
    const double row_h = 18, cols = static_cast<double>(rows[0].size());
    const double col_w = (kRight - kLeft) / cols;
    ensure(row_h * static_cast<double>(rows.size()) + 2 * kLeading);
    if (full_) return;
    y_ += kLeading;
    const double top = y_;
    for (std::size_t r = 0; r <= rows.size(); ++r) {
        const double y = top + row_h * static_cast<double>(r);
        w_.line(page_, {kLeft, y}, {kRight, y});
    }
    const double bottom = top + row_h * static_cast<double>(rows.size());
    for (std::size_t c = 0; c <= rows[0].size(); ++c) {
        const double x = kLeft + col_w * static_cast<double>(c);
        w_.line(page_, {x, top}, {x, bottom});
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            w_.text(page_, kLeft + col_w * static_cast<double>(c) + 4, top + row_h * static_cast<double>(r) + 13,
                    rows[r][c], r == 0 ? Face::HelveticaBold : Face::Helvetica, 9);
    y_ = bottom + 4;
}

void PageFlow::finish() {
    if (page_ < 0) new_page();
}

EvalCorpus write_eval_corpus(const std::filesystem::path& dir, std::uint32_t seed) {
    std::filesystem::create_directories(dir);
    std::mt19937 rng(seed);
    const char* const topics[] = {"Harbor Logistics", "Upland Forestry", "Rail Freight", "Coastal Survey",
                                  "Mineral Archive"};
    EvalCorpus corpus;
    corpus.questions = dir / "questions.jsonl";
    std::ofstream q(corpus.questions);
    if (!q) throw Error(ErrorCode::IoError, "cannot write " + corpus.questions.string());
    int qid = 0;
    for (int d = 0; d < 5; ++d) {
        const std::string doc_id = "report_" + std::to_string(d + 1);
        Writer w;
        PageFlow flow(w, std::string(topics[d]) + " Quarterly");
        flow.title(std::string(topics[d]) + " Report");
        for (int s = 0; s < 2; ++s) {
            const std::string name = std::to_string(s + 1) + ". " + (s == 0 ? "Overview" : "Findings");
            flow.page_break();
            flow.heading(name, 1);
            flow.outline_entry(name, 1);
            // Two or one questions per section, three per document.
            const int asks = s == 0 ? 2 : 1;
            for (int p = 0; p < 3; ++p) {
                std::string text = paragraph_text(rng, 45 + static_cast<int>(rng() % 20));
                if (p < asks) {
                    const std::string passage = sentence(rng, 14);
                    text += " " + passage;
                    EvalQuestion question;
                    question.id = "q" + std::to_string(++qid);
                    // The question reuses most of the passage's content words.
                    std::string ask = "Which section says that";
                    std::istringstream words(passage);
                    std::string word;
                    while (words >> word) ask += " " + word;
                    ask.back() = '?';
                    question.question = ask;
                    question.doc_id = doc_id;
                    question.answer_passage = passage;
                    q << dataset_json_line(question) << "\n";
                }
                flow.paragraph(text);
            }
        }
        flow.finish();
        const auto path = dir / (doc_id + ".pdf");
        w.save(path);
        corpus.pdfs.push_back(path);
    }
    return corpus;
}

void write_bench_pdf(const std::filesystem::path& path, int pages, std::uint32_t seed) {
    std::mt19937 rng(seed);
    Writer w;
    PageFlow flow(w, "Benchmark Corpus Volume 1");
    flow.limit_pages(pages);
    flow.title("Regional Infrastructure Handbook");
    int section = 0;
    while (!flow.full()) {
        ++section;
        const std::string name = std::to_string(section) + ". " + kVocabulary[rng() % std::size(kVocabulary)] + " " +
                                 kVocabulary[rng() % std::size(kVocabulary)];
        flow.heading(name, 1);
        for (int sub = 1; sub <= 2 && !flow.full(); ++sub) {
            flow.heading(std::to_string(section) + "." + std::to_string(sub) + " " +
                             kVocabulary[rng() % std::size(kVocabulary)],
                         2);
            for (int p = 0; p < 3; ++p) flow.paragraph(paragraph_text(rng, 60 + static_cast<int>(rng() % 60)));
            if (section % 3 == 0 && sub == 1) {
                std::vector<std::vector<std::string>> rows = {{"Item", "Count", "Region"}};
                for (int r = 0; r < 4; ++r)
                    rows.push_back({kVocabulary[rng() % std::size(kVocabulary)], std::to_string(rng() % 900),
                                    kVocabulary[rng() % std::size(kVocabulary)]});
                flow.table(rows);
            }
        }
    }
    flow.finish();
    w.save(path);
}

}  // namespace chunkwise

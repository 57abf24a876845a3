#include "chunkwise/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "chunkwise/errors.hpp"
#include "chunkwise/simd/kernels.hpp"
#include "json.hpp"

namespace chunkwise {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::FileNotFound, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
void for_each_json_line(const std::string& jsonl, F&& f) {
    std::istringstream in(jsonl);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(number) + ": " + e.what());
        }
        f(j, "line " + std::to_string(number));
    }
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::SchemaViolation, where + ": missing \"" + key + "\"");
    return j[key];
}

std::string need_string(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) throw Error(ErrorCode::SchemaViolation, where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

std::vector<std::string> tokens(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c >= 0x80) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<EvalQuestion> parse_dataset(const std::string& jsonl) {
    std::vector<EvalQuestion> out;
    for_each_json_line(jsonl, [&](const json& j, const std::string& where) {
        EvalQuestion q;
        q.id = need_string(j, "id", where);
        q.question = need_string(j, "question", where);
        if (j.contains("relevant")) {
            q.mode = QuestionMode::multi;
            const json& rel = j["relevant"];
            if (!rel.is_array() || rel.empty())
                throw Error(ErrorCode::SchemaViolation, where + ": \"relevant\" must be a non-empty array");
            for (std::size_t i = 0; i < rel.size(); ++i) {
                const std::string w = where + ".relevant[" + std::to_string(i) + "]";
                const json& page = need(rel[i], "page", w);
                if (!page.is_number_integer()) throw Error(ErrorCode::SchemaViolation, w + ": \"page\" must be an integer");
                q.relevant.push_back({need_string(rel[i], "doc_id", w), page.get<int>()});
            }
        } else {
            q.mode = QuestionMode::single;
            q.doc_id = need_string(j, "doc_id", where);
            q.answer_passage = need_string(j, "answer_passage", where);
            if (q.answer_passage.empty()) throw Error(ErrorCode::SchemaViolation, where + ": empty answer_passage");
        }
        out.push_back(std::move(q));
    });
    return out;
}

std::vector<EvalQuestion> load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::string dataset_json_line(const EvalQuestion& q) {
    nlohmann::ordered_json j;
    j["id"] = q.id;
    j["question"] = q.question;
    if (q.mode == QuestionMode::single) {
        j["doc_id"] = q.doc_id;
        j["answer_passage"] = q.answer_passage;
    } else {
        j["relevant"] = nlohmann::ordered_json::array();
        for (const auto& r : q.relevant) j["relevant"].push_back({{"doc_id", r.doc_id}, {"page", r.page}});
    }
    return j.dump();
}

std::vector<Chunk> parse_chunks(const std::string& jsonl) {
    std::vector<Chunk> out;
    for_each_json_line(jsonl, [&](const json& j, const std::string& where) {
        Chunk c;
        c.text = need_string(j, "text", where);
        c.doc_id = need_string(j, "doc_id", where);
        if (j.contains("headers")) c.parent_headers = j["headers"].get<std::vector<std::string>>();
        if (j.contains("start_line")) c.start_line = j["start_line"].get<int>();
        if (j.contains("word_count")) c.word_count = j["word_count"].get<int>();
        if (j.contains("start_page") && !j["start_page"].is_null()) c.start_page = j["start_page"].get<int>();
        if (j.contains("end_page") && !j["end_page"].is_null()) c.end_page = j["end_page"].get<int>();
        out.push_back(std::move(c));
    });
    return out;
}

std::vector<Chunk> load_chunks(const std::filesystem::path& path) { return parse_chunks(read_file(path)); }

Embedding Embedding::from(std::vector<double> v) {
    Embedding e;
    e.norm = std::sqrt(simd::squared_norm(v.data(), v.size()));
    e.vector = std::move(v);
    return e;
}

Embedding HashEmbedder::embed_one(const std::string& text) {
    std::vector<double> v(kDim, 0.0);
    auto toks = tokens(text);
    if (toks.empty()) toks.push_back(text);
    for (const auto& t : toks) v[fnv1a(t) % kDim] += 1.0;
    const double n = std::sqrt(simd::scalar::squared_norm(v.data(), v.size()));
    for (auto& x : v) x /= n;
    return Embedding::from(std::move(v));
}

std::vector<Embedding> HashEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

std::unique_ptr<Embedder> make_embedder(const std::string& spec, RemoteOptions options) {
    if (spec == "hash" || spec == "hash-256") return std::make_unique<HashEmbedder>();
    if (spec.rfind("http://", 0) == 0) return std::make_unique<RemoteEmbedder>(spec, options);
    throw Error(ErrorCode::ConfigError, "unknown embedder \"" + spec + "\" (expected \"hash\" or an http:// URL)");
}

double cosine(const Embedding& a, const Embedding& b) {
    if (a.vector.size() != b.vector.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::to_string(a.vector.size()) + " vs " + std::to_string(b.vector.size()));
    }
    if (a.norm == 0.0 || b.norm == 0.0) return 0.0;
    const double c = simd::dot(a.vector.data(), b.vector.data(), a.vector.size()) / (a.norm * b.norm);
    return std::clamp(c, -1.0, 1.0);
}

RetrievalResult retrieve_topk(const Embedding& question, const std::vector<Embedding>& chunks, int k) {
    if (k < 1) throw Error(ErrorCode::DomainError, "k must be at least 1");
    std::vector<double> scores(chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) scores[i] = cosine(question, chunks[i]);
    std::vector<std::size_t> order(chunks.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) { return scores[a] != scores[b] ? scores[a] > scores[b] : a < b; });
    RetrievalResult r;
    for (std::size_t i = 0; i < top; ++i) r.ranked.push_back({order[i], scores[order[i]], false});
    return r;
}

std::string normalize_for_match(std::string_view text) {
    std::string out;
    bool space = false;
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

bool judge_relevance(const Chunk& chunk, const EvalQuestion& q, bool fuzzy) {
    if (q.mode == QuestionMode::single) {
        if (chunk.doc_id != q.doc_id) return false;
        const std::string passage = normalize_for_match(q.answer_passage);
        const std::string text = normalize_for_match(chunk.text);
        if (text.find(passage) != std::string::npos) return true;
        if (!fuzzy) return false;
        const auto want = tokens(passage);
        if (want.empty()) return false;
        const auto have_list = tokens(text);
        const std::set<std::string> have(have_list.begin(), have_list.end());
        const auto hits = std::count_if(want.begin(), want.end(), [&](const std::string& t) { return have.count(t) > 0; });
        return static_cast<double>(hits) >= 0.8 * static_cast<double>(want.size());
    }
    bool doc_match = false;
    for (const auto& r : q.relevant) doc_match = doc_match || r.doc_id == chunk.doc_id;
    if (!doc_match) return false;
    if (!chunk.start_page || !chunk.end_page)
        throw Error(ErrorCode::MissingPages, "chunk of " + chunk.doc_id + " has no page range");
    for (const auto& r : q.relevant)
        if (r.doc_id == chunk.doc_id && r.page >= *chunk.start_page && r.page <= *chunk.end_page) return true;
    return false;
}

double recall_at_k(const RetrievalResult& results, int total_relevant) {
    if (total_relevant < 1) throw Error(ErrorCode::DomainError, "total_relevant must be at least 1");
    const auto found = std::count_if(results.ranked.begin(), results.ranked.end(), [](const Ranked& r) { return r.relevant; });
    return static_cast<double>(found) / total_relevant;
}

double ndcg_at_k(const RetrievalResult& results, int total_relevant) {
    if (total_relevant < 1) throw Error(ErrorCode::DomainError, "total_relevant must be at least 1");
    double dcg = 0;
    for (std::size_t i = 0; i < results.ranked.size(); ++i)
        if (results.ranked[i].relevant) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    if (dcg == 0) return 0.0;
    double idcg = 0;
    const std::size_t ideal = std::min<std::size_t>(static_cast<std::size_t>(total_relevant), results.ranked.size());
    for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    return dcg / idcg;
}

namespace {

class EmbeddingCache {
public:
    EmbeddingCache(std::optional<std::filesystem::path> path, std::string spec)
        : path_(std::move(path)), spec_(std::move(spec)) {
        if (!path_ || !std::filesystem::exists(*path_)) return;
        std::ifstream in(*path_);
        std::string line;
        while (std::getline(in, line)) {
            // A torn final line from an interrupted run is skipped.
            try {
                const json j = json::parse(line);
                entries_[j.at("key").get<std::string>()] = j.at("embedding").get<std::vector<double>>();
            } catch (const json::exception&) {
            }
        }
    }

    std::string key(const std::string& text) const {
        return hex64(fnv1a(text, fnv1a(spec_))) + hex64(fnv1a(text)) + std::to_string(text.size());
    }

    const std::vector<double>* find(const std::string& text) const {
        const auto it = entries_.find(key(text));
        return it == entries_.end() ? nullptr : &it->second;
    }

    void add(const std::vector<std::string>& texts, const std::vector<Embedding>& embs) {
        std::ofstream out;
        if (path_) {
            out.open(*path_, std::ios::app);
            if (!out) throw Error(ErrorCode::IoError, "cannot append to " + path_->string());
        }
        for (std::size_t i = 0; i < texts.size(); ++i) {
            const std::string k = key(texts[i]);
            entries_[k] = embs[i].vector;
            if (path_) out << json{{"key", k}, {"embedding", embs[i].vector}}.dump() << "\n";
        }
    }

private:
    std::optional<std::filesystem::path> path_;
    std::string spec_;
    std::map<std::string, std::vector<double>> entries_;
};

std::vector<Embedding> embed_cached(Embedder& embedder, EmbeddingCache& cache, const std::vector<std::string>& texts) {
    std::vector<std::string> missing;
    std::set<std::string> queued;
    for (const auto& t : texts)
        if (!cache.find(t) && queued.insert(t).second) missing.push_back(t);
    // Batches are committed to the cache one at a time so partial progress survives a failure.
    const std::size_t batch = 64;
    for (std::size_t i = 0; i < missing.size(); i += batch) {
        const std::vector<std::string> part(missing.begin() + static_cast<std::ptrdiff_t>(i),
                                            missing.begin() + static_cast<std::ptrdiff_t>(std::min(i + batch, missing.size())));
        cache.add(part, embedder.embed(part));
    }
    std::vector<Embedding> out;
    std::optional<std::size_t> dim;
    for (const auto& t : texts) {
        Embedding e = Embedding::from(*cache.find(t));
        if (dim && *dim != e.vector.size())
            throw Error(ErrorCode::DimensionMismatch, "cached embeddings disagree on dimension");
        dim = e.vector.size();
        out.push_back(std::move(e));
    }
    return out;
}

json aggregate(const std::vector<std::pair<double, double>>& rows) {
    json j;
    j["count"] = rows.size();
    double r = 0, n = 0;
    for (const auto& [a, b] : rows) {
        r += a;
        n += b;
    }
    j["recall"] = rows.empty() ? 0.0 : r / static_cast<double>(rows.size());
    j["ndcg"] = rows.empty() ? 0.0 : n / static_cast<double>(rows.size());
    return j;
}

}  // namespace

std::string run_eval(const std::filesystem::path& dataset_path, const std::filesystem::path& chunks_path,
                     Embedder& embedder, const EvalOptions& options) {
    if (options.k < 1) throw Error(ErrorCode::DomainError, "k must be at least 1");
    const std::string dataset_bytes = read_file(dataset_path);
    const std::string chunk_bytes = read_file(chunks_path);
    const auto questions = parse_dataset(dataset_bytes);
    const auto chunks = parse_chunks(chunk_bytes);

    std::uint64_t fp = fnv1a(dataset_bytes);
    fp = fnv1a(chunk_bytes, fp);
    fp = fnv1a(embedder.spec(), fp);
    fp = fnv1a(std::to_string(options.k) + (options.fuzzy ? "/fuzzy" : "/exact") + "/full-text", fp);

    nlohmann::ordered_json report;
    report["config"] = {{"embedder", embedder.spec()},
                        {"k", options.k},
                        {"fuzzy", options.fuzzy},
                        {"embedded_text", "chunk text with parent headers"},
                        {"questions", questions.size()},
                        {"chunks", chunks.size()},
                        {"fingerprint", hex64(fp)}};
    report["questions"] = nlohmann::ordered_json::array();

    std::vector<std::pair<double, double>> single, multi, all;
    if (!questions.empty() && !chunks.empty()) {
        EmbeddingCache cache(options.cache, embedder.spec());
        std::vector<std::string> chunk_texts;
        for (const auto& c : chunks) chunk_texts.push_back(c.text);
        const auto chunk_emb = embed_cached(embedder, cache, chunk_texts);
        std::vector<std::string> question_texts;
        for (const auto& q : questions) question_texts.push_back(q.question);
        const auto question_emb = embed_cached(embedder, cache, question_texts);

        for (std::size_t qi = 0; qi < questions.size(); ++qi) {
            const auto& q = questions[qi];
            int total = 0;
            for (const auto& c : chunks) total += judge_relevance(c, q, options.fuzzy) ? 1 : 0;
            RetrievalResult r = retrieve_topk(question_emb[qi], chunk_emb, options.k);
            r.question_id = q.id;
            std::vector<int> hits;
            for (std::size_t i = 0; i < r.ranked.size(); ++i) {
                r.ranked[i].relevant = judge_relevance(chunks[r.ranked[i].chunk], q, options.fuzzy);
                if (r.ranked[i].relevant) hits.push_back(static_cast<int>(i) + 1);
            }
            const double recall = recall_at_k(r, std::max(1, total));
            const double ndcg = ndcg_at_k(r, std::max(1, total));
            nlohmann::ordered_json row;
            row["id"] = q.id;
            row["mode"] = q.mode == QuestionMode::single ? "single" : "multi";
            row["total_relevant"] = total;
            row["hit_ranks"] = hits;
            row["recall"] = recall;
            row["ndcg"] = ndcg;
            report["questions"].push_back(row);
            (q.mode == QuestionMode::single ? single : multi).emplace_back(recall, ndcg);
            all.emplace_back(recall, ndcg);
        }
    } else {
        for (const auto& q : questions) {
            report["questions"].push_back({{"id", q.id}, {"mode", q.mode == QuestionMode::single ? "single" : "multi"},
                                           {"total_relevant", 0}, {"hit_ranks", json::array()}, {"recall", 0.0},
                                           {"ndcg", 0.0}});
            (q.mode == QuestionMode::single ? single : multi).emplace_back(0.0, 0.0);
            all.emplace_back(0.0, 0.0);
        }
    }
    report["aggregate"] = {{"single", aggregate(single)}, {"multi", aggregate(multi)}, {"all", aggregate(all)}};
    return report.dump(2);
}

}  // namespace chunkwise

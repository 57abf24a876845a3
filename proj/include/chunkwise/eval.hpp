#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chunkwise/chunker.hpp"

namespace chunkwise {

enum class QuestionMode { single, multi };

struct PageRef {
    std::string doc_id;
    int page = 0;

    friend bool operator==(const PageRef&, const PageRef&) = default;
};

struct EvalQuestion {
    std::string id;
    std::string question;
    QuestionMode mode = QuestionMode::single;
    // single mode
    std::string doc_id;
    std::string answer_passage;
    // multi mode
    std::vector<PageRef> relevant;
};

/// JSONL; throws SchemaViolation naming the line and field.
std::vector<EvalQuestion> parse_dataset(const std::string& jsonl);
std::vector<EvalQuestion> load_dataset(const std::filesystem::path& path);
std::string dataset_json_line(const EvalQuestion& q);

std::vector<Chunk> parse_chunks(const std::string& jsonl);
std::vector<Chunk> load_chunks(const std::filesystem::path& path);

struct Embedding {
    std::vector<double> vector;
    double norm = 0.0;

    static Embedding from(std::vector<double> v);
};

class Embedder {
public:
    virtual ~Embedder() = default;
    /// Output order matches input order.
    virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
    /// Stable description used in cache keys and report fingerprints.
    virtual std::string spec() const = 0;
};

/// Token-hash bag of words, L2-normalized.
class HashEmbedder : public Embedder {
public:
    static constexpr std::size_t kDim = 256;
    std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
    std::string spec() const override { return "hash-256"; }
    static Embedding embed_one(const std::string& text);
};

struct RemoteOptions {
    std::size_t batch_size = 32;
    int retries = 3;
    int backoff_ms = 200;
    int timeout_s = 30;
};

/// POSTs {"input": [...]} and reads {"data": [{"embedding": [...]}]}. Plain http only.
class RemoteEmbedder : public Embedder {
public:
    RemoteEmbedder(std::string url, RemoteOptions options = {});
    std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
    std::string spec() const override { return url_; }

private:
    std::string url_;
    std::string host_;
    int port_ = 80;
    std::string path_;
    RemoteOptions options_;
    std::optional<std::size_t> dim_;
};

/// "hash" or an http:// URL.
std::unique_ptr<Embedder> make_embedder(const std::string& spec, RemoteOptions options = {});

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

double cosine(const Embedding& a, const Embedding& b);

struct Ranked {
    std::size_t chunk = 0;
    double score = 0.0;
    bool relevant = false;
};

struct RetrievalResult {
    std::string question_id;
    std::vector<Ranked> ranked;
};

/// Exact top-k by cosine; ties go to the earlier chunk.
RetrievalResult retrieve_topk(const Embedding& question, const std::vector<Embedding>& chunks, int k);

/// Whitespace-folded, case-insensitive.
std::string normalize_for_match(std::string_view text);

bool judge_relevance(const Chunk& chunk, const EvalQuestion& q, bool fuzzy = false);

double recall_at_k(const RetrievalResult& results, int total_relevant);
double ndcg_at_k(const RetrievalResult& results, int total_relevant);

struct EvalOptions {
    int k = 10;
    bool fuzzy = false;
    // JSONL cache of embeddings; completed batches are appended so a failed run can resume.
    std::optional<std::filesystem::path> cache;
};

/// Returns the report as a JSON string.
std::string run_eval(const std::filesystem::path& dataset, const std::filesystem::path& chunks, Embedder& embedder,
                     const EvalOptions& options = {});

}  // namespace chunkwise

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <thread>

#include "chunkwise/errors.hpp"
#include "chunkwise/eval.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace chunkwise;

namespace {

RetrievalResult flags(std::vector<bool> rel) {
    RetrievalResult r;
    for (std::size_t i = 0; i < rel.size(); ++i) r.ranked.push_back({i, 1.0 - 0.01 * static_cast<double>(i), rel[i]});
    return r;
}

Embedding vec(std::vector<double> v) { return Embedding::from(std::move(v)); }

std::vector<std::size_t> brute_topk(const Embedding& q, const std::vector<Embedding>& chunks, int k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        double d = 0;
        for (std::size_t j = 0; j < q.vector.size(); ++j) d += q.vector[j] * chunks[i].vector[j];
        all.emplace_back(d / (q.norm * chunks[i].norm), i);
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < all.size() && i < static_cast<std::size_t>(k); ++i) out.push_back(all[i].second);
    return out;
}

Chunk chunk(std::string doc, std::string text, std::optional<int> s = {}, std::optional<int> e = {}) {
    Chunk c;
    c.doc_id = std::move(doc);
    c.text = std::move(text);
    c.start_page = s;
    c.end_page = e;
    return c;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / ("chunkwise_eval_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::filesystem::path write(const std::string& name, const std::string& body) const {
        std::ofstream(path / name) << body;
        return path / name;
    }
};

}  // namespace

TEST_CASE("ndcg matches hand-computed values") {
    CHECK(ndcg_at_k(flags({true}), 1) == doctest::Approx(1.0));
    CHECK(ndcg_at_k(flags({false, true}), 1) == doctest::Approx(0.6309).epsilon(1e-4));
    CHECK(std::abs(ndcg_at_k(flags({false, true}), 1) - 0.630929753571) < 1e-9);
    CHECK(std::abs(ndcg_at_k(flags({true, false, true}), 2) - 0.919720789142) < 1e-9);
    CHECK(ndcg_at_k(flags({false, false}), 3) == 0.0);
    CHECK_THROWS_AS(ndcg_at_k(flags({true}), 0), Error);
}

TEST_CASE("recall examples") {
    CHECK(recall_at_k(flags({false, false, false, true}), 1) == 1.0);
    std::vector<bool> ten(10, false);
    ten[2] = ten[7] = true;
    CHECK(recall_at_k(flags(ten), 4) == 0.5);
    CHECK(recall_at_k(flags({false, false}), 3) == 0.0);
    try {
        recall_at_k(flags({}), 0);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainError);
    }
}

TEST_CASE("metric bounds and ideal prefix property") {
    std::mt19937 rng(11);
    for (int it = 0; it < 2000; ++it) {
        const int k = 1 + static_cast<int>(rng() % 12);
        const int total = 1 + static_cast<int>(rng() % 8);
        std::vector<bool> rel(static_cast<std::size_t>(k), false);
        int placed = 0;
        for (auto&& r : rel)
            if (placed < total && rng() % 2) {
                r = true;
                ++placed;
            }
        const auto res = flags(rel);
        const double rc = recall_at_k(res, total), nd = ndcg_at_k(res, total);
        CHECK(rc >= 0.0);
        CHECK(rc <= 1.0);
        CHECK(nd >= 0.0);
        CHECK(nd <= 1.0 + 1e-12);
        const int ideal = std::min(total, k);
        bool prefix = true;
        for (int i = 0; i < ideal; ++i) prefix = prefix && rel[static_cast<std::size_t>(i)];
        CHECK((std::abs(nd - 1.0) < 1e-12) == prefix);
    }
}

TEST_CASE("cosine examples") {
    const auto x = vec({0.3, -1.2, 4.0});
    CHECK(cosine(x, x) == doctest::Approx(1.0));
    CHECK(cosine(vec({1, 0}), vec({0, 1})) == 0.0);
    CHECK(cosine(vec({1, 0}), vec({-1, 0})) == -1.0);
    try {
        cosine(vec({1, 0}), vec({1, 0, 0}));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("retrieve_topk small cases and tie-break") {
    const auto q = vec({1, 0});
    auto r = retrieve_topk(q, {vec({0, 1}), vec({1, 1}), vec({1, 0})}, 10);
    REQUIRE(r.ranked.size() == 3);
    CHECK(r.ranked[0].chunk == 2);
    CHECK(r.ranked[1].chunk == 1);
    CHECK(r.ranked[2].chunk == 0);
    r = retrieve_topk(q, {vec({0, 1}), vec({2, 0}), vec({5, 0})}, 2);
    CHECK(r.ranked[0].chunk == 1);
    CHECK(r.ranked[1].chunk == 2);
    CHECK_THROWS_AS(retrieve_topk(q, {vec({1, 0})}, 0), Error);
}

TEST_CASE("retrieve_topk equals a brute-force full sort") {
    std::mt19937 rng(5);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + rng() % 300, dim = 1 + rng() % 40;
        const int k = 1 + static_cast<int>(rng() % 50);
        std::uniform_int_distribution<int> small(-3, 3);
        auto draw = [&] {
            std::vector<double> v(dim);
            // Small integer coordinates make exact score ties common.
            for (auto& x : v) x = small(rng);
            if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0; })) v[0] = 1;
            return vec(v);
        };
        const auto q = draw();
        std::vector<Embedding> chunks;
        for (std::size_t i = 0; i < n; ++i) chunks.push_back(draw());
        const auto r = retrieve_topk(q, chunks, k);
        const auto want = brute_topk(q, chunks, k);
        REQUIRE(r.ranked.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            CHECK(r.ranked[i].chunk == want[i]);
            if (i) CHECK(r.ranked[i - 1].score >= r.ranked[i].score);
        }
    }
}

TEST_CASE("ranking is invariant under positive scaling") {
    std::mt19937 rng(9);
    std::normal_distribution<double> g;
    for (int it = 0; it < 50; ++it) {
        std::vector<Embedding> chunks, scaled;
        for (int i = 0; i < 40; ++i) {
            std::vector<double> v(16);
            for (auto& x : v) x = g(rng);
            const double s = std::ldexp(1.0, static_cast<int>(rng() % 8));
            auto w = v;
            for (auto& x : w) x *= s;
            chunks.push_back(vec(v));
            scaled.push_back(vec(w));
        }
        std::vector<double> qv(16);
        for (auto& x : qv) x = g(rng);
        auto qs = qv;
        for (auto& x : qs) x *= 4;
        const auto a = retrieve_topk(vec(qv), chunks, 10), b = retrieve_topk(vec(qs), scaled, 10);
        for (std::size_t i = 0; i < 10; ++i) CHECK(a.ranked[i].chunk == b.ranked[i].chunk);
    }
}

TEST_CASE("hash embedder is normalized and deterministic") {
    HashEmbedder h;
    const auto v = h.embed({"The quick brown fox", "The quick brown fox", "???", "résumé"});
    CHECK(v[0].vector == v[1].vector);
    for (const auto& e : v) {
        CHECK(e.vector.size() == 256);
        CHECK(std::abs(e.norm - 1.0) < 1e-9);
    }
    CHECK(v[0].vector != v[3].vector);
    // FNV-1a 64 reference values.
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("judge_relevance") {
    EvalQuestion q;
    q.mode = QuestionMode::single;
    q.doc_id = "a";
    q.answer_passage = "The  Answer\nis here.";
    CHECK(judge_relevance(chunk("a", "# H\n\nSo the answer is HERE. More."), q));
    CHECK_FALSE(judge_relevance(chunk("b", "the answer is here."), q));
    CHECK_FALSE(judge_relevance(chunk("a", "the answer was here."), q));
    // Normalizing either side first leaves the verdict unchanged.
    auto normalized = q;
    normalized.answer_passage = normalize_for_match(q.answer_passage);
    CHECK(judge_relevance(chunk("a", normalize_for_match("So the answer is HERE.")), normalized));
    CHECK(judge_relevance(chunk("a", "answer is here the"), q, true));

    EvalQuestion m;
    m.mode = QuestionMode::multi;
    m.relevant = {{"a", 3}, {"b", 9}};
    CHECK(judge_relevance(chunk("a", "x", 2, 4), m));
    CHECK_FALSE(judge_relevance(chunk("a", "x", 4, 6), m));
    CHECK_FALSE(judge_relevance(chunk("c", "x"), m));
    try {
        judge_relevance(chunk("a", "x"), m);
        FAIL("expected MissingPages");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingPages);
    }
}

TEST_CASE("dataset parsing") {
    const auto qs = parse_dataset(
        "{\"id\":\"q1\",\"question\":\"what?\",\"doc_id\":\"d\",\"answer_passage\":\"p\"}\n\n"
        "{\"id\":\"q2\",\"question\":\"where?\",\"relevant\":[{\"doc_id\":\"d\",\"page\":2}]}\n");
    REQUIRE(qs.size() == 2);
    CHECK(qs[0].mode == QuestionMode::single);
    CHECK(qs[1].mode == QuestionMode::multi);
    CHECK(qs[1].relevant[0] == PageRef{"d", 2});
    CHECK(parse_dataset(dataset_json_line(qs[1]))[0].relevant == qs[1].relevant);
    CHECK_THROWS_AS(parse_dataset("{\"id\":\"q\",\"question\":\"x\",\"relevant\":[]}"), Error);
    CHECK_THROWS_AS(parse_dataset("{\"id\":\"q\",\"question\":\"x\",\"doc_id\":\"d\"}"), Error);
    CHECK_THROWS_AS(parse_dataset("not json"), Error);
}

TEST_CASE("run_eval on a verbatim corpus") {
    TempDir dir;
    std::string chunks, dataset;
    std::mt19937 rng(3);
    const char* words[] = {"river", "stone", "copper", "lantern", "orbit", "meadow", "signal", "harbor", "violet", "engine",
                           "glacier", "thread", "canyon", "marble", "pilot", "falcon"};
    int qid = 0;
    for (int d = 0; d < 3; ++d) {
        for (int c = 0; c < 6; ++c) {
            std::string text = "# Section " + std::to_string(c) + "\n\n";
            std::string passage;
            for (int w = 0; w < 30; ++w) passage += std::string(w ? " " : "") + words[rng() % 16];
            passage += " marker" + std::to_string(d) + "x" + std::to_string(c);
            text += passage;
            chunks += nlohmann::json{{"text", text}, {"doc_id", "doc" + std::to_string(d)}}.dump() + "\n";
            if (c % 2 == 0) {
                dataset += nlohmann::json{{"id", "q" + std::to_string(qid++)},
                                          {"question", passage.substr(passage.size() - 40)},
                                          {"doc_id", "doc" + std::to_string(d)},
                                          {"answer_passage", passage}}
                               .dump() +
                           "\n";
            }
        }
    }
    const auto dpath = dir.write("q.jsonl", dataset), cpath = dir.write("c.jsonl", chunks);
    HashEmbedder h;
    EvalOptions opt;
    opt.cache = dir.path / "cache.jsonl";
    const auto first = run_eval(dpath, cpath, h, opt);
    const auto report = nlohmann::json::parse(first);
    CHECK(report["aggregate"]["single"]["count"] == 9);
    CHECK(report["aggregate"]["single"]["recall"].get<double>() == 1.0);
    CHECK(report["aggregate"]["multi"]["count"] == 0);
    CHECK(report["config"]["fingerprint"].get<std::string>().size() == 16);
    CHECK(std::filesystem::file_size(*opt.cache) > 0);
    CHECK(run_eval(dpath, cpath, h, opt) == first);

    const auto empty = nlohmann::json::parse(run_eval(dir.write("e.jsonl", ""), cpath, h, opt));
    CHECK(empty["questions"].empty());
    CHECK(empty["aggregate"]["all"]["count"] == 0);
}

TEST_CASE("remote embedder against a local server") {
    httplib::Server server;
    std::atomic<int> calls{0};
    std::atomic<bool> shrink{false};
    server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        const int n = ++calls;
        if (n == 1) {
            res.status = 503;
            return;
        }
        const auto body = nlohmann::json::parse(req.body);
        nlohmann::json out;
        out["data"] = nlohmann::json::array();
        for (const auto& t : body["input"]) {
            const std::size_t dim = shrink ? 768 : 1024;
            std::vector<double> v(dim, 0.0);
            v[t.get<std::string>().size() % dim] = 1.0;
            out["data"].push_back({{"embedding", v}});
        }
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    RemoteOptions opt;
    opt.batch_size = 2;
    opt.backoff_ms = 1;
    RemoteEmbedder remote("http://127.0.0.1:" + std::to_string(port) + "/embed", opt);
    const auto out = remote.embed({"a", "bb", "ccc"});
    REQUIRE(out.size() == 3);
    CHECK(out[0].vector[1] == 1.0);
    CHECK(out[1].vector[2] == 1.0);
    CHECK(out[2].vector[3] == 1.0);
    CHECK(calls == 3);

    shrink = true;
    try {
        remote.embed({"x"});
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
    server.stop();
    th.join();

    RemoteEmbedder dead("http://127.0.0.1:" + std::to_string(port) + "/embed", opt);
    try {
        dead.embed({"x"});
        FAIL("expected EmbedderUnreachable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmbedderUnreachable);
    }
    CHECK_THROWS_AS(make_embedder("bogus"), Error);
    CHECK(make_embedder("hash")->spec() == "hash-256");
}

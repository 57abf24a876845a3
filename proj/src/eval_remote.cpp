#include <chrono>
#include <regex>
#include <thread>

#include "chunkwise/errors.hpp"
#include "chunkwise/eval.hpp"
#include "httplib.h"
#include "json.hpp"

namespace chunkwise {

RemoteEmbedder::RemoteEmbedder(std::string url, RemoteOptions options) : url_(std::move(url)), options_(options) {
    static const std::regex re(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url_, m, re)) throw Error(ErrorCode::ConfigError, "bad embedder URL: " + url_);
    host_ = m[1].str();
    port_ = m[2].matched ? std::stoi(m[2].str()) : 80;
    path_ = m[3].matched ? m[3].str() : "/";
    if (options_.batch_size == 0) options_.batch_size = 1;
}

std::vector<Embedding> RemoteEmbedder::embed(const std::vector<std::string>& texts) {
    std::vector<Embedding> out;
    out.reserve(texts.size());
    httplib::Client client(host_, port_);
    client.set_connection_timeout(options_.timeout_s, 0);
    client.set_read_timeout(options_.timeout_s, 0);
    for (std::size_t start = 0; start < texts.size(); start += options_.batch_size) {
        const std::size_t end = std::min(texts.size(), start + options_.batch_size);
        nlohmann::json body;
        body["input"] = std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                                 texts.begin() + static_cast<std::ptrdiff_t>(end));
        const std::string payload = body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

        std::string failure;
        nlohmann::json reply;
        bool ok = false;
        for (int attempt = 0; attempt <= options_.retries && !ok; ++attempt) {
            if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(options_.backoff_ms << (attempt - 1)));
            auto res = client.Post(path_, payload, "application/json");
            if (!res) {
                failure = httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200) {
                throw Error(ErrorCode::EmbedderUnreachable, url_ + " answered HTTP " + std::to_string(res->status));
            }
            try {
                reply = nlohmann::json::parse(res->body);
                ok = true;
            } catch (const nlohmann::json::exception& e) {
                failure = std::string("unparseable reply: ") + e.what();
            }
        }
        if (!ok) {
            throw Error(ErrorCode::EmbedderUnreachable,
                        url_ + " failed after " + std::to_string(options_.retries) + " retries: " + failure);
        }
        if (!reply.contains("data") || !reply["data"].is_array() || reply["data"].size() != end - start)
            throw Error(ErrorCode::EmbedderUnreachable, url_ + " returned the wrong number of embeddings");
        for (const auto& item : reply["data"]) {
            auto v = item.at("embedding").get<std::vector<double>>();
            if (dim_ && *dim_ != v.size()) {
                throw Error(ErrorCode::DimensionMismatch,
                            "embedder returned dimension " + std::to_string(v.size()) + " after " + std::to_string(*dim_));
            }
            dim_ = v.size();
            out.push_back(Embedding::from(std::move(v)));
        }
    }
    return out;
}

}  // namespace chunkwise

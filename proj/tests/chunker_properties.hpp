#pragma once

#include <random>
#include <string>
#include <vector>

#include "chunkwise/chunker.hpp"
#include "chunkwise/layout.hpp"

namespace testsupport {

inline std::string random_markdown(std::mt19937& rng) {
    static const char* words[] = {"lorem", "ipsum", "dolor", "sit", "amet", "data", "table", "chunk",
                                  "page",  "river", "stone", "cell", "node", "tree", "value", "index"};
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto sentence = [&](int n) {
        std::string s;
        for (int i = 0; i < n; ++i) {
            if (i) s += ' ';
            s += words[pick(0, 15)];
        }
        return s;
    };
    std::string md;
    const int blocks = pick(0, 40);
    for (int b = 0; b < blocks; ++b) {
        switch (pick(0, 9)) {
            case 0:
            case 1:
                md += std::string(pick(1, 6), '#') + " " + sentence(pick(1, 5)) + "\n";
                break;
            case 2: {
                const int cols = pick(1, 4);
                const int rows = pick(1, pick(0, 5) == 0 ? 60 : 6);
                for (int r = 0; r < rows + 1; ++r) {
                    md += "|";
                    for (int c = 0; c < cols; ++c) md += " " + (r == 1 ? std::string("---") : sentence(pick(1, 8))) + " |";
                    md += "\n";
                }
                break;
            }
            case 3: {
                md += "```\n";
                const int n = pick(1, 30);
                for (int i = 0; i < n; ++i) md += (pick(0, 4) == 0 ? "# comment " : "") + sentence(pick(0, 12)) + "\n";
                md += "```\n";
                break;
            }
            default: {
                const int n = pick(1, 8);
                for (int i = 0; i < n; ++i) md += sentence(pick(1, pick(0, 6) == 0 ? 200 : 40)) + "\n";
                break;
            }
        }
        if (pick(0, 2) > 0) md += "\n";
    }
    return md;
}

inline chunkwise::ChunkerConfig random_config(std::mt19937& rng) {
    chunkwise::ChunkerConfig cfg;
    cfg.min_words = std::uniform_int_distribution<int>(1, 30)(rng);
    cfg.soft_limit_words = cfg.min_words + std::uniform_int_distribution<int>(1, 300)(rng);
    cfg.hard_limit_words = cfg.soft_limit_words + std::uniform_int_distribution<int>(0, 300)(rng);
    return cfg;
}

/// Checks coverage, header context, size bound, atomicity and determinism.
/// Returns a description of each violation found.
inline std::vector<std::string> chunker_violations(const chunkwise::MarkdownDoc& md, const chunkwise::ChunkerConfig& cfg) {
    using namespace chunkwise;
    std::vector<std::string> errors;
    const auto lines = md.lines();
    const int n = static_cast<int>(lines.size());

    // Independent scan: fences, tables, heading lines and the heading path before each line.
    std::vector<bool> heading(n, false), in_fence(n, false);
    std::vector<std::vector<std::string>> path_before(n + 1);
    std::vector<std::pair<int, int>> atoms;  // fenced blocks and tables, inclusive ranges
    {
        std::vector<std::pair<int, std::string>> stack;
        bool fence = false;
        int fence_start = -1;
        int table_start = -1;
        for (int i = 0; i < n; ++i) {
            std::vector<std::string> path;
            for (auto& [l, h] : stack) path.push_back(h);
            path_before[i] = path;
            const std::string& s = lines[i];
            const bool fence_line = s.rfind("```", 0) == 0;
            const bool row = !fence && !fence_line && !s.empty() && s[0] == '|';
            if (!row && table_start >= 0) {
                atoms.emplace_back(table_start, i - 1);
                table_start = -1;
            }
            if (fence_line && !fence) {
                fence = true;
                fence_start = i;
                in_fence[i] = true;
                continue;
            }
            if (fence) {
                in_fence[i] = true;
                if (fence_line) {
                    fence = false;
                    atoms.emplace_back(fence_start, i);
                }
                continue;
            }
            if (row && table_start < 0) table_start = i;
            std::size_t h = 0;
            while (h < s.size() && s[h] == '#') ++h;
            if (h >= 1 && h <= 6 && (h == s.size() || s[h] == ' ')) {
                heading[i] = true;
                while (!stack.empty() && stack.back().first >= static_cast<int>(h)) stack.pop_back();
                stack.emplace_back(static_cast<int>(h), s);
            }
        }
        if (table_start >= 0) atoms.emplace_back(table_start, n - 1);
        if (fence) atoms.emplace_back(fence_start, n - 1);
    }

    std::vector<Chunk> all;
    for (auto& c : chunk_tree(build_toc_tree(md), md, cfg))
        for (auto& s : hard_split(c, cfg)) all.push_back(std::move(s));

    // Coverage: disjoint increasing ranges whose text matches the source and cover every content line.
    std::vector<int> covered(n, 0);
    int prev_end = -1;
    for (const auto& c : all) {
        if (c.start_line <= prev_end) errors.push_back("chunk ranges overlap or are out of order");
        prev_end = c.end_line;
        std::string expect;
        for (int i = c.start_line; i <= c.end_line; ++i) {
            if (i > c.start_line) expect += '\n';
            expect += lines[i];
            ++covered[i];
        }
        if (c.content() != expect) errors.push_back("chunk content differs from its source lines");
        if (c.word_count != count_words(expect)) errors.push_back("word_count mismatch");

        // Header context.
        if (c.parent_headers != path_before[c.start_line]) errors.push_back("parent headers differ from heading path");
        std::string prefix;
        for (const auto& h : c.parent_headers) prefix += (prefix.empty() ? "" : "\n") + h;
        if (c.text.rfind(prefix, 0) != 0) errors.push_back("text does not start with headers");

        // Size bound.
        if (c.word_count > cfg.hard_limit_words) {
            int units = 0;
            for (int i = c.start_line; i <= c.end_line;) {
                int end = i;
                for (const auto& [a, b] : atoms)
                    if (a == i) end = b;
                if (count_words(lines[i]) > 0 || end > i) ++units;
                i = end + 1;
            }
            if (units != 1) errors.push_back("chunk over hard limit holds more than one atomic unit");
        }
    }
    for (int i = 0; i < n; ++i) {
        const bool content = !heading[i] && count_words(lines[i]) > 0;
        if (content && covered[i] != 1) errors.push_back("content line " + std::to_string(i) + " not covered once");
    }

    // Atomicity.
    for (const auto& [a, b] : atoms)
        for (const auto& c : all) {
            const bool intersects = c.start_line <= b && a <= c.end_line;
            const bool contains = c.start_line <= a && b <= c.end_line;
            if (intersects && !contains) errors.push_back("atomic unit split across chunks");
        }

    // Determinism.
    if (chunk_jsonl(chunk_markdown(md, cfg, "d")) != chunk_jsonl(chunk_markdown(md, cfg, "d")))
        errors.push_back("non-deterministic output");
    return errors;
}

}  // namespace testsupport

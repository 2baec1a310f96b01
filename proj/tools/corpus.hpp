#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hdtk::cli {

struct CorpusLine {
    int line = 0;
    std::string property;
    std::map<std::string, std::string> params;
};

struct CorpusSpec {
    std::string base_dir;  // relative paths in params resolve against this
    std::vector<CorpusLine> lines;
};

// `<property> key=value ...` per line, `#` comments. Throws hdtk::Error on malformed input.
CorpusSpec parse_corpus(const std::string& text, const std::string& base_dir);

struct PropertyResult {
    std::string property;
    int line = 0;
    int checks = 0;
    int failures = 0;
    std::string first_failure;
};

std::vector<std::string> corpus_properties();

// Runs every line, at most `threads` at a time; results keep the spec order.
std::vector<PropertyResult> run_corpus(const CorpusSpec& spec, std::uint64_t seed, int threads);

}  // namespace hdtk::cli

#include "ptm/corpus.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "ptm/parser.hpp"

#include "corpus_data.inc"

namespace ptm::corpus {

std::vector<std::string> ids() {
    std::vector<std::string> out;
    for (const auto& [id, text] : kCorpusPrograms) out.push_back(id);
    return out;
}

const std::string& source(const std::string& id) {
    static const std::map<std::string, std::string> by_id = [] {
        std::map<std::string, std::string> m;
        for (const auto& [key, text] : kCorpusPrograms) m.emplace(key, text);
        return m;
    }();
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::out_of_range("no corpus program named '" + id + "'");
    return it->second;
}

Program program(const std::string& id) { return parse_auto(source(id)); }

}  // namespace ptm::corpus

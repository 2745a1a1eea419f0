#include "polydither/rank_table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace polydither {

void validateRankTable(const RankTable& table, const StructureRegistry& registry,
                       const GeometryTable& geometry) {
    if (table.S != geometry.S)
        throw RankTableInvalid("rank table pixel scale differs from geometry");
    if (static_cast<int>(table.perClass.size()) != registry.classCount())
        throw RankTableInvalid("rank table class count differs from registry");
    if (table.perSegment.size() != registry.segmentLabels.size())
        throw RankTableInvalid("rank table segment count differs from registry");
    int levels = table.levels();
    for (int id = 0; id < registry.classCount(); ++id) {
        const std::vector<int>& ranks = table.perClass[id];
        if (static_cast<int>(ranks.size()) != levels)
            throw RankTableInvalid("class rank list has wrong length");
        std::vector<std::uint8_t> seen(levels, 0);
        for (int r : ranks) {
            if (r < 0 || r >= levels || seen[r])
                throw RankTableInvalid("class ranks are not a permutation");
            seen[r] = 1;
        }
    }
    for (std::size_t lbl = 0; lbl < table.perSegment.size(); ++lbl) {
        const LabelBand& band = geometry.labels[lbl];
        const std::vector<int>& ranks = table.perSegment[lbl];
        if (ranks.size() != band.bandPixels.size())
            throw RankTableInvalid("segment rank list has wrong length");
        for (int claimer : band.claimingClasses) {
            const ClassGeometry& g = geometry.classes[claimer];
            for (std::size_t i = 0; i < band.bandPixels.size(); ++i) {
                int pix = g.pixelIndex(band.bandPixels[i].x, band.bandPixels[i].y);
                if (pix < 0 || table.perClass[claimer][pix] != ranks[i])
                    throw RankTableInvalid(
                        "segment ranks disagree with a claiming class");
            }
        }
    }
}

std::string serializeRankTable(const RankTable& table, const StructureRegistry& registry) {
    std::ostringstream os;
    os.precision(17);
    os << "polyrank v1 S=" << table.S << " d0=" << table.d0 << " seed=" << table.seed
       << " shape=" << table.shapeName << " rulehash=" << table.ruleHash << "\n";
    for (std::size_t id = 0; id < table.perClass.size(); ++id) {
        os << "class " << id << "\n";
        for (int r : table.perClass[id])
            os << r << "\n";
    }
    for (std::size_t lbl = 0; lbl < table.perSegment.size(); ++lbl) {
        os << "segment " << toHex(registry.segmentLabels[lbl]) << "\n";
        for (int r : table.perSegment[lbl])
            os << r << "\n";
    }
    return os.str();
}

RankTable parseRankTable(const std::string& text, const StructureRegistry& registry,
                         const GeometryTable& geometry) {
    std::istringstream is(text);
    std::string word;
    is >> word;
    if (word != "polyrank")
        throw RankTableInvalid("bad rank table header");
    std::string version;
    is >> version;
    if (version != "v1")
        throw RankTableInvalid("unsupported rank table version");
    RankTable table;
    for (int i = 0; i < 5; ++i) {
        std::string field;
        is >> field;
        auto eq = field.find('=');
        if (eq == std::string::npos)
            throw RankTableInvalid("malformed rank table header field");
        std::string key = field.substr(0, eq), value = field.substr(eq + 1);
        if (key == "S")
            table.S = std::stoi(value);
        else if (key == "d0")
            table.d0 = std::stod(value);
        else if (key == "seed")
            table.seed = std::stoull(value);
        else if (key == "shape")
            table.shapeName = value;
        else if (key == "rulehash")
            table.ruleHash = value;
        else
            throw RankTableInvalid("unknown rank table header field: " + key);
    }
    if (table.S <= 0)
        throw RankTableInvalid("rank table missing pixel scale");
    int levels = table.levels();
    table.perClass.assign(registry.classCount(), {});
    table.perSegment.assign(registry.segmentLabels.size(), {});
    std::string kind;
    while (is >> kind) {
        std::vector<int>* dest = nullptr;
        int n = 0;
        if (kind == "class") {
            int id;
            if (!(is >> id) || id < 0 || id >= registry.classCount())
                throw RankTableInvalid("bad class id in rank table");
            dest = &table.perClass[id];
            n = levels;
        } else if (kind == "segment") {
            std::string hex;
            is >> hex;
            int lbl = registry.labelId(fromHex(hex));
            if (lbl < 0)
                throw RankTableInvalid("unknown segment label in rank table");
            dest = &table.perSegment[lbl];
            n = static_cast<int>(geometry.labels[lbl].bandPixels.size());
        } else {
            throw RankTableInvalid("unexpected token in rank table: " + kind);
        }
        if (!dest->empty())
            throw RankTableInvalid("duplicate rank table record");
        dest->reserve(n);
        for (int i = 0; i < n; ++i) {
            int r;
            if (!(is >> r))
                throw RankTableInvalid("truncated rank table record");
            dest->push_back(r);
        }
    }
    validateRankTable(table, registry, geometry);
    return table;
}

void saveRankTable(const RankTable& table, const StructureRegistry& registry,
                   const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write rank table: " + path);
    f << serializeRankTable(table, registry);
}

RankTable loadRankTable(const std::string& path, const StructureRegistry& registry,
                        const GeometryTable& geometry) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read rank table: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parseRankTable(os.str(), registry, geometry);
}

}  // namespace polydither

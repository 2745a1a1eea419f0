#include "polydither/production_rule.hpp"

#include "polydither/exact_cover.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace polydither {

ProductionRule deriveProductionRule(const CellSet& shape, int linearScale,
                                    const std::string& shapeName) {
    if (linearScale < 2)
        throw std::invalid_argument("linearScale must be >= 2");
    CellSet parent = shape.scaled(linearScale);
    auto solutions = solveExactCover(parent, shape, 1);
    if (solutions.empty())
        throw NotRectifiable("no " + std::to_string(linearScale) +
                             "^2-rep decomposition for shape " + shapeName);
    ProductionRule rule;
    rule.linearScale = linearScale;
    rule.shapeName = shapeName;
    rule.children = solutions.front();
    return rule;
}

bool verifyProductionRule(const CellSet& shape, const ProductionRule& rule) {
    int L = rule.linearScale;
    if (static_cast<int>(rule.children.size()) != L * L)
        return false;
    CellSet parent = shape.scaled(L);
    std::set<Cell> want(parent.cells().begin(), parent.cells().end());
    std::set<Cell> got;
    for (const Transform& t : rule.children)
        for (const Cell& c : transformedCells(shape, t)) {
            if (!got.insert(c).second)
                return false;  // overlap
        }
    return got == want;
}

std::string serializeRule(const ProductionRule& rule) {
    std::ostringstream os;
    os << "polyrule v1 L=" << rule.linearScale << " shape=" << rule.shapeName << "\n";
    for (const Transform& t : rule.children)
        os << t.rotation << ' ' << (t.mirrored ? 1 : 0) << ' ' << t.tx << ' ' << t.ty << "\n";
    return os.str();
}

ProductionRule parseRule(const std::string& text) {
    std::istringstream is(text);
    std::string word, version, lfield, sfield;
    is >> word >> version >> lfield >> sfield;
    if (word != "polyrule" || version != "v1" || lfield.rfind("L=", 0) != 0 ||
        sfield.rfind("shape=", 0) != 0)
        throw std::runtime_error("bad polyrule header");
    ProductionRule rule;
    rule.linearScale = std::stoi(lfield.substr(2));
    rule.shapeName = sfield.substr(6);
    int n = rule.linearScale * rule.linearScale;
    for (int i = 0; i < n; ++i) {
        Transform t;
        int mir;
        if (!(is >> t.rotation >> mir >> t.tx >> t.ty))
            throw std::runtime_error("truncated polyrule file");
        t.mirrored = (mir != 0);
        rule.children.push_back(t);
    }
    return rule;
}

void saveRule(const ProductionRule& rule, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write rule file: " + path);
    f << serializeRule(rule);
}

ProductionRule loadRule(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read rule file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parseRule(os.str());
}

std::string ruleHash(const ProductionRule& rule) {
    std::string s = serializeRule(rule);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace polydither

#pragma once

#include "polydither/cellset.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace polydither {

class NotRectifiable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Self-similar decomposition: the shape scaled by L, exactly tiled by L*L
// unit copies. Children are expressed in parent-local coordinates (parent
// cell (0,0) spans child cells [0,L)x[0,L)).
struct ProductionRule {
    int linearScale = 0;
    std::string shapeName;
    std::vector<Transform> children;

    bool operator==(const ProductionRule&) const = default;
};

// First exact-cover solution of the L-scaled shape by unit copies, under the
// solver's fixed deterministic search order. Throws NotRectifiable when no
// decomposition exists.
ProductionRule deriveProductionRule(const CellSet& shape, int linearScale,
                                    const std::string& shapeName = "shape");

// Verifies that the rule's children exactly tile the L-scaled shape.
bool verifyProductionRule(const CellSet& shape, const ProductionRule& rule);

// "polyrule v1" plain-text format: header `polyrule v1 L=<int> shape=<name>`,
// then L*L lines `rot mirror tx ty`.
std::string serializeRule(const ProductionRule& rule);
ProductionRule parseRule(const std::string& text);
void saveRule(const ProductionRule& rule, const std::string& path);
ProductionRule loadRule(const std::string& path);

// FNV-1a over the serialized rule; embedded in table headers for provenance.
std::string ruleHash(const ProductionRule& rule);

}  // namespace polydither

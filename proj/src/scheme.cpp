#include "switchmix/scheme.hpp"

#include <string>

namespace switchmix {

std::string describe(const ExpertParams& params) {
    struct Visitor {
        std::string operator()(const BinaryExpertParams& b) const { return "b=" + b.bits(); }
        std::string operator()(const IntervalExpertParams& i) const {
            return "[" + std::to_string(i.start) + "," + std::to_string(i.finish) + ")";
        }
        std::string operator()(const DyadicExpertParams& d) const { return "k=" + std::to_string(d.period); }
    };
    return std::visit(Visitor{}, params);
}

} // namespace switchmix

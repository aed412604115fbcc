#include "parabund/schedule.hpp"

#include "parabund/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace parabund {

void RadialSampleSchedule::validate() const {
    if (!(r0 > 0.0 && r0 < 1.0)) throw InputError("schedule r0 must lie in (0, 1)");
    if (!(sigma > 0.0 && sigma < 1.0)) throw InputError("schedule sigma must lie in (0, 1)");
    if (count < 8) throw InputError("schedule needs at least 8 radii");
    if (angles < 4) throw InputError("schedule needs at least 4 angles per circle");
    if (!(r0 * std::pow(sigma, count - 1) > 1e-8)) throw InputError("schedule reaches below radius 1e-8");
}

double RadialSampleSchedule::radius(int k) const { return r0 * std::pow(sigma, k); }

std::complex<double> RadialSampleSchedule::point(int k, int l) const {
    const double theta = 2.0 * std::numbers::pi * l / angles;
    return std::polar(radius(k), theta);
}

RadialSampleSchedule RadialSampleSchedule::parse(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) throw InputError("schedule must be r0,sigma,count,angles");
    RadialSampleSchedule s;
    try {
        std::size_t used = 0;
        s.r0 = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw InputError("bad r0");
        s.sigma = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw InputError("bad sigma");
        s.count = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw InputError("bad count");
        s.angles = std::stoi(parts[3], &used);
        if (used != parts[3].size()) throw InputError("bad angles");
    } catch (const std::logic_error&) {
        throw InputError("schedule must be r0,sigma,count,angles, got \"" + std::string(text) + "\"");
    }
    s.validate();
    return s;
}

std::string RadialSampleSchedule::str() const {
    // Shortest round-tripping form of each number.
    const auto shortest = [](double x) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    };
    return shortest(r0) + ',' + shortest(sigma) + ',' + std::to_string(count) + ',' + std::to_string(angles);
}

} // namespace parabund

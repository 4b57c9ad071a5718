#pragma once

#include <cassert>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "bellkit/error.hpp"

namespace bellkit {

/// Bipartite measurement scenario: one outcome count per setting and party.
///
/// Joint probability tables over a scenario are stored flat, ordered
/// lexicographically by (x, y, a, b) with x Alice's setting, y Bob's setting,
/// a Alice's outcome and b Bob's outcome. Every module in the library relies
/// on this single layout.
class Scenario {
public:
    Scenario(std::vector<int> alice_outcomes, std::vector<int> bob_outcomes)
        : alice_(std::move(alice_outcomes)), bob_(std::move(bob_outcomes)) {
        if (alice_.empty() || bob_.empty())
            throw InvalidScenarioError("each party needs at least one setting");
        for (int o : alice_)
            if (o < 2) throw InvalidScenarioError("Alice outcome count < 2");
        for (int o : bob_)
            if (o < 2) throw InvalidScenarioError("Bob outcome count < 2");
        block_offset_.resize(alice_.size() * bob_.size());
        int off = 0;
        for (std::size_t x = 0; x < alice_.size(); ++x) {
            for (std::size_t y = 0; y < bob_.size(); ++y) {
                block_offset_[x * bob_.size() + y] = off;
                off += alice_[x] * bob_[y];
            }
        }
        dim_ = off;
    }

    /// Parses "[oA1,oA2,...|oB1,oB2,...]", e.g. "[2,3|2,2,2]".
    static Scenario parse(const std::string& text) {
        std::string s = text;
        auto strip = [](std::string& t) {
            while (!t.empty() && (t.front() == ' ')) t.erase(t.begin());
            while (!t.empty() && (t.back() == ' ')) t.pop_back();
        };
        strip(s);
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw ParseError("scenario must look like [2,2|2,2]: " + text);
        s = s.substr(1, s.size() - 2);
        const auto bar = s.find('|');
        if (bar == std::string::npos)
            throw ParseError("scenario is missing the party separator '|': " + text);
        auto parse_list = [&](const std::string& part) {
            std::vector<int> out;
            std::stringstream ss(part);
            std::string item;
            while (std::getline(ss, item, ',')) {
                strip(item);
                try {
                    std::size_t used = 0;
                    const int v = std::stoi(item, &used);
                    if (used != item.size()) throw std::invalid_argument(item);
                    out.push_back(v);
                } catch (const std::exception&) {
                    throw ParseError("bad outcome count '" + item + "' in scenario " + text);
                }
            }
            if (out.empty()) throw ParseError("empty setting list in scenario " + text);
            return out;
        };
        return Scenario(parse_list(s.substr(0, bar)), parse_list(s.substr(bar + 1)));
    }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t x = 0; x < alice_.size(); ++x) os << (x ? "," : "") << alice_[x];
        os << '|';
        for (std::size_t y = 0; y < bob_.size(); ++y) os << (y ? "," : "") << bob_[y];
        os << ']';
        return os.str();
    }

    int alice_settings() const { return static_cast<int>(alice_.size()); }
    int bob_settings() const { return static_cast<int>(bob_.size()); }
    int alice_outcomes(int x) const { return alice_[x]; }
    int bob_outcomes(int y) const { return bob_[y]; }
    const std::vector<int>& alice() const { return alice_; }
    const std::vector<int>& bob() const { return bob_; }

    bool party_symmetric() const { return alice_ == bob_; }

    /// Number of joint probabilities, i.e. the length of a flat table.
    int dim() const { return dim_; }

    int index(int x, int y, int a, int b) const {
        assert(x >= 0 && x < alice_settings() && y >= 0 && y < bob_settings());
        assert(a >= 0 && a < alice_[x] && b >= 0 && b < bob_[y]);
        return block_offset_[x * bob_.size() + y] + a * bob_[y] + b;
    }

    struct Coord {
        int x, y, a, b;
    };

    /// Inverse of index(). Linear scan over blocks; fine for the sizes we use.
    Coord coord(int i) const {
        for (std::size_t x = 0; x < alice_.size(); ++x) {
            for (std::size_t y = 0; y < bob_.size(); ++y) {
                const int off = block_offset_[x * bob_.size() + y];
                const int len = alice_[x] * bob_[y];
                if (i >= off && i < off + len) {
                    const int r = i - off;
                    return Coord{static_cast<int>(x), static_cast<int>(y), r / bob_[y],
                                 r % bob_[y]};
                }
            }
        }
        throw Error("flat index out of range");
    }

    /// Total deterministic strategies of one party (product of outcome counts
    /// over settings). Used to size local-vertex enumerations.
    long long alice_strategies() const {
        return std::accumulate(alice_.begin(), alice_.end(), 1LL,
                               [](long long p, int o) { return p * o; });
    }
    long long bob_strategies() const {
        return std::accumulate(bob_.begin(), bob_.end(), 1LL,
                               [](long long p, int o) { return p * o; });
    }

    friend bool operator==(const Scenario& lhs, const Scenario& rhs) {
        return lhs.alice_ == rhs.alice_ && lhs.bob_ == rhs.bob_;
    }
    friend bool operator!=(const Scenario& lhs, const Scenario& rhs) { return !(lhs == rhs); }

private:
    std::vector<int> alice_, bob_;
    std::vector<int> block_offset_;
    int dim_ = 0;
};

} // namespace bellkit

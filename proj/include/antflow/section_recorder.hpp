#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "antflow/empirics/event_log.hpp"
#include "antflow/empirics/passages.hpp"
#include "antflow/trail_state.hpp"

namespace antflow {

// Watches a section of `length` sites starting at `start` on the ring and
// turns hop events into an enter/leave log (time in sweeps, length in
// sites). Right-movers enter at `start` and leave past the last site;
// left-movers the other way round. Ants already inside when recording
// starts are ignored until they re-enter.
class SectionRecorder {
public:
    struct Passage {
        Direction direction = Direction::right;
        std::int32_t ant = -1;
        double t_plus = 0.0;
        std::optional<double> t_minus;
    };

    SectionRecorder(std::size_t L, std::size_t start, std::size_t length) : L_(L), start_(start), length_(length) {
        if (length == 0 || length >= L) throw invalid_argument("section length must be in [1, L)");
        if (start >= L) throw invalid_argument("section start must be a lattice site");
    }

    void operator()(const UpdateEvent& e) {
        if (e.outcome != Outcome::hopped || !e.direction) return;
        const Direction d = *e.direction;
        const std::size_t first = d == Direction::right ? start_ : (start_ + length_ - 1) % L_;
        const std::size_t last = d == Direction::right ? (start_ + length_ - 1) % L_ : start_;
        const std::size_t dest = d == Direction::right ? (e.site + 1) % L_ : (e.site + L_ - 1) % L_;
        auto& inside = inside_[index_of(d)];
        if (dest == first) {
            inside[e.ant] = passages_.size();
            passages_.push_back({d, e.ant, e.time, std::nullopt});
            events_.push_back({e.time, d, empirics::EventKind::enter});
        } else if (e.site == last) {
            const auto it = inside.find(e.ant);
            if (it == inside.end()) return;
            passages_[it->second].t_minus = e.time;
            inside.erase(it);
            events_.push_back({e.time, d, empirics::EventKind::leave});
        }
    }

    empirics::EventLog log() const { return {events_, static_cast<double>(length_)}; }

    // Ground truth, in order of entry.
    const std::vector<Passage>& passages() const { return passages_; }

    // Completed passages as PairedPassage, numbered per direction in order
    // of entry (the layout pair_passages produces).
    std::vector<empirics::PairedPassage> completed() const {
        std::vector<empirics::PairedPassage> out;
        for (Direction d : {Direction::right, Direction::left}) {
            std::size_t n = 0;
            for (const auto& p : passages_) {
                if (p.direction != d) continue;
                ++n;
                if (p.t_minus) out.push_back({n, d, p.t_plus, *p.t_minus});
            }
        }
        return out;
    }

private:
    std::size_t L_, start_, length_;
    std::array<std::unordered_map<std::int32_t, std::size_t>, 2> inside_;
    std::vector<Passage> passages_;
    std::vector<empirics::EventRecord> events_;
};

} // namespace antflow

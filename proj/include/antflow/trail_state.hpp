#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "antflow/errors.hpp"
#include "antflow/model.hpp"
#include "antflow/rng.hpp"

namespace antflow {

enum class MarkState : std::uint8_t { absent, occupied, vacated };

// Pheromone record of one site. A vacated mark carries the tick at which
// the last ant left and a lifetime (in sweeps) drawn once at that moment.
struct Mark {
    MarkState state = MarkState::absent;
    std::uint64_t vacated_at = 0; // elementary-update tick
    double lifetime = 0.0;        // sweeps
};

enum class Outcome : std::uint8_t { hopped, blocked, stayed, evaporated, no_op };
enum class RateUsed : std::uint8_t { none, q, Q, K };

struct UpdateEvent {
    std::size_t site = 0;
    std::optional<Direction> direction; // empty for no-op / evaporated
    Outcome outcome = Outcome::no_op;
    RateUsed rate_used = RateUsed::none;
    std::int32_t ant = -1; // id of the acting ant, -1 if none
    double time = 0.0;     // clock (sweeps) at which the update happened
};

struct SweepStats {
    std::uint64_t hops_R = 0;
    std::uint64_t hops_L = 0;
    std::uint64_t attempts_R = 0;
    std::uint64_t attempts_L = 0;

    SweepStats& operator+=(const SweepStats& o) {
        hops_R += o.hops_R;
        hops_L += o.hops_L;
        attempts_R += o.attempts_R;
        attempts_L += o.attempts_L;
        return *this;
    }
    friend bool operator==(const SweepStats&, const SweepStats&) = default;
};

// Ring lattice with one occupancy layer per direction and a shared mark
// layer. Time advances by 1/L sweep per elementary update; the clock is
// kept as an integer tick count so that mark ages are exact.
//
// Single owner, movable; replicas never share a TrailState.
class TrailState {
public:
    static constexpr std::int32_t empty = -1;

    TrailState(const ModelParams& params, std::size_t n_right, std::size_t n_left, std::uint64_t seed,
               Mode mode)
        : params_(params), mode_(mode), rng_(seed), ids_{std::vector<std::int32_t>(params.L, empty),
                                                         std::vector<std::int32_t>(params.L, empty)},
          marks_(params.L) {
        validate(params_, mode_);
        if (n_right > params_.L) throw excess_occupancy("n_right exceeds lattice length");
        if (n_left > params_.L) throw excess_occupancy("n_left exceeds lattice length");
        if (mode_ != Mode::bi && n_left != 0)
            throw invalid_argument("left-movers are only allowed in bidirectional mode");
        place(Direction::right, n_right);
        place(Direction::left, n_left);
        counts_ = {n_right, n_left};
    }

    // Deterministic layout (ids in ascending site order); occupied sites
    // are marked, nothing is vacated.
    static TrailState with_ants(const ModelParams& params, Mode mode, std::vector<std::size_t> right_sites,
                                std::vector<std::size_t> left_sites, std::uint64_t seed) {
        TrailState s(params, 0, 0, seed, mode);
        if (mode != Mode::bi && !left_sites.empty())
            throw invalid_argument("left-movers are only allowed in bidirectional mode");
        for (Direction d : {Direction::right, Direction::left}) {
            auto& sites = d == Direction::right ? right_sites : left_sites;
            std::sort(sites.begin(), sites.end());
            if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
                throw excess_occupancy("two same-direction ants on one site");
            auto& layer = s.ids_[index_of(d)];
            for (std::size_t k = 0; k < sites.size(); ++k) {
                if (sites[k] >= s.size()) throw invalid_argument("site outside the lattice");
                layer[sites[k]] = static_cast<std::int32_t>(k);
                if (mode != Mode::tasep) s.marks_[sites[k]].state = MarkState::occupied;
            }
            s.counts_[index_of(d)] = sites.size();
        }
        return s;
    }

    const ModelParams& params() const { return params_; }
    Mode mode() const { return mode_; }
    std::size_t size() const { return params_.L; }
    std::size_t count(Direction d) const { return counts_[index_of(d)]; }
    std::uint64_t ticks() const { return ticks_; }
    double clock() const { return static_cast<double>(ticks_) / static_cast<double>(params_.L); }

    bool occupied(std::size_t site, Direction d) const { return ids_[index_of(d)][site] != empty; }
    bool occupied(std::size_t site) const {
        return occupied(site, Direction::right) || occupied(site, Direction::left);
    }
    std::int32_t ant_at(std::size_t site, Direction d) const { return ids_[index_of(d)][site]; }
    const Mark& mark(std::size_t site) const { return marks_[site]; }
    const Rng& rng() const { return rng_; }

    std::size_t next_site(std::size_t site, Direction d) const {
        const std::size_t L = params_.L;
        return d == Direction::right ? (site + 1 == L ? 0 : site + 1) : (site == 0 ? L - 1 : site - 1);
    }

    // Pheromone lookup at an arbitrary query time (sweeps). For a vacated
    // mark the answer is (t_query - vacate_time) < lifetime; the lifetime
    // was fixed at vacate time so repeated queries agree.
    bool mark_present(std::size_t site, double t_query) const {
        const Mark& m = marks_[site];
        switch (m.state) {
        case MarkState::occupied: return true;
        case MarkState::absent: return false;
        case MarkState::vacated: break;
        }
        const double age = t_query - static_cast<double>(m.vacated_at) / static_cast<double>(params_.L);
        return age < m.lifetime;
    }
    bool mark_present(std::size_t site) const { return mark_present(site, clock()); }

    double effective_hop_probability(std::size_t site, Direction d) const {
        if (!occupied(site, d)) throw no_ant_at_site("no ant of that direction at site");
        return hop_probability(site, d).first;
    }

    // One random-sequential update. The visitor is called once per event.
    template <class Visitor>
    void elementary_update(Visitor&& visit) {
        const std::size_t site = static_cast<std::size_t>(rng_.below(params_.L));
        const double now = clock();
        const bool has_r = occupied(site, Direction::right);
        const bool has_l = occupied(site, Direction::left);

        if (!has_r && !has_l) {
            visit(UpdateEvent{site, std::nullopt, expire_if_due(site, now) ? Outcome::evaporated : Outcome::no_op,
                              RateUsed::none, empty, now});
            ++ticks_;
            return;
        }

        if (has_r && has_l) {
            const Direction first = rng_.coin() ? Direction::right : Direction::left;
            attempt(site, first, now, visit);
            attempt(site, opposite(first), now, visit);
        } else {
            attempt(site, has_r ? Direction::right : Direction::left, now, visit);
        }

        if (!occupied(site) && expire_if_due(site, now))
            visit(UpdateEvent{site, std::nullopt, Outcome::evaporated, RateUsed::none, empty, now});
        ++ticks_;
    }

    std::vector<UpdateEvent> elementary_update() {
        std::vector<UpdateEvent> events;
        elementary_update([&](const UpdateEvent& e) { events.push_back(e); });
        return events;
    }

    template <class Visitor>
    SweepStats sweep(Visitor&& visit) {
        SweepStats stats;
        for (std::size_t i = 0; i < params_.L; ++i) {
            elementary_update([&](const UpdateEvent& e) {
                if (e.direction) {
                    const bool right = *e.direction == Direction::right;
                    if (e.outcome == Outcome::hopped || e.outcome == Outcome::blocked ||
                        e.outcome == Outcome::stayed)
                        ++(right ? stats.attempts_R : stats.attempts_L);
                    if (e.outcome == Outcome::hopped) ++(right ? stats.hops_R : stats.hops_L);
                }
                visit(e);
            });
        }
        return stats;
    }

    SweepStats sweep() {
        return sweep([](const UpdateEvent&) {});
    }

private:
    void place(Direction d, std::size_t n) {
        // Partial Fisher-Yates over site indices.
        std::vector<std::size_t> sites(params_.L);
        std::iota(sites.begin(), sites.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.below(params_.L - i));
            std::swap(sites[i], sites[j]);
        }
        std::vector<std::size_t> chosen(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(n));
        std::sort(chosen.begin(), chosen.end());
        auto& layer = ids_[index_of(d)];
        for (std::size_t k = 0; k < n; ++k) {
            layer[chosen[k]] = static_cast<std::int32_t>(k);
            if (mode_ != Mode::tasep) marks_[chosen[k]].state = MarkState::occupied;
        }
    }

    std::pair<double, RateUsed> hop_probability(std::size_t site, Direction d) const {
        const std::size_t target = next_site(site, d);
        if (mode_ == Mode::tasep) {
            if (occupied(target, d)) return {0.0, RateUsed::none};
            return {params_.q, RateUsed::q};
        }
        if (occupied(target, d)) return {0.0, RateUsed::none};
        if (mode_ == Mode::bi && occupied(target, opposite(d))) return {params_.K, RateUsed::K};
        if (mark_present(target)) return {params_.Q, RateUsed::Q};
        return {params_.q, RateUsed::q};
    }

    template <class Visitor>
    void attempt(std::size_t site, Direction d, double now, Visitor& visit) {
        const auto [p, rate] = hop_probability(site, d);
        const std::int32_t ant = ant_at(site, d);
        if (p <= 0.0) {
            visit(UpdateEvent{site, d, Outcome::blocked, RateUsed::none, ant, now});
            return;
        }
        if (!(rng_.uniform() < p)) {
            visit(UpdateEvent{site, d, Outcome::stayed, rate, ant, now});
            return;
        }
        const std::size_t target = next_site(site, d);
        auto& layer = ids_[index_of(d)];
        layer[target] = ant;
        layer[site] = empty;
        if (mode_ != Mode::tasep) {
            marks_[target].state = MarkState::occupied;
            if (!occupied(site)) {
                Mark& m = marks_[site];
                m.state = MarkState::vacated;
                m.vacated_at = ticks_;
                m.lifetime = rng_.survival_lifetime(params_.f);
            }
        }
        visit(UpdateEvent{site, d, Outcome::hopped, rate, ant, now});
    }

    bool expire_if_due(std::size_t site, double now) {
        if (mode_ == Mode::tasep) return false;
        Mark& m = marks_[site];
        if (m.state != MarkState::vacated || mark_present(site, now)) return false;
        m.state = MarkState::absent;
        return true;
    }

    ModelParams params_;
    Mode mode_;
    Rng rng_;
    std::array<std::vector<std::int32_t>, 2> ids_;
    std::vector<Mark> marks_;
    std::array<std::size_t, 2> counts_{};
    std::uint64_t ticks_ = 0;
};

inline TrailState new_state(const ModelParams& params, std::size_t n_right, std::size_t n_left,
                            std::uint64_t seed, Mode mode) {
    return TrailState(params, n_right, n_left, seed, mode);
}

} // namespace antflow

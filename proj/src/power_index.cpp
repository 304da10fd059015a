#include "ctrlpower/power_index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ctrlpower {

namespace {

constexpr std::array<std::uint64_t, kMaxPlayers + 1> make_factorials() {
    std::array<std::uint64_t, kMaxPlayers + 1> f{};
    f[0] = 1;
    for (std::size_t k = 1; k <= kMaxPlayers; ++k) f[k] = f[k - 1] * k;
    return f;
}

constexpr auto kFactorial = make_factorials();

// Winning flag for every coalition mask, using the same ascending-order
// weight sums as WeightedVotingGame::coalition_weight.
std::vector<char> winning_table(const WeightedVotingGame& game) {
    const std::size_t n = game.size();
    const std::size_t count = std::size_t{1} << n;
    std::vector<double> sum(count, 0.0);
    std::vector<char> win(count, 0);
    const auto w = game.weights();
    for (std::size_t mask = 1; mask < count; ++mask) {
        const std::size_t high = std::bit_width(mask) - 1;
        sum[mask] = sum[mask & ~(std::size_t{1} << high)] + w[high];
        win[mask] = sum[mask] > game.threshold() ? 1 : 0;
    }
    return win;
}

PowerProfile finish(std::vector<std::uint64_t> pivots, std::size_t n) {
    PowerProfile p;
    p.orderings = kFactorial[n];
    p.spi.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        p.spi[i] = static_cast<double>(pivots[i]) / static_cast<double>(p.orderings);
    p.pivots = std::move(pivots);
    return p;
}

// Counts of coalitions keyed by integer weight, one count per coalition size.
// Entries are sorted by weight; only weights with 2*weight <= limit2 are kept.
class CoalitionCount {
public:
    CoalitionCount(std::size_t max_size, std::int64_t limit2)
        : stride_(max_size + 1), limit2_(limit2), weights_{0}, counts_(stride_, 0) {
        counts_[0] = 1;
    }

    void add_player(std::int64_t w) {
        std::vector<std::int64_t> weights;
        std::vector<std::uint64_t> counts;
        weights.reserve(weights_.size() * 2);
        counts.reserve(counts_.size() * 2);

        std::size_t a = 0, b = 0;
        const std::size_t len = weights_.size();
        auto shifted_ok = [&](std::size_t j) { return 2 * (weights_[j] + w) <= limit2_; };
        auto push = [&](std::int64_t weight) {
            weights.push_back(weight);
            counts.resize(counts.size() + stride_, 0);
        };
        while (a < len || (b < len && shifted_ok(b))) {
            const bool take_b = b < len && shifted_ok(b);
            const std::int64_t wa = a < len ? weights_[a] : INT64_MAX;
            const std::int64_t wb = take_b ? weights_[b] + w : INT64_MAX;
            const std::int64_t next = std::min(wa, wb);
            push(next);
            std::uint64_t* dst = counts.data() + counts.size() - stride_;
            if (wa == next) {
                const std::uint64_t* src = counts_.data() + a * stride_;
                for (std::size_t k = 0; k < stride_; ++k) dst[k] += src[k];
                ++a;
            }
            if (wb == next) {
                const std::uint64_t* src = counts_.data() + b * stride_;
                for (std::size_t k = 0; k + 1 < stride_; ++k) dst[k + 1] += src[k];
                ++b;
            }
        }
        weights_ = std::move(weights);
        counts_ = std::move(counts);
    }

    // Sum over entries with lo < weight of k!(m-k)! * count(size k),
    // where m = max_size. Entries are already bounded above by the limit.
    std::uint64_t weighted_swings(std::int64_t lo2_exclusive, std::int64_t w) const {
        const std::size_t m = stride_ - 1;
        std::uint64_t total = 0;
        for (std::size_t e = 0; e < weights_.size(); ++e) {
            if (2 * (weights_[e] + w) <= lo2_exclusive) continue;
            const std::uint64_t* c = counts_.data() + e * stride_;
            for (std::size_t k = 0; k <= m; ++k)
                if (c[k] != 0) total += c[k] * kFactorial[k] * kFactorial[m - k];
        }
        return total;
    }

private:
    std::size_t stride_;
    std::int64_t limit2_;
    std::vector<std::int64_t> weights_;
    std::vector<std::uint64_t> counts_;
};

std::uint64_t dp_pivots(std::span<const std::int64_t> grid_weights, std::int64_t total,
                        std::size_t player) {
    const std::int64_t w = grid_weights[player];
    if (w == 0) return 0;
    const std::size_t n = grid_weights.size();
    CoalitionCount table(n - 1, total);
    for (std::size_t j = 0; j < n; ++j)
        if (j != player) table.add_player(grid_weights[j]);
    // Losing S (2W <= total) that wins with the player (2(W + w) > total).
    return table.weighted_swings(total, w);
}

} // namespace

WeightedVotingGame::WeightedVotingGame(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw std::invalid_argument("voting game needs at least one player");
    if (weights_.size() > kMaxPlayers)
        throw std::invalid_argument("voting game supports at most " + std::to_string(kMaxPlayers) +
                                    " players");
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("voting weights must be finite and non-negative");
    }
    total_ = coalition_weight((std::uint32_t{1} << weights_.size()) - 1);
    if (!(total_ > 0.0)) throw std::invalid_argument("voting game needs positive total weight");
}

double WeightedVotingGame::coalition_weight(std::uint32_t mask) const {
    if (weights_.size() < 32 && (mask >> weights_.size()) != 0)
        throw std::out_of_range("coalition names a player outside the game");
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (mask & (std::uint32_t{1} << i)) acc += weights_[i];
    return acc;
}

bool WeightedVotingGame::is_winning(std::uint32_t mask) const { return coalition_weight(mask) > threshold(); }

WeightedVotingGame make_game(std::vector<double> shares) { return WeightedVotingGame(std::move(shares)); }

bool is_winning(const WeightedVotingGame& game, std::span<const std::size_t> coalition) {
    std::uint32_t mask = 0;
    for (std::size_t p : coalition) {
        if (p >= game.size()) throw std::out_of_range("coalition names a player outside the game");
        mask |= std::uint32_t{1} << p;
    }
    return game.is_winning(mask);
}

PowerProfile spi_permutation_oracle(const WeightedVotingGame& game) {
    const std::size_t n = game.size();
    if (n > kMaxOraclePlayers)
        throw std::invalid_argument("permutation oracle is limited to " +
                                    std::to_string(kMaxOraclePlayers) + " players");
    const auto win = winning_table(game);
    std::vector<std::uint64_t> pivots(n, 0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
        std::size_t mask = 0;
        for (std::size_t p : order) {
            mask |= std::size_t{1} << p;
            if (win[mask]) {
                ++pivots[p];
                break;
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return finish(std::move(pivots), n);
}

PowerProfile spi_subset(const WeightedVotingGame& game) {
    const std::size_t n = game.size();
    const auto win = winning_table(game);
    const std::size_t count = std::size_t{1} << n;
    std::vector<std::uint64_t> pivots(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t mask = 0; mask < count; ++mask) {
            if ((mask & bit) || win[mask] || !win[mask | bit]) continue;
            const std::size_t s = std::popcount(mask);
            pivots[i] += kFactorial[s] * kFactorial[n - 1 - s];
        }
    }
    return finish(std::move(pivots), n);
}

std::vector<std::int64_t> integerize(std::span<const double> weights, std::int64_t grid) {
    if (grid <= 0) throw std::invalid_argument("grid resolution must be positive");
    // Keeps twice the total plus one shifted weight inside int64.
    constexpr double kMaxUnits = 0x1.0p58 / static_cast<double>(kMaxPlayers);
    std::vector<std::int64_t> out;
    out.reserve(weights.size());
    for (double w : weights) {
        const double scaled = w * static_cast<double>(grid);
        if (!(scaled <= kMaxUnits)) throw std::overflow_error("weight overflows the integer grid");
        out.push_back(static_cast<std::int64_t>(std::nearbyint(scaled)));
    }
    return out;
}

PowerProfile spi_dp(const WeightedVotingGame& game, std::int64_t grid) {
    const auto units = integerize(game.weights(), grid);
    const std::int64_t total = std::accumulate(units.begin(), units.end(), std::int64_t{0});
    const std::size_t n = units.size();
    std::vector<std::uint64_t> pivots(n, 0);
    if (total == 0) throw std::invalid_argument("all weights round to zero on the grid");
    for (std::size_t i = 0; i < n; ++i) pivots[i] = dp_pivots(units, total, i);
    return finish(std::move(pivots), n);
}

double spi_dp_player(const WeightedVotingGame& game, std::size_t player, std::int64_t grid) {
    if (player >= game.size()) throw std::out_of_range("player index outside the game");
    const auto units = integerize(game.weights(), grid);
    const std::int64_t total = std::accumulate(units.begin(), units.end(), std::int64_t{0});
    if (total == 0) throw std::invalid_argument("all weights round to zero on the grid");
    return static_cast<double>(dp_pivots(units, total, player)) /
           static_cast<double>(kFactorial[units.size()]);
}

WeightedVotingGame extend_with_residual(const WeightedVotingGame& game, double residual_share) {
    std::vector<double> w(game.weights().begin(), game.weights().end());
    w.push_back(std::max(residual_share, 0.0));
    return WeightedVotingGame(std::move(w));
}

} // namespace ctrlpower

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ctrlpower {

/// Largest game the exact counting routines accept.
inline constexpr std::size_t kMaxPlayers = 20;
/// Largest game the permutation oracle accepts (n! orderings).
inline constexpr std::size_t kMaxOraclePlayers = 9;
/// Default integer grid for spi_dp: one unit is 1e-6 of a share.
inline constexpr std::int64_t kDefaultGrid = 1'000'000;

/// Weighted voting game under the strict-majority rule: a coalition wins iff
/// its weight is strictly greater than half of the total weight of the
/// players in the game.
class WeightedVotingGame {
public:
    /// Throws std::invalid_argument on an empty list, a negative or
    /// non-finite weight, an all-zero list, or more than kMaxPlayers players.
    explicit WeightedVotingGame(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    std::span<const double> weights() const { return weights_; }
    double weight(std::size_t player) const { return weights_.at(player); }
    double total() const { return total_; }
    /// A coalition wins iff its weight is strictly above this value.
    double threshold() const { return total_ / 2.0; }

    /// Weight of the coalition encoded as a bit mask (bit i = player i).
    /// Members are summed in ascending index order so every caller sees the
    /// same floating-point value for the same coalition.
    double coalition_weight(std::uint32_t mask) const;

    /// Win test for a coalition mask; throws std::out_of_range if the mask
    /// names a player outside the game.
    bool is_winning(std::uint32_t mask) const;

private:
    std::vector<double> weights_;
    double total_ = 0.0;
};

/// Per-player Shapley–Shubik index.
///
/// `pivots[i]` is the number of player orderings in which player i is
/// pivotal and `orderings` is n!, so the rational index is
/// pivots[i] / orderings and the pivot counts sum to `orderings` exactly.
/// `spi` is the floating-point view of the same ratios.
struct PowerProfile {
    std::vector<std::uint64_t> pivots;
    std::uint64_t orderings = 0;
    std::vector<double> spi;

    std::size_t size() const { return spi.size(); }
};

/// Builds a game from shareholder fractions; quota is a strict majority of
/// their sum.
WeightedVotingGame make_game(std::vector<double> shares);

/// Coalition given as a list of player indices.
bool is_winning(const WeightedVotingGame& game, std::span<const std::size_t> coalition);

/// Reference definition: walks all n! orderings and credits the pivot of
/// each. Refuses games with more than kMaxOraclePlayers players.
PowerProfile spi_permutation_oracle(const WeightedVotingGame& game);

/// Swing enumeration over the 2^(n-1) coalitions of the other players,
/// each swing weighted by |S|!(n-1-|S|)!.
PowerProfile spi_subset(const WeightedVotingGame& game);

/// Generating-function dynamic program on the integer grid.
///
/// Weights are scaled by `grid` and rounded half-to-even. For each player the
/// program counts coalitions of the remaining players by (size, weight),
/// keeping only weights that still lose, then reads off the swing window.
/// Counting is exact, so the result is bitwise deterministic for a fixed
/// grid. Throws std::invalid_argument for grid <= 0, std::overflow_error if a
/// scaled weight does not fit the grid arithmetic.
PowerProfile spi_dp(const WeightedVotingGame& game, std::int64_t grid = kDefaultGrid);

/// Index of a single player via the same program as spi_dp; used by the
/// batch kernels where only the largest holder matters.
double spi_dp_player(const WeightedVotingGame& game, std::size_t player,
                     std::int64_t grid = kDefaultGrid);

/// Appends max(residual_share, 0) as an extra player.
WeightedVotingGame extend_with_residual(const WeightedVotingGame& game, double residual_share);

/// Integer weights on the grid used by spi_dp.
std::vector<std::int64_t> integerize(std::span<const double> weights, std::int64_t grid);

} // namespace ctrlpower

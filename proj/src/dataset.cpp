#include "ctrlpower/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ctrlpower/error.hpp"
#include "ctrlpower/random.hpp"
#include "csv.hpp"

namespace ctrlpower {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

std::size_t group_index(GroupKey g) {
    const auto& groups = all_groups();
    return static_cast<std::size_t>(std::find(groups.begin(), groups.end(), g) - groups.begin());
}

// Caps every piece at `cap`, handing the excess to the uncapped pieces in
// proportion to their size. Requires sum <= cap * pieces.size().
void water_fill(std::vector<double>& pieces, double cap) {
    for (int round = 0; round < 16; ++round) {
        double excess = 0.0, free_mass = 0.0;
        for (double& p : pieces) {
            if (p > cap) {
                excess += p - cap;
                p = cap;
            } else if (p < cap) {
                free_mass += p;
            }
        }
        if (excess <= 0.0 || free_mass <= 0.0) return;
        const double scale = 1.0 + excess / free_mass;
        for (double& p : pieces)
            if (p < cap) p *= scale;
    }
    for (double& p : pieces) p = std::min(p, cap);
}

} // namespace

std::string_view to_string(Board b) { return b == Board::main ? "main" : "sme_gem"; }
std::string_view to_string(Ownership o) { return o == Ownership::priv ? "private" : "state"; }

std::optional<Board> parse_board(std::string_view s) {
    if (s == "main") return Board::main;
    if (s == "sme_gem") return Board::sme_gem;
    return std::nullopt;
}

std::optional<Ownership> parse_ownership(std::string_view s) {
    if (s == "private") return Ownership::priv;
    if (s == "state") return Ownership::state;
    return std::nullopt;
}

std::string GroupKey::name() const {
    return std::string(to_string(ownership)) + "_" + std::string(to_string(board));
}

const std::array<GroupKey, 4>& all_groups() {
    static const std::array<GroupKey, 4> groups = {GroupKey{Board::main, Ownership::priv},
                                                   GroupKey{Board::main, Ownership::state},
                                                   GroupKey{Board::sme_gem, Ownership::priv},
                                                   GroupKey{Board::sme_gem, Ownership::state}};
    return groups;
}

double FirmYearRecord::top2_10() const {
    double s = 0.0;
    for (std::size_t i = 1; i < shares.size(); ++i) s += shares[i];
    return s;
}

double FirmYearRecord::top10() const {
    double s = 0.0;
    for (double v : shares) s += v;
    return s;
}

void validate(const FirmYearRecord& r) {
    if (r.firm_id.empty()) throw DataError("empty firm_id");
    if (r.shares.empty()) throw DataError("no shareholder shares");
    if (r.shares.size() > kMaxHolders) throw DataError("more than 10 shareholders");
    double sum = 0.0;
    for (std::size_t i = 0; i < r.shares.size(); ++i) {
        const double s = r.shares[i];
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) throw DataError("share outside [0, 1]");
        if (i > 0 && s > r.shares[i - 1]) throw DataError("shares are not in descending order");
        sum += s;
    }
    if (sum > 1.0 + kShareSumTolerance) throw DataError("shares sum above 1");
    if (!(sum > 0.0)) throw DataError("all shares are zero");
    if (r.meeting_share && !(*r.meeting_share >= 0.0 && *r.meeting_share <= 1.0))
        throw DataError("meeting_share outside [0, 1]");
    if (r.n_meetings && *r.n_meetings < 0) throw DataError("negative n_meetings");
}

namespace {

double parse_double(std::string_view field, std::string_view column) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw DataError("unparseable number '" + std::string(field) + "' in column " + std::string(column));
    return v;
}

int parse_int(std::string_view field, std::string_view column) {
    int v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw DataError("unparseable integer '" + std::string(field) + "' in column " + std::string(column));
    return v;
}

FirmYearRecord parse_row(const std::vector<std::string>& fields, const std::array<std::size_t, 16>& col) {
    auto field = [&](std::size_t c) -> std::string_view { return fields[col[c]]; };
    FirmYearRecord r;
    r.firm_id = std::string(field(0));
    r.year = parse_int(field(1), "year");
    const auto board = parse_board(field(2));
    if (!board) throw DataError("unknown board '" + std::string(field(2)) + "'");
    r.board = *board;
    const auto own = parse_ownership(field(3));
    if (!own) throw DataError("unknown ownership '" + std::string(field(3)) + "'");
    r.ownership = *own;

    bool gap = false;
    for (std::size_t i = 0; i < kMaxHolders; ++i) {
        const auto f = field(4 + i);
        if (f.empty()) {
            gap = true;
            continue;
        }
        if (gap) throw DataError("share s" + std::to_string(i + 1) + " follows a blank holder");
        r.shares.push_back(parse_double(f, kRegistryColumns[4 + i]));
    }
    if (!field(14).empty()) r.meeting_share = parse_double(field(14), "meeting_share");
    if (!field(15).empty()) r.n_meetings = parse_int(field(15), "n_meetings");

    // Small ordering slips are rounding noise; larger ones are data errors.
    for (std::size_t i = 1; i < r.shares.size(); ++i) {
        if (r.shares[i] > r.shares[i - 1] + kOrderTolerance)
            throw DataError("shares are not in descending order");
    }
    std::stable_sort(r.shares.begin(), r.shares.end(), std::greater<>());
    validate(r);
    return r;
}

void write_double(std::ostream& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
}

} // namespace

IngestResult ingest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("registry CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // Tolerate a UTF-8 byte order mark.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = detail::split_csv_line(line);

    std::array<std::size_t, 16> col{};
    for (std::size_t c = 0; c < kRegistryColumns.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), kRegistryColumns[c]);
        if (it == header.end()) throw DataError("missing required column '" + std::string(kRegistryColumns[c]) + "'");
        col[c] = static_cast<std::size_t>(it - header.begin());
    }

    IngestResult result;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
            const auto fields = detail::split_csv_line(line);
            if (fields.size() != header.size())
                throw DataError("expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()));
            result.records.push_back(parse_row(fields, col));
        } catch (const DataError& e) {
            result.diagnostics.push_back("row " + std::to_string(row) + ": " + e.what());
        }
    }
    return result;
}

IngestResult ingest_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return ingest_csv(in);
}

void emit_csv(std::ostream& out, const std::vector<FirmYearRecord>& records) {
    for (std::size_t c = 0; c < kRegistryColumns.size(); ++c) out << (c ? "," : "") << kRegistryColumns[c];
    out << '\n';
    for (const auto& r : records) {
        out << detail::quote_csv_field(r.firm_id) << ',' << r.year << ',' << to_string(r.board) << ','
            << to_string(r.ownership);
        for (std::size_t i = 0; i < kMaxHolders; ++i) {
            out << ',';
            if (i < r.shares.size()) write_double(out, r.shares[i]);
        }
        out << ',';
        if (r.meeting_share) write_double(out, *r.meeting_share);
        out << ',';
        if (r.n_meetings) out << *r.n_meetings;
        out << '\n';
    }
}

std::vector<FirmYearRecord> apply_sample_filter(const std::vector<FirmYearRecord>& records) {
    std::vector<FirmYearRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [](const FirmYearRecord& r) { return r.top1() < 0.5; });
    return out;
}

std::map<GroupKey, std::vector<FirmYearRecord>> group_records(const std::vector<FirmYearRecord>& records) {
    std::map<GroupKey, std::vector<FirmYearRecord>> cells;
    for (const auto& g : all_groups()) cells[g];
    for (const auto& r : records) cells[r.group()].push_back(r);
    return cells;
}

void canonical_sort(std::vector<FirmYearRecord>& records) {
    std::sort(records.begin(), records.end(), [](const FirmYearRecord& a, const FirmYearRecord& b) {
        const auto ka = std::tie(a.board, a.ownership, a.year, a.firm_id);
        const auto kb = std::tie(b.board, b.ownership, b.year, b.firm_id);
        if (ka != kb) return ka < kb;
        if (a.shares != b.shares) return a.shares < b.shares;
        if (a.meeting_share != b.meeting_share) return a.meeting_share < b.meeting_share;
        return a.n_meetings < b.n_meetings;
    });
}

void SynthConfig::validate() const {
    if (!(top1_min > 0.0 && top1_min < top1_max && top1_max < 1.0))
        throw std::invalid_argument("synth: top1 clip range must satisfy 0 < min < max < 1");
    if (split_alpha && !(*split_alpha > 0.0)) throw std::invalid_argument("synth: split_alpha must be positive");
    if (meeting_ratio && !(meeting_ratio->sd >= 0.0)) throw std::invalid_argument("synth: negative meeting sd");
    if (groups.empty()) throw std::invalid_argument("synth: no groups configured");
    for (const auto& g : groups) {
        for (const auto& y : g.years) {
            if (y.firms < 1) throw std::invalid_argument("synth: firms per year must be at least 1");
            if (!(y.top1.sd >= 0.0 && y.top2_10.sd >= 0.0)) throw std::invalid_argument("synth: negative sd target");
            if (!(y.top1.mean >= top1_min && y.top1.mean <= top1_max))
                throw std::invalid_argument("synth: top1 mean target " + std::to_string(y.top1.mean) +
                                            " outside the clip range");
            if (!(y.top2_10.mean >= 0.0 && y.top2_10.mean < 1.0))
                throw std::invalid_argument("synth: top2-10 mean target outside [0, 1)");
        }
    }
}

std::vector<FirmYearRecord> synth_registry(const SynthConfig& config) {
    config.validate();
    std::vector<FirmYearRecord> out;
    for (const auto& g : config.groups) {
        const std::uint64_t gi = group_index(g.group);
        for (const auto& target : g.years) {
            Rng rng(stream_seed(config.seed, gi, static_cast<std::uint64_t>(target.year)));
            for (int i = 0; i < target.firms; ++i) {
                FirmYearRecord r;
                std::ostringstream id;
                id << g.group.name() << '-' << target.year << '-' << i;
                r.firm_id = id.str();
                r.year = target.year;
                r.board = g.group.board;
                r.ownership = g.group.ownership;

                const double top1 =
                    std::clamp(rng.normal(target.top1.mean, target.top1.sd), config.top1_min, config.top1_max);
                const double room = std::min(1.0 - top1, 9.0 * top1);
                const double rest = std::clamp(rng.normal(target.top2_10.mean, target.top2_10.sd), 0.0, room);

                std::vector<double> pieces(9, std::min(rest / 9.0, top1));
                if (config.split_alpha) {
                    double sum = 0.0;
                    for (double& p : pieces) sum += (p = rng.gamma(*config.split_alpha));
                    for (double& p : pieces) p = rest * p / sum;
                    water_fill(pieces, top1);
                    std::sort(pieces.begin(), pieces.end(), std::greater<>());
                }
                r.shares.reserve(kMaxHolders);
                r.shares.push_back(top1);
                r.shares.insert(r.shares.end(), pieces.begin(), pieces.end());

                if (config.meeting_ratio) {
                    const double top10 = r.top10();
                    const double ratio = std::max(rng.normal(config.meeting_ratio->mean, config.meeting_ratio->sd), 0.0);
                    r.meeting_share = std::min(ratio * top10, 1.0);
                    r.n_meetings = 1 + static_cast<int>(rng.below(4));
                }
                validate(r);
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::vector<YearDraws> synth_outcomes(const SynthConfig& config, GroupKey group) {
    config.validate();
    const ControlPowerPdf pdf(config.outcome_wave, config.outcome_mu, config.outcome_sigma);
    const auto it = std::find_if(config.groups.begin(), config.groups.end(),
                                 [&](const GroupTargets& g) { return g.group == group; });
    if (it == config.groups.end() || it->years.empty())
        throw std::invalid_argument("synth_outcomes: group " + group.name() + " is not configured");
    const int first_year = it->years.front().year;
    std::vector<YearDraws> out;
    for (const auto& target : it->years) {
        const double t = static_cast<double>(target.year - first_year);
        const auto seed = stream_seed(config.seed, 0x6f7574636f6d65ULL + group_index(group),
                                      static_cast<std::uint64_t>(target.year));
        out.push_back({target.year, pdf.sample(t, seed, static_cast<std::size_t>(target.firms))});
    }
    return out;
}

SynthConfig outcome_synth_config(std::uint64_t seed, double h, int firms, int years, int first_year) {
    if (years < 1) throw std::invalid_argument("outcome config needs at least one year");
    SynthConfig c;
    c.seed = seed;
    c.outcome_wave = hypothesis_wave(h).params;
    GroupTargets g;
    g.group = {Board::main, Ownership::priv};
    for (int i = 0; i < years; ++i) g.years.push_back({first_year + i, firms, {0.28, 0.10}, {0.27, 0.12}});
    c.groups.push_back(std::move(g));
    return c;
}

} // namespace ctrlpower

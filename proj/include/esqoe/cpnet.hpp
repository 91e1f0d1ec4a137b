#ifndef ESQOE_CPNET_HPP_
#define ESQOE_CPNET_HPP_

#include "esqoe/model.hpp"
#include "esqoe/validation.hpp"

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Conditional preference networks over a provider's temporal attributes
// (e.g. Day and TimeSlot) and their linearization into slot ranks.
namespace esqoe::cpnet {

using ValueIndex = std::size_t;

inline constexpr std::size_t kDefaultOutcomeCap = 4096;

/// One value per attribute, as indices into each attribute's domain.
struct Outcome {
    std::vector<ValueIndex> values;

    friend auto operator<=>(const Outcome &, const Outcome &) = default;
    friend bool operator==(const Outcome &, const Outcome &) = default;
};

struct Attribute {
    std::string name;
    std::vector<std::string> domain;
    std::vector<std::size_t> parents;
};

/// Dependency graph plus conditional preference tables. Built
/// incrementally; `validate` checks the structural invariants and every
/// reasoning operation below refuses an invalid net.
class CPNet {
public:
    // Returns the new attribute's index. Throws on a duplicate name, an
    // empty domain, or duplicate domain labels.
    std::size_t add_attribute(std::string name, std::vector<std::string> domain);
    void set_parents(std::size_t attr, std::vector<std::size_t> parents);

    // `parent_values[k]` is the value of `parents(attr)[k]`; `order` lists
    // domain indices best first. A later call for the same assignment
    // replaces the row.
    void set_row(std::size_t attr, std::vector<ValueIndex> parent_values,
                 std::vector<ValueIndex> order);

    std::size_t size() const { return attributes_.size(); }
    const Attribute &attribute(std::size_t i) const { return attributes_.at(i); }
    std::optional<std::size_t> find(std::string_view name) const;
    std::optional<ValueIndex> find_value(std::size_t attr, std::string_view label) const;

    const std::map<std::vector<ValueIndex>, std::vector<ValueIndex>> &rows(std::size_t attr) const {
        return rows_.at(attr);
    }

    // Preference order of `attr` given the parent values inside `context`;
    // null when the row is missing.
    const std::vector<ValueIndex> *order_given(std::size_t attr, const Outcome &context) const;

    // Product of domain sizes, saturating at SIZE_MAX.
    std::size_t outcome_count() const;
    Outcome outcome_at(std::size_t index) const;
    std::size_t index_of(const Outcome &o) const;

    // "(D1,T1)"
    std::string describe(const Outcome &o) const;
    std::optional<Outcome> parse_outcome(std::string_view labels) const;

private:
    std::vector<Attribute> attributes_;
    std::vector<std::map<std::vector<ValueIndex>, std::vector<ValueIndex>>> rows_;
};

ValidationReport validate(const CPNet &net);

// Forward sweep in topological order, each attribute taking its best value
// given the already assigned parents.
Outcome optimal_outcome(const CPNet &net);

// True iff a chain of one or more worsening flips leads from `better` to
// `worse`. Breadth-first over the outcome space, so exponential in the
// number of attributes.
bool dominates(const CPNet &net, const Outcome &better, const Outcome &worse,
               std::size_t cap = kDefaultOutcomeCap);

struct RankedOutcome {
    Outcome outcome;
    Rank rank;
};

// Dense ranks 1..m from a topological order of the worsening-flip graph;
// incomparable outcomes are ordered lexicographically by value index.
std::vector<RankedOutcome> rank_outcomes(const CPNet &net, std::size_t cap = kDefaultOutcomeCap);

/// Maps outcomes onto horizon slots. The grid form reads attribute 0 as
/// the day and attribute 1 as the slot of day:
/// slot = day * slots_per_day + slot_of_day.
class OutcomeSlotMap {
public:
    static OutcomeSlotMap grid(std::size_t days, std::size_t slots_per_day);
    static OutcomeSlotMap explicit_map(std::vector<std::pair<Outcome, SlotIndex>> entries);

    bool is_grid() const { return grid_; }
    std::size_t days() const { return days_; }
    std::size_t slots_per_day() const { return slots_per_day_; }

    // Absent when the outcome is not covered by the map.
    std::optional<SlotIndex> slot_for(const CPNet &net, const Outcome &o) const;

private:
    bool grid_ = true;
    std::size_t days_ = 0;
    std::size_t slots_per_day_ = 0;
    std::map<Outcome, SlotIndex> explicit_;
};

// Ranks outcomes, maps them to slots, drops unmapped ones and re-compacts
// the ranks to 1..m. Throws if two ranked outcomes share a slot.
ProviderTemporalPreferences to_ptp(const CPNet &net, const OutcomeSlotMap &map, ProviderId pid,
                                   std::size_t cap = kDefaultOutcomeCap);

struct ProviderNet {
    ProviderId pid;
    CPNet net;
    OutcomeSlotMap map;
};

// Line-oriented text format:
//   provider <pid>
//   attr <Name>: <v1>,<v2>[,...] [parents <P1>[,<P2>...]]
//   cpt <Name> [| <P1>=<val>[,...]]: <va> > <vb> [> ...]
//   map grid <days>x<slots_per_day> | map explicit <v1,v2>=<slot> ...
// '#' starts a comment. Without a map line the grid is sized from the
// first two attribute domains.
std::vector<ProviderNet> parse_cpnets(std::string_view text);
std::vector<ProviderNet> read_cpnets(const std::filesystem::path &path);

} // namespace esqoe::cpnet

#endif

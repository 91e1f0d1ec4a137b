#include "esqoe/cpnet.hpp"

#include "esqoe/csv.hpp"
#include "esqoe/error.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace esqoe::cpnet {

std::size_t CPNet::add_attribute(std::string name, std::vector<std::string> domain) {
    if (name.empty())
        throw Error("attribute name must not be empty");
    if (find(name))
        throw Error("attribute '" + name + "' declared twice");
    if (domain.empty())
        throw Error("attribute '" + name + "' has an empty domain");
    std::set<std::string> labels;
    for (const auto &v : domain) {
        if (v.empty())
            throw Error("attribute '" + name + "' has an empty value label");
        if (!labels.insert(v).second)
            throw Error("attribute '" + name + "' lists value '" + v + "' twice");
    }
    attributes_.push_back(Attribute{std::move(name), std::move(domain), {}});
    rows_.emplace_back();
    return attributes_.size() - 1;
}

void CPNet::set_parents(std::size_t attr, std::vector<std::size_t> parents) {
    auto &a = attributes_.at(attr);
    for (auto p : parents)
        if (p >= attributes_.size())
            throw Error("attribute '" + a.name + "' has an unknown parent");
    a.parents = std::move(parents);
    rows_[attr].clear();
}

void CPNet::set_row(std::size_t attr, std::vector<ValueIndex> parent_values,
                    std::vector<ValueIndex> order) {
    const auto &a = attributes_.at(attr);
    if (parent_values.size() != a.parents.size())
        throw Error("CPT row for '" + a.name + "' must assign every parent");
    for (std::size_t k = 0; k < parent_values.size(); ++k)
        if (parent_values[k] >= attributes_[a.parents[k]].domain.size())
            throw Error("CPT row for '" + a.name + "' uses an out-of-domain parent value");
    for (auto v : order)
        if (v >= a.domain.size())
            throw Error("CPT row for '" + a.name + "' uses an out-of-domain value");
    rows_[attr][std::move(parent_values)] = std::move(order);
}

std::optional<std::size_t> CPNet::find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        if (attributes_[i].name == name)
            return i;
    return std::nullopt;
}

std::optional<ValueIndex> CPNet::find_value(std::size_t attr, std::string_view label) const {
    const auto &d = attributes_.at(attr).domain;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == label)
            return i;
    return std::nullopt;
}

const std::vector<ValueIndex> *CPNet::order_given(std::size_t attr, const Outcome &context) const {
    const auto &a = attributes_[attr];
    std::vector<ValueIndex> key;
    key.reserve(a.parents.size());
    for (auto p : a.parents)
        key.push_back(context.values[p]);
    auto it = rows_[attr].find(key);
    return it == rows_[attr].end() ? nullptr : &it->second;
}

std::size_t CPNet::outcome_count() const {
    if (attributes_.empty())
        return 0;
    std::size_t n = 1;
    for (const auto &a : attributes_) {
        if (n > std::numeric_limits<std::size_t>::max() / a.domain.size())
            return std::numeric_limits<std::size_t>::max();
        n *= a.domain.size();
    }
    return n;
}

// Mixed radix with attribute 0 most significant, so index order is the
// lexicographic order of value indices.
Outcome CPNet::outcome_at(std::size_t index) const {
    Outcome o{std::vector<ValueIndex>(attributes_.size())};
    for (std::size_t k = attributes_.size(); k-- > 0;) {
        const auto radix = attributes_[k].domain.size();
        o.values[k] = index % radix;
        index /= radix;
    }
    return o;
}

std::size_t CPNet::index_of(const Outcome &o) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < attributes_.size(); ++k)
        index = index * attributes_[k].domain.size() + o.values[k];
    return index;
}

std::string CPNet::describe(const Outcome &o) const {
    std::string out = "(";
    for (std::size_t k = 0; k < o.values.size(); ++k) {
        if (k)
            out += ',';
        out += k < attributes_.size() && o.values[k] < attributes_[k].domain.size()
                   ? attributes_[k].domain[o.values[k]]
                   : "?";
    }
    return out + ")";
}

std::optional<Outcome> CPNet::parse_outcome(std::string_view labels) const {
    auto parts = csv::split(labels);
    if (parts.size() != attributes_.size())
        return std::nullopt;
    Outcome o;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        auto v = find_value(k, parts[k]);
        if (!v)
            return std::nullopt;
        o.values.push_back(*v);
    }
    return o;
}

namespace {

// Kahn's algorithm over the parent graph. Attributes on (or behind) a
// cycle are left out of the returned order.
std::vector<std::size_t> topological_attributes(const CPNet &net) {
    const auto n = net.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 0; i < n; ++i)
        for (auto p : net.attribute(i).parents) {
            ++indegree[i];
            children[p].push_back(i);
        }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push(i);
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        auto i = ready.top();
        ready.pop();
        order.push_back(i);
        for (auto c : children[i])
            if (--indegree[c] == 0)
                ready.push(c);
    }
    return order;
}

std::string assignment_text(const CPNet &net, std::size_t attr, const std::vector<ValueIndex> &key) {
    const auto &parents = net.attribute(attr).parents;
    std::string out;
    for (std::size_t k = 0; k < parents.size(); ++k) {
        const auto &p = net.attribute(parents[k]);
        out += (k ? "," : "") + p.name + "=" + p.domain[key[k]];
    }
    return out.empty() ? "(unconditional)" : out;
}

void require_valid(const CPNet &net) {
    auto report = validate(net);
    if (!report.ok())
        throw Error("invalid CP-net: " + report.summary());
}

void require_outcome(const CPNet &net, const Outcome &o) {
    if (o.values.size() != net.size())
        throw Error("outcome " + net.describe(o) + " does not assign every attribute");
    for (std::size_t k = 0; k < o.values.size(); ++k)
        if (o.values[k] >= net.attribute(k).domain.size())
            throw Error("outcome " + net.describe(o) + " is out of domain");
}

void require_cap(const CPNet &net, std::size_t cap) {
    if (net.outcome_count() > cap)
        throw Error("outcome space of " + std::to_string(net.outcome_count()) +
                    " exceeds the cap of " + std::to_string(cap));
}

// Calls `visit(worse)` for every outcome one worsening flip below `o`.
template <class Visit>
void for_each_worsening_flip(const CPNet &net, const Outcome &o, Visit &&visit) {
    Outcome next = o;
    for (std::size_t k = 0; k < net.size(); ++k) {
        const auto *order = net.order_given(k, o);
        auto pos = std::find(order->begin(), order->end(), o.values[k]);
        for (auto it = std::next(pos); it != order->end(); ++it) {
            next.values[k] = *it;
            visit(next);
        }
        next.values[k] = o.values[k];
    }
}

} // namespace

ValidationReport validate(const CPNet &net) {
    ValidationReport report;
    if (net.size() == 0) {
        report.add("net has no attributes");
        return report;
    }
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto &a = net.attribute(i);
        std::set<std::size_t> seen;
        for (auto p : a.parents) {
            if (p == i)
                report.add("attribute '" + a.name + "' is its own parent");
            else if (!seen.insert(p).second)
                report.add("attribute '" + a.name + "' lists parent '" + net.attribute(p).name + "' twice");
        }
    }

    auto order = topological_attributes(net);
    if (order.size() != net.size()) {
        std::vector<bool> placed(net.size(), false);
        for (auto i : order)
            placed[i] = true;
        for (std::size_t i = 0; i < net.size(); ++i)
            if (!placed[i] && std::find(net.attribute(i).parents.begin(), net.attribute(i).parents.end(), i) ==
                                  net.attribute(i).parents.end())
                report.add("attribute '" + net.attribute(i).name + "' lies on a cycle of the parent graph");
    }

    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto &a = net.attribute(i);
        // Enumerate every parent assignment in mixed radix.
        std::vector<ValueIndex> key(a.parents.size(), 0);
        for (bool more = true; more;) {
            auto it = net.rows(i).find(key);
            if (it == net.rows(i).end()) {
                report.add("attribute '" + a.name + "': missing CPT row for " + assignment_text(net, i, key));
            } else {
                std::vector<int> count(a.domain.size(), 0);
                for (auto v : it->second)
                    ++count[v];
                for (std::size_t v = 0; v < count.size(); ++v) {
                    if (count[v] == 0)
                        report.add("attribute '" + a.name + "', row " + assignment_text(net, i, key) +
                                   ": value '" + a.domain[v] + "' missing from the order");
                    else if (count[v] > 1)
                        report.add("attribute '" + a.name + "', row " + assignment_text(net, i, key) +
                                   ": value '" + a.domain[v] + "' repeated in the order");
                }
            }
            more = false;
            for (std::size_t k = key.size(); k-- > 0;) {
                if (++key[k] < net.attribute(a.parents[k]).domain.size()) {
                    more = true;
                    break;
                }
                key[k] = 0;
            }
        }
    }
    return report;
}

Outcome optimal_outcome(const CPNet &net) {
    require_valid(net);
    Outcome o{std::vector<ValueIndex>(net.size(), 0)};
    for (auto attr : topological_attributes(net))
        o.values[attr] = net.order_given(attr, o)->front();
    return o;
}

bool dominates(const CPNet &net, const Outcome &better, const Outcome &worse, std::size_t cap) {
    require_valid(net);
    require_outcome(net, better);
    require_outcome(net, worse);
    require_cap(net, cap);
    if (better == worse)
        return false;

    std::vector<bool> visited(net.outcome_count(), false);
    std::deque<Outcome> frontier{better};
    visited[net.index_of(better)] = true;
    while (!frontier.empty()) {
        auto current = std::move(frontier.front());
        frontier.pop_front();
        bool found = false;
        for_each_worsening_flip(net, current, [&](const Outcome &next) {
            if (found)
                return;
            if (next == worse) {
                found = true;
                return;
            }
            auto idx = net.index_of(next);
            if (!visited[idx]) {
                visited[idx] = true;
                frontier.push_back(next);
            }
        });
        if (found)
            return true;
    }
    return false;
}

std::vector<RankedOutcome> rank_outcomes(const CPNet &net, std::size_t cap) {
    require_valid(net);
    require_cap(net, cap);
    const auto m = net.outcome_count();

    std::vector<std::vector<std::size_t>> worse(m);
    std::vector<std::size_t> indegree(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for_each_worsening_flip(net, net.outcome_at(i), [&](const Outcome &next) {
            auto j = net.index_of(next);
            worse[i].push_back(j);
            ++indegree[j];
        });
    }

    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < m; ++i)
        if (indegree[i] == 0)
            ready.push(i);

    std::vector<RankedOutcome> ranked;
    ranked.reserve(m);
    while (!ready.empty()) {
        auto i = ready.top();
        ready.pop();
        ranked.push_back({net.outcome_at(i), static_cast<Rank>(ranked.size() + 1)});
        for (auto j : worse[i])
            if (--indegree[j] == 0)
                ready.push(j);
    }
    // An acyclic CP-net always induces an acyclic flip graph.
    if (ranked.size() != m)
        throw Error("induced preference graph is cyclic");
    return ranked;
}

OutcomeSlotMap OutcomeSlotMap::grid(std::size_t days, std::size_t slots_per_day) {
    if (days == 0 || slots_per_day == 0)
        throw Error("grid map needs at least one day and one slot per day");
    OutcomeSlotMap map;
    map.grid_ = true;
    map.days_ = days;
    map.slots_per_day_ = slots_per_day;
    return map;
}

OutcomeSlotMap OutcomeSlotMap::explicit_map(std::vector<std::pair<Outcome, SlotIndex>> entries) {
    OutcomeSlotMap map;
    map.grid_ = false;
    std::set<SlotIndex> used;
    for (auto &[o, slot] : entries) {
        if (!used.insert(slot).second)
            throw Error("outcome map sends two outcomes to slot " + std::to_string(slot));
        if (!map.explicit_.emplace(std::move(o), slot).second)
            throw Error("outcome map lists an outcome twice");
    }
    return map;
}

std::optional<SlotIndex> OutcomeSlotMap::slot_for(const CPNet &net, const Outcome &o) const {
    if (!grid_) {
        auto it = explicit_.find(o);
        return it == explicit_.end() ? std::nullopt : std::optional<SlotIndex>(it->second);
    }
    std::size_t day = 0;
    std::size_t slot_of_day = 0;
    if (net.size() == 1) {
        slot_of_day = o.values.at(0);
    } else if (net.size() == 2) {
        day = o.values.at(0);
        slot_of_day = o.values.at(1);
    } else {
        throw Error("grid map needs a net with one (slot) or two (day, slot) attributes");
    }
    if (day >= days_ || slot_of_day >= slots_per_day_)
        return std::nullopt;
    return day * slots_per_day_ + slot_of_day;
}

ProviderTemporalPreferences to_ptp(const CPNet &net, const OutcomeSlotMap &map, ProviderId pid,
                                   std::size_t cap) {
    std::vector<SlotRank> prefs;
    std::set<SlotIndex> used;
    for (const auto &r : rank_outcomes(net, cap)) {
        auto slot = map.slot_for(net, r.outcome);
        if (!slot)
            continue;
        if (!used.insert(*slot).second)
            throw Error("provider " + std::to_string(pid) + ": two outcomes map to slot " +
                        std::to_string(*slot));
        prefs.push_back({*slot, static_cast<Rank>(prefs.size() + 1)});
    }
    return ProviderTemporalPreferences(pid, std::move(prefs));
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w)
        out.push_back(w);
    return out;
}

struct RawRow {
    std::size_t line;
    std::string attr;
    std::vector<std::pair<std::string, std::string>> condition;
    std::vector<std::string> order;
};

struct RawAttr {
    std::size_t line;
    std::string name;
    std::vector<std::string> domain;
    std::vector<std::string> parents;
};

struct RawBlock {
    std::size_t line = 0;
    ProviderId pid = 0;
    std::vector<RawAttr> attrs;
    std::vector<RawRow> rows;
    std::size_t map_line = 0;
    std::string map_spec;
};

[[noreturn]] void fail(std::size_t line, const std::string &msg) {
    throw Error("cpnet line " + std::to_string(line) + ": " + msg);
}

ProviderNet build(const RawBlock &b) {
    CPNet net;
    for (const auto &a : b.attrs) {
        try {
            net.add_attribute(a.name, a.domain);
        } catch (const Error &e) {
            fail(a.line, e.what());
        }
    }
    for (std::size_t i = 0; i < b.attrs.size(); ++i) {
        std::vector<std::size_t> parents;
        for (const auto &p : b.attrs[i].parents) {
            auto idx = net.find(p);
            if (!idx)
                fail(b.attrs[i].line, "unknown parent '" + p + "'");
            parents.push_back(*idx);
        }
        net.set_parents(i, std::move(parents));
    }
    std::set<std::pair<std::size_t, std::vector<ValueIndex>>> seen_rows;
    for (const auto &r : b.rows) {
        auto attr = net.find(r.attr);
        if (!attr)
            fail(r.line, "CPT for unknown attribute '" + r.attr + "'");
        const auto &parents = net.attribute(*attr).parents;
        if (r.condition.size() != parents.size())
            fail(r.line, "CPT row for '" + r.attr + "' must assign exactly its parents");
        std::vector<ValueIndex> key(parents.size());
        std::vector<bool> assigned(parents.size(), false);
        for (const auto &[pname, pval] : r.condition) {
            auto pidx = net.find(pname);
            auto pos = pidx ? std::find(parents.begin(), parents.end(), *pidx) : parents.end();
            if (pos == parents.end())
                fail(r.line, "'" + pname + "' is not a parent of '" + r.attr + "'");
            auto k = static_cast<std::size_t>(pos - parents.begin());
            if (assigned[k])
                fail(r.line, "parent '" + pname + "' assigned twice");
            auto v = net.find_value(*pidx, pval);
            if (!v)
                fail(r.line, "unknown value '" + pval + "' for '" + pname + "'");
            key[k] = *v;
            assigned[k] = true;
        }
        std::vector<ValueIndex> order;
        for (const auto &label : r.order) {
            auto v = net.find_value(*attr, label);
            if (!v)
                fail(r.line, "unknown value '" + label + "' for '" + r.attr + "'");
            order.push_back(*v);
        }
        if (!seen_rows.emplace(*attr, key).second)
            fail(r.line, "duplicate CPT row for '" + r.attr + "'");
        net.set_row(*attr, std::move(key), std::move(order));
    }

    OutcomeSlotMap map;
    auto spec = words(b.map_spec);
    if (spec.empty()) {
        if (net.size() == 0 || net.size() > 2)
            fail(b.line, "provider " + std::to_string(b.pid) + " needs an explicit map line");
        map = net.size() == 1 ? OutcomeSlotMap::grid(1, net.attribute(0).domain.size())
                              : OutcomeSlotMap::grid(net.attribute(0).domain.size(),
                                                     net.attribute(1).domain.size());
    } else if (spec[0] == "grid") {
        if (spec.size() != 2)
            fail(b.map_line, "expected 'map grid <days>x<slots_per_day>'");
        auto x = spec[1].find('x');
        if (x == std::string::npos)
            fail(b.map_line, "expected 'map grid <days>x<slots_per_day>'");
        try {
            auto days = csv::to_uint(spec[1].substr(0, x), "grid days");
            auto per_day = csv::to_uint(spec[1].substr(x + 1), "grid slots per day");
            map = OutcomeSlotMap::grid(days, per_day);
        } catch (const Error &e) {
            fail(b.map_line, e.what());
        }
    } else if (spec[0] == "explicit") {
        std::vector<std::pair<Outcome, SlotIndex>> entries;
        for (std::size_t i = 1; i < spec.size(); ++i) {
            auto eq = spec[i].find('=');
            if (eq == std::string::npos)
                fail(b.map_line, "expected <outcome>=<slot_index>, got '" + spec[i] + "'");
            auto o = net.parse_outcome(spec[i].substr(0, eq));
            if (!o)
                fail(b.map_line, "unknown outcome '" + spec[i].substr(0, eq) + "'");
            try {
                entries.emplace_back(*o, csv::to_uint(spec[i].substr(eq + 1), "slot index"));
            } catch (const Error &e) {
                fail(b.map_line, e.what());
            }
        }
        try {
            map = OutcomeSlotMap::explicit_map(std::move(entries));
        } catch (const Error &e) {
            fail(b.map_line, e.what());
        }
    } else {
        fail(b.map_line, "unknown map kind '" + spec[0] + "'");
    }
    if (auto report = validate(net); !report.ok())
        fail(b.line, "provider " + std::to_string(b.pid) + ": " + report.summary());
    return ProviderNet{b.pid, std::move(net), std::move(map)};
}

} // namespace

std::vector<ProviderNet> parse_cpnets(std::string_view text) {
    std::vector<RawBlock> blocks;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        auto space = line.find_first_of(" \t");
        auto directive = line.substr(0, space);
        auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));

        if (directive == "provider") {
            RawBlock b;
            b.line = line_no;
            try {
                b.pid = csv::to_uint(rest, "provider id");
            } catch (const Error &e) {
                fail(line_no, e.what());
            }
            for (const auto &other : blocks)
                if (other.pid == b.pid)
                    fail(line_no, "provider " + std::to_string(b.pid) + " declared twice");
            blocks.push_back(std::move(b));
            continue;
        }
        if (blocks.empty())
            fail(line_no, "'" + std::string(directive) + "' before any 'provider' line");
        auto &block = blocks.back();

        if (directive == "attr") {
            auto colon = rest.find(':');
            if (colon == std::string_view::npos)
                fail(line_no, "expected 'attr <Name>: <values>'");
            RawAttr a{line_no, std::string(trim(rest.substr(0, colon))), {}, {}};
            auto body = trim(rest.substr(colon + 1));
            std::string_view values = body;
            auto kw = body.find(" parents ");
            if (kw == std::string_view::npos && body.size() >= 7 && body.ends_with("parents"))
                fail(line_no, "'parents' needs at least one attribute");
            if (kw != std::string_view::npos) {
                values = trim(body.substr(0, kw));
                for (auto &p : csv::split(trim(body.substr(kw + 9))))
                    a.parents.push_back(std::move(p));
            }
            a.domain = csv::split(values);
            if (a.name.empty() || a.name.find_first_of(" \t") != std::string::npos)
                fail(line_no, "bad attribute name");
            block.attrs.push_back(std::move(a));
        } else if (directive == "cpt") {
            auto colon = rest.find(':');
            if (colon == std::string_view::npos)
                fail(line_no, "expected 'cpt <Name> [| <cond>]: <order>'");
            auto head = trim(rest.substr(0, colon));
            RawRow r{line_no, {}, {}, {}};
            auto bar = head.find('|');
            r.attr = std::string(trim(head.substr(0, bar)));
            if (bar != std::string_view::npos) {
                for (const auto &term : csv::split(trim(head.substr(bar + 1)))) {
                    auto eq = term.find('=');
                    if (eq == std::string::npos)
                        fail(line_no, "expected <Parent>=<value>, got '" + term + "'");
                    r.condition.emplace_back(std::string(trim(term.substr(0, eq))),
                                             std::string(trim(std::string_view(term).substr(eq + 1))));
                }
            }
            r.order = csv::split(trim(rest.substr(colon + 1)), '>');
            for (const auto &v : r.order)
                if (v.empty())
                    fail(line_no, "empty value in preference order");
            block.rows.push_back(std::move(r));
        } else if (directive == "map") {
            if (block.map_line != 0)
                fail(line_no, "second map line for provider " + std::to_string(block.pid));
            block.map_line = line_no;
            block.map_spec = std::string(rest);
            if (block.map_spec.empty())
                fail(line_no, "empty map line");
        } else {
            fail(line_no, "unknown directive '" + std::string(directive) + "'");
        }
    }

    std::vector<ProviderNet> nets;
    nets.reserve(blocks.size());
    for (const auto &b : blocks)
        nets.push_back(build(b));
    return nets;
}

std::vector<ProviderNet> read_cpnets(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cpnets(buf.str());
}

} // namespace esqoe::cpnet

#include "chaos/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <string>

#include "chaos/errors.hpp"

namespace chaos {

IndexSet full_set(int d) {
    IndexSet out(d);
    for (int k = 0; k < d; ++k) out[k] = k;
    return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IndexSet set_union(const Partition& blocks) {
    IndexSet out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end());
    return out;
}

Partition canonical(Partition p) {
    for (auto& b : p) std::sort(b.begin(), b.end());
    std::sort(p.begin(), p.end());
    return p;
}

std::vector<Partition> enumerate_partitions(const IndexSet& ground) {
    std::vector<Partition> out;
    const std::size_t k = ground.size();
    if (k == 0) {
        out.emplace_back();
        return out;
    }
    // Restricted growth strings: label[0] = 0, label[i] <= 1 + max(label[0..i-1]).
    std::vector<int> label(k, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int used) {
        if (pos == k) {
            Partition p(used);
            for (std::size_t i = 0; i < k; ++i) p[label[i]].push_back(ground[i]);
            out.push_back(canonical(std::move(p)));
            return;
        }
        for (int b = 0; b <= used; ++b) {
            label[pos] = b;
            rec(pos + 1, std::max(used, b + 1));
        }
    };
    label[0] = 0;
    rec(1, 1);
    return out;
}

std::vector<PartitionPair> enumerate_partition_pairs(int d) {
    if (d < 1) throw ValidationError("d >= 1 required");
    std::vector<PartitionPair> out;
    for (const auto& pi : enumerate_partitions(full_set(d))) {
        const std::size_t blocks = pi.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << blocks); ++mask) {
            PartitionPair pair;
            for (std::size_t b = 0; b < blocks; ++b) {
                ((mask >> b) & 1U ? pair.deterministic : pair.gaussian).push_back(pi[b]);
            }
            out.push_back(std::move(pair));
        }
    }
    return out;
}

std::vector<SubsetPartition> enumerate_subset_partitions(int d) {
    if (d < 1) throw ValidationError("d >= 1 required");
    std::vector<SubsetPartition> out;
    for (unsigned mask = 0; mask < (1U << d); ++mask) {
        IndexSet subset;
        for (int k = 0; k < d; ++k) {
            if ((mask >> k) & 1U) subset.push_back(k);
        }
        for (auto& p : enumerate_partitions(subset)) out.push_back({subset, std::move(p)});
    }
    return out;
}

std::vector<MSequence> enumerate_M(int d) {
    if (d < 1) throw ValidationError("d >= 1 required");
    std::set<MSequence> found;
    IndexSet outer;
    std::vector<IndexSet> slots;

    // Each element joins one or two of {J, existing I-slots, fresh I-slots};
    // fresh slots are numbered in order of first use.
    std::function<void(int)> rec = [&](int e) {
        if (e == d) {
            MSequence seq{outer, slots};
            std::sort(seq.sets.begin(), seq.sets.end());
            found.insert(std::move(seq));
            return;
        }
        const int k = static_cast<int>(slots.size());
        const int J = -1;
        // Slot ids: -1 = J, 0..k-1 existing, k and k+1 fresh.
        std::vector<std::vector<int>> options;
        options.push_back({J});
        for (int s = 0; s <= k; ++s) options.push_back({s});
        for (int s = 0; s <= k; ++s) options.push_back({J, s});
        for (int s = 0; s <= k; ++s) {
            for (int t = s + 1; t <= k + 1; ++t) {
                if (t == k + 1 && s != k) continue;  // second fresh slot only after the first
                options.push_back({s, t});
            }
        }
        for (const auto& opt : options) {
            const auto saved_outer = outer;
            const auto saved_slots = slots;
            for (int s : opt) {
                if (s == J) {
                    outer.push_back(e);
                } else {
                    if (s >= static_cast<int>(slots.size())) slots.resize(s + 1);
                    slots[s].push_back(e);
                }
            }
            rec(e + 1);
            outer = saved_outer;
            slots = saved_slots;
        }
    };
    rec(0);
    return {found.begin(), found.end()};
}

bool in_class_C(const MSequence& seq) {
    for (const auto& set : seq.sets) {
        for (int e : set) {
            if (std::binary_search(seq.outer.begin(), seq.outer.end(), e)) return false;
        }
    }
    for (std::size_t l = 0; l < seq.sets.size(); ++l) {
        for (std::size_t r = l + 1; r < seq.sets.size(); ++r) {
            const auto& a = seq.sets[l];
            const auto& b = seq.sets[r];
            IndexSet common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
            if (!common.empty() && !(a.size() == 1 && b.size() == 1 && a == b)) return false;
        }
    }
    return true;
}

std::vector<MSequence> filter_class_C(const std::vector<MSequence>& seqs) {
    std::vector<MSequence> out;
    std::copy_if(seqs.begin(), seqs.end(), std::back_inserter(out), in_class_C);
    return out;
}

void validate_pair(const PartitionPair& pair, int d) {
    std::vector<int> seen(d, 0);
    auto visit = [&](const Partition& p) {
        for (const auto& block : p) {
            if (block.empty()) throw ValidationError("partition blocks must be nonempty");
            for (int e : block) {
                if (e < 0 || e >= d) {
                    throw ValidationError("element " + std::to_string(e + 1) + " outside [" + std::to_string(d) + "]");
                }
                ++seen[e];
            }
        }
    };
    visit(pair.deterministic);
    visit(pair.gaussian);
    for (int e = 0; e < d; ++e) {
        if (seen[e] != 1) {
            throw ValidationError("element " + std::to_string(e + 1) +
                                  (seen[e] == 0 ? " is not covered" : " appears in more than one block") +
                                  " by the pair P'|P");
        }
    }
}

void validate_msequence(const MSequence& seq, int d) {
    std::vector<int> seen(d, 0);
    auto visit = [&](const IndexSet& s) {
        for (int e : s) {
            if (e < 0 || e >= d) throw ValidationError("M-sequence element outside [d]");
            ++seen[e];
        }
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
            throw ValidationError("M-sequence sets must not repeat elements");
        }
    };
    visit(seq.outer);
    for (const auto& s : seq.sets) {
        if (s.empty()) throw ValidationError("M-sequence sets I_r must be nonempty");
        visit(s);
    }
    for (int e = 0; e < d; ++e) {
        if (seen[e] == 0) throw ValidationError("M-sequence does not cover element " + std::to_string(e + 1));
        if (seen[e] > 2) throw ValidationError("element " + std::to_string(e + 1) + " lies in more than two sets");
    }
}

PartitionPair pair_for_triple(int d, const SubsetPartition& jp) {
    PartitionPair pair;
    pair.deterministic = jp.partition;
    for (int e : set_difference(full_set(d), jp.subset)) pair.gaussian.push_back({e});
    return pair;
}

long long bell_number(int k) {
    // Bell triangle.
    std::vector<long long> row{1};
    for (int i = 0; i < k; ++i) {
        std::vector<long long> next{row.back()};
        for (long long v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

namespace {

std::string format_set(const IndexSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i] + 1);
    }
    return out + "}";
}

std::string strip(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

}  // namespace

std::string format_partition(const Partition& p) {
    if (p.empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out += ',';
        out += format_set(p[i]);
    }
    return out;
}

std::string format_pair(const PartitionPair& pair) {
    return format_partition(pair.gaussian) + "|" + format_partition(pair.deterministic);
}

std::string format_msequence(const MSequence& seq) {
    std::string out = format_set(seq.outer) + ";";
    for (std::size_t i = 0; i < seq.sets.size(); ++i) {
        if (i) out += ',';
        out += format_set(seq.sets[i]);
    }
    return out;
}

Partition parse_partition(std::string_view text) {
    const std::string s = strip(text);
    if (s.empty() || s == "{}" || s == "∅") return {};
    Partition out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (s[pos] != '{') throw ValidationError("expected '{' in partition string \"" + std::string(text) + "\"");
        const std::size_t close = s.find('}', pos);
        if (close == std::string::npos) throw ValidationError("unterminated block in \"" + std::string(text) + "\"");
        IndexSet block;
        std::size_t i = pos + 1;
        while (i < close) {
            std::size_t end = i;
            while (end < close && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
            if (end == i) throw ValidationError("expected an element number in \"" + std::string(text) + "\"");
            const int e = std::stoi(s.substr(i, end - i));
            if (e < 1) throw ValidationError("elements are 1-based");
            block.push_back(e - 1);
            i = end;
            if (i < close) {
                if (s[i] != ',') throw ValidationError("expected ',' in \"" + std::string(text) + "\"");
                ++i;
                if (i == close) throw ValidationError("dangling ',' in \"" + std::string(text) + "\"");
            }
        }
        if (block.empty()) throw ValidationError("empty block in \"" + std::string(text) + "\"");
        out.push_back(std::move(block));
        pos = close + 1;
        if (pos < s.size()) {
            if (s[pos] != ',') throw ValidationError("expected ',' between blocks in \"" + std::string(text) + "\"");
            ++pos;
        }
    }
    IndexSet all;
    for (const auto& b : out) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw ValidationError("blocks overlap in \"" + std::string(text) + "\"");
    }
    return canonical(std::move(out));
}

PartitionPair parse_pair(std::string_view text) {
    const auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos) {
        throw ValidationError("pair string must have the form \"P'|P\", got \"" + std::string(text) + "\"");
    }
    PartitionPair pair;
    pair.gaussian = parse_partition(text.substr(0, bar));
    pair.deterministic = parse_partition(text.substr(bar + 1));
    return pair;
}

}  // namespace chaos

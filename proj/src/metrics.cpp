#include "parcelfuse/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace parcelfuse {

long long ratio_hundredths(unsigned long long num, unsigned long long den) {
    if (den == 0) throw std::invalid_argument("ratio_hundredths: zero denominator");
    // floor((100*num + den/2) / den) without double rounding: half rounds up.
    return static_cast<long long>((200 * num + den) / (2 * den));
}

std::string format_hundredths(long long hundredths) {
    std::string out = std::to_string(hundredths / 100);
    const long long frac = hundredths % 100;
    out.push_back('.');
    out.push_back(static_cast<char>('0' + frac / 10));
    out.push_back(static_cast<char>('0' + frac % 10));
    return out;
}

std::string format_ratio(std::size_t num, std::size_t den) {
    if (den == 0) return "";
    return format_hundredths(ratio_hundredths(num, den));
}

std::string format_percent(std::size_t num, std::size_t den) {
    if (den == 0) return "";
    return format_hundredths(ratio_hundredths(100 * num, den)) + "%";
}

std::set<std::string> parcels_with_class(const LabelTable& table, LbcsCode code,
                                         const LbcsTaxonomy& taxonomy) {
    std::set<LbcsCode> targets{code};
    for (const LbcsCode d : taxonomy.descendants(code)) targets.insert(d);

    std::set<std::string> out;
    for (const auto& [parcel, codes] : table.labels)
        for (const LbcsCode c : codes)
            if (targets.count(c)) {
                out.insert(parcel);
                break;
            }
    return out;
}

AgreementCell pairwise_agreement(const LabelTable& a, const LabelTable& b, LbcsCode code,
                                 const LbcsTaxonomy& taxonomy) {
    const std::set<std::string> set_a = parcels_with_class(a, code, taxonomy);
    const std::set<std::string> set_b = parcels_with_class(b, code, taxonomy);

    AgreementCell cell;
    cell.code = code;
    cell.source_a = a.source.name;
    cell.source_b = b.source.name;
    cell.count_a = set_a.size();
    cell.count_b = set_b.size();
    std::size_t inter = 0;
    for (const auto& id : set_a)
        if (set_b.count(id)) ++inter;
    cell.intersection = inter;
    cell.unions = set_a.size() + set_b.size() - inter;
    return cell;
}

std::size_t kway_intersection(const std::vector<const LabelTable*>& tables, LbcsCode code,
                              const LbcsTaxonomy& taxonomy) {
    if (tables.size() < 2)
        throw std::invalid_argument("kway_intersection: need at least two tables");
    std::set<std::string> acc = parcels_with_class(*tables[0], code, taxonomy);
    for (std::size_t i = 1; i < tables.size() && !acc.empty(); ++i) {
        const std::set<std::string> next = parcels_with_class(*tables[i], code, taxonomy);
        std::set<std::string> kept;
        for (const auto& id : acc)
            if (next.count(id)) kept.insert(id);
        acc = std::move(kept);
    }
    return acc.size();
}

std::vector<EvaluationRow> evaluate(const LabelTable& table,
                                    const std::vector<ParcelFootprint>& footprints,
                                    const AuthoritativeCrosswalk& crosswalk,
                                    const LbcsTaxonomy& taxonomy) {
    std::unordered_map<std::string, const std::string*> truth;
    truth.reserve(footprints.size());
    std::map<std::string, EvaluationRow> rows;
    for (const auto& name : crosswalk.class_names()) rows[name].class_name = name;

    for (const auto& fp : footprints) {
        if (!fp.authoritative_class) continue;
        truth.emplace(fp.parcel_id, &*fp.authoritative_class);
        const auto it = rows.find(*fp.authoritative_class);
        if (it != rows.end()) ++it->second.truth_count;
    }

    auto map_code = [&](LbcsCode code) -> std::optional<std::string> {
        if (auto direct = crosswalk.to_authoritative(code)) return direct;
        if (taxonomy.level(code) == 3)
            if (const auto parent = taxonomy.parent(code))
                return crosswalk.to_authoritative(*parent);
        return std::nullopt;
    };

    for (const auto& [parcel, codes] : table.labels) {
        std::set<std::string> mapped;
        for (const LbcsCode code : codes)
            if (auto name = map_code(code)) mapped.insert(std::move(*name));
        if (mapped.empty()) continue;

        const auto truth_it = truth.find(parcel);
        for (const auto& name : mapped) {
            auto& row = rows.at(name);
            ++row.labeled;
            if (truth_it != truth.end() && *truth_it->second == name) ++row.correct;
        }
    }

    std::vector<EvaluationRow> out;
    out.reserve(rows.size());
    for (auto& [name, row] : rows) out.push_back(std::move(row));
    return out;
}

}  // namespace parcelfuse
